use qmf_core::dominance::*;
use qmf_core::field::{make_field, Fe};
use qmf_core::invariants::{igusa_quartic, sl6_quartic};
use qmf_core::linalg::{rank, Matrix};
use qmf_core::mf::random_section;
use qmf_core::Rng;

#[test]
fn five_seeded_trials_reach_full_rank() {
    let f = make_field(313).unwrap();
    let p = igusa_quartic(f);
    let reports = dominance_trials(&p, &f, 5, 42).unwrap();
    assert!(reports.iter().all(|r| r.rank <= FULL_RANK));
    assert_eq!(dominance_verdict(&reports), Verdict::Full);
    let first = pullback_span_rank(&p, &random_section(&f, 1, 32), 1).unwrap();
    assert_eq!(first.rank, 126);
}

#[test]
fn rank_one_section_spans_at_most_six() {
    let f = make_field(313).unwrap();
    let p = igusa_quartic(f);
    let mut rng = Rng::new(5);
    let col: Vec<Fe> = (0..32).map(|_| rng.next_fe(&f)).collect();
    let scales: Vec<Fe> = (0..6).map(|_| rng.next_fe(&f)).collect();
    let m: Vec<Vec<Fe>> = col.iter().map(|&c| scales.iter().map(|&s| f.mul(c, s)).collect()).collect();
    assert!(pullback_span_rank(&p, &m, 0).unwrap().rank <= 6);
}

#[test]
fn rank_is_invariant_under_reparametrisation_and_scaling() {
    let f = make_field(313).unwrap();
    let p = igusa_quartic(f);
    let m = random_section(&f, 3, 32);
    let base = pullback_span_rank(&p, &m, 3).unwrap().rank;
    let mut tried = 0;
    let mut seed = 100;
    while tried < 10 {
        seed += 1;
        let g = Rng::new(seed).matrix(&f, 6, 6);
        if rank(&f, &Matrix::from_rows(&g)) < 6 {
            continue;
        }
        let mg = Matrix::from_rows(&m).mul(&f, &Matrix::from_rows(&g)).to_rows();
        assert_eq!(pullback_span_rank(&p, &mg, seed).unwrap().rank, base);
        tried += 1;
    }
    let scaled = p.scale(f.from_u64(17));
    assert_eq!(pullback_span_rank(&scaled, &m, 3).unwrap().rank, base);
}

#[test]
fn matrix_hash_is_deterministic() {
    let f = make_field(313).unwrap();
    let p = igusa_quartic(f);
    let a = pullback_span_rank(&p, &random_section(&f, 9, 32), 9).unwrap();
    let b = pullback_span_rank(&p, &random_section(&f, 9, 32), 9).unwrap();
    assert_eq!(a, b);
    let c = pullback_span_rank(&p, &random_section(&f, 10, 32), 10).unwrap();
    assert_ne!(a.matrix_hash, c.matrix_hash);
}

#[test]
fn sl6_quartic_negative_control_is_recorded() {
    let f = make_field(313).unwrap();
    let reports = dominance_trials(&sl6_quartic(f), &f, 2, 1).unwrap();
    for r in &reports {
        assert!(r.rank <= FULL_RANK);
        println!("sl6 quartic, seed {}: pullback span rank {}", r.seed, r.rank);
    }
}
