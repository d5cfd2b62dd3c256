use proptest::prelude::*;
use qmf_core::field::{make_field, Fe, FieldSpec};
use qmf_core::linalg::{rank, rank_kernel, Matrix};
use qmf_core::mf::{restrict_to_section, section_ring};
use qmf_core::poly::binomial;
use qmf_core::polymat::PolyMatrix;
use qmf_core::{Rng, SparsePoly, WeightedRing};
use std::sync::Arc;

/// Plain Gauss elimination on `u64` residues.
fn naive_rank(p: u64, mut a: Vec<Vec<u64>>) -> usize {
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, piv);
        let inv = (0..p).find(|&x| x * a[r][c] % p == 1).unwrap();
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let f = a[i][c] * inv % p;
                for j in 0..cols {
                    a[i][j] = (a[i][j] + (p - f) * a[r][j]) % p;
                }
            }
        }
        r += 1;
    }
    r
}

fn low_rank(f: &FieldSpec, seed: u64, rows: usize, k: usize, cols: usize) -> Matrix {
    let mut rng = Rng::new(seed);
    let a = Matrix::from_rows(&rng.matrix(f, rows, k));
    let b = Matrix::from_rows(&rng.matrix(f, k, cols));
    a.mul(f, &b)
}

fn residues(m: &Matrix) -> Vec<Vec<u64>> {
    m.to_rows().iter().map(|r| r.iter().map(|e| e.re as u64).collect()).collect()
}

#[test]
fn splitmix64_reference_vector() {
    let expected: [u64; 10] = [
        0xe220a8397b1dcdaf,
        0x6e789e6aa1b965f4,
        0x06c45d188009454f,
        0xf88bb8a8724c81ec,
        0x1b39896a51a8749b,
        0x53cb9f0c747ea2ea,
        0x2c829abe1f4532e1,
        0xc584133ac916ab3c,
        0x3ee5789041c98ac3,
        0xf3b8488c368cb0a6,
    ];
    let mut rng = Rng::new(0);
    for e in expected {
        assert_eq!(rng.next_u64(), e);
    }
}

#[test]
fn rank_matches_naive_elimination_on_100_seeds() {
    let f = make_field(313).unwrap();
    for seed in 0..100u64 {
        let k = 1 + (seed as usize % 20);
        let m = if seed % 3 == 0 { Matrix::from_rows(&Rng::new(seed).matrix(&f, 20, 20)) } else { low_rank(&f, seed, 20, k, 20) };
        let expected = naive_rank(313, residues(&m));
        let (r, kernel) = rank_kernel(&f, &m);
        assert_eq!(r, expected, "seed {seed}");
        assert_eq!(rank(&f, &m), expected, "seed {seed}");
        assert_eq!(r + kernel.len(), 20);
        for v in &kernel {
            assert!(m.mul_vec(&f, v).iter().all(|x| x.is_zero()));
        }
    }
}

#[test]
fn blocked_rank_matches_naive_elimination_across_panels() {
    let f = make_field(313).unwrap();
    for (seed, rows, k, cols) in [(1, 70, 65, 70), (2, 150, 90, 170), (3, 200, 129, 180), (4, 260, 200, 300), (5, 90, 64, 90)] {
        let m = low_rank(&f, seed, rows, k, cols);
        assert_eq!(rank(&f, &m), naive_rank(313, residues(&m)), "{rows}×{cols} of rank {k}");
    }
}

#[test]
fn quadratic_extension_rank_agrees_with_kernel() {
    let f = make_field(331).unwrap();
    for seed in 0..10 {
        let m = low_rank(&f, seed, 12, 7, 15);
        let (r, kernel) = rank_kernel(&f, &m);
        assert_eq!(r, 7);
        assert_eq!(rank(&f, &m), 7);
        for v in &kernel {
            assert!(m.mul_vec(&f, v).iter().all(|x| x.is_zero()));
        }
    }
}

#[test]
fn weighted_basis_sizes_match_generating_function() {
    let f = make_field(313).unwrap();
    let r = WeightedRing::double_cover(f);
    for d in 0..=10i64 {
        let expected: u64 = (0..=d / 2).map(|j| binomial(d - 2 * j + 5, 5)).sum();
        assert_eq!(r.monomial_basis(d).len() as u64, expected, "d={d}");
    }
}

fn random_poly(ring: &Arc<WeightedRing>, rng: &mut Rng, degree: i64, terms: usize) -> SparsePoly {
    let f = *ring.field();
    let basis = ring.monomial_basis(degree);
    let picks: Vec<_> = (0..terms).map(|_| (basis[(rng.next_u64() % basis.len() as u64) as usize].clone(), rng.next_fe(&f))).collect();
    SparsePoly::from_terms(ring, picks)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn substitute_linear_is_multiplicative(seed in any::<u64>()) {
        let f = make_field(313).unwrap();
        let src = WeightedRing::standard(f, "y", 8);
        let dst = WeightedRing::standard(f, "z", 6);
        let mut rng = Rng::new(seed);
        let a = random_poly(&src, &mut rng, 2, 6);
        let b = random_poly(&src, &mut rng, 3, 6);
        let m = rng.matrix(&f, 8, 6);
        let lhs = (&a * &b).substitute_linear(&m, &dst).unwrap();
        let rhs = &a.substitute_linear(&m, &dst).unwrap() * &b.substitute_linear(&m, &dst).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn restriction_commutes_with_products(seed in any::<u64>()) {
        let f = make_field(313).unwrap();
        let src = WeightedRing::standard(f, "y", 7);
        let z = section_ring(f);
        let mut rng = Rng::new(seed);
        let a = PolyMatrix::from_fn(&src, 3, 4, |_, _| random_poly(&src, &mut rng, 1, 3));
        let b = PolyMatrix::from_fn(&src, 4, 2, |_, _| random_poly(&src, &mut rng, 2, 3));
        let m = rng.matrix(&f, 7, 6);
        let (ab, _) = restrict_to_section(&a.mul(&b), &m, &z).unwrap();
        let (ra, _) = restrict_to_section(&a, &m, &z).unwrap();
        let (rb, _) = restrict_to_section(&b, &m, &z).unwrap();
        prop_assert_eq!(ab, ra.mul(&rb));
    }

    #[test]
    fn evaluation_is_a_ring_map(seed in any::<u64>()) {
        let f = make_field(313).unwrap();
        let r = WeightedRing::double_cover(f);
        let mut rng = Rng::new(seed);
        let a = random_poly(&r, &mut rng, 2, 5);
        let b = random_poly(&r, &mut rng, 4, 5);
        let pt: Vec<Fe> = (0..7).map(|_| rng.next_fe(&f)).collect();
        prop_assert_eq!((&a * &b).eval(&pt), f.mul(a.eval(&pt), b.eval(&pt)));
        prop_assert_eq!((&a + &b).eval(&pt), f.add(a.eval(&pt), b.eval(&pt)));
    }
}
