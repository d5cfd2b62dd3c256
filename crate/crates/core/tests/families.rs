use qmf_core::families::{Family, FamilyInstance};
use qmf_core::field::{make_field, Fe, FieldSpec};
use qmf_core::homalg::{ext_sheaf, hom_sheaf, module_piece, NormalFormComplex, QuotientComplex};
use qmf_core::linalg::{rank, Matrix, SparseCols};
use qmf_core::mf::{double_cover_mf, periodic_resolution};
use qmf_core::Rng;

fn f313() -> FieldSpec {
    make_field(313).unwrap()
}

fn numeric_det(f: &FieldSpec, m: &Matrix) -> Fe {
    let n = m.rows();
    let mut a = m.to_rows();
    let mut det = f.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else { return Fe::ZERO };
        if p != c {
            a.swap(p, c);
            det = f.neg(det);
        }
        det = f.mul(det, a[c][c]);
        let inv = f.inv(a[c][c]);
        for r in c + 1..n {
            let k = f.mul(a[r][c], inv);
            for j in c..n {
                a[r][j] = f.sub(a[r][j], f.mul(k, a[c][j]));
            }
        }
    }
    det
}

/// Whether `B·A = 0` for sparse column matrices.
fn composite_vanishes(b: &SparseCols, a: &SparseCols, f: &FieldSpec) -> bool {
    a.cols.iter().all(|col| {
        let mut out = std::collections::BTreeMap::new();
        for &(k, v) in col {
            for &(r, w) in &b.cols[k as usize] {
                let e = out.entry(r).or_insert(Fe::ZERO);
                *e = f.add(*e, f.mul(v, w));
            }
        }
        out.values().all(|x| x.is_zero())
    })
}

#[test]
fn sl6_factorization_determinants_and_twists() {
    let f = f313();
    let inst = FamilyInstance::build(Family::Sl6X5, f, 11).unwrap();
    let det = inst.s.det().unwrap();
    assert_eq!(det.homogeneous_degree(), Some(12));
    let mf = double_cover_mf(&inst.s).unwrap();
    assert!(mf.holds());
    assert_eq!(mf.deg_b() + mf.deg_c(), 4);
    let mut rng = Rng::new(3);
    for _ in 0..20 {
        let pt: Vec<Fe> = (0..7).map(|_| rng.next_fe(&f)).collect();
        let lhs = f.mul(numeric_det(&f, &mf.b.eval(&pt)), numeric_det(&f, &mf.c.eval(&pt)));
        assert_eq!(lhs, f.pow(mf.w.eval(&pt), 6));
    }
    let res = periodic_resolution(&mf, 3).unwrap();
    assert_eq!(res.twists, vec![0, -2, -4, -6]);
    assert!(res.composites_vanish);
}

#[test]
fn cokernel_has_rank_three_on_the_quartic() {
    let f = f313();
    let inst = FamilyInstance::build(Family::Sl6X5, f, 11).unwrap();
    let mut rng = Rng::new(21);
    let mut found = 0;
    while found < 3 {
        let a: Vec<Fe> = (0..6).map(|_| rng.next_fe(&f)).collect();
        let b: Vec<Fe> = (0..6).map(|_| rng.next_fe(&f)).collect();
        for t in 0..313 {
            let pt: Vec<Fe> = a.iter().zip(&b).map(|(&x, &y)| f.add(x, f.mul(f.from_u64(t), y))).collect();
            if inst.q.eval(&pt).is_zero() && pt.iter().any(|x| !x.is_zero()) {
                let s = inst.s.eval(&pt);
                // A general point of the quartic; singular points give a larger kernel.
                if rank(&f, &s) == 3 {
                    found += 1;
                }
                assert!(rank(&f, &s) <= 3);
                break;
            }
        }
    }
}

#[test]
fn degree_zero_piece_is_free() {
    let f = f313();
    let inst = FamilyInstance::build(Family::Sl6X5, f, 11).unwrap();
    let pres = inst.presentation().unwrap();
    assert_eq!(module_piece(&pres, 0).unwrap().dim, 6);
    assert_eq!(module_piece(&pres, -1).unwrap().dim, 0);
}

#[test]
fn normal_form_differentials_square_to_zero() {
    let f = f313();
    for fam in [Family::Sl6X5, Family::Spin12X5] {
        let inst = FamilyInstance::build(fam, f, 5).unwrap();
        let pres = inst.presentation().unwrap();
        let mut cx = NormalFormComplex::new(&pres, &pres, 0).unwrap();
        // Internal degrees 0 through 8.
        for i in 0..3 {
            let d0 = cx.differential(i);
            let d1 = cx.differential(i + 1);
            assert!(composite_vanishes(&d1, &d0, &f), "{} d{}∘d{i}", fam.name(), i + 1);
        }
    }
}

#[test]
fn engines_agree_on_the_sl6_family() {
    let f = f313();
    let inst = FamilyInstance::build(Family::Sl6X5, f, 2).unwrap();
    let pres = inst.presentation().unwrap();
    let mut nf = NormalFormComplex::new(&pres, &pres, 1).unwrap();
    let mut qc = QuotientComplex::new(&pres, &pres, 1).unwrap();
    for i in 0..3 {
        let (a, b) = (nf.ext(i), qc.ext(i));
        assert_eq!(a.dim_ext, b.dim_ext, "Ext^{i}");
        assert_eq!(a.dim_kernel - a.dim_image, a.dim_ext);
    }
}

#[test]
fn sl6_double_fivefold_is_simple_and_rigid() {
    let f = f313();
    for seed in [11, 12, 13] {
        let inst = FamilyInstance::build(Family::Sl6X5, f, seed).unwrap();
        assert_eq!(inst.self_ext(0, seed).unwrap().dim_ext, 1, "seed {seed}");
        assert_eq!(inst.self_ext(1, seed).unwrap().dim_ext, 0, "seed {seed}");
    }
}

#[test]
fn ramification_fourfold_has_21_deformations() {
    let inst = FamilyInstance::build(Family::Sl6Q4, f313(), 11).unwrap();
    let e = inst.self_ext(1, 11).unwrap();
    assert!(e.exact);
    assert_eq!(e.dim_ext, 21);
}

#[test]
fn spin12_potential_is_igusa_up_to_the_even_constant() {
    use qmf_core::invariants::igusa_quartic;
    use qmf_core::mf::section_ring;
    use qmf_core::spinor::{igusa_on_spinors_from, spinor_ring, Parity};
    let f = f313();
    let inst = FamilyInstance::build(Family::Spin12X5, f, 11).unwrap();
    let p = igusa_on_spinors_from(&igusa_quartic(f), &spinor_ring(f, Parity::Even));
    let restricted = p.substitute_linear(&inst.section.matrix, &section_ring(f)).unwrap();
    assert_eq!(inst.q, restricted.scale(f.from_i64(-4)));
}

#[test]
fn special_point_blocks() {
    let f = f313();
    let inst = FamilyInstance::build(Family::Spin12Special, f, 11).unwrap();
    assert_eq!(inst.self_ext(0, 11).unwrap().dim_ext, 2);
    let (e, g) = inst.blocks().unwrap();
    for (a, b) in [(&e, &g), (&g, &e)] {
        assert_eq!(hom_sheaf(a, b, 1).unwrap().dim_ext, 0);
        assert_eq!(ext_sheaf(a, b, 1, 1).unwrap().dim_ext, 0);
    }
    for m in [&e, &g] {
        assert_eq!(hom_sheaf(m, m, 1).unwrap().dim_ext, 1);
    }
}

#[test]
fn literal_lower_block_is_recorded() {
    let f = f313();
    let inst = FamilyInstance::build(Family::Spin12Special, f, 11).unwrap();
    let (e, g) = inst.literal_blocks().unwrap();
    let cross = ext_sheaf(&e, &g, 1, 1).unwrap().dim_ext;
    println!("literal blocks: Hom = {}, Ext¹ = {cross}", hom_sheaf(&e, &g, 1).unwrap().dim_ext);
    assert_eq!(hom_sheaf(&e, &g, 1).unwrap().dim_ext, 0);
}

#[test]
fn generic_spin12_sections_are_simple_and_rigid() {
    let f = f313();
    for seed in [11, 12] {
        let inst = FamilyInstance::build(Family::Spin12X5, f, seed).unwrap();
        let pres = inst.presentation().unwrap();
        let mut cx = NormalFormComplex::new(&pres, &pres, seed).unwrap();
        assert!(cx.is_split());
        assert_eq!(cx.ext(0).dim_ext, 1, "seed {seed}");
        assert_eq!(cx.ext(1).dim_ext, 0, "seed {seed}");
    }
}

#[test]
fn ext_is_semicontinuous_towards_the_special_point() {
    let f = f313();
    let generic = FamilyInstance::build(Family::Spin12Odd, f, 11).unwrap();
    let special = FamilyInstance::build(Family::Spin12Special, f, 11).unwrap();
    for i in 0..2 {
        let g = generic.self_ext(i, 1).unwrap().dim_ext;
        let s = special.self_ext(i, 1).unwrap().dim_ext;
        assert!(g <= s, "Ext^{i}: generic {g}, special {s}");
    }
}
