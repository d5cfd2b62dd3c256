//! The quartic invariants of the half-spin representation of `Spin12` and of
//! `Λ³C⁶` under `SL6`, together with Pfaffians.
//!
//! # Coordinates
//!
//! The 32 Igusa coordinates are flattened as
//! `(x0, x12, x13, …, x56, y12, …, y56, y0)` with pairs in lexicographic
//! order. The 20 coordinates of `Λ³C⁶` are `y1 … y20`, where `yk` is the
//! coefficient of `u_a∧u_b∧u_c` for the `k`-th triple `a<b<c` in
//! lexicographic order (`y1 ↔ 123`, `y2 ↔ 124`, …, `y20 ↔ 456`).

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::{SparsePoly, WeightedRing};
use crate::polymat::PolyMatrix;

/// The 15 pairs `i<j` of `0..6` in lexicographic order.
pub fn pairs6() -> Vec<(usize, usize)> {
    let mut v = Vec::with_capacity(15);
    for i in 0..6 {
        for j in i + 1..6 {
            v.push((i, j));
        }
    }
    v
}

/// The 20 triples `a<b<c` of `0..6` in lexicographic order.
pub fn triples6() -> Vec<[usize; 3]> {
    let mut v = Vec::with_capacity(20);
    for a in 0..6 {
        for b in a + 1..6 {
            for c in b + 1..6 {
                v.push([a, b, c]);
            }
        }
    }
    v
}

/// Position of the pair `(i, j)`, `i < j`, in [`pairs6`].
pub fn pair_index(i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < 6);
    pairs6().iter().position(|&q| q == (i, j)).expect("pair in range")
}

/// Flattened position of each Igusa coordinate.
pub mod igusa_index {
    pub const X0: usize = 0;
    pub const Y0: usize = 31;

    pub fn x(pair: usize) -> usize {
        1 + pair
    }

    pub fn y(pair: usize) -> usize {
        16 + pair
    }
}

pub fn igusa_ring(field: FieldSpec) -> Arc<WeightedRing> {
    let mut names: Vec<String> = Vec::with_capacity(32);
    names.push("x0".into());
    for (i, j) in pairs6() {
        names.push(format!("x{}{}", i + 1, j + 1));
    }
    for (i, j) in pairs6() {
        names.push(format!("y{}{}", i + 1, j + 1));
    }
    names.push("y0".into());
    WeightedRing::new(field, names, alloc::vec![1; 32]).expect("valid ring")
}

pub fn lambda3_ring(field: FieldSpec) -> Arc<WeightedRing> {
    let names = (1..=20).map(|k| format!("y{k}")).collect();
    WeightedRing::new(field, names, alloc::vec![1; 20]).expect("valid ring")
}

fn is_alternating(m: &PolyMatrix) -> bool {
    (0..m.rows()).all(|i| {
        m.get(i, i).is_zero() && (0..i).all(|j| *m.get(i, j) == -m.get(j, i))
    })
}

/// Pfaffian of an alternating matrix, normalised so that the block-diagonal
/// sum of `[[0,1],[-1,0]]` has Pfaffian 1.
pub fn pfaffian(m: &PolyMatrix) -> Result<SparsePoly> {
    if m.rows() != m.cols() {
        return Err(Error::DimensionMismatch { expected: m.rows(), found: m.cols() });
    }
    if m.rows() % 2 == 1 {
        return Err(Error::OddSize);
    }
    if !is_alternating(m) {
        return Err(Error::NotAlternating);
    }
    let idx: Vec<usize> = (0..m.rows()).collect();
    Ok(pf_rec(m, &idx))
}

fn pf_rec(m: &PolyMatrix, idx: &[usize]) -> SparsePoly {
    if idx.is_empty() {
        return SparsePoly::one(m.ring());
    }
    let f = *m.ring().field();
    let mut acc = SparsePoly::zero(m.ring());
    for k in 1..idx.len() {
        let e = m.get(idx[0], idx[k]);
        if e.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&t| t != idx[k]).collect();
        let t = e * &pf_rec(m, &rest);
        acc = if k % 2 == 1 { &acc + &t } else { acc.add_scaled(&t, f.neg(f.one())) };
    }
    acc
}

/// The `6×6` alternating matrix with `(i,j)` entry the variable `var(pair(i,j))`.
fn alternating6(ring: &Arc<WeightedRing>, var: impl Fn(usize) -> usize) -> PolyMatrix {
    PolyMatrix::from_fn(ring, 6, 6, |i, j| {
        if i < j {
            SparsePoly::var(ring, var(pair_index(i, j)))
        } else if i > j {
            -&SparsePoly::var(ring, var(pair_index(j, i)))
        } else {
            SparsePoly::zero(ring)
        }
    })
}

fn delete_two(m: &PolyMatrix, i: usize, j: usize) -> PolyMatrix {
    let keep: Vec<usize> = (0..m.rows()).filter(|&k| k != i && k != j).collect();
    PolyMatrix::from_fn(m.ring(), keep.len(), keep.len(), |r, c| m.get(keep[r], keep[c]).clone())
}

/// `x0·Pf(X) + y0·Pf(Y) + Σ Pf(X_ij)·Pf(Y_ij) − ¼(x0·y0 − Σ x_ij·y_ij)²`,
/// where `X_ij` deletes rows and columns `i, j` and keeps the induced order.
pub fn igusa_quartic(field: FieldSpec) -> SparsePoly {
    let ring = igusa_ring(field);
    igusa_quartic_in(&ring)
}

/// [`igusa_quartic`] in a caller-supplied ring laid out as [`igusa_ring`].
pub fn igusa_quartic_in(ring: &Arc<WeightedRing>) -> SparsePoly {
    let f = *ring.field();
    let x = alternating6(ring, igusa_index::x);
    let y = alternating6(ring, igusa_index::y);
    let x0 = SparsePoly::var(ring, igusa_index::X0);
    let y0 = SparsePoly::var(ring, igusa_index::Y0);
    let mut p = &(&x0 * &pfaffian(&x).expect("alternating")) + &(&y0 * &pfaffian(&y).expect("alternating"));
    for (i, j) in pairs6() {
        let a = pfaffian(&delete_two(&x, i, j)).expect("alternating");
        let b = pfaffian(&delete_two(&y, i, j)).expect("alternating");
        p = &p + &(&a * &b);
    }
    let mut t = &x0 * &y0;
    for k in 0..15 {
        t = &t - &(&SparsePoly::var(ring, igusa_index::x(k)) * &SparsePoly::var(ring, igusa_index::y(k)));
    }
    let quarter = f.inv(f.from_u64(4));
    p.add_scaled(&(&t * &t), f.neg(quarter))
}

/// The two `3×3` blocks of a `Λ³` vector: `(Y_a, Y_b)`.
pub fn y_blocks(ring: &Arc<WeightedRing>) -> (PolyMatrix, PolyMatrix) {
    let y = |k: usize| SparsePoly::var(ring, k - 1);
    let ny = |k: usize| -&SparsePoly::var(ring, k - 1);
    let ya = [[y(11), ny(5), y(2)], [y(12), ny(6), y(3)], [y(13), ny(7), y(4)]];
    let yb = [[y(10), ny(9), y(8)], [y(16), ny(15), y(14)], [y(19), ny(18), y(17)]];
    (
        PolyMatrix::from_fn(ring, 3, 3, |r, c| ya[r][c].clone()),
        PolyMatrix::from_fn(ring, 3, 3, |r, c| yb[r][c].clone()),
    )
}

fn minor2(m: &PolyMatrix, i: usize, j: usize) -> SparsePoly {
    let r: Vec<usize> = (0..3).filter(|&k| k != i).collect();
    let c: Vec<usize> = (0..3).filter(|&k| k != j).collect();
    &(m.get(r[0], c[0]) * m.get(r[1], c[1])) - &(m.get(r[0], c[1]) * m.get(r[1], c[0]))
}

/// The `SL6`-invariant quartic on `Λ³C⁶`:
/// `(y1·y20 − Tr(Y_a·Y_b))² + 4·y1·det Y_b + 4·y20·det Y_a − 4·Σ_{i,j} m_ij(Y_a)·m_ji(Y_b)`,
/// with `m_ij` the `2×2` minor deleting row `i` and column `j`.
pub fn sl6_quartic(field: FieldSpec) -> SparsePoly {
    let ring = lambda3_ring(field);
    sl6_quartic_in(&ring)
}

/// [`sl6_quartic`] in a caller-supplied ring laid out as [`lambda3_ring`].
pub fn sl6_quartic_in(ring: &Arc<WeightedRing>) -> SparsePoly {
    sl6_quartic_with(ring, |i, j| (j, i))
}

/// The quartic with the minor of `Y_b` chosen by `pair(i, j)`; used to
/// contrast alternative index conventions.
pub fn sl6_quartic_with(ring: &Arc<WeightedRing>, pair: impl Fn(usize, usize) -> (usize, usize)) -> SparsePoly {
    let f = *ring.field();
    let (ya, yb) = y_blocks(ring);
    let y1 = SparsePoly::var(ring, 0);
    let y20 = SparsePoly::var(ring, 19);
    let tr = {
        let prod = ya.mul(&yb);
        let mut t = SparsePoly::zero(ring);
        for i in 0..3 {
            t = &t + prod.get(i, i);
        }
        t
    };
    let lead = &(&y1 * &y20) - &tr;
    let four = f.from_u64(4);
    let mut p = &lead * &lead;
    p = p.add_scaled(&(&y1 * &yb.det().expect("square")), four);
    p = p.add_scaled(&(&y20 * &ya.det().expect("square")), four);
    for i in 0..3 {
        for j in 0..3 {
            let (k, l) = pair(i, j);
            p = p.add_scaled(&(&minor2(&ya, i, j) * &minor2(&yb, k, l)), f.neg(four));
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, Fe};
    use crate::rng::Rng;

    fn f313() -> FieldSpec {
        make_field(313).unwrap()
    }

    /// Pfaffian as a sum over perfect matchings, signed by crossing number.
    fn pf_matchings(m: &crate::linalg::Matrix, f: &FieldSpec) -> Fe {
        fn matchings(left: &[usize]) -> Vec<Vec<(usize, usize)>> {
            if left.is_empty() {
                return alloc::vec![Vec::new()];
            }
            let mut out = Vec::new();
            for k in 1..left.len() {
                let rest: Vec<usize> = left[1..].iter().copied().filter(|&t| t != left[k]).collect();
                for mut mm in matchings(&rest) {
                    mm.push((left[0], left[k]));
                    out.push(mm);
                }
            }
            out
        }
        let mut acc = Fe::ZERO;
        for mm in matchings(&(0..m.rows()).collect::<Vec<_>>()) {
            let mut crossings = 0;
            for &(a, b) in &mm {
                for &(c, d) in &mm {
                    if a < c && c < b && b < d {
                        crossings += 1;
                    }
                }
            }
            let mut t = if crossings % 2 == 0 { f.one() } else { f.neg(f.one()) };
            for &(a, b) in &mm {
                t = f.mul(t, m.get(a, b));
            }
            acc = f.add(acc, t);
        }
        acc
    }

    #[test]
    fn pfaffian_2x2_and_blocks() {
        let f = f313();
        let r = WeightedRing::standard(f, "a", 1);
        let a = SparsePoly::var(&r, 0);
        let m = PolyMatrix::from_fn(&r, 2, 2, |i, j| match (i, j) {
            (0, 1) => a.clone(),
            (1, 0) => -&a,
            _ => SparsePoly::zero(&r),
        });
        assert_eq!(pfaffian(&m).unwrap(), a);
        let j = PolyMatrix::from_fn(&r, 6, 6, |i, k| {
            if k == i + 1 && i % 2 == 0 {
                SparsePoly::one(&r)
            } else if i == k + 1 && k % 2 == 0 {
                -&SparsePoly::one(&r)
            } else {
                SparsePoly::zero(&r)
            }
        });
        assert_eq!(pfaffian(&j).unwrap(), SparsePoly::one(&r));
    }

    #[test]
    fn pfaffian_rejects_bad_input() {
        let f = f313();
        let r = WeightedRing::standard(f, "a", 1);
        assert_eq!(pfaffian(&PolyMatrix::zeros(&r, 3, 3)), Err(Error::OddSize));
        assert_eq!(pfaffian(&PolyMatrix::identity(&r, 2)), Err(Error::NotAlternating));
    }

    #[test]
    fn pfaffian_matches_matchings_and_det() {
        let f = f313();
        let r = WeightedRing::standard(f, "a", 1);
        let mut rng = Rng::new(12);
        for n in [2usize, 4, 6] {
            let mut m = crate::linalg::Matrix::zeros(n, n);
            for i in 0..n {
                for j in i + 1..n {
                    let v = rng.next_fe(&f);
                    m.set(i, j, v);
                    m.set(j, i, f.neg(v));
                }
            }
            let pm = PolyMatrix::from_constant(&r, &m);
            let pf = pfaffian(&pm).unwrap().eval(&[Fe::ZERO]);
            assert_eq!(pf, pf_matchings(&m, &f), "n={n}");
            let det = pm.det().unwrap().eval(&[Fe::ZERO]);
            assert_eq!(f.mul(pf, pf), det, "n={n}");
        }
    }

    #[test]
    fn igusa_special_values() {
        let f = f313();
        let p = igusa_quartic(f);
        let mut v = [Fe::ZERO; 32];
        assert_eq!(p.eval(&v), Fe::ZERO);
        v[igusa_index::X0] = f.one();
        v[igusa_index::Y0] = f.one();
        assert_eq!(p.eval(&v), f.neg(f.inv(f.from_u64(4))));
        assert_eq!(p.homogeneous_degree(), Some(4));
    }

    #[test]
    fn igusa_swap_symmetry() {
        let f = f313();
        let ring = igusa_ring(f);
        let p = igusa_quartic_in(&ring);
        let mut map = [0usize; 32];
        map[igusa_index::X0] = igusa_index::Y0;
        map[igusa_index::Y0] = igusa_index::X0;
        for k in 0..15 {
            map[igusa_index::x(k)] = igusa_index::y(k);
            map[igusa_index::y(k)] = igusa_index::x(k);
        }
        assert_eq!(p.rename(&ring, &map), p);
    }

    #[test]
    fn igusa_euler_identity() {
        let f = f313();
        let ring = igusa_ring(f);
        let p = igusa_quartic_in(&ring);
        let mut lhs = SparsePoly::zero(&ring);
        for (i, d) in p.partials().iter().enumerate() {
            lhs = &lhs + &(&SparsePoly::var(&ring, i) * d);
        }
        assert_eq!(lhs, p.scale(f.from_u64(4)));
    }

    #[test]
    fn sl6_special_values() {
        let f = f313();
        let q = sl6_quartic(f);
        let mut v = [Fe::ZERO; 20];
        assert_eq!(q.eval(&v), Fe::ZERO);
        v[0] = f.one();
        assert_eq!(q.eval(&v), Fe::ZERO);
        v[19] = f.one();
        assert_eq!(q.eval(&v), f.one());
        assert_eq!(q.homogeneous_degree(), Some(4));
    }
}
