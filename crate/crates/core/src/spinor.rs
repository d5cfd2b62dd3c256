//! The Clifford algebra of `C¹²` acting on `Λ•C⁶` and the quadratic moment
//! maps from either half-spin representation to `so12`.
//!
//! Subsets of `{1..6}` are bitmasks (bit `i` is `e_{i+1}`). The hyperbolic
//! basis of `C¹²` is ordered `e1 … e6, f6 … f1`, so the invariant form is the
//! antidiagonal `J12`.
//!
//! # Coordinates
//!
//! Even spinors use `(∅, pairs, complements of pairs, {1..6})` with pairs in
//! lexicographic order; odd spinors use `(singletons, triples, complements of
//! singletons)`. The Igusa coordinates embed into even spinors by
//! `x_ij ↦ e_ij`, `y_ij ↦ ε_ij·e_{∁ij}`, `x0 ↦ −e_123456`, `y0 ↦ −1`,
//! where `ε_ij` is the sign of `e_ij ∧ e_{∁ij} = ε_ij·e_123456`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Fe, FieldSpec};
use crate::invariants::{igusa_index, igusa_quartic, lambda3_ring, pairs6, sl6_quartic_in, triples6};
use crate::linalg::{rank_kernel, Matrix};
use crate::poly::{SparsePoly, WeightedRing};
use crate::polymat::PolyMatrix;
use crate::rng::Rng;
use crate::sy::{build_sy_in, proportionality};

pub const FULL: u8 = 0b11_1111;

pub fn mask_of(idx: &[usize]) -> u8 {
    idx.iter().fold(0u8, |m, &i| m | (1 << i))
}

/// Sign `s` with `e_a ∧ e_b = s·e_{a∪b}`, or `None` when the sets meet.
pub fn wedge_sign(a: u8, b: u8) -> Option<i8> {
    if a & b != 0 {
        return None;
    }
    // count pairs (i in a, j in b) with i > j
    let mut inv = 0u32;
    for j in 0..6 {
        if b & (1 << j) != 0 {
            inv += (a >> (j + 1)).count_ones();
        }
    }
    Some(if inv % 2 == 0 { 1 } else { -1 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// The 32 subsets of the given parity in coordinate order.
pub fn parity_basis(parity: Parity) -> Vec<u8> {
    let mut v = Vec::with_capacity(32);
    match parity {
        Parity::Even => {
            v.push(0);
            for (i, j) in pairs6() {
                v.push(mask_of(&[i, j]));
            }
            for (i, j) in pairs6() {
                v.push(FULL & !mask_of(&[i, j]));
            }
            v.push(FULL);
        }
        Parity::Odd => {
            for i in 0..6 {
                v.push(1 << i);
            }
            for t in triples6() {
                v.push(mask_of(&t));
            }
            for i in 0..6 {
                v.push(FULL & !(1 << i));
            }
        }
    }
    v
}

fn coordinate_of(parity: Parity, mask: u8) -> Option<usize> {
    parity_basis(parity).iter().position(|&m| m == mask)
}

fn subset_name(mask: u8) -> String {
    if mask == 0 {
        return "s_0".into();
    }
    let digits: String = (0..6).filter(|i| mask & (1 << i) != 0).map(|i| (b'1' + i as u8) as char).collect();
    format!("s_{digits}")
}

/// Polynomial ring on the 32 coordinates of one half-spin representation.
pub fn spinor_ring(field: FieldSpec, parity: Parity) -> Arc<WeightedRing> {
    let names = parity_basis(parity).into_iter().map(subset_name).collect();
    WeightedRing::new(field, names, vec![1; 32]).expect("valid ring")
}

/// A Clifford generator: `E(i)` wedges with `e_{i+1}`, `F(i)` contracts it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    E(usize),
    F(usize),
}

/// `e1 … e6, f6 … f1`.
pub fn hyperbolic_basis() -> [Generator; 12] {
    let mut b = [Generator::E(0); 12];
    for i in 0..6 {
        b[i] = Generator::E(i);
        b[11 - i] = Generator::F(i);
    }
    b
}

/// Image of a basis spinor `e_S` under a generator, as `(T, sign)`.
pub fn apply_basis(g: Generator, s: u8) -> Option<(u8, i8)> {
    let (i, wedge) = match g {
        Generator::E(i) => (i, true),
        Generator::F(i) => (i, false),
    };
    let bit = 1u8 << i;
    if wedge == (s & bit != 0) {
        return None;
    }
    let sign = if (s & (bit - 1)).count_ones() % 2 == 0 { 1 } else { -1 };
    Some((s ^ bit, sign))
}

/// An element of `Λ•C⁶` supported in one parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinorElement {
    parity: Parity,
    coeffs: Vec<Fe>,
}

fn mask_parity(m: u8) -> Parity {
    if m.count_ones() % 2 == 0 {
        Parity::Even
    } else {
        Parity::Odd
    }
}

impl SpinorElement {
    pub fn zero(parity: Parity) -> Self {
        SpinorElement { parity, coeffs: vec![Fe::ZERO; 64] }
    }

    /// The vacuum `1 ∈ Λ⁰`.
    pub fn vacuum(field: &FieldSpec) -> Self {
        Self::basis(field, 0)
    }

    pub fn basis(field: &FieldSpec, mask: u8) -> Self {
        let mut s = Self::zero(mask_parity(mask));
        s.coeffs[mask as usize] = field.one();
        s
    }

    /// Builds a spinor from its 32 coordinates in [`parity_basis`] order.
    pub fn from_coordinates(parity: Parity, coords: &[Fe]) -> Result<Self> {
        if coords.len() != 32 {
            return Err(Error::DimensionMismatch { expected: 32, found: coords.len() });
        }
        let mut s = Self::zero(parity);
        for (m, c) in parity_basis(parity).into_iter().zip(coords) {
            s.coeffs[m as usize] = *c;
        }
        Ok(s)
    }

    pub fn coordinates(&self) -> Vec<Fe> {
        parity_basis(self.parity).into_iter().map(|m| self.coeffs[m as usize]).collect()
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn get(&self, mask: u8) -> Fe {
        self.coeffs[mask as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, field: &FieldSpec, other: &Self) -> Self {
        assert_eq!(self.parity, other.parity, "parity mismatch");
        SpinorElement {
            parity: self.parity,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| field.add(*a, *b)).collect(),
        }
    }
}

pub fn clifford_apply(field: &FieldSpec, g: Generator, s: &SpinorElement) -> SpinorElement {
    let flipped = match s.parity {
        Parity::Even => Parity::Odd,
        Parity::Odd => Parity::Even,
    };
    let mut out = SpinorElement::zero(flipped);
    for (m, &c) in s.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if let Some((t, sign)) = apply_basis(g, m as u8) {
            let v = if sign > 0 { c } else { field.neg(c) };
            out.coeffs[t as usize] = field.add(out.coeffs[t as usize], v);
        }
    }
    out
}

/// `β(e_S, e_T)`: the `e_123456` coefficient of `rev(e_S) ∧ e_T`.
pub fn beta_basis(s: u8, t: u8) -> i8 {
    let Some(w) = wedge_sign(s, t) else {
        return 0;
    };
    if s | t != FULL {
        return 0;
    }
    let k = s.count_ones();
    let rev = if (k * k.saturating_sub(1) / 2) % 2 == 0 { 1 } else { -1 };
    w * rev
}

pub fn beta(field: &FieldSpec, u: &SpinorElement, v: &SpinorElement) -> Fe {
    let mut acc = Fe::ZERO;
    for s in 0..64u8 {
        let a = u.coeffs[s as usize];
        if a.is_zero() {
            continue;
        }
        let t = FULL & !s;
        let b = v.coeffs[t as usize];
        let sign = beta_basis(s, t);
        if b.is_zero() || sign == 0 {
            continue;
        }
        let prod = field.mul(a, b);
        acc = if sign > 0 { field.add(acc, prod) } else { field.sub(acc, prod) };
    }
    acc
}

/// Gram matrix of `β` on one parity class, in coordinate order.
pub fn gram(field: &FieldSpec, parity: Parity) -> Matrix {
    let basis = parity_basis(parity);
    let mut m = Matrix::zeros(32, 32);
    for (r, &s) in basis.iter().enumerate() {
        for (c, &t) in basis.iter().enumerate() {
            m.set(r, c, field.from_i64(beta_basis(s, t) as i64));
        }
    }
    m
}

/// For each `(a, b)`, the terms `(i, j, sign)` of `ω_ab(z) = β(z, g_a·g_b·z)`
/// as a quadratic form in the coordinates.
fn omega_terms(parity: Parity) -> Vec<Vec<(usize, usize, i8)>> {
    let basis = parity_basis(parity);
    let gens = hyperbolic_basis();
    let mut out = Vec::with_capacity(144);
    for &ga in &gens {
        for &gb in &gens {
            let mut terms = Vec::new();
            for (j, &t) in basis.iter().enumerate() {
                let Some((u1, s1)) = apply_basis(gb, t) else { continue };
                let Some((u, s2)) = apply_basis(ga, u1) else { continue };
                let s = FULL & !u;
                let b = beta_basis(s, u);
                if b == 0 {
                    continue;
                }
                let i = coordinate_of(parity, s).expect("same parity");
                terms.push((i, j, s1 * s2 * b));
            }
            out.push(terms);
        }
    }
    out
}

/// The `12×12` moment matrix `μ(z) = −J·ω(z)` of one parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentMatrix {
    pub parity: Parity,
    pub matrix: PolyMatrix,
}

pub fn moment_map(field: FieldSpec, parity: Parity) -> MomentMatrix {
    let ring = spinor_ring(field, parity);
    let omega = omega_terms(parity);
    let matrix = PolyMatrix::from_fn(&ring, 12, 12, |r, c| {
        let mut p = SparsePoly::zero(&ring);
        for &(i, j, s) in &omega[(11 - r) * 12 + c] {
            let t = &SparsePoly::var(&ring, i) * &SparsePoly::var(&ring, j);
            p = p.add_scaled(&t, field.from_i64(-(s as i64)));
        }
        p
    });
    MomentMatrix { parity, matrix }
}

/// `μ(z)` at a numeric spinor.
pub fn moment_matrix_at(field: &FieldSpec, z: &SpinorElement) -> Matrix {
    let omega = omega_terms(z.parity);
    let x = z.coordinates();
    let mut m = Matrix::zeros(12, 12);
    for r in 0..12 {
        for c in 0..12 {
            let mut acc = Fe::ZERO;
            for &(i, j, s) in &omega[(11 - r) * 12 + c] {
                let v = field.mul(x[i], x[j]);
                acc = if s > 0 { field.sub(acc, v) } else { field.add(acc, v) };
            }
            m.set(r, c, acc);
        }
    }
    m
}

/// `Mᵀ·J + J·M = 0` for the antidiagonal `J`.
pub fn in_so_j(m: &PolyMatrix) -> bool {
    let n = m.rows();
    (0..n).all(|r| (0..n).all(|c| *m.get(r, c) == -m.get(n - 1 - c, n - 1 - r)))
}

/// If `m = q·I`, returns `q`; otherwise the first offending entry.
pub fn scalar_square(m: &PolyMatrix) -> core::result::Result<SparsePoly, (usize, usize)> {
    let sq = m.mul(m);
    let d = sq.get(0, 0).clone();
    for r in 0..sq.rows() {
        for c in 0..sq.cols() {
            let e = sq.get(r, c);
            if (r == c && *e != d) || (r != c && !e.is_zero()) {
                return Err((r, c));
            }
        }
    }
    Ok(d)
}

/// `(igusa coordinate, spinor coordinate, sign)` with igusa = sign·spinor.
pub fn igusa_identification() -> Vec<(usize, usize, i8)> {
    let mut v = vec![(igusa_index::X0, 31, -1), (igusa_index::Y0, 0, -1)];
    for (k, (i, j)) in pairs6().into_iter().enumerate() {
        let m = mask_of(&[i, j]);
        v.push((igusa_index::x(k), 1 + k, 1));
        v.push((igusa_index::y(k), 16 + k, wedge_sign(m, FULL & !m).expect("disjoint")));
    }
    v
}

/// The Igusa quartic in even spinor coordinates.
pub fn igusa_on_spinors(ring: &Arc<WeightedRing>) -> SparsePoly {
    igusa_on_spinors_from(&igusa_quartic(*ring.field()), ring)
}

/// Pulls a quartic in Igusa coordinates back along [`igusa_identification`].
pub fn igusa_on_spinors_from(p: &SparsePoly, ring: &Arc<WeightedRing>) -> SparsePoly {
    let f = *ring.field();
    let mut m = vec![vec![Fe::ZERO; 32]; 32];
    for (ig, sp, s) in igusa_identification() {
        m[ig][sp] = f.from_i64(s as i64);
    }
    p.substitute_linear(&m, ring).expect("32 coordinates")
}

/// Outcome of the even-parity identity `μ(z)² = c_even·P(z)·I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenCertificate {
    pub c_even: Fe,
    pub quartic_terms: usize,
}

pub fn verify_mf_even(field: FieldSpec) -> Result<EvenCertificate> {
    let mu = moment_map(field, Parity::Even);
    let p = igusa_on_spinors(mu.matrix.ring());
    verify_mf_even_against(&mu, &p)
}

/// Checks `μ² = c·p·I` symbolically against a caller-supplied quartic `p`.
pub fn verify_mf_even_against(mu: &MomentMatrix, p: &SparsePoly) -> Result<EvenCertificate> {
    let q = scalar_square(&mu.matrix)
        .map_err(|(r, c)| Error::IdentityFailed(format!("mu^2 entry ({r},{c}) breaks scalar form")))?;
    let c = proportional_scalar(&q, p)?;
    if c.is_zero() {
        return Err(Error::IdentityFailed("mu^2 vanishes identically".into()));
    }
    Ok(EvenCertificate { c_even: c, quartic_terms: q.num_terms() })
}

/// `c` with `q = c·p`, or a failure naming the first discrepant monomial.
fn proportional_scalar(q: &SparsePoly, p: &SparsePoly) -> Result<Fe> {
    let f = *q.field();
    let Some((m, pc)) = p.terms().next() else {
        return if q.is_zero() { Ok(Fe::ZERO) } else { Err(Error::IdentityFailed("reference quartic is zero".into())) };
    };
    let c = f.div(q.coefficient(m), *pc);
    let diff = q - &p.scale(c);
    if let Some((bad, _)) = diff.terms().next() {
        return Err(Error::IdentityFailed(format!(
            "coefficient mismatch at exponent {:?} (scalar {c})",
            bad.exps()
        )));
    }
    Ok(c)
}

/// Randomised check at `trials` seeded even spinors; returns the common ratio
/// `μ(z)²/P(z)`.
pub fn precheck_mf_even(field: FieldSpec, seed: u64, trials: usize) -> Result<Fe> {
    let ring = spinor_ring(field, Parity::Even);
    let p = igusa_on_spinors(&ring);
    let mut rng = Rng::new(seed);
    let mut ratio = None;
    for t in 0..trials {
        let coords: Vec<Fe> = (0..32).map(|_| rng.next_fe(&field)).collect();
        let z = SpinorElement::from_coordinates(Parity::Even, &coords)?;
        let m = moment_matrix_at(&field, &z);
        let sq = m.mul(&field, &m);
        let d = sq.get(0, 0);
        for r in 0..12 {
            for c in 0..12 {
                if sq.get(r, c) != if r == c { d } else { Fe::ZERO } {
                    return Err(Error::IdentityFailed(format!("trial {t}: mu^2 entry ({r},{c}) not scalar")));
                }
            }
        }
        let pv = p.eval(&coords);
        if pv.is_zero() {
            continue;
        }
        let c = field.div(d, pv);
        match ratio {
            None => ratio = Some(c),
            Some(r) if r != c => return Err(Error::IdentityFailed(format!("trial {t}: ratio {c} differs from {r}"))),
            _ => {}
        }
    }
    ratio.ok_or_else(|| Error::IdentityFailed("quartic vanished at every trial".into()))
}

/// Outcome of the odd-parity checks.
#[derive(Clone, Debug)]
pub struct OddCertificate {
    /// `μ(z)² = q(z)·I` on odd spinors.
    pub quartic: SparsePoly,
    /// `q|_{Λ³} = λ·lP`.
    pub lambda: Fe,
    /// `q` with the `Λ³` coordinates set to zero.
    pub outer_part: SparsePoly,
}

/// Odd coordinates `6..26` are the `Λ³` coordinates `y1 … y20`.
pub fn restrict_to_lambda3(p: &SparsePoly, target: &Arc<WeightedRing>) -> Result<SparsePoly> {
    let images: Vec<SparsePoly> = (0..32)
        .map(|i| {
            if (6..26).contains(&i) {
                SparsePoly::var(target, i - 6)
            } else {
                SparsePoly::zero(target)
            }
        })
        .collect();
    p.substitute(&images)
}

pub fn verify_mf_odd(field: FieldSpec) -> Result<OddCertificate> {
    let mu = moment_map(field, Parity::Odd);
    let q = scalar_square(&mu.matrix)
        .map_err(|(r, c)| Error::IdentityFailed(format!("mu^2 entry ({r},{c}) breaks scalar form")))?;
    let l3 = lambda3_ring(field);
    let q3 = restrict_to_lambda3(&q, &l3)?;
    let lambda = proportional_scalar(&q3, &sl6_quartic_in(&l3))?;
    if lambda.is_zero() {
        return Err(Error::IdentityFailed("q vanishes on the Λ³ summand".into()));
    }
    let ring = mu.matrix.ring().clone();
    let images: Vec<SparsePoly> = (0..32)
        .map(|i| if (6..26).contains(&i) { SparsePoly::zero(&ring) } else { SparsePoly::var(&ring, i) })
        .collect();
    let outer_part = q.substitute(&images)?;
    Ok(OddCertificate { quartic: q, lambda, outer_part })
}

/// Outcome of the block-structure check on the `Λ³` locus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCertificate {
    /// Basis reindexing applied before comparing with `S_y`.
    pub reindexing: &'static str,
    /// `A'_y = s·S_y` in the reindexed basis.
    pub s: Fe,
    /// `A_y = t·S_yᵀ` in the standard basis.
    pub transpose_scalar: Fe,
}

/// `μ(y)` for `y` in the `Λ³` summand, as a matrix over [`lambda3_ring`].
pub fn moment_on_lambda3(field: FieldSpec) -> Result<PolyMatrix> {
    let mu = moment_map(field, Parity::Odd);
    let l3 = lambda3_ring(field);
    mu.matrix.try_map(&l3, |p| restrict_to_lambda3(p, &l3))
}

pub fn verify_block_structure(field: FieldSpec) -> Result<BlockCertificate> {
    let m = moment_on_lambda3(field)?;
    let fail = |s: &str| Error::IdentityFailed(s.into());
    if !m.block(0, 6, 6, 6).is_zero() || !m.block(6, 0, 6, 6).is_zero() {
        return Err(fail("off-diagonal blocks of mu(y) are nonzero"));
    }
    let a = m.block(0, 0, 6, 6);
    let d = m.block(6, 6, 6, 6);
    if d != -&a.antitranspose() {
        return Err(fail("lower block differs from minus the antitranspose of the upper block"));
    }
    let sy = build_sy_in(m.ring());
    let transpose_scalar = proportionality(&a, &sy.transpose())
        .flatten()
        .ok_or_else(|| fail("upper block is not proportional to the transpose of S_y"))?;
    // basis (f1,…,f6,e6,…,e1): new index k is old index 11 − k
    let swapped = PolyMatrix::from_fn(m.ring(), 12, 12, |r, c| m.get(11 - r, 11 - c).clone());
    let a2 = swapped.block(0, 0, 6, 6);
    if swapped.block(6, 6, 6, 6) != -&a2.antitranspose() {
        return Err(fail("reindexed blocks lose the (A, -A^at) shape"));
    }
    let s = proportionality(&a2, &sy)
        .flatten()
        .ok_or_else(|| fail("reindexed upper block is not proportional to S_y"))?;
    Ok(BlockCertificate { reindexing: "(f1,...,f6,e6,...,e1)", s, transpose_scalar })
}

/// Rank of the `β` Gram matrix on one parity.
pub fn gram_rank(field: &FieldSpec, parity: Parity) -> usize {
    rank_kernel(field, &gram(field, parity)).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn f313() -> FieldSpec {
        make_field(313).unwrap()
    }

    #[test]
    fn generator_examples() {
        let f = f313();
        let one = SpinorElement::vacuum(&f);
        let e1 = clifford_apply(&f, Generator::E(0), &one);
        assert_eq!(e1, SpinorElement::basis(&f, 1));
        assert_eq!(clifford_apply(&f, Generator::F(0), &e1), one);
    }

    #[test]
    fn wedge_signs() {
        assert_eq!(wedge_sign(0b01, 0b10), Some(1));
        assert_eq!(wedge_sign(0b10, 0b01), Some(-1));
        assert_eq!(wedge_sign(0b11, 0b01), None);
    }

    #[test]
    fn gram_is_nondegenerate() {
        let f = f313();
        assert_eq!(gram_rank(&f, Parity::Even), 32);
        assert_eq!(gram_rank(&f, Parity::Odd), 32);
    }

    #[test]
    fn moment_is_quadratic_and_in_so12() {
        let f = f313();
        for parity in [Parity::Even, Parity::Odd] {
            let mu = moment_map(f, parity);
            assert!(in_so_j(&mu.matrix));
            assert!(mu.matrix.entries().iter().all(|p| p.is_homogeneous_of(2)));
            let mut tr = SparsePoly::zero(mu.matrix.ring());
            for i in 0..12 {
                tr = &tr + mu.matrix.get(i, i);
            }
            assert!(tr.is_zero());
        }
    }

    #[test]
    fn vacuum_squares_to_zero() {
        let f = f313();
        let m = moment_matrix_at(&f, &SpinorElement::vacuum(&f));
        assert!(m.mul(&f, &m).is_zero());
    }
}
