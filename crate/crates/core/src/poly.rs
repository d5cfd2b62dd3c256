//! Sparse multivariate polynomials over weighted polynomial rings.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{Fe, FieldSpec};

/// A polynomial ring `k[x_1..x_n]` with a positive degree attached to each variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedRing {
    field: FieldSpec,
    var_names: Vec<String>,
    weights: Vec<u32>,
}

impl WeightedRing {
    pub fn new(field: FieldSpec, var_names: Vec<String>, weights: Vec<u32>) -> Result<Arc<Self>> {
        if var_names.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: var_names.len(), found: weights.len() });
        }
        if weights.contains(&0) {
            return Err(Error::InvalidArgument("variable weights must be positive".into()));
        }
        Ok(Arc::new(WeightedRing { field, var_names, weights }))
    }

    /// `n` variables `{prefix}1 .. {prefix}n`, all of weight 1.
    pub fn standard(field: FieldSpec, prefix: &str, n: usize) -> Arc<Self> {
        let names = (1..=n).map(|i| format!("{prefix}{i}")).collect();
        Arc::new(WeightedRing { field, var_names: names, weights: vec![1; n] })
    }

    /// `k[z1..z6, x]` with weights `(1,1,1,1,1,1,2)`.
    pub fn double_cover(field: FieldSpec) -> Arc<Self> {
        let mut names: Vec<String> = (1..=6).map(|i| format!("z{i}")).collect();
        names.push("x".into());
        Arc::new(WeightedRing { field, var_names: names, weights: vec![1, 1, 1, 1, 1, 1, 2] })
    }

    #[inline]
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn monomial(&self, exps: Vec<u16>) -> Monomial {
        assert_eq!(exps.len(), self.nvars(), "exponent vector length");
        let deg = exps.iter().zip(&self.weights).map(|(&e, &w)| e as u32 * w).sum();
        Monomial { deg, exps }
    }

    /// All monomials of weighted degree exactly `d`, in the fixed monomial order.
    pub fn monomial_basis(&self, d: i64) -> Vec<Monomial> {
        if d < 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut exps = vec![0u16; self.nvars()];
        self.enumerate(0, d as u32, &mut exps, &mut out);
        out.sort();
        out
    }

    fn enumerate(&self, var: usize, left: u32, exps: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if var == self.nvars() {
            if left == 0 {
                out.push(self.monomial(exps.clone()));
            }
            return;
        }
        let w = self.weights[var];
        let mut e = 0u32;
        while e * w <= left {
            exps[var] = e as u16;
            self.enumerate(var + 1, left - e * w, exps, out);
            e += 1;
        }
        exps[var] = 0;
    }

    fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

/// An exponent vector together with its weighted degree.
///
/// Ordered by weighted degree, then lexicographically with larger leading
/// exponents first (so `z1^d` precedes every other monomial of degree `d`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    deg: u32,
    exps: Vec<u16>,
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            deg: self.deg + other.deg,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_sub(*b)?);
        }
        Some(Monomial { deg: self.deg - other.deg, exps })
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial stored as a map from monomials to nonzero coefficients.
#[derive(Clone, Debug)]
pub struct SparsePoly {
    ring: Arc<WeightedRing>,
    terms: BTreeMap<Monomial, Fe>,
}

impl PartialEq for SparsePoly {
    fn eq(&self, other: &Self) -> bool {
        WeightedRing::same(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for SparsePoly {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Checked binary arithmetic; fails when the operands live in different rings.
pub fn poly_arith(a: &SparsePoly, b: &SparsePoly, op: PolyOp) -> Result<SparsePoly> {
    if !WeightedRing::same(&a.ring, &b.ring) {
        return Err(Error::RingMismatch);
    }
    Ok(match op {
        PolyOp::Add => a.add_unchecked(b),
        PolyOp::Sub => a.add_scaled(b, a.field().neg(a.field().one())),
        PolyOp::Mul => a.mul_unchecked(b),
    })
}

impl SparsePoly {
    pub fn zero(ring: &Arc<WeightedRing>) -> Self {
        SparsePoly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Arc<WeightedRing>, c: Fe) -> Self {
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(ring.monomial(vec![0; ring.nvars()]), c);
        }
        p
    }

    pub fn one(ring: &Arc<WeightedRing>) -> Self {
        Self::constant(ring, ring.field().one())
    }

    pub fn var(ring: &Arc<WeightedRing>, i: usize) -> Self {
        let mut exps = vec![0; ring.nvars()];
        exps[i] = 1;
        Self::term(ring, ring.field().one(), ring.monomial(exps))
    }

    pub fn term(ring: &Arc<WeightedRing>, c: Fe, m: Monomial) -> Self {
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(ring: &Arc<WeightedRing>, terms: impl IntoIterator<Item = (Monomial, Fe)>) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<WeightedRing> {
        &self.ring
    }

    #[inline]
    pub fn field(&self) -> &FieldSpec {
        self.ring.field()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Fe)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Fe {
        self.terms.get(m).copied().unwrap_or(Fe::ZERO)
    }

    /// The common weighted degree of all terms, or `None` for zero and
    /// inhomogeneous polynomials.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let d = it.next()?.deg;
        it.all(|m| m.deg == d).then_some(d)
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.deg == d)
    }

    pub fn add_term(&mut self, m: Monomial, c: Fe) {
        if c.is_zero() {
            return;
        }
        let f = *self.ring.field();
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        self.add_scaled(other, self.field().one())
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, other: &Self, c: Fe) -> Self {
        let f = *self.field();
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_term(m.clone(), f.mul(*v, c));
        }
        out
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let f = *self.field();
        let mut out = Self::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), f.mul(*ca, *cb));
            }
        }
        out
    }

    pub fn scale(&self, c: Fe) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        let f = *self.field();
        SparsePoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), f.mul(*v, c))).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one(&self.ring);
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    pub fn eval(&self, point: &[Fe]) -> Fe {
        assert_eq!(point.len(), self.ring.nvars(), "evaluation point length");
        let f = *self.field();
        let mut acc = Fe::ZERO;
        for (m, c) in &self.terms {
            let mut t = *c;
            for (x, &e) in point.iter().zip(&m.exps) {
                if e > 0 {
                    t = f.mul(t, f.pow(*x, e as u64));
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Substitutes polynomial images for every variable of the ring.
    pub fn substitute(&self, images: &[SparsePoly]) -> Result<SparsePoly> {
        if images.len() != self.ring.nvars() {
            return Err(Error::DimensionMismatch { expected: self.ring.nvars(), found: images.len() });
        }
        let target = images
            .first()
            .map(|p| p.ring.clone())
            .ok_or_else(|| Error::InvalidArgument("substitution into a ring without variables".into()))?;
        if images.iter().any(|p| !WeightedRing::same(&p.ring, &target)) {
            return Err(Error::RingMismatch);
        }
        // Cache powers of each image as they are requested.
        let mut powers: Vec<Vec<SparsePoly>> = images.iter().map(|p| vec![SparsePoly::one(&target), p.clone()]).collect();
        let mut out = SparsePoly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = SparsePoly::constant(&target, *c);
            for (v, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[v].len() <= e as usize {
                    let next = &powers[v][powers[v].len() - 1] * &images[v];
                    powers[v].push(next);
                }
                t = &t * &powers[v][e as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// `f(m·z)`: variable `j` of `self` becomes `Σ_k m[j][k]·z_k` in `target`.
    pub fn substitute_linear(&self, m: &[Vec<Fe>], target: &Arc<WeightedRing>) -> Result<SparsePoly> {
        if m.len() != self.ring.nvars() {
            return Err(Error::DimensionMismatch { expected: self.ring.nvars(), found: m.len() });
        }
        let images = m
            .iter()
            .map(|row| {
                if row.len() != target.nvars() {
                    return Err(Error::DimensionMismatch { expected: target.nvars(), found: row.len() });
                }
                Ok(SparsePoly::from_terms(
                    target,
                    row.iter().enumerate().map(|(k, c)| (var_monomial(target, k), *c)),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        if images.is_empty() {
            return Ok(SparsePoly::constant(target, self.coefficient(&self.ring.monomial(Vec::new()))));
        }
        self.substitute(&images)
    }

    pub fn partial(&self, i: usize) -> SparsePoly {
        let f = *self.field();
        let mut out = SparsePoly::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exps[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[i] -= 1;
            out.add_term(self.ring.monomial(exps), f.mul(*c, f.from_u64(e as u64)));
        }
        out
    }

    /// One derivative per ring variable, in ring order.
    pub fn partials(&self) -> Vec<SparsePoly> {
        (0..self.ring.nvars()).map(|i| self.partial(i)).collect()
    }

    /// Re-expresses `self` in `target`, sending variable `v` to variable `map[v]`.
    pub fn rename(&self, target: &Arc<WeightedRing>, map: &[usize]) -> SparsePoly {
        assert_eq!(map.len(), self.ring.nvars(), "variable map length");
        let mut out = SparsePoly::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0u16; target.nvars()];
            for (v, &e) in m.exps.iter().enumerate() {
                exps[map[v]] += e;
            }
            out.add_term(target.monomial(exps), *c);
        }
        out
    }
}

fn var_monomial(ring: &Arc<WeightedRing>, k: usize) -> Monomial {
    let mut exps = vec![0; ring.nvars()];
    exps[k] = 1;
    ring.monomial(exps)
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (v, &e) in m.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*{}", self.ring.var_names[v])?,
                    _ => write!(f, "*{}^{}", self.ring.var_names[v], e)?,
                }
            }
        }
        Ok(())
    }
}

fn expect_same(a: &SparsePoly, b: &SparsePoly) {
    assert!(WeightedRing::same(&a.ring, &b.ring), "polynomials live in different rings");
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        expect_same(self, rhs);
        self.add_unchecked(rhs)
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        expect_same(self, rhs);
        self.add_scaled(rhs, self.field().neg(self.field().one()))
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        expect_same(self, rhs);
        self.mul_unchecked(rhs)
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        self.scale(self.field().neg(self.field().one()))
    }
}

/// Binomial coefficient as `u64`; zero when `k > n` or `n < 0`.
pub fn binomial(n: i64, k: i64) -> u64 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut r = 1u64;
    for j in 0..k {
        r = r * (n - j) / (j + 1);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn ring6() -> Arc<WeightedRing> {
        WeightedRing::standard(make_field(313).unwrap(), "z", 6)
    }

    #[test]
    fn difference_of_squares() {
        let r = ring6();
        let z1 = SparsePoly::var(&r, 0);
        let z2 = SparsePoly::var(&r, 1);
        let lhs = &(&z1 + &z2) * &(&z1 - &z2);
        let rhs = &(&z1 * &z1) - &(&z2 * &z2);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.num_terms(), 2);
    }

    #[test]
    fn times_zero_is_zero() {
        let r = ring6();
        let p = &SparsePoly::var(&r, 0) + &SparsePoly::one(&r);
        assert!((&p * &SparsePoly::zero(&r)).is_zero());
    }

    #[test]
    fn fourth_power_of_sum_has_126_terms() {
        let r = ring6();
        let mut s = SparsePoly::zero(&r);
        for i in 0..6 {
            s = &s + &SparsePoly::var(&r, i);
        }
        let p = s.pow(4);
        assert_eq!(p.num_terms(), 126);
        assert_eq!(p.homogeneous_degree(), Some(4));
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let f = make_field(313).unwrap();
        let a = SparsePoly::var(&WeightedRing::standard(f, "z", 6), 0);
        let b = SparsePoly::var(&WeightedRing::standard(f, "y", 3), 0);
        assert_eq!(poly_arith(&a, &b, PolyOp::Add), Err(Error::RingMismatch));
    }

    #[test]
    fn basis_sizes_double_cover() {
        let r = WeightedRing::double_cover(make_field(313).unwrap());
        assert_eq!(r.monomial_basis(2).len(), 22);
        assert_eq!(r.monomial_basis(4).len(), 148);
        assert_eq!(r.monomial_basis(0).len(), 1);
        assert!(r.monomial_basis(-1).is_empty());
        for d in 0..12i64 {
            let expect: u64 = (0..=d / 2).map(|j| binomial(d - 2 * j + 5, 5)).sum();
            assert_eq!(r.monomial_basis(d).len() as u64, expect, "degree {d}");
        }
    }

    #[test]
    fn basis_order_starts_with_pure_power() {
        let r = ring6();
        let b = r.monomial_basis(3);
        assert_eq!(b[0].exps(), &[3, 0, 0, 0, 0, 0]);
        assert_eq!(b.last().unwrap().exps(), &[0, 0, 0, 0, 0, 3]);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn linear_substitution_examples() {
        let f = make_field(313).unwrap();
        let r = WeightedRing::standard(f, "x", 2);
        let x1x2 = &SparsePoly::var(&r, 0) * &SparsePoly::var(&r, 1);
        let id = vec![vec![f.one(), f.zero()], vec![f.zero(), f.one()]];
        assert_eq!(x1x2.substitute_linear(&id, &r).unwrap(), x1x2);
        let sq = &SparsePoly::var(&r, 0) * &SparsePoly::var(&r, 0);
        let zero = vec![vec![f.zero(); 2]; 2];
        assert!(sq.substitute_linear(&zero, &r).unwrap().is_zero());
        assert!(matches!(
            sq.substitute_linear(&zero[..1], &r),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn partial_of_square() {
        let r = ring6();
        let z1 = SparsePoly::var(&r, 0);
        let d = (&z1 * &z1).partials();
        assert_eq!(d[0], z1.scale(r.field().from_u64(2)));
        assert!(d[1..].iter().all(|p| p.is_zero()));
        assert!(SparsePoly::one(&r).partials().iter().all(|p| p.is_zero()));
    }
}
