//! Matrix factorizations, linear sections and 2-periodic resolutions.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Fe, FieldSpec};
use crate::linalg::{rank_kernel, Matrix};
use crate::poly::{SparsePoly, WeightedRing};
use crate::polymat::PolyMatrix;
use crate::rng::Rng;

/// A pair `(B, C)` with `B·C = C·B = W·I_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFactorization {
    pub b: PolyMatrix,
    pub c: PolyMatrix,
    pub w: SparsePoly,
    pub n: usize,
}

impl MatrixFactorization {
    /// Validates both products before accepting the pair.
    pub fn new(b: PolyMatrix, c: PolyMatrix, w: SparsePoly) -> Result<Self> {
        let n = b.rows();
        if b.cols() != n || c.rows() != n || c.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: c.rows() });
        }
        let mf = MatrixFactorization { b, c, w, n };
        if !mf.holds() {
            return Err(Error::IdentityFailed("B·C or C·B differs from W·I".into()));
        }
        Ok(mf)
    }

    /// `B·C = W·I` and `C·B = W·I` symbolically.
    pub fn holds(&self) -> bool {
        let wi = PolyMatrix::scalar(&self.w, self.n);
        self.b.mul(&self.c) == wi && self.c.mul(&self.b) == wi
    }

    pub fn deg_b(&self) -> u32 {
        self.b.entry_degree().unwrap_or(0)
    }

    pub fn deg_c(&self) -> u32 {
        self.c.entry_degree().unwrap_or(0)
    }

    pub fn ring(&self) -> &Arc<WeightedRing> {
        self.b.ring()
    }
}

/// `k[z1..z6]` with unit weights.
pub fn section_ring(field: FieldSpec) -> Arc<WeightedRing> {
    WeightedRing::standard(field, "z", 6)
}

/// A seeded `n × 6` section matrix, filled row-major.
pub fn random_section(field: &FieldSpec, seed: u64, n: usize) -> Vec<Vec<Fe>> {
    Rng::new(seed).matrix(field, n, 6)
}

pub fn matrix_rank(field: &FieldSpec, m: &[Vec<Fe>]) -> usize {
    rank_kernel(field, &Matrix::from_rows(m)).0
}

/// Entrywise substitution `y ↦ m·z`; also returns `rank(m)` so callers can
/// log degenerate sections.
pub fn restrict_to_section(mat: &PolyMatrix, m: &[Vec<Fe>], target: &Arc<WeightedRing>) -> Result<(PolyMatrix, usize)> {
    let restricted = mat.substitute_linear(m, target)?;
    Ok((restricted, matrix_rank(target.field(), m)))
}

/// `B = S + i·x·I`, `C = S − i·x·I` and `W = Q + x²` over `k[z, x]` with
/// `deg x = deg S`, where `S² = Q·I`.
pub fn double_cover_mf(s: &PolyMatrix) -> Result<MatrixFactorization> {
    let q = s.mul(s).scalar_part().ok_or_else(|| Error::NotScalarSquare("S² is not a scalar matrix".into()))?;
    let d = s.entry_degree().filter(|&d| d > 0).ok_or(Error::NotHomogeneous)?;
    if s.entries().iter().any(|p| p.homogeneous_degree().is_none() && !p.is_zero()) {
        return Err(Error::NotHomogeneous);
    }
    let zr = s.ring();
    let f = *zr.field();
    let mut names: Vec<String> = zr.var_names().to_vec();
    names.push("x".into());
    let mut weights = zr.weights().to_vec();
    weights.push(d);
    let ring = WeightedRing::new(f, names, weights)?;
    let embed: Vec<usize> = (0..zr.nvars()).collect();
    let s2 = s.try_map(&ring, |p| Ok(p.rename(&ring, &embed)))?;
    let x = SparsePoly::var(&ring, zr.nvars());
    let ix = PolyMatrix::scalar(&x.scale(f.sqrt_neg_one()), s.rows());
    let w = &q.rename(&ring, &embed) + &(&x * &x);
    MatrixFactorization::new(s2.add(&ix), s2.sub(&ix), w)
}

/// Which differential of a matrix factorization a step uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    B,
    C,
}

/// `F_i = A(t_i)^n` over `A = R/W`, with `d_i: F_i → F_{i−1}` equal to `B`
/// for odd `i` and `C` for even `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicResolution {
    pub n: usize,
    pub twists: Vec<i64>,
    pub steps: Vec<Step>,
    /// Consecutive composites are `W·I` (zero in `A`).
    pub composites_vanish: bool,
}

pub fn periodic_resolution(mf: &MatrixFactorization, length: usize) -> Result<PeriodicResolution> {
    if length == 0 {
        return Err(Error::InvalidArgument("resolution length must be at least 1".into()));
    }
    let (db, dc) = (mf.deg_b() as i64, mf.deg_c() as i64);
    let mut twists = vec![0i64];
    let mut steps = Vec::new();
    for i in 1..=length {
        let step = if i % 2 == 1 { Step::B } else { Step::C };
        let d = if step == Step::B { db } else { dc };
        twists.push(twists[i - 1] - d);
        steps.push(step);
    }
    Ok(PeriodicResolution { n: mf.n, twists, steps, composites_vanish: mf.holds() })
}

/// Tries consecutive seeds until `build` yields a value; returns it with the
/// seed used and the number of rejected seeds.
pub fn first_acceptable<T>(
    start_seed: u64,
    max_tries: usize,
    mut build: impl FnMut(u64) -> Result<Option<T>>,
) -> Result<(T, u64, usize)> {
    for k in 0..max_tries {
        let seed = start_seed.wrapping_add(k as u64);
        if let Some(t) = build(seed)? {
            return Ok((t, seed, k));
        }
    }
    Err(Error::InvalidArgument(format!("no acceptable section in {max_tries} seeds from {start_seed}")))
}
