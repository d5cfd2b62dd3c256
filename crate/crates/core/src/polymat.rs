//! Matrices with polynomial entries.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Fe;
use crate::linalg::Matrix;
use crate::poly::{SparsePoly, WeightedRing};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    ring: Arc<WeightedRing>,
    rows: usize,
    cols: usize,
    entries: Vec<SparsePoly>,
}

impl PolyMatrix {
    pub fn zeros(ring: &Arc<WeightedRing>, rows: usize, cols: usize) -> Self {
        PolyMatrix { ring: ring.clone(), rows, cols, entries: alloc::vec![SparsePoly::zero(ring); rows * cols] }
    }

    /// `p·I_n`.
    pub fn scalar(p: &SparsePoly, n: usize) -> Self {
        let mut m = Self::zeros(p.ring(), n, n);
        for i in 0..n {
            m.set(i, i, p.clone());
        }
        m
    }

    pub fn identity(ring: &Arc<WeightedRing>, n: usize) -> Self {
        Self::scalar(&SparsePoly::one(ring), n)
    }

    pub fn from_fn(ring: &Arc<WeightedRing>, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> SparsePoly) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        PolyMatrix { ring: ring.clone(), rows, cols, entries }
    }

    pub fn from_constant(ring: &Arc<WeightedRing>, m: &Matrix) -> Self {
        Self::from_fn(ring, m.rows(), m.cols(), |r, c| SparsePoly::constant(ring, m.get(r, c)))
    }

    pub fn ring(&self) -> &Arc<WeightedRing> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &SparsePoly {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: SparsePoly) {
        self.entries[r * self.cols + c] = p;
    }

    pub fn entries(&self) -> &[SparsePoly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        PolyMatrix::from_fn(&self.ring, self.rows, other.cols, |i, j| {
            let mut acc = SparsePoly::zero(&self.ring);
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = other.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        })
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sum shape");
        PolyMatrix::from_fn(&self.ring, self.rows, self.cols, |r, c| self.get(r, c) + other.get(r, c))
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix difference shape");
        PolyMatrix::from_fn(&self.ring, self.rows, self.cols, |r, c| self.get(r, c) - other.get(r, c))
    }

    pub fn scale(&self, c: Fe) -> PolyMatrix {
        self.map(|p| p.scale(c))
    }

    pub fn map(&self, f: impl Fn(&SparsePoly) -> SparsePoly) -> PolyMatrix {
        PolyMatrix::from_fn(&self.ring, self.rows, self.cols, |r, c| f(self.get(r, c)))
    }

    pub fn try_map(&self, ring: &Arc<WeightedRing>, f: impl Fn(&SparsePoly) -> Result<SparsePoly>) -> Result<PolyMatrix> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix { ring: ring.clone(), rows: self.rows, cols: self.cols, entries })
    }

    pub fn transpose(&self) -> PolyMatrix {
        PolyMatrix::from_fn(&self.ring, self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    /// Reflection in the antidiagonal: `out[r][c] = self[n-1-c][m-1-r]`.
    pub fn antitranspose(&self) -> PolyMatrix {
        let (m, n) = (self.rows, self.cols);
        PolyMatrix::from_fn(&self.ring, n, m, |r, c| self.get(m - 1 - c, n - 1 - r).clone())
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix::from_fn(&self.ring, rows, cols, |r, c| self.get(r0 + r, c0 + c).clone())
    }

    pub fn eval(&self, point: &[Fe]) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).eval(point));
            }
        }
        m
    }

    /// The common degree of the nonzero entries, if they share one.
    pub fn entry_degree(&self) -> Option<u32> {
        let mut deg = None;
        for p in self.entries.iter().filter(|p| !p.is_zero()) {
            let d = p.homogeneous_degree()?;
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        deg
    }

    /// Entrywise `x ↦ m·z` into `target`.
    pub fn substitute_linear(&self, m: &[Vec<Fe>], target: &Arc<WeightedRing>) -> Result<PolyMatrix> {
        self.try_map(target, |p| p.substitute_linear(m, target))
    }

    /// If `self = p·I`, returns `p`.
    pub fn scalar_part(&self) -> Option<SparsePoly> {
        if self.rows != self.cols {
            return None;
        }
        let d = self.get(0, 0).clone();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let e = self.get(r, c);
                if (r == c && *e != d) || (r != c && !e.is_zero()) {
                    return None;
                }
            }
        }
        Some(d)
    }

    /// Determinant by Laplace expansion along rows, memoised on column sets.
    pub fn det(&self) -> Result<SparsePoly> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        if self.rows > 20 {
            return Err(Error::InvalidArgument("symbolic determinant limited to 20×20".into()));
        }
        let n = self.rows;
        // minors[mask] = det of the last popcount(mask) rows on the columns in mask
        let mut memo: BTreeMap<u32, SparsePoly> = BTreeMap::new();
        memo.insert(0, SparsePoly::one(&self.ring));
        let f = *self.ring.field();
        for size in 1..=n {
            let row = n - size;
            let mut next = BTreeMap::new();
            for mask in (0u32..(1 << n)).filter(|m| m.count_ones() as usize == size) {
                let mut acc = SparsePoly::zero(&self.ring);
                let mut sign_pos = 0;
                for c in 0..n {
                    if mask & (1 << c) == 0 {
                        continue;
                    }
                    let e = self.get(row, c);
                    if !e.is_zero() {
                        let sub = &memo[&(mask & !(1 << c))];
                        let t = e * sub;
                        acc = if sign_pos % 2 == 0 { &acc + &t } else { acc.add_scaled(&t, f.neg(f.one())) };
                    }
                    sign_pos += 1;
                }
                next.insert(mask, acc);
            }
            memo = next;
        }
        Ok(memo.remove(&((1u32 << n) - 1)).unwrap_or_else(|| SparsePoly::one(&self.ring)))
    }
}

impl core::ops::Neg for &PolyMatrix {
    type Output = PolyMatrix;
    fn neg(self) -> PolyMatrix {
        self.map(|p| -p)
    }
}
