//! Rank of the differential of `L ↦ P|_L`: the span of `z_j·(∂P/∂x_i)(m·z)`
//! inside the quartics in six variables.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Fe, FieldSpec};
use crate::linalg::{rank, Matrix};
use crate::mf::{random_section, section_ring};
use crate::poly::SparsePoly;

/// `dim S⁴C⁶`.
pub const FULL_RANK: usize = 126;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Full,
    Deficient,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Full => "full",
            Verdict::Deficient => "deficient",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominanceReport {
    pub seed: u64,
    pub prime: u32,
    pub rank: usize,
    /// `rank` reached the number of quartic monomials.
    pub verdict: Verdict,
    /// FNV-1a-64 of the coefficient matrix.
    pub matrix_hash: u64,
}

/// The `(N·6) × dim S⁴` coefficient matrix of `z_j·(∂f/∂x_i)(m·z)`, rows
/// ordered by `i` then `j`, columns by the graded-lex monomial order.
pub fn pullback_matrix(f: &SparsePoly, m: &[Vec<Fe>]) -> Result<Matrix> {
    let field = *f.field();
    let z = section_ring(field);
    let basis = z.monomial_basis(4);
    let partials = f.partials();
    let mut out = Matrix::zeros(partials.len() * 6, basis.len());
    for (i, d) in partials.iter().enumerate() {
        let pulled = d.substitute_linear(m, &z)?;
        if !pulled.is_zero() && pulled.homogeneous_degree() != Some(3) {
            return Err(Error::InvalidArgument("pullback span needs a quartic".into()));
        }
        for j in 0..6 {
            let q = &pulled * &SparsePoly::var(&z, j);
            for (c, mono) in basis.iter().enumerate() {
                out.set(i * 6 + j, c, q.coefficient(mono));
            }
        }
    }
    Ok(out)
}

pub fn fnv1a64(bytes: impl IntoIterator<Item = u8>) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Hash of the dimensions and entries (`re`, `im` as little-endian `u32`).
fn matrix_hash(m: &Matrix) -> u64 {
    let head = [m.rows() as u32, m.cols() as u32];
    let words = head.into_iter().chain((0..m.rows()).flat_map(|r| m.row(r).iter().flat_map(|e| [e.re, e.im])));
    fnv1a64(words.flat_map(u32::to_le_bytes))
}

/// Rank of the pullback span of `f` along `m`; `seed` is recorded only.
pub fn pullback_span_rank(f: &SparsePoly, m: &[Vec<Fe>], seed: u64) -> Result<DominanceReport> {
    let field = f.field();
    let mat = pullback_matrix(f, m)?;
    let r = rank(field, &mat);
    let verdict = if r == FULL_RANK { Verdict::Full } else { Verdict::Deficient };
    Ok(DominanceReport { seed, prime: field.prime(), rank: r, verdict, matrix_hash: matrix_hash(&mat) })
}

/// One trial per seed `seed0, seed0 + 1, …` with an `N × 6` section, `N` the
/// number of variables of `f`.
pub fn dominance_trials(f: &SparsePoly, field: &FieldSpec, trials: usize, seed0: u64) -> Result<Vec<DominanceReport>> {
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    let n = f.ring().nvars();
    (0..trials as u64)
        .map(|t| {
            let seed = seed0.wrapping_add(t);
            pullback_span_rank(f, &random_section(field, seed, n), seed)
        })
        .collect()
}

/// Full rank at a single point over `F_p` already forces full rank generically.
pub fn dominance_verdict(reports: &[DominanceReport]) -> Verdict {
    if reports.iter().any(|r| r.verdict == Verdict::Full) {
        Verdict::Full
    } else {
        Verdict::Deficient
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::invariants::igusa_quartic;
    use alloc::vec;

    #[test]
    fn zero_section_has_rank_zero() {
        let f = make_field(313).unwrap();
        let p = igusa_quartic(f);
        let r = pullback_span_rank(&p, &vec![vec![Fe::ZERO; 6]; 32], 0).unwrap();
        assert_eq!(r.rank, 0);
        assert_eq!(dominance_verdict(&[r]), Verdict::Deficient);
    }

    #[test]
    fn zero_trials_rejected() {
        let f = make_field(313).unwrap();
        assert!(dominance_trials(&igusa_quartic(f), &f, 0, 1).is_err());
    }

    #[test]
    fn fnv_reference_values() {
        assert_eq!(fnv1a64([]), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a64(*b"a"), 0xaf63_dc4c_8601_ec8c);
        assert_eq!(fnv1a64(*b"foobar"), 0x8594_4171_f739_67e8);
    }
}
