//! The seeded families of modules whose Hom/Ext are computed: restrictions
//! of `S_y` or of a moment map to a random 6-dimensional linear section.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Fe, FieldSpec};
use crate::homalg::{ext_sheaf, ExtDims, GradedPresentation};
use crate::invariants::{lambda3_ring, sl6_quartic_in};
use crate::mf::{first_acceptable, matrix_rank, random_section, restrict_to_section, section_ring, MatrixFactorization};
use crate::poly::SparsePoly;
use crate::polymat::PolyMatrix;
use crate::spinor::{moment_map, scalar_square, Parity};
use crate::sy::build_sy_in;

/// Seeds tried after the requested one before giving up on a section.
pub const MAX_SECTION_RETRIES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// `coker(S_L + i·x)` on the double fivefold `lP|_L + x² = 0`.
    Sl6X5,
    /// `coker(μ_even|_L + i·x)` on `c_even·P|_L + x² = 0`.
    Spin12X5,
    /// `coker(S_L)` on the quartic fourfold `lP|_L = 0` in `P⁵`.
    Sl6Q4,
    /// `coker(μ_odd|_{L₀} + i·x)` for `L₀` inside the `Λ³` summand.
    Spin12Special,
    /// `coker(μ_odd|_L + i·x)` for a generic `L`.
    Spin12Odd,
}

impl Family {
    pub const ALL: [Family; 5] = [Self::Sl6X5, Self::Spin12X5, Self::Sl6Q4, Self::Spin12Special, Self::Spin12Odd];

    pub fn name(self) -> &'static str {
        match self {
            Self::Sl6X5 => "sl6-x5",
            Self::Spin12X5 => "spin12-x5",
            Self::Sl6Q4 => "sl6-q4",
            Self::Spin12Special => "spin12-special",
            Self::Spin12Odd => "spin12-odd",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }

    /// Rows of the section matrix.
    pub fn section_rows(self) -> usize {
        match self {
            Self::Sl6X5 | Self::Sl6Q4 => 20,
            _ => 32,
        }
    }
}

/// A section matrix together with how it was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub requested_seed: u64,
    pub seed: u64,
    pub retries: usize,
    pub matrix: Vec<Vec<Fe>>,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyInstance {
    pub family: Family,
    pub field: FieldSpec,
    pub section: Section,
    /// The restricted matrix, over `k[z1..z6]`.
    pub s: PolyMatrix,
    /// `s² = q·I`.
    pub q: SparsePoly,
}

/// The 32-row section used for `L₀`: the `Λ³` rows carry `m`, the others vanish.
pub fn lambda3_embedding(m: &[Vec<Fe>]) -> Vec<Vec<Fe>> {
    let mut out = vec![vec![Fe::ZERO; 6]; 32];
    for (k, row) in m.iter().enumerate() {
        out[6 + k] = row.clone();
    }
    out
}

impl FamilyInstance {
    /// Draws a section from `seed`, moving to the next seed while the section
    /// has rank below 6 or the restricted potential vanishes.
    pub fn build(family: Family, field: FieldSpec, seed: u64) -> Result<Self> {
        let z = section_ring(field);
        let source = match family {
            Family::Sl6X5 | Family::Sl6Q4 => {
                let l3 = lambda3_ring(field);
                (build_sy_in(&l3), Some(sl6_quartic_in(&l3)))
            }
            Family::Spin12X5 => (moment_map(field, Parity::Even).matrix, None),
            Family::Spin12Special | Family::Spin12Odd => (moment_map(field, Parity::Odd).matrix, None),
        };
        let ((matrix, rank, s, q), used, retries) = first_acceptable(seed, MAX_SECTION_RETRIES, |sd| {
            let m = match family {
                Family::Spin12Special => lambda3_embedding(&random_section(&field, sd, 20)),
                _ => random_section(&field, sd, family.section_rows()),
            };
            let (s, rank) = restrict_to_section(&source.0, &m, &z)?;
            if rank < 6 {
                return Ok(None);
            }
            let q = match &source.1 {
                Some(p) => p.substitute_linear(&m, &z)?,
                None => scalar_square(&s).map_err(|(r, c)| Error::NotScalarSquare(alloc::format!("entry ({r},{c})")))?,
            };
            Ok((!q.is_zero()).then_some((m, rank, s, q)))
        })?;
        debug_assert_eq!(rank, matrix_rank(&field, &matrix));
        let section = Section { requested_seed: seed, seed: used, retries, matrix, rank };
        Ok(FamilyInstance { family, field, section, s, q })
    }

    pub fn size(&self) -> usize {
        self.s.rows()
    }

    /// The module whose self-Ext is studied.
    pub fn presentation(&self) -> Result<GradedPresentation> {
        match self.family {
            Family::Sl6Q4 => {
                let mf = MatrixFactorization::new(self.s.clone(), self.s.clone(), self.q.clone())?;
                Ok(GradedPresentation::from_mf(&mf))
            }
            _ => GradedPresentation::double_cover(&self.s),
        }
    }

    /// `S_y` restricted along the `Λ³` rows of the section.
    pub fn lambda3_restriction(&self) -> Result<PolyMatrix> {
        if self.family != Family::Spin12Special {
            return Err(Error::InvalidArgument(alloc::format!("{} is not supported on the Λ³ summand", self.family.name())));
        }
        let l3 = lambda3_ring(self.field);
        let rows = &self.section.matrix[6..26];
        build_sy_in(&l3).substitute_linear(rows, self.s.ring())
    }

    /// `(E_{L₀}, G_{L₀})` with `E = coker(B)`, `B = S_{L₀} + i·x·I`, and
    /// `G = coker(−Bᵗ) ≅ coker(S_{L₀}ᵗ + i·x·I)`.
    pub fn blocks(&self) -> Result<(GradedPresentation, GradedPresentation)> {
        let s = self.lambda3_restriction()?;
        Ok((GradedPresentation::double_cover(&s)?, GradedPresentation::double_cover(&s.transpose())?))
    }

    /// Cokernels of the two diagonal blocks of `μ|_{L₀} + i·x·I₁₂` itself.
    /// The lower block is `−Sᵗ + i·x` up to conjugation, so the second module
    /// is the pullback of `G_{L₀}` under `x ↦ −x`.
    pub fn literal_blocks(&self) -> Result<(GradedPresentation, GradedPresentation)> {
        self.lambda3_restriction()?;
        if !self.s.block(0, 6, 6, 6).is_zero() || !self.s.block(6, 0, 6, 6).is_zero() {
            return Err(Error::IdentityFailed("restricted moment matrix is not block diagonal".into()));
        }
        let e = GradedPresentation::double_cover(&self.s.block(0, 0, 6, 6))?;
        let g = GradedPresentation::double_cover(&self.s.block(6, 6, 6, 6))?;
        Ok((e, g))
    }

    /// `Ext^i` of the family's module with itself; `seed` only drives
    /// random projections inside large rank computations.
    pub fn self_ext(&self, i: usize, seed: u64) -> Result<ExtDims> {
        let p = self.presentation()?;
        ext_sheaf(&p, &p, i, seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(Family::parse(f.name()), Some(f));
        }
        assert_eq!(Family::parse("e7"), None);
    }

    #[test]
    fn lambda3_section_has_zero_outer_rows() {
        let f = make_field(313).unwrap();
        let m = lambda3_embedding(&random_section(&f, 3, 20));
        assert!(m[..6].iter().chain(&m[26..]).all(|r| r.iter().all(|x| x.is_zero())));
    }
}
