//! The `6×6` quadratic matrix `S_y` on `Λ³C⁶` and an independent
//! construction of it from the bilinear map `L`.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::Result;
use crate::field::FieldSpec;
use crate::invariants::{lambda3_ring, triples6};
use crate::parse::{indexed_names, parse_matrix};
use crate::poly::{SparsePoly, WeightedRing};
use crate::polymat::PolyMatrix;
use crate::spinor::{mask_of, wedge_sign, FULL};

/// `S_y` in the basis `u1 … u6`, entries in `y1 … y20`.
pub const SY_LITERAL: &str = r"
{{y_10*y_11-y_9*y_12+y_8*y_13+y_7*y_14-y_6*y_15+y_5*y_16-y_4*y_17+
y_3*y_18-y_2*y_19+y_1*y_20,
2*(y_13*y_14-y_12*y_15+y_11*y_16),
2*(y_13*y_17-y_12*y_18+y_11*y_19),
2*(y_15*y_17-y_14*y_18+y_11*y_20),
2*(y_16*y_17-y_14*y_19+y_12*y_20),
2*(y_16*y_18-y_15*y_19+y_13*y_20)},

{2*(-y_7*y_8+y_6*y_9-y_5*y_10),
-y_10*y_11+y_9*y_12-y_8*y_13-y_7*y_14+y_6*y_15-y_5*y_16-y_4*y_17+
y_3*y_18-y_2*y_19+y_1*y_20,
2*(-y_7*y_17+y_6*y_18-y_5*y_19),
2*(-y_9*y_17+y_8*y_18-y_5*y_20),
2*(-y_10*y_17+y_8*y_19-y_6*y_20),
2*(-y_10*y_18+y_9*y_19-y_7*y_20)},

{2*(y_4*y_8-y_3*y_9+y_2*y_10),
2*(y_4*y_14-y_3*y_15+y_2*y_16),
-y_10*y_11+y_9*y_12-y_8*y_13+y_7*y_14-y_6*y_15+y_5*y_16+y_4*y_17-
y_3*y_18+y_2*y_19+y_1*y_20,
2*(y_9*y_14-y_8*y_15+y_2*y_20),
2*(y_10*y_14-y_8*y_16+y_3*y_20),
2*(y_10*y_15-y_9*y_16+y_4*y_20)},

{2*(-y_4*y_6+y_3*y_7-y_1*y_10),
2*(-y_4*y_12+y_3*y_13-y_1*y_16),
2*(-y_7*y_12+y_6*y_13-y_1*y_19),
-y_10*y_11-y_9*y_12+y_8*y_13-y_7*y_14+y_6*y_15+y_5*y_16+y_4*y_17-
y_3*y_18-y_2*y_19-y_1*y_20,
2*(-y_10*y_12+y_6*y_16-y_3*y_19),
2*(-y_10*y_13+y_7*y_16-y_4*y_19)},

{2*(y_4*y_5-y_2*y_7+y_1*y_9),
2*(y_4*y_11-y_2*y_13+y_1*y_15),
2*(y_7*y_11-y_5*y_13+y_1*y_18),
2*(y_9*y_11-y_5*y_15+y_2*y_18),
 y_10*y_11+y_9*y_12+y_8*y_13-y_7*y_14-y_6*y_15-y_5*y_16+y_4*y_17+
y_3*y_18+y_2*y_19-y_1*y_20,
2*(y_9*y_13-y_7*y_15+y_4*y_18)},

{2*(-y_3*y_5+y_2*y_6-y_1*y_8),
2*(-y_3*y_11+y_2*y_12-y_1*y_14),
2*(-y_6*y_11+y_5*y_12-y_1*y_17),
2*(-y_8*y_11+y_5*y_14-y_2*y_17),
2*(-y_8*y_12+y_6*y_14-y_3*y_17), 
y_10*y_11-y_9*y_12-y_8*y_13+y_7*y_14+y_6*y_15-y_5*y_16-y_4*y_17-
y_3*y_18+y_2*y_19-y_1*y_20}}
";

/// Parses [`SY_LITERAL`] over `field`.
pub fn build_sy(field: FieldSpec) -> PolyMatrix {
    build_sy_in(&lambda3_ring(field))
}

pub fn build_sy_in(ring: &Arc<WeightedRing>) -> PolyMatrix {
    parse_matrix(ring, SY_LITERAL, indexed_names("y", 20)).expect("S_y literal parses")
}

/// The matrix whose row `j` is `L(u_j ∧ y, y)`, where
/// `(z ⊗ 1) ∧ D3(y) = u1∧…∧u6 ⊗ L(z, y)` and
/// `D3(u_a∧u_b∧u_c) = u_b∧u_c ⊗ u_a − u_a∧u_c ⊗ u_b + u_a∧u_b ⊗ u_c`.
pub fn kimura_sato_oracle(ring: &Arc<WeightedRing>) -> Result<PolyMatrix> {
    // y as an element of Λ³ with linear coefficients
    let y: Vec<(u8, SparsePoly)> = triples6()
        .iter()
        .enumerate()
        .map(|(k, t)| (mask_of(t), SparsePoly::var(ring, k)))
        .collect();
    // D3(y) as a list of (Λ² mask, index, coefficient)
    let f = *ring.field();
    let mut d3: Vec<(u8, usize, SparsePoly)> = Vec::new();
    for (t, (mask, c)) in triples6().iter().zip(&y) {
        for r in 0..3 {
            let rest = mask & !(1u8 << t[r]);
            let coef = if (2 - r) % 2 == 0 { c.clone() } else { c.scale(f.neg(f.one())) };
            d3.push((rest, t[r], coef));
        }
    }
    let mut out = PolyMatrix::zeros(ring, 6, 6);
    for j in 0..6 {
        // θ ∧ y for θ = u_j
        let mut z: BTreeMap<u8, SparsePoly> = BTreeMap::new();
        for (mask, c) in &y {
            if let Some(s) = wedge_sign(1 << j, *mask) {
                let e = z.entry((1u8 << j) | mask).or_insert_with(|| SparsePoly::zero(ring));
                *e = e.add_scaled(c, f.from_i64(s as i64));
            }
        }
        for (zm, zc) in &z {
            for (rest, i, c) in &d3 {
                if zm | rest != FULL {
                    continue;
                }
                if let Some(s) = wedge_sign(*zm, *rest) {
                    let cur = out.get(j, *i).add_scaled(&(zc * c), f.from_i64(s as i64));
                    out.set(j, *i, cur);
                }
            }
        }
    }
    Ok(out)
}

/// If `a = σ·b` for a single scalar `σ`, returns it (`None` when `b = 0`).
pub fn proportionality(a: &PolyMatrix, b: &PolyMatrix) -> Option<Option<crate::field::Fe>> {
    let f = *a.ring().field();
    let mut sigma = None;
    for (pa, pb) in a.entries().iter().zip(b.entries()) {
        if pb.is_zero() {
            if !pa.is_zero() {
                return None;
            }
            continue;
        }
        let (m, cb) = pb.terms().next().expect("nonzero");
        let s = f.div(pa.coefficient(m), *cb);
        if *pa != pb.scale(s) {
            return None;
        }
        match sigma {
            None => sigma = Some(s),
            Some(t) if t != s => return None,
            _ => {}
        }
    }
    Some(sigma)
}
