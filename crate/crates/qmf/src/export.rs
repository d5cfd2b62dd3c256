//! Plain-text polynomial files and matrix-factorization directories.
//!
//! A polynomial file has one term per line, `coeff e1 e2 … en`, in the
//! graded-lex monomial order. Coefficients are residues in `[0, p)`, or
//! `a+b*i` over `F_{p²}`.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde_json::json;

use qmf_core::families::{Family, FamilyInstance};
use qmf_core::invariants::{igusa_quartic, sl6_quartic};
use qmf_core::mf::double_cover_mf;
use qmf_core::polymat::PolyMatrix;
use qmf_core::spinor::{moment_map, verify_block_structure, verify_mf_even, verify_mf_odd, Parity};
use qmf_core::sy::build_sy;
use qmf_core::{Fe, FieldSpec, SparsePoly, WeightedRing};

use crate::error::{io_err, Error, Result};
use crate::report::fe_json;

pub const KINDS: [&str; 6] = ["igusa", "sl6-quartic", "sy", "moment-even", "moment-odd", "mf"];

pub fn poly_to_text(p: &SparsePoly) -> String {
    let mut out = String::new();
    for (m, c) in p.terms() {
        out.push_str(&c.to_string());
        for e in m.exps() {
            out.push(' ');
            out.push_str(&e.to_string());
        }
        out.push('\n');
    }
    out
}

fn parse_coeff(field: &FieldSpec, s: &str) -> Option<Fe> {
    let (re, im) = match s.strip_suffix("*i") {
        Some(rest) => {
            let (a, b) = rest.split_once('+')?;
            (a.parse::<u64>().ok()?, b.parse::<u64>().ok()?)
        }
        None => (s.parse::<u64>().ok()?, 0),
    };
    let i = field.sqrt_neg_one();
    Some(field.add(field.from_u64(re), field.mul(field.from_u64(im), i)))
}

pub fn poly_from_text(ring: &Arc<WeightedRing>, text: &str) -> Result<SparsePoly> {
    let field = *ring.field();
    let mut terms = Vec::new();
    for (k, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let bad = || Error::Invalid(format!("line {}: malformed term {line:?}", k + 1));
        let mut parts = line.split_whitespace();
        let c = parts.next().and_then(|s| parse_coeff(&field, s)).ok_or_else(bad)?;
        let exps: Vec<u16> = parts.map(str::parse).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
        if exps.len() != ring.nvars() {
            return Err(bad());
        }
        terms.push((ring.monomial(exps), c));
    }
    Ok(SparsePoly::from_terms(ring, terms))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(io_err(path))
}

fn write_matrix(dir: &Path, m: &PolyMatrix) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            write(&dir.join(format!("entry_{r}_{c}.txt")), &poly_to_text(m.get(r, c)))?;
        }
    }
    Ok(())
}

fn ring_json(ring: &WeightedRing) -> serde_json::Value {
    json!({ "variables": ring.var_names(), "weights": ring.weights() })
}

fn write_manifest(dir: &Path, v: serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(&v).expect("manifest serializes") + "\n";
    write(&dir.join("manifest.json"), &text)
}

/// Writes `kind` under `dir`; `family` and `seed` are used by `mf`.
pub fn export(kind: &str, field: FieldSpec, dir: &Path, family: Option<Family>, seed: u64) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let prime = field.prime();
    match kind {
        "igusa" | "sl6-quartic" => {
            let p = if kind == "igusa" { igusa_quartic(field) } else { sl6_quartic(field) };
            write(&dir.join(format!("{kind}.txt")), &poly_to_text(&p))?;
            write_manifest(dir, json!({ "kind": kind, "prime": prime, "ring": ring_json(p.ring()) }))
        }
        "sy" => {
            let sy = build_sy(field);
            write_matrix(&dir.join("S"), &sy)?;
            write_manifest(dir, json!({ "kind": kind, "prime": prime, "ring": ring_json(sy.ring()), "size": 6 }))
        }
        "moment-even" | "moment-odd" => {
            let parity = if kind == "moment-even" { Parity::Even } else { Parity::Odd };
            let mu = moment_map(field, parity);
            write_matrix(&dir.join("mu"), &mu.matrix)?;
            let mut constants = serde_json::Map::new();
            if parity == Parity::Even {
                constants.insert("c_even".into(), fe_json(&field, verify_mf_even(field)?.c_even));
            } else {
                constants.insert("lambda".into(), fe_json(&field, verify_mf_odd(field)?.lambda));
                constants.insert("s".into(), fe_json(&field, verify_block_structure(field)?.s));
            }
            write_manifest(dir, json!({ "kind": kind, "prime": prime, "ring": ring_json(mu.matrix.ring()), "constants": constants }))
        }
        "mf" => {
            let family = family.ok_or_else(|| Error::Invalid("mf export needs --family".into()))?;
            let inst = FamilyInstance::build(family, field, seed)?;
            let mf = match family {
                Family::Sl6Q4 => qmf_core::mf::MatrixFactorization::new(inst.s.clone(), inst.s.clone(), inst.q.clone())?,
                _ => double_cover_mf(&inst.s)?,
            };
            write(&dir.join("potential.txt"), &poly_to_text(&mf.w))?;
            write_matrix(&dir.join("B"), &mf.b)?;
            write_matrix(&dir.join("C"), &mf.c)?;
            write_manifest(
                dir,
                json!({
                    "kind": "mf",
                    "family": family.name(),
                    "prime": prime,
                    "seed": seed,
                    "section_seed": inst.section.seed,
                    "n": mf.n,
                    "ring": ring_json(mf.ring()),
                }),
            )
        }
        other => Err(Error::Invalid(format!("unknown export kind {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qmf_core::make_field;

    #[test]
    fn text_round_trip() {
        for p in [313, 331] {
            let f = make_field(p).unwrap();
            let q = sl6_quartic(f);
            let back = poly_from_text(q.ring(), &poly_to_text(&q)).unwrap();
            assert_eq!(back, q);
        }
    }

    #[test]
    fn malformed_line_is_rejected() {
        let f = make_field(313).unwrap();
        let r = WeightedRing::standard(f, "z", 2);
        assert!(poly_from_text(&r, "3 1\n").is_err());
        assert!(poly_from_text(&r, "x 1 0\n").is_err());
    }
}
