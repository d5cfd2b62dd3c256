//! Exact algebra over prime fields for quartic double fivefolds: invariant
//! quartics, Clifford moment maps, matrix factorizations, graded Hom/Ext and
//! weight-multiplicity plethysm.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod error;
pub mod dominance;
pub mod families;
pub mod field;
pub mod homalg;
pub mod invariants;
pub mod lie;
pub mod linalg;
pub mod mf;
pub mod poly;
pub mod polymat;
pub mod parse;
pub mod rng;
pub mod spinor;
pub mod sy;

pub use error::{Error, Result};
pub use field::{make_field, Fe, FieldSpec};
pub use poly::{SparsePoly, WeightedRing};
pub use rng::Rng;
