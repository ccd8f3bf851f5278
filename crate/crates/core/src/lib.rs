//! Exact computations for zero loci of homogeneous bundles on products of
//! Grassmannians: Schur-functor decompositions, Borel-Weil-Bott cohomology,
//! Chow rings and Riemann-Roch, Koszul-based Hodge diamonds, and the
//! numerical search for Fano varieties of K3 and Calabi-Yau type.

pub mod bbw;
pub mod bundle;
pub mod chow;
pub mod dsl;
mod error;
pub mod hodge;
pub(crate) mod json_int;
pub mod numerology;
pub mod report;
pub mod schur;

pub use bundle::{AmbientSpace, BundleExpr, Factor, Taut, ZeroLocusSpec};
pub use error::{Error, Result};
