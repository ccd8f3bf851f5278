//! Partitions, weights, Littlewood-Richardson products, Schur characters and
//! decomposition of homogeneous bundles into irreducible summands.

mod character;
mod levi;
mod lr;
mod partition;
mod weight;

pub use character::{levi_character, schur_polynomial, Exponent, LaurentCharacter};
pub use levi::{decompose_by_peeling, decompose_levi, straighten, IrrepSummand, LeviRep};
pub use lr::{lr_mult, lr_mult_bounded};
pub use partition::Partition;
pub use weight::{weyl_dim, GLWeight};

use crate::bundle::{AmbientSpace, BundleExpr};
use crate::Result;

/// Which power operation to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerKind {
    Wedge,
    Sym,
}

/// Character of a bundle expression on the Chern roots of the ambient.
pub fn character_of(expr: &BundleExpr, ambient: &AmbientSpace) -> Result<LaurentCharacter> {
    expr.character(ambient)
}

/// Decomposes a genuine character into irreducible summands, after checking
/// it is symmetric within each block of roots.
pub fn decompose(chi: &LaurentCharacter, ambient: &AmbientSpace) -> Result<Vec<IrrepSummand>> {
    if chi.blocks() != ambient.blocks().as_slice() {
        return Err(crate::Error::Invalid(format!(
            "character has root blocks {:?}, ambient expects {:?}",
            chi.blocks(),
            ambient.blocks()
        )));
    }
    chi.check_symmetric()?;
    decompose_levi(chi).summands()
}

/// Character of `∧^q expr` or `Sym^q expr`.
pub fn power(expr: &BundleExpr, kind: PowerKind, q: usize, ambient: &AmbientSpace) -> Result<LaurentCharacter> {
    let chi = expr.character(ambient)?;
    match kind {
        PowerKind::Wedge => chi.wedge(q),
        PowerKind::Sym => chi.sym(q),
    }
}
