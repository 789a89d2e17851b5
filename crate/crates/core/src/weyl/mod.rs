//! PBW algebras: Weyl pairs, twist blocks, central parameters.

mod element;
mod groebner;
mod ideal;
mod order;
mod signature;

pub use element::WeylElement;
pub use groebner::{groebner, GroebnerBasis};
pub use ideal::{eliminate, initial_ideal_weight, intersect_univariate, LeftIdeal, NfDependency, WeightedBasis};
pub use order::{MonomialOrder, Tiebreak};
pub use signature::{d_name, Signature, SignatureBuilder, VarKind};
