//! Clifford algebras of diagonal forms, the Clifford group and spinor
//! norm, lifts of orthogonal matrices and the `delta^2` cocycle.

mod algebra;
mod coeff;
mod delta2;
mod lift;

pub use algebra::{CliffordAlgebra, CliffordElement, Parity};
pub use coeff::{CoeffField, KElem};
pub use delta2::{delta2_via_clifford, KummerRep};
pub use lift::{extend_isometry, lift, reflection, reflection_factorize, twisted_conjugation, IsometryExtension, Lift};
