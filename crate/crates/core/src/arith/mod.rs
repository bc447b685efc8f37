//! Coefficient layer: exact rationals, factorization, square classes,
//! Hilbert symbols and two-torsion Brauer classes of `Q`.

mod classes;
mod factor;
mod rat;

pub use classes::{
    candidate_places, cup, hilbert, hilbert_classes, jacobi, square_class, BrClass, Place, SquareClass,
};
pub use factor::{factor, factor_u128, is_prime};
pub use rat::Rat;
