//! Galois algebras over Q with explicit group actions, trace forms and
//! fixed subalgebras.

mod corpus;
mod etale;
mod torsor;

pub use corpus::{Corpus, TorsorRecord};
pub use etale::EtaleAlgebra;
pub use torsor::{Construction, FixedSubalgebra, GaloisAlgebra};
