pub mod approx;
pub mod boltzmann;
pub mod cli;
pub mod dist;
pub mod error;
pub mod format;
pub mod markov;
pub mod multivariate;
pub mod ket;
pub mod multiset;
pub mod nomial;
pub mod par;
pub mod verify;

pub use error::{Error, Result};
pub use multiset::{GroundSet, Multiset, Natural};
pub use par::Execution;
