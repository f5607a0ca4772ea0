//! Computations in free nilpotent pro-ℓ groups through truncated Magnus
//! expansions, together with the finite-group cohomology needed to compare
//! lifting obstructions with Massey products.
//!
//! Coefficients are always `Z/ℓ^k` for a single prime `ℓ`; see [`coeff`].

pub mod coeff;
pub mod cohomology;
pub mod error;
pub mod magnus;
pub mod massey;
pub mod obstruction;
pub mod unipotent;

pub use coeff::{ModulusContext, Residue};
pub use cohomology::{Cochain, FiniteGroup, FreeGroupAction, GModule, TwistedCocycle};
pub use error::{Error, Result};
pub use magnus::{FreeWord, GroupElement, LieBasis, MonomialIndex, TruncatedSeries};
pub use massey::DefiningSystem;
pub use unipotent::{Character, UnipotentMatrix};
