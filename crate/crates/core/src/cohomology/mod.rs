//! Cochains of finite groups with coefficients in free `Z/ℓ^k`-modules,
//! nonabelian twisted cocycles, classifying cocycles of extensions and the
//! connecting map `δ_n` for the lower central series of a free group.
//!
//! Cohomology groups are never built. Every question is a membership
//! question answered by a linear solve over `Z/ℓ^k` that returns either a
//! witness or a certificate.

mod action;
mod cochain;
mod delta;
mod extension;
mod group;
mod module;
mod twisted;

pub use action::{ActionShape, FreeGroupAction};
pub use cochain::{CoboundaryCheck, CoboundarySolver, Cochain};
pub use delta::{delta_n, delta_n_with_lift, search_lift, DeltaN};
pub use extension::{
    extension_two_cocycle, extension_two_cocycle_pullback, AbelianExtension, TableExtension, UnipotentExtension,
};
pub use group::{FiniteGroup, GroupSpec};
pub use module::GModule;
pub use twisted::{ActedGroup, TwistedCocycle};
