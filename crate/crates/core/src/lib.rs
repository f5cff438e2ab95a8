//! Computable ordinal notation systems.
//!
//! One shared term type ([`OrdTerm`]) is interpreted in five systems
//! ([`SystemId`]): the Bachmann–Howard system `BH`, the Π₃ and Π_N
//! reflection systems, the Π¹₁ system with a Mostowski collapse, and the
//! system built over the first stable-limit constant 𝕀.  Every system
//! gets a total comparison ([`order::compare`]), a syntactic validity
//! filter ([`systems::validate`]), bounded enumeration and the support /
//! hull calculus used by both.  The [`harness`] module turns these into
//! exhaustive and randomized checks over bounded universes.

pub mod collapse;
pub mod error;
pub mod finite_fn;
pub mod harness;
pub mod hull;
pub mod order;
pub mod systems;
pub mod terms;

pub use error::{Error, Result};
pub use finite_fn::FiniteFn;
pub use order::compare;
pub use systems::{Budget, SystemId, Verdict};
pub use terms::{Const, Mult, Node, OrdTerm, PsiIndex};
