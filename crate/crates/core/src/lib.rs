//! Constant-domain basic first-order logic: syntax, finite Kripke semantics
//! over transitive (not necessarily reflexive) frames, model surgery, a
//! natural-deduction proof kernel with its relative variant, and bounded
//! countermodel search.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod model_ops;
pub mod proofs;
pub mod search;
pub mod semantics;
pub mod syntax;

pub use semantics::{Assignment, KripkeModel, World};
pub use syntax::{Formula, Signature, Term};
