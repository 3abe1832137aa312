//! Symbolic-numeric toolkit for the renormgroup-symmetry analysis of
//! boundary value problems.
//!
//! The workflow mirrors the four steps of the algorithm: extend a system of
//! differential equations and compute its admitted Lie point symmetries
//! ([`symmetry::determining`]), restrict the admitted algebra on the boundary
//! manifold ([`symmetry::restrict`]), and construct boundary value problem
//! solutions from the resulting renormgroup invariants
//! ([`symmetry::invariant_solution`]). Every closed-form object produced by
//! the symbolic layer is cross-checked by independent numerics
//! ([`numerics`], [`verify`]).

#![forbid(unsafe_code)]

pub mod expr;
pub mod jet;
pub mod numerics;
pub mod scenarios;
pub mod symmetry;

pub use expr::{Expr, Func, Irr, JetVar, Symbol, Q};
pub use jet::ModelSystem;
pub use symmetry::Generator;
