//! Right-linear lattice (RLL) expressions over infinite words.
//!
//! Expressions are compiled to alternating parity automata through their
//! Fischer-Ladner closure; membership of lasso words is decided both by
//! solving the evaluation parity game and by direct fixpoint iteration.
//! The crate also provides syntactic complement, translations to and from
//! the linear-time mu-calculus, and proof checkers for the equational
//! calculus and a Hilbert system for the mu-calculus.

pub mod algebra;
pub mod automaton;
pub mod calculus;
pub mod cli;
pub mod closure;
pub mod corpus;
pub mod error;
pub mod game;
pub mod semantics;
pub mod syntax;

pub use error::{Error, Result};
pub use syntax::{Alphabet, Expr, Formula, Letter};
