//! Sequential crossover of words and languages.
//!
//! Two words sharing a non-empty factor exchange their tails at one
//! occurrence of it: `u1·x·v1` and `u2·x·v2` produce `u1·x·v2` (and
//! `u2·x·v1`). This crate provides the single-step operation with derivation
//! traces, the iterated closure computed exactly as a finite automaton,
//! base-set extraction with the decomposition check, decision procedures for
//! crossover and sub-regular language classes, independent splicing reference
//! engines, and the brute-force oracles backing the test suites.

pub mod automata;
pub mod classify;
pub mod closure;
mod error;
pub mod finlang;
pub mod oracle;
pub mod splicing;
pub mod words;

pub use error::Error;
