//! Exact analysis of 2-variable weighted shifts.
//!
//! A commuting pair of weighted shifts `W_(α,β) = (T1, T2)` on `ℓ²(Z₊²)` is
//! determined by its weight diagram. This crate stores the squared weights
//! `x_k = α_k²` and `y_k = β_k²` as exact rationals and decides, on a finite
//! window of the lattice, the quasinormality notions for such pairs
//! (matricial, joint, spherical), the fixed points of the toral and
//! spherical Aluthge transforms, sphericality of powers, and the moment
//! theory of finitely atomic Berger measures.
//!
//! ```
//! use shiftlab::{builtins, classify};
//!
//! let d = builtins::ex1();
//! let report = classify::classify(&d).unwrap();
//! assert!(report.spherical.holds());
//! assert_eq!(report.spherical.constant.as_ref().unwrap().to_string(), "1");
//! assert!(!report.joint.holds());
//! ```
//!
//! Verdicts computed on a window carry a [`Status`]: a predicate either
//! fails with an exact [`Witness`], holds on the window, or holds
//! everywhere when the diagram's generator certifies it.

pub mod aluthge;
pub mod berger;
pub mod builtins;
pub mod classify;
pub mod cli;
pub mod error;
pub mod format;
pub mod lattice;
pub mod moments;
pub mod numeric;
pub mod powers;
pub mod rational;

pub use error::{Error, Result};
pub use lattice::{
    check_commutative, generate_constant, generate_explicit, generate_flat_above_row_zero,
    generate_ts, moment, LatticePoint, PredicateVerdict, Status, TailRule, WeightDiagram, Window,
    Witness,
};
pub use rational::{q, Rational};
