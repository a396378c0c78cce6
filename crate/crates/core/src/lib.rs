//! Exact elimination theory over the rationals.
//!
//! Resultants, discriminants and Chow forms are produced as torsions of based
//! exact complexes: the graded pieces of the Koszul complex of a system of
//! forms on projective space. Around that core sit the tools for probing the
//! resulting polynomials under one-parameter subgroups (weights, degeneration
//! limits, log-slope fits) and for estimating their Mahler measure on
//! projective space by Monte-Carlo integration.
//!
//! Everything algebraic runs in exact arithmetic ([`Rational`]); floating point
//! only appears in the slope fits and the Monte-Carlo estimator.

pub mod cli;
pub mod complexes;
pub mod elimination;
pub mod error;
pub mod koszul;
pub mod linalg;
pub mod mahler;
pub mod poly;
pub mod rational;
pub mod stability;

pub use complexes::{BasedComplex, TorsionFactor, TorsionResult};
pub use elimination::FormSystem;
pub use error::{Error, Result};
pub use koszul::{KoszulBasisElement, KoszulSpec};
pub use linalg::Matrix;
pub use mahler::ThetaEstimate;
pub use poly::{ExponentVector, MultiPoly};
pub use rational::Rational;
pub use stability::{OnePS, WeightDecomposition};
