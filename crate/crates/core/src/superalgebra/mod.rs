//! Exact supercommutative algebra over rational functions.
//!
//! Elements are finite sums `Σ c_μ e^μ` where `e^μ` is an ordered product of
//! odd generators and `c_μ` is a rational function in the even symbols of an
//! [`AlgebraContext`]. Constrained even symbols carry a rewrite `s² → r`,
//! which is applied to every polynomial so normal forms stay multilinear in
//! those symbols.

mod context;
mod element;
pub mod modular;
mod poly;
mod rational;
mod substitute;

use thiserror::Error;

pub use context::{AlgebraContext, ContextBuilder, EvenSymbol};
pub use element::{GrassmannElement, OddMonomial, Parity};
pub use modular::{equals_random, ModAlgebra, ModElement, PointSampler, DEFAULT_TRIALS, MAX_ODD, MODULUS};
pub use poly::{Monomial, Poly};
pub use rational::RationalCoefficient;
pub use substitute::{substitute, EvalFailure, EvalTarget, Evaluator, ExactTarget, Substitution};

pub(crate) use context::rational;
pub(crate) use element::same_context;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("operands belong to different algebra contexts")]
    ContextMismatch,
    #[error("element has zero body: not invertible on any chart domain")]
    NotInvertible,
    #[error("the odd involution needs at least one odd generator")]
    NoOddGenerators,
    #[error("image of {symbol} must be {expected}, found {found}")]
    ParityViolation {
        symbol: String,
        expected: Parity,
        found: Parity,
    },
    #[error("symbol {0} has no assigned image")]
    UnassignedSymbol(String),
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error("invalid algebra context: {0}")]
    InvalidContext(String),
    #[error("only {found} of {wanted} evaluation points were usable")]
    InsufficientPoints { wanted: usize, found: usize },
}
