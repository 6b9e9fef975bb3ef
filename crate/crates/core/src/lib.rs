//! Symbolic verification engine for ν-grassmannians.
//!
//! The crate builds the chart supermatrices and coordinate transitions of
//! `νGr_{k|l}(m|n)`, the canonical super vector bundle over it, and Gauss
//! supermatrices of finite-type super vector bundles, and checks the
//! identities relating them (gluing cocycles, pseudo-unit calculus, the
//! deformation retraction of projective superspace, homotopy endpoints).
//!
//! Everything is exact: coefficients are rational functions with rational
//! coefficients. Large identity suites can instead be checked by seeded
//! evaluation over GF(2^61 - 1).

pub mod atlas;
pub mod bundle;
pub mod gauss;
pub mod superalgebra;
pub mod supermatrix;
