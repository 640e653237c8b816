//! Degrees of indistinguishability in single-photon interferometry, and
//! finite-model checks of the quasi-set apparatus that tries to describe them.
//!
//! The crate has two halves that meet in [`qmetric::from_pid_table`]:
//!
//! - [`onephoton`] and [`zwm`] compute Mandel's decomposition of a one-photon,
//!   two-source density operator, the degree of coherence, fringe visibility,
//!   and a parametric model of the two-crystal induced-coherence experiment.
//! - [`quasiset`] and [`qmetric`] build finite universes of micro- and
//!   macro-atoms, check the equivalence and substitutivity axioms, brute-force
//!   the permutation theorem, and verify quasi-metric / differentiation spaces
//!   with graded indistinguishability and a `[0, 1]` Heyting semantics.
//!
//! Real numbers are native `f64`; "extensional equality" of reals is equality
//! within [`ANALYTIC_TOL`].

#![forbid(unsafe_code)]

pub mod onephoton;
pub mod qmetric;
pub mod quasiset;
pub mod report;
pub mod sampling;
pub mod zwm;

pub use num_complex::Complex64;

/// Tolerance for analytic identities (decomposition, coherence, axioms).
pub const ANALYTIC_TOL: f64 = 1e-12;

/// Tolerance for user-supplied inputs, which usually arrive rounded.
pub const INPUT_TOL: f64 = 1e-9;
