//! Numerical verification lab for the radial Schrödinger-type operator
//! A = (1 + r^α)Δ − r^β on R^N with N ≥ 3, α > 2, β > α − 2.
//!
//! The crate computes, per angular channel, a symmetric discretization of A
//! in its natural weighted measure r^{N−1} dr / a(r), and on top of it:
//!
//! * Lyapunov constants for φ = 1 + r^γ and the reverse Hölder
//!   classification of the normalized potential Ṽ = V/a (`operator`);
//! * the critical-radius auxiliary function m, its decay-exponent fit, and
//!   sampled reverse Hölder constants (`mfunc`, `ball`);
//! * spectra, ground states, and accumulation diagnostics (`spectrum`);
//! * Crank–Nicolson evolution with positivity/domination probes, decay of
//!   T(t)𝟙, and heat-kernel-diagonal ultracontractivity surrogates
//!   (`semigroup`);
//! * the radial Green function at the origin with decay-bound constant
//!   fits, resolvent solves, and weighted-estimate ratio tables (`green`);
//! * dissipativity shift/angle constants and resolvent-norm ray scans
//!   (`sector`).
//!
//! `xcheck` holds independent re-implementations (different decompositions
//! and refinement strategies) used by the test and verification suites.

pub mod ball;
pub mod discrete;
pub mod error;
pub mod green;
pub mod grid;
pub mod mfunc;
pub mod operator;
pub mod quad;
pub mod sector;
pub mod semigroup;
pub mod special;
pub mod spectrum;
pub mod tridiag;
pub mod validation;
pub mod xcheck;

pub use ball::{ball_integral_radial, ball_volume, BallIntegralSpec};
pub use discrete::{apply_operator, assemble_operator, BoundaryKind, DiscreteOperator};
pub use error::{Error, Result};
pub use green::{green_at_origin, solve_resolvent, GreenSolution, WeightedEstimateSpec};
pub use grid::{build_grid, RadialGrid};
pub use mfunc::{estimate_rh_constant, fit_m_exponent, m_function, MEstimate, RhConstantReport};
pub use operator::{
    classify_reverse_holder, eval_coefficients, lyapunov_constant, CoefficientField,
    LyapunovProbe, OperatorParams, RadialCoefficients, RhClass, RhVerdict,
};
pub use sector::{feasible_shift, resolvent_norm_scan, sector_angle, SectorReport};
pub use semigroup::{
    decay_of_one, domination_check, evolve, kernel_diagnostics, EvolutionResult,
    KernelDiagnostics, SchemeKind,
};
pub use spectrum::{
    accumulation_check, all_eigenvalues, angular_degeneracy, ground_state, solve_spectrum,
    GroundState, SpectrumResult,
};
