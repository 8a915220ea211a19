//! Simulation of the fractional-order semilinear heat equation
//!
//! ```text
//! u_t = -(-d²/dx²)^α u + u^p
//! ```
//!
//! Fractional powers are defined through resolvent integrals of the
//! underlying operator, so any discretization that can solve
//! `(λ + A) x = u` also yields `A^α`, `A^{-α}`, `(μ + A^α)^{-1}` and the
//! semigroup `e^{-t A^α}` ([`fracpow`]). Time marching itself runs on the
//! even 2π-periodic cosine grid ([`spectral`], [`timestepper`]), with the
//! blow-up predictors and conjecture probes collected in [`analysis`].
//!
//! Everything numerical is generic over [`Real`]; the `*64` aliases at the
//! crate root fix the scalar to `f64`, which is what the CLI uses.

// `!(x > 0)` style tests are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod dense;
pub mod error;
pub mod fracpow;
pub mod kernels;
pub mod quadrature;
pub mod real;
pub mod special;
pub mod spectral;
pub mod timestepper;

pub use error::{Error, Result};
pub use real::Real;

pub use analysis::{
    alpha_sweep, dichotomy_scan, inner_product, jensen_projection_trace, levine_check,
    max_ordering_check, DichotomyReport, EigenPair, JensenReport, LevineReport, OrderingReport,
    SweepResult, SweepRow, Trend, DichotomyRow,
};
pub use dense::DenseMatrix;
pub use fracpow::{
    frac_power_apply, frac_resolvent_apply, frac_resolvent_apply_block, hille_semigroup_apply, hille_semigroup_matrix,
    neg_frac_power_apply,
    scalar_frac_power, scalar_frac_power_with_estimate, DenseResolvent, ResolventMap,
    ScalarResolvent, SemigroupGenerator,
};
pub use kernels::{
    resolvent_dirichlet, resolvent_neumann, resolvent_periodic, resolvent_whole_line,
    singular_integral_frac, KernelDomain, PeriodicKernel, UnitIntervalKernel, WholeLine,
};
pub use quadrature::{QuadratureRule, QuadratureSpec};
pub use spectral::{
    analyze, apply_frac_power_spectral, apply_implicit_resolvent, apply_operator, assemble_s,
    assemble_t, make_grid, synthesize, CosineSpectrum, FractionalOperator, Grid, GridFunction,
};
pub use timestepper::{
    adaptive_tau, monotone_time_check, run_simulation, step_explicit, step_implicit, InitialData,
    MonotoneReport, Outcome, ProbeValue, Scheme, SimulationResult, Snapshot, SolverConfig,
    StepRecord,
};

pub type Grid64 = Grid<f64>;
pub type GridFunction64 = GridFunction<f64>;
pub type CosineSpectrum64 = CosineSpectrum<f64>;
pub type FractionalOperator64 = FractionalOperator<f64>;
pub type SolverConfig64 = SolverConfig<f64>;
pub type SimulationResult64 = SimulationResult<f64>;
pub type QuadratureSpec64 = QuadratureSpec<f64>;
pub type DenseMatrix64 = DenseMatrix<f64>;

pub type Grid32 = Grid<f32>;
pub type GridFunction32 = GridFunction<f32>;
pub type SolverConfig32 = SolverConfig<f32>;
