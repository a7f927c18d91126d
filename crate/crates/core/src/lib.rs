//! Steady-state Lindblad solver and a five-level molecular fluorescence
//! model with quantum interference between decay channels.
//!
//! Everything numeric is generic over the real scalar (`f32` or `f64`).
//! Aliases with a `64`/`32` suffix name the concrete instantiations.

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analytic;
pub mod error;
pub mod lindblad;
pub mod linalg;
pub mod model;
pub mod num;
pub mod operator;
pub mod sweep;

pub use analytic::{
    appendix_coherence, appendix_coherence_terms, cascade_elements, cascade_solver, cascade_weak,
    derived_coherence, derived_coherence_terms, lorentzian_intensity, pop1, pop2, r1_coherence,
    rho_bb_second_order, two_photon_weak, CascadeForm, CoherenceAudit, Regime, WeakFieldSolution,
};
pub use error::{Error, ErrorKind, Result};
pub use lindblad::{
    build_liouvillian, dissipator_apply, eom_rows, lindblad_rhs, steady_state, time_evolve,
    CollapseOperator, EomTable, Liouvillian, SteadyState,
};
pub use linalg::CMatrix;
pub use model::{
    build_collapse_ops, build_hamiltonian, build_hamiltonian_with_d_energy,
    build_model_liouvillian, intensity, intensity_from_elements, solve_point, IntensityTriple,
    ModelParams,
};
pub use sweep::{
    compare, detect_peaks, evaluate_point, find_peaks, label_peaks, preset, read_csv, run_sweep,
    write_csv, CompareReport, Peak, PeakLabel, PeakReport, SweepConfig, SweepMode, SweepResult,
    SweepRow, Trace, DEFAULT_PROMINENCE, PRESET_NAMES,
};
pub use num::{Real, C};
pub use operator::{
    dagger, hermitian_check, ket_bra, positivity_check, trace, unvectorize, vectorize,
    DensityMatrix, Level, Operator, DIM,
};

pub type Operator64 = Operator<f64>;
pub type Operator32 = Operator<f32>;
pub type DensityMatrix64 = DensityMatrix<f64>;
pub type DensityMatrix32 = DensityMatrix<f32>;
pub type Liouvillian64 = Liouvillian<f64>;
pub type Liouvillian32 = Liouvillian<f32>;
pub type ModelParams64 = ModelParams<f64>;
pub type ModelParams32 = ModelParams<f32>;
pub type SweepConfig64 = SweepConfig<f64>;
pub type SweepResult64 = SweepResult<f64>;
