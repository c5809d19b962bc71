//! Correlation dynamics of a dephasing electron–nuclear two-qubit system.
//!
//! The library simulates, from the density matrix up, how classical and
//! quantum correlations of a nearly maximally mixed Bell-diagonal state
//! behave in a solid-state spin ensemble: Gaussian inhomogeneous
//! dephasing, the sudden transition between classical and quantum
//! decoherence at a critical time t_c, the protection of both correlations
//! by two-flip dynamical decoupling, and their revival at echo times.
//!
//! Modules:
//!
//! * [`qmat`] — 4×4/2×2 complex Hermitian core: entropies, partial
//!   traces, Pauli expansion, selective-transition rotations.
//! * [`states`] — thermal and Bell-diagonal state family.
//! * [`correlations`] — mutual information, classical correlation and
//!   quantum discord (numeric optimization and closed Bell-diagonal
//!   forms), geometric discord, Taylor expansions, critical time,
//!   perturbation error bars.
//! * [`dynamics`] — detuning-ensemble evolution, pulse sequences, the
//!   five-pulse state preparation, decoupling blocks, decay fits.
//! * [`cli`] — experiment runners emitting CSV and JSON.
//!
//! Runnable walkthroughs for each capability live in `examples/`.

// `!(x > 0.0)` is the NaN-rejecting form of the positivity checks; flag
// values parsed from the command line can be NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod correlations;
pub mod dynamics;
pub mod qmat;
pub mod states;

#[cfg(test)]
pub(crate) mod testutil;

pub use correlations::{
    classical_correlation, discord_analytic_bell, geometric_discord_analytic, mutual_information,
    quantum_discord, CorrelationReport, MeasurementBasis, OptimizerConfig,
};
pub use dynamics::{EnsembleModel, PhysicsParams, PrepParams, PulseSequence, Trajectory};
pub use qmat::{Channel, DensityMatrix, ReducedDensityMatrix, Subsystem};
pub use states::{thermal_state, BellDiagonalCoeffs, ThermalParams};
