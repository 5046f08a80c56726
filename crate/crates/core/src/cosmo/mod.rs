//! Klein–Gordon modes on flat FLRW backgrounds: parameters, connections,
//! Heisenberg and Schrödinger flows, and particle-production spectra.

mod background;
mod connection;
mod flow;
mod mode;
mod schrodinger;
mod solver;
mod spectrum;

pub use background::{FLRWBackground, Profile, Samples, Spline};
pub use connection::{
    connection_blocks, connection_word, mode_space, symmetric_part, table_fixtures, transport_check, ConnectionKind,
    FieldWord, FixtureReport, LadderWord, TransportReport,
};
pub use flow::{
    compare_paths, evolve_heisenberg_from, evolve_mode_heisenberg, flow_coefficients, heisenberg_flow_rhs,
    time_reversal_residual, ConsistencyReport, FinalComparison, FlowCoefficients, FlowPath, ModeRun, PathComparison,
    CONSISTENCY_TOL,
};
pub use mode::{mode_parameters, mode_rates, ModeParameters, ModeRates, WEIGHT_CONVENTION};
pub use schrodinger::{
    evolve_mode_schrodinger, fock_norm, linear_propagator, mode_state_from, static_propagator, SchrodingerOptions,
};
pub use solver::{Solver, SolverOptions, SolverStats};
pub use spectrum::{particle_spectrum, Spectrum, SpectrumMethod, SpectrumOptions, SpectrumRow};
