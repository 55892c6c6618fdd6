//! Experiment drivers: τ-sweeps, Δt-convergence, long-time error growth,
//! traveling-wave data and single runs, with CSV/JSON output.

mod aa;
mod ap;
mod config;
mod eoc;
mod growth;
mod march;
mod output;
mod profiles;
mod solve;

pub use aa::{aa_study, component_errors, AaCurve, AaStudy, WaveReference};
pub use ap::{ap_errors, ap_rows, ap_sweep, soliton_data, ApSweep, ApTableRow};
pub use config::{
    Experiment, GridSpec, InitialKind, InitialSpec, Model, OperatorSpec, RunConfig, SweepSpec,
    WaveSpec,
};
pub use eoc::{eoc, loglog_slope};
pub use growth::{
    error_growth, final_decade_slope, growth_run_kdv, growth_run_kdvh, ErrorGrowth, GrowthSeries,
};
pub use march::{integrate_kdv, integrate_kdvh, march, Energy, MarchOptions, MarchStats, StepInfo};
pub use output::{write_artifacts, Cell, Provenance, Table};
pub use profiles::{
    phase_portrait, solitary_waves, LabeledOrbit, OrbitSummary, PhasePortrait, SolitaryProfile,
    SolitaryWaves,
};
pub use solve::{operators_check, operators_table, solve, SolveResult, SolveSummary};
