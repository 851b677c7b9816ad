//! Configuration, sweeps, falsification and report emission.

pub mod config;
pub mod falsify;
pub mod report;
pub mod spec;
pub mod sweep;

pub use config::{SweepConfig, Tolerances};
pub use falsify::{falsify, Counterexample, FalsifyOptions};
pub use report::{emit_report, format_g17, parse_json, render, Format};
pub use spec::{parse_function_spec, FunctionSpec, SpecForm};
pub use sweep::{evaluate, run_sweep, run_sweep_with};

/// Process exit status for a set of rows: 0 when every row holds, 1 when
/// some row is violated, 2 when some row failed to evaluate.
pub fn exit_code(rows: &[crate::ineq::IneqReport]) -> i32 {
    if rows.iter().any(|r| r.is_error()) {
        2
    } else if rows.iter().any(|r| r.is_violation()) {
        1
    } else {
        0
    }
}
