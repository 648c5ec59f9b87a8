//! Command-line front end for `isogeny_forge`.
//!
//! [`plan_from_args`] turns `argv` into a validated [`RunPlan`];
//! [`execute_plan`] runs it and streams [`ResultRecord`]s as JSON lines.
//! Exit codes: 0 success, 1 analysis failure, 2 usage error, 3 I/O error.

pub mod cache;
pub mod exec;
pub mod plan;
pub mod record;

pub use cache::{ConductorCache, ConductorEntry};
pub use exec::{execute_plan, execute_plan_to, ExecError, Outcome, EXIT_FAILURE, EXIT_IO, EXIT_OK, EXIT_USAGE};
pub use plan::{
    plan_from_args, Command, CurveSpec, FactorSpec, GroupSpec, Global2Target, Pair, ParamSource, PointSpec,
    PrimeSpec, RunPlan, SearchGrid, Sink, UsageError, CACHE_ENV,
};
pub use record::{strip_timing, RecordWriter, ResultRecord, Timing, VERSION};

/// Parses and runs `argv`, returning the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match plan_from_args(argv) {
        Ok(plan) => execute_plan(&plan),
        Err(e) => {
            e.print();
            e.exit_code()
        }
    }
}
