//! Scenario documents, run orchestration and result files on top of
//! `gasnet-core`.
//!
//! A scenario is a TOML document describing the gas, the pipes meeting at a
//! junction or compressor, their initial data and what to run: the exact
//! self-similar solution of the node Riemann problem, or a front tracking
//! simulation with optional wall friction.
//!
//! ```no_run
//! use gasnet::{parse_scenario_file, run_scenario, write_outputs, Format};
//! # fn main() -> Result<(), gasnet::Error> {
//! let scenario = parse_scenario_file("scenarios/tee.toml".as_ref())?;
//! let output = run_scenario(&scenario)?;
//! write_outputs("out".as_ref(), &output, Format::Csv)?;
//! # Ok(())
//! # }
//! ```

pub mod diagnose;
mod error;
pub mod output;
pub mod records;
pub mod run;
pub mod scenario;

pub use diagnose::{diagnose, DiagnoseReport};
pub use error::{Error, Result, ValidationError, ValidationErrors};
pub use output::{write_outputs, Format};
pub use records::{Diagnostics, RunOutput, SnapshotRecord, Summary};
pub use run::run_scenario;
pub use scenario::{parse_scenario, parse_scenario_file, Scenario};
