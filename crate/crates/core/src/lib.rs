//! Solver core for transient gas flow at pipeline junctions.
//!
//! The crate covers a hierarchy of three one-dimensional gas models
//! (full polytropic Euler, isentropic Euler, and isentropic Euler without the
//! kinetic term), exact Riemann solvers for each of them, the
//! entropy-preserving junction and compressor coupling solvers, and a wave
//! front tracking simulator with Glimm-functional diagnostics.
//!
//! Everything here is pure computation: no I/O, no global state, and only
//! `alloc` is required. File formats and the command line live in the
//! `gasnet` crate.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
pub mod math;

pub mod compressor;
pub mod fronttracking;
pub mod junction;
pub mod laxcurves;
pub mod linalg;
pub mod newton;
pub mod riemann;
pub mod thermo;
pub mod waves;

pub use compressor::{CompressorControl, CompressorProblem};
pub use error::{Error, ProblemError, Result};
pub use junction::{
    JunctionOptions, JunctionProblem, Orientation, PipeSpec, SolveWarning, StarSolution,
};
pub use newton::NewtonOptions;
pub use thermo::{
    EulerState, GasConstants, IsoState, Model, PipeState, Subsonic, ThermoQuantities,
};
