//! The single-node network a tracker evolves: pipes plus one coupling.

use alloc::vec::Vec;

use crate::compressor::{CompressorControl, CompressorProblem};
use crate::error::{Error, ProblemError, Result};
use crate::junction::{JunctionOptions, JunctionProblem, PipeSpec, StarSolution};
use crate::laxcurves::base_sigma;
use crate::math::abs;
use crate::thermo::{GasConstants, Model, PipeState};
use crate::waves::{forward, parameter};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling {
    Junction,
    /// Two pipes, index 0 the inlet and index 1 the outlet.
    Compressor(CompressorControl),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    pub gas: GasConstants,
    pub pipes: Vec<PipeSpec>,
    pub coupling: Coupling,
}

impl Network {
    pub fn junction(gas: GasConstants, pipes: Vec<PipeSpec>) -> Self {
        Self {
            gas,
            pipes,
            coupling: Coupling::Junction,
        }
    }

    pub fn compressor(
        gas: GasConstants,
        inlet: PipeSpec,
        outlet: PipeSpec,
        control: CompressorControl,
    ) -> Self {
        Self {
            gas,
            pipes: alloc::vec![inlet, outlet],
            coupling: Coupling::Compressor(control),
        }
    }

    pub fn len(&self) -> usize {
        self.pipes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pipes.is_empty()
    }

    /// Solves the generalized Riemann problem at the node for the given
    /// pipe traces.
    pub fn solve(&self, traces: &[PipeState], opts: &JunctionOptions) -> Result<StarSolution> {
        match self.coupling {
            Coupling::Junction => {
                JunctionProblem::new(self.gas, self.pipes.clone(), traces.to_vec())?.solve(opts)
            }
            Coupling::Compressor(control) => {
                if traces.len() != 2 || self.pipes.len() != 2 {
                    return Err(ProblemError::Topology {
                        incoming: 1,
                        total: traces.len(),
                    }
                    .into());
                }
                CompressorProblem::new(
                    self.gas,
                    (self.pipes[0], traces[0]),
                    (self.pipes[1], traces[1]),
                    control,
                )?
                .solve(opts)
            }
        }
    }

    /// Families whose characteristics move toward the node (negative speed
    /// in pipe coordinates) for a pipe with the given model and orientation.
    pub fn approaching_families(&self, pipe: usize) -> &'static [usize] {
        let spec = &self.pipes[pipe];
        match (spec.model, spec.orientation) {
            (Model::M1, crate::junction::Orientation::Incoming) => &[1, 2],
            _ => &[1],
        }
    }
}

/// Total strength of the waves a star solution emits into the pipes:
/// `sum |sigma - base sigma| + |tau|`.
pub fn emitted_strength(
    sol: &StarSolution,
    bases: &[PipeState],
    gas: &GasConstants,
) -> Result<f64> {
    let mut total = 0.0;
    for (i, base) in bases.iter().enumerate() {
        total += abs(sol.sigma[i] - base_sigma(base, gas)?);
        if let Some(t) = sol.tau[i] {
            total += abs(t);
        }
    }
    Ok(total)
}

/// Estimates the junction amplification constant: the largest ratio of
/// emitted to incident strength for small waves hitting the node from the
/// equilibrium `star` traces, times `safety`, and never below one.
pub fn estimate_k_junction(
    network: &Network,
    star: &[PipeState],
    opts: &JunctionOptions,
    safety: f64,
) -> Result<f64> {
    let gas = &network.gas;
    let mut worst: f64 = 0.0;
    for pipe in 0..network.len() {
        for &family in network.approaching_families(pipe) {
            let scale = parameter(&star[pipe], family, gas)?;
            for sign in [-1.0, 1.0] {
                let delta = sign * 1e-4 * scale;
                let mut bases = star.to_vec();
                bases[pipe] = forward(&star[pipe], family, delta, gas)?;
                let sol = match network.solve(&bases, opts) {
                    Ok(s) => s,
                    Err(Error::SubsonicViolation { .. }) | Err(Error::Problem(_)) => continue,
                    Err(e) => return Err(e),
                };
                let out = emitted_strength(&sol, &bases, gas)?;
                worst = worst.max(out / abs(delta));
            }
        }
    }
    Ok((safety * worst).max(1.0))
}
