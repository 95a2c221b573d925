//! Re-checks stored snapshots: coupling residuals are recomputed from the
//! stored traces and compared with the recorded diagnostics.

use gasnet_core::{EulerState, GasConstants, Model, PipeState};
use serde::Serialize;

use crate::error::{Error, Result, ValidationErrors};
use crate::records::{Diagnostics, Sample, SnapshotRecord};
use crate::scenario::Scenario;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecordCheck {
    pub time: f64,
    pub recomputed: Diagnostics,
    /// Largest difference between recomputed and stored residuals.
    pub deviation: f64,
    /// Total variation of the sampled grid values over all pipes.
    pub grid_variation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnoseReport {
    pub records: Vec<RecordCheck>,
    pub max_residual: f64,
    pub max_deviation: f64,
}

fn state_of(model: Model, s: &Sample, gas: &GasConstants) -> PipeState {
    match model {
        Model::M1 => PipeState::M1(EulerState::new(s.rho, s.q, s.energy.unwrap_or(f64::NAN))),
        m => PipeState::iso(m, s.rho, s.q, gas.kappa_from_entropy(s.s)),
    }
}

fn grid_variation(r: &SnapshotRecord) -> f64 {
    r.pipes
        .iter()
        .map(|p| {
            p.samples
                .windows(2)
                .map(|w| {
                    let (a, b) = (&w[0], &w[1]);
                    (a.rho - b.rho).abs()
                        + (a.q - b.q).abs()
                        + match (a.energy, b.energy) {
                            (Some(x), Some(y)) => (x - y).abs(),
                            _ => 0.0,
                        }
                })
                .sum::<f64>()
        })
        .sum()
}

pub fn diagnose(scenario: &Scenario, records: &[SnapshotRecord]) -> Result<DiagnoseReport> {
    let gas = scenario
        .gas_constants()
        .map_err(|e| Error::Validation(ValidationErrors(vec![e])))?;
    let checker = crate::run::Checker::new(scenario, gas)?;
    let mut checks = Vec::with_capacity(records.len());
    for (k, r) in records.iter().enumerate() {
        if r.pipes.len() != scenario.pipes.len()
            || r.pipes.iter().zip(&scenario.pipes).any(|(a, b)| a.pipe != b.id)
        {
            return Err(Error::Validation(ValidationErrors(vec![
                crate::error::ValidationError::new(
                    format!("records[{k}].pipes"),
                    "pipes do not match the scenario",
                ),
            ])));
        }
        let traces: Vec<PipeState> = r
            .pipes
            .iter()
            .zip(&scenario.pipes)
            .map(|(p, spec)| state_of(spec.model.into(), &p.trace, &gas))
            .collect();
        let recomputed = checker.diagnostics(&traces);
        let d = &r.diagnostics;
        let deviation = [
            (recomputed.mass_residual - d.mass_residual).abs(),
            (recomputed.enthalpy_residual - d.enthalpy_residual).abs(),
            (recomputed.entropy_residual - d.entropy_residual).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        checks.push(RecordCheck {
            time: r.time,
            recomputed,
            deviation,
            grid_variation: grid_variation(r),
        });
    }
    let max_residual = checks
        .iter()
        .map(|c| {
            c.recomputed
                .mass_residual
                .max(c.recomputed.enthalpy_residual)
                .max(c.recomputed.entropy_residual)
        })
        .fold(0.0, f64::max);
    let max_deviation = checks.iter().map(|c| c.deviation).fold(0.0, f64::max);
    Ok(DiagnoseReport {
        records: checks,
        max_residual,
        max_deviation,
    })
}
