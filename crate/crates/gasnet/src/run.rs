//! Dispatches a validated scenario to the node solvers or the front tracker.

use gasnet_core::fronttracking::{FrontTracker, Source, TrackerConfig};
use gasnet_core::junction::verify_states;
use gasnet_core::riemann::solve_riemann;
use gasnet_core::{CompressorProblem, GasConstants, PipeState, StarSolution};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::records::{
    CompressorSummary, Diagnostics, LadderDistance, PipeSnapshot, RunOutput, Sample,
    SnapshotRecord, Summary,
};
use crate::scenario::{Mode, Scenario};

/// Relative slack on the initial Glimm functional when counting increases.
const GLIMM_SLACK: f64 = 1e-9;

fn solver_error(s: &Scenario, source: gasnet_core::Error) -> Error {
    use gasnet_core::Error as E;
    let path = match &source {
        E::SubsonicViolation { pipe } => format!("pipes[{pipe}] ({})", s.pipes[*pipe].id),
        E::NoConvergence { .. } | E::SingularJacobian | E::SingularEntropyMix(_) => {
            "coupling".into()
        }
        E::NonPositiveFlux(_) => "coupling".into(),
        E::EventBudget(_) => "run.max_events".into(),
        E::EventStarvation => "run.horizon".into(),
        E::InvalidGas(_) => "gas".into(),
        _ => "run".into(),
    };
    Error::Solver { path, source }
}

/// Output times: `horizon * k / snapshots`, with `t = 0` first for
/// simulations.
fn output_times(s: &Scenario) -> Vec<f64> {
    let n = s.run.snapshots;
    let first = if s.run.mode == Mode::Simulate { 0 } else { 1 };
    (first..=n)
        .map(|k| s.run.horizon * k as f64 / n as f64)
        .collect()
}

fn grid(s: &Scenario) -> Vec<f64> {
    let n = s.run.grid_points;
    if n == 1 {
        return vec![0.0];
    }
    (0..n)
        .map(|k| s.run.length * k as f64 / (n - 1) as f64)
        .collect()
}

/// Coupling residuals of node traces, computed from the states alone.
pub(crate) struct Checker {
    gas: GasConstants,
    compressor: Option<CompressorProblem>,
    specs: Vec<gasnet_core::PipeSpec>,
}

impl Checker {
    pub(crate) fn new(s: &Scenario, gas: GasConstants) -> Result<Self> {
        let specs = s.pipe_specs();
        let compressor = match s.compressor_control() {
            None => None,
            Some(c) => Some(
                CompressorProblem::new(
                    gas,
                    (specs[0], s.trace_state(0, &gas)),
                    (specs[1], s.trace_state(1, &gas)),
                    c,
                )
                .map_err(|e| solver_error(s, e.into()))?,
            ),
        };
        Ok(Self {
            gas,
            compressor,
            specs,
        })
    }

    pub(crate) fn diagnostics(&self, traces: &[PipeState]) -> Diagnostics {
        match &self.compressor {
            Some(c) => {
                let d = c.verify_states(&traces[0], &traces[1]);
                Diagnostics {
                    mass_residual: d.mass_residual,
                    enthalpy_residual: d.control_residual,
                    entropy_residual: d.entropy_residual,
                    ..Diagnostics::default()
                }
            }
            None => {
                let d = verify_states(&self.specs, traces, &self.gas);
                Diagnostics {
                    mass_residual: d.mass_residual,
                    enthalpy_residual: d.max_enthalpy_spread,
                    entropy_residual: d.max_entropy_residual,
                    ..Diagnostics::default()
                }
            }
        }
    }

    fn compressor_summary(&self, traces: &[PipeState]) -> Option<CompressorSummary> {
        self.compressor.as_ref().map(|c| {
            let d = c.verify_states(&traces[0], &traces[1]);
            CompressorSummary {
                pressure_ratio: d.pressure_ratio,
                realized_enthalpy: d.realized_enthalpy,
                control_residual: d.control_residual,
                temperature_ratio_residual: d.temperature_ratio_residual,
            }
        })
    }
}

fn snapshot(
    s: &Scenario,
    gas: &GasConstants,
    time: f64,
    traces: &[PipeState],
    at: impl Fn(usize, f64) -> PipeState,
    diagnostics: Diagnostics,
) -> Result<SnapshotRecord> {
    let xs = grid(s);
    let pipes = s
        .pipes
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let samples = xs
                .iter()
                .map(|&x| {
                    let st = if x == 0.0 { traces[i] } else { at(i, x) };
                    Sample::of(x, &st, gas)
                })
                .collect::<gasnet_core::Result<Vec<_>>>()?;
            Ok(PipeSnapshot {
                pipe: p.id.clone(),
                trace: Sample::of(0.0, &traces[i], gas)?,
                samples,
            })
        })
        .collect::<gasnet_core::Result<Vec<_>>>()
        .map_err(|e| solver_error(s, e))?;
    Ok(SnapshotRecord {
        time,
        pipes,
        diagnostics,
    })
}

fn max_residuals(records: &[SnapshotRecord]) -> (f64, f64, f64) {
    records.iter().fold((0.0f64, 0.0f64, 0.0f64), |acc, r| {
        let d = &r.diagnostics;
        (
            acc.0.max(d.mass_residual),
            acc.1.max(d.enthalpy_residual),
            acc.2.max(d.entropy_residual),
        )
    })
}

fn initial_solve(s: &Scenario, gas: GasConstants) -> Result<StarSolution> {
    let traces: Vec<PipeState> = (0..s.pipes.len()).map(|i| s.trace_state(i, &gas)).collect();
    s.network(gas)
        .solve(&traces, &s.junction_options())
        .map_err(|e| solver_error(s, e))
}

/// Runs a validated scenario to completion.
pub fn run_scenario(s: &Scenario) -> Result<RunOutput> {
    let gas = s
        .gas_constants()
        .map_err(|e| Error::Validation(crate::error::ValidationErrors(vec![e])))?;
    match s.run.mode {
        Mode::Riemann => run_riemann(s, gas),
        Mode::Simulate => run_simulation(s, gas),
    }
}

/// Self-similar solution of the generalized Riemann problem: in every pipe
/// the star trace connects to the initial state through waves of
/// non-negative speed.
fn run_riemann(s: &Scenario, gas: GasConstants) -> Result<RunOutput> {
    let star = initial_solve(s, gas)?;
    log::info!(
        "node solved in {} Newton iterations, residual {:e}",
        star.iterations,
        star.residual_norm
    );
    let checker = Checker::new(s, gas)?;
    let tol = s.run.tol.min(1e-12);
    let waves = (0..s.pipes.len())
        .map(|i| {
            let far = s.trace_state(i, &gas);
            // a mixed-entropy outlet keeps its own coefficient inside the pipe
            let near = match (star.star_states[i], far.kappa()) {
                (st, Some(k)) if st.kappa() != Some(k) => {
                    PipeState::iso(st.model(), st.rho(), st.q(), k)
                }
                (st, _) => st,
            };
            solve_riemann(&near, &far, &gas, tol)
        })
        .collect::<gasnet_core::Result<Vec<_>>>()
        .map_err(|e| solver_error(s, e))?;
    let diagnostics = checker.diagnostics(&star.star_states);
    let records = output_times(s)
        .into_iter()
        .map(|t| {
            snapshot(
                s,
                &gas,
                t,
                &star.star_states,
                |i, x| waves[i].sample(x / t, &gas),
                diagnostics,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let (m, h, e) = max_residuals(&records);
    Ok(RunOutput {
        summary: Summary {
            mode: Mode::Riemann,
            converged: true,
            newton_iterations: star.iterations,
            snapshots: records.len(),
            max_mass_residual: m.max(diagnostics.mass_residual),
            max_enthalpy_residual: h.max(diagnostics.enthalpy_residual),
            max_entropy_residual: e.max(diagnostics.entropy_residual),
            interactions: 0,
            max_fronts: 0,
            glimm_increases: None,
            compressor: checker.compressor_summary(&star.star_states),
            ladder: Vec::new(),
        },
        records,
    })
}

fn tracker(s: &Scenario, gas: GasConstants, epsilon: f64, track_glimm: bool) -> Result<FrontTracker> {
    let config = TrackerConfig {
        epsilon,
        seed: s.run.seed,
        max_events: s.run.max_events,
        junction: s.junction_options(),
        track_glimm,
        ..TrackerConfig::default()
    };
    FrontTracker::new(s.network(gas), s.profiles(&gas), config).map_err(|e| solver_error(s, e))
}

/// Advances to `until`, applying the source by operator splitting when the
/// scenario has one.
fn evolve(s: &Scenario, tr: &mut FrontTracker, until: f64) -> Result<()> {
    match s.friction() {
        None => {
            tr.run_until(until).map_err(|e| solver_error(s, e))?;
        }
        Some((friction, step)) => {
            let step = step.unwrap_or_else(|| tr.default_split_step(s.run.length));
            while tr.time() < until {
                let dt = step.min(until - tr.time());
                // guards against a zero step from round-off at the end
                if dt <= 1e-14 * until.max(1.0) {
                    tr.run_until(until).map_err(|e| solver_error(s, e))?;
                    break;
                }
                let source: &dyn Source = &friction;
                tr.split_step(source, dt).map_err(|e| solver_error(s, e))?;
            }
        }
    }
    Ok(())
}

fn run_simulation(s: &Scenario, gas: GasConstants) -> Result<RunOutput> {
    let star = initial_solve(s, gas)?;
    let checker = Checker::new(s, gas)?;
    let mut tr = tracker(s, gas, s.run.epsilon, true)?;
    let y0 = tr.glimm().y;
    let mut records = Vec::new();
    for t in output_times(s) {
        evolve(s, &mut tr, t)?;
        let traces = tr.traces();
        let g = tr.glimm();
        let diagnostics = Diagnostics {
            wave_strength: Some(g.v),
            interaction_potential: Some(g.q),
            glimm: Some(g.y),
            total_variation: Some(g.tv),
            fronts: Some(tr.front_count()),
            events: Some(tr.stats().events),
            ..checker.diagnostics(&traces)
        };
        log::debug!("t = {t}: {} fronts, Y = {:e}", tr.front_count(), g.y);
        records.push(snapshot(
            s,
            &gas,
            t,
            &traces,
            |i, x| tr.sample(i, x),
            diagnostics,
        )?);
    }
    let increases = tr
        .events()
        .iter()
        .filter(|e| match (e.glimm_before, e.glimm_after) {
            (Some(b), Some(a)) => a.y > b.y + GLIMM_SLACK * y0,
            _ => false,
        })
        .count();
    let ladder = ladder(s, gas)?;
    let (m, h, e) = max_residuals(&records);
    let stats = tr.stats();
    Ok(RunOutput {
        summary: Summary {
            mode: Mode::Simulate,
            converged: true,
            newton_iterations: star.iterations,
            snapshots: records.len(),
            max_mass_residual: m,
            max_enthalpy_residual: h,
            max_entropy_residual: e,
            interactions: stats.events,
            max_fronts: stats.max_fronts.max(tr.front_count()),
            glimm_increases: Some(increases),
            compressor: checker.compressor_summary(&tr.traces()),
            ladder,
        },
        records,
    })
}

/// Runs every ladder epsilon to the horizon and measures all pairwise L1
/// distances of the final states.
fn ladder(s: &Scenario, gas: GasConstants) -> Result<Vec<LadderDistance>> {
    let eps = &s.run.epsilon_ladder;
    if eps.is_empty() {
        return Ok(Vec::new());
    }
    let finals = eps
        .par_iter()
        .map(|&e| {
            let mut tr = tracker(s, gas, e, false)?;
            evolve(s, &mut tr, s.run.horizon)?;
            log::info!("ladder epsilon {e}: {} events", tr.stats().events);
            Ok(tr)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for a in 0..eps.len() {
        for b in a + 1..eps.len() {
            out.push(LadderDistance {
                epsilon_a: eps[a],
                epsilon_b: eps[b],
                l1: finals[a].l1_distance(&finals[b]),
            });
        }
    }
    Ok(out)
}
