//! The scenario document: gas constants, pipes with initial data, the node
//! coupling and run settings, stored as TOML.

use std::collections::HashSet;
use std::path::Path;

use gasnet_core::fronttracking::{Friction, Network, Profile};
use gasnet_core::{
    CompressorControl, CompressorProblem, EulerState, GasConstants, JunctionOptions,
    JunctionProblem, Model, NewtonOptions, Orientation, PipeSpec, PipeState, ProblemError,
};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationError, ValidationErrors};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub gas: GasSpec,
    pub coupling: CouplingSpec,
    pub run: RunSpec,
    pub pipes: Vec<PipeEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasSpec {
    pub gamma: f64,
    /// Specific gas constant.
    pub r: f64,
    #[serde(default)]
    pub s0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CouplingSpec {
    Junction {
        /// Give isentropic outlets the mixed entropy after the solve.
        #[serde(default)]
        assign_mixed_entropy: bool,
    },
    /// Pipe 0 is the inlet, pipe 1 the outlet. Exactly one of `enthalpy`
    /// (adiabatic enthalpy change) and `power` (with coefficient `cp`) is set.
    Compressor {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        enthalpy: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        power: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cp: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Riemann,
    Simulate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub mode: Mode,
    pub horizon: f64,
    #[serde(default = "defaults::epsilon")]
    pub epsilon: f64,
    /// Extra front tracking runs whose pairwise distances at the horizon go
    /// into the summary.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub epsilon_ladder: Vec<f64>,
    /// Newton tolerance of the coupling solves.
    #[serde(default = "defaults::tol")]
    pub tol: f64,
    #[serde(default = "defaults::max_iterations")]
    pub max_iterations: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "defaults::max_events")]
    pub max_events: usize,
    /// Samples per pipe and snapshot, uniformly on `[0, length]`.
    #[serde(default = "defaults::grid_points")]
    pub grid_points: usize,
    #[serde(default = "defaults::length")]
    pub length: f64,
    /// Number of output times, evenly spaced up to the horizon.
    #[serde(default = "defaults::snapshots")]
    pub snapshots: usize,
    #[serde(default)]
    pub source: SourceSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceSpec {
    #[default]
    None,
    Friction {
        /// Darcy friction factor.
        lambda: f64,
        diameter: f64,
        /// Splitting step; defaults to a quarter of the time a wave needs to
        /// cross the sampled length.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        step: Option<f64>,
    },
}

mod defaults {
    pub fn epsilon() -> f64 {
        1e-2
    }
    pub fn tol() -> f64 {
        1e-10
    }
    pub fn max_iterations() -> usize {
        50
    }
    pub fn max_events() -> usize {
        1_000_000
    }
    pub fn grid_points() -> usize {
        101
    }
    pub fn length() -> f64 {
        1.0
    }
    pub fn snapshots() -> usize {
        1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelName {
    /// Full polytropic Euler equations.
    M1,
    /// Isentropic Euler equations.
    M2,
    /// Isentropic equations without the kinetic term.
    M3,
}

impl From<ModelName> for Model {
    fn from(m: ModelName) -> Self {
        match m {
            ModelName::M1 => Model::M1,
            ModelName::M2 => Model::M2,
            ModelName::M3 => Model::M3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Incoming,
    Outgoing,
}

impl From<Direction> for Orientation {
    fn from(d: Direction) -> Self {
        match d {
            Direction::Incoming => Orientation::Incoming,
            Direction::Outgoing => Orientation::Outgoing,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipeEntry {
    pub id: String,
    pub area: f64,
    pub model: ModelName,
    pub orientation: Direction,
    /// Isentropic coefficient `p = kappa rho^gamma`; isentropic models only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    /// Far-field state, and the whole pipe when `pieces` is empty.
    pub initial: StateSpec,
    /// Constant pieces next to the node, each up to its right edge.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pieces: Vec<Piece>,
}

/// A state in pipe coordinates: `rho` plus exactly one of `q` (mass flux) or
/// `u` (velocity), and the pressure `p` for the full Euler model. Incoming
/// pipes carry negative velocities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub rho: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
}

// unknown keys are rejected by the flattened state
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub x_right: f64,
    #[serde(flatten)]
    pub state: StateSpec,
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let scenario: Scenario = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    scenario.validate().map_err(Error::Validation)?;
    Ok(scenario)
}

pub fn parse_scenario_file(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario(&text)
}

fn positive(errors: &mut Vec<ValidationError>, path: String, v: f64) {
    if !(v > 0.0 && v.is_finite()) {
        errors.push(ValidationError::new(path, format!("must be positive and finite, got {v}")));
    }
}

/// Field path of the pipe-level precondition a core problem error refers to.
fn problem_path(e: &ProblemError) -> String {
    match e {
        ProblemError::NonPositiveArea { pipe, .. } => format!("pipes[{pipe}].area"),
        ProblemError::ModelMismatch { pipe } => format!("pipes[{pipe}].model"),
        ProblemError::OrientationMismatch { pipe } => format!("pipes[{pipe}].orientation"),
        ProblemError::NotSubsonic { pipe } | ProblemError::InvalidState { pipe, .. } => {
            format!("pipes[{pipe}].initial")
        }
        ProblemError::Topology { .. } => "pipes".into(),
        ProblemError::UnequalAreas { .. } => "pipes[1].area".into(),
        ProblemError::NegativeControl(_) => "coupling".into(),
        ProblemError::Other(_) => "scenario".into(),
    }
}

impl Scenario {
    pub fn gas_constants(&self) -> Result<GasConstants, ValidationError> {
        GasConstants::new(self.gas.gamma, self.gas.r, self.gas.s0)
            .map_err(|e| ValidationError::new("gas", e.to_string()))
    }

    pub fn pipe_specs(&self) -> Vec<PipeSpec> {
        self.pipes
            .iter()
            .map(|p| PipeSpec::new(p.area, p.model.into(), p.orientation.into()))
            .collect()
    }

    pub fn compressor_control(&self) -> Option<CompressorControl> {
        match self.coupling {
            CouplingSpec::Junction { .. } => None,
            CouplingSpec::Compressor {
                enthalpy,
                power,
                cp,
            } => Some(match (enthalpy, power) {
                (Some(h), _) => CompressorControl::AdiabaticEnthalpy(h),
                (None, Some(power)) => CompressorControl::Power {
                    power,
                    cp: cp.unwrap_or(1.0),
                },
                (None, None) => CompressorControl::AdiabaticEnthalpy(0.0),
            }),
        }
    }

    pub fn network(&self, gas: GasConstants) -> Network {
        let specs = self.pipe_specs();
        match self.compressor_control() {
            None => Network::junction(gas, specs),
            Some(c) => Network::compressor(gas, specs[0], specs[1], c),
        }
    }

    pub fn junction_options(&self) -> JunctionOptions {
        JunctionOptions {
            newton: NewtonOptions {
                tol: self.run.tol,
                max_iter: self.run.max_iterations,
                ..NewtonOptions::default()
            },
            assign_mixed_entropy: matches!(
                self.coupling,
                CouplingSpec::Junction {
                    assign_mixed_entropy: true
                }
            ),
        }
    }

    pub fn friction(&self) -> Option<(Friction, Option<f64>)> {
        match self.run.source {
            SourceSpec::None => None,
            SourceSpec::Friction {
                lambda,
                diameter,
                step,
            } => Some((Friction { lambda, diameter }, step)),
        }
    }

    /// State of pipe `i` described by `spec` (validated input assumed).
    pub fn state(&self, i: usize, spec: &StateSpec, gas: &GasConstants) -> PipeState {
        let pipe = &self.pipes[i];
        let q = spec.q.unwrap_or_else(|| spec.rho * spec.u.unwrap_or(0.0));
        match pipe.model {
            ModelName::M1 => PipeState::M1(EulerState::from_primitive(
                spec.rho,
                q / spec.rho,
                spec.p.unwrap_or(0.0),
                gas,
            )),
            m => PipeState::iso(m.into(), spec.rho, q, pipe.kappa.unwrap_or(0.0)),
        }
    }

    /// State next to the node.
    pub fn trace_state(&self, i: usize, gas: &GasConstants) -> PipeState {
        let pipe = &self.pipes[i];
        let spec = pipe.pieces.first().map_or(&pipe.initial, |p| &p.state);
        self.state(i, spec, gas)
    }

    pub fn profiles(&self, gas: &GasConstants) -> Vec<Profile> {
        (0..self.pipes.len())
            .map(|i| {
                let pipe = &self.pipes[i];
                let pieces: Vec<(f64, PipeState)> = pipe
                    .pieces
                    .iter()
                    .map(|p| (p.x_right, self.state(i, &p.state, gas)))
                    .collect();
                Profile::from_pieces(&pieces, self.state(i, &pipe.initial, gas))
                    .expect("validated edges")
            })
            .collect()
    }

    /// Checks the schema invariants and the solver preconditions, reporting
    /// every violation found.
    pub fn validate(&self) -> Result<(), ValidationErrors> {
        let mut errors = Vec::new();
        let gas = match self.gas_constants() {
            Ok(g) => Some(g),
            Err(e) => {
                errors.push(e);
                None
            }
        };

        if self.pipes.is_empty() {
            errors.push(ValidationError::new("pipes", "at least two pipes are required"));
        }
        let mut seen = HashSet::new();
        for (i, pipe) in self.pipes.iter().enumerate() {
            if pipe.id.trim().is_empty() {
                errors.push(ValidationError::new(format!("pipes[{i}].id"), "must not be empty"));
            } else if !seen.insert(pipe.id.as_str()) {
                errors.push(ValidationError::new(
                    format!("pipes[{i}].id"),
                    format!("pipe id {:?} is defined more than once", pipe.id),
                ));
            }
            positive(&mut errors, format!("pipes[{i}].area"), pipe.area);
            match (pipe.model, pipe.kappa) {
                (ModelName::M1, Some(_)) => errors.push(ValidationError::new(
                    format!("pipes[{i}].kappa"),
                    "only isentropic models take kappa",
                )),
                (ModelName::M1, None) => {}
                (_, Some(k)) => positive(&mut errors, format!("pipes[{i}].kappa"), k),
                (_, None) => errors.push(ValidationError::new(
                    format!("pipes[{i}].kappa"),
                    "isentropic models require kappa",
                )),
            }
            self.validate_state(&mut errors, i, format!("pipes[{i}].initial"), &pipe.initial, gas);
            let mut last = 0.0;
            for (k, piece) in pipe.pieces.iter().enumerate() {
                let path = format!("pipes[{i}].pieces[{k}]");
                if !(piece.x_right > last && piece.x_right.is_finite()) {
                    errors.push(ValidationError::new(
                        format!("{path}.x_right"),
                        format!("edges must be positive and increasing, got {}", piece.x_right),
                    ));
                }
                last = piece.x_right;
                self.validate_state(&mut errors, i, path, &piece.state, gas);
            }
        }

        let incoming = self
            .pipes
            .iter()
            .filter(|p| p.orientation == Direction::Incoming)
            .count();
        match self.coupling {
            CouplingSpec::Junction { .. } => {
                if !self.pipes.is_empty() && (incoming == 0 || incoming == self.pipes.len()) {
                    errors.push(ValidationError::new(
                        "pipes",
                        format!(
                            "a junction needs N > dim(I_i) > 0, got {incoming} incoming of {} pipes",
                            self.pipes.len()
                        ),
                    ));
                }
            }
            CouplingSpec::Compressor {
                enthalpy,
                power,
                cp,
            } => {
                let layout_ok = self.pipes.len() == 2
                    && self.pipes[0].orientation == Direction::Incoming
                    && self.pipes[1].orientation == Direction::Outgoing;
                if !layout_ok {
                    errors.push(ValidationError::new(
                        "pipes",
                        "a compressor needs exactly two pipes: an incoming inlet then an outgoing outlet",
                    ));
                }
                match (enthalpy, power) {
                    (Some(h), None) => {
                        if !(h >= 0.0 && h.is_finite()) {
                            errors.push(ValidationError::new(
                                "coupling.enthalpy",
                                format!("must be non-negative, got {h}"),
                            ));
                        }
                        if cp.is_some() {
                            errors.push(ValidationError::new(
                                "coupling.cp",
                                "only used with a power control",
                            ));
                        }
                    }
                    (None, Some(pw)) => {
                        if !(pw >= 0.0 && pw.is_finite()) {
                            errors.push(ValidationError::new(
                                "coupling.power",
                                format!("must be non-negative, got {pw}"),
                            ));
                        }
                        match cp {
                            Some(c) => positive(&mut errors, "coupling.cp".into(), c),
                            None => errors.push(ValidationError::new(
                                "coupling.cp",
                                "a power control requires cp",
                            )),
                        }
                    }
                    _ => errors.push(ValidationError::new(
                        "coupling",
                        "set exactly one of enthalpy and power",
                    )),
                }
            }
        }

        let run = &self.run;
        positive(&mut errors, "run.horizon".into(), run.horizon);
        positive(&mut errors, "run.epsilon".into(), run.epsilon);
        for (k, e) in run.epsilon_ladder.iter().enumerate() {
            positive(&mut errors, format!("run.epsilon_ladder[{k}]"), *e);
        }
        positive(&mut errors, "run.tol".into(), run.tol);
        positive(&mut errors, "run.length".into(), run.length);
        for (path, v) in [
            ("run.max_iterations", run.max_iterations),
            ("run.max_events", run.max_events),
            ("run.grid_points", run.grid_points),
            ("run.snapshots", run.snapshots),
        ] {
            if v == 0 {
                errors.push(ValidationError::new(path, "must be at least 1"));
            }
        }
        if let SourceSpec::Friction {
            lambda,
            diameter,
            step,
        } = run.source
        {
            if !(lambda >= 0.0 && lambda.is_finite()) {
                errors.push(ValidationError::new(
                    "run.source.lambda",
                    format!("must be non-negative, got {lambda}"),
                ));
            }
            positive(&mut errors, "run.source.diameter".into(), diameter);
            if let Some(s) = step {
                positive(&mut errors, "run.source.step".into(), s);
            }
            if run.mode == Mode::Riemann {
                errors.push(ValidationError::new(
                    "run.source",
                    "sources need mode = \"simulate\"",
                ));
            }
        }
        if run.mode == Mode::Riemann {
            for (i, pipe) in self.pipes.iter().enumerate() {
                if !pipe.pieces.is_empty() {
                    errors.push(ValidationError::new(
                        format!("pipes[{i}].pieces"),
                        "a Riemann problem has constant data on every pipe",
                    ));
                }
            }
            if !run.epsilon_ladder.is_empty() {
                errors.push(ValidationError::new(
                    "run.epsilon_ladder",
                    "only used with mode = \"simulate\"",
                ));
            }
        }

        // the node problem is only meaningful once the fields are sane
        if errors.is_empty() {
            let gas = gas.expect("checked above");
            let states: Vec<PipeState> = (0..self.pipes.len())
                .map(|i| self.trace_state(i, &gas))
                .collect();
            let specs = self.pipe_specs();
            let built = match self.compressor_control() {
                None => JunctionProblem::new(gas, specs, states).map(|_| ()),
                Some(c) => CompressorProblem::new(
                    gas,
                    (specs[0], states[0]),
                    (specs[1], states[1]),
                    c,
                )
                .map(|_| ()),
            };
            if let Err(e) = built {
                errors.push(ValidationError::new(problem_path(&e), e.to_string()));
            }
        }

        if errors.is_empty() {
            Ok(())
        } else {
            Err(ValidationErrors(errors))
        }
    }

    fn validate_state(
        &self,
        errors: &mut Vec<ValidationError>,
        i: usize,
        path: String,
        spec: &StateSpec,
        gas: Option<GasConstants>,
    ) {
        let pipe = &self.pipes[i];
        let before = errors.len();
        positive(errors, format!("{path}.rho"), spec.rho);
        match (spec.q, spec.u) {
            (Some(v), None) | (None, Some(v)) if v.is_finite() => {}
            (Some(_), Some(_)) | (None, None) => errors.push(ValidationError::new(
                path.clone(),
                "set exactly one of q and u",
            )),
            _ => errors.push(ValidationError::new(path.clone(), "velocity must be finite")),
        }
        match (pipe.model, spec.p) {
            (ModelName::M1, Some(p)) => positive(errors, format!("{path}.p"), p),
            (ModelName::M1, None) => {
                errors.push(ValidationError::new(format!("{path}.p"), "the Euler model requires p"))
            }
            (_, Some(_)) => errors.push(ValidationError::new(
                format!("{path}.p"),
                "isentropic states take their pressure from kappa",
            )),
            (_, None) => {}
        }
        let Some(gas) = gas else { return };
        if errors.len() != before || (pipe.model != ModelName::M1 && pipe.kappa.is_none()) {
            return;
        }
        let state = self.state(i, spec, &gas);
        let want: Orientation = pipe.orientation.into();
        if Orientation::of(&state, &gas) != Some(want) {
            errors.push(ValidationError::new(
                path,
                format!(
                    "state must be subsonic with {} flow",
                    match want {
                        Orientation::Incoming => "negative (incoming)",
                        Orientation::Outgoing => "positive (outgoing)",
                    }
                ),
            ));
        }
    }

    /// Canonical form: velocities become mass fluxes. Serializing the
    /// normalized scenario also writes out every defaulted field.
    pub fn normalized(&self) -> Scenario {
        let mut s = self.clone();
        for pipe in &mut s.pipes {
            normalize_state(&mut pipe.initial);
            for piece in &mut pipe.pieces {
                normalize_state(&mut piece.state);
            }
        }
        s
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }
}

fn normalize_state(s: &mut StateSpec) {
    if let (None, Some(u)) = (s.q, s.u) {
        s.q = Some(s.rho * u);
        s.u = None;
    }
}
