//! Wave front tracking on a single-node network.
//!
//! Each pipe is the half-line `x >= 0` with the node at `x = 0`. The solution
//! is piecewise constant between straight fronts. Fronts are advanced to the
//! next event (a collision of two neighbours in one pipe, or the first front
//! of a pipe reaching the node), the event is resolved by the accurate or the
//! simplified solver, and the process repeats.
//!
//! Fronts store their birth point `(t0, x0)` and speed, so positions do not
//! depend on how often the clock is advanced.

mod glimm;
mod history;
mod network;
mod profile;
mod source;

use alloc::vec;
use alloc::vec::Vec;

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, ProblemError, Result};
use crate::junction::JunctionOptions;
use crate::laxcurves::base_sigma;
use crate::math::abs;
use crate::thermo::{Model, PipeState};
use crate::waves::{
    chain_pieces, forward, front_speed, is_shock, parameter, riemann_pieces, total_strength, Piece,
    Slicing,
};

pub use glimm::GlimmDiagnostics;
pub use history::{weak_residual, History, Segment, TestFunction, WeakResidual};
pub use network::{emitted_strength, estimate_k_junction, Coupling, Network};
pub use profile::Profile;
pub use source::{friction_exact_flux, Constant, Friction, NoSource, Source};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrontKind {
    Physical { family: usize, shock: bool },
    NonPhysical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Front {
    pub x0: f64,
    pub t0: f64,
    pub speed: f64,
    pub kind: FrontKind,
    /// Signed curve-parameter jump; non-negative for non-physical fronts.
    pub strength: f64,
}

impl Front {
    pub fn position(&self, t: f64) -> f64 {
        self.x0 + self.speed * (t - self.t0)
    }

    pub fn family(&self) -> Option<usize> {
        match self.kind {
            FrontKind::Physical { family, .. } => Some(family),
            FrontKind::NonPhysical => None,
        }
    }

    pub fn is_nonphysical(&self) -> bool {
        self.kind == FrontKind::NonPhysical
    }

    pub fn is_shock(&self) -> bool {
        matches!(self.kind, FrontKind::Physical { shock: true, .. })
    }
}

/// Fronts of one pipe with the constant states between them:
/// `states[k]` lies left of `fronts[k]` and `states[k + 1]` right of it.
#[derive(Debug, Clone, PartialEq)]
pub struct PipeTrack {
    states: Vec<PipeState>,
    fronts: Vec<Front>,
}

impl PipeTrack {
    pub fn states(&self) -> &[PipeState] {
        &self.states
    }

    pub fn fronts(&self) -> &[Front] {
        &self.fronts
    }

    /// State at `x = 0+`.
    pub fn trace(&self) -> PipeState {
        self.states[0]
    }

    pub fn far_field(&self) -> PipeState {
        *self.states.last().expect("at least one state")
    }

    pub fn state_at(&self, x: f64, t: f64) -> PipeState {
        let k = self.fronts.partition_point(|f| f.position(t) <= x);
        self.states[k]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackerConfig {
    /// Maximal rarefaction slice strength.
    pub epsilon: f64,
    /// Strength-product threshold below which the simplified solver is used;
    /// defaults to `epsilon^2`.
    pub simplify_threshold: Option<f64>,
    /// Speed of non-physical fronts; defaults to 1.1 times the largest
    /// characteristic speed of the initial data.
    pub np_speed: Option<f64>,
    /// Seeds the speed perturbation that serializes simultaneous events.
    pub seed: u64,
    pub max_events: usize,
    pub junction: JunctionOptions,
    /// Overrides the estimated junction amplification constant.
    pub k_junction: Option<f64>,
    /// Safety factor applied to the estimated junction constant.
    pub k_safety: f64,
    /// Overrides the interaction-potential weight.
    pub k_hat: Option<f64>,
    /// Evaluate Glimm functionals before and after every event.
    pub track_glimm: bool,
    /// Keep the space-time history of all fronts.
    pub record_history: bool,
    pub riemann_tol: f64,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-2,
            simplify_threshold: None,
            np_speed: None,
            seed: 0,
            max_events: 1_000_000,
            junction: JunctionOptions::default(),
            k_junction: None,
            k_safety: 2.0,
            k_hat: None,
            track_glimm: false,
            record_history: false,
            riemann_tol: 1e-12,
        }
    }
}

impl TrackerConfig {
    pub fn with_epsilon(epsilon: f64) -> Self {
        Self {
            epsilon,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EventKind {
    Collision {
        pipe: usize,
        simplified: bool,
    },
    Junction {
        pipe: usize,
        simplified: bool,
        /// Strength of the front that reached the node.
        incident: f64,
        /// Total strength emitted into all pipes.
        emitted: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventRecord {
    pub time: f64,
    pub kind: EventKind,
    pub glimm_before: Option<GlimmDiagnostics>,
    pub glimm_after: Option<GlimmDiagnostics>,
    pub fronts: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TrackerStats {
    pub events: usize,
    pub collisions_accurate: usize,
    pub collisions_simplified: usize,
    pub junction_accurate: usize,
    pub junction_simplified: usize,
    pub max_fronts: usize,
    pub max_nonphysical: usize,
    /// Largest observed emitted/incident strength ratio at the node.
    pub max_junction_ratio: f64,
    /// Largest scaled coupling residual of any node solve.
    pub max_coupling_residual: f64,
    /// Largest absolute speed of any physical front.
    pub max_physical_speed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Event {
    Collision { pipe: usize, index: usize },
    Junction { pipe: usize },
}

#[derive(Debug, Clone)]
pub struct FrontTracker {
    network: Network,
    config: TrackerConfig,
    time: f64,
    tracks: Vec<PipeTrack>,
    slicing: Slicing,
    rho_simpl: f64,
    k_junction: f64,
    k_hat: f64,
    v0: f64,
    rng: SmallRng,
    stats: TrackerStats,
    events: Vec<EventRecord>,
    history: History,
}

impl FrontTracker {
    /// Builds the initial front configuration: every jump of the profiles is
    /// resolved with the accurate solver and the node problem with the
    /// coupling solver.
    pub fn new(network: Network, initial: Vec<Profile>, config: TrackerConfig) -> Result<Self> {
        let gas = network.gas;
        gas.validate()?;
        if initial.len() != network.len() {
            return Err(ProblemError::Other(alloc::format!(
                "{} pipes but {} initial profiles",
                network.len(),
                initial.len()
            ))
            .into());
        }
        if !(config.epsilon > 0.0) {
            return Err(ProblemError::Other(alloc::format!(
                "epsilon must be positive, got {}",
                config.epsilon
            ))
            .into());
        }
        let mut max_speed: f64 = 0.0;
        for (i, profile) in initial.iter().enumerate() {
            for s in profile.states() {
                if s.model() != network.pipes[i].model {
                    return Err(ProblemError::ModelMismatch { pipe: i }.into());
                }
                s.validate(&gas).map_err(|_| ProblemError::InvalidState {
                    pipe: i,
                    reason: "profile state is not physical",
                })?;
                for l in s.eigenvalues(&gas)?.as_slice() {
                    max_speed = max_speed.max(abs(*l));
                }
            }
        }
        let np_speed = config.np_speed.unwrap_or(1.1 * max_speed);
        let rho_simpl = config
            .simplify_threshold
            .unwrap_or(config.epsilon * config.epsilon);
        let slicing = Slicing {
            epsilon: config.epsilon,
            lump_below: config.epsilon * config.epsilon,
            drop_relative: 1e-12,
            np_speed,
        };
        let mut tracker = Self {
            network,
            config,
            time: 0.0,
            tracks: Vec::new(),
            slicing,
            rho_simpl,
            k_junction: 1.0,
            k_hat: 1.0,
            v0: 0.0,
            rng: SmallRng::seed_from_u64(config.seed),
            stats: TrackerStats::default(),
            events: Vec::new(),
            history: History::default(),
        };
        for profile in &initial {
            let mut track = PipeTrack {
                states: vec![profile.states()[0]],
                fronts: Vec::new(),
            };
            for (k, &x) in profile.breakpoints().iter().enumerate() {
                let left = *track.states.last().expect("non-empty");
                let right = profile.states()[k + 1];
                let pieces = riemann_pieces(&left, &right, &slicing, &gas, config.riemann_tol)?;
                for p in pieces {
                    let front = tracker.make_front(&p, x, 0.0);
                    track.fronts.push(front);
                    track.states.push(p.right);
                }
            }
            tracker.tracks.push(track);
        }
        tracker.resolve_junction()?;
        let traces: Vec<PipeState> = tracker.tracks.iter().map(|t| t.trace()).collect();
        tracker.k_junction = match config.k_junction {
            Some(k) => k,
            None => {
                estimate_k_junction(&tracker.network, &traces, &config.junction, config.k_safety)?
            }
        };
        tracker.v0 = tracker.glimm().v;
        tracker.k_hat = config.k_hat.unwrap_or(if tracker.v0 > 0.0 {
            tracker.k_junction.min(1.0) / (2.0 * tracker.v0)
        } else {
            1.0
        });
        tracker.update_counts();
        Ok(tracker)
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn config(&self) -> &TrackerConfig {
        &self.config
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn tracks(&self) -> &[PipeTrack] {
        &self.tracks
    }

    pub fn epsilon(&self) -> f64 {
        self.config.epsilon
    }

    pub fn np_speed(&self) -> f64 {
        self.slicing.np_speed
    }

    pub fn simplify_threshold(&self) -> f64 {
        self.rho_simpl
    }

    pub fn k_junction(&self) -> f64 {
        self.k_junction
    }

    pub fn k_hat(&self) -> f64 {
        self.k_hat
    }

    /// Weighted strength `V` right after initialization.
    pub fn initial_v(&self) -> f64 {
        self.v0
    }

    pub fn stats(&self) -> &TrackerStats {
        &self.stats
    }

    pub fn events(&self) -> &[EventRecord] {
        &self.events
    }

    pub fn front_count(&self) -> usize {
        self.tracks.iter().map(|t| t.fronts.len()).sum()
    }

    pub fn nonphysical_count(&self) -> usize {
        self.tracks
            .iter()
            .flat_map(|t| t.fronts.iter())
            .filter(|f| f.is_nonphysical())
            .count()
    }

    pub fn sample(&self, pipe: usize, x: f64) -> PipeState {
        self.tracks[pipe].state_at(x, self.time)
    }

    pub fn traces(&self) -> Vec<PipeState> {
        self.tracks.iter().map(|t| t.trace()).collect()
    }

    /// Sum over pipes of the conservative jumps.
    pub fn total_variation(&self) -> f64 {
        self.tracks
            .iter()
            .map(|t| {
                t.states
                    .windows(2)
                    .map(|w| w[0].distance(&w[1]))
                    .sum::<f64>()
            })
            .sum()
    }

    pub fn glimm(&self) -> GlimmDiagnostics {
        glimm::evaluate(self)
    }

    /// Recorded fronts plus the live fronts up to the current time.
    pub fn history(&self) -> History {
        let mut h = self.history.clone();
        for (p, track) in self.tracks.iter().enumerate() {
            for (k, f) in track.fronts.iter().enumerate() {
                h.segments.push(segment(p, f, &track.states, k, self.time));
            }
        }
        h
    }

    /// Weak-form residual of pipe `pipe` against `test`; requires
    /// `record_history`.
    pub fn weak_residual(&self, pipe: usize, test: &TestFunction) -> Result<WeakResidual> {
        weak_residual(&self.history().segments, pipe, test, &self.network.gas)
    }

    /// Time of the next event, or infinity when nothing is pending.
    pub fn next_event_time(&self) -> f64 {
        self.next_event().map_or(f64::INFINITY, |(t, _)| t)
    }

    fn next_event(&self) -> Option<(f64, Event)> {
        let mut best: Option<(f64, Event)> = None;
        let mut consider = |t: f64, e: Event| {
            if t.is_finite() && best.is_none_or(|(bt, _)| t < bt) {
                best = Some((t, e));
            }
        };
        for (pipe, track) in self.tracks.iter().enumerate() {
            if let Some(f) = track.fronts.first() {
                if f.speed < 0.0 {
                    consider(f.t0 - f.x0 / f.speed, Event::Junction { pipe });
                }
            }
            for (index, w) in track.fronts.windows(2).enumerate() {
                let (a, b) = (&w[0], &w[1]);
                if a.speed > b.speed {
                    let t = (b.x0 - a.x0 + a.speed * a.t0 - b.speed * b.t0) / (a.speed - b.speed);
                    consider(t, Event::Collision { pipe, index });
                }
            }
        }
        best.map(|(t, e)| (t.max(self.time), e))
    }

    /// Processes the next event if it happens no later than `horizon` and
    /// returns its time; otherwise moves the clock to `horizon`.
    pub fn advance(&mut self, horizon: f64) -> Result<Option<f64>> {
        let next = self.next_event();
        let (t, event) = match next {
            None if !horizon.is_finite() => return Err(Error::EventStarvation),
            Some((t, _)) if t > horizon => {
                self.time = horizon.max(self.time);
                return Ok(None);
            }
            None => {
                self.time = horizon.max(self.time);
                return Ok(None);
            }
            Some(pair) => pair,
        };
        if self.stats.events >= self.config.max_events {
            return Err(Error::EventBudget(self.config.max_events));
        }
        let before = self.config.track_glimm.then(|| self.glimm());
        self.time = t;
        let kind = match event {
            Event::Collision { pipe, index } => self.collide(pipe, index)?,
            Event::Junction { pipe } => self.hit_junction(pipe)?,
        };
        self.stats.events += 1;
        self.update_counts();
        let after = self.config.track_glimm.then(|| self.glimm());
        self.events.push(EventRecord {
            time: t,
            kind,
            glimm_before: before,
            glimm_after: after,
            fronts: self.front_count(),
        });
        Ok(Some(t))
    }

    /// Processes all events up to `horizon` and returns how many there were.
    pub fn run_until(&mut self, horizon: f64) -> Result<usize> {
        let mut n = 0;
        while self.advance(horizon)?.is_some() {
            n += 1;
        }
        Ok(n)
    }

    /// One operator-splitting step: homogeneous evolution over `dt`, then the
    /// explicit Euler update `U += dt * G(t0, U)` of every constant state,
    /// followed by re-resolution of the jumps and node data that changed.
    pub fn split_step(&mut self, source: &dyn Source, dt: f64) -> Result<()> {
        let t0 = self.time;
        self.run_until(t0 + dt)?;
        let gas = self.network.gas;
        let mut changed: Vec<Vec<bool>> = Vec::with_capacity(self.tracks.len());
        let mut any = false;
        for (p, track) in self.tracks.iter_mut().enumerate() {
            let mut flags = vec![false; track.states.len()];
            for (k, s) in track.states.iter_mut().enumerate() {
                let g = source.evaluate(p, t0, s);
                if g == [0.0; 3] {
                    continue;
                }
                let mut u = s.conserved();
                for i in 0..3 {
                    u[i] += dt * g[i];
                }
                let next = s.with_conserved(u);
                next.validate(&gas)
                    .map_err(|_| Error::SubsonicViolation { pipe: p })?;
                let want = match self.network.pipes[p].orientation {
                    crate::junction::Orientation::Incoming => crate::thermo::Subsonic::DMinus,
                    crate::junction::Orientation::Outgoing => crate::thermo::Subsonic::DPlus,
                };
                if next.classify_subsonic(&gas) != want {
                    return Err(Error::SubsonicViolation { pipe: p });
                }
                *s = next;
                flags[k] = true;
                any = true;
            }
            changed.push(flags);
        }
        if !any {
            return Ok(());
        }
        // slices perturbed by the source may exceed epsilon slightly; do not
        // split them again
        let slicing = Slicing {
            epsilon: 1.5 * self.config.epsilon,
            ..self.slicing
        };
        let t = self.time;
        for p in 0..self.tracks.len() {
            for k in (0..self.tracks[p].fronts.len()).rev() {
                if !(changed[p][k] || changed[p][k + 1]) {
                    continue;
                }
                let track = &self.tracks[p];
                let (l, r) = (track.states[k], track.states[k + 1]);
                let x = track.fronts[k].position(t);
                let pieces = riemann_pieces(&l, &r, &slicing, &gas, self.config.riemann_tol)?;
                self.splice(p, k, k + 1, &pieces, x, t);
            }
        }
        self.resolve_junction()?;
        self.update_counts();
        Ok(())
    }

    /// Step size `length / (4 * max wave speed)`.
    pub fn default_split_step(&self, length: f64) -> f64 {
        length / (4.0 * self.slicing.np_speed / 1.1)
    }

    /// `sum_pipes ∫ |U_self - U_other|_1 dx` at the respective current times;
    /// infinite when the far fields differ.
    pub fn l1_distance(&self, other: &FrontTracker) -> f64 {
        let mut total = 0.0;
        for (a, b) in self.tracks.iter().zip(&other.tracks) {
            if a.far_field() != b.far_field() {
                return f64::INFINITY;
            }
            let mut xs: Vec<f64> = a
                .fronts
                .iter()
                .map(|f| f.position(self.time))
                .chain(b.fronts.iter().map(|f| f.position(other.time)))
                .filter(|x| *x > 0.0)
                .collect();
            xs.push(0.0);
            xs.sort_by(|x, y| x.total_cmp(y));
            for w in xs.windows(2) {
                let len = w[1] - w[0];
                if len <= 0.0 {
                    continue;
                }
                let mid = 0.5 * (w[0] + w[1]);
                total += len
                    * a.state_at(mid, self.time)
                        .distance(&b.state_at(mid, other.time));
            }
        }
        total
    }

    fn update_counts(&mut self) {
        let n = self.front_count();
        self.stats.max_fronts = self.stats.max_fronts.max(n);
        self.stats.max_nonphysical = self.stats.max_nonphysical.max(self.nonphysical_count());
        for f in self.tracks.iter().flat_map(|t| t.fronts.iter()) {
            if !f.is_nonphysical() {
                self.stats.max_physical_speed = self.stats.max_physical_speed.max(abs(f.speed));
            }
        }
    }

    fn make_front(&mut self, piece: &Piece, x: f64, t: f64) -> Front {
        let jitter: f64 = self.rng.gen_range(-1.0..=1.0);
        let kind = match piece.family {
            Some(family) => FrontKind::Physical {
                family,
                shock: piece.shock,
            },
            None => FrontKind::NonPhysical,
        };
        Front {
            x0: x,
            t0: t,
            speed: piece.speed * (1.0 + 1e-12 * jitter),
            kind,
            strength: piece.strength,
        }
    }

    fn record(&mut self, pipe: usize, k: usize) {
        if self.config.record_history {
            let track = &self.tracks[pipe];
            let seg = segment(pipe, &track.fronts[k], &track.states, k, self.time);
            self.history.segments.push(seg);
        }
    }

    /// Replaces fronts `lo..hi` of `pipe` by `pieces`, all born at `(x, t)`.
    /// The last piece must end at `states[hi]`; an empty list merges
    /// `states[hi]` into `states[lo]`.
    fn splice(&mut self, pipe: usize, lo: usize, hi: usize, pieces: &[Piece], x: f64, t: f64) {
        for k in lo..hi {
            self.record(pipe, k);
        }
        let fronts: Vec<Front> = pieces.iter().map(|p| self.make_front(p, x, t)).collect();
        let track = &mut self.tracks[pipe];
        if pieces.is_empty() {
            if hi > lo {
                track.fronts.drain(lo..hi);
                track.states.drain(lo + 1..=hi);
            }
            return;
        }
        let interior: Vec<PipeState> = pieces[..pieces.len() - 1].iter().map(|p| p.right).collect();
        track.fronts.splice(lo..hi, fronts);
        track.states.splice(lo + 1..hi, interior);
    }

    fn collide(&mut self, pipe: usize, index: usize) -> Result<EventKind> {
        let t = self.time;
        let track = &self.tracks[pipe];
        let (a, b) = (track.fronts[index], track.fronts[index + 1]);
        let (left, right) = (track.states[index], track.states[index + 2]);
        let x = 0.5 * (a.position(t) + b.position(t));
        let candidate = if a.is_nonphysical() || b.is_nonphysical() {
            self.nonphysical_interaction(&left, &a, &b, &right)
        } else if abs(a.strength * b.strength) < self.rho_simpl {
            self.simplified_interaction(&left, &a, &b, &right)
        } else {
            None
        };
        let (pieces, simplified) = match candidate {
            Some(p) if increasing(&p) => (p, true),
            _ => (
                riemann_pieces(
                    &left,
                    &right,
                    &self.slicing,
                    &self.network.gas,
                    self.config.riemann_tol,
                )?,
                false,
            ),
        };
        self.splice(pipe, index, index + 2, &pieces, x, t);
        if simplified {
            self.stats.collisions_simplified += 1;
        } else {
            self.stats.collisions_accurate += 1;
        }
        Ok(EventKind::Collision { pipe, simplified })
    }

    /// Single front of `family` and strength `v` from `left`, or `None` when
    /// the wave map leaves the admissible states.
    fn single(&self, left: &PipeState, family: usize, v: f64) -> Option<Piece> {
        let gas = &self.network.gas;
        let right = forward(left, family, v, gas).ok()?;
        let shock = is_shock(left.model(), family, v);
        let speed = front_speed(left, &right, family, shock, gas).ok()?;
        Some(Piece {
            family: Some(family),
            strength: v,
            shock,
            speed,
            right,
        })
    }

    /// Appends a non-physical front from the end of `pieces` (or `left`) to
    /// `right` carrying the remaining defect.
    fn close(
        &self,
        mut pieces: Vec<Piece>,
        left: &PipeState,
        right: &PipeState,
    ) -> Option<Vec<Piece>> {
        let gas = &self.network.gas;
        let from = pieces.last().map_or(*left, |p| p.right);
        let defect = total_strength(&from, right, gas, self.config.riemann_tol).ok()?;
        let scale = parameter(&from, 1, gas).ok()?.max(from.rho());
        if defect <= self.slicing.drop_relative * scale {
            if let Some(last) = pieces.last_mut() {
                last.right = *right;
            }
        } else {
            pieces.push(Piece {
                family: None,
                strength: defect,
                shock: false,
                speed: self.slicing.np_speed,
                right: *right,
            });
        }
        Some(pieces)
    }

    fn nonphysical_interaction(
        &self,
        left: &PipeState,
        a: &Front,
        b: &Front,
        right: &PipeState,
    ) -> Option<Vec<Piece>> {
        match (a.family(), b.family()) {
            (None, Some(kb)) => {
                let p = self.single(left, kb, b.strength)?;
                self.close(vec![p], left, right)
            }
            (None, None) => self.close(Vec::new(), left, right),
            _ => None,
        }
    }

    fn simplified_interaction(
        &self,
        left: &PipeState,
        a: &Front,
        b: &Front,
        right: &PipeState,
    ) -> Option<Vec<Piece>> {
        let (ka, kb) = (a.family()?, b.family()?);
        let pieces = if ka > kb {
            let first = self.single(left, kb, b.strength)?;
            let second = self.single(&first.right, ka, a.strength)?;
            vec![first, second]
        } else if ka == kb {
            let v = a.strength + b.strength;
            if v == 0.0 {
                Vec::new()
            } else {
                vec![self.single(left, ka, v)?]
            }
        } else {
            return None;
        };
        self.close(pieces, left, right)
    }

    fn hit_junction(&mut self, pipe: usize) -> Result<EventKind> {
        let t = self.time;
        let front = self.tracks[pipe].fronts[0];
        let incident = abs(front.strength);
        if incident < self.rho_simpl {
            // reflect into a non-physical front; the node data stay as they are
            let track = &self.tracks[pipe];
            let (l, r) = (track.states[0], track.states[1]);
            let defect = total_strength(&l, &r, &self.network.gas, self.config.riemann_tol)?;
            let piece = Piece {
                family: None,
                strength: defect,
                shock: false,
                speed: self.slicing.np_speed,
                right: r,
            };
            self.splice(pipe, 0, 1, &[piece], 0.0, t);
            self.stats.junction_simplified += 1;
            return Ok(EventKind::Junction {
                pipe,
                simplified: true,
                incident,
                emitted: defect,
            });
        }
        self.record(pipe, 0);
        let track = &mut self.tracks[pipe];
        track.fronts.remove(0);
        track.states.remove(0);
        let emitted = self.resolve_junction()?;
        if incident > 0.0 {
            self.stats.max_junction_ratio = self.stats.max_junction_ratio.max(emitted / incident);
        }
        self.stats.junction_accurate += 1;
        Ok(EventKind::Junction {
            pipe,
            simplified: false,
            incident,
            emitted,
        })
    }

    /// Solves the node problem for the current traces and emits the waves
    /// connecting each star state to its pipe. Returns the emitted strength.
    fn resolve_junction(&mut self) -> Result<f64> {
        let gas = self.network.gas;
        let traces = self.traces();
        let sol = self.network.solve(&traces, &self.config.junction)?;
        self.stats.max_coupling_residual = self.stats.max_coupling_residual.max(sol.residual_norm);
        let emitted = emitted_strength(&sol, &traces, &gas)?;
        let t = self.time;
        for (p, base) in traces.iter().enumerate() {
            let star = sol.star_states[p];
            let jump = base_sigma(base, &gas)? - sol.sigma[p];
            let waves: Vec<(usize, f64)> = match (sol.tau[p], base.model()) {
                (Some(tau), _) => vec![(2, -tau), (3, jump)],
                (None, Model::M1) => vec![(3, jump)],
                _ => vec![(2, jump)],
            };
            let pieces = chain_pieces(&star, &waves, base, &self.slicing, &gas)?;
            if pieces.is_empty() {
                continue;
            }
            if pieces.iter().any(|pc| !(pc.speed > 0.0)) {
                return Err(Error::SubsonicViolation { pipe: p });
            }
            let fronts: Vec<Front> = pieces
                .iter()
                .map(|pc| self.make_front(pc, 0.0, t))
                .collect();
            let mut states = vec![star];
            states.extend(pieces[..pieces.len() - 1].iter().map(|pc| pc.right));
            let track = &mut self.tracks[p];
            track.fronts.splice(0..0, fronts);
            track.states.splice(0..0, states);
        }
        Ok(emitted)
    }
}

fn segment(pipe: usize, f: &Front, states: &[PipeState], k: usize, t_end: f64) -> Segment {
    Segment {
        pipe,
        t_start: f.t0,
        t_end,
        x_start: f.x0,
        speed: f.speed,
        left: states[k],
        right: states[k + 1],
        nonphysical: f.is_nonphysical(),
    }
}

fn increasing(pieces: &[Piece]) -> bool {
    pieces.windows(2).all(|w| w[0].speed < w[1].speed)
}

#[cfg(test)]
mod tests;
