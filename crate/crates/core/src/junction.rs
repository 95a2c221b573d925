//! Entropy-preserving junction coupling: mass conservation, a common
//! enthalpy and entropy mixing, solved for the junction traces of every pipe.
//!
//! Unknowns are the wave-curve parameters of each pipe (see
//! [`crate::laxcurves::trace`]). Internally the pipes are renumbered as
//! outgoing polytropic pipes first, then the enthalpy pivot (the incoming pipe
//! of maximal entropy), remaining incoming polytropic, incoming `M2`,
//! incoming `M3`, and finally outgoing isentropic pipes. All public results
//! are reported in the caller's order.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, ProblemError, Result};
use crate::laxcurves::{base_sigma, trace, PipeRole, TracePoint};
use crate::linalg::{norm_inf, Lu, Matrix};
use crate::math::{abs, exp};
use crate::newton::{damped_newton, NewtonOptions};
use crate::thermo::{GasConstants, Model, PipeState, Subsonic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Gas flows into the junction (`-c < u < 0` in pipe coordinates).
    Incoming,
    /// Gas flows out of the junction (`0 < u < c`).
    Outgoing,
}

impl Orientation {
    pub fn of(state: &PipeState, gas: &GasConstants) -> Option<Self> {
        match state.classify_subsonic(gas) {
            Subsonic::DPlus => Some(Orientation::Outgoing),
            Subsonic::DMinus => Some(Orientation::Incoming),
            Subsonic::NotSubsonic => None,
        }
    }

    fn class(self) -> Subsonic {
        match self {
            Orientation::Incoming => Subsonic::DMinus,
            Orientation::Outgoing => Subsonic::DPlus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipeSpec {
    /// Cross-section area in m^2.
    pub area: f64,
    pub model: Model,
    pub orientation: Orientation,
}

impl PipeSpec {
    pub fn new(area: f64, model: Model, orientation: Orientation) -> Self {
        Self {
            area,
            model,
            orientation,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JunctionOptions {
    pub newton: NewtonOptions,
    /// Replace `kappa` of outgoing isentropic star states by the mixed value.
    pub assign_mixed_entropy: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveWarning {
    /// Compressor run with zero control value.
    IdleCompressor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobianMode {
    Analytic,
    FiniteDifference,
}

/// Converged coupling, in the caller's pipe order.
#[derive(Debug, Clone, PartialEq)]
pub struct StarSolution {
    pub star_states: Vec<PipeState>,
    pub sigma: Vec<f64>,
    /// Contact parameter, present for outgoing polytropic pipes only.
    pub tau: Vec<Option<f64>>,
    pub h_star: f64,
    pub s_star: f64,
    /// `exp((s* - s0)/c_v)`, the isentropic coefficient of the mixed gas.
    pub mixed_kappa: f64,
    /// Infinity norm of the scaled coupling residual.
    pub residual_norm: f64,
    pub iterations: usize,
    pub warnings: Vec<SolveWarning>,
}

/// Residuals of the coupling conditions recomputed from star states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingDiagnostics {
    /// `|sum a q| / sum a |q|`.
    pub mass_residual: f64,
    pub mass_residual_abs: f64,
    /// `(max h - min h) / max |h|`.
    pub max_enthalpy_spread: f64,
    /// Largest `|s_j - s*|` over outgoing polytropic pipes.
    pub max_entropy_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JunctionProblem {
    gas: GasConstants,
    pipes: Vec<PipeSpec>,
    states: Vec<PipeState>,
    /// `order[k]` is the caller index of normalized position `k`.
    order: Vec<usize>,
    roles: Vec<PipeRole>,
    n_out_m1: usize,
}

pub(crate) fn check_pipe(
    index: usize,
    spec: &PipeSpec,
    state: &PipeState,
    gas: &GasConstants,
) -> core::result::Result<(), ProblemError> {
    if !(spec.area > 0.0) || !spec.area.is_finite() {
        return Err(ProblemError::NonPositiveArea {
            pipe: index,
            area: spec.area,
        });
    }
    if state.model() != spec.model {
        return Err(ProblemError::ModelMismatch { pipe: index });
    }
    if let Err(e) = state.validate(gas) {
        let reason = match e {
            Error::NonPositiveDensity(_) => "non-positive density",
            Error::NonPositivePressure(_) => "non-positive pressure",
            _ => "non-finite or inconsistent values",
        };
        return Err(ProblemError::InvalidState {
            pipe: index,
            reason,
        });
    }
    match Orientation::of(state, gas) {
        None => Err(ProblemError::NotSubsonic { pipe: index }),
        Some(o) if o != spec.orientation => Err(ProblemError::OrientationMismatch { pipe: index }),
        Some(_) => Ok(()),
    }
}

impl JunctionProblem {
    pub fn new(
        gas: GasConstants,
        pipes: Vec<PipeSpec>,
        states: Vec<PipeState>,
    ) -> core::result::Result<Self, ProblemError> {
        if pipes.len() != states.len() {
            return Err(ProblemError::Other(alloc::format!(
                "{} pipe specifications but {} states",
                pipes.len(),
                states.len()
            )));
        }
        gas.validate()
            .map_err(|e| ProblemError::Other(alloc::format!("{e}")))?;
        for (i, (p, s)) in pipes.iter().zip(&states).enumerate() {
            check_pipe(i, p, s, &gas)?;
        }
        let incoming = pipes
            .iter()
            .filter(|p| p.orientation == Orientation::Incoming)
            .count();
        if incoming == 0 || incoming == pipes.len() {
            return Err(ProblemError::Topology {
                incoming,
                total: pipes.len(),
            });
        }

        let mut pivot = None;
        let mut best = f64::NEG_INFINITY;
        for (i, (p, s)) in pipes.iter().zip(&states).enumerate() {
            if p.orientation == Orientation::Incoming {
                let e = s.entropy(&gas).expect("validated state");
                if e > best {
                    best = e;
                    pivot = Some(i);
                }
            }
        }
        let pivot = pivot.expect("at least one incoming pipe");
        let rank = |i: usize| -> u8 {
            let p = &pipes[i];
            match (p.orientation, p.model) {
                _ if i == pivot => 1,
                (Orientation::Outgoing, Model::M1) => 0,
                (Orientation::Incoming, Model::M1) => 2,
                (Orientation::Incoming, Model::M2) => 3,
                (Orientation::Incoming, Model::M3) => 4,
                (Orientation::Outgoing, _) => 5,
            }
        };
        let mut order: Vec<usize> = (0..pipes.len()).collect();
        order.sort_by_key(|&i| (rank(i), i));
        let roles = order
            .iter()
            .map(|&i| PipeRole::of(pipes[i].model, pipes[i].orientation.class()))
            .collect::<Vec<_>>();
        let n_out_m1 = roles.iter().filter(|r| r.has_tau()).count();
        Ok(Self {
            gas,
            pipes,
            states,
            order,
            roles,
            n_out_m1,
        })
    }

    /// Same topology with new pipe states (validated again).
    pub fn with_states(&self, states: Vec<PipeState>) -> core::result::Result<Self, ProblemError> {
        Self::new(self.gas, self.pipes.clone(), states)
    }

    pub fn gas(&self) -> &GasConstants {
        &self.gas
    }

    pub fn pipes(&self) -> &[PipeSpec] {
        &self.pipes
    }

    pub fn states(&self) -> &[PipeState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.pipes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pipes.is_empty()
    }

    /// Caller index of each normalized position.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Caller index of the enthalpy pivot.
    pub fn pivot(&self) -> usize {
        self.order[self.n_out_m1]
    }

    pub fn outgoing_m1(&self) -> usize {
        self.n_out_m1
    }

    /// Number of unknowns: one `sigma` per pipe plus one `tau` per outgoing
    /// polytropic pipe.
    pub fn dim(&self) -> usize {
        self.pipes.len() + self.n_out_m1
    }

    /// Parameters reproducing the current pipe states (`tau = 0`).
    pub fn base_point(&self) -> Vec<f64> {
        let mut x: Vec<f64> = self
            .order
            .iter()
            .map(|&i| base_sigma(&self.states[i], &self.gas).expect("validated state"))
            .collect();
        x.extend(core::iter::repeat_n(0.0, self.n_out_m1));
        x
    }

    fn area(&self, k: usize) -> f64 {
        self.pipes[self.order[k]].area
    }

    fn is_incoming(&self, k: usize) -> bool {
        self.pipes[self.order[k]].orientation == Orientation::Incoming
    }

    /// Trace points in normalized order.
    pub fn traces(&self, x: &[f64]) -> Result<Vec<TracePoint>> {
        let n = self.pipes.len();
        (0..n)
            .map(|k| {
                let tau = if k < self.n_out_m1 { x[n + k] } else { 0.0 };
                trace(
                    self.roles[k],
                    x[k],
                    tau,
                    &self.states[self.order[k]],
                    &self.gas,
                )
            })
            .collect()
    }

    fn incoming_flux(&self, traces: &[TracePoint]) -> (f64, f64) {
        let mut sum = 0.0;
        let mut scale = 0.0;
        for (k, t) in traces.iter().enumerate() {
            if self.is_incoming(k) {
                sum += self.area(k) * t.q;
                scale += self.area(k) * abs(t.q);
            }
        }
        (sum, scale)
    }

    fn mix(&self, traces: &[TracePoint]) -> Result<f64> {
        let (den, scale) = self.incoming_flux(traces);
        if !(abs(den) >= 1e-12 * scale) || den == 0.0 {
            return Err(Error::SingularEntropyMix(den));
        }
        let num: f64 = traces
            .iter()
            .enumerate()
            .filter(|(k, _)| self.is_incoming(*k))
            .map(|(k, t)| self.area(k) * t.q * t.s)
            .sum();
        Ok(num / den)
    }

    /// Flux-weighted entropy of the incoming pipes at parameters `x`.
    pub fn entropy_mix(&self, x: &[f64]) -> Result<f64> {
        self.mix(&self.traces(x)?)
    }

    /// Unscaled coupling residual: mass, enthalpy differences against the
    /// pivot, and entropy deviations of the outgoing polytropic pipes.
    pub fn assemble_phi(&self, x: &[f64]) -> Result<Vec<f64>> {
        let traces = self.traces(x)?;
        self.phi_from_traces(&traces)
    }

    fn phi_from_traces(&self, traces: &[TracePoint]) -> Result<Vec<f64>> {
        let n = self.pipes.len();
        let p = self.n_out_m1;
        let s_star = self.mix(traces)?;
        let mut phi = Vec::with_capacity(self.dim());
        phi.push((0..n).map(|k| self.area(k) * traces[k].q).sum());
        for k in (0..n).filter(|&k| k != p) {
            phi.push(traces[p].h - traces[k].h);
        }
        for t in traces.iter().take(self.n_out_m1) {
            phi.push(t.s - s_star);
        }
        Ok(phi)
    }

    /// Row index of the enthalpy equation of normalized pipe `k != pivot`.
    fn h_row(&self, k: usize) -> usize {
        if k < self.n_out_m1 {
            1 + k
        } else {
            k
        }
    }

    pub fn assemble_jacobian(&self, x: &[f64], mode: JacobianMode) -> Result<Matrix> {
        match mode {
            JacobianMode::Analytic => self.analytic_jacobian(x),
            JacobianMode::FiniteDifference => self.fd_jacobian(x),
        }
    }

    fn analytic_jacobian(&self, x: &[f64]) -> Result<Matrix> {
        let n = self.pipes.len();
        let p = self.n_out_m1;
        let traces = self.traces(x)?;
        let s_star = self.mix(&traces)?;
        let (den, _) = self.incoming_flux(&traces);
        let mut jac = Matrix::zeros(self.dim());
        for (k, t) in traces.iter().enumerate() {
            let a = self.area(k);
            jac.set(0, k, a * t.dq.sigma);
            if k < self.n_out_m1 {
                jac.set(0, n + k, a * t.dq.tau);
            }
        }
        for k in (0..n).filter(|&k| k != p) {
            let row = self.h_row(k);
            jac.add(row, p, traces[p].dh.sigma);
            jac.add(row, k, -traces[k].dh.sigma);
            if k < self.n_out_m1 {
                jac.add(row, n + k, -traces[k].dh.tau);
            }
        }
        // derivative of the entropy mix with respect to each incoming sigma
        let dmix: Vec<f64> = traces
            .iter()
            .enumerate()
            .map(|(k, t)| {
                if self.is_incoming(k) {
                    self.area(k) * (t.dq.sigma * (t.s - s_star) + t.q * t.ds.sigma) / den
                } else {
                    0.0
                }
            })
            .collect();
        for j in 0..self.n_out_m1 {
            let row = n + j;
            for (k, d) in dmix.iter().enumerate() {
                jac.add(row, k, -d);
            }
            jac.add(row, j, traces[j].ds.sigma);
            jac.add(row, n + j, traces[j].ds.tau);
        }
        Ok(jac)
    }

    fn fd_step(&self, x: &[f64], i: usize) -> f64 {
        let n = self.pipes.len();
        let typical = if i < n {
            base_sigma(&self.states[self.order[i]], &self.gas).unwrap_or(1.0)
        } else {
            self.states[self.order[i - n]].rho()
        };
        1e-6 * abs(x[i]).max(typical)
    }

    fn fd_jacobian(&self, x: &[f64]) -> Result<Matrix> {
        let d = self.dim();
        let mut jac = Matrix::zeros(d);
        let mut xp = x.to_vec();
        for i in 0..d {
            let h = self.fd_step(x, i);
            xp[i] = x[i] + h;
            let fp = self.assemble_phi(&xp)?;
            xp[i] = x[i] - h;
            let fm = self.assemble_phi(&xp)?;
            xp[i] = x[i];
            for r in 0..d {
                jac.set(r, i, (fp[r] - fm[r]) / (2.0 * h));
            }
        }
        Ok(jac)
    }

    /// 3x3 blocks `(mass, enthalpy_j, entropy_j) x (sigma_j, sigma_pivot, tau_j)`
    /// of the Jacobian for every outgoing polytropic pipe `j`; the Jacobian
    /// is regular exactly when all of them are.
    pub fn outgoing_blocks(&self, jac: &Matrix) -> Vec<Matrix> {
        let n = self.pipes.len();
        let p = self.n_out_m1;
        (0..self.n_out_m1)
            .map(|j| jac.select(&[0, self.h_row(j), n + j], &[j, p, n + j]))
            .collect()
    }

    /// Row scales that make the residual dimensionless.
    pub fn row_scales(&self) -> Vec<f64> {
        let n = self.pipes.len();
        let flux: f64 = (0..n)
            .map(|k| self.area(k) * abs(self.states[self.order[k]].q()))
            .sum();
        let h = abs(self.states[self.pivot()]
            .enthalpy(&self.gas)
            .expect("validated state"));
        let mut s = vec![1.0 / flux];
        s.extend(core::iter::repeat_n(1.0 / h, n - 1));
        s.extend(core::iter::repeat_n(1.0 / self.gas.cv, self.n_out_m1));
        s
    }

    fn check_orientation(&self, traces: &[TracePoint]) -> Result<()> {
        for (k, t) in traces.iter().enumerate() {
            let want = self.pipes[self.order[k]].orientation.class();
            if t.state.classify_subsonic(&self.gas) != want {
                return Err(Error::SubsonicViolation {
                    pipe: self.order[k],
                });
            }
        }
        Ok(())
    }

    /// Solves the coupling from the base point.
    pub fn solve(&self, opts: &JunctionOptions) -> Result<StarSolution> {
        let scales = self.row_scales();
        let scaled = |x: &[f64]| -> Result<Vec<f64>> {
            let traces = self.traces(x)?;
            self.check_orientation(&traces)?;
            let phi = self.phi_from_traces(&traces)?;
            Ok(phi.iter().zip(&scales).map(|(v, s)| v * s).collect())
        };
        let jac = |x: &[f64]| -> Result<Matrix> {
            let mut m = self.analytic_jacobian(x)?;
            for (i, s) in scales.iter().enumerate() {
                m.scale_row(i, *s);
            }
            Ok(m)
        };
        let x0 = self.base_point();
        let report = damped_newton(&x0, scaled, jac, &opts.newton)?;
        self.build_solution(&report.x, report.residual, report.iterations, opts)
    }

    fn build_solution(
        &self,
        x: &[f64],
        residual_norm: f64,
        iterations: usize,
        opts: &JunctionOptions,
    ) -> Result<StarSolution> {
        let n = self.pipes.len();
        let traces = self.traces(x)?;
        self.check_orientation(&traces)?;
        let s_star = self.mix(&traces)?;
        let mixed_kappa = exp((s_star - self.gas.s0) / self.gas.cv);
        let mut star_states = vec![traces[0].state; n];
        let mut sigma = vec![0.0; n];
        let mut tau = vec![None; n];
        for (k, t) in traces.iter().enumerate() {
            let i = self.order[k];
            let mut st = t.state;
            if opts.assign_mixed_entropy && !self.is_incoming(k) && st.model() != Model::M1 {
                st = PipeState::iso(st.model(), st.rho(), st.q(), mixed_kappa);
            }
            star_states[i] = st;
            sigma[i] = x[k];
            if k < self.n_out_m1 {
                tau[i] = Some(x[n + k]);
            }
        }
        Ok(StarSolution {
            star_states,
            sigma,
            tau,
            h_star: traces[self.n_out_m1].h,
            s_star,
            mixed_kappa,
            residual_norm,
            iterations,
            warnings: Vec::new(),
        })
    }

    /// Recomputes the coupling conditions from the star states alone.
    pub fn verify(&self, sol: &StarSolution) -> CouplingDiagnostics {
        verify_states(&self.pipes, &sol.star_states, &self.gas)
    }
}

/// Coupling residuals of arbitrary trace states, e.g. those of a running
/// front tracker.
pub fn verify_states(
    pipes: &[PipeSpec],
    states: &[PipeState],
    gas: &GasConstants,
) -> CouplingDiagnostics {
    let mut mass = 0.0;
    let mut scale = 0.0;
    let mut num = 0.0;
    let mut den = 0.0;
    let (mut hmin, mut hmax, mut hmag) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
    for (p, s) in pipes.iter().zip(states) {
        let th = match s.thermo_quantities(gas) {
            Ok(t) => t,
            Err(_) => {
                return CouplingDiagnostics {
                    mass_residual: f64::INFINITY,
                    mass_residual_abs: f64::INFINITY,
                    max_enthalpy_spread: f64::INFINITY,
                    max_entropy_residual: f64::INFINITY,
                }
            }
        };
        mass += p.area * s.q();
        scale += p.area * abs(s.q());
        if p.orientation == Orientation::Incoming {
            num += p.area * s.q() * th.s;
            den += p.area * s.q();
        }
        hmin = hmin.min(th.h);
        hmax = hmax.max(th.h);
        hmag = hmag.max(abs(th.h));
    }
    let s_star = num / den;
    let max_entropy_residual = pipes
        .iter()
        .zip(states)
        .filter(|(p, _)| p.orientation == Orientation::Outgoing && p.model == Model::M1)
        .map(|(_, s)| abs(s.entropy(gas).unwrap_or(f64::INFINITY) - s_star))
        .fold(0.0, f64::max);
    CouplingDiagnostics {
        mass_residual: abs(mass) / scale,
        mass_residual_abs: abs(mass),
        max_enthalpy_spread: (hmax - hmin) / hmag,
        max_entropy_residual,
    }
}

/// Solves the generalized Riemann problem at a junction.
pub fn solve_junction(problem: &JunctionProblem, opts: &JunctionOptions) -> Result<StarSolution> {
    problem.solve(opts)
}

pub fn verify_coupling(sol: &StarSolution, problem: &JunctionProblem) -> CouplingDiagnostics {
    problem.verify(sol)
}

/// Scaled residual norm of the current pipe states taken as traces.
pub fn base_residual(problem: &JunctionProblem) -> Result<f64> {
    let phi = problem.assemble_phi(&problem.base_point())?;
    let scales = problem.row_scales();
    Ok(norm_inf(
        &phi.iter()
            .zip(&scales)
            .map(|(a, b)| a * b)
            .collect::<Vec<_>>(),
    ))
}

/// Determinant of a Jacobian (helper for sign checks).
pub fn det(m: &Matrix) -> f64 {
    Lu::factor(m).determinant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo::EulerState;

    fn m3(rho: f64, q: f64) -> PipeState {
        PipeState::iso(Model::M3, rho, q, 1.0e5 / 1.2f64.powf(1.4))
    }

    #[test]
    fn entropy_mix_examples() {
        let g = GasConstants::air();
        // two incoming M3 pipes with different kappa, fluxes 2:1
        let k_a = 1.0e5;
        let k_b = k_a * (3.0 / g.cv).exp();
        let sa = g.entropy_from_kappa(k_a);
        let sb = g.entropy_from_kappa(k_b);
        let pipes = vec![
            PipeSpec::new(2.0, Model::M3, Orientation::Incoming),
            PipeSpec::new(1.0, Model::M3, Orientation::Incoming),
            PipeSpec::new(3.0, Model::M3, Orientation::Outgoing),
        ];
        let states = vec![
            PipeState::iso(Model::M3, 1.0, -10.0, k_a),
            PipeState::iso(Model::M3, 1.0, -10.0, k_b),
            PipeState::iso(Model::M3, 1.0, 10.0, k_a),
        ];
        let prob = JunctionProblem::new(g, pipes, states).unwrap();
        let s = prob.entropy_mix(&prob.base_point()).unwrap();
        assert!((s - (2.0 * sa + sb) / 3.0).abs() < 1e-9);
        assert!((s - sa - 1.0).abs() < 1e-9);
        // pivot is the larger entropy pipe
        assert_eq!(prob.pivot(), 1);
    }

    #[test]
    fn pass_through_is_a_fixed_point() {
        let g = GasConstants::air();
        let pipes = vec![
            PipeSpec::new(1.0, Model::M3, Orientation::Incoming),
            PipeSpec::new(1.0, Model::M3, Orientation::Outgoing),
        ];
        let prob = JunctionProblem::new(g, pipes, vec![m3(1.2, -40.0), m3(1.2, 40.0)]).unwrap();
        let phi = prob.assemble_phi(&prob.base_point()).unwrap();
        assert!(phi.iter().all(|v| v.abs() < 1e-12));
        let sol = prob.solve(&JunctionOptions::default()).unwrap();
        assert_eq!(sol.iterations, 0);
        assert_eq!(sol.star_states, prob.states().to_vec());
        let d = prob.verify(&sol);
        assert!(d.mass_residual < 1e-12 && d.max_enthalpy_spread < 1e-12);
    }

    #[test]
    fn perturbation_matches_first_order_taylor() {
        let g = GasConstants::air();
        let pipes = vec![
            PipeSpec::new(1.0, Model::M3, Orientation::Incoming),
            PipeSpec::new(1.0, Model::M3, Orientation::Outgoing),
        ];
        let out = m3(1.2, 40.0);
        let prob = JunctionProblem::new(g, pipes, vec![m3(1.2, -40.0), out]).unwrap();
        let mut x = prob.base_point();
        let delta = 1e-6;
        x[1] += delta; // outgoing pipe is normalized position 1
        let phi = prob.assemble_phi(&x).unwrap();
        let c = out.sound_speed(&g).unwrap();
        let lam2 = c;
        assert!((phi[0] - lam2 * delta).abs() < 1e-6 * lam2 * delta);
        assert!((phi[1] + lam2 * c / 1.2 * delta).abs() < 1e-5 * lam2 * c / 1.2 * delta);
    }

    #[test]
    fn problem_validation() {
        let g = GasConstants::air();
        let spec = |o| PipeSpec::new(1.0, Model::M3, o);
        let err = JunctionProblem::new(
            g,
            vec![spec(Orientation::Outgoing), spec(Orientation::Outgoing)],
            vec![m3(1.2, 40.0), m3(1.2, 40.0)],
        )
        .unwrap_err();
        assert_eq!(
            err,
            ProblemError::Topology {
                incoming: 0,
                total: 2
            }
        );
        let err = JunctionProblem::new(
            g,
            vec![spec(Orientation::Incoming), spec(Orientation::Outgoing)],
            vec![m3(1.2, 40.0), m3(1.2, 40.0)],
        )
        .unwrap_err();
        assert_eq!(err, ProblemError::OrientationMismatch { pipe: 0 });
        let err = JunctionProblem::new(
            g,
            vec![spec(Orientation::Incoming), spec(Orientation::Outgoing)],
            vec![m3(1.2, 0.0), m3(1.2, 40.0)],
        )
        .unwrap_err();
        assert_eq!(err, ProblemError::NotSubsonic { pipe: 0 });
        let err = JunctionProblem::new(
            g,
            vec![
                PipeSpec::new(-1.0, Model::M3, Orientation::Incoming),
                spec(Orientation::Outgoing),
            ],
            vec![m3(1.2, -40.0), m3(1.2, 40.0)],
        )
        .unwrap_err();
        assert!(matches!(err, ProblemError::NonPositiveArea { pipe: 0, .. }));
        let err = JunctionProblem::new(
            g,
            vec![spec(Orientation::Incoming), spec(Orientation::Outgoing)],
            vec![
                PipeState::M1(EulerState::from_primitive(1.2, -30.0, 1e5, &g)),
                m3(1.2, 40.0),
            ],
        )
        .unwrap_err();
        assert_eq!(err, ProblemError::ModelMismatch { pipe: 0 });
    }

    #[test]
    fn normalized_order_puts_pivot_after_outgoing_m1() {
        let g = GasConstants::air();
        let e = |rho: f64, u: f64, p: f64| PipeState::M1(EulerState::from_primitive(rho, u, p, &g));
        let pipes = vec![
            PipeSpec::new(1.0, Model::M3, Orientation::Outgoing),
            PipeSpec::new(1.0, Model::M1, Orientation::Incoming),
            PipeSpec::new(1.0, Model::M1, Orientation::Outgoing),
            PipeSpec::new(1.0, Model::M1, Orientation::Incoming),
        ];
        let states = vec![
            m3(1.2, 30.0),
            e(1.2, -30.0, 1.0e5),
            e(1.2, 30.0, 1.0e5),
            e(1.0, -30.0, 1.0e5),
        ];
        let prob = JunctionProblem::new(g, pipes, states).unwrap();
        // pipe 3 has the lower density at equal pressure, hence higher entropy
        assert_eq!(prob.order(), &[2, 3, 1, 0]);
        assert_eq!(prob.pivot(), 3);
        assert_eq!(prob.dim(), 5);
    }
}
