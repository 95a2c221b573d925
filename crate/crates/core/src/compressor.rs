//! Two-pipe compressor coupling. Pipe 1 is the inlet (flow towards the
//! machine), pipe 2 the outlet; both have the same cross section.
//!
//! Conditions: mass `q1 + q2 = 0`, the pressure rise
//! `C T1 ((p2/p1)^beta - 1) = H*` (adiabatic enthalpy control) or
//! `C q2 T1 ((p2/p1)^beta - 1) = P*` (power control) with
//! `beta = (gamma-1)/gamma`, and entropy equality `s1 = s2` when the outlet
//! carries the polytropic model.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, ProblemError, Result};
use crate::junction::{
    check_pipe, JacobianMode, JunctionOptions, Orientation, PipeSpec, SolveWarning, StarSolution,
};
use crate::laxcurves::{base_sigma, trace, PipeRole, TracePoint};
use crate::linalg::Matrix;
use crate::math::{abs, exp, powf};
use crate::newton::damped_newton;
use crate::thermo::{GasConstants, Model, PipeState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CompressorControl {
    /// Prescribed change of adiabatic enthalpy `H*` in J/kg.
    AdiabaticEnthalpy(f64),
    /// Prescribed theoretical power `P* = C_p q H*` with coefficient `cp`.
    Power { power: f64, cp: f64 },
}

impl CompressorControl {
    pub fn value(&self) -> f64 {
        match *self {
            CompressorControl::AdiabaticEnthalpy(h) => h,
            CompressorControl::Power { power, .. } => power,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompressorProblem {
    gas: GasConstants,
    pipes: [PipeSpec; 2],
    states: [PipeState; 2],
    control: CompressorControl,
}

/// Coupling residuals recomputed from the star states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressorDiagnostics {
    /// `|q1 + q2| / |q1|`.
    pub mass_residual: f64,
    /// Control residual relative to the control scale.
    pub control_residual: f64,
    /// `|s1 - s2|`; zero for isentropic outlets.
    pub entropy_residual: f64,
    /// `|T2/T1 - (p2/p1)^beta| / (p2/p1)^beta`, polytropic outlets only.
    pub temperature_ratio_residual: Option<f64>,
    pub pressure_ratio: f64,
    /// Adiabatic enthalpy change realized by the star states.
    pub realized_enthalpy: f64,
}

impl CompressorProblem {
    pub fn new(
        gas: GasConstants,
        inlet: (PipeSpec, PipeState),
        outlet: (PipeSpec, PipeState),
        control: CompressorControl,
    ) -> core::result::Result<Self, ProblemError> {
        gas.validate()
            .map_err(|e| ProblemError::Other(alloc::format!("{e}")))?;
        for (i, (spec, state), want) in [
            (0, &inlet, Orientation::Incoming),
            (1, &outlet, Orientation::Outgoing),
        ] {
            if spec.orientation != want {
                return Err(ProblemError::OrientationMismatch { pipe: i });
            }
            check_pipe(i, spec, state, &gas)?;
        }
        let (a1, a2) = (inlet.0.area, outlet.0.area);
        if abs(a1 - a2) > 1e-12 * a1.max(a2) {
            return Err(ProblemError::UnequalAreas {
                inlet: a1,
                outlet: a2,
            });
        }
        let v = control.value();
        if !(v >= 0.0) || !v.is_finite() {
            return Err(ProblemError::NegativeControl(v));
        }
        if let CompressorControl::Power { cp, .. } = control {
            if !(cp > 0.0) || !cp.is_finite() {
                return Err(ProblemError::Other(alloc::format!(
                    "power coefficient must be positive, got {cp}"
                )));
            }
        }
        Ok(Self {
            gas,
            pipes: [inlet.0, outlet.0],
            states: [inlet.1, outlet.1],
            control,
        })
    }

    pub fn with_states(
        &self,
        inlet: PipeState,
        outlet: PipeState,
    ) -> core::result::Result<Self, ProblemError> {
        Self::new(
            self.gas,
            (self.pipes[0], inlet),
            (self.pipes[1], outlet),
            self.control,
        )
    }

    pub fn with_control(
        &self,
        control: CompressorControl,
    ) -> core::result::Result<Self, ProblemError> {
        Self::new(
            self.gas,
            (self.pipes[0], self.states[0]),
            (self.pipes[1], self.states[1]),
            control,
        )
    }

    pub fn gas(&self) -> &GasConstants {
        &self.gas
    }

    pub fn pipes(&self) -> &[PipeSpec; 2] {
        &self.pipes
    }

    pub fn states(&self) -> &[PipeState; 2] {
        &self.states
    }

    pub fn control(&self) -> CompressorControl {
        self.control
    }

    fn outlet_m1(&self) -> bool {
        self.pipes[1].model == Model::M1
    }

    /// 3 with a polytropic outlet (`sigma1, sigma2, tau2`), otherwise 2.
    pub fn dim(&self) -> usize {
        if self.outlet_m1() {
            3
        } else {
            2
        }
    }

    pub fn base_point(&self) -> Vec<f64> {
        let mut x = vec![
            base_sigma(&self.states[0], &self.gas).expect("validated"),
            base_sigma(&self.states[1], &self.gas).expect("validated"),
        ];
        if self.outlet_m1() {
            x.push(0.0);
        }
        x
    }

    /// Prefactor `C` of the pressure-rise condition.
    pub fn coefficient(&self) -> f64 {
        let g = self.gas.gamma;
        let base = self.gas.r * g / (g - 1.0);
        match self.control {
            CompressorControl::AdiabaticEnthalpy(_) => base,
            CompressorControl::Power { cp, .. } => cp * base,
        }
    }

    fn beta(&self) -> f64 {
        (self.gas.gamma - 1.0) / self.gas.gamma
    }

    pub fn traces(&self, x: &[f64]) -> Result<(TracePoint, TracePoint)> {
        let role1 = PipeRole::of(self.pipes[0].model, crate::thermo::Subsonic::DMinus);
        let role2 = PipeRole::of(self.pipes[1].model, crate::thermo::Subsonic::DPlus);
        let tau = if self.outlet_m1() { x[2] } else { 0.0 };
        Ok((
            trace(role1, x[0], 0.0, &self.states[0], &self.gas)?,
            trace(role2, x[1], tau, &self.states[1], &self.gas)?,
        ))
    }

    /// `Phi(params) - Pi`.
    pub fn phi(&self, x: &[f64]) -> Result<Vec<f64>> {
        let (t1, t2) = self.traces(x)?;
        self.phi_from(&t1, &t2)
    }

    fn phi_from(&self, t1: &TracePoint, t2: &TracePoint) -> Result<Vec<f64>> {
        if !(t1.p > 0.0) {
            return Err(Error::NonPositivePressure(t1.p));
        }
        if !(t2.p > 0.0) {
            return Err(Error::NonPositivePressure(t2.p));
        }
        let rise = self.coefficient() * t1.temperature * (powf(t2.p / t1.p, self.beta()) - 1.0);
        let second = match self.control {
            CompressorControl::AdiabaticEnthalpy(h) => rise - h,
            CompressorControl::Power { power, .. } => {
                if !(t2.q > 0.0) {
                    return Err(Error::NonPositiveFlux(t2.q));
                }
                t2.q * rise - power
            }
        };
        let mut phi = vec![t1.q + t2.q, second];
        if self.outlet_m1() {
            phi.push(t1.s - t2.s);
        }
        Ok(phi)
    }

    pub fn jacobian(&self, x: &[f64], mode: JacobianMode) -> Result<Matrix> {
        match mode {
            JacobianMode::Analytic => self.analytic_jacobian(x),
            JacobianMode::FiniteDifference => {
                let d = self.dim();
                let base = self.base_point();
                let mut jac = Matrix::zeros(d);
                let mut xp = x.to_vec();
                for i in 0..d {
                    let typical = if i < 2 { base[i] } else { self.states[1].rho() };
                    let h = 1e-6 * abs(x[i]).max(typical);
                    xp[i] = x[i] + h;
                    let fp = self.phi(&xp)?;
                    xp[i] = x[i] - h;
                    let fm = self.phi(&xp)?;
                    xp[i] = x[i];
                    for r in 0..d {
                        jac.set(r, i, (fp[r] - fm[r]) / (2.0 * h));
                    }
                }
                Ok(jac)
            }
        }
    }

    fn analytic_jacobian(&self, x: &[f64]) -> Result<Matrix> {
        let (t1, t2) = self.traces(x)?;
        let c = self.coefficient();
        let beta = self.beta();
        let r = powf(t2.p / t1.p, beta);
        let rise = c * t1.temperature * (r - 1.0);
        let d_rise_s1 = c
            * (t1.dtemperature.sigma * (r - 1.0) - t1.temperature * beta * r * t1.dp.sigma / t1.p);
        let d_rise_s2 = c * t1.temperature * beta * r * t2.dp.sigma / t2.p;
        let d_rise_t2 = c * t1.temperature * beta * r * t2.dp.tau / t2.p;
        let (a, b, e) = match self.control {
            CompressorControl::AdiabaticEnthalpy(_) => (d_rise_s1, d_rise_s2, d_rise_t2),
            CompressorControl::Power { .. } => (
                t2.q * d_rise_s1,
                t2.dq.sigma * rise + t2.q * d_rise_s2,
                t2.dq.tau * rise + t2.q * d_rise_t2,
            ),
        };
        let d = self.dim();
        let mut jac = Matrix::zeros(d);
        jac.set(0, 0, t1.dq.sigma);
        jac.set(0, 1, t2.dq.sigma);
        jac.set(1, 0, a);
        jac.set(1, 1, b);
        if d == 3 {
            jac.set(0, 2, t2.dq.tau);
            jac.set(1, 2, e);
            jac.set(2, 0, t1.ds.sigma);
            jac.set(2, 1, -t2.ds.sigma);
            jac.set(2, 2, -t2.ds.tau);
        }
        Ok(jac)
    }

    fn row_scales(&self) -> Vec<f64> {
        let q = abs(self.states[0].q()).max(abs(self.states[1].q()));
        let t1 = self.states[0].temperature(&self.gas).expect("validated");
        let control_scale = match self.control {
            CompressorControl::AdiabaticEnthalpy(h) => h.max(self.coefficient() * t1),
            CompressorControl::Power { power, .. } => power.max(self.coefficient() * q * t1),
        };
        let mut s = vec![1.0 / q, 1.0 / control_scale];
        if self.outlet_m1() {
            s.push(1.0 / self.gas.cv);
        }
        s
    }

    pub fn solve(&self, opts: &JunctionOptions) -> Result<StarSolution> {
        let scales = self.row_scales();
        let residual = |x: &[f64]| -> Result<Vec<f64>> {
            let (t1, t2) = self.traces(x)?;
            for (k, t) in [&t1, &t2].iter().enumerate() {
                let want = [
                    crate::thermo::Subsonic::DMinus,
                    crate::thermo::Subsonic::DPlus,
                ][k];
                if t.state.classify_subsonic(&self.gas) != want {
                    return Err(Error::SubsonicViolation { pipe: k });
                }
            }
            let phi = self.phi_from(&t1, &t2)?;
            Ok(phi.iter().zip(&scales).map(|(a, b)| a * b).collect())
        };
        let jac = |x: &[f64]| -> Result<Matrix> {
            let mut m = self.analytic_jacobian(x)?;
            for (i, s) in scales.iter().enumerate() {
                m.scale_row(i, *s);
            }
            Ok(m)
        };
        // fail early with the precondition error instead of a line-search failure
        self.phi(&self.base_point())?;
        let report = damped_newton(&self.base_point(), residual, jac, &opts.newton)?;
        let x = report.x;
        let (t1, t2) = self.traces(&x)?;
        let s_star = t1.s;
        let mut outlet = t2.state;
        let mixed_kappa = exp((s_star - self.gas.s0) / self.gas.cv);
        if opts.assign_mixed_entropy && outlet.model() != Model::M1 {
            outlet = PipeState::iso(outlet.model(), outlet.rho(), outlet.q(), mixed_kappa);
        }
        let mut warnings = Vec::new();
        if self.control.value() == 0.0 {
            warnings.push(SolveWarning::IdleCompressor);
        }
        Ok(StarSolution {
            star_states: vec![t1.state, outlet],
            sigma: vec![x[0], x[1]],
            tau: vec![None, if self.outlet_m1() { Some(x[2]) } else { None }],
            h_star: t1.h,
            s_star,
            mixed_kappa,
            residual_norm: report.residual,
            iterations: report.iterations,
            warnings,
        })
    }

    pub fn verify(&self, sol: &StarSolution) -> CompressorDiagnostics {
        self.verify_states(&sol.star_states[0], &sol.star_states[1])
    }

    /// Coupling residuals of the given inlet and outlet traces.
    pub fn verify_states(&self, s1: &PipeState, s2: &PipeState) -> CompressorDiagnostics {
        let g = &self.gas;
        let p1 = s1.pressure(g).unwrap_or(f64::NAN);
        let p2 = s2.pressure(g).unwrap_or(f64::NAN);
        let t1 = s1.temperature(g).unwrap_or(f64::NAN);
        let ratio = p2 / p1;
        let r = powf(ratio, self.beta());
        let enthalpy = g.r * g.gamma / (g.gamma - 1.0) * t1 * (r - 1.0);
        let control_residual = match self.control {
            CompressorControl::AdiabaticEnthalpy(h) => abs(enthalpy - h) / h.max(g.cp * t1),
            CompressorControl::Power { power, cp } => {
                let q = s2.q();
                abs(cp * q * enthalpy - power) / power.max(cp * abs(q) * g.cp * t1)
            }
        };
        let entropy_residual = match (s1.entropy(g), s2.entropy(g)) {
            (Ok(a), Ok(b)) if self.outlet_m1() => abs(a - b),
            _ => 0.0,
        };
        let temperature_ratio_residual = if self.outlet_m1() {
            let t2 = s2.temperature(g).unwrap_or(f64::NAN);
            Some(abs(t2 / t1 - r) / r)
        } else {
            None
        };
        CompressorDiagnostics {
            mass_residual: abs(s1.q() + s2.q()) / abs(s1.q()),
            control_residual,
            entropy_residual,
            temperature_ratio_residual,
            pressure_ratio: ratio,
            realized_enthalpy: enthalpy,
        }
    }
}

pub fn phi_compressor(params: &[f64], problem: &CompressorProblem) -> Result<Vec<f64>> {
    problem.phi(params)
}

pub fn solve_compressor(
    problem: &CompressorProblem,
    opts: &JunctionOptions,
) -> Result<StarSolution> {
    problem.solve(opts)
}
