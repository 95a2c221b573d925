//! Random problem generators shared by the integration and acceptance tests.
#![allow(dead_code)]

use gasnet_core::compressor::CompressorControl;
use gasnet_core::*;
use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> SmallRng {
    SmallRng::seed_from_u64(seed)
}

pub fn unit_gas() -> GasConstants {
    GasConstants::new(1.4, 1.0, 0.0).unwrap()
}

pub fn random_gas(r: &mut SmallRng) -> GasConstants {
    GasConstants::new(r.gen_range(1.15..1.67), r.gen_range(0.5..2.0), 0.0).unwrap()
}

pub fn random_model(r: &mut SmallRng) -> Model {
    match r.gen_range(0..3) {
        0 => Model::M1,
        1 => Model::M2,
        _ => Model::M3,
    }
}

/// A state of `model` with total enthalpy `h`, density `rho` and velocity `u`
/// (for `M1` the pressure follows from `h`, for `M2`/`M3` the coefficient).
pub fn state_with_enthalpy(model: Model, h: f64, rho: f64, u: f64, g: &GasConstants) -> PipeState {
    let gm = g.gamma;
    match model {
        Model::M1 => {
            let c2 = (gm - 1.0) * (h - 0.5 * u * u);
            PipeState::M1(EulerState::from_primitive(rho, u, rho * c2 / gm, g))
        }
        Model::M2 => {
            let kappa = (gm - 1.0) * (h - 0.5 * u * u) / (gm * rho.powf(gm - 1.0));
            PipeState::iso(Model::M2, rho, rho * u, kappa)
        }
        Model::M3 => {
            let kappa = (gm - 1.0) * h / (gm * rho.powf(gm - 1.0));
            PipeState::iso(Model::M3, rho, rho * u, kappa)
        }
    }
}

/// Largest subsonic speed used by the generators, well inside `|u| < c`.
pub fn speed_cap(h: f64, g: &GasConstants) -> f64 {
    0.6 * ((g.gamma - 1.0) * h).sqrt()
}

#[derive(Debug, Clone)]
pub struct Equilibrium {
    pub gas: GasConstants,
    pub pipes: Vec<PipeSpec>,
    pub states: Vec<PipeState>,
}

impl Equilibrium {
    pub fn problem(&self) -> JunctionProblem {
        JunctionProblem::new(self.gas, self.pipes.clone(), self.states.clone()).unwrap()
    }

    pub fn incoming(&self) -> usize {
        self.pipes
            .iter()
            .filter(|p| p.orientation == Orientation::Incoming)
            .count()
    }

    pub fn outgoing_m1(&self) -> usize {
        self.pipes
            .iter()
            .filter(|p| p.orientation == Orientation::Outgoing && p.model == Model::M1)
            .count()
    }
}

/// Constant data satisfying all coupling conditions exactly (up to round-off):
/// common total enthalpy, mixed entropy in outgoing `M1` pipes and balanced
/// mass through the outgoing areas. `models` and `incoming` fix the topology.
pub fn equilibrium_with(
    r: &mut SmallRng,
    gas: GasConstants,
    models: &[Model],
    incoming: usize,
) -> Equilibrium {
    let n = models.len();
    assert!(incoming >= 1 && incoming < n);
    let h = gas.cp * r.gen_range(0.8..1.25);
    let cap = speed_cap(h, &gas);
    let mut pipes = Vec::with_capacity(n);
    let mut states = Vec::with_capacity(n);
    let (mut inflow, mut weighted_s) = (0.0, 0.0);
    for &m in &models[..incoming] {
        let area = r.gen_range(0.5..2.0);
        let u = -r.gen_range(0.05..1.0) * cap;
        let s = state_with_enthalpy(m, h, r.gen_range(0.5..2.0), u, &gas);
        let flux = area * -s.q();
        inflow += flux;
        weighted_s += flux * s.entropy(&gas).unwrap();
        pipes.push(PipeSpec::new(area, m, Orientation::Incoming));
        states.push(s);
    }
    let kappa_star = gas.kappa_from_entropy(weighted_s / inflow);
    let mut weights = Vec::new();
    for &m in &models[incoming..] {
        let u = r.gen_range(0.05..1.0) * cap;
        let s = match m {
            Model::M1 => {
                let theta = (gas.gamma - 1.0) * (h - 0.5 * u * u) / (gas.gamma * kappa_star);
                let rho = theta.powf(1.0 / (gas.gamma - 1.0));
                state_with_enthalpy(m, h, rho, u, &gas)
            }
            _ => state_with_enthalpy(m, h, r.gen_range(0.5..2.0), u, &gas),
        };
        weights.push(r.gen_range(0.2..1.0));
        states.push(s);
    }
    let total: f64 = weights.iter().sum();
    for (k, &m) in models[incoming..].iter().enumerate() {
        let q = states[incoming + k].q();
        pipes.push(PipeSpec::new(
            inflow * weights[k] / (total * q),
            m,
            Orientation::Outgoing,
        ));
    }
    Equilibrium { gas, pipes, states }
}

/// Random topology with `2 <= N <= max_pipes`.
pub fn random_equilibrium(r: &mut SmallRng, max_pipes: usize) -> Equilibrium {
    let gas = random_gas(r);
    let n = r.gen_range(2..=max_pipes);
    let incoming = r.gen_range(1..n);
    let models: Vec<Model> = (0..n).map(|_| random_model(r)).collect();
    equilibrium_with(r, gas, &models, incoming)
}

/// Multiplies every conservative component (and `kappa`) by `1 + size * xi`
/// with `xi` uniform in `[-1, 1]`.
pub fn perturb(r: &mut SmallRng, s: &PipeState, size: f64) -> PipeState {
    let mut f = || 1.0 + size * r.gen_range(-1.0..1.0);
    match *s {
        PipeState::M1(e) => {
            let (rho, q) = (e.rho * f(), e.q * f());
            let internal = (e.energy - 0.5 * e.q * e.q / e.rho) * f();
            PipeState::M1(EulerState::new(rho, q, internal + 0.5 * q * q / rho))
        }
        PipeState::M2(i) => PipeState::iso(Model::M2, i.rho * f(), i.q * f(), i.kappa * f()),
        PipeState::M3(i) => PipeState::iso(Model::M3, i.rho * f(), i.q * f(), i.kappa * f()),
    }
}

/// Relative distance of two states in the conservative 1-norm.
pub fn relative_distance(a: &PipeState, b: &PipeState) -> f64 {
    let scale: f64 = a.conserved().iter().map(|v| v.abs()).sum();
    a.distance(b) / scale
}

pub fn max_relative_distance(a: &[PipeState], b: &[PipeState]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| relative_distance(x, y))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone)]
pub struct CompressorCase {
    pub gas: GasConstants,
    pub inlet: (PipeSpec, PipeState),
    pub outlet: (PipeSpec, PipeState),
    pub enthalpy: f64,
}

impl CompressorCase {
    pub fn with_enthalpy(&self) -> CompressorProblem {
        CompressorProblem::new(
            self.gas,
            self.inlet,
            self.outlet,
            CompressorControl::AdiabaticEnthalpy(self.enthalpy),
        )
        .unwrap()
    }

    /// Power control realizing the same equilibrium.
    pub fn with_power(&self, cp: f64) -> CompressorProblem {
        let power = cp * self.outlet.1.q() * self.enthalpy;
        CompressorProblem::new(
            self.gas,
            self.inlet,
            self.outlet,
            CompressorControl::Power { power, cp },
        )
        .unwrap()
    }
}

/// Inlet/outlet states already in compressor equilibrium: `q2 = -q1`, the
/// pressure ratio realizes `enthalpy`, and a polytropic outlet carries the
/// inlet entropy.
pub fn compressor_equilibrium(r: &mut SmallRng, inlet: Model, outlet: Model) -> CompressorCase {
    let gas = random_gas(r);
    let g = gas.gamma;
    let area = r.gen_range(0.5..2.0);
    let rho1 = r.gen_range(0.5..2.0);
    let p1 = r.gen_range(0.5..2.0);
    let c1 = (g * p1 / rho1).sqrt();
    let u1 = -r.gen_range(0.05..0.4) * c1;
    let s1 = match inlet {
        Model::M1 => PipeState::M1(EulerState::from_primitive(rho1, u1, p1, &gas)),
        m => PipeState::iso(m, rho1, rho1 * u1, p1 / rho1.powf(g)),
    };
    let t1 = s1.temperature(&gas).unwrap();
    let coefficient = gas.r * g / (g - 1.0);
    let ratio: f64 = r.gen_range(1.05..2.0);
    let enthalpy = coefficient * t1 * (ratio.powf((g - 1.0) / g) - 1.0);
    let p2 = p1 * ratio;
    let q2 = -s1.q();
    let s2 = match outlet {
        Model::M1 => {
            let kappa1 = gas.kappa_from_entropy(s1.entropy(&gas).unwrap());
            let rho2 = (p2 / kappa1).powf(1.0 / g);
            PipeState::M1(EulerState::from_primitive(rho2, q2 / rho2, p2, &gas))
        }
        m => {
            let rho2 = rho1 * r.gen_range(1.0..1.6);
            PipeState::iso(m, rho2, q2, p2 / rho2.powf(g))
        }
    };
    CompressorCase {
        gas,
        inlet: (PipeSpec::new(area, inlet, Orientation::Incoming), s1),
        outlet: (PipeSpec::new(area, outlet, Orientation::Outgoing), s2),
        enthalpy,
    }
}

/// Compressor problem away from equilibrium: equilibrium states perturbed by
/// `size` and a control scaled by a random factor.
pub fn compressor_perturbed(
    r: &mut SmallRng,
    inlet: Model,
    outlet: Model,
    size: f64,
) -> CompressorCase {
    let mut c = compressor_equilibrium(r, inlet, outlet);
    c.inlet.1 = perturb(r, &c.inlet.1, size);
    c.outlet.1 = perturb(r, &c.outlet.1, size);
    c.enthalpy *= r.gen_range(0.8..1.2);
    c
}

/// Bisection on a sign change of `f` in `[lo, hi]`, widening `hi` first.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Star pressure of the polytropic Riemann problem from the classical
/// pressure function, by bisection. Inputs are `(rho, u, p)`.
pub fn oracle_m1_pressure(l: (f64, f64, f64), r: (f64, f64, f64), gamma: f64) -> f64 {
    let wave = |p: f64, (rho, _u, pk): (f64, f64, f64)| {
        let c = (gamma * pk / rho).sqrt();
        if p > pk {
            let a = 2.0 / ((gamma + 1.0) * rho);
            let b = (gamma - 1.0) / (gamma + 1.0) * pk;
            (p - pk) * (a / (p + b)).sqrt()
        } else {
            2.0 * c / (gamma - 1.0) * ((p / pk).powf((gamma - 1.0) / (2.0 * gamma)) - 1.0)
        }
    };
    bisect(|p| wave(p, l) + wave(p, r) + r.1 - l.1, 0.0, l.2.max(r.2))
}

/// Star density of the isentropic Riemann problem by bisection. Inputs are
/// `(rho, q)` with a common coefficient `kappa`.
pub fn oracle_iso_density(
    model: Model,
    l: (f64, f64),
    r: (f64, f64),
    kappa: f64,
    gamma: f64,
) -> f64 {
    let p = |rho: f64| kappa * rho.powf(gamma);
    let c = |rho: f64| (kappa * gamma * rho.powf(gamma - 1.0)).sqrt();
    let wave = |rho: f64, rk: f64| -> f64 {
        match model {
            Model::M2 => {
                if rho > rk {
                    ((p(rho) - p(rk)) * (rho - rk) / (rho * rk)).sqrt()
                } else {
                    2.0 / (gamma - 1.0) * (c(rho) - c(rk))
                }
            }
            _ => {
                if rho > rk {
                    ((p(rho) - p(rk)) * (rho - rk)).sqrt()
                } else {
                    let e = 0.5 * (gamma + 1.0);
                    (kappa * gamma).sqrt() / e * (rho.powf(e) - rk.powf(e))
                }
            }
        }
    };
    let f = |rho: f64| match model {
        Model::M2 => wave(rho, l.0) + wave(rho, r.0) + r.1 / r.0 - l.1 / l.0,
        _ => wave(rho, l.0) + wave(rho, r.0) + r.1 - l.1,
    };
    bisect(f, 0.0, l.0.max(r.0))
}

/// Mixed-model node: polytropic inflow, two isentropic outflows.
pub fn three_pipe_network() -> (fronttracking::Network, Vec<PipeState>) {
    let g = unit_gas();
    let pipes = vec![
        PipeSpec::new(1.0, Model::M1, Orientation::Incoming),
        PipeSpec::new(0.6, Model::M2, Orientation::Outgoing),
        PipeSpec::new(0.5, Model::M3, Orientation::Outgoing),
    ];
    let raw = vec![
        PipeState::M1(EulerState::from_primitive(1.0, -0.3, 1.0, &g)),
        PipeState::iso(Model::M2, 1.0, 0.3, 1.0),
        PipeState::iso(Model::M3, 1.0, 0.3, 1.0),
    ];
    let net = fronttracking::Network::junction(g, pipes);
    let star = net
        .solve(&raw, &JunctionOptions::default())
        .unwrap()
        .star_states;
    (net, star)
}

/// Smooth bump of relative size `delta` on `[0, 1]` on top of each base
/// state, sampled on `cells` cells.
pub fn bump_profiles(base: &[PipeState], delta: f64, cells: usize) -> Vec<fronttracking::Profile> {
    base.iter()
        .enumerate()
        .map(|(i, s)| {
            let s = *s;
            let phase = i as f64;
            fronttracking::Profile::sample(
                move |x| {
                    let b = if x < 1.0 {
                        (std::f64::consts::PI * x).sin().powi(2)
                            * (1.0 + 0.5 * (phase + 3.0 * x).sin())
                    } else {
                        0.0
                    };
                    let u = s.conserved();
                    s.with_conserved([
                        u[0] * (1.0 + delta * b),
                        u[1] * (1.0 - 0.5 * delta * b),
                        u[2] * (1.0 + delta * b),
                    ])
                },
                1.0,
                cells,
            )
        })
        .collect()
}
