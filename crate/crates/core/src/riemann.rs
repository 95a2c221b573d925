//! Exact Riemann solvers for the three models and self-similar sampling.
//!
//! The wave functions follow the usual split into a rarefaction branch
//! (integral curve) and a shock branch (Hugoniot locus):
//!
//! * `theta2`, `theta3`: mass-flux increments of the isentropic models as a
//!   function of the star density,
//! * `psi`, `phi_density`: velocity increment and density of the polytropic
//!   model as a function of the star pressure.
//!
//! Each has an analytic derivative used by the Newton iterations here and by
//! the coupling Jacobians in [`crate::laxcurves`].

use crate::error::{Error, Result};
use crate::math::{abs, powf, sqrt};
use crate::thermo::{EulerState, GasConstants, IsoState, Model, PipeState};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_ITER: usize = 100;

/// Primitive description of a polytropic state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
    pub c: f64,
}

impl Primitive {
    pub fn of(state: &EulerState, gas: &GasConstants) -> Result<Self> {
        let p = state.pressure(gas)?;
        Ok(Self {
            rho: state.rho,
            u: state.velocity(),
            p,
            c: sqrt(gas.gamma * p / state.rho),
        })
    }

    pub fn to_state(&self, gas: &GasConstants) -> EulerState {
        EulerState::from_primitive(self.rho, self.u, self.p, gas)
    }
}

fn theta2_rare_coeff(base: &IsoState, gas: &GasConstants) -> f64 {
    2.0 * sqrt(base.kappa * gas.gamma) / (gas.gamma - 1.0)
}

fn theta3_rare_coeff(base: &IsoState, gas: &GasConstants) -> f64 {
    2.0 * sqrt(base.kappa * gas.gamma) / (gas.gamma + 1.0)
}

/// Mass-flux increment of the `M2` wave curves through `base`.
pub fn theta2(rho_star: f64, base: &IsoState, gas: &GasConstants) -> f64 {
    let g = gas.gamma;
    let rb = base.rho;
    if rho_star <= rb {
        let m = 0.5 * (g - 1.0);
        theta2_rare_coeff(base, gas) * rho_star * (powf(rho_star, m) - powf(rb, m))
    } else {
        let dp = base.kappa * (powf(rho_star, g) - powf(rb, g));
        sqrt(rho_star / rb * (rho_star - rb) * dp)
    }
}

pub fn dtheta2(rho_star: f64, base: &IsoState, gas: &GasConstants) -> f64 {
    let g = gas.gamma;
    let rb = base.rho;
    if rho_star <= rb {
        let m = 0.5 * (g - 1.0);
        theta2_rare_coeff(base, gas) * ((1.0 + m) * powf(rho_star, m) - powf(rb, m))
    } else {
        let dp = base.kappa * (powf(rho_star, g) - powf(rb, g));
        let dpdr = base.kappa * g * powf(rho_star, g - 1.0);
        let d = rho_star - rb;
        let f = rho_star / rb * d * dp;
        let df = (d * dp + rho_star * dp + rho_star * d * dpdr) / rb;
        df / (2.0 * sqrt(f))
    }
}

/// Mass-flux increment of the `M3` wave curves through `base`.
pub fn theta3(rho_star: f64, base: &IsoState, gas: &GasConstants) -> f64 {
    let g = gas.gamma;
    let rb = base.rho;
    if rho_star <= rb {
        let n = 0.5 * (g + 1.0);
        theta3_rare_coeff(base, gas) * (powf(rho_star, n) - powf(rb, n))
    } else {
        let dp = base.kappa * (powf(rho_star, g) - powf(rb, g));
        sqrt((rho_star - rb) * dp)
    }
}

pub fn dtheta3(rho_star: f64, base: &IsoState, gas: &GasConstants) -> f64 {
    let g = gas.gamma;
    let rb = base.rho;
    if rho_star <= rb {
        // derivative of the integral curve is the sound speed itself
        sqrt(base.kappa * g * powf(rho_star, g - 1.0))
    } else {
        let dp = base.kappa * (powf(rho_star, g) - powf(rb, g));
        let dpdr = base.kappa * g * powf(rho_star, g - 1.0);
        let d = rho_star - rb;
        (dp + d * dpdr) / (2.0 * sqrt(d * dp))
    }
}

/// Dispatches to `theta2`/`theta3` by model.
pub fn theta(model: Model, rho_star: f64, base: &IsoState, gas: &GasConstants) -> f64 {
    match model {
        Model::M2 => theta2(rho_star, base, gas),
        Model::M3 => theta3(rho_star, base, gas),
        Model::M1 => panic!("theta is defined for isentropic models only"),
    }
}

pub fn dtheta(model: Model, rho_star: f64, base: &IsoState, gas: &GasConstants) -> f64 {
    match model {
        Model::M2 => dtheta2(rho_star, base, gas),
        Model::M3 => dtheta3(rho_star, base, gas),
        Model::M1 => panic!("theta is defined for isentropic models only"),
    }
}

/// Velocity increment of the `M1` acoustic wave curves through `base`.
pub fn psi(p_star: f64, base: &Primitive, gas: &GasConstants) -> f64 {
    let g = gas.gamma;
    if p_star <= base.p {
        let z = (g - 1.0) / (2.0 * g);
        2.0 * base.c / (g - 1.0) * (powf(p_star / base.p, z) - 1.0)
    } else {
        let mu2 = gas.mu2();
        (p_star - base.p) * sqrt((1.0 - mu2) / (base.rho * (p_star + mu2 * base.p)))
    }
}

pub fn dpsi(p_star: f64, base: &Primitive, gas: &GasConstants) -> f64 {
    let g = gas.gamma;
    if p_star <= base.p {
        let e = -(g + 1.0) / (2.0 * g);
        powf(p_star / base.p, e) / (base.rho * base.c)
    } else {
        let mu2 = gas.mu2();
        let denom = p_star + mu2 * base.p;
        let root = sqrt((1.0 - mu2) / (base.rho * denom));
        root * (1.0 - (p_star - base.p) / (2.0 * denom))
    }
}

/// Density behind an `M1` acoustic wave with star pressure `p_star`.
pub fn phi_density(p_star: f64, base: &Primitive, gas: &GasConstants) -> f64 {
    if p_star <= base.p {
        base.rho * powf(p_star / base.p, 1.0 / gas.gamma)
    } else {
        let mu2 = gas.mu2();
        base.rho * (p_star + mu2 * base.p) / (mu2 * p_star + base.p)
    }
}

pub fn dphi_density(p_star: f64, base: &Primitive, gas: &GasConstants) -> f64 {
    let g = gas.gamma;
    if p_star <= base.p {
        base.rho / (g * base.p) * powf(p_star / base.p, 1.0 / g - 1.0)
    } else {
        let mu2 = gas.mu2();
        let d = mu2 * p_star + base.p;
        base.rho * base.p * (1.0 - mu2 * mu2) / (d * d)
    }
}

/// One elementary wave of a Riemann solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Wave {
    Shock {
        speed: f64,
    },
    /// Fan bounded by the head (outer) and tail (inner) characteristic speeds.
    Rarefaction {
        head: f64,
        tail: f64,
    },
}

impl Wave {
    pub fn is_shock(&self) -> bool {
        matches!(self, Wave::Shock { .. })
    }

    fn slowest(&self) -> f64 {
        match *self {
            Wave::Shock { speed } => speed,
            Wave::Rarefaction { head, tail } => head.min(tail),
        }
    }

    fn fastest(&self) -> f64 {
        match *self {
            Wave::Shock { speed } => speed,
            Wave::Rarefaction { head, tail } => head.max(tail),
        }
    }
}

/// Monotone scalar root finder: Newton steps, bisection whenever an iterate
/// leaves the current bracket. `f` returns the value and its derivative;
/// `accept` decides convergence from `(x, f(x))`.
pub(crate) fn bracketed_newton(
    f: impl Fn(f64) -> (f64, f64),
    accept: impl Fn(f64, f64) -> bool,
    mut lo: f64,
    mut hi: f64,
    x0: f64,
    max_iter: usize,
) -> Result<(f64, usize)> {
    let mut x = if x0 > lo && x0 < hi {
        x0
    } else {
        0.5 * (lo + hi)
    };
    let mut last = f64::INFINITY;
    for it in 0..max_iter {
        let (fx, dfx) = f(x);
        last = fx;
        if accept(x, fx) {
            return Ok((x, it));
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        x = if dfx > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            let (fx, _) = f(x);
            if accept(x, fx) {
                return Ok((x, it + 1));
            }
            return Err(Error::NoConvergence {
                iterations: it + 1,
                residual: abs(fx),
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual: abs(last),
    })
}

/// Grows `hi` geometrically until `f(hi) > 0`.
fn expand_upper(f: &impl Fn(f64) -> (f64, f64), mut hi: f64) -> Result<f64> {
    for _ in 0..200 {
        if f(hi).0 > 0.0 {
            return Ok(hi);
        }
        hi *= 2.0;
    }
    Err(Error::NoConvergence {
        iterations: 200,
        residual: f64::NAN,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannSolutionM1 {
    pub left: EulerState,
    pub right: EulerState,
    pub p_star: f64,
    pub u_star: f64,
    pub rho_l_star: f64,
    pub rho_r_star: f64,
    pub e_l_star: f64,
    pub e_r_star: f64,
    pub left_wave: Wave,
    pub right_wave: Wave,
    pub iterations: usize,
}

impl RiemannSolutionM1 {
    pub fn contact_speed(&self) -> f64 {
        self.u_star
    }

    pub fn left_star(&self) -> EulerState {
        EulerState::new(
            self.rho_l_star,
            self.rho_l_star * self.u_star,
            self.e_l_star,
        )
    }

    pub fn right_star(&self) -> EulerState {
        EulerState::new(
            self.rho_r_star,
            self.rho_r_star * self.u_star,
            self.e_r_star,
        )
    }

    /// State of the self-similar solution at `xi = x/t`. A `xi` exactly on a
    /// discontinuity or fan edge returns the right-limit state.
    pub fn sample(&self, xi: f64, gas: &GasConstants) -> EulerState {
        let g = gas.gamma;
        if xi < self.u_star {
            let l = Primitive::of(&self.left, gas).expect("validated left state");
            match self.left_wave {
                Wave::Shock { speed } => {
                    if xi < speed {
                        self.left
                    } else {
                        self.left_star()
                    }
                }
                Wave::Rarefaction { head, tail } => {
                    if xi < head {
                        self.left
                    } else if xi < tail {
                        let c = 2.0 / (g + 1.0) * (l.c + 0.5 * (g - 1.0) * (l.u - xi));
                        let u = 2.0 / (g + 1.0) * (l.c + 0.5 * (g - 1.0) * l.u + xi);
                        let ratio = c / l.c;
                        let rho = l.rho * powf(ratio, 2.0 / (g - 1.0));
                        let p = l.p * powf(ratio, 2.0 * g / (g - 1.0));
                        EulerState::from_primitive(rho, u, p, gas)
                    } else {
                        self.left_star()
                    }
                }
            }
        } else {
            let r = Primitive::of(&self.right, gas).expect("validated right state");
            match self.right_wave {
                Wave::Shock { speed } => {
                    if xi < speed {
                        self.right_star()
                    } else {
                        self.right
                    }
                }
                Wave::Rarefaction { head, tail } => {
                    if xi < tail {
                        self.right_star()
                    } else if xi < head {
                        let c = 2.0 / (g + 1.0) * (r.c - 0.5 * (g - 1.0) * (r.u - xi));
                        let u = 2.0 / (g + 1.0) * (-r.c + 0.5 * (g - 1.0) * r.u + xi);
                        let ratio = c / r.c;
                        let rho = r.rho * powf(ratio, 2.0 / (g - 1.0));
                        let p = r.p * powf(ratio, 2.0 * g / (g - 1.0));
                        EulerState::from_primitive(rho, u, p, gas)
                    } else {
                        self.right
                    }
                }
            }
        }
    }
}

/// Exact solver for the polytropic model. The star pressure solves
/// `u_L - psi(p, U_L) = u_R + psi(p, U_R)` to `|residual| <= tol`.
pub fn solve_riemann_m1(
    left: &EulerState,
    right: &EulerState,
    gas: &GasConstants,
    tol: f64,
) -> Result<RiemannSolutionM1> {
    let l = Primitive::of(left, gas)?;
    let r = Primitive::of(right, gas)?;
    let g = gas.gamma;
    let du = r.u - l.u;
    if 2.0 * (l.c + r.c) / (g - 1.0) <= du {
        return Err(Error::VacuumFormation);
    }

    let f = |p: f64| {
        (
            psi(p, &l, gas) + psi(p, &r, gas) + du,
            dpsi(p, &l, gas) + dpsi(p, &r, gas),
        )
    };
    let z = (g - 1.0) / (2.0 * g);
    let guess = powf(
        (l.c + r.c - 0.5 * (g - 1.0) * du) / (l.c / powf(l.p, z) + r.c / powf(r.p, z)),
        1.0 / z,
    );
    let (p_star, iterations) = if f(l.p.max(r.p)).0 == 0.0 && l == r {
        (l.p, 0)
    } else {
        let hi = expand_upper(&f, l.p.max(r.p).max(guess))?;
        bracketed_newton(f, |_, fx| abs(fx) <= tol, 0.0, hi, guess, MAX_ITER)?
    };

    let u_star = 0.5 * (l.u + r.u) + 0.5 * (psi(p_star, &r, gas) - psi(p_star, &l, gas));
    let rho_l_star = phi_density(p_star, &l, gas);
    let rho_r_star = phi_density(p_star, &r, gas);
    let e_l_star = p_star / (g - 1.0) + 0.5 * rho_l_star * u_star * u_star;
    let e_r_star = p_star / (g - 1.0) + 0.5 * rho_r_star * u_star * u_star;

    let left_wave = if p_star > l.p {
        let s = sqrt((g + 1.0) / (2.0 * g) * p_star / l.p + (g - 1.0) / (2.0 * g));
        Wave::Shock {
            speed: l.u - l.c * s,
        }
    } else {
        Wave::Rarefaction {
            head: l.u - l.c,
            tail: u_star - l.c * powf(p_star / l.p, z),
        }
    };
    let right_wave = if p_star > r.p {
        let s = sqrt((g + 1.0) / (2.0 * g) * p_star / r.p + (g - 1.0) / (2.0 * g));
        Wave::Shock {
            speed: r.u + r.c * s,
        }
    } else {
        Wave::Rarefaction {
            head: r.u + r.c,
            tail: u_star + r.c * powf(p_star / r.p, z),
        }
    };

    Ok(RiemannSolutionM1 {
        left: *left,
        right: *right,
        p_star,
        u_star,
        rho_l_star,
        rho_r_star,
        e_l_star,
        e_r_star,
        left_wave,
        right_wave,
        iterations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannSolutionIso {
    pub model: Model,
    pub left: IsoState,
    pub right: IsoState,
    pub rho_star: f64,
    pub q_star: f64,
    pub left_wave: Wave,
    pub right_wave: Wave,
    pub iterations: usize,
}

impl RiemannSolutionIso {
    pub fn star(&self) -> IsoState {
        IsoState::new(self.rho_star, self.q_star, self.left.kappa)
    }

    fn fan_density(&self, c: f64, gas: &GasConstants) -> f64 {
        let kappa = self.left.kappa;
        powf(c * c / (kappa * gas.gamma), 1.0 / (gas.gamma - 1.0))
    }

    fn left_fan(&self, xi: f64, gas: &GasConstants) -> IsoState {
        let g = gas.gamma;
        let l = &self.left;
        let cl = l.sound_speed(gas);
        match self.model {
            Model::M2 => {
                let c = (g - 1.0) / (g + 1.0) * (l.velocity() + 2.0 * cl / (g - 1.0) - xi);
                let rho = self.fan_density(c, gas);
                IsoState::new(rho, rho * (xi + c), l.kappa)
            }
            _ => {
                let rho = self.fan_density(-xi, gas);
                IsoState::new(rho, l.q - theta3(rho, l, gas), l.kappa)
            }
        }
    }

    fn right_fan(&self, xi: f64, gas: &GasConstants) -> IsoState {
        let g = gas.gamma;
        let r = &self.right;
        let cr = r.sound_speed(gas);
        match self.model {
            Model::M2 => {
                let c = (g - 1.0) / (g + 1.0) * (xi - r.velocity() + 2.0 * cr / (g - 1.0));
                let rho = self.fan_density(c, gas);
                IsoState::new(rho, rho * (xi - c), r.kappa)
            }
            _ => {
                let rho = self.fan_density(xi, gas);
                IsoState::new(rho, r.q + theta3(rho, r, gas), r.kappa)
            }
        }
    }

    /// State at `xi = x/t`; discontinuities and fan edges resolve to the
    /// right-limit state.
    pub fn sample(&self, xi: f64, gas: &GasConstants) -> IsoState {
        match self.left_wave {
            Wave::Shock { speed } if xi < speed => return self.left,
            Wave::Rarefaction { head, tail } if xi < tail => {
                return if xi < head {
                    self.left
                } else {
                    self.left_fan(xi, gas)
                };
            }
            _ => {}
        }
        match self.right_wave {
            Wave::Shock { speed } => {
                if xi < speed {
                    self.star()
                } else {
                    self.right
                }
            }
            Wave::Rarefaction { head, tail } => {
                if xi < tail {
                    self.star()
                } else if xi < head {
                    self.right_fan(xi, gas)
                } else {
                    self.right
                }
            }
        }
    }
}

fn iso_pair<'a>(
    left: &'a PipeState,
    right: &'a PipeState,
) -> Result<(Model, &'a IsoState, &'a IsoState)> {
    let model = left.model();
    if model == Model::M1 || right.model() != model {
        return Err(Error::ModelMismatch);
    }
    let (l, r) = (left.iso_state().unwrap(), right.iso_state().unwrap());
    if abs(l.kappa - r.kappa) > 1e-12 * l.kappa {
        return Err(Error::ModelMismatch);
    }
    Ok((model, l, r))
}

/// Exact solver for `M2`/`M3`. The star density solves
/// `u_L rho - theta2(rho, U_L) = u_R rho + theta2(rho, U_R)` (`M2`) or
/// `q_L - theta3(rho, U_L) = q_R + theta3(rho, U_R)` (`M3`) to `|residual| <= tol`.
pub fn solve_riemann_iso(
    left: &PipeState,
    right: &PipeState,
    gas: &GasConstants,
    tol: f64,
) -> Result<RiemannSolutionIso> {
    let (model, l, r) = iso_pair(left, right)?;
    left.validate(gas)?;
    right.validate(gas)?;
    let g = gas.gamma;
    let guess = 0.5 * (l.rho + r.rho);
    let hi0 = l.rho.max(r.rho);

    let (rho_star, iterations) = if l == r {
        (l.rho, 0)
    } else {
        match model {
            Model::M2 => {
                let (ul, ur) = (l.velocity(), r.velocity());
                let (cl, cr) = (l.sound_speed(gas), r.sound_speed(gas));
                if 2.0 * (cl + cr) / (g - 1.0) <= ur - ul {
                    return Err(Error::VacuumFormation);
                }
                // velocity form: monotone on (0, inf)
                let f = |rho: f64| {
                    let tl = theta2(rho, l, gas);
                    let tr = theta2(rho, r, gas);
                    let dl = dtheta2(rho, l, gas);
                    let dr = dtheta2(rho, r, gas);
                    (
                        ur - ul + (tl + tr) / rho,
                        ((dl + dr) * rho - (tl + tr)) / (rho * rho),
                    )
                };
                let hi = expand_upper(&f, hi0.max(guess))?;
                bracketed_newton(f, |rho, fx| abs(rho * fx) <= tol, 0.0, hi, guess, MAX_ITER)?
            }
            _ => {
                let n = 0.5 * (g + 1.0);
                let b = theta3_rare_coeff(l, gas);
                if r.q - l.q >= b * (powf(l.rho, n) + powf(r.rho, n)) {
                    return Err(Error::VacuumFormation);
                }
                let f = |rho: f64| {
                    (
                        r.q - l.q + theta3(rho, l, gas) + theta3(rho, r, gas),
                        dtheta3(rho, l, gas) + dtheta3(rho, r, gas),
                    )
                };
                let hi = expand_upper(&f, hi0.max(guess))?;
                bracketed_newton(f, |_, fx| abs(fx) <= tol, 0.0, hi, guess, MAX_ITER)?
            }
        }
    };

    let (ql, qr) = match model {
        Model::M2 => (
            l.velocity() * rho_star - theta2(rho_star, l, gas),
            r.velocity() * rho_star + theta2(rho_star, r, gas),
        ),
        _ => (
            l.q - theta3(rho_star, l, gas),
            r.q + theta3(rho_star, r, gas),
        ),
    };
    let q_star = 0.5 * (ql + qr);
    let star = IsoState::new(rho_star, q_star, l.kappa);
    let star_state = PipeState::iso(model, rho_star, q_star, l.kappa);
    let c_star = star.sound_speed(gas);
    let lam = |s: &IsoState, family: usize| -> f64 {
        PipeState::iso(model, s.rho, s.q, s.kappa)
            .characteristic_speed(family, gas)
            .expect("isentropic speeds are infallible")
    };
    let _ = c_star;

    let left_wave = if rho_star > l.rho {
        Wave::Shock {
            speed: (q_star - l.q) / (rho_star - l.rho),
        }
    } else {
        Wave::Rarefaction {
            head: lam(l, 1),
            tail: star_state.characteristic_speed(1, gas)?,
        }
    };
    let right_wave = if rho_star > r.rho {
        Wave::Shock {
            speed: (r.q - q_star) / (r.rho - rho_star),
        }
    } else {
        Wave::Rarefaction {
            head: lam(r, 2),
            tail: star_state.characteristic_speed(2, gas)?,
        }
    };

    Ok(RiemannSolutionIso {
        model,
        left: *l,
        right: *r,
        rho_star,
        q_star,
        left_wave,
        right_wave,
        iterations,
    })
}

/// A solved Riemann problem of any model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RiemannSolution {
    Euler(RiemannSolutionM1),
    Iso(RiemannSolutionIso),
}

impl RiemannSolution {
    pub fn sample(&self, xi: f64, gas: &GasConstants) -> PipeState {
        match self {
            RiemannSolution::Euler(s) => PipeState::M1(s.sample(xi, gas)),
            RiemannSolution::Iso(s) => {
                let st = s.sample(xi, gas);
                PipeState::iso(s.model, st.rho, st.q, st.kappa)
            }
        }
    }

    /// Slowest and fastest signal speeds of the solution.
    pub fn speed_range(&self) -> (f64, f64) {
        let (l, r) = match self {
            RiemannSolution::Euler(s) => (s.left_wave, s.right_wave),
            RiemannSolution::Iso(s) => (s.left_wave, s.right_wave),
        };
        (l.slowest(), r.fastest())
    }
}

/// Solves the standard Riemann problem for whichever model the states carry.
pub fn solve_riemann(
    left: &PipeState,
    right: &PipeState,
    gas: &GasConstants,
    tol: f64,
) -> Result<RiemannSolution> {
    match (left, right) {
        (PipeState::M1(l), PipeState::M1(r)) => {
            solve_riemann_m1(l, r, gas, tol).map(RiemannSolution::Euler)
        }
        (PipeState::M1(_), _) | (_, PipeState::M1(_)) => Err(Error::ModelMismatch),
        _ => solve_riemann_iso(left, right, gas, tol).map(RiemannSolution::Iso),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn unit_gas() -> GasConstants {
        GasConstants::new(1.4, 1.0, 0.0).unwrap()
    }

    fn prim(rho: f64, u: f64, p: f64) -> Primitive {
        let g = unit_gas();
        Primitive {
            rho,
            u,
            p,
            c: (g.gamma * p / rho).sqrt(),
        }
    }

    #[test]
    fn theta_examples() {
        let g = unit_gas();
        let base = IsoState::new(1.0, 0.0, 1.0);
        assert_eq!(theta2(1.0, &base, &g), 0.0);
        assert_eq!(theta3(1.0, &base, &g), 0.0);
        let t2 = theta2(2.0, &base, &g);
        assert!((t2 - (2.0 * (2f64.powf(1.4) - 1.0)).sqrt()).abs() < 1e-14);
        let t2r = theta2(0.5, &base, &g);
        assert!((t2r - 2.0 * 1.4f64.sqrt() / 0.4 * 0.5 * (0.5f64.powf(0.2) - 1.0)).abs() < 1e-14);
        let t3 = theta3(2.0, &base, &g);
        assert!((t3 - (2f64.powf(1.4) - 1.0).sqrt()).abs() < 1e-14);
        let t3r = theta3(0.5, &base, &g);
        assert!((t3r - 2.0 * 1.4f64.sqrt() / 2.4 * (0.5f64.powf(1.2) - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn psi_phi_examples() {
        let g = unit_gas();
        let b = prim(1.0, 0.0, 1.0);
        assert_eq!(psi(1.0, &b, &g), 0.0);
        assert_eq!(phi_density(1.0, &b, &g), 1.0);
        assert!((psi(2.0, &b, &g) - 0.62017).abs() < 1e-5);
        let rare = 2.0 * 1.4f64.sqrt() / 0.4 * (0.5f64.powf(1.0 / 7.0) - 1.0);
        assert!((psi(0.5, &b, &g) - rare).abs() < 1e-14);
        assert!((phi_density(2.0, &b, &g) - 1.625).abs() < 1e-14);
        assert!((phi_density(0.5, &b, &g) - 0.5f64.powf(5.0 / 7.0)).abs() < 1e-14);
    }

    fn central(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    #[test]
    fn analytic_derivatives_match_finite_differences() {
        let g = unit_gas();
        let iso = IsoState::new(1.3, 0.2, 0.9);
        let b = prim(1.2, 0.3, 0.8);
        for x in [0.4, 0.9, 1.1, 1.7, 2.5] {
            let r = x * iso.rho;
            let h = 1e-6 * r;
            let fd = central(|y| theta2(y, &iso, &g), r, h);
            assert!((fd - dtheta2(r, &iso, &g)).abs() < 1e-6 * fd.abs().max(1.0));
            let fd = central(|y| theta3(y, &iso, &g), r, h);
            assert!((fd - dtheta3(r, &iso, &g)).abs() < 1e-6 * fd.abs().max(1.0));
            let p = x * b.p;
            let h = 1e-6 * p;
            let fd = central(|y| psi(y, &b, &g), p, h);
            assert!((fd - dpsi(p, &b, &g)).abs() < 1e-6 * fd.abs());
            let fd = central(|y| phi_density(y, &b, &g), p, h);
            assert!((fd - dphi_density(p, &b, &g)).abs() < 1e-6 * fd.abs());
        }
    }

    fn one_sided(f: &impl Fn(f64) -> f64, x: f64, h: f64) -> (f64, f64) {
        ((f(x) - f(x - h)) / h, (f(x + h) - f(x)) / h)
    }

    #[test]
    fn branch_points_are_smooth() {
        let g = unit_gas();
        let iso = IsoState::new(1.3, 0.2, 0.9);
        let b = prim(1.2, 0.3, 0.8);
        let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs());
        // C1 for theta: compare analytic one-sided derivatives, and the
        // finite-difference slopes at offset 1e-5 (second-order error included)
        for f in [theta2 as fn(f64, &IsoState, &GasConstants) -> f64, theta3] {
            let h = 1e-5 * iso.rho;
            let (l, r) = one_sided(&|x| f(x, &iso, &g), iso.rho, h);
            assert!(rel(l, r) < 1e-4, "one-sided slopes {l} {r}");
        }
        for d in [dtheta2 as fn(f64, &IsoState, &GasConstants) -> f64, dtheta3] {
            let eps = 1e-9;
            let l = d(iso.rho * (1.0 - eps), &iso, &g);
            let r = d(iso.rho * (1.0 + eps), &iso, &g);
            assert!(rel(l, r) < 1e-6, "derivative jump {l} {r}");
        }
        // C2 for psi and phi: first derivatives agree and one-sided
        // finite-difference derivatives of the slope agree.
        for d in [
            dpsi as fn(f64, &Primitive, &GasConstants) -> f64,
            dphi_density,
        ] {
            let h = 1e-5 * b.p;
            let l = d(b.p - 1e-12, &b, &g);
            let r = d(b.p + 1e-12, &b, &g);
            assert!(rel(l, r) < 1e-6);
            let (l2, r2) = one_sided(&|x| d(x, &b, &g), b.p, h);
            assert!(rel(l2, r2) < 1e-4, "second derivative {l2} {r2}");
        }
    }

    /// Independent bisection on the pressure equation (no derivatives, no Newton).
    fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn sod_problem_matches_bisection_oracle() {
        let g = unit_gas();
        let l = EulerState::from_primitive(1.0, 0.0, 1.0, &g);
        let r = EulerState::from_primitive(0.125, 0.0, 0.1, &g);
        let sol = solve_riemann_m1(&l, &r, &g, DEFAULT_TOL).unwrap();
        let (lp, rp) = (
            Primitive::of(&l, &g).unwrap(),
            Primitive::of(&r, &g).unwrap(),
        );
        let oracle = bisect(|p| psi(p, &lp, &g) + psi(p, &rp, &g), 1e-8, 10.0);
        assert!((sol.p_star - oracle).abs() < 1e-9);
        assert!((sol.p_star - 0.30313).abs() < 1e-5);
        assert!((sol.u_star - 0.92745).abs() < 1e-5);
        assert!(!sol.left_wave.is_shock());
        assert!(sol.right_wave.is_shock());
        let at0 = sol.sample(0.0, &g);
        assert!((at0.pressure(&g).unwrap() - sol.p_star).abs() < 1e-12);
        assert!((at0.rho - sol.rho_l_star).abs() < 1e-14);
    }

    #[test]
    fn identical_states_give_trivial_solution() {
        let g = unit_gas();
        let s = EulerState::from_primitive(1.1, 0.3, 0.9, &g);
        let sol = solve_riemann_m1(&s, &s, &g, DEFAULT_TOL).unwrap();
        assert!((sol.p_star - 0.9).abs() <= 1e-14);
        assert!((sol.u_star - 0.3).abs() < 1e-14);
        assert_eq!(sol.rho_l_star, 1.1);
        assert_eq!(sol.rho_r_star, 1.1);
        for model in [Model::M2, Model::M3] {
            let s = PipeState::iso(model, 1.2, 0.4, 0.8);
            let sol = solve_riemann_iso(&s, &s, &g, DEFAULT_TOL).unwrap();
            assert_eq!(sol.rho_star, 1.2);
            assert!((sol.q_star - 0.4).abs() < 1e-15);
        }
    }

    #[test]
    fn symmetric_compression_has_zero_star_velocity() {
        let g = unit_gas();
        let a = 0.3;
        let l = EulerState::from_primitive(1.0, a, 1.0, &g);
        let r = EulerState::from_primitive(1.0, -a, 1.0, &g);
        let sol = solve_riemann_m1(&l, &r, &g, DEFAULT_TOL).unwrap();
        assert!(sol.u_star.abs() < 1e-14);
        assert_eq!(sol.rho_l_star, sol.rho_r_star);
        assert!(sol.left_wave.is_shock() && sol.right_wave.is_shock());

        let l = PipeState::iso(Model::M3, 1.0, a, 1.0);
        let r = PipeState::iso(Model::M3, 1.0, -a, 1.0);
        let sol = solve_riemann_iso(&l, &r, &g, DEFAULT_TOL).unwrap();
        assert!(sol.q_star.abs() < 1e-12);
        let base = l.iso_state().unwrap();
        assert!((2.0 * theta3(sol.rho_star, base, &g) - 2.0 * a).abs() < 1e-10);
    }

    #[test]
    fn m2_example_matches_bisection() {
        let g = unit_gas();
        let l = PipeState::iso(Model::M2, 1.0, 0.3, 1.0);
        let r = PipeState::iso(Model::M2, 0.8, 0.0, 1.0);
        let sol = solve_riemann_iso(&l, &r, &g, DEFAULT_TOL).unwrap();
        let (li, ri) = (l.iso_state().unwrap(), r.iso_state().unwrap());
        let oracle = bisect(
            |rho| {
                (ri.velocity() * rho + theta2(rho, ri, &g))
                    - (li.velocity() * rho - theta2(rho, li, &g))
            },
            1e-8,
            10.0,
        );
        assert!((sol.rho_star - oracle).abs() < 1e-9);
        let q_oracle = li.velocity() * oracle - theta2(oracle, li, &g);
        assert!((sol.q_star - q_oracle).abs() < 1e-9);
    }

    #[test]
    fn vacuum_is_rejected() {
        let g = unit_gas();
        let l = EulerState::from_primitive(1.0, -10.0, 1.0, &g);
        let r = EulerState::from_primitive(1.0, 10.0, 1.0, &g);
        assert_eq!(
            solve_riemann_m1(&l, &r, &g, DEFAULT_TOL).unwrap_err(),
            Error::VacuumFormation
        );
        for model in [Model::M2, Model::M3] {
            let l = PipeState::iso(model, 1.0, -10.0, 1.0);
            let r = PipeState::iso(model, 1.0, 10.0, 1.0);
            assert_eq!(
                solve_riemann_iso(&l, &r, &g, DEFAULT_TOL).unwrap_err(),
                Error::VacuumFormation
            );
        }
    }

    #[test]
    fn mismatched_models_are_rejected() {
        let g = unit_gas();
        let a = PipeState::iso(Model::M2, 1.0, 0.0, 1.0);
        let b = PipeState::iso(Model::M3, 1.0, 0.0, 1.0);
        let c = PipeState::iso(Model::M2, 1.0, 0.0, 2.0);
        assert_eq!(
            solve_riemann_iso(&a, &b, &g, 1e-10).unwrap_err(),
            Error::ModelMismatch
        );
        assert_eq!(
            solve_riemann_iso(&a, &c, &g, 1e-10).unwrap_err(),
            Error::ModelMismatch
        );
    }

    #[test]
    fn sampling_outside_the_fan_returns_data() {
        let g = unit_gas();
        let l = EulerState::from_primitive(1.0, 0.0, 1.0, &g);
        let r = EulerState::from_primitive(0.125, 0.0, 0.1, &g);
        let sol = solve_riemann_m1(&l, &r, &g, DEFAULT_TOL).unwrap();
        assert_eq!(sol.sample(-10.0, &g), l);
        assert_eq!(sol.sample(10.0, &g), r);
        // right-limit tie-breaking at the contact
        assert_eq!(sol.sample(sol.u_star, &g), sol.right_star());
        if let Wave::Shock { speed } = sol.right_wave {
            assert_eq!(sol.sample(speed, &g), r);
        }
    }

    #[test]
    fn fan_preserves_riemann_invariant() {
        let g = unit_gas();
        let l = EulerState::from_primitive(1.0, 0.0, 1.0, &g);
        let r = EulerState::from_primitive(0.125, 0.0, 0.1, &g);
        let sol = solve_riemann_m1(&l, &r, &g, DEFAULT_TOL).unwrap();
        let Wave::Rarefaction { head, tail } = sol.left_wave else {
            panic!("expected left rarefaction")
        };
        let inv = |s: &EulerState| {
            let p = Primitive::of(s, &g).unwrap();
            (p.u + 2.0 * p.c / (g.gamma - 1.0), p.p / p.rho.powf(g.gamma))
        };
        let (j0, k0) = inv(&l);
        let samples: Vec<_> = (0..100)
            .map(|i| head + (tail - head) * (i as f64 + 0.5) / 100.0)
            .collect();
        for xi in samples {
            let (j, k) = inv(&sol.sample(xi, &g));
            assert!((j - j0).abs() < 1e-8 * j0.abs().max(1.0));
            assert!((k - k0).abs() < 1e-8 * k0);
        }
    }
}
