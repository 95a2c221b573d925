//! Lax-curve parameterizations through a base state and the derivatives of
//! flux, enthalpy, entropy, pressure and temperature along them.
//!
//! Pipe coordinates point away from the junction, so the junction trace is
//! always the left state of the pipe's local Riemann problem. The trace of a
//! polytropic pipe is reached from the pipe state by a 3-wave (parameter:
//! star pressure `sigma`) and, for outgoing pipes, a contact (parameter:
//! density increment `tau`). Isentropic traces lie on the 2-wave curve
//! parameterized by the star density.

use crate::error::{Error, Result};
use crate::math::powf;
use crate::riemann::{dphi_density, dpsi, dtheta, phi_density, psi, theta, Primitive};
use crate::thermo::{EulerState, GasConstants, IsoState, Model, PipeState, Subsonic};

/// Curve parameters; `tau` is only meaningful for the polytropic contact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaxParam {
    pub sigma: f64,
    pub tau: f64,
}

impl LaxParam {
    pub fn new(sigma: f64, tau: f64) -> Self {
        Self { sigma, tau }
    }
}

/// Polytropic Lax curves. Family 1 and 3 take the star pressure `sigma`,
/// family 2 the density increment `tau`.
pub fn lax_m1(
    family: usize,
    param: LaxParam,
    base: &EulerState,
    gas: &GasConstants,
) -> Result<EulerState> {
    match family {
        1 | 3 => {
            if !(param.sigma > 0.0) {
                return Err(Error::NonPositivePressure(param.sigma));
            }
            let b = Primitive::of(base, gas)?;
            let rho = phi_density(param.sigma, &b, gas);
            let du = psi(param.sigma, &b, gas);
            let u = if family == 1 { b.u - du } else { b.u + du };
            Ok(EulerState::new(
                rho,
                rho * u,
                param.sigma / (gas.gamma - 1.0) + 0.5 * rho * u * u,
            ))
        }
        2 => {
            let u = base.velocity();
            let rho = base.rho + param.tau;
            if !(rho > 0.0) {
                return Err(Error::NonPositiveDensity(rho));
            }
            Ok(EulerState::new(
                rho,
                base.q + param.tau * u,
                base.energy + 0.5 * param.tau * u * u,
            ))
        }
        _ => panic!("polytropic model has families 1..=3, got {family}"),
    }
}

/// Isentropic Lax curves parameterized by the density `sigma`.
pub fn lax_iso(
    model: Model,
    family: usize,
    sigma: f64,
    base: &IsoState,
    gas: &GasConstants,
) -> Result<IsoState> {
    if !(sigma > 0.0) {
        return Err(Error::NonPositiveDensity(sigma));
    }
    let t = theta(model, sigma, base, gas);
    let signed = match family {
        1 => -t,
        2 => t,
        _ => panic!("isentropic models have families 1 and 2, got {family}"),
    };
    let q = match model {
        Model::M2 => base.velocity() * sigma + signed,
        _ => base.q + signed,
    };
    Ok(IsoState::new(sigma, q, base.kappa))
}

/// How a pipe's junction trace is parameterized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PipeRole {
    /// Polytropic pipe carrying flow away from the junction: `(sigma, tau)`.
    M1Outgoing,
    /// Polytropic pipe carrying flow into the junction: `sigma` only.
    M1Incoming,
    /// Isentropic pipe of either orientation: `sigma` only.
    Isentropic,
}

impl PipeRole {
    pub fn of(model: Model, orientation: Subsonic) -> Self {
        match (model, orientation) {
            (Model::M1, Subsonic::DPlus) => PipeRole::M1Outgoing,
            (Model::M1, _) => PipeRole::M1Incoming,
            _ => PipeRole::Isentropic,
        }
    }

    pub fn has_tau(self) -> bool {
        self == PipeRole::M1Outgoing
    }
}

/// Partial derivatives with respect to `(sigma, tau)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Grad {
    pub sigma: f64,
    pub tau: f64,
}

/// Trace state on a pipe's wave curve together with the derivatives of the
/// coupling quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub state: PipeState,
    pub q: f64,
    pub h: f64,
    pub s: f64,
    pub p: f64,
    pub temperature: f64,
    pub dq: Grad,
    pub dh: Grad,
    pub ds: Grad,
    pub dp: Grad,
    pub dtemperature: Grad,
}

/// Base parameter of a pipe: its pressure (polytropic) or density (isentropic).
pub fn base_sigma(base: &PipeState, gas: &GasConstants) -> Result<f64> {
    match base {
        PipeState::M1(s) => s.pressure(gas),
        _ => Ok(base.rho()),
    }
}

/// Evaluates the trace reached from `base` with parameters `(sigma, tau)`.
/// `tau` is ignored unless `role` is [`PipeRole::M1Outgoing`].
pub fn trace(
    role: PipeRole,
    sigma: f64,
    tau: f64,
    base: &PipeState,
    gas: &GasConstants,
) -> Result<TracePoint> {
    let g = gas.gamma;
    match base {
        PipeState::M1(e) => {
            if !(sigma > 0.0) {
                return Err(Error::NonPositivePressure(sigma));
            }
            let tau = if role.has_tau() { tau } else { 0.0 };
            let b = Primitive::of(e, gas)?;
            let rho1 = phi_density(sigma, &b, gas);
            let drho1 = dphi_density(sigma, &b, gas);
            let u = b.u + psi(sigma, &b, gas);
            let du = dpsi(sigma, &b, gas);
            let rho = rho1 + tau;
            if !(rho > 0.0) {
                return Err(Error::NonPositiveDensity(rho));
            }
            let p = sigma;
            let k = g / (g - 1.0);
            // the base parameter reproduces the base state bit for bit
            let state = if sigma == b.p && tau == 0.0 {
                *e
            } else {
                EulerState::new(rho, rho * u, p / (g - 1.0) + 0.5 * rho * u * u)
            };
            let dtemp_sigma = (1.0 / rho - p * drho1 / (rho * rho)) / gas.r;
            Ok(TracePoint {
                state: PipeState::M1(state),
                q: rho * u,
                h: k * p / rho + 0.5 * u * u,
                s: gas.cv * crate::math::ln(p / powf(rho, g)) + gas.s0,
                p,
                temperature: p / (rho * gas.r),
                dq: Grad {
                    sigma: drho1 * u + rho * du,
                    tau: if role.has_tau() { u } else { 0.0 },
                },
                dh: Grad {
                    sigma: k * (1.0 / rho - p * drho1 / (rho * rho)) + u * du,
                    tau: if role.has_tau() {
                        -k * p / (rho * rho)
                    } else {
                        0.0
                    },
                },
                ds: Grad {
                    sigma: gas.cv * (1.0 / p - g * drho1 / rho),
                    tau: if role.has_tau() {
                        -g * gas.cv / rho
                    } else {
                        0.0
                    },
                },
                dp: Grad {
                    sigma: 1.0,
                    tau: 0.0,
                },
                dtemperature: Grad {
                    sigma: dtemp_sigma,
                    tau: if role.has_tau() {
                        -p / (gas.r * rho * rho)
                    } else {
                        0.0
                    },
                },
            })
        }
        PipeState::M2(b) | PipeState::M3(b) => {
            let model = base.model();
            let st = lax_iso(model, 2, sigma, b, gas)?;
            let rho = sigma;
            let dq = match model {
                Model::M2 => b.velocity() + dtheta(model, rho, b, gas),
                _ => dtheta(model, rho, b, gas),
            };
            let c2 = b.kappa * g * powf(rho, g - 1.0);
            let u = st.q / rho;
            let (h, dh) = match model {
                Model::M2 => {
                    let du = (dq - u) / rho;
                    (c2 / (g - 1.0) + 0.5 * u * u, c2 / rho + u * du)
                }
                _ => (c2 / (g - 1.0), c2 / rho),
            };
            let p = b.kappa * powf(rho, g);
            Ok(TracePoint {
                state: PipeState::iso(model, st.rho, st.q, st.kappa),
                q: st.q,
                h,
                s: gas.entropy_from_kappa(b.kappa),
                p,
                temperature: p / (rho * gas.r),
                dq: Grad {
                    sigma: dq,
                    tau: 0.0,
                },
                dh: Grad {
                    sigma: dh,
                    tau: 0.0,
                },
                ds: Grad::default(),
                dp: Grad {
                    sigma: c2,
                    tau: 0.0,
                },
                dtemperature: Grad {
                    sigma: (g - 1.0) * b.kappa * powf(rho, g - 2.0) / gas.r,
                    tau: 0.0,
                },
            })
        }
    }
}

/// Closed-form derivatives at the base point `(sigma, tau) = (sigma_0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseDerivatives {
    pub dq: Grad,
    pub dh: Grad,
    pub ds: Grad,
    pub dp: Grad,
    pub dtemperature: Grad,
}

/// Base-point derivatives from the closed-form expressions in terms of the
/// characteristic speeds of the base state.
pub fn curve_derivatives_at_base(
    role: PipeRole,
    base: &PipeState,
    gas: &GasConstants,
) -> Result<BaseDerivatives> {
    if base.classify_subsonic(gas) == Subsonic::NotSubsonic {
        return Err(Error::NotSubsonic);
    }
    let g = gas.gamma;
    let c = base.sound_speed(gas)?;
    let rho = base.rho();
    let lam_fast = base.eigenvalues(gas)?.last();
    match base {
        PipeState::M1(e) => {
            let outgoing = role.has_tau();
            Ok(BaseDerivatives {
                dq: Grad {
                    sigma: lam_fast / (c * c),
                    tau: if outgoing { e.velocity() } else { 0.0 },
                },
                dh: Grad {
                    sigma: lam_fast / (c * rho),
                    tau: if outgoing {
                        -c * c / ((g - 1.0) * rho)
                    } else {
                        0.0
                    },
                },
                ds: Grad {
                    sigma: 0.0,
                    tau: if outgoing { -g * gas.cv / rho } else { 0.0 },
                },
                dp: Grad {
                    sigma: 1.0,
                    tau: 0.0,
                },
                dtemperature: Grad {
                    sigma: (g - 1.0) / (g * gas.r * rho),
                    tau: if outgoing {
                        -c * c / (g * gas.r * rho)
                    } else {
                        0.0
                    },
                },
            })
        }
        PipeState::M2(b) | PipeState::M3(b) => Ok(BaseDerivatives {
            dq: Grad {
                sigma: lam_fast,
                tau: 0.0,
            },
            dh: Grad {
                sigma: lam_fast * c / rho,
                tau: 0.0,
            },
            ds: Grad::default(),
            dp: Grad {
                sigma: c * c,
                tau: 0.0,
            },
            dtemperature: Grad {
                sigma: (g - 1.0) * b.kappa * powf(rho, g - 2.0) / gas.r,
                tau: 0.0,
            },
        }),
    }
}
