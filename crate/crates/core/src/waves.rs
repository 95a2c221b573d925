//! Elementary waves for front tracking: forward wave maps, strengths,
//! propagation speeds and the decomposition of a Riemann problem into
//! discrete fronts.
//!
//! Strength is the signed jump of the curve parameter across the wave:
//! pressure for polytropic families 1 and 3, density for the contact and for
//! both isentropic families.

use alloc::vec::Vec;

use crate::error::Result;
use crate::laxcurves::{lax_iso, lax_m1, LaxParam};
use crate::math::{abs, ceil, powf, sqrt};
use crate::riemann::{solve_riemann, Primitive, RiemannSolution};
use crate::thermo::{EulerState, GasConstants, IsoState, Model, PipeState};

/// Curve parameter of `state` for the given family.
pub fn parameter(state: &PipeState, family: usize, gas: &GasConstants) -> Result<f64> {
    match (state, family) {
        (PipeState::M1(e), 1 | 3) => e.pressure(gas),
        _ => Ok(state.rho()),
    }
}

/// True when a wave of this family and signed strength is compressive.
pub fn is_shock(model: Model, family: usize, strength: f64) -> bool {
    match (model, family) {
        (Model::M1, 2) => false,
        (Model::M1, 1) | (Model::M2 | Model::M3, 1) => strength > 0.0,
        _ => strength < 0.0,
    }
}

/// State to the right of a wave of `family` and `strength` whose left state
/// is `left`.
pub fn forward(
    left: &PipeState,
    family: usize,
    strength: f64,
    gas: &GasConstants,
) -> Result<PipeState> {
    match left {
        PipeState::M1(e) => forward_m1(e, family, strength, gas).map(PipeState::M1),
        PipeState::M2(s) | PipeState::M3(s) => {
            let model = left.model();
            let right = forward_iso(model, s, family, strength, gas)?;
            Ok(PipeState::iso(model, right.rho, right.q, right.kappa))
        }
    }
}

fn forward_m1(left: &EulerState, family: usize, v: f64, gas: &GasConstants) -> Result<EulerState> {
    match family {
        1 => {
            let l = Primitive::of(left, gas)?;
            lax_m1(1, LaxParam::new(l.p + v, 0.0), left, gas)
        }
        2 => lax_m1(2, LaxParam::new(0.0, v), left, gas),
        3 => {
            let l = Primitive::of(left, gas)?;
            let g = gas.gamma;
            let pr = l.p + v;
            if !(pr > 0.0) {
                return Err(crate::error::Error::NonPositivePressure(pr));
            }
            let (rho, u) = if pr >= l.p {
                let z = (g - 1.0) / (2.0 * g);
                (
                    l.rho * powf(pr / l.p, 1.0 / g),
                    l.u + 2.0 * l.c / (g - 1.0) * (powf(pr / l.p, z) - 1.0),
                )
            } else {
                let mu2 = gas.mu2();
                let rho = l.rho * (pr + mu2 * l.p) / (mu2 * pr + l.p);
                let u = l.u - (l.p - pr) * sqrt((1.0 - mu2) / (rho * (l.p + mu2 * pr)));
                (rho, u)
            };
            Ok(EulerState::from_primitive(rho, u, pr, gas))
        }
        _ => panic!("polytropic model has families 1..=3, got {family}"),
    }
}

fn forward_iso(
    model: Model,
    left: &IsoState,
    family: usize,
    v: f64,
    gas: &GasConstants,
) -> Result<IsoState> {
    let rho_r = left.rho + v;
    if !(rho_r > 0.0) {
        return Err(crate::error::Error::NonPositiveDensity(rho_r));
    }
    match family {
        1 => lax_iso(model, 1, rho_r, left, gas),
        2 => {
            let g = gas.gamma;
            let k = left.kappa;
            let rho_l = left.rho;
            let q = if rho_r >= rho_l {
                match model {
                    Model::M2 => {
                        let m = 0.5 * (g - 1.0);
                        let a = 2.0 * sqrt(k * g) / (g - 1.0);
                        rho_r * (left.velocity() + a * (powf(rho_r, m) - powf(rho_l, m)))
                    }
                    _ => {
                        let n = 0.5 * (g + 1.0);
                        let b = 2.0 * sqrt(k * g) / (g + 1.0);
                        left.q + b * (powf(rho_r, n) - powf(rho_l, n))
                    }
                }
            } else {
                let dp = k * (powf(rho_l, g) - powf(rho_r, g));
                let d = rho_l - rho_r;
                match model {
                    Model::M2 => rho_r * (left.velocity() - sqrt(d * dp / (rho_l * rho_r))),
                    _ => left.q - sqrt(d * dp),
                }
            };
            Ok(IsoState::new(rho_r, q, k))
        }
        _ => panic!("isentropic models have families 1 and 2, got {family}"),
    }
}

/// Propagation speed of a discontinuity between `left` and `right` of a
/// physical family: the Rankine-Hugoniot speed from the mass equation, the
/// flow velocity for the contact, or the mean characteristic speed for a
/// rarefaction slice.
pub fn front_speed(
    left: &PipeState,
    right: &PipeState,
    family: usize,
    shock: bool,
    gas: &GasConstants,
) -> Result<f64> {
    if left.model() == Model::M1 && family == 2 {
        return Ok(0.5 * (left.velocity() + right.velocity()));
    }
    let drho = right.rho() - left.rho();
    if shock && abs(drho) > 1e-13 * left.rho() {
        return Ok((right.q() - left.q()) / drho);
    }
    Ok(
        0.5 * (left.characteristic_speed(family, gas)?
            + right.characteristic_speed(family, gas)?),
    )
}

/// A discrete front produced by a wave decomposition. `family == None`
/// marks a non-physical front.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub family: Option<usize>,
    pub strength: f64,
    pub shock: bool,
    pub speed: f64,
    pub right: PipeState,
}

/// Signed strengths of the exact Riemann solution between `left` and `right`,
/// one entry per family.
pub fn riemann_strengths(
    left: &PipeState,
    right: &PipeState,
    gas: &GasConstants,
    tol: f64,
) -> Result<Vec<(usize, f64)>> {
    let sol = solve_riemann(left, right, gas, tol)?;
    Ok(match sol {
        RiemannSolution::Euler(s) => {
            let pl = left.pressure(gas)?;
            let pr = right.pressure(gas)?;
            alloc::vec![
                (1, s.p_star - pl),
                (2, s.rho_r_star - s.rho_l_star),
                (3, pr - s.p_star),
            ]
        }
        RiemannSolution::Iso(s) => {
            alloc::vec![(1, s.rho_star - left.rho()), (2, right.rho() - s.rho_star)]
        }
    })
}

/// Sum of absolute strengths of the exact Riemann solution.
pub fn total_strength(
    left: &PipeState,
    right: &PipeState,
    gas: &GasConstants,
    tol: f64,
) -> Result<f64> {
    Ok(riemann_strengths(left, right, gas, tol)?
        .iter()
        .map(|(_, v)| abs(*v))
        .sum())
}

/// Fronts of a single wave of `family` with `strength` starting at `left`.
/// Rarefactions are split into `ceil(|strength|/epsilon)` slices.
pub fn wave_pieces(
    left: &PipeState,
    family: usize,
    strength: f64,
    epsilon: f64,
    gas: &GasConstants,
) -> Result<Vec<Piece>> {
    let model = left.model();
    let shock = is_shock(model, family, strength);
    let contact = model == Model::M1 && family == 2;
    let slices = if shock || contact {
        1
    } else {
        (ceil(abs(strength) / epsilon) as usize).max(1)
    };
    let mut out = Vec::with_capacity(slices);
    let mut prev = *left;
    for k in 1..=slices {
        let cumulative = strength * k as f64 / slices as f64;
        let next = forward(left, family, cumulative, gas)?;
        let speed = front_speed(&prev, &next, family, shock, gas)?;
        out.push(Piece {
            family: Some(family),
            strength: strength / slices as f64,
            shock,
            speed,
            right: next,
        });
        prev = next;
    }
    Ok(out)
}

/// How a wave decomposition is turned into fronts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slicing {
    /// Maximal strength of a rarefaction slice.
    pub epsilon: f64,
    /// Waves weaker than this are carried by a non-physical front.
    pub lump_below: f64,
    /// Waves with `|v| <= drop_relative * parameter` are treated as round-off
    /// and not emitted at all.
    pub drop_relative: f64,
    /// Speed assigned to non-physical fronts.
    pub np_speed: f64,
}

impl Slicing {
    pub fn new(epsilon: f64, np_speed: f64) -> Self {
        Self {
            epsilon,
            lump_below: 0.0,
            drop_relative: 1e-12,
            np_speed,
        }
    }
}

/// Turns a chain of `(family, strength)` waves starting at `left` into
/// fronts ending exactly at `right`. Returns an empty list when every wave is
/// negligible, in which case the caller should identify `right` with `left`.
pub fn chain_pieces(
    left: &PipeState,
    waves: &[(usize, f64)],
    right: &PipeState,
    slicing: &Slicing,
    gas: &GasConstants,
) -> Result<Vec<Piece>> {
    let mut out: Vec<Piece> = Vec::new();
    let mut cur = *left;
    let mut lumped = 0.0;
    for &(family, v) in waves {
        let scale = parameter(&cur, family, gas)?;
        if abs(v) <= slicing.drop_relative * scale {
            continue;
        }
        if abs(v) < slicing.lump_below {
            lumped += abs(v);
            continue;
        }
        let pieces = wave_pieces(&cur, family, v, slicing.epsilon, gas)?;
        cur = pieces.last().expect("non-empty").right;
        out.extend(pieces);
    }
    if lumped > 0.0 {
        out.push(Piece {
            family: None,
            strength: lumped,
            shock: false,
            speed: slicing.np_speed,
            right: *right,
        });
    } else if let Some(last) = out.last_mut() {
        last.right = *right;
    }
    Ok(out)
}

/// Decomposes the Riemann problem `(left, right)` into fronts using its exact
/// solution (the accurate solver).
pub fn riemann_pieces(
    left: &PipeState,
    right: &PipeState,
    slicing: &Slicing,
    gas: &GasConstants,
    tol: f64,
) -> Result<Vec<Piece>> {
    if left == right {
        return Ok(Vec::new());
    }
    let strengths = riemann_strengths(left, right, gas, tol)?;
    chain_pieces(left, &strengths, right, slicing, gas)
}
