//! Gas constants, the three-model state representation and the derived
//! thermodynamic quantities.
//!
//! * `M1`: polytropic Euler, conserved `(rho, q, E)` with `p = (gamma-1)(E - q^2/(2 rho))`.
//! * `M2`: isentropic Euler, conserved `(rho, q)` with `p = kappa rho^gamma`.
//! * `M3`: isentropic Euler without the kinetic flux term; same EOS as `M2`,
//!   but the enthalpy drops the `u^2/2` contribution and the characteristic
//!   speeds are `-c, +c`.
//!
//! For the isentropic models the specific entropy is `c_v ln(kappa) + s0`,
//! the inverse of `kappa = exp((s - s0)/c_v)`.

use crate::error::{Error, Result};
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasConstants {
    pub gamma: f64,
    /// Specific gas constant, J/(kg K).
    pub r: f64,
    pub cv: f64,
    pub cp: f64,
    /// Reference entropy, J/(kg K).
    pub s0: f64,
}

impl GasConstants {
    /// Builds the constants from `gamma`, `R` and `s0`; `c_v = R/(gamma-1)`,
    /// `c_p = gamma c_v`.
    pub fn new(gamma: f64, r: f64, s0: f64) -> Result<Self> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(Error::InvalidGas("gamma must exceed 1"));
        }
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidGas("gas constant must be positive"));
        }
        if !(s0 >= 0.0) || !s0.is_finite() {
            return Err(Error::InvalidGas("reference entropy must be non-negative"));
        }
        let cv = r / (gamma - 1.0);
        Ok(Self {
            gamma,
            r,
            cv,
            cp: gamma * cv,
            s0,
        })
    }

    /// Air-like test gas: `gamma = 1.4`, `R = 287`, `s0 = 0`.
    pub fn air() -> Self {
        Self::new(1.4, 287.0, 0.0).expect("valid constants")
    }

    pub fn validate(&self) -> Result<()> {
        let rebuilt = Self::new(self.gamma, self.r, self.s0)?;
        let close = |a: f64, b: f64| math::abs(a - b) <= 1e-9 * math::abs(b);
        if !close(self.cv, rebuilt.cv) || !close(self.cp, rebuilt.cp) {
            return Err(Error::InvalidGas(
                "heat capacities inconsistent with gamma and R",
            ));
        }
        Ok(())
    }

    /// `mu^2 = (gamma-1)/(gamma+1)`.
    pub fn mu2(&self) -> f64 {
        (self.gamma - 1.0) / (self.gamma + 1.0)
    }

    /// Isentropic coefficient belonging to a specific entropy.
    pub fn kappa_from_entropy(&self, s: f64) -> f64 {
        math::exp((s - self.s0) / self.cv)
    }

    pub fn entropy_from_kappa(&self, kappa: f64) -> f64 {
        self.cv * math::ln(kappa) + self.s0
    }
}

impl Default for GasConstants {
    fn default() -> Self {
        Self::air()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    M1,
    M2,
    M3,
}

impl Model {
    /// Number of conserved components.
    pub fn dim(self) -> usize {
        match self {
            Model::M1 => 3,
            Model::M2 | Model::M3 => 2,
        }
    }

    /// Number of wave families.
    pub fn families(self) -> usize {
        self.dim()
    }
}

impl core::fmt::Display for Model {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            Model::M1 => "M1",
            Model::M2 => "M2",
            Model::M3 => "M3",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerState {
    pub rho: f64,
    pub q: f64,
    /// Total energy density.
    pub energy: f64,
}

impl EulerState {
    pub fn new(rho: f64, q: f64, energy: f64) -> Self {
        Self { rho, q, energy }
    }

    pub fn from_primitive(rho: f64, u: f64, p: f64, gas: &GasConstants) -> Self {
        Self {
            rho,
            q: rho * u,
            energy: p / (gas.gamma - 1.0) + 0.5 * rho * u * u,
        }
    }

    pub fn velocity(&self) -> f64 {
        self.q / self.rho
    }

    pub fn pressure(&self, gas: &GasConstants) -> Result<f64> {
        let p = (gas.gamma - 1.0) * (self.energy - 0.5 * self.q * self.q / self.rho);
        if p > 0.0 {
            Ok(p)
        } else {
            Err(Error::NonPositivePressure(p))
        }
    }

    pub fn sound_speed(&self, gas: &GasConstants) -> Result<f64> {
        Ok(math::sqrt(gas.gamma * self.pressure(gas)? / self.rho))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsoState {
    pub rho: f64,
    pub q: f64,
    /// `p = kappa rho^gamma`.
    pub kappa: f64,
}

impl IsoState {
    pub fn new(rho: f64, q: f64, kappa: f64) -> Self {
        Self { rho, q, kappa }
    }

    pub fn velocity(&self) -> f64 {
        self.q / self.rho
    }

    pub fn pressure(&self, gas: &GasConstants) -> f64 {
        self.kappa * math::powf(self.rho, gas.gamma)
    }

    pub fn sound_speed(&self, gas: &GasConstants) -> f64 {
        math::sqrt(self.kappa * gas.gamma * math::powf(self.rho, gas.gamma - 1.0))
    }
}

/// A conservative state tagged with its model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PipeState {
    M1(EulerState),
    M2(IsoState),
    M3(IsoState),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoQuantities {
    /// Specific entropy.
    pub s: f64,
    /// Total enthalpy.
    pub h: f64,
    /// Sound speed.
    pub c: f64,
}

/// Ordered characteristic speeds (two or three entries).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Speeds {
    values: [f64; 3],
    len: usize,
}

impl Speeds {
    pub fn as_slice(&self) -> &[f64] {
        &self.values[..self.len]
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        self.values[self.len - 1]
    }
}

/// Subsonic classification: `DPlus` is flow away from the junction
/// (`0 < u < c`), `DMinus` towards it (`-c < u < 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsonic {
    DPlus,
    DMinus,
    NotSubsonic,
}

/// Fixed-size conservative vector, unused trailing entries are zero.
pub type Conserved = [f64; 3];

impl PipeState {
    pub fn model(&self) -> Model {
        match self {
            PipeState::M1(_) => Model::M1,
            PipeState::M2(_) => Model::M2,
            PipeState::M3(_) => Model::M3,
        }
    }

    /// Builds an isentropic state of the given model. Panics on `M1`.
    pub fn iso(model: Model, rho: f64, q: f64, kappa: f64) -> Self {
        let s = IsoState::new(rho, q, kappa);
        match model {
            Model::M2 => PipeState::M2(s),
            Model::M3 => PipeState::M3(s),
            Model::M1 => panic!("M1 states carry an energy, not kappa"),
        }
    }

    pub fn rho(&self) -> f64 {
        match self {
            PipeState::M1(s) => s.rho,
            PipeState::M2(s) | PipeState::M3(s) => s.rho,
        }
    }

    pub fn q(&self) -> f64 {
        match self {
            PipeState::M1(s) => s.q,
            PipeState::M2(s) | PipeState::M3(s) => s.q,
        }
    }

    pub fn velocity(&self) -> f64 {
        self.q() / self.rho()
    }

    pub fn kappa(&self) -> Option<f64> {
        match self {
            PipeState::M1(_) => None,
            PipeState::M2(s) | PipeState::M3(s) => Some(s.kappa),
        }
    }

    pub fn energy(&self) -> Option<f64> {
        match self {
            PipeState::M1(s) => Some(s.energy),
            _ => None,
        }
    }

    pub fn iso_state(&self) -> Option<&IsoState> {
        match self {
            PipeState::M1(_) => None,
            PipeState::M2(s) | PipeState::M3(s) => Some(s),
        }
    }

    pub fn euler_state(&self) -> Option<&EulerState> {
        match self {
            PipeState::M1(s) => Some(s),
            _ => None,
        }
    }

    /// Checks the state invariants (positive density and pressure, positive kappa).
    pub fn validate(&self, gas: &GasConstants) -> Result<()> {
        let rho = self.rho();
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::NonPositiveDensity(rho));
        }
        if !self.q().is_finite() {
            return Err(Error::NonPositiveDensity(f64::NAN));
        }
        match self {
            PipeState::M1(s) => s.pressure(gas).map(|_| ()),
            PipeState::M2(s) | PipeState::M3(s) => {
                if s.kappa > 0.0 && s.kappa.is_finite() {
                    Ok(())
                } else {
                    Err(Error::NonPositivePressure(s.kappa))
                }
            }
        }
    }

    pub fn pressure(&self, gas: &GasConstants) -> Result<f64> {
        match self {
            PipeState::M1(s) => s.pressure(gas),
            PipeState::M2(s) | PipeState::M3(s) => Ok(s.pressure(gas)),
        }
    }

    pub fn sound_speed(&self, gas: &GasConstants) -> Result<f64> {
        match self {
            PipeState::M1(s) => s.sound_speed(gas),
            PipeState::M2(s) | PipeState::M3(s) => Ok(s.sound_speed(gas)),
        }
    }

    /// Temperature from the ideal gas law `p = rho R T`.
    pub fn temperature(&self, gas: &GasConstants) -> Result<f64> {
        Ok(self.pressure(gas)? / (self.rho() * gas.r))
    }

    pub fn thermo_quantities(&self, gas: &GasConstants) -> Result<ThermoQuantities> {
        let g = gas.gamma;
        match self {
            PipeState::M1(s) => {
                let p = s.pressure(gas)?;
                Ok(ThermoQuantities {
                    s: gas.cv * math::ln(p / math::powf(s.rho, g)) + gas.s0,
                    h: (s.energy + p) / s.rho,
                    c: math::sqrt(g * p / s.rho),
                })
            }
            PipeState::M2(s) | PipeState::M3(s) => {
                let c2 = s.kappa * g * math::powf(s.rho, g - 1.0);
                let mut h = c2 / (g - 1.0);
                if let PipeState::M2(_) = self {
                    let u = s.velocity();
                    h += 0.5 * u * u;
                }
                Ok(ThermoQuantities {
                    s: gas.entropy_from_kappa(s.kappa),
                    h,
                    c: math::sqrt(c2),
                })
            }
        }
    }

    pub fn entropy(&self, gas: &GasConstants) -> Result<f64> {
        Ok(self.thermo_quantities(gas)?.s)
    }

    pub fn enthalpy(&self, gas: &GasConstants) -> Result<f64> {
        Ok(self.thermo_quantities(gas)?.h)
    }

    pub fn eigenvalues(&self, gas: &GasConstants) -> Result<Speeds> {
        let c = self.sound_speed(gas)?;
        let u = self.velocity();
        Ok(match self {
            PipeState::M1(_) => Speeds {
                values: [u - c, u, u + c],
                len: 3,
            },
            PipeState::M2(_) => Speeds {
                values: [u - c, u + c, 0.0],
                len: 2,
            },
            PipeState::M3(_) => Speeds {
                values: [-c, c, 0.0],
                len: 2,
            },
        })
    }

    /// Characteristic speed of one wave family (1-based).
    pub fn characteristic_speed(&self, family: usize, gas: &GasConstants) -> Result<f64> {
        Ok(self.eigenvalues(gas)?.as_slice()[family - 1])
    }

    pub fn classify_subsonic(&self, gas: &GasConstants) -> Subsonic {
        let (u, c) = match self.sound_speed(gas) {
            Ok(c) => (self.velocity(), c),
            Err(_) => return Subsonic::NotSubsonic,
        };
        if 0.0 < u && u < c {
            Subsonic::DPlus
        } else if -c < u && u < 0.0 {
            Subsonic::DMinus
        } else {
            Subsonic::NotSubsonic
        }
    }

    pub fn conserved(&self) -> Conserved {
        match self {
            PipeState::M1(s) => [s.rho, s.q, s.energy],
            PipeState::M2(s) | PipeState::M3(s) => [s.rho, s.q, 0.0],
        }
    }

    pub fn flux(&self, gas: &GasConstants) -> Result<Conserved> {
        let p = self.pressure(gas)?;
        Ok(match self {
            PipeState::M1(s) => {
                let u = s.velocity();
                [s.q, s.q * u + p, u * (s.energy + p)]
            }
            PipeState::M2(s) => [s.q, s.q * s.velocity() + p, 0.0],
            PipeState::M3(s) => [s.q, p, 0.0],
        })
    }

    /// Same model (and kappa for isentropic models) with mass flux mirrored.
    pub fn with_q(&self, q: f64) -> Self {
        match *self {
            PipeState::M1(s) => {
                let kinetic_old = 0.5 * s.q * s.q / s.rho;
                let kinetic_new = 0.5 * q * q / s.rho;
                PipeState::M1(EulerState::new(
                    s.rho,
                    q,
                    s.energy - kinetic_old + kinetic_new,
                ))
            }
            PipeState::M2(s) => PipeState::M2(IsoState::new(s.rho, q, s.kappa)),
            PipeState::M3(s) => PipeState::M3(IsoState::new(s.rho, q, s.kappa)),
        }
    }

    /// Componentwise 1-norm of the conservative difference.
    pub fn distance(&self, other: &PipeState) -> f64 {
        let a = self.conserved();
        let b = other.conserved();
        a.iter().zip(b.iter()).map(|(x, y)| math::abs(x - y)).sum()
    }

    /// Builds a state of the same model from conservative components.
    pub fn with_conserved(&self, u: Conserved) -> Self {
        match *self {
            PipeState::M1(_) => PipeState::M1(EulerState::new(u[0], u[1], u[2])),
            PipeState::M2(s) => PipeState::M2(IsoState::new(u[0], u[1], s.kappa)),
            PipeState::M3(s) => PipeState::M3(IsoState::new(u[0], u[1], s.kappa)),
        }
    }
}
