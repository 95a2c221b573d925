//! Source terms for operator splitting.

use crate::math::abs;
use crate::thermo::{Conserved, PipeState};

/// A per-pipe balance-law source `G(t, U)` in conservative components.
pub trait Source {
    fn evaluate(&self, pipe: usize, t: f64, state: &PipeState) -> Conserved;
}

/// The homogeneous case.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NoSource;

impl Source for NoSource {
    fn evaluate(&self, _pipe: usize, _t: f64, _state: &PipeState) -> Conserved {
        [0.0; 3]
    }
}

/// Wall friction `G = (0, -λ q|q| / (2 D ρ), 0)`; the energy equation gets no
/// source because friction heat stays in the gas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Friction {
    /// Darcy friction factor.
    pub lambda: f64,
    /// Pipe diameter in m.
    pub diameter: f64,
}

impl Source for Friction {
    fn evaluate(&self, _pipe: usize, _t: f64, state: &PipeState) -> Conserved {
        let q = state.q();
        [
            0.0,
            -self.lambda * q * abs(q) / (2.0 * self.diameter * state.rho()),
            0.0,
        ]
    }
}

/// Constant source vector, mainly for tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant(pub Conserved);

impl Source for Constant {
    fn evaluate(&self, _pipe: usize, _t: f64, _state: &PipeState) -> Conserved {
        self.0
    }
}

/// Exact uniform-state friction decay `q(t) = q0 / (1 + λ|q0| t / (2 D ρ))`.
pub fn friction_exact_flux(friction: &Friction, rho: f64, q0: f64, t: f64) -> f64 {
    q0 / (1.0 + friction.lambda * abs(q0) * t / (2.0 * friction.diameter * rho))
}
