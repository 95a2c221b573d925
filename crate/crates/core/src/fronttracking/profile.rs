use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::thermo::PipeState;

/// Piecewise-constant data on a half-line pipe: `states[0]` on
/// `[0, breakpoints[0])`, ..., the last state up to infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    breakpoints: Vec<f64>,
    states: Vec<PipeState>,
}

impl Profile {
    pub fn constant(state: PipeState) -> Self {
        Self {
            breakpoints: Vec::new(),
            states: alloc::vec![state],
        }
    }

    /// Builds a profile from `(x_right_edge, state)` pieces followed by the
    /// far-field state. Edges must be positive and strictly increasing.
    pub fn from_pieces(pieces: &[(f64, PipeState)], far: PipeState) -> Result<Self> {
        let mut breakpoints = Vec::with_capacity(pieces.len());
        let mut states = Vec::with_capacity(pieces.len() + 1);
        let mut last = 0.0;
        for &(x, s) in pieces {
            if !(x > last) || !x.is_finite() {
                return Err(Error::Problem(crate::error::ProblemError::Other(
                    alloc::format!("profile edges must be positive and increasing, got {x}"),
                )));
            }
            breakpoints.push(x);
            states.push(s);
            last = x;
        }
        states.push(far);
        Ok(Self {
            breakpoints,
            states,
        })
    }

    /// Midpoint sampling of `f` on `cells` equal cells covering `[0, length)`;
    /// the far field is `f(length)`.
    pub fn sample(f: impl Fn(f64) -> PipeState, length: f64, cells: usize) -> Self {
        let h = length / cells as f64;
        let breakpoints = (1..=cells).map(|k| k as f64 * h).collect();
        let mut states: Vec<PipeState> = (0..cells).map(|k| f((k as f64 + 0.5) * h)).collect();
        states.push(f(length));
        Self {
            breakpoints,
            states,
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn states(&self) -> &[PipeState] {
        &self.states
    }

    pub fn value_at(&self, x: f64) -> PipeState {
        let k = self.breakpoints.partition_point(|&b| b <= x);
        self.states[k]
    }

    /// Sum of conservative 1-norm jumps.
    pub fn total_variation(&self) -> f64 {
        self.states.windows(2).map(|w| w[0].distance(&w[1])).sum()
    }
}
