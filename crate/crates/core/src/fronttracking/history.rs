//! Space-time record of fronts and the weak-form residual computed from it.
//!
//! For a piecewise-constant solution with straight fronts, the weak integral
//! `∫∫ (U φ_t + F(U) φ_x) dx dt + ∫ F(U(0+, t)) φ(0, t) dt` against a test
//! function vanishing at `t = 0` reduces exactly to a sum over fronts of
//! `∫ φ(x(t), t) [(F_l - F_r) - s (U_l - U_r)] dt`.

use alloc::vec::Vec;

use crate::error::Result;
use crate::math::abs;
use crate::thermo::{Conserved, GasConstants, PipeState};

/// One front over the time interval it existed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub pipe: usize,
    pub t_start: f64,
    pub t_end: f64,
    pub x_start: f64,
    pub speed: f64,
    pub left: PipeState,
    pub right: PipeState,
    pub nonphysical: bool,
}

impl Segment {
    pub fn position(&self, t: f64) -> f64 {
        self.x_start + self.speed * (t - self.t_start)
    }
}

/// Separable bump `b((x - xc)/rx) * b((t - tc)/rt)` with `b(z) = (1 - z^2)^3`
/// on `|z| < 1`. It is `C^2` with compact support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunction {
    pub x_center: f64,
    pub x_radius: f64,
    pub t_center: f64,
    pub t_radius: f64,
}

fn bump(z: f64) -> f64 {
    if abs(z) >= 1.0 {
        0.0
    } else {
        let w = 1.0 - z * z;
        w * w * w
    }
}

fn dbump(z: f64) -> f64 {
    if abs(z) >= 1.0 {
        0.0
    } else {
        let w = 1.0 - z * z;
        -6.0 * z * w * w
    }
}

impl TestFunction {
    pub fn value(&self, x: f64, t: f64) -> f64 {
        bump((x - self.x_center) / self.x_radius) * bump((t - self.t_center) / self.t_radius)
    }

    pub fn dx(&self, x: f64, t: f64) -> f64 {
        dbump((x - self.x_center) / self.x_radius) / self.x_radius
            * bump((t - self.t_center) / self.t_radius)
    }

    pub fn dt(&self, x: f64, t: f64) -> f64 {
        bump((x - self.x_center) / self.x_radius) * dbump((t - self.t_center) / self.t_radius)
            / self.t_radius
    }

    /// `∫ φ(x0 + s (t - t0), t) dt` over `[ta, tb]`, exact for the
    /// polynomial pieces of the bump.
    fn line_integral(&self, ta: f64, tb: f64, x0: f64, t0: f64, s: f64) -> f64 {
        let mut lo = ta.max(self.t_center - self.t_radius);
        let mut hi = tb.min(self.t_center + self.t_radius);
        let (xl, xr) = (self.x_center - self.x_radius, self.x_center + self.x_radius);
        if s == 0.0 {
            if x0 <= xl || x0 >= xr {
                return 0.0;
            }
        } else {
            let a = t0 + (xl - x0) / s;
            let b = t0 + (xr - x0) / s;
            lo = lo.max(a.min(b));
            hi = hi.min(a.max(b));
        }
        if !(hi > lo) {
            return 0.0;
        }
        let mid = 0.5 * (hi + lo);
        let half = 0.5 * (hi - lo);
        GAUSS8
            .iter()
            .map(|&(node, w)| {
                let t = mid + half * node;
                w * self.value(x0 + s * (t - t0), t)
            })
            .sum::<f64>()
            * half
    }
}

const GAUSS8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (-0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
];

/// Weak-form residual of one pipe against one test function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakResidual {
    /// Componentwise residual (mass, momentum, energy).
    pub raw: Conserved,
    /// Largest component divided by `scale * t_radius`, where `scale` bounds
    /// `|U| + |F(U)|` over the run.
    pub normalized: f64,
}

pub fn weak_residual(
    segments: &[Segment],
    pipe: usize,
    test: &TestFunction,
    gas: &GasConstants,
) -> Result<WeakResidual> {
    let mut raw = [0.0; 3];
    let mut scale: f64 = 0.0;
    for seg in segments.iter().filter(|s| s.pipe == pipe) {
        let (ul, ur) = (seg.left.conserved(), seg.right.conserved());
        let (fl, fr) = (seg.left.flux(gas)?, seg.right.flux(gas)?);
        for k in 0..3 {
            scale = scale
                .max(abs(ul[k]) + abs(fl[k]))
                .max(abs(ur[k]) + abs(fr[k]));
        }
        let w = test.line_integral(seg.t_start, seg.t_end, seg.x_start, seg.t_start, seg.speed);
        if w == 0.0 {
            continue;
        }
        for k in 0..3 {
            raw[k] += w * ((fl[k] - fr[k]) - seg.speed * (ul[k] - ur[k]));
        }
    }
    let biggest = raw.iter().fold(0.0_f64, |m, v| m.max(abs(*v)));
    let normalized = if scale > 0.0 {
        biggest / (scale * test.t_radius)
    } else {
        0.0
    };
    Ok(WeakResidual { raw, normalized })
}

/// Recorded fronts of a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct History {
    pub segments: Vec<Segment>,
}
