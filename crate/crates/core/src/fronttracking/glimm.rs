//! Glimm-type functionals of a front configuration.
//!
//! Waves moving toward the node carry weight `2 K_J` in `V`, waves moving
//! away (and non-physical fronts) weight one. `Q` sums `|v_a| |v_b|` over
//! approaching pairs in the same pipe; a non-physical front ranks above
//! every physical family.

use super::{Front, FrontKind, FrontTracker};
use crate::math::abs;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GlimmDiagnostics {
    pub v: f64,
    pub q: f64,
    /// `V + k_hat * Q`.
    pub y: f64,
    pub tv: f64,
    pub k_junction: f64,
    pub k_hat: f64,
}

fn rank(f: &Front, families: usize) -> usize {
    match f.kind {
        FrontKind::Physical { family, .. } => family,
        FrontKind::NonPhysical => families + 1,
    }
}

/// Whether `a` (left) and `b` (right) may still interact.
pub(crate) fn approaching(a: &Front, b: &Front, families: usize) -> bool {
    let (ra, rb) = (rank(a, families), rank(b, families));
    ra > rb || (ra == rb && (a.is_shock() || b.is_shock()))
}

pub(super) fn evaluate(tracker: &FrontTracker) -> GlimmDiagnostics {
    let k_j = tracker.k_junction;
    let mut v = 0.0;
    let mut q = 0.0;
    for (p, track) in tracker.tracks.iter().enumerate() {
        let toward = tracker.network.approaching_families(p);
        let families = tracker.network.pipes[p].model.families();
        for f in &track.fronts {
            let weight = match f.family() {
                Some(k) if toward.contains(&k) => 2.0 * k_j,
                _ => 1.0,
            };
            v += weight * abs(f.strength);
        }
        for (i, a) in track.fronts.iter().enumerate() {
            for b in &track.fronts[i + 1..] {
                if approaching(a, b, families) {
                    q += abs(a.strength) * abs(b.strength);
                }
            }
        }
    }
    GlimmDiagnostics {
        v,
        q,
        y: v + tracker.k_hat * q,
        tv: tracker.total_variation(),
        k_junction: k_j,
        k_hat: tracker.k_hat,
    }
}
