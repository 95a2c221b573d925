use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::junction::{Orientation, PipeSpec};
use crate::thermo::GasConstants;

fn gas() -> GasConstants {
    GasConstants::new(1.4, 1.0, 0.0).unwrap()
}

fn m3(rho: f64, q: f64) -> PipeState {
    PipeState::iso(Model::M3, rho, q, 1.0)
}

fn pass_through() -> Network {
    Network::junction(
        gas(),
        vec![
            PipeSpec::new(1.0, Model::M3, Orientation::Incoming),
            PipeSpec::new(1.0, Model::M3, Orientation::Outgoing),
        ],
    )
}

fn tracker(outgoing: Profile, incoming: Profile, config: TrackerConfig) -> FrontTracker {
    FrontTracker::new(pass_through(), vec![incoming, outgoing], config).unwrap()
}

#[test]
fn equilibrium_data_produce_no_fronts() {
    let mut tr = tracker(
        Profile::constant(m3(1.0, 0.3)),
        Profile::constant(m3(1.0, -0.3)),
        TrackerConfig::default(),
    );
    assert_eq!(tr.front_count(), 0);
    assert_eq!(tr.next_event_time(), f64::INFINITY);
    assert_eq!(tr.advance(f64::INFINITY), Err(Error::EventStarvation));
    assert_eq!(tr.run_until(5.0).unwrap(), 0);
    assert_eq!(tr.time(), 5.0);
    let gl = tr.glimm();
    assert_eq!((gl.v, gl.q, gl.y, gl.tv), (0.0, 0.0, 0.0, 0.0));
}

#[test]
fn interior_jump_in_m3_pipe_is_sliced() {
    let g = gas();
    let left = m3(1.0, 0.3);
    let right = m3(1.1, 0.2);
    let eps = 0.01;
    let tr = tracker(
        Profile::from_pieces(&[(1.0, left)], right).unwrap(),
        Profile::constant(m3(1.0, -0.3)),
        TrackerConfig::with_epsilon(eps),
    );
    let fronts = tr.tracks()[1].fronts();
    let strengths = crate::waves::riemann_strengths(&left, &right, &g, 1e-13).unwrap();
    let groups: Vec<usize> = fronts.iter().filter_map(|f| f.family()).collect();
    assert!(groups.windows(2).all(|w| w[0] <= w[1]), "families in order");
    for (family, v) in strengths {
        let n = fronts.iter().filter(|f| f.family() == Some(family)).count();
        let want = if is_shock(Model::M3, family, v) {
            1
        } else {
            libm::ceil(v.abs() / eps) as usize
        };
        assert_eq!(n, want, "family {family}");
    }
    assert!(fronts
        .iter()
        .all(|f| f.is_shock() || f.strength.abs() <= eps * (1.0 + 1e-12)));
    assert_eq!(tr.tracks()[1].far_field(), right);
}

#[test]
fn approaching_shocks_collide_at_kinematic_time() {
    let g = gas();
    let a = m3(1.0, 0.3);
    let b = crate::waves::forward(&a, 2, -0.05, &g).unwrap();
    let c = crate::waves::forward(&b, 1, 0.05, &g).unwrap();
    let tr = tracker(
        Profile::from_pieces(&[(1.0, a), (1.5, b)], c).unwrap(),
        Profile::constant(m3(1.0, -0.3)),
        TrackerConfig::default(),
    );
    let f = tr.tracks()[1].fronts();
    assert_eq!(f.len(), 2);
    assert!(f[0].is_shock() && f[1].is_shock());
    let closing = f[0].speed - f[1].speed;
    assert!(closing > 0.0);
    let want = 0.5 / closing;
    assert!((tr.next_event_time() - want).abs() < 1e-12 * want);
    let gl = tr.glimm();
    assert!((gl.q - 0.05 * 0.05).abs() < 1e-15);
    // outgoing 2-shock weight 1, 1-shock approaches the node
    assert!((gl.v - (0.05 + 2.0 * tr.k_junction() * 0.05)).abs() < 1e-14);
}

#[test]
fn junction_hit_matches_direct_resolve() {
    let g = gas();
    let a = m3(1.0, -0.3);
    let b = crate::waves::forward(&a, 1, 0.01, &g).unwrap();
    let mut tr = tracker(
        Profile::constant(m3(1.0, 0.3)),
        Profile::from_pieces(&[(0.5, a)], b).unwrap(),
        TrackerConfig::default(),
    );
    assert_eq!(tr.tracks()[0].fronts().len(), 1);
    let other = tr.traces()[1];
    let t = tr.advance(10.0).unwrap().unwrap();
    assert!(t > 0.0);
    assert!(matches!(
        tr.events()[0].kind,
        EventKind::Junction {
            pipe: 0,
            simplified: false,
            ..
        }
    ));
    let direct = tr
        .network()
        .solve(&[b, other], &JunctionOptions::default())
        .unwrap();
    for (got, want) in tr.traces().iter().zip(&direct.star_states) {
        assert!(got.distance(want) < 1e-12);
    }
    // transmitted wave in the outgoing pipe, reflected wave in the incoming one
    assert_eq!(tr.tracks()[1].fronts().len(), 1);
    assert_eq!(tr.tracks()[0].fronts().len(), 1);
    assert!(tr.stats().max_junction_ratio <= tr.k_junction());
}

#[test]
fn weak_wave_is_reflected_as_nonphysical_front() {
    let g = gas();
    let a = m3(1.0, -0.3);
    let b = crate::waves::forward(&a, 1, 0.01, &g).unwrap();
    let mut tr = tracker(
        Profile::constant(m3(1.0, 0.3)),
        Profile::from_pieces(&[(0.5, a)], b).unwrap(),
        TrackerConfig {
            simplify_threshold: Some(0.02),
            ..TrackerConfig::default()
        },
    );
    tr.advance(10.0).unwrap().unwrap();
    assert_eq!(
        tr.tracks()[1].fronts().len(),
        0,
        "no wave in the other pipe"
    );
    let f = tr.tracks()[0].fronts();
    assert_eq!(f.len(), 1);
    assert!(f[0].is_nonphysical());
    assert_eq!(f[0].speed, tr.np_speed() * (f[0].speed / tr.np_speed()));
    assert_eq!(tr.traces()[0], a);
}

#[test]
fn simplified_merge_of_same_family_shocks() {
    let g = gas();
    let a = m3(1.0, 0.3);
    let b = crate::waves::forward(&a, 2, -0.03, &g).unwrap();
    let c = crate::waves::forward(&b, 2, -0.02, &g).unwrap();
    let mut tr = tracker(
        Profile::from_pieces(&[(1.0, a), (1.3, b)], c).unwrap(),
        Profile::constant(m3(1.0, -0.3)),
        TrackerConfig {
            simplify_threshold: Some(1.0),
            ..TrackerConfig::default()
        },
    );
    tr.advance(100.0).unwrap().unwrap();
    let f = tr.tracks()[1].fronts();
    assert_eq!(f.len(), 2);
    assert_eq!(f[0].family(), Some(2));
    assert!((f[0].strength + 0.05).abs() < 1e-9);
    assert!(f[1].is_nonphysical());
    let mid = tr.tracks()[1].states()[1];
    let defect = crate::waves::total_strength(&mid, &c, &g, 1e-13).unwrap();
    assert!((f[1].strength - defect).abs() < 1e-10);
    assert!(defect > 0.0 && defect < 0.03 * 0.02 * 10.0);
}

#[test]
fn nonphysical_front_passes_through_unchanged_strength() {
    let g = gas();
    let a = m3(1.0, -0.3);
    let b = crate::waves::forward(&a, 1, 0.01, &g).unwrap();
    let c = crate::waves::forward(&b, 2, -0.02, &g).unwrap();
    let mut tr = tracker(
        Profile::constant(m3(1.0, 0.3)),
        Profile::from_pieces(&[(0.5, a), (0.6, b)], c).unwrap(),
        TrackerConfig {
            simplify_threshold: Some(0.015),
            ..TrackerConfig::default()
        },
    );
    tr.advance(100.0).unwrap();
    tr.advance(100.0).unwrap();
    let kinds: Vec<_> = tr.events().iter().map(|e| e.kind).collect();
    assert!(matches!(
        kinds[0],
        EventKind::Junction {
            pipe: 0,
            simplified: true,
            ..
        }
    ));
    assert!(matches!(
        kinds[1],
        EventKind::Collision {
            pipe: 0,
            simplified: true
        }
    ));
    let f = tr.tracks()[0].fronts();
    assert_eq!(f.len(), 2);
    assert_eq!(f[0].family(), Some(2));
    assert!((f[0].strength + 0.02).abs() < 1e-9);
    assert!(f[1].is_nonphysical());
    assert_eq!(tr.tracks()[0].far_field(), c);
}

#[test]
fn split_step_without_source_equals_homogeneous_run() {
    let g = gas();
    let a = m3(1.0, 0.3);
    let b = m3(1.05, 0.25);
    let make = || {
        tracker(
            Profile::from_pieces(&[(0.4, a)], b).unwrap(),
            Profile::from_pieces(&[(0.3, m3(1.0, -0.3))], m3(0.97, -0.28)).unwrap(),
            TrackerConfig::with_epsilon(0.01),
        )
    };
    let mut plain = make();
    let mut split = make();
    plain.run_until(1.0).unwrap();
    for _ in 0..10 {
        split.split_step(&NoSource, 0.1).unwrap();
    }
    split.run_until(1.0).unwrap();
    assert_eq!(plain.tracks(), split.tracks());
    let _ = g;
}

#[test]
fn constant_source_is_an_euler_step_on_constant_states() {
    let mut tr = tracker(
        Profile::constant(m3(1.0, 0.3)),
        Profile::constant(m3(1.0, -0.3)),
        TrackerConfig::default(),
    );
    tr.split_step(&Constant([0.01, 0.02, 0.0]), 0.5).unwrap();
    let far = tr.tracks()[1].far_field();
    assert!((far.rho() - 1.005).abs() < 1e-15);
    assert!((far.q() - 0.31).abs() < 1e-15);
}

#[test]
fn friction_decreases_flux_at_constant_density() {
    let fr = Friction {
        lambda: 0.02,
        diameter: 0.5,
    };
    let mut tr = tracker(
        Profile::constant(m3(1.0, 0.3)),
        Profile::constant(m3(1.0, -0.3)),
        TrackerConfig::default(),
    );
    let mut last = 0.3;
    for _ in 0..20 {
        tr.split_step(&fr, 0.05).unwrap();
        let far = tr.tracks()[1].far_field();
        assert_eq!(far.rho(), 1.0);
        assert!(far.q() < last);
        last = far.q();
    }
    let exact = friction_exact_flux(&fr, 1.0, 0.3, 1.0);
    assert!((last - exact).abs() < 1e-3);
}

#[test]
fn weak_residual_is_small_for_a_tracked_solution() {
    let mut tr = tracker(
        Profile::from_pieces(&[(0.4, m3(1.0, 0.3))], m3(1.05, 0.25)).unwrap(),
        Profile::constant(m3(1.0, -0.3)),
        TrackerConfig {
            record_history: true,
            ..TrackerConfig::with_epsilon(0.005)
        },
    );
    tr.run_until(1.0).unwrap();
    let test = TestFunction {
        x_center: 0.5,
        x_radius: 0.4,
        t_center: 0.5,
        t_radius: 0.3,
    };
    let r = tr.weak_residual(1, &test).unwrap();
    assert!(r.normalized < 10.0 * tr.epsilon(), "{r:?}");
}
