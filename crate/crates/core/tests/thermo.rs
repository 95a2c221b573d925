use gasnet_core::*;
use proptest::prelude::*;

fn gas() -> impl Strategy<Value = GasConstants> {
    (1.1f64..1.7, 100.0f64..600.0, 0.0f64..500.0)
        .prop_map(|(g, r, s0)| GasConstants::new(g, r, s0).unwrap())
}

fn iso_model() -> impl Strategy<Value = Model> {
    prop_oneof![Just(Model::M2), Just(Model::M3)]
}

proptest! {
    #[test]
    fn isentropic_entropy_round_trips(g in gas(), m in iso_model(), rho in 0.1f64..100.0, q in -50.0f64..50.0, kappa in 1e3f64..1e6) {
        let s = PipeState::iso(m, rho, q, kappa);
        let th = s.thermo_quantities(&g).unwrap();
        let back = ((th.s - g.s0) / g.cv).exp();
        prop_assert!((back - kappa).abs() <= 1e-12 * kappa);
    }

    #[test]
    fn polytropic_enthalpy_identity(g in gas(), rho in 0.1f64..100.0, u in -400.0f64..400.0, p in 1e4f64..1e7) {
        let s = PipeState::M1(EulerState::from_primitive(rho, u, p, &g));
        let th = s.thermo_quantities(&g).unwrap();
        let h = th.c * th.c / (g.gamma - 1.0) + 0.5 * u * u;
        prop_assert!((th.h - h).abs() <= 1e-12 * h);
    }

    #[test]
    fn subsonic_eigenvalues_increase(g in gas(), m in 0usize..3, rho in 0.5f64..2.0, frac in -0.95f64..0.95, p in 1e4f64..1e6) {
        let c = (g.gamma * p / rho).sqrt();
        let u = frac * c;
        let s = match m {
            0 => PipeState::M1(EulerState::from_primitive(rho, u, p, &g)),
            1 => PipeState::iso(Model::M2, rho, rho * u, p / rho.powf(g.gamma)),
            _ => PipeState::iso(Model::M3, rho, rho * u, p / rho.powf(g.gamma)),
        };
        let ev = s.eigenvalues(&g).unwrap();
        prop_assert!(ev.as_slice().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn classification_is_reflection_symmetric(g in gas(), m in 0usize..3, rho in 0.5f64..2.0, frac in -1.5f64..1.5, p in 1e4f64..1e6) {
        let c = (g.gamma * p / rho).sqrt();
        let u = frac * c;
        let s = match m {
            0 => PipeState::M1(EulerState::from_primitive(rho, u, p, &g)),
            1 => PipeState::iso(Model::M2, rho, rho * u, p / rho.powf(g.gamma)),
            _ => PipeState::iso(Model::M3, rho, rho * u, p / rho.powf(g.gamma)),
        };
        let mirrored = s.with_q(-s.q());
        match s.classify_subsonic(&g) {
            Subsonic::DPlus => prop_assert_eq!(mirrored.classify_subsonic(&g), Subsonic::DMinus),
            Subsonic::DMinus => prop_assert_eq!(mirrored.classify_subsonic(&g), Subsonic::DPlus),
            Subsonic::NotSubsonic => prop_assert_eq!(mirrored.classify_subsonic(&g), Subsonic::NotSubsonic),
        }
    }
}

#[test]
fn air_defaults() {
    let g = GasConstants::air();
    assert_eq!(g.gamma, 1.4);
    assert_eq!(g.r, 287.0);
    assert!((g.cp - g.cv - g.r).abs() < 1e-9);
}
