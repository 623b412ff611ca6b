//! Randomized property suites for the module invariants: tail/φ shape,
//! Esscher identities, special-function identities, scale-function shape and
//! Monte Carlo determinism.

use proptest::prelude::*;

use ou_ruin::backward::BackwardExponent;
use ou_ruin::mc::{self, SimConfig};
use ou_ruin::scale;
use ou_ruin::special;
use ou_ruin::transform::WFamily;
use ou_ruin::{LevyModel, SeriesControl};

fn arb_model() -> impl Strategy<Value = LevyModel> {
    prop_oneof![
        (0.1f64..3.0, 0.2f64..3.0)
            .prop_map(|(eta, delta)| LevyModel::exponential_jumps(eta, delta).unwrap()),
        (0.1f64..3.0, 0.2f64..3.0, 0.15f64..1.0)
            .prop_map(|(eta, delta, alpha)| LevyModel::linnik(eta, delta, alpha).unwrap()),
        (0.15f64..0.9).prop_map(|alpha| LevyModel::stable(alpha).unwrap()),
        (0.2f64..3.0, 0.3f64..4.0, 0.15f64..0.9)
            .prop_map(|(c, a, alpha)| LevyModel::truncated_stable(c, a, alpha).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tail_nonincreasing_and_nonnegative(model in arb_model(), x1 in 0.01f64..20.0, dx in 0.0f64..10.0) {
        let t1 = model.tail(x1).unwrap();
        let t2 = model.tail(x1 + dx).unwrap();
        prop_assert!(t1 >= 0.0 && t2 >= 0.0);
        prop_assert!(t2 <= t1 + 1e-12 * t1.abs().max(1.0));
    }

    #[test]
    fn phi_nondecreasing_and_concave(model in arb_model(), b1 in 0.01f64..8.0, db in 0.01f64..8.0) {
        let lo = model.phi(b1).unwrap();
        let hi = model.phi(b1 + db).unwrap();
        prop_assert!(lo >= 0.0 && hi >= lo - 1e-12 * hi.max(1.0));
        let mid = model.phi(b1 + 0.5 * db).unwrap();
        prop_assert!(mid >= 0.5 * (lo + hi) - 1e-12 * mid.max(1.0));
    }

    #[test]
    fn esscher_tail_identity(model in arb_model(), gamma in 0.01f64..2.0, x in 0.01f64..10.0) {
        let tilted = model.clone().esscher(gamma).unwrap();
        let expect = (-gamma * x).exp() * model.tail(x).unwrap();
        prop_assert_eq!(tilted.tail(x).unwrap(), expect);
    }

    #[test]
    fn esscher_shift_identity(gamma in 0.05f64..3.0, beta in 0.0f64..6.0) {
        // |phi_r(beta+gamma) - phi_r(gamma) - phi_r^{(gamma)}(beta)| <= 1e-10.
        let model = LevyModel::truncated_stable(1.0, 1.0, 0.5).unwrap();
        let be = BackwardExponent::new(model.clone(), 0.2).unwrap();
        let tilted = BackwardExponent::new(model.esscher(gamma).unwrap(), 0.2).unwrap();
        let lhs = be.esscher_shift(gamma, beta).unwrap();
        let rhs = tilted.varphi_r(beta).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10);
    }

    #[test]
    fn kummer_transform_identity(a in -1.5f64..2.5, b in 0.3f64..4.0, y in 0.05f64..10.0) {
        let ctl = SeriesControl::default();
        let lhs = (-y).exp() * special::kummer_1f1(a, b, y, &ctl).unwrap();
        let rhs = special::kummer_1f1(b - a, b, -y, &ctl).unwrap();
        let scale = lhs.abs().max(rhs.abs()).max(1e-30);
        prop_assert!((lhs - rhs).abs() / scale < 1e-9);
    }

    #[test]
    fn stable_cdf_shape(alpha in 0.15f64..0.9, x in 0.01f64..50.0, dx in 0.0f64..10.0) {
        let lo = special::stable_cdf(alpha, x).unwrap();
        let hi = special::stable_cdf(alpha, x + dx).unwrap();
        prop_assert!((0.0..=1.0).contains(&lo));
        prop_assert!(hi >= lo - 1e-9);
    }

    #[test]
    fn gamma_cdf_shape(shape in 0.2f64..6.0, scale_p in 0.2f64..4.0, x in 0.0f64..30.0, dx in 0.0f64..10.0) {
        let lo = special::gamma_cdf(shape, scale_p, x).unwrap();
        let hi = special::gamma_cdf(shape, scale_p, x + dx).unwrap();
        prop_assert!((0.0..=1.0).contains(&lo));
        prop_assert!(hi >= lo - 1e-13);
    }

    #[test]
    fn scale_ratio_shape(q in 0.0f64..4.0, x in 0.0f64..7.9, dx in 0.0f64..2.0) {
        // Closed-form W = Gamma(2,1) CDF surrogate.
        let h = 0.02;
        let m = 400usize;
        let w: Vec<f64> = (0..=m)
            .map(|i| special::gamma_cdf(2.0, 1.0, i as f64 * h).unwrap())
            .collect();
        let wf = WFamily::from_tabulated(h, w, LevyModel::exponential_jumps(0.4, 1.0).unwrap(), 0.2)
            .unwrap();
        let sf = scale::fractional_integral_w(&wf, q).unwrap();
        let a = 8.0;
        let lo = scale::exit_upward_lt(&sf, x, a).unwrap();
        let hi = scale::exit_upward_lt(&sf, (x + dx).min(a), a).unwrap();
        prop_assert!((0.0..=1.0).contains(&lo));
        prop_assert!(hi >= lo - 1e-12);
    }

    #[test]
    fn mc_determinism(seed in any::<u64>(), x in 0.5f64..4.0) {
        let model = LevyModel::exponential_jumps(0.4, 1.0).unwrap();
        let cfg = SimConfig::new(300, 4.0, seed).unwrap();
        let a = mc::estimate_finite_time_ruin(&model, 0.2, 0.0, x, 4.0, &cfg).unwrap();
        let b = mc::estimate_finite_time_ruin(&model, 0.2, 0.0, x, 4.0, &cfg).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn mc_paths_respect_barrier_irreversibility(seed in any::<u64>()) {
        let model = LevyModel::exponential_jumps(1.2, 0.9).unwrap();
        let cfg = SimConfig::new(1, 30.0, seed).unwrap();
        let events = mc::simulate_risk_path(&model, 0.2, 0.1, 0.6, 0, &cfg).unwrap();
        // At most one terminal event; nothing follows a ruin event.
        if let Some(pos) = events.iter().position(|e| e.kind == mc::EventKind::Ruin) {
            prop_assert_eq!(pos, events.len() - 1);
        }
        let horizons = events.iter().filter(|e| e.kind == mc::EventKind::Horizon).count();
        prop_assert!(horizons <= 1);
    }
}
