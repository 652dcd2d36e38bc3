//! Randomized invariant checks over the parameter space.

use plenoptic::codec::{design_ecsq, pareto_front, SweepPoint};
use plenoptic::detect::{estimate_pe, fano_term, DetectModel, DetectorKind};
use plenoptic::entropy::{
    binary_entropy, bsc_step_lower, catalan_sum_identity_check, conditional_bound_memory,
    dynamic_bound_memory_bsc, dynamic_cond_rate_bsc, static_bounds, static_step_lower,
};
use plenoptic::oracle::{exact_conditional_sequence, exact_pe, EnumerationBudget};
use plenoptic::rd::{blahut_arimoto, rx_bernoulli, BaTarget};
use plenoptic::reality::{BscFieldSpec, StaticWallSpec};
use plenoptic::walk::WalkParams;
use proptest::prelude::*;

proptest! {
    #[test]
    fn static_bound_pair_is_ordered(
        p_w in 0.0f64..=0.5,
        h_x in 0.0f64..16.0,
        pe in 0.0f64..=0.5,
    ) {
        let report = static_bounds(WalkParams::new(p_w).unwrap(), h_x, fano_term(pe));
        prop_assert!(report.lower >= 0.0);
        prop_assert!(report.lower <= report.upper + 1e-12);
        prop_assert!(report.upper <= h_x + 1.0 + 1e-12);
    }

    #[test]
    fn memory_bound_nonincreasing(p_w in 0.0f64..=0.5, h_x in 0.0f64..16.0) {
        let walk = WalkParams::new(p_w).unwrap();
        let mut prev = f64::INFINITY;
        for m in [1u64, 2, 3, 5, 9, 17, 65, 257] {
            let b = conditional_bound_memory(walk, h_x, m);
            prop_assert!(b <= prev + 1e-12);
            prev = b;
        }
    }

    #[test]
    fn bsc_rate_series_mass_is_bounded(
        p_w in 0.01f64..=0.5,
        p_i in 0.001f64..=0.5,
        l in 2usize..12,
    ) {
        let walk = WalkParams::new(p_w).unwrap();
        let rate = dynamic_cond_rate_bsc(walk, p_i, l, 1e-9).unwrap().value;
        let base = (1.0 - 2.0 * p_w) + (l as f64 - 1.0) * binary_entropy(p_i);
        // the recurrence series carries total mass 2 p_w, each term <= 1 bit
        prop_assert!(rate >= base - 1e-9);
        prop_assert!(rate <= base + 2.0 * p_w + 1e-9);
    }

    #[test]
    fn catalan_identity_holds_everywhere(
        p_w in 0.0f64..=0.5,
        rho in 0.01f64..=0.995,
    ) {
        let residual = catalan_sum_identity_check(WalkParams::new(p_w).unwrap(), rho, 1e-10)
            .unwrap();
        prop_assert!(residual.abs() <= 1e-8);
    }

    #[test]
    fn ba_matches_binary_closed_form(p in 0.15f64..=0.5, frac in 0.05f64..=0.9) {
        let d = frac * p.min(1.0 - p);
        let point = blahut_arimoto(
            &[1.0 - p, p],
            &[vec![0.0, 1.0], vec![1.0, 0.0]],
            BaTarget::Distortion(d),
        ).unwrap();
        prop_assert!((point.rate - rx_bernoulli(p, d)).abs() <= 2e-4);
    }

    #[test]
    fn pareto_front_is_monotone(points in prop::collection::vec((0.1f64..5.0, -5.0f64..40.0), 1..20)) {
        let sweep: Vec<SweepPoint> = points
            .iter()
            .map(|&(rate, snr_db)| SweepPoint {
                lambda: 1.0,
                rate,
                snr_db,
                snr_ci95: 0.0,
                mse: 1.0,
            })
            .collect();
        let front = pareto_front(&sweep);
        prop_assert!(!front.is_empty());
        for w in front.windows(2) {
            prop_assert!(w[1].rate >= w[0].rate);
            prop_assert!(w[1].snr_db > w[0].snr_db);
        }
    }

    #[test]
    fn ecsq_cells_are_cost_optimal(
        seed in 0u64..1000,
        lambda in 0.001f64..1.0,
    ) {
        use rand::Rng;
        let mut rng = plenoptic::seed::rng(seed);
        let data: Vec<f64> = (0..2000).map(|_| rng.random::<f64>() * 6.0 - 3.0).collect();
        let q = design_ecsq(&data, lambda, 16).unwrap();
        for &x in data.iter().step_by(59) {
            let idx = q.quantize(x);
            let cost = |i: usize| {
                let e = x - q.levels()[i];
                e * e + lambda * q.lengths()[i]
            };
            let best = (0..q.levels().len())
                .map(cost)
                .fold(f64::INFINITY, f64::min);
            prop_assert!(cost(idx) <= best + 1e-9);
        }
    }

    #[test]
    fn detection_estimates_replay(seed in 0u64..500, p_w in 0.05f64..=0.5) {
        let walk = WalkParams::new(p_w).unwrap();
        let model = DetectModel::Bsc(BscFieldSpec::new(0.5, 0.05).unwrap());
        let a = estimate_pe(walk, &model, 4, DetectorKind::Hamming, 500, seed).unwrap();
        let b = estimate_pe(walk, &model, 4, DetectorKind::Hamming, 500, seed).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(a.p_e_hat <= 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // the exact enumeration is the ground truth: closed-form bounds must
    // bracket it for any tiny configuration
    #[test]
    fn oracle_sandwich_random_configs(
        p_w in 0.05f64..=0.5,
        l in 2usize..=3,
        bsc in proptest::option::of(0.01f64..=0.4),
    ) {
        let walk = WalkParams::new(p_w).unwrap();
        let budget = EnumerationBudget::default();
        let model = match bsc {
            None => DetectModel::Static(StaticWallSpec::bernoulli(0.5).unwrap()),
            Some(p_i) => DetectModel::Bsc(BscFieldSpec::new(0.5, p_i).unwrap()),
        };
        let fano = fano_term(exact_pe(walk, &model, l, budget).unwrap());
        let conds = exact_conditional_sequence(walk, &model, l, 3, budget).unwrap();
        for (i, &cond) in conds.iter().enumerate() {
            let t = (i + 1) as u64;
            let (lower, upper) = match bsc {
                None => (
                    static_step_lower(walk, 1.0, t, fano),
                    conditional_bound_memory(walk, 1.0, t),
                ),
                Some(p_i) => (
                    bsc_step_lower(walk, p_i, l, t, fano),
                    dynamic_bound_memory_bsc(walk, p_i, l, t),
                ),
            };
            prop_assert!(lower <= cond + 1e-9, "lower {lower} > exact {cond}");
            prop_assert!(cond <= upper + 1e-9, "exact {cond} > upper {upper}");
        }
    }
}
