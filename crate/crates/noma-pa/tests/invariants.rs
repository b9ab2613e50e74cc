//! Property tests for the allocation, ordering and outage machinery.

use proptest::prelude::*;

use noma_pa::allocation::{diagnose, general_allocation, oma_equivalent, proportional_strategy};
use noma_pa::channel::{cdf_model1, cdf_model2};
use noma_pa::ordering::{adjacent_swap_delta, allocation_for_order, rank_orders};
use noma_pa::outage::{noma_thresholds, oma_threshold, parse_xi_grid};
use noma_pa::{DecodingOrder, SystemConfig};

/// Systems with bounded normalized rates, `tau` normalized to sum to 1.
/// Rates are derived as `r * tau` so `R_n / tau_n` never exceeds `max_r`,
/// which keeps the SINR targets in a numerically honest range.
fn arb_config(max_users: usize, max_r: f64) -> impl Strategy<Value = SystemConfig> {
    (1..=max_users).prop_flat_map(move |k| {
        (
            proptest::collection::vec(0.2..max_r, k),
            proptest::collection::vec(0.05..1.0f64, k),
            1.0..10_000.0f64,
        )
            .prop_map(|(r, raw_tau, snr)| {
                let sum: f64 = raw_tau.iter().sum();
                let tau: Vec<f64> = raw_tau.iter().map(|t| t / sum).collect();
                let rates: Vec<f64> = r.iter().zip(&tau).map(|(r, t)| r * t).collect();
                SystemConfig::new(rates, tau, snr).expect("generated config is valid")
            })
    })
}

fn canonical(max_users: usize, max_r: f64) -> impl Strategy<Value = SystemConfig> {
    arb_config(max_users, max_r).prop_map(|c| c.canonicalize().0)
}

proptest! {
    #[test]
    fn canonicalize_sorts_and_is_idempotent(config in arb_config(8, 10.0)) {
        let (canon, order) = config.canonicalize();
        let r = canon.normalized_rates();
        prop_assert!(r.values().windows(2).all(|w| w[0] <= w[1]));

        let (again, second) = canon.canonicalize();
        prop_assert_eq!(&again, &canon);
        prop_assert!(second.is_identity());

        // The order is a valid permutation mapping stages back to inputs.
        let mut seen = vec![false; config.num_users()];
        for stage in 1..=config.num_users() {
            let source = order.user_at_stage(stage);
            prop_assert!(!seen[source - 1]);
            seen[source - 1] = true;
            prop_assert_eq!(
                canon.target_rates()[stage - 1],
                config.target_rates()[source - 1]
            );
        }
    }

    #[test]
    fn oma_equivalent_fits_the_budget_with_positive_coefficients(
        config in canonical(8, 10.0)
    ) {
        let base = oma_equivalent(&config);
        prop_assert!(base.coefficients.iter().all(|&a| a > 0.0));
        prop_assert!(base.total <= 1.0 + 1e-9, "total {} exceeds budget", base.total);
        prop_assert!((base.total + base.headroom - 1.0).abs() < 1e-12);

        // Interference terms are the suffix sums of the coefficients.
        let alloc = base.to_power_allocation().unwrap();
        for n in 0..config.num_users() {
            let suffix: f64 = alloc.coefficients()[n + 1..].iter().sum();
            prop_assert!((alloc.interference()[n] - suffix).abs() <= 1e-12);
        }
    }

    #[test]
    fn oma_equivalent_margins_are_positive_and_ceilings_respected(
        config in canonical(8, 10.0)
    ) {
        let alloc = oma_equivalent(&config).to_power_allocation().unwrap();
        let report = diagnose(&alloc, &config).unwrap();
        prop_assert!(report.margin_positive.iter().all(|&ok| ok));
        prop_assert!(report.no_certain_outage());
        prop_assert!(report.is_wellbehaved());
    }

    #[test]
    fn proportional_spends_budget_and_stays_wellbehaved(config in canonical(8, 10.0)) {
        let grants = proportional_strategy(&config);
        prop_assert!(grants.values().iter().all(|&e| e >= 0.0));
        let alloc = general_allocation(&config, &grants).unwrap();
        let report = diagnose(&alloc, &config).unwrap();
        prop_assert!(report.is_wellbehaved());
        prop_assert!(report.no_certain_outage());
        prop_assert!(report.margin_positive.iter().all(|&ok| ok));

        let headroom = oma_equivalent(&config).headroom;
        if headroom > 1e-9 {
            prop_assert!((alloc.total() - 1.0).abs() < 1e-9,
                "positive headroom must be spent in full, total {}", alloc.total());
        }
    }

    #[test]
    fn noma_thresholds_never_exceed_oma(config in canonical(8, 10.0)) {
        for alloc in [
            oma_equivalent(&config).to_power_allocation().unwrap(),
            general_allocation(&config, &proportional_strategy(&config)).unwrap(),
        ] {
            let thresholds = noma_thresholds(&config, &alloc).unwrap();
            for t in &thresholds {
                let reference = oma_threshold(&config, t.user).unwrap();
                prop_assert!(t.effective <= reference * (1.0 + 1e-9),
                    "user {}: {} > {}", t.user, t.effective, reference);
            }
        }
    }

    #[test]
    fn wellbehaved_chains_decode_hardest_stage_last(config in canonical(8, 10.0)) {
        let alloc = general_allocation(&config, &proportional_strategy(&config)).unwrap();
        let thresholds = noma_thresholds(&config, &alloc).unwrap();
        let last = thresholds.last().unwrap();
        prop_assert!(last.stage_thresholds.windows(2).all(|w| w[0] <= w[1] * (1.0 + 1e-12)));
    }

    #[test]
    fn canonical_order_is_cheapest(config in canonical(5, 10.0)) {
        let ranked = rank_orders(&config, 120).unwrap();
        let identity_total = allocation_for_order(
            &config,
            &DecodingOrder::identity(config.num_users()),
        )
        .unwrap()
        .total_power;
        prop_assert!(ranked[0].total_power <= identity_total * (1.0 + 1e-12));
        // The identity is always among the minimizers; for distinct
        // normalized rates it is the unique one.
        let r = config.normalized_rates();
        let distinct = r.values().windows(2).all(|w| w[1] - w[0] > 1e-9 * w[1].abs());
        if distinct {
            prop_assert!(ranked[0].order.is_identity());
        }
    }

    #[test]
    fn swap_descent_reaches_canonical_order(config in canonical(5, 10.0)) {
        let k = config.num_users();
        let mut order = DecodingOrder::new((1..=k).rev().collect()).unwrap();
        let bound = k * (k.max(1) - 1) / 2;
        let mut swaps = 0;
        loop {
            let mut improved = false;
            for stage in 1..k {
                if adjacent_swap_delta(&config, &order, stage).unwrap() > 0.0 {
                    let mut p = order.as_slice().to_vec();
                    p.swap(stage - 1, stage);
                    order = DecodingOrder::new(p).unwrap();
                    swaps += 1;
                    improved = true;
                    break;
                }
            }
            if !improved {
                break;
            }
            prop_assert!(swaps <= bound, "descent exceeded the bubble-sort bound");
        }
        let final_total = allocation_for_order(&config, &order).unwrap().total_power;
        let best = rank_orders(&config, 120).unwrap()[0].total_power;
        prop_assert!((final_total - best).abs() <= 1e-12 * best.max(1.0));
    }

    #[test]
    fn ordered_gain_cdf_is_monotone_and_bounded(
        num_users in 1usize..6,
        n_raw in 0usize..6,
        t1 in 0.0..20.0f64,
        dt in 0.0..5.0f64,
    ) {
        let n = n_raw % num_users + 1;
        let lo = cdf_model1(t1, n, num_users);
        let hi = cdf_model1(t1 + dt, n, num_users);
        prop_assert!((0.0..=1.0).contains(&lo));
        prop_assert!((0.0..=1.0).contains(&hi));
        prop_assert!(lo <= hi + 1e-15);
        // Lower-ranked users hold smaller gains, so they fall below any
        // threshold at least as often.
        if n > 1 {
            prop_assert!(cdf_model1(t1, n - 1, num_users) >= lo - 1e-15);
        }
    }

    #[test]
    fn erlang_cdf_is_monotone_and_bounded(
        shape in 1usize..6,
        scale in 0.1..5.0f64,
        t1 in 0.0..30.0f64,
        dt in 0.0..10.0f64,
    ) {
        let lo = cdf_model2(t1, shape, scale);
        let hi = cdf_model2(t1 + dt, shape, scale);
        prop_assert!((0.0..=1.0).contains(&lo));
        prop_assert!((0.0..=1.0).contains(&hi));
        prop_assert!(lo <= hi + 1e-15);
    }

    #[test]
    fn xi_grid_covers_the_requested_range(
        start in -20.0..20.0f64,
        span in 0.0..50.0f64,
        step in 0.5..10.0f64,
    ) {
        let stop = start + span;
        let grid = parse_xi_grid(&format!("{start}:{stop}:{step}")).unwrap();
        prop_assert!(!grid.is_empty());
        prop_assert_eq!(grid[0], start);
        prop_assert!(grid.windows(2).all(|w| (w[1] - w[0] - step).abs() < 1e-9));
        prop_assert!(*grid.last().unwrap() <= stop + 1e-9);
        prop_assert!(stop - grid.last().unwrap() < step);
    }
}
