//! Report builders behind the command line interface.
//!
//! Each function takes a loaded [`Scenario`] and returns the finished
//! report as a string (JSON for `allocate`, CSV for `orders` and
//! `outage`), so the binary only handles argument parsing, file output
//! and exit codes, and tests can call the commands directly.

use serde::Serialize;

use crate::allocation::{
    diagnose, epsilon_upper_bound, oma_equivalent, proportional_strategy, AllocationDiagnostics,
    OmaEquivalentAllocation,
};
use crate::error::Result;
use crate::model::linear_to_db;
use crate::ordering::rank_orders;
use crate::outage::{
    noma_thresholds, oma_threshold, parse_xi_grid, sweep, write_csv, OutageThresholds,
};
use crate::scenario::{Scenario, Strategy};

/// Everything `allocate` reports about a scenario, serialized as JSON.
/// Infinite thresholds serialize as `null`; the sibling `certain_outage`
/// flag tells them apart from missing data.
#[derive(Debug, Serialize)]
pub struct AllocateReport {
    pub num_users: usize,
    pub transmit_snr_db: f64,
    /// Per-user targets, sorted into decoding order.
    pub target_rates: Vec<f64>,
    pub oma_fractions: Vec<f64>,
    pub normalized_rates: Vec<f64>,
    /// Position each decoding stage had in the scenario file.
    pub input_order: String,
    pub strategy: &'static str,
    /// Baseline that matches TDMA outage user by user.
    pub oma_equivalent: OmaEquivalentAllocation,
    /// Per-stage SINR surplus, when the strategy defines one.
    pub epsilons: Option<Vec<f64>>,
    /// Largest admissible surplus for users `2..K` given the surpluses
    /// granted before them.
    pub epsilon_upper_bounds: Option<Vec<f64>>,
    pub coefficients: Vec<f64>,
    pub interference: Vec<f64>,
    pub total_power: f64,
    pub diagnostics: AllocationDiagnostics,
    pub noma_thresholds: Vec<OutageThresholds>,
    pub oma_thresholds: Vec<f64>,
}

/// Builds the `allocate` report for a scenario.
pub fn cmd_allocate(scenario: &Scenario) -> Result<String> {
    let config = scenario.config();
    let k = config.num_users();
    let alloc = scenario.resolve_allocation()?;

    let epsilons: Option<Vec<f64>> = match scenario.strategy() {
        Strategy::OmaEquivalent => Some(vec![0.0; k]),
        Strategy::Proportional => Some(proportional_strategy(config).values().to_vec()),
        Strategy::Epsilons(e) => Some(e.clone()),
        Strategy::Coefficients(_) => None,
    };
    let epsilon_upper_bounds = match &epsilons {
        Some(eps) if k >= 2 => Some(
            (2..=k)
                .map(|n| epsilon_upper_bound(config, &eps[..n - 1], n))
                .collect::<Result<Vec<f64>>>()?,
        ),
        _ => None,
    };

    let report = AllocateReport {
        num_users: k,
        transmit_snr_db: linear_to_db(config.transmit_snr()),
        target_rates: config.target_rates().to_vec(),
        oma_fractions: config.oma_fractions().to_vec(),
        normalized_rates: config.normalized_rates().values().to_vec(),
        input_order: scenario.input_order().label(),
        strategy: scenario.strategy().name(),
        oma_equivalent: oma_equivalent(config),
        epsilons,
        epsilon_upper_bounds,
        coefficients: alloc.coefficients().to_vec(),
        interference: alloc.interference().to_vec(),
        total_power: alloc.total(),
        diagnostics: diagnose(&alloc, config)?,
        noma_thresholds: noma_thresholds(config, &alloc)?,
        oma_thresholds: (1..=k)
            .map(|n| oma_threshold(config, n))
            .collect::<Result<Vec<f64>>>()?,
    };
    Ok(serde_json::to_string_pretty(&report)?)
}

/// Builds the `orders` CSV: every decoding order, cheapest first.
pub fn cmd_orders(scenario: &Scenario, max_enumerate: usize) -> Result<String> {
    let reports = rank_orders(scenario.config(), max_enumerate)?;
    let mut out = String::from("order,total_power,feasible\n");
    for report in &reports {
        out.push_str(&format!(
            "{},{},{}\n",
            report.order.label(),
            report.total_power,
            report.is_feasible()
        ));
    }
    Ok(out)
}

/// Controls for the `outage` command.
#[derive(Debug, Clone)]
pub struct OutageOptions {
    /// Emit exact curves from the channel CDF.
    pub analytic: bool,
    /// Emit Monte Carlo estimates (per-user and per-stage).
    pub montecarlo: bool,
    /// Overrides the scenario's trial count.
    pub trials: Option<u64>,
    /// Overrides the scenario's seed.
    pub seed: Option<u64>,
    /// Overrides the scenario's SNR grid, as `start:stop:step` in dB.
    pub xi_grid_db: Option<String>,
    /// Worker thread cap; 0 uses the default pool.
    pub threads: usize,
}

/// Builds the `outage` CSV across the scenario's (or overridden) SNR grid.
pub fn cmd_outage(scenario: &Scenario, opts: &OutageOptions) -> Result<String> {
    if !opts.analytic && !opts.montecarlo {
        return Err(crate::error::Error::InvalidScenario(
            "outage needs --analytic, --montecarlo or both".into(),
        ));
    }
    let config = scenario.config();
    let alloc = scenario.resolve_allocation()?;
    let sim = scenario.simulation();
    let seed = opts.seed.unwrap_or(sim.seed);
    let trials = if opts.montecarlo { opts.trials.unwrap_or(sim.trials) } else { 0 };
    let grid = match &opts.xi_grid_db {
        Some(spec) => parse_xi_grid(spec)?,
        None => sim.grid_db.clone(),
    };
    let channel = scenario.channel_model(seed)?;

    let mut reports = sweep(config, &alloc, &channel, &grid, trials, seed, opts.threads)?;
    if !opts.analytic {
        for report in &mut reports {
            report.analytic_noma = None;
            report.analytic_oma = None;
        }
    }
    let mut bytes = Vec::new();
    write_csv(&mut bytes, &reports)?;
    Ok(String::from_utf8(bytes).expect("CSV output is ASCII"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn five_user_scenario() -> Scenario {
        Scenario::from_json_str(
            r#"{
                "target_rates": [0.5, 1.2, 0.9, 1.3, 1.1],
                "oma_fractions": [0.15, 0.30, 0.20, 0.20, 0.15],
                "transmit_snr_db": 30.0,
                "strategy": "proportional",
                "simulation": {"trials": 2000, "seed": 11, "xi_grid_db": "10:30:10"}
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn test_allocate_report_is_valid_json_with_expected_fields() {
        let report = cmd_allocate(&five_user_scenario()).unwrap();
        let value: serde_json::Value = serde_json::from_str(&report).unwrap();
        assert_eq!(value["num_users"], 5);
        assert_eq!(value["strategy"], "proportional");
        assert_eq!(value["input_order"], "1-2-3-4-5", "these users already sit in rate order");
        let total = value["total_power"].as_f64().unwrap();
        assert!((total - 1.0).abs() < 1e-12);
        assert_eq!(value["epsilons"].as_array().unwrap().len(), 5);
        assert_eq!(value["epsilon_upper_bounds"].as_array().unwrap().len(), 4);
        assert_eq!(value["noma_thresholds"].as_array().unwrap().len(), 5);
        let headroom = value["oma_equivalent"]["headroom"].as_f64().unwrap();
        assert!(headroom > 0.49 && headroom < 0.50);
    }

    #[test]
    fn test_allocate_sorts_users_by_normalized_rate() {
        let value: serde_json::Value =
            serde_json::from_str(&cmd_allocate(&five_user_scenario()).unwrap()).unwrap();
        let rates: Vec<f64> = value["normalized_rates"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_f64().unwrap())
            .collect();
        assert!(rates.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn test_allocate_explicit_coefficients_omit_epsilons() {
        let scenario = Scenario::from_json_str(
            r#"{
                "target_rates": [0.5, 1.0],
                "oma_fractions": [0.5, 0.5],
                "transmit_snr_db": 20.0,
                "strategy": {"explicit": {"coefficients": [0.3, 0.2]}}
            }"#,
        )
        .unwrap();
        let value: serde_json::Value =
            serde_json::from_str(&cmd_allocate(&scenario).unwrap()).unwrap();
        assert!(value["epsilons"].is_null());
        assert!(value["epsilon_upper_bounds"].is_null());
    }

    #[test]
    fn test_orders_csv_shape() {
        let scenario = Scenario::from_json_str(
            r#"{
                "target_rates": [0.5, 1.0, 1.5],
                "oma_fractions": [0.33, 0.33, 0.34],
                "transmit_snr_db": 30.0
            }"#,
        )
        .unwrap();
        let csv = cmd_orders(&scenario, 10).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "order,total_power,feasible");
        assert_eq!(lines.len(), 1 + 6);
        assert!(lines[1].starts_with("1-2-3,"), "canonical order is cheapest: {}", lines[1]);
        let totals: Vec<f64> = lines[1..]
            .iter()
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect();
        assert!(totals.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn test_orders_respects_enumeration_guard() {
        let scenario = five_user_scenario();
        assert!(matches!(
            cmd_orders(&scenario, 100),
            Err(Error::TooManyPermutations { count: 120 })
        ));
    }

    #[test]
    fn test_outage_requires_a_mode() {
        let opts = OutageOptions {
            analytic: false,
            montecarlo: false,
            trials: None,
            seed: None,
            xi_grid_db: None,
            threads: 0,
        };
        assert!(cmd_outage(&five_user_scenario(), &opts).is_err());
    }

    #[test]
    fn test_outage_analytic_only_has_no_mc_rows() {
        let opts = OutageOptions {
            analytic: true,
            montecarlo: false,
            trials: None,
            seed: None,
            xi_grid_db: None,
            threads: 0,
        };
        let csv = cmd_outage(&five_user_scenario(), &opts).unwrap();
        assert!(csv.contains("noma_analytic"));
        assert!(csv.contains("oma_analytic"));
        assert!(!csv.contains("_mc"));
        // 3 grid points, 5 users, 2 metrics.
        assert_eq!(csv.lines().count(), 1 + 3 * 5 * 2);
    }

    #[test]
    fn test_outage_montecarlo_only_has_no_analytic_rows() {
        let opts = OutageOptions {
            analytic: false,
            montecarlo: true,
            trials: Some(500),
            seed: None,
            xi_grid_db: Some("20:20:1".into()),
            threads: 1,
        };
        let csv = cmd_outage(&five_user_scenario(), &opts).unwrap();
        assert!(!csv.contains("analytic"));
        assert!(csv.contains("noma_mc"));
        assert!(csv.contains("stage_mc:5"));
        assert!(csv.lines().skip(1).all(|l| l.ends_with(",500,11")));
    }

    #[test]
    fn test_outage_overrides_take_effect() {
        let opts = OutageOptions {
            analytic: true,
            montecarlo: true,
            trials: Some(100),
            seed: Some(77),
            xi_grid_db: Some("0:10:5".into()),
            threads: 1,
        };
        let csv = cmd_outage(&five_user_scenario(), &opts).unwrap();
        let first = csv.lines().nth(1).unwrap();
        assert!(first.starts_with("0,1,noma_analytic,"));
        assert!(first.ends_with(",100,77"));
        let grid_points: std::collections::BTreeSet<&str> =
            csv.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
        assert_eq!(grid_points.into_iter().collect::<Vec<_>>(), vec!["0", "10", "5"]);
    }
}
