//! Outage thresholds, analytic outage curves and the Monte Carlo engine.
//!
//! User `n` decodes signals `1..n` in turn; decoding signal `m` succeeds
//! when the received gain clears the stage threshold
//!
//! ```text
//! T_m = (2^{R_m} - 1) / (xi * (a_m - (2^{R_m} - 1) A_m))
//! ```
//!
//! which does not depend on who is decoding, only on the stage. A stage
//! with nonpositive decoding margin gets an infinite threshold: it fails
//! for every channel realization. User `n` is in outage exactly when its
//! gain falls below the largest of its first `n` stage thresholds, so one
//! effective threshold per user captures the whole SIC chain.
//!
//! The Monte Carlo engine draws each trial from its own counter-indexed
//! random stream ([`crate::channel::trial_rng`]) and reduces plain event
//! counts, so a simulation's output is a pure function of `(seed, trials)`
//! no matter how many worker threads participate.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::allocation::{oma_sinr_targets, stage_sinr_targets};
use crate::channel::{trial_rng, ChannelModel};
use crate::error::{Error, Result};
use crate::model::{linear_to_db, PowerAllocation, SystemConfig};

/// Default Monte Carlo sample size.
pub const DEFAULT_TRIALS: u64 = 1_000_000;

/// Trials per work unit. Fixed, so the trial-to-chunk assignment (and with
/// it the output) is independent of the thread count.
const TRIAL_CHUNK: u64 = 8192;

// ---------------------------------------------------------------------------
// Thresholds
// ---------------------------------------------------------------------------

/// Gain thresholds governing one user's SIC chain.
#[derive(Debug, Clone, Serialize)]
pub struct OutageThresholds {
    /// 1-based user index.
    pub user: usize,
    /// `T_m` for the stages `m = 1..=user` this user must decode.
    pub stage_thresholds: Vec<f64>,
    /// Largest stage threshold; below it the user is in outage.
    pub effective: f64,
    /// True when some stage in the chain has a nonpositive margin, making
    /// the effective threshold infinite.
    pub certain_outage: bool,
}

/// Per-user SIC thresholds for `alloc` at the configuration's SNR.
pub fn noma_thresholds(
    config: &SystemConfig,
    alloc: &PowerAllocation,
) -> Result<Vec<OutageThresholds>> {
    let k = config.num_users();
    if alloc.num_users() != k {
        return Err(Error::DimensionMismatch { expected: k, actual: alloc.num_users() });
    }
    let xi = config.transmit_snr();
    let stage_sinr = stage_sinr_targets(config);
    let a = alloc.coefficients();
    let interference = alloc.interference();

    let stage: Vec<f64> = (0..k)
        .map(|m| {
            let margin = a[m] - stage_sinr[m] * interference[m];
            if margin > 0.0 {
                stage_sinr[m] / (xi * margin)
            } else {
                f64::INFINITY
            }
        })
        .collect();

    Ok((1..=k)
        .map(|n| {
            let chain = stage[..n].to_vec();
            let effective = chain.iter().cloned().fold(0.0, f64::max);
            OutageThresholds {
                user: n,
                stage_thresholds: chain,
                effective,
                certain_outage: effective.is_infinite(),
            }
        })
        .collect())
}

/// Gain threshold of user `n` (1-based) under TDMA with full transmit
/// power: `(2^{R_n / tau_n} - 1) / xi`.
pub fn oma_threshold(config: &SystemConfig, n: usize) -> Result<f64> {
    let k = config.num_users();
    if n == 0 || n > k {
        return Err(Error::IndexOutOfRange { index: n, len: k });
    }
    Ok(oma_sinr_targets(config)[n - 1] / config.transmit_snr())
}

// ---------------------------------------------------------------------------
// Capacity view, used to cross-check the threshold comparisons
// ---------------------------------------------------------------------------

/// Achievable rate for decoding each stage's signal at a receiver with
/// power gain `gain`: `log2(1 + a_m xi g / (1 + xi g A_m))`. Stage `m`
/// succeeds when the returned value reaches `R_m`.
pub fn stage_capacities(config: &SystemConfig, alloc: &PowerAllocation, gain: f64) -> Vec<f64> {
    let xi = config.transmit_snr();
    let a = alloc.coefficients();
    let interference = alloc.interference();
    (0..config.num_users())
        .map(|m| (1.0 + a[m] * xi * gain / (1.0 + xi * gain * interference[m])).log2())
        .collect()
}

/// Rate user `n` achieves alone in its TDMA slot with gain `gain`:
/// `tau_n log2(1 + xi g)`.
pub fn oma_capacity(config: &SystemConfig, n: usize, gain: f64) -> f64 {
    config.oma_fractions()[n - 1] * (1.0 + config.transmit_snr() * gain).log2()
}

// ---------------------------------------------------------------------------
// Analytic outage
// ---------------------------------------------------------------------------

/// Which transmission scheme a probability refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    Noma,
    Oma,
}

/// Exact per-user outage probabilities from the channel's gain CDF. An
/// infinite effective threshold yields probability one.
pub fn analytic_outage(
    config: &SystemConfig,
    alloc: &PowerAllocation,
    channel: &ChannelModel,
    mode: Mode,
) -> Result<Vec<f64>> {
    let k = config.num_users();
    if channel.num_users() != k {
        return Err(Error::DimensionMismatch { expected: k, actual: channel.num_users() });
    }
    match mode {
        Mode::Noma => {
            let thresholds = noma_thresholds(config, alloc)?;
            Ok(thresholds
                .iter()
                .map(|t| {
                    if t.effective.is_finite() {
                        channel.cdf(t.effective, t.user)
                    } else {
                        1.0
                    }
                })
                .collect())
        }
        Mode::Oma => (1..=k)
            .map(|n| Ok(channel.cdf(oma_threshold(config, n)?, n)))
            .collect(),
    }
}

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

/// One simulated or analytic outage evaluation at a single SNR point.
#[derive(Debug, Clone, Serialize)]
pub struct OutageReport {
    pub xi_db: f64,
    pub trials: u64,
    pub seed: u64,
    pub channel: ChannelModel,
    pub analytic_noma: Option<Vec<f64>>,
    pub analytic_oma: Option<Vec<f64>>,
    pub empirical_noma: Option<Vec<f64>>,
    pub empirical_oma: Option<Vec<f64>>,
    /// `stage_failures[n-1][m-1]`: fraction of trials in which user `n`'s
    /// gain fell below stage `m`'s threshold, for `m <= n`.
    pub stage_failures: Option<Vec<Vec<f64>>>,
}

#[derive(Clone)]
struct TrialCounts {
    noma: Vec<u64>,
    oma: Vec<u64>,
    stages: Vec<Vec<u64>>,
}

impl TrialCounts {
    fn zero(k: usize) -> Self {
        TrialCounts {
            noma: vec![0; k],
            oma: vec![0; k],
            stages: (0..k).map(|n| vec![0; n + 1]).collect(),
        }
    }

    fn merge(mut self, other: TrialCounts) -> TrialCounts {
        for (a, b) in self.noma.iter_mut().zip(&other.noma) {
            *a += b;
        }
        for (a, b) in self.oma.iter_mut().zip(&other.oma) {
            *a += b;
        }
        for (row, other_row) in self.stages.iter_mut().zip(&other.stages) {
            for (a, b) in row.iter_mut().zip(other_row) {
                *a += b;
            }
        }
        self
    }
}

fn count_outages(
    channel: &ChannelModel,
    effective: &[f64],
    stage: &[f64],
    oma: &[f64],
    trials: u64,
    seed: u64,
    threads: usize,
) -> TrialCounts {
    let k = effective.len();
    let chunks = trials.div_ceil(TRIAL_CHUNK);
    let run = || {
        (0..chunks)
            .into_par_iter()
            .map(|chunk| {
                let mut counts = TrialCounts::zero(k);
                let hi = ((chunk + 1) * TRIAL_CHUNK).min(trials);
                for trial in chunk * TRIAL_CHUNK..hi {
                    let gains = channel.sample_gains(&mut trial_rng(seed, trial));
                    for n in 0..k {
                        if gains[n] < effective[n] {
                            counts.noma[n] += 1;
                        }
                        if gains[n] < oma[n] {
                            counts.oma[n] += 1;
                        }
                        for (t, count) in stage[..=n].iter().zip(&mut counts.stages[n]) {
                            if gains[n] < *t {
                                *count += 1;
                            }
                        }
                    }
                }
                counts
            })
            .reduce(|| TrialCounts::zero(k), TrialCounts::merge)
    };
    if threads == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("worker pool construction failed")
            .install(run)
    }
}

fn stage_threshold_vector(config: &SystemConfig, alloc: &PowerAllocation) -> Result<Vec<f64>> {
    let thresholds = noma_thresholds(config, alloc)?;
    Ok(thresholds
        .last()
        .map(|t| t.stage_thresholds.clone())
        .unwrap_or_default())
}

/// Simulates `trials` channel draws and reports the outage fraction per
/// user for `mode`, plus per-stage failure fractions in NOMA mode.
/// `threads` caps the worker count; 0 picks the default pool. The result
/// is identical for every thread count.
pub fn montecarlo_outage(
    config: &SystemConfig,
    alloc: &PowerAllocation,
    channel: &ChannelModel,
    trials: u64,
    seed: u64,
    mode: Mode,
    threads: usize,
) -> Result<OutageReport> {
    let k = config.num_users();
    if channel.num_users() != k {
        return Err(Error::DimensionMismatch { expected: k, actual: channel.num_users() });
    }
    let thresholds = noma_thresholds(config, alloc)?;
    let effective: Vec<f64> = thresholds.iter().map(|t| t.effective).collect();
    let stage = stage_threshold_vector(config, alloc)?;
    let oma: Vec<f64> = (1..=k)
        .map(|n| oma_threshold(config, n))
        .collect::<Result<_>>()?;

    let counts = count_outages(channel, &effective, &stage, &oma, trials, seed, threads);
    let fraction = |v: &[u64]| v.iter().map(|&c| c as f64 / trials as f64).collect::<Vec<f64>>();

    let mut report = OutageReport {
        xi_db: linear_to_db(config.transmit_snr()),
        trials,
        seed,
        channel: channel.clone(),
        analytic_noma: None,
        analytic_oma: None,
        empirical_noma: None,
        empirical_oma: None,
        stage_failures: None,
    };
    match mode {
        Mode::Noma => {
            report.empirical_noma = Some(fraction(&counts.noma));
            report.stage_failures =
                Some(counts.stages.iter().map(|row| fraction(row)).collect());
        }
        Mode::Oma => {
            report.empirical_oma = Some(fraction(&counts.oma));
        }
    }
    Ok(report)
}

/// Evaluates outage across a dB grid. Analytic curves are always filled
/// in; when `trials > 0` every point also gets NOMA, OMA and per-stage
/// Monte Carlo estimates from the same `seed` (common random numbers
/// across grid points).
pub fn sweep(
    config: &SystemConfig,
    alloc: &PowerAllocation,
    channel: &ChannelModel,
    grid_db: &[f64],
    trials: u64,
    seed: u64,
    threads: usize,
) -> Result<Vec<OutageReport>> {
    let k = config.num_users();
    if channel.num_users() != k {
        return Err(Error::DimensionMismatch { expected: k, actual: channel.num_users() });
    }
    let mut reports = Vec::with_capacity(grid_db.len());
    for &db in grid_db {
        let at = config.at_snr(crate::model::db_to_linear(db));
        let mut report = OutageReport {
            xi_db: db,
            trials,
            seed,
            channel: channel.clone(),
            analytic_noma: Some(analytic_outage(&at, alloc, channel, Mode::Noma)?),
            analytic_oma: Some(analytic_outage(&at, alloc, channel, Mode::Oma)?),
            empirical_noma: None,
            empirical_oma: None,
            stage_failures: None,
        };
        if trials > 0 {
            let thresholds = noma_thresholds(&at, alloc)?;
            let effective: Vec<f64> = thresholds.iter().map(|t| t.effective).collect();
            let stage = stage_threshold_vector(&at, alloc)?;
            let oma: Vec<f64> = (1..=k)
                .map(|n| oma_threshold(&at, n))
                .collect::<Result<_>>()?;
            let counts = count_outages(channel, &effective, &stage, &oma, trials, seed, threads);
            let fraction =
                |v: &[u64]| v.iter().map(|&c| c as f64 / trials as f64).collect::<Vec<f64>>();
            report.empirical_noma = Some(fraction(&counts.noma));
            report.empirical_oma = Some(fraction(&counts.oma));
            report.stage_failures = Some(counts.stages.iter().map(|row| fraction(row)).collect());
        }
        reports.push(report);
    }
    Ok(reports)
}

// ---------------------------------------------------------------------------
// Grid parsing and CSV output
// ---------------------------------------------------------------------------

/// Parses an inclusive dB grid of the form `start:stop:step`, e.g.
/// `0:40:2` for 0, 2, ..., 40 dB.
pub fn parse_xi_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidGrid(format!("expected start:stop:step, got {spec:?}")));
    }
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::InvalidGrid(format!("{s:?} is not a number")))
    };
    let start = parse(parts[0])?;
    let stop = parse(parts[1])?;
    let step = parse(parts[2])?;
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::InvalidGrid(format!("step must be positive, got {step}")));
    }
    if stop < start {
        return Err(Error::InvalidGrid(format!("stop {stop} lies before start {start}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

/// Writes reports as CSV with one row per `(xi_db, user, metric)`. Metrics
/// appear in a fixed order per user (`noma_analytic`, `oma_analytic`,
/// `noma_mc`, `oma_mc`, then `stage_mc:<m>`), skipping whatever a report
/// does not carry, so the byte output is deterministic.
pub fn write_csv<W: Write>(out: &mut W, reports: &[OutageReport]) -> std::io::Result<()> {
    writeln!(out, "xi_db,user,metric,value,trials,seed")?;
    for report in reports {
        let k = report.channel.num_users();
        for user in 1..=k {
            let mut row = |metric: &str, value: f64| {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    report.xi_db, user, metric, value, report.trials, report.seed
                )
            };
            if let Some(p) = &report.analytic_noma {
                row("noma_analytic", p[user - 1])?;
            }
            if let Some(p) = &report.analytic_oma {
                row("oma_analytic", p[user - 1])?;
            }
            if let Some(p) = &report.empirical_noma {
                row("noma_mc", p[user - 1])?;
            }
            if let Some(p) = &report.empirical_oma {
                row("oma_mc", p[user - 1])?;
            }
            if let Some(stages) = &report.stage_failures {
                for (m, &value) in stages[user - 1].iter().enumerate() {
                    row(&format!("stage_mc:{}", m + 1), value)?;
                }
            }
        }
    }
    Ok(())
}
