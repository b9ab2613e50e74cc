//! System description and the value types every other module consumes.
//!
//! A downlink cell serves `K` users over a shared channel. Each user `n` has
//! a target rate `R_n` (bps/Hz) and a reference TDMA time fraction `tau_n`,
//! and the base station transmits at SNR `xi`. Users are ranked by their
//! normalized rate `r_n = R_n / tau_n`; the superposition-coding analysis
//! assumes users are indexed so that `r_1 <= r_2 <= ... <= r_K`, which is
//! what [`SystemConfig::canonicalize`] establishes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `sum(tau_n) == 1` when validating a configuration.
pub const TAU_SUM_TOLERANCE: f64 = 1e-9;

/// Slack allowed on the unit power budget `sum(a_n) <= 1`.
pub const POWER_BUDGET_TOLERANCE: f64 = 1e-12;

/// Converts a dB quantity to its linear value.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Converts a linear SNR to dB.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

// ---------------------------------------------------------------------------
// SystemConfig
// ---------------------------------------------------------------------------

/// Validated cell configuration: target rates, TDMA time fractions and the
/// transmit SNR (linear).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    num_users: usize,
    target_rates: Vec<f64>,
    oma_fractions: Vec<f64>,
    transmit_snr: f64,
}

impl SystemConfig {
    /// Builds a configuration, rejecting empty systems, nonpositive rates,
    /// fractions or SNR, and fraction vectors that do not sum to one
    /// (within [`TAU_SUM_TOLERANCE`]).
    ///
    /// Users keep their input order; call [`SystemConfig::canonicalize`]
    /// before using the allocation routines.
    pub fn new(target_rates: Vec<f64>, oma_fractions: Vec<f64>, transmit_snr: f64) -> Result<Self> {
        if target_rates.is_empty() {
            return Err(Error::EmptySystem);
        }
        if oma_fractions.len() != target_rates.len() {
            return Err(Error::DimensionMismatch {
                expected: target_rates.len(),
                actual: oma_fractions.len(),
            });
        }
        for (i, &rate) in target_rates.iter().enumerate() {
            if !rate.is_finite() || rate <= 0.0 {
                return Err(Error::NonPositiveRate { index: i + 1, value: rate });
            }
        }
        for (i, &tau) in oma_fractions.iter().enumerate() {
            if !tau.is_finite() || tau <= 0.0 {
                return Err(Error::NonPositiveFraction { index: i + 1, value: tau });
            }
        }
        let tau_sum: f64 = oma_fractions.iter().sum();
        if (tau_sum - 1.0).abs() > TAU_SUM_TOLERANCE {
            return Err(Error::FractionSumMismatch { actual: tau_sum });
        }
        if !transmit_snr.is_finite() || transmit_snr <= 0.0 {
            return Err(Error::NonPositiveSnr { value: transmit_snr });
        }
        Ok(SystemConfig {
            num_users: target_rates.len(),
            target_rates,
            oma_fractions,
            transmit_snr,
        })
    }

    /// Same as [`SystemConfig::new`] with the SNR given in dB.
    pub fn with_snr_db(target_rates: Vec<f64>, oma_fractions: Vec<f64>, snr_db: f64) -> Result<Self> {
        SystemConfig::new(target_rates, oma_fractions, db_to_linear(snr_db))
    }

    pub fn num_users(&self) -> usize {
        self.num_users
    }

    pub fn target_rates(&self) -> &[f64] {
        &self.target_rates
    }

    pub fn oma_fractions(&self) -> &[f64] {
        &self.oma_fractions
    }

    /// Linear transmit SNR `xi`.
    pub fn transmit_snr(&self) -> f64 {
        self.transmit_snr
    }

    /// Copy of this configuration at a different transmit SNR, for sweeps.
    pub fn at_snr(&self, transmit_snr: f64) -> SystemConfig {
        SystemConfig { transmit_snr, ..self.clone() }
    }

    /// Normalized rates `r_n = R_n / tau_n` in the current user order.
    pub fn normalized_rates(&self) -> NormalizedRates {
        NormalizedRates {
            values: self
                .target_rates
                .iter()
                .zip(&self.oma_fractions)
                .map(|(r, t)| r / t)
                .collect(),
        }
    }

    /// True when normalized rates are already nondecreasing.
    pub fn is_canonical(&self) -> bool {
        let r = self.normalized_rates();
        r.values.windows(2).all(|w| w[0] <= w[1])
    }

    /// Reindexes users so normalized rates are nondecreasing. The sort is
    /// stable, so ties keep their input order. Returns the reordered
    /// configuration together with the permutation whose stage `j` entry is
    /// the original (1-based) index of the user now at position `j`.
    pub fn canonicalize(&self) -> (SystemConfig, DecodingOrder) {
        let r = self.normalized_rates();
        let mut order: Vec<usize> = (0..self.num_users).collect();
        order.sort_by(|&i, &j| r.values[i].total_cmp(&r.values[j]));
        let config = SystemConfig {
            num_users: self.num_users,
            target_rates: order.iter().map(|&i| self.target_rates[i]).collect(),
            oma_fractions: order.iter().map(|&i| self.oma_fractions[i]).collect(),
            transmit_snr: self.transmit_snr,
        };
        let order = DecodingOrder::new(order.iter().map(|&i| i + 1).collect())
            .expect("sorting indices always yields a permutation");
        (config, order)
    }
}

// ---------------------------------------------------------------------------
// NormalizedRates
// ---------------------------------------------------------------------------

/// The per-user normalized rates `r_n = R_n / tau_n`. Each user must clear
/// this rate while active for only a `tau_n` fraction of the frame, so `r_n`
/// measures how demanding the user is and fixes its SIC decoding position.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalizedRates {
    values: Vec<f64>,
}

impl NormalizedRates {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

// ---------------------------------------------------------------------------
// PowerAllocation
// ---------------------------------------------------------------------------

/// Power coefficients `a_n` together with the interference terms
/// `A_n = sum_{l > n} a_l` seen by user `n` after cancelling signals
/// `1..n`. The two vectors are kept consistent by construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerAllocation {
    coefficients: Vec<f64>,
    interference: Vec<f64>,
}

impl PowerAllocation {
    /// Wraps a coefficient vector, computing the interference suffix sums.
    /// Rejects coefficients outside `[0, 1]` and totals beyond the unit
    /// budget (within [`POWER_BUDGET_TOLERANCE`]).
    pub fn from_coefficients(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::EmptySystem);
        }
        for (i, &a) in coefficients.iter().enumerate() {
            if !(0.0..=1.0).contains(&a) {
                return Err(Error::CoefficientOutOfRange { index: i + 1, value: a });
            }
        }
        let total: f64 = coefficients.iter().sum();
        if total > 1.0 + POWER_BUDGET_TOLERANCE {
            return Err(Error::PowerBudgetExceeded { total });
        }
        Ok(Self::from_coefficients_unchecked(coefficients))
    }

    /// Builds the suffix sums without the budget check. Used internally for
    /// quantities that are reported rather than transmitted, such as the
    /// power totals of non-canonical decoding orders.
    pub(crate) fn from_coefficients_unchecked(coefficients: Vec<f64>) -> Self {
        let k = coefficients.len();
        let mut interference = vec![0.0; k];
        for n in (0..k.saturating_sub(1)).rev() {
            interference[n] = coefficients[n + 1] + interference[n + 1];
        }
        PowerAllocation { coefficients, interference }
    }

    pub fn num_users(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// `A_n` for each user; the last entry is always zero.
    pub fn interference(&self) -> &[f64] {
        &self.interference
    }

    pub fn total(&self) -> f64 {
        self.coefficients.iter().sum()
    }
}

// ---------------------------------------------------------------------------
// DecodingOrder
// ---------------------------------------------------------------------------

/// A SIC decoding order: `user_at_stage(j)` is the (1-based) user whose
/// signal is decoded at stage `j`. The identity order decodes user 1 first,
/// which is the canonical order when normalized rates are nondecreasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecodingOrder {
    permutation: Vec<usize>,
}

impl DecodingOrder {
    /// Validates that `permutation` is a bijection on `1..=K`.
    pub fn new(permutation: Vec<usize>) -> Result<Self> {
        if permutation.is_empty() {
            return Err(Error::EmptySystem);
        }
        let k = permutation.len();
        let mut seen = vec![false; k];
        for &user in &permutation {
            if user == 0 || user > k || seen[user - 1] {
                return Err(Error::InvalidPermutation);
            }
            seen[user - 1] = true;
        }
        Ok(DecodingOrder { permutation })
    }

    pub fn identity(num_users: usize) -> Self {
        DecodingOrder { permutation: (1..=num_users).collect() }
    }

    pub fn num_users(&self) -> usize {
        self.permutation.len()
    }

    /// 1-based user decoded at 1-based `stage`.
    pub fn user_at_stage(&self, stage: usize) -> usize {
        self.permutation[stage - 1]
    }

    /// The raw permutation, 1-based user labels in stage order.
    pub fn as_slice(&self) -> &[usize] {
        &self.permutation
    }

    pub fn is_identity(&self) -> bool {
        self.permutation.iter().enumerate().all(|(i, &u)| u == i + 1)
    }

    /// Stage labels joined with dashes, e.g. `3-1-2`.
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.permutation.iter().map(|u| u.to_string()).collect();
        parts.join("-")
    }
}

// ---------------------------------------------------------------------------
// EpsilonVector
// ---------------------------------------------------------------------------

/// Per-user additions on top of the OMA-equivalent coefficients. All entries
/// must be nonnegative; a zero vector reproduces the OMA-equivalent
/// allocation exactly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsilonVector {
    values: Vec<f64>,
}

impl EpsilonVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySystem);
        }
        for (i, &e) in values.iter().enumerate() {
            if !e.is_finite() || e < 0.0 {
                return Err(Error::NegativeEpsilon { index: i + 1, value: e });
            }
        }
        Ok(EpsilonVector { values })
    }

    pub fn zeros(num_users: usize) -> Self {
        EpsilonVector { values: vec![0.0; num_users] }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}
