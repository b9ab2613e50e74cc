//! Closed-form power allocation strategies and their feasibility diagnostics.
//!
//! With superposition coding, user `n` must decode the signals of users
//! `1..n` before its own, so decoding signal `n` at any user needs the SINR
//! `a_n x / (1 + x A_n) >= 2^{R_n} - 1`, where `x` is the received SNR and
//! `A_n = sum_{l > n} a_l` is the residual interference. Two quantities
//! control whether a coefficient vector can work at all:
//!
//! * the decoding margin `a_n - (2^{R_n} - 1) A_n`, which must be positive
//!   for the stage-`n` outage threshold to be finite, and
//! * the interference ceiling `2^{-sum_{l <= n} R_l}`: once `A_n` exceeds
//!   it, no budget-respecting choice of the remaining coefficients avoids
//!   outage probability one for users `n..K`.
//!
//! [`oma_equivalent`] computes the unique coefficients whose per-user outage
//! thresholds match a TDMA reference exactly; whatever power is left over
//! ([`OmaEquivalentAllocation::headroom`]) can then be spent through
//! [`general_allocation`], bounded by [`epsilon_upper_bound`] or split with
//! [`proportional_strategy`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{EpsilonVector, PowerAllocation, SystemConfig};

/// Relative band around the adjacent well-behavedness bound inside which a
/// coefficient counts as meeting the bound with equality.
pub const WELLBEHAVED_TOLERANCE: f64 = 1e-12;

/// SINR needed to decode signal `n` at rate `R_n`: `2^{R_n} - 1`.
pub(crate) fn stage_sinr_targets(config: &SystemConfig) -> Vec<f64> {
    config.target_rates().iter().map(|r| r.exp2() - 1.0).collect()
}

/// SINR needed by user `n` alone in its TDMA slot: `2^{R_n / tau_n} - 1`.
pub(crate) fn oma_sinr_targets(config: &SystemConfig) -> Vec<f64> {
    config
        .normalized_rates()
        .values()
        .iter()
        .map(|r| r.exp2() - 1.0)
        .collect()
}

/// Interference user `n` may tolerate before outage becomes certain for
/// users `n..K`: `2^{-(R_1 + ... + R_n)}`. Defined for `1 <= n <= K-1`;
/// user `K` cancels everything and sees no interference.
pub fn interference_ceiling(target_rates: &[f64], n: usize) -> Result<f64> {
    if n == 0 || n + 1 > target_rates.len() {
        return Err(Error::IndexOutOfRange { index: n, len: target_rates.len() });
    }
    let rate_sum: f64 = target_rates[..n].iter().sum();
    Ok((-rate_sum).exp2())
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

/// Feasibility report for a coefficient vector under a given configuration.
///
/// `certain_outage[n]` flags `A_n > 2^{-(R_1+...+R_n)}`. Whenever any user
/// trips that flag, at least one stage `m <= n` has a nonpositive margin
/// (the first flagged stage always does), so users `n..K` are in outage no
/// matter the channel. The flag itself does not pin down which stage fails:
/// under a budget-respecting vector the failing stage may sit earlier in
/// the SIC chain while user `n`'s own margin stays positive.
#[derive(Debug, Clone, Serialize)]
pub struct AllocationDiagnostics {
    /// Decoding margin `a_n - (2^{R_n} - 1) A_n` per user.
    pub margins: Vec<f64>,
    /// `margins[n] > 0`, i.e. the stage-`n` outage threshold is finite.
    pub margin_positive: Vec<bool>,
    /// Interference ceilings for users `1..K-1` (empty for `K = 1`).
    pub interference_ceilings: Vec<f64>,
    /// `A_n` exceeds its ceiling; always `false` for user `K`.
    pub certain_outage: Vec<bool>,
    /// Adjacent condition `a_n >= a_{n+1} 2^{R_{n+1}} (2^{R_n}-1)/(2^{R_{n+1}}-1)`,
    /// equality counted as satisfied. Entry `n` covers the pair `(n, n+1)`.
    pub wellbehaved_pairwise: Vec<bool>,
    /// Same condition holding strictly.
    pub wellbehaved_strict: Vec<bool>,
}

impl AllocationDiagnostics {
    /// True when every adjacent pair satisfies the well-behavedness bound,
    /// so each user's own stage dominates its SIC chain.
    pub fn is_wellbehaved(&self) -> bool {
        self.wellbehaved_pairwise.iter().all(|&ok| ok)
    }

    /// True when no user sits above its interference ceiling.
    pub fn no_certain_outage(&self) -> bool {
        !self.certain_outage.iter().any(|&bad| bad)
    }
}

/// Evaluates margins, ceilings and well-behavedness for `alloc` under
/// `config`. Expects a canonical configuration.
pub fn diagnose(alloc: &PowerAllocation, config: &SystemConfig) -> Result<AllocationDiagnostics> {
    let k = config.num_users();
    if alloc.num_users() != k {
        return Err(Error::DimensionMismatch { expected: k, actual: alloc.num_users() });
    }
    debug_assert!(config.is_canonical(), "diagnose expects canonical user order");

    let stage_sinr = stage_sinr_targets(config);
    let a = alloc.coefficients();
    let interference = alloc.interference();

    let margins: Vec<f64> = (0..k).map(|n| a[n] - stage_sinr[n] * interference[n]).collect();
    let margin_positive = margins.iter().map(|&m| m > 0.0).collect();

    let mut interference_ceilings = Vec::with_capacity(k.saturating_sub(1));
    let mut certain_outage = vec![false; k];
    for n in 1..k {
        let ceiling = interference_ceiling(config.target_rates(), n)?;
        certain_outage[n - 1] = interference[n - 1] > ceiling;
        interference_ceilings.push(ceiling);
    }

    let mut wellbehaved_pairwise = Vec::with_capacity(k.saturating_sub(1));
    let mut wellbehaved_strict = Vec::with_capacity(k.saturating_sub(1));
    for n in 0..k.saturating_sub(1) {
        let ratio = config.target_rates()[n + 1].exp2() * stage_sinr[n] / stage_sinr[n + 1];
        let bound = a[n + 1] * ratio;
        let slack = WELLBEHAVED_TOLERANCE * bound.abs().max(1.0);
        wellbehaved_pairwise.push(a[n] >= bound - slack);
        wellbehaved_strict.push(a[n] > bound + slack);
    }

    Ok(AllocationDiagnostics {
        margins,
        margin_positive,
        interference_ceilings,
        certain_outage,
        wellbehaved_pairwise,
        wellbehaved_strict,
    })
}

// ---------------------------------------------------------------------------
// OMA-equivalent allocation
// ---------------------------------------------------------------------------

/// Coefficients that reproduce the TDMA outage thresholds user by user,
/// plus the interference terms and the unused power budget.
#[derive(Debug, Clone, Serialize)]
pub struct OmaEquivalentAllocation {
    /// `a~_n` per user, canonical order.
    pub coefficients: Vec<f64>,
    /// Interference `A_n` under these coefficients; last entry zero.
    pub interference: Vec<f64>,
    /// `sum(a~_n)`; at most 1, with equality exactly when all normalized
    /// rates coincide.
    pub total: f64,
    /// `1 - total`, the budget left for outage improvements.
    pub headroom: f64,
}

impl OmaEquivalentAllocation {
    pub fn to_power_allocation(&self) -> Result<PowerAllocation> {
        PowerAllocation::from_coefficients(self.coefficients.clone())
    }
}

/// Computes the OMA-equivalent coefficients for a canonical configuration.
///
/// Evaluated back to front: with `q_n = (2^{R_n}-1) / (2^{R_n/tau_n}-1)`,
///
/// ```text
/// A_K = 0,    a~_n = q_n + (2^{R_n}-1) A_n,    A_{n-1} = q_n + 2^{R_n} A_n
/// ```
///
/// which keeps the decoding margin of user `n` at exactly `q_n`, the margin
/// a lone TDMA user would have. Expanding the recursion gives the explicit
/// sum `a~_n = q_n + (2^{R_n}-1) sum_{l>n} q_l prod_{k=n+1..l-1} 2^{R_k}`.
pub fn oma_equivalent(config: &SystemConfig) -> OmaEquivalentAllocation {
    debug_assert!(config.is_canonical(), "oma_equivalent expects canonical user order");
    let k = config.num_users();
    let stage_sinr = stage_sinr_targets(config);
    let oma_sinr = oma_sinr_targets(config);

    let mut coefficients = vec![0.0; k];
    let mut interference = vec![0.0; k];
    let mut next = 0.0;
    for n in (0..k).rev() {
        let q = stage_sinr[n] / oma_sinr[n];
        interference[n] = next;
        coefficients[n] = q + stage_sinr[n] * next;
        next = q + config.target_rates()[n].exp2() * next;
    }
    let total: f64 = coefficients.iter().sum();
    OmaEquivalentAllocation { coefficients, interference, total, headroom: 1.0 - total }
}

// ---------------------------------------------------------------------------
// Spending the headroom
// ---------------------------------------------------------------------------

/// Adds `eps` on top of the OMA-equivalent coefficients while preserving
/// every earlier user's decoding margin.
///
/// Raising `a_n` by `eps_n` raises the interference seen by users `1..n-1`,
/// so each `a_m` (`m < n`) receives the compensation `(2^{R_m}-1) c_m` with
/// `c_m = eps_{m+1} + sum_{l>m+1} eps_l prod_{k=m+1..l-1} 2^{R_k}`. The
/// resulting margins are exactly `q_n + eps_n`. Fails with
/// `PowerBudgetExceeded` when the compensated total passes 1.
pub fn general_allocation(config: &SystemConfig, eps: &EpsilonVector) -> Result<PowerAllocation> {
    let k = config.num_users();
    if eps.len() != k {
        return Err(Error::DimensionMismatch { expected: k, actual: eps.len() });
    }
    let base = oma_equivalent(config);
    let stage_sinr = stage_sinr_targets(config);
    let eps = eps.values();

    let mut compensation = vec![0.0; k];
    for n in (0..k - 1).rev() {
        compensation[n] = eps[n + 1] + config.target_rates()[n + 1].exp2() * compensation[n + 1];
    }
    let coefficients: Vec<f64> = (0..k)
        .map(|n| base.coefficients[n] + eps[n] + stage_sinr[n] * compensation[n])
        .collect();
    PowerAllocation::from_coefficients(coefficients)
}

/// Largest admissible `eps_n` given the additions `eps_prefix` already
/// granted to users `1..n-1` (so `n >= 2`).
///
/// Two constraints bind. Keeping the chain well behaved requires
///
/// ```text
/// eps_n <= eps_{n-1} (2^{R_n}-1)/(2^{R_{n-1}}-1)
///          + (2^{R_n}-1)/(2^{R_{n-1}/tau_{n-1}}-1) - (2^{R_n}-1)/(2^{R_n/tau_n}-1)
/// ```
///
/// and the unit budget, after compensation, requires
///
/// ```text
/// eps_n <= (1 - total_oma) prod_{l<n} 2^{-R_l}
///          - sum_{m<n} eps_m prod_{l=m..n-1} 2^{-R_l}
/// ```
///
/// The returned value is the smaller of the two; a nonpositive result means
/// user `n` has no headroom left.
pub fn epsilon_upper_bound(config: &SystemConfig, eps_prefix: &[f64], n: usize) -> Result<f64> {
    let k = config.num_users();
    if n < 2 || n > k {
        return Err(Error::IndexOutOfRange { index: n, len: k });
    }
    if eps_prefix.len() != n - 1 {
        return Err(Error::DimensionMismatch { expected: n - 1, actual: eps_prefix.len() });
    }
    let stage_sinr = stage_sinr_targets(config);
    let oma_sinr = oma_sinr_targets(config);
    let base = oma_equivalent(config);

    let chain_bound = eps_prefix[n - 2] * stage_sinr[n - 1] / stage_sinr[n - 2]
        + stage_sinr[n - 1] / oma_sinr[n - 2]
        - stage_sinr[n - 1] / oma_sinr[n - 1];

    let mut budget_bound = 0.0;
    let mut shrink = 1.0;
    for m in (1..n).rev() {
        shrink *= (-config.target_rates()[m - 1]).exp2();
        budget_bound -= eps_prefix[m - 1] * shrink;
    }
    budget_bound += base.headroom * shrink;

    Ok(chain_bound.min(budget_bound))
}

/// Splits the headroom across all users in proportion to
/// `(2^{R_n}-1) / (2^{R_1+...+R_K}-1)`, rescaled by the SIC compensation
/// factors so the grants sum, compensation included, to exactly the
/// headroom. The resulting allocation uses the full unit budget and keeps
/// the chain well behaved whenever the headroom is positive.
pub fn proportional_strategy(config: &SystemConfig) -> EpsilonVector {
    debug_assert!(config.is_canonical(), "proportional_strategy expects canonical user order");
    let k = config.num_users();
    let base = oma_equivalent(config);
    if base.headroom <= 0.0 {
        return EpsilonVector::zeros(k);
    }
    let stage_sinr = stage_sinr_targets(config);
    let rate_sum: f64 = config.target_rates().iter().sum();
    let denom = rate_sum.exp2() - 1.0;

    let mut suffix = vec![1.0; k + 1];
    for n in (0..k).rev() {
        suffix[n] = suffix[n + 1] * config.target_rates()[n].exp2();
    }
    let mut values = Vec::with_capacity(k);
    let mut prefix = 1.0;
    for n in 0..k {
        values.push(base.headroom * stage_sinr[n] * suffix[n + 1] / (denom * prefix));
        prefix *= config.target_rates()[n].exp2();
    }
    EpsilonVector::new(values).expect("proportional grants are nonnegative")
}
