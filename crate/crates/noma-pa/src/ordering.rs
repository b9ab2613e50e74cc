//! Energy cost of alternative SIC decoding orders.
//!
//! The OMA-equivalent construction works for any decoding order, not just
//! the canonical one: decode the users in the order `sigma` and each stage's
//! coefficient follows the same back-to-front recursion with the rates and
//! fractions permuted. What changes is the total transmit power
//!
//! ```text
//! S_sigma = q_sigma(1) + sum_{l=2..K} q_sigma(l) prod_{k=1..l-1} 2^{R_sigma(k)}
//! ```
//!
//! which is minimized exactly by decoding in nondecreasing normalized-rate
//! order. Swapping two adjacent stages changes the total by a closed-form
//! amount whose sign depends only on which of the two normalized rates is
//! larger, so any order can be improved into the canonical one by a chain
//! of profitable adjacent swaps.

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{DecodingOrder, SystemConfig, POWER_BUDGET_TOLERANCE};

/// Default cap on `K!` for [`rank_orders`]; 8 users enumerate in full.
pub const DEFAULT_MAX_ENUMERATE: usize = 40320;

/// Power budget needed to give every user OMA-equivalent outage performance
/// under one specific decoding order.
#[derive(Debug, Clone, Serialize)]
pub struct OrderEnergyReport {
    pub order: DecodingOrder,
    /// Coefficient of the user decoded at each stage, stage order.
    pub coefficients: Vec<f64>,
    /// Sum of the coefficients. May exceed 1 for bad orders; reported
    /// verbatim rather than rejected.
    pub total_power: f64,
}

impl OrderEnergyReport {
    /// Whether this order fits inside the unit power budget.
    pub fn is_feasible(&self) -> bool {
        self.total_power <= 1.0 + POWER_BUDGET_TOLERANCE
    }
}

/// Runs the OMA-equivalent recursion with users visited in `order`.
pub fn allocation_for_order(config: &SystemConfig, order: &DecodingOrder) -> Result<OrderEnergyReport> {
    let k = config.num_users();
    if order.num_users() != k {
        return Err(Error::DimensionMismatch { expected: k, actual: order.num_users() });
    }
    let rates = config.target_rates();
    let fractions = config.oma_fractions();

    let mut coefficients = vec![0.0; k];
    let mut interference = 0.0;
    for stage in (0..k).rev() {
        let user = order.as_slice()[stage] - 1;
        let stage_sinr = rates[user].exp2() - 1.0;
        let oma_sinr = (rates[user] / fractions[user]).exp2() - 1.0;
        let q = stage_sinr / oma_sinr;
        coefficients[stage] = q + stage_sinr * interference;
        interference = q + rates[user].exp2() * interference;
    }
    let total_power = coefficients.iter().sum();
    Ok(OrderEnergyReport { order: order.clone(), coefficients, total_power })
}

/// Enumerates every decoding order and sorts them by total power, cheapest
/// first. Ties keep lexicographic order of the permutation, so the output
/// is fully deterministic. Refuses to enumerate more than `max_enumerate`
/// orders.
pub fn rank_orders(config: &SystemConfig, max_enumerate: usize) -> Result<Vec<OrderEnergyReport>> {
    let k = config.num_users();
    let mut count: u128 = 1;
    for n in 2..=k as u128 {
        count = count.saturating_mul(n);
    }
    if count > max_enumerate as u128 {
        return Err(Error::TooManyPermutations { count });
    }

    let mut reports = Vec::with_capacity(count as usize);
    for perm in (1..=k).permutations(k) {
        let order = DecodingOrder::new(perm).expect("permutations iterator yields valid orders");
        reports.push(allocation_for_order(config, &order)?);
    }
    reports.sort_by(|a, b| {
        a.total_power
            .total_cmp(&b.total_power)
            .then_with(|| a.order.as_slice().cmp(b.order.as_slice()))
    });
    Ok(reports)
}

/// Change in total power from swapping the users at `stage` and `stage + 1`
/// (1-based), i.e. `S_before - S_after`. Positive means the swap saves
/// power, which happens exactly when the user decoded first in the pair has
/// the larger normalized rate. Closed form:
///
/// ```text
/// delta = (2^{R_u}-1)(2^{R_v}-1) (1/g_v - 1/g_u) prod_{k<stage} 2^{R_sigma(k)}
/// ```
///
/// with `u = sigma(stage)`, `v = sigma(stage+1)` and `g = 2^{R/tau} - 1`.
pub fn adjacent_swap_delta(config: &SystemConfig, order: &DecodingOrder, stage: usize) -> Result<f64> {
    let k = config.num_users();
    if order.num_users() != k {
        return Err(Error::DimensionMismatch { expected: k, actual: order.num_users() });
    }
    if stage == 0 || stage >= k {
        return Err(Error::IndexOutOfRange { index: stage, len: k });
    }
    let before = allocation_for_order(config, order)?;
    let mut swapped = order.as_slice().to_vec();
    swapped.swap(stage - 1, stage);
    let swapped = DecodingOrder::new(swapped).expect("adjacent swap preserves the permutation");
    let after = allocation_for_order(config, &swapped)?;
    Ok(before.total_power - after.total_power)
}
