//! Scenario files: a JSON description of a system, a channel, a power
//! allocation strategy and simulation parameters.
//!
//! A minimal scenario only names the per-user targets:
//!
//! ```json
//! {
//!   "target_rates": [0.5, 1.2, 0.9],
//!   "oma_fractions": [0.3, 0.4, 0.3],
//!   "transmit_snr_db": 30.0
//! }
//! ```
//!
//! Optional sections select the channel statistics (`"channel"`), the
//! allocation strategy (`"strategy"`, either a name or explicit per-user
//! vectors) and Monte Carlo controls (`"simulation"`).
//!
//! Users may be listed in any order. Loading sorts them by normalized rate
//! and permutes every per-user array (`betas`, explicit `coefficients` or
//! `epsilons`) alongside, so position `i` always refers to the same user
//! before and after sorting. [`Scenario::input_order`] records where each
//! decoding stage came from in the file.

use std::path::Path;

use serde::Deserialize;

use crate::allocation::{general_allocation, oma_equivalent, proportional_strategy};
use crate::channel::{ChannelModel, MimoChannel};
use crate::error::{Error, Result};
use crate::model::{db_to_linear, DecodingOrder, EpsilonVector, PowerAllocation, SystemConfig};
use crate::outage::{parse_xi_grid, DEFAULT_TRIALS};

/// Default Monte Carlo seed for scenarios that do not choose one.
pub const DEFAULT_SEED: u64 = 42;

/// Default SNR grid for outage sweeps, in dB.
pub const DEFAULT_XI_GRID: &str = "0:40:2";

// ---------------------------------------------------------------------------
// Raw JSON shape
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    target_rates: Vec<f64>,
    oma_fractions: Vec<f64>,
    transmit_snr_db: f64,
    channel: Option<RawChannel>,
    strategy: Option<RawStrategy>,
    simulation: Option<RawSimulation>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChannel {
    model: u8,
    betas: Option<Vec<f64>>,
    tx_antennas: Option<usize>,
    rx_antennas: Option<usize>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawStrategy {
    Named(String),
    Explicit { explicit: RawExplicit },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExplicit {
    coefficients: Option<Vec<f64>>,
    epsilons: Option<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSimulation {
    trials: Option<u64>,
    seed: Option<u64>,
    xi_grid_db: Option<String>,
}

// ---------------------------------------------------------------------------
// Resolved scenario
// ---------------------------------------------------------------------------

/// Channel statistics selected by a scenario.
#[derive(Debug, Clone)]
pub enum ChannelSpec {
    /// Per-user gains are sorted unit-mean exponentials (model 1).
    Ordered,
    /// Per-user gains come from a shared precoded multi-antenna link with
    /// per-user scale `betas[n]` (model 2).
    Mimo { betas: Vec<f64>, tx_antennas: usize, rx_antennas: usize },
}

/// Power allocation strategy selected by a scenario.
#[derive(Debug, Clone)]
pub enum Strategy {
    /// Spend exactly enough for OMA-equivalent margins everywhere.
    OmaEquivalent,
    /// Split the leftover budget across users in proportion to their
    /// stage SINR targets.
    Proportional,
    /// Take these coefficients as given.
    Coefficients(Vec<f64>),
    /// Add these per-stage SINR surpluses on top of the OMA-equivalent
    /// baseline.
    Epsilons(Vec<f64>),
}

impl Strategy {
    /// Produces the concrete allocation this strategy prescribes for
    /// `config`.
    pub fn resolve(&self, config: &SystemConfig) -> Result<PowerAllocation> {
        match self {
            Strategy::OmaEquivalent => oma_equivalent(config).to_power_allocation(),
            Strategy::Proportional => general_allocation(config, &proportional_strategy(config)),
            Strategy::Coefficients(c) => {
                if c.len() != config.num_users() {
                    return Err(Error::DimensionMismatch {
                        expected: config.num_users(),
                        actual: c.len(),
                    });
                }
                PowerAllocation::from_coefficients(c.clone())
            }
            Strategy::Epsilons(e) => {
                general_allocation(config, &EpsilonVector::new(e.clone())?)
            }
        }
    }

    /// Short name used in reports.
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::OmaEquivalent => "oma-equivalent",
            Strategy::Proportional => "proportional",
            Strategy::Coefficients(_) => "explicit-coefficients",
            Strategy::Epsilons(_) => "explicit-epsilons",
        }
    }
}

/// Monte Carlo controls.
#[derive(Debug, Clone)]
pub struct SimulationParams {
    pub trials: u64,
    pub seed: u64,
    pub grid_db: Vec<f64>,
}

/// A fully validated scenario with users already in decoding order.
#[derive(Debug, Clone)]
pub struct Scenario {
    config: SystemConfig,
    input_order: DecodingOrder,
    channel: ChannelSpec,
    strategy: Strategy,
    simulation: SimulationParams,
}

impl Scenario {
    /// Parses and validates a scenario from JSON text.
    pub fn from_json_str(text: &str) -> Result<Scenario> {
        let raw: RawScenario =
            serde_json::from_str(text).map_err(|e| Error::InvalidScenario(e.to_string()))?;
        Scenario::from_raw(raw)
    }

    /// Reads a scenario file.
    pub fn from_path<P: AsRef<Path>>(path: P) -> Result<Scenario> {
        let text = std::fs::read_to_string(path)?;
        Scenario::from_json_str(&text)
    }

    fn from_raw(raw: RawScenario) -> Result<Scenario> {
        let config = SystemConfig::new(
            raw.target_rates,
            raw.oma_fractions,
            db_to_linear(raw.transmit_snr_db),
        )?;
        let (config, input_order) = config.canonicalize();
        let k = config.num_users();

        // Per-user arrays in the file align with target_rates; reorder them
        // the same way the users were reordered.
        let permute = |values: &[f64]| -> Result<Vec<f64>> {
            if values.len() != k {
                return Err(Error::DimensionMismatch { expected: k, actual: values.len() });
            }
            Ok((1..=k)
                .map(|stage| values[input_order.user_at_stage(stage) - 1])
                .collect())
        };

        let channel = match raw.channel {
            None => ChannelSpec::Ordered,
            Some(c) => match c.model {
                1 => {
                    if c.betas.is_some() || c.tx_antennas.is_some() || c.rx_antennas.is_some() {
                        return Err(Error::InvalidScenario(
                            "channel model 1 takes no betas or antenna counts".into(),
                        ));
                    }
                    ChannelSpec::Ordered
                }
                2 => {
                    let betas = c.betas.ok_or_else(|| {
                        Error::InvalidScenario("channel model 2 requires betas".into())
                    })?;
                    ChannelSpec::Mimo {
                        betas: permute(&betas)?,
                        tx_antennas: c.tx_antennas.unwrap_or(2),
                        rx_antennas: c.rx_antennas.unwrap_or(3),
                    }
                }
                other => {
                    return Err(Error::InvalidScenario(format!(
                        "unknown channel model {other}, expected 1 or 2"
                    )))
                }
            },
        };

        let strategy = match raw.strategy {
            None => Strategy::OmaEquivalent,
            Some(RawStrategy::Named(name)) => match name.as_str() {
                "oma-equivalent" => Strategy::OmaEquivalent,
                "proportional" => Strategy::Proportional,
                other => {
                    return Err(Error::InvalidScenario(format!(
                        "unknown strategy {other:?}, expected \"oma-equivalent\", \
                         \"proportional\" or an explicit block"
                    )))
                }
            },
            Some(RawStrategy::Explicit { explicit }) => match (explicit.coefficients, explicit.epsilons) {
                (Some(c), None) => Strategy::Coefficients(permute(&c)?),
                (None, Some(e)) => Strategy::Epsilons(permute(&e)?),
                (Some(_), Some(_)) => {
                    return Err(Error::InvalidScenario(
                        "explicit strategy takes coefficients or epsilons, not both".into(),
                    ))
                }
                (None, None) => {
                    return Err(Error::InvalidScenario(
                        "explicit strategy requires coefficients or epsilons".into(),
                    ))
                }
            },
        };

        let simulation = {
            let raw = raw.simulation;
            let grid_spec = raw
                .as_ref()
                .and_then(|s| s.xi_grid_db.clone())
                .unwrap_or_else(|| DEFAULT_XI_GRID.to_string());
            SimulationParams {
                trials: raw.as_ref().and_then(|s| s.trials).unwrap_or(DEFAULT_TRIALS),
                seed: raw.as_ref().and_then(|s| s.seed).unwrap_or(DEFAULT_SEED),
                grid_db: parse_xi_grid(&grid_spec)?,
            }
        };

        Ok(Scenario { config, input_order, channel, strategy, simulation })
    }

    /// The system with users sorted into decoding order.
    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    /// Where each decoding stage sat in the scenario file (1-based).
    pub fn input_order(&self) -> &DecodingOrder {
        &self.input_order
    }

    pub fn channel_spec(&self) -> &ChannelSpec {
        &self.channel
    }

    pub fn strategy(&self) -> &Strategy {
        &self.strategy
    }

    pub fn simulation(&self) -> &SimulationParams {
        &self.simulation
    }

    /// Instantiates the channel statistics. Model 2 draws its precoder
    /// from the reserved stream of `seed`, so the same seed always yields
    /// the same channel.
    pub fn channel_model(&self, seed: u64) -> Result<ChannelModel> {
        match &self.channel {
            ChannelSpec::Ordered => Ok(ChannelModel::Ordered { num_users: self.config.num_users() }),
            ChannelSpec::Mimo { betas, tx_antennas, rx_antennas } => {
                Ok(ChannelModel::Mimo(MimoChannel::with_random_precoder(
                    *tx_antennas,
                    *rx_antennas,
                    betas.clone(),
                    seed,
                )?))
            }
        }
    }

    /// Resolves the configured strategy into a concrete allocation.
    pub fn resolve_allocation(&self) -> Result<PowerAllocation> {
        self.strategy.resolve(&self.config)
    }
}
