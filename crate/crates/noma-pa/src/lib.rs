//! Power allocation for downlink NOMA systems with per-user target rates.
//!
//! A base station serves `K` users by superposing their signals on one
//! carrier. Each receiver runs successive interference cancellation:
//! user `n` decodes the signals of users `1..n` in turn, subtracting each
//! one, before decoding its own. Given a per-user target rate `R_n` and a
//! TDMA reference schedule with time fractions `tau_n`, this crate answers
//! four questions:
//!
//! * How much of the unit power budget buys every user the same outage
//!   behaviour it would have under TDMA? ([`oma_equivalent`])
//! * How should leftover power be spent, and how much can each user get
//!   before the budget or the SIC chain breaks?
//!   ([`general_allocation`], [`proportional_strategy`], [`epsilon_upper_bound`])
//! * In which order should users be decoded? ([`ordering::rank_orders`]
//!   shows that sorting by normalized rate `R_n / tau_n` minimizes the
//!   required power.)
//! * What outage probability does an allocation achieve? Exact curves for
//!   two fading models ([`outage::analytic_outage`]) and a deterministic
//!   parallel Monte Carlo engine ([`outage::montecarlo_outage`]) that
//!   produces identical results for any worker thread count.
//!
//! # Quick start
//!
//! ```
//! use noma_pa::{SystemConfig, db_to_linear};
//! use noma_pa::allocation::{oma_equivalent, diagnose};
//!
//! let config = SystemConfig::new(
//!     vec![0.5, 1.2, 0.9, 1.3, 1.1],
//!     vec![0.15, 0.30, 0.20, 0.20, 0.15],
//!     db_to_linear(30.0),
//! )?;
//! let (config, _) = config.canonicalize();
//!
//! let baseline = oma_equivalent(&config);
//! assert!(baseline.total < 1.0);
//! assert!(baseline.headroom > 0.0);
//!
//! let alloc = baseline.to_power_allocation()?;
//! let report = diagnose(&alloc, &config)?;
//! assert!(report.no_certain_outage());
//! # Ok::<(), noma_pa::Error>(())
//! ```
//!
//! # Interfaces
//!
//! Most workflows start from a [`Scenario`] file (JSON) describing rates,
//! fractions, SNR, channel statistics, strategy and simulation controls;
//! the `noma-pa` binary exposes the `allocate`, `orders` and `outage`
//! subcommands on top of it. The `examples/` directory walks through each
//! capability:
//!
//! * `allocation_basics` builds the OMA-equivalent baseline and reads its
//!   diagnostics.
//! * `headroom_strategies` compares ways of spending the leftover budget.
//! * `decoding_orders` ranks all decoding orders and inspects swap costs.
//! * `certain_outage` shows what happens when interference ceilings are
//!   violated.
//! * `outage_sweep` reproduces analytic and simulated outage curves.
//! * `stage_failure_curves` breaks a user's outage down by SIC stage.

pub mod allocation;
pub mod channel;
pub mod cli;
pub mod error;
pub mod model;
pub mod ordering;
pub mod outage;
pub mod scenario;

pub use allocation::{
    diagnose, epsilon_upper_bound, general_allocation, interference_ceiling, oma_equivalent,
    proportional_strategy, AllocationDiagnostics, OmaEquivalentAllocation,
};
pub use channel::{ChannelModel, MimoChannel};
pub use error::{Error, Result};
pub use model::{
    db_to_linear, linear_to_db, DecodingOrder, EpsilonVector, PowerAllocation, SystemConfig,
};
pub use ordering::{rank_orders, OrderEnergyReport};
pub use outage::{
    analytic_outage, montecarlo_outage, noma_thresholds, oma_threshold, sweep, Mode, OutageReport,
    OutageThresholds,
};
pub use scenario::{Scenario, Strategy};
