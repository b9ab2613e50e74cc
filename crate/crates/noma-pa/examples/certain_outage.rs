//! What happens when the interference a user faces exceeds its ceiling:
//! the SIC chain breaks at some stage regardless of the channel, and every
//! user from the first flagged one onward is in outage with probability 1
//! at any SNR.
//!
//! Run with: cargo run --example certain_outage

use noma_pa::allocation::diagnose;
use noma_pa::outage::{analytic_outage, noma_thresholds, Mode};
use noma_pa::{db_to_linear, ChannelModel, PowerAllocation, SystemConfig};

fn main() -> Result<(), noma_pa::Error> {
    let config = SystemConfig::new(
        vec![0.5, 1.2, 0.9, 1.3, 1.1],
        vec![0.15, 0.30, 0.20, 0.20, 0.15],
        db_to_linear(40.0),
    )?;
    let (config, _) = config.canonicalize();

    // This vector respects the unit budget but starves user 1: the power
    // left behind user 2, A_2 = 0.31, exceeds the ceiling 2^-(R_1+R_2).
    let alloc = PowerAllocation::from_coefficients(vec![0.34, 0.35, 0.11, 0.10, 0.10])?;
    let report = diagnose(&alloc, &config)?;

    println!("interference vs ceiling per user:");
    for n in 0..config.num_users() - 1 {
        println!(
            "  A_{} = {:.6}  ceiling {:.6}  {}",
            n + 1,
            alloc.interference()[n],
            report.interference_ceilings[n],
            if report.certain_outage[n] { "VIOLATED" } else { "ok" }
        );
    }

    // The violation does not necessarily break the violating stage itself;
    // it guarantees a break somewhere earlier in the chain.
    println!("\ndecoding margins (nonpositive means the stage can never succeed):");
    for (n, m) in report.margins.iter().enumerate() {
        println!("  stage {}: {:+.6}", n + 1, m);
    }

    println!("\neffective thresholds and exact outage at 40 dB:");
    let thresholds = noma_thresholds(&config, &alloc)?;
    let channel = ChannelModel::Ordered { num_users: config.num_users() };
    let outage = analytic_outage(&config, &alloc, &channel, Mode::Noma)?;
    for (t, p) in thresholds.iter().zip(&outage) {
        println!(
            "  user {}: threshold {}  P(outage) = {}",
            t.user,
            if t.effective.is_finite() { format!("{:.6e}", t.effective) } else { "inf".into() },
            p
        );
    }
    println!("\nraising the SNR cannot help: the thresholds above are infinite.");
    Ok(())
}
