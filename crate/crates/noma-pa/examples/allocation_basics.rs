//! Build the OMA-equivalent power allocation for a five-user downlink and
//! inspect its feasibility diagnostics.
//!
//! Run with: cargo run --example allocation_basics

use noma_pa::allocation::{diagnose, interference_ceiling, oma_equivalent};
use noma_pa::{db_to_linear, SystemConfig};

fn main() -> Result<(), noma_pa::Error> {
    // Five users, each with a target rate (bits/s/Hz) and the time fraction
    // it would get under TDMA. Transmit SNR is 30 dB.
    let config = SystemConfig::new(
        vec![0.5, 1.2, 0.9, 1.3, 1.1],
        vec![0.15, 0.30, 0.20, 0.20, 0.15],
        db_to_linear(30.0),
    )?;
    let (config, input_order) = config.canonicalize();

    println!("decoding order (positions in the input): {}", input_order.label());
    println!("normalized rates R_n / tau_n:");
    for (n, r) in config.normalized_rates().values().iter().enumerate() {
        println!("  user {}: {:.4}", n + 1, r);
    }

    // The cheapest allocation that gives every user the same outage it
    // would see under TDMA.
    let baseline = oma_equivalent(&config);
    println!("\nOMA-equivalent coefficients:");
    for (n, a) in baseline.coefficients.iter().enumerate() {
        println!("  a_{} = {:.6}", n + 1, a);
    }
    println!("total spent: {:.6}", baseline.total);
    println!("headroom left for outage improvements: {:.6}", baseline.headroom);

    let alloc = baseline.to_power_allocation()?;
    let report = diagnose(&alloc, &config)?;
    println!("\nper-user decoding margins:");
    for (n, m) in report.margins.iter().enumerate() {
        println!("  user {}: {:.6}", n + 1, m);
    }
    println!("all margins positive: {}", report.margin_positive.iter().all(|&ok| ok));
    println!("well behaved (own stage dominates each SIC chain): {}", report.is_wellbehaved());

    println!("\ninterference ceilings (upper bound on A_n for finite outage):");
    for n in 1..config.num_users() {
        let ceiling = interference_ceiling(config.target_rates(), n)?;
        println!(
            "  A_{} = {:.6}  <=  {:.6}  ({})",
            n,
            alloc.interference()[n - 1],
            ceiling,
            if alloc.interference()[n - 1] <= ceiling { "ok" } else { "violated" }
        );
    }
    Ok(())
}
