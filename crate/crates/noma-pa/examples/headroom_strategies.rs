//! Compare ways of spending the power left over after every user has
//! reached OMA-equivalent performance: keep it, split it proportionally,
//! or grant hand-picked per-stage SINR surpluses.
//!
//! Run with: cargo run --example headroom_strategies

use noma_pa::allocation::{
    epsilon_upper_bound, general_allocation, oma_equivalent, proportional_strategy,
};
use noma_pa::outage::noma_thresholds;
use noma_pa::{db_to_linear, EpsilonVector, SystemConfig};

fn main() -> Result<(), noma_pa::Error> {
    let config = SystemConfig::new(
        vec![0.5, 1.2, 0.9, 1.3, 1.1],
        vec![0.15, 0.30, 0.20, 0.20, 0.15],
        db_to_linear(30.0),
    )?;
    let (config, _) = config.canonicalize();
    let k = config.num_users();

    let baseline = oma_equivalent(&config);
    println!("headroom after the OMA-equivalent baseline: {:.6}\n", baseline.headroom);

    // Strategy 1: spend nothing extra.
    let keep = baseline.to_power_allocation()?;

    // Strategy 2: split the headroom in proportion to each stage's SINR
    // target, compensation included, so the budget is used up exactly.
    let grants = proportional_strategy(&config);
    let proportional = general_allocation(&config, &grants)?;
    println!("proportional per-stage surpluses and their admissible maxima:");
    println!("  eps_1 = {:.6}  (first stage is only limited by the budget)", grants.values()[0]);
    for n in 2..=k {
        let bound = epsilon_upper_bound(&config, &grants.values()[..n - 1], n)?;
        println!("  eps_{} = {:.6}  <=  {:.6}", n, grants.values()[n - 1], bound);
    }

    // Strategy 3: push everything to the last user. Its surplus is capped
    // by the budget bound, so ask for the cap.
    let mut favored = vec![0.0; k];
    favored[k - 1] = epsilon_upper_bound(&config, &favored[..k - 1], k)?;
    let last_user = general_allocation(&config, &EpsilonVector::new(favored)?)?;

    println!("\ntotals: keep {:.6}, proportional {:.6}, favor-last {:.6}",
        keep.total(), proportional.total(), last_user.total());

    // Lower outage thresholds mean fewer channel states in outage.
    println!("\neffective gain thresholds at 30 dB (lower is better):");
    println!("{:>6} {:>14} {:>14} {:>14}", "user", "keep", "proportional", "favor-last");
    let t_keep = noma_thresholds(&config, &keep)?;
    let t_prop = noma_thresholds(&config, &proportional)?;
    let t_last = noma_thresholds(&config, &last_user)?;
    for n in 0..k {
        println!(
            "{:>6} {:>14.6e} {:>14.6e} {:>14.6e}",
            n + 1,
            t_keep[n].effective,
            t_prop[n].effective,
            t_last[n].effective
        );
    }
    Ok(())
}
