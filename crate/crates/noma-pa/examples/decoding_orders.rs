//! Enumerate every SIC decoding order for a three-user system and rank
//! them by the power needed to reach OMA-equivalent performance. Decoding
//! in nondecreasing normalized-rate order is always cheapest, and any
//! other order can be repaired by profitable adjacent swaps.
//!
//! Run with: cargo run --example decoding_orders

use noma_pa::ordering::{adjacent_swap_delta, allocation_for_order, rank_orders};
use noma_pa::{db_to_linear, DecodingOrder, SystemConfig};

fn main() -> Result<(), noma_pa::Error> {
    let config = SystemConfig::new(
        vec![0.5, 1.0, 1.5],
        vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
        db_to_linear(30.0),
    )?;
    let (config, _) = config.canonicalize();

    println!("all 3! = 6 decoding orders, cheapest first:");
    println!("{:>8} {:>14} {:>10}", "order", "total power", "feasible");
    for report in rank_orders(&config, 6)? {
        println!(
            "{:>8} {:>14.6} {:>10}",
            report.order.label(),
            report.total_power,
            report.is_feasible()
        );
    }

    // Start from the worst order and walk back to the best one by swapping
    // adjacent stages whenever the swap lowers the total.
    let mut order = DecodingOrder::new(vec![3, 2, 1])?;
    println!("\nrepairing the reversed order by adjacent swaps:");
    loop {
        let total = allocation_for_order(&config, &order)?.total_power;
        println!("  {}  total {:.6}", order.label(), total);
        let mut best_stage = None;
        for stage in 1..config.num_users() {
            // Positive delta: swapping stage and stage+1 saves power.
            if adjacent_swap_delta(&config, &order, stage)? > 0.0 {
                best_stage = Some(stage);
                break;
            }
        }
        match best_stage {
            Some(stage) => {
                let mut p = order.as_slice().to_vec();
                p.swap(stage - 1, stage);
                order = DecodingOrder::new(p)?;
            }
            None => break,
        }
    }
    println!("no profitable swap remains; this is the canonical order");
    Ok(())
}
