//! Runs a batch of random paths and prints the pooled gain statistics.
//!
//! Usage: `monte_carlo [trajectories] [kappa]`

use nftrack::sim::{monte_carlo, Scenario};

fn main() -> nftrack::Result<()> {
    let mut args = std::env::args().skip(1);
    let mut scenario = Scenario::default();
    if let Some(n) = args.next().and_then(|s| s.parse().ok()) {
        scenario.trajectories = n;
    }
    if let Some(k) = args.next().and_then(|s| s.parse().ok()) {
        scenario.tracker.kappa = k;
    }
    let (runs, m) = monte_carlo(&scenario)?;
    println!("kappa {}  trajectories {}", scenario.tracker.kappa, m.trajectories);
    println!(
        "mean gain {:.4}  2.5th pct {:.4}  97.5th pct {:.4}",
        m.mean_gain, m.p2_5, m.p97_5
    );
    println!(
        "mean interval {:.4} s over {} sweeps, {} truncated",
        m.mean_interval, m.estimations, m.truncated
    );
    let worst = runs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.summary.mean_gain.total_cmp(&b.1.summary.mean_gain))
        .map(|(i, r)| (i, r.summary.mean_gain));
    if let Some((i, g)) = worst {
        println!("worst path #{i}: mean gain {g:.4}");
    }
    println!("r0 bucket   mean gain   sweeps/s");
    for b in m.buckets.iter().filter(|b| b.samples > 0) {
        println!(
            "{:5.1}  {:10.4}  {:9.2}",
            b.r0_lo,
            b.mean_gain,
            b.estimations as f64 / b.time
        );
    }
    Ok(())
}
