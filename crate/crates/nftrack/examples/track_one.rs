//! Tracks one random user path and prints the run summary.

use nftrack::sim::{run_tracking, Scenario};

fn main() -> nftrack::Result<()> {
    let scenario = Scenario::default();
    let index = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let run = run_tracking(&scenario, index)?;
    let s = run.summary;
    println!("path duration   {:.3} s", s.duration);
    println!("sweeps          {}", s.estimations);
    println!("mean interval   {:.4} s", s.mean_interval);
    println!("mean gain       {:.4}", s.mean_gain);
    println!("2.5th pct gain  {:.4}", s.p2_5);
    println!("truncated       {}", run.truncated);
    for e in run.events.iter().take(5) {
        println!(
            "t={:.4}  true=({:.2} m, {:.3})  est=({:.2} m, {:.3})  arcs={} samples={}",
            e.t, e.truth.r, e.truth.phi, e.estimate.r, e.estimate.phi, e.arcs, e.samples
        );
    }
    Ok(())
}
