//! Adaptive tracking against a fixed-interval, uniform-grid baseline on the same paths.
//!
//! Usage: `baseline [trajectories]`

use nftrack::sim::{compare_with_baseline, Scenario};

fn main() -> nftrack::Result<()> {
    let mut scenario = Scenario::default();
    if let Some(n) = std::env::args().nth(1).and_then(|s| s.parse().ok()) {
        scenario.trajectories = n;
    }
    let (proposed, baseline, fixed) = compare_with_baseline(&scenario)?;
    println!(
        "baseline: interval {:.4} s, half-widths {:.3} m x {:.4} rad",
        fixed.interval, fixed.half_range, fixed.half_angle
    );
    println!(
        "mean gain  adaptive {:.4}  baseline {:.4}",
        proposed.mean_gain, baseline.mean_gain
    );
    println!(
        "sweeps     adaptive {}  baseline {}",
        proposed.estimations, baseline.estimations
    );
    println!(" r0 bin   adaptive/s  baseline/s  ratio");
    for (p, b) in proposed.buckets.iter().zip(&baseline.buckets) {
        if p.samples == 0 || b.samples == 0 {
            continue;
        }
        let (rp, rb) = (p.estimations as f64 / p.time, b.estimations as f64 / b.time);
        println!("{:5.1}  {:11.2} {:11.2} {:6.2}", p.r0_lo, rp, rb, rb / rp);
    }
    Ok(())
}
