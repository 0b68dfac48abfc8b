//! Non-uniform polar search grid around a predicted position.

use nftrack::geometry::{DmaConfig, PolarPosition};
use nftrack::grid::{build_grid, SearchRegion};
use std::f64::consts::FRAC_PI_2;

fn main() -> nftrack::Result<()> {
    let cfg = DmaConfig::reference();
    let region = SearchRegion::new(PolarPosition::new(70.0, FRAC_PI_2)?, 30.0)?;
    let grid = build_grid(region, 80.0, &cfg)?;
    let stats = grid.stats();
    println!(
        "{} arcs, {} samples kept of {} on the unfiltered sweep",
        stats.arcs, stats.total, stats.product
    );
    for arc in &grid.arcs {
        let first = arc.azimuths.first().map_or(f64::NAN, |z| z.angle);
        let last = arc.azimuths.last().map_or(f64::NAN, |z| z.angle);
        println!(
            "  r = {:6.2} m  [-{:.2}, +{:.2}]  {:2} azimuths from {:.3} to {:.3} rad",
            arc.range,
            arc.minus,
            arc.plus,
            arc.azimuths.len(),
            first,
            last
        );
    }

    let probe = PolarPosition::new(63.0, 1.5)?;
    if let Some((a, i)) = grid.covering(probe) {
        let s = grid.sample(a, i);
        println!(
            "({:.1} m, {:.2} rad) falls in the region of sample ({:.2} m, {:.3} rad)",
            probe.r, probe.phi, s.r, s.phi
        );
    }
    Ok(())
}
