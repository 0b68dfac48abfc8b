//! Depth of focus, beamwidth and coherence time of a focused beam.

use nftrack::analysis::{beam_coherence_time, AngleMethod, BeamModel, RootCache};
use nftrack::geometry::{regime_radii, DmaConfig, PolarPosition};

fn main() -> nftrack::Result<()> {
    let cfg = DmaConfig::reference();
    let (fresnel, rayleigh) = regime_radii(&cfg);
    println!("Fresnel distance {fresnel:.2} m, Rayleigh distance {rayleigh:.1} m");

    for kappa in [50.0, 80.0, 99.0] {
        let roots = RootCache::solve(kappa, &cfg)?;
        let model = BeamModel::new(kappa, &cfg)?;
        println!(
            "kappa {kappa:>4}: range root {:.5}, angle root {:.5}, depth diverges beyond {:.1} m",
            roots.a_kappa,
            roots.zeta_kappa,
            model.range_limit()
        );
    }

    let model = BeamModel::new(50.0, &cfg)?;
    println!("\n  r [m]   depth- [m]  depth+ [m]  width(pi/4) [rad]");
    for r in [5.0, 10.0, 20.0, 40.0, 80.0, 160.0, 320.0, 400.0] {
        let lim = model.limits(
            PolarPosition::new(r, std::f64::consts::FRAC_PI_4)?,
            AngleMethod::Numeric,
        )?;
        println!(
            "{r:7.1} {:11.4} {:11.4} {:12.5}",
            lim.delta_r_minus, lim.delta_r_plus, lim.delta_phi
        );
    }

    let p = PolarPosition::new(20.0, 1.2)?;
    let coh = beam_coherence_time(p, 50.0, 10.0, &cfg)?;
    println!(
        "\nAt (20 m, 1.2 rad) a 10 m/s user keeps half the gain for {:.1} ms (worst step {:.2} m radially)",
        1e3 * coh.coherence_time,
        coh.worst.d_min
    );
    Ok(())
}
