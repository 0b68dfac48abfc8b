use clap::{Args, Parser, Subcommand};
use nftrack::analysis::{beam_coherence_time, AngleMethod, BeamModel};
use nftrack::geometry::{approx_validity_radius, center_distance, regime_radii, PolarPosition};
use nftrack::sim::{load_scenario, write_figure, write_grid, write_montecarlo, write_track, Scenario};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "nftrack",
    version,
    about = "Near-field beam focusing analysis and beam tracking"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario file (flat TOML); defaults apply to missing keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for CSV and metadata files.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Print depth and angular limits, minimum displacement and coherence time at the query point.
    Analyze(Common),
    /// Write the search grid around the configured region.
    Grid(Common),
    /// Track a single random path.
    Track {
        #[command(flatten)]
        common: Common,
        /// Path index within the seeded batch.
        #[arg(long, default_value_t = 0)]
        index: u64,
    },
    /// Track a batch of random paths.
    Montecarlo(Common),
    /// Reproduce a figure or table preset.
    Fig {
        /// One of fig2, fig3, fig4, fig5, fig6, fig7, table1.
        name: String,
        #[command(flatten)]
        common: Common,
    },
}

fn scenario(c: &Common) -> nftrack::Result<Scenario> {
    let mut s = match &c.config {
        Some(path) => load_scenario(path)?,
        None => Scenario::default(),
    };
    if let Some(seed) = c.seed {
        s.seed = seed;
    }
    s.validate()?;
    Ok(s)
}

fn analyze(s: &Scenario) -> nftrack::Result<()> {
    let cfg = &s.dma;
    let q = &s.query;
    let p = PolarPosition::new(q.range, q.azimuth)?;
    let model = BeamModel::new(s.tracker.kappa, cfg)?;
    let lim = model.limits(p, AngleMethod::Numeric)?;
    let taylor = model.angle_taylor(p.phi).ok();
    let coh = beam_coherence_time(p, s.tracker.kappa, q.speed, cfg)?;
    let (fresnel, rayleigh) = regime_radii(cfg);
    println!(
        "position            r = {} m, phi = {} rad (centre distance {} m)",
        p.r,
        p.phi,
        center_distance(cfg, p)
    );
    println!("threshold           {} %", s.tracker.kappa);
    println!(
        "regime radii        fresnel {fresnel} m, rayleigh {rayleigh} m, approximation {} m",
        approx_validity_radius(cfg)
    );
    println!("divergence range    {} m", lim.range_limit);
    println!("depth towards array {} m", lim.delta_r_minus);
    println!("depth away          {} m", lim.delta_r_plus);
    println!("angular half-width  {} rad", lim.delta_phi);
    if let Some(t) = taylor {
        println!("  (small-angle      {t} rad)");
    }
    println!(
        "min displacement    {} m (closed form {} m)",
        coh.c_min,
        model.min_displacement(p)
    );
    println!("coherence time      {} s at {} m/s", coh.coherence_time, q.speed);
    Ok(())
}

fn run(cli: Cli) -> nftrack::Result<()> {
    let written = match &cli.command {
        Command::Analyze(c) => return analyze(&scenario(c)?),
        Command::Grid(c) => write_grid(&scenario(c)?, &c.out)?,
        Command::Track { common, index } => write_track(&scenario(common)?, *index, &common.out)?,
        Command::Montecarlo(c) => write_montecarlo(&scenario(c)?, &c.out)?,
        Command::Fig { name, common } => write_figure(name, &scenario(common)?, &common.out)?,
    };
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
