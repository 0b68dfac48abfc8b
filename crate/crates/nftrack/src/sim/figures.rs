//! Data presets behind each published figure and table, written as CSV
//! with a plain-text metadata sidecar.

use super::{compare_with_baseline, monte_carlo, run_tracking, Scenario, BUCKET_WIDTH};
use crate::analysis::BeamModel;
use crate::beamformer::{relative_gain, scanned_depth_limits};
use crate::error::{Error, Result};
use crate::geometry::{range_from_center, regime_radii, DmaConfig, PolarPosition};
use crate::grid::{build_grid, radial_bound, SearchRegion};
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Preset names accepted by [`write_figure`].
pub const FIGURES: [&str; 7] = ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "table1"];

/// Attenuation cases: lossless, Duroid-class and RO3003-class microstrips.
pub const FIG2_ATTENUATIONS: [f64; 3] = [0.0, 0.7381, 0.8629];
/// Element counts swept for the lossy comparison (capped by `fig2_max_elements`).
pub const FIG2_ELEMENTS: [usize; 11] = [200, 400, 800, 1200, 1600, 2000, 2800, 4000, 6000, 8000, 10000];
/// Azimuths averaged over in the depth and combined-mismatch sweeps.
pub const SWEEP_AZIMUTHS: [f64; 7] = [
    PI / 6.0,
    PI / 4.0,
    PI / 3.0,
    PI / 2.0,
    2.0 * PI / 3.0,
    3.0 * PI / 4.0,
    5.0 * PI / 6.0,
];
/// Centre distances of the `table1` preset.
pub const TABLE1_DISTANCES: [f64; 5] = [5.0, 15.0, 25.0, 35.0, 45.0];

/// In-memory CSV: header plus rows of already formatted cells.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Shortest round-trip decimal form; `inf` and `NaN` spelled out.
pub fn num(x: f64) -> String {
    format!("{x}")
}

/// Lossless closed-form versus scanned depth limits for one array size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig2Row {
    pub n_elements: usize,
    pub attenuation: f64,
    pub closed_minus: f64,
    pub closed_plus: f64,
    pub scanned_minus: f64,
    pub scanned_plus: f64,
}

/// Depth limits at 28 m, pi/4 for each element count up to `max_elements`.
pub fn fig2_rows(max_elements: usize, kappa: f64) -> Result<Vec<Fig2Row>> {
    let p = PolarPosition::new(28.0, PI / 4.0)?;
    let mut rows = Vec::new();
    for &n in FIG2_ELEMENTS.iter().filter(|&&n| n <= max_elements) {
        let base = DmaConfig::reference().with_elements(n).centered();
        let model = BeamModel::new(kappa, &base)?;
        let (closed_minus, closed_plus) = (model.depth_minus(p.r), model.depth_plus(p.r));
        for &alpha in &FIG2_ATTENUATIONS {
            let cfg = base.clone().with_attenuation(alpha);
            let step = (0.05 * closed_minus).max(1e-3);
            let (scanned_minus, scanned_plus) = scanned_depth_limits(&cfg, p, kappa, step, 1e4)?;
            rows.push(Fig2Row {
                n_elements: n,
                attenuation: alpha,
                closed_minus,
                closed_plus,
                scanned_minus,
                scanned_plus,
            });
        }
    }
    Ok(rows)
}

/// Min, mean and max of a sample set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spread {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

impl Spread {
    pub fn of(v: &[f64]) -> Spread {
        if v.is_empty() {
            return Spread {
                min: f64::NAN,
                mean: f64::NAN,
                max: f64::NAN,
            };
        }
        Spread {
            min: v.iter().copied().fold(f64::INFINITY, f64::min),
            mean: v.iter().sum::<f64>() / v.len() as f64,
            max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    pub fn width(&self) -> f64 {
        self.max - self.min
    }
}

/// Gain at the depth limits, across [`SWEEP_AZIMUTHS`], at one distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig3Row {
    pub r0: f64,
    pub depth_minus: f64,
    pub depth_plus: f64,
    pub gain_minus: Spread,
    /// All NaN when the outward limit is unbounded.
    pub gain_plus: Spread,
}

/// Log-spaced centre distances from the Fresnel distance to `hi_fraction` of the Rayleigh distance.
pub fn distance_sweep(cfg: &DmaConfig, points: usize, hi_fraction: f64) -> Vec<f64> {
    let (fresnel, rayleigh) = regime_radii(cfg);
    let (lo, hi) = (fresnel.ln(), (hi_fraction * rayleigh).ln());
    (0..points)
        .map(|k| (lo + (hi - lo) * k as f64 / (points - 1).max(1) as f64).exp())
        .collect()
}

pub fn fig3_rows(cfg: &DmaConfig, kappa: f64, distances: &[f64]) -> Result<Vec<Fig3Row>> {
    let model = BeamModel::new(kappa, cfg)?;
    distances
        .iter()
        .map(|&r0| {
            let r = range_from_center(cfg, r0)?;
            let (dm, dp) = (model.depth_minus(r), model.depth_plus(r));
            let mut minus = Vec::new();
            let mut plus = Vec::new();
            for &phi in &SWEEP_AZIMUTHS {
                let p = PolarPosition { r, phi };
                minus.push(relative_gain(cfg, p, PolarPosition { r: r - dm, phi }));
                if dp.is_finite() {
                    plus.push(relative_gain(cfg, p, PolarPosition { r: r + dp, phi }));
                }
            }
            Ok(Fig3Row {
                r0,
                depth_minus: dm,
                depth_plus: dp,
                gain_minus: Spread::of(&minus),
                gain_plus: Spread::of(&plus),
            })
        })
        .collect()
}

/// Range of the stand-in focus used once the outward depth limit is unbounded.
pub const FAR_FOCUS: f64 = 1e6;

/// Gains under range, angle and combined mismatch at one distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig4Row {
    pub r0: f64,
    /// Whether the outward limit is unbounded and the far focus stands in for it.
    pub beyond_limit: bool,
    pub range_only: Spread,
    pub angle_only: Spread,
    pub combined: Spread,
}

/// Focus moved outward by the depth limit and upward by the angular limit.
///
/// Past the divergence range the outward limit is infinite; the focus then
/// sits at [`FAR_FOCUS`], the limit of a beam focused ever further out.
pub fn fig4_rows(cfg: &DmaConfig, kappa: f64, distances: &[f64]) -> Result<Vec<Fig4Row>> {
    let model = BeamModel::new(kappa, cfg)?;
    distances
        .iter()
        .map(|&r0| {
            let r = range_from_center(cfg, r0)?;
            let dp = model.depth_plus(r);
            let focus_r = if dp.is_finite() { r + dp } else { FAR_FOCUS };
            let (mut rg, mut ang, mut both) = (Vec::new(), Vec::new(), Vec::new());
            for &phi in &SWEEP_AZIMUTHS {
                let up = model.angle_sides(phi).1;
                if !up.is_finite() {
                    continue;
                }
                let p = PolarPosition { r, phi };
                rg.push(relative_gain(cfg, p, PolarPosition { r: focus_r, phi }));
                ang.push(relative_gain(cfg, p, PolarPosition { r, phi: phi + up }));
                both.push(relative_gain(
                    cfg,
                    p,
                    PolarPosition {
                        r: focus_r,
                        phi: phi + up,
                    },
                ));
            }
            Ok(Fig4Row {
                r0,
                beyond_limit: !dp.is_finite(),
                range_only: Spread::of(&rg),
                angle_only: Spread::of(&ang),
                combined: Spread::of(&both),
            })
        })
        .collect()
}

/// Azimuth-averaged sample counts at one distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Row {
    pub r0: f64,
    /// Mean radial sample count.
    pub arcs: f64,
    pub arcs_bound: f64,
    /// Mean of arc count times master-ladder length.
    pub total: f64,
    /// Mean number of samples kept after per-arc filtering.
    pub kept: f64,
    pub uniform_arcs: f64,
    pub uniform_total: f64,
}

/// Samples of a constant-step ladder `-half, -half + 2h, ...` covering `[-half, half]`.
pub fn uniform_count(half: f64, h: f64) -> usize {
    let mut x = -half;
    let mut n = 1;
    while x + h <= half {
        x += 2.0 * h;
        n += 1;
    }
    n
}

/// Grid sizes for regions of radius `c_kappa (1 + e_c)` at distance `r0`,
/// averaged over `azimuths` evenly spaced estimates on `[0, pi]`.
///
/// The uniform comparison grid uses the finest adaptive widths of the sweep:
/// the inward depth limit at 5 m and the broadside angular limit.
pub fn table1_row(cfg: &DmaConfig, r0: f64, kappa: f64, delta: f64, e_c: f64, azimuths: usize) -> Result<Table1Row> {
    if azimuths < 2 {
        return Err(Error::Domain("need at least two azimuths to average".into()));
    }
    let coarse = BeamModel::new(kappa, cfg)?;
    let fine = BeamModel::new(delta, cfg)?;
    let r = range_from_center(cfg, r0)?;
    let h_r = fine.depth_minus(range_from_center(cfg, 5.0)?);
    let h_phi = fine.angle_numeric(PI / 2.0);
    let (mut arcs, mut total, mut kept, mut u_arcs, mut u_total) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for k in 0..azimuths {
        let phi = PI * k as f64 / (azimuths - 1) as f64;
        let center = PolarPosition { r, phi };
        let region = SearchRegion::new(center, coarse.min_displacement(center) * (1.0 + e_c))?;
        let stats = build_grid(region, delta, cfg)?.stats();
        arcs += stats.arcs as f64;
        total += stats.product as f64;
        kept += stats.total as f64;
        let ur = uniform_count(region.radius, h_r);
        u_arcs += ur as f64;
        u_total += (ur * uniform_count(region.angular_half_extent(), h_phi)) as f64;
    }
    let n = azimuths as f64;
    Ok(Table1Row {
        r0,
        arcs: arcs / n,
        arcs_bound: radial_bound(r, kappa, delta, cfg, e_c)?,
        total: total / n,
        kept: kept / n,
        uniform_arcs: u_arcs / n,
        uniform_total: u_total / n,
    })
}

fn spread_cells(s: &Spread) -> [String; 3] {
    [num(s.mean), num(s.min), num(s.max)]
}

fn fig2_table(s: &Scenario) -> Result<Table> {
    let mut t = Table::new(&[
        "n_elements",
        "attenuation",
        "closed_minus",
        "closed_plus",
        "scanned_minus",
        "scanned_plus",
    ]);
    for r in fig2_rows(s.fig2_max_elements, s.tracker.kappa)? {
        t.push(vec![
            r.n_elements.to_string(),
            num(r.attenuation),
            num(r.closed_minus),
            num(r.closed_plus),
            num(r.scanned_minus),
            num(r.scanned_plus),
        ]);
    }
    Ok(t)
}

fn fig3_table(s: &Scenario) -> Result<Table> {
    let cfg = s.dma.clone().centered();
    let rows = fig3_rows(&cfg, s.tracker.kappa, &distance_sweep(&cfg, 40, 0.15))?;
    let mut t = Table::new(&[
        "r0",
        "depth_minus",
        "depth_plus",
        "gain_minus_mean",
        "gain_minus_min",
        "gain_minus_max",
        "gain_plus_mean",
        "gain_plus_min",
        "gain_plus_max",
    ]);
    for r in rows {
        let mut row = vec![num(r.r0), num(r.depth_minus), num(r.depth_plus)];
        row.extend(spread_cells(&r.gain_minus));
        row.extend(spread_cells(&r.gain_plus));
        t.push(row);
    }
    Ok(t)
}

fn fig4_table(s: &Scenario) -> Result<Table> {
    let cfg = s.dma.clone().centered();
    let rows = fig4_rows(&cfg, s.tracker.kappa, &distance_sweep(&cfg, 40, 0.15))?;
    let mut t = Table::new(&[
        "r0",
        "beyond_limit",
        "range_mean",
        "range_min",
        "range_max",
        "angle_mean",
        "angle_min",
        "angle_max",
        "combined_mean",
        "combined_min",
        "combined_max",
    ]);
    for r in rows {
        let mut row = vec![num(r.r0), (r.beyond_limit as u8).to_string()];
        row.extend(spread_cells(&r.range_only));
        row.extend(spread_cells(&r.angle_only));
        row.extend(spread_cells(&r.combined));
        t.push(row);
    }
    Ok(t)
}

/// Grid dump: one row per kept sample.
pub fn grid_table(s: &Scenario) -> Result<Table> {
    let q = &s.query;
    let region = SearchRegion::new(PolarPosition::new(q.grid_range, q.grid_azimuth)?, q.grid_radius)?;
    let grid = build_grid(region, q.grid_resolution, &s.dma)?;
    let mut t = Table::new(&[
        "arc",
        "range",
        "azimuth",
        "depth_minus",
        "depth_plus",
        "angle_down",
        "angle_up",
    ]);
    for (i, arc) in grid.arcs.iter().enumerate() {
        for z in &arc.azimuths {
            t.push(vec![
                i.to_string(),
                num(arc.range),
                num(z.angle),
                num(arc.minus),
                num(arc.plus),
                num(z.down),
                num(z.up),
            ]);
        }
    }
    Ok(t)
}

fn fig6_tables(s: &Scenario) -> Result<(Table, Table)> {
    let mut summary = Table::new(&[
        "kappa",
        "mean_gain",
        "p2_5",
        "p97_5",
        "mean_interval",
        "estimations",
        "truncated",
    ]);
    let mut series = Table::new(&["kappa", "t", "active", "mean", "p2_5", "p97_5"]);
    for &kappa in &s.kappa_sweep {
        let (_, m) = monte_carlo(&s.with_kappa(kappa))?;
        summary.push(vec![
            num(kappa),
            num(m.mean_gain),
            num(m.p2_5),
            num(m.p97_5),
            num(m.mean_interval),
            m.estimations.to_string(),
            m.truncated.to_string(),
        ]);
        for p in &m.series {
            series.push(vec![
                num(kappa),
                num(p.t),
                p.active.to_string(),
                num(p.mean),
                num(p.p2_5),
                num(p.p97_5),
            ]);
        }
    }
    Ok((summary, series))
}

fn fig7_table(s: &Scenario) -> Result<(Table, String)> {
    let (proposed, baseline, fixed) = compare_with_baseline(s)?;
    let mut t = Table::new(&[
        "r0_lo",
        "r0_hi",
        "proposed_gain",
        "baseline_gain",
        "proposed_rate",
        "baseline_rate",
        "rate_ratio",
    ]);
    let n = proposed.buckets.len().max(baseline.buckets.len());
    for b in 0..n {
        let (p, q) = (proposed.buckets.get(b), baseline.buckets.get(b));
        if p.map_or(0, |x| x.samples) == 0 && q.map_or(0, |x| x.samples) == 0 {
            continue;
        }
        let rate = |x: Option<&super::Bucket>| x.map_or(f64::NAN, |x| x.estimations as f64 / x.time);
        let (pr, br) = (rate(p), rate(q));
        t.push(vec![
            num(b as f64 * BUCKET_WIDTH),
            num((b + 1) as f64 * BUCKET_WIDTH),
            num(p.map_or(f64::NAN, |x| x.mean_gain)),
            num(q.map_or(f64::NAN, |x| x.mean_gain)),
            num(pr),
            num(br),
            num(br / pr),
        ]);
    }
    let note = format!(
        "fixed_interval = {}\nfixed_half_range = {}\nfixed_half_angle = {}\nproposed_mean_gain = {}\nbaseline_mean_gain = {}\nproposed_estimations = {}\nbaseline_estimations = {}\n",
        fixed.interval, fixed.half_range, fixed.half_angle, proposed.mean_gain, baseline.mean_gain,
        proposed.estimations, baseline.estimations
    );
    Ok((t, note))
}

fn table1_table(s: &Scenario) -> Result<Table> {
    let p = &s.tracker;
    // The table sizes regions of radius exactly c_kappa, so no search margin.
    let mut t = Table::new(&[
        "r0",
        "arcs",
        "arcs_bound",
        "total",
        "kept",
        "uniform_arcs",
        "uniform_total",
    ]);
    for &r0 in &TABLE1_DISTANCES {
        let r = table1_row(&s.dma, r0, p.kappa, p.delta, 0.0, 61)?;
        t.push(vec![
            num(r.r0),
            num(r.arcs),
            num(r.arcs_bound),
            num(r.total),
            num(r.kept),
            num(r.uniform_arcs),
            num(r.uniform_total),
        ]);
    }
    Ok(t)
}

/// Plain-text parameter dump written next to each CSV.
pub fn metadata(name: &str, s: &Scenario, extra: &str) -> String {
    let mut m = String::new();
    let _ = writeln!(m, "preset = {name}");
    let _ = writeln!(m, "build = nftrack {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(m, "seed = {}", s.seed);
    let _ = writeln!(m, "{:#?}", s);
    m.push_str(extra);
    m
}

/// Writes `<name>.csv` (plus any companion CSV) and `<name>.meta.txt` into `dir`.
pub fn write_figure(name: &str, s: &Scenario, dir: &Path) -> Result<Vec<PathBuf>> {
    s.validate()?;
    let mut tables: Vec<(String, Table)> = Vec::new();
    let mut extra = String::new();
    match name {
        "fig2" => tables.push((name.into(), fig2_table(s)?)),
        "fig3" => tables.push((name.into(), fig3_table(s)?)),
        "fig4" => tables.push((name.into(), fig4_table(s)?)),
        "fig5" => tables.push((name.into(), grid_table(s)?)),
        "fig6" => {
            let (a, b) = fig6_tables(s)?;
            tables.push((name.into(), a));
            tables.push((format!("{name}_series"), b));
        }
        "fig7" => {
            let (t, note) = fig7_table(s)?;
            tables.push((name.into(), t));
            extra = note;
        }
        "table1" => tables.push((name.into(), table1_table(s)?)),
        other => {
            return Err(Error::Preset(format!(
                "unknown preset {other:?}; expected one of {}",
                FIGURES.join(", ")
            )))
        }
    }
    write_tables(name, s, dir, &tables, &extra)
}

fn write_tables(name: &str, s: &Scenario, dir: &Path, tables: &[(String, Table)], extra: &str) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut out = Vec::new();
    for (stem, t) in tables {
        let path = dir.join(format!("{stem}.csv"));
        t.write(&path)?;
        out.push(path);
    }
    let meta = dir.join(format!("{name}.meta.txt"));
    std::fs::write(&meta, metadata(name, s, extra))?;
    out.push(meta);
    Ok(out)
}

/// Writes the grid around the configured query region as `grid.csv`.
pub fn write_grid(s: &Scenario, dir: &Path) -> Result<Vec<PathBuf>> {
    s.validate()?;
    write_tables("grid", s, dir, &[("grid".into(), grid_table(s)?)], "")
}

/// Tracks path `index` and writes its gain samples and sweeps.
pub fn write_track(s: &Scenario, index: u64, dir: &Path) -> Result<Vec<PathBuf>> {
    s.validate()?;
    let run = run_tracking(s, index)?;
    let mut samples = Table::new(&["t", "range", "azimuth", "focus_range", "focus_azimuth", "gain"]);
    for g in &run.samples {
        samples.push(vec![
            num(g.t),
            num(g.truth.r),
            num(g.truth.phi),
            num(g.focus.r),
            num(g.focus.phi),
            num(g.gain),
        ]);
    }
    let mut events = Table::new(&[
        "t",
        "range",
        "azimuth",
        "est_range",
        "est_azimuth",
        "radius",
        "arcs",
        "samples",
        "interval",
    ]);
    for e in &run.events {
        events.push(vec![
            num(e.t),
            num(e.truth.r),
            num(e.truth.phi),
            num(e.estimate.r),
            num(e.estimate.phi),
            num(e.radius),
            e.arcs.to_string(),
            e.samples.to_string(),
            num(e.interval),
        ]);
    }
    let m = run.summary;
    let extra = format!(
        "index = {index}
mean_gain = {}
p2_5 = {}
mean_interval = {}
estimations = {}
truncated = {}
",
        m.mean_gain, m.p2_5, m.mean_interval, m.estimations, run.truncated
    );
    write_tables(
        "track",
        s,
        dir,
        &[("track".into(), samples), ("track_events".into(), events)],
        &extra,
    )
}

/// Runs the batch and writes per-path summaries, range buckets and the gain time series.
pub fn write_montecarlo(s: &Scenario, dir: &Path) -> Result<Vec<PathBuf>> {
    let (runs, m) = monte_carlo(s)?;
    let mut paths = Table::new(&[
        "index",
        "duration",
        "mean_gain",
        "p2_5",
        "p97_5",
        "mean_interval",
        "estimations",
        "truncated",
    ]);
    for (i, r) in runs.iter().enumerate() {
        let x = r.summary;
        paths.push(vec![
            i.to_string(),
            num(x.duration),
            num(x.mean_gain),
            num(x.p2_5),
            num(x.p97_5),
            num(x.mean_interval),
            x.estimations.to_string(),
            (r.truncated as u8).to_string(),
        ]);
    }
    let mut buckets = Table::new(&["r0_lo", "samples", "mean_gain", "time", "estimations"]);
    for b in &m.buckets {
        buckets.push(vec![
            num(b.r0_lo),
            b.samples.to_string(),
            num(b.mean_gain),
            num(b.time),
            b.estimations.to_string(),
        ]);
    }
    let mut series = Table::new(&["t", "active", "mean", "p2_5", "p97_5"]);
    for p in &m.series {
        series.push(vec![
            num(p.t),
            p.active.to_string(),
            num(p.mean),
            num(p.p2_5),
            num(p.p97_5),
        ]);
    }
    let extra = format!(
        "mean_gain = {}
p2_5 = {}
p97_5 = {}
mean_interval = {}
estimations = {}
truncated = {}
",
        m.mean_gain, m.p2_5, m.p97_5, m.mean_interval, m.estimations, m.truncated
    );
    write_tables(
        "montecarlo",
        s,
        dir,
        &[
            ("montecarlo".into(), paths),
            ("montecarlo_buckets".into(), buckets),
            ("montecarlo_series".into(), series),
        ],
        &extra,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_ladder_counts() {
        assert_eq!(uniform_count(1.0, 1.0), 2);
        assert_eq!(uniform_count(0.4, 1.0), 1);
        assert_eq!(uniform_count(3.0, 1.0), 4);
    }

    #[test]
    fn numbers_format_plainly() {
        assert_eq!(num(0.5), "0.5");
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(num(1e6), "1000000");
    }
}
