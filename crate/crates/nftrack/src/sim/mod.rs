//! Monte-Carlo harness: random Bézier user paths, the tracking protocol
//! against a moving user, a fixed-schedule baseline and batch statistics.

mod config;
pub mod figures;

pub use config::{load_scenario, parse_scenario};
pub use figures::{write_figure, write_grid, write_montecarlo, write_track, Table, FIGURES};

use crate::analysis::BeamModel;
use crate::beamformer::FocusedBeam;
use crate::channel::{ChannelRealization, DistanceMode, Pathloss, Scatterer};
use crate::error::{Error, Result};
use crate::geometry::{center_distance, DmaConfig, PlanePoint, PolarPosition};
use crate::grid::SearchRegion;
use crate::tracker::{Scheme, Tracker, TrackerParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Region and timing of the random user paths.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySpec {
    pub control_points: usize,
    /// Anchor points evaluated along the curve.
    pub steps: usize,
    /// Mean speed after time scaling, m/s.
    pub mean_speed: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub phi_min: f64,
    pub phi_max: f64,
}

impl Default for TrajectorySpec {
    fn default() -> Self {
        TrajectorySpec {
            control_points: 6,
            steps: 100,
            mean_speed: 10.0,
            r_min: 5.0,
            r_max: 45.0,
            phi_min: PI / 8.0,
            phi_max: 7.0 * PI / 8.0,
        }
    }
}

/// Inputs for single-point commands (`analyze`, `grid`).
#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub range: f64,
    pub azimuth: f64,
    pub speed: f64,
    pub grid_range: f64,
    pub grid_azimuth: f64,
    pub grid_radius: f64,
    pub grid_resolution: f64,
}

impl Default for Query {
    fn default() -> Self {
        Query {
            range: 28.0,
            azimuth: PI / 4.0,
            speed: 10.0,
            grid_range: 70.0,
            grid_azimuth: PI / 2.0,
            grid_radius: 30.0,
            grid_resolution: 80.0,
        }
    }
}

/// Everything a simulation run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub dma: DmaConfig,
    pub tracker: TrackerParams,
    pub trajectory: TrajectorySpec,
    /// Uplink pilot power, dBm.
    pub pu_dbm: f64,
    /// Per-element noise power, dBm.
    pub noise_dbm: f64,
    /// Gain sampling step, seconds.
    pub sample_step: f64,
    pub seed: u64,
    pub trajectories: usize,
    pub kappa_sweep: Vec<f64>,
    pub query: Query,
    pub fig2_max_elements: usize,
    /// Distance model of the simulated line-of-sight path (exact by default).
    pub channel_distance: DistanceMode,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            dma: DmaConfig::reference(),
            tracker: TrackerParams::default(),
            trajectory: TrajectorySpec::default(),
            pu_dbm: 5.0,
            noise_dbm: -94.0,
            sample_step: 500e-6,
            seed: 1,
            trajectories: 100,
            kappa_sweep: vec![30.0, 50.0, 70.0, 90.0],
            query: Query::default(),
            fig2_max_elements: 4000,
            channel_distance: DistanceMode::Exact,
        }
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * 10f64.powf(dbm / 10.0)
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.dma.validate()?;
        self.tracker.validate()?;
        let t = &self.trajectory;
        if t.control_points < 2 || t.steps < 2 {
            return Err(Error::Config("need at least 2 control points and 2 steps".into()));
        }
        if !(t.mean_speed > 0.0) {
            return Err(Error::Config("mean speed must be positive".into()));
        }
        if !(0.0 < t.r_min && t.r_min < t.r_max) {
            return Err(Error::Config("need 0 < r_min < r_max".into()));
        }
        if !(0.0 <= t.phi_min && t.phi_min < t.phi_max && t.phi_max <= PI) {
            return Err(Error::Config("need 0 <= phi_min < phi_max <= pi".into()));
        }
        if !(self.sample_step > 0.0) {
            return Err(Error::Config("sample step must be positive".into()));
        }
        if self.trajectories == 0 {
            return Err(Error::Config("trajectory count must be positive".into()));
        }
        if self.kappa_sweep.iter().any(|k| !(*k > 0.0 && *k < 100.0)) {
            return Err(Error::Config("kappa sweep values must lie in (0, 100)".into()));
        }
        Ok(())
    }

    pub fn with_kappa(&self, kappa: f64) -> Scenario {
        let mut s = self.clone();
        s.tracker.kappa = kappa;
        s
    }

    /// Independent random stream for trajectory `index`.
    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// Per-element SNR `P_u (lambda / (4 pi r0))^2 / sigma^2` in dB.
    pub fn snr_db(&self, r0: f64) -> f64 {
        let pl = (self.dma.wavelength / (4.0 * PI * r0)).powi(2);
        10.0 * (dbm_to_watts(self.pu_dbm) * pl / dbm_to_watts(self.noise_dbm)).log10()
    }
}

/// Timed path through the user plane, linear between anchors.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub control: Vec<PlanePoint>,
    pub times: Vec<f64>,
    pub points: Vec<PlanePoint>,
    /// Set when the path had zero length and the time axis fell back to one second.
    pub degenerate: bool,
}

fn lerp(a: PlanePoint, b: PlanePoint, w: f64) -> PlanePoint {
    PlanePoint::new(a.x + w * (b.x - a.x), a.y + w * (b.y - a.y))
}

/// Point on the Bézier curve at parameter `s` (de Casteljau).
pub fn bezier_point(control: &[PlanePoint], s: f64) -> PlanePoint {
    let mut pts = control.to_vec();
    for len in (1..pts.len()).rev() {
        for i in 0..len {
            pts[i] = lerp(pts[i], pts[i + 1], s);
        }
    }
    pts[0]
}

impl Trajectory {
    /// Evaluates the curve at `steps` anchors and scales time to `mean_speed`.
    pub fn from_control(control: Vec<PlanePoint>, steps: usize, mean_speed: f64) -> Self {
        let points: Vec<PlanePoint> = (0..steps)
            .map(|k| bezier_point(&control, k as f64 / (steps - 1) as f64))
            .collect();
        let length: f64 = points.windows(2).map(|w| w[0].distance(w[1])).sum();
        let degenerate = !(length > 0.0);
        let duration = if degenerate { 1.0 } else { length / mean_speed };
        let dt = duration / (steps - 1) as f64;
        let times = (0..steps).map(|k| k as f64 * dt).collect();
        Trajectory {
            control,
            times,
            points,
            degenerate,
        }
    }

    pub fn duration(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn length(&self) -> f64 {
        self.points.windows(2).map(|w| w[0].distance(w[1])).sum()
    }

    pub fn point_at(&self, t: f64) -> PlanePoint {
        let t = t.clamp(0.0, self.duration());
        let dt = self.times[1];
        if !(dt > 0.0) {
            return self.points[0];
        }
        let k = ((t / dt).floor() as usize).min(self.points.len() - 2);
        lerp(self.points[k], self.points[k + 1], (t - self.times[k]) / dt)
    }
}

/// Uniform-by-area point in an annular sector.
fn sector_point<R: Rng + ?Sized>(rng: &mut R, spec: &TrajectorySpec) -> PlanePoint {
    let (a, b) = (spec.r_min * spec.r_min, spec.r_max * spec.r_max);
    let r = (a + rng.random::<f64>() * (b - a)).sqrt();
    let phi = spec.phi_min + rng.random::<f64>() * (spec.phi_max - spec.phi_min);
    PolarPosition { r, phi }.to_plane()
}

/// Random Bézier path with control points drawn uniformly in the sector.
pub fn bezier_trajectory<R: Rng + ?Sized>(rng: &mut R, spec: &TrajectorySpec) -> Trajectory {
    let control = (0..spec.control_points).map(|_| sector_point(rng, spec)).collect();
    Trajectory::from_control(control, spec.steps, spec.mean_speed)
}

/// One gain sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainSample {
    pub t: f64,
    pub truth: PolarPosition,
    pub focus: PolarPosition,
    pub gain: f64,
}

/// One sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimationEvent {
    pub t: f64,
    pub truth: PolarPosition,
    pub estimate: PolarPosition,
    /// Search radius used, meters.
    pub radius: f64,
    pub arcs: usize,
    pub samples: usize,
    /// Interval scheduled after this sweep, seconds.
    pub interval: f64,
    /// Mean of the two range half-widths at the grid resolution, at the estimate.
    pub half_range: f64,
    /// Azimuth half-width at the grid resolution, at the estimate.
    pub half_angle: f64,
}

/// Per-run statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSummary {
    pub mean_gain: f64,
    pub p2_5: f64,
    pub p97_5: f64,
    pub mean_interval: f64,
    pub estimations: usize,
    pub duration: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub samples: Vec<GainSample>,
    pub events: Vec<EstimationEvent>,
    /// Set if the run stopped before the end of its path.
    pub truncated: bool,
    pub summary: RunSummary,
}

/// Fixed-schedule baseline parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedParams {
    pub interval: f64,
    pub half_range: f64,
    pub half_angle: f64,
}

/// Linear-interpolated percentile of a sorted slice, `q` in `[0, 100]`.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q / 100.0 * (sorted.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn summarize(samples: &[GainSample], events: &[EstimationEvent], duration: f64) -> RunSummary {
    let gains = sorted(samples.iter().map(|s| s.gain).collect());
    let mean = |v: &[f64]| {
        if v.is_empty() {
            f64::NAN
        } else {
            v.iter().sum::<f64>() / v.len() as f64
        }
    };
    RunSummary {
        mean_gain: mean(&gains),
        p2_5: percentile(&gains, 2.5),
        p97_5: percentile(&gains, 97.5),
        mean_interval: mean(&events.iter().map(|e| e.interval).collect::<Vec<_>>()),
        estimations: events.len(),
        duration,
    }
}

/// Uniform point in a disk, redrawn until it lies in front of the array and clear of `avoid`.
fn scatterer_in<R: Rng + ?Sized>(rng: &mut R, region: &SearchRegion, avoid: PlanePoint, min_gap: f64) -> PlanePoint {
    let c = region.center.to_plane();
    loop {
        let rho = region.radius * rng.random::<f64>().sqrt();
        let ang = 2.0 * PI * rng.random::<f64>();
        let p = PlanePoint::new(c.x + rho * ang.cos(), c.y + rho * ang.sin());
        if p.y > 0.0 && p.distance(avoid) >= min_gap {
            return p;
        }
    }
}

fn run(scenario: &Scenario, scheme: Scheme, index: u64) -> Result<RunResult> {
    let mut rng = scenario.stream(index);
    let cfg = &scenario.dma;
    let traj = bezier_trajectory(&mut rng, &scenario.trajectory);
    let step = scenario.sample_step;
    let x_u = dbm_to_watts(scenario.pu_dbm).sqrt();
    let noise = dbm_to_watts(scenario.noise_dbm);
    let fine = BeamModel::new(scenario.tracker.delta, cfg)?;

    let polar = |t: f64| traj.point_at(t).to_polar();
    let p0 = polar(0.0)?;
    let p1 = polar(step)?;
    let mut tracker = Tracker::with_scheme(cfg, p0, p1, step, scenario.tracker, scheme)?;
    let mut beam = FocusedBeam::new(cfg, p1);
    let mut next = step + tracker.interval();
    let mut samples = Vec::new();
    let mut events = Vec::new();
    let mut truncated = false;

    let end = traj.duration();
    let mut k = 1usize;
    'outer: loop {
        let t = k as f64 * step;
        if t > end {
            break;
        }
        while next <= t {
            let truth = match polar(next) {
                Ok(p) => p,
                Err(_) => {
                    truncated = true;
                    break 'outer;
                }
            };
            let region = tracker.search_region()?;
            let spot = scatterer_in(&mut rng, &region, truth.to_plane(), cfg.wavelength);
            let phase = PI - 2.0 * PI * rng.random::<f64>();
            let scatterer = Scatterer::new(spot, truth.to_plane(), phase)?;
            let channel = ChannelRealization::with_distance(
                cfg,
                truth,
                vec![scatterer],
                Pathloss::Constant,
                scenario.channel_distance,
            )?;
            let report = match tracker.estimate_position(region, &channel.h, x_u, noise, &mut rng) {
                Ok(r) => r,
                Err(Error::Pilots { .. }) => {
                    truncated = true;
                    break 'outer;
                }
                Err(e) => return Err(e),
            };
            let stats = report.grid.stats();
            let interval = tracker.advance(report.estimate)?;
            let est = report.estimate;
            events.push(EstimationEvent {
                t: next,
                truth,
                estimate: est,
                radius: region.radius,
                arcs: stats.arcs,
                samples: stats.total,
                interval,
                half_range: 0.5 * (fine.depth_minus(est.r) + fine.depth_plus(est.r)),
                half_angle: fine.angle_numeric(est.phi),
            });
            beam = FocusedBeam::new(cfg, est);
            next += interval;
        }
        let truth = match polar(t) {
            Ok(p) => p,
            Err(_) => {
                truncated = true;
                break;
            }
        };
        samples.push(GainSample {
            t,
            truth,
            focus: beam.focus,
            gain: beam.gain(cfg, truth),
        });
        k += 1;
    }
    let summary = summarize(&samples, &events, end);
    Ok(RunResult {
        samples,
        events,
        truncated,
        summary,
    })
}

/// Tracks one random path with the adaptive protocol.
pub fn run_tracking(scenario: &Scenario, index: u64) -> Result<RunResult> {
    run(scenario, Scheme::Adaptive, index)
}

/// Tracks the same path as [`run_tracking`] with a fixed interval and uniform grid.
pub fn run_fixed_baseline(scenario: &Scenario, fixed: FixedParams, index: u64) -> Result<RunResult> {
    run(
        scenario,
        Scheme::Fixed {
            interval: fixed.interval,
            half_range: fixed.half_range,
            half_angle: fixed.half_angle,
        },
        index,
    )
}

/// Slot averages of the adaptive runs, used to parameterize the baseline.
pub fn baseline_parameters(runs: &[RunResult]) -> Result<FixedParams> {
    let events: Vec<&EstimationEvent> = runs.iter().flat_map(|r| &r.events).collect();
    if events.is_empty() {
        return Err(Error::Domain("no estimation slots to average".into()));
    }
    let n = events.len() as f64;
    Ok(FixedParams {
        interval: events.iter().map(|e| e.interval).sum::<f64>() / n,
        half_range: events.iter().map(|e| e.half_range).sum::<f64>() / n,
        half_angle: events.iter().map(|e| e.half_angle).sum::<f64>() / n,
    })
}

/// Maps `f` over `0..n` on all available cores; output order follows the index.
pub fn parallel_map<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let workers = std::thread::available_parallelism()
        .map_or(1, |w| w.get())
        .min(n.max(1));
    if workers <= 1 {
        return (0..n).map(f).collect();
    }
    let mut slots: Vec<Option<T>> = (0..n).map(|_| None).collect();
    let chunk = n.div_ceil(workers);
    std::thread::scope(|scope| {
        for (c, part) in slots.chunks_mut(chunk).enumerate() {
            let f = &f;
            scope.spawn(move || {
                for (j, slot) in part.iter_mut().enumerate() {
                    *slot = Some(f(c * chunk + j));
                }
            });
        }
    });
    slots.into_iter().map(|s| s.unwrap()).collect()
}

/// Statistics in one range bucket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bucket {
    /// Lower edge of the centre-distance bin, meters.
    pub r0_lo: f64,
    pub samples: usize,
    pub mean_gain: f64,
    /// Time spent in the bin, seconds.
    pub time: f64,
    pub estimations: usize,
}

/// Point of the across-trajectory gain time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimePoint {
    pub t: f64,
    pub active: usize,
    pub mean: f64,
    pub p2_5: f64,
    pub p97_5: f64,
}

/// Batch statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloSummary {
    pub trajectories: usize,
    /// Mean over all gain samples of all runs.
    pub mean_gain: f64,
    /// Percentiles over all gain samples of all runs.
    pub p2_5: f64,
    pub p97_5: f64,
    pub mean_interval: f64,
    pub estimations: usize,
    pub truncated: usize,
    pub buckets: Vec<Bucket>,
    pub series: Vec<TimePoint>,
}

pub const BUCKET_WIDTH: f64 = 2.5;

/// Reduces runs in index order.
pub fn summarize_runs(cfg: &DmaConfig, runs: &[RunResult], step: f64, series_stride: usize) -> MonteCarloSummary {
    let gains = sorted(runs.iter().flat_map(|r| r.samples.iter().map(|s| s.gain)).collect());
    let intervals: Vec<f64> = runs.iter().flat_map(|r| r.events.iter().map(|e| e.interval)).collect();
    let bin = |p: PolarPosition| (center_distance(cfg, p) / BUCKET_WIDTH).floor() as usize;

    let mut buckets: Vec<Bucket> = Vec::new();
    let touch = |b: usize, buckets: &mut Vec<Bucket>| {
        while buckets.len() <= b {
            let lo = buckets.len() as f64 * BUCKET_WIDTH;
            buckets.push(Bucket {
                r0_lo: lo,
                samples: 0,
                mean_gain: 0.0,
                time: 0.0,
                estimations: 0,
            });
        }
    };
    for r in runs {
        for s in &r.samples {
            let b = bin(s.truth);
            touch(b, &mut buckets);
            buckets[b].samples += 1;
            buckets[b].mean_gain += s.gain;
            buckets[b].time += step;
        }
        for e in &r.events {
            let b = bin(e.truth);
            touch(b, &mut buckets);
            buckets[b].estimations += 1;
        }
    }
    for b in &mut buckets {
        b.mean_gain = if b.samples > 0 {
            b.mean_gain / b.samples as f64
        } else {
            f64::NAN
        };
    }

    let longest = runs.iter().map(|r| r.samples.len()).max().unwrap_or(0);
    let stride = series_stride.max(1);
    let series = (0..longest)
        .step_by(stride)
        .map(|k| {
            let at = sorted(runs.iter().filter_map(|r| r.samples.get(k).map(|s| s.gain)).collect());
            let t = runs.iter().find_map(|r| r.samples.get(k).map(|s| s.t)).unwrap_or(0.0);
            TimePoint {
                t,
                active: at.len(),
                mean: at.iter().sum::<f64>() / at.len() as f64,
                p2_5: percentile(&at, 2.5),
                p97_5: percentile(&at, 97.5),
            }
        })
        .collect();

    MonteCarloSummary {
        trajectories: runs.len(),
        mean_gain: gains.iter().sum::<f64>() / gains.len().max(1) as f64,
        p2_5: percentile(&gains, 2.5),
        p97_5: percentile(&gains, 97.5),
        mean_interval: intervals.iter().sum::<f64>() / intervals.len().max(1) as f64,
        estimations: intervals.len(),
        truncated: runs.iter().filter(|r| r.truncated).count(),
        buckets,
        series,
    }
}

/// Runs the adaptive protocol on `scenario.trajectories` paths.
pub fn monte_carlo(scenario: &Scenario) -> Result<(Vec<RunResult>, MonteCarloSummary)> {
    scenario.validate()?;
    let runs = parallel_map(scenario.trajectories, |i| run_tracking(scenario, i as u64))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize_runs(&scenario.dma, &runs, scenario.sample_step, 20);
    Ok((runs, summary))
}

/// Runs the baseline with `fixed` on `scenario.trajectories` paths.
pub fn run_baseline(scenario: &Scenario, fixed: FixedParams) -> Result<(Vec<RunResult>, MonteCarloSummary)> {
    scenario.validate()?;
    let runs = parallel_map(scenario.trajectories, |i| run_fixed_baseline(scenario, fixed, i as u64))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize_runs(&scenario.dma, &runs, scenario.sample_step, 20);
    Ok((runs, summary))
}

/// Adaptive runs, then the baseline on the same paths.
pub fn compare_with_baseline(scenario: &Scenario) -> Result<(MonteCarloSummary, MonteCarloSummary, FixedParams)> {
    let (runs, proposed) = monte_carlo(scenario)?;
    let fixed = baseline_parameters(&runs)?;
    drop(runs);
    let (_, baseline) = run_baseline(scenario, fixed)?;
    Ok((proposed, baseline, fixed))
}
