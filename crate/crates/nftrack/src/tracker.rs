//! Sensing-aided beam tracking: sweep the search grid, pick the strongest
//! matched-filter output, re-estimate speed and schedule the next sweep.

use crate::analysis::BeamModel;
use crate::beamformer::{digital_steer, matched_power, receive_analog_combiner};
use crate::channel::complex_normal;
use crate::error::{Error, Result};
use crate::geometry::{DmaConfig, PolarPosition};
use crate::grid::{build_grid_with, AdaptiveResolution, CoordinateGrid, SearchRegion, UniformResolution};
use num_complex::Complex64;
use rand::Rng;

/// Protocol parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackerParams {
    /// Gain floor the beam must keep between sweeps, percent.
    pub kappa: f64,
    /// Per-coordinate gain guaranteed by the search grid, percent.
    pub delta: f64,
    /// Search-radius margin.
    pub e_c: f64,
    /// Speed margin.
    pub e_u: f64,
    /// Base of the geometric speed weighting.
    pub gamma: f64,
    /// Speed floor, m/s.
    pub u_th: f64,
    /// Pilot symbols available per sweep.
    pub pilots: usize,
}

impl Default for TrackerParams {
    fn default() -> Self {
        TrackerParams {
            kappa: 50.0,
            delta: 99.0,
            e_c: 1.5,
            e_u: 0.5,
            gamma: 2.0,
            u_th: 2.5,
            pilots: 200,
        }
    }
}

impl TrackerParams {
    pub fn validate(&self) -> Result<()> {
        let pct = |v: f64| v > 0.0 && v < 100.0;
        if !pct(self.kappa) || !pct(self.delta) {
            return Err(Error::Config("kappa and delta must lie in (0, 100)".into()));
        }
        if !(self.e_c >= 0.0 && self.e_u >= 0.0) {
            return Err(Error::Config("robustness margins must be non-negative".into()));
        }
        if !(self.gamma > 1.0) {
            return Err(Error::Config("gamma must exceed 1".into()));
        }
        if !(self.u_th > 0.0) {
            return Err(Error::Config("speed floor must be positive".into()));
        }
        if self.pilots == 0 {
            return Err(Error::Config("pilot count must be positive".into()));
        }
        Ok(())
    }
}

/// How sweeps are spaced and gridded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    /// Interval from the coherence time, grid from the beam limits.
    Adaptive,
    /// Constant interval and uniform grid.
    Fixed {
        interval: f64,
        half_range: f64,
        half_angle: f64,
    },
}

/// Outcome of one sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationReport {
    pub estimate: PolarPosition,
    /// Best matched-filter power on each arc.
    pub arc_powers: Vec<f64>,
    pub best_arc: usize,
    pub grid: CoordinateGrid,
    pub pilots_used: usize,
    /// Analog combiner reconfigurations (one per arc).
    pub reconfigurations: usize,
}

/// Geometrically weighted speed prediction, floored at `u_th`.
///
/// Weight `gamma^j / (gamma^L - 1)` on the `j`-th of `L` entries (oldest first);
/// the weights sum to one only for `gamma = 2`.
pub fn predict_speed(history: &[f64], gamma: f64, u_th: f64) -> f64 {
    let len = history.len() as i32;
    if len == 0 {
        return u_th;
    }
    let norm = gamma.powi(len) - 1.0;
    let avg: f64 = history
        .iter()
        .enumerate()
        .map(|(j, u)| gamma.powi(j as i32) / norm * u)
        .sum();
    avg.max(u_th)
}

/// Tracker state machine for one user.
#[derive(Debug, Clone)]
pub struct Tracker {
    cfg: DmaConfig,
    params: TrackerParams,
    scheme: Scheme,
    qos: BeamModel,
    resolution: AdaptiveResolution,
    positions: Vec<PolarPosition>,
    speeds: Vec<f64>,
    predicted: f64,
    interval: f64,
}

impl Tracker {
    /// Starts from two known positions `dt` seconds apart.
    pub fn init_from_positions(
        cfg: &DmaConfig,
        p0: PolarPosition,
        p1: PolarPosition,
        dt: f64,
        params: TrackerParams,
    ) -> Result<Self> {
        Self::with_scheme(cfg, p0, p1, dt, params, Scheme::Adaptive)
    }

    pub fn with_scheme(
        cfg: &DmaConfig,
        p0: PolarPosition,
        p1: PolarPosition,
        dt: f64,
        params: TrackerParams,
        scheme: Scheme,
    ) -> Result<Self> {
        params.validate()?;
        if !(dt > 0.0) {
            return Err(Error::Domain(format!("bootstrap interval must be positive, got {dt}")));
        }
        let speed = p0.distance(p1) / dt;
        let mut t = Tracker {
            cfg: cfg.clone(),
            params,
            scheme,
            qos: BeamModel::new(params.kappa, cfg)?,
            resolution: AdaptiveResolution::new(params.delta, cfg)?,
            positions: vec![p0, p1],
            speeds: vec![speed],
            predicted: predict_speed(&[speed], params.gamma, params.u_th),
            interval: 0.0,
        };
        t.schedule_next();
        Ok(t)
    }

    pub fn params(&self) -> &TrackerParams {
        &self.params
    }

    /// Latest position estimate.
    pub fn estimate(&self) -> PolarPosition {
        *self.positions.last().unwrap()
    }

    pub fn positions(&self) -> &[PolarPosition] {
        &self.positions
    }

    /// Raw speed estimates, oldest first.
    pub fn speeds(&self) -> &[f64] {
        &self.speeds
    }

    pub fn predicted_speed(&self) -> f64 {
        self.predicted
    }

    /// Time until the next sweep, seconds.
    pub fn interval(&self) -> f64 {
        self.interval
    }

    /// Smallest displacement from the current estimate that can break the gain floor.
    pub fn min_displacement(&self) -> f64 {
        self.qos.min_displacement(self.estimate())
    }

    /// Disk searched by the next sweep.
    pub fn search_region(&self) -> Result<SearchRegion> {
        let radius = match self.scheme {
            Scheme::Adaptive => self.min_displacement(),
            Scheme::Fixed { interval, .. } => self.predicted * (1.0 + self.params.e_u) * interval,
        };
        SearchRegion::new(self.estimate(), radius * (1.0 + self.params.e_c))
    }

    pub fn grid(&self, region: SearchRegion) -> CoordinateGrid {
        match self.scheme {
            Scheme::Adaptive => build_grid_with(region, &self.resolution, &self.cfg),
            Scheme::Fixed {
                half_range, half_angle, ..
            } => build_grid_with(region, &UniformResolution { half_range, half_angle }, &self.cfg),
        }
    }

    /// Sweeps the grid over `region` against channel `h` and returns the best sample.
    ///
    /// `x_u` is the pilot amplitude and `noise_power` the per-element noise
    /// variance of a single pilot.
    pub fn estimate_position<R: Rng + ?Sized>(
        &self,
        region: SearchRegion,
        h: &[Complex64],
        x_u: f64,
        noise_power: f64,
        rng: &mut R,
    ) -> Result<EstimationReport> {
        let grid = self.grid(region);
        let arcs = grid.arcs.len();
        let per_arc = self.params.pilots / arcs;
        if per_arc == 0 {
            return Err(Error::Pilots {
                pilots: self.params.pilots,
                arcs,
            });
        }
        // Averaging per_arc independent pilots leaves noise of variance sigma^2 / per_arc.
        let avg_noise = noise_power / per_arc as f64;
        let mut arc_powers = Vec::with_capacity(arcs);
        let mut best = (f64::NEG_INFINITY, 0usize, 0usize);
        let mut rx = vec![Complex64::new(0.0, 0.0); h.len()];
        for (s, arc) in grid.arcs.iter().enumerate() {
            let combiner = receive_analog_combiner(&self.cfg, arc.range)?;
            for (y, v) in rx.iter_mut().zip(h) {
                *y = v * x_u + complex_normal(rng, avg_noise);
            }
            let y = combiner.combine(&rx)?;
            let mut arc_best = (f64::NEG_INFINITY, 0usize);
            for (i, z) in arc.azimuths.iter().enumerate() {
                let power = matched_power(&digital_steer(&self.cfg, arc.range, z.angle), &y);
                if power > arc_best.0 {
                    arc_best = (power, i);
                }
            }
            arc_powers.push(arc_best.0);
            if arc_best.0 > best.0 {
                best = (arc_best.0, s, arc_best.1);
            }
        }
        Ok(EstimationReport {
            estimate: grid.sample(best.1, best.2),
            arc_powers,
            best_arc: best.1,
            pilots_used: per_arc * arcs,
            reconfigurations: arcs,
            grid,
        })
    }

    /// Records a new estimate; returns `(raw speed, predicted speed)`.
    pub fn update_velocity(&mut self, estimate: PolarPosition) -> Result<(f64, f64)> {
        if !(self.interval > 0.0) {
            return Err(Error::Domain("previous sweep interval must be positive".into()));
        }
        let raw = self.estimate().distance(estimate) / self.interval;
        self.positions.push(estimate);
        self.speeds.push(raw);
        self.predicted = predict_speed(&self.speeds, self.params.gamma, self.params.u_th);
        Ok((raw, self.predicted))
    }

    /// Sets and returns the time until the next sweep.
    pub fn schedule_next(&mut self) -> f64 {
        self.interval = match self.scheme {
            Scheme::Adaptive => self.min_displacement() / (self.predicted * (1.0 + self.params.e_u)),
            Scheme::Fixed { interval, .. } => interval,
        };
        self.interval
    }

    /// Applies a sweep result: speed update followed by scheduling.
    pub fn advance(&mut self, estimate: PolarPosition) -> Result<f64> {
        self.update_velocity(estimate)?;
        Ok(self.schedule_next())
    }
}
