//! Closed-form beam correlation, depth of focus, beamwidth and beam coherence time.
//!
//! Gains here are correlation magnitudes; square them to get relative
//! beamforming gain. Percent thresholds (`kappa`) are accepted in `(0, 100)`.

use crate::error::{Error, Result};
use crate::geometry::{DmaConfig, PolarPosition};
use crate::special::fresnel;
use std::f64::consts::PI;

/// How the azimuth half-width is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AngleMethod {
    /// First-order expansion in `phi`; singular at endfire.
    Taylor,
    /// Exact inversion in cosine space; valid on all of `[0, pi]`.
    #[default]
    Numeric,
}

fn check_percent(kappa: f64) -> Result<()> {
    if kappa > 0.0 && kappa < 100.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "threshold must lie in (0, 100) percent, got {kappa}"
        )))
    }
}

/// Range correlation of a strip whose phase profile is a chirp segment.
///
/// `offset_ratio` is `z_0 / ((N_e - 1) d_e)`, which fixes where on the
/// Cornu spiral the segment starts.
pub fn corr_i_offset(x: f64, offset_ratio: f64) -> f64 {
    let x = x.abs();
    if x < 1e-7 {
        return 1.0;
    }
    let start = x * offset_ratio;
    let (c0, s0) = fresnel(start);
    let (c1, s1) = fresnel(start + x);
    ((c1 - c0).hypot(s1 - s0) / x).min(1.0)
}

fn offset_ratio(cfg: &DmaConfig) -> f64 {
    let len = cfg.strip_length();
    if len > 0.0 {
        cfg.height_offset / len
    } else {
        0.0
    }
}

/// Range correlation `I(x)` for the configured array.
pub fn corr_i(x: f64, cfg: &DmaConfig) -> f64 {
    if cfg.n_elements < 2 {
        return 1.0;
    }
    corr_i_offset(x, offset_ratio(cfg))
}

/// Dimensionless range-mismatch argument `a(dr)` at range `r`.
pub fn mismatch_arg(dr: f64, r: f64, cfg: &DmaConfig) -> Result<f64> {
    if !(r > 0.0) || !(r + dr > 0.0) {
        return Err(Error::Domain(format!("mismatched range {} must stay positive", r + dr)));
    }
    let scale = cfg.strip_length() / cfg.wavelength.sqrt();
    Ok((2.0 * dr.abs() / (r * r + r * dr)).sqrt() * scale)
}

/// Range correlation with the weak azimuth correction applied.
pub fn corr_k(dr: f64, r: f64, phi: f64, cfg: &DmaConfig) -> Result<f64> {
    let x = mismatch_arg(dr, r, cfg)?;
    if cfg.n_elements < 2 {
        return Ok(1.0);
    }
    let ratio = (cfg.n_strips as f64 - 1.0) * cfg.strip_spacing / (2.0 * cfg.strip_length());
    let q = x * ratio * phi.sin().abs();
    Ok(corr_i(x, cfg) * (1.0 - PI * PI / 90.0 * q.powi(4)))
}

/// Azimuth-mismatch argument `zeta` for a shift `dphi` away from `phi`.
pub fn zeta_arg(dphi: f64, phi: f64, cfg: &DmaConfig) -> f64 {
    cfg.n_strips as f64 * PI * cfg.strip_spacing / cfg.wavelength * (phi.cos() - (phi + dphi).cos())
}

/// Azimuth correlation: the array factor of `n_strips` strips.
pub fn corr_l(zeta: f64, n_strips: usize) -> f64 {
    let m = n_strips as f64;
    let den = (zeta / m).sin();
    if den.abs() < 1e-12 {
        return 1.0;
    }
    (zeta.sin() / (m * den)).abs()
}

/// Large-array limit of [`corr_l`], `|sin x / x|`.
pub fn corr_l_sinc(zeta: f64) -> f64 {
    if zeta.abs() < 1e-12 {
        1.0
    } else {
        (zeta.sin() / zeta).abs()
    }
}

/// Joint correlation for simultaneous range and azimuth mismatch.
pub fn corr_m(dr: f64, dphi: f64, r: f64, phi: f64, cfg: &DmaConfig) -> Result<f64> {
    let x = mismatch_arg(dr, r, cfg)?;
    Ok(corr_i(x, cfg) * corr_l(zeta_arg(dphi, phi, cfg), cfg.n_strips))
}

/// Smallest positive root of `f(x) = target` for a function decreasing from `f(0) = 1`.
///
/// Scans a dense grid over a growing window; a local minimum above the target
/// before any crossing means the first lobe never reaches it.
fn first_crossing(f: impl Fn(f64) -> f64, target: f64, windows: &[f64], what: &str) -> Result<f64> {
    const SCAN: usize = 1000;
    for &hi in windows {
        let step = hi / SCAN as f64;
        let mut prev = (0.0, f(0.0));
        for k in 1..=SCAN {
            let x = k as f64 * step;
            let v = f(x);
            if v <= target {
                return Ok(bisect(&f, target, prev.0, x));
            }
            if v > prev.1 && k > 1 {
                return Err(Error::NoRoot(format!(
                    "{what}: first lobe bottoms out at {:.4} above the target {target}",
                    prev.1
                )));
            }
            prev = (x, v);
        }
    }
    Err(Error::NoRoot(format!("{what}: no crossing of {target} found")))
}

fn bisect(f: &impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Range argument `a_kappa` at which `I^2` falls to `kappa` percent.
pub fn solve_a_kappa(kappa: f64, cfg: &DmaConfig) -> Result<f64> {
    check_percent(kappa)?;
    if cfg.n_elements < 2 {
        return Err(Error::NoRoot("a single-element strip has no depth limit".into()));
    }
    let ratio = offset_ratio(cfg);
    first_crossing(
        |x| corr_i_offset(x, ratio).powi(2),
        0.01 * kappa,
        &[4.0, 16.0, 64.0],
        "range correlation",
    )
}

/// Azimuth argument `zeta_kappa` at which `L^2` falls to `kappa` percent.
pub fn solve_zeta_kappa(kappa: f64, n_strips: usize) -> Result<f64> {
    check_percent(kappa)?;
    if n_strips < 2 {
        return Err(Error::NoRoot("a single strip has no azimuth selectivity".into()));
    }
    first_crossing(
        |z| corr_l(z, n_strips).powi(2),
        0.01 * kappa,
        &[PI],
        "azimuth correlation",
    )
}

/// Solved arguments for one threshold and array shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCache {
    pub kappa: f64,
    pub a_kappa: f64,
    pub zeta_kappa: f64,
}

impl RootCache {
    pub fn solve(kappa: f64, cfg: &DmaConfig) -> Result<Self> {
        Ok(RootCache {
            kappa,
            a_kappa: solve_a_kappa(kappa, cfg)?,
            zeta_kappa: solve_zeta_kappa(kappa, cfg.n_strips)?,
        })
    }
}

/// Depth and width limits at one position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamLimits {
    /// Tolerated range error towards the array, meters.
    pub delta_r_minus: f64,
    /// Tolerated range error away from the array, meters; infinite past `range_limit`.
    pub delta_r_plus: f64,
    /// Azimuth half-width, radians.
    pub delta_phi: f64,
    /// Range at which the outward depth diverges.
    pub range_limit: f64,
    pub kappa: f64,
    /// False when `a_kappa >= 1`, where the closed forms lose accuracy.
    pub in_regime: bool,
}

/// Limit evaluator for a fixed threshold; the roots are solved once.
#[derive(Debug, Clone)]
pub struct BeamModel {
    pub roots: RootCache,
    range_limit: f64,
    cos_step: f64,
}

impl BeamModel {
    pub fn new(kappa: f64, cfg: &DmaConfig) -> Result<Self> {
        cfg.validate()?;
        let roots = RootCache::solve(kappa, cfg)?;
        let len = cfg.strip_length();
        let range_limit = 2.0 * len * len / (cfg.wavelength * roots.a_kappa.powi(2));
        let cos_step = roots.zeta_kappa * cfg.wavelength / (PI * cfg.n_strips as f64 * cfg.strip_spacing);
        Ok(BeamModel {
            roots,
            range_limit,
            cos_step,
        })
    }

    pub fn kappa(&self) -> f64 {
        self.roots.kappa
    }

    /// Range beyond which the outward depth of focus is unbounded.
    pub fn range_limit(&self) -> f64 {
        self.range_limit
    }

    /// Change in `cos(phi)` that costs the threshold gain.
    pub fn cos_step(&self) -> f64 {
        self.cos_step
    }

    pub fn depth_minus(&self, r: f64) -> f64 {
        r * r / (self.range_limit + r)
    }

    pub fn depth_plus(&self, r: f64) -> f64 {
        if r >= self.range_limit {
            f64::INFINITY
        } else {
            r * r / (self.range_limit - r)
        }
    }

    /// Symmetric first-order half-width.
    pub fn angle_taylor(&self, phi: f64) -> Result<f64> {
        let s = phi.sin().abs();
        if s < 1e-12 {
            return Err(Error::Domain("first-order beamwidth is singular at endfire".into()));
        }
        Ok(self.cos_step / s)
    }

    /// Exact half-widths `(towards 0, towards pi)`; infinite when that side never loses the threshold.
    pub fn angle_sides(&self, phi: f64) -> (f64, f64) {
        let c = phi.cos();
        let t = self.cos_step;
        let up = if c - t >= -1.0 {
            (c - t).acos() - phi
        } else {
            f64::INFINITY
        };
        let down = if c + t <= 1.0 {
            phi - (c + t).acos()
        } else {
            f64::INFINITY
        };
        (down, up)
    }

    /// Smaller of the two exact half-widths, capped at `pi`.
    pub fn angle_numeric(&self, phi: f64) -> f64 {
        let (down, up) = self.angle_sides(phi);
        down.min(up).min(PI)
    }

    pub fn angle_limit(&self, phi: f64, method: AngleMethod) -> Result<f64> {
        match method {
            AngleMethod::Taylor => self.angle_taylor(phi),
            AngleMethod::Numeric => Ok(self.angle_numeric(phi)),
        }
    }

    pub fn limits(&self, p: PolarPosition, method: AngleMethod) -> Result<BeamLimits> {
        Ok(BeamLimits {
            delta_r_minus: self.depth_minus(p.r),
            delta_r_plus: self.depth_plus(p.r),
            delta_phi: self.angle_limit(p.phi, method)?,
            range_limit: self.range_limit,
            kappa: self.kappa(),
            in_regime: self.roots.a_kappa < 1.0,
        })
    }

    /// Smallest displacement that can pull the gain down to the threshold.
    pub fn min_displacement(&self, p: PolarPosition) -> f64 {
        let chord = (2.0 * p.r * (0.5 * self.angle_numeric(p.phi)).sin()).abs();
        chord.min(self.depth_minus(p.r))
    }

    /// Time a user at speed `u` needs to cover [`BeamModel::min_displacement`].
    pub fn coherence_time(&self, p: PolarPosition, u: f64) -> Result<f64> {
        if !(u > 0.0) {
            return Err(Error::Domain(format!("speed must be positive, got {u}")));
        }
        Ok(self.min_displacement(p) / u)
    }
}

/// `(depth towards the array, depth away from it, divergence range)` at range `r`.
pub fn depth_limits(r: f64, kappa: f64, cfg: &DmaConfig) -> Result<(f64, f64, f64)> {
    let m = BeamModel::new(kappa, cfg)?;
    Ok((m.depth_minus(r), m.depth_plus(r), m.range_limit()))
}

pub fn angle_limit(phi: f64, kappa: f64, cfg: &DmaConfig, method: AngleMethod) -> Result<f64> {
    BeamModel::new(kappa, cfg)?.angle_limit(phi, method)
}

pub fn min_displacement(p: PolarPosition, kappa: f64, cfg: &DmaConfig) -> Result<f64> {
    Ok(BeamModel::new(kappa, cfg)?.min_displacement(p))
}

/// Direction of motion, among all displacements of length `c`, that hurts the gain most.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorstDirection {
    /// Radial component of the displacement, meters (negative is towards the array).
    pub d_min: f64,
    pub position: PolarPosition,
    /// Correlation magnitude at the worst position.
    pub correlation: f64,
    /// Relative gain (squared correlation).
    pub gain: f64,
}

/// Angular offset reached after moving distance `c` with radial component `d`.
pub fn displacement_angle(c: f64, d: f64, r: f64) -> f64 {
    let arg = 1.0 - (c * c - d * d) / (2.0 * r * r + 2.0 * r * d);
    arg.clamp(-1.0, 1.0).acos()
}

/// Correlation after moving distance `c` with radial component `d`, worst of the two turning senses.
pub fn displacement_correlation(c: f64, d: f64, p: PolarPosition, cfg: &DmaConfig) -> Result<f64> {
    let y = displacement_angle(c, d, p.r);
    let range = corr_i(mismatch_arg(d, p.r, cfg)?, cfg);
    let l_up = corr_l(zeta_arg(y, p.phi, cfg), cfg.n_strips);
    let l_down = corr_l(zeta_arg(-y, p.phi, cfg), cfg.n_strips);
    Ok(range * l_up.min(l_down))
}

/// Minimizes the joint correlation over displacements of length `c` moving towards the array.
pub fn worst_direction(c: f64, p: PolarPosition, cfg: &DmaConfig) -> Result<WorstDirection> {
    if !(c > 0.0) || c >= p.r {
        return Err(Error::Domain(format!("displacement {c} must lie in (0, r = {})", p.r)));
    }
    const GRID: usize = 1000;
    let m = |d: f64| displacement_correlation(c, d, p, cfg).unwrap_or(1.0);
    let ds: Vec<f64> = (0..=GRID).map(|k| -c + c * k as f64 / GRID as f64).collect();
    let vals: Vec<f64> = ds.iter().map(|&d| m(d)).collect();

    let mut best = (ds[0], vals[0]);
    if vals[GRID] < best.1 {
        best = (ds[GRID], vals[GRID]);
    }
    // Derivative sign changes mark interior minima; refine each by bisection on the slope.
    let h = c * 1e-7;
    let slope = |d: f64| m((d + h).min(0.0)) - m((d - h).max(-c));
    for k in 1..GRID {
        if vals[k] <= vals[k - 1] && vals[k] <= vals[k + 1] {
            let (mut lo, mut hi) = (ds[k - 1], ds[k + 1]);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if slope(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let d = 0.5 * (lo + hi);
            let v = m(d).min(vals[k]);
            let d = if m(d) <= vals[k] { d } else { ds[k] };
            if v < best.1 {
                best = (d, v);
            }
        }
    }

    let (d, corr) = best;
    let y = displacement_angle(c, d, p.r);
    let up = corr_l(zeta_arg(y, p.phi, cfg), cfg.n_strips);
    let down = corr_l(zeta_arg(-y, p.phi, cfg), cfg.n_strips);
    let phi = if up <= down { p.phi + y } else { p.phi - y };
    Ok(WorstDirection {
        d_min: d,
        position: PolarPosition {
            r: p.r + d,
            phi: phi.clamp(0.0, PI),
        },
        correlation: corr,
        gain: corr * corr,
    })
}

/// Minimum displacement, the worst direction at that displacement and the coherence time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceResult {
    pub c_min: f64,
    pub worst: WorstDirection,
    pub coherence_time: f64,
}

pub fn beam_coherence_time(p: PolarPosition, kappa: f64, u: f64, cfg: &DmaConfig) -> Result<CoherenceResult> {
    let model = BeamModel::new(kappa, cfg)?;
    let coherence_time = model.coherence_time(p, u)?;
    let c_min = model.min_displacement(p);
    let worst = worst_direction(c_min.min(0.999 * p.r), p, cfg)?;
    Ok(CoherenceResult {
        c_min,
        worst,
        coherence_time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn correlation_limits() {
        let cfg = DmaConfig::reference();
        assert_eq!(corr_i(0.0, &cfg), 1.0);
        assert_eq!(corr_l(0.0, 10), 1.0);
        assert_eq!(corr_m(0.0, 0.0, 20.0, 1.0, &cfg).unwrap(), 1.0);
        assert!((corr_k(0.0, 20.0, 0.3, &cfg).unwrap() - 1.0).abs() < 1e-15);
        assert!(mismatch_arg(-5.0, 5.0, &cfg).is_err());
    }

    #[test]
    fn centered_strip_uses_half_arguments() {
        let cfg = DmaConfig::reference_centered();
        for x in [0.3, 1.0, 2.5, 7.0] {
            let (c, s) = fresnel(x / 2.0);
            let sym = (2.0 * c).hypot(2.0 * s) / x;
            assert!((corr_i(x, &cfg) - sym).abs() < 1e-12);
        }
    }

    #[test]
    fn roots_for_the_reference_array() {
        let cfg = DmaConfig::reference();
        assert!((solve_a_kappa(50.0, &cfg).unwrap() - 0.76641).abs() < 1e-4);
        assert!((solve_a_kappa(99.0, &cfg).unwrap() - 0.270453).abs() < 1e-5);
        assert!((solve_zeta_kappa(50.0, 10).unwrap() - 1.39760).abs() < 1e-4);
        assert!((solve_zeta_kappa(99.0, 10).unwrap() - 0.174426).abs() < 1e-5);
        let centered = DmaConfig::reference_centered();
        assert!((solve_a_kappa(50.0, &centered).unwrap() - 2.6365).abs() < 1e-3);
        assert!(solve_a_kappa(100.0, &cfg).is_err());
        assert!(solve_zeta_kappa(50.0, 1).is_err());
    }

    #[test]
    fn depth_diverges_at_the_range_limit() {
        let m = BeamModel::new(50.0, &DmaConfig::reference()).unwrap();
        assert!((m.range_limit() - 337.09).abs() < 0.05);
        let rl = m.range_limit();
        assert!(m.depth_plus(0.99 * rl) > 50.0 * m.depth_plus(0.5 * rl));
        assert!(m.depth_plus(rl).is_infinite());
        assert!(m.depth_minus(10.0 * rl).is_finite());
    }

    #[test]
    fn angle_sides_invert_the_cosine_step() {
        let m = BeamModel::new(50.0, &DmaConfig::reference()).unwrap();
        for phi in [0.2, 0.9, 1.5, 2.8] {
            let (down, up) = m.angle_sides(phi);
            if up.is_finite() {
                assert!(((phi.cos() - (phi + up).cos()) - m.cos_step()).abs() < 1e-12);
            }
            if down.is_finite() {
                assert!((((phi - down).cos() - phi.cos()) - m.cos_step()).abs() < 1e-12);
            } else {
                assert!(phi.cos() + m.cos_step() > 1.0);
            }
        }
        assert!(m.angle_taylor(0.0).is_err());
        assert!(m.angle_numeric(0.0) > m.angle_numeric(PI / 2.0));
    }

    #[test]
    fn worst_direction_far_user_barely_degrades() {
        let cfg = DmaConfig::reference();
        let w = worst_direction(0.01, PolarPosition::new(100.0, 1.2).unwrap(), &cfg).unwrap();
        assert!(w.gain > 0.99);
        assert!(worst_direction(200.0, PolarPosition::new(100.0, 1.2).unwrap(), &cfg).is_err());
    }
}
