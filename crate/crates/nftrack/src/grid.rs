//! Non-uniform polar search grid over a circular region.
//!
//! Samples are placed so that neighbouring decision regions touch edge to
//! edge: radially through the depth of focus, in azimuth through the exact
//! beamwidth. A master azimuth ladder spans the widest angular extent of the
//! region; each arc keeps the samples whose decision regions can reach the
//! part of the disk inside that arc's radial band.

use crate::analysis::{AngleMethod, BeamModel};
use crate::error::{Error, Result};
use crate::geometry::{approx_validity_radius, regime_radii, DmaConfig, PolarPosition};
use std::f64::consts::PI;

const REL_TOL: f64 = 1e-9;

/// Disk of radius `radius` around `center` in the user plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchRegion {
    pub center: PolarPosition,
    pub radius: f64,
}

impl SearchRegion {
    pub fn new(center: PolarPosition, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Domain(format!("search radius must be positive, got {radius}")));
        }
        Ok(SearchRegion { center, radius })
    }

    pub fn contains(&self, p: PolarPosition) -> bool {
        p.distance(self.center) <= self.radius * (1.0 + REL_TOL)
    }

    /// Widest azimuth half-extent of the disk as seen from the array.
    pub fn angular_half_extent(&self) -> f64 {
        let (r, c) = (self.center.r, self.radius);
        if c >= r {
            PI
        } else {
            ((2.0 * r * r - c * c) / (2.0 * r * r)).clamp(-1.0, 1.0).acos()
        }
    }

    /// Half-angle of the tangents from the array to the disk; exceeds
    /// [`Self::angular_half_extent`] by about `c^3 / (8 r^3)`.
    pub fn tangent_half_angle(&self) -> f64 {
        let (r, c) = (self.center.r, self.radius);
        if c >= r {
            PI
        } else {
            (c / r).asin()
        }
    }

    /// Azimuth half-extent of the disk on the circle of range `rho`.
    pub fn chord_half_angle(&self, rho: f64) -> f64 {
        let (r, c) = (self.center.r, self.radius);
        if rho <= 0.0 {
            return PI;
        }
        ((rho * rho + r * r - c * c) / (2.0 * rho * r)).clamp(-1.0, 1.0).acos()
    }
}

/// Decision-region half-widths as a function of sample position.
pub trait Resolution {
    /// Range half-width towards the array.
    fn range_minus(&self, r: f64) -> f64;
    /// Range half-width away from the array; may be infinite.
    fn range_plus(&self, r: f64) -> f64;
    /// Azimuth half-width towards 0.
    fn angle_down(&self, phi: f64) -> f64;
    /// Azimuth half-width towards pi.
    fn angle_up(&self, phi: f64) -> f64;
}

/// Resolution derived from the depth of focus and beamwidth at a gain threshold.
#[derive(Debug, Clone)]
pub struct AdaptiveResolution {
    pub model: BeamModel,
    pub method: AngleMethod,
}

impl AdaptiveResolution {
    pub fn new(delta: f64, cfg: &DmaConfig) -> Result<Self> {
        Ok(AdaptiveResolution {
            model: BeamModel::new(delta, cfg)?,
            method: AngleMethod::Numeric,
        })
    }
}

impl Resolution for AdaptiveResolution {
    fn range_minus(&self, r: f64) -> f64 {
        self.model.depth_minus(r)
    }
    fn range_plus(&self, r: f64) -> f64 {
        self.model.depth_plus(r)
    }
    fn angle_down(&self, phi: f64) -> f64 {
        match self.method {
            AngleMethod::Numeric => self.model.angle_sides(phi).0,
            AngleMethod::Taylor => self.model.angle_taylor(phi).unwrap_or(f64::INFINITY),
        }
    }
    fn angle_up(&self, phi: f64) -> f64 {
        match self.method {
            AngleMethod::Numeric => self.model.angle_sides(phi).1,
            AngleMethod::Taylor => self.model.angle_taylor(phi).unwrap_or(f64::INFINITY),
        }
    }
}

/// Constant half-widths, for fixed-resolution comparison grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformResolution {
    pub half_range: f64,
    pub half_angle: f64,
}

impl Resolution for UniformResolution {
    fn range_minus(&self, _: f64) -> f64 {
        self.half_range
    }
    fn range_plus(&self, _: f64) -> f64 {
        self.half_range
    }
    fn angle_down(&self, _: f64) -> f64 {
        self.half_angle
    }
    fn angle_up(&self, _: f64) -> f64 {
        self.half_angle
    }
}

/// One azimuth sample with its decision-region half-widths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Azimuth {
    pub angle: f64,
    pub down: f64,
    pub up: f64,
}

impl Azimuth {
    fn covers(&self, phi: f64) -> bool {
        let tol = REL_TOL * (1.0 + phi.abs());
        phi >= self.angle - self.down - tol && phi <= self.angle + self.up + tol
    }
}

/// Arc of constant range with its selected azimuths.
#[derive(Debug, Clone, PartialEq)]
pub struct Arc {
    pub range: f64,
    pub minus: f64,
    pub plus: f64,
    pub azimuths: Vec<Azimuth>,
}

impl Arc {
    fn covers(&self, r: f64) -> bool {
        let tol = REL_TOL * r;
        r >= self.range - self.minus - tol && r <= self.range + self.plus + tol
    }
}

/// Search grid: arcs ordered by range, azimuths ordered within each arc.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateGrid {
    pub arcs: Vec<Arc>,
    /// Unfiltered azimuth ladder spanning the region's full angular extent.
    pub master: Vec<Azimuth>,
    pub region: SearchRegion,
    /// Notes about clamping applied to degenerate regions.
    pub warnings: Vec<String>,
}

/// Sample counts of a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridStats {
    /// Number of arcs (radial samples).
    pub arcs: usize,
    /// Samples kept after per-arc filtering.
    pub total: usize,
    /// Arc count times master-ladder length: the unfiltered sweep size.
    pub product: usize,
}

impl CoordinateGrid {
    pub fn stats(&self) -> GridStats {
        GridStats {
            arcs: self.arcs.len(),
            total: self.arcs.iter().map(|a| a.azimuths.len()).sum(),
            product: self.arcs.len() * self.master.len(),
        }
    }

    /// All kept samples, arc by arc.
    pub fn samples(&self) -> impl Iterator<Item = PolarPosition> + '_ {
        self.arcs.iter().flat_map(|a| {
            a.azimuths.iter().map(move |z| PolarPosition {
                r: a.range,
                phi: z.angle,
            })
        })
    }

    /// `(arc, azimuth)` indices of a sample whose decision region holds `p`.
    pub fn covering(&self, p: PolarPosition) -> Option<(usize, usize)> {
        self.arcs.iter().enumerate().find_map(|(s, arc)| {
            if !arc.covers(p.r) {
                return None;
            }
            arc.azimuths.iter().position(|z| z.covers(p.phi)).map(|i| (s, i))
        })
    }

    pub fn sample(&self, arc: usize, azimuth: usize) -> PolarPosition {
        PolarPosition {
            r: self.arcs[arc].range,
            phi: self.arcs[arc].azimuths[azimuth].angle,
        }
    }
}

pub fn grid_stats(grid: &CoordinateGrid) -> GridStats {
    grid.stats()
}

/// Grid whose decision regions guarantee `delta` percent gain per coordinate.
pub fn build_grid(region: SearchRegion, delta: f64, cfg: &DmaConfig) -> Result<CoordinateGrid> {
    Ok(build_grid_with(region, &AdaptiveResolution::new(delta, cfg)?, cfg))
}

/// Ladder `start, start + w(start) + w(start + w(start)), ...` until the edge passes `end`.
fn ladder(start: f64, end: f64, step: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut out = vec![start];
    loop {
        let last = *out.last().unwrap();
        let edge = last + step(last);
        if !(edge < end) || !edge.is_finite() {
            break;
        }
        let next = edge + step(edge);
        if next.is_finite() {
            out.push(next);
        } else {
            // The next region is unbounded upwards; a sample at the edge already covers it.
            out.push(edge);
            break;
        }
    }
    out
}

/// Builds a grid over `region` with arbitrary decision-region widths.
pub fn build_grid_with(region: SearchRegion, res: &dyn Resolution, cfg: &DmaConfig) -> CoordinateGrid {
    let (r_hat, phi_hat, c) = (region.center.r, region.center.phi, region.radius);
    let mut warnings = Vec::new();

    let half = region.angular_half_extent();
    if c >= r_hat {
        warnings.push(format!(
            "search radius {c:.3} m reaches the array; azimuth span clamped to pi"
        ));
    }
    let lo = (phi_hat - half).max(0.0);
    // The ladder stays anchored at `lo`; it is only extended to the tangent directions.
    let tangent_half = region.tangent_half_angle();
    let (lo_edge, hi_edge) = ((phi_hat - tangent_half).max(0.0), (phi_hat + tangent_half).min(PI));
    let mut angles = ladder(lo, hi_edge, |p| res.angle_up(p));
    let mut below = Vec::new();
    let mut edge = lo - res.angle_down(lo);
    while edge > lo_edge + REL_TOL && edge.is_finite() {
        let next = edge - res.angle_down(edge);
        if !next.is_finite() {
            below.push(edge);
            break;
        }
        below.push(next);
        edge = next - res.angle_down(next);
    }
    below.reverse();
    below.append(&mut angles);
    let master: Vec<Azimuth> = below
        .into_iter()
        .map(|angle| Azimuth {
            angle,
            down: res.angle_down(angle),
            up: res.angle_up(angle),
        })
        .collect();

    let floor = (0.1 * approx_validity_radius(cfg)).max(1e-6);
    let mut start = r_hat - c;
    if start < floor {
        warnings.push(format!(
            "radial ladder starts at the floor {floor:.3} m instead of {start:.3} m"
        ));
        start = floor;
    }
    let near = start;
    let far = r_hat + c;
    let tangent = (r_hat * r_hat - c * c).max(0.0).sqrt();

    let arcs = ladder(start, far, |r| res.range_plus(r))
        .into_iter()
        .map(|range| {
            let (minus, plus) = (res.range_minus(range), res.range_plus(range));
            let band_lo = (range - minus).max(near);
            let band_hi = (range + plus).min(far);
            let widest = if band_lo <= band_hi {
                region.chord_half_angle(tangent.clamp(band_lo, band_hi))
            } else {
                region.chord_half_angle(range.clamp(near, far))
            };
            let (a, b) = (phi_hat - widest, phi_hat + widest);
            let azimuths = master
                .iter()
                .filter(|z| {
                    let tol = REL_TOL * (1.0 + z.angle.abs());
                    z.angle + z.up >= a - tol && z.angle - z.down <= b + tol
                })
                .copied()
                .collect();
            Arc {
                range,
                minus,
                plus,
                azimuths,
            }
        })
        .collect();

    CoordinateGrid {
        arcs,
        master,
        region,
        warnings,
    }
}

/// Upper bound on the radial sample count for a region of radius `c_kappa` (scaled by `1 + e_c`).
pub fn radial_bound(r: f64, kappa: f64, delta: f64, cfg: &DmaConfig, e_c: f64) -> Result<f64> {
    let a_k = crate::analysis::solve_a_kappa(kappa, cfg)?;
    let a_d = crate::analysis::solve_a_kappa(delta, cfg)?;
    let eta = (a_k / a_d).powi(2);
    let (_, rayleigh) = regime_radii(cfg);
    Ok((1.0 + e_c) * (eta + r * a_k * a_k / (2.0 * rayleigh) * (eta - 1.0) + 1.0))
}
