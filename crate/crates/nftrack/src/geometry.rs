//! Array layout, element-to-user distances and regime radii.
//!
//! The array lies in the xz-plane. Strip `i` sits at `x = (i - (N_m - 1)/2) d_m`,
//! element `n` at height `z = n d_e + z_0`. Users move in the plane `z = 0`
//! and are addressed by polar coordinates `(r, phi)` in that plane.

use crate::error::{Error, Result};
use std::f64::consts::PI;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Which index-independent offset term the Fresnel distance carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OffsetTerm {
    /// `z_0^2 / (2r)`, the second-order Taylor term.
    #[default]
    Squared,
    /// `z_0 / (2r)`, kept for audits against the printed formula.
    Verbatim,
}

/// Physical description of the base-station metasurface array.
#[derive(Debug, Clone, PartialEq)]
pub struct DmaConfig {
    /// Elements per microstrip (`N_e`).
    pub n_elements: usize,
    /// Number of microstrips (`N_m`).
    pub n_strips: usize,
    /// Element spacing along a strip, meters.
    pub element_spacing: f64,
    /// Spacing between strips, meters.
    pub strip_spacing: f64,
    /// Carrier wavelength, meters.
    pub wavelength: f64,
    /// Height of the first element above the user plane, meters (signed).
    pub height_offset: f64,
    /// Substrate relative permittivity.
    pub permittivity: f64,
    /// Microstrip attenuation, nepers per meter.
    pub attenuation: f64,
    /// Transmit power budget, watts.
    pub tx_power: f64,
    pub offset_term: OffsetTerm,
}

impl DmaConfig {
    /// 200 x 10 half-wavelength array at 30 GHz, first element 1 m above the user plane.
    pub fn reference() -> Self {
        // 30 GHz, with the wavelength rounded to 1 cm.
        let wavelength = 0.01;
        DmaConfig {
            n_elements: 200,
            n_strips: 10,
            element_spacing: wavelength / 2.0,
            strip_spacing: wavelength / 2.0,
            wavelength,
            height_offset: 1.0,
            permittivity: 2.2,
            attenuation: 0.0,
            tx_power: 1.0,
            offset_term: OffsetTerm::Squared,
        }
    }

    /// Same array, vertically centred on the user plane.
    pub fn reference_centered() -> Self {
        DmaConfig::reference().centered()
    }

    /// Copy with the array centre moved onto the user plane.
    pub fn centered(mut self) -> Self {
        self.height_offset = -0.5 * self.strip_length();
        self
    }

    pub fn with_elements(mut self, n_elements: usize) -> Self {
        self.n_elements = n_elements;
        self
    }

    pub fn with_attenuation(mut self, alpha: f64) -> Self {
        self.attenuation = alpha;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.n_elements == 0 || self.n_strips == 0 {
            return bad("element and strip counts must be positive");
        }
        if !(self.element_spacing > 0.0 && self.strip_spacing > 0.0) {
            return bad("spacings must be positive");
        }
        if !(self.wavelength > 0.0) {
            return bad("wavelength must be positive");
        }
        if !(self.permittivity >= 1.0) {
            return bad("permittivity must be at least 1");
        }
        if !(self.attenuation >= 0.0) {
            return bad("attenuation must be non-negative");
        }
        if !(self.tx_power > 0.0) {
            return bad("transmit power must be positive");
        }
        if !self.height_offset.is_finite() {
            return bad("height offset must be finite");
        }
        Ok(())
    }

    /// Total element count `N_e * N_m`.
    pub fn n_total(&self) -> usize {
        self.n_elements * self.n_strips
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// Guided wavenumber inside a microstrip, rad/m.
    pub fn guided_wavenumber(&self) -> f64 {
        2.0 * PI * self.permittivity.sqrt() / self.wavelength
    }

    /// Length of one strip between its first and last element, meters.
    pub fn strip_length(&self) -> f64 {
        (self.n_elements as f64 - 1.0) * self.element_spacing
    }

    /// Signed horizontal offset of strip `i` from the array axis.
    pub fn strip_offset(&self, i: usize) -> f64 {
        (i as f64 - 0.5 * (self.n_strips as f64 - 1.0)) * self.strip_spacing
    }

    /// Height of element `n` above the user plane.
    pub fn element_height(&self, n: usize) -> f64 {
        n as f64 * self.element_spacing + self.height_offset
    }

    /// Height of the array centre above the user plane.
    pub fn center_height(&self) -> f64 {
        self.height_offset + 0.5 * self.strip_length()
    }

    fn check(&self, i: usize, n: usize) -> Result<()> {
        if i >= self.n_strips || n >= self.n_elements {
            return Err(Error::Index {
                strip: i,
                strips: self.n_strips,
                element: n,
                elements: self.n_elements,
            });
        }
        Ok(())
    }
}

/// User coordinate in the motion plane: range `r` (m) and azimuth `phi` (rad).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPosition {
    pub r: f64,
    pub phi: f64,
}

impl PolarPosition {
    pub fn new(r: f64, phi: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Domain(format!("range must be positive, got {r}")));
        }
        if !(0.0..=PI).contains(&phi) {
            return Err(Error::Domain(format!("azimuth must lie in [0, pi], got {phi}")));
        }
        Ok(PolarPosition { r, phi })
    }

    pub fn to_plane(self) -> PlanePoint {
        PlanePoint {
            x: self.r * self.phi.cos(),
            y: self.r * self.phi.sin(),
        }
    }

    /// Planar distance to another position.
    pub fn distance(self, other: PolarPosition) -> f64 {
        self.to_plane().distance(other.to_plane())
    }
}

/// Cartesian point in the user plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub fn new(x: f64, y: f64) -> Self {
        PlanePoint { x, y }
    }

    /// Polar form; fails at the origin or behind the array (`y < 0`).
    pub fn to_polar(self) -> Result<PolarPosition> {
        if self.y < 0.0 {
            return Err(Error::Domain(format!("point behind the array: y = {}", self.y)));
        }
        PolarPosition::new(self.x.hypot(self.y), self.y.atan2(self.x))
    }

    pub fn distance(self, other: PlanePoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Position of element `n` on strip `i`.
pub fn element_position(cfg: &DmaConfig, i: usize, n: usize) -> Result<[f64; 3]> {
    cfg.check(i, n)?;
    Ok([cfg.strip_offset(i), 0.0, cfg.element_height(n)])
}

pub(crate) fn exact_distance_unchecked(cfg: &DmaConfig, i: usize, n: usize, p: PlanePoint) -> f64 {
    let dx = p.x - cfg.strip_offset(i);
    let dz = cfg.element_height(n);
    (dx * dx + p.y * p.y + dz * dz).sqrt()
}

/// Euclidean distance from element `(i, n)` to the user at `p`.
pub fn exact_distance(cfg: &DmaConfig, i: usize, n: usize, p: PolarPosition) -> Result<f64> {
    cfg.check(i, n)?;
    Ok(exact_distance_unchecked(cfg, i, n, p.to_plane()))
}

pub(crate) fn fresnel_distance_unchecked(cfg: &DmaConfig, i: usize, n: usize, p: PolarPosition) -> f64 {
    let (r, c) = (p.r, p.phi.cos());
    let ix = cfg.strip_offset(i);
    let nd = n as f64 * cfg.element_spacing;
    let z0 = cfg.height_offset;
    let offset = match cfg.offset_term {
        OffsetTerm::Squared => z0 * z0 / (2.0 * r),
        OffsetTerm::Verbatim => z0 / (2.0 * r),
    };
    r + ix * ix * (1.0 - c * c) / (2.0 * r) - c * ix + nd * nd / (2.0 * r) + z0 * nd / r + offset
}

/// Second-order (Fresnel) approximation of [`exact_distance`].
pub fn fresnel_distance(cfg: &DmaConfig, i: usize, n: usize, p: PolarPosition) -> Result<f64> {
    cfg.check(i, n)?;
    Ok(fresnel_distance_unchecked(cfg, i, n, p))
}

/// Range beyond which the Fresnel phase error stays below pi/8.
pub fn approx_validity_radius(cfg: &DmaConfig) -> f64 {
    let vertical = cfg.strip_length() + cfg.height_offset;
    let horizontal = 0.5 * (cfg.n_strips as f64 - 1.0) * cfg.strip_spacing;
    let extent = vertical.hypot(horizontal);
    (2.0 * extent.powi(4) / cfg.wavelength).cbrt()
}

/// Largest aperture dimension: the planar diagonal of the element grid.
pub fn aperture_diagonal(cfg: &DmaConfig) -> f64 {
    let h = (cfg.n_strips as f64 - 1.0) * cfg.strip_spacing;
    cfg.strip_length().hypot(h)
}

/// Fresnel and Rayleigh distances `(r_FD, r_RD)`.
pub fn regime_radii(cfg: &DmaConfig) -> (f64, f64) {
    let d = aperture_diagonal(cfg);
    let fresnel = 0.62 * (d.powi(3) / cfg.wavelength).sqrt();
    let rayleigh = 2.0 * d * d / cfg.wavelength;
    (fresnel, rayleigh)
}

/// Distance from the array centre to the user, `r_0`.
pub fn center_distance(cfg: &DmaConfig, p: PolarPosition) -> f64 {
    p.r.hypot(cfg.center_height())
}

/// Planar range `r` whose centre distance equals `r0`.
pub fn range_from_center(cfg: &DmaConfig, r0: f64) -> Result<f64> {
    let h = cfg.center_height();
    if r0 <= h.abs() {
        return Err(Error::Domain(format!(
            "centre distance {r0} m does not exceed the array height {} m",
            h.abs()
        )));
    }
    Ok((r0 * r0 - h * h).sqrt())
}
