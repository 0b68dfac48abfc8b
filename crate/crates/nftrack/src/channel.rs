//! Focusing vectors, line-of-sight and single-bounce channels, noisy receive models.

use crate::beamformer::AnalogCombiner;
use crate::error::{Error, Result};
use crate::geometry::{exact_distance_unchecked, fresnel_distance_unchecked, DmaConfig, PlanePoint, PolarPosition};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;

/// Element-to-user distance model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistanceMode {
    #[default]
    Exact,
    Fresnel,
}

/// Amplitude model across the aperture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pathloss {
    /// One free-space amplitude `lambda / (4 pi r_0)` for every element.
    #[default]
    Constant,
    /// Free-space amplitude from each element's own distance.
    PerElement,
}

/// Unit-modulus near-field steering vector, strip-major (`i * N_e + n`).
#[derive(Debug, Clone, PartialEq)]
pub struct FocusingVector {
    pub entries: Vec<Complex64>,
    pub target: PolarPosition,
}

/// Calls `f(index, distance)` for every element, strip-major.
pub(crate) fn for_each_distance(cfg: &DmaConfig, p: PolarPosition, mode: DistanceMode, mut f: impl FnMut(usize, f64)) {
    let plane = p.to_plane();
    for i in 0..cfg.n_strips {
        for n in 0..cfg.n_elements {
            let d = match mode {
                DistanceMode::Exact => exact_distance_unchecked(cfg, i, n, plane),
                DistanceMode::Fresnel => fresnel_distance_unchecked(cfg, i, n, p),
            };
            f(i * cfg.n_elements + n, d);
        }
    }
}

pub fn focusing_vector(cfg: &DmaConfig, p: PolarPosition, mode: DistanceMode) -> FocusingVector {
    let k = cfg.wavenumber();
    let mut entries = vec![Complex64::new(0.0, 0.0); cfg.n_total()];
    for_each_distance(cfg, p, mode, |idx, d| entries[idx] = Complex64::from_polar(1.0, -k * d));
    FocusingVector { entries, target: p }
}

/// Free-space amplitude `lambda / (4 pi d)`.
pub fn free_space_amplitude(cfg: &DmaConfig, d: f64) -> f64 {
    cfg.wavelength / (4.0 * PI * d)
}

/// Line-of-sight channel from the user at `p` to every element.
pub fn los_channel(cfg: &DmaConfig, p: PolarPosition, pathloss: Pathloss) -> Vec<Complex64> {
    los_channel_with(cfg, p, pathloss, DistanceMode::Exact)
}

/// [`los_channel`] with a selectable distance model for the phases and amplitudes.
pub fn los_channel_with(cfg: &DmaConfig, p: PolarPosition, pathloss: Pathloss, mode: DistanceMode) -> Vec<Complex64> {
    let k = cfg.wavenumber();
    let constant = free_space_amplitude(cfg, crate::geometry::center_distance(cfg, p));
    let mut h = vec![Complex64::new(0.0, 0.0); cfg.n_total()];
    for_each_distance(cfg, p, mode, |idx, d| {
        let amp = match pathloss {
            Pathloss::Constant => constant,
            Pathloss::PerElement => free_space_amplitude(cfg, d),
        };
        h[idx] = Complex64::from_polar(amp, -k * d);
    });
    h
}

/// Point scatterer in the user plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scatterer {
    pub position: PlanePoint,
    /// Planar distance from the user, meters.
    pub ue_distance: f64,
    /// Reflection phase, radians in `(-pi, pi]`.
    pub reflection_phase: f64,
}

impl Scatterer {
    pub fn new(position: PlanePoint, ue: PlanePoint, reflection_phase: f64) -> Result<Self> {
        let ue_distance = position.distance(ue);
        if !(ue_distance > 0.0) {
            return Err(Error::Domain("scatterer coincides with the user".into()));
        }
        Ok(Scatterer {
            position,
            ue_distance,
            reflection_phase,
        })
    }

    /// Complex reflection coefficient including the user-to-scatterer leg.
    pub fn coefficient(&self, cfg: &DmaConfig) -> Complex64 {
        let phase = -self.reflection_phase - cfg.wavenumber() * self.ue_distance;
        Complex64::from_polar(free_space_amplitude(cfg, self.ue_distance), phase)
    }
}

/// Channel contribution of one scatterer.
pub fn nlos_component(cfg: &DmaConfig, s: &Scatterer) -> Result<Vec<Complex64>> {
    let g = s.coefficient(cfg);
    let k = cfg.wavenumber();
    let mut h = Vec::with_capacity(cfg.n_total());
    for i in 0..cfg.n_strips {
        for n in 0..cfg.n_elements {
            let d = exact_distance_unchecked(cfg, i, n, s.position);
            if !(d > 0.0) {
                return Err(Error::Domain("scatterer collocated with an array element".into()));
            }
            h.push(g * Complex64::from_polar(free_space_amplitude(cfg, d), -k * d));
        }
    }
    Ok(h)
}

/// Full channel with its line-of-sight and per-scatterer parts kept for inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h: Vec<Complex64>,
    pub los_part: Vec<Complex64>,
    pub nlos_parts: Vec<Vec<Complex64>>,
    pub scatterers: Vec<Scatterer>,
}

impl ChannelRealization {
    pub fn new(cfg: &DmaConfig, ue: PolarPosition, scatterers: Vec<Scatterer>, pathloss: Pathloss) -> Result<Self> {
        Self::with_distance(cfg, ue, scatterers, pathloss, DistanceMode::Exact)
    }

    /// Same, with the line-of-sight part built from the chosen distance model.
    pub fn with_distance(
        cfg: &DmaConfig,
        ue: PolarPosition,
        scatterers: Vec<Scatterer>,
        pathloss: Pathloss,
        mode: DistanceMode,
    ) -> Result<Self> {
        let los_part = los_channel_with(cfg, ue, pathloss, mode);
        let nlos_parts = scatterers
            .iter()
            .map(|s| nlos_component(cfg, s))
            .collect::<Result<Vec<_>>>()?;
        let mut h = los_part.clone();
        for part in &nlos_parts {
            for (acc, v) in h.iter_mut().zip(part) {
                *acc += v;
            }
        }
        Ok(ChannelRealization {
            h,
            los_part,
            nlos_parts,
            scatterers,
        })
    }
}

/// Circularly-symmetric complex Gaussian sample with variance `var`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R, var: f64) -> Complex64 {
    let s = (0.5 * var).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

/// Downlink sample at the user: `h^H x + n`.
pub fn received_symbol_ue<R: Rng + ?Sized>(
    cfg: &DmaConfig,
    h: &[Complex64],
    x: &[Complex64],
    noise_power: f64,
    rng: &mut R,
) -> Result<Complex64> {
    if h.len() != x.len() {
        return Err(Error::Domain("channel and beam lengths differ".into()));
    }
    let power: f64 = x.iter().map(|v| v.norm_sqr()).sum();
    if power > cfg.tx_power * (1.0 + 1e-12) {
        return Err(Error::Power {
            power,
            budget: cfg.tx_power,
        });
    }
    let y: Complex64 = h.iter().zip(x).map(|(a, b)| a.conj() * b).sum();
    Ok(y + complex_normal(rng, noise_power))
}

/// Uplink samples after analog combining: `Q^H (h x_u + n)`, noise drawn per element.
pub fn received_vector_bs<R: Rng + ?Sized>(
    combiner: &AnalogCombiner,
    h: &[Complex64],
    x_u: f64,
    noise_power: f64,
    rng: &mut R,
) -> Result<Vec<Complex64>> {
    let y: Vec<Complex64> = h.iter().map(|v| v * x_u + complex_normal(rng, noise_power)).collect();
    combiner.combine(&y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_pathloss_norm() {
        let cfg = DmaConfig::reference();
        let p = PolarPosition::new(12.0, 1.1).unwrap();
        let h = los_channel(&cfg, p, Pathloss::Constant);
        let norm: f64 = h.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let r0 = crate::geometry::center_distance(&cfg, p);
        let expect = free_space_amplitude(&cfg, r0) * (cfg.n_total() as f64).sqrt();
        assert!((norm - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn reference_amplitude_at_five_meters() {
        let cfg = DmaConfig::reference();
        let a = free_space_amplitude(&cfg, 5.0);
        assert!((a - 1.5915e-4).abs() < 1e-8);
        assert!((20.0 * a.log10() + 76.0).abs() < 0.05);
    }

    #[test]
    fn unit_reflection_at_one_wavelength() {
        let cfg = DmaConfig::reference();
        let ue = PlanePoint::new(0.0, 10.0);
        let s = Scatterer::new(PlanePoint::new(cfg.wavelength, 10.0), ue, 0.0).unwrap();
        let g = s.coefficient(&cfg);
        assert!((g - Complex64::new(1.0 / (4.0 * PI), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn noiseless_symbol_is_inner_product() {
        let cfg = DmaConfig {
            n_elements: 4,
            n_strips: 2,
            ..DmaConfig::reference()
        };
        let p = PolarPosition::new(3.0, 1.0).unwrap();
        let h = los_channel(&cfg, p, Pathloss::Constant);
        let x = vec![Complex64::new(0.1, 0.2); 8];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let y = received_symbol_ue(&cfg, &h, &x, 0.0, &mut rng).unwrap();
        let direct: Complex64 = h.iter().zip(&x).map(|(a, b)| a.conj() * b).sum();
        assert_eq!(y, direct);
        let loud = vec![Complex64::new(1.0, 0.0); 8];
        assert!(received_symbol_ue(&cfg, &h, &loud, 0.0, &mut rng).is_err());
    }
}
