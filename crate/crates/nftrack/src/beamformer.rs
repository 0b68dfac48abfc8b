//! Lorentzian-constrained metasurface weights, transmit focusing, receive sweep combiners and gains.

use crate::channel::{for_each_distance, DistanceMode};
use crate::error::{Error, Result};
use crate::geometry::{DmaConfig, PolarPosition};
use num_complex::Complex64;

const J: Complex64 = Complex64::new(0.0, 1.0);

/// Distance from the strip feed to element `n`, meters.
pub fn feed_distance(cfg: &DmaConfig, n: usize) -> f64 {
    n as f64 * cfg.element_spacing
}

/// Propagation factor `exp(-(alpha + j beta) rho)` from the feed to element `n`.
pub fn microstrip_factor(cfg: &DmaConfig, n: usize) -> Complex64 {
    let rho = feed_distance(cfg, n);
    Complex64::from_polar((-cfg.attenuation * rho).exp(), -cfg.guided_wavenumber() * rho)
}

/// Lorentzian weight `0.5 (j + e^{j theta})`.
pub fn lorentzian(theta: f64) -> Complex64 {
    0.5 * (J + Complex64::from_polar(1.0, theta))
}

/// Hybrid transmit configuration focused on one point.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridTxConfig {
    /// Effective radiated vector (propagation, analog and digital weights combined).
    pub vector: Vec<Complex64>,
    /// Per-element analog weights, scaled by `1/sqrt(N_e)`.
    pub analog: Vec<Complex64>,
    /// Per-strip digital weights.
    pub digital: Vec<Complex64>,
    pub focus: PolarPosition,
    /// Radiated power `||vector||^2`, watts.
    pub power: f64,
}

/// Optimal transmit configuration for a user at `focus`.
pub fn transmit_focus(cfg: &DmaConfig, focus: PolarPosition) -> HybridTxConfig {
    let k = cfg.wavenumber();
    let beta = cfg.guided_wavenumber();
    let ne = cfg.n_elements;
    let scale = 1.0 / (ne as f64).sqrt();
    let digital = vec![Complex64::new((cfg.tx_power / cfg.n_strips as f64).sqrt(), 0.0); cfg.n_strips];
    let mut analog = vec![Complex64::new(0.0, 0.0); cfg.n_total()];
    let mut vector = analog.clone();
    for_each_distance(cfg, focus, DistanceMode::Exact, |idx, d| {
        let n = idx % ne;
        let q = scale * lorentzian(-k * d + beta * feed_distance(cfg, n));
        analog[idx] = q;
        vector[idx] = microstrip_factor(cfg, n) * q * digital[idx / ne];
    });
    let power = vector.iter().map(|v| v.norm_sqr()).sum();
    HybridTxConfig {
        vector,
        analog,
        digital,
        focus,
        power,
    }
}

/// Gain ceiling `0.25 P_b N` of a lossless array.
pub fn optimal_gain(cfg: &DmaConfig) -> f64 {
    0.25 * cfg.tx_power * cfg.n_total() as f64
}

/// `|a(p)^H x|^2` for a radiated vector `x`.
pub fn transmit_gain(cfg: &DmaConfig, x: &[Complex64], p: PolarPosition) -> f64 {
    let k = cfg.wavenumber();
    let mut acc = Complex64::new(0.0, 0.0);
    for_each_distance(cfg, p, DistanceMode::Exact, |idx, d| {
        acc += Complex64::from_polar(1.0, k * d) * x[idx];
    });
    acc.norm_sqr()
}

/// `|sum w conj(a(p)) a(focus)|^2 / (sum w)^2` given the focus phases.
fn weighted_gain(cfg: &DmaConfig, focus_phase: &[f64], p: PolarPosition, weights: Option<&[f64]>) -> f64 {
    let k = cfg.wavenumber();
    let ne = cfg.n_elements;
    let mut acc = Complex64::new(0.0, 0.0);
    for_each_distance(cfg, p, DistanceMode::Exact, |idx, d| {
        let w = weights.map_or(1.0, |w| w[idx % ne]);
        acc += Complex64::from_polar(w, k * d - focus_phase[idx]);
    });
    let total = match weights {
        Some(w) => w.iter().sum::<f64>() * cfg.n_strips as f64,
        None => cfg.n_total() as f64,
    };
    acc.norm_sqr() / (total * total)
}

fn attenuation_profile(cfg: &DmaConfig) -> Vec<f64> {
    (0..cfg.n_elements)
        .map(|n| (-cfg.attenuation * feed_distance(cfg, n)).exp())
        .collect()
}

/// Focus phases cached for repeated gain evaluation at a moving user.
#[derive(Debug, Clone)]
pub struct FocusedBeam {
    phase: Vec<f64>,
    weights: Option<Vec<f64>>,
    pub focus: PolarPosition,
}

impl FocusedBeam {
    pub fn new(cfg: &DmaConfig, focus: PolarPosition) -> Self {
        let k = cfg.wavenumber();
        let mut phase = vec![0.0; cfg.n_total()];
        for_each_distance(cfg, focus, DistanceMode::Exact, |idx, d| phase[idx] = k * d);
        let weights = (cfg.attenuation > 0.0).then(|| attenuation_profile(cfg));
        FocusedBeam { phase, weights, focus }
    }

    /// Relative gain seen by a user at `p`.
    pub fn gain(&self, cfg: &DmaConfig, p: PolarPosition) -> f64 {
        weighted_gain(cfg, &self.phase, p, self.weights.as_deref())
    }
}

/// Relative gain `|a(p)^H a(focus)|^2 / N^2` of a lossless array, exact distances.
pub fn relative_gain(cfg: &DmaConfig, p: PolarPosition, focus: PolarPosition) -> f64 {
    let lossless = DmaConfig {
        attenuation: 0.0,
        ..cfg.clone()
    };
    FocusedBeam::new(&lossless, focus).gain(&lossless, p)
}

/// Relative gain with microstrip attenuation, normalized by the matched lossy gain.
pub fn lossy_relative_gain(cfg: &DmaConfig, p: PolarPosition, focus: PolarPosition) -> f64 {
    let k = cfg.wavenumber();
    let mut phase = vec![0.0; cfg.n_total()];
    for_each_distance(cfg, focus, DistanceMode::Exact, |idx, d| phase[idx] = k * d);
    weighted_gain(cfg, &phase, p, Some(&attenuation_profile(cfg)))
}

/// Depth limits found by scanning [`lossy_relative_gain`] along the range axis.
///
/// Returns `(towards the array, away from it)`; the outward side is infinite
/// if the gain never falls to the threshold within `max_range`.
pub fn scanned_depth_limits(
    cfg: &DmaConfig,
    p: PolarPosition,
    kappa: f64,
    initial_step: f64,
    max_range: f64,
) -> Result<(f64, f64)> {
    if !(kappa > 0.0 && kappa < 100.0) || !(initial_step > 0.0) {
        return Err(Error::Domain(
            "threshold in (0, 100) and a positive step required".into(),
        ));
    }
    let target = 0.01 * kappa;
    let gain = |dr: f64| {
        lossy_relative_gain(
            cfg,
            p,
            PolarPosition {
                r: p.r + dr,
                phi: p.phi,
            },
        )
    };
    let search = |sign: f64, limit: f64| -> Option<f64> {
        let mut lo = 0.0;
        let mut step = initial_step;
        loop {
            let hi = (lo + step).min(limit);
            if gain(sign * hi) <= target {
                let (mut a, mut b) = (lo, hi);
                for _ in 0..60 {
                    let m = 0.5 * (a + b);
                    if gain(sign * m) > target {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                return Some(0.5 * (a + b));
            }
            if hi >= limit {
                return None;
            }
            lo = hi;
            step *= 1.25;
        }
    };
    let minus = search(-1.0, p.r * (1.0 - 1e-9))
        .ok_or_else(|| Error::NoRoot("gain stays above threshold up to the array".into()))?;
    let plus = search(1.0, max_range - p.r).unwrap_or(f64::INFINITY);
    Ok((minus, plus))
}

/// Receive analog combiner: block-diagonal, one column per strip.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalogCombiner {
    /// Lorentzian weights per element, strip-major.
    pub weights: Vec<Complex64>,
    /// Weights with the feed-to-element propagation folded in.
    pub effective: Vec<Complex64>,
    pub n_elements: usize,
    pub n_strips: usize,
    pub includes_propagation: bool,
}

impl AnalogCombiner {
    /// Applies `Q^H y`, one output per strip.
    pub fn combine(&self, y: &[Complex64]) -> Result<Vec<Complex64>> {
        if y.len() != self.n_elements * self.n_strips {
            return Err(Error::Domain(format!(
                "combiner expects {} samples, got {}",
                self.n_elements * self.n_strips,
                y.len()
            )));
        }
        let taps = if self.includes_propagation {
            &self.effective
        } else {
            &self.weights
        };
        Ok(taps
            .chunks(self.n_elements)
            .zip(y.chunks(self.n_elements))
            .map(|(q, v)| q.iter().zip(v).map(|(a, b)| a.conj() * b).sum())
            .collect())
    }
}

/// Receive combiner focusing all strips on the arc of range `r` (unnormalized).
pub fn receive_analog_combiner(cfg: &DmaConfig, r: f64) -> Result<AnalogCombiner> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("combiner range must be positive, got {r}")));
    }
    let k = cfg.wavenumber();
    let beta = cfg.guided_wavenumber();
    let z0 = cfg.height_offset;
    let mut weights = Vec::with_capacity(cfg.n_total());
    let mut effective = Vec::with_capacity(cfg.n_total());
    for i in 0..cfg.n_strips {
        let ix = cfg.strip_offset(i);
        for n in 0..cfg.n_elements {
            let nd = n as f64 * cfg.element_spacing;
            let theta = k * ((ix * ix + nd * nd) / (2.0 * r) + z0 * nd / r);
            let q = lorentzian(-(theta - beta * feed_distance(cfg, n)));
            weights.push(q);
            effective.push(microstrip_factor(cfg, n) * q);
        }
    }
    Ok(AnalogCombiner {
        weights,
        effective,
        n_elements: cfg.n_elements,
        n_strips: cfg.n_strips,
        includes_propagation: true,
    })
}

/// Digital steering across strips towards azimuth `phi` on the arc of range `r`.
pub fn digital_steer(cfg: &DmaConfig, r: f64, phi: f64) -> Vec<Complex64> {
    let k = cfg.wavenumber();
    let c = phi.cos();
    (0..cfg.n_strips)
        .map(|i| {
            let x = cfg.strip_offset(i);
            Complex64::from_polar(1.0, k * (x * c + x * x * c * c / (2.0 * r)))
        })
        .collect()
}

/// Matched-filter output power `|v^H y|^2`.
pub fn matched_power(v: &[Complex64], y: &[Complex64]) -> f64 {
    v.iter().zip(y).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn feed_factor() {
        let cfg = DmaConfig::reference();
        assert_eq!(microstrip_factor(&cfg, 0), Complex64::new(1.0, 0.0));
        let lossy = cfg.clone().with_attenuation(0.7381);
        let mid = microstrip_factor(&lossy, 100).norm();
        assert!((mid - (-0.7381f64 * 0.5).exp()).abs() < 1e-12);
    }

    #[test]
    fn transmit_weights_sit_on_the_lorentzian_circle() {
        let cfg = DmaConfig {
            n_elements: 40,
            n_strips: 4,
            ..DmaConfig::reference()
        };
        let tx = transmit_focus(&cfg, PolarPosition::new(6.0, 1.0).unwrap());
        let rad = 0.5 / (cfg.n_elements as f64).sqrt();
        for q in &tx.analog {
            assert!(((q - J * rad).norm() - rad).abs() < 1e-14);
        }
        assert!(tx.power <= cfg.tx_power);
    }

    #[test]
    fn optimal_gain_reference() {
        assert_eq!(optimal_gain(&DmaConfig::reference()), 500.0);
    }

    #[test]
    fn digital_steer_broadside_is_flat() {
        let cfg = DmaConfig::reference();
        for v in digital_steer(&cfg, 20.0, PI / 2.0) {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
        let single = DmaConfig { n_strips: 1, ..cfg };
        assert_eq!(digital_steer(&single, 20.0, 0.3), vec![Complex64::new(1.0, 0.0)]);
    }

    #[test]
    fn self_gain_is_one() {
        let cfg = DmaConfig::reference();
        let p = PolarPosition::new(17.0, 0.8).unwrap();
        assert!((relative_gain(&cfg, p, p) - 1.0).abs() < 1e-12);
        let lossy = cfg.with_attenuation(0.8);
        assert!((lossy_relative_gain(&lossy, p, p) - 1.0).abs() < 1e-12);
    }
}
