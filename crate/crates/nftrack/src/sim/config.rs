//! Flat key/value scenario files (TOML syntax). Every key is optional;
//! missing keys keep the reference defaults and unknown keys are rejected.

use super::{Scenario, TrajectorySpec};
use crate::channel::DistanceMode;
use crate::error::{Error, Result};
use crate::geometry::{OffsetTerm, SPEED_OF_LIGHT};
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    // array
    n_elements: Option<usize>,
    n_strips: Option<usize>,
    element_spacing: Option<f64>,
    strip_spacing: Option<f64>,
    wavelength: Option<f64>,
    carrier_frequency: Option<f64>,
    height_offset: Option<f64>,
    centered: Option<bool>,
    permittivity: Option<f64>,
    attenuation: Option<f64>,
    tx_power: Option<f64>,
    verbatim_offset_term: Option<bool>,
    // protocol
    kappa: Option<f64>,
    delta: Option<f64>,
    e_c: Option<f64>,
    e_u: Option<f64>,
    gamma: Option<f64>,
    u_th: Option<f64>,
    pilots: Option<usize>,
    // trajectories
    control_points: Option<usize>,
    trajectory_steps: Option<usize>,
    mean_speed: Option<f64>,
    r_min: Option<f64>,
    r_max: Option<f64>,
    phi_min: Option<f64>,
    phi_max: Option<f64>,
    // link budget and sampling
    pu_dbm: Option<f64>,
    noise_dbm: Option<f64>,
    sample_step: Option<f64>,
    seed: Option<u64>,
    trajectories: Option<usize>,
    kappa_sweep: Option<Vec<f64>>,
    // single-point queries
    range: Option<f64>,
    azimuth: Option<f64>,
    speed: Option<f64>,
    grid_range: Option<f64>,
    grid_azimuth: Option<f64>,
    grid_radius: Option<f64>,
    grid_resolution: Option<f64>,
    // presets
    fig2_max_elements: Option<usize>,
    fresnel_channel: Option<bool>,
}

/// Parses scenario text on top of [`Scenario::default`].
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let f: ScenarioFile = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
    let mut s = Scenario::default();
    let d = &mut s.dma;
    macro_rules! set {
        ($dst:expr, $src:expr) => {
            if let Some(v) = $src {
                $dst = v;
            }
        };
    }
    if f.wavelength.is_some() && f.carrier_frequency.is_some() {
        return Err(Error::Config(
            "give either wavelength or carrier_frequency, not both".into(),
        ));
    }
    if let Some(fc) = f.carrier_frequency {
        d.wavelength = SPEED_OF_LIGHT / fc;
    }
    set!(d.wavelength, f.wavelength);
    // Spacings follow the wavelength unless given explicitly.
    d.element_spacing = d.wavelength / 2.0;
    d.strip_spacing = d.wavelength / 2.0;
    set!(d.n_elements, f.n_elements);
    set!(d.n_strips, f.n_strips);
    set!(d.element_spacing, f.element_spacing);
    set!(d.strip_spacing, f.strip_spacing);
    set!(d.height_offset, f.height_offset);
    if f.centered == Some(true) {
        if f.height_offset.is_some() {
            return Err(Error::Config("give either height_offset or centered, not both".into()));
        }
        d.height_offset = -0.5 * d.strip_length();
    }
    set!(d.permittivity, f.permittivity);
    set!(d.attenuation, f.attenuation);
    set!(d.tx_power, f.tx_power);
    if f.verbatim_offset_term == Some(true) {
        d.offset_term = OffsetTerm::Verbatim;
    }

    let t = &mut s.tracker;
    set!(t.kappa, f.kappa);
    set!(t.delta, f.delta);
    set!(t.e_c, f.e_c);
    set!(t.e_u, f.e_u);
    set!(t.gamma, f.gamma);
    set!(t.u_th, f.u_th);
    set!(t.pilots, f.pilots);

    let tr: &mut TrajectorySpec = &mut s.trajectory;
    set!(tr.control_points, f.control_points);
    set!(tr.steps, f.trajectory_steps);
    set!(tr.mean_speed, f.mean_speed);
    set!(tr.r_min, f.r_min);
    set!(tr.r_max, f.r_max);
    set!(tr.phi_min, f.phi_min);
    set!(tr.phi_max, f.phi_max);

    set!(s.pu_dbm, f.pu_dbm);
    set!(s.noise_dbm, f.noise_dbm);
    set!(s.sample_step, f.sample_step);
    set!(s.seed, f.seed);
    set!(s.trajectories, f.trajectories);
    set!(s.kappa_sweep, f.kappa_sweep);
    set!(s.query.range, f.range);
    set!(s.query.azimuth, f.azimuth);
    set!(s.query.speed, f.speed);
    set!(s.query.grid_range, f.grid_range);
    set!(s.query.grid_azimuth, f.grid_azimuth);
    set!(s.query.grid_radius, f.grid_radius);
    set!(s.query.grid_resolution, f.grid_resolution);
    set!(s.fig2_max_elements, f.fig2_max_elements);
    if f.fresnel_channel == Some(true) {
        s.channel_distance = DistanceMode::Fresnel;
    }
    s.validate()?;
    Ok(s)
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    parse_scenario(&std::fs::read_to_string(path)?)
}
