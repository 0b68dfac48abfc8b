//! Channel synthesis, the focused transmit configuration and its gain,
//! plus an uplink sweep over one arc with a matched filter.

use nftrack::beamformer::{
    digital_steer, matched_power, optimal_gain, receive_analog_combiner, relative_gain, transmit_focus, transmit_gain,
};
use nftrack::channel::{received_vector_bs, ChannelRealization, Pathloss, Scatterer};
use nftrack::geometry::{DmaConfig, PlanePoint, PolarPosition};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> nftrack::Result<()> {
    let cfg = DmaConfig::reference();
    let user = PolarPosition::new(20.0, 1.0)?;

    let tx = transmit_focus(&cfg, user);
    println!("radiated power {:.4} W of {:.1} W budget", tx.power, cfg.tx_power);
    println!(
        "gain at the focus {:.2} (ceiling {:.2})",
        transmit_gain(&cfg, &tx.vector, user),
        optimal_gain(&cfg)
    );
    for (dr, dphi) in [(0.0, 0.0), (1.0, 0.0), (-1.0, 0.0), (0.0, 0.05), (1.0, 0.05)] {
        let p = PolarPosition::new(user.r + dr, user.phi + dphi)?;
        println!(
            "  user offset ({dr:+.1} m, {dphi:+.2} rad): relative gain {:.4}",
            relative_gain(&cfg, p, user)
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let spot = Scatterer::new(PlanePoint::new(8.0, 15.0), user.to_plane(), 0.3)?;
    let channel = ChannelRealization::new(&cfg, user, vec![spot], Pathloss::PerElement)?;
    let combiner = receive_analog_combiner(&cfg, user.r)?;
    let y = received_vector_bs(&combiner, &channel.h, 1e-3f64.sqrt(), 1e-13, &mut rng)?;
    let (best, power) = (0..41)
        .map(|k| user.phi - 0.2 + 0.01 * k as f64)
        .map(|phi| (phi, matched_power(&digital_steer(&cfg, user.r, phi), &y)))
        .fold((f64::NAN, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    println!(
        "uplink sweep on the 20 m arc peaks at {best:.3} rad (true {:.3}), power {power:.3e}",
        user.phi
    );
    Ok(())
}
