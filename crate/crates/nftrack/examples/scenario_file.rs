//! Loads a flat key/value scenario and shows how unknown keys are rejected.

use nftrack::sim::parse_scenario;

fn main() {
    let text = "
kappa = 70
trajectories = 10
carrier_frequency = 28e9
kappa_sweep = [50, 90]
";
    match parse_scenario(text) {
        Ok(s) => println!(
            "kappa {} over {} paths, wavelength {:.5} m, element spacing {:.5} m",
            s.tracker.kappa, s.trajectories, s.dma.wavelength, s.dma.element_spacing
        ),
        Err(e) => println!("unexpected error: {e}"),
    }
    match parse_scenario("kapa = 70\n") {
        Ok(_) => println!("typo accepted?"),
        Err(e) => println!("rejected: {e}"),
    }
}
