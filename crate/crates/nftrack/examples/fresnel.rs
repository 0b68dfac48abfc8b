//! Fresnel integrals and the range-mismatch correlation built on them.

use nftrack::analysis::{corr_i, corr_k};
use nftrack::geometry::DmaConfig;
use nftrack::special::fresnel;

fn main() -> nftrack::Result<()> {
    println!("     x        C(x)              S(x)");
    for x in [0.0, 0.5, 1.0, 1.5, 2.0, 5.0, 10.0, 50.0] {
        let (c, s) = fresnel(x);
        println!("{x:6.2}  {c:16.13}  {s:16.13}");
    }

    let cfg = DmaConfig::reference();
    println!("\n  x     I(x)   I(x)^2");
    for x in [0.0, 0.25, 0.5, 0.76641, 1.0, 1.5] {
        let i = corr_i(x, &cfg);
        println!("{x:7.5}  {i:6.4}  {:6.4}", i * i);
    }
    println!(
        "\ncorrelation for a 1 m range error at 20 m, pi/3: {:.4}",
        corr_k(1.0, 20.0, std::f64::consts::FRAC_PI_3, &cfg)?
    );
    Ok(())
}
