//! Emitting filling certificates from normalized lengths.
//!
//! Run with: cargo run --example certify

use drillgauge::{certify_class, certify_fill, CertifyConfig, CuspShape, Slope, WeightedClass};

fn main() -> drillgauge::Result<()> {
    let config = CertifyConfig::default();

    // user slope (1, 0) on the modulus (0, y) torus has length 1/sqrt(y);
    // pick y so the lengths straddle the 7.515 threshold
    for l_hat in [8.0, 7.515, 7.4] {
        let shape = CuspShape::from_modulus(0.0, 1.0 / (l_hat * l_hat))?;
        let cert = certify_fill(&shape, "demo", Slope::new(1, 0)?, &config);
        println!(
            "target length {l_hat}: verdict {:?}  (recorded length {:.9})",
            cert.verdict, cert.numbers["normalized_length"]
        );
    }

    // certificates serialize to a stable JSON record
    let shape = CuspShape::from_modulus(0.1, 1.0 / 70.0)?;
    let cert = certify_fill(&shape, "demo", Slope::new(1, 0)?, &config);
    println!("\n{}", cert.to_json());

    // a certificate with an attached cone-family volume enclosure
    let cert = certify_fill(
        &shape,
        "demo",
        Slope::new(1, 0)?,
        &CertifyConfig {
            integrate: true,
            ..CertifyConfig::default()
        },
    );
    println!("\nwith integration: {}", cert.to_json());

    // weighted classes certify against the surgery-space threshold 7.583
    let sq = CuspShape::square();
    let cert = certify_class(&sq, "square", WeightedClass::new(5.5, 5.5), &config)?;
    println!(
        "\nclass (5.5, 5.5) on the square torus: {:?} (length {:.6})",
        cert.verdict, cert.numbers["normalized_length"]
    );
    Ok(())
}
