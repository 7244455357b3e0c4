//! The excluded ellipse: which surgery coefficients are certified to lie
//! in hyperbolic Dehn surgery space.
//!
//! Run with: cargo run --example hds_region

use drillgauge::{hds_region, CuspShape, WeightedClass};

fn main() -> drillgauge::Result<()> {
    // on the square torus the ellipse is a round disk of radius 7.583
    let sq = CuspShape::square();
    let region = hds_region(&sq, 7.583)?;
    println!(
        "square torus: semi-axes ({:.4}, {:.4})",
        region.semi_major, region.semi_minor
    );
    println!("descriptor: {}", region.to_json());

    // a sheared torus stretches the ellipse along the short direction
    let sheared = CuspShape::from_basis([1.7, 0.0], [0.6, 0.45])?;
    let region = hds_region(&sheared, 7.583)?;
    println!(
        "\nsheared torus: semi-axes ({:.4}, {:.4}), axis ratio {:.4}",
        region.semi_major,
        region.semi_minor,
        region.semi_major / region.semi_minor
    );

    // membership is the defining length comparison
    for cls in [
        WeightedClass::new(8.0, 0.0),
        WeightedClass::new(3.0, 3.0),
        WeightedClass::new(0.0, 20.0),
    ] {
        println!(
            "  class ({:>4}, {:>4}): length {:>9.4}  in region: {}",
            cls.x,
            cls.y,
            sheared.normalized_length(cls)?,
            region.contains(cls)?
        );
    }
    Ok(())
}
