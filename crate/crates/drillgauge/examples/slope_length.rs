//! Normalized and extremal lengths of surgery slopes on cusp shapes.
//!
//! Run with: cargo run --example slope_length

use drillgauge::{CuspShape, Slope, WeightedClass};

fn main() -> drillgauge::Result<()> {
    // the square torus: lattice spanned by (1, 0) and (0, 1)
    let square = CuspShape::square();
    for (p, q) in [(1, 0), (0, 1), (1, 1), (3, 4)] {
        let slope = Slope::new(p, q)?;
        let l = square.slope_length(slope);
        println!(
            "square torus, slope {slope}: length {l:.6}, extremal {:.6}",
            l * l
        );
    }

    // the hexagonal torus has the densest lattice: the shortest slopes
    // are degenerate in threes
    let hex = CuspShape::hexagonal();
    println!(
        "\nhexagonal torus, slope (1, 0): length {:.12}",
        hex.slope_length(Slope::new(1, 0)?)
    );

    // any basis works; lengths are invariant under rescaling and
    // unimodular re-marking
    let sheared = CuspShape::from_basis([2.0, 0.0], [10.0, 2.0])?;
    println!(
        "sheared basis (2,0),(10,2), slope (0, 1): length {:.12}",
        sheared.slope_length(Slope::new(0, 1)?)
    );
    println!("reduced modulus: {:?}", sheared.modulus());
    println!("marking (user -> reduced): {:?}", sheared.marking());

    // weighted classes extend lengths to real coefficients, homogeneously
    let cls = WeightedClass::new(1.5, 2.5);
    println!(
        "\nsquare torus, weighted class (1.5, 2.5): length {:.12}",
        square.normalized_length(cls)?
    );
    Ok(())
}
