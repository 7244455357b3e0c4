//! The deformation bound evaluators: error interval, boundary-term
//! values, the L2 estimate, and the admissible-ellipse maximizer.
//!
//! Run with: cargo run --example bounds

use drillgauge::constants::HIGH_ANGLE_RADIUS_GATE;
use drillgauge::{b00_upper, bmm, error_interval, l2_upper, slice_max, BoundaryForm};

fn main() -> drillgauge::Result<()> {
    // the relative-error interval for dl/dalpha = (l/alpha)(1 + E)
    // shrinks to zero as the tube radius grows; its lower endpoint passes
    // -1 exactly at arctanh(1/sqrt(3))
    println!("{:>8} {:>16} {:>16}", "radius", "e_lo", "e_hi");
    for r in [0.531, HIGH_ANGLE_RADIUS_GATE, 1.0, 2.0, 4.0, 8.0] {
        let e = error_interval(r)?;
        println!("{:>8.5} {:>16.9} {:>16.9}", r, e.e_lo, e.e_hi);
    }

    // boundary-term bounds at tube data (alpha, ell, R)
    let (alpha, ell, radius) = (std::f64::consts::TAU, 0.05, 1.0);
    println!("\nat alpha = 2*pi, ell = {ell}, R = {radius}:");
    println!("  bmm       {:.12e}", bmm(alpha, ell, radius)?);
    println!("  b00_upper {:.12e}", b00_upper(alpha, ell, radius)?);
    println!("  l2_upper  {:.12e}", l2_upper(alpha, ell, radius)?.bound);

    // a signature (+,-,-) boundary form; fixing the angle component
    // confines the form to an ellipse, and the maximizer solves the
    // constrained maximum in closed form
    let form = BoundaryForm::new([[2.0, 0.4, -0.1], [0.4, -1.0, 0.2], [-0.1, 0.2, -1.5]])?;
    println!("\nform eigenvalues: {:?}", form.eigenvalues());
    let m = slice_max(&form, [1.0, 0.0, 0.0])?;
    println!(
        "slice max {:.9} at (1, {:.6}, {:.6})",
        m.max_value, m.argmax[1], m.argmax[2]
    );
    Ok(())
}
