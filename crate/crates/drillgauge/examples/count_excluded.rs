//! Counting the slopes a length threshold cannot certify.
//!
//! Run with: cargo run --example count_excluded

use drillgauge::constants::{FILL_THRESHOLD_MULTI, FILL_THRESHOLD_SINGLE};
use drillgauge::{count_excluded, CuspShape};

fn main() -> drillgauge::Result<()> {
    let shapes = [
        ("square", CuspShape::square()),
        ("hexagonal", CuspShape::hexagonal()),
        ("tall (y = 28)", CuspShape::from_modulus(0.0, 28.0)?),
        ("tall (y = 56.5)", CuspShape::from_modulus(0.0, 56.5)?),
    ];

    println!(
        "{:<16} {:>10} {:>10}",
        "shape", FILL_THRESHOLD_SINGLE, FILL_THRESHOLD_MULTI
    );
    for (name, shape) in &shapes {
        println!(
            "{:<16} {:>10} {:>10}",
            name,
            count_excluded(shape, FILL_THRESHOLD_SINGLE),
            count_excluded(shape, FILL_THRESHOLD_MULTI),
        );
    }

    // the short slopes themselves, with lengths
    let hex = CuspShape::hexagonal();
    println!("\nhexagonal torus, slopes below 2.2:");
    for (slope, len) in hex.enumerate_slopes(2.2)? {
        println!("  {slope}  length {len:.12}");
    }
    Ok(())
}
