//! Worst-case exclusion counts over the moduli space of cusp shapes.
//!
//! The search confirms the published constants: at most 60 slopes below
//! the single-cusp threshold 7.515 on any unit-area torus, at most 114
//! below the multi-cusp threshold 10.627.
//!
//! Run with: cargo run --release --example moduli_max

use drillgauge::constants::exclusion_cap;
use drillgauge::{max_excluded_over_moduli, SearchConfig};

fn main() -> drillgauge::Result<()> {
    let config = SearchConfig::default();
    for bound in [7.515, 10.627] {
        let r = max_excluded_over_moduli(bound, &config)?;
        println!(
            "bound {bound}: max_count {} at modulus ({:.6}, {:.6}) \
             [{} samples, {} refinement rounds]",
            r.max_count,
            r.argmax_modulus.0,
            r.argmax_modulus.1,
            r.samples_evaluated,
            r.refinement_depth
        );
        match exclusion_cap(bound) {
            Some(cap) if r.max_count <= cap => {
                println!("  confirms the published bound {cap}");
            }
            Some(cap) => {
                println!("  DISCREPANCY: exceeds the published bound {cap}");
            }
            None => {}
        }
    }
    Ok(())
}
