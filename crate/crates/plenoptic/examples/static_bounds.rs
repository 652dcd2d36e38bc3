//! Entropy-rate bounds for viewing a static wall through an L-site
//! window, swept over the walk bias.
//!
//! The view process entropy rate is sandwiched between
//! `(1-2p_w) H(X) + H(p_w) - H(P_e)` and `(1-2p_w) H(X) + H(p_w)`.
//! For an odd window over a uniform wall the slack can be bounded
//! analytically, so no simulation is needed.
//!
//! ```bash
//! cargo run --release --example static_bounds
//! ```

use plenoptic::entropy::static_bounds_al;
use plenoptic::walk::WalkParams;

fn main() -> plenoptic::Result<()> {
    let alphabet = 2;
    let l = 9;
    println!("binary uniform wall, window L = {l}");
    println!("{:>6} {:>10} {:>10} {:>10}", "p_w", "lower", "upper", "gap");
    for i in 0..=10 {
        let p_w = 0.05 * i as f64;
        let walk = WalkParams::new(p_w)?;
        let report = static_bounds_al(walk, alphabet, l)?;
        println!(
            "{:>6.2} {:>10.6} {:>10.6} {:>10.2e}",
            p_w,
            report.lower,
            report.upper,
            report.upper - report.lower
        );
    }
    println!();
    println!("panning (p_w = 0) and maximal dithering (p_w = 0.5) both");
    println!("cost 1 bit per step here; what changes in between is how the");
    println!("budget splits between fresh wall symbols and the trajectory.");
    Ok(())
}
