//! First-passage and recurrence behavior of the viewpoint walk.
//!
//! Compares the closed-form first-return probabilities (Catalan numbers)
//! and the first-passage limit `1 - 2 p_w` against seeded Monte-Carlo
//! frequencies.
//!
//! ```bash
//! cargo run --release --example walk_recurrence
//! ```

use plenoptic::walk::{
    mc_first_passage, mc_first_return_freqs, return_prob, WalkParams,
};

fn main() -> plenoptic::Result<()> {
    let seed = 42;
    for p_w in [0.1, 0.3, 0.5] {
        let walk = WalkParams::new(p_w)?;
        let mc = mc_first_passage(walk, 10_000, 100_000, seed);
        println!(
            "p_w = {p_w}: escape frequency {mc:.4}  (limit 1 - 2 p_w = {:.4})",
            1.0 - 2.0 * p_w
        );
    }
    println!();

    // first-return distribution at p_w = 0.3, exact vs simulated
    let walk = WalkParams::new(0.3)?;
    let freqs = mc_first_return_freqs(walk, 20, 200_000, seed);
    println!("first return at step 2m, p_w = 0.3:");
    println!("{:>4} {:>12} {:>12}", "2m", "exact", "simulated");
    for m in 1..=6u64 {
        let exact = return_prob(walk, 2 * m)?;
        println!(
            "{:>4} {:>12.6} {:>12.6}",
            2 * m,
            exact,
            freqs[(2 * m - 1) as usize]
        );
    }
    Ok(())
}
