//! Cost of memory-constrained coding: how fast the finite-memory bound
//! on `H(V_M | V^{M-1})` approaches the long-run entropy rate.
//!
//! ```bash
//! cargo run --release --example memory_curves
//! ```

use plenoptic::entropy::{conditional_bound_memory, dynamic_bound_memory_bsc, dynamic_cond_rate_bsc};
use plenoptic::walk::WalkParams;

fn main() -> plenoptic::Result<()> {
    let h_x = 8.0; // uniform 256-ary wall
    println!("static wall, |X| = 256, bits per step:");
    print!("{:>8}", "M");
    for p_w in [0.1, 0.25, 0.5] {
        print!(" {:>10}", format!("p_w={p_w}"));
    }
    println!();
    for m in [1u64, 2, 4, 16, 64, 256, 1024, 10_000] {
        print!("{m:>8}");
        for p_w in [0.1, 0.25, 0.5] {
            let walk = WalkParams::new(p_w)?;
            print!(" {:>10.4}", conditional_bound_memory(walk, h_x, m));
        }
        println!();
    }
    for p_w in [0.1, 0.25, 0.5] {
        let walk = WalkParams::new(p_w)?;
        let limit = (1.0 - 2.0 * p_w) * h_x + walk.step_entropy();
        println!("  p_w = {p_w}: limit {limit:.4}");
    }

    // dynamic analog: binary field with per-step flips, L = 8
    let walk = WalkParams::new(0.5)?;
    let p_i = 0.01;
    let l = 8;
    let limit = walk.step_entropy() + dynamic_cond_rate_bsc(walk, p_i, l, 1e-10)?.value;
    println!();
    println!("dynamic binary field, p_i = {p_i}, L = {l}, p_w = 0.5:");
    for m in [1u64, 2, 4, 16, 64, 256, 1024] {
        let b = dynamic_bound_memory_bsc(walk, p_i, l, m);
        println!("  M = {m:>5}: {b:.4} bits  (excess {:.4})", b - limit);
    }
    Ok(())
}
