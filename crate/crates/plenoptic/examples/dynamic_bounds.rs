//! Entropy-rate bounds for the binary dynamic field, and the crossing
//! between a recurrent viewer and a panning viewer.
//!
//! With a static wall, panning (p_w = 0) is the most expensive motion:
//! every step reveals a fresh symbol. Once the background flips at rate
//! p_i, revisited sites stop being free, and for large enough p_i the
//! recurrent viewer (p_w = 0.5) becomes the more expensive one.
//!
//! ```bash
//! cargo run --release --example dynamic_bounds
//! ```

use plenoptic::entropy::dynamic_cond_rate_bsc;
use plenoptic::walk::WalkParams;

fn main() -> plenoptic::Result<()> {
    let l = 8;
    let recurrent = WalkParams::new(0.5)?;
    let panning = WalkParams::new(0.05)?;

    println!("upper bounds on the view entropy rate, L = {l}:");
    println!(
        "{:>10} {:>12} {:>12}",
        "p_i", "p_w=0.5", "p_w=0.05"
    );
    let mut crossing = None;
    let mut prev_sign = None;
    for i in 0..=60 {
        // log spacing: the crossing sits at small p_i
        let p_i = 1e-4 * (0.5f64 / 1e-4).powf(i as f64 / 60.0);
        let a = recurrent.step_entropy() + dynamic_cond_rate_bsc(recurrent, p_i, l, 1e-10)?.value;
        let b = panning.step_entropy() + dynamic_cond_rate_bsc(panning, p_i, l, 1e-10)?.value;
        let sign = (a - b).signum();
        if prev_sign.is_some_and(|s| s != sign) {
            crossing = Some(p_i);
        }
        prev_sign = Some(sign);
        if i % 10 == 0 {
            println!("{p_i:>10.5} {a:>12.5} {b:>12.5}");
        }
    }
    match crossing {
        Some(p_i) => println!("\ncurves cross just below p_i = {p_i:.5}"),
        None => println!("\nno crossing found"),
    }
    Ok(())
}
