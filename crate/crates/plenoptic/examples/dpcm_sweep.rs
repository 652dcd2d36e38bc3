//! Operational coding of the moving Gaussian view: DPCM with estimated
//! trajectory side information, one-frame vs infinite prediction memory,
//! against the analytic rate bound.
//!
//! Uses a shortened horizon so it finishes in seconds; the figure-grade
//! sweep is `plenoptic fig-dpcm`.
//!
//! ```bash
//! cargo run --release --example dpcm_sweep
//! ```

use plenoptic::codec::{
    pareto_front, run_rd_sweep, snr_at_rate, CodecConfig, Memory, Trajectory,
};
use plenoptic::rd::{slb_ar1_upper, slb_validity};
use plenoptic::reality::Ar1FieldSpec;
use plenoptic::walk::WalkParams;

fn main() -> plenoptic::Result<()> {
    let walk = WalkParams::new(0.5)?;
    let field = Ar1FieldSpec::new(0.99)?;
    let l = 8;
    let lambdas = [0.1, 0.03, 0.01, 0.003, 0.001];
    let sweep = |memory| -> plenoptic::Result<_> {
        let cfg = CodecConfig {
            walk,
            field,
            memory,
            trajectory: Trajectory::Estimated,
            lambda: 1.0,
            max_levels: 64,
        };
        Ok(pareto_front(&run_rd_sweep(&cfg, l, 2000, &lambdas, 8, 99)?))
    };
    let one = sweep(Memory::OneFrame)?;
    let inf = sweep(Memory::Infinite)?;

    println!("p_w = 0.5, rho = 0.99, L = {l}, horizon 2000, 8 trials:");
    for (name, points) in [("memory = 1 frame", &one), ("memory = infinite", &inf)] {
        println!("{name}:");
        for p in points {
            println!(
                "  lambda {:>6}: {:.3} bits/scalar, {:.2} ± {:.2} dB",
                p.lambda, p.rate, p.snr_db, p.snr_ci95
            );
        }
    }
    for rate in [1.5, 2.0, 2.5] {
        if let (Some(a), Some(b)) = (snr_at_rate(&one, rate), snr_at_rate(&inf, rate)) {
            println!("at {rate} bits/scalar: infinite memory gains {:.2} dB", b - a);
        }
    }

    // analytic comparison: what an optimal coder could do at these rates
    let threshold = slb_validity(field.rho())?.snr_threshold_db;
    println!("\nanalytic bound (valid above {threshold:.1} dB):");
    for snr_db in [24, 28, 32] {
        let d = 10f64.powf(-(snr_db as f64) / 10.0);
        let p = slb_ar1_upper(walk, field, l, d, 1e-10)?;
        println!("  {snr_db} dB achievable at <= {:.3} bits/scalar", p.rate);
    }
    Ok(())
}
