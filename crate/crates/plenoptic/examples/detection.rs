//! Trajectory detection: estimating the camera increment from two
//! consecutive frames.
//!
//! Compares the cheap overlap detectors against the exact Bayes error
//! computed by brute force on small instances.
//!
//! ```bash
//! cargo run --release --example detection
//! ```

use plenoptic::detect::{estimate_pe, DetectModel, DetectorKind};
use plenoptic::oracle::{exact_pe, EnumerationBudget};
use plenoptic::reality::{Ar1FieldSpec, BscFieldSpec, StaticWallSpec};
use plenoptic::walk::WalkParams;

fn main() -> plenoptic::Result<()> {
    let budget = EnumerationBudget::default();
    let trials = 200_000;
    let seed = 5;

    println!("static binary wall, uniform symbols:");
    println!(
        "{:>6} {:>4} {:>12} {:>14} {:>12}",
        "p_w", "L", "bayes exact", "map MC", "hamming MC"
    );
    for (p_w, l) in [(0.5, 3), (0.3, 3), (0.5, 5)] {
        let walk = WalkParams::new(p_w)?;
        let model = DetectModel::Static(StaticWallSpec::bernoulli(0.5)?);
        let exact = exact_pe(walk, &model, l, budget)?;
        let map = estimate_pe(walk, &model, l, DetectorKind::MapOracle, trials, seed)?;
        let ham = estimate_pe(walk, &model, l, DetectorKind::Hamming, trials, seed)?;
        println!(
            "{p_w:>6.2} {l:>4} {exact:>12.6} {:>8.6} ±{:>4.4} {:>7.6}",
            map.p_e_hat, map.ci95_halfwidth, ham.p_e_hat
        );
    }

    // a flipping background makes detection harder
    println!("\nbinary field with flip rate p_i, p_w = 0.5, L = 4:");
    let walk = WalkParams::new(0.5)?;
    for p_i in [0.0, 0.02, 0.1] {
        let model = DetectModel::Bsc(BscFieldSpec::new(0.5, p_i)?);
        let exact = exact_pe(walk, &model, 4, budget)?;
        let mc = estimate_pe(walk, &model, 4, DetectorKind::Hamming, trials, seed)?;
        println!(
            "  p_i = {p_i}: bayes {exact:.5}, hamming {:.5} ± {:.5}",
            mc.p_e_hat, mc.ci95_halfwidth
        );
    }

    // for the Gaussian field there is no ambiguity: error probability is
    // tiny and driven by innovation noise
    println!("\nGaussian AR(1), minimum-residual detector, p_w = 0.5, L = 8:");
    for rho in [0.9, 0.99] {
        let model = DetectModel::Ar1(Ar1FieldSpec::new(rho)?);
        let mc = estimate_pe(walk, &model, 8, DetectorKind::Mmse, 1_000_000, seed)?;
        println!(
            "  rho = {rho}: pe {:.2e} (95% CI half-width {:.1e})",
            mc.p_e_hat, mc.ci95_halfwidth
        );
    }
    Ok(())
}
