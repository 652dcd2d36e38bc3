//! Differential entropy rate bounds for the Gaussian AR(1) field, with
//! the Jensen/generating-function shortcut for the recurrence series.
//!
//! ```bash
//! cargo run --release --example gaussian_bounds
//! ```

use plenoptic::detect::{estimate_pe, fano_term, DetectModel, DetectorKind};
use plenoptic::entropy::{
    dynamic_bounds, dynamic_cond_rate_ar1, gaussian_diff_entropy, jensen_upper_ar1,
};
use plenoptic::reality::Ar1FieldSpec;
use plenoptic::walk::WalkParams;

fn main() -> plenoptic::Result<()> {
    let l = 8;
    let walk = WalkParams::new(0.5)?;
    println!("h(V) bounds per frame, L = {l}, p_w = 0.5 (bits):");
    println!(
        "{:>6} {:>12} {:>12} {:>10}",
        "rho", "lower", "upper", "pe_hat"
    );
    for rho in [0.5, 0.8, 0.9, 0.95, 0.99] {
        let field = Ar1FieldSpec::new(rho)?;
        let pe = estimate_pe(
            walk,
            &DetectModel::Ar1(field),
            l,
            DetectorKind::Mmse,
            200_000,
            7,
        )?;
        let cond = dynamic_cond_rate_ar1(walk, rho, l, 1e-10)?;
        let report = dynamic_bounds(cond, walk, fano_term(pe.p_e_hat));
        println!(
            "{rho:>6.2} {:>12.5} {:>12.5} {:>10.2e}",
            report.lower, report.upper, pe.p_e_hat
        );
    }

    // the recurrence series has a closed-form Jensen upper bound through
    // the Catalan generating function; compare against direct summation
    println!("\nrecurrence series vs Jensen bound (series <= bound):");
    for rho in [0.9, 0.99] {
        let direct = dynamic_cond_rate_ar1(walk, rho, l, 1e-12)?.value
            - gaussian_diff_entropy(1.0)? * (1.0 - 2.0 * walk.p_w())
            - (l as f64 - 1.0) * gaussian_diff_entropy(1.0 - rho * rho)?;
        let jensen = jensen_upper_ar1(walk, rho);
        println!("  rho = {rho}: series {direct:.6}, Jensen {jensen:.6}");
    }
    Ok(())
}
