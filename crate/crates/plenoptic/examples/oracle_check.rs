//! Brute-force certification on a tiny instance: exact conditional
//! entropies of the view process must land between the closed-form lower
//! and upper bounds, with the exact Bayes detection error supplying the
//! Fano slack.
//!
//! ```bash
//! cargo run --release --example oracle_check
//! ```

use plenoptic::detect::{fano_term, DetectModel};
use plenoptic::entropy::{
    bsc_step_lower, conditional_bound_memory, dynamic_bound_memory_bsc, static_step_lower,
};
use plenoptic::oracle::{exact_conditional_sequence, exact_pe, EnumerationBudget};
use plenoptic::reality::{BscFieldSpec, StaticWallSpec};
use plenoptic::walk::WalkParams;

fn main() -> plenoptic::Result<()> {
    let budget = EnumerationBudget::default();
    let walk = WalkParams::new(0.3)?;
    let l = 3;
    let t = 4;

    println!("exact H(V_t | V^(t-1)) vs bounds, p_w = 0.3, L = {l}, binary wall:");
    let model = DetectModel::Static(StaticWallSpec::bernoulli(0.5)?);
    let fano = fano_term(exact_pe(walk, &model, l, budget)?);
    for (i, cond) in exact_conditional_sequence(walk, &model, l, t, budget)?
        .iter()
        .enumerate()
    {
        let step = (i + 1) as u64;
        let lower = static_step_lower(walk, 1.0, step, fano);
        let upper = conditional_bound_memory(walk, 1.0, step);
        assert!(lower <= *cond && *cond <= upper);
        println!("  t = {step}: {lower:.6} <= {cond:.6} <= {upper:.6}");
    }

    println!("\nsame with a flipping background, p_i = 0.1:");
    let p_i = 0.1;
    let model = DetectModel::Bsc(BscFieldSpec::new(0.5, p_i)?);
    let fano = fano_term(exact_pe(walk, &model, l, budget)?);
    for (i, cond) in exact_conditional_sequence(walk, &model, l, t, budget)?
        .iter()
        .enumerate()
    {
        let step = (i + 1) as u64;
        let lower = bsc_step_lower(walk, p_i, l, step, fano);
        let upper = dynamic_bound_memory_bsc(walk, p_i, l, step);
        assert!(lower <= *cond && *cond <= upper);
        println!("  t = {step}: {lower:.6} <= {cond:.6} <= {upper:.6}");
    }

    // configurations beyond the budget are refused, not attempted
    let big = exact_pe(walk, &model, 16, budget);
    println!("\noversized instance: {}", big.unwrap_err());
    Ok(())
}
