//! Rate-distortion machinery: the iterative solver against closed forms,
//! and the Shannon-lower-bound composition for the moving-view Gaussian
//! source with its validity region.
//!
//! ```bash
//! cargo run --release --example rate_distortion
//! ```

use plenoptic::rd::{
    blahut_arimoto, rx_bernoulli, slb_ar1_upper, slb_validity, toeplitz_min_eig, BaTarget,
};
use plenoptic::reality::Ar1FieldSpec;
use plenoptic::walk::WalkParams;

fn main() -> plenoptic::Result<()> {
    println!("Bernoulli(0.5) with Hamming distortion:");
    let hamming = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
    for d in [0.05, 0.11, 0.25] {
        let point = blahut_arimoto(&[0.5, 0.5], &hamming, BaTarget::Distortion(d))?;
        println!(
            "  D = {d}: solver {:.8}, closed form {:.8}",
            point.rate,
            rx_bernoulli(0.5, d)
        );
    }

    // the Shannon lower bound on the AR(1) frame process is tight only
    // below the smallest eigenvalue of the correlation matrix
    println!("\nShannon-lower-bound validity, D < (1-rho)/(1+rho):");
    for rho in [0.9, 0.99] {
        let v = slb_validity(rho)?;
        println!(
            "  rho = {rho}: D_max = {:.5}  (SNR above {:.1} dB); Toeplitz min eig at t=512: {:.5}",
            v.d_max,
            v.snr_threshold_db,
            toeplitz_min_eig(rho, 512)?
        );
    }

    println!("\nper-scalar bound for the moving view, p_w = 0.5, rho = 0.99, L = 8:");
    let walk = WalkParams::new(0.5)?;
    let field = Ar1FieldSpec::new(0.99)?;
    for snr_db in [24, 28, 32] {
        let d = 10f64.powf(-(snr_db as f64) / 10.0);
        let p = slb_ar1_upper(walk, field, 8, d, 1e-10)?;
        println!(
            "  SNR {snr_db} dB (D = {d:.5}): rate <= {:.4} bits/scalar, valid = {}",
            p.rate, p.valid
        );
    }
    Ok(())
}
