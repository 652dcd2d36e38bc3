//! Simulating the camera: sample a viewpoint walk, generate a reality,
//! and extract the sequence of L-site views.
//!
//! ```bash
//! cargo run --release --example view_extraction
//! ```

use plenoptic::reality::{gen_static_wall, Ar1FieldSpec, StaticWallSpec};
use plenoptic::view::{extract_dynamic_ar1, extract_static, ViewSpec};
use plenoptic::walk::{sample_path, WalkParams};

fn main() -> plenoptic::Result<()> {
    let walk = WalkParams::new(0.3)?;
    let path = sample_path(walk, 12, 1);
    println!("positions: {:?}", path.positions());
    println!(
        "{} of {} steps landed on fresh sites",
        path.new_site_count(),
        path.len()
    );

    // static binary wall seen through a 4-site window
    let spec = ViewSpec::new(4)?;
    let (lo, hi) = path.site_range();
    let wall = gen_static_wall(
        &StaticWallSpec::bernoulli(0.5)?,
        lo,
        hi + spec.block_length() as i64 - 1,
        2,
    )?;
    let views = extract_static(&wall, &path, spec)?;
    for (t, frame) in views.frames().iter().enumerate().take(5) {
        println!("t = {t}: {frame:?}");
    }

    // same trajectory over a correlated Gaussian field
    let field = Ar1FieldSpec::new(0.95)?;
    let views = extract_dynamic_ar1(&field, &path, spec, 3);
    let csv = views.to_csv();
    println!("\nGaussian views as CSV (first rows):");
    for line in csv.lines().take(4) {
        println!("{line}");
    }
    Ok(())
}
