//! Rate-distortion machinery: the Bernoulli/Hamming closed form, a general
//! finite-alphabet Blahut-Arimoto solver, the lossy upper bound composed
//! from the trajectory rate, and the Shannon-lower-bound composition for
//! the AR(1) field with its validity region.
//!
//! Rates are bits per scalar sample unless a name says per frame.

use crate::entropy::{binary_entropy, discrete_entropy, gaussian_diff_entropy};
use crate::reality::Ar1FieldSpec;
use crate::walk::WalkParams;
use crate::{Error, Result};
use nalgebra::DMatrix;

/// Whether a point comes from an analytic bound or a measured codec run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RDKind {
    AnalyticBound,
    Operational,
}

/// One point of a rate-distortion curve, rate in bits per scalar sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RDPoint {
    pub distortion: f64,
    pub rate: f64,
    /// Inside the Shannon-lower-bound validity region, when applicable.
    pub valid: bool,
    pub kind: RDKind,
}

/// An ordered rate-distortion curve with a descriptive label.
#[derive(Debug, Clone, PartialEq)]
pub struct RDCurve {
    pub points: Vec<RDPoint>,
    pub label: String,
}

impl RDCurve {
    /// Builds a curve, sorting by distortion and checking the invariants
    /// (nonnegative coordinates; nonincreasing rate for analytic curves).
    pub fn new(mut points: Vec<RDPoint>, label: impl Into<String>) -> Result<Self> {
        if points
            .iter()
            .any(|p| p.rate < 0.0 || p.distortion < 0.0 || !p.rate.is_finite())
        {
            return Err(Error::param("rate and distortion must be finite and >= 0"));
        }
        points.sort_by(|a, b| a.distortion.total_cmp(&b.distortion));
        let analytic = points.iter().all(|p| p.kind == RDKind::AnalyticBound);
        if analytic
            && points
                .windows(2)
                .any(|w| w[1].rate > w[0].rate + 1e-12)
        {
            return Err(Error::param("analytic curve must be nonincreasing in rate"));
        }
        Ok(RDCurve {
            points,
            label: label.into(),
        })
    }
}

/// Rate-distortion function of a Bernoulli(`p`) source under Hamming
/// distortion: `H(p) - H(D)` for `D <= min(p, 1-p)`, else 0.
pub fn rx_bernoulli(p: f64, d: f64) -> f64 {
    assert!((0.0..=1.0).contains(&p) && d >= 0.0);
    let d_max = p.min(1.0 - p);
    if d >= d_max {
        0.0
    } else {
        binary_entropy(p) - binary_entropy(d)
    }
}

/// Target for the Blahut-Arimoto solver: either a Lagrangian slope
/// (`beta >= 0`, nats of exponent per unit distortion) or a distortion
/// level reached by bisection on the slope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaTarget {
    Slope(f64),
    Distortion(f64),
}

const BA_RATE_TOL: f64 = 1e-6;
const BA_DIST_TOL: f64 = 1e-8;
const BA_MAX_ITERS: u64 = 200_000;
const BA_MAX_SLOPE: f64 = 2_000.0;

/// Blahut-Arimoto for a finite source `pmf` and distortion matrix
/// `dist[x][y]`. Returns a converged point on `R_X(D)`, certified by the
/// standard dual gap `max_y log c_y` dropping below the rate tolerance.
pub fn blahut_arimoto(pmf: &[f64], dist: &[Vec<f64>], target: BaTarget) -> Result<RDPoint> {
    discrete_entropy(pmf)?;
    let n = pmf.len();
    if dist.len() != n || dist.iter().any(|r| r.is_empty() || r.len() != dist[0].len()) {
        return Err(Error::param("distortion matrix shape must be |X| x |Y|"));
    }
    if dist.iter().flatten().any(|&d| d < 0.0 || !d.is_finite()) {
        return Err(Error::param("distortions must be finite and >= 0"));
    }
    // zero-mass source symbols do not affect R(D); stripping them also
    // short-circuits degenerate sources, where the plain iteration
    // converges arbitrarily slowly at small slopes
    let support: Vec<usize> = (0..n).filter(|&x| pmf[x] > 0.0).collect();
    if support.len() == 1 {
        let x = support[0];
        let best = dist[x].iter().copied().fold(f64::INFINITY, f64::min);
        return Ok(RDPoint {
            distortion: best,
            rate: 0.0,
            valid: true,
            kind: RDKind::AnalyticBound,
        });
    }
    if support.len() < n {
        let pmf: Vec<f64> = support.iter().map(|&x| pmf[x]).collect();
        let dist: Vec<Vec<f64>> = support.iter().map(|&x| dist[x].clone()).collect();
        return blahut_arimoto(&pmf, &dist, target);
    }
    match target {
        BaTarget::Slope(beta) => {
            if !(0.0..=BA_MAX_SLOPE).contains(&beta) {
                return Err(Error::param(format!(
                    "slope must be in [0, {BA_MAX_SLOPE}], got {beta}"
                )));
            }
            ba_fixed_slope(pmf, dist, beta)
        }
        BaTarget::Distortion(d_target) => {
            if d_target < 0.0 {
                return Err(Error::param("target distortion must be >= 0"));
            }
            // distortion decreases in the slope; bisect
            let mut lo = 0.0;
            let mut hi = BA_MAX_SLOPE;
            let at_hi = ba_fixed_slope(pmf, dist, hi)?;
            if at_hi.distortion >= d_target {
                return Ok(at_hi);
            }
            let at_lo = ba_fixed_slope(pmf, dist, lo)?;
            if at_lo.distortion <= d_target {
                return Ok(at_lo);
            }
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let p = ba_fixed_slope(pmf, dist, mid)?;
                if (p.distortion - d_target).abs() <= BA_DIST_TOL {
                    return Ok(p);
                }
                if p.distortion > d_target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Err(Error::NoConvergence(format!(
                "slope bisection did not reach distortion {d_target} within {BA_DIST_TOL}"
            )))
        }
    }
}

fn ba_fixed_slope(pmf: &[f64], dist: &[Vec<f64>], beta: f64) -> Result<RDPoint> {
    let n = pmf.len();
    let m = dist[0].len();
    // a[x][y] = exp(-beta d(x, y))
    let a: Vec<Vec<f64>> = dist
        .iter()
        .map(|row| row.iter().map(|&d| (-beta * d).exp()).collect())
        .collect();
    let mut q = vec![1.0 / m as f64; m];
    let mut den = vec![0.0f64; n];
    for _ in 0..BA_MAX_ITERS {
        for x in 0..n {
            den[x] = (0..m).map(|y| q[y] * a[x][y]).sum();
        }
        // c_y = sum_x p(x) a(x,y) / den(x); fixed point has c_y <= 1
        let mut max_log_c: f64 = f64::NEG_INFINITY;
        let mut next = vec![0.0f64; m];
        for y in 0..m {
            let c: f64 = (0..n)
                .filter(|&x| pmf[x] > 0.0)
                .map(|x| pmf[x] * a[x][y] / den[x])
                .sum();
            next[y] = q[y] * c;
            if q[y] > 0.0 {
                max_log_c = max_log_c.max(c.ln());
            }
        }
        let done = max_log_c / std::f64::consts::LN_2 < BA_RATE_TOL;
        q = next;
        // renormalize against drift
        let mass: f64 = q.iter().sum();
        for v in q.iter_mut() {
            *v /= mass;
        }
        if done {
            // evaluate (R, D) at the converged reproduction distribution
            let mut rate = 0.0;
            let mut d_avg = 0.0;
            for x in 0..n {
                if pmf[x] == 0.0 {
                    continue;
                }
                let den_x: f64 = (0..m).map(|y| q[y] * a[x][y]).sum();
                for y in 0..m {
                    let w = q[y] * a[x][y] / den_x;
                    if w > 0.0 {
                        rate += pmf[x] * w * (w / q[y]).log2();
                        d_avg += pmf[x] * w * dist[x][y];
                    }
                }
            }
            return Ok(RDPoint {
                distortion: d_avg,
                rate: rate.max(0.0),
                valid: true,
                kind: RDKind::AnalyticBound,
            });
        }
    }
    Err(Error::NoConvergence(format!(
        "fixed-slope iteration (beta = {beta}) did not certify within {BA_MAX_ITERS} iterations"
    )))
}

/// Lossy upper bound per frame for the static wall:
/// `H(p_w) + (1 - 2 p_w) R_X(D)`, composing the trajectory rate with the
/// wall's marginal rate-distortion value `rx_at_d`.
pub fn static_lossy_upper(walk: WalkParams, rx_at_d: f64) -> f64 {
    assert!(rx_at_d >= 0.0);
    walk.step_entropy() + (1.0 - 2.0 * walk.p_w()) * rx_at_d
}

/// Validity region of the AR(1) Shannon lower bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlbValidity {
    /// Largest distortion (exclusive) where the bound is tight,
    /// `(1 - rho) / (1 + rho)`.
    pub d_max: f64,
    /// Equivalent SNR threshold `10 log10(1 / d_max)` dB for the
    /// unit-variance field.
    pub snr_threshold_db: f64,
}

/// Computes the SLB validity region for correlation `rho` in `[0, 1)`.
pub fn slb_validity(rho: f64) -> Result<SlbValidity> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::param(format!("rho must be in [0, 1), got {rho}")));
    }
    let d_max = (1.0 - rho) / (1.0 + rho);
    Ok(SlbValidity {
        d_max,
        snr_threshold_db: 10.0 * (1.0 / d_max).log10(),
    })
}

/// Shannon-lower-bound composition for the AR(1) view process, per scalar:
/// `[H(p_w) + h(V|W) - L phi(D)] / L`, flagged valid only for
/// `0 < D < (1 - rho) / (1 + rho)`. Outside the region the value is still
/// computed so full curves can be plotted with a validity marker.
pub fn slb_ar1_upper(
    walk: WalkParams,
    field: Ar1FieldSpec,
    block_length: usize,
    d: f64,
    tol: f64,
) -> Result<RDPoint> {
    if d <= 0.0 {
        return Err(Error::param("distortion must be > 0"));
    }
    let l = block_length as f64;
    let cond = crate::entropy::dynamic_cond_rate_ar1(walk, field.rho(), block_length, tol)?;
    let per_frame = walk.step_entropy() + cond.value - l * gaussian_diff_entropy(d)?;
    Ok(RDPoint {
        distortion: d,
        rate: (per_frame / l).max(0.0),
        valid: d < slb_validity(field.rho())?.d_max,
        kind: RDKind::AnalyticBound,
    })
}

/// Largest horizon accepted by the dense symmetric eigensolver.
pub const TOEPLITZ_MAX_T: usize = 2048;

/// Smallest eigenvalue of the `t x t` AR(1) correlation Toeplitz matrix
/// `[rho^|i-j|]`; decreasing in `t` toward `(1 - rho) / (1 + rho)`.
pub fn toeplitz_min_eig(rho: f64, t: usize) -> Result<f64> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::param(format!("rho must be in [0, 1), got {rho}")));
    }
    if t < 1 || t > TOEPLITZ_MAX_T {
        return Err(Error::param(format!(
            "t must be in [1, {TOEPLITZ_MAX_T}] for a dense solve, got {t}"
        )));
    }
    let m = DMatrix::from_fn(t, t, |i, j| rho.powi((i as i32 - j as i32).abs()));
    min_eig(&m)
}

fn min_eig(m: &DMatrix<f64>) -> Result<f64> {
    let eig = m.clone().symmetric_eigen();
    eig.eigenvalues
        .iter()
        .copied()
        .min_by(f64::total_cmp)
        .ok_or_else(|| Error::param("empty matrix"))
}

/// Conditional rate-distortion of a Gaussian mixture, valid when `D` is at
/// most every eigenvalue of every component covariance:
/// `sum_j mu_j (1/dim) sum_p 0.5 log2(lambda_{j,p} / D)` bits per scalar.
pub fn mixture_cond_rd(components: &[(f64, DMatrix<f64>)], d: f64) -> Result<f64> {
    if components.is_empty() || d <= 0.0 {
        return Err(Error::param("need components and D > 0"));
    }
    let mass: f64 = components.iter().map(|(w, _)| w).sum();
    if components.iter().any(|(w, _)| *w < 0.0) || (mass - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidPmf("weights must be >= 0 and sum to 1".into()));
    }
    let mut rate = 0.0;
    for (weight, cov) in components {
        if !cov.is_square() {
            return Err(Error::param("covariances must be square"));
        }
        let dim = cov.nrows();
        let eig = cov.clone().symmetric_eigen();
        let mut sum = 0.0;
        for &lambda in eig.eigenvalues.iter() {
            if d > lambda * (1.0 + 1e-12) {
                return Err(Error::Unsupported(format!(
                    "D = {d} exceeds a component eigenvalue {lambda}; outside the \
                     equal-slope regime"
                )));
            }
            sum += 0.5 * (lambda / d).log2().max(0.0);
        }
        rate += weight * sum / dim as f64;
    }
    Ok(rate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;
    use rand::Rng;

    fn wp(p: f64) -> WalkParams {
        WalkParams::new(p).unwrap()
    }

    fn hamming(n: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|x| (0..n).map(|y| if x == y { 0.0 } else { 1.0 }).collect())
            .collect()
    }

    #[test]
    fn rx_bernoulli_values() {
        assert_eq!(rx_bernoulli(0.5, 0.0), 1.0);
        assert_eq!(rx_bernoulli(0.5, 0.5), 0.0);
        assert!((rx_bernoulli(0.5, 0.11) - 0.500084041835).abs() < 1e-10);
        assert_eq!(rx_bernoulli(0.2, 0.3), 0.0);
    }

    #[test]
    fn ba_matches_bernoulli_closed_form() {
        for &d in &[0.05, 0.11, 0.25] {
            let p = blahut_arimoto(&[0.5, 0.5], &hamming(2), BaTarget::Distortion(d)).unwrap();
            let exact = rx_bernoulli(0.5, d);
            assert!(
                (p.rate - exact).abs() < 1e-4,
                "D={d}: BA {} vs closed form {exact}",
                p.rate
            );
            assert!((p.distortion - d).abs() <= 1e-8);
        }
    }

    #[test]
    fn ba_asymmetric_source_dominates_slb() {
        for &p_src in &[0.3, 0.1] {
            for &d in &[0.02, 0.05, 0.09] {
                let p = blahut_arimoto(&[1.0 - p_src, p_src], &hamming(2), BaTarget::Distortion(d))
                    .unwrap();
                assert!(
                    p.rate >= rx_bernoulli(p_src, d) - 1e-5,
                    "p={p_src} D={d}: {} < closed form",
                    p.rate
                );
                assert!((p.rate - rx_bernoulli(p_src, d)).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn ba_lossless_and_degenerate_limits() {
        let p = blahut_arimoto(&[0.25; 4], &hamming(4), BaTarget::Distortion(0.0)).unwrap();
        assert!((p.rate - 2.0).abs() < 1e-4, "rate {}", p.rate);
        let p = blahut_arimoto(&[1.0, 0.0], &hamming(2), BaTarget::Distortion(0.1)).unwrap();
        assert!(p.rate < 1e-9, "rate {}", p.rate);
        let p = blahut_arimoto(&[0.5, 0.5], &hamming(2), BaTarget::Slope(0.0)).unwrap();
        assert!(p.rate < 1e-9, "zero slope is the zero-rate end");
    }

    #[test]
    fn ba_curve_monotone() {
        let mut prev = f64::INFINITY;
        for i in 1..=10 {
            let d = 0.05 * i as f64;
            let p = blahut_arimoto(&[0.5, 0.5], &hamming(2), BaTarget::Distortion(d)).unwrap();
            assert!(p.rate <= prev + 1e-9);
            prev = p.rate;
        }
    }

    #[test]
    fn static_lossy_upper_values() {
        assert_eq!(static_lossy_upper(wp(0.5), 7.3), 1.0);
        assert_eq!(static_lossy_upper(wp(0.0), 8.0), 8.0);
        let v = static_lossy_upper(wp(0.25), rx_bernoulli(0.5, 0.11));
        assert!((v - 1.0613).abs() < 1e-4, "value {v}");
    }

    #[test]
    fn slb_validity_thresholds() {
        let v = slb_validity(0.99).unwrap();
        assert!((v.d_max - 0.005025).abs() < 1e-6);
        assert!((v.snr_threshold_db - 23.0).abs() < 0.1, "snr {}", v.snr_threshold_db);
        let v = slb_validity(0.9).unwrap();
        assert!((v.d_max - 0.05263).abs() < 1e-5);
        assert!((v.snr_threshold_db - 12.8).abs() < 0.1, "snr {}", v.snr_threshold_db);
        assert_eq!(slb_validity(0.0).unwrap().d_max, 1.0);
    }

    #[test]
    fn slb_ar1_frozen_value_and_slope() {
        let field = Ar1FieldSpec::new(0.99).unwrap();
        let p = slb_ar1_upper(wp(0.5), field, 8, 0.003, 1e-8).unwrap();
        assert!((p.rate - 1.6313306503668).abs() < 1e-6, "rate {}", p.rate);
        assert!(p.valid);

        let d1 = 1e-3;
        let d2 = 2e-3;
        let r1 = slb_ar1_upper(wp(0.5), field, 8, d1, 1e-8).unwrap().rate;
        let r2 = slb_ar1_upper(wp(0.5), field, 8, d2, 1e-8).unwrap().rate;
        assert!((r1 - r2 - 0.5 * (d2 / d1).log2()).abs() < 1e-9, "slope check");

        let boundary = slb_validity(0.99).unwrap().d_max;
        assert!(!slb_ar1_upper(wp(0.5), field, 8, boundary, 1e-8).unwrap().valid);
    }

    #[test]
    fn toeplitz_min_eig_values() {
        assert!((toeplitz_min_eig(0.7, 1).unwrap() - 1.0).abs() < 1e-12);
        assert!((toeplitz_min_eig(0.5, 2).unwrap() - 0.5).abs() < 1e-12);
        let mut prev = f64::INFINITY;
        let limit = slb_validity(0.9).unwrap().d_max;
        for t in [2usize, 4, 8, 16, 32, 64, 128, 256] {
            let e = toeplitz_min_eig(0.9, t).unwrap();
            assert!(e <= prev + 1e-10, "not decreasing at t={t}");
            assert!(e >= limit - 1e-10, "below the limit at t={t}: {e}");
            prev = e;
        }
        assert!(prev - limit < 5e-3, "gap to limit {}", prev - limit);
        assert!(toeplitz_min_eig(0.9, TOEPLITZ_MAX_T + 1).is_err());
    }

    #[test]
    fn submatrix_eigenvalue_interlacing() {
        let t = 32;
        let rho: f64 = 0.9;
        let full = DMatrix::from_fn(t, t, |i, j| rho.powi((i as i32 - j as i32).abs()));
        let full_min = min_eig(&full).unwrap();
        let mut rng = seed::rng(77);
        for _ in 0..100 {
            let drop = rng.random_range(0..t);
            let keep: Vec<usize> = (0..t).filter(|&i| i != drop).collect();
            let sub = DMatrix::from_fn(t - 1, t - 1, |i, j| full[(keep[i], keep[j])]);
            let sub_min = min_eig(&sub).unwrap();
            assert!(
                sub_min >= full_min - 1e-10,
                "interlacing violated: {sub_min} < {full_min}"
            );
        }
    }

    #[test]
    fn mixture_cond_rd_values() {
        let scalar = |v: f64| DMatrix::from_element(1, 1, v);
        let r = mixture_cond_rd(&[(1.0, scalar(1.0))], 0.25).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        let r = mixture_cond_rd(&[(0.5, scalar(1.0)), (0.5, scalar(4.0))], 0.5).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        // boundary accepted
        let r = mixture_cond_rd(&[(0.5, scalar(1.0)), (0.5, scalar(4.0))], 1.0).unwrap();
        assert!(r.is_finite());
        // beyond the smallest eigenvalue refused
        assert!(mixture_cond_rd(&[(0.5, scalar(1.0)), (0.5, scalar(4.0))], 1.5).is_err());
    }

    #[test]
    fn new_site_rate_approaches_limit() {
        // the per-new-site description rate E[lambda(W^t)]/t R_X(D) tends
        // to (1 - 2 p_w) R_X(D) from above
        let walk = wp(0.3);
        let r_x = rx_bernoulli(0.5, 0.05);
        let t = 10_000u64;
        let frac = crate::walk::mc_mean_new_site_fraction(walk, t, 1_000, 13);
        // exact expected fraction (1/t) sum_i (1 - P{R^i}) sits above the
        // limit 1 - 2 p_w; the empirical mean must match it
        let expect = (1..=t)
            .map(|i| 1.0 - crate::walk::recurrence_prob(walk, i).unwrap())
            .sum::<f64>()
            / t as f64;
        assert!(expect * r_x >= 0.4 * r_x);
        assert!((frac - expect).abs() < 0.005, "fraction {frac} expect {expect}");
    }

    #[test]
    fn rd_curve_invariants() {
        let pt = |d: f64, r: f64| RDPoint {
            distortion: d,
            rate: r,
            valid: true,
            kind: RDKind::AnalyticBound,
        };
        let c = RDCurve::new(vec![pt(0.2, 0.5), pt(0.1, 1.0)], "test").unwrap();
        assert!(c.points[0].distortion < c.points[1].distortion);
        assert!(RDCurve::new(vec![pt(0.1, 0.5), pt(0.2, 1.0)], "bad").is_err());
    }
}
