//! Trajectory-increment detectors and Monte-Carlo estimation of the
//! detection error probability `P_e`, which feeds the Fano slack term of
//! the entropy-rate bounds.
//!
//! A detector observes two consecutive frames `(V_{t-1}, V_t)` and guesses
//! the camera increment `W_t` in `{-1, +1}`. Ties are always broken toward
//! the prior mode, which is `-1` since `p_w <= 0.5` throughout the crate.

use crate::entropy::binary_entropy;
use crate::reality::{Ar1FieldSpec, BscFieldSpec, StaticWallSpec};
use crate::seed;
use crate::walk::WalkParams;
use crate::{Error, Result};
use rand::Rng;
use rand_distr::{Distribution, Normal};

/// Which detector produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectorKind {
    /// Minimum-Hamming-distance overlap matching (discrete frames).
    Hamming,
    /// Minimum residual energy under the one-step AR(1) prediction.
    Mmse,
    /// Exact posterior argmax, computed by brute-force enumeration
    /// (discrete models, tiny instances only).
    MapOracle,
}

/// Monte-Carlo estimate of `P_e` with a binomial confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorReport {
    pub p_e_hat: f64,
    pub trials: u64,
    /// Normal-approximation 95% halfwidth; rule-of-three `3/n` when zero
    /// errors were observed (`P_e` can be far below `1/trials`).
    pub ci95_halfwidth: f64,
    pub detector: DetectorKind,
}

impl DetectorReport {
    fn from_errors(errors: u64, trials: u64, detector: DetectorKind) -> Self {
        let n = trials as f64;
        let p = errors as f64 / n;
        let ci = if errors == 0 {
            3.0 / n
        } else {
            1.96 * (p * (1.0 - p) / n).sqrt()
        };
        DetectorReport {
            p_e_hat: p,
            trials,
            ci95_halfwidth: ci,
            detector,
        }
    }
}

/// The observation model a detector runs against.
#[derive(Debug, Clone, PartialEq)]
pub enum DetectModel {
    Static(StaticWallSpec),
    Bsc(BscFieldSpec),
    Ar1(Ar1FieldSpec),
}

/// Hamming-distance detector: returns the increment whose implied
/// `L-1`-sample overlap has the smaller Hamming distance; ties go to `-1`.
pub fn hamming_detect<T: PartialEq>(v_prev: &[T], v_cur: &[T]) -> i8 {
    assert_eq!(v_prev.len(), v_cur.len(), "frames must have equal length");
    let l = v_prev.len();
    let d_plus = (0..l - 1).filter(|&i| v_cur[i] != v_prev[i + 1]).count();
    let d_minus = (0..l - 1).filter(|&i| v_cur[i + 1] != v_prev[i]).count();
    if d_plus < d_minus {
        1
    } else {
        -1
    }
}

/// Minimum-MSE detector for the AR(1) field: picks the shift minimizing
/// the residual energy of the one-step prediction `rho * v_prev` over the
/// implied overlap; ties go to `-1`.
pub fn mmse_detect(v_prev: &[f64], v_cur: &[f64], rho: f64) -> i8 {
    assert_eq!(v_prev.len(), v_cur.len(), "frames must have equal length");
    let l = v_prev.len();
    let r_plus: f64 = (0..l - 1)
        .map(|i| {
            let e = v_cur[i] - rho * v_prev[i + 1];
            e * e
        })
        .sum();
    let r_minus: f64 = (0..l - 1)
        .map(|i| {
            let e = v_cur[i + 1] - rho * v_prev[i];
            e * e
        })
        .sum();
    if r_plus < r_minus {
        1
    } else {
        -1
    }
}

/// Fano slack in bits for a binary increment: `H(p_e)`.
pub fn fano_term(p_e: f64) -> f64 {
    binary_entropy(p_e)
}

/// Estimates `P_e` at step 1: simulates `(V_0, V_1, W_1)` pairs with the
/// field started in steady state, applies the detector, and reports the
/// error frequency. Deterministic and schedule-independent given the
/// master seed.
pub fn estimate_pe(
    walk: WalkParams,
    model: &DetectModel,
    block_length: usize,
    detector: DetectorKind,
    trials: u64,
    master_seed: u64,
) -> Result<DetectorReport> {
    estimate_pe_at(walk, model, block_length, detector, 1, trials, master_seed)
}

/// Estimates `P_e` for the increment at step `t` (the process is
/// stationary, so the estimate should not depend on `t`; exposing `t`
/// makes that checkable).
pub fn estimate_pe_at(
    walk: WalkParams,
    model: &DetectModel,
    block_length: usize,
    detector: DetectorKind,
    t: u64,
    trials: u64,
    master_seed: u64,
) -> Result<DetectorReport> {
    if block_length < 2 {
        return Err(Error::param("block length must be >= 2"));
    }
    if t < 1 || trials < 1 {
        return Err(Error::param("t and trials must be >= 1"));
    }
    match (model, detector) {
        (DetectModel::Ar1(_), DetectorKind::Hamming) => {
            return Err(Error::Unsupported(
                "the Hamming detector needs discrete frames".into(),
            ));
        }
        (DetectModel::Static(_) | DetectModel::Bsc(_), DetectorKind::Mmse) => {
            return Err(Error::Unsupported(
                "the MMSE detector needs the AR(1) field".into(),
            ));
        }
        (DetectModel::Ar1(_), DetectorKind::MapOracle) => {
            return Err(Error::Unsupported(
                "the exact-posterior detector enumerates discrete models only".into(),
            ));
        }
        _ => {}
    }
    let l = block_length;
    let mut errors = 0u64;
    for trial in 0..trials {
        let mut rng = seed::rng_for(master_seed, trial);
        // trajectory first, so the touched window is known
        let mut pos = vec![0i64];
        let mut incs = Vec::with_capacity(t as usize);
        for i in 0..t as usize {
            let w: i8 = if rng.random_bool(walk.p_w()) { 1 } else { -1 };
            incs.push(w);
            pos.push(pos[i] + w as i64);
        }
        let lo = *pos.iter().min().expect("nonempty");
        let hi = *pos.iter().max().expect("nonempty") + l as i64 - 1;
        let width = (hi - lo + 1) as usize;
        let prev_off = (pos[t as usize - 1] - lo) as usize;
        let cur_off = (pos[t as usize] - lo) as usize;
        let w_true = incs[t as usize - 1];

        let guess = match model {
            DetectModel::Static(wall) => {
                let row: Vec<u32> = (0..width).map(|_| sample_pmf(wall.pmf(), &mut rng)).collect();
                let v_prev = &row[prev_off..prev_off + l];
                let v_cur = &row[cur_off..cur_off + l];
                match detector {
                    DetectorKind::Hamming => hamming_detect(v_prev, v_cur),
                    DetectorKind::MapOracle => {
                        crate::oracle::map_detect_static(walk, wall, v_prev, v_cur)?
                    }
                    DetectorKind::Mmse => unreachable!("rejected above"),
                }
            }
            DetectModel::Bsc(field) => {
                let mut row: Vec<u8> = (0..width)
                    .map(|_| u8::from(rng.random_bool(field.p_x())))
                    .collect();
                let flip = |row: &mut Vec<u8>, rng: &mut rand_chacha::ChaCha8Rng| {
                    if field.p_i() > 0.0 {
                        for b in row.iter_mut() {
                            if rng.random_bool(field.p_i()) {
                                *b = 1 - *b;
                            }
                        }
                    }
                };
                for _ in 1..t {
                    flip(&mut row, &mut rng);
                }
                let prev_frame = row[prev_off..prev_off + l].to_vec();
                flip(&mut row, &mut rng);
                let v_cur = &row[cur_off..cur_off + l];
                match detector {
                    DetectorKind::Hamming => hamming_detect(&prev_frame, v_cur),
                    DetectorKind::MapOracle => {
                        crate::oracle::map_detect_bsc(walk, field, &prev_frame, v_cur)?
                    }
                    DetectorKind::Mmse => unreachable!("rejected above"),
                }
            }
            DetectModel::Ar1(field) => {
                let normal = Normal::new(0.0, 1.0).expect("valid std");
                let innov =
                    Normal::new(0.0, field.innovation_variance().sqrt()).expect("variance > 0");
                let mut row: Vec<f64> = (0..width).map(|_| normal.sample(&mut rng)).collect();
                for _ in 1..t {
                    for x in row.iter_mut() {
                        *x = field.rho() * *x + innov.sample(&mut rng);
                    }
                }
                let prev_frame = row[prev_off..prev_off + l].to_vec();
                for x in row.iter_mut() {
                    *x = field.rho() * *x + innov.sample(&mut rng);
                }
                let v_cur = &row[cur_off..cur_off + l];
                mmse_detect(&prev_frame, v_cur, field.rho())
            }
        };
        if guess != w_true {
            errors += 1;
        }
    }
    Ok(DetectorReport::from_errors(errors, trials, detector))
}

fn sample_pmf<R: Rng>(pmf: &[f64], rng: &mut R) -> u32 {
    let u: f64 = rng.random();
    let mut cum = 0.0;
    for (i, &p) in pmf.iter().enumerate() {
        cum += p;
        if u < cum {
            return i as u32;
        }
    }
    (pmf.len() - 1) as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wp(p: f64) -> WalkParams {
        WalkParams::new(p).unwrap()
    }

    #[test]
    fn hamming_hand_example() {
        // shift +1 overlap matches exactly, shift -1 mismatches
        assert_eq!(hamming_detect(&[0u8, 1, 0, 1], &[1, 0, 1, 1]), 1);
    }

    #[test]
    fn hamming_alternating_tie_goes_to_prior_mode() {
        // identical alternating frames: both shifts fit perfectly
        assert_eq!(hamming_detect(&[0u8, 1, 0, 1], &[1, 0, 1, 0]), -1);
    }

    #[test]
    fn mmse_hand_example() {
        // rho = 1, L = 2: compare |v1[0] - v0[1]| vs |v1[1] - v0[0]|
        assert_eq!(mmse_detect(&[0.0, 5.0], &[5.0, 9.0], 1.0), 1);
        assert_eq!(mmse_detect(&[3.0, 5.0], &[9.0, 3.0], 1.0), -1);
        // exact tie goes to the prior mode
        assert_eq!(mmse_detect(&[1.0, 1.0], &[1.0, 1.0], 0.9), -1);
    }

    #[test]
    fn fano_term_values() {
        assert_eq!(fano_term(0.0), 0.0);
        assert_eq!(fano_term(0.5), 1.0);
        assert!((fano_term(1e-5) - 1.81e-4).abs() < 1e-6);
    }

    #[test]
    fn static_hamming_error_below_ambiguity_probability() {
        let model = DetectModel::Static(StaticWallSpec::uniform(2).unwrap());
        let r = estimate_pe(wp(0.5), &model, 5, DetectorKind::Hamming, 100_000, 17).unwrap();
        let p_al = crate::entropy::slack_al(2, 5).unwrap();
        assert!(
            r.p_e_hat <= p_al + 4.0 * r.ci95_halfwidth,
            "p_e_hat {} vs P(A_L) {p_al}",
            r.p_e_hat
        );
        assert!(r.p_e_hat > 0.0, "ambiguity errors should occur at L = 5");
    }

    #[test]
    fn static_large_alphabet_error_indistinguishable_from_zero() {
        let model = DetectModel::Static(StaticWallSpec::uniform(256).unwrap());
        let r = estimate_pe(wp(0.3), &model, 9, DetectorKind::Hamming, 100_000, 23).unwrap();
        assert_eq!(r.p_e_hat, 0.0);
        assert!((r.ci95_halfwidth - 3.0e-5).abs() < 1e-12, "rule of three");
    }

    #[test]
    fn bsc_pure_noise_is_chance_level() {
        let model = DetectModel::Bsc(BscFieldSpec::new(0.5, 0.5).unwrap());
        // the Bayes detector collapses to the prior mode on pure noise;
        // Hamming only matches it at p_w = 0.5
        let r = estimate_pe(wp(0.5), &model, 4, DetectorKind::Hamming, 200_000, 5).unwrap();
        assert!(
            (r.p_e_hat - 0.5).abs() <= 3.0 * r.ci95_halfwidth.max(1e-3),
            "p_e_hat {}",
            r.p_e_hat
        );
        for &p_w in &[0.5, 0.2] {
            let r = estimate_pe(wp(p_w), &model, 4, DetectorKind::MapOracle, 50_000, 5).unwrap();
            let expect = p_w.min(1.0 - p_w);
            assert!(
                (r.p_e_hat - expect).abs() <= 3.0 * r.ci95_halfwidth.max(1e-3),
                "p_w={p_w}: p_e_hat {} expect {expect}",
                r.p_e_hat
            );
        }
    }

    #[test]
    fn mmse_decorrelated_field_is_chance_level() {
        let model = DetectModel::Ar1(Ar1FieldSpec::new(1e-3).unwrap());
        let r = estimate_pe(wp(0.5), &model, 8, DetectorKind::Mmse, 100_000, 7).unwrap();
        assert!((r.p_e_hat - 0.5).abs() <= 3.0 * r.ci95_halfwidth, "p_e_hat {}", r.p_e_hat);
    }

    #[test]
    fn mmse_strong_correlation_near_zero_error() {
        let model = DetectModel::Ar1(Ar1FieldSpec::new(0.99).unwrap());
        let r = estimate_pe(wp(0.5), &model, 8, DetectorKind::Mmse, 100_000, 11).unwrap();
        assert!(r.p_e_hat < 1e-3, "p_e_hat {}", r.p_e_hat);
    }

    #[test]
    fn reports_are_seed_deterministic() {
        let model = DetectModel::Bsc(BscFieldSpec::new(0.5, 0.1).unwrap());
        let a = estimate_pe(wp(0.4), &model, 4, DetectorKind::Hamming, 20_000, 3).unwrap();
        let b = estimate_pe(wp(0.4), &model, 4, DetectorKind::Hamming, 20_000, 3).unwrap();
        assert_eq!(a, b);
        let c = estimate_pe(wp(0.4), &model, 4, DetectorKind::Hamming, 20_000, 4).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn stationarity_step_one_vs_step_ten() {
        let model = DetectModel::Bsc(BscFieldSpec::new(0.5, 0.1).unwrap());
        let a = estimate_pe_at(wp(0.3), &model, 4, DetectorKind::Hamming, 1, 100_000, 13).unwrap();
        let b = estimate_pe_at(wp(0.3), &model, 4, DetectorKind::Hamming, 10, 100_000, 14).unwrap();
        assert!(
            (a.p_e_hat - b.p_e_hat).abs() <= a.ci95_halfwidth + b.ci95_halfwidth,
            "t=1 {} vs t=10 {}",
            a.p_e_hat,
            b.p_e_hat
        );
    }

    #[test]
    fn rejects_mismatched_detectors() {
        let ar1 = DetectModel::Ar1(Ar1FieldSpec::new(0.9).unwrap());
        assert!(estimate_pe(wp(0.5), &ar1, 4, DetectorKind::Hamming, 10, 1).is_err());
        assert!(estimate_pe(wp(0.5), &ar1, 4, DetectorKind::MapOracle, 10, 1).is_err());
        let wall = DetectModel::Static(StaticWallSpec::uniform(2).unwrap());
        assert!(estimate_pe(wp(0.5), &wall, 4, DetectorKind::Mmse, 10, 1).is_err());
    }
}
