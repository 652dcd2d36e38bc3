//! Bernoulli random walk: sampling and exact recurrence/return analytics.
//!
//! The camera trajectory is a walk on the integers with i.i.d. increments in
//! `{-1, +1}` and `P{+1} = p_w <= 0.5`. The probability of a first return to
//! the origin at step `2t` has the Catalan closed form
//! `2 C_{t-1} ((1-p_w) p_w)^t`, and the probability that the walk occupies a
//! brand-new site tends to `1 - 2 p_w`.

use crate::seed;
use crate::{Error, Result};
use rand::Rng;
use statrs::function::gamma::ln_gamma;

/// Largest `k` for which `catalan(k)` fits in `u128`.
pub const MAX_EXACT_CATALAN: u64 = 64;

/// Parameters of the Bernoulli random walk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkParams {
    p_w: f64,
}

impl WalkParams {
    /// Creates walk parameters; `p_w` must lie in `[0, 0.5]`.
    pub fn new(p_w: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&p_w) {
            return Err(Error::param(format!("p_w must be in [0, 0.5], got {p_w}")));
        }
        Ok(WalkParams { p_w })
    }

    pub fn p_w(&self) -> f64 {
        self.p_w
    }

    /// Entropy of one increment, `H(p_w)` in bits.
    pub fn step_entropy(&self) -> f64 {
        crate::entropy::binary_entropy(self.p_w)
    }
}

/// A realized trajectory `W_0..W_t` with per-step bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkPath {
    positions: Vec<i64>,
    increments: Vec<i8>,
    new_site_flags: Vec<bool>,
}

/// Classification of a single step of a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepClass {
    /// The position at this step was never occupied before.
    NewSite,
    /// The position was last occupied at the given earlier step index.
    ReturnAfter(usize),
}

impl WalkPath {
    /// Builds a path from its increments, recomputing positions and
    /// new-site flags.
    pub fn from_increments(increments: Vec<i8>) -> Result<Self> {
        let t = increments.len();
        let mut positions = Vec::with_capacity(t + 1);
        positions.push(0i64);
        for (i, &inc) in increments.iter().enumerate() {
            if inc != 1 && inc != -1 {
                return Err(Error::param(format!("increment {i} is {inc}, not +-1")));
            }
            positions.push(positions[i] + inc as i64);
        }
        let new_site_flags = new_site_flags(&positions);
        Ok(WalkPath {
            positions,
            increments,
            new_site_flags,
        })
    }

    /// `W_0..W_t`; `positions()[0] == 0`.
    pub fn positions(&self) -> &[i64] {
        &self.positions
    }

    /// The `t` increments in `{-1, +1}`.
    pub fn increments(&self) -> &[i8] {
        &self.increments
    }

    /// `new_site_flags()[i-1]` is true iff `W_i` is a new site. Length `t`.
    pub fn new_site_flags(&self) -> &[bool] {
        &self.new_site_flags
    }

    /// Number of steps `t`.
    pub fn len(&self) -> usize {
        self.increments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }

    /// Number of new sites visited after step 0.
    pub fn new_site_count(&self) -> usize {
        self.new_site_flags.iter().filter(|&&f| f).count()
    }

    /// Smallest and largest positions occupied.
    pub fn site_range(&self) -> (i64, i64) {
        let lo = *self.positions.iter().min().expect("positions nonempty");
        let hi = *self.positions.iter().max().expect("positions nonempty");
        (lo, hi)
    }
}

fn new_site_flags(positions: &[i64]) -> Vec<bool> {
    (1..positions.len())
        .map(|i| !positions[..i].contains(&positions[i]))
        .collect()
}

/// Exact Catalan number `C_k = binom(2k, k) / (k+1)`.
///
/// Errors for `k > MAX_EXACT_CATALAN` instead of wrapping.
pub fn catalan(k: u64) -> Result<u128> {
    if k > MAX_EXACT_CATALAN {
        return Err(Error::Overflow(format!(
            "catalan({k}) exceeds u128; supported up to k = {MAX_EXACT_CATALAN}"
        )));
    }
    // C_0 = 1, C_{n+1} = C_n * 2(2n+1) / (n+2); the division is exact.
    let mut c: u128 = 1;
    for n in 0..k as u128 {
        c = c
            .checked_mul(2 * (2 * n + 1))
            .ok_or_else(|| Error::Overflow(format!("catalan({k})")))?
            / (n + 2);
    }
    Ok(c)
}

/// Probability of a first return to the starting site at step `t`,
/// `P{T^t}`. Zero for odd `t`; `2 C_{m-1} ((1-p_w) p_w)^m` for `t = 2m`.
pub fn return_prob(params: WalkParams, t: u64) -> Result<f64> {
    if t == 0 {
        return Err(Error::param("return_prob requires t >= 1"));
    }
    if t % 2 == 1 {
        return Ok(0.0);
    }
    let m = t / 2;
    let q = (1.0 - params.p_w) * params.p_w;
    if q == 0.0 {
        return Ok(0.0);
    }
    if m <= MAX_EXACT_CATALAN + 1 {
        Ok(2.0 * catalan(m - 1)? as f64 * q.powi(m as i32))
    } else {
        // log-domain: ln C_{m-1} = lgamma(2m-1) - 2 lgamma(m) - ln m
        let mf = m as f64;
        let ln_c = ln_gamma(2.0 * mf - 1.0) - 2.0 * ln_gamma(mf) - mf.ln();
        let ln_p = std::f64::consts::LN_2 + ln_c + mf * q.ln();
        Ok(ln_p.exp())
    }
}

/// Probability that step `t` revisits some earlier site, `P{R^t}`.
///
/// Equals the cumulative sum of the first-return probabilities; the
/// complementary first-passage probability is `1 - P{R^t}`.
pub fn recurrence_prob(params: WalkParams, t: u64) -> Result<f64> {
    if t == 0 {
        return Err(Error::param("recurrence_prob requires t >= 1"));
    }
    let mut sum = 0.0;
    for (_, p) in ReturnProbs::new(params).take((t / 2) as usize) {
        sum += p;
    }
    Ok(sum.min(1.0))
}

/// Iterator over `(2k, P{T^{2k}})` for `k = 1, 2, ...` using the stable
/// term recurrence `P{T^{2(k+1)}} = P{T^{2k}} * 2(2k-1)/(k+1) * q`.
#[derive(Debug, Clone)]
pub struct ReturnProbs {
    q: f64,
    k: u64,
    term: f64,
}

impl ReturnProbs {
    pub fn new(params: WalkParams) -> Self {
        let q = (1.0 - params.p_w) * params.p_w;
        ReturnProbs {
            q,
            k: 0,
            term: 2.0 * q,
        }
    }
}

impl Iterator for ReturnProbs {
    type Item = (u64, f64);

    fn next(&mut self) -> Option<(u64, f64)> {
        self.k += 1;
        let out = (2 * self.k, self.term);
        let k = self.k as f64;
        self.term *= 2.0 * (2.0 * k - 1.0) / (k + 1.0) * self.q;
        Some(out)
    }
}

/// Exact recurrence/return table up to `t_max`.
#[derive(Debug, Clone)]
pub struct RecurrenceTable {
    pub horizon: u64,
    /// `return_probs[i-1] = P{T^i}` for `i = 1..=t_max`.
    pub return_probs: Vec<f64>,
    /// `recurrence_probs[i-1] = P{R^i}`.
    pub recurrence_probs: Vec<f64>,
    /// `catalan[k] = C_k` for `k = 0..=ceil(t_max/2)`.
    pub catalan: Vec<u128>,
}

impl RecurrenceTable {
    pub fn new(params: WalkParams, t_max: u64) -> Result<Self> {
        let mut return_probs = Vec::with_capacity(t_max as usize);
        let mut recurrence_probs = Vec::with_capacity(t_max as usize);
        let mut cum = 0.0;
        let mut iter = ReturnProbs::new(params);
        for i in 1..=t_max {
            let p = if i % 2 == 1 {
                0.0
            } else {
                iter.next().expect("infinite iterator").1
            };
            cum += p;
            return_probs.push(p);
            recurrence_probs.push(cum);
        }
        let k_max = t_max.div_ceil(2).min(MAX_EXACT_CATALAN);
        let catalan = (0..=k_max).map(catalan).collect::<Result<Vec<_>>>()?;
        Ok(RecurrenceTable {
            horizon: t_max,
            return_probs,
            recurrence_probs,
            catalan,
        })
    }
}

/// Samples a path of `t` steps. Identical `(params, t, seed)` always yields
/// the identical path.
pub fn sample_path(params: WalkParams, t: u64, seed: u64) -> WalkPath {
    let mut rng = seed::rng(seed);
    let mut increments = Vec::with_capacity(t as usize);
    for _ in 0..t {
        increments.push(if rng.random_bool(params.p_w) { 1 } else { -1 });
    }
    WalkPath::from_increments(increments).expect("increments are +-1")
}

/// Classifies step `i` (1-based) of a path as a new site or a return to the
/// most recent earlier step occupying the same position.
pub fn classify_step(path: &WalkPath, i: usize) -> StepClass {
    assert!(i >= 1 && i <= path.len(), "step index out of range");
    if path.new_site_flags[i - 1] {
        StepClass::NewSite
    } else {
        let w = path.positions[i];
        let s = (0..i)
            .rev()
            .find(|&s| path.positions[s] == w)
            .expect("recurrent step has a prior visit");
        StepClass::ReturnAfter(s)
    }
}

/// Scratch buffers for the Monte-Carlo routines below: visited-site marks
/// with epoch stamps so they reset in O(1) per path.
struct VisitMarks {
    stamp: Vec<u32>,
    epoch: u32,
    offset: i64,
}

impl VisitMarks {
    fn new(t: u64) -> Self {
        VisitMarks {
            stamp: vec![0; 2 * t as usize + 1],
            epoch: 0,
            offset: t as i64,
        }
    }

    fn next_path(&mut self) {
        self.epoch += 1;
        if self.epoch == u32::MAX {
            self.stamp.fill(0);
            self.epoch = 1;
        }
    }

    fn visit(&mut self, pos: i64) -> bool {
        let idx = (pos + self.offset) as usize;
        let fresh = self.stamp[idx] != self.epoch;
        self.stamp[idx] = self.epoch;
        fresh
    }
}

/// Monte-Carlo frequency of the event "step `t` lands on a new site"
/// (the first-passage event), over `n_paths` seeded trials.
pub fn mc_first_passage(params: WalkParams, t: u64, n_paths: u64, master_seed: u64) -> f64 {
    let mut marks = VisitMarks::new(t);
    let mut hits = 0u64;
    for trial in 0..n_paths {
        let mut rng = seed::rng_for(master_seed, trial);
        marks.next_path();
        let mut pos = 0i64;
        marks.visit(0);
        let mut fresh = true;
        for _ in 0..t {
            pos += if rng.random_bool(params.p_w) { 1 } else { -1 };
            fresh = marks.visit(pos);
        }
        if fresh {
            hits += 1;
        }
    }
    hits as f64 / n_paths as f64
}

/// Monte-Carlo frequencies of the first return to the origin at each step
/// `1..=t_max`; entry `i-1` estimates `P{T^i}`.
pub fn mc_first_return_freqs(
    params: WalkParams,
    t_max: u64,
    n_paths: u64,
    master_seed: u64,
) -> Vec<f64> {
    let mut counts = vec![0u64; t_max as usize];
    for trial in 0..n_paths {
        let mut rng = seed::rng_for(master_seed, trial);
        let mut pos = 0i64;
        for step in 1..=t_max {
            pos += if rng.random_bool(params.p_w) { 1 } else { -1 };
            if pos == 0 {
                counts[step as usize - 1] += 1;
                break;
            }
        }
    }
    counts
        .into_iter()
        .map(|c| c as f64 / n_paths as f64)
        .collect()
}

/// Monte-Carlo frequency of the recurrence event "W_t equals some earlier
/// W_s" at the final step.
pub fn mc_recurrence_freq(params: WalkParams, t: u64, n_paths: u64, master_seed: u64) -> f64 {
    1.0 - mc_first_passage(params, t, n_paths, master_seed)
}

/// Mean fraction of new sites, `E[lambda(W^t)] / t`, over seeded trials.
pub fn mc_mean_new_site_fraction(
    params: WalkParams,
    t: u64,
    n_paths: u64,
    master_seed: u64,
) -> f64 {
    let mut marks = VisitMarks::new(t);
    let mut total = 0u64;
    for trial in 0..n_paths {
        let mut rng = seed::rng_for(master_seed, trial);
        marks.next_path();
        let mut pos = 0i64;
        marks.visit(0);
        for _ in 0..t {
            pos += if rng.random_bool(params.p_w) { 1 } else { -1 };
            if marks.visit(pos) {
                total += 1;
            }
        }
    }
    total as f64 / (n_paths as f64 * t as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wp(p: f64) -> WalkParams {
        WalkParams::new(p).unwrap()
    }

    #[test]
    fn catalan_small_values() {
        assert_eq!(catalan(0).unwrap(), 1);
        assert_eq!(catalan(3).unwrap(), 5);
        assert_eq!(catalan(5).unwrap(), 42);
        assert_eq!(catalan(10).unwrap(), 16796);
        assert_eq!(catalan(30).unwrap(), 3_814_986_502_092_304);
    }

    #[test]
    fn catalan_overflow_is_an_error() {
        assert!(catalan(MAX_EXACT_CATALAN).is_ok());
        assert!(matches!(
            catalan(MAX_EXACT_CATALAN + 1),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn return_prob_examples() {
        assert_eq!(return_prob(wp(0.3), 3).unwrap(), 0.0);
        assert!((return_prob(wp(0.5), 2).unwrap() - 0.5).abs() < 1e-15);
        assert!((return_prob(wp(0.1), 2).unwrap() - 0.18).abs() < 1e-15);
    }

    #[test]
    fn return_prob_log_domain_matches_exact_route() {
        // at the boundary of the exact range the two routes must agree
        let p = wp(0.4);
        let exact = return_prob(p, 2 * (MAX_EXACT_CATALAN + 1)).unwrap();
        let m = MAX_EXACT_CATALAN + 1;
        let mf = m as f64;
        let q: f64 = 0.4 * 0.6;
        let ln_c = ln_gamma(2.0 * mf - 1.0) - 2.0 * ln_gamma(mf) - mf.ln();
        let logd = (std::f64::consts::LN_2 + ln_c + mf * q.ln()).exp();
        assert!((exact - logd).abs() / exact < 1e-10);
    }

    #[test]
    fn recurrence_prob_examples() {
        assert_eq!(recurrence_prob(wp(0.5), 1).unwrap(), 0.0);
        assert!((recurrence_prob(wp(0.5), 2).unwrap() - 0.5).abs() < 1e-15);
        // truncated sum approaches 2 p_w
        let r = recurrence_prob(wp(0.5), 10_000).unwrap();
        assert!((1.0 - r) < 0.02, "1 - P{{R}} = {}", 1.0 - r);
    }

    #[test]
    fn return_prob_sum_monotone_and_bounded() {
        for &p in &[0.05, 0.15, 0.25, 0.35, 0.45] {
            let params = wp(p);
            let mut prev = 0.0;
            for t in 1..=10_000u64 {
                let r = recurrence_prob(params, t).unwrap();
                assert!(r >= prev - 1e-15);
                assert!(r <= 2.0 * p + 1e-12);
                prev = r;
            }
            assert!((2.0 * p - prev).abs() < 1e-2);
        }
    }

    #[test]
    fn sample_path_deterministic_and_consistent() {
        let a = sample_path(wp(0.5), 200, 42);
        let b = sample_path(wp(0.5), 200, 42);
        assert_eq!(a, b);
        let c = sample_path(wp(0.5), 200, 43);
        assert_ne!(a, c);
        // parity invariant
        for (i, &w) in a.positions().iter().enumerate() {
            assert_eq!(w.rem_euclid(2), (i as i64).rem_euclid(2));
        }
    }

    #[test]
    fn sample_path_pw_zero_pans_left() {
        let p = sample_path(wp(0.0), 5, 1);
        assert_eq!(p.positions(), &[0, -1, -2, -3, -4, -5]);
        assert_eq!(p.new_site_count(), 5);
    }

    #[test]
    fn classify_step_examples() {
        let p = WalkPath::from_increments(vec![1, -1]).unwrap();
        assert_eq!(classify_step(&p, 2), StepClass::ReturnAfter(0));
        let p = WalkPath::from_increments(vec![-1, -1]).unwrap();
        assert_eq!(classify_step(&p, 2), StepClass::NewSite);
        let p = WalkPath::from_increments(vec![1, 1, -1]).unwrap();
        assert_eq!(classify_step(&p, 3), StepClass::ReturnAfter(1));
    }

    #[test]
    fn mean_new_site_fraction_matches_limit() {
        // p_w = 0.5: fraction tends to 0; with t = 1e4 it is O(1/sqrt(t))
        let f = mc_mean_new_site_fraction(wp(0.5), 10_000, 200, 9);
        assert!(f < 0.05, "fraction {f}");
        let f = mc_mean_new_site_fraction(wp(0.1), 10_000, 200, 9);
        assert!((f - 0.8).abs() < 0.01, "fraction {f}");
    }

    #[test]
    fn first_return_frequencies_match_closed_form() {
        let params = wp(0.3);
        let n = 200_000;
        let freqs = mc_first_return_freqs(params, 12, n, 123);
        for t in 1..=12u64 {
            let p = return_prob(params, t).unwrap();
            let se = (p * (1.0 - p) / n as f64).sqrt();
            let f = freqs[t as usize - 1];
            assert!(
                (f - p).abs() <= 4.0 * se + 1e-9,
                "t={t} f={f} p={p} se={se}"
            );
        }
    }

    #[test]
    fn recurrence_frequency_matches_closed_form() {
        for &pw in &[0.2, 0.5] {
            let params = wp(pw);
            for &t in &[4u64, 9, 20] {
                let n = 100_000;
                let f = mc_recurrence_freq(params, t, n, 7);
                let p = recurrence_prob(params, t).unwrap();
                let se = (p * (1.0 - p) / n as f64).sqrt().max(1e-4);
                assert!((f - p).abs() <= 4.0 * se, "pw={pw} t={t} f={f} p={p}");
            }
        }
    }

    #[test]
    fn rejects_bad_p_w() {
        assert!(WalkParams::new(-0.1).is_err());
        assert!(WalkParams::new(0.6).is_err());
    }

    #[test]
    fn recurrence_table_consistency() {
        let tab = RecurrenceTable::new(wp(0.3), 21).unwrap();
        assert_eq!(tab.return_probs.len(), 21);
        for i in (1..=21u64).step_by(2) {
            assert_eq!(tab.return_probs[i as usize - 1], 0.0);
        }
        assert_eq!(tab.catalan[..6], [1, 1, 2, 5, 14, 42]);
        let r10 = recurrence_prob(wp(0.3), 10).unwrap();
        assert!((tab.recurrence_probs[9] - r10).abs() < 1e-15);
    }
}
