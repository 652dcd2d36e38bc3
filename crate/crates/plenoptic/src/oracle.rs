//! Brute-force ground truth on tiny instances: exact joint and conditional
//! entropies of the view process and the exact Bayes error of increment
//! detection, by enumerating every trajectory and every field realization
//! on the touched window.
//!
//! The view probability factorizes per site given the trajectory: a site's
//! observation series is a Markov chain in time (degenerate for the static
//! wall), so `p(v^t | w^t)` is a product of per-site chain probabilities
//! and no explicit field enumeration is needed. Costs still grow as
//! `|X|^(L (t+1)) 2^t`, so every operation takes an [`EnumerationBudget`]
//! and refuses oversized configurations with a cost estimate.

use crate::detect::DetectModel;
use crate::reality::{bsc_equiv, BscFieldSpec, StaticWallSpec};
use crate::walk::WalkParams;
use crate::{Error, Result};

/// Cap on the weighted enumeration cost (assignments x paths x window).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_weighted_terms: u128,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_weighted_terms: 100_000_000,
        }
    }
}

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// One enumerated trajectory: probability, frame offsets into the window,
/// and per-site observation index lists.
struct PathCase {
    prob: f64,
    /// `obs[s]` lists `(frame index i, offset j)` with `v_i[j]` observing
    /// window site `s`, in time order.
    obs: Vec<Vec<(usize, usize)>>,
}

fn enumerate_paths(walk: WalkParams, l: usize, t: u64) -> Vec<PathCase> {
    let t = t as usize;
    // every path stays within [-t, t]; window sites are [-t, t + l - 1]
    let lo = -(t as i64);
    let width = 2 * t + l;
    let mut cases = Vec::with_capacity(1 << t);
    for bits in 0u32..1 << t {
        let mut prob = 1.0;
        let mut pos = vec![0i64];
        for i in 0..t {
            if bits >> i & 1 == 1 {
                prob *= walk.p_w();
                pos.push(pos[i] + 1);
            } else {
                prob *= 1.0 - walk.p_w();
                pos.push(pos[i] - 1);
            }
        }
        if prob == 0.0 {
            continue;
        }
        let mut obs = vec![Vec::new(); width];
        for (i, &p) in pos.iter().enumerate() {
            for j in 0..l {
                obs[(p + j as i64 - lo) as usize].push((i, j));
            }
        }
        cases.push(PathCase { prob, obs });
    }
    cases
}

/// Probability of one observation series at a single site.
fn site_prob(model: &DetectModel, series: &[(usize, usize)], value_at: impl Fn(usize, usize) -> u32) -> f64 {
    if series.is_empty() {
        return 1.0;
    }
    let first = value_at(series[0].0, series[0].1);
    match model {
        DetectModel::Static(wall) => {
            if series
                .iter()
                .any(|&(i, j)| value_at(i, j) != first)
            {
                0.0
            } else {
                wall.pmf()[first as usize]
            }
        }
        DetectModel::Bsc(field) => {
            let mut p = if first == 1 {
                field.p_x()
            } else {
                1.0 - field.p_x()
            };
            for pair in series.windows(2) {
                let (ti, vi) = (pair[0].0, value_at(pair[0].0, pair[0].1));
                let (tj, vj) = (pair[1].0, value_at(pair[1].0, pair[1].1));
                if ti == tj {
                    if vi != vj {
                        return 0.0;
                    }
                    continue;
                }
                let q = bsc_equiv(field.p_i(), (tj - ti) as u64);
                p *= if vi == vj { 1.0 - q } else { q };
            }
            p
        }
        DetectModel::Ar1(_) => unreachable!("discrete models only"),
    }
}

fn model_alphabet(model: &DetectModel) -> Result<usize> {
    match model {
        DetectModel::Static(wall) => Ok(wall.alphabet_size()),
        DetectModel::Bsc(_) => Ok(2),
        DetectModel::Ar1(_) => Err(Error::Unsupported(
            "exact enumeration covers discrete models only".into(),
        )),
    }
}

fn check_budget(m: usize, l: usize, t: u64, budget: EnumerationBudget) -> Result<()> {
    let digits = l as u32 * (t as u32 + 1);
    let assignments = (m as u128)
        .checked_pow(digits)
        .ok_or(Error::BudgetExceeded {
            needed: u128::MAX,
            cap: budget.max_weighted_terms,
        })?;
    let needed = assignments
        .checked_mul(1u128 << t)
        .and_then(|x| x.checked_mul((2 * t as u128) + l as u128))
        .ok_or(Error::BudgetExceeded {
            needed: u128::MAX,
            cap: budget.max_weighted_terms,
        })?;
    if needed > budget.max_weighted_terms {
        return Err(Error::BudgetExceeded {
            needed,
            cap: budget.max_weighted_terms,
        });
    }
    Ok(())
}

/// Exact joint entropy `H(V_0, ..., V_t)` in bits, by enumerating all
/// frame assignments and all `2^t` trajectories.
pub fn exact_joint_entropy(
    walk: WalkParams,
    model: &DetectModel,
    block_length: usize,
    t: u64,
    budget: EnumerationBudget,
) -> Result<f64> {
    if block_length < 2 {
        return Err(Error::param("block length must be >= 2"));
    }
    let m = model_alphabet(model)?;
    check_budget(m, block_length, t, budget)?;
    let l = block_length;
    let paths = enumerate_paths(walk, l, t);
    let n_digits = l * (t as usize + 1);
    let mut digits = vec![0u32; n_digits];
    let mut entropy = Compensated::default();
    let mut total = Compensated::default();
    loop {
        // digits[i * l + j] is sample j of frame i
        let mut p = Compensated::default();
        for case in &paths {
            let mut q = case.prob;
            for series in &case.obs {
                if q == 0.0 {
                    break;
                }
                q *= site_prob(model, series, |i, j| digits[i * l + j]);
            }
            p.add(q);
        }
        let p = p.value();
        if p > 0.0 {
            entropy.add(-p * p.log2());
            total.add(p);
        }
        // odometer
        let mut d = 0;
        loop {
            if d == n_digits {
                let mass = total.value();
                debug_assert!((mass - 1.0).abs() < 1e-9, "pmf mass {mass}");
                return Ok(entropy.value());
            }
            digits[d] += 1;
            if digits[d] < m as u32 {
                break;
            }
            digits[d] = 0;
            d += 1;
        }
    }
}

/// Exact conditional entropy `H(V_t | V^{t-1})` in bits, as a difference
/// of joint entropies.
pub fn exact_conditional_entropy(
    walk: WalkParams,
    model: &DetectModel,
    block_length: usize,
    t: u64,
    budget: EnumerationBudget,
) -> Result<f64> {
    if t < 1 {
        return Err(Error::param("conditional entropy requires t >= 1"));
    }
    let joint_t = exact_joint_entropy(walk, model, block_length, t, budget)?;
    let joint_prev = exact_joint_entropy(walk, model, block_length, t - 1, budget)?;
    Ok(joint_t - joint_prev)
}

/// Exact conditionals `H(V_i | V^{i-1})` for `i = 1..=t`.
pub fn exact_conditional_sequence(
    walk: WalkParams,
    model: &DetectModel,
    block_length: usize,
    t: u64,
    budget: EnumerationBudget,
) -> Result<Vec<f64>> {
    if t < 1 {
        return Err(Error::param("conditional entropy requires t >= 1"));
    }
    let joints = (0..=t)
        .map(|i| exact_joint_entropy(walk, model, block_length, i, budget))
        .collect::<Result<Vec<_>>>()?;
    Ok(joints.windows(2).map(|w| w[1] - w[0]).collect())
}

/// Unnormalized posterior weight `P{W_1 = w} p(v_0, v_1 | W_1 = w)`.
fn increment_weight(
    walk: WalkParams,
    model: &DetectModel,
    v_prev: &[u32],
    v_cur: &[u32],
    w: i8,
) -> f64 {
    let l = v_prev.len();
    let prior = if w == 1 { walk.p_w() } else { 1.0 - walk.p_w() };
    if prior == 0.0 {
        return 0.0;
    }
    // window sites -1..l relative to the first frame
    let (prev_off, cur_off) = if w == 1 { (0i64, 1i64) } else { (1, 0) };
    let width = l + 1;
    let mut p = prior;
    for s in 0..width as i64 {
        let mut series = Vec::with_capacity(2);
        if s >= prev_off && s < prev_off + l as i64 {
            series.push((0usize, (s - prev_off) as usize));
        }
        if s >= cur_off && s < cur_off + l as i64 {
            series.push((1usize, (s - cur_off) as usize));
        }
        p *= site_prob(model, &series, |i, j| {
            if i == 0 {
                v_prev[j]
            } else {
                v_cur[j]
            }
        });
        if p == 0.0 {
            break;
        }
    }
    p
}

/// Exact posterior-argmax detection of `W_1` from `(V_0, V_1)` for the
/// static wall; ties go to the prior mode `-1`.
pub fn map_detect_static(
    walk: WalkParams,
    wall: &StaticWallSpec,
    v_prev: &[u32],
    v_cur: &[u32],
) -> Result<i8> {
    map_detect(walk, &DetectModel::Static(wall.clone()), v_prev, v_cur)
}

/// Exact posterior-argmax detection of `W_1` for the BSC field; ties go
/// to the prior mode `-1`.
pub fn map_detect_bsc(
    walk: WalkParams,
    field: &BscFieldSpec,
    v_prev: &[u8],
    v_cur: &[u8],
) -> Result<i8> {
    let v0: Vec<u32> = v_prev.iter().map(|&b| b as u32).collect();
    let v1: Vec<u32> = v_cur.iter().map(|&b| b as u32).collect();
    map_detect(walk, &DetectModel::Bsc(*field), &v0, &v1)
}

fn map_detect(walk: WalkParams, model: &DetectModel, v_prev: &[u32], v_cur: &[u32]) -> Result<i8> {
    if v_prev.len() != v_cur.len() || v_prev.len() < 2 {
        return Err(Error::param("frames must have equal length >= 2"));
    }
    model_alphabet(model)?;
    let plus = increment_weight(walk, model, v_prev, v_cur, 1);
    let minus = increment_weight(walk, model, v_prev, v_cur, -1);
    Ok(if plus > minus { 1 } else { -1 })
}

/// Exact Bayes error of estimating `W_1` from `(V_0, V_1)`:
/// `1 - sum_{v_0, v_1} max_w P{W_1 = w} p(v_0, v_1 | w)`.
pub fn exact_pe(
    walk: WalkParams,
    model: &DetectModel,
    block_length: usize,
    budget: EnumerationBudget,
) -> Result<f64> {
    if block_length < 2 {
        return Err(Error::param("block length must be >= 2"));
    }
    let m = model_alphabet(model)?;
    check_budget(m, block_length, 1, budget)?;
    let l = block_length;
    let n_digits = 2 * l;
    let mut digits = vec![0u32; n_digits];
    let mut correct = Compensated::default();
    loop {
        let v_prev = &digits[..l];
        let v_cur = &digits[l..];
        let plus = increment_weight(walk, model, v_prev, v_cur, 1);
        let minus = increment_weight(walk, model, v_prev, v_cur, -1);
        correct.add(plus.max(minus));
        let mut d = 0;
        loop {
            if d == n_digits {
                return Ok((1.0 - correct.value()).max(0.0));
            }
            digits[d] += 1;
            if digits[d] < m as u32 {
                break;
            }
            digits[d] = 0;
            d += 1;
        }
    }
}
