//! Operational coding harness: trajectory side information plus closed-loop
//! DPCM prediction with memory 1 or infinite, and entropy-constrained
//! scalar quantization of the residuals.
//!
//! Rates are measured as the ideal codeword length of the quantizer indices
//! (empirical index entropy) plus the trajectory side information `H(p_w)`
//! per frame; no bitstream is written. The decoder mirrors the encoder
//! exactly, so reconstructions are byte-identical on both sides by
//! construction.

use crate::detect::mmse_detect;
use crate::reality::Ar1FieldSpec;
use crate::view::ViewSequence;
use crate::walk::WalkParams;
use crate::{Error, Result};
use std::collections::{BTreeMap, HashMap};

/// Reported when the reconstruction is exact and the SNR is unbounded.
pub const SNR_SATURATION_DB: f64 = 300.0;

/// Signal-to-noise ratio `10 log10(sum x^2 / sum (x - x_hat)^2)` in dB.
pub fn snr(original: &[f64], reconstructed: &[f64]) -> f64 {
    assert_eq!(original.len(), reconstructed.len(), "length mismatch");
    let signal: f64 = original.iter().map(|x| x * x).sum();
    let noise: f64 = original
        .iter()
        .zip(reconstructed)
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    if noise == 0.0 {
        SNR_SATURATION_DB
    } else {
        (10.0 * (signal / noise).log10()).min(SNR_SATURATION_DB)
    }
}

/// An entropy-constrained scalar quantizer: reconstruction levels with
/// ideal codeword lengths, and the Lagrange multiplier they were designed
/// for. Cells are the intervals induced by the cost
/// `(x - level)^2 + lambda * length`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecsq {
    levels: Vec<f64>,
    /// `-log2 p` of each index under the training distribution.
    lengths: Vec<f64>,
    /// Upper cell boundaries; `boundaries[i]` separates cell `i` from
    /// `i + 1`.
    boundaries: Vec<f64>,
    lambda: f64,
}

impl Ecsq {
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    /// Index of the cost-minimizing cell for `x`.
    pub fn quantize(&self, x: f64) -> usize {
        self.boundaries.partition_point(|&b| b < x)
    }

    pub fn reconstruct(&self, index: usize) -> f64 {
        self.levels[index]
    }

    fn rebuild_boundaries(&mut self) {
        self.boundaries.clear();
        let mut prev = f64::NEG_INFINITY;
        for i in 0..self.levels.len() - 1 {
            let (c0, c1) = (self.levels[i], self.levels[i + 1]);
            let (r0, r1) = (self.lengths[i], self.lengths[i + 1]);
            // equal-cost point of the two cells
            let b = 0.5 * (c0 + c1) + self.lambda * (r1 - r0) / (2.0 * (c1 - c0));
            prev = b.max(prev);
            self.boundaries.push(prev);
        }
    }
}

const ECSQ_MAX_ITERS: u64 = 300;
const ECSQ_REL_TOL: f64 = 1e-9;

/// Designs an ECSQ on training samples by alternating entropy-biased
/// nearest-cell assignment and centroid/length updates, deleting cells
/// that lose all mass. The Lagrangian objective is nonincreasing across
/// iterations.
pub fn design_ecsq(training: &[f64], lambda: f64, max_levels: usize) -> Result<Ecsq> {
    if lambda <= 0.0 || !lambda.is_finite() {
        return Err(Error::param(format!("lambda must be > 0, got {lambda}")));
    }
    if max_levels < 1 {
        return Err(Error::param("need at least one level"));
    }
    if training.len() < 2 * max_levels {
        return Err(Error::param(format!(
            "need at least {} training samples for {max_levels} levels",
            2 * max_levels
        )));
    }
    let mut sorted = training.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    // initialize on a uniform grid; the step that balances squared error
    // against lambda bits for a uniform quantizer is sqrt(6 lambda / ln 2)
    let span = (sorted[n - 1] - sorted[0]).max(f64::MIN_POSITIVE);
    let step = (6.0 * lambda / std::f64::consts::LN_2).sqrt();
    let k = ((span / step).ceil() as usize).clamp(1, max_levels);
    let cell = span / k as f64;
    let mut q = Ecsq {
        levels: (0..k)
            .map(|i| sorted[0] + (i as f64 + 0.5) * cell)
            .collect(),
        lengths: vec![(k as f64).log2(); k],
        boundaries: Vec::new(),
        lambda,
    };
    q.rebuild_boundaries();

    let mut prev_obj = f64::INFINITY;
    for _ in 0..ECSQ_MAX_ITERS {
        let k = q.levels.len();
        let mut count = vec![0u64; k];
        let mut sum = vec![0.0f64; k];
        let mut sq_err = 0.0;
        let mut len_sum = 0.0;
        for &x in &sorted {
            let i = q.quantize(x);
            count[i] += 1;
            sum[i] += x;
            let e = x - q.levels[i];
            sq_err += e * e;
            len_sum += q.lengths[i];
        }
        let obj = (sq_err + lambda * len_sum) / n as f64;
        let done = prev_obj - obj <= ECSQ_REL_TOL * prev_obj.abs().max(1.0);
        prev_obj = obj;

        let mut levels = Vec::with_capacity(k);
        let mut lengths = Vec::with_capacity(k);
        for i in 0..k {
            if count[i] == 0 {
                continue;
            }
            levels.push(sum[i] / count[i] as f64);
            lengths.push(-(count[i] as f64 / n as f64).log2());
        }
        q.levels = levels;
        q.lengths = lengths;
        q.rebuild_boundaries();
        if done {
            return Ok(q);
        }
    }
    Ok(q)
}

/// Encoder/decoder prediction memory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Memory {
    /// Predict only from the previously coded frame; sites outside its
    /// window are predicted as the stationary mean 0.
    OneFrame,
    /// Predict every site from its most recent reconstruction, however old,
    /// as `rho^age * x_hat`.
    Infinite,
}

/// How the decoder learns the trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trajectory {
    /// Increments estimated from consecutive original frames with the
    /// minimum-MSE detector, then sent as side information.
    Estimated,
    /// True increments passed through (detection-error-free reference).
    Genie,
}

/// Configuration of one DPCM + ECSQ run.
#[derive(Debug, Clone, PartialEq)]
pub struct CodecConfig {
    pub walk: WalkParams,
    pub field: Ar1FieldSpec,
    pub memory: Memory,
    pub trajectory: Trajectory,
    /// Lagrange multiplier handed to the quantizer design.
    pub lambda: f64,
    /// Number of reconstruction levels offered to the design.
    pub max_levels: usize,
}

/// Measured outcome of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct CodecRun {
    /// Total rate in bits per scalar: index entropy plus side information.
    pub measured_rate: f64,
    /// Side-information component, `H(p_w) / L` bits per scalar.
    pub side_info_rate: f64,
    pub snr_db: f64,
    pub mse: f64,
    /// Per-frame squared reconstruction error.
    pub error_series: Vec<f64>,
}

impl CodecConfig {
    fn validate(&self) -> Result<()> {
        if self.lambda <= 0.0 || self.max_levels < 1 {
            return Err(Error::param("lambda must be > 0 and max_levels >= 1"));
        }
        Ok(())
    }
}

/// Runs closed-loop DPCM over an extracted AR(1) view sequence.
///
/// The quantizer is designed on the residuals of an unquantized
/// calibration pass over the same sequence, then the closed loop runs with
/// reconstructions feeding the predictor. The first frame is coded with
/// the same quantizer from the zero predictor.
pub fn dpcm_encode(view: &ViewSequence<f64>, config: &CodecConfig) -> Result<CodecRun> {
    config.validate()?;
    let l = view.spec().block_length();
    let frames = view.frames();
    if frames.len() < 3 {
        return Err(Error::param("horizon must be >= 2"));
    }
    let increments = coded_increments(view, config);

    // calibration: prediction residuals without quantization, then two
    // refits on closed-loop residuals so training matches the loop the
    // quantizer actually runs in
    let calibration = run_loop(frames, &increments, config, l, None)?;
    let mut quant = design_ecsq(&calibration.residuals, config.lambda, config.max_levels)?;
    let mut coded = run_loop(frames, &increments, config, l, Some(&quant))?;
    for _ in 0..2 {
        quant = design_ecsq(&coded.residuals, config.lambda, config.max_levels)?;
        coded = run_loop(frames, &increments, config, l, Some(&quant))?;
    }
    let n_scalars = (frames.len() * l) as f64;
    let index_entropy = empirical_entropy(&coded.index_counts, n_scalars);
    let side_info_rate = config.walk.step_entropy() / l as f64;
    let originals: Vec<f64> = frames.iter().flatten().copied().collect();
    Ok(CodecRun {
        measured_rate: index_entropy + side_info_rate,
        side_info_rate,
        snr_db: snr(&originals, &coded.recons),
        mse: originals
            .iter()
            .zip(&coded.recons)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            / n_scalars,
        error_series: coded.error_series,
    })
}

fn coded_increments(view: &ViewSequence<f64>, config: &CodecConfig) -> Vec<i8> {
    match config.trajectory {
        Trajectory::Genie => view.path().increments().to_vec(),
        Trajectory::Estimated => {
            let frames = view.frames();
            (1..frames.len())
                .map(|i| mmse_detect(&frames[i - 1], &frames[i], config.field.rho()))
                .collect()
        }
    }
}

struct LoopOutput {
    residuals: Vec<f64>,
    recons: Vec<f64>,
    index_counts: BTreeMap<usize, u64>,
    error_series: Vec<f64>,
}

/// One pass of the prediction loop. Without a quantizer, reconstructions
/// equal the originals and the pass only collects residuals for training;
/// with one, the loop is closed over quantized reconstructions.
fn run_loop(
    frames: &[Vec<f64>],
    increments: &[i8],
    config: &CodecConfig,
    l: usize,
    quant: Option<&Ecsq>,
) -> Result<LoopOutput> {
    let rho = config.field.rho();
    let mut out = LoopOutput {
        residuals: Vec::with_capacity(frames.len() * l),
        recons: Vec::with_capacity(frames.len() * l),
        index_counts: BTreeMap::new(),
        error_series: Vec::with_capacity(frames.len()),
    };
    // reconstructions live at decoder positions (cumulative coded increments)
    let mut site_store: HashMap<i64, (usize, f64)> = HashMap::new();
    let mut prev_recon: Vec<f64> = Vec::new();
    let mut pos = 0i64;
    for (t, frame) in frames.iter().enumerate() {
        if t > 0 {
            pos += increments[t - 1] as i64;
        }
        let mut recon_frame = Vec::with_capacity(l);
        let mut frame_err = 0.0;
        for (j, &x) in frame.iter().enumerate() {
            let site = pos + j as i64;
            let pred = match config.memory {
                Memory::OneFrame => {
                    if t == 0 {
                        0.0
                    } else {
                        // previous frame covered sites pos - w .. + l
                        let prev_pos = pos - increments[t - 1] as i64;
                        let off = site - prev_pos;
                        if off >= 0 && (off as usize) < l {
                            rho * prev_recon[off as usize]
                        } else {
                            0.0
                        }
                    }
                }
                Memory::Infinite => match site_store.get(&site) {
                    Some(&(t0, v)) => rho.powi((t - t0) as i32) * v,
                    None => 0.0,
                },
            };
            let residual = x - pred;
            out.residuals.push(residual);
            let x_hat = match quant {
                None => x,
                Some(q) => {
                    let idx = q.quantize(residual);
                    *out.index_counts.entry(idx).or_insert(0) += 1;
                    pred + q.reconstruct(idx)
                }
            };
            recon_frame.push(x_hat);
            out.recons.push(x_hat);
            frame_err += (x - x_hat) * (x - x_hat);
            if config.memory == Memory::Infinite {
                site_store.insert(site, (t, x_hat));
            }
        }
        out.error_series.push(frame_err / l as f64);
        prev_recon = recon_frame;
    }
    Ok(out)
}

fn empirical_entropy(counts: &BTreeMap<usize, u64>, total: f64) -> f64 {
    counts
        .values()
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum()
}

/// One averaged point of an operational sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub lambda: f64,
    pub rate: f64,
    pub snr_db: f64,
    pub snr_ci95: f64,
    pub mse: f64,
}

/// Runs `trials` independent seeded DPCM runs per lambda and averages.
///
/// Each trial draws its own path and field via the seed-splitting rule, so
/// results are schedule-independent; the per-lambda SNR confidence
/// interval is over trials.
pub fn run_rd_sweep(
    config: &CodecConfig,
    block_length: usize,
    horizon: u64,
    lambdas: &[f64],
    trials: u64,
    master_seed: u64,
) -> Result<Vec<SweepPoint>> {
    if trials < 2 {
        return Err(Error::param("need >= 2 trials for a confidence interval"));
    }
    let spec = crate::view::ViewSpec::new(block_length)?;
    let mut points = Vec::with_capacity(lambdas.len());
    for (li, &lambda) in lambdas.iter().enumerate() {
        let cfg = CodecConfig {
            lambda,
            ..config.clone()
        };
        let mut rates = Vec::with_capacity(trials as usize);
        let mut snrs = Vec::with_capacity(trials as usize);
        let mut mses = Vec::with_capacity(trials as usize);
        for trial in 0..trials {
            let run_seed = crate::seed::derive(master_seed, (li as u64) << 32 | trial);
            let path = crate::walk::sample_path(config.walk, horizon, run_seed);
            let view = crate::view::extract_dynamic_ar1(
                &config.field,
                &path,
                spec,
                run_seed.wrapping_add(1),
            );
            let run = dpcm_encode(&view, &cfg)?;
            rates.push(run.measured_rate);
            snrs.push(run.snr_db);
            mses.push(run.mse);
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let snr_mean = mean(&snrs);
        let var = snrs.iter().map(|s| (s - snr_mean) * (s - snr_mean)).sum::<f64>()
            / (snrs.len() - 1) as f64;
        points.push(SweepPoint {
            lambda,
            rate: mean(&rates),
            snr_db: snr_mean,
            snr_ci95: 1.96 * (var / snrs.len() as f64).sqrt(),
            mse: mean(&mses),
        });
    }
    points.sort_by(|a, b| a.rate.total_cmp(&b.rate));
    Ok(points)
}

/// Drops rate-distortion-dominated points: keeps the subsequence, by
/// increasing rate, on which SNR strictly increases. Coarse closed-loop
/// operating points can be non-monotone (quantization error feeds back
/// through the predictor), and those points are never operating choices.
pub fn pareto_front(points: &[SweepPoint]) -> Vec<SweepPoint> {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.rate.total_cmp(&b.rate));
    let mut front: Vec<SweepPoint> = Vec::new();
    for p in sorted.into_iter().rev() {
        if front.last().map_or(true, |l| p.snr_db < l.snr_db) {
            front.push(p);
        }
    }
    front.reverse();
    front
}

/// Linear interpolation of SNR at a given rate along a sweep (points
/// sorted by rate). `None` outside the covered rate span.
pub fn snr_at_rate(points: &[SweepPoint], rate: f64) -> Option<f64> {
    let i = points.iter().position(|p| p.rate >= rate)?;
    if i == 0 {
        return (points[0].rate == rate).then_some(points[0].snr_db);
    }
    let (a, b) = (&points[i - 1], &points[i]);
    let f = (rate - a.rate) / (b.rate - a.rate);
    Some(a.snr_db + f * (b.snr_db - a.snr_db))
}
