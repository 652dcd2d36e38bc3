//! Experiment front end: one function per figure-style sweep, each
//! emitting plot-ready CSV, plus a verification suite emitting a JSON
//! report. Every output is deterministic given (config, seed): re-running
//! with the same inputs produces byte-identical files.
//!
//! CSV layout: a `# schema=<id>` comment line echoing the parameters, a
//! header row, then data rows with `.` decimals. One curve per group key.

use crate::codec::{pareto_front, CodecConfig, Memory, Trajectory};
use crate::detect::{estimate_pe, fano_term, DetectModel, DetectorKind};
use crate::entropy::{
    bsc_step_lower, conditional_bound_memory, dynamic_bound_memory_bsc, dynamic_cond_rate_ar1,
    dynamic_cond_rate_bsc, static_step_lower,
};
use crate::oracle::{exact_conditional_sequence, exact_pe, EnumerationBudget};
use crate::rd::{slb_ar1_upper, slb_validity};
use crate::reality::{Ar1FieldSpec, BscFieldSpec, StaticWallSpec};
use crate::walk::WalkParams;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

/// Parsed experiment configuration. Unknown keys are rejected; fields not
/// used by the selected experiment are ignored. Missing fields take the
/// defaults documented on each `cmd_*` function.
#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default)]
    pub seed: u64,
    pub p_w: Option<f64>,
    pub p_x: Option<f64>,
    pub p_i: Option<f64>,
    pub rho: Option<f64>,
    pub block_length: Option<usize>,
    pub alphabet_size: Option<usize>,
    pub horizon: Option<u64>,
    pub trials: Option<u64>,
    /// Series truncation tolerance and verify comparison tolerance.
    pub tolerance: Option<f64>,
    pub p_w_grid: Option<Vec<f64>>,
    pub p_i_grid: Option<Vec<f64>>,
    pub rho_grid: Option<Vec<f64>>,
    pub memory_grid: Option<Vec<u64>>,
    pub lambda_grid: Option<Vec<f64>>,
    /// Harness self-test: deliberately corrupts one bound term so the
    /// verify suite must report a failure.
    #[serde(default)]
    pub corrupt_self_test: bool,
}

impl ExperimentConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// An empty config for the named experiment; every `cmd_*` fills in
    /// its documented defaults.
    pub fn default_for(experiment: &str) -> Self {
        ExperimentConfig {
            experiment: experiment.into(),
            ..Default::default()
        }
    }
}

/// What an experiment produced: file content plus an overall status
/// (only `cmd_verify` can report failure).
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub content: String,
    pub ok: bool,
    /// `"csv"` or `"json"`.
    pub extension: &'static str,
}

/// Dispatches on `config.experiment`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let csv = |content: String| ExperimentOutput {
        content,
        ok: true,
        extension: "csv",
    };
    match config.experiment.as_str() {
        "fig-bounds-static" => Ok(csv(cmd_fig_bounds_static(config)?)),
        "fig-memory" => Ok(csv(cmd_fig_memory(config)?)),
        "fig-dynamic-bounds" => Ok(csv(cmd_fig_dynamic_bounds(config)?)),
        "fig-dpcm" => Ok(csv(cmd_fig_dpcm(config)?)),
        "verify" => {
            let (content, ok) = cmd_verify(config)?;
            Ok(ExperimentOutput {
                content,
                ok,
                extension: "json",
            })
        }
        other => Err(Error::Config(format!("unknown experiment '{other}'"))),
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

/// Static entropy-rate bounds swept over `p_w`.
///
/// Defaults: binary uniform wall (`p_x = 0.5`), `L = 9`, 26-point `p_w`
/// grid on `[0, 0.5]`. The Fano slack uses the analytic ambiguity bound
/// for a uniform wall, `P_e = min(p_w, 1-p_w) |X|^{-(L-1)}`, so the rows
/// carry no Monte-Carlo noise. Columns: `p_w, lower, upper, pe_used`.
pub fn cmd_fig_bounds_static(config: &ExperimentConfig) -> Result<String> {
    let p_x = config.p_x.unwrap_or(0.5);
    let l = config.block_length.unwrap_or(9);
    let wall = StaticWallSpec::bernoulli(p_x)?;
    let h_x = wall.entropy();
    let grid = config
        .p_w_grid
        .clone()
        .unwrap_or_else(|| linspace(0.0, 0.5, 26));
    let mut out = String::new();
    writeln!(
        out,
        "# schema=fig_bounds_static.v1 p_x={p_x} block_length={l} seed={}",
        config.seed
    )
    .unwrap();
    writeln!(out, "p_w,lower,upper,pe_used").unwrap();
    for &p_w in &grid {
        let walk = WalkParams::new(p_w)?;
        let pe = p_w.min(1.0 - p_w) * (wall.alphabet_size() as f64).powi(-(l as i32 - 1));
        let report = crate::entropy::static_bounds(walk, h_x, fano_term(pe));
        writeln!(out, "{p_w},{},{},{pe}", report.lower, report.upper).unwrap();
    }
    Ok(out)
}

/// Memory-constrained coding penalty vs memory `M`, static and dynamic.
///
/// Rows report `difference_bits`: the finite-memory upper bound minus its
/// large-`M` limit, nonincreasing in `M`. Static defaults: uniform
/// alphabet 256, `p_w` grid `{0.1, 0.25, 0.5}`. Dynamic defaults: binary
/// field, `L = 8`, `p_w = 0.5`, `p_i` grid `{0.001, 0.01}`. Columns:
/// `kind, p, memory, difference_bits`.
pub fn cmd_fig_memory(config: &ExperimentConfig) -> Result<String> {
    let m_grid = config
        .memory_grid
        .clone()
        .unwrap_or_else(|| (0..=14).map(|i| 1u64 << i).collect());
    let alphabet = config.alphabet_size.unwrap_or(256);
    let h_x = (alphabet as f64).log2();
    let p_w_grid = config
        .p_w_grid
        .clone()
        .unwrap_or_else(|| vec![0.1, 0.25, 0.5]);
    let l = config.block_length.unwrap_or(8);
    let p_i_grid = config
        .p_i_grid
        .clone()
        .unwrap_or_else(|| vec![0.001, 0.01]);
    let dyn_p_w = config.p_w.unwrap_or(0.5);
    let tol = config.tolerance.unwrap_or(1e-10);

    let mut out = String::new();
    writeln!(
        out,
        "# schema=fig_memory.v1 alphabet_size={alphabet} block_length={l} p_w={dyn_p_w} seed={}",
        config.seed
    )
    .unwrap();
    writeln!(out, "kind,p,memory,difference_bits").unwrap();
    for &p_w in &p_w_grid {
        let walk = WalkParams::new(p_w)?;
        let limit = (1.0 - 2.0 * p_w) * h_x + walk.step_entropy();
        for &m in &m_grid {
            let diff = conditional_bound_memory(walk, h_x, m) - limit;
            writeln!(out, "static,{p_w},{m},{diff}").unwrap();
        }
    }
    let walk = WalkParams::new(dyn_p_w)?;
    for &p_i in &p_i_grid {
        let limit = walk.step_entropy() + dynamic_cond_rate_bsc(walk, p_i, l, tol)?.value;
        for &m in &m_grid {
            let diff = dynamic_bound_memory_bsc(walk, p_i, l, m) - limit;
            writeln!(out, "dynamic,{p_i},{m},{diff}").unwrap();
        }
    }
    Ok(out)
}

/// Dynamic entropy-rate bounds: binary field vs `p_i`, Gaussian field vs
/// `rho`.
///
/// Defaults: `L = 8`, binary curves at `p_w` in `{0.5, 0.05}` over a
/// 33-point log grid on `[1e-4, 0.5]`, Gaussian curves at the same `p_w`
/// values over `rho` in `[0.5, 0.995]`. The lower bound subtracts a Fano
/// term from a seeded Monte-Carlo detection-error estimate (default 20000
/// trials). Columns: `family, p_w, x, lower, upper, pe_hat`.
pub fn cmd_fig_dynamic_bounds(config: &ExperimentConfig) -> Result<String> {
    let l = config.block_length.unwrap_or(8);
    let p_x = config.p_x.unwrap_or(0.5);
    let tol = config.tolerance.unwrap_or(1e-10);
    let trials = config.trials.unwrap_or(20_000);
    let p_w_grid = config.p_w_grid.clone().unwrap_or_else(|| vec![0.5, 0.05]);
    let p_i_grid = config
        .p_i_grid
        .clone()
        .unwrap_or_else(|| logspace(1e-4, 0.5, 33));
    let rho_grid = config
        .rho_grid
        .clone()
        .unwrap_or_else(|| linspace(0.5, 0.995, 12));

    let mut out = String::new();
    writeln!(
        out,
        "# schema=fig_dynamic_bounds.v1 block_length={l} p_x={p_x} trials={trials} seed={}",
        config.seed
    )
    .unwrap();
    writeln!(out, "family,p_w,x,lower,upper,pe_hat").unwrap();
    let mut seed_index = 0u64;
    for &p_w in &p_w_grid {
        let walk = WalkParams::new(p_w)?;
        for &p_i in &p_i_grid {
            let model = DetectModel::Bsc(BscFieldSpec::new(p_x, p_i)?);
            let pe = estimate_pe(
                walk,
                &model,
                l,
                DetectorKind::Hamming,
                trials,
                crate::seed::derive(config.seed, seed_index),
            )?;
            seed_index += 1;
            let cond = dynamic_cond_rate_bsc(walk, p_i, l, tol)?;
            let report = crate::entropy::dynamic_bounds(cond, walk, fano_term(pe.p_e_hat));
            writeln!(
                out,
                "bsc,{p_w},{p_i},{},{},{}",
                report.lower, report.upper, pe.p_e_hat
            )
            .unwrap();
        }
        for &rho in &rho_grid {
            let model = DetectModel::Ar1(Ar1FieldSpec::new(rho)?);
            let pe = estimate_pe(
                walk,
                &model,
                l,
                DetectorKind::Mmse,
                trials,
                crate::seed::derive(config.seed, seed_index),
            )?;
            seed_index += 1;
            let cond = dynamic_cond_rate_ar1(walk, rho, l, tol)?;
            let report = crate::entropy::dynamic_bounds(cond, walk, fano_term(pe.p_e_hat));
            writeln!(
                out,
                "gaussian,{p_w},{rho},{},{},{}",
                report.lower, report.upper, pe.p_e_hat
            )
            .unwrap();
        }
    }
    Ok(out)
}

/// Operational DPCM sweep with the analytic upper bound overlaid.
///
/// Defaults: `rho = 0.99`, `p_w = 0.5`, `L = 8`, horizon 10^4, 20 trials
/// per point, lambda grid spanning roughly 1 to 3 bits per sample.
/// Operational rows carry `kind` in `{one_frame, infinite}`; bound rows
/// carry `kind=bound` with the SNR implied by the bound's distortion. The
/// `valid` column marks rows inside the bound's validity region
/// (`SNR > 10 log10((1+rho)/(1-rho))`). Columns: `kind, p_w, rho,
/// block_length, lambda, rate_bits_per_scalar, snr_db, ci, valid`.
pub fn cmd_fig_dpcm(config: &ExperimentConfig) -> Result<String> {
    let p_w = config.p_w.unwrap_or(0.5);
    let rho = config.rho.unwrap_or(0.99);
    let l = config.block_length.unwrap_or(8);
    let horizon = config.horizon.unwrap_or(10_000);
    let trials = config.trials.unwrap_or(20);
    let tol = config.tolerance.unwrap_or(1e-10);
    let lambdas = config
        .lambda_grid
        .clone()
        .unwrap_or_else(|| vec![0.1, 0.03, 0.01, 0.003, 0.001, 0.0003]);
    let walk = WalkParams::new(p_w)?;
    let field = Ar1FieldSpec::new(rho)?;
    let threshold = slb_validity(rho)?.snr_threshold_db;

    let mut out = String::new();
    writeln!(
        out,
        "# schema=fig_dpcm.v1 p_w={p_w} rho={rho} block_length={l} horizon={horizon} trials={trials} seed={}",
        config.seed
    )
    .unwrap();
    writeln!(
        out,
        "kind,p_w,rho,block_length,lambda,rate_bits_per_scalar,snr_db,ci,valid"
    )
    .unwrap();
    for (kind, memory) in [("one_frame", Memory::OneFrame), ("infinite", Memory::Infinite)] {
        let codec = CodecConfig {
            walk,
            field,
            memory,
            trajectory: Trajectory::Estimated,
            lambda: 1.0,
            max_levels: 64,
        };
        let points = pareto_front(&crate::codec::run_rd_sweep(
            &codec,
            l,
            horizon,
            &lambdas,
            trials,
            config.seed,
        )?);
        for p in &points {
            writeln!(
                out,
                "{kind},{p_w},{rho},{l},{},{},{},{},{}",
                p.lambda,
                p.rate,
                p.snr_db,
                p.snr_ci95,
                p.snr_db > threshold
            )
            .unwrap();
        }
    }
    // analytic overlay on an SNR grid; unit-variance field, D = 10^(-snr/10)
    for snr_db in (5..=35).step_by(2) {
        let d = 10f64.powf(-(snr_db as f64) / 10.0);
        let point = slb_ar1_upper(walk, field, l, d, tol)?;
        writeln!(
            out,
            "bound,{p_w},{rho},{l},,{},{snr_db},0,{}",
            point.rate, point.valid
        )
        .unwrap();
    }
    Ok(out)
}

/// One verify-suite entry.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyEntry {
    pub check: String,
    pub params: String,
    pub lower: Option<f64>,
    pub value: Option<f64>,
    pub upper: Option<f64>,
    pub pass: &'static str,
}

impl VerifyEntry {
    fn sandwich(check: &str, params: String, lower: f64, value: f64, upper: f64, tol: f64) -> Self {
        let pass = value >= lower - tol && value <= upper + tol;
        VerifyEntry {
            check: check.into(),
            params,
            lower: Some(lower),
            value: Some(value),
            upper: Some(upper),
            pass: if pass { "pass" } else { "fail" },
        }
    }

    fn skipped(check: &str, params: String) -> Self {
        VerifyEntry {
            check: check.into(),
            params,
            lower: None,
            value: None,
            upper: None,
            pass: "skipped",
        }
    }
}

/// Brute-force certification suite: exact conditional entropies on the
/// tiny-instance grid must land inside the closed-form bound sandwich,
/// with exact Bayes error supplying the Fano slack. Also checks
/// monotonicity of the conditional sequence and the generating-function
/// identity behind the Gaussian series. Returns the JSON report and an
/// overall pass flag; budget-exceeding configurations are listed as
/// skipped, not failures.
pub fn cmd_verify(config: &ExperimentConfig) -> Result<(String, bool)> {
    let tol = config.tolerance.unwrap_or(1e-9);
    let t_max = config.horizon.unwrap_or(4);
    let budget = EnumerationBudget::default();
    let mut entries: Vec<VerifyEntry> = Vec::new();

    let p_w_grid = config
        .p_w_grid
        .clone()
        .unwrap_or_else(|| vec![0.1, 0.3, 0.5]);
    // one oversized block length to exercise the budget-refusal path
    let l_grid: Vec<usize> = vec![2, 3, 12];
    let p_i_grid: Vec<Option<f64>> = vec![None, Some(0.0), Some(0.1)];
    for &p_w in &p_w_grid {
        let walk = WalkParams::new(p_w)?;
        for &l in &l_grid {
            for p_i in &p_i_grid {
                let (model, label) = match p_i {
                    None => (
                        DetectModel::Static(StaticWallSpec::bernoulli(0.5)?),
                        "static".to_string(),
                    ),
                    Some(p_i) => (
                        DetectModel::Bsc(BscFieldSpec::new(0.5, *p_i)?),
                        format!("bsc p_i={p_i}"),
                    ),
                };
                let params = format!("{label} p_w={p_w} L={l} t<={t_max}");
                let pe = match exact_pe(walk, &model, l, budget) {
                    Ok(pe) => pe,
                    Err(Error::BudgetExceeded { .. }) => {
                        entries.push(VerifyEntry::skipped("sandwich", params));
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let conds = match exact_conditional_sequence(walk, &model, l, t_max, budget) {
                    Ok(c) => c,
                    Err(Error::BudgetExceeded { .. }) => {
                        entries.push(VerifyEntry::skipped("sandwich", params));
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let fano = fano_term(pe);
                for (i, &cond) in conds.iter().enumerate() {
                    let t = (i + 1) as u64;
                    let (lower, upper) = match p_i {
                        None | Some(0.0) => (
                            static_step_lower(walk, 1.0, t, fano),
                            conditional_bound_memory(walk, 1.0, t),
                        ),
                        Some(p_i) => (
                            bsc_step_lower(walk, *p_i, l, t, fano),
                            dynamic_bound_memory_bsc(walk, *p_i, l, t),
                        ),
                    };
                    entries.push(VerifyEntry::sandwich(
                        "sandwich",
                        format!("{params} t={t}"),
                        lower,
                        cond,
                        upper,
                        tol,
                    ));
                }
                for w in conds.windows(2) {
                    entries.push(VerifyEntry::sandwich(
                        "cond-nonincreasing",
                        params.clone(),
                        0.0,
                        w[0] - w[1] + tol,
                        f64::INFINITY,
                        0.0,
                    ));
                }
            }
        }
    }
    // generating-function identity on a parameter grid
    for &p_w in &p_w_grid {
        let walk = WalkParams::new(p_w)?;
        for rho in [0.5, 0.9, 0.99] {
            let residual = crate::entropy::catalan_sum_identity_check(walk, rho, 1e-10)?;
            entries.push(VerifyEntry::sandwich(
                "catalan-identity",
                format!("p_w={p_w} rho={rho}"),
                -1e-8,
                residual,
                1e-8,
                0.0,
            ));
        }
    }
    // binary rate-distortion closed form vs the iterative solver
    for d in [0.05, 0.11, 0.25] {
        let point = crate::rd::blahut_arimoto(
            &[0.5, 0.5],
            &[vec![0.0, 1.0], vec![1.0, 0.0]],
            crate::rd::BaTarget::Distortion(d),
        )?;
        let closed = crate::rd::rx_bernoulli(0.5, d);
        entries.push(VerifyEntry::sandwich(
            "ba-vs-closed-form",
            format!("bernoulli(0.5) d={d}"),
            closed - 1e-4,
            point.rate,
            closed + 1e-4,
            0.0,
        ));
    }

    if config.corrupt_self_test {
        // harness self-test: a bound term shifted above the value it
        // certifies must surface as a failure and a nonzero exit
        let walk = WalkParams::new(0.5)?;
        let upper = conditional_bound_memory(walk, 1.0, 1);
        entries.push(VerifyEntry::sandwich(
            "self-test-corrupt",
            "static p_w=0.5 L=2, lower term shifted by +0.05".into(),
            upper + 0.05,
            upper,
            f64::INFINITY,
            0.0,
        ));
    }

    let ok = entries.iter().all(|e| e.pass != "fail");
    let report = serde_json::json!({
        "schema": "verify.v1",
        "tolerance": tol,
        "checks": entries,
        "pass": ok,
    });
    Ok((
        serde_json::to_string_pretty(&report).expect("serializable") + "\n",
        ok,
    ))
}
