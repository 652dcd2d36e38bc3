//! Generators for the three reality models: a static discrete i.i.d. wall,
//! a binary field with per-step BSC innovations, and a Gaussian AR(1) field.
//!
//! Fields are i.i.d. across sites and Markov in time. The "infinite wall" is
//! only materialized over the site range a walk can touch.

use crate::seed;
use crate::{Error, Result};
use rand::Rng;
use rand_distr::{Distribution, Normal};

const PMF_TOL: f64 = 1e-12;

/// A static wall: i.i.d. symbols from a pmf over `0..alphabet_size`.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticWallSpec {
    alphabet_size: usize,
    pmf: Vec<f64>,
}

impl StaticWallSpec {
    pub fn new(pmf: Vec<f64>) -> Result<Self> {
        if pmf.len() < 2 {
            return Err(Error::InvalidPmf("alphabet size must be >= 2".into()));
        }
        if pmf.iter().any(|&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidPmf("entries must be nonnegative".into()));
        }
        let sum: f64 = pmf.iter().sum();
        if (sum - 1.0).abs() > PMF_TOL {
            return Err(Error::InvalidPmf(format!("pmf sums to {sum}, not 1")));
        }
        Ok(StaticWallSpec {
            alphabet_size: pmf.len(),
            pmf,
        })
    }

    /// Uniform pmf over `m` symbols.
    pub fn uniform(m: usize) -> Result<Self> {
        Self::new(vec![1.0 / m as f64; m])
    }

    /// Binary wall with `P{1} = p_x`.
    pub fn bernoulli(p_x: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_x) {
            return Err(Error::param(format!("p_x must be in [0,1], got {p_x}")));
        }
        Self::new(vec![1.0 - p_x, p_x])
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    /// True iff the pmf is uniform (within tolerance).
    pub fn is_uniform(&self) -> bool {
        let u = 1.0 / self.alphabet_size as f64;
        self.pmf.iter().all(|&p| (p - u).abs() < PMF_TOL)
    }

    /// Source entropy `H(X)` in bits.
    pub fn entropy(&self) -> f64 {
        crate::entropy::discrete_entropy(&self.pmf).expect("validated pmf")
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> u32 {
        let u: f64 = rng.random();
        let mut cum = 0.0;
        for (i, &p) in self.pmf.iter().enumerate() {
            cum += p;
            if u < cum {
                return i as u32;
            }
        }
        (self.alphabet_size - 1) as u32
    }
}

/// Binary field: initial `Bernoulli(p_x)` row, each bit independently
/// flipped with probability `p_i` per time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BscFieldSpec {
    p_x: f64,
    p_i: f64,
}

impl BscFieldSpec {
    pub fn new(p_x: f64, p_i: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_x) {
            return Err(Error::param(format!("p_x must be in [0,1], got {p_x}")));
        }
        if !(0.0..=0.5).contains(&p_i) {
            return Err(Error::param(format!("p_i must be in [0, 0.5], got {p_i}")));
        }
        Ok(BscFieldSpec { p_x, p_i })
    }

    pub fn p_x(&self) -> f64 {
        self.p_x
    }

    pub fn p_i(&self) -> f64 {
        self.p_i
    }
}

/// Gaussian AR(1) field: per site, `X^(t) = rho X^(t-1) + eps_t` with
/// `eps_t ~ N(0, 1 - rho^2)` and stationary `N(0, 1)` marginal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ar1FieldSpec {
    rho: f64,
}

impl Ar1FieldSpec {
    pub fn new(rho: f64) -> Result<Self> {
        if !(0.0 < rho && rho < 1.0) {
            return Err(Error::param(format!("rho must be in (0, 1), got {rho}")));
        }
        Ok(Ar1FieldSpec { rho })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Innovation variance `1 - rho^2`.
    pub fn innovation_variance(&self) -> f64 {
        1.0 - self.rho * self.rho
    }
}

/// A materialized window of a field: rows over a fixed site interval.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldWindow<T> {
    site_lo: i64,
    rows: Vec<Vec<T>>,
}

impl<T: Copy> FieldWindow<T> {
    pub fn new(site_lo: i64, rows: Vec<Vec<T>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::param("field window must be nonempty"));
        }
        let w = rows[0].len();
        if rows.iter().any(|r| r.len() != w) {
            return Err(Error::param("all rows must span the same site range"));
        }
        Ok(FieldWindow { site_lo, rows })
    }

    pub fn site_lo(&self) -> i64 {
        self.site_lo
    }

    pub fn site_hi(&self) -> i64 {
        self.site_lo + self.rows[0].len() as i64 - 1
    }

    pub fn time_extent(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    /// Sample at `(site, time)`; errors if outside the window.
    pub fn at(&self, site: i64, time: usize) -> Result<T> {
        if site < self.site_lo || site > self.site_hi() || time >= self.rows.len() {
            return Err(Error::WindowTooSmall(format!(
                "site {site} time {time} outside window [{}, {}] x 0..={}",
                self.site_lo,
                self.site_hi(),
                self.time_extent()
            )));
        }
        Ok(self.rows[time][(site - self.site_lo) as usize])
    }
}

/// Draws a single static wall row over `[site_lo, site_hi]`.
pub fn gen_static_wall(
    spec: &StaticWallSpec,
    site_lo: i64,
    site_hi: i64,
    seed: u64,
) -> Result<FieldWindow<u32>> {
    if site_hi < site_lo {
        return Err(Error::param("empty site range"));
    }
    let mut rng = seed::rng(seed);
    let row = (site_lo..=site_hi).map(|_| spec.sample(&mut rng)).collect();
    FieldWindow::new(site_lo, vec![row])
}

/// Draws an initial `Bernoulli(p)` binary row.
pub fn gen_binary_row(p: f64, len: usize, seed: u64) -> Vec<u8> {
    let mut rng = seed::rng(seed);
    (0..len)
        .map(|_| if rng.random_bool(p) { 1 } else { 0 })
        .collect()
}

/// Flips each bit independently with probability `p_i`.
pub fn evolve_bsc(row: &[u8], p_i: f64, seed: u64) -> Vec<u8> {
    let mut rng = seed::rng(seed);
    row.iter()
        .map(|&b| {
            if p_i > 0.0 && rng.random_bool(p_i) {
                1 - b
            } else {
                b
            }
        })
        .collect()
}

/// Equivalent crossover probability of `t` BSCs in series,
/// `p_{I,t} = 0.5 (1 - (1 - 2 p_i)^t)`.
pub fn bsc_equiv(p_i: f64, t: u64) -> f64 {
    0.5 * (1.0 - (1.0 - 2.0 * p_i).powi(t as i32))
}

/// Draws a stationary `N(0, 1)` row.
pub fn gen_ar1_row(len: usize, seed: u64) -> Vec<f64> {
    let normal = Normal::new(0.0, 1.0).expect("valid std");
    let mut rng = seed::rng(seed);
    (0..len).map(|_| normal.sample(&mut rng)).collect()
}

/// One AR(1) time step: `rho * row + N(0, 1 - rho^2)` per site.
pub fn evolve_ar1(row: &[f64], spec: &Ar1FieldSpec, seed: u64) -> Vec<f64> {
    let normal = Normal::new(0.0, spec.innovation_variance().sqrt()).expect("variance > 0");
    let mut rng = seed::rng(seed);
    row.iter()
        .map(|&x| spec.rho() * x + normal.sample(&mut rng))
        .collect()
}
