//! Assembly of the vector process: at each step the camera sees a block of
//! `L` consecutive wall samples starting at the current walk position.
//!
//! The static extractor reads a fixed wall row; the dynamic extractors read
//! an evolving field. Dynamic fields are sampled lazily per site using the
//! per-site Markov chain (sites are independent, so conditioning on the last
//! observed value at the same site gives the exact joint law); this avoids
//! materializing rows over the whole reachable window at every step.

use crate::reality::{bsc_equiv, Ar1FieldSpec, BscFieldSpec, FieldWindow};
use crate::walk::WalkPath;
use crate::{seed, Error, Result};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use std::collections::HashMap;
use std::fmt::Display;

/// Block length `L >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ViewSpec {
    block_length: usize,
}

impl ViewSpec {
    pub fn new(block_length: usize) -> Result<Self> {
        if block_length < 2 {
            return Err(Error::param(format!(
                "block length must be >= 2, got {block_length}"
            )));
        }
        Ok(ViewSpec { block_length })
    }

    pub fn block_length(&self) -> usize {
        self.block_length
    }
}

/// The realized vector process `V_0..V_t` together with its generating path.
///
/// `V_0` is always present and treated as known to the decoder; codecs and
/// entropy oracles condition on it.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewSequence<T> {
    frames: Vec<Vec<T>>,
    path: WalkPath,
    spec: ViewSpec,
}

impl<T: Copy> ViewSequence<T> {
    pub fn frames(&self) -> &[Vec<T>] {
        &self.frames
    }

    pub fn path(&self) -> &WalkPath {
        &self.path
    }

    pub fn spec(&self) -> ViewSpec {
        self.spec
    }

    /// Number of steps `t` (frames minus one).
    pub fn len(&self) -> usize {
        self.frames.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl<T: Copy + Display> ViewSequence<T> {
    /// Columnar CSV: `frame,offset,value`, one row per sample.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("frame,offset,value\n");
        for (i, frame) in self.frames.iter().enumerate() {
            for (j, v) in frame.iter().enumerate() {
                out.push_str(&format!("{i},{j},{v}\n"));
            }
        }
        out
    }
}

/// Extracts the static vector process: `V_i = wall[W_i .. W_i + L - 1]`.
pub fn extract_static(
    wall: &FieldWindow<u32>,
    path: &WalkPath,
    spec: ViewSpec,
) -> Result<ViewSequence<u32>> {
    let l = spec.block_length() as i64;
    let mut frames = Vec::with_capacity(path.positions().len());
    for &w in path.positions() {
        let mut frame = Vec::with_capacity(spec.block_length());
        for s in w..w + l {
            frame.push(wall.at(s, 0)?);
        }
        frames.push(frame);
    }
    Ok(ViewSequence {
        frames,
        path: path.clone(),
        spec,
    })
}

/// Lazy per-site sampler state.
struct SiteStore<T> {
    last: HashMap<i64, (usize, T)>,
}

impl<T: Copy> SiteStore<T> {
    fn new() -> Self {
        SiteStore {
            last: HashMap::new(),
        }
    }

    fn observe<R: Rng>(
        &mut self,
        site: i64,
        time: usize,
        rng: &mut R,
        fresh: &mut dyn FnMut(usize, &mut R) -> T,
        evolve: &mut dyn FnMut(T, usize, &mut R) -> T,
    ) -> T {
        let v = match self.last.get(&site) {
            None => fresh(time, rng),
            Some(&(t0, v0)) => {
                debug_assert!(time >= t0);
                if time == t0 {
                    v0
                } else {
                    evolve(v0, time - t0, rng)
                }
            }
        };
        self.last.insert(site, (time, v));
        v
    }
}

/// Extracts the dynamic vector process over the binary BSC-innovation field.
///
/// The field starts from a `Bernoulli(p_x)` row at `t = 0` and evolves
/// independently of the path.
pub fn extract_dynamic_bsc(
    field: &BscFieldSpec,
    path: &WalkPath,
    spec: ViewSpec,
    seed_value: u64,
) -> ViewSequence<u8> {
    let mut rng = seed::rng(seed_value);
    let mut store = SiteStore::new();
    let p_x = field.p_x();
    let p_i = field.p_i();
    let l = spec.block_length() as i64;
    let mut frames = Vec::with_capacity(path.positions().len());
    for (time, &w) in path.positions().iter().enumerate() {
        let mut frame = Vec::with_capacity(spec.block_length());
        for s in w..w + l {
            let v = store.observe(
                s,
                time,
                &mut rng,
                &mut |t, rng| {
                    // marginal at time t of a chain started at Bern(p_x)
                    let flip = bsc_equiv(p_i, t as u64);
                    let p1 = p_x * (1.0 - flip) + (1.0 - p_x) * flip;
                    u8::from(rng.random_bool(p1))
                },
                &mut |v0, dt, rng| {
                    let flip = bsc_equiv(p_i, dt as u64);
                    if flip > 0.0 && rng.random_bool(flip) {
                        1 - v0
                    } else {
                        v0
                    }
                },
            );
            frame.push(v);
        }
        frames.push(frame);
    }
    ViewSequence {
        frames,
        path: path.clone(),
        spec,
    }
}

/// Extracts the dynamic vector process over the Gaussian AR(1) field,
/// started in the stationary `N(0, 1)` regime.
pub fn extract_dynamic_ar1(
    field: &Ar1FieldSpec,
    path: &WalkPath,
    spec: ViewSpec,
    seed_value: u64,
) -> ViewSequence<f64> {
    let mut rng = seed::rng(seed_value);
    let mut store = SiteStore::new();
    let rho = field.rho();
    let unit = Normal::new(0.0, 1.0).expect("valid std");
    let l = spec.block_length() as i64;
    let mut frames = Vec::with_capacity(path.positions().len());
    for (time, &w) in path.positions().iter().enumerate() {
        let mut frame = Vec::with_capacity(spec.block_length());
        for s in w..w + l {
            let v = store.observe(
                s,
                time,
                &mut rng,
                &mut |_, rng| unit.sample(rng),
                &mut |v0, dt, rng| {
                    let r = rho.powi(dt as i32);
                    let sd = (1.0 - r * r).sqrt();
                    r * v0 + sd * unit.sample(rng)
                },
            );
            frame.push(v);
        }
        frames.push(frame);
    }
    ViewSequence {
        frames,
        path: path.clone(),
        spec,
    }
}
