use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::decoder::{Decoder, DecodingModel};
use super::noise::{NoiseParams, Regime, WeightScheme};
use super::threshold::CurvePoint;
use super::DecodeError;
use crate::lattice::{DecoderGraph, LatticeError, Torus, UnitCell};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Trials run by one worker before its counts are merged.
const CHUNK: u64 = 512;

/// Aggregated Monte Carlo counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TrialStats {
    pub trials: u64,
    pub failures: u64,
    /// Count per homology class, indexed by seam bits (`x = 1, y = 2, z = 4`).
    /// Entry 0 counts successes; the other seven add up to `failures`.
    pub class_counts: [u64; 8],
}

impl TrialStats {
    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.failures as f64 / self.trials as f64
        }
    }

    /// 95% Wilson score interval for the failure rate.
    pub fn wilson(&self) -> (f64, f64) {
        wilson_interval(self.failures, self.trials, Z95)
    }

    pub fn record(&mut self, class: u8) {
        self.trials += 1;
        self.class_counts[class as usize] += 1;
        if class != 0 {
            self.failures += 1;
        }
    }

    pub fn merge(mut self, other: TrialStats) -> TrialStats {
        self.trials += other.trials;
        self.failures += other.failures;
        for (a, b) in self.class_counts.iter_mut().zip(other.class_counts) {
            *a += b;
        }
        self
    }
}

/// Wilson score interval for `k` successes in `n` trials at normal quantile `z`.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (k, n) = (k as f64, n as f64);
    let z2 = z * z;
    let center = (k + z2 / 2.0) / (n + z2);
    let half = z * (k * (n - k) / n + z2 / 4.0).sqrt() / (n + z2);
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Runs trials `0..trials` of stream `seed` on the current rayon pool.
/// Every trial draws from its own `(seed, index)` stream, so the result does
/// not depend on the number of worker threads.
pub fn run_trials(model: &DecodingModel, trials: u64, seed: u64) -> Result<TrialStats, DecodeError> {
    let chunks = trials.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut dec = Decoder::new(model);
            let mut stats = TrialStats::default();
            for i in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                stats.record(dec.run_trial(seed, i)?.class);
            }
            Ok(stats)
        })
        .try_reduce(TrialStats::default, |a, b| Ok(a.merge(b)))
}

/// Builds the decoder graph of `cell` on an `l`-torus.
pub fn decoder_graph(cell: &UnitCell, l: usize) -> Result<DecoderGraph, LatticeError> {
    Ok(Torus::build(cell, l)?.compile_error_channels())
}

/// Simulates one noise point.
pub fn simulate(
    graph: &DecoderGraph,
    noise: &NoiseParams,
    scheme: WeightScheme,
    trials: u64,
    seed: u64,
) -> Result<TrialStats, DecodeError> {
    let model = DecodingModel::new(graph, noise, scheme);
    run_trials(&model, trials, seed)
}

/// Mixes a base seed with a point's coordinates (SplitMix64 finaliser).
pub fn point_seed(seed: u64, l: usize, index: usize) -> u64 {
    let mut z = seed ^ ((l as u64) << 32) ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `points` evenly spaced rates from `pmin` to `pmax` inclusive.
pub fn linspace(pmin: f64, pmax: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![pmin],
        _ => (0..points)
            .map(|i| pmin + (pmax - pmin) * i as f64 / (points - 1) as f64)
            .collect(),
    }
}

/// One simulated point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub l: usize,
    pub noise: NoiseParams,
    pub seed: u64,
    pub stats: TrialStats,
}

impl SweepPoint {
    pub fn curve_point(&self) -> CurvePoint {
        CurvePoint {
            l: self.l,
            p: self.noise.total(),
            trials: self.stats.trials,
            failures: self.stats.failures,
        }
    }
}

/// Simulates every `(L, p)` combination of a regime.
pub fn sweep(
    cell: &UnitCell,
    regime: Regime,
    ls: &[usize],
    ps: &[f64],
    trials: u64,
    seed: u64,
    scheme: WeightScheme,
) -> Result<Vec<SweepPoint>, SweepError> {
    let mut out = Vec::with_capacity(ls.len() * ps.len());
    for &l in ls {
        let graph = decoder_graph(cell, l)?;
        for (i, &p) in ps.iter().enumerate() {
            let noise = regime.params(p)?;
            let s = point_seed(seed, l, i);
            let stats = simulate(&graph, &noise, scheme, trials, s)?;
            out.push(SweepPoint { l, noise, seed: s, stats });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SweepError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
}
