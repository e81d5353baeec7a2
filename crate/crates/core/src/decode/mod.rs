//! Circuit-level noise, minimum-weight perfect matching decoding, Monte
//! Carlo estimation and finite-size threshold fits.

mod blossom;
mod decoder;
mod noise;
mod sim;
mod threshold;

pub use blossom::{max_weight_matching, Matching};
pub use decoder::{mwpm, Correction, Decoder, DecodingModel, TrialOutcome, WEIGHT_SCALE};
pub use noise::{edge_probability, odd_count_probability, odd_parity, NoiseParams, Regime, WeightScheme};
pub use sim::{
    decoder_graph, linspace, point_seed, run_trials, simulate, sweep, wilson_interval, SweepError, SweepPoint,
    TrialStats, Z95,
};
pub use threshold::{crossing, estimate_threshold, CurvePoint, FitOptions, ThresholdFit};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DecodeError {
    #[error("{name} = {value} is outside [0, 0.5]")]
    Probability { name: &'static str, value: f64 },
    #[error("unknown noise regime '{0}' (expected pz, pz10, sym or px10)")]
    Regime(String),
    #[error("unknown weight scheme '{0}' (expected neg-log or log-odds)")]
    Weights(String),
    #[error("odd number of defects ({0})")]
    OddDefects(usize),
    #[error("defects cannot be paired within the decoder graph")]
    Unmatchable,
    #[error("the largest-size curve never overtakes the smallest-size curve")]
    NoCrossing,
    #[error("threshold fit needs at least two sizes and five points")]
    TooFewPoints,
    #[error("threshold fit did not converge")]
    FitFailed,
}
