use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::DecodeError;
use crate::lattice::DecoderEdge;

/// Gate and measurement failure rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub p_z: f64,
    pub p_x: f64,
    pub p_m: f64,
}

impl NoiseParams {
    pub fn new(p_z: f64, p_x: f64, p_m: f64) -> Result<Self, DecodeError> {
        for (name, p) in [("p_Z", p_z), ("p_X", p_x), ("p_m", p_m)] {
            if !(0.0..=0.5).contains(&p) {
                return Err(DecodeError::Probability { name, value: p });
            }
        }
        Ok(NoiseParams { p_z, p_x, p_m })
    }

    /// The largest of the three rates.
    pub fn total(&self) -> f64 {
        self.p_z.max(self.p_x).max(self.p_m)
    }
}

/// Fixed ratios between the three rates, parametrised by the largest one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `p_Z = p`, no X or measurement errors.
    Pz,
    /// `p_Z = p`, `p_X = p_m = p / 10`.
    Pz10,
    /// `p_Z = p_X = p_m = p`.
    Sym,
    /// `p_X = p`, `p_Z = p_m = p / 10`.
    Px10,
}

impl Regime {
    pub const ALL: [Regime; 4] = [Regime::Pz, Regime::Pz10, Regime::Sym, Regime::Px10];

    pub fn params(self, p: f64) -> Result<NoiseParams, DecodeError> {
        let t = p / 10.0;
        match self {
            Regime::Pz => NoiseParams::new(p, 0.0, 0.0),
            Regime::Pz10 => NoiseParams::new(p, t, t),
            Regime::Sym => NoiseParams::new(p, p, p),
            Regime::Px10 => NoiseParams::new(t, p, t),
        }
    }
}

impl FromStr for Regime {
    type Err = DecodeError;

    fn from_str(s: &str) -> Result<Self, DecodeError> {
        match s {
            "pz" => Ok(Regime::Pz),
            "pz10" => Ok(Regime::Pz10),
            "sym" => Ok(Regime::Sym),
            "px10" => Ok(Regime::Px10),
            _ => Err(DecodeError::Regime(s.to_string())),
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Pz => "pz",
            Regime::Pz10 => "pz10",
            Regime::Sym => "sym",
            Regime::Px10 => "px10",
        })
    }
}

/// Probability that an odd number of `count` independent failures, each
/// with probability `p`, occur: `(1 - (1 - 2p)^count) / 2`.
pub fn odd_count_probability(count: u32, p: f64) -> f64 {
    0.5 * (1.0 - (1.0 - 2.0 * p).powi(count as i32))
}

/// Probability that an odd number of independent events fire. The factors
/// are multiplied in sorted order so the result does not depend on the
/// order of `probs`.
pub fn odd_parity(probs: &[f64]) -> f64 {
    let mut f: Vec<f64> = probs.iter().map(|q| 1.0 - 2.0 * q).collect();
    f.sort_by(f64::total_cmp);
    0.5 * (1.0 - f.iter().product::<f64>())
}

/// Excitation probability of a decoder edge: measurement error (plain edges
/// only), odd number of Z failures, odd number of X failures, combined by
/// parity.
pub fn edge_probability(edge: &DecoderEdge, noise: &NoiseParams) -> f64 {
    let pm = if edge.measured { noise.p_m } else { 0.0 };
    odd_parity(&[
        pm,
        odd_count_probability(edge.z, noise.p_z),
        odd_count_probability(edge.x, noise.p_x),
    ])
}

/// How edge probabilities turn into matching weights.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightScheme {
    /// `-ln P_e`.
    #[default]
    NegLog,
    /// `-ln (P_e / (1 - P_e))`.
    LogOdds,
}

impl WeightScheme {
    pub fn weight(self, p: f64) -> f64 {
        match self {
            WeightScheme::NegLog => -p.ln(),
            WeightScheme::LogOdds => (-(p / (1.0 - p)).ln()).max(0.0),
        }
    }
}

impl FromStr for WeightScheme {
    type Err = DecodeError;

    fn from_str(s: &str) -> Result<Self, DecodeError> {
        match s {
            "neg-log" => Ok(WeightScheme::NegLog),
            "log-odds" => Ok(WeightScheme::LogOdds),
            _ => Err(DecodeError::Weights(s.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Direct sum over all outcomes with odd parity.
    fn enumerate_odd(ps: &[f64]) -> f64 {
        let mut total = 0.0;
        for mask in 0u32..(1 << ps.len()) {
            if mask.count_ones() % 2 == 1 {
                let mut pr = 1.0;
                for (k, &p) in ps.iter().enumerate() {
                    pr *= if mask >> k & 1 == 1 { p } else { 1.0 - p };
                }
                total += pr;
            }
        }
        total
    }

    #[test]
    fn binomial_closed_form() {
        for count in 0..9 {
            for &p in &[0.0, 0.001, 0.03, 0.2, 0.5] {
                let direct = enumerate_odd(&vec![p; count as usize]);
                assert!((odd_count_probability(count, p) - direct).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn half_is_absorbing() {
        assert_eq!(odd_parity(&[0.5, 0.013, 0.2]), 0.5);
        assert_eq!(odd_parity(&[0.0, 0.0, 0.0]), 0.0);
        assert_eq!(odd_count_probability(3, 0.5), 0.5);
    }

    #[test]
    fn regimes() {
        let n = Regime::Pz10.params(0.01).unwrap();
        assert_eq!((n.p_z, n.p_x, n.p_m), (0.01, 0.001, 0.001));
        assert_eq!(n.total(), 0.01);
        assert_eq!(Regime::Px10.params(0.02).unwrap().total(), 0.02);
        assert!("foo".parse::<Regime>().is_err());
        assert_eq!("sym".parse::<Regime>().unwrap().to_string(), "sym");
        assert!(NoiseParams::new(0.6, 0.0, 0.0).is_err());
        assert!(NoiseParams::new(f64::NAN, 0.0, 0.0).is_err());
    }
}
