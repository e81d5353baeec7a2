use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::DecodeError;

/// Failure count observed at one `(L, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub l: usize,
    pub p: f64,
    pub trials: u64,
    pub failures: u64,
}

impl CurvePoint {
    pub fn rate(&self) -> f64 {
        self.failures as f64 / self.trials as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    /// Parametric bootstrap resamples; zero skips the error estimate.
    pub bootstrap: usize,
    pub seed: u64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { bootstrap: 200, seed: 0x7468_7265_7368 }
    }
}

/// Finite-size scaling fit `rate = A + B x + C x^2`, `x = (p - p_th) L^(1/nu)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdFit {
    pub p_th: f64,
    pub nu: f64,
    pub coefficients: [f64; 3],
    /// Weighted residual sum of squares at the optimum.
    pub chi2: f64,
    /// Crossing of the smallest and largest size curves, used as the start.
    pub crossing: f64,
    /// Bootstrap standard deviation of `p_th` (zero without resamples).
    pub p_th_std: f64,
    pub nu_std: f64,
    /// 2.5% and 97.5% bootstrap quantiles of `p_th`.
    pub p_th_interval: (f64, f64),
    pub resamples: usize,
}

/// Where the largest-`L` curve overtakes the smallest-`L` one, by linear
/// interpolation between the bracketing rates of a shared grid.
pub fn crossing(points: &[CurvePoint]) -> Result<f64, DecodeError> {
    let (lmin, lmax) = size_range(points)?;
    let curve = |l: usize| {
        let mut c: Vec<(f64, f64)> = points.iter().filter(|q| q.l == l).map(|q| (q.p, q.rate())).collect();
        c.sort_by(|a, b| a.0.total_cmp(&b.0));
        c
    };
    let (small, large) = (curve(lmin), curve(lmax));
    let diff: Vec<(f64, f64)> = large
        .iter()
        .filter_map(|&(p, r)| interpolate(&small, p).map(|s| (p, r - s)))
        .collect();
    for w in diff.windows(2) {
        let ((p0, d0), (p1, d1)) = (w[0], w[1]);
        if d0 <= 0.0 && d1 > 0.0 {
            return Ok(if d0 == d1 { p0 } else { p0 + (p1 - p0) * (-d0) / (d1 - d0) });
        }
    }
    Err(DecodeError::NoCrossing)
}

fn interpolate(curve: &[(f64, f64)], p: f64) -> Option<f64> {
    let i = curve.iter().position(|&(q, _)| q >= p)?;
    let (q1, r1) = curve[i];
    if q1 == p {
        return Some(r1);
    }
    if i == 0 {
        return None;
    }
    let (q0, r0) = curve[i - 1];
    Some(r0 + (r1 - r0) * (p - q0) / (q1 - q0))
}

fn size_range(points: &[CurvePoint]) -> Result<(usize, usize), DecodeError> {
    let lmin = points.iter().map(|q| q.l).min();
    let lmax = points.iter().map(|q| q.l).max();
    match (lmin, lmax) {
        (Some(a), Some(b)) if a < b && points.len() >= 5 && points.iter().all(|q| q.trials > 0) => Ok((a, b)),
        _ => Err(DecodeError::TooFewPoints),
    }
}

struct Sample {
    p: f64,
    ln_l: f64,
    rate: f64,
    weight: f64,
}

fn samples(points: &[CurvePoint], failures: impl Fn(usize) -> u64) -> Vec<Sample> {
    points
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let n = q.trials as f64;
            let k = failures(i) as f64;
            // Shrunk estimate keeps the binomial variance positive at k = 0.
            let r = (k + 0.5) / (n + 1.0);
            Sample { p: q.p, ln_l: (q.l as f64).ln(), rate: k / n, weight: n / (r * (1.0 - r)) }
        })
        .collect()
}

/// Weighted least squares for `A, B, C` at fixed `(p_th, nu)`.
fn inner(data: &[Sample], p_th: f64, nu: f64) -> Option<([f64; 3], f64)> {
    let mut m = [[0.0f64; 4]; 3];
    for s in data {
        let x = (s.p - p_th) * (s.ln_l / nu).exp();
        let basis = [1.0, x, x * x];
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] += s.weight * basis[r] * basis[c];
            }
            m[r][3] += s.weight * basis[r] * s.rate;
        }
    }
    let coef = solve3(m)?;
    let chi2 = data
        .iter()
        .map(|s| {
            let x = (s.p - p_th) * (s.ln_l / nu).exp();
            let e = coef[0] + coef[1] * x + coef[2] * x * x - s.rate;
            s.weight * e * e
        })
        .sum();
    Some((coef, chi2))
}

fn solve3(mut m: [[f64; 4]; 3]) -> Option<[f64; 3]> {
    let scale = m.iter().map(|r| r[..3].iter().fold(0.0f64, |a, v| a.max(v.abs()))).fold(0.0, f64::max);
    for c in 0..3 {
        let piv = (c..3).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))?;
        if m[piv][c].abs() <= scale * 1e-300 || !m[piv][c].is_finite() {
            return None;
        }
        m.swap(c, piv);
        for r in 0..3 {
            if r != c {
                let f = m[r][c] / m[c][c];
                for k in c..4 {
                    m[r][k] -= f * m[c][k];
                }
            }
        }
    }
    let x = [m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]];
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Minimises `f` over the plane from `start` with the given initial steps.
fn nelder_mead(f: impl Fn([f64; 2]) -> f64, start: [f64; 2], step: [f64; 2], iters: usize) -> ([f64; 2], f64) {
    let mut s: Vec<([f64; 2], f64)> = [start, [start[0] + step[0], start[1]], [start[0], start[1] + step[1]]]
        .into_iter()
        .map(|v| (v, f(v)))
        .collect();
    let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    for _ in 0..iters {
        s.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = (s[2].1 - s[0].1).abs();
        if spread <= 1e-12 * (1.0 + s[0].1.abs()) {
            break;
        }
        let centroid = lerp(s[0].0, s[1].0, 0.5);
        let worst = s[2];
        let refl = lerp(centroid, worst.0, -1.0);
        let fr = f(refl);
        if fr < s[0].1 {
            let exp = lerp(centroid, worst.0, -2.0);
            let fe = f(exp);
            s[2] = if fe < fr { (exp, fe) } else { (refl, fr) };
        } else if fr < s[1].1 {
            s[2] = (refl, fr);
        } else {
            let con = if fr < worst.1 { lerp(centroid, refl, 0.5) } else { lerp(centroid, worst.0, 0.5) };
            let fc = f(con);
            if fc < worst.1.min(fr) {
                s[2] = (con, fc);
            } else {
                let best = s[0].0;
                for v in s.iter_mut().skip(1) {
                    v.0 = lerp(best, v.0, 0.5);
                    v.1 = f(v.0);
                }
            }
        }
    }
    s.sort_by(|a, b| a.1.total_cmp(&b.1));
    s[0]
}

fn fit_from(data: &[Sample], p0: f64, ln_nu0: f64) -> Option<(f64, f64, [f64; 3], f64)> {
    let objective = |v: [f64; 2]| {
        if !(-3.0..=3.0).contains(&v[1]) || v[0] <= 0.0 {
            return f64::INFINITY;
        }
        inner(data, v[0], v[1].exp()).map_or(f64::INFINITY, |(_, c)| c)
    };
    let (v, chi2) = nelder_mead(objective, [p0, ln_nu0], [0.05 * p0, 0.2], 2000);
    if !chi2.is_finite() {
        return None;
    }
    let nu = v[1].exp();
    let (coef, _) = inner(data, v[0], nu)?;
    Some((v[0], nu, coef, chi2))
}

/// Fits the scaling form to curves of at least two sizes, starting at the
/// crossing of the extreme sizes with `nu = 1`.
pub fn estimate_threshold(points: &[CurvePoint], opts: FitOptions) -> Result<ThresholdFit, DecodeError> {
    let start = crossing(points)?;
    let data = samples(points, |i| points[i].failures);
    let (p_th, nu, coefficients, chi2) = fit_from(&data, start, 0.0).ok_or(DecodeError::FitFailed)?;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut ps = Vec::with_capacity(opts.bootstrap);
    let mut nus = Vec::with_capacity(opts.bootstrap);
    let model: Vec<f64> = points
        .iter()
        .map(|q| {
            let x = (q.p - p_th) * (q.l as f64).powf(1.0 / nu);
            (coefficients[0] + coefficients[1] * x + coefficients[2] * x * x).clamp(0.0, 1.0)
        })
        .collect();
    for _ in 0..opts.bootstrap {
        let draws: Vec<u64> = points
            .iter()
            .zip(&model)
            .map(|(q, &r)| Binomial::new(q.trials, r).map(|b| b.sample(&mut rng)).unwrap_or(0))
            .collect();
        let resampled = samples(points, |i| draws[i]);
        if let Some((pt, n, _, _)) = fit_from(&resampled, p_th, nu.ln()) {
            ps.push(pt);
            nus.push(n);
        }
    }
    let (p_th_std, nu_std) = (std_dev(&ps), std_dev(&nus));
    let p_th_interval = if ps.is_empty() {
        (p_th, p_th)
    } else {
        ps.sort_by(f64::total_cmp);
        (quantile(&ps, 0.025), quantile(&ps, 0.975))
    };
    Ok(ThresholdFit {
        p_th,
        nu,
        coefficients,
        chi2,
        crossing: start,
        p_th_std,
        nu_std,
        p_th_interval,
        resamples: ps.len(),
    })
}

fn std_dev(v: &[f64]) -> f64 {
    if v.len() < 2 {
        return 0.0;
    }
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let (i, t) = (pos.floor() as usize, pos.fract());
    if i + 1 < sorted.len() {
        sorted[i] * (1.0 - t) + sorted[i + 1] * t
    } else {
        sorted[i]
    }
}
