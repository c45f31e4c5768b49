//! Growth-rate, saturation and Page-value analysis of entropy curves.

use super::EntropySeries;
use crate::error::{Error, Result};

/// Fraction of the curve (from the end) averaged to estimate the plateau.
pub const PLATEAU_FRACTION: f64 = 0.1;
/// Growth window, as fractions of the plateau.
pub const GROWTH_WINDOW: (f64, f64) = (0.1, 0.5);
pub const DEFAULT_SATURATION_THRESHOLD: f64 = 0.95;
/// A tail whose total drift stays below this fraction of the plateau is
/// accepted as flat even when the drift is statistically resolvable.
const FLAT_DRIFT_FRACTION: f64 = 0.02;

fn tail_len(len: usize) -> usize {
    ((len as f64 * PLATEAU_FRACTION).ceil() as usize).clamp(1, len)
}

/// Mean of the final 10% of the sampled means.
pub fn plateau(series: &EntropySeries) -> Result<f64> {
    let means: Vec<f64> = series.points().iter().map(|p| p.mean).collect();
    if means.is_empty() {
        return Err(Error::Analysis("empty series".into()));
    }
    let tail = &means[means.len() - tail_len(means.len())..];
    Ok(tail.iter().sum::<f64>() / tail.len() as f64)
}

/// Ordinary least squares; returns (slope, standard error of slope).
fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let se = if xs.len() > 2 {
        let rss: f64 = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| (y - my - slope * (x - mx)).powi(2))
            .sum();
        (rss / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    (slope, se)
}

/// Least-squares slope (bits per step) of the mean curve over the stretch
/// where it sits between 10% and 50% of its plateau.
pub fn fit_growth_rate(series: &EntropySeries) -> Result<f64> {
    let plateau = plateau(series)?;
    if plateau <= 0.0 {
        return Err(Error::Analysis("no growth: plateau is zero".into()));
    }
    let (lo, hi) = (GROWTH_WINDOW.0 * plateau, GROWTH_WINDOW.1 * plateau);
    let points = series.points();
    let start = points
        .iter()
        .position(|p| p.mean >= lo)
        .ok_or_else(|| Error::Analysis("series never reaches 10% of plateau".into()))?;
    let end = points[start..]
        .iter()
        .position(|p| p.mean > hi)
        .map(|off| start + off)
        .ok_or_else(|| Error::Analysis("series never reaches 50% of plateau".into()))?;
    if end - start < 2 {
        return Err(Error::Analysis(format!(
            "growth window holds {} samples; sample more densely",
            end - start
        )));
    }
    let xs: Vec<f64> = points[start..end].iter().map(|p| p.step as f64).collect();
    let ys: Vec<f64> = points[start..end].iter().map(|p| p.mean).collect();
    Ok(least_squares(&xs, &ys).0)
}

/// First sampled step whose mean exceeds `threshold_fraction * plateau`.
///
/// Fails unless the final 10% of the curve is flat: its fitted slope must
/// be within three standard errors of zero, or its total drift below 2% of
/// the plateau.
pub fn estimate_saturation_time(series: &EntropySeries, threshold_fraction: f64) -> Result<u64> {
    if !(threshold_fraction > 0.0 && threshold_fraction <= 1.0) {
        return Err(Error::Analysis(format!(
            "threshold fraction {threshold_fraction} outside (0, 1]"
        )));
    }
    let plateau = plateau(series)?;
    if plateau <= 0.0 {
        return Err(Error::Analysis("plateau is zero".into()));
    }
    let points = series.points();
    let tail = &points[points.len() - tail_len(points.len())..];
    if tail.len() >= 2 {
        let xs: Vec<f64> = tail.iter().map(|p| p.step as f64).collect();
        let ys: Vec<f64> = tail.iter().map(|p| p.mean).collect();
        let (slope, se) = least_squares(&xs, &ys);
        let drift = (slope * (xs[xs.len() - 1] - xs[0])).abs();
        if slope.abs() > 3.0 * se + 1e-12 && drift > FLAT_DRIFT_FRACTION * plateau {
            return Err(Error::Analysis(format!(
                "plateau not reached: final-window slope {slope:.3e} +/- {se:.3e}"
            )));
        }
    }
    let target = threshold_fraction * plateau;
    points
        .iter()
        .find(|p| p.mean > target - 1e-12 * plateau)
        .map(|p| p.step)
        .ok_or_else(|| Error::Analysis("curve never reaches threshold".into()))
}

/// Page's average entanglement entropy (bits) of a random pure state on
/// `n_qubits` qubits across a cut of `cut_size <= n_qubits / 2`, in its
/// large-dimension form `cut - 2^(2 cut - N - 1) / ln 2`.
pub fn page_value(n_qubits: usize, cut_size: usize) -> Result<f64> {
    if cut_size == 0 || 2 * cut_size > n_qubits {
        return Err(Error::InvalidConfig(format!(
            "page value needs 1 <= cut <= N/2, got cut {cut_size} for N = {n_qubits}"
        )));
    }
    let exponent = 2.0 * cut_size as f64 - n_qubits as f64 - 1.0;
    Ok(cut_size as f64 - exponent.exp2() / std::f64::consts::LN_2)
}

/// Harmonic number difference `H(b) - H(a)` for `a <= b`.
fn harmonic_diff(a: f64, b: f64) -> f64 {
    const EXACT_LIMIT: f64 = 1e6;
    if b <= EXACT_LIMIT {
        ((a as u64 + 1)..=(b as u64)).map(|k| 1.0 / k as f64).sum()
    } else {
        // Asymptotic expansion of H(x) - ln x - gamma.
        let tail = |x: f64| 1.0 / (2.0 * x) - 1.0 / (12.0 * x * x);
        (b / a).ln() + tail(b) - tail(a)
    }
}

/// Page's exact finite-dimension formula,
/// `(sum_{k=n+1}^{mn} 1/k - (m-1)/(2n)) / ln 2` with `m = 2^cut <= n`.
pub fn page_value_exact(n_qubits: usize, cut_size: usize) -> Result<f64> {
    if cut_size == 0 || 2 * cut_size > n_qubits {
        return Err(Error::InvalidConfig(format!(
            "page value needs 1 <= cut <= N/2, got cut {cut_size} for N = {n_qubits}"
        )));
    }
    let m = (cut_size as f64).exp2();
    let n = ((n_qubits - cut_size) as f64).exp2();
    let nats = harmonic_diff(n, m * n) - (m - 1.0) / (2.0 * n);
    Ok(nats / std::f64::consts::LN_2)
}
