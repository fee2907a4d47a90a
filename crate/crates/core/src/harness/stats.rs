use crate::error::{Error, Result};

use super::RunSummary;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

/// Wilson score interval for `failures` out of `trials`.
pub fn wilson_interval(failures: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = failures as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if failures == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if failures == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// Ratio of logical error rates at the same operating point.
pub fn badness(target: &RunSummary, baseline: &RunSummary) -> Result<f64> {
    if target.d != baseline.d || target.eps != baseline.eps {
        return Err(Error::Precondition(format!(
            "badness compares equal points, got d={} eps={} against d={} eps={}",
            target.d, target.eps, baseline.d, baseline.eps
        )));
    }
    if baseline.failures == 0 {
        return Err(Error::Numerical("badness undefined: baseline saw no failures".into()));
    }
    Ok(target.p_logical / baseline.p_logical)
}

/// Estimated crossing of the curves for two distances.
#[derive(Clone, Debug, PartialEq)]
pub struct Crossing {
    pub d_small: usize,
    pub d_large: usize,
    pub eps: f64,
}

/// Fit `ln p_large - ln p_small` linearly in `eps` by least squares over the
/// rates both distances share and return the root. Points where either rate
/// is zero are skipped; fewer than two usable points or a flat fit give
/// `None`.
pub fn crossing_between(points: &[(usize, f64, f64)], small: usize, large: usize) -> Option<Crossing> {
    let rate = |d: usize, eps: f64| {
        points
            .iter()
            .find(|p| p.0 == d && p.1 == eps)
            .map(|p| p.2)
            .filter(|&p| p > 0.0)
    };
    let xy: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.0 == small)
        .filter_map(|p| Some((p.1, rate(large, p.1)?.ln() - rate(small, p.1)?.ln())))
        .collect();
    if xy.len() < 2 {
        return None;
    }
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 || sxy == 0.0 {
        return None;
    }
    Some(Crossing {
        d_small: small,
        d_large: large,
        eps: mx - my * sxx / sxy,
    })
}

/// Crossings for each pair of consecutive distances in `(d, eps, p)` data.
pub fn crossing_points(points: &[(usize, f64, f64)]) -> Vec<Crossing> {
    let mut ds: Vec<usize> = points.iter().map(|p| p.0).collect();
    ds.sort_unstable();
    ds.dedup();
    ds.windows(2)
        .filter_map(|pair| crossing_between(points, pair[0], pair[1]))
        .collect()
}
