//! Shared numerical building blocks: quadrature, derivative-free
//! optimizers, normal tail functions and seed derivation.

pub mod normal;
pub mod opt;
pub mod quad;
pub mod seed;
pub mod stats;

/// Sample quantile with linear interpolation between order statistics
/// (the convention used for all posterior summaries in this crate).
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty slice");
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = p.clamp(0.0, 1.0) * (n - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    let frac = h - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Median plus equal-tailed 95% interval of an unsorted sample.
pub fn median_ci95(values: &[f64]) -> (f64, f64, f64) {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("non-finite value in summary"));
    (
        quantile(&v, 0.5),
        quantile(&v, 0.025),
        quantile(&v, 0.975),
    )
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample variance with the n-1 denominator.
pub fn variance(values: &[f64]) -> f64 {
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64
}

/// Standard error of the mean of `values`.
pub fn standard_error(values: &[f64]) -> f64 {
    (variance(values) / values.len() as f64).sqrt()
}
