//! Empirical CDFs, the two-sample Kolmogorov–Smirnov distance, and
//! Pearson/Spearman correlation.

mod correlation;
mod ecdf;
mod ks;

pub use correlation::{average_ranks, correlation, CorrelationResult, Method};
pub use ecdf::Ecdf;
pub use ks::{ks_between, ks_distance, KsReport};

fn sort_floats(values: &mut [f64]) {
    values.sort_unstable_by(f64::total_cmp);
}

/// Arithmetic mean, summed in sorted order so the result does not depend on
/// the order the values arrived in. `NaN` for an empty slice.
pub fn mean(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    sort_floats(values);
    values.iter().sum::<f64>() / values.len() as f64
}

pub fn median(values: &mut [f64]) -> f64 {
    quantile(values, 0.5)
}

/// Linearly interpolated quantile (the usual "type 7" definition).
pub fn quantile(values: &mut [f64], q: f64) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    sort_floats(values);
    let pos = q.clamp(0.0, 1.0) * (values.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    values[lo] + (values[hi] - values[lo]) * (pos - lo as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_median_quantile() {
        assert_eq!(mean(&mut [4.0, 5.0]), 4.5);
        assert!(mean(&mut []).is_nan());
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(quantile(&mut [1.0, 3.0], 0.25), 1.5);
        assert_eq!(quantile(&mut [7.0], 0.25), 7.0);
    }
}
