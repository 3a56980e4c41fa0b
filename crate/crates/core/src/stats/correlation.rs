use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Pearson,
    #[default]
    Spearman,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Pearson => "pearson",
            Method::Spearman => "spearman",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pearson" => Ok(Method::Pearson),
            "spearman" => Ok(Method::Spearman),
            other => Err(Error::InvalidArgument(format!(
                "unknown correlation method `{other}`"
            ))),
        }
    }
}

/// A correlation coefficient, or the reason it is undefined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub method: Method,
    pub rho: Option<f64>,
    /// Number of pairs left after dropping non-finite values.
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

const MIN_PAIRS: usize = 3;

/// Pearson or Spearman correlation over the pairs where both values are finite.
///
/// A constant series (or fewer than three usable pairs) yields `rho = None`
/// with a reason rather than an error.
pub fn correlation(x: &[f64], y: &[f64], method: Method) -> Result<CorrelationResult> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = x
        .iter()
        .zip(y)
        .filter(|(a, b)| a.is_finite() && b.is_finite())
        .map(|(&a, &b)| (a, b))
        .unzip();
    let n = xs.len();
    let missing = |reason: &str| CorrelationResult {
        method,
        rho: None,
        n,
        reason: Some(reason.to_string()),
    };
    if n < MIN_PAIRS {
        return Ok(missing("fewer than 3 paired values"));
    }
    let rho = match method {
        Method::Pearson => pearson(&xs, &ys),
        Method::Spearman => pearson(&average_ranks(&xs), &average_ranks(&ys)),
    };
    Ok(match rho {
        Some(r) => CorrelationResult {
            method,
            rho: Some(r.clamp(-1.0, 1.0)),
            n,
            reason: None,
        },
        None => missing("constant series"),
    })
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

/// 1-based ranks; tied values share the mean of the ranks they span.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let rank = (start + end + 1) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = rank;
        }
        start = end;
    }
    ranks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_pearson() {
        let x = [1.0, 2.0, 3.0, 4.0, 7.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let r = correlation(&x, &y, Method::Pearson).unwrap();
        assert!((r.rho.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spearman_small_cases() {
        let r = correlation(&[1.0, 2.0, 3.0], &[3.0, 1.0, 2.0], Method::Spearman).unwrap();
        assert!((r.rho.unwrap() + 0.5).abs() < 1e-12);
        let r = correlation(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0], Method::Spearman).unwrap();
        assert_eq!(r.rho, Some(-1.0));
    }

    #[test]
    fn constant_series_is_missing() {
        let r = correlation(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0], Method::Pearson).unwrap();
        assert_eq!(r.rho, None);
        assert_eq!(r.reason.as_deref(), Some("constant series"));
    }

    #[test]
    fn drops_non_finite_pairwise() {
        let r = correlation(
            &[1.0, f64::NAN, 2.0, 3.0, 4.0],
            &[1.0, 2.0, 2.0, f64::INFINITY, 5.0],
            Method::Spearman,
        )
        .unwrap();
        assert_eq!(r.n, 3);
        assert_eq!(r.rho, Some(1.0));
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            correlation(&[1.0], &[1.0, 2.0], Method::Pearson),
            Err(Error::LengthMismatch(1, 2))
        ));
    }

    #[test]
    fn tied_ranks() {
        assert_eq!(average_ranks(&[10.0, 20.0, 10.0, 30.0]), vec![1.5, 3.0, 1.5, 4.0]);
    }
}
