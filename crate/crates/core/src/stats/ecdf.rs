use crate::error::{Error, Result};

/// Right-continuous empirical CDF: `F(x) = #{samples <= x} / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(samples: &[f64]) -> Result<Self> {
        Self::labeled("samples", samples)
    }

    pub(crate) fn labeled(label: &str, samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySample(label.to_string()));
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite(label.to_string()));
        }
        let mut sorted = samples.to_vec();
        sorted.sort_unstable_by(f64::total_cmp);
        Ok(Ecdf { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }

    /// Number of samples `<= x`.
    pub fn count_le(&self, x: f64) -> usize {
        self.sorted.partition_point(|&v| v <= x)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.count_le(x) as f64 / self.sorted.len() as f64
    }
}
