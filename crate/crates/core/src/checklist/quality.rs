use serde::{Deserialize, Serialize};

use crate::corpus::Record;

/// Tolerance for treating a (possibly averaged) rating as equal to a threshold.
pub const BAND_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum QualityBand {
    Low,
    Moderate,
    High,
}

impl QualityBand {
    pub const ALL: [QualityBand; 3] = [QualityBand::Low, QualityBand::Moderate, QualityBand::High];

    pub fn label(self) -> &'static str {
        match self {
            QualityBand::Low => "Low",
            QualityBand::Moderate => "Moderate",
            QualityBand::High => "High",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QualityThresholds {
    pub low_below: f64,
    pub high_above: f64,
}

impl Default for QualityThresholds {
    fn default() -> Self {
        QualityThresholds {
            low_below: 3.0,
            high_above: 3.0,
        }
    }
}

impl QualityThresholds {
    /// Low below `low_below`, High above `high_above`, Moderate otherwise.
    /// Comparisons are strict beyond [`BAND_TOLERANCE`], so with the default
    /// 3/3 split a rating of 2.999999999 is Low and 3.0 is Moderate.
    pub fn classify(&self, rating: f64) -> QualityBand {
        if self.low_below - rating > BAND_TOLERANCE {
            QualityBand::Low
        } else if rating - self.high_above > BAND_TOLERANCE {
            QualityBand::High
        } else {
            QualityBand::Moderate
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct QualitySplit<'a> {
    pub low: Vec<&'a Record>,
    pub moderate: Vec<&'a Record>,
    pub high: Vec<&'a Record>,
    /// Records without a finite rating for the aspect.
    pub excluded: usize,
}

impl<'a> QualitySplit<'a> {
    pub fn band(&self, band: QualityBand) -> &[&'a Record] {
        match band {
            QualityBand::Low => &self.low,
            QualityBand::Moderate => &self.moderate,
            QualityBand::High => &self.high,
        }
    }
}

/// Partition the records carrying `aspect` into quality bands.
pub fn split_quality<'a>(
    records: &'a [Record],
    aspect: &str,
    thresholds: &QualityThresholds,
) -> QualitySplit<'a> {
    let mut split = QualitySplit::default();
    for r in records {
        match r.rating(aspect) {
            Some(v) => match thresholds.classify(v) {
                QualityBand::Low => split.low.push(r),
                QualityBand::Moderate => split.moderate.push(r),
                QualityBand::High => split.high.push(r),
            },
            None => split.excluded += 1,
        }
    }
    split
}

#[cfg(test)]
mod tests {
    use super::*;

    fn recs(ratings: &[f64]) -> Vec<Record> {
        ratings
            .iter()
            .enumerate()
            .map(|(i, &v)| Record::new("d", i.to_string(), "a", "x").with_rating("F", v))
            .collect()
    }

    #[test]
    fn three_way_split() {
        let records = recs(&[1.0, 3.0, 4.5]);
        let s = split_quality(&records, "F", &QualityThresholds::default());
        assert_eq!(s.low.len(), 1);
        assert_eq!(s.moderate.len(), 1);
        assert_eq!(s.high.len(), 1);
        assert_eq!(s.high[0].rating("F"), Some(4.5));
    }

    #[test]
    fn boundaries() {
        let t = QualityThresholds::default();
        assert_eq!(t.classify(2.999999999), QualityBand::Low);
        assert_eq!(t.classify(3.0), QualityBand::Moderate);
        assert_eq!(t.classify(3.0 + 1e-12), QualityBand::Moderate);
        assert_eq!(t.classify(3.000000002), QualityBand::High);
    }

    #[test]
    fn all_moderate_and_exclusions() {
        let mut records = recs(&[3.0, 3.0, 3.0]);
        records.push(Record::new("d", "x", "a", "x"));
        let s = split_quality(&records, "F", &QualityThresholds::default());
        assert_eq!(s.moderate.len(), 3);
        assert!(s.low.is_empty() && s.high.is_empty());
        assert_eq!(s.excluded, 1);
    }

    #[test]
    fn wide_moderate_band() {
        let t = QualityThresholds {
            low_below: 2.5,
            high_above: 3.5,
        };
        assert_eq!(t.classify(2.4), QualityBand::Low);
        assert_eq!(t.classify(3.2), QualityBand::Moderate);
        assert_eq!(t.classify(3.6), QualityBand::High);
    }
}
