use serde::{Deserialize, Serialize};

use super::{split_quality, Outcome, QualityBand, QualitySplit, QualityThresholds};
use crate::corpus::Record;
use crate::error::{Error, Result};
use crate::preference::{
    linearize, preference_order, preference_similarity, SimilarityScore, TiePolicy, UtilityTable,
};
use crate::stats::{self, ks_between, KsReport};

/// KS distances between the metric-score distributions of quality bands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AspectKs {
    pub low_high: Outcome<KsReport>,
    pub low_moderate: Outcome<KsReport>,
    pub high_moderate: Outcome<KsReport>,
    /// Records without the aspect.
    pub excluded: usize,
}

impl AspectKs {
    pub fn comparisons(&self) -> [(&'static str, &Outcome<KsReport>); 3] {
        [
            ("Lo-Hi", &self.low_high),
            ("Lo-Mod", &self.low_moderate),
            ("Hi-Mod", &self.high_moderate),
        ]
    }
}

const MIN_BAND_SCORES: usize = 2;

fn band_scores(split: &QualitySplit<'_>, band: QualityBand, metric: &str) -> Vec<f64> {
    split.band(band).iter().filter_map(|r| r.metric(metric)).collect()
}

fn require_metric(records: &[Record], metric: &str) -> Result<()> {
    if records.iter().any(|r| r.metric(metric).is_some()) {
        Ok(())
    } else {
        Err(Error::MissingMetric(metric.to_string()))
    }
}

pub fn aspect_level_ks(
    records: &[Record],
    aspect: &str,
    metric: &str,
    thresholds: &QualityThresholds,
) -> Result<AspectKs> {
    require_metric(records, metric)?;
    let split = split_quality(records, aspect, thresholds);
    let compare = |a: QualityBand, b: QualityBand| -> Outcome<KsReport> {
        let sa = band_scores(&split, a, metric);
        let sb = band_scores(&split, b, metric);
        for (band, scores) in [(a, &sa), (b, &sb)] {
            if scores.len() < MIN_BAND_SCORES {
                return Outcome::skipped(format!(
                    "{} band has {} score(s), need {MIN_BAND_SCORES}",
                    band.label(),
                    scores.len()
                ));
            }
        }
        ks_between(a.label(), &sa, b.label(), &sb).into()
    };
    Ok(AspectKs {
        low_high: compare(QualityBand::Low, QualityBand::High),
        low_moderate: compare(QualityBand::Low, QualityBand::Moderate),
        high_moderate: compare(QualityBand::High, QualityBand::Moderate),
        excluded: split.excluded,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandPreference {
    pub similarity: SimilarityScore,
    /// Bands in ascending order of mean metric score.
    pub metric_sequence: Vec<String>,
    pub band_means: [f64; 3],
    pub tied: bool,
}

/// Rank the three bands by mean metric score and compare with the human
/// order Low ≺ Moderate ≺ High.
pub fn aspect_level_preference(
    records: &[Record],
    aspect: &str,
    metric: &str,
    thresholds: &QualityThresholds,
    epsilon: f64,
) -> Result<Outcome<BandPreference>> {
    require_metric(records, metric)?;
    let split = split_quality(records, aspect, thresholds);
    let mut table = UtilityTable::new(metric);
    let mut band_means = [0.0; 3];
    for (i, band) in QualityBand::ALL.into_iter().enumerate() {
        let mut scores = band_scores(&split, band, metric);
        if scores.is_empty() {
            return Ok(Outcome::skipped(format!("{} band is empty", band.label())));
        }
        band_means[i] = stats::mean(&mut scores);
        table.utilities.insert(band.label().to_string(), band_means[i]);
    }
    let order = preference_order(&table, epsilon);
    let metric_sequence = linearize(&order, TiePolicy::LabelAscending);
    let human: Vec<String> = QualityBand::ALL.iter().map(|b| b.label().to_string()).collect();
    Ok(Outcome::Computed(BandPreference {
        similarity: preference_similarity(&metric_sequence, &human)?,
        metric_sequence,
        band_means,
        tied: order.has_ties(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(pairs: &[(f64, f64)]) -> Vec<Record> {
        pairs
            .iter()
            .enumerate()
            .map(|(i, &(h, m))| {
                Record::new("d", i.to_string(), "s", "x")
                    .with_rating("F", h)
                    .with_metric("m", m)
            })
            .collect()
    }

    #[test]
    fn metric_equal_to_rating_separates_bands() {
        let records = corpus(&[(1.0, 1.0), (2.0, 2.0), (3.0, 3.0), (3.0, 3.0), (4.0, 4.0), (5.0, 5.0)]);
        let ks = aspect_level_ks(&records, "F", "m", &QualityThresholds::default()).unwrap();
        assert_eq!(ks.low_high.computed().unwrap().d, 1.0);
        assert_eq!(ks.low_moderate.computed().unwrap().d, 1.0);
        assert_eq!(ks.high_moderate.computed().unwrap().d, 1.0);
    }

    #[test]
    fn constant_metric_gives_zero() {
        let records = corpus(&[(1.0, 0.5), (2.0, 0.5), (3.0, 0.5), (3.0, 0.5), (4.0, 0.5), (5.0, 0.5)]);
        let ks = aspect_level_ks(&records, "F", "m", &QualityThresholds::default()).unwrap();
        for (_, o) in ks.comparisons() {
            assert_eq!(o.computed().unwrap().d, 0.0);
        }
    }

    #[test]
    fn overlapping_bands() {
        let records = corpus(&[
            (1.0, 0.1),
            (1.0, 0.2),
            (2.0, 0.3),
            (2.0, 0.4),
            (4.0, 0.3),
            (4.0, 0.4),
            (5.0, 0.5),
            (5.0, 0.6),
        ]);
        let ks = aspect_level_ks(&records, "F", "m", &QualityThresholds::default()).unwrap();
        assert_eq!(ks.low_high.computed().unwrap().d, 0.5);
        assert!(ks.low_moderate.skip_reason().unwrap().contains("Moderate"));
    }

    #[test]
    fn absent_metric_is_an_error() {
        let records = corpus(&[(1.0, 0.1)]);
        let err = aspect_level_ks(&records, "F", "nope", &QualityThresholds::default()).unwrap_err();
        assert!(matches!(err, Error::MissingMetric(ref m) if m == "nope"));
    }

    #[test]
    fn band_order_agreement() {
        let t = QualityThresholds::default();
        let records = corpus(&[(1.0, 0.1), (3.0, 0.5), (5.0, 0.9)]);
        let p = aspect_level_preference(&records, "F", "m", &t, 1e-9).unwrap();
        assert_eq!(p.computed().unwrap().similarity.s, 1.0);

        let records = corpus(&[(1.0, 0.9), (3.0, 0.5), (5.0, 0.1)]);
        let p = aspect_level_preference(&records, "F", "m", &t, 1e-9).unwrap();
        let p = p.computed().unwrap();
        assert_eq!(p.metric_sequence, ["High", "Moderate", "Low"]);
        assert_eq!(p.similarity.lev, 2);
        assert!((p.similarity.s - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn tied_bands_are_flagged() {
        let t = QualityThresholds::default();
        let records = corpus(&[(1.0, 0.5), (3.0, 0.5), (5.0, 0.9)]);
        let p = aspect_level_preference(&records, "F", "m", &t, 1e-9).unwrap();
        let p = p.computed().unwrap();
        assert!(p.tied);
        assert_eq!(p.metric_sequence, ["Low", "Moderate", "High"]);
    }

    #[test]
    fn empty_band_skips() {
        let t = QualityThresholds::default();
        let records = corpus(&[(1.0, 0.5), (5.0, 0.9)]);
        let p = aspect_level_preference(&records, "F", "m", &t, 1e-9).unwrap();
        assert!(p.skip_reason().is_some());
    }
}
