//! Seeded corpus generator for tests, benches and demos.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{DatasetSpec, Domain, Record, Task};

const WORDS: &[&str] = &[
    "the", "a", "model", "system", "report", "said", "new", "study", "people", "city", "data", "found",
    "more", "than", "year", "after", "first", "time", "water", "school", "game", "team", "plan", "market",
];

/// How a generated metric relates to the human ratings.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricShape {
    /// Equal to the rating of the named aspect.
    Copy(String),
    /// Rating of the named aspect, negated.
    Reversed(String),
    /// Mean rating plus uniform noise of the given half-width.
    Noisy(f64),
}

#[derive(Debug, Clone)]
pub struct SyntheticConfig {
    pub dataset_id: String,
    pub task: Task,
    pub systems: usize,
    pub samples: usize,
    pub aspects: Vec<String>,
    pub metrics: Vec<(String, MetricShape)>,
    /// Half-width of the uniform noise around each system's quality level.
    pub rating_noise: f64,
    pub with_text: bool,
    pub seed: u64,
}

impl SyntheticConfig {
    pub fn new(dataset_id: impl Into<String>, systems: usize, samples: usize, seed: u64) -> Self {
        SyntheticConfig {
            dataset_id: dataset_id.into(),
            task: Task::TextSumm,
            systems,
            samples,
            aspects: vec!["Coherence".into(), "Fluency".into(), "Relevance".into()],
            metrics: vec![
                ("metric_a".into(), MetricShape::Noisy(0.5)),
                ("metric_b".into(), MetricShape::Noisy(1.5)),
                ("metric_c".into(), MetricShape::Noisy(3.0)),
            ],
            rating_noise: 1.5,
            with_text: false,
            seed,
        }
    }

    pub fn with_aspects<I: IntoIterator<Item = S>, S: Into<String>>(mut self, aspects: I) -> Self {
        self.aspects = aspects.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_metrics<I: IntoIterator<Item = (S, MetricShape)>, S: Into<String>>(mut self, metrics: I) -> Self {
        self.metrics = metrics.into_iter().map(|(n, s)| (n.into(), s)).collect();
        self
    }

    pub fn with_rating_noise(mut self, noise: f64) -> Self {
        self.rating_noise = noise;
        self
    }

    pub fn with_text(mut self) -> Self {
        self.with_text = true;
        self
    }

    pub fn system_name(&self, index: usize) -> String {
        format!("sys{index:02}")
    }
}

fn sentence(rng: &mut ChaCha8Rng) -> String {
    let len = rng.gen_range(4..16);
    (0..len).map(|_| *WORDS.choose(rng).unwrap()).collect::<Vec<_>>().join(" ")
}

/// Build a dataset spec and its records. System `i` has a quality level
/// rising linearly from 1.5 to 4.5; ratings are that level plus noise,
/// clamped to the 1..5 scale.
pub fn generate(config: &SyntheticConfig) -> (DatasetSpec, Vec<Record>) {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut spec = DatasetSpec::new(config.dataset_id.clone(), config.task).with_aspects(config.aspects.clone());
    for (i, (name, _)) in config.metrics.iter().enumerate() {
        spec = spec.with_domain(name.clone(), Domain::ALL[i % Domain::ALL.len()]);
    }

    let span = config.systems.saturating_sub(1).max(1) as f64;
    let mut records = Vec::with_capacity(config.systems * config.samples);
    for sample in 0..config.samples {
        let sample_id = format!("s{sample:05}");
        let text = config.with_text.then(|| (sentence(&mut rng), sentence(&mut rng)));
        for sys in 0..config.systems {
            let level = 1.5 + 3.0 * sys as f64 / span;
            let output = if config.with_text { sentence(&mut rng) } else { format!("output {sample} {sys}") };
            let mut record = Record::new(config.dataset_id.clone(), sample_id.clone(), config.system_name(sys), output)
                .with_pair_group(sample_id.clone());
            if let Some((source, reference)) = &text {
                record.source_text = Some(source.clone());
                record.references = vec![reference.clone()];
            }
            let mut total = 0.0;
            for aspect in &config.aspects {
                let noise = rng.gen_range(-1.0..=1.0) * config.rating_noise;
                let rating = (level + noise).clamp(1.0, 5.0);
                total += rating;
                record = record.with_rating(aspect.clone(), rating);
            }
            let mean_rating = total / config.aspects.len().max(1) as f64;
            for (name, shape) in &config.metrics {
                let value = match shape {
                    MetricShape::Copy(aspect) => record.rating(aspect).unwrap_or(f64::NAN),
                    MetricShape::Reversed(aspect) => -record.rating(aspect).unwrap_or(f64::NAN),
                    MetricShape::Noisy(width) => mean_rating + rng.gen_range(-1.0..=1.0) * width,
                };
                if value.is_finite() {
                    record = record.with_metric(name.clone(), value);
                }
            }
            records.push(record);
        }
    }
    (spec, records)
}
