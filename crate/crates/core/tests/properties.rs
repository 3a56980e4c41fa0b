use proptest::prelude::*;

use metricheck::checklist::{run_checklist, win_matrix, ChecklistParams, Pairing, ScoreKey, WinTiePolicy};
use metricheck::corpus::{aggregate_annotators, assemble, read_jsonl, system_summaries, write_jsonl, Aggregation, DatasetSpec, Record, Task};
use metricheck::preference::{edit_distance, linearize, preference_order, preference_similarity, TiePolicy, UtilityTable};
use metricheck::report::{render, OutputFormat};
use metricheck::stats::ks_distance;
use metricheck::textmetrics::{bleu, rouge_n, Smoothing};

fn sample() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![(0i32..10).prop_map(f64::from), -1e3f64..1e3], 1..40)
}

fn symbols() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..4, 0..8)
}

fn tokens() -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d", "e", "f"]).prop_map(String::from), 1..20)
}

/// Records for one dataset: unique (sample, system) keys, integer-ish ratings.
fn corpus() -> impl Strategy<Value = Vec<Record>> {
    (2usize..5, 2usize..8).prop_flat_map(|(systems, samples)| {
        prop::collection::vec((1u8..=5, 1u8..=5, 0u8..=40), systems * samples).prop_map(move |cells| {
            cells
                .into_iter()
                .enumerate()
                .map(|(i, (fl, co, m))| {
                    let (sample, system) = (i / systems, i % systems);
                    Record::new("d", format!("s{sample}"), format!("sys{system}"), "out")
                        .with_rating("Fluency", f64::from(fl))
                        .with_rating("Coherence", f64::from(co))
                        .with_metric("m", f64::from(m) / 8.0)
                        .with_pair_group(format!("s{sample}"))
                })
                .collect()
        })
    })
}

proptest! {
    #[test]
    fn ks_symmetric_and_bounded(a in sample(), b in sample()) {
        let d = ks_distance(&a, &b).unwrap().d;
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert_eq!(d, ks_distance(&b, &a).unwrap().d);
        prop_assert_eq!(ks_distance(&a, &a).unwrap().d, 0.0);
    }

    #[test]
    fn edit_distance_is_a_metric(a in symbols(), b in symbols(), c in symbols()) {
        let ab = edit_distance(&a, &b);
        prop_assert_eq!(ab, edit_distance(&b, &a));
        prop_assert_eq!(ab == 0, a == b);
        prop_assert!(ab <= edit_distance(&a, &c) + edit_distance(&c, &b));
        prop_assert!(ab >= a.len().abs_diff(b.len()));
        prop_assert!(ab <= a.len().max(b.len()));
    }

    #[test]
    fn similarity_symmetric_and_at_most_one(a in symbols(), b in symbols()) {
        prop_assume!(!a.is_empty() || !b.is_empty());
        let ab = preference_similarity(&a, &b).unwrap();
        let ba = preference_similarity(&b, &a).unwrap();
        prop_assert_eq!(ab.s, ba.s);
        prop_assert!(ab.s <= 1.0);
        prop_assert_eq!(ab.s == 1.0, a == b);
    }

    #[test]
    fn preference_order_ignores_monotone_rescaling(utils in prop::collection::vec(0i32..10, 1..8)) {
        let table: UtilityTable = utils.iter().enumerate().map(|(i, &u)| (format!("s{i}"), f64::from(u))).collect();
        let scaled: UtilityTable = utils.iter().enumerate().rev().map(|(i, &u)| (format!("s{i}"), 2.5 * f64::from(u) + 7.0)).collect();
        let a = preference_order(&table, 1e-9);
        let b = preference_order(&scaled, 1e-9);
        prop_assert_eq!(&a.tie_groups, &b.tie_groups);
        prop_assert_eq!(linearize(&a, TiePolicy::LabelAscending), linearize(&b, TiePolicy::LabelAscending));
    }

    #[test]
    fn bleu_bounded_and_label_free(h in tokens(), r in tokens()) {
        let refs = vec![r.clone()];
        let score = bleu(&h, &refs, 4, Smoothing::AddOne).unwrap();
        prop_assert!((0.0..=1.0).contains(&score));
        let relabel = |v: &[String]| v.iter().map(|t| format!("w_{t}")).collect::<Vec<_>>();
        let again = bleu(&relabel(&h), &[relabel(&r)], 4, Smoothing::AddOne).unwrap();
        prop_assert_eq!(score, again);
    }

    #[test]
    fn rouge_bounded_and_label_free(h in tokens(), r in tokens(), n in 1usize..3) {
        let s = rouge_n(&h, std::slice::from_ref(&r), n).unwrap();
        for v in [s.precision, s.recall, s.f1] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
        let relabel = |v: &[String]| v.iter().map(|t| t.to_uppercase()).collect::<Vec<_>>();
        let again = rouge_n(&relabel(&h), &[relabel(&r)], n).unwrap();
        prop_assert_eq!(s, again);
    }

    #[test]
    fn rouge_recall_never_drops_when_hypothesis_grows(h in tokens(), extra in tokens(), r in tokens()) {
        let refs = vec![r];
        let before = rouge_n(&h, &refs, 1).unwrap().recall;
        let longer: Vec<String> = h.iter().chain(&extra).cloned().collect();
        let after = rouge_n(&longer, &refs, 1).unwrap().recall;
        prop_assert!(after >= before);
    }

    #[test]
    fn aggregation_is_idempotent(records in corpus(), median in any::<bool>()) {
        let mut doubled = records.clone();
        for r in &records {
            let mut copy = r.clone();
            for v in copy.human_ratings.values_mut() {
                *v = 6.0 - *v;
            }
            doubled.push(copy);
        }
        let policy = if median { Aggregation::Median } else { Aggregation::Mean };
        let once = aggregate_annotators(&doubled, policy).unwrap();
        let twice = aggregate_annotators(&once, policy).unwrap();
        prop_assert_eq!(once.len(), records.len());
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn summaries_ignore_record_order(records in corpus(), seed in any::<u64>()) {
        let mut shuffled = records.clone();
        let mut state = seed;
        for i in (1..shuffled.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (state >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(system_summaries(&records), system_summaries(&shuffled));
    }

    #[test]
    fn jsonl_round_trip(records in corpus(), metric in prop::num::f64::NORMAL, text in "\\PC{0,20}") {
        let mut records = records;
        records[0].metric_scores.insert("raw".into(), metric);
        records[0].output_text = text;
        records[0].references = vec!["ref one".into(), String::new()];
        let mut buf = Vec::new();
        write_jsonl(&records, &mut buf).unwrap();
        let loaded = read_jsonl(buf.as_slice()).unwrap();
        prop_assert_eq!(loaded.records, records);
    }

    #[test]
    fn win_cells_complement(records in corpus(), cross in any::<bool>()) {
        let pairing = if cross { Pairing::CrossProduct } else { Pairing::ByPairGroup };
        let m = win_matrix(&records, &ScoreKey::metric("m"), pairing, WinTiePolicy::Half).unwrap();
        for i in 0..m.systems.len() {
            for j in 0..m.systems.len() {
                if i != j {
                    let (a, b) = (m.wins[i][j], m.wins[j][i]);
                    prop_assert_eq!(a.is_some(), b.is_some());
                    if let (Some(a), Some(b)) = (a, b) {
                        prop_assert!((a + b - 1.0).abs() <= 1e-12);
                    }
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn checklist_ignores_record_order(records in corpus()) {
        let spec = DatasetSpec::new("d", Task::DiagGen).with_aspects(["Fluency", "Coherence"]);
        let mut reversed = records.clone();
        reversed.reverse();
        let params = ChecklistParams::default();
        let a = run_checklist(&assemble(std::slice::from_ref(&spec), records), &params);
        let b = run_checklist(&assemble(&[spec], reversed), &params);
        for format in OutputFormat::ALL {
            prop_assert_eq!(render(&a, format).unwrap(), render(&b, format).unwrap());
        }
    }
}
