use std::collections::BTreeSet;

use proptest::prelude::*;

use sememevec::embedding::EmbeddingSpace;
use sememevec::eval::{decode_spans, encode_spans, eval_similarity, five_fold_indices, Judgement};
use sememevec::tagger::{repair_bi, LabelScheme};

#[test]
fn rank_aligned_judgements_give_perfect_correlation() {
    let mut space = EmbeddingSpace::new("s", 2);
    let mut judgements = Vec::new();
    space.insert("base", &[1.0, 0.0]);
    for i in 0..8 {
        let angle = i as f64 * 0.2;
        let w = format!("w{i}");
        space.insert(w.as_str(), &[angle.cos(), angle.sin()]);
        judgements.push(Judgement {
            word_a: "base".into(),
            word_b: w,
            score: 10.0 - i as f64,
        });
    }
    judgements.push(Judgement {
        word_a: "base".into(),
        word_b: "missing".into(),
        score: 1.0,
    });
    let report = eval_similarity(&space, &judgements).unwrap();
    assert!((report.spearman - 1.0).abs() < 1e-12);
    assert_eq!(report.scored, 8);
    assert!((report.coverage - 8.0 / 9.0).abs() < 1e-12);
}

fn labels() -> impl Strategy<Value = Vec<String>> {
    let scheme = LabelScheme::new(&["Date", "Set"]);
    prop::collection::vec(0usize..5, 0..25)
        .prop_map(move |ix| ix.into_iter().map(|i| scheme.label(i).to_owned()).collect())
}

proptest! {
    #[test]
    fn encode_inverts_decode_after_repair(mut l in labels()) {
        repair_bi(&mut l);
        let spans = decode_spans(&l, 0);
        prop_assert_eq!(encode_spans(&spans, l.len()), l);
    }

    #[test]
    fn decoding_is_consistent_with_repair(l in labels()) {
        let mut repaired = l.clone();
        repair_bi(&mut repaired);
        let a: BTreeSet<_> = decode_spans(&l, 0).into_iter().collect();
        let b: BTreeSet<_> = decode_spans(&repaired, 0).into_iter().collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn folds_partition_indices(n in 5usize..300, seed: u64) {
        let folds = five_fold_indices(n, seed).unwrap();
        prop_assert_eq!(folds.len(), 5);
        let mut seen = vec![0usize; n];
        for f in &folds {
            for &i in &f.test {
                seen[i] += 1;
            }
            prop_assert_eq!(f.train.len() + f.test.len(), n);
            let test: BTreeSet<_> = f.test.iter().collect();
            prop_assert!(f.train.iter().all(|i| !test.contains(i)));
            prop_assert!(f.test.len() >= n / 5 && f.test.len() <= n / 5 + 1);
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
        prop_assert_eq!(folds, five_fold_indices(n, seed).unwrap());
    }
}

#[test]
fn too_few_items_for_five_folds() {
    assert!(five_fold_indices(4, 1).is_err());
}
