use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sememevec::corpus::{Corpus, Vocabulary};
use sememevec::morphsim::{
    build_pairs, char_cos_sim, edit_sim, features, lcs_sim, top_k_similar, word_similarity, SimilarityModel,
    SynonymThesaurus,
};
use sememevec::synth::{temporal_fixture, TemporalConfig};

fn word() -> impl Strategy<Value = String> {
    prop::collection::vec(any::<char>(), 1..7).prop_map(|c| c.into_iter().collect())
}

proptest! {
    #[test]
    fn measures_are_symmetric_bounded_and_reflexive(a in word(), b in word()) {
        for f in [lcs_sim, edit_sim, char_cos_sim] {
            let x = f(&a, &b);
            prop_assert_eq!(x, f(&b, &a));
            prop_assert!((0.0..=1.0).contains(&x));
            prop_assert_eq!(f(&a, &a), 1.0);
        }
    }

    #[test]
    fn similarity_is_symmetric_and_monotone(a in word(), b in word(), w in prop::array::uniform3(0.0f64..5.0), bias in -3.0f64..3.0) {
        let m = SimilarityModel { w_lcs: w[0], w_edit: w[1], w_cos: w[2], bias };
        let s = word_similarity(&m, &a, &b);
        prop_assert_eq!(s, word_similarity(&m, &b, &a));
        prop_assert!((0.0..=1.0).contains(&s));
        let x = features(&a, &b);
        let raised = m.activation(&[x[0] + 0.1, x[1], x[2]]);
        prop_assert!(raised >= m.activation(&x));
    }
}

#[test]
fn zero_model_scores_half() {
    assert_eq!(word_similarity(&SimilarityModel::default(), "三日", "四月"), 0.5);
}

#[test]
fn top_k_equals_full_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    let alphabet: Vec<char> = "日月年人部市三四五".chars().collect();
    let words: Vec<Vec<String>> = (0..200)
        .map(|_| vec![(0..rng.gen_range(1..4)).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect()])
        .collect();
    let vocab = Vocabulary::build(&Corpus::new(words), 1);
    let model = SimilarityModel {
        w_lcs: 1.3,
        w_edit: 0.7,
        w_cos: 0.9,
        bias: -1.0,
    };
    for query in ["三日", "五月年", "部", "四市人"] {
        let mut scan: Vec<(String, f64)> = vocab
            .tokens()
            .iter()
            .filter(|w| w.as_str() != query)
            .map(|w| (w.clone(), word_similarity(&model, query, w)))
            .collect();
        scan.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        for k in [1, 5, 17] {
            assert_eq!(top_k_similar(&model, query, &vocab, k), scan[..k.min(scan.len())].to_vec());
        }
    }
}

#[test]
fn negative_pairs_are_never_synonyms() {
    let f = temporal_fixture(&TemporalConfig {
        tagged_sentences: 1,
        embedding_sentences: 1,
        ..TemporalConfig::default()
    });
    let pairs = build_pairs(&f.thesaurus, 300, 300, 12).unwrap();
    assert_eq!(pairs.iter().filter(|p| p.label == 1).count(), 300);
    for p in &pairs {
        assert_ne!(p.word_a, p.word_b);
        let same = f
            .thesaurus
            .categories()
            .values()
            .any(|c| c.contains(&p.word_a) && c.contains(&p.word_b));
        assert_eq!(same, p.label == 1, "{p:?}");
    }
    assert_eq!(pairs, build_pairs(&f.thesaurus, 300, 300, 12).unwrap());
}

#[test]
fn singleton_categories_cannot_give_positives() {
    let mut t = SynonymThesaurus::new();
    t.add_category("c1", ["a"]);
    t.add_category("c2", ["b"]);
    let err = build_pairs(&t, 1, 1, 0).unwrap_err().to_string();
    assert!(err.contains("positive"), "{err}");
}
