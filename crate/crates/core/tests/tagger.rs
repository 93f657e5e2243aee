use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sememevec::corpus::TaggedSentence;
use sememevec::embedding::{EmbeddingSpace, VectorSource};
use sememevec::tagger::{
    assemble_features, repair_bi, train_logreg, FeatureSources, FeatureSpec, LabelScheme, LogisticRegression, Tag,
    TaggerModel, TrainParams,
};

fn two_blobs(n: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let y = i % 2;
            let centre = if y == 0 { -2.0 } else { 2.0 };
            (vec![centre + rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)], y)
        })
        .unzip()
}

fn params(lambda: f64) -> TrainParams {
    TrainParams {
        lambda,
        tol: 1e-8,
        max_iter: 400,
    }
}

#[test]
fn separable_data_is_fit_exactly() {
    let (xs, ys) = two_blobs(60, 1);
    let (model, report) = train_logreg(&xs, &ys, 2, &params(1e-4)).unwrap();
    let correct = xs.iter().zip(&ys).filter(|(x, &y)| model.predict(x).0 == y).count();
    assert_eq!(correct, xs.len());
    assert!(report.iterations > 0);
}

#[test]
fn loss_never_increases() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let xs: Vec<Vec<f64>> = (0..80).map(|_| (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    let ys: Vec<usize> = (0..80).map(|_| rng.gen_range(0..4)).collect();
    let (_, report) = train_logreg(&xs, &ys, 4, &params(0.05)).unwrap();
    assert!(report.losses.len() > 2);
    for w in report.losses.windows(2) {
        assert!(w[1] <= w[0], "{} -> {}", w[0], w[1]);
    }
}

#[test]
fn regularisation_shrinks_weights() {
    let (xs, ys) = two_blobs(40, 3);
    let norm = |lambda| train_logreg(&xs, &ys, 2, &params(lambda)).unwrap().0.weight_norm_sq();
    assert!(norm(1.0) < norm(1e-6));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn probabilities_sum_to_one(
        params in prop::collection::vec(-20.0f64..20.0, 3 * 5),
        x in prop::collection::vec(-5.0f64..5.0, 4),
        scale in 0.01f64..100.0,
    ) {
        let m = LogisticRegression::from_flat(3, 4, &params);
        let (label, p) = m.predict(&x);
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        let scaled: Vec<f64> = params.iter().map(|v| v * scale).collect();
        let (scaled_label, _) = LogisticRegression::from_flat(3, 4, &scaled).predict(&x);
        let logits: Vec<f64> = (0..3).map(|c| m.weight_row(c).iter().zip(&x).map(|(w, v)| w * v).sum::<f64>() + m.bias()[c]).collect();
        let gap = {
            let mut s = logits.clone();
            s.sort_by(|a, b| b.total_cmp(a));
            s[0] - s[1]
        };
        if gap > 1e-9 {
            prop_assert_eq!(label, scaled_label);
        }
    }
}

proptest! {
    #[test]
    fn feature_length_matches_spec(
        radius in 0usize..4,
        context: bool,
        hownet: bool,
        last_char: bool,
        len in 1usize..6,
        dim in 1usize..5,
    ) {
        let mut space = EmbeddingSpace::new("s", dim);
        space.insert("日", &vec![1.0; dim]);
        space.insert("三日", &vec![0.5; dim]);
        let sources = FeatureSources {
            context: Some(&space as &dyn VectorSource),
            hownet: Some(&space as &dyn VectorSource),
            chars: Some(&space as &dyn VectorSource),
        };
        let spec = FeatureSpec { radius, context, hownet, last_char, dim };
        let sentence: Vec<&str> = ["三日", "在", "日", "x", "三日", "y"][..len].to_vec();
        for i in 0..len {
            let expected = (2 * radius + 1) * dim * usize::from(context) + dim * usize::from(hownet) + dim * usize::from(last_char);
            prop_assert_eq!(assemble_features(&sentence, i, &sources, &spec).len(), expected);
            prop_assert_eq!(spec.feature_dim(), expected);
        }
    }

    #[test]
    fn repair_leaves_no_orphan_inside(raw in prop::collection::vec(0usize..5, 0..30)) {
        let scheme = LabelScheme::new(&["Date", "Time"]);
        let mut labels: Vec<String> = raw.iter().map(|&i| scheme.label(i).to_owned()).collect();
        let before = labels.clone();
        repair_bi(&mut labels);
        for i in 0..labels.len() {
            if let Some(Tag::Inside(t)) = Tag::parse(&labels[i]) {
                prop_assert!(i > 0);
                let prev = Tag::parse(&labels[i - 1]).unwrap();
                prop_assert_eq!(prev.entity_type(), Some(t));
            }
            if Tag::parse(&before[i]) == Some(Tag::Outside) || matches!(Tag::parse(&before[i]), Some(Tag::Begin(_))) {
                prop_assert_eq!(&labels[i], &before[i]);
            }
        }
    }
}

#[test]
fn trained_model_survives_save_and_load() {
    let mut space = EmbeddingSpace::new("combined", 3);
    space.insert("三日", &[1.0, 0.2, -0.3]);
    space.insert("四日", &[0.9, 0.1, -0.2]);
    space.insert("政部", &[-0.8, 0.5, 0.4]);
    space.insert("在", &[0.1, -0.9, 0.3]);
    let sentences: Vec<TaggedSentence> = [
        (vec!["在", "三日"], vec!["O", "B-Date"]),
        (vec!["政部", "四日"], vec!["O", "B-Date"]),
        (vec!["四日", "政部", "在"], vec!["B-Date", "O", "O"]),
    ]
    .into_iter()
    .map(|(t, l)| TaggedSentence::new(t.into_iter().map(String::from).collect(), l.into_iter().map(String::from).collect()))
    .collect();
    let sources = FeatureSources {
        context: Some(&space),
        hownet: None,
        chars: None,
    };
    let spec = FeatureSpec {
        radius: 1,
        context: true,
        hownet: false,
        last_char: false,
        dim: 3,
    };
    let scheme = LabelScheme::infer(&sentences).unwrap();
    let (model, _) = TaggerModel::train(&sentences, scheme, spec, &sources, &params(1e-3)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tagger.model");
    model.save(&path).unwrap();
    let back = TaggerModel::load(&path).unwrap();
    assert_eq!(back.to_text(), model.to_text());
    for s in &sentences {
        assert_eq!(back.tag_sentence(&s.tokens, &sources), s.labels);
    }
}
