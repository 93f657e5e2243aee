#![allow(dead_code)]

use std::collections::BTreeSet;

use sememevec::corpus::{TaggedSentence, Vocabulary};
use sememevec::embedding::{corpus_to_characters, train_embeddings, EmbeddingSpace, TrainConfig, VectorSource};
use sememevec::eval::{decode_spans, five_fold_indices, span_prf, Prf, Span};
use sememevec::morphsim::{build_pairs, train_perceptron, SimilarityModel};
use sememevec::revise::{build_combined_space, CombinedSpaceConfig};
use sememevec::sememe::{build_sememe_space, HownetSource};
use sememevec::synth::{temporal_fixture, TemporalConfig, TemporalFixture};
use sememevec::tagger::{FeatureSources, FeatureSpec, LabelScheme, TaggerModel, TrainParams};

pub const PIPELINE_DIM: usize = 20;

pub fn pipeline_train_config(seed: u64) -> TrainConfig {
    TrainConfig {
        dim: PIPELINE_DIM,
        window: 3,
        negative: 5,
        epochs: 5,
        seed,
        ..TrainConfig::default()
    }
}

pub fn tagger_params() -> TrainParams {
    TrainParams {
        lambda: 1e-3,
        tol: 1e-6,
        max_iter: 300,
    }
}

pub struct Spaces {
    pub original: EmbeddingSpace,
    pub chars: EmbeddingSpace,
    pub sememe: EmbeddingSpace,
    pub combined: EmbeddingSpace,
    pub similarity: SimilarityModel,
}

pub fn build_spaces(fixture: &TemporalFixture, seed: u64) -> Spaces {
    let config = pipeline_train_config(seed);
    let original = train_embeddings(&fixture.embedding_corpus, &config).unwrap();
    let chars = train_embeddings(&corpus_to_characters(&fixture.embedding_corpus), &config).unwrap();
    let sememe = build_sememe_space(&fixture.embedding_corpus, &fixture.lexicon, &config, 3).unwrap();
    let pairs = build_pairs(&fixture.thesaurus, 400, 400, seed).unwrap();
    let similarity = train_perceptron(&pairs, 50, 0.1);

    let vocab = Vocabulary::build(&fixture.embedding_corpus, 1);
    let mut targets: BTreeSet<&str> = vocab.tokens().iter().map(String::as_str).collect();
    targets.extend(fixture.tagged.iter().flat_map(|s| s.tokens.iter().map(String::as_str)));
    let combined = build_combined_space(
        targets,
        &original,
        &similarity,
        &vocab,
        &CombinedSpaceConfig::default(),
    );
    Spaces {
        original,
        chars,
        sememe,
        combined,
        similarity,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Final,
    CharOnly,
    Word2vecOnly,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Final => "final",
            Variant::CharOnly => "char-only",
            Variant::Word2vecOnly => "word2vec-only",
        }
    }
}

pub struct VariantResult {
    pub prf: Prf,
    /// Model text of every fold, in fold order.
    pub models: Vec<String>,
    pub predictions: Vec<Vec<String>>,
}

pub fn cross_validate(fixture: &TemporalFixture, spaces: &Spaces, variant: Variant, seed: u64) -> VariantResult {
    let hownet = HownetSource {
        lexicon: &fixture.lexicon,
        space: &spaces.sememe,
    };
    let (context, with_hownet, with_char): (&dyn VectorSource, bool, bool) = match variant {
        Variant::Final => (&spaces.combined, true, true),
        Variant::CharOnly => (&spaces.original, false, true),
        Variant::Word2vecOnly => (&spaces.original, false, false),
    };
    let sources = FeatureSources {
        context: Some(context),
        hownet: with_hownet.then_some(&hownet as &dyn VectorSource),
        chars: with_char.then_some(&spaces.chars as &dyn VectorSource),
    };
    let spec = FeatureSpec {
        hownet: with_hownet,
        last_char: with_char,
        ..FeatureSpec::full(PIPELINE_DIM)
    };
    let scheme = LabelScheme::infer(&fixture.tagged).unwrap();

    let n = fixture.tagged.len();
    let mut predictions = vec![Vec::new(); n];
    let mut models = Vec::new();
    for fold in five_fold_indices(n, seed).unwrap() {
        let train: Vec<TaggedSentence> = fold.train.iter().map(|&i| fixture.tagged[i].clone()).collect();
        let (model, _) = TaggerModel::train(&train, scheme.clone(), spec, &sources, &tagger_params()).unwrap();
        for &i in &fold.test {
            predictions[i] = model.tag_sentence(&fixture.tagged[i].tokens, &sources);
        }
        models.push(model.to_text());
    }

    let gold: BTreeSet<Span> = fixture
        .tagged
        .iter()
        .enumerate()
        .flat_map(|(i, s)| decode_spans(&s.labels, i))
        .collect();
    let pred: BTreeSet<Span> = predictions
        .iter()
        .enumerate()
        .flat_map(|(i, l)| decode_spans(l, i))
        .collect();
    VariantResult {
        prf: span_prf(&gold, &pred),
        models,
        predictions,
    }
}

pub struct PipelineRun {
    pub fixture: TemporalFixture,
    pub spaces: Spaces,
    pub results: Vec<(Variant, VariantResult)>,
}

pub fn run_temporal_pipeline(seed: u64) -> PipelineRun {
    let fixture = temporal_fixture(&TemporalConfig {
        seed,
        ..TemporalConfig::default()
    });
    let spaces = build_spaces(&fixture, seed);
    let results = [Variant::Final, Variant::CharOnly, Variant::Word2vecOnly]
        .into_iter()
        .map(|v| (v, cross_validate(&fixture, &spaces, v, seed)))
        .collect();
    PipelineRun {
        fixture,
        spaces,
        results,
    }
}

impl PipelineRun {
    pub fn prf(&self, variant: Variant) -> Prf {
        self.results.iter().find(|(v, _)| *v == variant).unwrap().1.prf
    }

    /// Every artifact in serialized form, for byte comparison.
    pub fn artifacts(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("original".to_owned(), self.spaces.original.to_text()),
            ("chars".to_owned(), self.spaces.chars.to_text()),
            ("sememe".to_owned(), self.spaces.sememe.to_text()),
            ("combined".to_owned(), self.spaces.combined.to_text()),
            ("similarity".to_owned(), self.spaces.similarity.to_text()),
        ];
        for (v, r) in &self.results {
            for (fold, m) in r.models.iter().enumerate() {
                out.push((format!("{}-fold{fold}", v.name()), m.clone()));
            }
            out.push((format!("{}-metrics", v.name()), r.prf.to_string()));
        }
        out
    }
}
