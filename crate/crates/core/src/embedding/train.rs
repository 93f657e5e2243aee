//! word2vec-style training with negative sampling.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::EmbeddingSpace;
use crate::corpus::{Corpus, Vocabulary};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Architecture {
    SkipGram,
    Cbow,
}

impl std::str::FromStr for Architecture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "skipgram" | "skip-gram" | "sg" => Ok(Architecture::SkipGram),
            "cbow" => Ok(Architecture::Cbow),
            _ => Err(Error::Config(format!("unknown architecture {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub dim: usize,
    /// Maximum context radius; each position samples its radius from `1..=window`.
    pub window: usize,
    pub negative: usize,
    pub epochs: usize,
    /// Initial learning rate, decayed linearly to `1e-4` of itself.
    pub learning_rate: f64,
    pub min_count: u64,
    /// Frequent-word subsampling threshold (`t` in word2vec); `None` disables it.
    pub subsample: Option<f64>,
    pub seed: u64,
    pub architecture: Architecture,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            dim: 100,
            window: 5,
            negative: 5,
            epochs: 5,
            learning_rate: 0.025,
            min_count: 1,
            subsample: None,
            seed: 1,
            architecture: Architecture::SkipGram,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        let positive = [
            ("dim", self.dim),
            ("window", self.window),
            ("negative", self.negative),
            ("epochs", self.epochs),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(Error::Config(format!("{name} must be positive")));
            }
        }
        if self.min_count == 0 {
            return Err(Error::Config("min_count must be positive".into()));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::Config("learning rate must be positive".into()));
        }
        if let Some(t) = self.subsample {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::Config("subsample threshold must be positive".into()));
            }
        }
        Ok(())
    }
}

const MIN_LR_FRACTION: f64 = 1e-4;

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `-ln σ(x)`, computed without overflow.
fn neg_log_sigmoid(x: f64) -> f64 {
    if x > 0.0 {
        (-x).exp().ln_1p()
    } else {
        -x + x.exp().ln_1p()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Negative-sampling loss `-ln σ(u·v⁺) - Σ ln σ(-u·v⁻)` for one input vector.
pub fn negative_sampling_loss(input: &[f64], positive: &[f64], negatives: &[&[f64]]) -> f64 {
    neg_log_sigmoid(dot(input, positive))
        + negatives
            .iter()
            .map(|n| neg_log_sigmoid(-dot(input, n)))
            .sum::<f64>()
}

/// One SGD step of the negative-sampling objective.
///
/// `outputs` is a row-major matrix of output vectors with `input.len()`
/// columns and `targets` lists `(row, is_positive)`. Each target row is
/// moved by `-lr · ∂loss/∂row` in place, and `-lr · ∂loss/∂input` is
/// accumulated into `input_delta` for the caller to apply. Returns the loss
/// at the parameters before the step.
pub fn negative_sampling_update(
    input: &[f64],
    input_delta: &mut [f64],
    outputs: &mut [f64],
    targets: &[(usize, bool)],
    lr: f64,
) -> f64 {
    let dim = input.len();
    let mut loss = 0.0;
    for &(row, positive) in targets {
        let out = &mut outputs[row * dim..(row + 1) * dim];
        let score = dot(input, out);
        let label = if positive { 1.0 } else { 0.0 };
        loss += if positive {
            neg_log_sigmoid(score)
        } else {
            neg_log_sigmoid(-score)
        };
        let g = lr * (label - sigmoid(score));
        for ((d, o), x) in input_delta.iter_mut().zip(out.iter_mut()).zip(input) {
            *d += g * *o;
            *o += g * x;
        }
    }
    loss
}

struct Trainer<'a> {
    config: &'a TrainConfig,
    vocab: Vocabulary,
    input: Vec<f64>,
    output: Vec<f64>,
    noise: WeightedIndex<f64>,
    keep_prob: Option<Vec<f64>>,
    rng: ChaCha8Rng,
}

impl<'a> Trainer<'a> {
    fn new(corpus: &Corpus, config: &'a TrainConfig) -> Result<Self> {
        config.validate()?;
        let vocab = Vocabulary::build(corpus, config.min_count);
        if vocab.is_empty() {
            return Err(Error::Config(
                "vocabulary is empty after applying min_count".into(),
            ));
        }
        let dim = config.dim;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let bound = 0.5 / dim as f64;
        let input = (0..vocab.len() * dim)
            .map(|_| rng.gen_range(-bound..bound))
            .collect();
        let output = vec![0.0; vocab.len() * dim];
        let noise = WeightedIndex::new(vocab.counts().iter().map(|&c| (c as f64).powf(0.75)))
            .expect("vocabulary counts are positive");

        let keep_prob = config.subsample.map(|t| {
            let total = vocab.total() as f64;
            vocab
                .counts()
                .iter()
                .map(|&c| {
                    let f = c as f64;
                    let tt = t * total;
                    (((f / tt).sqrt() + 1.0) * tt / f).min(1.0)
                })
                .collect()
        });

        Ok(Trainer {
            config,
            vocab,
            input,
            output,
            noise,
            keep_prob,
            rng,
        })
    }

    fn run(mut self, corpus: &Corpus) -> Result<EmbeddingSpace> {
        let dim = self.config.dim;
        let sentences: Vec<Vec<usize>> = corpus
            .sentences()
            .iter()
            .map(|s| s.iter().filter_map(|t| self.vocab.id(t)).collect())
            .collect();
        let words_per_epoch: usize = sentences.iter().map(Vec::len).sum();
        let total = (words_per_epoch * self.config.epochs) as f64 + 1.0;

        let mut processed = 0usize;
        let mut kept = Vec::new();
        let mut targets = Vec::with_capacity(self.config.negative + 1);
        let mut hidden = vec![0.0; dim];
        let mut delta = vec![0.0; dim];

        for epoch in 0..self.config.epochs {
            for sentence in &sentences {
                kept.clear();
                match &self.keep_prob {
                    Some(p) => {
                        for &w in sentence {
                            if self.rng.gen::<f64>() < p[w] {
                                kept.push(w);
                            }
                        }
                    }
                    None => kept.extend_from_slice(sentence),
                }
                for pos in 0..kept.len() {
                    let lr = self.config.learning_rate
                        * (1.0 - processed as f64 / total).max(MIN_LR_FRACTION);
                    let shrink = self.rng.gen_range(0..self.config.window);
                    let radius = self.config.window - shrink;
                    let lo = pos.saturating_sub(radius);
                    let hi = (pos + radius).min(kept.len() - 1);
                    match self.config.architecture {
                        Architecture::SkipGram => {
                            let center = kept[pos];
                            for (ctx, &word) in kept.iter().enumerate().take(hi + 1).skip(lo) {
                                if ctx == pos {
                                    continue;
                                }
                                hidden.copy_from_slice(self.row(center));
                                delta.iter_mut().for_each(|d| *d = 0.0);
                                self.sample_targets(word, &mut targets);
                                negative_sampling_update(
                                    &hidden,
                                    &mut delta,
                                    &mut self.output,
                                    &targets,
                                    lr,
                                );
                                add_into(self.row_mut(center), &delta);
                            }
                        }
                        Architecture::Cbow => {
                            let n_ctx = hi - lo;
                            if n_ctx == 0 {
                                continue;
                            }
                            hidden.iter_mut().for_each(|h| *h = 0.0);
                            for ctx in (lo..=hi).filter(|&c| c != pos) {
                                add_into(&mut hidden, &self.input[kept[ctx] * dim..(kept[ctx] + 1) * dim]);
                            }
                            hidden.iter_mut().for_each(|h| *h /= n_ctx as f64);
                            delta.iter_mut().for_each(|d| *d = 0.0);
                            self.sample_targets(kept[pos], &mut targets);
                            negative_sampling_update(
                                &hidden,
                                &mut delta,
                                &mut self.output,
                                &targets,
                                lr,
                            );
                            for ctx in (lo..=hi).filter(|&c| c != pos) {
                                let w = kept[ctx];
                                add_into(self.row_mut(w), &delta);
                            }
                        }
                    }
                }
                processed += sentence.len();
            }
            if !self.input.iter().chain(&self.output).all(|x| x.is_finite()) {
                return Err(Error::NonFinite(format!(
                    "embedding parameters became non-finite in epoch {}",
                    epoch + 1
                )));
            }
        }

        let mut space = EmbeddingSpace::new("original", dim);
        for (id, token) in self.vocab.tokens().iter().enumerate() {
            space.insert(token.clone(), &self.input[id * dim..(id + 1) * dim]);
        }
        Ok(space)
    }

    fn row(&self, id: usize) -> &[f64] {
        let dim = self.config.dim;
        &self.input[id * dim..(id + 1) * dim]
    }

    fn row_mut(&mut self, id: usize) -> &mut [f64] {
        let dim = self.config.dim;
        &mut self.input[id * dim..(id + 1) * dim]
    }

    fn sample_targets(&mut self, positive: usize, targets: &mut Vec<(usize, bool)>) {
        targets.clear();
        targets.push((positive, true));
        for _ in 0..self.config.negative {
            let n = self.noise.sample(&mut self.rng);
            if n != positive {
                targets.push((n, false));
            }
        }
    }
}

fn add_into(dst: &mut [f64], src: &[f64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d += s;
    }
}

/// Trains a space with one vector per vocabulary token (after `min_count`).
/// Single-threaded and deterministic for a fixed seed.
pub fn train_embeddings(corpus: &Corpus, config: &TrainConfig) -> Result<EmbeddingSpace> {
    Trainer::new(corpus, config)?.run(corpus)
}

/// Splits every token into its Unicode scalar values, keeping sentence
/// boundaries, for character-level training.
pub fn corpus_to_characters(corpus: &Corpus) -> Corpus {
    Corpus::new(
        corpus
            .sentences()
            .iter()
            .map(|s| {
                s.iter()
                    .flat_map(|t| t.chars().map(String::from))
                    .collect()
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-7)
    }

    #[test]
    fn update_matches_finite_differences() {
        let dim = 6;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = 1e-6;
        for _ in 0..5 {
            let input: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            // rows 0 = positive, 1..=3 = negatives
            let outputs: Vec<f64> = (0..4 * dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let targets = [(0, true), (1, false), (2, false), (3, false)];
            let loss_at = |inp: &[f64], out: &[f64]| {
                let negs: Vec<&[f64]> = (1..4).map(|r| &out[r * dim..(r + 1) * dim]).collect();
                negative_sampling_loss(inp, &out[..dim], &negs)
            };

            let mut delta = vec![0.0; dim];
            let mut stepped = outputs.clone();
            let loss = negative_sampling_update(&input, &mut delta, &mut stepped, &targets, 1.0);
            assert!((loss - loss_at(&input, &outputs)).abs() < 1e-12);

            for j in 0..dim {
                let mut p = input.clone();
                let mut m = input.clone();
                p[j] += h;
                m[j] -= h;
                let numeric = (loss_at(&p, &outputs) - loss_at(&m, &outputs)) / (2.0 * h);
                assert!(rel_err(-delta[j], numeric) <= 1e-4, "input grad {j}");
            }
            for j in 0..4 * dim {
                let mut p = outputs.clone();
                let mut m = outputs.clone();
                p[j] += h;
                m[j] -= h;
                let numeric = (loss_at(&input, &p) - loss_at(&input, &m)) / (2.0 * h);
                let analytic = outputs[j] - stepped[j];
                assert!(rel_err(analytic, numeric) <= 1e-4, "output grad {j}");
            }
        }
    }

    #[test]
    fn log_sigmoid_is_stable() {
        assert!(neg_log_sigmoid(800.0).is_finite());
        assert!((neg_log_sigmoid(-800.0) - 800.0).abs() < 1e-9);
        assert!((neg_log_sigmoid(0.0) - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn splits_into_characters() {
        let c = Corpus::from_tokens(&[vec!["房租", "高"], vec!["a"]]);
        let chars = corpus_to_characters(&c);
        assert_eq!(chars, Corpus::from_tokens(&[vec!["房", "租", "高"], vec!["a"]]));
    }

    #[test]
    fn empty_vocabulary_is_config_error() {
        let c = Corpus::from_tokens(&[vec!["a"]]);
        let cfg = TrainConfig {
            min_count: 2,
            ..TrainConfig::default()
        };
        assert!(matches!(train_embeddings(&c, &cfg), Err(Error::Config(_))));
        assert!(matches!(
            train_embeddings(&Corpus::default(), &TrainConfig::default()),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn invalid_config_rejected() {
        let c = Corpus::from_tokens(&[vec!["a", "b"]]);
        let cfg = TrainConfig {
            learning_rate: 0.0,
            ..TrainConfig::default()
        };
        assert!(matches!(train_embeddings(&c, &cfg), Err(Error::Config(_))));
    }

    #[test]
    fn initial_vectors_within_bounds() {
        let c = Corpus::from_tokens(&[vec!["x"]]);
        let cfg = TrainConfig {
            dim: 8,
            ..TrainConfig::default()
        };
        // a single-token sentence has no context, so vectors stay at their init
        let s = train_embeddings(&c, &cfg).unwrap();
        let v = s.lookup("x").unwrap();
        assert!(v.iter().all(|x| x.abs() <= 0.5 / 8.0));
    }
}
