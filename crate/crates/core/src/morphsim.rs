//! Morphological similarity between words.
//!
//! Three character-level measures (longest common substring, edit distance
//! and character-count cosine) are combined by a perceptron trained on
//! synonym-thesaurus pairs, then squashed through a logistic so the result
//! is a similarity in `[0, 1]`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::io::BufRead;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::Vocabulary;
use crate::error::{Error, Result};
use crate::textio;

fn chars(s: &str) -> Vec<char> {
    let c: Vec<char> = s.chars().collect();
    assert!(!c.is_empty(), "similarity of an empty string");
    c
}

/// Longest common contiguous substring length over `max(|a|, |b|)`.
pub fn lcs_sim(a: &str, b: &str) -> f64 {
    let (a, b) = (chars(a), chars(b));
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    let mut best = 0;
    for &ca in &a {
        for (j, &cb) in b.iter().enumerate() {
            cur[j + 1] = if ca == cb { prev[j] + 1 } else { 0 };
            best = best.max(cur[j + 1]);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    best as f64 / a.len().max(b.len()) as f64
}

pub fn levenshtein(a: &[char], b: &[char]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// `1 - levenshtein(a, b) / max(|a|, |b|)` with unit costs.
pub fn edit_sim(a: &str, b: &str) -> f64 {
    let (a, b) = (chars(a), chars(b));
    1.0 - levenshtein(&a, &b) as f64 / a.len().max(b.len()) as f64
}

/// Cosine between the character-count vectors of `a` and `b`.
pub fn char_cos_sim(a: &str, b: &str) -> f64 {
    let (a, b) = (chars(a), chars(b));
    let mut counts: BTreeMap<char, (u64, u64)> = BTreeMap::new();
    for c in a {
        counts.entry(c).or_default().0 += 1;
    }
    for c in b {
        counts.entry(c).or_default().1 += 1;
    }
    let (mut dot, mut na, mut nb) = (0u64, 0u64, 0u64);
    for &(x, y) in counts.values() {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    (dot as f64 / ((na * nb) as f64).sqrt()).min(1.0)
}

/// `(lcs_sim, edit_sim, char_cos_sim)`.
pub fn features(a: &str, b: &str) -> [f64; 3] {
    [lcs_sim(a, b), edit_sim(a, b), char_cos_sim(a, b)]
}

/// Synonym categories: category id → member words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SynonymThesaurus {
    categories: BTreeMap<String, BTreeSet<String>>,
}

impl SynonymThesaurus {
    pub fn new() -> Self {
        Self::default()
    }

    /// Panics if `words` is empty.
    pub fn add_category<S: Into<String>>(&mut self, id: impl Into<String>, words: impl IntoIterator<Item = S>) {
        let set = self.categories.entry(id.into()).or_default();
        set.extend(words.into_iter().map(Into::into));
        assert!(!set.is_empty(), "thesaurus categories must be non-empty");
    }

    pub fn categories(&self) -> &BTreeMap<String, BTreeSet<String>> {
        &self.categories
    }

    pub fn len(&self) -> usize {
        self.categories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.categories.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (id, words) in &self.categories {
            let words: Vec<&str> = words.iter().map(String::as_str).collect();
            writeln!(out, "{id}\t{}", words.join(" ")).unwrap();
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        textio::write_file(path, &self.to_text())
    }

    pub fn are_synonyms(&self, a: &str, b: &str) -> bool {
        self.categories
            .values()
            .any(|c| c.contains(a) && c.contains(b))
    }
}

/// One category per line: `category_id TAB word1 word2 ...`.
pub fn load_thesaurus(path: &Path) -> Result<SynonymThesaurus> {
    read_thesaurus(textio::open(path)?, &textio::source_name(path))
}

pub fn read_thesaurus<R: BufRead>(reader: R, source_name: &str) -> Result<SynonymThesaurus> {
    let mut t = SynonymThesaurus::new();
    for (lineno, line) in textio::read_lines(reader, source_name)? {
        if line.trim().is_empty() {
            continue;
        }
        let Some((id, words)) = line.split_once('\t') else {
            return Err(Error::parse(source_name, lineno, "expected category id, TAB, words"));
        };
        let words: Vec<&str> = words.split([' ', '\t']).filter(|w| !w.is_empty()).collect();
        if id.trim().is_empty() || words.is_empty() {
            return Err(Error::parse(source_name, lineno, "empty category"));
        }
        t.add_category(id.trim(), words);
    }
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TrainingPair {
    pub word_a: String,
    pub word_b: String,
    /// 1 for words sharing a category, 0 otherwise.
    pub label: u8,
}

/// Samples `n_pos` distinct same-category pairs and `n_neg` distinct pairs
/// that share no category, then shuffles them together.
pub fn build_pairs(
    thesaurus: &SynonymThesaurus,
    n_pos: usize,
    n_neg: usize,
    seed: u64,
) -> Result<Vec<TrainingPair>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut synonyms: BTreeSet<(&str, &str)> = BTreeSet::new();
    for words in thesaurus.categories().values() {
        let words: Vec<&str> = words.iter().map(String::as_str).collect();
        for (i, a) in words.iter().enumerate() {
            for b in &words[i + 1..] {
                synonyms.insert((a, b));
            }
        }
    }
    if synonyms.len() < n_pos {
        return Err(Error::Sampling(format!(
            "positive side: requested {n_pos} same-category pairs but only {} exist",
            synonyms.len()
        )));
    }

    let vocabulary: Vec<&str> = thesaurus
        .categories()
        .values()
        .flatten()
        .map(String::as_str)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let n = vocabulary.len();
    let available_neg = n * n.saturating_sub(1) / 2 - synonyms.len();
    if available_neg < n_neg {
        return Err(Error::Sampling(format!(
            "negative side: requested {n_neg} cross-category pairs but only {available_neg} exist"
        )));
    }

    let mut positives: Vec<(&str, &str)> = synonyms.iter().copied().collect();
    positives.shuffle(&mut rng);
    positives.truncate(n_pos);

    let negatives: Vec<(&str, &str)> = if n_neg * 2 >= available_neg {
        let mut all: Vec<(&str, &str)> = Vec::with_capacity(available_neg);
        for (i, a) in vocabulary.iter().enumerate() {
            for b in &vocabulary[i + 1..] {
                if !synonyms.contains(&(a, b)) {
                    all.push((a, b));
                }
            }
        }
        all.shuffle(&mut rng);
        all.truncate(n_neg);
        all
    } else {
        let mut chosen = BTreeSet::new();
        let mut out = Vec::with_capacity(n_neg);
        while out.len() < n_neg {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if i == j {
                continue;
            }
            let pair = if vocabulary[i] < vocabulary[j] {
                (vocabulary[i], vocabulary[j])
            } else {
                (vocabulary[j], vocabulary[i])
            };
            if !synonyms.contains(&pair) && chosen.insert(pair) {
                out.push(pair);
            }
        }
        out
    };

    let mut pairs: Vec<TrainingPair> = positives
        .into_iter()
        .map(|p| (p, 1))
        .chain(negatives.into_iter().map(|p| (p, 0)))
        .map(|((a, b), label)| TrainingPair {
            word_a: a.to_owned(),
            word_b: b.to_owned(),
            label,
        })
        .collect();
    pairs.shuffle(&mut rng);
    Ok(pairs)
}

/// Perceptron weights over `(lcs, edit, char-cosine)` plus a bias.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SimilarityModel {
    pub w_lcs: f64,
    pub w_edit: f64,
    pub w_cos: f64,
    pub bias: f64,
}

impl SimilarityModel {
    pub fn weights(&self) -> [f64; 3] {
        [self.w_lcs, self.w_edit, self.w_cos]
    }

    /// Unsquashed perceptron activation `w·x + b`.
    pub fn activation(&self, x: &[f64; 3]) -> f64 {
        self.w_lcs * x[0] + self.w_edit * x[1] + self.w_cos * x[2] + self.bias
    }

    pub fn classify(&self, a: &str, b: &str) -> u8 {
        u8::from(self.activation(&features(a, b)) > 0.0)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in [
            ("w_lcs", self.w_lcs),
            ("w_edit", self.w_edit),
            ("w_cos", self.w_cos),
            ("bias", self.bias),
        ] {
            writeln!(s, "{k} {v}").unwrap();
        }
        s
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        textio::write_file(path, &self.to_text())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(textio::open(path)?, &textio::source_name(path))
    }

    pub fn parse<R: BufRead>(reader: R, source_name: &str) -> Result<Self> {
        let mut values: HashMap<String, f64> = HashMap::new();
        for (lineno, line) in textio::read_lines(reader, source_name)? {
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let (Some(k), Some(v), None) = (it.next(), it.next(), it.next()) else {
                return Err(Error::parse(source_name, lineno, "expected \"name value\""));
            };
            let v: f64 = v
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| Error::parse(source_name, lineno, format!("invalid value {v:?}")))?;
            values.insert(k.to_owned(), v);
        }
        let get = |k: &str| {
            values
                .get(k)
                .copied()
                .ok_or_else(|| Error::parse(source_name, 0, format!("missing {k}")))
        };
        Ok(SimilarityModel {
            w_lcs: get("w_lcs")?,
            w_edit: get("w_edit")?,
            w_cos: get("w_cos")?,
            bias: get("bias")?,
        })
    }
}

/// Classic perceptron: zero init, `w += lr·(y - ŷ)·x`, `b += lr·(y - ŷ)`,
/// `epochs` passes over `pairs` in the given order.
pub fn train_perceptron(pairs: &[TrainingPair], epochs: usize, lr: f64) -> SimilarityModel {
    assert!(lr > 0.0, "learning rate must be positive");
    let data: Vec<([f64; 3], f64)> = pairs
        .iter()
        .map(|p| (features(&p.word_a, &p.word_b), f64::from(p.label)))
        .collect();
    let mut m = SimilarityModel::default();
    for _ in 0..epochs {
        let mut mistakes = 0;
        for (x, y) in &data {
            let predicted = if m.activation(x) > 0.0 { 1.0 } else { 0.0 };
            let err = y - predicted;
            if err != 0.0 {
                mistakes += 1;
                m.w_lcs += lr * err * x[0];
                m.w_edit += lr * err * x[1];
                m.w_cos += lr * err * x[2];
                m.bias += lr * err;
            }
        }
        if mistakes == 0 {
            break;
        }
    }
    m
}

fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `σ(w·x + b)` for the three morphological features of `(a, b)`.
pub fn word_similarity(model: &SimilarityModel, a: &str, b: &str) -> f64 {
    logistic(model.activation(&features(a, b)))
}

/// The `k` best-scoring candidates other than `word`, by descending score
/// and then ascending word.
pub fn top_k_among<'a, I>(model: &SimilarityModel, word: &str, candidates: I, k: usize) -> Vec<(String, f64)>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut scored: Vec<(&str, f64)> = candidates
        .into_iter()
        .filter(|&c| c != word)
        .map(|c| (c, word_similarity(model, word, c)))
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    scored.dedup_by(|a, b| a.0 == b.0);
    scored
        .into_iter()
        .take(k)
        .map(|(w, s)| (w.to_owned(), s))
        .collect()
}

pub fn top_k_similar(model: &SimilarityModel, word: &str, candidates: &Vocabulary, k: usize) -> Vec<(String, f64)> {
    top_k_among(model, word, candidates.tokens().iter().map(String::as_str), k)
}
