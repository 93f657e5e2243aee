//! Evaluation: rank correlation against human similarity judgements, exact
//! span precision/recall/F, and five-fold splitting.

use std::collections::BTreeSet;
use std::fmt;
use std::io::BufRead;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::embedding::{cosine, VectorSource};
use crate::error::{Error, Result};
use crate::tagger::Tag;
use crate::textio;

/// Ranks starting at 1; tied values share the mean of their rank range.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Spearman's rank correlation with average ranks for ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::Evaluation("sequences differ in length".into()));
    }
    if xs.len() < 2 {
        return Err(Error::Evaluation("need at least two observations".into()));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::Evaluation("non-finite observation".into()));
    }
    pearson(&average_ranks(xs), &average_ranks(ys))
        .ok_or_else(|| Error::Evaluation("constant sequence has no rank correlation".into()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Judgement {
    pub word_a: String,
    pub word_b: String,
    pub score: f64,
}

/// `word_a TAB word_b TAB score` per line.
pub fn load_judgements(path: &Path) -> Result<Vec<Judgement>> {
    read_judgements(textio::open(path)?, &textio::source_name(path))
}

pub fn read_judgements<R: BufRead>(reader: R, source_name: &str) -> Result<Vec<Judgement>> {
    let mut out = Vec::new();
    for (lineno, line) in textio::read_lines(reader, source_name)? {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        let [a, b, s] = fields[..] else {
            return Err(Error::parse(source_name, lineno, "expected word_a TAB word_b TAB score"));
        };
        let score = s
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::parse(source_name, lineno, format!("invalid score {s:?}")))?;
        if a.is_empty() || b.is_empty() {
            return Err(Error::parse(source_name, lineno, "empty word"));
        }
        out.push(Judgement {
            word_a: a.to_owned(),
            word_b: b.to_owned(),
            score,
        });
    }
    Ok(out)
}

pub fn write_judgements(judgements: &[Judgement]) -> String {
    judgements
        .iter()
        .map(|j| format!("{}\t{}\t{}\n", j.word_a, j.word_b, j.score))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityReport {
    pub spearman: f64,
    /// Fraction of pairs where both words had a vector.
    pub coverage: f64,
    pub scored: usize,
    /// `(pair index, cosine)` for the scored pairs.
    pub cosines: Vec<(usize, f64)>,
}

/// Cosine per judged pair from `source`, dropping pairs with a missing
/// vector, and the Spearman correlation with the human scores.
pub fn eval_similarity(source: &dyn VectorSource, judgements: &[Judgement]) -> Result<SimilarityReport> {
    if judgements.is_empty() {
        return Err(Error::Evaluation("no judgements".into()));
    }
    let mut cosines = Vec::new();
    let mut human = Vec::new();
    for (i, j) in judgements.iter().enumerate() {
        if let (Some(a), Some(b)) = (source.vector(&j.word_a), source.vector(&j.word_b)) {
            cosines.push((i, cosine(&a, &b)));
            human.push(j.score);
        }
    }
    if cosines.len() < 2 {
        return Err(Error::Evaluation(format!(
            "only {} judged pair(s) have vectors for both words",
            cosines.len()
        )));
    }
    let predicted: Vec<f64> = cosines.iter().map(|c| c.1).collect();
    Ok(SimilarityReport {
        spearman: spearman(&predicted, &human)?,
        coverage: cosines.len() as f64 / judgements.len() as f64,
        scored: cosines.len(),
        cosines,
    })
}

/// An entity span with inclusive token bounds.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub sentence: usize,
    pub start: usize,
    pub end: usize,
    pub entity_type: String,
}

/// Spans in one label sequence. `B-t` opens a span, following `I-t`
/// extend it, anything else closes it; a stray `I-t` opens a span too.
pub fn decode_spans<S: AsRef<str>>(labels: &[S], sentence: usize) -> Vec<Span> {
    let mut spans = Vec::new();
    let mut open: Option<Span> = None;
    for (i, l) in labels.iter().enumerate() {
        let tag = Tag::parse(l.as_ref()).unwrap_or(Tag::Outside);
        match tag {
            Tag::Inside(t) if open.as_ref().is_some_and(|s| s.entity_type == t) => {
                open.as_mut().unwrap().end = i;
            }
            Tag::Begin(t) | Tag::Inside(t) => {
                spans.extend(open.take());
                open = Some(Span {
                    sentence,
                    start: i,
                    end: i,
                    entity_type: t.to_owned(),
                });
            }
            Tag::Outside => spans.extend(open.take()),
        }
    }
    spans.extend(open);
    spans
}

pub fn decode_corpus_spans<S: AsRef<str>>(sentences: &[Vec<S>]) -> BTreeSet<Span> {
    sentences
        .iter()
        .enumerate()
        .flat_map(|(i, l)| decode_spans(l, i))
        .collect()
}

/// BI labels of length `len` for non-overlapping spans of one sentence.
pub fn encode_spans(spans: &[Span], len: usize) -> Vec<String> {
    let mut labels = vec![crate::tagger::OUTSIDE.to_owned(); len];
    for s in spans {
        labels[s.start] = format!("B-{}", s.entity_type);
        for l in &mut labels[s.start + 1..=s.end] {
            *l = format!("I-{}", s.entity_type);
        }
    }
    labels
}

/// Precision, recall and F as fractions in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Prf {
    pub fn percent(&self) -> (f64, f64, f64) {
        (self.precision * 100.0, self.recall * 100.0, self.f1 * 100.0)
    }
}

/// `P R F` scaled by 100 with one decimal.
impl fmt::Display for Prf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, r, f1) = self.percent();
        write!(f, "{p:.1} {r:.1} {f1:.1}")
    }
}

/// Exact-match span scoring. Empty prediction or gold sets give zero
/// precision or recall rather than an undefined value.
pub fn span_prf(gold: &BTreeSet<Span>, pred: &BTreeSet<Span>) -> Prf {
    let correct = gold.intersection(pred).count() as f64;
    let precision = if pred.is_empty() { 0.0 } else { correct / pred.len() as f64 };
    let recall = if gold.is_empty() { 0.0 } else { correct / gold.len() as f64 };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Prf {
        precision,
        recall,
        f1,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fold {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Seeded shuffle of `0..n` cut into five contiguous folds whose sizes
/// differ by at most one. Each fold's train set is the complement of its
/// test set, in shuffled order.
pub fn five_fold_indices(n: usize, seed: u64) -> Result<Vec<Fold>> {
    const K: usize = 5;
    if n < K {
        return Err(Error::Evaluation(format!("five-fold split needs at least 5 items, got {n}")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut folds = Vec::with_capacity(K);
    let mut start = 0;
    for k in 0..K {
        let size = n / K + usize::from(k < n % K);
        let test = order[start..start + size].to_vec();
        let train = order[..start]
            .iter()
            .chain(&order[start + size..])
            .copied()
            .collect();
        folds.push(Fold { train, test });
        start += size;
    }
    Ok(folds)
}

/// `(train, test)` item partitions from [`five_fold_indices`].
pub fn five_fold_split<T: Clone>(items: &[T], seed: u64) -> Result<Vec<(Vec<T>, Vec<T>)>> {
    Ok(five_fold_indices(items.len(), seed)?
        .into_iter()
        .map(|f| {
            (
                f.train.iter().map(|&i| items[i].clone()).collect(),
                f.test.iter().map(|&i| items[i].clone()).collect(),
            )
        })
        .collect())
}
