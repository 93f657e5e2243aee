//! Token classification over concatenated embedding features.
//!
//! Each token becomes the concatenation of context-window vectors, its
//! sememe-sum vector and the vector of its last character. A multiclass
//! logistic regression with L2 regularisation predicts a BI(+O) label per
//! token and a repair pass turns the independent predictions into a valid
//! label sequence.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::io::BufRead;
use std::path::Path;

use crate::corpus::TaggedSentence;
use crate::embedding::VectorSource;
use crate::error::{Error, Result};
use crate::textio;

pub const OUTSIDE: &str = "O";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tag<'a> {
    Outside,
    Begin(&'a str),
    Inside(&'a str),
}

impl<'a> Tag<'a> {
    pub fn parse(label: &'a str) -> Option<Self> {
        if label == OUTSIDE {
            return Some(Tag::Outside);
        }
        let (prefix, ty) = label.split_once('-')?;
        if ty.is_empty() {
            return None;
        }
        match prefix {
            "B" => Some(Tag::Begin(ty)),
            "I" => Some(Tag::Inside(ty)),
            _ => None,
        }
    }

    pub fn entity_type(&self) -> Option<&'a str> {
        match *self {
            Tag::Outside => None,
            Tag::Begin(t) | Tag::Inside(t) => Some(t),
        }
    }
}

/// Labels `O, B-t1, I-t1, B-t2, I-t2, ...` with `O` at index 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelScheme {
    types: Vec<String>,
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl LabelScheme {
    pub fn new<S: AsRef<str>>(types: &[S]) -> Self {
        let mut labels = vec![OUTSIDE.to_owned()];
        let mut seen = BTreeSet::new();
        let mut kept = Vec::new();
        for t in types {
            let t = t.as_ref();
            assert!(!t.is_empty(), "entity types must be non-empty");
            if seen.insert(t.to_owned()) {
                kept.push(t.to_owned());
                labels.push(format!("B-{t}"));
                labels.push(format!("I-{t}"));
            }
        }
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        LabelScheme {
            types: kept,
            labels,
            index,
        }
    }

    /// Entity types found in `sentences`, sorted.
    pub fn infer(sentences: &[TaggedSentence]) -> Result<Self> {
        let mut types = BTreeSet::new();
        for s in sentences {
            for l in &s.labels {
                let tag = Tag::parse(l)
                    .ok_or_else(|| Error::Config(format!("label {l:?} is not O, B-type or I-type")))?;
                if let Some(t) = tag.entity_type() {
                    types.insert(t);
                }
            }
        }
        Ok(LabelScheme::new(&types.into_iter().collect::<Vec<_>>()))
    }

    pub fn types(&self) -> &[String] {
        &self.types
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }
}

/// Rewrites every `I-t` that does not follow `B-t` or `I-t` to `B-t`.
pub fn repair_bi(labels: &mut [String]) {
    let mut prev_type: Option<String> = None;
    for label in labels.iter_mut() {
        let fixed = match Tag::parse(label) {
            Some(Tag::Inside(t)) if prev_type.as_deref() != Some(t) => Some(format!("B-{t}")),
            _ => None,
        };
        if let Some(f) = fixed {
            *label = f;
        }
        prev_type = Tag::parse(label)
            .and_then(|t| t.entity_type())
            .map(str::to_owned);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FeatureSpec {
    pub radius: usize,
    pub context: bool,
    pub hownet: bool,
    pub last_char: bool,
    pub dim: usize,
}

impl FeatureSpec {
    /// All components on, window radius 2.
    pub fn full(dim: usize) -> Self {
        FeatureSpec {
            radius: 2,
            context: true,
            hownet: true,
            last_char: true,
            dim,
        }
    }

    pub fn feature_dim(&self) -> usize {
        let mut n = 0;
        if self.context {
            n += (2 * self.radius + 1) * self.dim;
        }
        if self.hownet {
            n += self.dim;
        }
        if self.last_char {
            n += self.dim;
        }
        n
    }
}

/// Vector sources for the enabled feature components.
#[derive(Clone, Copy, Default)]
pub struct FeatureSources<'a> {
    pub context: Option<&'a dyn VectorSource>,
    pub hownet: Option<&'a dyn VectorSource>,
    pub chars: Option<&'a dyn VectorSource>,
}

impl FeatureSources<'_> {
    /// Checks that every component enabled in `spec` has a source of
    /// dimension `spec.dim`.
    pub fn check(&self, spec: &FeatureSpec) -> Result<()> {
        if spec.feature_dim() == 0 {
            return Err(Error::Config("no feature component enabled".into()));
        }
        for (name, on, src) in [
            ("context", spec.context, self.context),
            ("hownet", spec.hownet, self.hownet),
            ("last-char", spec.last_char, self.chars),
        ] {
            if !on {
                continue;
            }
            match src {
                None => return Err(Error::Config(format!("{name} features enabled without a vector source"))),
                Some(s) if s.dim() != spec.dim => {
                    return Err(Error::Config(format!(
                        "{name} space has dimension {}, expected {}",
                        s.dim(),
                        spec.dim
                    )))
                }
                Some(_) => {}
            }
        }
        Ok(())
    }
}

fn push_vector(out: &mut Vec<f64>, src: Option<&dyn VectorSource>, token: Option<&str>, dim: usize) {
    match src.zip(token).and_then(|(s, t)| s.vector(t)) {
        Some(v) => out.extend_from_slice(&v),
        None => out.resize(out.len() + dim, 0.0),
    }
}

/// Features of `sentence[i]`: context vectors at `i-r..=i+r`, then the
/// Hownet vector, then the last-character vector. Missing vectors and
/// positions outside the sentence contribute zeros.
///
/// Panics if `i` is out of range.
pub fn assemble_features<S: AsRef<str>>(
    sentence: &[S],
    i: usize,
    sources: &FeatureSources<'_>,
    spec: &FeatureSpec,
) -> Vec<f64> {
    assert!(i < sentence.len(), "token position {i} out of range");
    let mut out = Vec::with_capacity(spec.feature_dim());
    let token = sentence[i].as_ref();
    if spec.context {
        for offset in -(spec.radius as isize)..=spec.radius as isize {
            let j = i as isize + offset;
            let neighbour = (j >= 0 && (j as usize) < sentence.len()).then(|| sentence[j as usize].as_ref());
            push_vector(&mut out, sources.context, neighbour, spec.dim);
        }
    }
    if spec.hownet {
        push_vector(&mut out, sources.hownet, Some(token), spec.dim);
    }
    if spec.last_char {
        let last = token.chars().last().map(String::from);
        push_vector(&mut out, sources.chars, last.as_deref(), spec.dim);
    }
    debug_assert_eq!(out.len(), spec.feature_dim());
    out
}

/// Softmax classifier parameters: `classes × dim` weights plus per-class bias.
#[derive(Clone, Debug, PartialEq)]
pub struct LogisticRegression {
    classes: usize,
    dim: usize,
    weights: Vec<f64>,
    bias: Vec<f64>,
}

impl LogisticRegression {
    pub fn zeros(classes: usize, dim: usize) -> Self {
        LogisticRegression {
            classes,
            dim,
            weights: vec![0.0; classes * dim],
            bias: vec![0.0; classes],
        }
    }

    /// Parameters packed as `[weights (row-major) | bias]`.
    pub fn from_flat(classes: usize, dim: usize, params: &[f64]) -> Self {
        assert_eq!(params.len(), classes * (dim + 1));
        LogisticRegression {
            classes,
            dim,
            weights: params[..classes * dim].to_vec(),
            bias: params[classes * dim..].to_vec(),
        }
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = self.weights.clone();
        v.extend_from_slice(&self.bias);
        v
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub fn weight_row(&self, class: usize) -> &[f64] {
        &self.weights[class * self.dim..(class + 1) * self.dim]
    }

    pub fn weight_norm_sq(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum()
    }

    fn logits_into(&self, x: &[f64], out: &mut [f64]) {
        for (c, o) in out.iter_mut().enumerate() {
            let row = self.weight_row(c);
            *o = self.bias[c] + row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>();
        }
    }

    /// Softmax class probabilities.
    ///
    /// Panics on a dimension mismatch.
    pub fn probabilities(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim, "feature dimension mismatch");
        let mut p = vec![0.0; self.classes];
        self.logits_into(x, &mut p);
        softmax_in_place(&mut p);
        p
    }

    /// Most probable class (lowest index on ties) and the probabilities.
    pub fn predict(&self, x: &[f64]) -> (usize, Vec<f64>) {
        let p = self.probabilities(x);
        let mut best = 0;
        for (c, &v) in p.iter().enumerate() {
            if v > p[best] {
                best = c;
            }
        }
        (best, p)
    }

    /// Mean softmax cross-entropy plus `(λ/2)·‖W‖²` and its gradient
    /// (packed like [`to_flat`](Self::to_flat)).
    pub fn objective(&self, features: &[Vec<f64>], labels: &[usize], lambda: f64) -> (f64, Vec<f64>) {
        let n = features.len() as f64;
        let mut grad = vec![0.0; self.classes * (self.dim + 1)];
        let (gw, gb) = grad.split_at_mut(self.classes * self.dim);
        let mut loss = 0.0;
        let mut z = vec![0.0; self.classes];
        for (x, &y) in features.iter().zip(labels) {
            self.logits_into(x, &mut z);
            let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let sum: f64 = z.iter().map(|v| (v - max).exp()).sum();
            loss += max + sum.ln() - z[y];
            for c in 0..self.classes {
                let p = (z[c] - max).exp() / sum;
                let r = p - f64::from(u8::from(c == y));
                gb[c] += r;
                for (g, v) in gw[c * self.dim..(c + 1) * self.dim].iter_mut().zip(x) {
                    *g += r * v;
                }
            }
        }
        loss /= n;
        grad.iter_mut().for_each(|g| *g /= n);
        loss += 0.5 * lambda * self.weight_norm_sq();
        for (g, w) in grad.iter_mut().zip(&self.weights) {
            *g += lambda * w;
        }
        (loss, grad)
    }
}

fn softmax_in_place(z: &mut [f64]) {
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for v in z.iter_mut() {
        *v = (*v - max).exp();
        sum += *v;
    }
    z.iter_mut().for_each(|v| *v /= sum);
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainParams {
    pub lambda: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams {
            lambda: 1.0,
            tol: 1e-6,
            max_iter: 500,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainReport {
    /// Objective value at the start and after every accepted step.
    pub losses: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

const ARMIJO_C: f64 = 1e-4;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Full-batch gradient descent from zero with Barzilai-Borwein trial steps
/// and Armijo backtracking, so the objective never increases. Stops when the
/// gradient's max-norm reaches `tol`, after `max_iter` steps, or when the
/// line search can make no progress.
pub fn train_logreg(
    features: &[Vec<f64>],
    labels: &[usize],
    classes: usize,
    params: &TrainParams,
) -> Result<(LogisticRegression, TrainReport)> {
    if features.len() != labels.len() {
        return Err(Error::Config("feature and label counts differ".into()));
    }
    if !(params.lambda.is_finite() && params.lambda > 0.0) {
        return Err(Error::Config("lambda must be positive".into()));
    }
    if labels.iter().any(|&y| y >= classes) {
        return Err(Error::Config("label index out of range".into()));
    }
    if labels.iter().collect::<BTreeSet<_>>().len() < 2 {
        return Err(Error::Config("training data needs at least two distinct labels".into()));
    }
    let dim = features[0].len();
    if features.iter().any(|x| x.len() != dim) {
        return Err(Error::Config("feature vectors differ in length".into()));
    }

    let mut model = LogisticRegression::zeros(classes, dim);
    let mut theta = model.to_flat();
    let (mut f, mut g) = model.objective(features, labels, params.lambda);
    let mut report = TrainReport {
        losses: vec![f],
        iterations: 0,
        converged: false,
    };
    let mut step = 1.0;
    let mut previous: Option<(Vec<f64>, Vec<f64>)> = None;

    for _ in 0..params.max_iter {
        if g.iter().fold(0.0f64, |m, v| m.max(v.abs())) <= params.tol {
            report.converged = true;
            break;
        }
        if let Some((theta_prev, g_prev)) = &previous {
            let s: Vec<f64> = theta.iter().zip(theta_prev).map(|(a, b)| a - b).collect();
            let y: Vec<f64> = g.iter().zip(g_prev).map(|(a, b)| a - b).collect();
            let sy = dot(&s, &y);
            if sy > 0.0 {
                step = (dot(&s, &s) / sy).clamp(1e-10, 1e10);
            }
        }
        let g_sq = dot(&g, &g);
        let accepted = loop {
            let candidate: Vec<f64> = theta.iter().zip(&g).map(|(t, d)| t - step * d).collect();
            let cand_model = LogisticRegression::from_flat(classes, dim, &candidate);
            let (fc, gc) = cand_model.objective(features, labels, params.lambda);
            if fc.is_finite() && fc <= f - ARMIJO_C * step * g_sq {
                break Some((candidate, cand_model, fc, gc));
            }
            step *= 0.5;
            if step < 1e-20 {
                break None;
            }
        };
        let Some((candidate, cand_model, fc, gc)) = accepted else {
            break;
        };
        previous = Some((std::mem::replace(&mut theta, candidate), std::mem::replace(&mut g, gc)));
        model = cand_model;
        f = fc;
        report.losses.push(f);
        report.iterations += 1;
    }
    if !report.converged && g.iter().fold(0.0f64, |m, v| m.max(v.abs())) <= params.tol {
        report.converged = true;
    }
    if !model.weights.iter().chain(&model.bias).all(|v| v.is_finite()) {
        return Err(Error::NonFinite("logistic regression parameters".into()));
    }
    Ok((model, report))
}

/// A trained tagger: scheme, feature layout, regularisation strength and
/// classifier.
#[derive(Clone, Debug, PartialEq)]
pub struct TaggerModel {
    pub scheme: LabelScheme,
    pub spec: FeatureSpec,
    pub lambda: f64,
    pub classifier: LogisticRegression,
}

/// Feature matrix and label indices for every token of `sentences`.
pub fn training_data(
    sentences: &[TaggedSentence],
    scheme: &LabelScheme,
    sources: &FeatureSources<'_>,
    spec: &FeatureSpec,
) -> Result<(Vec<Vec<f64>>, Vec<usize>)> {
    sources.check(spec)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for s in sentences {
        for (i, l) in s.labels.iter().enumerate() {
            let y = scheme
                .index_of(l)
                .ok_or_else(|| Error::Config(format!("label {l:?} is not in the label scheme")))?;
            xs.push(assemble_features(&s.tokens, i, sources, spec));
            ys.push(y);
        }
    }
    Ok((xs, ys))
}

impl TaggerModel {
    pub fn train(
        sentences: &[TaggedSentence],
        scheme: LabelScheme,
        spec: FeatureSpec,
        sources: &FeatureSources<'_>,
        params: &TrainParams,
    ) -> Result<(Self, TrainReport)> {
        let (xs, ys) = training_data(sentences, &scheme, sources, &spec)?;
        if xs.is_empty() {
            return Err(Error::Config("no training tokens".into()));
        }
        let (classifier, report) = train_logreg(&xs, &ys, scheme.len(), params)?;
        Ok((
            TaggerModel {
                scheme,
                spec,
                lambda: params.lambda,
                classifier,
            },
            report,
        ))
    }

    pub fn predict(&self, x: &[f64]) -> (usize, Vec<f64>) {
        self.classifier.predict(x)
    }

    /// Independent per-token prediction followed by BI repair.
    pub fn tag_sentence<S: AsRef<str>>(&self, tokens: &[S], sources: &FeatureSources<'_>) -> Vec<String> {
        let mut labels: Vec<String> = (0..tokens.len())
            .map(|i| {
                let x = assemble_features(tokens, i, sources, &self.spec);
                self.scheme.label(self.predict(&x).0).to_owned()
            })
            .collect();
        repair_bi(&mut labels);
        labels
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let spec = &self.spec;
        s.push_str("[scheme]\n");
        s.push_str("types");
        for t in self.scheme.types() {
            write!(s, " {t}").unwrap();
        }
        s.push('\n');
        writeln!(
            s,
            "[spec]\nradius {}\ncontext {}\nhownet {}\nlast_char {}\ndim {}",
            spec.radius, spec.context, spec.hownet, spec.last_char, spec.dim
        )
        .unwrap();
        writeln!(s, "[lambda]\n{:.16e}", self.lambda).unwrap();
        writeln!(s, "[weights]").unwrap();
        for c in 0..self.classifier.classes() {
            s.push_str(self.scheme.label(c));
            for w in self.classifier.weight_row(c) {
                write!(s, " {w:.16e}").unwrap();
            }
            s.push('\n');
        }
        writeln!(s, "[bias]").unwrap();
        for c in 0..self.classifier.classes() {
            writeln!(s, "{} {:.16e}", self.scheme.label(c), self.classifier.bias()[c]).unwrap();
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
        let mut section = String::new();
        let mut sections: HashMap<String, Vec<(usize, String)>> = HashMap::new();
        for (lineno, line) in textio::read_lines(reader, source_name)? {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if let Some(name) = trimmed.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
                section = name.to_owned();
                sections.entry(section.clone()).or_default();
                continue;
            }
            if section.is_empty() {
                return Err(Error::parse(source_name, lineno, "content before first section"));
            }
            sections.entry(section.clone()).or_default().push((lineno, line));
        }
        let get = |name: &str| {
            sections
                .get(name)
                .ok_or_else(|| Error::parse(source_name, 0, format!("missing [{name}] section")))
        };
        let num = |lineno: usize, v: &str| -> Result<f64> {
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::parse(source_name, lineno, format!("invalid number {v:?}")))
        };

        let scheme_lines = get("scheme")?;
        let types: Vec<&str> = match scheme_lines.first() {
            Some((lineno, l)) => {
                let mut it = l.split_whitespace();
                if it.next() != Some("types") {
                    return Err(Error::parse(source_name, *lineno, "expected \"types ...\""));
                }
                it.collect()
            }
            None => return Err(Error::parse(source_name, 0, "empty [scheme] section")),
        };
        let scheme = LabelScheme::new(&types);

        let mut kv: HashMap<&str, (usize, &str)> = HashMap::new();
        for (lineno, l) in get("spec")? {
            let (k, v) = l
                .split_once(' ')
                .ok_or_else(|| Error::parse(source_name, *lineno, "expected \"key value\""))?;
            kv.insert(k, (*lineno, v.trim()));
        }
        let field = |k: &str| {
            kv.get(k)
                .copied()
                .ok_or_else(|| Error::parse(source_name, 0, format!("missing spec field {k}")))
        };
        let usize_field = |k: &str| -> Result<usize> {
            let (lineno, v) = field(k)?;
            v.parse()
                .map_err(|_| Error::parse(source_name, lineno, format!("invalid {k}")))
        };
        let bool_field = |k: &str| -> Result<bool> {
            let (lineno, v) = field(k)?;
            v.parse()
                .map_err(|_| Error::parse(source_name, lineno, format!("invalid {k}")))
        };
        let spec = FeatureSpec {
            radius: usize_field("radius")?,
            context: bool_field("context")?,
            hownet: bool_field("hownet")?,
            last_char: bool_field("last_char")?,
            dim: usize_field("dim")?,
        };

        let lambda = match get("lambda")?.first() {
            Some((lineno, l)) => num(*lineno, l.trim())?,
            None => return Err(Error::parse(source_name, 0, "empty [lambda] section")),
        };

        let classes = scheme.len();
        let dim = spec.feature_dim();
        let mut params = vec![0.0; classes * (dim + 1)];
        let weight_lines = get("weights")?;
        let bias_lines = get("bias")?;
        if weight_lines.len() != classes || bias_lines.len() != classes {
            return Err(Error::parse(
                source_name,
                0,
                format!("expected {classes} weight and bias rows"),
            ));
        }
        for (c, (lineno, l)) in weight_lines.iter().enumerate() {
            let mut it = l.split_whitespace();
            if it.next() != Some(scheme.label(c)) {
                return Err(Error::parse(source_name, *lineno, format!("expected row for {}", scheme.label(c))));
            }
            let row: Vec<f64> = it.map(|v| num(*lineno, v)).collect::<Result<_>>()?;
            if row.len() != dim {
                return Err(Error::parse(
                    source_name,
                    *lineno,
                    format!("expected {dim} weights, found {}", row.len()),
                ));
            }
            params[c * dim..(c + 1) * dim].copy_from_slice(&row);
        }
        for (c, (lineno, l)) in bias_lines.iter().enumerate() {
            let mut it = l.split_whitespace();
            let (Some(label), Some(v), None) = (it.next(), it.next(), it.next()) else {
                return Err(Error::parse(source_name, *lineno, "expected \"label bias\""));
            };
            if label != scheme.label(c) {
                return Err(Error::parse(source_name, *lineno, format!("expected bias for {}", scheme.label(c))));
            }
            params[classes * dim + c] = num(*lineno, v)?;
        }
        Ok(TaggerModel {
            scheme,
            spec,
            lambda,
            classifier: LogisticRegression::from_flat(classes, dim, &params),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::EmbeddingSpace;

    fn labels(ls: &[&str]) -> Vec<String> {
        ls.iter().map(|s| (*s).to_owned()).collect()
    }

    #[test]
    fn scheme_layout() {
        let s = LabelScheme::new(&["Date", "Time"]);
        assert_eq!(s.labels(), &["O", "B-Date", "I-Date", "B-Time", "I-Time"]);
        assert_eq!(s.index_of("I-Time"), Some(4));
        assert_eq!(s.index_of("B-Set"), None);
    }

    #[test]
    fn repair_rules() {
        let mut l = labels(&["I-Date", "I-Date"]);
        repair_bi(&mut l);
        assert_eq!(l, labels(&["B-Date", "I-Date"]));

        let mut l = labels(&["B-Date", "I-Time"]);
        repair_bi(&mut l);
        assert_eq!(l, labels(&["B-Date", "B-Time"]));

        let mut l = labels(&["O", "O"]);
        repair_bi(&mut l);
        assert_eq!(l, labels(&["O", "O"]));

        let mut l = labels(&["O", "I-Set", "I-Set", "O", "I-Set"]);
        repair_bi(&mut l);
        assert_eq!(l, labels(&["O", "B-Set", "I-Set", "O", "B-Set"]));
    }

    #[test]
    fn feature_layout_and_padding() {
        let mut ctx = EmbeddingSpace::new("c", 2);
        ctx.insert("a", &[1.0, 2.0]);
        let mut chars = EmbeddingSpace::new("ch", 2);
        chars.insert("日", &[7.0, 8.0]);
        let spec = FeatureSpec::full(2);
        let sources = FeatureSources {
            context: Some(&ctx),
            hownet: Some(&ctx),
            chars: Some(&chars),
        };
        let x = assemble_features(&["a"], 0, &sources, &spec);
        assert_eq!(x.len(), 14);
        assert_eq!(&x[..4], &[0.0; 4]);
        assert_eq!(&x[4..6], &[1.0, 2.0]);
        assert_eq!(&x[6..10], &[0.0; 4]);
        assert_eq!(&x[10..12], &[1.0, 2.0]);
        assert_eq!(&x[12..], &[0.0, 0.0]);

        let x = assemble_features(&["x", "五日"], 1, &sources, &spec);
        assert_eq!(&x[12..], &[7.0, 8.0]);

        assert_eq!(FeatureSpec::full(10).feature_dim(), 70);
    }

    #[test]
    fn absent_sources_give_zero_features() {
        let empty = EmbeddingSpace::new("e", 3);
        let spec = FeatureSpec::full(3);
        let sources = FeatureSources {
            context: Some(&empty),
            hownet: Some(&empty),
            chars: Some(&empty),
        };
        let x = assemble_features(&["q", "r", "s"], 1, &sources, &spec);
        assert_eq!(x, vec![0.0; 21]);
    }

    #[test]
    fn source_dimension_checked() {
        let a = EmbeddingSpace::new("a", 3);
        let b = EmbeddingSpace::new("b", 4);
        let sources = FeatureSources {
            context: Some(&a),
            hownet: Some(&b),
            chars: Some(&a),
        };
        assert!(sources.check(&FeatureSpec::full(3)).is_err());
        let missing = FeatureSources {
            context: Some(&a),
            ..FeatureSources::default()
        };
        assert!(missing.check(&FeatureSpec::full(3)).is_err());
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn position_out_of_range_panics() {
        let a = EmbeddingSpace::new("a", 1);
        let sources = FeatureSources {
            context: Some(&a),
            ..FeatureSources::default()
        };
        let spec = FeatureSpec {
            hownet: false,
            last_char: false,
            ..FeatureSpec::full(1)
        };
        assemble_features(&["x"], 1, &sources, &spec);
    }

    #[test]
    fn zero_model_is_uniform() {
        let m = LogisticRegression::zeros(4, 3);
        let (label, p) = m.predict(&[1.0, -2.0, 0.5]);
        assert_eq!(label, 0);
        for v in p {
            assert!((v - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn single_class_rejected() {
        let xs = vec![vec![1.0], vec![2.0]];
        let err = train_logreg(&xs, &[1, 1], 3, &TrainParams::default()).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn zero_iterations_give_uniform_model() {
        let xs = vec![vec![1.0], vec![-1.0]];
        let params = TrainParams {
            max_iter: 0,
            ..TrainParams::default()
        };
        let (m, report) = train_logreg(&xs, &[0, 1], 2, &params).unwrap();
        assert_eq!(m, LogisticRegression::zeros(2, 1));
        assert_eq!(report.iterations, 0);
    }

    #[test]
    fn model_text_round_trip() {
        let scheme = LabelScheme::new(&["Date"]);
        let spec = FeatureSpec {
            radius: 0,
            context: true,
            hownet: false,
            last_char: true,
            dim: 2,
        };
        let params: Vec<f64> = (0..3 * 5).map(|i| (i as f64 - 7.0) / 3.0).collect();
        let model = TaggerModel {
            scheme,
            spec,
            lambda: 0.125,
            classifier: LogisticRegression::from_flat(3, 4, &params),
        };
        let text = model.to_text();
        let back = TaggerModel::parse(text.as_bytes(), "m").unwrap();
        assert_eq!(back, model);
        assert_eq!(back.to_text(), text);

        let broken = text.replace("[bias]", "[nothing]");
        assert!(TaggerModel::parse(broken.as_bytes(), "m").is_err());
    }
}
