//! Pre-segmented corpora, tagged corpora and vocabularies.
//!
//! Plain corpora hold one sentence per line with tokens separated by ASCII
//! spaces or tabs. Tagged corpora use `token/LABEL` items, split on the last
//! `/`; tokens may themselves contain slashes.

use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};
use crate::textio;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    sentences: Vec<Vec<String>>,
}

impl Corpus {
    /// Builds a corpus from token sequences.
    ///
    /// Panics if any token is empty.
    pub fn new(sentences: Vec<Vec<String>>) -> Self {
        assert!(
            sentences.iter().flatten().all(|t| !t.is_empty()),
            "corpus tokens must be non-empty"
        );
        Corpus { sentences }
    }

    pub fn from_tokens<S: AsRef<str>>(sentences: &[Vec<S>]) -> Self {
        Corpus::new(
            sentences
                .iter()
                .map(|s| s.iter().map(|t| t.as_ref().to_owned()).collect())
                .collect(),
        )
    }

    pub fn sentences(&self) -> &[Vec<String>] {
        &self.sentences
    }

    pub fn into_sentences(self) -> Vec<Vec<String>> {
        self.sentences
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Vec::len).sum()
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.sentences.iter().flatten().map(String::as_str)
    }

    pub fn extend(&mut self, other: Corpus) {
        self.sentences.extend(other.sentences);
    }

    /// One sentence per line, tokens joined by a single space.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.sentences {
            out.push_str(&s.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        textio::write_file(path, &self.to_text())
    }
}

pub fn load_corpus(path: &Path) -> Result<Corpus> {
    parse_corpus(textio::open(path)?, &textio::source_name(path))
}

pub fn parse_corpus<R: BufRead>(reader: R, source_name: &str) -> Result<Corpus> {
    let sentences = textio::read_lines(reader, source_name)?
        .into_iter()
        .map(|(_, line)| split_tokens(&line).map(str::to_owned).collect::<Vec<_>>())
        .filter(|s| !s.is_empty())
        .collect();
    Ok(Corpus { sentences })
}

fn split_tokens(line: &str) -> impl Iterator<Item = &str> {
    line.split([' ', '\t']).filter(|t| !t.is_empty())
}

/// Token ids are dense and ordered by descending frequency, ties broken by
/// lexicographic token order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<String>,
    counts: Vec<u64>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn build(corpus: &Corpus, min_count: u64) -> Self {
        assert!(min_count >= 1, "min_count must be positive");
        let mut counts: HashMap<&str, u64> = HashMap::new();
        for t in corpus.tokens() {
            *counts.entry(t).or_default() += 1;
        }
        let mut entries: Vec<(&str, u64)> =
            counts.into_iter().filter(|&(_, c)| c >= min_count).collect();
        entries.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));

        let tokens: Vec<String> = entries.iter().map(|(t, _)| (*t).to_owned()).collect();
        let counts = entries.iter().map(|&(_, c)| c).collect();
        let index = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Vocabulary {
            tokens,
            counts,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn id(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn token(&self, id: usize) -> &str {
        &self.tokens[id]
    }

    /// Count in the source corpus; zero for out-of-vocabulary tokens.
    pub fn term_frequency(&self, token: &str) -> u64 {
        self.id(token).map_or(0, |id| self.counts[id])
    }

    pub fn count(&self, id: usize) -> u64 {
        self.counts[id]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `(token, tf)` in id order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.tokens
            .iter()
            .map(String::as_str)
            .zip(self.counts.iter().copied())
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedSentence {
    pub tokens: Vec<String>,
    pub labels: Vec<String>,
}

impl TaggedSentence {
    pub fn new(tokens: Vec<String>, labels: Vec<String>) -> Self {
        assert_eq!(tokens.len(), labels.len(), "tokens and labels differ in length");
        TaggedSentence { tokens, labels }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn to_line(&self) -> String {
        self.tokens
            .iter()
            .zip(&self.labels)
            .map(|(t, l)| format!("{t}/{l}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn load_tagged_corpus(path: &Path) -> Result<Vec<TaggedSentence>> {
    parse_tagged_corpus(textio::open(path)?, &textio::source_name(path))
}

pub fn parse_tagged_corpus<R: BufRead>(reader: R, source_name: &str) -> Result<Vec<TaggedSentence>> {
    let mut out = Vec::new();
    for (lineno, line) in textio::read_lines(reader, source_name)? {
        let mut tokens = Vec::new();
        let mut labels = Vec::new();
        for (column, item) in items_with_columns(&line) {
            let (token, label) = item.rsplit_once('/').ok_or_else(|| {
                Error::parse_at(source_name, lineno, column, format!("item {item:?} has no '/'"))
            })?;
            if token.is_empty() {
                return Err(Error::parse_at(source_name, lineno, column, "empty token"));
            }
            if label.is_empty() {
                return Err(Error::parse_at(source_name, lineno, column, "empty label"));
            }
            tokens.push(token.to_owned());
            labels.push(label.to_owned());
        }
        if !tokens.is_empty() {
            out.push(TaggedSentence { tokens, labels });
        }
    }
    Ok(out)
}

/// Items paired with their 1-based character column.
fn items_with_columns(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    let mut col_of_start = 0;
    for (col, (byte, ch)) in line.char_indices().enumerate() {
        if ch == ' ' || ch == '\t' {
            if let Some(s) = start.take() {
                out.push((col_of_start, &line[s..byte]));
            }
        } else if start.is_none() {
            start = Some(byte);
            col_of_start = col + 1;
        }
    }
    if let Some(s) = start {
        out.push((col_of_start, &line[s..]));
    }
    out
}

pub fn write_tagged(sentences: &[TaggedSentence]) -> String {
    let mut out = String::new();
    for s in sentences {
        out.push_str(&s.to_line());
        out.push('\n');
    }
    out
}
