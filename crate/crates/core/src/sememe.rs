//! Sememe lexicons, sememe-replacement corpora and sememe-sum ("Hownet")
//! word vectors.
//!
//! The lexicon is a TSV file with one word sense per line, `word`, `pos`
//! and a comma-separated sememe list, for example `车费 N fee 费用,#车`
//! with tabs between the three fields.
//!
//! Relation markers and Latin glosses are dropped, leaving the ordered
//! sememe identifiers `[费用, 车]`. The first sememe is the basic one.

use std::borrow::Cow;
use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use crate::corpus::Corpus;
use crate::embedding::{train_embeddings, EmbeddingSpace, TrainConfig, VectorSource};
use crate::error::{Error, Result};
use crate::textio;

const RELATION_MARKERS: &[char] = &['*', '#', '$', '%', '@', '?', '!', '~', '&', '^', '+', '=', '|'];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SememeEntry {
    pub word: String,
    pub pos: String,
    pub sememes: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SememeLexicon {
    entries: Vec<SememeEntry>,
    by_word: HashMap<String, Vec<usize>>,
}

impl SememeLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Panics if the entry has no sememes or an empty sememe identifier.
    pub fn push(&mut self, entry: SememeEntry) {
        assert!(!entry.sememes.is_empty(), "sememe list must be non-empty");
        assert!(
            entry.sememes.iter().all(|s| !s.is_empty()),
            "sememe identifiers must be non-empty"
        );
        self.by_word
            .entry(entry.word.clone())
            .or_default()
            .push(self.entries.len());
        self.entries.push(entry);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// All senses of `word`, in file order.
    pub fn entries_for(&self, word: &str) -> impl Iterator<Item = &SememeEntry> {
        self.by_word
            .get(word)
            .into_iter()
            .flatten()
            .map(|&i| &self.entries[i])
    }

    /// The sense used for replacement and summation: the first one listed.
    pub fn primary(&self, word: &str) -> Option<&SememeEntry> {
        self.by_word.get(word).map(|ix| &self.entries[ix[0]])
    }

    pub fn entries(&self) -> &[SememeEntry] {
        &self.entries
    }

    /// One `word TAB pos TAB sememe,sememe,...` line per entry.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!("{}\t{}\t{}\n", e.word, e.pos, e.sememes.join(",")));
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        textio::write_file(path, &self.to_tsv())
    }

    /// Distinct words in order of first appearance.
    pub fn words(&self) -> Vec<&str> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(i, e)| self.by_word[&e.word][0] == *i)
            .map(|(_, e)| e.word.as_str())
            .collect()
    }
}

pub fn parse_lexicon(path: &Path) -> Result<SememeLexicon> {
    read_lexicon(textio::open(path)?, &textio::source_name(path))
}

pub fn read_lexicon<R: BufRead>(reader: R, source_name: &str) -> Result<SememeLexicon> {
    let mut lexicon = SememeLexicon::new();
    for (lineno, line) in textio::read_lines(reader, source_name)? {
        if line.trim().is_empty() || line.starts_with("//") {
            continue;
        }
        let fields: Vec<&str> = line.splitn(3, '\t').collect();
        let [word, pos, descriptors] = fields[..] else {
            return Err(Error::parse(
                source_name,
                lineno,
                "expected 3 tab-separated fields: word, POS, sememes",
            ));
        };
        let word = word.trim();
        if word.is_empty() {
            return Err(Error::parse(source_name, lineno, "empty word"));
        }
        let sememes: Vec<String> = descriptors
            .split([',', '，', '、'])
            .filter_map(sememe_identifier)
            .collect();
        if sememes.is_empty() {
            return Err(Error::parse(source_name, lineno, "empty sememe list"));
        }
        lexicon.push(SememeEntry {
            word: word.to_owned(),
            pos: pos.trim().to_owned(),
            sememes,
        });
    }
    Ok(lexicon)
}

/// Strips relation markers and any leading Latin gloss from one descriptor:
/// `"*borrow 借入"` → `"借入"`. A descriptor that is only a Latin word is
/// kept as is.
fn sememe_identifier(descriptor: &str) -> Option<String> {
    let is_noise = |c: char| c.is_whitespace() || RELATION_MARKERS.contains(&c);
    let parts: Vec<&str> = descriptor
        .split(is_noise)
        .filter(|p| !p.is_empty())
        .collect();
    let is_latin = |p: &str| p.chars().all(|c| c.is_ascii_alphabetic() || c == '-' || c == '_');
    let kept: Vec<&str> = parts
        .iter()
        .copied()
        .skip_while(|p| is_latin(p))
        .collect();
    match (kept.is_empty(), parts.last()) {
        (false, _) => Some(kept.join("")),
        (true, Some(last)) => Some((*last).to_owned()),
        (true, None) => None,
    }
}

/// The original corpus followed by one copy per rank `1..=max_rank`, where
/// each word with at least `rank` sememes (in its first sense) is replaced by
/// its rank-th sememe.
pub fn generate_replacement_corpora(
    corpus: &Corpus,
    lexicon: &SememeLexicon,
    max_rank: usize,
) -> Corpus {
    assert!(max_rank >= 1, "max_rank must be positive");
    let mut out = corpus.sentences().to_vec();
    for rank in 0..max_rank {
        out.extend(corpus.sentences().iter().map(|sentence| {
            sentence
                .iter()
                .map(|token| match lexicon.primary(token) {
                    Some(e) if e.sememes.len() > rank => e.sememes[rank].clone(),
                    _ => token.clone(),
                })
                .collect::<Vec<_>>()
        }));
    }
    Corpus::new(out)
}

/// Trains one space over the original corpus and its sememe-replaced
/// copies, so sememes and surviving words share coordinates.
pub fn build_sememe_space(
    corpus: &Corpus,
    lexicon: &SememeLexicon,
    config: &TrainConfig,
    max_rank: usize,
) -> Result<EmbeddingSpace> {
    let replaced = generate_replacement_corpora(corpus, lexicon, max_rank);
    let mut space = train_embeddings(&replaced, config)?;
    space.set_name("sememe");
    Ok(space)
}

/// Sum of the sememe vectors of `word`'s first sense, skipping sememes that
/// have no vector. `None` if the word is unknown or no sememe has a vector.
///
/// Sememes are summed in sorted order so the result depends only on the
/// sememe multiset.
pub fn hownet_vector(word: &str, lexicon: &SememeLexicon, space: &EmbeddingSpace) -> Option<Vec<f64>> {
    let entry = lexicon.primary(word)?;
    let mut sememes: Vec<&str> = entry.sememes.iter().map(String::as_str).collect();
    sememes.sort_unstable();

    let mut sum: Option<Vec<f64>> = None;
    for v in sememes.into_iter().filter_map(|s| space.lookup(s)) {
        match &mut sum {
            Some(acc) => acc.iter_mut().zip(v).for_each(|(a, x)| *a += x),
            None => sum = Some(v.to_vec()),
        }
    }
    sum
}

/// Hownet vectors for every lexicon word that has one.
pub fn hownet_space(lexicon: &SememeLexicon, space: &EmbeddingSpace) -> EmbeddingSpace {
    let mut out = EmbeddingSpace::new("hownet", space.dim());
    for word in lexicon.words() {
        if let Some(v) = hownet_vector(word, lexicon, space) {
            out.insert(word, &v);
        }
    }
    out
}

/// Lazily computes Hownet vectors from a lexicon and a sememe space.
#[derive(Clone, Copy)]
pub struct HownetSource<'a> {
    pub lexicon: &'a SememeLexicon,
    pub space: &'a EmbeddingSpace,
}

impl VectorSource for HownetSource<'_> {
    fn dim(&self) -> usize {
        self.space.dim()
    }

    fn vector(&self, token: &str) -> Option<Cow<'_, [f64]>> {
        hownet_vector(token, self.lexicon, self.space).map(Cow::Owned)
    }
}
