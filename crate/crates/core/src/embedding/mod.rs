//! Embedding spaces: storage, lookup, cosine similarity and the word2vec
//! text vector format.

use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};
use crate::textio;

mod train;

pub use train::{
    corpus_to_characters, negative_sampling_loss, negative_sampling_update, train_embeddings,
    Architecture, TrainConfig,
};

/// Anything that maps a token to a fixed-dimension vector.
pub trait VectorSource {
    fn dim(&self) -> usize;

    fn vector(&self, token: &str) -> Option<Cow<'_, [f64]>>;
}

/// A token-indexed matrix of finite `dim`-dimensional vectors. Tokens keep
/// their insertion order, which is also the order they are written in.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingSpace {
    name: String,
    dim: usize,
    tokens: Vec<String>,
    index: HashMap<String, usize>,
    data: Vec<f64>,
}

impl EmbeddingSpace {
    /// Panics if `dim` is zero.
    pub fn new(name: impl Into<String>, dim: usize) -> Self {
        assert!(dim > 0, "embedding dimension must be positive");
        EmbeddingSpace {
            name: name.into(),
            dim,
            tokens: Vec::new(),
            index: HashMap::new(),
            data: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Inserts or replaces the vector for `token`.
    ///
    /// Panics on a dimension mismatch or a non-finite component.
    pub fn insert(&mut self, token: impl Into<String>, vector: &[f64]) {
        assert_eq!(vector.len(), self.dim, "vector length must equal dim");
        assert!(
            vector.iter().all(|x| x.is_finite()),
            "embedding components must be finite"
        );
        let token = token.into();
        match self.index.get(&token) {
            Some(&i) => self.data[i * self.dim..(i + 1) * self.dim].copy_from_slice(vector),
            None => {
                self.index.insert(token.clone(), self.tokens.len());
                self.tokens.push(token);
                self.data.extend_from_slice(vector);
            }
        }
    }

    pub fn lookup(&self, token: &str) -> Option<&[f64]> {
        self.index
            .get(token)
            .map(|&i| &self.data[i * self.dim..(i + 1) * self.dim])
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.tokens
            .iter()
            .map(String::as_str)
            .zip(self.data.chunks_exact(self.dim))
    }

    /// word2vec text format: a `vocab_size dim` header then one
    /// `token v1 ... vd` row per token. Components are written in Rust's
    /// shortest round-trip decimal form, so reloading is lossless.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.len(), self.dim).unwrap();
        for (token, v) in self.iter() {
            out.push_str(token);
            for x in v {
                write!(out, " {x}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        textio::write_file(path, &self.to_text())
    }

    /// Loads a space, naming it after the file stem.
    pub fn load(path: &Path) -> Result<Self> {
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Self::parse(textio::open(path)?, &textio::source_name(path), name)
    }

    pub fn parse<R: BufRead>(reader: R, source_name: &str, name: String) -> Result<Self> {
        let lines = textio::read_lines(reader, source_name)?;
        let mut lines = lines.into_iter();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(source_name, 1, "missing header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (rows, dim) = match fields[..] {
            [r, d] => match (r.parse::<usize>(), d.parse::<usize>()) {
                (Ok(r), Ok(d)) => (r, d),
                _ => return Err(Error::parse(source_name, 1, format!("malformed header {header:?}"))),
            },
            _ => return Err(Error::parse(source_name, 1, format!("malformed header {header:?}"))),
        };

        if dim == 0 {
            return Err(Error::parse(source_name, 1, "dimension must be positive"));
        }
        let mut space = EmbeddingSpace::new(name, dim);
        let mut row = Vec::with_capacity(dim);
        for (lineno, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split([' ', '\t']).filter(|f| !f.is_empty());
            let token = fields.next().expect("non-blank line has a field");
            row.clear();
            for f in fields {
                let x: f64 = f.parse().map_err(|_| {
                    Error::parse(source_name, lineno, format!("invalid component {f:?}"))
                })?;
                if !x.is_finite() {
                    return Err(Error::parse(source_name, lineno, "non-finite component"));
                }
                row.push(x);
            }
            if row.len() != dim {
                return Err(Error::parse(
                    source_name,
                    lineno,
                    format!("expected {dim} components, found {}", row.len()),
                ));
            }
            if space.contains(token) {
                return Err(Error::parse(source_name, lineno, format!("duplicate token {token:?}")));
            }
            space.insert(token, &row);
        }
        if space.len() != rows {
            return Err(Error::parse(
                source_name,
                1,
                format!("header declares {rows} rows, found {}", space.len()),
            ));
        }
        Ok(space)
    }
}

impl VectorSource for EmbeddingSpace {
    fn dim(&self) -> usize {
        self.dim
    }

    fn vector(&self, token: &str) -> Option<Cow<'_, [f64]>> {
        self.lookup(token).map(Cow::Borrowed)
    }
}

pub fn save_space(space: &EmbeddingSpace, path: &Path) -> Result<()> {
    space.save(path)
}

pub fn load_space(path: &Path) -> Result<EmbeddingSpace> {
    EmbeddingSpace::load(path)
}

/// `u·v / (|u||v|)`, clamped to `[-1, 1]`; zero if either vector is zero.
///
/// Panics if the lengths differ.
pub fn cosine(u: &[f64], v: &[f64]) -> f64 {
    assert_eq!(u.len(), v.len(), "cosine of vectors with different lengths");
    let (mut dot, mut nu, mut nv) = (0.0, 0.0, 0.0);
    for (a, b) in u.iter().zip(v) {
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    if nu == 0.0 || nv == 0.0 {
        return 0.0;
    }
    (dot / (nu.sqrt() * nv.sqrt())).clamp(-1.0, 1.0)
}
