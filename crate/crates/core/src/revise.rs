//! Revision of rare and unseen word vectors from their morphological
//! neighbours, and blending with the original vectors.

use std::collections::BTreeSet;

use crate::corpus::Vocabulary;
use crate::embedding::EmbeddingSpace;
use crate::morphsim::{top_k_similar, SimilarityModel};

/// Five-bucket term-frequency weight:
///
/// | tf          | f |
/// |-------------|---|
/// | > 100       | 4 |
/// | (20, 100]   | 3 |
/// | (5, 20]     | 2 |
/// | (2, 5]      | 1 |
/// | ≤ 2         | 0 |
pub fn tf_bucket(tf: u64) -> u8 {
    match tf {
        0..=2 => 0,
        3..=5 => 1,
        6..=20 => 2,
        21..=100 => 3,
        _ => 4,
    }
}

/// `Σ f(tf(n))·v(n) / Σ f(tf(n))` over neighbours that have a vector, or
/// their plain mean when every weight is zero. `None` if no neighbour has a
/// vector.
///
/// Contributions are accumulated in word order so the result does not
/// depend on the order of `neighbors`.
pub fn similar_word_vector(
    neighbors: &[(String, f64)],
    space: &EmbeddingSpace,
    vocab: &Vocabulary,
) -> Option<Vec<f64>> {
    let mut present: Vec<(&str, &[f64], f64)> = neighbors
        .iter()
        .filter_map(|(w, _)| {
            space
                .lookup(w)
                .map(|v| (w.as_str(), v, f64::from(tf_bucket(vocab.term_frequency(w)))))
        })
        .collect();
    if present.is_empty() {
        return None;
    }
    present.sort_by(|a, b| a.0.cmp(b.0));
    present.dedup_by(|a, b| a.0 == b.0);

    let total: f64 = present.iter().map(|p| p.2).sum();
    let uniform = total == 0.0;
    let norm = if uniform { present.len() as f64 } else { total };

    let mut out = vec![0.0; space.dim()];
    for (_, v, w) in present {
        let w = if uniform { 1.0 } else { w };
        for (o, x) in out.iter_mut().zip(v) {
            *o += w * x;
        }
    }
    out.iter_mut().for_each(|o| *o /= norm);
    Some(out)
}

/// `C1·original + C2·similar` with `C1 = f(tf)/4` and `C2 = 1 - C1`. A single
/// present input is returned unchanged.
///
/// Panics if both inputs are absent or their lengths differ.
pub fn combine(original: Option<&[f64]>, similar: Option<&[f64]>, tf: u64) -> Vec<f64> {
    match (original, similar) {
        (None, None) => panic!("combine needs at least one vector"),
        (Some(o), None) => o.to_vec(),
        (None, Some(s)) => s.to_vec(),
        (Some(o), Some(s)) => {
            assert_eq!(o.len(), s.len(), "combined vectors differ in length");
            match tf_bucket(tf) {
                4 => o.to_vec(),
                0 => s.to_vec(),
                f => {
                    let c1 = f64::from(f) / 4.0;
                    let c2 = 1.0 - c1;
                    o.iter().zip(s).map(|(a, b)| c1 * a + c2 * b).collect()
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CombinedSpaceConfig {
    /// Words with `tf <= rare_tf_threshold` are revised.
    pub rare_tf_threshold: u64,
    pub k: usize,
}

impl Default for CombinedSpaceConfig {
    fn default() -> Self {
        CombinedSpaceConfig {
            rare_tf_threshold: 2,
            k: 5,
        }
    }
}

/// Builds the combined space over `targets`: frequent words keep their
/// original vector, rare and unseen words get the blend of their original
/// vector (if any) and the vector of their top-k morphological neighbours.
/// Words with neither are left out. Tokens are stored in sorted order.
pub fn build_combined_space<'a, I>(
    targets: I,
    original: &EmbeddingSpace,
    model: &SimilarityModel,
    vocab: &Vocabulary,
    config: &CombinedSpaceConfig,
) -> EmbeddingSpace
where
    I: IntoIterator<Item = &'a str>,
{
    assert!(config.k >= 1, "k must be positive");
    let targets: BTreeSet<&str> = targets.into_iter().collect();
    let mut out = EmbeddingSpace::new("combined", original.dim());
    for word in targets {
        let tf = vocab.term_frequency(word);
        let orig = original.lookup(word);
        if tf > config.rare_tf_threshold {
            if let Some(v) = orig {
                out.insert(word, v);
                continue;
            }
        }
        let neighbors = top_k_similar(model, word, vocab, config.k);
        let similar = similar_word_vector(&neighbors, original, vocab);
        if orig.is_none() && similar.is_none() {
            continue;
        }
        out.insert(word, &combine(orig, similar.as_deref(), tf));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Corpus;

    #[test]
    fn bucket_boundaries() {
        let cases = [(150, 4), (101, 4), (100, 3), (21, 3), (20, 2), (6, 2), (5, 1), (3, 1), (2, 0), (0, 0)];
        for (tf, f) in cases {
            assert_eq!(tf_bucket(tf), f, "f({tf})");
        }
    }

    fn vocab_with(counts: &[(&str, usize)]) -> Vocabulary {
        let sentence: Vec<&str> = counts
            .iter()
            .flat_map(|&(t, n)| std::iter::repeat_n(t, n))
            .collect();
        Vocabulary::build(&Corpus::from_tokens(&[sentence]), 1)
    }

    #[test]
    fn weighted_average_of_neighbors() {
        let vocab = vocab_with(&[("u", 150), ("v", 10), ("z", 1)]);
        let mut space = EmbeddingSpace::new("o", 2);
        space.insert("u", &[1.0, 0.0]);
        space.insert("v", &[0.0, 3.0]);
        space.insert("z", &[9.0, 9.0]);
        let n = |ws: &[&str]| ws.iter().map(|w| ((*w).to_owned(), 0.5)).collect::<Vec<_>>();

        let out = similar_word_vector(&n(&["u", "v"]), &space, &vocab).unwrap();
        assert!((out[0] - 4.0 / 6.0).abs() < 1e-15);
        assert!((out[1] - 6.0 / 6.0).abs() < 1e-15);

        assert_eq!(similar_word_vector(&n(&["v"]), &space, &vocab).unwrap(), vec![0.0, 3.0]);
        assert_eq!(similar_word_vector(&n(&["z"]), &space, &vocab).unwrap(), vec![9.0, 9.0]);
        assert_eq!(similar_word_vector(&n(&["missing"]), &space, &vocab), None);
    }

    #[test]
    fn all_zero_buckets_fall_back_to_mean() {
        let vocab = vocab_with(&[("p", 1), ("q", 2)]);
        let mut space = EmbeddingSpace::new("o", 1);
        space.insert("p", &[1.0]);
        space.insert("q", &[3.0]);
        let n = vec![("p".to_owned(), 0.9), ("q".to_owned(), 0.8)];
        assert_eq!(similar_word_vector(&n, &space, &vocab), Some(vec![2.0]));
    }

    #[test]
    fn combine_endpoints_and_midpoint() {
        let o = [1.0, -2.0, 0.5];
        let s = [3.0, 4.0, -0.5];
        assert_eq!(combine(Some(&o), Some(&s), 500), o.to_vec());
        assert_eq!(combine(Some(&o), Some(&s), 0), s.to_vec());
        assert_eq!(combine(Some(&o), Some(&s), 10), vec![2.0, 1.0, 0.0]);
        assert_eq!(combine(Some(&o), None, 0), o.to_vec());
        assert_eq!(combine(None, Some(&s), 0), s.to_vec());
    }

    #[test]
    #[should_panic(expected = "at least one")]
    fn combine_nothing_panics() {
        combine(None, None, 3);
    }
}
