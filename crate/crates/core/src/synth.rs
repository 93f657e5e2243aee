//! Seeded synthetic data: a two-cluster co-occurrence corpus and a small
//! Chinese-like temporal tagging world (corpus, tagged sentences, sememe
//! lexicon, synonym thesaurus, similarity judgements).
//!
//! In the temporal world every token ending in [`DATE_CHAR`] is a
//! single-token `Date` entity. A fraction of the token types never occurs
//! in the embedding corpus, so they are unseen at embedding time but share
//! characters with seen types.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Corpus, TaggedSentence};
use crate::eval::Judgement;
use crate::morphsim::SynonymThesaurus;
use crate::sememe::{SememeEntry, SememeLexicon};
use crate::tagger::OUTSIDE;

/// Sentences drawn from `{a1..a5}` or `{b1..b5}`, never mixing the two.
pub fn two_cluster_corpus(sentences: usize, seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clusters: [Vec<String>; 2] = [
        (1..=5).map(|i| format!("a{i}")).collect(),
        (1..=5).map(|i| format!("b{i}")).collect(),
    ];
    let mut out = Vec::with_capacity(sentences);
    for _ in 0..sentences {
        let cluster = &clusters[rng.gen_range(0..2)];
        let len = rng.gen_range(5..=8);
        out.push(
            (0..len)
                .map(|_| cluster.choose(&mut rng).unwrap().clone())
                .collect(),
        );
    }
    Corpus::new(out)
}

pub const DATE_CHAR: char = '日';
pub const DATE_TYPE: &str = "Date";

const DIGITS: [&str; 10] = ["一", "二", "三", "四", "五", "六", "七", "八", "九", "十"];

fn chinese_number(n: usize) -> String {
    assert!((1..=99).contains(&n));
    let (tens, ones) = (n / 10, n % 10);
    let mut s = String::new();
    if tens > 1 {
        s.push_str(DIGITS[tens - 1]);
    }
    if tens >= 1 {
        s.push('十');
    }
    if ones > 0 {
        s.push_str(DIGITS[ones - 1]);
    }
    s
}

/// A class of content words with the sememes every member carries.
#[derive(Clone, Debug)]
struct WordClass {
    id: String,
    sememes: Vec<String>,
    words: Vec<String>,
    is_date: bool,
}

const NOUN_SUFFIXES: [(&str, &str); 10] = [
    ("部", "机构"),
    ("院", "场所"),
    ("局", "机构"),
    ("厂", "工厂"),
    ("会", "团体"),
    ("省", "地方"),
    ("市", "地方"),
    ("队", "团体"),
    ("品", "物品"),
    ("者", "人"),
];
const PREFIXES: [&str; 24] = [
    "政", "经", "文", "科", "教", "农", "工", "商", "财", "法", "医", "体", "新", "东", "西", "南",
    "北", "中", "外", "林", "水", "电", "交", "军",
];
const FUNCTION_WORDS: [&str; 12] = ["在", "于", "的", "了", "是", "和", "将", "对", "从", "到", "把", "被"];
const VERBS: [&str; 10] = ["举行", "召开", "发布", "访问", "开幕", "结束", "宣布", "成立", "通过", "签署"];

fn vocabulary_classes() -> Vec<WordClass> {
    let mut classes = Vec::new();
    classes.push(WordClass {
        id: "day".into(),
        sememes: vec!["时间".into(), "日".into()],
        words: (1..=31)
            .map(|n| format!("{}{DATE_CHAR}", chinese_number(n)))
            .chain(["今日", "昨日", "明日", "节日", "周日"].map(String::from))
            .collect(),
        is_date: true,
    });
    for m in 1..=12 {
        classes.push(WordClass {
            id: format!("md{m:02}"),
            sememes: vec!["时间".into(), "月份".into(), "日".into()],
            words: (1..=31)
                .map(|d| format!("{}月{}{DATE_CHAR}", chinese_number(m), chinese_number(d)))
                .collect(),
            is_date: true,
        });
    }
    classes.push(WordClass {
        id: "month".into(),
        sememes: vec!["时间".into(), "月份".into()],
        words: (1..=12).map(|m| format!("{}月", chinese_number(m))).collect(),
        is_date: false,
    });
    for (suffix, sememe) in [("人", "人"), ("个", "单位"), ("次", "次数"), ("年", "年份")] {
        classes.push(WordClass {
            id: format!("count-{suffix}"),
            sememes: vec!["数量".into(), sememe.into()],
            words: (1..=31).map(|n| format!("{}{suffix}", chinese_number(n))).collect(),
            is_date: false,
        });
    }
    classes.push(WordClass {
        id: "ri-prefix".into(),
        sememes: vec!["文书".into()],
        words: ["日本", "日报", "日程", "日期", "日常"].map(String::from).to_vec(),
        is_date: false,
    });
    for (suffix, sememe) in NOUN_SUFFIXES {
        classes.push(WordClass {
            id: format!("noun-{suffix}"),
            sememes: vec![sememe.into(), suffix.into()],
            words: PREFIXES.iter().map(|p| format!("{p}{suffix}")).collect(),
            is_date: false,
        });
    }
    classes
}

#[derive(Clone, Debug, PartialEq)]
pub struct TemporalConfig {
    pub tagged_sentences: usize,
    pub embedding_sentences: usize,
    /// Fraction of content-word types withheld from the embedding corpus.
    pub unseen_fraction: f64,
    pub seed: u64,
}

impl Default for TemporalConfig {
    fn default() -> Self {
        TemporalConfig {
            tagged_sentences: 500,
            embedding_sentences: 3000,
            unseen_fraction: 0.2,
            seed: 2016,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TemporalFixture {
    /// Unlabelled text without any unseen type.
    pub embedding_corpus: Corpus,
    pub tagged: Vec<TaggedSentence>,
    pub lexicon: SememeLexicon,
    pub thesaurus: SynonymThesaurus,
    /// Content-word types absent from `embedding_corpus`.
    pub unseen: BTreeSet<String>,
    pub date_words: BTreeSet<String>,
}

struct Generator {
    dates: Vec<String>,
    others: Vec<String>,
}

impl Generator {
    fn sentence(&self, rng: &mut ChaCha8Rng) -> Vec<String> {
        let mut s: Vec<String> = Vec::new();
        let n_dates = match rng.gen_range(0..10) {
            0..=2 => 0,
            3..=7 => 1,
            _ => 2,
        };
        let n_content = rng.gen_range(2..=5);
        let mut slots: Vec<bool> = std::iter::repeat_n(true, n_dates)
            .chain(std::iter::repeat_n(false, n_content))
            .collect();
        slots.shuffle(rng);
        for is_date in slots {
            let word = if is_date {
                self.dates.choose(rng).unwrap()
            } else {
                self.others.choose(rng).unwrap()
            };
            // dates lean on 于/在 but other words use them too
            let cue = if is_date { 0.8 } else { 0.1 };
            if rng.gen_bool(cue) {
                s.push(["于", "在"][rng.gen_range(0..2)].to_owned());
            } else if rng.gen_bool(0.5) {
                s.push(FUNCTION_WORDS.choose(rng).unwrap().to_string());
            }
            s.push(word.clone());
            if rng.gen_bool(if is_date { 0.6 } else { 0.2 }) {
                s.push(VERBS.choose(rng).unwrap().to_string());
            }
        }
        s
    }
}

fn label_for(token: &str, date_words: &BTreeSet<String>) -> String {
    if date_words.contains(token) {
        format!("B-{DATE_TYPE}")
    } else {
        OUTSIDE.to_owned()
    }
}

pub fn temporal_fixture(config: &TemporalConfig) -> TemporalFixture {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let classes = vocabulary_classes();

    let mut lexicon = SememeLexicon::new();
    let mut thesaurus = SynonymThesaurus::new();
    let mut date_words = BTreeSet::new();
    let mut all_dates = Vec::new();
    let mut all_others = Vec::new();
    for class in &classes {
        thesaurus.add_category(class.id.clone(), class.words.iter().cloned());
        for w in &class.words {
            lexicon.push(SememeEntry {
                word: w.clone(),
                pos: if class.is_date { "T" } else { "N" }.into(),
                sememes: class.sememes.clone(),
            });
            if class.is_date {
                date_words.insert(w.clone());
                all_dates.push(w.clone());
            } else {
                all_others.push(w.clone());
            }
        }
    }
    debug_assert!(date_words.iter().all(|w| w.ends_with(DATE_CHAR)));

    let mut unseen = BTreeSet::new();
    for pool in [&all_dates, &all_others] {
        let k = (pool.len() as f64 * config.unseen_fraction).round() as usize;
        unseen.extend(pool.choose_multiple(&mut rng, k).cloned());
    }

    let seen_gen = Generator {
        dates: all_dates.iter().filter(|w| !unseen.contains(*w)).cloned().collect(),
        others: all_others.iter().filter(|w| !unseen.contains(*w)).cloned().collect(),
    };
    let full_gen = Generator {
        dates: all_dates,
        others: all_others,
    };

    let embedding_corpus = Corpus::new(
        (0..config.embedding_sentences)
            .map(|_| seen_gen.sentence(&mut rng))
            .collect(),
    );
    let tagged = (0..config.tagged_sentences)
        .map(|_| {
            let tokens = full_gen.sentence(&mut rng);
            let labels = tokens.iter().map(|t| label_for(t, &date_words)).collect();
            TaggedSentence::new(tokens, labels)
        })
        .collect();

    TemporalFixture {
        embedding_corpus,
        tagged,
        lexicon,
        thesaurus,
        unseen,
        date_words,
    }
}

/// Judgement pairs over lexicon words with synthetic human scores on a
/// 1-10 scale: `1 + 9 · jaccard(sememes)` plus bounded noise.
pub fn synthetic_judgements(lexicon: &SememeLexicon, pairs: usize, seed: u64) -> Vec<Judgement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = lexicon.words();
    let mut out = Vec::with_capacity(pairs);
    let mut used = BTreeSet::new();
    while out.len() < pairs && used.len() < words.len() * words.len() {
        let a = *words.choose(&mut rng).unwrap();
        let b = *words.choose(&mut rng).unwrap();
        if a == b || !used.insert((a, b)) {
            continue;
        }
        let sa: BTreeSet<&String> = lexicon.primary(a).unwrap().sememes.iter().collect();
        let sb: BTreeSet<&String> = lexicon.primary(b).unwrap().sememes.iter().collect();
        let jaccard = sa.intersection(&sb).count() as f64 / sa.union(&sb).count() as f64;
        let noise: f64 = rng.gen_range(-0.4..0.4);
        let score = (1.0 + 9.0 * jaccard + noise).clamp(1.0, 10.0);
        out.push(Judgement {
            word_a: a.to_owned(),
            word_b: b.to_owned(),
            score: (score * 10.0).round() / 10.0,
        });
    }
    out
}

/// The small offline dataset shipped for the command-line demo.
#[derive(Clone, Debug)]
pub struct ToyDataset {
    pub corpus: Corpus,
    pub lexicon: SememeLexicon,
    pub thesaurus: SynonymThesaurus,
    pub train: Vec<TaggedSentence>,
    pub test: Vec<TaggedSentence>,
    pub judgements: Vec<Judgement>,
}

/// 20 lexicon entries, 10 thesaurus categories, 30 tagged sentences (24
/// train, 6 test) and 12 judgement pairs, cut from a temporal fixture.
pub fn toy_dataset(seed: u64) -> ToyDataset {
    let fixture = temporal_fixture(&TemporalConfig {
        tagged_sentences: 30,
        embedding_sentences: 400,
        unseen_fraction: 0.2,
        seed,
    });

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let entries = fixture.lexicon.entries();
    let mut lexicon = SememeLexicon::new();
    // keep synonym pairs with identical sememe lists in the toy lexicon
    let picks = ["五日", "六日", "十二日", "三月五日", "五月", "六月", "三人", "五人", "政部", "经部"];
    for w in picks {
        lexicon.push(fixture.lexicon.primary(w).unwrap().clone());
    }
    let mut rest: Vec<&SememeEntry> = entries
        .iter()
        .filter(|e| !picks.contains(&e.word.as_str()))
        .collect();
    rest.shuffle(&mut rng);
    for e in rest.into_iter().take(10) {
        lexicon.push(e.clone());
    }

    let mut thesaurus = SynonymThesaurus::new();
    let keep = [
        "day", "md03", "md05", "month", "count-人", "count-个", "noun-部", "noun-市", "noun-者", "ri-prefix",
    ];
    for (id, words) in fixture.thesaurus.categories() {
        if keep.contains(&id.as_str()) {
            thesaurus.add_category(id.clone(), words.iter().cloned());
        }
    }

    let judgements = synthetic_judgements(&lexicon, 12, seed);
    let mut tagged = fixture.tagged;
    let test = tagged.split_off(24);
    ToyDataset {
        corpus: fixture.embedding_corpus,
        lexicon,
        thesaurus,
        train: tagged,
        test,
        judgements,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(chinese_number(1), "一");
        assert_eq!(chinese_number(10), "十");
        assert_eq!(chinese_number(14), "十四");
        assert_eq!(chinese_number(20), "二十");
        assert_eq!(chinese_number(31), "三十一");
    }

    #[test]
    fn clusters_never_mix() {
        let c = two_cluster_corpus(50, 1);
        assert_eq!(c.len(), 50);
        for s in c.sentences() {
            let first = s[0].chars().next().unwrap();
            assert!(s.iter().all(|t| t.starts_with(first)));
        }
    }

    #[test]
    fn fixture_properties() {
        let f = temporal_fixture(&TemporalConfig {
            tagged_sentences: 100,
            embedding_sentences: 200,
            ..TemporalConfig::default()
        });
        assert_eq!(f.tagged.len(), 100);
        assert!(f.embedding_corpus.tokens().all(|t| !f.unseen.contains(t)));
        for s in &f.tagged {
            for (t, l) in s.tokens.iter().zip(&s.labels) {
                assert_eq!(t.ends_with(DATE_CHAR), l == "B-Date", "{t} {l}");
            }
        }
        let unseen_dates = f.unseen.iter().filter(|w| f.date_words.contains(*w)).count();
        let ratio = unseen_dates as f64 / f.date_words.len() as f64;
        assert!((ratio - 0.2).abs() < 0.01);
    }

    #[test]
    fn toy_sizes() {
        let toy = toy_dataset(7);
        assert_eq!(toy.lexicon.len(), 20);
        assert_eq!(toy.thesaurus.len(), 10);
        assert_eq!(toy.train.len() + toy.test.len(), 30);
        assert_eq!(toy.judgements.len(), 12);
    }
}
