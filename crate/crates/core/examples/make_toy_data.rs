//! Writes the bundled toy dataset: `cargo run --example make_toy_data -- DIR`.

use std::path::PathBuf;

use sememevec::corpus::{write_tagged, Corpus};
use sememevec::eval::write_judgements;
use sememevec::synth::toy_dataset;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "crates/core/data/toy".into()));
    std::fs::create_dir_all(&dir)?;
    let toy = toy_dataset(2016);
    toy.corpus.save(&dir.join("corpus.txt"))?;
    toy.lexicon.save(&dir.join("lexicon.tsv"))?;
    toy.thesaurus.save(&dir.join("thesaurus.txt"))?;
    std::fs::write(dir.join("train.tagged"), write_tagged(&toy.train))?;
    std::fs::write(dir.join("test.tagged"), write_tagged(&toy.test))?;
    let plain: Vec<Vec<String>> = toy.test.iter().map(|s| s.tokens.clone()).collect();
    Corpus::new(plain).save(&dir.join("test.txt"))?;
    std::fs::write(dir.join("judgements.tsv"), write_judgements(&toy.judgements))?;
    eprintln!("wrote toy dataset to {}", dir.display());
    Ok(())
}
