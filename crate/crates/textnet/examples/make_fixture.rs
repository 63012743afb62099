//! Regenerates the bundled test corpus.
//!
//! ```text
//! cargo run -p textnet --example make_fixture -- crates/textnet/tests/fixtures
//! ```

use std::path::PathBuf;

use textnet::corpus_io::write_corpus;
use textnet::synth::{generate, phrase_file, SynthConfig};

const N_DOCS: usize = 5000;
const VOCAB: usize = 2000;
const SEED: u64 = 2017;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    std::fs::create_dir_all(&dir)?;
    let docs = generate(&SynthConfig::new(N_DOCS, VOCAB, SEED));
    write_corpus(&dir.join("corpus.jsonl"), &docs)?;
    std::fs::write(dir.join("phrases.tsv"), phrase_file())?;
    eprintln!("wrote {} documents to {}", docs.len(), dir.display());
    Ok(())
}
