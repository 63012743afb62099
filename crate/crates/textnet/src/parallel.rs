//! Data-parallel stage kernels.
//!
//! Work is split into fixed-size document chunks whatever the thread count,
//! and partial results are combined with exact integer sums, so the output
//! does not depend on `--threads`.

use rayon::prelude::*;
use textnet_core::{
    BuildOptions, CooccurrenceCounter, DominantTermSet, RawDocument, TermFrequencyTable,
    TextNetwork, TokenizedDocument, Tokenizer,
};

use crate::error::{Error, Result};

pub const CHUNK_SIZE: usize = 2048;

/// Runs `f` on a pool of `threads` workers, or rayon's default pool size
/// (available cores) when `None`.
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(Error::Usage("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Usage(format!("cannot start thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Tokenizes documents in parallel, preserving input order.
pub fn tokenize_all(docs: &[RawDocument], tokenizer: &Tokenizer) -> Vec<TokenizedDocument> {
    docs.par_iter()
        .with_min_len(256)
        .map(|d| tokenizer.tokenize_document(d))
        .collect()
}

pub fn count_terms(docs: &[TokenizedDocument]) -> TermFrequencyTable {
    docs.par_chunks(CHUNK_SIZE)
        .map(textnet_core::count_terms)
        .reduce(TermFrequencyTable::new, |mut a, b| {
            a.merge(b);
            a
        })
}

pub fn build_graph(
    docs: &[TokenizedDocument],
    dominant: &DominantTermSet,
    options: BuildOptions,
) -> TextNetwork {
    docs.par_chunks(CHUNK_SIZE)
        .map(|chunk| {
            let mut counter = CooccurrenceCounter::new(dominant);
            for d in chunk {
                counter.add_document(&d.tokens);
            }
            counter
        })
        .reduce(
            || CooccurrenceCounter::new(dominant),
            |mut a, b| {
                a.merge(b).expect("counters share the dominant set");
                a
            },
        )
        .finish(options)
}
