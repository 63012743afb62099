//! Core algorithms for network text analysis.
//!
//! A corpus of short documents is filtered, normalized into token
//! sequences, reduced to its dominant terms and summarized as an undirected
//! weighted co-occurrence network. Word groups are then read off the network
//! with modularity-based community detection, and node centrality ranks the
//! most influential terms.
//!
//! This crate is `no_std` and only needs `alloc`. File formats, parallel
//! execution and the command line live in the `textnet` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analytics;
pub mod corpus;
pub mod error;
pub mod graph;
pub mod report;
pub mod stats;
pub mod tokenize;

pub use analytics::{
    centrality, detect_communities, detect_communities_traced, modularity, CentralityTable,
    Partition, TraceEvent, TraceStep,
};
pub use corpus::{filter_corpus, CorpusFilterSpec, CorpusProfile, FilterRule, RawDocument};
pub use error::Error;
pub use graph::{
    build_graph, compute_association, top_pairs, AssociationMetrics, BuildOptions,
    CooccurrenceCounter, Edge, TextNetwork, WordPair,
};
pub use report::{build_report, render_tables, Community, SummaryReport};
pub use stats::{
    count_terms, emit_wordcloud_data, select_dominant, DominantTermSet, TermCounts,
    TermFrequencyTable,
};
pub use tokenize::{
    normalize, tokenize, PhraseDictionary, StopwordList, TokenizedDocument, Tokenizer,
};

pub type Result<T, E = Error> = core::result::Result<T, E>;
