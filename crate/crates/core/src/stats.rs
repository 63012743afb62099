//! Term and document frequencies, and the dominant-term selection.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::tokenize::TokenizedDocument;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TermCounts {
    /// Total occurrences across the corpus.
    pub tf: u64,
    /// Number of documents containing the term.
    pub df: u64,
}

/// Exact term counts over a corpus.
///
/// Counting is a commutative monoid: tables built over disjoint chunks of a
/// corpus can be [merged](TermFrequencyTable::merge) in any order and give
/// the table of the whole corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TermFrequencyTable {
    entries: BTreeMap<String, TermCounts>,
    n_docs: u64,
}

impl TermFrequencyTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rebuilds a table from stored counts, checking `1 <= df <= min(tf, n_docs)`.
    pub fn from_entries<I, S>(n_docs: u64, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, TermCounts)>,
        S: Into<String>,
    {
        let mut table = TermFrequencyTable {
            entries: BTreeMap::new(),
            n_docs,
        };
        for (term, counts) in entries {
            let term = term.into();
            if counts.df == 0 || counts.df > counts.tf || counts.df > n_docs {
                return Err(Error::InvalidCounts {
                    term,
                    reason: "df must satisfy 1 <= df <= min(tf, n_docs)",
                });
            }
            if table.entries.insert(term.clone(), counts).is_some() {
                return Err(Error::InvalidCounts {
                    term,
                    reason: "duplicate term",
                });
            }
        }
        Ok(table)
    }

    pub fn add_document<S: AsRef<str>>(&mut self, tokens: &[S]) {
        self.n_docs += 1;
        let mut sorted: Vec<&str> = tokens.iter().map(AsRef::as_ref).collect();
        sorted.sort_unstable();
        for group in sorted.chunk_by(|a, b| a == b) {
            let term = group[0];
            let counts = match self.entries.get_mut(term) {
                Some(c) => c,
                None => self.entries.entry(String::from(term)).or_default(),
            };
            counts.tf += group.len() as u64;
            counts.df += 1;
        }
    }

    pub fn merge(&mut self, other: TermFrequencyTable) {
        self.n_docs += other.n_docs;
        for (term, c) in other.entries {
            let e = self.entries.entry(term).or_default();
            e.tf += c.tf;
            e.df += c.df;
        }
    }

    pub fn get(&self, term: &str) -> Option<TermCounts> {
        self.entries.get(term).copied()
    }

    pub fn n_docs(&self) -> u64 {
        self.n_docs
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_tokens(&self) -> u64 {
        self.entries.values().map(|c| c.tf).sum()
    }

    /// Entries in lexicographic term order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, TermCounts)> {
        self.entries.iter().map(|(t, c)| (t.as_str(), *c))
    }

    /// Entries sorted by descending tf, ties by ascending term.
    pub fn ranked(&self) -> Vec<(&str, TermCounts)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_unstable_by(|a, b| rank_order((a.0, a.1.tf), (b.0, b.1.tf)));
        v
    }
}

/// Total order on (term, tf): tf descending, then term ascending.
pub fn rank_order(a: (&str, u64), b: (&str, u64)) -> Ordering {
    b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0))
}

pub fn count_terms(docs: &[TokenizedDocument]) -> TermFrequencyTable {
    let mut table = TermFrequencyTable::new();
    for doc in docs {
        table.add_document(&doc.tokens);
    }
    table
}

/// The network's node universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominantTermSet {
    pub terms: Vec<String>,
    pub min_freq: u64,
    pub max_terms: usize,
}

impl DominantTermSet {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, term: &str) -> bool {
        self.terms.iter().any(|t| t == term)
    }
}

/// Terms with `tf >= min_freq`, ranked by tf descending with lexicographic
/// tie-break, truncated to `max_terms`.
pub fn select_dominant(
    table: &TermFrequencyTable,
    min_freq: u64,
    max_terms: usize,
) -> Result<DominantTermSet> {
    if min_freq == 0 {
        return Err(Error::InvalidParameter {
            name: "min_freq",
            reason: "must be at least 1",
        });
    }
    if max_terms == 0 {
        return Err(Error::InvalidParameter {
            name: "max_terms",
            reason: "must be at least 1",
        });
    }
    let terms = table
        .ranked()
        .into_iter()
        .take_while(|(_, c)| c.tf >= min_freq)
        .take(max_terms)
        .map(|(t, _)| String::from(t))
        .collect();
    Ok(DominantTermSet {
        terms,
        min_freq,
        max_terms,
    })
}

/// The `top` highest-ranked `(term, tf)` rows, for an external word-cloud renderer.
pub fn emit_wordcloud_data(table: &TermFrequencyTable, top: usize) -> Vec<(String, u64)> {
    table
        .ranked()
        .into_iter()
        .take(top)
        .map(|(t, c)| (String::from(t), c.tf))
        .collect()
}
