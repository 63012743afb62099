//! Raw documents and the corpus filtering step.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::{Error, Result};

/// One social-media post.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RawDocument {
    pub id: String,
    pub text: String,
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Option::is_none")
    )]
    pub created_at: Option<String>,
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Vec::is_empty")
    )]
    pub tags: Vec<String>,
}

impl RawDocument {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        RawDocument {
            id: id.into(),
            text: text.into(),
            created_at: None,
            tags: Vec::new(),
        }
    }
}

/// The filter rules, in the order they are applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FilterRule {
    ExcludeKeywords,
    IncludeKeywords,
    MinTokenEstimate,
    Dedup,
}

impl FilterRule {
    pub const ALL: [FilterRule; 4] = [
        FilterRule::ExcludeKeywords,
        FilterRule::IncludeKeywords,
        FilterRule::MinTokenEstimate,
        FilterRule::Dedup,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FilterRule::ExcludeKeywords => "exclude_keywords",
            FilterRule::IncludeKeywords => "include_keywords",
            FilterRule::MinTokenEstimate => "min_token_estimate",
            FilterRule::Dedup => "dedup",
        }
    }
}

/// Which documents survive [`filter_corpus`].
///
/// Keywords are stored case-folded. The default value keeps every document.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusFilterSpec {
    include_keywords: Vec<String>,
    exclude_keywords: Vec<String>,
    min_token_estimate: usize,
    dedup: bool,
}

impl CorpusFilterSpec {
    /// Builds a spec, rejecting keyword lists that overlap after case folding.
    /// Blank keywords are ignored.
    pub fn new<I, E, S, T>(
        include_keywords: I,
        exclude_keywords: E,
        min_token_estimate: usize,
        dedup: bool,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        E: IntoIterator<Item = T>,
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let include = fold_keywords(include_keywords);
        let exclude = fold_keywords(exclude_keywords);
        if let Some(k) = include.iter().find(|k| exclude.contains(k)) {
            return Err(Error::OverlappingKeywords(k.clone()));
        }
        Ok(CorpusFilterSpec {
            include_keywords: include,
            exclude_keywords: exclude,
            min_token_estimate,
            dedup,
        })
    }

    pub fn include_keywords(&self) -> &[String] {
        &self.include_keywords
    }

    pub fn exclude_keywords(&self) -> &[String] {
        &self.exclude_keywords
    }

    pub fn min_token_estimate(&self) -> usize {
        self.min_token_estimate
    }

    pub fn dedup(&self) -> bool {
        self.dedup
    }

    /// First rule that rejects `text`, ignoring dedup.
    fn stateless_rejection(&self, text: &str) -> Option<FilterRule> {
        let needs_fold = !self.exclude_keywords.is_empty() || !self.include_keywords.is_empty();
        let folded = if needs_fold {
            fold_case(text)
        } else {
            String::new()
        };
        if self
            .exclude_keywords
            .iter()
            .any(|k| folded.contains(k.as_str()))
        {
            return Some(FilterRule::ExcludeKeywords);
        }
        if !self.include_keywords.is_empty()
            && !self
                .include_keywords
                .iter()
                .any(|k| folded.contains(k.as_str()))
        {
            return Some(FilterRule::IncludeKeywords);
        }
        if text.split_whitespace().count() < self.min_token_estimate {
            return Some(FilterRule::MinTokenEstimate);
        }
        None
    }
}

fn fold_keywords<I, S>(keywords: I) -> Vec<String>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut out: Vec<String> = Vec::new();
    for k in keywords {
        let k = fold_case(k.as_ref().trim());
        if !k.is_empty() && !out.contains(&k) {
            out.push(k);
        }
    }
    out
}

/// Unicode default lowercase mapping.
pub fn fold_case(text: &str) -> String {
    text.to_lowercase()
}

/// Key used for duplicate detection: case-folded, whitespace-collapsed text.
pub fn dedup_key(text: &str) -> String {
    let folded = fold_case(text);
    let mut key = String::with_capacity(folded.len());
    for word in folded.split_whitespace() {
        if !key.is_empty() {
            key.push(' ');
        }
        key.push_str(word);
    }
    key
}

/// Before/after counts of the filtering step, plus the number of word groups
/// once community detection has run.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CorpusProfile {
    pub n_raw: usize,
    pub n_filtered: usize,
    pub n_dropped_by_rule: BTreeMap<String, usize>,
    pub n_groups: Option<usize>,
}

impl CorpusProfile {
    /// A profile for an unfiltered corpus of `n` documents.
    pub fn unfiltered(n: usize) -> Self {
        CorpusProfile {
            n_raw: n,
            n_filtered: n,
            n_dropped_by_rule: FilterRule::ALL
                .iter()
                .map(|r| (r.name().to_string(), 0))
                .collect(),
            n_groups: None,
        }
    }

    pub fn n_dropped(&self) -> usize {
        self.n_dropped_by_rule.values().sum()
    }

    /// Checks `n_filtered <= n_raw` and exact drop accounting.
    pub fn is_consistent(&self) -> bool {
        self.n_filtered <= self.n_raw && self.n_raw - self.n_filtered == self.n_dropped()
    }
}

/// Applies the filter rules in fixed order (exclude, include, minimum token
/// estimate, dedup). A dropped document is attributed to the first rule that
/// matches it. Kept documents retain their input order.
pub fn filter_corpus(
    docs: Vec<RawDocument>,
    spec: &CorpusFilterSpec,
) -> (Vec<RawDocument>, CorpusProfile) {
    let mut profile = CorpusProfile::unfiltered(docs.len());
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut kept = Vec::with_capacity(docs.len());

    for doc in docs {
        let rejected = spec.stateless_rejection(&doc.text).or_else(|| {
            if spec.dedup && !seen.insert(dedup_key(&doc.text)) {
                Some(FilterRule::Dedup)
            } else {
                None
            }
        });
        match rejected {
            Some(rule) => {
                *profile
                    .n_dropped_by_rule
                    .get_mut(rule.name())
                    .expect("all rules are pre-registered") += 1;
            }
            None => kept.push(doc),
        }
    }

    profile.n_filtered = kept.len();
    (kept, profile)
}
