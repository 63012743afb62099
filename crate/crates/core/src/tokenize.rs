//! Text normalization, phrase merging and stopword removal.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::corpus::{fold_case, RawDocument};
use crate::{Error, Result};

const URL_PREFIXES: [&str; 3] = ["http://", "https://", "www."];

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

fn is_mention_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Normalizes raw post text.
///
/// The text is case-folded; URLs (`http://`, `https://`, `www.` up to the
/// next whitespace) and user mentions (`@` followed by letters, digits or
/// `_`) are removed; every other non-alphanumeric character, including the
/// hashtag mark, becomes a space; whitespace is collapsed to single spaces.
pub fn normalize(text: &str) -> String {
    let folded = fold_case(text);
    let mut out = String::with_capacity(folded.len());
    let mut word = String::new();

    let flush = |word: &mut String, out: &mut String| {
        if !word.is_empty() {
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(word);
            word.clear();
        }
    };

    for piece in folded.split_whitespace() {
        let mut prev: Option<char> = None;
        let mut chars = piece.char_indices().peekable();
        while let Some((at, c)) = chars.next() {
            let boundary = prev.is_none_or(|p| !is_word_char(p));
            if boundary && URL_PREFIXES.iter().any(|p| piece[at..].starts_with(p)) {
                break;
            }
            if c == '@' && boundary && chars.peek().is_some_and(|&(_, n)| is_mention_char(n)) {
                flush(&mut word, &mut out);
                while chars.peek().is_some_and(|&(_, n)| is_mention_char(n)) {
                    chars.next();
                }
                prev = Some('@');
                continue;
            }
            if is_word_char(c) {
                word.push(c);
            } else {
                flush(&mut word, &mut out);
            }
            prev = Some(c);
        }
        flush(&mut word, &mut out);
    }
    out
}

/// Multi-word entity names merged into single underscore-joined tokens.
///
/// Surface forms are stored normalized and matched word by word against
/// normalized text, longest match first.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PhraseDictionary {
    // first word -> (remaining words, canonical token), longest first
    by_first: BTreeMap<String, Vec<(Vec<String>, String)>>,
    len: usize,
}

impl PhraseDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries<I, S, T>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, T)>,
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let mut dict = Self::new();
        for (surface, canonical) in entries {
            dict.insert(surface.as_ref(), canonical.as_ref())?;
        }
        Ok(dict)
    }

    pub fn insert(&mut self, surface: &str, canonical: &str) -> Result<()> {
        let normalized = normalize(surface);
        if normalized.is_empty() {
            return Err(Error::InvalidPhrase {
                surface: surface.to_string(),
                reason: "surface form is empty after normalization",
            });
        }
        let canonical = fold_case(canonical.trim());
        if canonical.is_empty() || canonical.chars().any(char::is_whitespace) {
            return Err(Error::InvalidPhrase {
                surface: surface.to_string(),
                reason: "canonical token must be non-empty and contain no whitespace",
            });
        }
        let mut words = normalized.split(' ').map(String::from);
        let first = words.next().expect("normalized text is non-empty");
        let rest: Vec<String> = words.collect();

        let bucket = self.by_first.entry(first).or_default();
        if bucket.iter().any(|(r, _)| *r == rest) {
            return Err(Error::DuplicatePhrase(normalized));
        }
        let at = bucket.partition_point(|(r, _)| r.len() >= rest.len());
        bucket.insert(at, (rest, canonical));
        self.len += 1;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Longest entry matching a prefix of `words`: (words consumed, token).
    pub fn longest_match<S: AsRef<str>>(&self, words: &[S]) -> Option<(usize, &str)> {
        let (first, rest) = words.split_first()?;
        let bucket = self.by_first.get(first.as_ref())?;
        bucket.iter().find_map(|(tail, canonical)| {
            let matches =
                tail.len() <= rest.len() && tail.iter().zip(rest).all(|(t, w)| t == w.as_ref());
            matches.then(|| (tail.len() + 1, canonical.as_str()))
        })
    }
}

/// Case-folded single-token stopwords.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopwordList {
    words: BTreeSet<String>,
}

impl StopwordList {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds the list, skipping blank entries and rejecting multi-token ones.
    pub fn from_words<I, S>(words: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = BTreeSet::new();
        for w in words {
            let w = fold_case(w.as_ref().trim());
            if w.is_empty() {
                continue;
            }
            if w.chars().any(char::is_whitespace) {
                return Err(Error::InvalidStopword(w));
            }
            set.insert(w);
        }
        Ok(StopwordList { words: set })
    }

    pub fn contains(&self, token: &str) -> bool {
        self.words.contains(token)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    pub fn remove_from(&self, tokens: &mut Vec<String>) {
        tokens.retain(|t| !self.contains(t));
    }
}

/// Ordered tokens of one document.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TokenizedDocument {
    #[cfg_attr(feature = "serde", serde(rename = "id"))]
    pub doc_id: String,
    pub tokens: Vec<String>,
}

/// Splits normalized text on whitespace, merges phrases greedily
/// (longest match, left to right, a merged span consumes its words) and then
/// drops stopwords.
pub fn tokenize(text: &str, phrases: &PhraseDictionary, stops: &StopwordList) -> Vec<String> {
    let words: Vec<&str> = text.split_whitespace().collect();
    let mut tokens = Vec::with_capacity(words.len());
    let mut i = 0;
    while i < words.len() {
        match phrases.longest_match(&words[i..]) {
            Some((consumed, canonical)) => {
                tokens.push(canonical.to_string());
                i += consumed;
            }
            None => {
                tokens.push(words[i].to_string());
                i += 1;
            }
        }
    }
    stops.remove_from(&mut tokens);
    tokens
}

/// Phrase dictionary and stopwords bundled for whole-document tokenization.
#[derive(Debug, Clone, Default)]
pub struct Tokenizer {
    pub phrases: PhraseDictionary,
    pub stopwords: StopwordList,
}

impl Tokenizer {
    pub fn new(phrases: PhraseDictionary, stopwords: StopwordList) -> Self {
        Tokenizer { phrases, stopwords }
    }

    pub fn tokenize_text(&self, text: &str) -> Vec<String> {
        tokenize(&normalize(text), &self.phrases, &self.stopwords)
    }

    pub fn tokenize_document(&self, doc: &RawDocument) -> TokenizedDocument {
        TokenizedDocument {
            doc_id: doc.id.clone(),
            tokens: self.tokenize_text(&doc.text),
        }
    }
}
