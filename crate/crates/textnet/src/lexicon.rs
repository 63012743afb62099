//! Phrase dictionary and stopword files.

use std::path::Path;

use textnet_core::{PhraseDictionary, StopwordList};

use crate::error::{Error, Result};
use crate::fsutil::read_string;

const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords.txt");

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

/// Parses `surface form<TAB>canonical_token` lines; `#` starts a comment line.
pub fn parse_phrases(text: &str) -> std::result::Result<PhraseDictionary, String> {
    let mut dict = PhraseDictionary::new();
    for (line, content) in content_lines(text) {
        let mut parts = content.split('\t');
        let (Some(surface), Some(canonical), None) = (parts.next(), parts.next(), parts.next())
        else {
            return Err(format!(
                "line {line}: expected `surface form<TAB>canonical_token`"
            ));
        };
        dict.insert(surface, canonical)
            .map_err(|e| format!("line {line}: {e}"))?;
    }
    Ok(dict)
}

pub fn parse_stopwords(text: &str) -> std::result::Result<StopwordList, String> {
    StopwordList::from_words(content_lines(text).map(|(_, l)| l)).map_err(|e| e.to_string())
}

pub fn read_phrases(path: &Path) -> Result<PhraseDictionary> {
    parse_phrases(&read_string(path)?).map_err(|e| Error::data(path, e))
}

pub fn read_stopwords(path: &Path) -> Result<StopwordList> {
    parse_stopwords(&read_string(path)?).map_err(|e| Error::data(path, e))
}

/// Bundled Indonesian and English stopwords.
pub fn default_stopwords() -> StopwordList {
    parse_stopwords(DEFAULT_STOPWORDS).expect("bundled stopword list is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phrase_file_with_comments() {
        let dict = parse_phrases(
            "# entities\nmuseum angkut\tmuseum_angkut\n\nCandi Borobudur\tcandi_borobudur\r\n",
        )
        .unwrap();
        assert_eq!(dict.len(), 2);
        assert_eq!(
            dict.longest_match(&["candi", "borobudur"]),
            Some((2, "candi_borobudur"))
        );
    }

    #[test]
    fn phrase_file_errors_name_the_line() {
        let err = parse_phrases("a b\ta_b\nno tab here\n").unwrap_err();
        assert!(err.starts_with("line 2:"), "{err}");
        let err = parse_phrases("a b\ta_b\nA  B\tx\n").unwrap_err();
        assert!(err.starts_with("line 2:"), "{err}");
    }

    #[test]
    fn bundled_stopwords() {
        let stops = default_stopwords();
        for w in ["yang", "dan", "di", "the", "and", "rt"] {
            assert!(stops.contains(w), "{w}");
        }
        assert!(!stops.contains("museum"));
    }
}
