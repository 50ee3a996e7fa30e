//! Sentence segmentation and surface-form matching.
//!
//! A sentence ends at a run of `.`, `!` or `?` (plus any closing quotes or
//! brackets) that is followed by whitespace and then an uppercase letter or a
//! digit, optionally behind opening punctuation such as `¿` or `«`. A period
//! does not end a sentence when the token it closes is in the language's
//! abbreviation list, is a single capital letter (an initial), or, in German,
//! is an ordinal number such as `25.`.
//!
//! The output of [`Segmenter::segment`] is frozen by golden tests: dataset
//! builds pick "the first sentence" with it, so any change here changes
//! which contexts get extracted.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Range;
use std::path::Path;

use crate::error::Result;
use crate::tsv;

pub const DEFAULT_ABBREVIATIONS: &str = include_str!("../data/abbreviations.tsv");

const TERMINATORS: [char; 3] = ['.', '!', '?'];
const CLOSERS: [char; 8] = ['"', '\'', '”', '’', '»', ')', ']', '」'];
const OPENERS: [char; 9] = ['"', '\'', '“', '‘', '«', '(', '[', '¿', '¡'];

/// A sentence as a byte range into the segmented text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence<'a> {
    pub text: &'a str,
    pub span: Range<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct Segmenter {
    abbreviations: BTreeMap<String, BTreeSet<String>>,
}

impl Segmenter {
    pub fn parse(source: &Path, content: &str) -> Result<Self> {
        let mut abbreviations: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for row in tsv::rows(source, content, 2)? {
            abbreviations
                .entry(row.fields[0].to_string())
                .or_default()
                .insert(row.fields[1].trim().to_string());
        }
        Ok(Segmenter { abbreviations })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(path, &tsv::read(path)?)
    }

    pub fn builtin() -> Self {
        Self::parse(Path::new("data/abbreviations.tsv"), DEFAULT_ABBREVIATIONS)
            .expect("built-in abbreviation table is well formed")
    }

    fn is_abbreviation(&self, token: &str, lang: &str) -> bool {
        let Some(list) = self.abbreviations.get(lang) else {
            return false;
        };
        if list.contains(token) {
            return true;
        }
        // sentence-initial capitalisation of a lowercase entry, e.g. "Etc."
        let mut chars = token.chars();
        match chars.next() {
            Some(first) if first.is_uppercase() => {
                let lowered: String = first.to_lowercase().chain(chars).collect();
                list.contains(&lowered)
            }
            _ => false,
        }
    }

    /// Whether the period at byte `dot` closes a token that must not end a
    /// sentence.
    fn suppressed(&self, text: &str, dot: usize, lang: &str) -> bool {
        let start = text[..dot]
            .char_indices()
            .rev()
            .find(|(_, c)| c.is_whitespace())
            .map(|(i, c)| i + c.len_utf8())
            .unwrap_or(0);
        let token = text[start..=dot].trim_start_matches(|c| OPENERS.contains(&c));
        let stem = &token[..token.len() - 1];
        if stem.is_empty() {
            return false;
        }
        let mut stem_chars = stem.chars();
        let single_capital = matches!((stem_chars.next(), stem_chars.next()), (Some(c), None) if c.is_uppercase());
        let ordinal = lang == "de" && stem.chars().all(|c| c.is_ascii_digit());
        single_capital || ordinal || self.is_abbreviation(token, lang)
    }

    pub fn segment<'a>(&self, text: &'a str, lang: &str) -> Vec<Sentence<'a>> {
        let mut out = Vec::new();
        let mut start: Option<usize> = None;
        let mut chars = text.char_indices().peekable();

        while let Some((i, c)) = chars.next() {
            if start.is_none() {
                if c.is_whitespace() {
                    continue;
                }
                start = Some(i);
            }
            if !TERMINATORS.contains(&c) {
                continue;
            }
            // run of terminators, then closing punctuation
            let mut end = i + c.len_utf8();
            let mut last_terminator = i;
            while let Some(&(j, d)) = chars.peek() {
                if TERMINATORS.contains(&d) {
                    last_terminator = j;
                } else if !CLOSERS.contains(&d) {
                    break;
                }
                end = j + d.len_utf8();
                chars.next();
            }
            if !self.boundary_follows(text, end) {
                continue;
            }
            let lone_period = c == '.' && last_terminator == i;
            if lone_period && self.suppressed(text, i, lang) {
                continue;
            }
            let s = start.take().expect("sentence start is set");
            out.push(Sentence { text: &text[s..end], span: s..end });
        }
        if let Some(s) = start {
            let end = s + text[s..].trim_end().len();
            if end > s {
                out.push(Sentence { text: &text[s..end], span: s..end });
            }
        }
        out
    }

    fn boundary_follows(&self, text: &str, end: usize) -> bool {
        let rest = &text[end..];
        let trimmed = rest.trim_start();
        if trimmed.len() == rest.len() {
            return false;
        }
        let next = trimmed.trim_start_matches(|c| OPENERS.contains(&c)).chars().next();
        matches!(next, Some(c) if c.is_uppercase() || c.is_numeric())
    }
}

fn fold(c: char) -> char {
    c.to_lowercase().next().unwrap_or(c)
}

/// Finds the first case-insensitive occurrence of `needle` in `haystack` that
/// starts and ends at word boundaries. Returns its byte range in `haystack`.
pub fn find_mention(haystack: &str, needle: &str) -> Option<Range<usize>> {
    let needle: Vec<char> = needle.chars().map(fold).collect();
    if needle.is_empty() || needle.iter().all(|c| c.is_whitespace()) {
        return None;
    }
    let hay: Vec<(usize, char)> = haystack.char_indices().collect();
    if needle.len() > hay.len() {
        return None;
    }
    for s in 0..=hay.len() - needle.len() {
        let e = s + needle.len();
        if s > 0 && hay[s - 1].1.is_alphanumeric() && needle[0].is_alphanumeric() {
            continue;
        }
        if e < hay.len() && hay[e].1.is_alphanumeric() && needle[needle.len() - 1].is_alphanumeric() {
            continue;
        }
        if hay[s..e].iter().zip(&needle).all(|(&(_, h), &n)| fold(h) == n) {
            let end = hay.get(e).map(|&(b, _)| b).unwrap_or(haystack.len());
            return Some(hay[s].0..end);
        }
    }
    None
}

pub fn whitespace_tokens(s: &str) -> usize {
    s.split_whitespace().count()
}

/// Lowercased word types: split on whitespace and punctuation.
pub fn word_types(s: &str) -> BTreeSet<String> {
    s.split(|c: char| c.is_whitespace() || is_punctuation(c))
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Anything that is neither alphanumeric nor whitespace.
pub fn is_punctuation(c: char) -> bool {
    !c.is_alphanumeric() && !c.is_whitespace()
}
