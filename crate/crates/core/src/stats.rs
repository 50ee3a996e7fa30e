//! Descriptive statistics over a built dataset.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::querify::RcExample;
use crate::splits::LanguageSplit;
use crate::text::{whitespace_tokens, word_types};

/// Per-language counts. `pos`/`neg` count distinct contexts, the starred
/// columns count examples (contexts times templates).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    pub pos: usize,
    pub neg: usize,
    pub pos_star: usize,
    pub neg_star: usize,
}

/// Languages in `languages` with no examples get a zero row.
pub fn count_table(examples: &[RcExample], languages: &[String]) -> BTreeMap<String, CountRow> {
    let mut contexts: BTreeMap<&str, (BTreeSet<&str>, BTreeSet<&str>)> = BTreeMap::new();
    let mut out: BTreeMap<String, CountRow> = languages.iter().map(|l| (l.clone(), CountRow::default())).collect();
    for e in examples {
        let row = out.entry(e.lang.clone()).or_default();
        let (pos, neg) = contexts.entry(&e.lang).or_default();
        if e.is_negative {
            row.neg_star += 1;
            neg.insert(&e.context_id);
        } else {
            row.pos_star += 1;
            pos.insert(&e.context_id);
        }
    }
    for (lang, (pos, neg)) in contexts {
        let row = out.get_mut(lang).expect("row inserted above");
        row.pos = pos.len();
        row.neg = neg.len();
    }
    out
}

/// Positive triples per property, most frequent first, ties by pid.
pub fn top_properties(examples: &[RcExample], n: usize) -> BTreeMap<String, Vec<(String, usize)>> {
    let mut triples: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for e in examples.iter().filter(|e| !e.is_negative) {
        triples.entry(&e.lang).or_default().insert(&e.triple_id);
    }
    triples
        .into_iter()
        .map(|(lang, ids)| {
            let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
            for id in ids {
                *counts.entry(crate::slotfill::split_triple_id(id).1).or_default() += 1;
            }
            let mut ranked: Vec<(String, usize)> = counts.into_iter().map(|(p, c)| (p.to_string(), c)).collect();
            ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            ranked.truncate(n);
            (lang.to_string(), ranked)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapMatrix {
    pub languages: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pid: Option<String>,
    pub matrix: Vec<Vec<usize>>,
}

impl OverlapMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<usize> {
        let i = self.languages.iter().position(|l| l == a)?;
        let j = self.languages.iter().position(|l| l == b)?;
        Some(self.matrix[i][j])
    }

    /// Matrix for gnuplot's `matrix rowheaders columnheaders`.
    pub fn to_gnuplot(&self) -> String {
        let mut out = String::from("lang");
        for l in &self.languages {
            let _ = write!(out, " {}", l);
        }
        out.push('\n');
        for (l, row) in self.languages.iter().zip(&self.matrix) {
            out.push_str(l);
            for v in row {
                let _ = write!(out, " {}", v);
            }
            out.push('\n');
        }
        out
    }
}

/// Intersection sizes of the languages' triple-id sets, optionally for one
/// property only.
pub fn overlap_matrix(examples: &[RcExample], languages: &[String], pid: Option<&str>) -> OverlapMatrix {
    let mut sets: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for e in examples.iter().filter(|e| pid.is_none_or(|p| e.pid() == p)) {
        sets.entry(&e.lang).or_default().insert(&e.triple_id);
    }
    let empty = BTreeSet::new();
    let matrix = languages
        .iter()
        .map(|a| {
            let sa = sets.get(a.as_str()).unwrap_or(&empty);
            languages
                .iter()
                .map(|b| sa.intersection(sets.get(b.as_str()).unwrap_or(&empty)).count())
                .collect()
        })
        .collect();
    OverlapMatrix { languages: languages.to_vec(), pid: pid.map(str::to_string), matrix }
}

/// Rounded mean whitespace token count of the contexts in each split.
/// Splits with no examples are left out.
pub fn context_length_stats(
    examples: &[RcExample],
    splits: &BTreeMap<String, LanguageSplit>,
) -> BTreeMap<String, BTreeMap<String, u64>> {
    let by_id: BTreeMap<&str, &RcExample> = examples.iter().map(|e| (e.id.as_str(), e)).collect();
    let mut out = BTreeMap::new();
    for (lang, split) in splits {
        let mut row = BTreeMap::new();
        for (name, ids) in [("train", &split.train), ("dev", &split.dev), ("test", &split.test)] {
            let lengths: Vec<usize> =
                ids.iter().filter_map(|id| by_id.get(id.as_str())).map(|e| whitespace_tokens(&e.context)).collect();
            if let Some(mean) = mean_rounded(&lengths) {
                row.insert(name.to_string(), mean);
            }
        }
        out.insert(lang.clone(), row);
    }
    out
}

fn mean_rounded(values: &[usize]) -> Option<u64> {
    if values.is_empty() {
        return None;
    }
    let sum: usize = values.iter().sum();
    Some((sum as f64 / values.len() as f64).round() as u64)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldCoverage {
    pub types: usize,
    pub covered: usize,
    /// Rounded percentage; absent when the field has no types.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub percent: Option<u32>,
}

impl FieldCoverage {
    fn new(types: &BTreeSet<String>, vocab: &BTreeSet<String>) -> Self {
        let covered = types.iter().filter(|t| vocab.contains(*t)).count();
        let percent = (!types.is_empty()).then(|| (100.0 * covered as f64 / types.len() as f64).round() as u32);
        FieldCoverage { types: types.len(), covered, percent }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    pub context: FieldCoverage,
    pub question: FieldCoverage,
}

/// One token per line; entries are lowercased to match the type extraction.
pub fn load_vocab(path: &Path) -> Result<BTreeSet<String>> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(content.lines().map(str::trim).filter(|t| !t.is_empty()).map(str::to_lowercase).collect())
}

/// Type-level coverage of contexts and questions by a vocabulary.
pub fn vocab_coverage(examples: &[RcExample], vocab: &BTreeSet<String>) -> BTreeMap<String, Coverage> {
    let mut fields: BTreeMap<&str, (BTreeSet<String>, BTreeSet<String>)> = BTreeMap::new();
    for e in examples {
        let (ctx, q) = fields.entry(&e.lang).or_default();
        ctx.extend(word_types(&e.context));
        q.extend(word_types(&e.question));
    }
    fields
        .into_iter()
        .map(|(lang, (ctx, q))| {
            (lang.to_string(), Coverage { context: FieldCoverage::new(&ctx, vocab), question: FieldCoverage::new(&q, vocab) })
        })
        .collect()
}
