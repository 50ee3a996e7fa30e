//! Nil-aware span scoring.
//!
//! A prediction is a true positive when it is non-nil, its gold example is
//! non-nil, and its normalized form equals the normalized form of any one of
//! the gold answers. Normalization lowercases (unless case-sensitive scoring
//! is requested), strips punctuation and compares tokens as a multiset, so
//! word order does not matter. Articles are kept.
//!
//! precision = tp / non-nil predictions, recall = tp / non-nil gold examples,
//! each 0 when its denominator is 0.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::querify::RcExample;
use crate::text::{find_mention, is_punctuation};

/// A normalized answer: its tokens as a sorted multiset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnswerBag(Vec<String>);

impl AnswerBag {
    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn joined(&self) -> String {
        self.0.join(" ")
    }
}

fn normalized_tokens(s: &str, case_sensitive: bool) -> Vec<String> {
    let folded = if case_sensitive { s.to_string() } else { s.to_lowercase() };
    let stripped: String = folded.chars().filter(|&c| !is_punctuation(c)).collect();
    stripped.split_whitespace().map(str::to_string).collect()
}

pub fn normalize_answer(s: &str) -> AnswerBag {
    normalize_answer_with(s, false)
}

pub fn normalize_answer_with(s: &str, case_sensitive: bool) -> AnswerBag {
    let mut tokens = normalized_tokens(s, case_sensitive);
    tokens.sort();
    AnswerBag(tokens)
}

/// Whether `answer` occurs in `text` after normalization: its tokens appear
/// contiguously, in order, in the normalized token sequence of `text`. An
/// answer that normalizes to nothing never occurs.
pub fn contains_normalized(text: &str, answer: &str) -> bool {
    let needle = normalized_tokens(answer, false);
    if needle.is_empty() {
        return false;
    }
    let hay = normalized_tokens(text, false);
    hay.windows(needle.len()).any(|w| w == needle.as_slice())
}

/// The containment test used to reject negative contexts: normalized token
/// containment, or a raw case-insensitive mention (which also catches
/// elided forms such as `d'Amazonas`).
pub fn mentions_answer(text: &str, answer: &str) -> bool {
    contains_normalized(text, answer) || find_mention(text, answer).is_some()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub example_id: String,
    /// `None` is NIL.
    pub answer: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub tp: usize,
    pub predicted_nonnil: usize,
    pub gold_nonnil: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Gold examples without a prediction, scored as NIL.
    pub missing_predictions: usize,
}

impl EvalReport {
    fn from_counts(tp: usize, predicted_nonnil: usize, gold_nonnil: usize, missing: usize) -> Self {
        let ratio = |n: usize, d: usize| if d == 0 { 0.0 } else { n as f64 / d as f64 };
        // 2PR/(P+R) with P = tp/p and R = tp/g reduces to 2tp/(p+g)
        let f1 = if tp == 0 { 0.0 } else { ratio(2 * tp, predicted_nonnil + gold_nonnil) };
        EvalReport {
            tp,
            predicted_nonnil,
            gold_nonnil,
            precision: ratio(tp, predicted_nonnil),
            recall: ratio(tp, gold_nonnil),
            f1,
            missing_predictions: missing,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScoreOptions {
    pub case_sensitive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKey {
    Pid,
    Language,
    Template,
}

impl GroupKey {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "pid" => Some(GroupKey::Pid),
            "language" | "lang" => Some(GroupKey::Language),
            "template_id" | "template" => Some(GroupKey::Template),
            _ => None,
        }
    }

    fn of<'a>(&self, ex: &'a RcExample) -> &'a str {
        match self {
            GroupKey::Pid => ex.pid(),
            GroupKey::Language => &ex.lang,
            GroupKey::Template => &ex.template_id,
        }
    }
}

/// Checks predictions against the gold ids and indexes them by example id.
fn index_predictions<'a>(
    gold: &[RcExample],
    preds: &'a [Prediction],
) -> Result<HashMap<&'a str, Option<&'a str>>> {
    let known: std::collections::HashSet<&str> = gold.iter().map(|g| g.id.as_str()).collect();
    let mut by_id = HashMap::with_capacity(preds.len());
    for p in preds {
        if !known.contains(p.example_id.as_str()) {
            return Err(Error::UnknownExample(p.example_id.clone()));
        }
        if by_id.insert(p.example_id.as_str(), p.answer.as_deref()).is_some() {
            return Err(Error::DuplicatePrediction(p.example_id.clone()));
        }
    }
    Ok(by_id)
}

fn tally<'a>(
    gold: impl IntoIterator<Item = &'a RcExample>,
    by_id: &HashMap<&str, Option<&str>>,
    opts: ScoreOptions,
) -> EvalReport {
    let (mut tp, mut predicted, mut gold_nonnil, mut missing) = (0, 0, 0, 0);
    for ex in gold {
        let answer = match by_id.get(ex.id.as_str()) {
            Some(a) => *a,
            None => {
                missing += 1;
                None
            }
        };
        let gold_is_nil = ex.answers.is_empty();
        if !gold_is_nil {
            gold_nonnil += 1;
        }
        let Some(answer) = answer else { continue };
        predicted += 1;
        if gold_is_nil {
            continue;
        }
        let bag = normalize_answer_with(answer, opts.case_sensitive);
        if ex.answers.iter().any(|a| normalize_answer_with(a, opts.case_sensitive) == bag) {
            tp += 1;
        }
    }
    EvalReport::from_counts(tp, predicted, gold_nonnil, missing)
}

pub fn score(gold: &[RcExample], preds: &[Prediction], opts: ScoreOptions) -> Result<EvalReport> {
    let by_id = index_predictions(gold, preds)?;
    let report = tally(gold, &by_id, opts);
    if report.missing_predictions > 0 {
        log::warn!("{} gold examples had no prediction; scored as NIL", report.missing_predictions);
    }
    Ok(report)
}

pub fn score_by_group(
    gold: &[RcExample],
    preds: &[Prediction],
    key: GroupKey,
    opts: ScoreOptions,
) -> Result<BTreeMap<String, EvalReport>> {
    let by_id = index_predictions(gold, preds)?;
    let mut groups: BTreeMap<&str, Vec<&RcExample>> = BTreeMap::new();
    for ex in gold {
        groups.entry(key.of(ex)).or_default().push(ex);
    }
    Ok(groups
        .into_iter()
        .map(|(k, exs)| (k.to_string(), tally(exs, &by_id, opts)))
        .collect())
}
