//! Distant-supervision contexts.
//!
//! For every aligned page and every denormalized `(property, value)` tuple of
//! its entity, the first sentence that mentions both the entity and the value
//! becomes a positive context. Negatives are made by swapping sentences
//! between positives whose values share a type (the value entity's first
//! `instance of` class, or the literal kind) when the borrowed sentence does
//! not mention any answer of the receiving triple.
//!
//! A positive's answers are every mention in its sentence of any value of
//! the same `(entity, property)` pair, in sentence order: a sentence naming
//! Brazil and Peru answers "which country" with either.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::denormalize::{Denormalizer, SkipCounts};
use crate::evalscore::mentions_answer;
use crate::ingestion::{DocumentView, KnowledgeBase, Value};
use crate::text::{find_mention, Segmenter, Sentence};

/// Property whose value classifies an entity.
pub const INSTANCE_OF: &str = "P31";

pub fn triple_id(entity1_qid: &str, pid: &str, value_key: &str) -> String {
    format!("{}|{}|{}", entity1_qid, pid, value_key)
}

/// Splits a triple id into `(entity1, pid, value_key)`. The value key may
/// itself contain `|`.
pub fn split_triple_id(id: &str) -> (&str, &str, &str) {
    let mut parts = id.splitn(3, '|');
    let e1 = parts.next().unwrap_or("");
    let pid = parts.next().unwrap_or("");
    let value = parts.next().unwrap_or("");
    (e1, pid, value)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triple {
    pub id: String,
    pub entity1_qid: String,
    pub pid: String,
    pub value_key: String,
    /// Every acceptable answer string per language: the surface forms of all
    /// values of this `(entity, property)` pair, longest first.
    pub answer_texts: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LiteralKind {
    Time,
    Quantity,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeKey {
    EntityType(String),
    Literal(LiteralKind),
    Untyped,
}

impl fmt::Display for TypeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeKey::EntityType(q) => f.write_str(q),
            TypeKey::Literal(LiteralKind::Time) => f.write_str("literal:time"),
            TypeKey::Literal(LiteralKind::Quantity) => f.write_str("literal:quantity"),
            TypeKey::Literal(LiteralKind::Text) => f.write_str("literal:text"),
            TypeKey::Untyped => f.write_str("untyped"),
        }
    }
}

pub fn entity2_type(value: &Value, kb: &KnowledgeBase) -> TypeKey {
    match value {
        Value::Entity(qid) => kb
            .get(qid)
            .and_then(|e| {
                e.values_of(INSTANCE_OF).find_map(|v| match v {
                    Value::Entity(class) => Some(TypeKey::EntityType(class.clone())),
                    _ => None,
                })
            })
            .unwrap_or(TypeKey::Untyped),
        Value::Time(_) => TypeKey::Literal(LiteralKind::Time),
        Value::Quantity(_) => TypeKey::Literal(LiteralKind::Quantity),
        Value::Text(_) => TypeKey::Literal(LiteralKind::Text),
    }
}

/// Label then aliases, deduplicated, longest first (by character count;
/// ties keep label-then-alias order).
pub fn surfaces_for(qid: &str, lang: &str, kb: &KnowledgeBase) -> Vec<String> {
    let Some(entity) = kb.get(qid) else {
        return Vec::new();
    };
    let Some(label) = entity.label(lang) else {
        return Vec::new();
    };
    let mut out: Vec<String> = Vec::new();
    for s in std::iter::once(label).chain(entity.aliases(lang).iter().map(String::as_str)) {
        if !s.trim().is_empty() && !out.iter().any(|o| o == s) {
            out.push(s.to_string());
        }
    }
    out.sort_by_key(|s| std::cmp::Reverse(s.chars().count()));
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointSentence<'a> {
    pub index: usize,
    pub sentence: &'a str,
    /// The entity mention as written in the sentence.
    pub entity1: &'a str,
    /// The value mention as written in the sentence.
    pub entity2: &'a str,
}

/// First mention of any surface, trying longer surfaces first.
fn first_surface_match<'a>(sentence: &'a str, surfaces: &[String]) -> Option<(usize, &'a str)> {
    surfaces
        .iter()
        .find_map(|s| find_mention(sentence, s))
        .map(|r| (r.start, &sentence[r]))
}

/// The earliest sentence mentioning both entities.
pub fn find_first_joint_sentence<'a>(
    sentences: &[Sentence<'a>],
    e1_surfaces: &[String],
    e2_surfaces: &[String],
) -> Option<JointSentence<'a>> {
    sentences.iter().enumerate().find_map(|(index, s)| {
        let (_, entity1) = first_surface_match(s.text, e1_surfaces)?;
        let (_, entity2) = first_surface_match(s.text, e2_surfaces)?;
        Some(JointSentence { index, sentence: s.text, entity1, entity2 })
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveContext {
    pub triple_id: String,
    pub language: String,
    pub sentence: String,
    pub answer_strings: Vec<String>,
    pub entity1_surface: String,
    pub type_key: TypeKey,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegativeContext {
    pub triple_id: String,
    pub language: String,
    pub sentence: String,
    pub partner_triple_id: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositiveCounts {
    pub views: usize,
    pub tuples: usize,
    pub positives: usize,
    /// Tuples whose value never co-occurs with the entity in one sentence.
    pub misses: usize,
    pub skipped: SkipCounts,
}

#[derive(Debug, Clone, Default)]
pub struct PositiveBuild {
    pub triples: BTreeMap<String, Triple>,
    pub positives: Vec<PositiveContext>,
    pub counts: PositiveCounts,
}

/// The surfaces a value can be mentioned by in one language.
fn value_surfaces(value: &Value, text: &str, lang: &str, kb: &KnowledgeBase) -> Vec<String> {
    match value {
        Value::Entity(qid) => surfaces_for(qid, lang, kb),
        _ => vec![text.to_string()],
    }
}

struct ValueMention {
    key: String,
    value: Value,
    surfaces: Vec<String>,
}

pub struct SlotFiller<'a> {
    pub denormalizer: Denormalizer<'a>,
    pub segmenter: &'a Segmenter,
}

impl<'a> SlotFiller<'a> {
    pub fn new(denormalizer: Denormalizer<'a>, segmenter: &'a Segmenter) -> Self {
        SlotFiller { denormalizer, segmenter }
    }

    fn kb(&self) -> &'a KnowledgeBase {
        self.denormalizer.kb
    }

    /// Positives for every view, ordered by triple id then language.
    pub fn build_positives(&self, views: &[DocumentView<'_>]) -> PositiveBuild {
        let mut build = PositiveBuild::default();
        for view in views {
            self.positives_for_view(view, &mut build);
        }
        build
            .positives
            .sort_by(|a, b| (&a.triple_id, &a.language).cmp(&(&b.triple_id, &b.language)));
        build.counts.positives = build.positives.len();
        build
    }

    fn positives_for_view(&self, view: &DocumentView<'_>, build: &mut PositiveBuild) {
        let lang = view.language();
        let kb = self.kb();
        build.counts.views += 1;

        // denormalized values grouped by property, first occurrence of each value kept
        let mut by_pid: BTreeMap<&str, Vec<ValueMention>> = BTreeMap::new();
        for stmt in &view.entity.statements {
            let tuple = match self.denormalizer.denormalize_statement(stmt, lang) {
                Ok(t) => t,
                Err(skip) => {
                    build.counts.skipped.add(skip);
                    continue;
                }
            };
            if matches!(&stmt.value, Value::Entity(q) if q == view.qid()) {
                continue;
            }
            let values = by_pid.entry(stmt.pid.as_str()).or_default();
            if values.iter().any(|v| v.key == tuple.value_key) {
                continue;
            }
            let surfaces = value_surfaces(&stmt.value, &tuple.value_text, lang, kb);
            values.push(ValueMention { key: tuple.value_key, value: stmt.value.clone(), surfaces });
        }
        if by_pid.is_empty() {
            return;
        }

        let e1_surfaces = surfaces_for(view.qid(), lang, kb);
        let sentences = self.segmenter.segment(&view.page.text, lang);

        for (pid, values) in &by_pid {
            let mut all_surfaces: Vec<String> = Vec::new();
            for s in values.iter().flat_map(|v| &v.surfaces) {
                if !all_surfaces.contains(s) {
                    all_surfaces.push(s.clone());
                }
            }
            all_surfaces.sort_by_key(|s| std::cmp::Reverse(s.chars().count()));

            for value in values {
                build.counts.tuples += 1;
                let Some(joint) = find_first_joint_sentence(&sentences, &e1_surfaces, &value.surfaces) else {
                    build.counts.misses += 1;
                    continue;
                };
                // mentions of any value of this property, in sentence order
                let mut mentions: Vec<(usize, &str)> = values
                    .iter()
                    .filter_map(|v| first_surface_match(joint.sentence, &v.surfaces))
                    .collect();
                mentions.sort();
                let mut answers: Vec<String> = Vec::new();
                for (_, m) in mentions {
                    if !answers.iter().any(|a| a == m) {
                        answers.push(m.to_string());
                    }
                }

                let id = triple_id(view.qid(), pid, &value.key);
                let triple = build.triples.entry(id.clone()).or_insert_with(|| Triple {
                    id: id.clone(),
                    entity1_qid: view.qid().to_string(),
                    pid: pid.to_string(),
                    value_key: value.key.clone(),
                    answer_texts: BTreeMap::new(),
                });
                let texts = triple.answer_texts.entry(lang.to_string()).or_default();
                for s in all_surfaces.iter().chain(&answers) {
                    if !texts.contains(s) {
                        texts.push(s.clone());
                    }
                }
                texts.sort_by_key(|s| std::cmp::Reverse(s.chars().count()));

                build.positives.push(PositiveContext {
                    triple_id: id,
                    language: lang.to_string(),
                    sentence: joint.sentence.to_string(),
                    answer_strings: answers,
                    entity1_surface: joint.entity1.to_string(),
                    type_key: entity2_type(&value.value, kb),
                });
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NegativeCounts {
    pub negatives: usize,
    /// Positives whose quota was zero.
    pub not_selected: usize,
    /// Positives alone in their (language, type) group.
    pub singleton_group: usize,
    /// Positives whose every candidate partner mentioned one of their answers.
    pub no_valid_partner: usize,
}

fn digest_u64(parts: &[&str]) -> u64 {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("digest has 8 bytes"))
}

/// How many negatives a positive should receive. The integer part of
/// `ratio` is given to everyone; the fractional part is a per-positive
/// Bernoulli draw keyed on the triple id and language only, so the set of
/// positives that receive negatives does not depend on the seed.
pub fn negative_quota(ratio: f64, triple_id: &str, language: &str) -> usize {
    let whole = ratio.floor();
    let frac = ratio - whole;
    let draw = digest_u64(&["negative-quota", language, triple_id]) as f64 / (u64::MAX as f64 + 1.0);
    whole as usize + usize::from(draw < frac)
}

/// Type-matched context swapping.
///
/// Candidates for a positive are the other positives of its (language, type)
/// group, visited in a seeded shuffle. A candidate's sentence is adopted when
/// it mentions none of the receiver's answer texts.
pub fn build_negatives(
    positives: &[PositiveContext],
    triples: &BTreeMap<String, Triple>,
    ratio: f64,
    seed: u64,
) -> (Vec<NegativeContext>, NegativeCounts) {
    let mut groups: BTreeMap<(&str, &TypeKey), Vec<&PositiveContext>> = BTreeMap::new();
    for p in positives {
        groups.entry((p.language.as_str(), &p.type_key)).or_default().push(p);
    }
    let mut counts = NegativeCounts::default();
    let mut out = Vec::new();
    let seed_text = seed.to_string();

    for members in groups.values_mut() {
        members.sort_by(|a, b| a.triple_id.cmp(&b.triple_id));
        for p in members.iter() {
            let quota = negative_quota(ratio, &p.triple_id, &p.language);
            if quota == 0 {
                counts.not_selected += 1;
                continue;
            }
            let mut candidates: Vec<&PositiveContext> =
                members.iter().copied().filter(|q| q.triple_id != p.triple_id).collect();
            if candidates.is_empty() {
                counts.singleton_group += 1;
                continue;
            }
            let mut rng =
                ChaCha8Rng::seed_from_u64(digest_u64(&["negative-partners", &seed_text, &p.language, &p.triple_id]));
            candidates.shuffle(&mut rng);

            let answers: &[String] = triples
                .get(&p.triple_id)
                .and_then(|t| t.answer_texts.get(&p.language))
                .map(Vec::as_slice)
                .unwrap_or(&p.answer_strings);
            let mut adopted: BTreeSet<&str> = BTreeSet::new();
            for q in candidates {
                if adopted.len() == quota {
                    break;
                }
                if adopted.contains(q.sentence.as_str()) {
                    continue;
                }
                let clash = answers.iter().chain(&p.answer_strings).any(|a| mentions_answer(&q.sentence, a));
                if clash {
                    continue;
                }
                adopted.insert(&q.sentence);
                out.push(NegativeContext {
                    triple_id: p.triple_id.clone(),
                    language: p.language.clone(),
                    sentence: q.sentence.clone(),
                    partner_triple_id: q.triple_id.clone(),
                });
            }
            if adopted.is_empty() {
                counts.no_valid_partner += 1;
            }
        }
    }
    out.sort_by(|a, b| {
        (&a.triple_id, &a.language, &a.partner_triple_id).cmp(&(&b.triple_id, &b.language, &b.partner_triple_id))
    });
    counts.negatives = out.len();
    (out, counts)
}

/// One line of `contexts.jsonl`. `answers` is `null` for negatives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextRecord {
    pub id: String,
    pub triple_id: String,
    pub language: String,
    pub sentence: String,
    pub answers: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partner_triple_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entity1_surface: Option<String>,
}

impl ContextRecord {
    pub fn is_negative(&self) -> bool {
        self.answers.is_none()
    }

    pub fn pid(&self) -> &str {
        split_triple_id(&self.triple_id).1
    }
}

/// Interleaves positives and negatives into context records, ordered by
/// (triple id, language), positive first. Negative ids number the
/// negatives of one (triple, language) from `n0`.
pub fn context_records(positives: &[PositiveContext], negatives: &[NegativeContext]) -> Vec<ContextRecord> {
    let mut out: Vec<ContextRecord> = positives
        .iter()
        .map(|p| ContextRecord {
            id: format!("{}:{}:p", p.language, p.triple_id),
            triple_id: p.triple_id.clone(),
            language: p.language.clone(),
            sentence: p.sentence.clone(),
            answers: Some(p.answer_strings.clone()),
            partner_triple_id: None,
            entity1_surface: Some(p.entity1_surface.clone()),
        })
        .collect();
    let mut ordinal: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for n in negatives {
        let k = ordinal.entry((&n.triple_id, &n.language)).or_default();
        out.push(ContextRecord {
            id: format!("{}:{}:n{}", n.language, n.triple_id, k),
            triple_id: n.triple_id.clone(),
            language: n.language.clone(),
            sentence: n.sentence.clone(),
            answers: None,
            partner_triple_id: Some(n.partner_triple_id.clone()),
            entity1_surface: None,
        });
        *k += 1;
    }
    out.sort_by(|a, b| {
        (&a.triple_id, &a.language, a.is_negative(), &a.id).cmp(&(&b.triple_id, &b.language, b.is_negative(), &b.id))
    });
    out
}
