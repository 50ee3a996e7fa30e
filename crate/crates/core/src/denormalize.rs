//! Replacing property and value ids with per-language text.
//!
//! Entity values become the referenced entity's label. Literals are rendered
//! from locale tables (`key<TAB>lang<TAB>value`, see `data/locale.tsv`):
//!
//! * times use `format.day`, `format.month` or `format.year`, with month names
//!   from `month.1` to `month.12` and optional per-day overrides (`day.1` is
//!   `1er` in French);
//! * quantities print the shortest round-tripping decimal with the language's
//!   `decimal_separator`, followed by the unit's label when the unit entity is
//!   labelled in that language (otherwise the unit is left out);
//! * text values are copied verbatim.
//!
//! Every tuple also carries a language-independent `value_key`: the qid for
//! entities, the ISO date for times, the canonical decimal for quantities and
//! the raw string for text.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingestion::{KnowledgeBase, Precision, Quantity, Statement, Time, Value};
use crate::tsv;

pub const DEFAULT_LOCALE: &str = include_str!("../data/locale.tsv");

/// Property labels per language, read from `pid<TAB>lang<TAB>label` rows.
#[derive(Debug, Clone, Default)]
pub struct PropertyCatalog {
    labels: BTreeMap<(String, String), String>,
}

impl PropertyCatalog {
    pub fn parse(source: &Path, content: &str) -> Result<Self> {
        let mut labels = BTreeMap::new();
        for row in tsv::rows(source, content, 3)? {
            let [pid, lang, label] = [row.fields[0], row.fields[1], row.fields[2]];
            if pid.is_empty() || label.is_empty() {
                return Err(Error::Parse {
                    path: source.to_path_buf(),
                    line: row.line,
                    message: "empty pid or label".into(),
                });
            }
            labels.insert((pid.to_string(), lang.to_string()), label.to_string());
        }
        Ok(PropertyCatalog { labels })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(path, &tsv::read(path)?)
    }

    pub fn insert(&mut self, pid: &str, lang: &str, label: &str) {
        self.labels.insert((pid.into(), lang.into()), label.into());
    }

    pub fn label(&self, pid: &str, lang: &str) -> Option<&str> {
        self.labels.get(&(pid.to_string(), lang.to_string())).map(String::as_str)
    }

    pub fn contains_pid(&self, pid: &str) -> bool {
        self.labels.keys().any(|(p, _)| p == pid)
    }

    pub fn pids(&self) -> impl Iterator<Item = &str> {
        let mut pids: Vec<&str> = self.labels.keys().map(|(p, _)| p.as_str()).collect();
        pids.dedup();
        pids.into_iter()
    }
}

#[derive(Debug, Clone, Default)]
pub struct LocaleTables {
    entries: BTreeMap<(String, String), String>,
}

impl LocaleTables {
    pub fn parse(source: &Path, content: &str) -> Result<Self> {
        let entries = tsv::rows(source, content, 3)?
            .into_iter()
            .map(|row| {
                let key = (row.fields[0].to_string(), row.fields[1].to_string());
                (key, row.fields[2].to_string())
            })
            .collect();
        Ok(LocaleTables { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(path, &tsv::read(path)?)
    }

    /// The tables shipped with the crate (EN/DE/ES/FR/IT).
    pub fn builtin() -> Self {
        Self::parse(Path::new("data/locale.tsv"), DEFAULT_LOCALE)
            .expect("built-in locale table is well formed")
    }

    fn get(&self, key: &str, lang: &str) -> Option<&str> {
        self.entries.get(&(key.to_string(), lang.to_string())).map(String::as_str)
    }

    pub fn decimal_separator(&self, lang: &str) -> &str {
        self.get("decimal_separator", lang).unwrap_or(".")
    }
}

/// Renders a date in the natural form used by `lang`.
pub fn render_time(t: &Time, lang: &str, locale: &LocaleTables) -> Result<String> {
    let key = match t.precision {
        Precision::Day => "format.day",
        Precision::Month => "format.month",
        Precision::Year => "format.year",
    };
    let unsupported = || Error::UnsupportedPrecision(format!("{:?} for language `{}`", t.precision, lang));
    let pattern = locale.get(key, lang).ok_or_else(unsupported)?;
    let mut out = pattern.replace("{year}", &t.year.to_string());
    if t.precision != Precision::Year {
        let month = locale.get(&format!("month.{}", t.month), lang).ok_or_else(unsupported)?;
        out = out.replace("{month}", month);
    }
    if t.precision == Precision::Day {
        let day = locale
            .get(&format!("day.{}", t.day), lang)
            .map(str::to_string)
            .unwrap_or_else(|| t.day.to_string());
        out = out.replace("{day}", &day);
    }
    Ok(out)
}

/// Shortest decimal that round-trips, without exponent or trailing `.0`.
pub fn canonical_decimal(x: f64) -> String {
    let s = format!("{}", x);
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

pub fn render_quantity(q: &Quantity, lang: &str, kb: &KnowledgeBase, locale: &LocaleTables) -> String {
    let number = canonical_decimal(q.amount).replace('.', locale.decimal_separator(lang));
    match q.unit.as_deref().and_then(|u| kb.label(u, lang)) {
        Some(unit) => format!("{} {}", number, unit),
        None => number,
    }
}

/// Language-independent key of a value; equal across languages for the same
/// underlying value.
pub fn value_key(value: &Value) -> String {
    match value {
        Value::Entity(qid) => qid.clone(),
        Value::Time(t) => t.iso(),
        Value::Quantity(q) => canonical_decimal(q.amount),
        Value::Text(s) => s.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenormalizedTuple {
    pub pid: String,
    pub property_label: String,
    pub value_text: String,
    pub value_key: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Skip {
    UnknownProperty,
    UnlabeledValue,
    UnsupportedPrecision,
    EmptyValue,
}

impl fmt::Display for Skip {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Skip::UnknownProperty => "unknown-property",
            Skip::UnlabeledValue => "unlabeled-value",
            Skip::UnsupportedPrecision => "unsupported-precision",
            Skip::EmptyValue => "empty-value",
        })
    }
}

/// Skip tallies by reason.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkipCounts(pub BTreeMap<String, usize>);

impl SkipCounts {
    pub fn add(&mut self, skip: Skip) {
        *self.0.entry(skip.to_string()).or_default() += 1;
    }

    pub fn get(&self, skip: Skip) -> usize {
        self.0.get(&skip.to_string()).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }
}

/// Immutable lookups needed to denormalize statements.
#[derive(Debug, Clone, Copy)]
pub struct Denormalizer<'a> {
    pub kb: &'a KnowledgeBase,
    pub catalog: &'a PropertyCatalog,
    pub locale: &'a LocaleTables,
}

impl<'a> Denormalizer<'a> {
    pub fn new(kb: &'a KnowledgeBase, catalog: &'a PropertyCatalog, locale: &'a LocaleTables) -> Self {
        Denormalizer { kb, catalog, locale }
    }

    /// Human-readable text of a value in `lang`, or why there is none.
    pub fn value_text(&self, value: &Value, lang: &str) -> Result<String, Skip> {
        let text = match value {
            Value::Entity(qid) => self.kb.label(qid, lang).ok_or(Skip::UnlabeledValue)?.to_string(),
            Value::Time(t) => render_time(t, lang, self.locale).map_err(|_| Skip::UnsupportedPrecision)?,
            Value::Quantity(q) => render_quantity(q, lang, self.kb, self.locale),
            Value::Text(s) => s.clone(),
        };
        if text.trim().is_empty() {
            return Err(Skip::EmptyValue);
        }
        Ok(text)
    }

    pub fn denormalize_statement(&self, stmt: &Statement, lang: &str) -> Result<DenormalizedTuple, Skip> {
        let property_label = self.catalog.label(&stmt.pid, lang).ok_or(Skip::UnknownProperty)?;
        let value_text = self.value_text(&stmt.value, lang)?;
        Ok(DenormalizedTuple {
            pid: stmt.pid.clone(),
            property_label: property_label.to_string(),
            value_text,
            value_key: value_key(&stmt.value),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingestion::KbEntity;

    const LANGS: [&str; 5] = ["en", "de", "es", "fr", "it"];

    fn kb() -> KnowledgeBase {
        let dante = KbEntity {
            qid: "Q1067".into(),
            labels: [("en", "Dante Alighieri"), ("it", "Dante Alighieri")]
                .into_iter()
                .map(|(l, s)| (l.to_string(), s.to_string()))
                .collect(),
            ..Default::default()
        };
        let km = KbEntity {
            qid: "Q828224".into(),
            labels: [("en".to_string(), "kilometres".to_string()), ("it".to_string(), "chilometri".to_string())]
                .into_iter()
                .collect(),
            ..Default::default()
        };
        let unlabeled = KbEntity { qid: "Q999".into(), ..Default::default() };
        KnowledgeBase::from_entities([dante, km, unlabeled])
    }

    fn catalog() -> PropertyCatalog {
        let mut c = PropertyCatalog::default();
        c.insert("P50", "en", "author");
        c.insert("P50", "it", "autore");
        c.insert("P569", "en", "date of birth");
        c.insert("P2043", "en", "length");
        c.insert("P2043", "it", "lunghezza");
        c
    }

    #[test]
    fn entity_value_becomes_label() {
        let (kb, cat, loc) = (kb(), catalog(), LocaleTables::builtin());
        let d = Denormalizer::new(&kb, &cat, &loc);
        let stmt = Statement { pid: "P50".into(), value: Value::Entity("Q1067".into()) };
        let t = d.denormalize_statement(&stmt, "en").unwrap();
        assert_eq!(t.property_label, "author");
        assert_eq!(t.value_text, "Dante Alighieri");
        assert_eq!(t.value_key, "Q1067");
    }

    #[test]
    fn unlabeled_value_and_unknown_property_are_skips() {
        let (kb, cat, loc) = (kb(), catalog(), LocaleTables::builtin());
        let d = Denormalizer::new(&kb, &cat, &loc);
        let stmt = Statement { pid: "P50".into(), value: Value::Entity("Q999".into()) };
        assert_eq!(d.denormalize_statement(&stmt, "en"), Err(Skip::UnlabeledValue));
        let stmt = Statement { pid: "P9999".into(), value: Value::Entity("Q1067".into()) };
        assert_eq!(d.denormalize_statement(&stmt, "en"), Err(Skip::UnknownProperty));
        assert_eq!(Skip::UnknownProperty.to_string(), "unknown-property");
    }

    #[test]
    fn day_precision_time_in_english() {
        let (kb, cat, loc) = (kb(), catalog(), LocaleTables::builtin());
        let d = Denormalizer::new(&kb, &cat, &loc);
        let stmt = Statement { pid: "P569".into(), value: Value::Time(Time::day(1994, 5, 25).unwrap()) };
        let t = d.denormalize_statement(&stmt, "en").unwrap();
        assert_eq!(t.value_text, "25 May 1994");
        assert_eq!(t.value_key, "1994-05-25");
    }

    #[test]
    fn render_time_per_language() {
        let loc = LocaleTables::builtin();
        let day = Time::day(1994, 5, 25).unwrap();
        let expected = ["25 May 1994", "25. Mai 1994", "25 de mayo de 1994", "25 mai 1994", "25 maggio 1994"];
        for (lang, want) in LANGS.iter().zip(expected) {
            assert_eq!(render_time(&day, lang, &loc).unwrap(), want);
        }
        for lang in LANGS {
            assert_eq!(render_time(&Time::year(1994), lang, &loc).unwrap(), "1994");
        }
        let first = Time::day(1265, 6, 1).unwrap();
        assert_eq!(render_time(&first, "fr", &loc).unwrap(), "1er juin 1265");
        assert_eq!(render_time(&first, "it", &loc).unwrap(), "1º giugno 1265");
    }

    #[test]
    fn missing_locale_is_unsupported_precision() {
        let loc = LocaleTables::builtin();
        let err = render_time(&Time::day(1994, 5, 25).unwrap(), "xx", &loc).unwrap_err();
        assert!(err.to_string().starts_with("unsupported-precision"));
    }

    #[test]
    fn quantity_rendering() {
        let (kb, loc) = (kb(), LocaleTables::builtin());
        let q = Quantity { amount: 6992.5, unit: Some("Q828224".into()) };
        assert_eq!(render_quantity(&q, "en", &kb, &loc), "6992.5 kilometres");
        assert_eq!(render_quantity(&q, "it", &kb, &loc), "6992,5 chilometri");
        // unit without a German label is omitted
        assert_eq!(render_quantity(&q, "de", &kb, &loc), "6992,5");
        assert_eq!(value_key(&Value::Quantity(q)), "6992.5");
        assert_eq!(canonical_decimal(7000.0), "7000");
        assert_eq!(canonical_decimal(-0.0), "0");
    }

    #[test]
    fn value_key_is_language_invariant() {
        let (kb, cat, loc) = (kb(), catalog(), LocaleTables::builtin());
        let d = Denormalizer::new(&kb, &cat, &loc);
        let stmts = [
            Statement { pid: "P50".into(), value: Value::Entity("Q1067".into()) },
            Statement {
                pid: "P2043".into(),
                value: Value::Quantity(Quantity { amount: 6992.0, unit: Some("Q828224".into()) }),
            },
        ];
        for stmt in &stmts {
            let en = d.denormalize_statement(stmt, "en").unwrap();
            let it = d.denormalize_statement(stmt, "it").unwrap();
            assert_eq!(en.value_key, it.value_key);
            assert!(cat.contains_pid(&en.pid));
        }
    }

    #[test]
    fn catalog_parses_tsv() {
        let c = PropertyCatalog::parse(Path::new("p.tsv"), "# pid\tlang\tlabel\nP17\ten\tcountry\nP17\tit\tstato\n").unwrap();
        assert_eq!(c.label("P17", "it"), Some("stato"));
        assert_eq!(c.pids().collect::<Vec<_>>(), ["P17"]);
        assert!(PropertyCatalog::parse(Path::new("p.tsv"), "P17\ten\n").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn any_time() -> impl Strategy<Value = Time> {
            prop_oneof![
                (1i32..2100).prop_map(Time::year),
                (1i32..2100, 1u8..=12).prop_map(|(y, m)| Time::month(y, m).unwrap()),
                (1i32..2100, 1u8..=12, 1u8..=28).prop_map(|(y, m, d)| Time::day(y, m, d).unwrap()),
            ]
        }

        proptest! {
            #[test]
            fn render_time_is_injective(a in any_time(), b in any_time(), li in 0usize..5) {
                let loc = LocaleTables::builtin();
                let lang = LANGS[li];
                if a != b {
                    prop_assert_ne!(render_time(&a, lang, &loc).unwrap(), render_time(&b, lang, &loc).unwrap());
                }
            }
        }
    }
}
