//! Loading the KB dump and per-language corpora, and aligning the two.
//!
//! Both inputs are JSON lines. A KB record looks like
//!
//! ```json
//! {"qid": "Q3783", "labels": {"en": "Amazon"}, "aliases": {"en": ["Amazon River"]},
//!  "statements": [{"pid": "P17", "type": "entity", "value": "Q155"}]}
//! ```
//!
//! with `type` one of `entity`, `time`, `quantity` or `text`. Time values are
//! `{"time": "1994-05-25", "precision": "day"}` (month precision writes
//! `1994-05`, year precision `1994`), quantities `{"amount": 6992.0, "unit": "Q828224"}`
//! with an optional unit. A corpus record is `{"qid", "language", "title", "text"}`;
//! the qid is resolved upstream, alignment never matches on titles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::jsonl::JsonLines;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Year,
    Month,
    Day,
}

impl Precision {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "year" => Some(Precision::Year),
            "month" => Some(Precision::Month),
            "day" => Some(Precision::Day),
            _ => None,
        }
    }
}

/// A proleptic Gregorian date at year, month or day precision. Components
/// finer than the precision are zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Time {
    pub year: i32,
    pub month: u8,
    pub day: u8,
    pub precision: Precision,
}

impl Time {
    pub fn day(year: i32, month: u8, day: u8) -> Option<Self> {
        (1..=12).contains(&month).then_some(())?;
        (day >= 1 && day <= days_in_month(year, month)).then_some(())?;
        Some(Time { year, month, day, precision: Precision::Day })
    }

    pub fn month(year: i32, month: u8) -> Option<Self> {
        (1..=12).contains(&month).then_some(Time {
            year,
            month,
            day: 0,
            precision: Precision::Month,
        })
    }

    pub fn year(year: i32) -> Self {
        Time { year, month: 0, day: 0, precision: Precision::Year }
    }

    /// Parses `YYYY`, `YYYY-MM` or `YYYY-MM-DD` (optionally with a leading
    /// `-` for BCE years); the declared precision must match the shape.
    pub fn parse(date: &str, precision: Precision) -> Option<Self> {
        let (neg, body) = match date.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, date),
        };
        let parts: Vec<&str> = body.split('-').collect();
        let year: i32 = parts.first()?.parse().ok()?;
        let year = if neg { -year } else { year };
        match (precision, parts.as_slice()) {
            (Precision::Year, [_]) => Some(Time::year(year)),
            (Precision::Month, [_, m]) => Time::month(year, m.parse().ok()?),
            (Precision::Day, [_, m, d]) => Time::day(year, m.parse().ok()?, d.parse().ok()?),
            _ => None,
        }
    }

    /// ISO-style key: `1994`, `1994-05` or `1994-05-25`.
    pub fn iso(&self) -> String {
        let year = if self.year < 0 {
            format!("-{:04}", -self.year)
        } else {
            format!("{:04}", self.year)
        };
        match self.precision {
            Precision::Year => year,
            Precision::Month => format!("{}-{:02}", year, self.month),
            Precision::Day => format!("{}-{:02}-{:02}", year, self.month, self.day),
        }
    }
}

fn days_in_month(year: i32, month: u8) -> u8 {
    match month {
        4 | 6 | 9 | 11 => 30,
        2 if (year % 4 == 0 && year % 100 != 0) || year % 400 == 0 => 29,
        2 => 28,
        _ => 31,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Quantity {
    pub amount: f64,
    pub unit: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Entity(String),
    Time(Time),
    Quantity(Quantity),
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statement {
    pub pid: String,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct KbEntity {
    pub qid: String,
    pub labels: BTreeMap<String, String>,
    pub aliases: BTreeMap<String, Vec<String>>,
    pub statements: Vec<Statement>,
}

impl KbEntity {
    pub fn label(&self, lang: &str) -> Option<&str> {
        self.labels.get(lang).map(String::as_str)
    }

    pub fn aliases(&self, lang: &str) -> &[String] {
        self.aliases.get(lang).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Values of every statement with this property, in statement order.
    pub fn values_of<'a>(&'a self, pid: &'a str) -> impl Iterator<Item = &'a Value> + 'a {
        self.statements.iter().filter(move |s| s.pid == pid).map(|s| &s.value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageDoc {
    pub qid: String,
    pub language: String,
    pub title: String,
    pub text: String,
}

/// One entity's KB document next to its page text in one language.
#[derive(Debug, Clone, Copy)]
pub struct DocumentView<'a> {
    pub page: &'a PageDoc,
    pub entity: &'a KbEntity,
}

impl DocumentView<'_> {
    pub fn qid(&self) -> &str {
        &self.entity.qid
    }

    pub fn language(&self) -> &str {
        &self.page.language
    }
}

#[derive(Deserialize)]
struct RawEntity {
    qid: String,
    #[serde(default)]
    labels: BTreeMap<String, String>,
    #[serde(default)]
    aliases: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    statements: Vec<RawStatement>,
}

#[derive(Deserialize)]
struct RawStatement {
    pid: String,
    #[serde(rename = "type")]
    kind: String,
    value: serde_json::Value,
}

#[derive(Deserialize)]
struct RawTime {
    time: String,
    precision: String,
}

#[derive(Deserialize)]
struct RawQuantity {
    amount: f64,
    #[serde(default)]
    unit: Option<String>,
}

#[derive(Debug)]
struct Malformed(String);

impl fmt::Display for Malformed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl RawStatement {
    fn convert(self) -> Result<Statement, Malformed> {
        if self.pid.is_empty() {
            return Err(Malformed("statement with empty pid".into()));
        }
        let bad = |what: &str| Malformed(format!("{}: bad {} value", self.pid, what));
        let value = match self.kind.as_str() {
            "entity" => match self.value.as_str() {
                Some(q) if !q.is_empty() => Value::Entity(q.to_string()),
                _ => return Err(bad("entity")),
            },
            "text" => match self.value.as_str() {
                Some(s) => Value::Text(s.to_string()),
                None => return Err(bad("text")),
            },
            "time" => {
                let raw: RawTime =
                    serde_json::from_value(self.value.clone()).map_err(|_| bad("time"))?;
                let precision = Precision::parse(&raw.precision).ok_or_else(|| {
                    Malformed(format!("{}: unsupported time precision `{}`", self.pid, raw.precision))
                })?;
                Value::Time(Time::parse(&raw.time, precision).ok_or_else(|| bad("time"))?)
            }
            "quantity" => {
                let raw: RawQuantity =
                    serde_json::from_value(self.value.clone()).map_err(|_| bad("quantity"))?;
                if !raw.amount.is_finite() {
                    return Err(bad("quantity"));
                }
                Value::Quantity(Quantity { amount: raw.amount, unit: raw.unit })
            }
            other => return Err(Malformed(format!("{}: unknown value type `{}`", self.pid, other))),
        };
        Ok(Statement { pid: self.pid, value })
    }
}

impl RawEntity {
    fn convert(self, languages: Option<&BTreeSet<String>>) -> Result<KbEntity, Malformed> {
        if self.qid.is_empty() {
            return Err(Malformed("record with empty qid".into()));
        }
        let keep = |lang: &String| languages.is_none_or(|set| set.contains(lang));
        let statements = self
            .statements
            .into_iter()
            .map(RawStatement::convert)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(KbEntity {
            qid: self.qid,
            labels: self.labels.into_iter().filter(|(l, _)| keep(l)).collect(),
            aliases: self.aliases.into_iter().filter(|(l, _)| keep(l)).collect(),
            statements,
        })
    }
}

/// Streaming KB reader. Yields entities in file order; malformed lines are
/// logged and counted, never fatal.
pub struct KbReader {
    inner: JsonLines<BufReader<File>, RawEntity>,
    languages: Option<BTreeSet<String>>,
}

impl KbReader {
    /// Drops labels and aliases for languages outside `languages`.
    pub fn with_languages(mut self, languages: &[String]) -> Self {
        self.languages = Some(languages.iter().cloned().collect());
        self
    }

    pub fn skipped(&self) -> usize {
        self.inner.skipped()
    }
}

impl Iterator for KbReader {
    type Item = Result<KbEntity>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let raw = match self.inner.next()? {
                Ok(raw) => raw,
                Err(e) => return Some(Err(e)),
            };
            match raw.convert(self.languages.as_ref()) {
                Ok(entity) => return Some(Ok(entity)),
                Err(reason) => self.inner.reject(&reason.0),
            }
        }
    }
}

pub fn load_kb(path: &Path) -> Result<KbReader> {
    Ok(KbReader { inner: JsonLines::open(path)?, languages: None })
}

/// Streaming corpus reader for one language. Pages with empty text are
/// dropped and counted; records tagged with another language are malformed.
pub struct CorpusReader {
    inner: JsonLines<BufReader<File>, PageDoc>,
    language: String,
    dropped_empty: usize,
}

impl CorpusReader {
    pub fn skipped(&self) -> usize {
        self.inner.skipped()
    }

    pub fn dropped_empty(&self) -> usize {
        self.dropped_empty
    }
}

impl Iterator for CorpusReader {
    type Item = Result<PageDoc>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let page = match self.inner.next()? {
                Ok(page) => page,
                Err(e) => return Some(Err(e)),
            };
            if page.qid.is_empty() {
                self.inner.reject("page with empty qid");
            } else if page.language != self.language {
                let msg = format!("language `{}`, expected `{}`", page.language, self.language);
                self.inner.reject(&msg);
            } else if page.text.trim().is_empty() {
                self.dropped_empty += 1;
            } else {
                return Some(Ok(page));
            }
        }
    }
}

pub fn load_corpus(path: &Path, language: &str) -> Result<CorpusReader> {
    Ok(CorpusReader {
        inner: JsonLines::open(path)?,
        language: language.to_string(),
        dropped_empty: 0,
    })
}

/// A loaded KB keyed by qid.
#[derive(Debug, Clone, Default)]
pub struct KnowledgeBase {
    entities: BTreeMap<String, KbEntity>,
    duplicates: usize,
}

impl KnowledgeBase {
    /// Collects entities, keeping the first record of any repeated qid.
    pub fn from_entities(entities: impl IntoIterator<Item = KbEntity>) -> Self {
        let mut kb = KnowledgeBase::default();
        for entity in entities {
            kb.insert(entity);
        }
        kb
    }

    pub fn load(path: &Path, languages: &[String]) -> Result<(Self, usize)> {
        let mut reader = load_kb(path)?.with_languages(languages);
        let mut kb = KnowledgeBase::default();
        for entity in reader.by_ref() {
            kb.insert(entity?);
        }
        Ok((kb, reader.skipped()))
    }

    fn insert(&mut self, entity: KbEntity) {
        use std::collections::btree_map::Entry;
        match self.entities.entry(entity.qid.clone()) {
            Entry::Vacant(slot) => {
                slot.insert(entity);
            }
            Entry::Occupied(_) => {
                log::warn!("duplicate qid {}; keeping the first record", entity.qid);
                self.duplicates += 1;
            }
        }
    }

    pub fn get(&self, qid: &str) -> Option<&KbEntity> {
        self.entities.get(qid)
    }

    pub fn label(&self, qid: &str, lang: &str) -> Option<&str> {
        self.get(qid)?.label(lang)
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn duplicates(&self) -> usize {
        self.duplicates
    }

    pub fn iter(&self) -> impl Iterator<Item = &KbEntity> {
        self.entities.values()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignmentCounts {
    pub views: usize,
    /// Labelled KB entities with no page in this language.
    pub unmatched_kb: usize,
    /// Pages whose qid is not in the KB.
    pub unmatched_corpus: usize,
    /// Pages whose entity has no label in this language.
    pub unlabeled: usize,
    /// Pages whose entity carries no statements at all.
    pub without_statements: usize,
    pub duplicate_pages: usize,
}

#[derive(Debug, Clone)]
pub struct Alignment<'a> {
    pub views: Vec<DocumentView<'a>>,
    pub counts: AlignmentCounts,
}

/// Pairs pages with KB documents by qid for one language, ordered by qid.
pub fn align<'a>(kb: &'a KnowledgeBase, corpus: &'a [PageDoc], language: &str) -> Alignment<'a> {
    let mut counts = AlignmentCounts::default();
    let mut pages: BTreeMap<&str, &PageDoc> = BTreeMap::new();
    for page in corpus.iter().filter(|p| p.language == language) {
        if pages.contains_key(page.qid.as_str()) {
            counts.duplicate_pages += 1;
        } else {
            pages.insert(&page.qid, page);
        }
    }

    let mut views = Vec::new();
    for (qid, page) in &pages {
        let Some(entity) = kb.get(qid) else {
            counts.unmatched_corpus += 1;
            continue;
        };
        if entity.label(language).is_none() {
            counts.unlabeled += 1;
            continue;
        }
        if entity.statements.is_empty() {
            counts.without_statements += 1;
            continue;
        }
        views.push(DocumentView { page, entity });
    }
    counts.unmatched_kb = kb
        .iter()
        .filter(|e| e.label(language).is_some() && !pages.contains_key(e.qid.as_str()))
        .count();
    counts.views = views.len();
    Alignment { views, counts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    fn entity(qid: &str, labels: &[(&str, &str)]) -> KbEntity {
        KbEntity {
            qid: qid.into(),
            labels: labels.iter().map(|(l, s)| (l.to_string(), s.to_string())).collect(),
            statements: vec![Statement { pid: "P31".into(), value: Value::Entity("Q5".into()) }],
            ..Default::default()
        }
    }

    fn page(qid: &str, lang: &str) -> PageDoc {
        PageDoc { qid: qid.into(), language: lang.into(), title: qid.into(), text: "Text.".into() }
    }

    #[test]
    fn minimal_record_has_no_statements() {
        let f = write_tmp(r#"{"qid":"Q1067","labels":{"en":"Dante Alighieri"},"statements":[]}"#);
        let got: Vec<_> = load_kb(f.path()).unwrap().map(Result::unwrap).collect();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].label("en"), Some("Dante Alighieri"));
        assert!(got[0].statements.is_empty());
    }

    #[test]
    fn entity_statement_is_parsed() {
        let f = write_tmp(
            r#"{"qid":"Q1","labels":{"en":"Divine Comedy"},"statements":[{"pid":"P50","type":"entity","value":"Q1067"}]}"#,
        );
        let got: Vec<_> = load_kb(f.path()).unwrap().map(Result::unwrap).collect();
        assert_eq!(got[0].statements[0].pid, "P50");
        assert_eq!(got[0].statements[0].value, Value::Entity("Q1067".into()));
    }

    #[test]
    fn malformed_line_is_counted_not_fatal() {
        let f = write_tmp(concat!(
            r#"{"qid":"Q1","labels":{"en":"a"}}"#,
            "\n{\"qid\": broken\n",
            r#"{"qid":"Q2","labels":{"en":"b"}}"#,
            "\n"
        ));
        let mut reader = load_kb(f.path()).unwrap();
        let got: Vec<_> = reader.by_ref().map(Result::unwrap).collect();
        assert_eq!(got.len(), 2);
        assert_eq!(reader.skipped(), 1);
    }

    #[test]
    fn invalid_values_make_a_line_malformed() {
        let f = write_tmp(concat!(
            r#"{"qid":"Q1","statements":[{"pid":"P569","type":"time","value":{"time":"1994-02-30","precision":"day"}}]}"#,
            "\n",
            r#"{"qid":"Q2","statements":[{"pid":"P569","type":"time","value":{"time":"1994","precision":"century"}}]}"#,
            "\n",
            r#"{"qid":"","labels":{}}"#,
            "\n",
            r#"{"qid":"Q4","statements":[{"pid":"P2043","type":"quantity","value":{"amount":6992.0,"unit":"Q828224"}}]}"#,
            "\n"
        ));
        let mut reader = load_kb(f.path()).unwrap();
        let got: Vec<_> = reader.by_ref().map(Result::unwrap).collect();
        assert_eq!(got.len(), 1);
        assert_eq!(reader.skipped(), 3);
        assert_eq!(
            got[0].statements[0].value,
            Value::Quantity(Quantity { amount: 6992.0, unit: Some("Q828224".into()) })
        );
    }

    #[test]
    fn language_filter_drops_other_labels() {
        let f = write_tmp(r#"{"qid":"Q1","labels":{"en":"a","ru":"б"},"aliases":{"ru":["в"]}}"#);
        let langs = vec!["en".to_string()];
        let got: Vec<_> = load_kb(f.path()).unwrap().with_languages(&langs).map(Result::unwrap).collect();
        assert_eq!(got[0].labels.len(), 1);
        assert!(got[0].aliases.is_empty());
    }

    #[test]
    fn corpus_drops_empty_pages() {
        let f = write_tmp(concat!(
            r#"{"qid":"Q3783","language":"it","title":"Rio delle Amazzoni","text":"Il Rio delle Amazzoni è un fiume dell'America Meridionale."}"#,
            "\n",
            r#"{"qid":"Q2","language":"it","title":"Vuota","text":""}"#,
            "\n"
        ));
        let mut reader = load_corpus(f.path(), "it").unwrap();
        let pages: Vec<_> = reader.by_ref().map(Result::unwrap).collect();
        assert_eq!(pages.len(), 1);
        assert_eq!(pages[0].language, "it");
        assert!(pages[0].text.starts_with("Il Rio delle Amazzoni è un fiume"));
        assert_eq!(reader.dropped_empty(), 1);
    }

    #[test]
    fn corpus_keeps_input_order() {
        let f = write_tmp(concat!(
            r#"{"qid":"Q9","language":"en","title":"B","text":"b."}"#,
            "\n",
            r#"{"qid":"Q1","language":"en","title":"A","text":"a."}"#,
            "\n"
        ));
        let qids: Vec<_> = load_corpus(f.path(), "en").unwrap().map(|p| p.unwrap().qid).collect();
        assert_eq!(qids, ["Q9", "Q1"]);
    }

    #[test]
    fn align_full_overlap() {
        let kb = KnowledgeBase::from_entities([entity("Q1", &[("en", "a")])]);
        let corpus = [page("Q1", "en")];
        let a = align(&kb, &corpus, "en");
        assert_eq!(a.views.len(), 1);
        assert_eq!(a.views[0].qid(), a.views[0].page.qid);
    }

    #[test]
    fn align_partial_overlap_counts_both_sides() {
        let kb = KnowledgeBase::from_entities([entity("Q1", &[("en", "a")]), entity("Q2", &[("en", "b")])]);
        let corpus = [page("Q2", "en"), page("Q3", "en")];
        let a = align(&kb, &corpus, "en");
        assert_eq!(a.views.iter().map(|v| v.qid()).collect::<Vec<_>>(), ["Q2"]);
        assert_eq!(a.counts.unmatched_kb, 1);
        assert_eq!(a.counts.unmatched_corpus, 1);
    }

    #[test]
    fn align_empty_corpus() {
        let kb = KnowledgeBase::from_entities([entity("Q1", &[("en", "a")])]);
        assert!(align(&kb, &[], "en").views.is_empty());
    }

    #[test]
    fn align_excludes_unlabeled_and_statementless() {
        let mut bare = entity("Q2", &[("en", "b")]);
        bare.statements.clear();
        let kb = KnowledgeBase::from_entities([entity("Q1", &[("de", "a")]), bare]);
        let corpus = [page("Q1", "en"), page("Q2", "en")];
        let a = align(&kb, &corpus, "en");
        assert!(a.views.is_empty());
        assert_eq!(a.counts.unlabeled, 1);
        assert_eq!(a.counts.without_statements, 1);
    }

    #[test]
    fn align_orders_by_qid_and_keeps_first_duplicate() {
        let kb = KnowledgeBase::from_entities([entity("Q2", &[("en", "b")]), entity("Q10", &[("en", "a")])]);
        let mut first = page("Q2", "en");
        first.title = "first".into();
        let corpus = [first, page("Q10", "en"), page("Q2", "en")];
        let a = align(&kb, &corpus, "en");
        assert_eq!(a.views.iter().map(|v| v.qid()).collect::<Vec<_>>(), ["Q10", "Q2"]);
        assert_eq!(a.views[1].page.title, "first");
        assert_eq!(a.counts.duplicate_pages, 1);
    }

    #[test]
    fn time_parse_and_iso() {
        assert_eq!(Time::parse("1994-05-25", Precision::Day).unwrap().iso(), "1994-05-25");
        assert_eq!(Time::parse("1994-05", Precision::Month).unwrap().iso(), "1994-05");
        assert_eq!(Time::parse("-0044", Precision::Year).unwrap().iso(), "-0044");
        assert!(Time::parse("1994-05", Precision::Day).is_none());
        assert!(Time::parse("2023-02-29", Precision::Day).is_none());
        assert!(Time::parse("2024-02-29", Precision::Day).is_some());
    }
}
