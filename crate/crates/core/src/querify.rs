//! Turning contexts into question/context/answer examples.
//!
//! Templates are `template_id<TAB>pid<TAB>lang<TAB>pattern` rows. A pattern
//! holds `{x}` exactly once (the entity label) and may hold `{art}` (definite
//! article) and `{fill}` (gender-dependent filler) up to three times each.
//! Articles and fillers come from the agreement tables, keyed by language,
//! gender and the first sound of the entity label.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingestion::{KnowledgeBase, PageDoc, Value};
use crate::slotfill::{split_triple_id, ContextRecord};
use crate::tsv;

pub const DEFAULT_AGREEMENT: &str = include_str!("../data/agreement.tsv");
pub const DEFAULT_PRONOUNS: &str = include_str!("../data/pronouns.tsv");

/// Property holding an entity's sex or gender.
pub const SEX_OR_GENDER: &str = "P21";
const MALE: &str = "Q6581097";
const FEMALE: &str = "Q6581072";

const MAX_SLOT_USES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Slot {
    Entity,
    Article,
    Filler,
}

impl Slot {
    fn table_name(self) -> &'static str {
        match self {
            Slot::Entity => "x",
            Slot::Article => "art",
            Slot::Filler => "fill",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Piece {
    Text(String),
    Slot(Slot),
}

fn parse_pattern(pattern: &str) -> std::result::Result<Vec<Piece>, String> {
    let mut pieces = Vec::new();
    let mut rest = pattern;
    let mut uses: BTreeMap<Slot, usize> = BTreeMap::new();
    while let Some(open) = rest.find(['{', '}']) {
        if rest[open..].starts_with('}') {
            return Err("unbalanced `}`".into());
        }
        let close = rest[open..].find('}').ok_or("unclosed `{`")? + open;
        let name = &rest[open + 1..close];
        let slot = match name {
            "x" => Slot::Entity,
            "art" => Slot::Article,
            "fill" => Slot::Filler,
            other => return Err(format!("unknown placeholder `{{{}}}`", other)),
        };
        if open > 0 {
            pieces.push(Piece::Text(rest[..open].to_string()));
        }
        pieces.push(Piece::Slot(slot));
        *uses.entry(slot).or_default() += 1;
        rest = &rest[close + 1..];
    }
    if !rest.is_empty() {
        pieces.push(Piece::Text(rest.to_string()));
    }
    match uses.get(&Slot::Entity) {
        None => return Err("pattern lacks `{x}`".into()),
        Some(&n) if n > 1 => return Err("pattern uses `{x}` more than once".into()),
        _ => {}
    }
    for slot in [Slot::Article, Slot::Filler] {
        if uses.get(&slot).copied().unwrap_or(0) > MAX_SLOT_USES {
            return Err(format!("`{{{}}}` used more than {} times", slot.table_name(), MAX_SLOT_USES));
        }
    }
    Ok(pieces)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub template_id: String,
    pub pid: String,
    pub language: String,
    pub pattern: String,
    pieces: Vec<Piece>,
}

impl Template {
    pub fn new(template_id: &str, pid: &str, language: &str, pattern: &str) -> Result<Self> {
        let pieces = parse_pattern(pattern).map_err(|e| Error::Invalid(format!("template {}: {}", template_id, e)))?;
        Ok(Template {
            template_id: template_id.into(),
            pid: pid.into(),
            language: language.into(),
            pattern: pattern.into(),
            pieces,
        })
    }

    pub fn uses_agreement(&self) -> bool {
        self.pieces.iter().any(|p| matches!(p, Piece::Slot(Slot::Article | Slot::Filler)))
    }
}

/// A template line that failed validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectedTemplate {
    pub line: usize,
    pub template_id: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct TemplateSet {
    by_key: BTreeMap<(String, String), Vec<Template>>,
    pub rejected: Vec<RejectedTemplate>,
}

impl TemplateSet {
    /// Invalid patterns are rejected line by line; a repeated template id is
    /// fatal.
    pub fn parse(source: &Path, content: &str) -> Result<Self> {
        let mut set = TemplateSet::default();
        let mut seen = BTreeSet::new();
        for row in tsv::rows(source, content, 4)? {
            let [id, pid, lang, pattern] = [row.fields[0], row.fields[1], row.fields[2], row.fields[3]];
            if !seen.insert(id.to_string()) {
                return Err(Error::DuplicateTemplate(id.to_string()));
            }
            match parse_pattern(pattern) {
                Ok(pieces) => set.insert(Template {
                    template_id: id.into(),
                    pid: pid.into(),
                    language: lang.into(),
                    pattern: pattern.into(),
                    pieces,
                }),
                Err(reason) => {
                    log::warn!("{}:{}: rejecting template {}: {}", source.display(), row.line, id, reason);
                    set.rejected.push(RejectedTemplate { line: row.line, template_id: id.into(), reason });
                }
            }
        }
        Ok(set)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(path, &tsv::read(path)?)
    }

    pub fn insert(&mut self, template: Template) {
        let key = (template.pid.clone(), template.language.clone());
        let list = self.by_key.entry(key).or_default();
        list.push(template);
        list.sort_by(|a, b| a.template_id.cmp(&b.template_id));
    }

    /// Templates of one property in one language, ordered by id.
    pub fn for_property(&self, pid: &str, lang: &str) -> &[Template] {
        self.by_key
            .get(&(pid.to_string(), lang.to_string()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn count(&self, pid: &str, lang: &str) -> usize {
        self.for_property(pid, lang).len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Template> {
        self.by_key.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.by_key.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenderClass {
    Masculine,
    Feminine,
    Neuter,
    Unknown,
}

impl GenderClass {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "masculine" => Some(GenderClass::Masculine),
            "feminine" => Some(GenderClass::Feminine),
            "neuter" => Some(GenderClass::Neuter),
            "unknown" => Some(GenderClass::Unknown),
            _ => None,
        }
    }
}

impl fmt::Display for GenderClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenderClass::Masculine => "masculine",
            GenderClass::Feminine => "feminine",
            GenderClass::Neuter => "neuter",
            GenderClass::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct PronounTables {
    pronouns: BTreeMap<String, Vec<(String, GenderClass)>>,
}

impl PronounTables {
    pub fn parse(source: &Path, content: &str) -> Result<Self> {
        let mut pronouns: BTreeMap<String, Vec<(String, GenderClass)>> = BTreeMap::new();
        for row in tsv::rows(source, content, 3)? {
            let gender = GenderClass::parse(row.fields[1]).ok_or_else(|| Error::Parse {
                path: source.to_path_buf(),
                line: row.line,
                message: format!("unknown gender `{}`", row.fields[1]),
            })?;
            pronouns
                .entry(row.fields[0].to_string())
                .or_default()
                .push((row.fields[2].to_lowercase(), gender));
        }
        Ok(PronounTables { pronouns })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(path, &tsv::read(path)?)
    }

    pub fn builtin() -> Self {
        Self::parse(Path::new("data/pronouns.tsv"), DEFAULT_PRONOUNS).expect("built-in pronoun table is well formed")
    }
}

/// Grammatical gender of an entity: the KB's sex-or-gender statement when
/// it names male or female, else the majority of masculine vs feminine
/// subject pronouns in the page text, else unknown (also on ties).
pub fn infer_gender(qid: &str, lang: &str, kb: &KnowledgeBase, page: Option<&PageDoc>, pronouns: &PronounTables) -> GenderClass {
    if let Some(entity) = kb.get(qid) {
        for value in entity.values_of(SEX_OR_GENDER) {
            match value {
                Value::Entity(q) if q == MALE => return GenderClass::Masculine,
                Value::Entity(q) if q == FEMALE => return GenderClass::Feminine,
                _ => {}
            }
        }
    }
    let (Some(page), Some(table)) = (page, pronouns.pronouns.get(lang)) else {
        return GenderClass::Unknown;
    };
    let mut tally: BTreeMap<GenderClass, usize> = BTreeMap::new();
    for word in page.text.split(|c: char| !c.is_alphanumeric()).filter(|w| !w.is_empty()) {
        let word = word.to_lowercase();
        for (p, g) in table {
            if *p == word {
                *tally.entry(*g).or_default() += 1;
            }
        }
    }
    let m = tally.get(&GenderClass::Masculine).copied().unwrap_or(0);
    let f = tally.get(&GenderClass::Feminine).copied().unwrap_or(0);
    match m.cmp(&f) {
        std::cmp::Ordering::Greater => GenderClass::Masculine,
        std::cmp::Ordering::Less => GenderClass::Feminine,
        std::cmp::Ordering::Equal => GenderClass::Unknown,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Initial {
    Any,
    Vowel,
    Impure,
}

impl Initial {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "*" => Some(Initial::Any),
            "vowel" => Some(Initial::Vowel),
            "impure" => Some(Initial::Impure),
            _ => None,
        }
    }

    /// Classes a surface form belongs to, most specific first.
    fn of(surface: &str, lang: &str) -> Vec<Initial> {
        let lower: Vec<char> = surface.trim_start().chars().take(2).flat_map(char::to_lowercase).collect();
        let mut out = Vec::new();
        if let Some(&c) = lower.first() {
            let vowel = "aeiouàáâäèéêëìíîïòóôöùúûüœæ".contains(c) || (c == 'h' && matches!(lang, "fr" | "it"));
            if vowel {
                out.push(Initial::Vowel);
            }
            let second = lower.get(1).copied().unwrap_or(' ');
            let impure = matches!(c, 'z' | 'x' | 'y')
                || (c == 's' && second.is_alphabetic() && !"aeiouàèéìòù".contains(second))
                || (c == 'g' && second == 'n')
                || (c == 'p' && matches!(second, 's' | 'n'));
            if impure {
                out.push(Initial::Impure);
            }
        }
        out.push(Initial::Any);
        out
    }
}

/// Article and filler tables (`lang<TAB>slot<TAB>gender<TAB>initial<TAB>value`).
#[derive(Debug, Clone, Default)]
pub struct AgreementTables {
    entries: BTreeMap<(String, String, GenderClass, Initial), String>,
}

impl AgreementTables {
    pub fn parse(source: &Path, content: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for row in tsv::rows(source, content, 5)? {
            let bad = |message: String| Error::Parse { path: source.to_path_buf(), line: row.line, message };
            let slot = row.fields[1];
            if slot != "art" && slot != "fill" {
                return Err(bad(format!("unknown slot `{}`", slot)));
            }
            let gender = GenderClass::parse(row.fields[2]).ok_or_else(|| bad(format!("unknown gender `{}`", row.fields[2])))?;
            let initial = Initial::parse(row.fields[3]).ok_or_else(|| bad(format!("unknown initial class `{}`", row.fields[3])))?;
            entries.insert((row.fields[0].to_string(), slot.to_string(), gender, initial), row.fields[4].to_string());
        }
        Ok(AgreementTables { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(path, &tsv::read(path)?)
    }

    pub fn builtin() -> Self {
        Self::parse(Path::new("data/agreement.tsv"), DEFAULT_AGREEMENT).expect("built-in agreement table is well formed")
    }

    fn lookup(&self, lang: &str, slot: Slot, gender: GenderClass, surface: &str) -> Result<&str> {
        let genders: &[GenderClass] = match gender {
            GenderClass::Unknown | GenderClass::Masculine => &[GenderClass::Masculine],
            g => &[g, GenderClass::Masculine],
        };
        let initials = Initial::of(surface, lang);
        for &g in genders {
            for &i in &initials {
                let key = (lang.to_string(), slot.table_name().to_string(), g, i);
                if let Some(v) = self.entries.get(&key) {
                    return Ok(v);
                }
            }
        }
        Err(Error::AgreementGap { lang: lang.into(), slot: slot.table_name().into() })
    }
}

/// Fills a template. Empty fillers drop one adjacent space, and an article
/// ending in an apostrophe (`l'`) attaches to the following word; everything
/// else in the pattern is kept as written.
pub fn instantiate(template: &Template, entity_surface: &str, gender: GenderClass, tables: &AgreementTables) -> Result<String> {
    let mut out = String::new();
    let mut drop_leading_space = false;
    for piece in &template.pieces {
        match piece {
            Piece::Text(t) => {
                let t = if drop_leading_space { t.strip_prefix(' ').unwrap_or(t) } else { t };
                out.push_str(t);
                drop_leading_space = false;
            }
            Piece::Slot(Slot::Entity) => {
                out.push_str(entity_surface);
                drop_leading_space = false;
            }
            Piece::Slot(slot) => {
                let value = tables.lookup(&template.language, *slot, gender, entity_surface)?;
                if value.is_empty() {
                    // drop the space before the slot, or after it when at the start
                    if out.ends_with(' ') {
                        out.pop();
                        drop_leading_space = false;
                    } else {
                        drop_leading_space = true;
                    }
                    continue;
                }
                out.push_str(value);
                drop_leading_space = value.ends_with('\'') || value.ends_with('’');
            }
        }
    }
    Ok(out)
}

/// One line of `examples.jsonl`. `answers` is empty for NIL examples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RcExample {
    pub id: String,
    pub triple_id: String,
    pub template_id: String,
    pub lang: String,
    pub question: String,
    pub context: String,
    pub answers: Vec<String>,
    pub is_negative: bool,
    pub context_id: String,
    /// Gender used for agreement; `unknown` means masculine defaults were used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gender: Option<GenderClass>,
}

impl RcExample {
    pub fn pid(&self) -> &str {
        split_triple_id(&self.triple_id).1
    }

    pub fn entity1(&self) -> &str {
        split_triple_id(&self.triple_id).0
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuerifyCounts {
    pub contexts: usize,
    pub positive_examples: usize,
    pub negative_examples: usize,
    /// Contexts whose property has no template in their language.
    pub contexts_without_templates: usize,
    /// Contexts whose entity has no label in their language.
    pub contexts_without_label: usize,
}

/// Expands every context with every template of its property and language.
/// `gender_of(qid, lang)` supplies the agreement gender.
pub fn querify_dataset(
    contexts: &[ContextRecord],
    templates: &TemplateSet,
    kb: &KnowledgeBase,
    tables: &AgreementTables,
    mut gender_of: impl FnMut(&str, &str) -> GenderClass,
) -> Result<(Vec<RcExample>, QuerifyCounts)> {
    let mut counts = QuerifyCounts::default();
    let mut out = Vec::new();
    for ctx in contexts {
        counts.contexts += 1;
        let (entity1, pid, _) = split_triple_id(&ctx.triple_id);
        let list = templates.for_property(pid, &ctx.language);
        if list.is_empty() {
            counts.contexts_without_templates += 1;
            continue;
        }
        let Some(label) = kb.label(entity1, &ctx.language) else {
            counts.contexts_without_label += 1;
            continue;
        };
        let gender = gender_of(entity1, &ctx.language);
        for template in list {
            let question = instantiate(template, label, gender, tables)?;
            let answers = ctx.answers.clone().unwrap_or_default();
            if ctx.is_negative() {
                counts.negative_examples += 1;
            } else {
                counts.positive_examples += 1;
            }
            out.push(RcExample {
                id: format!("{}:{}", ctx.id, template.template_id),
                triple_id: ctx.triple_id.clone(),
                template_id: template.template_id.clone(),
                lang: ctx.language.clone(),
                question,
                context: ctx.sentence.clone(),
                answers,
                is_negative: ctx.is_negative(),
                context_id: ctx.id.clone(),
                gender: Some(gender),
            });
        }
    }
    out.sort_by(|a, b| {
        (&a.triple_id, &a.lang, &a.template_id, a.is_negative, &a.context_id)
            .cmp(&(&b.triple_id, &b.lang, &b.template_id, b.is_negative, &b.context_id))
    });
    Ok((out, counts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingestion::{KbEntity, Statement};

    fn t(id: &str, lang: &str, pattern: &str) -> Template {
        Template::new(id, "P17", lang, pattern).unwrap()
    }

    #[test]
    fn template_file_validation() {
        let content = "# id\tpid\tlang\tpattern\n\
            P17-en-1\tP17\ten\tWhat country is {x} located in?\n\
            P50-en-1\tP50\ten\tWho wrote {x}?\n\
            P50-en-2\tP50\ten\tWho wrote?\n\
            P17-it-1\tP17\tit\tDi quale nazione fa parte {art} {x}?\n\
            P17-it-2\tP17\tit\t{x} {x}\n\
            P17-it-3\tP17\tit\t{y} {x}\n";
        let set = TemplateSet::parse(Path::new("t.tsv"), content).unwrap();
        assert_eq!(set.len(), 3);
        assert_eq!(set.rejected.iter().map(|r| r.template_id.as_str()).collect::<Vec<_>>(), ["P50-en-2", "P17-it-2", "P17-it-3"]);
        assert!(set.for_property("P17", "it")[0].uses_agreement());
        assert!(!set.for_property("P17", "en")[0].uses_agreement());
    }

    #[test]
    fn duplicate_template_id_is_fatal() {
        let content = "a\tP17\ten\t{x}?\na\tP17\tde\t{x}?\n";
        assert!(matches!(TemplateSet::parse(Path::new("t.tsv"), content), Err(Error::DuplicateTemplate(_))));
    }

    #[test]
    fn too_many_agreement_slots() {
        assert!(Template::new("a", "P1", "it", "{art} {art} {art} {art} {x}").is_err());
        assert!(Template::new("a", "P1", "it", "{art} {art} {art} {x}").is_ok());
        assert!(Template::new("a", "P1", "it", "{x} }").is_err());
        assert!(Template::new("a", "P1", "it", "{x} {").is_err());
    }

    #[test]
    fn amazon_questions() {
        let tables = AgreementTables::builtin();
        let q = instantiate(&t("a", "en", "What country is {x} located in?"), "Amazon", GenderClass::Unknown, &tables).unwrap();
        assert_eq!(q, "What country is Amazon located in?");
        let q = instantiate(&t("b", "it", "Di quale nazione fa parte {art} {x}?"), "Rio delle Amazzoni", GenderClass::Masculine, &tables).unwrap();
        assert_eq!(q, "Di quale nazione fa parte il Rio delle Amazzoni?");
        let q = instantiate(&t("c", "es", "¿En qué país se encuentra {art} {x}?"), "Amazonas", GenderClass::Unknown, &tables).unwrap();
        assert_eq!(q, "¿En qué país se encuentra el Amazonas?");
    }

    #[test]
    fn articles_follow_gender_and_initial() {
        let tables = AgreementTables::builtin();
        let tpl = t("a", "it", "Dove si trova {art} {x}?");
        let q = |s, g| instantiate(&tpl, s, g, &tables).unwrap();
        assert_eq!(q("Amazzonia", GenderClass::Feminine), "Dove si trova l'Amazzonia?");
        assert_eq!(q("Stretto di Messina", GenderClass::Masculine), "Dove si trova lo Stretto di Messina?");
        assert_eq!(q("Zambesi", GenderClass::Unknown), "Dove si trova lo Zambesi?");
        assert_eq!(q("Senna", GenderClass::Feminine), "Dove si trova la Senna?");
        let de = t("b", "de", "Wo liegt {art} {x}?");
        assert_eq!(instantiate(&de, "Amazonasbecken", GenderClass::Neuter, &tables).unwrap(), "Wo liegt das Amazonasbecken?");
        let es = t("c", "es", "¿Dónde está {art} {x}?");
        // no neuter rows in Spanish: masculine
        assert_eq!(instantiate(&es, "Amazonas", GenderClass::Neuter, &tables).unwrap(), "¿Dónde está el Amazonas?");
        let fill = t("d", "it", "In che anno è {fill} {x}?");
        assert_eq!(instantiate(&fill, "Grazia Deledda", GenderClass::Feminine, &tables).unwrap(), "In che anno è nata Grazia Deledda?");
    }

    #[test]
    fn empty_filler_leaves_no_double_space() {
        let tables = AgreementTables::parse(Path::new("a"), "xx\tfill\tmasculine\t*\t\nxx\tart\tmasculine\t*\t\n").unwrap();
        let q = instantiate(&t("a", "xx", "Where is {fill} {x} now?"), "Rome", GenderClass::Unknown, &tables).unwrap();
        assert_eq!(q, "Where is Rome now?");
        let q = instantiate(&t("b", "xx", "{art} {x} is where?"), "Rome", GenderClass::Unknown, &tables).unwrap();
        assert_eq!(q, "Rome is where?");
    }

    #[test]
    fn missing_table_entry_is_agreement_gap() {
        let err = instantiate(&t("a", "xx", "{art} {x}"), "Rome", GenderClass::Unknown, &AgreementTables::builtin()).unwrap_err();
        assert!(err.to_string().starts_with("agreement-gap"));
    }

    fn kb_with(stmts: Vec<Statement>) -> KnowledgeBase {
        KnowledgeBase::from_entities([KbEntity { qid: "Q1".into(), statements: stmts, ..Default::default() }])
    }

    fn page(lang: &str, text: &str) -> PageDoc {
        PageDoc { qid: "Q1".into(), language: lang.into(), title: "t".into(), text: text.into() }
    }

    #[test]
    fn gender_from_kb_overrides_text() {
        let kb = kb_with(vec![Statement { pid: SEX_OR_GENDER.into(), value: Value::Entity(FEMALE.into()) }]);
        let p = page("de", "Er kam. Er ging. Er blieb.");
        assert_eq!(infer_gender("Q1", "de", &kb, Some(&p), &PronounTables::builtin()), GenderClass::Feminine);
    }

    #[test]
    fn gender_from_pronoun_counts() {
        let kb = kb_with(vec![]);
        let text = format!("{} Sie auch.", "Er kam er. ".repeat(6));
        assert_eq!(text.split_whitespace().filter(|w| w.trim_end_matches('.').eq_ignore_ascii_case("er")).count(), 12);
        let p = page("de", &text);
        assert_eq!(infer_gender("Q1", "de", &kb, Some(&p), &PronounTables::builtin()), GenderClass::Masculine);
        let none = page("de", "Der Fluss fließt.");
        assert_eq!(infer_gender("Q1", "de", &kb, Some(&none), &PronounTables::builtin()), GenderClass::Unknown);
        let tie = page("it", "Lui e lei.");
        assert_eq!(infer_gender("Q1", "it", &kb, Some(&tie), &PronounTables::builtin()), GenderClass::Unknown);
    }

    fn ctx(id: &str, triple: &str, answers: Option<Vec<&str>>) -> ContextRecord {
        ContextRecord {
            id: id.into(),
            triple_id: triple.into(),
            language: "en".into(),
            sentence: "The Amazon proper runs mostly through Brazil and Peru.".into(),
            answers: answers.map(|a| a.into_iter().map(String::from).collect()),
            partner_triple_id: None,
            entity1_surface: None,
        }
    }

    #[test]
    fn expansion_counts_and_nil() {
        let kb = KnowledgeBase::from_entities([KbEntity {
            qid: "Q3783".into(),
            labels: [("en".to_string(), "Amazon".to_string())].into_iter().collect(),
            ..Default::default()
        }]);
        let mut set = TemplateSet::default();
        set.insert(t("P17-en-1", "en", "What country is {x} located in?"));
        set.insert(t("P17-en-2", "en", "In which country is {x}?"));
        set.insert(t("P17-en-3", "en", "{x} is in which country?"));
        let contexts = vec![
            ctx("en:Q3783|P17|Q155:p", "Q3783|P17|Q155", Some(vec!["Brazil", "Peru"])),
            ctx("en:Q3783|P17|Q155:n0", "Q3783|P17|Q155", None),
            ctx("en:Q3783|P50|Q1:p", "Q3783|P50|Q1", Some(vec!["x"])),
        ];
        let (exs, counts) = querify_dataset(&contexts, &set, &kb, &AgreementTables::builtin(), |_, _| GenderClass::Unknown).unwrap();
        assert_eq!(counts.positive_examples, 3);
        assert_eq!(counts.negative_examples, 3);
        assert_eq!(counts.contexts_without_templates, 1);
        assert_eq!(exs.len(), 6);
        assert_eq!(exs[0].question, "What country is Amazon located in?");
        assert_eq!(exs[0].answers, ["Brazil", "Peru"]);
        assert!(!exs[0].is_negative && exs[1].is_negative && exs[1].answers.is_empty());
        assert!(exs.iter().all(|e| !e.question.contains('{') && e.question.contains("Amazon")));
        assert_eq!(exs[0].pid(), "P17");
        assert_eq!(exs[0].entity1(), "Q3783");
    }
}
