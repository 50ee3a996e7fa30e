//! File-level stages. Each stage reads the configuration plus the files the
//! previous stage wrote under the output directory, and writes its own.
//!
//! ```text
//! out/ingest/pages.jsonl, report.json
//! out/slotfill/triples.jsonl, contexts.jsonl, report.json
//! out/querify/examples.jsonl, report.json
//! out/split/unent/<lang>/{train,dev,test}.txt
//! out/split/parallel/<pivot>-<lang>/{dev,test}.<lang>.txt, summary.json
//! out/split/unrel/folds.json, round<r>/<lang>/{train,test}.txt
//! out/stats/counts.json, top_properties.json, overlap.json, overlap.dat,
//!           context_lengths.json, coverage.json
//! ```

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, Read};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::Config;
use crate::denormalize::{Denormalizer, LocaleTables, PropertyCatalog};
use crate::error::{Error, Result};
use crate::ingestion::{align, load_corpus, AlignmentCounts, KnowledgeBase, PageDoc};
use crate::jsonl::{read_all, write_all, write_json};
use crate::querify::{
    infer_gender, querify_dataset, AgreementTables, PronounTables, QuerifyCounts, RcExample, RejectedTemplate,
    TemplateSet,
};
use crate::slotfill::{build_negatives, context_records, ContextRecord, NegativeCounts, PositiveCounts, SlotFiller, Triple};
use crate::splits::{build_parallel_testsets, fold_examples, fold_unrel, split_unent, UnentOptions};
use crate::stats::{context_length_stats, count_table, load_vocab, overlap_matrix, top_properties, vocab_coverage};
use crate::text::Segmenter;

pub const STAGES: [&str; 5] = ["ingest", "slotfill", "querify", "split", "stats"];

#[derive(Debug, Clone)]
pub struct Layout {
    pub root: PathBuf,
}

impl Layout {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Layout { root: root.into() }
    }

    pub fn dir(&self, stage: &str) -> PathBuf {
        self.root.join(stage)
    }

    fn create(&self, stage: &str) -> Result<PathBuf> {
        let dir = self.dir(stage);
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(dir)
    }

    pub fn pages(&self) -> PathBuf {
        self.dir("ingest").join("pages.jsonl")
    }

    pub fn triples(&self) -> PathBuf {
        self.dir("slotfill").join("triples.jsonl")
    }

    pub fn contexts(&self) -> PathBuf {
        self.dir("slotfill").join("contexts.jsonl")
    }

    pub fn examples(&self) -> PathBuf {
        self.dir("querify").join("examples.jsonl")
    }
}

fn optional<T>(path: &Option<PathBuf>, load: impl Fn(&Path) -> Result<T>, builtin: impl Fn() -> T) -> Result<T> {
    match path {
        Some(p) => load(p),
        None => Ok(builtin()),
    }
}

fn mkdir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// One id per line.
pub fn write_ids(path: &Path, ids: &[String]) -> Result<()> {
    let mut s = ids.join("\n");
    if !s.is_empty() {
        s.push('\n');
    }
    std::fs::write(path, s).map_err(|e| Error::io(path, e))
}

pub fn read_ids(path: &Path) -> Result<Vec<String>> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(content.lines().filter(|l| !l.is_empty()).map(str::to_string).collect())
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageIngest {
    pub pages: usize,
    pub malformed_lines: usize,
    pub empty_text: usize,
    pub alignment: AlignmentCounts,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub kb_entities: usize,
    pub kb_malformed_lines: usize,
    pub kb_duplicates: usize,
    pub languages: BTreeMap<String, LanguageIngest>,
}

fn load_kb(cfg: &Config) -> Result<KnowledgeBase> {
    let (kb, skipped) = KnowledgeBase::load(&cfg.kb, &cfg.languages)?;
    if skipped > 0 {
        log::warn!("{} malformed KB lines skipped", skipped);
    }
    Ok(kb)
}

pub fn ingest(cfg: &Config, layout: &Layout) -> Result<IngestReport> {
    let (kb, kb_skipped) = KnowledgeBase::load(&cfg.kb, &cfg.languages)?;
    let mut report = IngestReport {
        kb_entities: kb.len(),
        kb_malformed_lines: kb_skipped,
        kb_duplicates: kb.duplicates(),
        languages: BTreeMap::new(),
    };
    let mut aligned: Vec<PageDoc> = Vec::new();
    for lang in &cfg.languages {
        let mut reader = load_corpus(&cfg.corpora[lang], lang)?;
        let pages = reader.by_ref().collect::<Result<Vec<_>>>()?;
        let alignment = align(&kb, &pages, lang);
        aligned.extend(alignment.views.iter().map(|v| v.page.clone()));
        report.languages.insert(
            lang.clone(),
            LanguageIngest {
                pages: pages.len(),
                malformed_lines: reader.skipped(),
                empty_text: reader.dropped_empty(),
                alignment: alignment.counts,
            },
        );
    }
    let dir = layout.create("ingest")?;
    write_all(&layout.pages(), &aligned)?;
    write_json(&dir.join("report.json"), &report)?;
    Ok(report)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotfillReport {
    pub triples: usize,
    pub positives: PositiveCounts,
    pub negatives: NegativeCounts,
}

pub fn slotfill(cfg: &Config, layout: &Layout) -> Result<SlotfillReport> {
    let kb = load_kb(cfg)?;
    let catalog = PropertyCatalog::load(&cfg.properties)?;
    let locale = optional(&cfg.locale, LocaleTables::load, LocaleTables::builtin)?;
    let segmenter = optional(&cfg.abbreviations, Segmenter::load, Segmenter::builtin)?;
    let pages: Vec<PageDoc> = read_all(&layout.pages())?;

    let mut views = Vec::new();
    for lang in &cfg.languages {
        views.extend(align(&kb, &pages, lang).views);
    }
    let filler = SlotFiller::new(Denormalizer::new(&kb, &catalog, &locale), &segmenter);
    let build = filler.build_positives(&views);
    let (negatives, negative_counts) = build_negatives(&build.positives, &build.triples, cfg.negative_ratio, cfg.seed);
    let contexts = context_records(&build.positives, &negatives);

    let dir = layout.create("slotfill")?;
    let triples: Vec<&Triple> = build.triples.values().collect();
    write_all(&layout.triples(), triples.iter().copied())?;
    write_all(&layout.contexts(), &contexts)?;
    let report = SlotfillReport { triples: triples.len(), positives: build.counts, negatives: negative_counts };
    write_json(&dir.join("report.json"), &report)?;
    Ok(report)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuerifyReport {
    pub templates: usize,
    pub rejected_templates: Vec<RejectedTemplate>,
    pub counts: QuerifyCounts,
}

pub fn querify(cfg: &Config, layout: &Layout) -> Result<QuerifyReport> {
    let kb = load_kb(cfg)?;
    let templates = TemplateSet::load(&cfg.templates)?;
    let agreement = optional(&cfg.agreement, AgreementTables::load, AgreementTables::builtin)?;
    let pronouns = optional(&cfg.pronouns, PronounTables::load, PronounTables::builtin)?;
    let pages: Vec<PageDoc> = read_all(&layout.pages())?;
    let by_key: BTreeMap<(&str, &str), &PageDoc> =
        pages.iter().map(|p| ((p.qid.as_str(), p.language.as_str()), p)).collect();
    let contexts: Vec<ContextRecord> = read_all(&layout.contexts())?;
    let contexts: Vec<ContextRecord> =
        contexts.into_iter().filter(|c| cfg.languages.contains(&c.language)).collect();

    let (examples, counts) = querify_dataset(&contexts, &templates, &kb, &agreement, |qid, lang| {
        infer_gender(qid, lang, &kb, by_key.get(&(qid, lang)).copied(), &pronouns)
    })?;
    let dir = layout.create("querify")?;
    write_all(&layout.examples(), &examples)?;
    let report = QuerifyReport { templates: templates.len(), rejected_templates: templates.rejected.clone(), counts };
    write_json(&dir.join("report.json"), &report)?;
    Ok(report)
}

fn read_examples(cfg: &Config, layout: &Layout) -> Result<Vec<RcExample>> {
    let all: Vec<RcExample> = read_all(&layout.examples())?;
    Ok(all.into_iter().filter(|e| cfg.languages.contains(&e.lang)).collect())
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCounts {
    pub train: usize,
    pub dev: usize,
    pub test: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelCounts {
    pub dev: usize,
    pub test: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitReport {
    pub unent: BTreeMap<String, SplitCounts>,
    /// Retained triples per target language.
    pub parallel: BTreeMap<String, ParallelCounts>,
    pub unrel_folds: usize,
    pub unrel_pids: usize,
}

pub fn split(cfg: &Config, layout: &Layout) -> Result<SplitReport> {
    let examples = read_examples(cfg, layout)?;
    let root = layout.create("split")?;
    let mut report = SplitReport::default();

    let unent = split_unent(&examples, cfg.fractions, cfg.seed, UnentOptions { template_holdout: cfg.template_holdout })?;
    for (lang, s) in &unent {
        let dir = root.join("unent").join(lang);
        mkdir(&dir)?;
        write_ids(&dir.join("train.txt"), &s.train)?;
        write_ids(&dir.join("dev.txt"), &s.dev)?;
        write_ids(&dir.join("test.txt"), &s.test)?;
        report.unent.insert(lang.clone(), SplitCounts { train: s.train.len(), dev: s.dev.len(), test: s.test.len() });
    }

    if unent.contains_key(&cfg.pivot) {
        let parallel = build_parallel_testsets(&examples, &unent, &cfg.pivot)?;
        for (lang, set) in &parallel {
            let dir = root.join("parallel").join(format!("{}-{}", cfg.pivot, lang));
            mkdir(&dir)?;
            for (name, part) in [("dev", &set.dev), ("test", &set.test)] {
                write_ids(&dir.join(format!("{name}.{}.txt", cfg.pivot)), &part.pivot_examples)?;
                write_ids(&dir.join(format!("{name}.{lang}.txt")), &part.target_examples)?;
                write_ids(&dir.join(format!("{name}.triples.txt")), &part.triples)?;
            }
            report
                .parallel
                .insert(lang.clone(), ParallelCounts { dev: set.dev.triples.len(), test: set.test.triples.len() });
        }
    } else {
        log::warn!("pivot language {} has no examples; no parallel sets", cfg.pivot);
    }

    let mut pids: Vec<String> = examples.iter().map(|e| e.pid().to_string()).collect();
    pids.sort();
    pids.dedup();
    let folds = fold_unrel(&pids, &cfg.languages, cfg.folds, cfg.peek, cfg.seed)?;
    let dir = root.join("unrel");
    mkdir(&dir)?;
    write_json(&dir.join("folds.json"), &folds.manifests())?;
    for ((round, lang), sets) in fold_examples(&examples, &folds) {
        let d = dir.join(format!("round{round}")).join(&lang);
        mkdir(&d)?;
        write_ids(&d.join("train.txt"), &sets.train)?;
        write_ids(&d.join("test.txt"), &sets.test)?;
    }
    report.unrel_folds = folds.k;
    report.unrel_pids = pids.len();
    write_json(&root.join("report.json"), &report)?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedProperty {
    pub pid: String,
    pub count: usize,
}

pub fn stats(cfg: &Config, layout: &Layout) -> Result<()> {
    let examples = read_examples(cfg, layout)?;
    let dir = layout.create("stats")?;

    write_json(&dir.join("counts.json"), &count_table(&examples, &cfg.languages))?;

    let top: BTreeMap<String, Vec<RankedProperty>> = top_properties(&examples, 10)
        .into_iter()
        .map(|(l, v)| (l, v.into_iter().map(|(pid, count)| RankedProperty { pid, count }).collect()))
        .collect();
    write_json(&dir.join("top_properties.json"), &top)?;

    let all = overlap_matrix(&examples, &cfg.languages, None);
    let mut pids: Vec<&str> = examples.iter().map(|e| e.pid()).collect();
    pids.sort();
    pids.dedup();
    let by_property: BTreeMap<&str, _> =
        pids.iter().map(|p| (*p, overlap_matrix(&examples, &cfg.languages, Some(p)))).collect();
    let overlap = serde_json::json!({ "all": all, "by_property": by_property });
    write_json(&dir.join("overlap.json"), &overlap)?;
    let dat = dir.join("overlap.dat");
    std::fs::write(&dat, all.to_gnuplot()).map_err(|e| Error::io(&dat, e))?;

    let unent = split_unent(&examples, cfg.fractions, cfg.seed, UnentOptions { template_holdout: cfg.template_holdout })?;
    write_json(&dir.join("context_lengths.json"), &context_length_stats(&examples, &unent))?;

    let coverage = match &cfg.vocab {
        Some(path) => vocab_coverage(&examples, &load_vocab(path)?),
        None => {
            log::warn!("no vocab configured; coverage.json is empty");
            BTreeMap::new()
        }
    };
    write_json(&dir.join("coverage.json"), &coverage)?;
    Ok(())
}

/// Runs one named stage.
pub fn run_stage(stage: &str, cfg: &Config, layout: &Layout) -> Result<()> {
    match stage {
        "ingest" => ingest(cfg, layout).map(drop),
        "slotfill" => slotfill(cfg, layout).map(drop),
        "querify" => querify(cfg, layout).map(drop),
        "split" => split(cfg, layout).map(drop),
        "stats" => stats(cfg, layout),
        other => Err(Error::Invalid(format!("unknown stage `{other}`"))),
    }
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = BufReader::new(file);
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 64 * 1024];
    loop {
        let n = reader.read(&mut buf).map_err(|e| Error::io(path, e))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hasher.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// What a run was computed from. Contains no timestamps, so equal inputs
/// give byte-identical manifests.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: Option<u64>,
    pub languages: Vec<String>,
    pub settings: BTreeMap<String, String>,
    pub inputs: BTreeMap<String, InputDigest>,
}

impl Manifest {
    pub fn new(command: &str, inputs: &[(String, PathBuf)]) -> Result<Self> {
        let mut digests = BTreeMap::new();
        for (key, path) in inputs {
            digests.insert(key.clone(), InputDigest { path: path.display().to_string(), sha256: sha256_file(path)? });
        }
        Ok(Manifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            seed: None,
            languages: Vec::new(),
            settings: BTreeMap::new(),
            inputs: digests,
        })
    }

    pub fn for_config(command: &str, cfg: &Config) -> Result<Self> {
        let mut m = Self::new(command, &cfg.inputs())?;
        m.seed = Some(cfg.seed);
        m.languages = cfg.languages.clone();
        let f = cfg.fractions;
        for (k, v) in [
            ("negative_ratio", cfg.negative_ratio.to_string()),
            ("fractions", format!("{},{},{}", f.train, f.dev, f.test)),
            ("folds", cfg.folds.to_string()),
            ("peek", cfg.peek.to_string()),
            ("pivot", cfg.pivot.clone()),
            ("template_holdout", cfg.template_holdout.to_string()),
        ] {
            m.settings.insert(k.to_string(), v);
        }
        Ok(m)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            mkdir(dir)?;
        }
        write_json(path, self)
    }
}
