use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

use rcre::baselines::{heuristic_predict, nil_predict, oracle_predict};
use rcre::config::Config;
use rcre::evalscore::{score, score_by_group, GroupKey, Prediction, ScoreOptions};
use rcre::jsonl::{read_all, write_all, write_json};
use rcre::pipeline::{read_ids, run_stage, Layout, Manifest, STAGES};
use rcre::querify::RcExample;

#[derive(Parser)]
#[command(name = "rcre", version, about = "Build, split and score a multilingual relation-extraction reading-comprehension dataset")]
struct Cli {
    /// Build configuration (key = value file)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Comma-separated languages, e.g. en,de,es,fr,it
    #[arg(long, global = true, value_delimiter = ',')]
    langs: Option<Vec<String>>,
    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load the KB and corpora and align pages with entities
    Ingest,
    /// Extract positive and negative contexts
    Slotfill,
    /// Turn contexts into question/context/answer examples
    Querify,
    /// Write unseen-entity, parallel and unseen-relation split manifests
    Split,
    /// Write dataset statistics
    Stats,
    /// Run every stage from ingest to stats
    Build,
    /// Score predictions against gold examples
    Score {
        /// Gold examples (defaults to the querify output under --out)
        #[arg(long)]
        gold: Option<PathBuf>,
        /// Predictions, JSON lines of {example_id, answer}
        #[arg(long)]
        pred: PathBuf,
        /// Only score gold examples whose ids are listed in this file
        #[arg(long)]
        ids: Option<PathBuf>,
        /// Add per-group reports
        #[arg(long, value_parser = ["pid", "language", "template"])]
        group_by: Option<String>,
        /// Compare answers without lowercasing
        #[arg(long)]
        case_sensitive: bool,
    },
    /// Write predictions of a fixed baseline
    Baseline {
        #[arg(long, value_enum)]
        mode: Mode,
        /// Gold examples (defaults to the querify output under --out)
        #[arg(long)]
        gold: Option<PathBuf>,
        /// Only predict examples whose ids are listed in this file
        #[arg(long)]
        ids: Option<PathBuf>,
        /// Prediction file (defaults to <out>/baseline/<mode>.jsonl)
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Oracle,
    Nil,
    Heuristic,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Oracle => "oracle",
            Mode::Nil => "nil",
            Mode::Heuristic => "heuristic",
        }
    }
}

fn load_config(cli: &Cli) -> Result<Config, Failure> {
    let path = cli.config.as_ref().ok_or_else(|| Failure::Usage("this command needs --config <path>".into()))?;
    let mut cfg = Config::load(path).with_context(|| format!("config {}", path.display()))?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if cli.langs.is_some() {
        cfg.set_languages(cli.langs.clone())?;
    }
    Ok(cfg)
}

/// Usage problems exit with 1, everything else with 2.
enum Failure {
    Usage(String),
    Input(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.into())
    }
}

fn stages(cfg: &Config, layout: &Layout, names: &[&str]) -> anyhow::Result<()> {
    for stage in names {
        log::info!("stage {}", stage);
        run_stage(stage, cfg, layout).with_context(|| format!("stage `{stage}`"))?;
        Manifest::for_config(stage, cfg)?.write(&layout.dir(stage).join("manifest.json"))?;
    }
    Ok(())
}

fn load_gold(layout: &Layout, gold: &Option<PathBuf>, ids: &Option<PathBuf>) -> anyhow::Result<(PathBuf, Vec<RcExample>)> {
    let path = gold.clone().unwrap_or_else(|| layout.examples());
    let mut examples: Vec<RcExample> = read_all(&path).with_context(|| format!("gold {}", path.display()))?;
    if let Some(ids) = ids {
        let keep: BTreeSet<String> = read_ids(ids)?.into_iter().collect();
        examples.retain(|e| keep.contains(&e.id));
    }
    Ok((path, examples))
}

fn inputs(files: &[(&str, &Option<PathBuf>)]) -> Vec<(String, PathBuf)> {
    files.iter().filter_map(|(k, p)| p.as_ref().map(|p| (k.to_string(), p.clone()))).collect()
}

fn run(cli: Cli) -> Result<(), Failure> {
    let layout = Layout::new(&cli.out);
    match &cli.command {
        Command::Ingest => stages(&load_config(&cli)?, &layout, &["ingest"])?,
        Command::Slotfill => stages(&load_config(&cli)?, &layout, &["slotfill"])?,
        Command::Querify => stages(&load_config(&cli)?, &layout, &["querify"])?,
        Command::Split => stages(&load_config(&cli)?, &layout, &["split"])?,
        Command::Stats => stages(&load_config(&cli)?, &layout, &["stats"])?,
        Command::Build => {
            let cfg = load_config(&cli)?;
            stages(&cfg, &layout, &STAGES)?;
            Manifest::for_config("build", &cfg)?.write(&cli.out.join("manifest.json"))?;
        }
        Command::Score { gold, pred, ids, group_by, case_sensitive } => {
            let (gold_path, examples) = load_gold(&layout, gold, ids).context("stage `score`")?;
            let mut preds: Vec<Prediction> =
                read_all(pred).with_context(|| format!("stage `score`: predictions {}", pred.display()))?;
            if ids.is_some() {
                // predictions outside the id list are not scored
                let keep: BTreeSet<&str> = examples.iter().map(|e| e.id.as_str()).collect();
                preds.retain(|p| keep.contains(p.example_id.as_str()));
            }
            let opts = ScoreOptions { case_sensitive: *case_sensitive };
            let report = score(&examples, &preds, opts).context("stage `score`")?;
            let mut json = serde_json::to_value(&report)?;
            if let Some(key) = group_by {
                let key = GroupKey::parse(key).ok_or_else(|| anyhow!("unknown group key {key}"))?;
                let groups = score_by_group(&examples, &preds, key, opts).context("stage `score`")?;
                json["groups"] = serde_json::to_value(groups)?;
            }
            println!("{}", serde_json::to_string_pretty(&json)?);
            let dir = cli.out.join("score");
            std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            write_json(&dir.join("report.json"), &json)?;
            let files = [("gold", &Some(gold_path)), ("pred", &Some(pred.clone())), ("ids", ids)];
            let mut manifest = Manifest::new("score", &inputs(&files))?;
            manifest.settings.insert("case_sensitive".into(), case_sensitive.to_string());
            if let Some(key) = group_by {
                manifest.settings.insert("group_by".into(), key.clone());
            }
            manifest.write(&dir.join("manifest.json"))?;
        }
        Command::Baseline { mode, gold, ids, output } => {
            let (gold_path, examples) = load_gold(&layout, gold, ids).context("stage `baseline`")?;
            let preds = match mode {
                Mode::Oracle => oracle_predict(&examples),
                Mode::Nil => nil_predict(&examples),
                Mode::Heuristic => heuristic_predict(&examples),
            };
            let path = output.clone().unwrap_or_else(|| cli.out.join("baseline").join(format!("{}.jsonl", mode.name())));
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            write_all(&path, &preds)?;
            let files = [("gold", &Some(gold_path)), ("ids", ids)];
            let mut manifest = Manifest::new("baseline", &inputs(&files))?;
            manifest.settings.insert("mode".into(), mode.name().into());
            let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
            manifest.write(&dir.join(format!("{}.manifest.json", mode.name())))?;
            log::info!("{} predictions written to {}", preds.len(), path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nrun `rcre --help` for usage");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
