//! Build configuration: a flat `key = value` file.
//!
//! ```text
//! # paths are relative to the config file
//! kb = kb.jsonl
//! corpus.en = corpus/en.jsonl
//! corpus.de = corpus/de.jsonl
//! properties = properties.tsv
//! templates = templates.tsv
//! langs = en,de
//! negative_ratio = 0.2
//! fractions = 0.8,0.1,0.1
//! folds = 5
//! peek = true
//! ```
//!
//! Optional path keys: `locale`, `agreement`, `pronouns`, `abbreviations`,
//! `vocab`. Without them the built-in tables are used and coverage is not
//! computed. Other optional keys: `seed` (default 0), `pivot` (default `en`
//! or the first language), `template_holdout` (default false).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::splits::Fractions;

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub kb: PathBuf,
    pub corpora: BTreeMap<String, PathBuf>,
    pub properties: PathBuf,
    pub templates: PathBuf,
    pub locale: Option<PathBuf>,
    pub agreement: Option<PathBuf>,
    pub pronouns: Option<PathBuf>,
    pub abbreviations: Option<PathBuf>,
    pub vocab: Option<PathBuf>,
    pub languages: Vec<String>,
    pub seed: u64,
    pub negative_ratio: f64,
    pub fractions: Fractions,
    pub folds: usize,
    pub peek: bool,
    pub pivot: String,
    pub template_holdout: bool,
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected true or false, got `{v}`"))),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Config(format!("{key}: cannot parse `{v}`")))
}

pub fn parse_languages(v: &str) -> Vec<String> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::to_string).collect()
}

impl Config {
    pub fn parse(content: &str, base: &Path) -> Result<Self> {
        let mut raw: BTreeMap<String, String> = BTreeMap::new();
        for (i, line) in content.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", i + 1)))?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if raw.insert(k.clone(), v).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key `{}`", i + 1, k)));
            }
        }

        let path = |v: &str| base.join(v);
        let mut take = |k: &str| raw.remove(k);
        let required = |v: Option<String>, k: &str| v.ok_or_else(|| Error::Config(format!("missing key `{k}`")));

        let kb = path(&required(take("kb"), "kb")?);
        let properties = path(&required(take("properties"), "properties")?);
        let templates = path(&required(take("templates"), "templates")?);
        let locale = take("locale").map(|v| path(&v));
        let agreement = take("agreement").map(|v| path(&v));
        let pronouns = take("pronouns").map(|v| path(&v));
        let abbreviations = take("abbreviations").map(|v| path(&v));
        let vocab = take("vocab").map(|v| path(&v));
        let seed = take("seed").map(|v| parse_num("seed", &v)).transpose()?.unwrap_or(0);
        let negative_ratio: f64 =
            take("negative_ratio").map(|v| parse_num("negative_ratio", &v)).transpose()?.unwrap_or(0.2);
        let fractions = match take("fractions") {
            Some(v) => {
                let parts: Vec<f64> =
                    v.split(',').map(|p| parse_num("fractions", p.trim())).collect::<Result<_>>()?;
                match parts[..] {
                    [a, b, c] => Fractions::new(a, b, c)?,
                    _ => return Err(Error::Config("fractions: expected three comma-separated numbers".into())),
                }
            }
            None => Fractions::default(),
        };
        let folds = take("folds").map(|v| parse_num("folds", &v)).transpose()?.unwrap_or(5);
        let peek = take("peek").map(|v| parse_bool("peek", &v)).transpose()?.unwrap_or(false);
        let template_holdout =
            take("template_holdout").map(|v| parse_bool("template_holdout", &v)).transpose()?.unwrap_or(false);
        let langs = take("langs").map(|v| parse_languages(&v));
        let pivot = take("pivot");

        let mut corpora = BTreeMap::new();
        let keys: Vec<String> = raw.keys().cloned().collect();
        for k in keys {
            if let Some(lang) = k.strip_prefix("corpus.") {
                corpora.insert(lang.to_string(), path(&raw.remove(&k).expect("key listed")));
            }
        }
        if let Some(k) = raw.keys().next() {
            return Err(Error::Config(format!("unknown key `{k}`")));
        }
        if !(negative_ratio.is_finite() && negative_ratio >= 0.0) {
            return Err(Error::Config(format!("negative_ratio must be non-negative, got {negative_ratio}")));
        }

        let mut cfg = Config {
            kb,
            corpora,
            properties,
            templates,
            locale,
            agreement,
            pronouns,
            abbreviations,
            vocab,
            languages: Vec::new(),
            seed,
            negative_ratio,
            fractions,
            folds,
            peek,
            pivot: String::new(),
            template_holdout,
        };
        cfg.set_languages(langs)?;
        cfg.pivot = match pivot {
            Some(p) => p,
            None if cfg.languages.iter().any(|l| l == "en") => "en".into(),
            None => cfg.languages[0].clone(),
        };
        if !cfg.languages.contains(&cfg.pivot) {
            return Err(Error::Config(format!("pivot `{}` is not a configured language", cfg.pivot)));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&content, path.parent().unwrap_or(Path::new(".")))
    }

    /// Restricts the build to `langs` (all corpora when `None`). Every
    /// language needs a corpus.
    pub fn set_languages(&mut self, langs: Option<Vec<String>>) -> Result<()> {
        let langs = langs.unwrap_or_else(|| self.corpora.keys().cloned().collect());
        if langs.is_empty() {
            return Err(Error::Config("no languages configured".into()));
        }
        if let Some(l) = langs.iter().find(|l| !self.corpora.contains_key(*l)) {
            return Err(Error::Config(format!("no corpus configured for language `{l}`")));
        }
        self.languages = langs;
        if !self.pivot.is_empty() && !self.languages.contains(&self.pivot) {
            self.pivot = self.languages[0].clone();
        }
        Ok(())
    }

    /// Every input file, by config key, for digesting.
    pub fn inputs(&self) -> Vec<(String, PathBuf)> {
        let mut out = vec![
            ("kb".to_string(), self.kb.clone()),
            ("properties".to_string(), self.properties.clone()),
            ("templates".to_string(), self.templates.clone()),
        ];
        for l in &self.languages {
            out.push((format!("corpus.{l}"), self.corpora[l].clone()));
        }
        for (k, v) in [
            ("locale", &self.locale),
            ("agreement", &self.agreement),
            ("pronouns", &self.pronouns),
            ("abbreviations", &self.abbreviations),
            ("vocab", &self.vocab),
        ] {
            if let Some(p) = v {
                out.push((k.to_string(), p.clone()));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = "kb = kb.jsonl\ncorpus.en = en.jsonl\ncorpus.de = de.jsonl\nproperties = p.tsv\ntemplates = t.tsv\n";

    #[test]
    fn defaults_and_relative_paths() {
        let c = Config::parse(BASIC, Path::new("/data")).unwrap();
        assert_eq!(c.kb, PathBuf::from("/data/kb.jsonl"));
        assert_eq!(c.languages, ["de", "en"]);
        assert_eq!(c.pivot, "en");
        assert_eq!((c.negative_ratio, c.folds, c.peek, c.seed), (0.2, 5, false, 0));
        assert_eq!(c.fractions, Fractions::default());
        assert_eq!(c.inputs().len(), 5);
    }

    #[test]
    fn explicit_values() {
        let text = format!("{BASIC}# comment\nlangs = en, de\nfractions = 0.6,0.2,0.2\npeek = true\nfolds=2\nseed = 7\nnegative_ratio = 1.5\n");
        let c = Config::parse(&text, Path::new(".")).unwrap();
        assert_eq!(c.languages, ["en", "de"]);
        assert_eq!(c.fractions, Fractions::new(0.6, 0.2, 0.2).unwrap());
        assert!(c.peek);
        assert_eq!((c.folds, c.seed, c.negative_ratio), (2, 7, 1.5));
    }

    #[test]
    fn errors() {
        let bad = |extra: &str| Config::parse(&format!("{BASIC}{extra}"), Path::new(".")).unwrap_err().to_string();
        assert!(bad("colour = blue\n").contains("unknown key"));
        assert!(bad("kb = other\n").contains("duplicate"));
        assert!(bad("langs = en,fr\n").contains("no corpus"));
        assert!(bad("fractions = 0.5,0.5\n").contains("fractions"));
        assert!(bad("peek = maybe\n").contains("peek"));
        assert!(bad("pivot = it\n").contains("pivot"));
        assert!(bad("just text\n").contains("key = value"));
        assert!(Config::parse("corpus.en = x\n", Path::new(".")).unwrap_err().to_string().contains("missing key"));
    }
}
