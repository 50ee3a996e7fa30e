//! Experimental partitions.
//!
//! * Unseen entities: each language's entity set is put in a seeded order
//!   (the same for every language) and cut by fractions; examples follow
//!   their entity, so no entity is shared between train and dev/test of one
//!   language.
//! * Parallel test sets: for a pivot language and a target, the target's
//!   dev/test triples that also exist in the pivot, minus those whose entity
//!   the pivot trains on.
//! * Unseen relations: properties are shuffled into `k` folds. Without peeking
//!   every language tests fold `r` in round `r`. With peeking, language `l`
//!   tests fold `(r + l) mod k`, so its test properties are missing from its
//!   own training data but present in other languages' training data.
//!
//! Everything here is a pure function of its inputs and the seed.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::querify::RcExample;

fn rng_for(seed: u64, parts: &[&str]) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    ChaCha8Rng::from_seed(h.finalize().into())
}

fn shuffle_key(seed: u64, qid: &str) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(b"unent\0");
    h.update(qid.as_bytes());
    h.finalize().into()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fractions {
    pub train: f64,
    pub dev: f64,
    pub test: f64,
}

impl Default for Fractions {
    fn default() -> Self {
        Fractions { train: 0.8, dev: 0.1, test: 0.1 }
    }
}

impl Fractions {
    pub fn new(train: f64, dev: f64, test: f64) -> Result<Self> {
        let f = Fractions { train, dev, test };
        let ok = [train, dev, test].iter().all(|x| x.is_finite() && *x >= 0.0) && ((train + dev + test) - 1.0).abs() < 1e-9;
        if !ok {
            return Err(Error::Config(format!("split fractions {train}/{dev}/{test} must be non-negative and sum to 1")));
        }
        Ok(f)
    }

    /// Largest-remainder apportionment of `n` items, then every split with a
    /// positive fraction is topped up to one item from the largest split.
    pub fn apportion(&self, n: usize) -> [usize; 3] {
        let shares = [self.train, self.dev, self.test];
        let mut counts = shares.map(|f| (f * n as f64).floor() as usize);
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| {
            let ra = shares[a] * n as f64 - counts[a] as f64;
            let rb = shares[b] * n as f64 - counts[b] as f64;
            rb.partial_cmp(&ra).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
        });
        let mut left = n - counts.iter().sum::<usize>();
        for &i in order.iter().cycle() {
            if left == 0 {
                break;
            }
            if shares[i] > 0.0 {
                counts[i] += 1;
                left -= 1;
            }
        }
        for i in 0..3 {
            if shares[i] > 0.0 && counts[i] == 0 {
                let donor = (0..3).max_by_key(|&j| (counts[j], std::cmp::Reverse(j))).expect("three splits");
                if counts[donor] > 1 {
                    counts[donor] -= 1;
                    counts[i] += 1;
                }
            }
        }
        counts
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageSplit {
    pub train_entities: BTreeSet<String>,
    pub dev_entities: BTreeSet<String>,
    pub test_entities: BTreeSet<String>,
    /// Example ids, sorted.
    pub train: Vec<String>,
    pub dev: Vec<String>,
    pub test: Vec<String>,
    /// Templates kept out of training when template holdout is on.
    pub heldout_templates: BTreeSet<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UnentOptions {
    /// Hold one template per (property, language) out of training when the
    /// property has more than one; dev/test then only use held-out templates
    /// for such properties.
    pub template_holdout: bool,
}

pub fn split_unent(
    examples: &[RcExample],
    fractions: Fractions,
    seed: u64,
    opts: UnentOptions,
) -> Result<BTreeMap<String, LanguageSplit>> {
    let mut by_lang: BTreeMap<&str, Vec<&RcExample>> = BTreeMap::new();
    for ex in examples {
        by_lang.entry(&ex.lang).or_default().push(ex);
    }
    let mut out = BTreeMap::new();
    for (lang, exs) in by_lang {
        let entities: BTreeSet<&str> = exs.iter().map(|e| e.entity1()).collect();
        if entities.len() < 3 {
            return Err(Error::InsufficientEntities { lang: lang.into(), count: entities.len() });
        }
        // one seeded order shared by all languages, so an entity held out in
        // one language tends to be held out in the others
        let mut order: Vec<&str> = entities.into_iter().collect();
        order.sort_by_cached_key(|q| (shuffle_key(seed, q), q.to_string()));
        let [n_train, n_dev, _] = fractions.apportion(order.len());

        let mut split = LanguageSplit::default();
        for (i, qid) in order.iter().enumerate() {
            let set = if i < n_train {
                &mut split.train_entities
            } else if i < n_train + n_dev {
                &mut split.dev_entities
            } else {
                &mut split.test_entities
            };
            set.insert(qid.to_string());
        }

        let mut heldout_by_pid: BTreeMap<&str, &str> = BTreeMap::new();
        if opts.template_holdout {
            let mut templates: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
            for e in &exs {
                templates.entry(e.pid()).or_default().insert(&e.template_id);
            }
            for (pid, ts) in templates.into_iter().filter(|(_, ts)| ts.len() > 1) {
                let ts: Vec<&str> = ts.into_iter().collect();
                let pick = *ts.choose(&mut rng_for(seed, &["template-holdout", lang, pid])).expect("non-empty");
                heldout_by_pid.insert(pid, pick);
                split.heldout_templates.insert(pick.to_string());
            }
        }

        for e in exs {
            let heldout = heldout_by_pid.get(e.pid());
            let is_heldout = heldout == Some(&e.template_id.as_str());
            let q = e.entity1();
            if split.train_entities.contains(q) {
                if !is_heldout {
                    split.train.push(e.id.clone());
                }
            } else if heldout.is_none() || is_heldout {
                if split.dev_entities.contains(q) {
                    split.dev.push(e.id.clone());
                } else {
                    split.test.push(e.id.clone());
                }
            }
        }
        split.train.sort();
        split.dev.sort();
        split.test.sort();
        out.insert(lang.to_string(), split);
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelPart {
    pub triples: Vec<String>,
    pub pivot_examples: Vec<String>,
    pub target_examples: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelSet {
    pub pivot: String,
    pub target: String,
    pub dev: ParallelPart,
    pub test: ParallelPart,
}

/// Parallel dev/test sets between `pivot` and every other language.
pub fn build_parallel_testsets(
    examples: &[RcExample],
    splits: &BTreeMap<String, LanguageSplit>,
    pivot: &str,
) -> Result<BTreeMap<String, ParallelSet>> {
    let pivot_split = splits
        .get(pivot)
        .ok_or_else(|| Error::Invalid(format!("pivot language `{}` has no split", pivot)))?;
    let by_id: BTreeMap<&str, &RcExample> = examples.iter().map(|e| (e.id.as_str(), e)).collect();
    let pivot_examples: Vec<&RcExample> = examples.iter().filter(|e| e.lang == pivot).collect();
    let pivot_triples: BTreeSet<&str> = pivot_examples.iter().map(|e| e.triple_id.as_str()).collect();

    let part = |target_ids: &[String]| -> ParallelPart {
        let target: Vec<&RcExample> = target_ids.iter().filter_map(|id| by_id.get(id.as_str()).copied()).collect();
        let keep: BTreeSet<&str> = target
            .iter()
            .filter(|e| pivot_triples.contains(e.triple_id.as_str()))
            .filter(|e| !pivot_split.train_entities.contains(e.entity1()))
            .map(|e| e.triple_id.as_str())
            .collect();
        let mut pivot_ids: Vec<String> = pivot_examples
            .iter()
            .filter(|e| keep.contains(e.triple_id.as_str()))
            .map(|e| e.id.clone())
            .collect();
        pivot_ids.sort();
        let mut target_ids: Vec<String> =
            target.iter().filter(|e| keep.contains(e.triple_id.as_str())).map(|e| e.id.clone()).collect();
        target_ids.sort();
        ParallelPart {
            triples: keep.into_iter().map(str::to_string).collect(),
            pivot_examples: pivot_ids,
            target_examples: target_ids,
        }
    };

    let mut out = BTreeMap::new();
    for (lang, split) in splits.iter().filter(|(l, _)| l.as_str() != pivot) {
        let set = ParallelSet { pivot: pivot.into(), target: lang.clone(), dev: part(&split.dev), test: part(&split.test) };
        if set.test.triples.is_empty() {
            log::warn!("no parallel test triples between {} and {}", pivot, lang);
        }
        out.insert(lang.clone(), set);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldAssignment {
    pub k: usize,
    pub peek: bool,
    pub languages: Vec<String>,
    /// Base fold of every property.
    pub base: BTreeMap<String, usize>,
}

impl FoldAssignment {
    pub fn offset(&self, lang_index: usize) -> usize {
        if self.peek {
            lang_index % self.k
        } else {
            0
        }
    }

    pub fn test_fold(&self, round: usize, lang_index: usize) -> usize {
        (round + self.offset(lang_index)) % self.k
    }

    pub fn test_pids(&self, round: usize, lang_index: usize) -> BTreeSet<&str> {
        let f = self.test_fold(round, lang_index);
        self.base.iter().filter(|(_, &b)| b == f).map(|(p, _)| p.as_str()).collect()
    }

    pub fn train_pids(&self, round: usize, lang_index: usize) -> BTreeSet<&str> {
        let f = self.test_fold(round, lang_index);
        self.base.iter().filter(|(_, &b)| b != f).map(|(p, _)| p.as_str()).collect()
    }

    pub fn manifests(&self) -> Vec<FoldManifest> {
        let mut out = Vec::new();
        for round in 0..self.k {
            for (l, lang) in self.languages.iter().enumerate() {
                out.push(FoldManifest {
                    round,
                    language: lang.clone(),
                    train_pids: self.train_pids(round, l).into_iter().map(str::to_string).collect(),
                    test_pids: self.test_pids(round, l).into_iter().map(str::to_string).collect(),
                });
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldManifest {
    pub round: usize,
    pub language: String,
    pub train_pids: Vec<String>,
    pub test_pids: Vec<String>,
}

pub fn fold_unrel(pids: &[String], languages: &[String], k: usize, peek: bool, seed: u64) -> Result<FoldAssignment> {
    let mut unique: Vec<&str> = pids.iter().map(String::as_str).collect::<BTreeSet<_>>().into_iter().collect();
    if k == 0 || k > unique.len() {
        return Err(Error::TooManyFolds { k, pids: unique.len() });
    }
    unique.shuffle(&mut rng_for(seed, &["unrel"]));
    let base = unique.iter().enumerate().map(|(i, p)| (p.to_string(), i % k)).collect();
    Ok(FoldAssignment { k, peek, languages: languages.to_vec(), base })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldExamples {
    pub train: Vec<String>,
    pub test: Vec<String>,
}

/// Example ids of every (round, language) of an assignment.
pub fn fold_examples(examples: &[RcExample], folds: &FoldAssignment) -> BTreeMap<(usize, String), FoldExamples> {
    let mut out = BTreeMap::new();
    for round in 0..folds.k {
        for (l, lang) in folds.languages.iter().enumerate() {
            let test = folds.test_pids(round, l);
            let train = folds.train_pids(round, l);
            let mut fe = FoldExamples::default();
            for e in examples.iter().filter(|e| &e.lang == lang) {
                if test.contains(e.pid()) {
                    fe.test.push(e.id.clone());
                } else if train.contains(e.pid()) {
                    fe.train.push(e.id.clone());
                }
            }
            fe.train.sort();
            fe.test.sort();
            out.insert((round, lang.clone()), fe);
        }
    }
    out
}

/// Uniform sample of `n` ids without replacement, returned sorted. Asking
/// for more than there are returns everything.
pub fn subsample(train: &[String], n: usize, seed: u64) -> Vec<String> {
    let mut ids: Vec<&String> = train.iter().collect();
    ids.sort();
    ids.dedup();
    if n >= ids.len() {
        if n > ids.len() {
            log::warn!("subsample of {} requested from {} examples; returning all", n, ids.len());
        }
        return ids.into_iter().cloned().collect();
    }
    let mut picked: Vec<String> = ids
        .choose_multiple(&mut rng_for(seed, &["subsample"]), n)
        .map(|s| (*s).clone())
        .collect();
    picked.sort();
    picked
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(id: &str, lang: &str, e1: &str, pid: &str, template: &str) -> RcExample {
        RcExample {
            id: id.into(),
            triple_id: format!("{e1}|{pid}|V"),
            template_id: template.into(),
            lang: lang.into(),
            question: String::new(),
            context: String::new(),
            answers: vec![],
            is_negative: true,
            context_id: id.into(),
            gender: None,
        }
    }

    fn dataset(langs: &[&str], entities: usize) -> Vec<RcExample> {
        let mut out = Vec::new();
        for lang in langs {
            for i in 0..entities {
                for t in 0..2 {
                    out.push(ex(&format!("{lang}-{i}-{t}"), lang, &format!("Q{i}"), "P17", &format!("P17-{lang}-{t}")));
                }
            }
        }
        out
    }

    #[test]
    fn apportion_examples() {
        let f = Fractions::default();
        assert_eq!(f.apportion(10), [8, 1, 1]);
        assert_eq!(f.apportion(3), [1, 1, 1]);
        assert_eq!(f.apportion(100), [80, 10, 10]);
        assert_eq!(Fractions::new(1.0, 0.0, 0.0).unwrap().apportion(5), [5, 0, 0]);
        assert!(Fractions::new(0.5, 0.1, 0.1).is_err());
    }

    #[test]
    fn ten_entities_split_eight_one_one() {
        let data = dataset(&["en"], 10);
        let s = &split_unent(&data, Fractions::default(), 1, UnentOptions::default()).unwrap()["en"];
        assert_eq!((s.train_entities.len(), s.dev_entities.len(), s.test_entities.len()), (8, 1, 1));
        assert_eq!((s.train.len(), s.dev.len(), s.test.len()), (16, 2, 2));
        // every example follows its entity
        for e in &data {
            let in_train = s.train.contains(&e.id);
            assert_eq!(in_train, s.train_entities.contains(e.entity1()));
        }
        assert!(s.train_entities.is_disjoint(&s.test_entities));
        assert!(s.train_entities.is_disjoint(&s.dev_entities));
    }

    #[test]
    fn unent_is_deterministic() {
        let data = dataset(&["en", "de"], 20);
        let a = split_unent(&data, Fractions::default(), 9, UnentOptions::default()).unwrap();
        let b = split_unent(&data, Fractions::default(), 9, UnentOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn languages_with_the_same_entities_split_them_alike() {
        let data = dataset(&["en", "de", "fr"], 30);
        let s = split_unent(&data, Fractions::default(), 3, UnentOptions::default()).unwrap();
        assert_eq!(s["en"].test_entities, s["de"].test_entities);
        assert_eq!(s["en"].train_entities, s["fr"].train_entities);
        let other = split_unent(&data, Fractions::default(), 4, UnentOptions::default()).unwrap();
        assert_ne!(s["en"].train_entities, other["en"].train_entities);
    }

    #[test]
    fn too_few_entities() {
        let data = dataset(&["en"], 2);
        assert!(matches!(
            split_unent(&data, Fractions::default(), 1, UnentOptions::default()),
            Err(Error::InsufficientEntities { .. })
        ));
    }

    #[test]
    fn template_holdout_keeps_heldout_templates_out_of_train() {
        let data = dataset(&["en"], 10);
        let s = &split_unent(&data, Fractions::default(), 1, UnentOptions { template_holdout: true }).unwrap()["en"];
        assert_eq!(s.heldout_templates.len(), 1);
        let held = s.heldout_templates.iter().next().unwrap();
        let by_id: BTreeMap<_, _> = data.iter().map(|e| (e.id.clone(), e)).collect();
        assert!(s.train.iter().all(|id| &by_id[id].template_id != held));
        assert!(s.test.iter().chain(&s.dev).all(|id| &by_id[id].template_id == held));
        assert_eq!(s.train.len(), 8);
    }

    #[test]
    fn parallel_sets_keep_shared_triples_not_trained_in_pivot() {
        let mut data = dataset(&["en", "de"], 10);
        // a triple that exists only in German
        data.push(ex("de-only", "de", "Q100", "P17", "P17-de-0"));
        data.push(ex("de-only-2", "de", "Q101", "P17", "P17-de-0"));
        let splits = split_unent(&data, Fractions::default(), 5, UnentOptions::default()).unwrap();
        let sets = build_parallel_testsets(&data, &splits, "en").unwrap();
        let de = &sets["de"];
        let en_triples: BTreeSet<_> = data.iter().filter(|e| e.lang == "en").map(|e| e.triple_id.as_str()).collect();
        // brute force over the German test split
        let by_id: BTreeMap<_, _> = data.iter().map(|e| (e.id.as_str(), e)).collect();
        let expected: BTreeSet<String> = splits["de"]
            .test
            .iter()
            .map(|id| by_id[id.as_str()])
            .filter(|e| en_triples.contains(e.triple_id.as_str()) && !splits["en"].train_entities.contains(e.entity1()))
            .map(|e| e.triple_id.clone())
            .collect();
        assert_eq!(de.test.triples.iter().cloned().collect::<BTreeSet<_>>(), expected);
        assert!(!de.test.triples.iter().any(|t| t.starts_with("Q100|") || t.starts_with("Q101|")));
        for id in de.test.pivot_examples.iter().chain(&de.test.target_examples) {
            assert!(!splits["en"].train_entities.contains(by_id[id.as_str()].entity1()));
        }
    }

    fn pids(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("P{i}")).collect()
    }

    fn langs(n: usize) -> Vec<String> {
        ["en", "de", "es", "fr", "it"][..n].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn shared_folds_without_peek() {
        let f = fold_unrel(&pids(10), &langs(5), 5, false, 3).unwrap();
        for r in 0..5 {
            for l in 1..5 {
                assert_eq!(f.test_pids(r, l), f.test_pids(r, 0));
                assert_eq!(f.train_pids(r, l), f.train_pids(r, 0));
            }
            assert!(f.test_pids(r, 0).is_disjoint(&f.train_pids(r, 0)));
            assert_eq!(f.test_pids(r, 0).len(), 2);
        }
    }

    #[test]
    fn peek_rotation_brute_force() {
        let f = fold_unrel(&pids(10), &langs(5), 5, true, 11).unwrap();
        for r in 0..5 {
            for l in 0..5 {
                let test = f.test_pids(r, l);
                assert!(test.is_disjoint(&f.train_pids(r, l)));
                for p in &test {
                    assert!((0..5).filter(|&o| o != l).any(|o| f.train_pids(r, o).contains(p)));
                }
            }
        }
        for l in 0..5 {
            for p in f.base.keys() {
                assert_eq!((0..5).filter(|&r| f.test_pids(r, l).contains(p.as_str())).count(), 1);
            }
        }
    }

    #[test]
    fn folds_deterministic_and_bounded() {
        assert_eq!(fold_unrel(&pids(10), &langs(2), 5, true, 1).unwrap(), fold_unrel(&pids(10), &langs(2), 5, true, 1).unwrap());
        assert!(matches!(fold_unrel(&pids(3), &langs(2), 5, false, 1), Err(Error::TooManyFolds { .. })));
        let f = fold_unrel(&pids(4), &langs(1), 2, false, 1).unwrap();
        assert_eq!(f.manifests().len(), 2);
    }

    #[test]
    fn fold_examples_follow_pids() {
        let mut data = dataset(&["en", "de"], 3);
        data.push(ex("en-x", "en", "Q1", "P50", "P50-en-0"));
        let f = fold_unrel(&["P17".to_string(), "P50".to_string()], &langs(2), 2, true, 0).unwrap();
        let fe = fold_examples(&data, &f);
        for ((round, lang), sets) in &fe {
            let l = f.languages.iter().position(|x| x == lang).unwrap();
            let test = f.test_pids(*round, l);
            let by_id: BTreeMap<_, _> = data.iter().map(|e| (e.id.as_str(), e)).collect();
            assert!(sets.test.iter().all(|id| test.contains(by_id[id.as_str()].pid())));
            assert!(sets.train.iter().all(|id| !test.contains(by_id[id.as_str()].pid())));
        }
    }

    #[test]
    fn subsample_edges() {
        let ids: Vec<String> = (0..50).map(|i| format!("e{i:03}")).collect();
        assert!(subsample(&ids, 0, 1).is_empty());
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(subsample(&ids, 50, 1), sorted);
        assert_eq!(subsample(&ids, 80, 1), sorted);
        assert_eq!(subsample(&ids, 10, 4), subsample(&ids, 10, 4));
        assert_eq!(subsample(&ids, 10, 4).len(), 10);
    }

    #[test]
    fn subsample_overlap_matches_expectation() {
        // two independent uniform n-subsets of N overlap by n²/N on average
        let ids: Vec<String> = (0..1000).map(|i| format!("e{i:04}")).collect();
        let n = 100;
        let pairs = 200u64;
        let mut total = 0usize;
        for s in 0..pairs {
            let a: BTreeSet<_> = subsample(&ids, n, 2 * s).into_iter().collect();
            let b: BTreeSet<_> = subsample(&ids, n, 2 * s + 1).into_iter().collect();
            assert_ne!(a, b);
            total += a.intersection(&b).count();
        }
        let mean = total as f64 / pairs as f64;
        let expected = (n * n) as f64 / ids.len() as f64;
        assert!((mean - expected).abs() < 1.0, "mean overlap {mean}, expected {expected}");
    }
}
