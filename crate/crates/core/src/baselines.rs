//! Fixed predictors used to exercise the scorer without a trained model.

use crate::evalscore::Prediction;
use crate::querify::RcExample;
use crate::text::{find_mention, is_punctuation};

/// First gold answer for answerable examples, NIL otherwise.
pub fn oracle_predict(gold: &[RcExample]) -> Vec<Prediction> {
    gold.iter()
        .map(|e| Prediction {
            example_id: e.id.clone(),
            answer: if e.is_negative { None } else { e.answers.first().cloned() },
        })
        .collect()
}

pub fn nil_predict(gold: &[RcExample]) -> Vec<Prediction> {
    gold.iter().map(|e| Prediction { example_id: e.id.clone(), answer: None }).collect()
}

/// The first run of two or more capitalized tokens in the context that does
/// not occur in the question. Punctuation after a token ends the run,
/// punctuation before a token starts a new one.
pub fn heuristic_span(question: &str, context: &str) -> Option<String> {
    let mut run: Vec<(usize, usize)> = Vec::new();
    let check = |run: &mut Vec<(usize, usize)>| -> Option<String> {
        let found = if run.len() >= 2 {
            let span = &context[run[0].0..run[run.len() - 1].1];
            find_mention(question, span).is_none().then(|| span.to_string())
        } else {
            None
        };
        run.clear();
        found
    };
    for token in context.split_whitespace() {
        let offset = token.as_ptr() as usize - context.as_ptr() as usize;
        let core = token.trim_matches(is_punctuation);
        if core.is_empty() {
            if let Some(span) = check(&mut run) {
                return Some(span);
            }
            continue;
        }
        let lead = token.find(core).expect("core is a substring");
        let start = offset + lead;
        let end = start + core.len();
        let capitalized = core.chars().next().is_some_and(char::is_uppercase);
        if !capitalized || lead > 0 {
            if let Some(span) = check(&mut run) {
                return Some(span);
            }
        }
        if capitalized {
            run.push((start, end));
            if end < offset + token.len() {
                if let Some(span) = check(&mut run) {
                    return Some(span);
                }
            }
        }
    }
    check(&mut run)
}

pub fn heuristic_predict(examples: &[RcExample]) -> Vec<Prediction> {
    examples
        .iter()
        .map(|e| Prediction { example_id: e.id.clone(), answer: heuristic_span(&e.question, &e.context) })
        .collect()
}
