//! Unary existential hypotheses with one interval per letter.

use super::{BaselineError, Hypothesis};
use crate::formula::WordStructure;
use crate::learner::TrainingSet;

/// Selects, for each letter `a` with positive examples, the interval
/// spanned by those examples. Fails if a negative example of the same
/// letter lies inside it.
pub fn exist_learn_unary(word: &WordStructure, training: &TrainingSet) -> Result<Hypothesis, BaselineError> {
    training
        .validate(word.len())
        .map_err(|_| BaselineError::NoConsistentHypothesis)?;
    let alphabet = word.alphabet();
    let mut span: Vec<Option<(usize, usize)>> = vec![None; alphabet.len()];
    let sorted = training.sorted();
    for &(u, label) in &sorted {
        if label {
            let a = word.symbols()[u - 1] as usize;
            span[a] = Some(span[a].map_or((u, u), |(l, _)| (l, u)));
        }
    }
    for &(u, label) in &sorted {
        let a = word.symbols()[u - 1] as usize;
        if !label && matches!(span[a], Some((l, r)) if l <= u && u <= r) {
            return Err(BaselineError::NoConsistentHypothesis);
        }
    }
    let mut disjuncts = Vec::new();
    let mut params = Vec::new();
    for (a, s) in span.iter().enumerate() {
        if let Some((l, r)) = *s {
            let sym = alphabet.symbol(a);
            let (ln, rn) = (format!("l_{sym}"), format!("r_{sym}"));
            disjuncts.push(format!(
                "(R{sym}(x) & exists z. exists w. (z = {ln} & w = {rn} & z <= x & x <= w))"
            ));
            params.push((ln, l));
            params.push((rn, r));
        }
    }
    let body = if disjuncts.is_empty() {
        "false".to_string()
    } else {
        disjuncts.join(" | ")
    };
    Hypothesis::new(&body, &["x".to_string()], params, word)
}
