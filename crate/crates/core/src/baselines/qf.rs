//! Quantifier-free hypotheses.
//!
//! A quantifier-free formula can only see the letters of the instance
//! positions, their mutual order, and their order relative to the
//! parameters (the parameters' own letters and order are the same for every
//! example). A consistent hypothesis therefore exists iff some parameter
//! placement maps each such type to a single label; the hypothesis is the
//! disjunction of the positive types.

use std::cmp::Ordering;
use std::collections::HashMap;

use super::{check_arity, BaselineError, Example, Hypothesis};
use crate::formula::WordStructure;
use crate::learner::TrainingSet;

/// Quantifier-free hypotheses with a fixed number of parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QfClass {
    pub params: usize,
}

/// Result of [`qf_learn_general`] with its work counter.
#[derive(Debug)]
pub struct QfRun {
    pub hypothesis: Result<Hypothesis, BaselineError>,
    /// Example checks performed: always `(2 |T| k + 1)^l * |T|`.
    pub iterations: u64,
}

/// Type of an instance tuple relative to the parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Type {
    letters: Vec<u8>,
    /// `cmp(u_i, u_j)` for `i < j`
    inner: Vec<Ordering>,
    /// `cmp(u_i, v_j)` for every `i`, `j`
    outer: Vec<Ordering>,
}

fn tuple_type(word: &WordStructure, u: &[usize], params: &[usize]) -> Type {
    let mut inner = Vec::new();
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            inner.push(u[i].cmp(&u[j]));
        }
    }
    Type {
        letters: u.iter().map(|&p| word.symbols()[p - 1]).collect(),
        inner,
        outer: u
            .iter()
            .flat_map(|&x| params.iter().map(move |&y| x.cmp(&y)))
            .collect(),
    }
}

fn var_names(prefix: &str, n: usize) -> Vec<String> {
    if n == 1 {
        vec![prefix.to_string()]
    } else {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }
}

/// Disjunction of the types labelled positive.
fn hypothesis(
    word: &WordStructure,
    k: usize,
    params: Vec<usize>,
    positive: &[Type],
) -> Result<Hypothesis, BaselineError> {
    let xs = var_names("x", k);
    let ys = var_names("y", params.len());
    let rel = |a: &str, o: Ordering, b: &str| match o {
        Ordering::Less => format!("{a} < {b}"),
        Ordering::Equal => format!("{a} = {b}"),
        Ordering::Greater => format!("{b} < {a}"),
    };
    let mut disjuncts: Vec<String> = positive
        .iter()
        .map(|t| {
            let mut atoms: Vec<String> = t
                .letters
                .iter()
                .zip(&xs)
                .map(|(&a, x)| format!("R{}({x})", word.alphabet().symbol(a as usize)))
                .collect();
            let mut it = t.inner.iter();
            for i in 0..k {
                for j in i + 1..k {
                    atoms.push(rel(&xs[i], *it.next().unwrap(), &xs[j]));
                }
            }
            let mut it = t.outer.iter();
            for x in &xs {
                for y in &ys {
                    atoms.push(rel(x, *it.next().unwrap(), y));
                }
            }
            format!("({})", atoms.join(" & "))
        })
        .collect();
    disjuncts.sort();
    disjuncts.dedup();
    let body = if disjuncts.is_empty() {
        "false".to_string()
    } else {
        disjuncts.join(" | ")
    };
    Hypothesis::new(&body, &xs, ys.into_iter().zip(params).collect(), word)
}

/// Positive types, or `None` if two examples of one type disagree.
fn classify(word: &WordStructure, examples: &[Example], params: &[usize]) -> Option<Vec<Type>> {
    let mut seen: HashMap<Type, bool> = HashMap::new();
    for (u, label) in examples {
        if *seen.entry(tuple_type(word, u, params)).or_insert(*label) != *label {
            return None;
        }
    }
    Some(seen.into_iter().filter(|(_, l)| *l).map(|(t, _)| t).collect())
}

/// Unary quantifier-free learner: sweeps the examples in position order and
/// puts a parameter on each example that conflicts with its region.
pub fn qf_learn_unary(
    word: &WordStructure,
    training: &TrainingSet,
    class: QfClass,
) -> Result<Hypothesis, BaselineError> {
    let n = word.len();
    training
        .validate(n)
        .map_err(|_| BaselineError::NoConsistentHypothesis)?;
    let sorted = training.sorted();
    let letters = word.alphabet().len();
    let mut params = Vec::new();
    let mut region: Vec<Option<bool>> = vec![None; letters];
    for &(u, label) in &sorted {
        let a = word.symbols()[u - 1] as usize;
        match region[a] {
            Some(l) if l != label => {
                // u becomes a point region; the next region starts after it
                params.push(u);
                region = vec![None; letters];
            }
            _ => region[a] = Some(label),
        }
    }
    if params.len() > class.params || (n == 0 && class.params > 0) {
        return Err(BaselineError::NoConsistentHypothesis);
    }
    // surplus parameters only refine the partition
    while params.len() < class.params {
        params.push(params.last().copied().unwrap_or(1));
    }
    let examples = super::unary_examples(training);
    let positive = classify(word, &examples, &params).ok_or(BaselineError::NoConsistentHypothesis)?;
    hypothesis(word, 1, params, &positive)
}

/// General quantifier-free learner: tries every placement of the `l`
/// parameters among the `2m + 1` slots around the `m = |T| k` example
/// positions (before, at, or between them) and keeps the first placement
/// that is realisable in the word and consistent.
pub fn qf_learn_general(word: &WordStructure, examples: &[Example], k: usize, l: usize) -> QfRun {
    if let Err(e) = check_arity(examples, k) {
        return QfRun {
            hypothesis: Err(e),
            iterations: 0,
        };
    }
    let n = word.len();
    let mut positions: Vec<usize> = examples.iter().flat_map(|(u, _)| u.iter().copied()).collect();
    positions.sort_unstable();
    let m = positions.len();
    let slots = 2 * m + 1;
    // slot 2i: strictly between positions[i-1] and positions[i]; slot 2i+1: at positions[i]
    let realise = |s: usize| -> Option<usize> {
        let i = s / 2;
        if s % 2 == 1 {
            return Some(positions[i]);
        }
        let lo = if i == 0 { 0 } else { positions[i - 1] };
        let hi = if i == m { n + 1 } else { positions[i] };
        (hi >= lo + 2).then_some(lo + 1)
    };

    let mut iterations = 0u64;
    let mut found: Option<(Vec<usize>, Vec<Type>)> = None;
    let mut placement = vec![0usize; l];
    let total = slots.pow(l as u32);
    for _ in 0..total {
        let params: Option<Vec<usize>> = placement.iter().map(|&s| realise(s)).collect();
        // the comparison pattern of a slot against example positions is the
        // same for every realisation, so unrealisable slots use a proxy
        let proxy: Vec<usize> = placement
            .iter()
            .map(|&s| realise(s).unwrap_or(if s / 2 == 0 { 0 } else { positions[s / 2 - 1] + 1 }))
            .collect();
        let mut seen: HashMap<Type, bool> = HashMap::new();
        let mut ok = true;
        for (u, label) in examples {
            iterations += 1;
            let t = tuple_type(word, u, &proxy);
            if *seen.entry(t).or_insert(*label) != *label {
                ok = false;
            }
        }
        if ok && found.is_none() {
            if let Some(p) = params {
                let positive = seen.into_iter().filter(|(_, l)| *l).map(|(t, _)| t).collect();
                found = Some((p, positive));
            }
        }
        for slot in placement.iter_mut().rev() {
            *slot += 1;
            if *slot < slots {
                break;
            }
            *slot = 0;
        }
    }
    let hypothesis = match found {
        Some((params, positive)) => hypothesis(word, k, params, &positive),
        None => Err(BaselineError::NoConsistentHypothesis),
    };
    QfRun {
        hypothesis,
        iterations,
    }
}
