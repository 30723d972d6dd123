//! Reference learners: a brute-force oracle over all parameter tuples, and
//! direct learners for quantifier-free and unary existential hypotheses.

mod exist;
mod qf;

use crate::formula::{EvalError, Formula, ParseError, WordStructure};
use crate::learner::TrainingSet;

pub use exist::exist_learn_unary;
pub use qf::{qf_learn_general, qf_learn_unary, QfClass, QfRun};

/// A labelled instance tuple (1-based positions).
pub type Example = (Vec<usize>, bool);

pub fn unary_examples(t: &TrainingSet) -> Vec<Example> {
    t.examples().iter().map(|&(u, l)| (vec![u], l)).collect()
}

#[derive(Debug, thiserror::Error)]
pub enum BaselineError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("no parameter setting is consistent with the training set")]
    NoConsistentParameters,
    #[error("no hypothesis of the class is consistent with the training set")]
    NoConsistentHypothesis,
    #[error("example tuple has arity {got}, expected {expected}")]
    ArityMismatch { expected: usize, got: usize },
}

/// A learned formula together with the positions of its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypothesis {
    pub formula: Formula,
    pub params: Vec<usize>,
}

impl Hypothesis {
    /// Builds from DSL body text; instance and parameter names are declared
    /// in order.
    pub(crate) fn new(
        body: &str,
        instance: &[String],
        params: Vec<(String, usize)>,
        word: &WordStructure,
    ) -> Result<Hypothesis, BaselineError> {
        let inst: Vec<&str> = instance.iter().map(String::as_str).collect();
        let names: Vec<&str> = params.iter().map(|(n, _)| n.as_str()).collect();
        let formula = Formula::with_vars(body, &inst, &names, word.alphabet())?;
        Ok(Hypothesis {
            formula,
            params: params.into_iter().map(|(_, p)| p).collect(),
        })
    }

    /// `true` iff the hypothesis labels every example correctly.
    pub fn consistent(&self, word: &WordStructure, examples: &[Example]) -> Result<bool, BaselineError> {
        consistent(&self.formula, word, &self.params, examples)
    }

    /// DSL text with header followed by one `name=position` line per parameter.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.formula);
        for (name, p) in self.formula.param_names().iter().zip(&self.params) {
            out.push_str(&format!("{name}={p}\n"));
        }
        out
    }
}

pub(crate) fn consistent(
    phi: &Formula,
    word: &WordStructure,
    params: &[usize],
    examples: &[Example],
) -> Result<bool, BaselineError> {
    for (u, label) in examples {
        if phi.eval(word, u, params)? != *label {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_arity(examples: &[Example], k: usize) -> Result<(), BaselineError> {
    match examples.iter().find(|(u, _)| u.len() != k) {
        Some((u, _)) => Err(BaselineError::ArityMismatch {
            expected: k,
            got: u.len(),
        }),
        None => Ok(()),
    }
}

/// Lexicographically least parameter tuple consistent with the examples,
/// found by evaluating the formula on every tuple.
pub fn oracle_learn(
    phi: &Formula,
    word: &WordStructure,
    examples: &[Example],
) -> Result<Vec<usize>, BaselineError> {
    check_arity(examples, phi.arity())?;
    let n = word.len();
    let l = phi.num_params();
    if n == 0 && l > 0 {
        return Err(BaselineError::NoConsistentParameters);
    }
    let mut v = vec![1usize; l];
    loop {
        if consistent(phi, word, &v, examples)? {
            return Ok(v);
        }
        // odometer with the first component slowest
        let mut i = l;
        loop {
            if i == 0 {
                return Err(BaselineError::NoConsistentParameters);
            }
            i -= 1;
            if v[i] < n {
                v[i] += 1;
                break;
            }
            v[i] = 1;
        }
    }
}
