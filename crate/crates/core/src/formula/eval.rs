//! Recursive model checking. Exponential in the number of nested set
//! quantifiers; intended as the reference semantics, not for large inputs.

use super::{Formula, Node, WordStructure};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("expected {expected} {what} positions, got {got}")]
    ArityMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("position {pos} is outside 1..={n}")]
    PositionOutOfRange { pos: usize, n: usize },
    #[error("free first-order variables cannot be interpreted in the empty word")]
    EmptyStructure,
    #[error("set quantification over {0} positions is not supported (max 63)")]
    SetQuantifierTooLarge(usize),
    #[error("word alphabet does not match the formula alphabet")]
    AlphabetMismatch,
}

struct Env<'a> {
    word: &'a [u8],
    pos: Vec<usize>,
    sets: Vec<u64>,
}

impl Env<'_> {
    fn holds(&mut self, node: &Node) -> bool {
        let n = self.word.len();
        match node {
            Node::True => true,
            Node::False => false,
            Node::Label { symbol, var } => {
                self.word[self.pos[var.0 as usize] - 1] as usize == *symbol
            }
            Node::Less(a, b) => self.pos[a.0 as usize] < self.pos[b.0 as usize],
            Node::LessEq(a, b) => self.pos[a.0 as usize] <= self.pos[b.0 as usize],
            Node::Equal(a, b) => self.pos[a.0 as usize] == self.pos[b.0 as usize],
            Node::Member(a, s) => self.sets[s.0 as usize] >> (self.pos[a.0 as usize] - 1) & 1 == 1,
            Node::Not(a) => !self.holds(a),
            Node::And(a, b) => self.holds(a) && self.holds(b),
            Node::Or(a, b) => self.holds(a) || self.holds(b),
            Node::Implies(a, b) => !self.holds(a) || self.holds(b),
            Node::Exists(v, body) => (1..=n).any(|p| {
                self.pos[v.0 as usize] = p;
                self.holds(body)
            }),
            Node::Forall(v, body) => (1..=n).all(|p| {
                self.pos[v.0 as usize] = p;
                self.holds(body)
            }),
            Node::ExistsSet(s, body) => (0..1u64 << n).any(|mask| {
                self.sets[s.0 as usize] = mask;
                self.holds(body)
            }),
            Node::ForallSet(s, body) => (0..1u64 << n).all(|mask| {
                self.sets[s.0 as usize] = mask;
                self.holds(body)
            }),
        }
    }
}

fn check_positions(
    what: &'static str,
    expected: usize,
    got: &[usize],
    n: usize,
) -> Result<(), EvalError> {
    if got.len() != expected {
        return Err(EvalError::ArityMismatch {
            what,
            expected,
            got: got.len(),
        });
    }
    if let Some(&pos) = got.iter().find(|&&p| p == 0 || p > n) {
        return Err(EvalError::PositionOutOfRange { pos, n });
    }
    Ok(())
}

fn prepare<'a>(phi: &Formula, word: &'a WordStructure) -> Result<Env<'a>, EvalError> {
    if word.alphabet() != phi.alphabet() {
        return Err(EvalError::AlphabetMismatch);
    }
    let n = word.len();
    if n > 63 && phi.root.has_set_quantifier() {
        return Err(EvalError::SetQuantifierTooLarge(n));
    }
    Ok(Env {
        word: word.symbols(),
        pos: vec![0; phi.num_var_slots()],
        sets: vec![0; phi.num_set_slots()],
    })
}

/// `B |= phi(instance ; params)` with 1-based positions.
pub fn eval_semantic(
    phi: &Formula,
    word: &WordStructure,
    instance: &[usize],
    params: &[usize],
) -> Result<bool, EvalError> {
    let n = word.len();
    if n == 0 && phi.arity() + phi.num_params() > 0 {
        return Err(EvalError::EmptyStructure);
    }
    check_positions("instance", phi.arity(), instance, n)?;
    check_positions("parameter", phi.num_params(), params, n)?;
    let mut env = prepare(phi, word)?;
    for (v, &p) in phi.instance.iter().zip(instance) {
        env.pos[v.0 as usize] = p;
    }
    for (v, &p) in phi.params.iter().zip(params) {
        env.pos[v.0 as usize] = p;
    }
    Ok(env.holds(&phi.root))
}

/// The classifier induced by fixing the parameters: one bit per instance
/// tuple, tuples enumerated lexicographically (first component slowest).
pub fn label_by_hypothesis(
    phi: &Formula,
    word: &WordStructure,
    params: &[usize],
) -> Result<Vec<bool>, EvalError> {
    let n = word.len();
    let k = phi.arity();
    if n == 0 && k > 0 {
        return Ok(Vec::new());
    }
    check_positions("parameter", phi.num_params(), params, n)?;
    let mut env = prepare(phi, word)?;
    for (v, &p) in phi.params.iter().zip(params) {
        env.pos[v.0 as usize] = p;
    }
    let total = n.pow(k as u32);
    let mut out = Vec::with_capacity(total);
    let mut tuple = vec![1usize; k];
    for _ in 0..total {
        for (v, &p) in phi.instance.iter().zip(&tuple) {
            env.pos[v.0 as usize] = p;
        }
        out.push(env.holds(&phi.root));
        for slot in tuple.iter_mut().rev() {
            if *slot < n {
                *slot += 1;
                break;
            }
            *slot = 1;
        }
    }
    Ok(out)
}
