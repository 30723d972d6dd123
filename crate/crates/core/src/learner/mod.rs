//! Indexed learning of parameters for unary formulas.
//!
//! [`Pipeline`] holds everything that depends only on the formula: the
//! consistency automaton, its tagged transition monoid, the power monoid and
//! its Green classes. [`Index`] adds a factorization tree of the background
//! word with every position unclassified. [`Index::learn`] splices a
//! training set into that tree and reads a parameter assignment off an
//! accepting element of the root label by walking down the tree.

mod training;

use std::sync::Arc;

use crate::automata::{build_consistency_dfa, gamma_code, Class, CompileError, Dfa, DEFAULT_STATE_CAP};
use crate::fforest::{Forest, ForestError, Kind, Tree, TreeDefect};
use crate::formula::{Formula, WordStructure};
use crate::monoid::{FiniteMonoid, Green, MonoidError, PowerMonoid, Tag, TaggedMonoid, DEFAULT_MONOID_CAP};

pub use training::{TrainingError, TrainingSet};

#[derive(Debug, thiserror::Error)]
pub enum LearnError {
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Forest(#[from] ForestError),
    #[error(transparent)]
    Training(#[from] TrainingError),
    #[error("the word alphabet differs from the formula alphabet")]
    AlphabetMismatch,
    #[error("no parameter setting is consistent with the training set")]
    NoConsistentParameters,
    #[error("expected {expected} parameter positions, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("index is corrupt: no decomposition below node {first}..={last}")]
    Decomposition { first: usize, last: usize },
}

/// Resource caps for automaton and monoid construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub states: usize,
    pub monoid: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            states: DEFAULT_STATE_CAP,
            monoid: DEFAULT_MONOID_CAP,
        }
    }
}

/// Formula-dependent, word-independent part of the learner.
#[derive(Debug)]
pub struct Pipeline {
    formula: Formula,
    caps: Caps,
    dfa: Dfa,
    power: PowerMonoid,
    green: Green,
}

impl Pipeline {
    pub fn new(formula: Formula) -> Result<Pipeline, LearnError> {
        Self::with_caps(formula, Caps::default())
    }

    pub fn with_caps(formula: Formula, caps: Caps) -> Result<Pipeline, LearnError> {
        let dfa = build_consistency_dfa(&formula, caps.states)?;
        let mhat = Arc::new(TaggedMonoid::from_dfa(&dfa, caps.monoid)?);
        let power = PowerMonoid::build(mhat, caps.monoid)?;
        let green = Green::compute(&power);
        Ok(Pipeline {
            formula,
            caps,
            dfa,
            power,
            green,
        })
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn mhat(&self) -> &TaggedMonoid {
        self.power.mhat()
    }

    pub fn power(&self) -> &PowerMonoid {
        &self.power
    }

    pub fn green(&self) -> &Green {
        &self.green
    }

    pub fn forest(&self) -> Forest<'_, PowerMonoid> {
        Forest::new(&self.power, &self.green)
    }

    fn gamma(&self, letter: u8, class: Class) -> u32 {
        gamma_code(self.formula.alphabet().len(), letter as usize, class)
    }

    /// Scans the consistency automaton over the word annotated with `params`
    /// and the classifications of `training`. Linear in the word length.
    pub fn check_consistent(
        &self,
        word: &WordStructure,
        params: &[usize],
        training: &TrainingSet,
    ) -> Result<bool, LearnError> {
        let n = word.len();
        if word.alphabet() != self.formula.alphabet() {
            return Err(LearnError::AlphabetMismatch);
        }
        if params.len() != self.formula.num_params() {
            return Err(LearnError::ArityMismatch {
                expected: self.formula.num_params(),
                got: params.len(),
            });
        }
        training.validate(n)?;
        if let Some(&pos) = params.iter().find(|&&p| p == 0 || p > n) {
            return Err(TrainingError::PositionOutOfRange { pos, n }.into());
        }
        let mut class = vec![Class::Unknown; n];
        for &(pos, label) in training.examples() {
            class[pos - 1] = Class::from_label(label);
        }
        let alphabet = self.dfa.alphabet();
        let symbols = word.symbols().iter().enumerate().map(|(i, &a)| {
            let mask = params
                .iter()
                .enumerate()
                .filter(|&(_, &p)| p == i + 1)
                .fold(0u32, |m, (j, _)| m | 1 << j);
            alphabet.encode(a as usize, mask, class[i])
        });
        Ok(self.dfa.accepts(symbols))
    }
}

/// Work counters of one learning query.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct QueryStats {
    /// Nodes allocated by the splice plus nodes visited by the descent.
    pub nodes_touched: u64,
    /// Monoid products performed by the splice and the descent.
    pub products: u64,
    /// Largest number of pending (element, node) pairs during the descent.
    pub max_stack: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Learned {
    pub params: Vec<usize>,
    pub stats: QueryStats,
}

/// A background word indexed for repeated learning queries.
#[derive(Debug)]
pub struct Index {
    pipeline: Arc<Pipeline>,
    word: WordStructure,
    tree: Tree,
}

impl Index {
    pub fn build(pipeline: Arc<Pipeline>, word: WordStructure) -> Result<Index, LearnError> {
        if word.alphabet() != pipeline.formula.alphabet() {
            return Err(LearnError::AlphabetMismatch);
        }
        let tree = {
            let forest = pipeline.forest();
            forest.build_leaves(word.symbols().iter().enumerate().map(|(i, &a)| {
                let g = pipeline.gamma(a, Class::Unknown);
                (i + 1, g, pipeline.power.h(g))
            }))?
        };
        Ok(Index {
            pipeline,
            word,
            tree,
        })
    }

    /// Reassembles an index from a previously built tree.
    pub(crate) fn from_parts(pipeline: Arc<Pipeline>, word: WordStructure, tree: Tree) -> Index {
        Index {
            pipeline,
            word,
            tree,
        }
    }

    pub fn pipeline(&self) -> &Arc<Pipeline> {
        &self.pipeline
    }

    pub fn word(&self) -> &WordStructure {
        &self.word
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    /// Checks all tree invariants and that the leaves spell the word.
    pub fn verify(&self) -> Result<(), TreeDefect> {
        let p = &self.pipeline;
        p.forest().verify(&self.tree, |g| p.power.h(g))?;
        let ok = self.tree.first() == 1
            && self.tree.last() == self.word.len()
            && self
                .tree
                .leaves()
                .iter()
                .zip(self.word.symbols())
                .all(|(&(_, g, _), &a)| g == p.gamma(a, Class::Unknown));
        if ok {
            Ok(())
        } else {
            Err(TreeDefect::Bookkeeping {
                first: self.tree.first(),
                last: self.tree.last(),
            })
        }
    }

    pub fn check_consistent(&self, params: &[usize], training: &TrainingSet) -> Result<bool, LearnError> {
        self.pipeline.check_consistent(&self.word, params, training)
    }

    /// Factorization tree of the word with the training classifications
    /// substituted, sharing all untouched subtrees with the index.
    pub fn splice<'p>(
        &'p self,
        forest: &Forest<'p, PowerMonoid>,
        training: &TrainingSet,
    ) -> Result<Tree, LearnError> {
        training.validate(self.word.len())?;
        let p = &self.pipeline;
        let reps: Vec<(usize, u32, u32)> = training
            .sorted()
            .into_iter()
            .map(|(pos, label)| {
                let g = p.gamma(self.word.symbols()[pos - 1], Class::from_label(label));
                (pos, g, p.power.h(g))
            })
            .collect();
        Ok(forest.splice(&self.tree, &reps)?)
    }

    /// Parameters consistent with `training`, or
    /// [`LearnError::NoConsistentParameters`].
    pub fn learn(&self, training: &TrainingSet) -> Result<Learned, LearnError> {
        let p = &*self.pipeline;
        let forest = p.forest();
        let root = self.splice(&forest, training)?;
        let mhat = p.mhat();
        let power = &p.power;
        let mut stats = QueryStats::default();

        let m_root = power
            .set(root.label())
            .iter()
            .copied()
            .find(|&m| mhat.is_final(m))
            .ok_or(LearnError::NoConsistentParameters)?;

        let mut params = vec![0usize; p.formula.num_params()];
        let mut products = 0u64;
        let mut stack: Vec<(u32, &Tree)> = Vec::new();
        if !mhat.tag(m_root).is_empty() {
            stack.push((m_root, &root));
        }
        stats.max_stack = stack.len();
        while let Some((m, node)) = stack.pop() {
            stats.nodes_touched += 1;
            let fail = || LearnError::Decomposition {
                first: node.first(),
                last: node.last(),
            };
            match node.kind() {
                Kind::Leaf { .. } => {
                    if let Tag::Params(k) = mhat.tag(m) {
                        for (i, slot) in params.iter_mut().enumerate() {
                            if k >> i & 1 == 1 {
                                *slot = node.first();
                            }
                        }
                    }
                }
                Kind::Binary(l, r) => {
                    let (m1, m2) = power
                        .set(l.label())
                        .iter()
                        .flat_map(|&a| power.set(r.label()).iter().map(move |&b| (a, b)))
                        .find(|&(a, b)| {
                            products += 1;
                            mhat.mul(a, b) == m
                        })
                        .ok_or_else(fail)?;
                    for (x, child) in [(m2, r), (m1, l)] {
                        if !mhat.tag(x).is_empty() {
                            stack.push((x, child));
                        }
                    }
                }
                Kind::Idempotent { .. } => {
                    let kids = node.children();
                    let s = node.label();
                    let e = power.idempotent_of_empty_class(s)?;
                    let set = power.set(s);
                    let (m1, m2) = set
                        .iter()
                        .flat_map(|&a| set.iter().map(move |&b| (a, b)))
                        .find(|&(a, b)| {
                            products += 2;
                            mhat.mul(mhat.mul(a, e), b) == m
                        })
                        .ok_or_else(fail)?;
                    for (x, child) in [(m2, kids[kids.len() - 1]), (m1, kids[0])] {
                        if !mhat.tag(x).is_empty() {
                            stack.push((x, child));
                        }
                    }
                }
            }
            stats.max_stack = stats.max_stack.max(stack.len());
        }
        stats.nodes_touched += forest.nodes_created();
        stats.products = products + forest.products();
        Ok(Learned { params, stats })
    }
}
