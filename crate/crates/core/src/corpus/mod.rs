//! Deterministic corpus generators.
//!
//! Random output comes from `ChaCha8Rng` seeded with `seed_from_u64`, so a
//! corpus is reproducible from its manifest.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::automata::{compile_with_cap, CompileError, Dfa, DEFAULT_STATE_CAP};
use crate::formula::{Alphabet, Formula, WordStructure};
use crate::learner::TrainingSet;

/// Identifier recorded in manifests for the random source.
pub const RNG_ALGORITHM: &str = "rand_chacha::ChaCha8Rng/seed_from_u64";

/// Longest word the adversarial generator will produce.
pub const MAX_ADVERSARIAL_LEN: usize = 1 << 28;

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("invalid adversarial spec: {0}")]
    InvalidSpec(String),
    #[error("requested {requested} instances, only {available} exist")]
    NotEnoughInstances { requested: usize, available: usize },
    #[error("formula alphabet differs from the word alphabet")]
    AlphabetMismatch,
    #[error(transparent)]
    Compile(#[from] CompileError),
}

/// Parameters of the alternating block family over `{a, b, c}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversarialSpec {
    pub l: usize,
    pub s: usize,
    pub r: usize,
    pub i: usize,
}

impl AdversarialSpec {
    /// Copies of the `b a^(2r+1)` chunk per block: `3 * s!`.
    fn copies(&self) -> Option<usize> {
        (2..=self.s).try_fold(3usize, |acc, k| acc.checked_mul(k))
    }

    /// Length of one block `A_b` or `A_c`.
    pub fn block_len(&self) -> Option<usize> {
        self.copies()?.checked_mul(2 * self.r + 2)
    }

    /// Length of every word in the family: `2l + 3` blocks.
    pub fn word_len(&self) -> Option<usize> {
        self.block_len()?.checked_mul(2 * self.l + 3)
    }

    fn validate(&self) -> Result<usize, CorpusError> {
        let bad = |m: &str| Err(CorpusError::InvalidSpec(m.to_string()));
        if self.s < 2 {
            return bad("s must be at least 2");
        }
        if self.r < 1 {
            return bad("r must be at least 1");
        }
        if self.i > self.l + 1 {
            return bad("i must lie in 0..=l+1");
        }
        match self.word_len() {
            Some(n) if n <= MAX_ADVERSARIAL_LEN => Ok(n),
            _ => bad("word too long"),
        }
    }
}

/// The alphabet `{a, b, c}` used by the adversarial family.
pub fn abc() -> Alphabet {
    Alphabet::from_str_symbols("abc").expect("fixed alphabet")
}

/// Word `(A_b A_c)^i A_b (A_b A_c)^(l+1-i)`, its canonical parameter and
/// the alternating training set with one example per block.
///
/// The parameter is the first `b` of the second of the two adjacent `A_b`
/// blocks. For `i = l + 1` there is no such pair and the parameter is the
/// last position, which selects the same positions.
pub fn gen_adversarial(spec: AdversarialSpec) -> Result<(WordStructure, usize, TrainingSet), CorpusError> {
    let n = spec.validate()?;
    let block = spec.block_len().unwrap();
    let chunk = 2 * spec.r + 2;
    let mut blocks: Vec<u8> = Vec::with_capacity(2 * spec.l + 3);
    for _ in 0..spec.i {
        blocks.extend([1, 2]);
    }
    blocks.push(1);
    for _ in spec.i..=spec.l {
        blocks.extend([1, 2]);
    }
    let mut symbols = Vec::with_capacity(n);
    for &lead in &blocks {
        for _ in 0..block / chunk {
            symbols.push(lead);
            symbols.extend(std::iter::repeat_n(0, chunk - 1));
        }
    }
    debug_assert_eq!(symbols.len(), n);
    let word = WordStructure::new(abc(), symbols).expect("symbols in range");
    let training = TrainingSet::new(
        (0..blocks.len()).map(|j| (block * j + block / 2 + spec.r + 2, j % 2 == 0)),
    );
    Ok((word, (block * (2 * spec.i + 1) + 1).min(n), training))
}

/// Uniform random word of length `n`.
pub fn gen_random_word(alphabet: &Alphabet, n: usize, seed: u64) -> WordStructure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = alphabet.len();
    let symbols = (0..n).map(|_| rng.gen_range(0..k) as u8).collect();
    WordStructure::new(alphabet.clone(), symbols).expect("symbols in range")
}

/// Labels positions of words for a fixed unary formula with its compiled
/// automaton.
#[derive(Debug, Clone)]
pub struct Labeller {
    dfa: Dfa,
    num_params: usize,
}

impl Labeller {
    pub fn new(phi: &Formula) -> Result<Labeller, CorpusError> {
        if phi.arity() != 1 {
            return Err(CompileError::NotUnary(phi.arity()).into());
        }
        Ok(Labeller {
            dfa: compile_with_cap(phi, DEFAULT_STATE_CAP)?,
            num_params: phi.num_params(),
        })
    }

    /// Label of every position under the parameters `params`.
    pub fn label(&self, word: &WordStructure, params: &[usize]) -> Vec<bool> {
        self.dfa.label_positions(word.symbols(), params)
    }

    /// Samples `v` uniformly, then `t` distinct positions labelled by
    /// `phi(x; v)`, listed in position order.
    pub fn gen_random_consistent(
        &self,
        word: &WordStructure,
        t: usize,
        seed: u64,
    ) -> Result<(Vec<usize>, TrainingSet), CorpusError> {
        if word.alphabet() != self.dfa.alphabet().base() {
            return Err(CorpusError::AlphabetMismatch);
        }
        let n = word.len();
        if t > n || (n == 0 && self.num_params > 0) {
            return Err(CorpusError::NotEnoughInstances {
                requested: t.max(1),
                available: n,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params: Vec<usize> = (0..self.num_params).map(|_| rng.gen_range(1..=n)).collect();
        let labels = self.label(word, &params);
        let mut positions = sample(&mut rng, n, t).into_vec();
        positions.sort_unstable();
        let training = TrainingSet::new(positions.into_iter().map(|p| (p + 1, labels[p])));
        Ok((params, training))
    }
}

/// [`Labeller::gen_random_consistent`] with a one-off labeller.
pub fn gen_random_consistent(
    word: &WordStructure,
    phi: &Formula,
    t: usize,
    seed: u64,
) -> Result<(Vec<usize>, TrainingSet), CorpusError> {
    Labeller::new(phi)?.gen_random_consistent(word, t, seed)
}

/// Hex SHA-256 of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestOutput {
    pub path: String,
    pub sha256: String,
}

/// Generator, inputs, seed and output hashes of a generated corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub generator: String,
    pub rng: String,
    pub spec: serde_json::Value,
    pub seed: Option<u64>,
    pub outputs: Vec<ManifestOutput>,
}

impl Manifest {
    pub fn new(generator: &str, spec: serde_json::Value, seed: Option<u64>) -> Manifest {
        Manifest {
            generator: generator.to_string(),
            rng: RNG_ALGORITHM.to_string(),
            spec,
            seed,
            outputs: Vec::new(),
        }
    }

    pub fn add_output(&mut self, path: &str, bytes: &[u8]) {
        self.outputs.push(ManifestOutput {
            path: path.to_string(),
            sha256: sha256_hex(bytes),
        });
    }
}
