use std::collections::HashMap;
use std::sync::Arc;

use super::{FiniteMonoid, MemoTable, MonoidError, Tag, TaggedMonoid};
use crate::automata::{gamma_decode, Class};

/// Reachable submonoid of the power set of a [`TaggedMonoid`], generated by
/// the images `h(a, c) = { hhat(a, K, c) : K any parameter set }`.
/// Element 0 is `{1}`.
#[derive(Debug)]
pub struct PowerMonoid {
    mhat: Arc<TaggedMonoid>,
    sets: Vec<Box<[u32]>>,
    index: HashMap<Box<[u32]>, u32>,
    /// indexed by Gamma code `a + |base| * c`
    h: Vec<u32>,
    generators: Vec<u32>,
    idempotent: Vec<bool>,
    table: MemoTable,
}

impl PowerMonoid {
    pub fn build(mhat: Arc<TaggedMonoid>, cap: usize) -> Result<PowerMonoid, MonoidError> {
        let alphabet = mhat.alphabet().clone();
        let s = alphabet.base().len();
        let l = alphabet.num_tracks();
        let mut sets: Vec<Box<[u32]>> = vec![vec![0u32].into_boxed_slice()];
        let mut index: HashMap<Box<[u32]>, u32> = HashMap::new();
        index.insert(sets[0].clone(), 0);

        let mut intern = |set: Vec<u32>, sets: &mut Vec<Box<[u32]>>| -> Result<u32, MonoidError> {
            let set = set.into_boxed_slice();
            if let Some(&i) = index.get(&set) {
                return Ok(i);
            }
            if sets.len() >= cap {
                return Err(MonoidError::MonoidBlowup { cap });
            }
            let id = sets.len() as u32;
            index.insert(set.clone(), id);
            sets.push(set);
            Ok(id)
        };

        let mut h = Vec::with_capacity(3 * s);
        for code in 0..3 * s as u32 {
            let (letter, class) = gamma_decode(s, code);
            let mut set: Vec<u32> = (0..1u32 << l)
                .map(|k| mhat.hhat(alphabet.encode(letter, k, class)))
                .collect();
            set.sort_unstable();
            set.dedup();
            h.push(intern(set, &mut sets)?);
        }
        let mut generators = h.clone();
        generators.sort_unstable();
        generators.dedup();

        let mut i = 0;
        while i < sets.len() {
            for &g in &generators {
                let prod = set_product(&mhat, &sets[i], &sets[g as usize]);
                intern(prod, &mut sets)?;
            }
            i += 1;
        }
        let n = sets.len();
        let mut pm = PowerMonoid {
            mhat,
            sets,
            index,
            h,
            generators,
            idempotent: Vec::new(),
            table: MemoTable::new(n),
        };
        pm.idempotent = (0..n as u32).map(|a| pm.mul(a, a) == a).collect();
        Ok(pm)
    }

    pub fn mhat(&self) -> &Arc<TaggedMonoid> {
        &self.mhat
    }

    /// Sorted elements of the tagged monoid in `S`.
    pub fn set(&self, s: u32) -> &[u32] {
        &self.sets[s as usize]
    }

    /// Image of a Gamma symbol.
    pub fn h(&self, gamma: u32) -> u32 {
        self.h[gamma as usize]
    }

    pub fn h_letter(&self, letter: usize, class: Class) -> u32 {
        let s = self.mhat.alphabet().base().len();
        self.h(crate::automata::gamma_code(s, letter, class))
    }

    pub fn h_word(&self, word: impl IntoIterator<Item = u32>) -> u32 {
        word.into_iter().fold(0, |m, g| self.mul(m, self.h(g)))
    }

    /// Precomputed `S * S == S`.
    pub fn idempotent(&self, s: u32) -> bool {
        self.idempotent[s as usize]
    }

    /// The unique element of `S` with empty tag that is idempotent.
    pub fn idempotent_of_empty_class(&self, s: u32) -> Result<u32, MonoidError> {
        let mut found = None;
        for &m in self.set(s) {
            if self.mhat.tag(m) == Tag::Params(0) && self.mhat.mul(m, m) == m {
                if found.is_some() {
                    return Err(MonoidError::NoUniqueIdempotent(s));
                }
                found = Some(m);
            }
        }
        found.ok_or(MonoidError::NoUniqueIdempotent(s))
    }

    fn compute(&self, a: u32, b: u32) -> u32 {
        let prod = set_product(&self.mhat, self.set(a), self.set(b));
        self.index[prod.as_slice()]
    }
}

fn set_product(m: &TaggedMonoid, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = a
        .iter()
        .flat_map(|&x| b.iter().map(move |&y| m.mul(x, y)))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

impl FiniteMonoid for PowerMonoid {
    fn len(&self) -> usize {
        self.sets.len()
    }

    fn identity(&self) -> u32 {
        0
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        self.table.get_or(a, b, || self.compute(a, b))
    }

    fn generators(&self) -> &[u32] {
        &self.generators
    }
}
