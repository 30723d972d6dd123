//! Finite monoids: the tagged transition monoid of the consistency
//! automaton, its reachable power monoid, and Green's classes used by
//! the factorization builder.

mod green;
mod power;
mod tagged;

use std::sync::atomic::{AtomicU32, Ordering};

use dashmap::DashMap;

pub use green::Green;
pub use power::PowerMonoid;
pub use tagged::{Tag, TaggedMonoid};

/// Default cap on the number of elements of either monoid.
pub const DEFAULT_MONOID_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MonoidError {
    #[error("monoid closure exceeded {cap} elements")]
    MonoidBlowup { cap: usize },
    #[error("element {0} has no unique idempotent with empty tag")]
    NoUniqueIdempotent(u32),
}

/// A finite monoid with elements `0..len()`, given by a product and a
/// generating set.
pub trait FiniteMonoid: Sync {
    fn len(&self) -> usize;
    fn identity(&self) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
    fn generators(&self) -> &[u32];

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn is_idempotent(&self, a: u32) -> bool {
        self.mul(a, a) == a
    }

    fn product(&self, items: impl IntoIterator<Item = u32>) -> u32
    where
        Self: Sized,
    {
        items
            .into_iter()
            .fold(self.identity(), |acc, x| self.mul(acc, x))
    }
}

/// Lazily filled multiplication table, safe to share between threads.
pub(crate) struct MemoTable {
    n: usize,
    dense: Vec<AtomicU32>,
    sparse: DashMap<(u32, u32), u32>,
}

const DENSE_LIMIT: usize = 2048;

impl MemoTable {
    pub fn new(n: usize) -> MemoTable {
        let dense = if n <= DENSE_LIMIT {
            (0..n * n).map(|_| AtomicU32::new(0)).collect()
        } else {
            Vec::new()
        };
        MemoTable {
            n,
            dense,
            sparse: DashMap::new(),
        }
    }

    pub fn get_or(&self, a: u32, b: u32, compute: impl FnOnce() -> u32) -> u32 {
        if !self.dense.is_empty() {
            let cell = &self.dense[a as usize * self.n + b as usize];
            let v = cell.load(Ordering::Relaxed);
            if v != 0 {
                return v - 1;
            }
            let r = compute();
            cell.store(r + 1, Ordering::Relaxed);
            r
        } else {
            if let Some(v) = self.sparse.get(&(a, b)) {
                return *v;
            }
            let r = compute();
            self.sparse.insert((a, b), r);
            r
        }
    }
}

impl std::fmt::Debug for MemoTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MemoTable({})", self.n)
    }
}

/// A monoid given by an explicit multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableMonoid {
    n: usize,
    table: Vec<u32>,
    identity: u32,
    generators: Vec<u32>,
}

impl TableMonoid {
    /// Builds a table monoid, checking closure, identity and associativity.
    pub fn new(n: usize, table: Vec<u32>, identity: u32, generators: Vec<u32>) -> Option<Self> {
        let m = TableMonoid {
            n,
            table,
            identity,
            generators,
        };
        let ok = m.table.len() == n * n
            && m.table.iter().all(|&x| (x as usize) < n)
            && (identity as usize) < n
            && (0..n as u32).all(|a| m.mul(identity, a) == a && m.mul(a, identity) == a)
            && (0..n as u32).all(|a| {
                (0..n as u32).all(|b| {
                    (0..n as u32).all(|c| m.mul(m.mul(a, b), c) == m.mul(a, m.mul(b, c)))
                })
            });
        ok.then_some(m)
    }

    /// Transformation monoid generated by the given maps on `0..points`,
    /// with the identity as element 0, numbered breadth-first.
    pub fn from_transformations(points: usize, gens: &[Vec<u32>], cap: usize) -> Option<Self> {
        let mut elems: Vec<Vec<u32>> = vec![(0..points as u32).collect()];
        let mut index = std::collections::HashMap::new();
        index.insert(elems[0].clone(), 0u32);
        let mut gen_ids = Vec::new();
        for g in gens {
            let id = *index.entry(g.clone()).or_insert_with(|| {
                elems.push(g.clone());
                (elems.len() - 1) as u32
            });
            gen_ids.push(id);
        }
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let next: Vec<u32> = elems[i].iter().map(|&p| g[p as usize]).collect();
                if !index.contains_key(&next) {
                    index.insert(next.clone(), elems.len() as u32);
                    elems.push(next);
                    if elems.len() > cap {
                        return None;
                    }
                }
            }
            i += 1;
        }
        let n = elems.len();
        let mut table = Vec::with_capacity(n * n);
        for a in &elems {
            for b in &elems {
                let ab: Vec<u32> = a.iter().map(|&p| b[p as usize]).collect();
                table.push(index[&ab]);
            }
        }
        gen_ids.sort_unstable();
        gen_ids.dedup();
        Some(TableMonoid {
            n,
            table,
            identity: 0,
            generators: gen_ids,
        })
    }
}

impl FiniteMonoid for TableMonoid {
    fn len(&self) -> usize {
        self.n
    }

    fn identity(&self) -> u32 {
        self.identity
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.n + b as usize]
    }

    fn generators(&self) -> &[u32] {
        &self.generators
    }
}
