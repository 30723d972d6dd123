//! Boolean operations, projection and minimization on raw transition tables.

use std::collections::{HashMap, VecDeque};

/// Complete DFA over the symbols `0..symbols`, no alphabet metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDfa {
    pub symbols: usize,
    pub states: usize,
    pub delta: Vec<u32>,
    pub initial: u32,
    pub accepting: Vec<bool>,
}

impl RawDfa {
    pub fn from_fn(
        symbols: usize,
        states: usize,
        initial: u32,
        accepting: Vec<bool>,
        f: impl Fn(u32, usize) -> u32,
    ) -> RawDfa {
        let mut delta = Vec::with_capacity(states * symbols);
        for q in 0..states as u32 {
            for s in 0..symbols {
                delta.push(f(q, s));
            }
        }
        RawDfa {
            symbols,
            states,
            delta,
            initial,
            accepting,
        }
    }

    #[inline]
    pub fn step(&self, q: u32, s: usize) -> u32 {
        self.delta[q as usize * self.symbols + s]
    }

    pub fn complement(&self) -> RawDfa {
        RawDfa {
            accepting: self.accepting.iter().map(|&b| !b).collect(),
            ..self.clone()
        }
    }

    /// Keeps only the listed columns, in order.
    pub fn select_columns(&self, columns: &[usize]) -> RawDfa {
        let mut delta = Vec::with_capacity(self.states * columns.len());
        for q in 0..self.states as u32 {
            delta.extend(columns.iter().map(|&c| self.step(q, c)));
        }
        RawDfa {
            symbols: columns.len(),
            delta,
            ..self.clone()
        }
    }
}

/// Reachable product automaton; `Err(count)` once more than `cap` states appear.
pub fn product(
    a: &RawDfa,
    b: &RawDfa,
    accept: impl Fn(bool, bool) -> bool,
    cap: usize,
) -> Result<RawDfa, usize> {
    debug_assert_eq!(a.symbols, b.symbols);
    let symbols = a.symbols;
    let mut index: HashMap<(u32, u32), u32> = HashMap::new();
    let mut pairs = vec![(a.initial, b.initial)];
    index.insert(pairs[0], 0);
    let mut delta = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        for s in 0..symbols {
            let next = (a.step(p, s), b.step(q, s));
            let id = *index.entry(next).or_insert_with(|| {
                pairs.push(next);
                (pairs.len() - 1) as u32
            });
            delta.push(id);
        }
        if pairs.len() > cap {
            return Err(pairs.len());
        }
        i += 1;
    }
    let accepting = pairs
        .iter()
        .map(|&(p, q)| accept(a.accepting[p as usize], b.accepting[q as usize]))
        .collect();
    Ok(RawDfa {
        symbols,
        states: pairs.len(),
        delta,
        initial: 0,
        accepting,
    })
}

/// Existential projection of one track, where symbols are
/// `letter + letters * mask`, determinized by the subset construction.
/// Subsets are numbered in discovery order, which is deterministic.
pub fn project(a: &RawDfa, letters: usize, track: usize, cap: usize) -> Result<RawDfa, usize> {
    let stride = letters << track;
    let symbols = a.symbols;
    let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut subsets = vec![vec![a.initial]];
    index.insert(subsets[0].clone(), 0);
    let mut delta = Vec::new();
    let mut i = 0;
    while i < subsets.len() {
        for s in 0..symbols {
            let mut next: Vec<u32> = Vec::with_capacity(subsets[i].len() * 2);
            for &q in &subsets[i] {
                next.push(a.step(q, s));
                let partner = if (s / letters) >> track & 1 == 1 {
                    s - stride
                } else {
                    s + stride
                };
                next.push(a.step(q, partner));
            }
            next.sort_unstable();
            next.dedup();
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = subsets.len() as u32;
                    index.insert(next.clone(), id);
                    subsets.push(next);
                    id
                }
            };
            delta.push(id);
        }
        if subsets.len() > cap {
            return Err(subsets.len());
        }
        i += 1;
    }
    let accepting = subsets
        .iter()
        .map(|set| set.iter().any(|&q| a.accepting[q as usize]))
        .collect();
    Ok(RawDfa {
        symbols,
        states: subsets.len(),
        delta,
        initial: 0,
        accepting,
    })
}

/// Removes unreachable states, merges equivalent states (Moore refinement)
/// and renumbers breadth-first from the initial state in symbol order.
pub fn minimize(a: &RawDfa) -> RawDfa {
    let symbols = a.symbols;
    // reachable states
    let mut reach = vec![false; a.states];
    let mut stack = vec![a.initial];
    reach[a.initial as usize] = true;
    while let Some(q) = stack.pop() {
        for s in 0..symbols {
            let t = a.step(q, s);
            if !reach[t as usize] {
                reach[t as usize] = true;
                stack.push(t);
            }
        }
    }
    let live: Vec<u32> = (0..a.states as u32).filter(|&q| reach[q as usize]).collect();

    let mut class = vec![u32::MAX; a.states];
    for &q in &live {
        class[q as usize] = a.accepting[q as usize] as u32;
    }
    let mut count = {
        let mut seen = [false; 2];
        for &q in &live {
            seen[class[q as usize] as usize] = true;
        }
        seen.iter().filter(|&&b| b).count()
    };
    let mut sig = Vec::with_capacity(symbols + 1);
    loop {
        let mut ids: HashMap<Vec<u32>, u32> = HashMap::with_capacity(count * 2);
        let mut next = vec![u32::MAX; a.states];
        for &q in &live {
            sig.clear();
            sig.push(class[q as usize]);
            sig.extend((0..symbols).map(|s| class[a.step(q, s) as usize]));
            let fresh = ids.len() as u32;
            next[q as usize] = *ids.entry(sig.clone()).or_insert(fresh);
        }
        let new_count = ids.len();
        class = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }

    // canonical numbering by BFS over classes
    let mut order = vec![u32::MAX; count];
    let mut rep = Vec::with_capacity(count);
    let mut queue = VecDeque::new();
    order[class[a.initial as usize] as usize] = 0;
    rep.push(a.initial);
    queue.push_back(a.initial);
    while let Some(q) = queue.pop_front() {
        for s in 0..symbols {
            let t = a.step(q, s);
            let c = class[t as usize] as usize;
            if order[c] == u32::MAX {
                order[c] = rep.len() as u32;
                rep.push(t);
                queue.push_back(t);
            }
        }
    }
    let mut delta = Vec::with_capacity(count * symbols);
    for &q in &rep {
        delta.extend((0..symbols).map(|s| order[class[a.step(q, s) as usize] as usize]));
    }
    RawDfa {
        symbols,
        states: count,
        delta,
        initial: 0,
        accepting: rep.iter().map(|&q| a.accepting[q as usize]).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_dfa() -> impl Strategy<Value = RawDfa> {
        (1usize..8, 1usize..4).prop_flat_map(|(states, symbols)| {
            (
                proptest::collection::vec(0..states as u32, states * symbols),
                proptest::collection::vec(any::<bool>(), states),
                0..states as u32,
            )
                .prop_map(move |(delta, accepting, initial)| RawDfa {
                    symbols,
                    states,
                    delta,
                    initial,
                    accepting,
                })
        })
    }

    fn accepts(a: &RawDfa, w: &[usize]) -> bool {
        a.accepting[w.iter().fold(a.initial, |q, &s| a.step(q, s)) as usize]
    }

    fn words(symbols: usize, max_len: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        let mut frontier = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for s in 0..symbols {
                    let mut v: Vec<usize> = w.clone();
                    v.push(s);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    proptest! {
        #[test]
        fn minimize_preserves_language_and_is_idempotent(a in random_dfa()) {
            let m = minimize(&a);
            for w in words(a.symbols, 6) {
                prop_assert_eq!(accepts(&a, &w), accepts(&m, &w));
            }
            let mm = minimize(&m);
            prop_assert_eq!(&mm, &m);
            prop_assert!(m.states <= a.states);
        }

        #[test]
        fn minimal_states_are_distinguishable(a in random_dfa()) {
            let m = minimize(&a);
            // distinct states differ on some word of length < states
            let ws = words(m.symbols, m.states);
            for p in 0..m.states as u32 {
                for q in (p + 1)..m.states as u32 {
                    let run = |start: u32, w: &Vec<usize>| {
                        m.accepting[w.iter().fold(start, |r, &s| m.step(r, s)) as usize]
                    };
                    prop_assert!(ws.iter().any(|w| run(p, w) != run(q, w)));
                }
            }
        }

        #[test]
        fn product_is_intersection(a in random_dfa(), b in random_dfa()) {
            prop_assume!(a.symbols == b.symbols);
            let p = product(&a, &b, |x, y| x && y, usize::MAX).unwrap();
            for w in words(a.symbols, 5) {
                prop_assert_eq!(accepts(&p, &w), accepts(&a, &w) && accepts(&b, &w));
            }
        }
    }

    #[test]
    fn projection_merges_bit() {
        // symbols 0..4 = bit0 x bit1; accept iff some symbol has bit1 set
        let a = RawDfa::from_fn(4, 2, 0, vec![false, true], |q, s| {
            if q == 1 || s & 2 != 0 { 1 } else { 0 }
        });
        let p = minimize(&project(&a, 1, 1, 100).unwrap());
        // after projecting bit1 every nonempty word is accepted
        assert_eq!(p.states, 2);
        assert!(!p.accepting[0]);
        assert!((0..4).all(|s| p.accepting[p.step(0, s) as usize]));
    }

    #[test]
    fn caps_are_enforced() {
        let a = RawDfa::from_fn(2, 5, 0, vec![false; 5], |q, s| (q + s as u32 + 1) % 5);
        let b = RawDfa::from_fn(2, 3, 0, vec![true; 3], |q, _| (q + 1) % 3);
        assert!(product(&a, &b, |x, y| x || y, 4).is_err());
    }
}
