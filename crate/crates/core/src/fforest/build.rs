//! Simon tree construction by J-class descent.
//!
//! For a sequence whose product lies in the J-class `J`, the sequence is
//! cut greedily into segments `v_i a_i` whose products are in `J` (the
//! prefix `v_i` lies strictly above `J` and is built recursively) plus a
//! tail strictly above `J`. The segments form a word all of whose infixes
//! lie in `J`. In such a word two cuts with the same prefix product and the
//! same R-class of the following segment enclose an idempotent, and all
//! such enclosed infixes for one key are equal, which yields an idempotent
//! node. Splitting on one key at a time bounds the height by the number of
//! keys.

use std::collections::HashMap;

use super::{ForestError, Forest, Tree};
use crate::monoid::FiniteMonoid;

impl<M: FiniteMonoid> Forest<'_, M> {
    /// Simon tree whose leaf-level items are `items`, in order.
    pub fn build(&self, items: &[Tree]) -> Result<Tree, ForestError> {
        if items.is_empty() {
            return Err(ForestError::EmptySequence);
        }
        Ok(self.descend(items))
    }

    /// Builds from `(position, symbol, label)` leaves.
    pub fn build_leaves(
        &self,
        leaves: impl IntoIterator<Item = (usize, u32, u32)>,
    ) -> Result<Tree, ForestError> {
        let items: Vec<Tree> = leaves
            .into_iter()
            .map(|(p, s, l)| self.leaf(p, s, l))
            .collect();
        self.build(&items)
    }

    fn descend(&self, items: &[Tree]) -> Tree {
        if items.len() == 1 {
            return items[0].clone();
        }
        let total = items
            .iter()
            .fold(self.monoid.identity(), |acc, t| self.mul(acc, t.label));
        let j0 = self.green.j[total as usize];
        let mut segments = Vec::new();
        let mut start = 0;
        let mut acc = self.monoid.identity();
        for (i, item) in items.iter().enumerate() {
            acc = self.mul(acc, item.label);
            if self.green.j[acc as usize] == j0 {
                let seg = if i == start {
                    item.clone()
                } else {
                    self.binary(self.descend(&items[start..i]), item.clone())
                };
                segments.push(seg);
                start = i + 1;
                acc = self.monoid.identity();
            }
        }
        let smooth = self.smooth(segments);
        if start < items.len() {
            self.binary(smooth, self.descend(&items[start..]))
        } else {
            smooth
        }
    }

    /// Tree for a nonempty sequence all of whose infix products share one
    /// J-class.
    fn smooth(&self, items: Vec<Tree>) -> Tree {
        let m = items.len();
        if m == 1 {
            return items.into_iter().next().unwrap();
        }
        // key of cut c (between items[c-1] and items[c]), c in 1..m
        let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
        let mut info = Vec::new();
        let mut keys = vec![u32::MAX; m];
        let mut prefix = self.monoid.identity();
        for c in 1..m {
            prefix = self.mul(prefix, items[c - 1].label);
            let r = self.green.r[items[c].label as usize];
            let next = ids.len() as u32;
            keys[c] = *ids.entry((prefix, r)).or_insert_with(|| {
                info.push(self.group_idempotent(prefix, r));
                next
            });
        }
        self.split(&items, &keys, &info, 0, m)
    }

    /// The idempotent in the H-class of L(p) and the R-class `r`, if any.
    fn group_idempotent(&self, p: u32, r: u32) -> Option<u32> {
        self.idempotents
            .get(&(self.green.l[p as usize], r))
            .copied()
    }

    /// Splits `items[lo..hi]` at all cuts of one key. Keys whose outer
    /// pieces already carry the enclosed idempotent are preferred, since
    /// those pieces join the idempotent node instead of adding binary
    /// levels.
    fn split(&self, items: &[Tree], keys: &[u32], info: &[Option<u32>], lo: usize, hi: usize) -> Tree {
        if hi - lo == 1 {
            return items[lo].clone();
        }
        struct Stat {
            count: usize,
            pre: u32,
            post: u32,
        }
        let mut stats: HashMap<u32, Stat> = HashMap::new();
        let mut acc = self.monoid.identity();
        for c in lo + 1..hi {
            acc = self.mul(acc, items[c - 1].label);
            stats
                .entry(keys[c])
                .and_modify(|s| s.count += 1)
                .or_insert(Stat {
                    count: 1,
                    pre: acc,
                    post: 0,
                });
        }
        let mut acc = self.monoid.identity();
        let mut seen = std::collections::HashSet::new();
        for c in (lo + 1..hi).rev() {
            acc = self.mul(items[c].label, acc);
            if seen.insert(keys[c]) {
                stats.get_mut(&keys[c]).unwrap().post = acc;
            }
        }
        let cost = |k: u32, s: &Stat| -> usize {
            if s.count == 1 {
                return 1;
            }
            let e = info[k as usize];
            3 - (Some(s.pre) == e) as usize - (Some(s.post) == e) as usize
        };
        let (&key, _) = stats
            .iter()
            .min_by(|a, b| {
                cost(*a.0, a.1)
                    .cmp(&cost(*b.0, b.1))
                    .then(b.1.count.cmp(&a.1.count))
                    .then(a.0.cmp(b.0))
            })
            .unwrap();
        let cuts: Vec<usize> = (lo + 1..hi).filter(|&c| keys[c] == key).collect();
        let pre = self.split(items, keys, info, lo, cuts[0]);
        let post = self.split(items, keys, info, cuts[cuts.len() - 1], hi);
        if cuts.len() == 1 {
            return self.binary(pre, post);
        }
        let mut run: Vec<Tree> = cuts
            .windows(2)
            .map(|w| self.split(items, keys, info, w[0], w[1]))
            .collect();
        let e = run[0].label;
        debug_assert!(run.iter().all(|t| t.label == e));
        debug_assert_eq!(Some(e), info[key as usize]);
        let pre = if pre.label == e {
            run.insert(0, pre);
            None
        } else {
            Some(pre)
        };
        let post = if post.label == e {
            run.push(post);
            None
        } else {
            Some(post)
        };
        let mid = self.uniform(run);
        self.concat3(pre, mid, post)
    }

    /// Joins up to three trees with binary nodes, pairing the lower ones first.
    pub(super) fn concat3(&self, a: Option<Tree>, b: Tree, c: Option<Tree>) -> Tree {
        match (a, c) {
            (None, None) => b,
            (Some(a), None) => self.binary(a, b),
            (None, Some(c)) => self.binary(b, c),
            (Some(a), Some(c)) => {
                if a.height <= c.height {
                    self.binary(self.binary(a, b), c)
                } else {
                    self.binary(a, self.binary(b, c))
                }
            }
        }
    }
}
