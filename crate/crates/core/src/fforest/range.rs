use super::{ForestError, Forest, Kind, Node, Tree};
use crate::monoid::FiniteMonoid;

impl<M: FiniteMonoid> Forest<'_, M> {
    /// Tree over the leaves with positions in `i..=j`, sharing every fully
    /// covered subtree with `tree`.
    pub fn range(&self, tree: &Tree, i: usize, j: usize) -> Result<Tree, ForestError> {
        if i > j || i < tree.first || j > tree.last {
            return Err(ForestError::RangeOutOfBounds {
                i,
                j,
                first: tree.first,
                last: tree.last,
            });
        }
        self.extract(tree, i, j)
            .ok_or(ForestError::RangeOutOfBounds {
                i,
                j,
                first: tree.first,
                last: tree.last,
            })
    }

    /// `None` if no leaf of `tree` lies in `i..=j`.
    fn extract(&self, tree: &Tree, i: usize, j: usize) -> Option<Tree> {
        if j < tree.first || i > tree.last {
            return None;
        }
        if i <= tree.first && tree.last <= j {
            return Some(tree.clone());
        }
        match &tree.kind {
            Kind::Leaf { .. } => unreachable!("a leaf is either covered or disjoint"),
            Kind::Binary(l, r) => match (self.extract(l, i, j), self.extract(r, i, j)) {
                (Some(a), Some(b)) => Some(self.binary(a, b)),
                (a, b) => a.or(b),
            },
            Kind::Idempotent {
                children,
                start,
                end,
            } => {
                let kids = &children[*start..*end];
                // first child ending at or after i, last child starting at or before j
                let a = kids.partition_point(|c| c.last < i);
                let b = kids.partition_point(|c| c.first <= j);
                if a >= b {
                    return None;
                }
                let b = b - 1;
                if a == b {
                    return self.extract(&kids[a], i, j);
                }
                let covered = |c: &Node| i <= c.first && c.last <= j;
                let mid_lo = if covered(&kids[a]) { a } else { a + 1 };
                let mid_hi = if covered(&kids[b]) { b + 1 } else { b };
                let left = (mid_lo > a).then(|| self.extract(&kids[a], i, j)).flatten();
                let right = (mid_hi <= b).then(|| self.extract(&kids[b], i, j)).flatten();
                let mid = match mid_hi.saturating_sub(mid_lo) {
                    0 => None,
                    1 => Some(kids[mid_lo].clone()),
                    2 => Some(self.binary(kids[mid_lo].clone(), kids[mid_lo + 1].clone())),
                    _ => Some(self.idempotent(children.clone(), start + mid_lo, start + mid_hi)),
                };
                Some(match mid {
                    Some(m) => self.concat3(left, m, right),
                    None => match (left, right) {
                        (Some(l), Some(r)) => self.binary(l, r),
                        (l, r) => l.or(r)?,
                    },
                })
            }
        }
    }

    /// Replaces the leaves at the given positions (strictly increasing, each
    /// present in `tree`) by new leaves `(position, symbol, label)` and
    /// rebuilds only the spine around them.
    pub fn splice(&self, tree: &Tree, replacements: &[(usize, u32, u32)]) -> Result<Tree, ForestError> {
        if replacements.is_empty() {
            return Ok(tree.clone());
        }
        let ok = replacements.windows(2).all(|w| w[0].0 < w[1].0)
            && replacements[0].0 >= tree.first
            && replacements[replacements.len() - 1].0 <= tree.last;
        if !ok {
            return Err(ForestError::BadReplacement);
        }
        let mut items = Vec::with_capacity(2 * replacements.len() + 1);
        let mut from = tree.first;
        for &(pos, symbol, label) in replacements {
            if pos > from {
                items.extend(self.extract(tree, from, pos - 1));
            }
            items.push(self.leaf(pos, symbol, label));
            from = pos + 1;
        }
        if from <= tree.last {
            items.extend(self.extract(tree, from, tree.last));
        }
        self.build(&items)
    }
}
