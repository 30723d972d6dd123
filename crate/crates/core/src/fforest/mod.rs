//! Simon factorization trees over a finite monoid.
//!
//! Trees are persistent: nodes are reference counted and never mutated, so
//! range extraction and splicing share untouched subtrees with the source.
//! Heights count edges (a single leaf has height 0).

mod build;
mod range;

use std::cell::Cell;
use std::collections::HashMap;
use std::sync::Arc;

use crate::monoid::{FiniteMonoid, Green};

pub type Tree = Arc<Node>;

#[derive(Debug)]
pub struct Node {
    label: u32,
    height: u32,
    first: usize,
    last: usize,
    kind: Kind,
}

#[derive(Debug)]
pub enum Kind {
    Leaf { symbol: u32 },
    Binary(Tree, Tree),
    /// Children `children[start..end]`; the slice may be shared with other
    /// nodes.
    Idempotent {
        children: Arc<[Tree]>,
        start: usize,
        end: usize,
    },
}

impl Node {
    pub fn label(&self) -> u32 {
        self.label
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// Position of the leftmost leaf.
    pub fn first(&self) -> usize {
        self.first
    }

    /// Position of the rightmost leaf.
    pub fn last(&self) -> usize {
        self.last
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn children(&self) -> Vec<&Tree> {
        match &self.kind {
            Kind::Leaf { .. } => Vec::new(),
            Kind::Binary(l, r) => vec![l, r],
            Kind::Idempotent {
                children,
                start,
                end,
            } => children[*start..*end].iter().collect(),
        }
    }

    /// Leaves in order as `(position, symbol, label)`.
    pub fn leaves(&self) -> Vec<(usize, u32, u32)> {
        let mut out = Vec::new();
        let mut stack: Vec<&Node> = vec![self];
        while let Some(n) = stack.pop() {
            match &n.kind {
                Kind::Leaf { symbol } => out.push((n.first, *symbol, n.label)),
                Kind::Binary(l, r) => {
                    stack.push(r);
                    stack.push(l);
                }
                Kind::Idempotent {
                    children,
                    start,
                    end,
                } => stack.extend(children[*start..*end].iter().rev().map(|c| &**c)),
            }
        }
        out
    }

    pub fn num_nodes(&self) -> usize {
        1 + match &self.kind {
            Kind::Leaf { .. } => 0,
            Kind::Binary(l, r) => l.num_nodes() + r.num_nodes(),
            Kind::Idempotent {
                children,
                start,
                end,
            } => children[*start..*end].iter().map(|c| c.num_nodes()).sum(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ForestError {
    #[error("cannot build a factorization tree for an empty sequence")]
    EmptySequence,
    #[error("range {i}..={j} is not within the leaves {first}..={last}")]
    RangeOutOfBounds {
        i: usize,
        j: usize,
        first: usize,
        last: usize,
    },
    #[error("replacement positions must be strictly increasing and inside the tree")]
    BadReplacement,
}

/// Violated tree invariant found by [`Forest::verify`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeDefect {
    #[error("leaf at {pos} has label {found}, expected {expected}")]
    LeafLabel { pos: usize, found: u32, expected: u32 },
    #[error("node over {first}..={last} has label {found}, children multiply to {expected}")]
    Product {
        first: usize,
        last: usize,
        found: u32,
        expected: u32,
    },
    #[error("idempotent node over {first}..={last} has fewer than three children or mixed labels")]
    NotUniform { first: usize, last: usize },
    #[error("idempotent node over {first}..={last} is labelled by a non-idempotent")]
    NotIdempotent { first: usize, last: usize },
    #[error("leaf positions are not strictly increasing at {pos}")]
    LeafOrder { pos: usize },
    #[error("node over {first}..={last} records wrong height or span")]
    Bookkeeping { first: usize, last: usize },
}

/// Tree construction context over a monoid, counting allocated nodes and
/// monoid products.
pub struct Forest<'a, M: FiniteMonoid> {
    monoid: &'a M,
    green: &'a Green,
    /// idempotent of each group H-class, keyed by (L-class, R-class)
    idempotents: HashMap<(u32, u32), u32>,
    created: Cell<u64>,
    products: Cell<u64>,
}

impl<'a, M: FiniteMonoid> Forest<'a, M> {
    pub fn new(monoid: &'a M, green: &'a Green) -> Self {
        let idempotents = (0..monoid.len() as u32)
            .filter(|&x| monoid.is_idempotent(x))
            .map(|x| ((green.l[x as usize], green.r[x as usize]), x))
            .collect();
        Forest {
            monoid,
            green,
            idempotents,
            created: Cell::new(0),
            products: Cell::new(0),
        }
    }

    pub fn monoid(&self) -> &M {
        self.monoid
    }

    /// Nodes allocated so far.
    pub fn nodes_created(&self) -> u64 {
        self.created.get()
    }

    /// Monoid products performed so far.
    pub fn products(&self) -> u64 {
        self.products.get()
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        self.products.set(self.products.get() + 1);
        self.monoid.mul(a, b)
    }

    fn alloc(&self, node: Node) -> Tree {
        self.created.set(self.created.get() + 1);
        Arc::new(node)
    }

    pub fn leaf(&self, pos: usize, symbol: u32, label: u32) -> Tree {
        self.alloc(Node {
            label,
            height: 0,
            first: pos,
            last: pos,
            kind: Kind::Leaf { symbol },
        })
    }

    pub fn binary(&self, l: Tree, r: Tree) -> Tree {
        self.alloc(Node {
            label: self.mul(l.label, r.label),
            height: l.height.max(r.height) + 1,
            first: l.first,
            last: r.last,
            kind: Kind::Binary(l, r),
        })
    }

    /// Idempotent node over `children[start..end]`, all labelled `label`.
    pub(crate) fn idempotent(&self, children: Arc<[Tree]>, start: usize, end: usize) -> Tree {
        debug_assert!(end - start >= 3);
        let slice = &children[start..end];
        let label = slice[0].label;
        let height = slice.iter().map(|c| c.height).max().unwrap_or(0) + 1;
        let (first, last) = (slice[0].first, slice[slice.len() - 1].last);
        self.alloc(Node {
            label,
            height,
            first,
            last,
            kind: Kind::Idempotent {
                children,
                start,
                end,
            },
        })
    }

    /// Combines a run of trees sharing one idempotent label.
    fn uniform(&self, mut run: Vec<Tree>) -> Tree {
        match run.len() {
            0 => unreachable!("empty run"),
            1 => run.pop().unwrap(),
            2 => {
                let r = run.pop().unwrap();
                let l = run.pop().unwrap();
                self.binary(l, r)
            }
            n => self.idempotent(run.into(), 0, n),
        }
    }

    /// Checks every tree invariant; `leaf_label` maps a leaf symbol to the
    /// label it must carry.
    pub fn verify(&self, tree: &Node, leaf_label: impl Fn(u32) -> u32) -> Result<(), TreeDefect> {
        let mut last_pos = None;
        self.verify_node(tree, &leaf_label, &mut last_pos)
    }

    fn verify_node(
        &self,
        n: &Node,
        leaf_label: &impl Fn(u32) -> u32,
        last_pos: &mut Option<usize>,
    ) -> Result<(), TreeDefect> {
        let (first, last) = (n.first, n.last);
        match &n.kind {
            Kind::Leaf { symbol } => {
                if last_pos.is_some_and(|p| p >= first) {
                    return Err(TreeDefect::LeafOrder { pos: first });
                }
                *last_pos = Some(first);
                let expected = leaf_label(*symbol);
                if n.label != expected {
                    return Err(TreeDefect::LeafLabel {
                        pos: first,
                        found: n.label,
                        expected,
                    });
                }
                if n.height != 0 || first != last {
                    return Err(TreeDefect::Bookkeeping { first, last });
                }
                Ok(())
            }
            Kind::Binary(l, r) => {
                self.verify_node(l, leaf_label, last_pos)?;
                self.verify_node(r, leaf_label, last_pos)?;
                let expected = self.monoid.mul(l.label, r.label);
                if n.label != expected {
                    return Err(TreeDefect::Product {
                        first,
                        last,
                        found: n.label,
                        expected,
                    });
                }
                if n.height != l.height.max(r.height) + 1 || first != l.first || last != r.last {
                    return Err(TreeDefect::Bookkeeping { first, last });
                }
                Ok(())
            }
            Kind::Idempotent {
                children,
                start,
                end,
            } => {
                let kids = &children[*start..*end];
                if kids.len() < 3 || kids.iter().any(|c| c.label != n.label) {
                    return Err(TreeDefect::NotUniform { first, last });
                }
                if !self.monoid.is_idempotent(n.label) {
                    return Err(TreeDefect::NotIdempotent { first, last });
                }
                for c in kids {
                    self.verify_node(c, leaf_label, last_pos)?;
                }
                let height = kids.iter().map(|c| c.height).max().unwrap() + 1;
                if n.height != height || first != kids[0].first || last != kids[kids.len() - 1].last
                {
                    return Err(TreeDefect::Bookkeeping { first, last });
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests;
