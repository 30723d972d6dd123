use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::monoid::TableMonoid;

fn random_monoid(rng: &mut impl Rng, max: usize) -> TableMonoid {
    loop {
        let points = rng.gen_range(2..=4);
        let gens: Vec<Vec<u32>> = (0..rng.gen_range(1..=3))
            .map(|_| (0..points).map(|_| rng.gen_range(0..points as u32)).collect())
            .collect();
        if let Some(m) = TableMonoid::from_transformations(points, &gens, max) {
            return m;
        }
    }
}

fn fold(m: &TableMonoid, labels: impl IntoIterator<Item = u32>) -> u32 {
    labels.into_iter().fold(m.identity(), |a, b| m.mul(a, b))
}

fn leaves_of(seq: &[u32]) -> Vec<(usize, u32, u32)> {
    seq.iter().enumerate().map(|(i, &x)| (i + 1, x, x)).collect()
}

#[test]
fn single_leaf_and_idempotent_run() {
    let m = TableMonoid::from_transformations(2, &[vec![0, 0]], 10).unwrap();
    let g = Green::compute(&m);
    let f = Forest::new(&m, &g);
    let one = f.build_leaves([(1, 1, 1)]).unwrap();
    assert_eq!(one.height(), 0);
    let e = 1;
    assert!(m.is_idempotent(e));
    let t = f.build_leaves(leaves_of(&[e, e, e, e])).unwrap();
    assert_eq!(t.height(), 1);
    assert!(matches!(t.kind(), Kind::Idempotent { .. }));
    assert_eq!(t.children().len(), 4);
    assert_eq!(f.build(&[]).unwrap_err(), ForestError::EmptySequence);
}

#[test]
fn figure_two_range() {
    // m1, m2, e, e, e, m3, m4, e, m5 in the full transformation monoid on 3 points
    let m = TableMonoid::from_transformations(3, &[vec![1, 0, 2], vec![1, 2, 0], vec![0, 0, 2]], 100)
        .unwrap();
    let g = Green::compute(&m);
    let f = Forest::new(&m, &g);
    let e = (0..m.len() as u32).find(|&x| x != 0 && m.is_idempotent(x)).unwrap();
    let seq = [3, 5, e, e, e, 7, 2, e, 9];
    let tree = f.build_leaves(leaves_of(&seq)).unwrap();
    f.verify(&tree, |s| s).unwrap();
    let sub = f.range(&tree, 2, 6).unwrap();
    f.verify(&sub, |s| s).unwrap();
    assert_eq!(sub.label(), fold(&m, [5, e, e, e, 7]));
    assert_eq!(sub.label(), fold(&m, [5, e, 7]));
    assert_eq!(sub.leaves().len(), 5);
    let full = f.range(&tree, 1, 9).unwrap();
    assert!(Arc::ptr_eq(&full, &tree));
    assert!(matches!(f.range(&tree, 0, 3), Err(ForestError::RangeOutOfBounds { .. })));
    assert!(matches!(f.range(&tree, 4, 10), Err(ForestError::RangeOutOfBounds { .. })));
}

#[test]
fn perturbed_tree_fails_verification() {
    let m = TableMonoid::from_transformations(3, &[vec![1, 0, 2], vec![1, 2, 0]], 100).unwrap();
    let g = Green::compute(&m);
    let f = Forest::new(&m, &g);
    let good = f.build_leaves(leaves_of(&[1, 2, 3])).unwrap();
    let bad_leaf = Arc::new(Node {
        label: 4,
        height: 0,
        first: 2,
        last: 2,
        kind: Kind::Leaf { symbol: 2 },
    });
    let bad = f.binary(f.leaf(1, 1, 1), bad_leaf);
    assert!(f.verify(&good, |s| s).is_ok());
    assert!(matches!(f.verify(&bad, |s| s), Err(TreeDefect::LeafLabel { pos: 2, .. })));
    let wrong_label = Arc::new(Node {
        label: m.mul(1, 1),
        height: 1,
        first: 1,
        last: 2,
        kind: Kind::Binary(f.leaf(1, 1, 1), f.leaf(2, 2, 2)),
    });
    assert!(m.mul(1, 1) != m.mul(1, 2));
    assert!(matches!(f.verify(&wrong_label, |s| s), Err(TreeDefect::Product { .. })));
    let misordered = f.binary(f.leaf(2, 1, 1), f.leaf(1, 1, 1));
    assert!(matches!(f.verify(&misordered, |s| s), Err(TreeDefect::LeafOrder { .. })));
}

#[test]
fn exhaustive_small_monoids_respect_height_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let m = random_monoid(&mut rng, 12);
        let g = Green::compute(&m);
        let f = Forest::new(&m, &g);
        let n = m.len() as u32;
        let bound = 3 * m.len() as u32;
        for len in 1..=6usize {
            let total = (n as usize).pow(len as u32).min(20_000);
            for idx in 0..total {
                let seq: Vec<u32> = (0..len)
                    .map(|i| (idx / (n as usize).pow(i as u32) % n as usize) as u32)
                    .collect();
                let t = f.build_leaves(leaves_of(&seq)).unwrap();
                assert!(t.height() <= bound, "{seq:?} height {}", t.height());
                assert_eq!(t.label(), fold(&m, seq.iter().copied()));
                f.verify(&t, |s| s).unwrap();
            }
        }
    }
}

#[test]
fn splice_examples() {
    let m = TableMonoid::from_transformations(3, &[vec![1, 0, 2], vec![1, 2, 0], vec![0, 0, 2]], 100)
        .unwrap();
    let g = Green::compute(&m);
    let f = Forest::new(&m, &g);
    let seq: Vec<u32> = vec![1, 2, 3, 1, 2, 3, 1, 2, 3];
    let base = f.build_leaves(leaves_of(&seq)).unwrap();
    assert!(Arc::ptr_eq(&f.splice(&base, &[]).unwrap(), &base));
    let spliced = f.splice(&base, &[(3, 5, 5), (7, 6, 6)]).unwrap();
    let mut replaced = seq.clone();
    replaced[2] = 5;
    replaced[6] = 6;
    f.verify(&spliced, |s| s).unwrap();
    assert_eq!(spliced.label(), fold(&m, replaced.iter().copied()));
    let adjacent = f.splice(&base, &[(4, 5, 5), (5, 6, 6)]).unwrap();
    f.verify(&adjacent, |s| s).unwrap();
    assert_eq!(adjacent.leaves().len(), 9);
    assert!(f.splice(&base, &[(5, 1, 1), (4, 1, 1)]).is_err());
}

fn seq_strategy() -> impl Strategy<Value = (u64, Vec<u32>, usize, usize)> {
    (any::<u64>(), proptest::collection::vec(any::<u32>(), 1..400), any::<usize>(), any::<usize>())
        .prop_map(|(seed, raw, a, b)| (seed, raw, a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn build_range_splice_invariants((seed, raw, a, b) in seq_strategy()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_monoid(&mut rng, 50);
        let g = Green::compute(&m);
        let f = Forest::new(&m, &g);
        let n = m.len() as u32;
        let seq: Vec<u32> = raw.iter().map(|x| x % n).collect();
        let tree = f.build_leaves(leaves_of(&seq)).unwrap();
        prop_assert!(f.verify(&tree, |s| s).is_ok());
        prop_assert!(tree.height() as usize <= 3 * m.len());
        prop_assert_eq!(tree.label(), fold(&m, seq.iter().copied()));

        let len = seq.len();
        let (i, j) = {
            let (x, y) = (a % len + 1, b % len + 1);
            (x.min(y), x.max(y))
        };
        let sub = f.range(&tree, i, j).unwrap();
        prop_assert!(f.verify(&sub, |s| s).is_ok());
        prop_assert!(sub.height() <= 2 * tree.height() + 1);
        prop_assert_eq!(sub.label(), fold(&m, seq[i - 1..j].iter().copied()));

        let mut reps: Vec<(usize, u32, u32)> = (0..rng.gen_range(0..=6usize.min(len)))
            .map(|_| {
                let x = rng.gen_range(0..n);
                (rng.gen_range(1..=len), x, x)
            })
            .collect();
        reps.sort();
        reps.dedup_by_key(|r| r.0);
        let spliced = f.splice(&tree, &reps).unwrap();
        let mut replaced = seq.clone();
        for &(p, x, _) in &reps {
            replaced[p - 1] = x;
        }
        prop_assert!(f.verify(&spliced, |s| s).is_ok());
        prop_assert!(spliced.height() as usize <= 2 * tree.height() as usize + 3 * m.len() + 1);
        prop_assert_eq!(spliced.label(), fold(&m, replaced.iter().copied()));
    }
}
