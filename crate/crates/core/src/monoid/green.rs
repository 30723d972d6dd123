use petgraph::algo::kosaraju_scc;
use petgraph::graph::DiGraph;

use super::FiniteMonoid;

/// R-, L- and J-class ids of every element, computed as strongly connected
/// components of the Cayley graphs over the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Green {
    pub r: Vec<u32>,
    pub l: Vec<u32>,
    pub j: Vec<u32>,
}

fn components(n: usize, edges: impl Iterator<Item = (u32, u32)>) -> Vec<u32> {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(n, 0);
    for _ in 0..n {
        g.add_node(());
    }
    g.extend_with_edges(edges);
    let mut class = vec![0u32; n];
    for (id, comp) in kosaraju_scc(&g).into_iter().enumerate() {
        for v in comp {
            class[v.index()] = id as u32;
        }
    }
    class
}

impl Green {
    pub fn compute<M: FiniteMonoid>(m: &M) -> Green {
        let n = m.len() as u32;
        let gens = m.generators();
        let right = || (0..n).flat_map(move |a| gens.iter().map(move |&g| (a, m.mul(a, g))));
        let left = || (0..n).flat_map(move |a| gens.iter().map(move |&g| (a, m.mul(g, a))));
        Green {
            r: components(n as usize, right()),
            l: components(n as usize, left()),
            j: components(n as usize, right().chain(left())),
        }
    }

    pub fn same_j(&self, a: u32, b: u32) -> bool {
        self.j[a as usize] == self.j[b as usize]
    }

    pub fn same_r(&self, a: u32, b: u32) -> bool {
        self.r[a as usize] == self.r[b as usize]
    }
}
