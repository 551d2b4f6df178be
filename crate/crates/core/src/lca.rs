//! Lowest common ancestor queries via Euler tour and a sparse table of
//! minimum-depth positions. O(N log N) preprocessing, O(1) per query.

use crate::tree::{NodeId, Tree};

pub struct Lca {
    first: Vec<usize>,
    euler: Vec<NodeId>,
    depth: Vec<usize>,
    table: Vec<Vec<u32>>,
}

impl Lca {
    pub fn new(t: &Tree) -> Self {
        let depth = t.depths();
        let mut euler = Vec::with_capacity(2 * t.node_count());
        let mut first = vec![usize::MAX; t.node_count()];
        // (node, next child index)
        let mut stack = vec![(t.root(), 0usize)];
        while let Some(top) = stack.last_mut() {
            let (id, next) = *top;
            if first[id] == usize::MAX {
                first[id] = euler.len();
            }
            euler.push(id);
            let children = &t.node(id).children;
            if next < children.len() {
                top.1 += 1;
                stack.push((children[next], 0));
            } else {
                stack.pop();
            }
        }
        let len = euler.len();
        let mut table = vec![(0..len as u32).collect::<Vec<u32>>()];
        let mut span = 1;
        while span * 2 <= len {
            let prev = table.last().expect("level 0 present");
            let row = (0..=len - span * 2)
                .map(|i| {
                    let (a, b) = (prev[i], prev[i + span]);
                    if depth[euler[a as usize]] <= depth[euler[b as usize]] {
                        a
                    } else {
                        b
                    }
                })
                .collect();
            table.push(row);
            span *= 2;
        }
        Lca {
            first,
            euler,
            depth,
            table,
        }
    }

    pub fn lca(&self, u: NodeId, v: NodeId) -> NodeId {
        let (mut l, mut r) = (self.first[u], self.first[v]);
        if l > r {
            std::mem::swap(&mut l, &mut r);
        }
        let k = (r - l + 1).ilog2() as usize;
        let a = self.table[k][l] as usize;
        let b = self.table[k][r + 1 - (1 << k)] as usize;
        let (na, nb) = (self.euler[a], self.euler[b]);
        if self.depth[na] <= self.depth[nb] {
            na
        } else {
            nb
        }
    }

    pub fn depth(&self, u: NodeId) -> usize {
        self.depth[u]
    }

    /// Edge count on the path between `u` and `v`.
    pub fn distance(&self, u: NodeId, v: NodeId) -> usize {
        self.depth[u] + self.depth[v] - 2 * self.depth[self.lca(u, v)]
    }
}
