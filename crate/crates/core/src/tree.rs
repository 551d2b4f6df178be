//! Rooted, ordered trees over position-indexed leaves.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::bitset::LeafSet;

pub type NodeId = usize;

/// A word of the sentence: its text and its 1-based surface position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leaf {
    pub token: String,
    pub position: usize,
}

#[derive(Clone, Debug)]
pub struct Node {
    pub label: Option<String>,
    pub children: Vec<NodeId>,
    pub leaf: Option<Leaf>,
}

impl Node {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("tree has no nodes")]
    Empty,
    #[error("root id {0} out of range")]
    BadRoot(NodeId),
    #[error("node {0} is referenced as a child more than once or is a child of itself")]
    MultipleParents(NodeId),
    #[error("node {0} is not reachable from the root")]
    Unreachable(NodeId),
    #[error("child id {0} out of range")]
    BadChild(NodeId),
    #[error("internal node {0} carries a leaf token")]
    InternalWithToken(NodeId),
}

/// Rooted ordered tree. Immutable once built; leaf positions are assigned
/// left to right at construction time.
#[derive(Clone, Debug)]
pub struct Tree {
    nodes: Vec<Node>,
    root: NodeId,
    leaf_order: Vec<NodeId>,
}

/// Structural description of a node used when building a tree bottom-up.
pub(crate) enum Shape {
    Leaf(String),
    Internal(Option<String>, Vec<NodeId>),
}

/// Arena builder shared by the parsers and the preprocessing pass.
#[derive(Default)]
pub(crate) struct TreeBuilder {
    nodes: Vec<Node>,
}

impl TreeBuilder {
    pub(crate) fn add(&mut self, shape: Shape) -> NodeId {
        let node = match shape {
            Shape::Leaf(token) => Node {
                label: None,
                children: Vec::new(),
                leaf: Some(Leaf { token, position: 0 }),
            },
            Shape::Internal(label, children) => Node {
                label,
                children,
                leaf: None,
            },
        };
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    pub(crate) fn finish(self, root: NodeId) -> Result<Tree, TreeError> {
        Tree::from_nodes(self.nodes, root)
    }
}

impl Tree {
    /// Validates the arena and assigns leaf positions 1..n in surface order.
    ///
    /// A node with no children must carry a leaf token; a token given on an
    /// internal node is rejected.
    pub fn from_nodes(mut nodes: Vec<Node>, root: NodeId) -> Result<Tree, TreeError> {
        if nodes.is_empty() {
            return Err(TreeError::Empty);
        }
        if root >= nodes.len() {
            return Err(TreeError::BadRoot(root));
        }
        let mut seen = vec![false; nodes.len()];
        seen[root] = true;
        let mut leaf_order = Vec::new();
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            let node = &nodes[id];
            if node.children.is_empty() {
                leaf_order.push(id);
                continue;
            }
            if node.leaf.is_some() {
                return Err(TreeError::InternalWithToken(id));
            }
            for &c in node.children.iter().rev() {
                if c >= nodes.len() {
                    return Err(TreeError::BadChild(c));
                }
                if seen[c] {
                    return Err(TreeError::MultipleParents(c));
                }
                seen[c] = true;
                stack.push(c);
            }
        }
        if let Some(id) = seen.iter().position(|s| !s) {
            return Err(TreeError::Unreachable(id));
        }
        for (i, &id) in leaf_order.iter().enumerate() {
            let leaf = nodes[id].leaf.get_or_insert_with(|| Leaf {
                token: String::new(),
                position: 0,
            });
            leaf.position = i + 1;
        }
        Ok(Tree {
            nodes,
            root,
            leaf_order,
        })
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Leaf node ids in surface order.
    pub fn leaf_order(&self) -> &[NodeId] {
        &self.leaf_order
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_order.len()
    }

    /// Leaf token at 1-based `position`.
    pub fn leaf_token(&self, position: usize) -> Option<&str> {
        let id = *self.leaf_order.get(position.checked_sub(1)?)?;
        self.nodes[id].leaf.as_ref().map(|l| l.token.as_str())
    }

    pub fn leaf_tokens(&self) -> impl Iterator<Item = &str> {
        self.leaf_order
            .iter()
            .map(|&id| self.nodes[id].leaf.as_ref().map_or("", |l| l.token.as_str()))
    }

    pub fn internal_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).filter(|&id| !self.nodes[id].is_leaf())
    }

    /// Parent of every node; `None` for the root.
    pub fn parents(&self) -> Vec<Option<NodeId>> {
        let mut parents = vec![None; self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                parents[c] = Some(id);
            }
        }
        parents
    }

    /// Nodes in post-order (children before parents, left to right).
    pub fn postorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((id, expanded)) = stack.pop() {
            if expanded {
                out.push(id);
                continue;
            }
            stack.push((id, true));
            for &c in self.nodes[id].children.iter().rev() {
                stack.push((c, false));
            }
        }
        out
    }

    /// Depth of every node, root at 0.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0; self.nodes.len()];
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            for &c in &self.nodes[id].children {
                depth[c] = depth[id] + 1;
                stack.push(c);
            }
        }
        depth
    }

    /// Leaf set below every node, with leaves numbered by `index[position - 1]`.
    pub(crate) fn clades(&self, index: &[usize], universe: usize) -> Vec<LeafSet> {
        let mut sets: Vec<Option<LeafSet>> = vec![None; self.nodes.len()];
        for id in self.postorder() {
            let node = &self.nodes[id];
            let mut set = LeafSet::empty(universe);
            if let Some(leaf) = &node.leaf {
                set.insert(index[leaf.position - 1]);
            } else {
                for &c in &node.children {
                    set.union_with(sets[c].as_ref().expect("postorder visits children first"));
                }
            }
            sets[id] = Some(set);
        }
        sets.into_iter().map(|s| s.expect("every node visited")).collect()
    }

    /// True when some internal node has exactly one child.
    pub fn has_unary_nodes(&self) -> bool {
        self.nodes.iter().any(|n| n.children.len() == 1)
    }

    pub fn stats(&self) -> TreeStats {
        tree_stats(self)
    }
}

/// Structural equality: same shape, labels, tokens and leaf positions,
/// independent of arena layout.
impl PartialEq for Tree {
    fn eq(&self, other: &Tree) -> bool {
        fn same(a: &Tree, x: NodeId, b: &Tree, y: NodeId) -> bool {
            let (nx, ny) = (&a.nodes[x], &b.nodes[y]);
            nx.label == ny.label
                && nx.leaf == ny.leaf
                && nx.children.len() == ny.children.len()
                && nx
                    .children
                    .iter()
                    .zip(&ny.children)
                    .all(|(&cx, &cy)| same(a, cx, b, cy))
        }
        same(self, self.root, other, other.root)
    }
}

impl Eq for Tree {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TreeStats {
    /// Leaf count.
    pub n: usize,
    /// Internal nodes.
    pub num_internal: usize,
    /// All edges.
    pub num_edges: usize,
    /// Edges with both endpoints internal.
    pub num_internal_edges: usize,
    /// Largest child count of any internal node.
    pub max_degree: usize,
}

pub fn tree_stats(t: &Tree) -> TreeStats {
    let parents = t.parents();
    let mut stats = TreeStats {
        n: t.leaf_count(),
        num_internal: 0,
        num_edges: 0,
        num_internal_edges: 0,
        max_degree: 0,
    };
    for (id, node) in t.nodes.iter().enumerate() {
        if parents[id].is_some() {
            stats.num_edges += 1;
            if !node.is_leaf() {
                stats.num_internal_edges += 1;
            }
        }
        if !node.is_leaf() {
            stats.num_internal += 1;
            stats.max_degree = stats.max_degree.max(node.children.len());
        }
    }
    stats
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UniverseError {
    #[error("leaf counts differ ({first} vs {second}); first unmatched position is {}", first.min(second) + 1)]
    LeafCount { first: usize, second: usize },
    #[error("leaf {name:?} at position {position} of the second tree has no counterpart in the first")]
    MissingLeaf { name: String, position: usize },
}

/// Mapping of both trees' leaves onto one shared index space `0..n`.
///
/// The shared index is the first tree's surface position minus one. When
/// both trees have pairwise distinct leaf names the second tree is matched by
/// name; otherwise it is matched by surface position.
#[derive(Clone, Debug)]
pub struct LeafAlignment {
    pub n: usize,
    pub first: Vec<usize>,
    pub second: Vec<usize>,
}

fn unique_names(t: &Tree) -> Option<HashMap<&str, usize>> {
    let mut map = HashMap::with_capacity(t.leaf_count());
    for (i, tok) in t.leaf_tokens().enumerate() {
        if map.insert(tok, i).is_some() {
            return None;
        }
    }
    Some(map)
}

pub fn align_leaves(first: &Tree, second: &Tree) -> Result<LeafAlignment, UniverseError> {
    let n = first.leaf_count();
    if n != second.leaf_count() {
        return Err(UniverseError::LeafCount {
            first: n,
            second: second.leaf_count(),
        });
    }
    let identity: Vec<usize> = (0..n).collect();
    let second_index = match (unique_names(first), unique_names(second)) {
        (Some(names), Some(_)) => second
            .leaf_tokens()
            .enumerate()
            .map(|(i, tok)| {
                names.get(tok).copied().ok_or_else(|| UniverseError::MissingLeaf {
                    name: tok.to_string(),
                    position: i + 1,
                })
            })
            .collect::<Result<Vec<_>, _>>()?,
        _ => identity.clone(),
    };
    Ok(LeafAlignment {
        n,
        first: identity,
        second: second_index,
    })
}
