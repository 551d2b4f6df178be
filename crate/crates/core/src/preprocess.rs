//! Turns a labeled parse into the unlabeled tree the distance measures use:
//! labels are dropped and every node with a single child is spliced out,
//! which removes part-of-speech preterminals and collapses unary chains.

use thiserror::Error;

use crate::tree::{NodeId, Shape, Tree, TreeBuilder};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PreprocessOptions {
    /// Rename leaves to `token_position` so names are unique in the sentence.
    pub leaf_suffix: bool,
}

impl Default for PreprocessOptions {
    fn default() -> Self {
        PreprocessOptions { leaf_suffix: true }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PreprocessError {
    #[error("tree collapses to the single leaf {token:?}")]
    Degenerate { token: String },
}

pub fn preprocess(t: &Tree, opts: PreprocessOptions) -> Result<Tree, PreprocessError> {
    let mut builder = TreeBuilder::default();
    let mut built: Vec<Option<NodeId>> = vec![None; t.node_count()];
    for id in t.postorder() {
        let node = t.node(id);
        let new_id = if let Some(leaf) = &node.leaf {
            let name = if opts.leaf_suffix {
                format!("{}_{}", leaf.token, leaf.position)
            } else {
                leaf.token.clone()
            };
            builder.add(Shape::Leaf(name))
        } else if node.children.len() == 1 {
            built[node.children[0]].expect("child built before parent")
        } else {
            let kids = node
                .children
                .iter()
                .map(|&c| built[c].expect("child built before parent"))
                .collect();
            builder.add(Shape::Internal(None, kids))
        };
        built[id] = Some(new_id);
    }
    if t.leaf_count() == 1 {
        let token = t.leaf_tokens().next().unwrap_or_default().to_string();
        return Err(PreprocessError::Degenerate { token });
    }
    let root = built[t.root()].expect("root built");
    Ok(builder.finish(root).expect("spliced arena is a tree"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newick::{parse_newick, serialize_newick};
    use crate::ptb::parse_ptb;

    fn convert(ptb: &str) -> Result<String, PreprocessError> {
        preprocess(&parse_ptb(ptb).unwrap(), PreprocessOptions::default()).map(|t| serialize_newick(&t))
    }

    #[test]
    fn removes_pos_and_unary() {
        assert_eq!(
            convert("(S (NP (DT the) (NN cat)) (VP (VBD sat)))").unwrap(),
            "((the_1,cat_2),sat_3);"
        );
        assert_eq!(convert("(X (A a) (B b))").unwrap(), "(a_1,b_2);");
    }

    #[test]
    fn degenerate_chain() {
        assert_eq!(
            convert("(X (Y (Z (A a))))"),
            Err(PreprocessError::Degenerate { token: "a".into() })
        );
    }

    #[test]
    fn without_suffix_and_unary_root() {
        let t = parse_ptb("(ROOT (S (NP (DT the)) (VP (V saw) (NP (DT the) (NN dog)))))").unwrap();
        let out = preprocess(&t, PreprocessOptions { leaf_suffix: false }).unwrap();
        assert_eq!(serialize_newick(&out), "(the,(saw,(the,dog)));");
        assert!(!out.has_unary_nodes());
    }

    #[test]
    fn newick_unary_nodes_collapse() {
        let t = parse_newick("(((a)),(b,(c)));").unwrap();
        let out = preprocess(&t, PreprocessOptions { leaf_suffix: false }).unwrap();
        assert_eq!(serialize_newick(&out), "(a,(b,c));");
    }
}
