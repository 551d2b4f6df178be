//! NEWICK reading and writing.
//!
//! Grammar: `tree := subtree ';'`, `subtree := '(' subtree (',' subtree)* ')' [label] | label`.
//! Names containing `(`, `)`, `,`, `;`, `'` or whitespace are single-quoted,
//! with embedded quotes doubled. Whitespace outside quotes is ignored.

use thiserror::Error;

use crate::tree::{NodeId, Shape, Tree, TreeBuilder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NewickErrorKind {
    #[error("empty input")]
    Empty,
    #[error("unbalanced parentheses")]
    Unbalanced,
    #[error("missing terminating semicolon")]
    MissingSemicolon,
    #[error("empty leaf name")]
    EmptyLeafName,
    #[error("unterminated quoted name")]
    UnterminatedQuote,
    #[error("unexpected character {0:?}")]
    Unexpected(char),
    #[error("text after terminating semicolon")]
    TrailingInput,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{kind} at offset {offset}")]
pub struct NewickError {
    pub kind: NewickErrorKind,
    /// Byte offset into the input.
    pub offset: usize,
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    depth: usize,
    builder: TreeBuilder,
}

impl<'a> Parser<'a> {
    fn err(&self, kind: NewickErrorKind) -> NewickError {
        NewickError { kind, offset: self.pos }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn name(&mut self) -> Result<String, NewickError> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        if let Some(quoted) = rest.strip_prefix('\'') {
            let mut out = String::new();
            let mut chars = quoted.char_indices().peekable();
            while let Some((i, c)) = chars.next() {
                if c == '\'' {
                    if let Some(&(_, '\'')) = chars.peek() {
                        chars.next();
                        out.push('\'');
                        continue;
                    }
                    self.pos += 1 + i + 1;
                    return Ok(out);
                }
                out.push(c);
            }
            return Err(self.err(NewickErrorKind::UnterminatedQuote));
        }
        let end = rest
            .find(|c: char| matches!(c, '(' | ')' | ',' | ';' | '\'') || c.is_whitespace())
            .unwrap_or(rest.len());
        self.pos += end;
        Ok(rest[..end].to_string())
    }

    fn subtree(&mut self) -> Result<NodeId, NewickError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                self.depth += 1;
                let mut children = vec![self.subtree()?];
                loop {
                    match self.peek() {
                        Some(',') => {
                            self.pos += 1;
                            children.push(self.subtree()?);
                        }
                        Some(')') => {
                            self.pos += 1;
                            self.depth -= 1;
                            break;
                        }
                        None | Some(';') => return Err(self.err(NewickErrorKind::Unbalanced)),
                        Some(c) => return Err(self.err(NewickErrorKind::Unexpected(c))),
                    }
                }
                let label = self.name()?;
                let label = (!label.is_empty()).then_some(label);
                Ok(self.builder.add(Shape::Internal(label, children)))
            }
            Some(')') if self.depth == 0 => Err(self.err(NewickErrorKind::Unbalanced)),
            _ => {
                let start = self.pos;
                let name = self.name()?;
                if name.is_empty() {
                    self.pos = start;
                    return Err(self.err(NewickErrorKind::EmptyLeafName));
                }
                Ok(self.builder.add(Shape::Leaf(name)))
            }
        }
    }
}

/// Parses a single NEWICK tree. Leaves get positions 1..n left to right.
pub fn parse_newick(text: &str) -> Result<Tree, NewickError> {
    let mut p = Parser {
        text,
        pos: 0,
        depth: 0,
        builder: TreeBuilder::default(),
    };
    if p.peek().is_none() {
        return Err(p.err(NewickErrorKind::Empty));
    }
    let root = p.subtree()?;
    match p.peek() {
        Some(';') => p.pos += 1,
        None => return Err(p.err(NewickErrorKind::MissingSemicolon)),
        Some(')') => return Err(p.err(NewickErrorKind::Unbalanced)),
        Some(c) => return Err(p.err(NewickErrorKind::Unexpected(c))),
    }
    if p.peek().is_some() {
        return Err(p.err(NewickErrorKind::TrailingInput));
    }
    Ok(p.builder.finish(root).expect("parser only builds well-formed arenas"))
}

fn needs_quotes(name: &str) -> bool {
    name.chars()
        .any(|c| matches!(c, '(' | ')' | ',' | ';' | '\'') || c.is_whitespace())
}

fn push_name(out: &mut String, name: &str) {
    if needs_quotes(name) {
        out.push('\'');
        out.push_str(&name.replace('\'', "''"));
        out.push('\'');
    } else {
        out.push_str(name);
    }
}

pub fn serialize_newick(t: &Tree) -> String {
    fn walk(t: &Tree, id: NodeId, out: &mut String) {
        let node = t.node(id);
        if let Some(leaf) = &node.leaf {
            push_name(out, &leaf.token);
            return;
        }
        out.push('(');
        for (i, &c) in node.children.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            walk(t, c, out);
        }
        out.push(')');
        if let Some(label) = &node.label {
            push_name(out, label);
        }
    }
    let mut out = String::new();
    walk(t, t.root(), &mut out);
    out.push(';');
    out
}
