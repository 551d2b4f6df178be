//! Penn Treebank bracketed trees: `(LABEL child ...)`, where a child is a
//! bracketed subtree or a bare token. A label-less outer wrapper around a
//! single tree is stripped.

use thiserror::Error;

use crate::tree::{NodeId, Shape, Tree, TreeBuilder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PtbErrorKind {
    #[error("empty input")]
    Empty,
    #[error("unbalanced parentheses")]
    Unbalanced,
    #[error("bracket with no children")]
    NoChildren,
    #[error("token outside of any bracket")]
    TokenAtTopLevel,
    #[error("more than one tree in record")]
    TrailingInput,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{kind} at offset {offset}")]
pub struct PtbError {
    pub kind: PtbErrorKind,
    pub offset: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok<'a> {
    Open,
    Close,
    Atom(&'a str),
}

fn tokenize(text: &str) -> Vec<(usize, Tok<'_>)> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            '(' => {
                out.push((i, Tok::Open));
                chars.next();
            }
            ')' => {
                out.push((i, Tok::Close));
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let mut end = text.len();
                while let Some(&(j, d)) = chars.peek() {
                    if d == '(' || d == ')' || d.is_whitespace() {
                        end = j;
                        break;
                    }
                    chars.next();
                }
                out.push((i, Tok::Atom(&text[i..end])));
            }
        }
    }
    out
}

struct Parser<'a> {
    toks: Vec<(usize, Tok<'a>)>,
    pos: usize,
    end_offset: usize,
    builder: TreeBuilder,
}

enum Item {
    Node(NodeId),
    /// Label-less bracket around exactly one subtree.
    Wrapper(NodeId),
}

impl<'a> Parser<'a> {
    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_offset, |t| t.0)
    }

    fn err(&self, kind: PtbErrorKind) -> PtbError {
        PtbError {
            kind,
            offset: self.offset(),
        }
    }

    /// Parses a bracket starting at the current `(`.
    fn bracket(&mut self) -> Result<Item, PtbError> {
        let open_at = self.offset();
        self.pos += 1;
        let label = match self.toks.get(self.pos) {
            Some(&(_, Tok::Atom(a))) => {
                self.pos += 1;
                Some(a.to_string())
            }
            _ => None,
        };
        let mut children = Vec::new();
        loop {
            match self.toks.get(self.pos) {
                Some((_, Tok::Open)) => {
                    let id = match self.bracket()? {
                        Item::Node(id) | Item::Wrapper(id) => id,
                    };
                    children.push(id);
                }
                Some(&(_, Tok::Atom(a))) => {
                    self.pos += 1;
                    children.push(self.builder.add(Shape::Leaf(a.to_string())));
                }
                Some((_, Tok::Close)) => {
                    self.pos += 1;
                    break;
                }
                None => return Err(self.err(PtbErrorKind::Unbalanced)),
            }
        }
        if children.is_empty() {
            return Err(PtbError {
                kind: PtbErrorKind::NoChildren,
                offset: open_at,
            });
        }
        if label.is_none() && children.len() == 1 {
            return Ok(Item::Wrapper(children[0]));
        }
        Ok(Item::Node(self.builder.add(Shape::Internal(label, children))))
    }
}

/// Parses exactly one bracketed tree, keeping all labels (including
/// part-of-speech preterminals).
pub fn parse_ptb(text: &str) -> Result<Tree, PtbError> {
    let mut p = Parser {
        toks: tokenize(text),
        pos: 0,
        end_offset: text.len(),
        builder: TreeBuilder::default(),
    };
    let root = match p.toks.first() {
        None => return Err(p.err(PtbErrorKind::Empty)),
        Some((_, Tok::Atom(_))) => return Err(p.err(PtbErrorKind::TokenAtTopLevel)),
        Some((_, Tok::Close)) => return Err(p.err(PtbErrorKind::Unbalanced)),
        Some((_, Tok::Open)) => match p.bracket()? {
            Item::Node(id) | Item::Wrapper(id) => id,
        },
    };
    match p.toks.get(p.pos) {
        None => {}
        Some((_, Tok::Close)) => return Err(p.err(PtbErrorKind::Unbalanced)),
        Some((_, Tok::Atom(_))) => return Err(p.err(PtbErrorKind::TokenAtTopLevel)),
        Some((_, Tok::Open)) => return Err(p.err(PtbErrorKind::TrailingInput)),
    }
    Ok(p.builder.finish(root).expect("parser only builds well-formed arenas"))
}

/// One top-level record of a bracketed stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PtbRecord<'a> {
    pub text: &'a str,
    /// Byte offset of the record in the stream.
    pub offset: usize,
}

/// Splits a stream into records by parenthesis balance. Records may span
/// lines. A stray token or `)` at depth zero becomes its own record so that
/// it fails to parse instead of vanishing.
pub fn split_ptb_records(text: &str) -> Vec<PtbRecord<'_>> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = None;
    for (i, tok) in tokenize(text) {
        match tok {
            Tok::Open => {
                if depth == 0 {
                    start = Some(i);
                }
                depth += 1;
            }
            Tok::Close => {
                if depth == 0 {
                    out.push(PtbRecord {
                        text: &text[i..i + 1],
                        offset: i,
                    });
                    continue;
                }
                depth -= 1;
                if depth == 0 {
                    let s = start.take().expect("open bracket recorded");
                    out.push(PtbRecord {
                        text: &text[s..=i],
                        offset: s,
                    });
                }
            }
            Tok::Atom(a) => {
                if depth == 0 {
                    out.push(PtbRecord { text: a, offset: i });
                }
            }
        }
    }
    if let Some(s) = start {
        out.push(PtbRecord {
            text: &text[s..],
            offset: s,
        });
    }
    out
}

/// Parses every record of a bracketed stream; errors carry offsets relative
/// to the whole stream.
pub fn parse_ptb_stream(text: &str) -> Vec<Result<Tree, PtbError>> {
    split_ptb_records(text)
        .into_iter()
        .map(|r| {
            parse_ptb(r.text).map_err(|e| PtbError {
                kind: e.kind,
                offset: e.offset + r.offset,
            })
        })
        .collect()
}
