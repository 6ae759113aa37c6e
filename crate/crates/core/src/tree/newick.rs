//! Newick-style text for marked trees.
//!
//! ```text
//! tree  := group label ";" | label ";"
//! group := "(" item ("," item)* ")"
//! item  := label | group
//! ```
//!
//! The trailing label is a leaf attached to the outermost group. A group with
//! a single bare label is only meaningful at the top level, where `(1)0;` is
//! the two-leaf tree. Printing always yields the canonical encoding, so
//! `parse_newick(&t.to_string()) == t`.

use std::fmt;

use thiserror::Error;

use super::{Graph, Label, MarkedTree, TreeError};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl ParseError {
    pub(crate) fn at(input: &str, offset: usize, message: impl Into<String>) -> Self {
        let before = &input[..offset.min(input.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        ParseError {
            offset,
            line,
            column,
            message: message.into(),
        }
    }
}

enum Item {
    Leaf(Label),
    Group(Vec<Item>),
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::at(self.src, self.pos, msg)
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(b) if b == c => {
                self.pos += 1;
                Ok(())
            }
            Some(b) => Err(self.err(format!("expected '{}', found '{}'", c as char, b as char))),
            None => Err(self.err(format!("expected '{}', found end of input", c as char))),
        }
    }

    fn label(&mut self) -> Result<Label, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a label"));
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| ParseError::at(self.src, start, "label does not fit in 32 bits"))
    }

    fn group(&mut self) -> Result<Vec<Item>, ParseError> {
        self.expect(b'(')?;
        let mut items = vec![self.item()?];
        loop {
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                    items.push(self.item()?);
                }
                Some(b')') => {
                    self.pos += 1;
                    return Ok(items);
                }
                Some(b) => return Err(self.err(format!("expected ',' or ')', found '{}'", b as char))),
                None => return Err(self.err("unclosed '('")),
            }
        }
    }

    fn item(&mut self) -> Result<Item, ParseError> {
        match self.peek() {
            Some(b'(') => Ok(Item::Group(self.group()?)),
            _ => Ok(Item::Leaf(self.label()?)),
        }
    }
}

fn build(g: &mut Graph, parent: usize, items: &[Item]) {
    for item in items {
        match item {
            Item::Leaf(l) => {
                let v = g.add_vertex(Some(*l));
                g.add_edge(parent, v);
            }
            Item::Group(sub) => {
                let v = g.add_vertex(None);
                g.add_edge(parent, v);
                build(g, v, sub);
            }
        }
    }
}

/// Parses the Newick-style text of a marked tree.
pub fn parse_newick(input: &str) -> Result<MarkedTree, ParseError> {
    let mut p = Parser {
        src: input,
        bytes: input.as_bytes(),
        pos: 0,
    };
    let mut g = Graph::default();
    match p.peek() {
        Some(b'(') => {
            let group_start = p.pos;
            let items = p.group()?;
            let root_label = p.label()?;
            let root = g.add_vertex(Some(root_label));
            match items.as_slice() {
                [Item::Leaf(l)] => {
                    let v = g.add_vertex(Some(*l));
                    g.add_edge(root, v);
                }
                _ => {
                    let hub = g.add_vertex(None);
                    g.add_edge(root, hub);
                    build(&mut g, hub, &items);
                }
            }
            finish(&mut p)?;
            g.canonicalize()
                .map(|(t, _)| t)
                .map_err(|e: TreeError| ParseError::at(input, group_start, e.to_string()))
        }
        _ => {
            let l = p.label()?;
            g.add_vertex(Some(l));
            finish(&mut p)?;
            Ok(g.canonicalize().expect("single leaf is valid").0)
        }
    }
}

fn finish(p: &mut Parser<'_>) -> Result<(), ParseError> {
    p.expect(b';')?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("trailing input after ';'"));
    }
    Ok(())
}
