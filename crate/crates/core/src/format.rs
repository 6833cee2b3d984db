//! Line-oriented text documents for posets and games.
//!
//! ```text
//! poset
//! elements: a b c
//! covers: a<c b<c
//! ```
//!
//! ```text
//! efg
//! vertices: a b s
//! sink: s
//! edges: s-a s-b
//! orientation: s->a s->b
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. The header comes
//! first; keyed lines may follow in any order but each appears exactly once.
//! Labels are whitespace-free tokens without `<`, `-` or `>`.

use std::collections::HashMap;

use thiserror::Error;

use crate::efg::{EfgError, EfgInstance, FiringGraph, Orientation};
use crate::poset::{build_poset, Poset, PosetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: unknown vertex `{label}`")]
    UnknownVertex { line: usize, label: String },
    #[error("line {line}: {message}")]
    OrientationMismatch { line: usize, message: String },
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Efg(#[from] EfgError),
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// A whitespace-separated token with its 1-based position.
#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl<'a> Token<'a> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        syntax(self.line, self.column, message)
    }
}

struct Field<'a> {
    line: usize,
    tokens: Vec<Token<'a>>,
}

pub fn is_valid_label(label: &str) -> bool {
    !label.is_empty()
        && !label
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '<' | '-' | '>'))
}

fn check_label(tok: Token<'_>, text: &str) -> Result<(), ParseError> {
    if is_valid_label(text) {
        Ok(())
    } else {
        Err(tok.error(format!("invalid label `{text}`")))
    }
}

/// Splits a document into its header line number and keyed fields.
fn read_fields<'a>(
    text: &'a str,
    header: &str,
    keys: &[&str],
) -> Result<HashMap<&'static str, Field<'a>>, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });

    match lines.next() {
        Some((_, l)) if l.trim() == header => {}
        Some((n, l)) => {
            let column = l.chars().take_while(|c| c.is_whitespace()).count() + 1;
            return Err(syntax(n, column, format!("expected header `{header}`")));
        }
        None => return Err(syntax(1, 1, format!("expected header `{header}`"))),
    }

    let mut fields: HashMap<&'static str, Field<'a>> = HashMap::new();
    for (n, l) in lines {
        let Some(colon) = l.find(':') else {
            return Err(syntax(n, 1, "expected `key: values`"));
        };
        let key = l[..colon].trim();
        let Some(&known) = KEYS.iter().find(|k| **k == key && keys.contains(k)) else {
            return Err(syntax(n, 1, format!("unexpected key `{key}`")));
        };
        if fields.contains_key(known) {
            return Err(syntax(n, 1, format!("duplicate key `{key}`")));
        }
        let rest = &l[colon + 1..];
        let base_column = l[..colon + 1].chars().count() + 1;
        let mut tokens = Vec::new();
        let mut offset = 0usize;
        for piece in rest.split_whitespace() {
            let start = offset + rest[offset..].find(piece).unwrap_or(0);
            tokens.push(Token {
                text: piece,
                line: n,
                column: base_column + rest[..start].chars().count(),
            });
            offset = start + piece.len();
        }
        fields.insert(known, Field { line: n, tokens });
    }
    for key in keys {
        if !fields.contains_key(key) {
            let last = text.lines().count().max(1);
            return Err(syntax(last, 1, format!("missing `{key}:` line")));
        }
    }
    Ok(fields)
}

const KEYS: [&str; 6] = [
    "elements",
    "covers",
    "vertices",
    "sink",
    "edges",
    "orientation",
];

/// Splits `a<b`, `a-b` or `a->b` into its two labels.
fn split_pair<'a>(tok: Token<'a>, sep: &str) -> Result<(&'a str, &'a str), ParseError> {
    let Some((a, b)) = tok.text.split_once(sep) else {
        return Err(tok.error(format!("expected `a{sep}b`, found `{}`", tok.text)));
    };
    check_label(tok, a)?;
    check_label(tok, b)?;
    Ok((a, b))
}

pub fn parse_poset(text: &str) -> Result<Poset, ParseError> {
    let fields = read_fields(text, "poset", &["elements", "covers"])?;
    let mut elements = Vec::new();
    for tok in &fields["elements"].tokens {
        check_label(*tok, tok.text)?;
        elements.push(tok.text);
    }
    let covers = fields["covers"]
        .tokens
        .iter()
        .map(|tok| split_pair(*tok, "<"))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(build_poset(&elements, &covers)?)
}

pub fn emit_poset(p: &Poset) -> String {
    let covers: Vec<String> = p
        .covers_by_label()
        .into_iter()
        .map(|(a, b)| format!("{a}<{b}"))
        .collect();
    format!(
        "poset\n{}\n{}\n",
        keyed("elements", p.labels().iter().map(String::as_str)),
        keyed("covers", covers.iter().map(String::as_str)),
    )
}

fn keyed<'a>(key: &str, values: impl Iterator<Item = &'a str>) -> String {
    let mut line = format!("{key}:");
    for v in values {
        line.push(' ');
        line.push_str(v);
    }
    line
}

pub fn parse_efg(text: &str) -> Result<EfgInstance, ParseError> {
    let fields = read_fields(text, "efg", &["vertices", "sink", "edges", "orientation"])?;
    let mut vertices = Vec::new();
    for tok in &fields["vertices"].tokens {
        check_label(*tok, tok.text)?;
        vertices.push(tok.text.to_owned());
    }
    let index = |line: usize, label: &str| {
        vertices
            .iter()
            .position(|v| v == label)
            .ok_or_else(|| ParseError::UnknownVertex {
                line,
                label: label.to_owned(),
            })
    };

    let sink_field = &fields["sink"];
    let sink = match sink_field.tokens.as_slice() {
        [tok] => {
            check_label(*tok, tok.text)?;
            index(tok.line, tok.text)?
        }
        _ => return Err(syntax(sink_field.line, 1, "expected exactly one sink")),
    };

    let mut edges = Vec::new();
    for tok in &fields["edges"].tokens {
        // `a->b` in the edge list would otherwise split as `a` and `>b`.
        if tok.text.contains("->") {
            return Err(tok.error("edges are written `a-b`"));
        }
        let (a, b) = split_pair(*tok, "-")?;
        edges.push((index(tok.line, a)?, index(tok.line, b)?));
    }
    let graph = FiringGraph::new(vertices.clone(), edges, sink)?;

    let mut edge_of: HashMap<(usize, usize), usize> = HashMap::new();
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        edge_of.insert((u, v), e);
        edge_of.insert((v, u), e);
    }
    let orient_field = &fields["orientation"];
    let mut direction: Vec<Option<bool>> = vec![None; graph.edges().len()];
    for tok in &orient_field.tokens {
        let (a, b) = split_pair(*tok, "->")?;
        let (u, v) = (index(tok.line, a)?, index(tok.line, b)?);
        let Some(&e) = edge_of.get(&(u, v)) else {
            return Err(ParseError::OrientationMismatch {
                line: tok.line,
                message: format!("direction `{}` has no matching edge", tok.text),
            });
        };
        if direction[e].is_some() {
            return Err(ParseError::OrientationMismatch {
                line: tok.line,
                message: format!("edge `{a}-{b}` is directed twice"),
            });
        }
        direction[e] = Some(graph.edges()[e] != (u, v));
    }
    if let Some(e) = direction.iter().position(Option::is_none) {
        let (u, v) = graph.edges()[e];
        return Err(ParseError::OrientationMismatch {
            line: orient_field.line,
            message: format!(
                "edge `{}-{}` has no direction",
                graph.vertex(u),
                graph.vertex(v)
            ),
        });
    }
    let reversed: Vec<bool> = direction.into_iter().map(|d| d.unwrap_or(false)).collect();
    Ok(EfgInstance::new(
        graph,
        Orientation::from_reversed(&reversed),
    )?)
}

pub fn emit_efg(e: &EfgInstance) -> String {
    emit_game(e.graph(), e.initial())
}

/// The document for `g` with `orientation` as its initial configuration.
pub fn emit_game(g: &FiringGraph, orientation: &Orientation) -> String {
    let edges: Vec<String> = g
        .edges()
        .iter()
        .map(|&(u, v)| format!("{}-{}", g.vertex(u), g.vertex(v)))
        .collect();
    let arcs: Vec<String> = (0..g.edges().len())
        .map(|e| {
            let (t, h) = orientation.arc(g, e);
            format!("{}->{}", g.vertex(t), g.vertex(h))
        })
        .collect();
    format!(
        "efg\n{}\nsink: {}\n{}\n{}\n",
        keyed("vertices", g.vertices().iter().map(String::as_str)),
        g.vertex(g.sink()),
        keyed("edges", edges.iter().map(String::as_str)),
        keyed("orientation", arcs.iter().map(String::as_str)),
    )
}
