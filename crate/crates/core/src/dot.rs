//! Graphviz DOT output for Hasse diagrams, configuration spaces and
//! orientations.

use std::fmt::Write;

use crate::efg::{ConfigSpace, FiringGraph, Orientation};
use crate::poset::Poset;

/// What to draw.
#[derive(Debug, Clone, Copy)]
pub enum Diagram<'a> {
    /// Cover relation, greater elements on top.
    Hasse(&'a Poset),
    /// Successor steps labelled by the fired vertex, initial configuration on
    /// top.
    Space(&'a ConfigSpace),
    /// A single orientation; the sink is drawn as a filled square.
    Orientation(&'a FiringGraph, &'a Orientation),
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn emit_diagram(diagram: Diagram<'_>) -> String {
    let mut out = String::new();
    match diagram {
        Diagram::Hasse(p) => {
            out.push_str("digraph hasse {\n  rankdir=BT;\n  node [shape=plaintext];\n");
            for (i, label) in p.labels().iter().enumerate() {
                let _ = writeln!(out, "  n{i} [label={}];", quote(label));
            }
            for &(i, j) in p.covers() {
                let _ = writeln!(out, "  n{i} -> n{j} [arrowhead=none];");
            }
        }
        Diagram::Space(s) => {
            out.push_str("digraph space {\n  rankdir=TB;\n  node [shape=box];\n");
            for c in 0..s.len() {
                let label = format!("c{c}\n{}", s.shot_display(c));
                let _ = writeln!(out, "  c{c} [label={}];", quote(&label));
            }
            for step in s.successors() {
                let _ = writeln!(
                    out,
                    "  c{} -> c{} [label={}];",
                    step.from,
                    step.to,
                    quote(s.graph().vertex(step.vertex))
                );
            }
        }
        Diagram::Orientation(g, c) => {
            out.push_str("digraph orientation {\n  node [shape=circle];\n");
            for (v, label) in g.vertices().iter().enumerate() {
                if v == g.sink() {
                    let _ = writeln!(
                        out,
                        "  v{v} [label={}, shape=square, style=filled, fillcolor=black, fontcolor=white];",
                        quote(label)
                    );
                } else {
                    let _ = writeln!(out, "  v{v} [label={}];", quote(label));
                }
            }
            for e in 0..g.edges().len() {
                let (t, h) = c.arc(g, e);
                let _ = writeln!(out, "  v{t} -> v{h};");
            }
        }
    }
    out.push_str("}\n");
    out
}
