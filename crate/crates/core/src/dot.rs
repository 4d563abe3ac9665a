//! Graphviz export: one rank per level, edges labelled by in-fiber rank.

use std::fmt::Write;

use crate::diagram::BratteliDiagram;
use crate::error::Result;

/// DOT text for levels `0..=depth`.
pub fn to_dot(d: &BratteliDiagram, depth: usize) -> Result<String> {
    let mut out = String::new();
    out.push_str("digraph bratteli {\n  rankdir=TB;\n  node [shape=circle];\n");
    for n in 0..=depth {
        let names = d.vertex_names(n)?;
        let ids: Vec<String> = (0..names.len()).map(|i| format!("v{n}_{i}")).collect();
        write!(out, "  {{ rank=same;").unwrap();
        for id in &ids {
            write!(out, " {id};").unwrap();
        }
        out.push_str(" }\n");
        for (id, name) in ids.iter().zip(names) {
            writeln!(out, "  {id} [label={}];", quote(name)).unwrap();
        }
    }
    for n in 1..=depth {
        for (e, edge) in d.edges(n)?.iter().enumerate() {
            let rank = d.edge_rank(n, e)?;
            writeln!(out, "  v{}_{} -> v{n}_{} [label=\"{rank}\"];", n - 1, edge.src, edge.dst).unwrap();
        }
    }
    out.push_str("}\n");
    Ok(out)
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::fibonacci;

    #[test]
    fn labels_ranks() {
        let dot = to_dot(&fibonacci(), 2).unwrap();
        assert!(dot.contains("v1_1 -> v2_0 [label=\"1\"];"));
        assert!(dot.contains("{ rank=same; v2_0; v2_1; }"));
    }
}
