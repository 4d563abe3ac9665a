//! JSON files for diagrams and premorphisms, with a canonical writer.
//!
//! Diagram file:
//! `{"presentation": {"kind": "finite", "depth": N} | {"kind": "eventually-periodic", "prefix": p, "period": q},
//!   "levels": [{"vertices": [...]}, ...], "edges": [[{"src": "a", "dst": "b"}, ...], ...]}`
//! where `edges[n-1]` is `E_n` and the array order of the edges into a vertex
//! is their rank order.
//!
//! Premorphism file: `{"source", "target", "levelMap", "edgeSets"}` plus the
//! optional `"edgePeriod"` and `"ordered"`. Source and target are inline
//! diagrams or paths relative to the premorphism file; `levelMap` is an
//! array or `{"affine": [a, b], "prefix": [0, ...]}`.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::diagram::{BratteliDiagram, Edge, Presentation};
use crate::edgeset::EdgeSet;
use crate::error::{Error, Result};
use crate::morphism::{LevelMap, Premorphism};
use crate::order::OrderedBratteliDiagram;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct PresentationJson {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    prefix: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    period: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct LevelJson {
    vertices: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct EdgeJson {
    src: String,
    dst: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct DiagramJson {
    presentation: PresentationJson,
    levels: Vec<LevelJson>,
    edges: Vec<Vec<EdgeJson>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum DiagramRef {
    File(String),
    Inline(DiagramJson),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum LevelMapJson {
    Explicit(Vec<usize>),
    Affine {
        affine: (usize, i64),
        #[serde(default, skip_serializing_if = "Option::is_none")]
        prefix: Option<Vec<usize>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct PremorphismJson {
    source: DiagramRef,
    target: DiagramRef,
    level_map: LevelMapJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edge_period: Option<usize>,
    #[serde(default = "yes")]
    ordered: bool,
    edge_sets: Vec<Vec<EdgeJson>>,
}

fn yes() -> bool {
    true
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn canonical<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("in-memory values serialize");
    s.push('\n');
    s
}

fn presentation_from(p: &PresentationJson) -> Result<Presentation> {
    match (p.kind.as_str(), p.depth, p.prefix, p.period) {
        ("finite", Some(depth), None, None) => Ok(Presentation::Finite { depth }),
        ("eventually-periodic", None, Some(prefix), Some(period)) => Ok(Presentation::EventuallyPeriodic { prefix, period }),
        _ => Err(Error::MalformedDiagram(format!(
            "presentation must be {{\"kind\":\"finite\",\"depth\":N}} or {{\"kind\":\"eventually-periodic\",\"prefix\":p,\"period\":q}}, got {p:?}"
        ))),
    }
}

fn presentation_json(p: Presentation) -> PresentationJson {
    match p {
        Presentation::Finite { depth } => {
            PresentationJson { kind: "finite".into(), depth: Some(depth), prefix: None, period: None }
        }
        Presentation::EventuallyPeriodic { prefix, period } => PresentationJson {
            kind: "eventually-periodic".into(),
            depth: None,
            prefix: Some(prefix),
            period: Some(period),
        },
    }
}

fn index_of(names: &[String], name: &str, level: usize, role: &str) -> Result<usize> {
    names
        .iter()
        .position(|v| v == name)
        .ok_or_else(|| Error::MalformedDiagram(format!("{role} {name:?} is not a vertex of level {level}")))
}

fn diagram_from(j: &DiagramJson) -> Result<BratteliDiagram> {
    let presentation = presentation_from(&j.presentation)?;
    let vertices: Vec<Vec<String>> = j.levels.iter().map(|l| l.vertices.clone()).collect();
    if j.edges.len() + 1 != vertices.len() {
        return Err(Error::MalformedDiagram(format!(
            "{} vertex levels need {} edge levels, got {}",
            vertices.len(),
            vertices.len().saturating_sub(1),
            j.edges.len()
        )));
    }
    let edges = j
        .edges
        .iter()
        .enumerate()
        .map(|(i, level)| {
            let n = i + 1;
            level
                .iter()
                .map(|e| {
                    Ok(Edge {
                        src: index_of(&vertices[n - 1], &e.src, n - 1, "source")?,
                        dst: index_of(&vertices[n], &e.dst, n, "range")?,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    BratteliDiagram::new(presentation, vertices, edges)
}

fn diagram_json(d: &BratteliDiagram) -> DiagramJson {
    let names = d.stored_vertices();
    DiagramJson {
        presentation: presentation_json(d.presentation()),
        levels: names.iter().map(|v| LevelJson { vertices: v.clone() }).collect(),
        edges: d
            .stored_edges()
            .iter()
            .enumerate()
            .map(|(i, level)| {
                level
                    .iter()
                    .map(|e| EdgeJson { src: names[i][e.src].clone(), dst: names[i + 1][e.dst].clone() })
                    .collect()
            })
            .collect(),
    }
}

pub fn parse_diagram(text: &str) -> Result<BratteliDiagram> {
    diagram_from(&parse_json(text, "diagram")?)
}

/// Canonical, byte-stable JSON text of a diagram.
pub fn diagram_to_json(d: &BratteliDiagram) -> String {
    canonical(&diagram_json(d))
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn read_diagram(path: &Path) -> Result<BratteliDiagram> {
    parse_diagram(&read_text(path)?)
}

fn resolve(r: &DiagramRef, base: Option<&Path>) -> Result<BratteliDiagram> {
    match r {
        DiagramRef::Inline(j) => diagram_from(j),
        DiagramRef::File(name) => {
            let path = match base {
                Some(dir) => dir.join(name),
                None => PathBuf::from(name),
            };
            read_diagram(&path)
        }
    }
}

/// Parses a premorphism; file references are resolved against `base`.
pub fn parse_premorphism(text: &str, base: Option<&Path>) -> Result<Premorphism> {
    let j: PremorphismJson = parse_json(text, "premorphism")?;
    let source = Arc::new(OrderedBratteliDiagram::new(resolve(&j.source, base)?));
    let target = Arc::new(OrderedBratteliDiagram::new(resolve(&j.target, base)?));
    premorphism_with(&j, source, target)
}

/// Parses a premorphism between diagrams already in memory, ignoring the
/// file's own `source`/`target` entries.
pub fn parse_premorphism_between(
    text: &str,
    source: Arc<OrderedBratteliDiagram>,
    target: Arc<OrderedBratteliDiagram>,
) -> Result<Premorphism> {
    premorphism_with(&parse_json(text, "premorphism")?, source, target)
}

fn premorphism_with(
    j: &PremorphismJson,
    source: Arc<OrderedBratteliDiagram>,
    target: Arc<OrderedBratteliDiagram>,
) -> Result<Premorphism> {
    let map = match &j.level_map {
        LevelMapJson::Explicit(values) => LevelMap::new(values.clone(), None)?,
        LevelMapJson::Affine { affine, prefix } => {
            LevelMap::new(prefix.clone().unwrap_or_else(|| vec![0]), Some(*affine))?
        }
    };
    let sets = j
        .edge_sets
        .iter()
        .enumerate()
        .map(|(n, level)| {
            let fnn = map
                .get(n)
                .ok_or_else(|| Error::MalformedPremorphism(format!("edge set {n} lies beyond the level map")))?;
            let sources = source.vertex_names(n)?;
            let targets = target.vertex_names(fnn)?;
            let mut fibers = vec![Vec::new(); targets.len()];
            for e in level {
                let s =
                    index_of(sources, &e.src, n, "source").map_err(|e| Error::MalformedPremorphism(e.to_string()))?;
                let t =
                    index_of(targets, &e.dst, fnn, "range").map_err(|e| Error::MalformedPremorphism(e.to_string()))?;
                fibers[t].push(s);
            }
            Ok(EdgeSet::new(sources.len(), fibers))
        })
        .collect::<Result<Vec<_>>>()?;
    Premorphism::new(source, target, map, sets, j.edge_period, j.ordered)
}

pub fn read_premorphism(path: &Path) -> Result<Premorphism> {
    parse_premorphism(&read_text(path)?, path.parent())
}

/// Canonical JSON text of a premorphism, with both diagrams inline.
pub fn premorphism_to_json(f: &Premorphism) -> String {
    let map = f.level_map();
    let level_map = match map.tail() {
        None => LevelMapJson::Explicit(map.explicit().to_vec()),
        Some(affine) => {
            LevelMapJson::Affine { affine, prefix: (map.explicit() != [0]).then(|| map.explicit().to_vec()) }
        }
    };
    let (source, target) = (f.source(), f.target());
    let edge_sets = f
        .stored_edge_sets()
        .iter()
        .enumerate()
        .map(|(n, set)| {
            let fnn = map.get(n).expect("stored edge sets lie within the level map");
            let src = source.vertex_names(n).expect("validated");
            let dst = target.vertex_names(fnn).expect("validated");
            set.fibers()
                .iter()
                .enumerate()
                .flat_map(|(w, fiber)| {
                    fiber.iter().map(move |&v| EdgeJson { src: src[v].clone(), dst: dst[w].clone() })
                })
                .collect()
        })
        .collect();
    canonical(&PremorphismJson {
        source: DiagramRef::Inline(diagram_json(source.base())),
        target: DiagramRef::Inline(diagram_json(target.base())),
        level_map,
        edge_period: f.edge_period(),
        ordered: f.is_ordered(),
        edge_sets,
    })
}
