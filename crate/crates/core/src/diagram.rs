//! Bratteli diagrams as data.
//!
//! A diagram is stored as the finite list of levels it is presented by.
//! A `Finite(N)` presentation knows levels `0..=N`; an eventually periodic
//! presentation `(p, q)` stores levels `0..=p+q` and repeats levels
//! `p+1..=p+q` forever, identifying `V_{p+q}` with `V_p` by vertex index.
//!
//! Edges of each level are kept sorted by range vertex (stably), so the
//! edges into a vertex form a contiguous block whose internal order is the
//! declared order. That block order is the edge order used by `order`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::edgeset::EdgeSet;
use crate::error::{Error, Result};
use crate::path::PathWord;
use crate::IntMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Presentation {
    Finite { depth: usize },
    EventuallyPeriodic { prefix: usize, period: usize },
}

impl Presentation {
    /// Number of edge levels physically stored.
    pub fn stored_depth(&self) -> usize {
        match *self {
            Presentation::Finite { depth } => depth,
            Presentation::EventuallyPeriodic { prefix, period } => prefix + period,
        }
    }

    /// Stored level holding the data of level `n`.
    pub fn canonical_level(&self, n: usize) -> Result<usize> {
        match *self {
            Presentation::Finite { depth } => {
                if n > depth {
                    Err(Error::NeedsDeeper { requested: n, available: depth })
                } else {
                    Ok(n)
                }
            }
            Presentation::EventuallyPeriodic { prefix, period } => {
                if n <= prefix + period {
                    Ok(n)
                } else {
                    Ok(prefix + (n - prefix - 1) % period + 1)
                }
            }
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, Presentation::EventuallyPeriodic { .. })
    }

    /// Last level a finite presentation knows about.
    pub fn depth(&self) -> Option<usize> {
        match *self {
            Presentation::Finite { depth } => Some(depth),
            Presentation::EventuallyPeriodic { .. } => None,
        }
    }

    /// `2(p + 3q)` for periodic presentations, the depth otherwise.
    pub fn default_horizon(&self) -> usize {
        match *self {
            Presentation::Finite { depth } => depth.max(1),
            Presentation::EventuallyPeriodic { prefix, period } => 2 * (prefix + 3 * period),
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Presentation::Finite { depth } => write!(f, "finite(depth {depth})"),
            Presentation::EventuallyPeriodic { prefix, period } => {
                write!(f, "eventually periodic(prefix {prefix}, period {period})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BratteliDiagram {
    presentation: Presentation,
    vertices: Vec<Vec<String>>,
    edges: Vec<Vec<Edge>>,
    /// `fiber_start[n][v]..fiber_start[n][v+1]` are the edges of `E_{n+1}` into `v`.
    fiber_start: Vec<Vec<usize>>,
}

impl BratteliDiagram {
    /// Builds a diagram from stored levels. `edges[n - 1]` is `E_n` with
    /// endpoints given as vertex indices. Only structural consistency is
    /// checked here; see [`BratteliDiagram::validate`] for the invariants.
    pub fn new(presentation: Presentation, vertices: Vec<Vec<String>>, edges: Vec<Vec<Edge>>) -> Result<Self> {
        let depth = presentation.stored_depth();
        if let Presentation::EventuallyPeriodic { period: 0, .. } = presentation {
            return Err(Error::MalformedDiagram("period must be at least 1".into()));
        }
        if vertices.len() != depth + 1 {
            return Err(Error::MalformedDiagram(format!(
                "presentation stores {} levels but {} were given",
                depth + 1,
                vertices.len()
            )));
        }
        if edges.len() != depth {
            return Err(Error::MalformedDiagram(format!(
                "presentation stores {} edge levels but {} were given",
                depth,
                edges.len()
            )));
        }
        for (n, level) in vertices.iter().enumerate() {
            let mut names: Vec<&String> = level.iter().collect();
            names.sort();
            if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::MalformedDiagram(format!("duplicate vertex {:?} at level {n}", w[0])));
            }
        }
        if let Presentation::EventuallyPeriodic { prefix, period } = presentation {
            if vertices[prefix].len() != vertices[prefix + period].len() {
                return Err(Error::MalformedDiagram(format!(
                    "levels {prefix} and {} must have equally many vertices",
                    prefix + period
                )));
            }
        }
        let mut sorted = Vec::with_capacity(depth);
        let mut fiber_start = Vec::with_capacity(depth);
        for (i, level) in edges.into_iter().enumerate() {
            let n = i + 1;
            let (srcs, dsts) = (vertices[n - 1].len(), vertices[n].len());
            if let Some(e) = level.iter().find(|e| e.src >= srcs || e.dst >= dsts) {
                return Err(Error::MalformedDiagram(format!("edge {}->{} at level {n} is out of range", e.src, e.dst)));
            }
            let mut level = level;
            level.sort_by_key(|e| e.dst);
            let mut starts = vec![0; dsts + 1];
            for e in &level {
                starts[e.dst + 1] += 1;
            }
            for v in 0..dsts {
                starts[v + 1] += starts[v];
            }
            sorted.push(level);
            fiber_start.push(starts);
        }
        Ok(BratteliDiagram { presentation, vertices, edges: sorted, fiber_start })
    }

    /// Builds the diagram whose `n`-th edge level is `sets[n - 1]`.
    pub fn from_edge_sets(presentation: Presentation, vertices: Vec<Vec<String>>, sets: &[EdgeSet]) -> Result<Self> {
        let edges = sets
            .iter()
            .map(|set| {
                set.fibers()
                    .iter()
                    .enumerate()
                    .flat_map(|(dst, fiber)| fiber.iter().map(move |&src| Edge { src, dst }))
                    .collect()
            })
            .collect();
        Self::new(presentation, vertices, edges)
    }

    pub fn presentation(&self) -> Presentation {
        self.presentation
    }

    pub fn depth(&self) -> Option<usize> {
        self.presentation.depth()
    }

    pub fn is_periodic(&self) -> bool {
        self.presentation.is_periodic()
    }

    pub fn default_horizon(&self) -> usize {
        self.presentation.default_horizon()
    }

    pub fn canonical_level(&self, n: usize) -> Result<usize> {
        self.presentation.canonical_level(n)
    }

    /// Stored vertex names, level by level.
    pub fn stored_vertices(&self) -> &[Vec<String>] {
        &self.vertices
    }

    /// Stored edge levels; entry `n - 1` is `E_n`.
    pub fn stored_edges(&self) -> &[Vec<Edge>] {
        &self.edges
    }

    pub fn vertex_names(&self, n: usize) -> Result<&[String]> {
        Ok(&self.vertices[self.canonical_level(n)?])
    }

    pub fn vertex_count(&self, n: usize) -> Result<usize> {
        Ok(self.vertex_names(n)?.len())
    }

    pub fn vertex_name(&self, n: usize, v: usize) -> Result<&str> {
        self.vertex_names(n)?
            .get(v)
            .map(String::as_str)
            .ok_or_else(|| Error::InvalidLevel(format!("no vertex {v} at level {n}")))
    }

    pub fn vertex_index(&self, n: usize, name: &str) -> Result<Option<usize>> {
        Ok(self.vertex_names(n)?.iter().position(|x| x == name))
    }

    fn edge_level(&self, n: usize) -> Result<usize> {
        if n == 0 {
            return Err(Error::InvalidLevel("edge levels start at 1".into()));
        }
        self.canonical_level(n)
    }

    /// The edges of `E_n`, grouped by range vertex.
    pub fn edges(&self, n: usize) -> Result<&[Edge]> {
        Ok(&self.edges[self.edge_level(n)? - 1])
    }

    pub fn edge(&self, n: usize, e: usize) -> Result<Edge> {
        self.edges(n)?.get(e).copied().ok_or_else(|| Error::InvalidPath(format!("no edge {e} at level {n}")))
    }

    /// Indices of the edges of `E_n` into `v`, in edge order.
    pub fn fiber(&self, n: usize, v: usize) -> Result<std::ops::Range<usize>> {
        let starts = &self.fiber_start[self.edge_level(n)? - 1];
        if v + 1 >= starts.len() {
            return Err(Error::InvalidLevel(format!("no vertex {v} at level {n}")));
        }
        Ok(starts[v]..starts[v + 1])
    }

    /// Position of edge `e` of `E_n` within its range fiber.
    pub fn edge_rank(&self, n: usize, e: usize) -> Result<usize> {
        let edge = self.edge(n, e)?;
        Ok(e - self.fiber(n, edge.dst)?.start)
    }

    /// Outgoing edges of `v` at level `n` into level `n + 1`.
    pub fn out_degree(&self, n: usize, v: usize) -> Result<usize> {
        Ok(self.edges(n + 1)?.iter().filter(|e| e.src == v).count())
    }

    /// `E_n` as an ordered edge set.
    pub fn edge_set(&self, n: usize) -> Result<EdgeSet> {
        let sources = self.vertex_count(n - 1)?;
        let targets = self.vertex_count(n)?;
        let edges = self.edges(n)?;
        let fibers = (0..targets)
            .map(|w| self.fiber(n, w).map(|r| edges[r].iter().map(|e| e.src).collect()))
            .collect::<Result<_>>()?;
        Ok(EdgeSet::new(sources, fibers))
    }

    /// `E_{k,l}` as an ordered edge set (lexicographic order on paths).
    pub fn path_edge_set(&self, k: usize, l: usize) -> Result<EdgeSet> {
        if k > l {
            return Err(Error::InvalidLevel(format!("path set from {k} to {l} is empty")));
        }
        let mut acc = EdgeSet::identity(self.vertex_count(k)?);
        for n in k + 1..=l {
            acc = acc.then(&self.edge_set(n)?);
        }
        Ok(acc)
    }

    /// Entry `(w, v)` counts edges of `E_n` from `v` to `w`.
    pub fn multiplicity_matrix(&self, n: usize) -> Result<IntMatrix> {
        let mut m = IntMatrix::zeros(self.vertex_count(n)?, self.vertex_count(n - 1)?);
        for e in self.edges(n)? {
            *m.get_mut(e.dst, e.src) += BigInt::one();
        }
        Ok(m)
    }

    /// `M(E_{k,l}) = M(E_l)...M(E_{k+1})`; the identity when `k = l`.
    pub fn path_matrix(&self, k: usize, l: usize) -> Result<IntMatrix> {
        if k > l {
            return Err(Error::InvalidLevel(format!("path matrix from {k} to {l}")));
        }
        let mut acc = IntMatrix::identity(self.vertex_count(k)?);
        for n in k + 1..=l {
            acc = self.multiplicity_matrix(n)?.mul(&acc);
        }
        Ok(acc)
    }

    /// Number of paths from the root to each vertex of level `n`.
    pub fn root_path_counts(&self, n: usize) -> Result<Vec<BigInt>> {
        let mut counts = vec![BigInt::one()];
        for j in 1..=n {
            counts = self.multiplicity_matrix(j)?.mul_vec(&counts);
        }
        Ok(counts)
    }

    pub fn path_count(&self, n: usize) -> Result<BigInt> {
        Ok(self.root_path_counts(n)?.into_iter().sum())
    }

    /// Enumerates `E_{k,l}`: grouped by range, lexicographic within a range.
    pub fn path_set(&self, k: usize, l: usize) -> Result<PathSet> {
        if k > l {
            return Err(Error::InvalidLevel(format!("path set from {k} to {l}")));
        }
        let sources = self.vertex_count(k)?;
        let mut by_end: Vec<Vec<SegmentPath>> =
            (0..sources).map(|v| vec![SegmentPath { source: v, range: v, edges: Vec::new() }]).collect();
        for n in k + 1..=l {
            let edges = self.edges(n)?;
            let targets = self.vertex_count(n)?;
            let mut next = Vec::with_capacity(targets);
            for w in 0..targets {
                let mut into = Vec::new();
                for e in self.fiber(n, w)? {
                    for p in &by_end[edges[e].src] {
                        let mut q = p.clone();
                        q.edges.push(e);
                        q.range = w;
                        into.push(q);
                    }
                }
                next.push(into);
            }
            by_end = next;
        }
        let targets = by_end.len();
        Ok(PathSet { from: k, to: l, sources, targets, paths: by_end.into_iter().flatten().collect() })
    }

    /// All paths from the root of length `n`, in path-set order.
    pub fn root_paths(&self, n: usize) -> Result<Vec<PathWord>> {
        Ok(self.path_set(0, n)?.paths.into_iter().map(|p| PathWord::new(p.edges)).collect())
    }

    /// Range vertex of a root path, checking contiguity.
    pub fn path_end(&self, p: &PathWord) -> Result<usize> {
        let mut at = 0;
        for (i, &e) in p.edges().iter().enumerate() {
            let edge = self.edge(i + 1, e)?;
            if edge.src != at {
                return Err(Error::InvalidPath(format!("edge {e} at level {} does not start at vertex {at}", i + 1)));
            }
            at = edge.dst;
        }
        Ok(at)
    }

    /// Vertices visited by a root path, starting with the root.
    pub fn path_vertices(&self, p: &PathWord) -> Result<Vec<usize>> {
        self.path_end(p)?;
        let mut out = vec![0];
        for (i, &e) in p.edges().iter().enumerate() {
            out.push(self.edge(i + 1, e)?.dst);
        }
        Ok(out)
    }

    /// In-fiber ranks of the edges of a root path.
    pub fn path_ranks(&self, p: &PathWord) -> Result<Vec<usize>> {
        p.edges().iter().enumerate().map(|(i, &e)| self.edge_rank(i + 1, e)).collect()
    }

    /// Resolves a rank word, walking backwards from its range vertex. When
    /// `end` is `None` the range must be determined by the ranks alone.
    pub fn path_from_ranks(&self, ranks: &[usize], end: Option<usize>) -> Result<PathWord> {
        let n = ranks.len();
        let walk = |mut v: usize| -> Option<PathWord> {
            let mut edges = vec![0; n];
            for level in (1..=n).rev() {
                let fiber = self.fiber(level, v).ok()?;
                let e = fiber.start + ranks[level - 1];
                if e >= fiber.end {
                    return None;
                }
                edges[level - 1] = e;
                v = self.edges(level).ok()?[e].src;
            }
            (v == 0).then(|| PathWord::new(edges))
        };
        let count = self.vertex_count(n)?;
        match end {
            Some(v) if v < count => walk(v)
                .ok_or_else(|| Error::InvalidPath(format!("ranks {ranks:?} do not describe a path to vertex {v}"))),
            Some(v) => Err(Error::InvalidPath(format!("no vertex {v} at level {n}"))),
            None => {
                let found: Vec<PathWord> = (0..count).filter_map(walk).collect();
                match found.len() {
                    1 => Ok(found.into_iter().next().unwrap()),
                    0 => Err(Error::InvalidPath(format!("ranks {ranks:?} do not describe a path"))),
                    _ => Err(Error::InvalidPath(format!(
                        "ranks {ranks:?} describe paths to several vertices; name the range with @vertex"
                    ))),
                }
            }
        }
    }

    /// Finite presentation of levels `0..=n`.
    pub fn truncate(&self, n: usize) -> Result<BratteliDiagram> {
        let vertices = (0..=n).map(|j| self.vertex_names(j).map(<[String]>::to_vec)).collect::<Result<_>>()?;
        let edges = (1..=n).map(|j| self.edges(j).map(<[Edge]>::to_vec)).collect::<Result<_>>()?;
        BratteliDiagram::new(Presentation::Finite { depth: n }, vertices, edges)
    }

    /// Contraction along `levels`: `V'_n = V_{m_n}`, `E'_n = E_{m_{n-1}, m_n}`
    /// with each contracted edge placed by the lexicographic order of its path.
    pub fn telescope(&self, levels: &LevelSequence) -> Result<BratteliDiagram> {
        let (terms, presentation) = match (self.presentation, levels.step()) {
            (Presentation::Finite { depth }, _) => {
                let terms = levels.terms_up_to(depth);
                if levels.step().is_none() && terms.len() < levels.explicit().len() {
                    let requested = *levels.explicit().last().unwrap();
                    return Err(Error::NeedsDeeper { requested, available: depth });
                }
                let d = terms.len() - 1;
                (terms, Presentation::Finite { depth: d })
            }
            (Presentation::EventuallyPeriodic { .. }, None) => {
                let terms = levels.explicit().to_vec();
                let d = terms.len() - 1;
                (terms, Presentation::Finite { depth: d })
            }
            (Presentation::EventuallyPeriodic { prefix, period }, Some(step)) => {
                let last = levels.explicit().len() - 1;
                let mut start = last;
                while levels.get(start).unwrap() < prefix {
                    start += 1;
                }
                let new_period = period / period.gcd(&step);
                let terms = (0..=start + new_period).map(|j| levels.get(j).unwrap()).collect();
                (terms, Presentation::EventuallyPeriodic { prefix: start, period: new_period })
            }
        };
        let vertices = terms.iter().map(|&m| self.vertex_names(m).map(<[String]>::to_vec)).collect::<Result<_>>()?;
        let sets = terms.windows(2).map(|w| self.path_edge_set(w[0], w[1])).collect::<Result<Vec<_>>>()?;
        BratteliDiagram::from_edge_sets(presentation, vertices, &sets)
    }

    /// Every violated invariant of a Bratteli diagram, with coordinates.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let depth = self.presentation.stored_depth();
        for (n, level) in self.vertices.iter().enumerate() {
            if level.is_empty() {
                violations.push(Violation::EmptyLevel { level: n });
            }
        }
        if self.vertices[0].len() > 1 {
            violations.push(Violation::RootNotSingleton { count: self.vertices[0].len() });
        }
        for n in 1..=depth {
            for (v, name) in self.vertices[n].iter().enumerate() {
                if self.fiber(n, v).map_or(true, |r| r.is_empty()) {
                    violations.push(Violation::NoIncoming { level: n, vertex: name.clone() });
                }
            }
        }
        let last_with_successors = if self.is_periodic() { depth } else { depth.saturating_sub(1) };
        let check_out = self.is_periodic() || depth > 0;
        if check_out {
            for n in 0..=last_with_successors {
                if !self.is_periodic() && n == depth {
                    break;
                }
                let Ok(next) = self.edges(n + 1) else { continue };
                for (v, name) in self.vertices[n].iter().enumerate() {
                    if !next.iter().any(|e| e.src == v) {
                        violations.push(Violation::NoOutgoing { level: n, vertex: name.clone() });
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    /// Square block `M(E_{p,p+q})` of a periodic presentation.
    pub fn period_block(&self) -> Option<IntMatrix> {
        match self.presentation {
            Presentation::EventuallyPeriodic { prefix, period } => self.path_matrix(prefix, prefix + period).ok(),
            Presentation::Finite { .. } => None,
        }
    }

    /// The diagram with the edges into each vertex reordered: `ranks[n-1][e]`
    /// is the new rank of edge `e` of `E_n` within its fiber.
    pub fn reorder(&self, ranks: &[Vec<usize>]) -> Result<BratteliDiagram> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for (i, level) in self.edges.iter().enumerate() {
            let r = ranks
                .get(i)
                .filter(|r| r.len() == level.len())
                .ok_or_else(|| Error::MalformedDiagram(format!("rank table for level {} has wrong size", i + 1)))?;
            let mut keyed: Vec<(usize, usize, Edge)> =
                level.iter().enumerate().map(|(e, &edge)| (edge.dst, r[e], edge)).collect();
            let starts = &self.fiber_start[i];
            for (w, pair) in starts.windows(2).enumerate() {
                let mut seen: Vec<usize> = r[pair[0]..pair[1]].to_vec();
                seen.sort_unstable();
                if seen.iter().enumerate().any(|(j, &x)| j != x) {
                    return Err(Error::MalformedDiagram(format!(
                        "ranks into vertex {w} at level {} are not a permutation",
                        i + 1
                    )));
                }
            }
            keyed.sort_by_key(|&(dst, rank, _)| (dst, rank));
            edges.push(keyed.into_iter().map(|(_, _, e)| e).collect());
        }
        BratteliDiagram::new(self.presentation, self.vertices.clone(), edges)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentPath {
    pub source: usize,
    pub range: usize,
    pub edges: Vec<usize>,
}

/// The path set `E_{k,l}` with source and range maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSet {
    pub from: usize,
    pub to: usize,
    pub sources: usize,
    pub targets: usize,
    pub paths: Vec<SegmentPath>,
}

impl PathSet {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn multiplicity_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.targets, self.sources);
        for p in &self.paths {
            *m.get_mut(p.range, p.source) += BigInt::one();
        }
        m
    }

    pub fn to_edge_set(&self) -> EdgeSet {
        let mut fibers = vec![Vec::new(); self.targets];
        for p in &self.paths {
            fibers[p.range].push(p.source);
        }
        EdgeSet::new(self.sources, fibers)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    EmptyLevel { level: usize },
    RootNotSingleton { count: usize },
    NoIncoming { level: usize, vertex: String },
    NoOutgoing { level: usize, vertex: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyLevel { level } => write!(f, "level {level}: no vertices"),
            Violation::RootNotSingleton { count } => write!(f, "level 0: {count} vertices, expected one"),
            Violation::NoIncoming { level, vertex } => write!(f, "({level}, {vertex}): no incoming edges"),
            Violation::NoOutgoing { level, vertex } => write!(f, "({level}, {vertex}): no outgoing edges"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A strictly increasing sequence `0 = m_0 < m_1 < ...`: explicit terms,
/// optionally continued forever by a constant step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelSequence {
    explicit: Vec<usize>,
    step: Option<usize>,
}

impl LevelSequence {
    pub fn new(explicit: Vec<usize>, step: Option<usize>) -> Result<Self> {
        if explicit.first() != Some(&0) {
            return Err(Error::MalformedSequence("sequence must start at 0".into()));
        }
        if let Some(w) = explicit.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::MalformedSequence(format!("{} is not followed by a larger level ({})", w[0], w[1])));
        }
        if step == Some(0) {
            return Err(Error::MalformedSequence("step must be positive".into()));
        }
        Ok(LevelSequence { explicit, step })
    }

    /// `0, 1, 2, ...`
    pub fn identity() -> Self {
        LevelSequence { explicit: vec![0], step: Some(1) }
    }

    /// `0, k, 2k, ...`
    pub fn multiples(k: usize) -> Result<Self> {
        Self::new(vec![0], Some(k))
    }

    pub fn explicit(&self) -> &[usize] {
        &self.explicit
    }

    pub fn step(&self) -> Option<usize> {
        self.step
    }

    pub fn get(&self, j: usize) -> Option<usize> {
        match (self.explicit.get(j), self.step) {
            (Some(&m), _) => Some(m),
            (None, Some(s)) => Some(self.explicit.last().unwrap() + (j + 1 - self.explicit.len()) * s),
            (None, None) => None,
        }
    }

    /// Number of terms, `None` when infinite.
    pub fn len(&self) -> Option<usize> {
        self.step.is_none().then_some(self.explicit.len())
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All terms not exceeding `bound`.
    pub fn terms_up_to(&self, bound: usize) -> Vec<usize> {
        (0..).map_while(|j| self.get(j).filter(|&m| m <= bound)).collect()
    }

    /// `(self ∘ inner)_n = self_{inner_n}`: telescoping by `self`, then by `inner`.
    pub fn compose(&self, inner: &LevelSequence) -> Result<LevelSequence> {
        let value = |n: usize| -> Result<usize> {
            let j = inner.get(n).ok_or_else(|| Error::MalformedSequence(format!("inner sequence has no term {n}")))?;
            self.get(j).ok_or_else(|| Error::MalformedSequence(format!("outer sequence has no term {j}")))
        };
        match (self.step, inner.step) {
            (Some(s), Some(t)) => {
                let mut n = inner.explicit.len() - 1;
                while inner.get(n).unwrap() < self.explicit.len() - 1 {
                    n += 1;
                }
                let explicit = (0..=n).map(value).collect::<Result<_>>()?;
                LevelSequence::new(explicit, Some(s * t))
            }
            _ => {
                let count = match inner.len() {
                    Some(c) => c,
                    None => (0..).take_while(|&n| self.get(inner.get(n).unwrap()).is_some()).count(),
                };
                let explicit = (0..count).map(value).collect::<Result<_>>()?;
                LevelSequence::new(explicit, None)
            }
        }
    }
}

impl std::str::FromStr for LevelSequence {
    type Err = Error;

    /// `"0,2,4"` is finite; a trailing `...` continues with the last difference.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, open) = match s.strip_suffix("...") {
            Some(b) => (b.trim_end_matches([',', ' ']), true),
            None => (s, false),
        };
        let explicit = body
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::MalformedSequence(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let step = if open {
            match explicit.as_slice() {
                [.., a, b] if b > a => Some(b - a),
                _ => return Err(Error::MalformedSequence("need two terms before '...'".into())),
            }
        } else {
            None
        };
        LevelSequence::new(explicit, step)
    }
}

impl fmt::Display for LevelSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.explicit.iter().map(usize::to_string).collect();
        write!(f, "{}", terms.join(","))?;
        if let Some(s) = self.step {
            write!(f, ",{},...", self.explicit.last().unwrap() + s)?;
        }
        Ok(())
    }
}
