//! Premorphisms between (ordered) Bratteli diagrams.
//!
//! A premorphism `f: B -> C` is a level map `f_n` with `f_0 = 0` and edge
//! sets `F_n` from `V_n` to `W_{f_n}`. For an infinite (periodic) source the
//! level map ends in an affine tail `a*n + b` and the edge sets repeat with
//! a fixed period, so the whole premorphism is finite data.

use std::convert::Infallible;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use crate::diagram::{LevelSequence, Presentation};
use crate::edgeset::EdgeSet;
use crate::error::{Error, Result};
use crate::order::OrderedBratteliDiagram;
use crate::verdict::Verdict;
use crate::IntMatrix;

/// Level map: explicit values, optionally continued by `a*n + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelMap {
    values: Vec<usize>,
    tail: Option<(usize, i64)>,
}

impl LevelMap {
    pub fn new(values: Vec<usize>, tail: Option<(usize, i64)>) -> Result<Self> {
        if values.first() != Some(&0) {
            return Err(Error::MalformedPremorphism("level map must start with f_0 = 0".into()));
        }
        if let Some(w) = values.windows(2).find(|w| w[0] > w[1]) {
            return Err(Error::MalformedPremorphism(format!("level map decreases from {} to {}", w[0], w[1])));
        }
        if let Some((a, b)) = tail {
            if a == 0 {
                return Err(Error::MalformedPremorphism("affine tail must have positive slope".into()));
            }
            let first = a as i64 * values.len() as i64 + b;
            if first < *values.last().unwrap() as i64 {
                return Err(Error::MalformedPremorphism(format!(
                    "affine tail starts at {first}, below the last explicit value"
                )));
            }
        }
        Ok(LevelMap { values, tail })
    }

    /// `f_n = n`.
    pub fn identity() -> Self {
        LevelMap { values: vec![0], tail: Some((1, 0)) }
    }

    pub fn explicit(&self) -> &[usize] {
        &self.values
    }

    pub fn tail(&self) -> Option<(usize, i64)> {
        self.tail
    }

    pub fn get(&self, n: usize) -> Option<usize> {
        match (self.values.get(n), self.tail) {
            (Some(&v), _) => Some(v),
            (None, Some((a, b))) => Some((a as i64 * n as i64 + b) as usize),
            (None, None) => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.tail.is_some()
    }

    /// Index from which the affine tail applies.
    pub fn tail_start(&self) -> usize {
        self.values.len()
    }
}

impl fmt::Display for LevelMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.values.iter().map(usize::to_string).collect();
        write!(f, "[{}]", v.join(","))?;
        if let Some((a, b)) = self.tail {
            write!(f, " then {a}n{b:+}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Premorphism {
    source: Arc<OrderedBratteliDiagram>,
    target: Arc<OrderedBratteliDiagram>,
    level_map: LevelMap,
    edge_sets: Vec<EdgeSet>,
    edge_period: Option<usize>,
    ordered: bool,
}

impl Premorphism {
    /// `edge_sets[n]` is `F_n`; with `edge_period = Some(P)`, `F_n = F_{n-P}`
    /// for every `n` past the stored ones. A finite source of depth `N`
    /// needs exactly `F_0..=F_N`; a periodic source needs a tail and a period.
    pub fn new(
        source: Arc<OrderedBratteliDiagram>,
        target: Arc<OrderedBratteliDiagram>,
        level_map: LevelMap,
        edge_sets: Vec<EdgeSet>,
        edge_period: Option<usize>,
        ordered: bool,
    ) -> Result<Self> {
        match source.presentation() {
            Presentation::Finite { depth } => {
                if edge_sets.len() != depth + 1 {
                    return Err(Error::MalformedPremorphism(format!(
                        "source has depth {depth}, so {} edge sets are needed, got {}",
                        depth + 1,
                        edge_sets.len()
                    )));
                }
                if level_map.get(depth).is_none() {
                    return Err(Error::MalformedPremorphism(format!("level map is not defined up to level {depth}")));
                }
            }
            Presentation::EventuallyPeriodic { .. } => {
                if !level_map.is_infinite() {
                    return Err(Error::MalformedPremorphism("periodic source needs an affine level-map tail".into()));
                }
                match edge_period {
                    Some(p) if p >= 1 && p <= edge_sets.len() => {}
                    _ => {
                        return Err(Error::MalformedPremorphism(
                            "periodic source needs an edge period between 1 and the number of stored edge sets".into(),
                        ))
                    }
                }
            }
        }
        let f = Premorphism { source, target, level_map, edge_sets, edge_period, ordered };
        let check = f.edge_sets.len() + f.edge_period.map_or(0, |p| 2 * p);
        for n in 0..check {
            f.edge_set(n)?;
        }
        Ok(f)
    }

    pub fn source(&self) -> &Arc<OrderedBratteliDiagram> {
        &self.source
    }

    pub fn target(&self) -> &Arc<OrderedBratteliDiagram> {
        &self.target
    }

    pub fn level_map(&self) -> &LevelMap {
        &self.level_map
    }

    pub fn stored_edge_sets(&self) -> &[EdgeSet] {
        &self.edge_sets
    }

    pub fn edge_period(&self) -> Option<usize> {
        self.edge_period
    }

    pub fn is_ordered(&self) -> bool {
        self.ordered
    }

    /// Last source level this premorphism is defined on, `None` if infinite.
    pub fn depth(&self) -> Option<usize> {
        self.source.depth()
    }

    pub fn f(&self, n: usize) -> Result<usize> {
        self.level_map.get(n).ok_or(Error::NeedsDeeper { requested: n, available: self.edge_sets.len() - 1 })
    }

    /// `F_n`, from `V_n` to `W_{f_n}`.
    pub fn edge_set(&self, n: usize) -> Result<&EdgeSet> {
        let len = self.edge_sets.len();
        let set = if n < len {
            &self.edge_sets[n]
        } else {
            let p = self.edge_period.ok_or(Error::NeedsDeeper { requested: n, available: len - 1 })?;
            &self.edge_sets[len - p + (n - len) % p]
        };
        let (sources, targets) = (self.source.vertex_count(n)?, self.target.vertex_count(self.f(n)?)?);
        if set.source_count() != sources || set.target_count() != targets {
            return Err(Error::MalformedPremorphism(format!(
                "F_{n} runs between {} and {} vertices, expected {sources} and {targets}",
                set.source_count(),
                set.target_count()
            )));
        }
        Ok(set)
    }

    pub fn multiplicity_matrix(&self, n: usize) -> Result<IntMatrix> {
        Ok(self.edge_set(n)?.multiplicity_matrix())
    }

    fn horizon_cap(&self, n: usize) -> usize {
        self.depth().map_or(n, |d| n.min(d))
    }

    /// The two sides `E_{k+1} ∘ F_{k+1}` and `F_k ∘ S_{f_k, f_{k+1}}` of the
    /// square at level `k`.
    pub fn square(&self, k: usize) -> Result<(EdgeSet, EdgeSet)> {
        let left = self.source.edge_set(k + 1)?.then(self.edge_set(k + 1)?);
        let right = self.edge_set(k)?.then(&self.target.path_edge_set(self.f(k)?, self.f(k + 1)?)?);
        Ok((left, right))
    }

    /// Checks the premorphism invariants on levels `0..=n` (squares `k < n`).
    pub fn validate(&self, n: usize) -> Result<PremorphismReport> {
        let n = self.horizon_cap(n);
        let mut violations = Vec::new();
        if self.edge_set(0)?.len() != 1 {
            violations.push(PremorphismViolation::RootNotSingleton { edges: self.edge_set(0)?.len() });
        }
        for level in 0..=n {
            let set = self.edge_set(level)?;
            let fl = self.f(level)?;
            if set.is_empty() {
                violations.push(PremorphismViolation::EmptyEdgeSet { level });
            }
            let mut hit_sources = vec![false; set.source_count()];
            for (w, fiber) in set.fibers().iter().enumerate() {
                if fiber.is_empty() {
                    let vertex = self.target.vertex_name(fl, w)?.to_string();
                    violations.push(PremorphismViolation::NoIncoming { level: fl, vertex });
                }
                for &v in fiber {
                    hit_sources[v] = true;
                }
            }
            for (v, hit) in hit_sources.into_iter().enumerate() {
                if !hit {
                    let vertex = self.source.vertex_name(level, v)?.to_string();
                    violations.push(PremorphismViolation::NoOutgoing { level, vertex });
                }
            }
        }
        for k in 0..n {
            let (left, right) = self.square(k)?;
            if !left.same_counts(&right) {
                violations.push(PremorphismViolation::NotCommuting {
                    level: k,
                    through_source: left.multiplicity_matrix(),
                    through_target: right.multiplicity_matrix(),
                });
            } else if self.ordered {
                if let Some((w, position)) = left.first_order_mismatch(&right) {
                    let vertex = self.target.vertex_name(self.f(k + 1)?, w)?.to_string();
                    violations.push(PremorphismViolation::OrderMismatch { level: k, vertex, position });
                }
            }
        }
        Ok(PremorphismReport { checked_up_to: n, violations })
    }

    /// The bijection between the two sides of the square at level `k`, as a
    /// permutation of positions in each range fiber.
    pub fn square_bijection(&self, k: usize) -> Result<Option<SquareBijection>> {
        let (left, right) = self.square(k)?;
        if self.ordered {
            return Ok(left.order_isomorphic(&right).then(|| SquareBijection {
                level: k,
                fibers: left.fibers().iter().map(|f| (0..f.len()).collect()).collect(),
            }));
        }
        let mut fibers = Vec::new();
        for (a, b) in left.fibers().iter().zip(right.fibers()) {
            if a.len() != b.len() {
                return Ok(None);
            }
            let mut used = vec![false; b.len()];
            let mut perm = Vec::with_capacity(a.len());
            for &s in a {
                let Some(j) = (0..b.len()).find(|&j| !used[j] && b[j] == s) else { return Ok(None) };
                used[j] = true;
                perm.push(j);
            }
            fibers.push(perm);
        }
        Ok(Some(SquareBijection { level: k, fibers }))
    }

    /// `g ∘ self`: `h_n = g_{f_n}`, `H_n = F_n ∘ G_{f_n}`.
    pub fn then(&self, g: &Premorphism) -> Result<Premorphism> {
        if *self.target != *g.source {
            return Err(Error::MalformedPremorphism("premorphisms do not compose: target and source differ".into()));
        }
        let ordered = self.ordered && g.ordered;
        let h_at = |n: usize| -> Result<usize> { g.f(self.f(n)?) };
        let set_at = |n: usize| -> Result<EdgeSet> { Ok(self.edge_set(n)?.then(g.edge_set(self.f(n)?)?)) };
        match self.source.depth() {
            Some(depth) => {
                let values = (0..=depth).map(h_at).collect::<Result<Vec<_>>>()?;
                let sets = (0..=depth).map(set_at).collect::<Result<Vec<_>>>()?;
                let map = LevelMap::new(values, None)?;
                Premorphism::new(self.source.clone(), g.target.clone(), map, sets, None, ordered)
            }
            None => {
                let (a, b) = self.level_map.tail.expect("infinite source has a tail");
                let (c, d) = g
                    .level_map
                    .tail
                    .ok_or_else(|| Error::MalformedPremorphism("second premorphism has no affine tail".into()))?;
                let pf = self.edge_period.expect("infinite source has an edge period");
                let pg = g
                    .edge_period
                    .ok_or_else(|| Error::MalformedPremorphism("second premorphism has no edge period".into()))?;
                let mut k = self.level_map.tail_start();
                while self.f(k)? < g.level_map.tail_start() {
                    k += 1;
                }
                let values = (0..k).map(h_at).collect::<Result<Vec<_>>>()?;
                let tail = (a * c, c as i64 * b + d);
                let period = pf.lcm(&(pg / pg.gcd(&a)));
                let mut start = self.edge_sets.len().max(self.level_map.tail_start());
                while self.f(start)? < g.edge_sets.len() {
                    start += 1;
                }
                let sets = (0..start + period).map(set_at).collect::<Result<Vec<_>>>()?;
                let map = LevelMap::new(values, Some(tail))?;
                Premorphism::new(self.source.clone(), g.target.clone(), map, sets, Some(period), ordered)
            }
        }
    }

    /// Restriction to source levels `0..=n`, with the source truncated.
    pub fn truncate(&self, n: usize) -> Result<Premorphism> {
        if let Some(d) = self.depth() {
            if n > d {
                return Err(Error::NeedsDeeper { requested: n, available: d });
            }
        }
        let values = (0..=n).map(|k| self.f(k)).collect::<Result<Vec<_>>>()?;
        let sets = (0..=n).map(|k| self.edge_set(k).cloned()).collect::<Result<Vec<_>>>()?;
        let source = Arc::new(self.source.truncate(n)?);
        Premorphism::new(source, self.target.clone(), LevelMap::new(values, None)?, sets, None, self.ordered)
    }

    /// The same premorphism with the order forgotten or asserted.
    pub fn with_ordered(&self, ordered: bool) -> Premorphism {
        Premorphism { ordered, ..self.clone() }
    }
}

/// `compose(f, g) = g ∘ f`.
pub fn compose(f: &Premorphism, g: &Premorphism) -> Result<Premorphism> {
    f.then(g)
}

/// `f_n = n` and one edge `v -> v` per vertex.
pub fn identity_premorphism(d: Arc<OrderedBratteliDiagram>) -> Premorphism {
    match d.presentation() {
        Presentation::Finite { depth } => {
            let sets = (0..=depth).map(|n| EdgeSet::identity(d.vertex_count(n).unwrap())).collect();
            let map = LevelMap::new((0..=depth).collect(), None).unwrap();
            Premorphism::new(d.clone(), d, map, sets, None, true).unwrap()
        }
        Presentation::EventuallyPeriodic { prefix, period } => {
            let sets = (0..=prefix + period).map(|n| EdgeSet::identity(d.vertex_count(n).unwrap())).collect();
            Premorphism::new(d.clone(), d, LevelMap::identity(), sets, Some(period), true).unwrap()
        }
    }
}

/// `telescope(B) -> B` with `f_n = m_n` and identity edges. Returns the
/// telescoped diagram together with the premorphism.
pub fn telescoping_premorphism(
    d: Arc<OrderedBratteliDiagram>,
    levels: &LevelSequence,
) -> Result<(Arc<OrderedBratteliDiagram>, Premorphism)> {
    let t = Arc::new(d.telescope(levels)?);
    let f = match t.presentation() {
        Presentation::Finite { depth } => {
            let values: Vec<usize> = (0..=depth).map(|j| levels.get(j).unwrap()).collect();
            let sets = (0..=depth).map(|j| t.vertex_count(j).map(EdgeSet::identity)).collect::<Result<_>>()?;
            Premorphism::new(t.clone(), d, LevelMap::new(values, None)?, sets, None, true)?
        }
        Presentation::EventuallyPeriodic { prefix, period } => {
            let step = levels.step().expect("periodic telescope has a step");
            let last = levels.explicit().len() - 1;
            let values = levels.explicit().to_vec();
            let b = levels.get(last).unwrap() as i64 - (last * step) as i64;
            let map = LevelMap::new(values, Some((step, b)))?;
            let sets =
                (0..=prefix + period).map(|j| t.vertex_count(j).map(EdgeSet::identity)).collect::<Result<_>>()?;
            Premorphism::new(t.clone(), d, map, sets, Some(period), true)?
        }
    };
    Ok((t, f))
}

/// `B -> B` with `f_n = n + shift` for `n >= 1` and `F_n = E_{n, n+shift}`.
pub fn shift_premorphism(
    source: Arc<OrderedBratteliDiagram>,
    target: Arc<OrderedBratteliDiagram>,
    shift: usize,
) -> Result<Premorphism> {
    let f = |n: usize| if n == 0 { 0 } else { n + shift };
    let set = |n: usize| -> Result<EdgeSet> {
        if n == 0 {
            Ok(EdgeSet::identity(1))
        } else {
            target.path_edge_set(n, n + shift)
        }
    };
    match source.presentation() {
        Presentation::Finite { depth } => {
            let values = (0..=depth).map(f).collect();
            let sets = (0..=depth).map(set).collect::<Result<_>>()?;
            Premorphism::new(source, target.clone(), LevelMap::new(values, None)?, sets, None, true)
        }
        Presentation::EventuallyPeriodic { prefix, period } => {
            let sets = (0..=prefix + period).map(set).collect::<Result<_>>()?;
            let map = LevelMap::new(vec![0], Some((1, shift as i64)))?;
            Premorphism::new(source, target.clone(), map, sets, Some(period), true)
        }
    }
}

/// Same level map up to `n` and a grading-, source- and range-preserving
/// bijection (order-preserving when both are ordered).
pub fn premorphisms_isomorphic(f: &Premorphism, g: &Premorphism, n: usize) -> Result<bool> {
    if *f.source != *g.source || *f.target != *g.target {
        return Ok(false);
    }
    let ordered = f.ordered && g.ordered;
    for k in 0..=f.horizon_cap(n) {
        if f.f(k)? != g.f(k)? || !f.edge_set(k)?.isomorphic(g.edge_set(k)?, ordered) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquivalenceVariant {
    Subsequence,
    Second,
    Third,
}

impl std::str::FromStr for EquivalenceVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "subsequence" | "first" => Ok(EquivalenceVariant::Subsequence),
            "second" => Ok(EquivalenceVariant::Second),
            "third" => Ok(EquivalenceVariant::Third),
            other => Err(Error::Parse(format!("unknown equivalence variant {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    F,
    G,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivalenceWitness {
    /// `(n, m)` with `F_n ∘ S_{f_n,m} ≅ G_n ∘ S_{g_n,m}`.
    Second(Vec<(usize, usize)>),
    /// `(n, k, m)` with `F_n ∘ S_{f_n,m} ≅ E_{n,k} ∘ G_k ∘ S_{g_k,m}`.
    Third(Vec<(usize, usize, usize)>),
    /// Alternating indices `n_1 < m_1 < n_2 < ...` with commuting squares.
    Subsequence(Vec<(Side, usize)>),
}

impl fmt::Display for EquivalenceWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivalenceWitness::Second(pairs) => {
                let s: Vec<String> = pairs.iter().map(|(n, m)| format!("{n}->{m}")).collect();
                write!(f, "n->m {}", s.join(" "))
            }
            EquivalenceWitness::Third(triples) => {
                let s: Vec<String> = triples.iter().map(|(n, k, m)| format!("({n},{k})->{m}")).collect();
                write!(f, "(n,k)->m {}", s.join(" "))
            }
            EquivalenceWitness::Subsequence(chain) => {
                let s: Vec<String> = chain
                    .iter()
                    .map(|(side, i)| match side {
                        Side::F => format!("n={i}"),
                        Side::G => format!("m={i}"),
                    })
                    .collect();
                write!(f, "chain {}", s.join(" < "))
            }
        }
    }
}

pub type EquivalenceVerdict = Verdict<EquivalenceWitness, Infallible>;

/// Bounded search for equivalence. Only `Holds` or `UnknownUpTo` can come
/// back: disagreement at every `m <= m_max` says nothing about larger `m`.
pub fn equivalent(
    f: &Premorphism,
    g: &Premorphism,
    variant: EquivalenceVariant,
    n_max: usize,
    m_max: usize,
) -> Result<EquivalenceVerdict> {
    if *f.source != *g.source || *f.target != *g.target {
        return Err(Error::MalformedPremorphism("premorphisms have different endpoints".into()));
    }
    let n_max = f.horizon_cap(n_max);
    let m_max = f.target.depth().map_or(m_max, |d| m_max.min(d));
    let ordered = f.ordered && g.ordered;
    let target = &f.target;
    match variant {
        EquivalenceVariant::Second => {
            let mut pairs = Vec::new();
            for n in 0..=n_max {
                let (fnn, gn) = (f.f(n)?, g.f(n)?);
                let mut found = None;
                for m in fnn.max(gn)..=m_max {
                    let left = f.edge_set(n)?.then(&target.path_edge_set(fnn, m)?);
                    let right = g.edge_set(n)?.then(&target.path_edge_set(gn, m)?);
                    if left.isomorphic(&right, ordered) {
                        found = Some(m);
                        break;
                    }
                }
                match found {
                    Some(m) => pairs.push((n, m)),
                    None => return Ok(Verdict::UnknownUpTo(n_max)),
                }
            }
            Ok(Verdict::Holds(EquivalenceWitness::Second(pairs)))
        }
        EquivalenceVariant::Third => {
            let mut triples = Vec::new();
            for n in 0..=n_max {
                let fnn = f.f(n)?;
                for k in n..=n_max {
                    let gk = g.f(k)?;
                    let through_g = f.source.path_edge_set(n, k)?.then(g.edge_set(k)?);
                    let mut found = None;
                    for m in fnn.max(gk)..=m_max {
                        let left = f.edge_set(n)?.then(&target.path_edge_set(fnn, m)?);
                        let right = through_g.then(&target.path_edge_set(gk, m)?);
                        if left.isomorphic(&right, ordered) {
                            found = Some(m);
                            break;
                        }
                    }
                    match found {
                        Some(m) => triples.push((n, k, m)),
                        None => return Ok(Verdict::UnknownUpTo(n_max)),
                    }
                }
            }
            Ok(Verdict::Holds(EquivalenceWitness::Third(triples)))
        }
        EquivalenceVariant::Subsequence => subsequence_chain(f, g, n_max, m_max, ordered),
    }
}

/// Longest-chain search over alternating indices. Holds when a chain of at
/// least three squares reaches the last or second-to-last level.
fn subsequence_chain(
    f: &Premorphism,
    g: &Premorphism,
    n_max: usize,
    m_max: usize,
    ordered: bool,
) -> Result<EquivalenceVerdict> {
    let source = &f.source;
    let target = &f.target;
    let value = |side: Side, i: usize| match side {
        Side::F => f.f(i),
        Side::G => g.f(i),
    };
    let set = |side: Side, i: usize| match side {
        Side::F => f.edge_set(i),
        Side::G => g.edge_set(i),
    };
    // square from (side, i) to (other, j): E_{i,j} ∘ X_j ≅ Y_i ∘ S_{y_i, x_j}
    let commutes = |from: Side, i: usize, to: Side, j: usize| -> Result<bool> {
        let (yi, xj) = (value(from, i)?, value(to, j)?);
        if yi >= xj || xj > m_max {
            return Ok(false);
        }
        let left = source.path_edge_set(i, j)?.then(set(to, j)?);
        let right = set(from, i)?.then(&target.path_edge_set(yi, xj)?);
        Ok(left.isomorphic(&right, ordered))
    };
    let other = |s: Side| if s == Side::F { Side::G } else { Side::F };
    let nodes: Vec<(Side, usize)> = (1..=n_max).flat_map(|i| [(Side::F, i), (Side::G, i)]).collect();
    let mut best: Vec<(usize, Option<usize>)> = vec![(0, None); nodes.len()];
    for (idx, &(side, i)) in nodes.iter().enumerate() {
        if value(side, i)? > m_max {
            continue;
        }
        if side == Side::F && best[idx].0 == 0 {
            best[idx] = (1, None);
        }
        if best[idx].0 == 0 {
            continue;
        }
        for (jdx, &(s2, j)) in nodes.iter().enumerate() {
            if s2 != other(side) || j <= i {
                continue;
            }
            let len = best[idx].0 + 1;
            if len > best[jdx].0 && commutes(side, i, s2, j)? {
                best[jdx] = (len, Some(idx));
            }
        }
    }
    let end = (0..nodes.len())
        .filter(|&idx| best[idx].0 >= 3 && nodes[idx].1 + 1 >= n_max)
        .max_by_key(|&idx| (best[idx].0, nodes[idx].1));
    let Some(mut at) = end else {
        return Ok(Verdict::UnknownUpTo(n_max));
    };
    let mut chain = vec![nodes[at]];
    while let Some(prev) = best[at].1 {
        chain.push(nodes[prev]);
        at = prev;
    }
    chain.reverse();
    Ok(Verdict::Holds(EquivalenceWitness::Subsequence(chain)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PremorphismViolation {
    RootNotSingleton { edges: usize },
    EmptyEdgeSet { level: usize },
    NoOutgoing { level: usize, vertex: String },
    NoIncoming { level: usize, vertex: String },
    NotCommuting { level: usize, through_source: IntMatrix, through_target: IntMatrix },
    OrderMismatch { level: usize, vertex: String, position: usize },
}

impl fmt::Display for PremorphismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PremorphismViolation::RootNotSingleton { edges } => write!(f, "F_0 has {edges} edges, expected one"),
            PremorphismViolation::EmptyEdgeSet { level } => write!(f, "F_{level} is empty"),
            PremorphismViolation::NoOutgoing { level, vertex } => {
                write!(f, "source vertex ({level}, {vertex}) has no edge in F_{level}")
            }
            PremorphismViolation::NoIncoming { level, vertex } => {
                write!(f, "target vertex ({level}, {vertex}) receives no edge")
            }
            PremorphismViolation::NotCommuting { level, through_source, through_target } => write!(
                f,
                "square at level {level} does not commute: M(F_{})M(E_{}) = {through_source} but M(S)M(F_{level}) = {through_target}",
                level + 1,
                level + 1
            ),
            PremorphismViolation::OrderMismatch { level, vertex, position } => write!(
                f,
                "square at level {level}: no order-preserving bijection (fiber of {vertex}, position {position})"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PremorphismReport {
    pub checked_up_to: usize,
    pub violations: Vec<PremorphismViolation>,
}

impl PremorphismReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// First square level that fails, if any.
    pub fn first_bad_square(&self) -> Option<usize> {
        self.violations
            .iter()
            .filter_map(|v| match v {
                PremorphismViolation::NotCommuting { level, .. }
                | PremorphismViolation::OrderMismatch { level, .. } => Some(*level),
                _ => None,
            })
            .min()
    }
}

impl fmt::Display for PremorphismReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid up to level {}", self.checked_up_to);
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

/// Positions: entry `[w][i] = j` sends the `i`-th path into `w` through the
/// source side to the `j`-th one through the target side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareBijection {
    pub level: usize,
    pub fibers: Vec<Vec<usize>>,
}
