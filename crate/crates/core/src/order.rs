//! Edge orders, lexicographic path order and the classification predicates.
//!
//! Certified verdicts on infinite-path properties come only from the
//! periodic part of an eventually periodic presentation. For the extreme
//! paths this is the self-map `Π` of `V_p` obtained by following maximal
//! (or minimal) parents from `V_{p+q}` down to `V_p`: infinite extreme
//! paths correspond to the periodic points of `Π`.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::Deref;
use std::sync::OnceLock;

use crate::diagram::{BratteliDiagram, LevelSequence, Presentation};
use crate::error::{Error, Result};
use crate::matrix::pattern_mul;
use crate::path::PathWord;
use crate::verdict::Verdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Extreme {
    Max,
    Min,
}

impl fmt::Display for Extreme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Extreme::Max => "max",
            Extreme::Min => "min",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathOrder {
    Less,
    Equal,
    Greater,
    Incomparable,
}

/// A Bratteli diagram whose declared in-fiber edge order is the edge order.
#[derive(Clone, Debug)]
pub struct OrderedBratteliDiagram {
    base: BratteliDiagram,
    periodic_points: OnceLock<Option<[Vec<usize>; 2]>>,
}

impl PartialEq for OrderedBratteliDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
    }
}

impl Eq for OrderedBratteliDiagram {}

impl Deref for OrderedBratteliDiagram {
    type Target = BratteliDiagram;

    fn deref(&self) -> &BratteliDiagram {
        &self.base
    }
}

impl From<BratteliDiagram> for OrderedBratteliDiagram {
    fn from(base: BratteliDiagram) -> Self {
        Self::new(base)
    }
}

impl OrderedBratteliDiagram {
    pub fn new(base: BratteliDiagram) -> Self {
        OrderedBratteliDiagram { base, periodic_points: OnceLock::new() }
    }

    /// Orders `base` by explicit ranks; `ranks[n-1][e]` ranks edge `e` of `E_n`.
    pub fn with_ranks(base: &BratteliDiagram, ranks: &[Vec<usize>]) -> Result<Self> {
        Ok(Self::new(base.reorder(ranks)?))
    }

    pub fn base(&self) -> &BratteliDiagram {
        &self.base
    }

    pub fn into_base(self) -> BratteliDiagram {
        self.base
    }

    /// Lexicographic comparison: the highest differing edge decides.
    pub fn compare_paths(&self, p: &PathWord, q: &PathWord) -> Result<PathOrder> {
        if p.len() != q.len() {
            return Err(Error::LevelMismatch { left: p.len(), right: q.len() });
        }
        if self.path_end(p)? != self.path_end(q)? {
            return Ok(PathOrder::Incomparable);
        }
        for i in (0..p.len()).rev() {
            let (a, b) = (p.edges()[i], q.edges()[i]);
            if a != b {
                // equal suffix means equal range at this level, so indices compare as ranks
                return Ok(match a.cmp(&b) {
                    Ordering::Less => PathOrder::Less,
                    _ => PathOrder::Greater,
                });
            }
        }
        Ok(PathOrder::Equal)
    }

    pub fn telescope(&self, levels: &LevelSequence) -> Result<OrderedBratteliDiagram> {
        Ok(Self::new(self.base.telescope(levels)?))
    }

    pub fn truncate(&self, n: usize) -> Result<OrderedBratteliDiagram> {
        Ok(Self::new(self.base.truncate(n)?))
    }

    /// Maximal or minimal edge of `E_n` into `v`.
    pub fn extreme_edge(&self, which: Extreme, n: usize, v: usize) -> Result<usize> {
        let fiber = self.fiber(n, v)?;
        if fiber.is_empty() {
            return Err(Error::MalformedDiagram(format!("vertex {v} at level {n} has no incoming edges")));
        }
        Ok(match which {
            Extreme::Max => fiber.end - 1,
            Extreme::Min => fiber.start,
        })
    }

    pub fn is_extreme_edge(&self, which: Extreme, n: usize, e: usize) -> Result<bool> {
        let dst = self.edge(n, e)?.dst;
        Ok(self.extreme_edge(which, n, dst)? == e)
    }

    pub fn extreme_parent(&self, which: Extreme, n: usize, v: usize) -> Result<usize> {
        Ok(self.edge(n, self.extreme_edge(which, n, v)?)?.src)
    }

    /// The unique all-extreme path from the root to `v` at level `n`.
    pub fn extreme_path_to(&self, which: Extreme, n: usize, v: usize) -> Result<PathWord> {
        let mut edges = vec![0; n];
        let mut at = v;
        for level in (1..=n).rev() {
            let e = self.extreme_edge(which, level, at)?;
            edges[level - 1] = e;
            at = self.edge(level, e)?.src;
        }
        Ok(PathWord::new(edges))
    }

    /// All length-`n` paths made of extreme edges, one per vertex of `V_n`.
    pub fn extreme_paths(&self, which: Extreme, n: usize) -> Result<Vec<PathWord>> {
        (0..self.vertex_count(n)?).map(|v| self.extreme_path_to(which, n, v)).collect()
    }

    pub fn is_extreme_path(&self, which: Extreme, p: &PathWord) -> Result<bool> {
        for (i, &e) in p.edges().iter().enumerate() {
            if !self.is_extreme_edge(which, i + 1, e)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `Π` for the periodic part, as a map on indices of `V_p`.
    fn period_map(&self, which: Extreme) -> Result<Option<Vec<usize>>> {
        let Presentation::EventuallyPeriodic { prefix, period } = self.presentation() else {
            return Ok(None);
        };
        let map = (0..self.vertex_count(prefix)?)
            .map(|u| {
                let mut at = u;
                for level in (prefix + 1..=prefix + period).rev() {
                    at = self.extreme_parent(which, level, at)?;
                }
                Ok(at)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(map))
    }

    /// Periodic points of `Π_max` and `Π_min`, for periodic presentations.
    fn periodic_points(&self) -> Option<&[Vec<usize>; 2]> {
        self.periodic_points
            .get_or_init(|| {
                let points = |which| -> Option<Vec<usize>> {
                    let map = self.period_map(which).ok()??;
                    let k = map.len();
                    Some(
                        (0..k)
                            .filter(|&x| {
                                let mut y = map[x];
                                for _ in 0..k {
                                    if y == x {
                                        return true;
                                    }
                                    y = map[y];
                                }
                                false
                            })
                            .collect(),
                    )
                };
                Some([points(Extreme::Max)?, points(Extreme::Min)?])
            })
            .as_ref()
    }

    fn points_of(&self, which: Extreme) -> Option<&[usize]> {
        self.periodic_points().map(|p| match which {
            Extreme::Max => p[0].as_slice(),
            Extreme::Min => p[1].as_slice(),
        })
    }

    /// Truncation to length `n` of the infinite extreme path through the
    /// periodic point `u` of `V_p`.
    fn infinite_extreme_through(&self, which: Extreme, u: usize, n: usize) -> Result<PathWord> {
        let Presentation::EventuallyPeriodic { prefix, period } = self.presentation() else {
            unreachable!("periodic points exist only for periodic presentations");
        };
        let map = self.period_map(which)?.expect("periodic");
        // anchor at level prefix + j*period >= n; the point there is Π^{-j}(u) on the cycle
        let j = n.saturating_sub(prefix).div_ceil(period);
        let mut cycle = vec![u];
        let mut y = map[u];
        while y != u {
            cycle.push(y);
            y = map[y];
        }
        let len = cycle.len();
        let at_anchor = cycle[(len - j % len) % len];
        let mut at = at_anchor;
        for level in (n + 1..=prefix + j * period).rev() {
            at = self.extreme_parent(which, level, at)?;
        }
        self.extreme_path_to(which, n, at)
    }

    /// The unique infinite extreme path truncated to length `n`, when the
    /// periodic data certifies that it is unique.
    pub fn unique_extreme(&self, which: Extreme, n: usize) -> Result<Option<PathWord>> {
        match self.points_of(which) {
            Some([u]) => Ok(Some(self.infinite_extreme_through(which, *u, n)?)),
            _ => Ok(None),
        }
    }

    /// Number of infinite extreme paths, known only for periodic presentations.
    pub fn infinite_extreme_count(&self, which: Extreme) -> Option<usize> {
        self.points_of(which).map(<[usize]>::len)
    }

    pub fn is_essentially_simple(&self, n: usize) -> Verdict<EssentialSimplicity, ExtremeBifurcation> {
        let Some(points) = self.periodic_points() else {
            return Verdict::UnknownUpTo(n);
        };
        let Presentation::EventuallyPeriodic { prefix, .. } = self.presentation() else {
            return Verdict::UnknownUpTo(n);
        };
        // distinct periodic points separate the paths from level p on
        let length = n.max(prefix).max(1);
        for (which, pts) in [(Extreme::Max, &points[0]), (Extreme::Min, &points[1])] {
            if pts.len() > 1 {
                let paths =
                    pts.iter().map(|&u| self.infinite_extreme_through(which, u, length)).collect::<Result<Vec<_>>>();
                return match paths {
                    Ok(paths) => Verdict::Fails(ExtremeBifurcation { which, paths }),
                    Err(_) => Verdict::UnknownUpTo(n),
                };
            }
        }
        let (Ok(Some(max)), Ok(Some(min))) =
            (self.unique_extreme(Extreme::Max, n), self.unique_extreme(Extreme::Min, n))
        else {
            return Verdict::UnknownUpTo(n);
        };
        Verdict::Holds(EssentialSimplicity { max, min })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EssentialSimplicity {
    /// Truncations of the unique infinite all-max and all-min paths.
    pub max: PathWord,
    pub min: PathWord,
}

impl fmt::Display for EssentialSimplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unique max path {:?}, unique min path {:?}", self.max.edges(), self.min.edges())
    }
}

/// Distinct infinite extreme paths, truncated to a common length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremeBifurcation {
    pub which: Extreme,
    pub paths: Vec<PathWord>,
}

impl fmt::Display for ExtremeBifurcation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} distinct infinite {} paths:", self.paths.len(), self.which)?;
        for p in &self.paths {
            write!(f, " {:?}", p.edges())?;
        }
        Ok(())
    }
}

/// Levels `(k, m)` with `M(E_{k,m})` strictly positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicityWitness {
    pub pairs: Vec<(usize, usize)>,
    pub block_exponent: usize,
}

impl fmt::Display for SimplicityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self.pairs.iter().map(|(k, m)| format!("{k}->{m}")).collect();
        write!(f, "period block power {} is positive; {}", self.block_exponent, pairs.join(" "))
    }
}

/// The zero patterns of the powers of the period block cycle without ever
/// becoming positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonPrimitive {
    pub cycle_start: usize,
    pub cycle_length: usize,
    pub pattern: Vec<Vec<bool>>,
}

impl fmt::Display for NonPrimitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "zero pattern of period block powers repeats from power {} with period {}: {}",
            self.cycle_start,
            self.cycle_length,
            format_pattern(&self.pattern)
        )
    }
}

pub(crate) fn format_pattern(p: &[Vec<bool>]) -> String {
    let rows: Vec<String> = p.iter().map(|r| r.iter().map(|&b| if b { '+' } else { '0' }).collect()).collect();
    format!("[{}]", rows.join(","))
}

/// Primitivity analysis of a square zero pattern: `Ok(exponent)` with the
/// least positive power, or the cycle the powers fall into.
pub fn primitivity(pattern: &[Vec<bool>]) -> std::result::Result<usize, NonPrimitive> {
    let mut seen: Vec<Vec<Vec<bool>>> = Vec::new();
    let mut current = pattern.to_vec();
    let mut set = HashSet::new();
    loop {
        if current.iter().all(|r| r.iter().all(|&b| b)) {
            return Ok(seen.len() + 1);
        }
        if !set.insert(current.clone()) {
            let start = seen.iter().position(|p| *p == current).unwrap();
            return Err(NonPrimitive { cycle_start: start + 1, cycle_length: seen.len() - start, pattern: current });
        }
        seen.push(current.clone());
        current = pattern_mul(&current, pattern);
    }
}

pub fn is_simple(d: &BratteliDiagram, n: usize) -> Verdict<SimplicityWitness, NonPrimitive> {
    let Presentation::EventuallyPeriodic { prefix, period } = d.presentation() else {
        return Verdict::UnknownUpTo(n);
    };
    let Some(block) = d.period_block() else {
        return Verdict::UnknownUpTo(n);
    };
    let exponent = match primitivity(&block.support()) {
        Ok(e) => e,
        Err(np) => return Verdict::Fails(np),
    };
    let mut pairs = Vec::new();
    let limit = 2 * (prefix + period) + period * (exponent + 2);
    for k in 0..=n {
        let Ok(size) = d.vertex_count(k) else { return Verdict::UnknownUpTo(n) };
        let mut acc: Vec<Vec<bool>> = (0..size).map(|i| (0..size).map(|j| i == j).collect()).collect();
        let mut found = None;
        for m in k + 1..=k + limit {
            let Ok(step) = d.multiplicity_matrix(m) else { return Verdict::UnknownUpTo(n) };
            acc = pattern_mul(&step.support(), &acc);
            if acc.iter().all(|r| r.iter().all(|&b| b)) {
                found = Some(m);
                break;
            }
        }
        match found {
            Some(m) => pairs.push((k, m)),
            None => return Verdict::UnknownUpTo(n),
        }
    }
    Verdict::Holds(SimplicityWitness { pairs, block_exponent: exponent })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CantorWitness {
    /// Every vertex reaches a branching vertex within this many levels.
    pub levels_to_branch: usize,
}

impl fmt::Display for CantorWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "every path branches within {} levels", self.levels_to_branch)
    }
}

/// A vertex below which there is a unique infinite continuation, so every
/// path through it is an isolated point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedPoint {
    pub level: usize,
    pub vertex: String,
}

impl fmt::Display for IsolatedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "paths through ({}, {}) are isolated points", self.level, self.vertex)
    }
}

/// States are stored levels; the state after `p+q` is `p+1`.
fn next_stored(prefix: usize, period: usize, s: usize) -> usize {
    if s < prefix + period {
        s + 1
    } else {
        prefix + 1
    }
}

pub fn is_cantor(d: &BratteliDiagram, n: usize) -> Verdict<CantorWitness, IsolatedPoint> {
    let Presentation::EventuallyPeriodic { prefix, period } = d.presentation() else {
        return Verdict::UnknownUpTo(n);
    };
    let levels = prefix + period + 1;
    let sizes: Vec<usize> = d.stored_vertices().iter().map(Vec::len).collect();
    let index = |s: usize, v: usize| sizes[..s].iter().sum::<usize>() + v;
    let total: usize = sizes.iter().sum();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); total];
    let mut dist = vec![usize::MAX; total];
    let mut queue = VecDeque::new();
    for s in 0..levels {
        let t = next_stored(prefix, period, s);
        let Ok(edges) = d.edges(t) else { return Verdict::UnknownUpTo(n) };
        let mut out = vec![0usize; sizes[s]];
        for e in edges {
            out[e.src] += 1;
            preds[index(t, e.dst)].push(index(s, e.src));
        }
        for (v, &deg) in out.iter().enumerate() {
            if deg >= 2 {
                dist[index(s, v)] = 0;
                queue.push_back(index(s, v));
            }
        }
    }
    while let Some(x) = queue.pop_front() {
        for &y in &preds[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    for s in 0..levels {
        for v in 0..sizes[s] {
            if dist[index(s, v)] == usize::MAX {
                let vertex = d.stored_vertices()[s][v].clone();
                return Verdict::Fails(IsolatedPoint { level: s, vertex });
            }
        }
    }
    Verdict::Holds(CantorWitness { levels_to_branch: dist.into_iter().max().unwrap_or(0) })
}

/// Conditions of a properly ordered diagram that were certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProperOrder {
    pub simple: SimplicityWitness,
    /// A periodic level with at least two edges, so infinitely many exist.
    pub wide_level: usize,
    pub extremes: EssentialSimplicity,
}

impl fmt::Display for ProperOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "simple ({}); level {} recurs with at least two edges; {}",
            self.simple, self.wide_level, self.extremes
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProperOrderFailure {
    NotSimple(NonPrimitive),
    /// Every periodic level has a single edge, so the path space is finite.
    FinitePathSpace {
        periodic_levels: Vec<usize>,
    },
    NotEssentiallySimple(ExtremeBifurcation),
}

impl fmt::Display for ProperOrderFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProperOrderFailure::NotSimple(np) => write!(f, "not simple: {np}"),
            ProperOrderFailure::FinitePathSpace { periodic_levels } => {
                write!(f, "levels with at least two edges are bounded: periodic levels {periodic_levels:?} have one edge each")
            }
            ProperOrderFailure::NotEssentiallySimple(b) => write!(f, "not essentially simple: {b}"),
        }
    }
}

/// Levels `k` with `|E_k| >= 2` recur forever.
pub fn has_unbounded_wide_levels(d: &BratteliDiagram, n: usize) -> Verdict<usize, Vec<usize>> {
    let Presentation::EventuallyPeriodic { prefix, period } = d.presentation() else {
        return Verdict::UnknownUpTo(n);
    };
    let levels: Vec<usize> = (prefix + 1..=prefix + period).collect();
    match levels.iter().find(|&&k| d.edges(k).is_ok_and(|e| e.len() >= 2)) {
        Some(&k) => Verdict::Holds(k),
        None => Verdict::Fails(levels),
    }
}

pub fn is_properly_ordered(d: &OrderedBratteliDiagram, n: usize) -> Verdict<ProperOrder, ProperOrderFailure> {
    let simple = is_simple(d, n);
    let wide = has_unbounded_wide_levels(d, n);
    let es = d.is_essentially_simple(n);
    match (simple, wide, es) {
        (Verdict::Fails(np), _, _) => Verdict::Fails(ProperOrderFailure::NotSimple(np)),
        (_, Verdict::Fails(levels), _) => {
            Verdict::Fails(ProperOrderFailure::FinitePathSpace { periodic_levels: levels })
        }
        (_, _, Verdict::Fails(b)) => Verdict::Fails(ProperOrderFailure::NotEssentiallySimple(b)),
        (Verdict::Holds(simple), Verdict::Holds(wide_level), Verdict::Holds(extremes)) => {
            Verdict::Holds(ProperOrder { simple, wide_level, extremes })
        }
        _ => Verdict::UnknownUpTo(n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{double_odometer, fibonacci, fibonacci_proper, odometer, single_edge_chain};

    #[test]
    fn odometer_comparisons() {
        let d = OrderedBratteliDiagram::new(odometer(2));
        let p = d.path_from_ranks(&[0, 1], None).unwrap();
        let q = d.path_from_ranks(&[1, 0], None).unwrap();
        assert_eq!(d.compare_paths(&p, &q).unwrap(), PathOrder::Greater);
        assert_eq!(d.compare_paths(&q, &p).unwrap(), PathOrder::Less);
        assert_eq!(d.compare_paths(&p, &p).unwrap(), PathOrder::Equal);
        assert!(d.compare_paths(&p, &PathWord::new(vec![0])).is_err());
    }

    #[test]
    fn different_ranges_are_incomparable() {
        let d = OrderedBratteliDiagram::new(fibonacci());
        let p = d.path_from_ranks(&[0, 0], Some(0)).unwrap();
        let q = d.path_from_ranks(&[0, 0], Some(1)).unwrap();
        assert_eq!(d.compare_paths(&p, &q).unwrap(), PathOrder::Incomparable);
    }

    #[test]
    fn odometer_extremes() {
        let d = OrderedBratteliDiagram::new(odometer(2));
        let max = d.extreme_paths(Extreme::Max, 4).unwrap();
        assert_eq!(max.len(), 1);
        assert_eq!(d.path_ranks(&max[0]).unwrap(), vec![1, 1, 1, 1]);
        assert!(d.is_essentially_simple(4).is_holds());
        assert!(is_properly_ordered(&d, 8).is_holds());
    }

    #[test]
    fn double_odometer_is_neither_simple_nor_essentially_simple() {
        let d = OrderedBratteliDiagram::new(double_odometer());
        assert_eq!(d.extreme_paths(Extreme::Max, 3).unwrap().len(), 2);
        match d.is_essentially_simple(3) {
            Verdict::Fails(b) => assert_eq!(b.paths.len(), 2),
            v => panic!("expected Fails, got {v:?}"),
        }
        assert!(is_simple(&d, 4).is_fails());
    }

    #[test]
    fn fibonacci_standard_order_has_two_max_paths() {
        let d = OrderedBratteliDiagram::new(fibonacci());
        assert_eq!(d.infinite_extreme_count(Extreme::Max), Some(2));
        assert_eq!(d.infinite_extreme_count(Extreme::Min), Some(1));
        assert!(d.is_essentially_simple(4).is_fails());
        match is_simple(&d, 3) {
            Verdict::Holds(w) => assert_eq!(w.pairs[1], (1, 3)),
            v => panic!("{v:?}"),
        }
        assert!(is_cantor(&d, 4).is_holds());
    }

    #[test]
    fn fibonacci_alternating_order_is_proper() {
        let d = OrderedBratteliDiagram::new(fibonacci_proper());
        assert!(is_properly_ordered(&d, 8).is_holds());
        let y = d.unique_extreme(Extreme::Max, 5).unwrap().unwrap();
        assert!(d.is_extreme_path(Extreme::Max, &y).unwrap());
        let longer = d.unique_extreme(Extreme::Max, 7).unwrap().unwrap();
        assert_eq!(longer.truncate(5), y);
    }

    #[test]
    fn chain_is_not_cantor_nor_proper() {
        let d = OrderedBratteliDiagram::new(single_edge_chain());
        assert!(is_cantor(&d, 4).is_fails());
        match is_properly_ordered(&d, 4) {
            Verdict::Fails(ProperOrderFailure::FinitePathSpace { .. }) => {}
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn finite_presentations_stay_unknown() {
        let d = OrderedBratteliDiagram::new(odometer(2).truncate(3).unwrap());
        assert_eq!(d.is_essentially_simple(3), Verdict::UnknownUpTo(3));
        assert!(is_simple(&d, 3).is_unknown());
    }

    #[test]
    fn primitivity_of_patterns() {
        assert_eq!(primitivity(&[vec![true, true], vec![true, false]]), Ok(2));
        let np = primitivity(&[vec![false, true], vec![true, false]]).unwrap_err();
        assert_eq!(np.cycle_length, 2);
    }

    #[test]
    fn ordered_telescope_lists_paths_lexicographically() {
        let d = OrderedBratteliDiagram::new(odometer(2));
        let t = d.telescope(&LevelSequence::multiples(2).unwrap()).unwrap();
        let fiber: Vec<usize> = t.fiber(1, 0).unwrap().collect();
        assert_eq!(fiber.len(), 4);
        // edge of rank r corresponds to the 2-path with ranks (r mod 2, r div 2)
        let paths = d.root_paths(2).unwrap();
        let ranks: Vec<Vec<usize>> = paths.iter().map(|p| d.path_ranks(p).unwrap()).collect();
        assert_eq!(ranks, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
    }
}
