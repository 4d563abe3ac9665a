//! Vershik dynamics on finite path words.
//!
//! A word of length `n` stands for the cylinder of all infinite paths
//! starting with it. The successor is defined on the word alone unless
//! every edge is maximal, in which case the answer depends on the levels
//! above `n`.

mod functor;
mod towers;

pub use functor::{
    extract_premorphism, induced_map, induced_map_at, induced_table, rebuild_diagram, sigma, tau, PathTable, Sigma,
    SigmaStep, TableLevel,
};
pub use towers::{
    canonical_partition, compose_tower_edges, tower_edge_set, KRPartition, Tower, TowerEdge, TowerEdgeSet,
};

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::diagram::BratteliDiagram;
use crate::error::{Error, Result};
use crate::order::{Extreme, OrderedBratteliDiagram};
use crate::path::PathWord;
use crate::verdict::Verdict;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Successor {
    Next(PathWord),
    /// The word was the truncation of the unique maximal path; this is the
    /// unique minimal path at the same length.
    WrapToMin(PathWord),
}

impl Successor {
    pub fn path(&self) -> &PathWord {
        match self {
            Successor::Next(p) | Successor::WrapToMin(p) => p,
        }
    }

    pub fn is_wrap(&self) -> bool {
        matches!(self, Successor::WrapToMin(_))
    }
}

pub fn successor(d: &OrderedBratteliDiagram, p: &PathWord) -> Result<Successor> {
    d.path_end(p)?;
    let n = p.len();
    for (i, &e) in p.edges().iter().enumerate() {
        let level = i + 1;
        let edge = d.edge(level, e)?;
        let fiber = d.fiber(level, edge.dst)?;
        if e + 1 < fiber.end {
            let next = e + 1;
            let below = d.extreme_path_to(Extreme::Min, i, d.edge(level, next)?.src)?;
            let mut edges = below.into_edges();
            edges.push(next);
            edges.extend_from_slice(&p.edges()[level..]);
            return Ok(Successor::Next(PathWord::new(edges)));
        }
    }
    let deeper = Error::NeedsDeeper { requested: n + 1, available: n };
    if !d.is_periodic() || !d.is_essentially_simple(n).is_holds() {
        return Err(deeper);
    }
    match (d.unique_extreme(Extreme::Max, n)?, d.unique_extreme(Extreme::Min, n)?) {
        (Some(max), Some(min)) if max == *p => Ok(Successor::WrapToMin(min)),
        _ => Err(deeper),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitStep {
    pub path: PathWord,
    pub wrapped: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub steps: Vec<OrbitStep>,
    /// Set when the iteration stopped before the requested number of steps.
    pub stopped: Option<Error>,
}

/// `p, λp, λ²p, ...` with `steps` applications, stopping early on error.
pub fn orbit(d: &OrderedBratteliDiagram, p: &PathWord, steps: usize) -> Result<Orbit> {
    d.path_end(p)?;
    let mut out = vec![OrbitStep { path: p.clone(), wrapped: false }];
    let mut at = p.clone();
    for _ in 0..steps {
        match successor(d, &at) {
            Ok(s) => {
                let wrapped = s.is_wrap();
                at = s.path().clone();
                out.push(OrbitStep { path: at.clone(), wrapped });
            }
            Err(e) => return Ok(Orbit { steps: out, stopped: Some(e) }),
        }
    }
    Ok(Orbit { steps: out, stopped: None })
}

/// Root path counts `h_m(v)` for `m = 0..=n`.
pub fn heights(d: &BratteliDiagram, n: usize) -> Result<Vec<Vec<BigInt>>> {
    let mut out = vec![vec![BigInt::one()]];
    for m in 1..=n {
        let next = d.multiplicity_matrix(m)?.mul_vec(&out[m - 1]);
        out.push(next);
    }
    Ok(out)
}

/// Position of `p` among the paths with the same range, in lexicographic
/// order (the floor of `p` in its tower).
pub fn path_rank(d: &BratteliDiagram, p: &PathWord) -> Result<BigInt> {
    d.path_end(p)?;
    let h = heights(d, p.len())?;
    let mut rank = BigInt::zero();
    for (i, &e) in p.edges().iter().enumerate() {
        let level = i + 1;
        let fiber = d.fiber(level, d.edge(level, e)?.dst)?;
        for earlier in fiber.start..e {
            rank += &h[i][d.edge(level, earlier)?.src];
        }
    }
    Ok(rank)
}

/// The path of length `n` into `v` with the given rank.
pub fn path_unrank(d: &BratteliDiagram, n: usize, v: usize, rank: &BigInt) -> Result<PathWord> {
    let h = heights(d, n)?;
    if v >= h[n].len() || *rank < BigInt::zero() || *rank >= h[n][v] {
        return Err(Error::InvalidPath(format!("no path of rank {rank} into vertex {v} at level {n}")));
    }
    let mut edges = vec![0; n];
    let mut at = v;
    let mut left = rank.clone();
    for level in (1..=n).rev() {
        let mut chosen = None;
        for e in d.fiber(level, at)? {
            let src = d.edge(level, e)?.src;
            if left < h[level - 1][src] {
                chosen = Some((e, src));
                break;
            }
            left -= &h[level - 1][src];
        }
        let (e, src) = chosen.expect("rank below the tower height");
        edges[level - 1] = e;
        at = src;
    }
    Ok(PathWord::new(edges))
}

/// Exhaustive check at length `n` that the successor steps through each
/// tower floor by floor: `Holds(n)` or the first offending path.
pub fn check_tower_property(d: &OrderedBratteliDiagram, n: usize) -> Result<Verdict<usize, PathWord>> {
    for tower in canonical_partition(d, n)?.towers() {
        for pair in tower.floors.windows(2) {
            match successor(d, &pair[0]) {
                Ok(Successor::Next(q)) if q == pair[1] => {}
                _ => return Ok(Verdict::Fails(pair[0].clone())),
            }
        }
    }
    Ok(Verdict::Holds(n))
}

impl fmt::Display for Successor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Successor::Next(p) => write!(f, "{:?}", p.edges()),
            Successor::WrapToMin(p) => write!(f, "WrapToMin {:?}", p.edges()),
        }
    }
}
