//! Canonical Kakutani–Rokhlin partitions and tower edge sets.

use std::collections::HashMap;
use std::fmt;

use crate::edgeset::EdgeSet;
use crate::error::{Error, Result};
use crate::order::OrderedBratteliDiagram;
use crate::path::PathWord;

/// Tower over a vertex `v` of level `n`: the cylinders of the paths into
/// `v`, listed from base to top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    pub vertex: usize,
    pub name: String,
    pub floors: Vec<PathWord>,
}

impl Tower {
    pub fn height(&self) -> usize {
        self.floors.len()
    }

    pub fn base(&self) -> &PathWord {
        &self.floors[0]
    }

    pub fn top(&self) -> &PathWord {
        self.floors.last().expect("towers are non-empty")
    }
}

#[derive(Clone, Debug)]
pub struct KRPartition {
    level: usize,
    towers: Vec<Tower>,
    index: HashMap<PathWord, (usize, usize)>,
}

impl PartialEq for KRPartition {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level && self.towers == other.towers
    }
}

impl KRPartition {
    /// Builds a partition from explicit towers of words of one length.
    pub fn new(level: usize, towers: Vec<Tower>) -> Result<Self> {
        let mut index = HashMap::new();
        for (t, tower) in towers.iter().enumerate() {
            if tower.floors.is_empty() {
                return Err(Error::NotRefinement(format!("tower {} is empty", tower.name)));
            }
            for (j, p) in tower.floors.iter().enumerate() {
                if p.len() != level {
                    return Err(Error::LevelMismatch { left: p.len(), right: level });
                }
                if index.insert(p.clone(), (t, j)).is_some() {
                    return Err(Error::NotRefinement(format!("path {:?} lies in two floors", p.edges())));
                }
            }
        }
        Ok(KRPartition { level, towers, index })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn towers(&self) -> &[Tower] {
        &self.towers
    }

    pub fn heights(&self) -> Vec<usize> {
        self.towers.iter().map(Tower::height).collect()
    }

    /// `(tower, floor)` of a word of this partition's length.
    pub fn locate(&self, p: &PathWord) -> Option<(usize, usize)> {
        self.index.get(p).copied()
    }
}

/// `P_n`: one tower per vertex of `V_n`, floors in lexicographic order,
/// which is the successor order inside a tower.
pub fn canonical_partition(d: &OrderedBratteliDiagram, n: usize) -> Result<KRPartition> {
    let set = d.path_set(0, n)?;
    let mut towers: Vec<Tower> = (0..d.vertex_count(n)?)
        .map(|v| Ok(Tower { vertex: v, name: d.vertex_name(n, v)?.to_string(), floors: Vec::new() }))
        .collect::<Result<_>>()?;
    for p in set.paths {
        towers[p.range].floors.push(PathWord::new(p.edges));
    }
    KRPartition::new(n, towers)
}

/// One passage of fine tower `fine` through coarse tower `coarse`, starting
/// at floor `offset` of the fine tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TowerEdge {
    pub coarse: usize,
    pub fine: usize,
    pub offset: usize,
}

/// `E(P, Q)`, grouped by fine tower and ordered by offset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerEdgeSet {
    pub coarse_level: usize,
    pub fine_level: usize,
    pub coarse_towers: usize,
    pub fine_towers: usize,
    pub edges: Vec<TowerEdge>,
}

impl TowerEdgeSet {
    pub fn into_fine(&self, t: usize) -> impl Iterator<Item = &TowerEdge> {
        self.edges.iter().filter(move |e| e.fine == t)
    }

    pub fn to_edge_set(&self) -> EdgeSet {
        let fibers = (0..self.fine_towers).map(|t| self.into_fine(t).map(|e| e.coarse).collect()).collect();
        EdgeSet::new(self.coarse_towers, fibers)
    }
}

impl fmt::Display for TowerEdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.edges.iter().map(|e| format!("({},{},{})", e.coarse, e.fine, e.offset)).collect();
        write!(f, "E(P_{},P_{}) = {{{}}}", self.coarse_level, self.fine_level, items.join(","))
    }
}

/// Walks every fine tower floor by floor and cuts it into complete passages
/// through coarse towers. Fails unless each passage enters a coarse tower
/// at its base and climbs it to the top.
pub fn tower_edge_set(coarse: &KRPartition, fine: &KRPartition) -> Result<TowerEdgeSet> {
    if coarse.level > fine.level {
        return Err(Error::NotRefinement(format!(
            "level {} partition cannot be coarser than level {}",
            coarse.level, fine.level
        )));
    }
    let heights = coarse.heights();
    let mut edges = Vec::new();
    for (t, tower) in fine.towers.iter().enumerate() {
        let mut j = 0;
        while j < tower.height() {
            let locate = |j: usize| coarse.locate(&tower.floors[j].truncate(coarse.level));
            let Some((s, 0)) = locate(j) else {
                return Err(Error::NotRefinement(format!(
                    "floor {j} of tower {} does not start a passage through a coarse base",
                    tower.name
                )));
            };
            for i in 1..heights[s] {
                if j + i >= tower.height() || locate(j + i) != Some((s, i)) {
                    return Err(Error::NotRefinement(format!(
                        "tower {} leaves coarse tower {} before its top",
                        tower.name, coarse.towers[s].name
                    )));
                }
            }
            edges.push(TowerEdge { coarse: s, fine: t, offset: j });
            j += heights[s];
        }
    }
    Ok(TowerEdgeSet {
        coarse_level: coarse.level,
        fine_level: fine.level,
        coarse_towers: coarse.towers.len(),
        fine_towers: fine.towers.len(),
        edges,
    })
}

/// `E(P,Q) ∘ E(Q,R)` as passages of `R` through `P`: offsets add.
pub fn compose_tower_edges(a: &TowerEdgeSet, b: &TowerEdgeSet) -> Result<TowerEdgeSet> {
    if a.fine_level != b.coarse_level || a.fine_towers != b.coarse_towers {
        return Err(Error::LevelMismatch { left: a.fine_level, right: b.coarse_level });
    }
    let mut edges = Vec::new();
    for u in 0..b.fine_towers {
        for outer in b.into_fine(u) {
            for inner in a.into_fine(outer.coarse) {
                edges.push(TowerEdge { coarse: inner.coarse, fine: u, offset: outer.offset + inner.offset });
            }
        }
    }
    Ok(TowerEdgeSet {
        coarse_level: a.coarse_level,
        fine_level: b.fine_level,
        coarse_towers: a.coarse_towers,
        fine_towers: b.fine_towers,
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{fibonacci, odometer};

    #[test]
    fn odometer_partitions() {
        let d = OrderedBratteliDiagram::new(odometer(2));
        let p2 = canonical_partition(&d, 2).unwrap();
        let floors: Vec<Vec<usize>> = p2.towers()[0].floors.iter().map(|p| p.edges().to_vec()).collect();
        assert_eq!(floors, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
        let p0 = canonical_partition(&d, 0).unwrap();
        assert_eq!(p0.heights(), vec![1]);
        let p1 = canonical_partition(&d, 1).unwrap();
        let e = tower_edge_set(&p1, &p2).unwrap();
        let offsets: Vec<usize> = e.edges.iter().map(|e| e.offset).collect();
        assert_eq!(offsets, vec![0, 2]);
        let same = tower_edge_set(&p2, &p2).unwrap();
        assert_eq!(same.edges, vec![TowerEdge { coarse: 0, fine: 0, offset: 0 }]);
    }

    #[test]
    fn fibonacci_heights_are_path_counts() {
        let d = OrderedBratteliDiagram::new(fibonacci());
        assert_eq!(canonical_partition(&d, 2).unwrap().heights(), vec![2, 1]);
    }

    #[test]
    fn reversed_levels_are_rejected() {
        let d = OrderedBratteliDiagram::new(fibonacci());
        let p1 = canonical_partition(&d, 1).unwrap();
        let p2 = canonical_partition(&d, 2).unwrap();
        assert!(matches!(tower_edge_set(&p2, &p1), Err(Error::NotRefinement(_))));
    }

    #[test]
    fn composition_of_passages() {
        let d = OrderedBratteliDiagram::new(fibonacci());
        let p: Vec<KRPartition> = (1..=3).map(|n| canonical_partition(&d, n).unwrap()).collect();
        let direct = tower_edge_set(&p[0], &p[2]).unwrap();
        let composed =
            compose_tower_edges(&tower_edge_set(&p[0], &p[1]).unwrap(), &tower_edge_set(&p[1], &p[2]).unwrap())
                .unwrap();
        assert_eq!(direct, composed);
    }
}
