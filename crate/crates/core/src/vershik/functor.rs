//! Passing between diagrams and their Vershik systems: rebuilding a diagram
//! from canonical towers, the comparison maps `τ` and `σ`, the map on paths
//! induced by an ordered premorphism, and recovering a premorphism from a
//! path table.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::towers::{canonical_partition, tower_edge_set, KRPartition, TowerEdgeSet};
use super::{path_rank, path_unrank};
use crate::diagram::Presentation;
use crate::edgeset::EdgeSet;
use crate::error::{Error, Result};
use crate::morphism::{LevelMap, Premorphism};
use crate::order::OrderedBratteliDiagram;
use crate::path::PathWord;

fn passages(d: &OrderedBratteliDiagram, n: usize) -> Result<(Vec<KRPartition>, Vec<TowerEdgeSet>)> {
    let parts = (0..=n).map(|m| canonical_partition(d, m)).collect::<Result<Vec<_>>>()?;
    let sets = parts.windows(2).map(|w| tower_edge_set(&w[0], &w[1])).collect::<Result<Vec<_>>>()?;
    Ok((parts, sets))
}

/// The diagram read off the canonical partitions `P_0, ..., P_n`: one
/// vertex per tower, one edge per passage, ordered by offset.
pub fn rebuild_diagram(d: &OrderedBratteliDiagram, n: usize) -> Result<OrderedBratteliDiagram> {
    let (parts, sets) = passages(d, n)?;
    let vertices = parts.iter().map(|p| p.towers().iter().map(|t| format!("T{}", t.name)).collect()).collect();
    let sets: Vec<EdgeSet> = sets.iter().map(TowerEdgeSet::to_edge_set).collect();
    Ok(OrderedBratteliDiagram::new(crate::BratteliDiagram::from_edge_sets(
        Presentation::Finite { depth: n },
        vertices,
        &sets,
    )?))
}

/// `τ`: the truncation of `d` to depth `n` mapped onto the rebuilt diagram,
/// `f_m = m`, each vertex sent to its own tower.
pub fn tau(d: &OrderedBratteliDiagram, n: usize) -> Result<Premorphism> {
    let source = Arc::new(d.truncate(n)?);
    let target = Arc::new(rebuild_diagram(d, n)?);
    let sets = (0..=n).map(|m| d.vertex_count(m).map(EdgeSet::identity)).collect::<Result<_>>()?;
    Premorphism::new(source, target, LevelMap::new((0..=n).collect(), None)?, sets, None, true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaStep {
    pub level: usize,
    pub from: usize,
    pub to: usize,
    /// Floor of the tower `to` where the passage through `from` begins.
    pub offset: usize,
    /// Floor of the level-`level` truncation inside `to`.
    pub floor: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sigma {
    pub path: PathWord,
    pub steps: Vec<SigmaStep>,
}

fn small(x: BigInt) -> Result<usize> {
    x.to_usize().ok_or_else(|| Error::InvalidPath("tower floor does not fit in memory".into()))
}

/// `σ`: the itinerary of `p` through the canonical towers, as a path in
/// `rebuild_diagram(d, |p|)`.
pub fn sigma(d: &OrderedBratteliDiagram, p: &PathWord) -> Result<Sigma> {
    let n = p.len();
    let (_, sets) = passages(d, n)?;
    let rebuilt = rebuild_diagram(d, n)?;
    let vertices = d.path_vertices(p)?;
    let mut edges = Vec::with_capacity(n);
    let mut steps = Vec::with_capacity(n);
    let mut below = 0usize;
    for m in 1..=n {
        let (from, to) = (vertices[m - 1], vertices[m]);
        let floor = small(path_rank(d, &p.truncate(m))?)?;
        let (position, edge) = sets[m - 1]
            .into_fine(to)
            .enumerate()
            .find(|(_, e)| e.coarse == from && e.offset + below == floor)
            .ok_or_else(|| Error::InvalidPath(format!("no passage at level {m} matches floor {floor}")))?;
        edges.push(rebuilt.fiber(m, to)?.start + position);
        steps.push(SigmaStep { level: m, from, to, offset: edge.offset, floor });
        below = floor;
    }
    Ok(Sigma { path: PathWord::new(edges), steps })
}

/// The largest `n` with `f_n = |p|`, then [`induced_map_at`].
pub fn induced_map(f: &Premorphism, p: &PathWord) -> Result<PathWord> {
    let length = p.len();
    let mut found = None;
    let mut n = 0;
    while f.depth().is_none_or(|d| n <= d) {
        let fnn = f.f(n)?;
        if fnn > length {
            break;
        }
        if fnn == length {
            found = Some(n);
        }
        n += 1;
    }
    match found {
        Some(n) => induced_map_at(f, p, n),
        None => Err(Error::InvalidLength { length }),
    }
}

/// The path `(e_1..e_n)` with `(e_1..e_n, d)` matching `(s_0, p)` under the
/// order isomorphism `E_{0,n} ∘ F_n ≅ F_0 ∘ S_{0,f_n}`.
pub fn induced_map_at(f: &Premorphism, p: &PathWord, n: usize) -> Result<PathWord> {
    if !f.is_ordered() {
        return Err(Error::MalformedPremorphism("the induced map needs an ordered premorphism".into()));
    }
    if f.f(n)? != p.len() {
        return Err(Error::InvalidLength { length: p.len() });
    }
    let (source, target) = (f.source(), f.target());
    let w = target.path_end(p)?;
    let mut rank = path_rank(target, p)?;
    let h = source.root_path_counts(n)?;
    for &y in f.edge_set(n)?.fiber(w) {
        if rank < h[y] {
            return path_unrank(source, n, y, &rank);
        }
        rank -= &h[y];
    }
    Err(Error::MalformedPremorphism(format!("fiber of F_{n} over the end of {:?} is too short", p.edges())))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableLevel {
    pub level: usize,
    /// Length of the target paths listed at this level.
    pub length: usize,
    /// `(path in the target, its image in the source)`.
    pub rows: Vec<(PathWord, PathWord)>,
}

/// A path correspondence from the target's path space to the source's,
/// given levelwise on finite words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathTable {
    pub levels: Vec<TableLevel>,
}

/// Tabulates [`induced_map_at`] on levels `0..=n_max`.
pub fn induced_table(f: &Premorphism, n_max: usize) -> Result<PathTable> {
    let cap = f.depth().map_or(n_max, |d| n_max.min(d));
    let levels = (0..=cap)
        .map(|n| {
            let length = f.f(n)?;
            let rows = f
                .target()
                .root_paths(length)?
                .into_iter()
                .map(|q| induced_map_at(f, &q, n).map(|x| (q, x)))
                .collect::<Result<_>>()?;
            Ok(TableLevel { level: n, length, rows })
        })
        .collect::<Result<_>>()?;
    Ok(PathTable { levels })
}

/// Recovers an ordered premorphism `B -> C` from a path table, choosing at
/// each level the least `f_n` at which the table factors through truncation
/// and cuts every target tower into whole source towers.
pub fn extract_premorphism(
    b: Arc<OrderedBratteliDiagram>,
    c: Arc<OrderedBratteliDiagram>,
    table: &PathTable,
) -> Result<Premorphism> {
    let bad = |msg: String| Error::InconsistentTable(msg);
    if table.levels.is_empty() {
        return Err(bad("empty table".into()));
    }
    let mut maps: Vec<HashMap<PathWord, PathWord>> = Vec::new();
    for (n, lvl) in table.levels.iter().enumerate() {
        if lvl.level != n {
            return Err(bad(format!("levels must run 0,1,2,...; found {} in position {n}", lvl.level)));
        }
        let mut map = HashMap::new();
        for (q, x) in &lvl.rows {
            c.path_end(q).map_err(|e| bad(format!("level {n}: {e}")))?;
            b.path_end(x).map_err(|e| bad(format!("level {n}: {e}")))?;
            if q.len() != lvl.length || x.len() != n {
                return Err(bad(format!("level {n}: row {:?} -> {:?} has the wrong lengths", q.edges(), x.edges())));
            }
            if map.insert(q.clone(), x.clone()).is_some() {
                return Err(bad(format!("level {n}: path {:?} listed twice", q.edges())));
            }
        }
        let total = c.path_count(lvl.length)?;
        if BigInt::from(map.len()) != total {
            return Err(bad(format!("level {n}: {} rows for {total} paths of length {}", map.len(), lvl.length)));
        }
        if n > 0 {
            let prev = &table.levels[n - 1];
            if prev.length > lvl.length {
                return Err(bad(format!("level {n}: path length {} below the previous {}", lvl.length, prev.length)));
            }
            for (q, x) in &map {
                if maps[n - 1][&q.truncate(prev.length)] != x.truncate(n - 1) {
                    return Err(bad(format!(
                        "level {n}: image of {:?} does not extend the image of its prefix",
                        q.edges()
                    )));
                }
            }
        }
        maps.push(map);
    }

    let depth = table.levels.len() - 1;
    let mut values = Vec::new();
    let mut sets = Vec::new();
    for (n, lvl) in table.levels.iter().enumerate() {
        let h = b.root_path_counts(n)?;
        let start = values.last().copied().unwrap_or(0);
        let mut last_err = None;
        let mut chosen = None;
        for f in start..=lvl.length {
            match passages_at(&b, &c, &maps[n], n, f, &h) {
                Ok(set) => {
                    chosen = Some((f, set));
                    break;
                }
                Err(e) => last_err = Some(e),
            }
        }
        let Some((f, set)) = chosen else {
            return Err(last_err.unwrap_or_else(|| bad(format!("level {n}: no admissible level"))));
        };
        values.push(f);
        sets.push(set);
    }
    let source = match b.depth() {
        Some(d) if d == depth => b,
        _ => Arc::new(b.truncate(depth)?),
    };
    Premorphism::new(source, c, LevelMap::new(values, None)?, sets, None, true)
}

/// `F_n` when the table at level `n` factors through length `f`.
fn passages_at(
    b: &OrderedBratteliDiagram,
    c: &OrderedBratteliDiagram,
    map: &HashMap<PathWord, PathWord>,
    n: usize,
    f: usize,
    h: &[BigInt],
) -> Result<EdgeSet> {
    let bad = |msg: String| Error::InconsistentTable(msg);
    let mut image: HashMap<PathWord, &PathWord> = HashMap::new();
    for (q, x) in map {
        if let Some(old) = image.insert(q.truncate(f), x) {
            if old != x {
                return Err(bad(format!("level {n}: table does not factor through length {f}")));
            }
        }
    }
    let towers = canonical_partition(c, f)?;
    let mut fibers = Vec::new();
    for tower in towers.towers() {
        let mut fiber = Vec::new();
        let mut j = 0;
        while j < tower.height() {
            let x = image[&tower.floors[j]];
            let y = b.path_end(x)?;
            let height = small(h[y].clone())?;
            for i in 0..height {
                let ok =
                    tower.floors.get(j + i).map(|q| image[q]).is_some_and(|z| {
                        b.path_end(z).ok() == Some(y) && path_rank(b, z).ok() == Some(BigInt::from(i))
                    });
                if !ok {
                    return Err(bad(format!(
                        "level {n}: tower {} floor {} breaks the passage through source tower {}",
                        tower.name,
                        j + i,
                        b.vertex_name(n, y)?
                    )));
                }
            }
            fiber.push(y);
            j += height;
        }
        fibers.push(fiber);
    }
    Ok(EdgeSet::new(b.vertex_count(n)?, fibers))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::LevelSequence;
    use crate::gen::{fibonacci, odometer};
    use crate::morphism::{equivalent, identity_premorphism, telescoping_premorphism, EquivalenceVariant};

    #[test]
    fn odometer_rebuilds_to_itself() {
        let d = OrderedBratteliDiagram::new(odometer(2));
        let r = rebuild_diagram(&d, 3).unwrap();
        for m in 1..=3 {
            assert_eq!(r.multiplicity_matrix(m).unwrap(), d.multiplicity_matrix(m).unwrap());
        }
        let t = tau(&d, 3).unwrap();
        assert!(t.validate(3).unwrap().is_valid());
        assert!(rebuild_diagram(&d, 0).unwrap().vertex_count(0).unwrap() == 1);
    }

    #[test]
    fn sigma_on_the_odometer() {
        let d = OrderedBratteliDiagram::new(odometer(2));
        let s = sigma(&d, &PathWord::new(vec![0, 0, 0])).unwrap();
        assert!(s.steps.iter().all(|st| st.offset == 0));
        let s = sigma(&d, &PathWord::new(vec![1, 0])).unwrap();
        assert_eq!(s.steps[1].floor, 1);
        assert_eq!(s.steps[1].offset, 0);
        assert_eq!(s.path, PathWord::new(vec![1, 0]));
    }

    #[test]
    fn induced_map_of_identity_and_telescope() {
        let d = Arc::new(OrderedBratteliDiagram::new(fibonacci()));
        let id = identity_premorphism(d.clone());
        for p in d.root_paths(3).unwrap() {
            assert_eq!(induced_map(&id, &p).unwrap(), p);
        }
        let (t, f) = telescoping_premorphism(d.clone(), &LevelSequence::multiples(2).unwrap()).unwrap();
        for p in d.root_paths(4).unwrap() {
            let x = induced_map(&f, &p).unwrap();
            assert_eq!(x.len(), 2);
            assert_eq!(t.path_end(&x).unwrap(), d.path_end(&p).unwrap());
        }
        assert!(matches!(induced_map(&f, &d.root_paths(3).unwrap()[0]), Err(Error::InvalidLength { length: 3 })));
    }

    #[test]
    fn extraction_round_trips() {
        let d = Arc::new(OrderedBratteliDiagram::new(odometer(2)));
        let id = identity_premorphism(d.clone());
        let table = induced_table(&id, 4).unwrap();
        let g = extract_premorphism(d.clone(), d.clone(), &table).unwrap();
        assert_eq!(g.level_map().explicit(), &[0, 1, 2, 3, 4]);
        assert!(g.validate(4).unwrap().is_valid());

        let fib = Arc::new(OrderedBratteliDiagram::new(fibonacci()));
        let (t, f) = telescoping_premorphism(fib.clone(), &LevelSequence::multiples(2).unwrap()).unwrap();
        let table = induced_table(&f, 3).unwrap();
        let g = extract_premorphism(t, fib, &table).unwrap();
        assert!(g.validate(3).unwrap().is_valid());
        let f3 = f.truncate(3).unwrap();
        assert!(equivalent(&f3, &g, EquivalenceVariant::Second, 3, 10).unwrap().is_holds());
    }

    #[test]
    fn corrupted_row_is_rejected() {
        let d = Arc::new(OrderedBratteliDiagram::new(odometer(2)));
        let mut table = induced_table(&identity_premorphism(d.clone()), 2).unwrap();
        let rows = &mut table.levels[2].rows;
        let a = rows[0].1.clone();
        rows[0].1 = rows[1].1.clone();
        rows[1].1 = a;
        assert!(matches!(extract_premorphism(d.clone(), d, &table), Err(Error::InconsistentTable(_))));
    }
}
