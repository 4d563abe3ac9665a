//! Named example diagrams and seeded random generators.

use rand::seq::SliceRandom;
use rand::Rng;

use std::sync::Arc;

use crate::diagram::{BratteliDiagram, Edge, Presentation};
use crate::edgeset::EdgeSet;
use crate::morphism::{LevelMap, Premorphism};
use crate::order::OrderedBratteliDiagram;

fn names(prefix: &str, count: usize) -> Vec<String> {
    (0..count).map(|i| format!("{prefix}{i}")).collect()
}

fn level(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn periodic(prefix: usize, period: usize) -> Presentation {
    Presentation::EventuallyPeriodic { prefix, period }
}

/// The `k`-adic odometer: one vertex per level, `k` parallel edges.
pub fn odometer(k: usize) -> BratteliDiagram {
    let edges = vec![Edge { src: 0, dst: 0 }; k];
    BratteliDiagram::new(periodic(0, 1), vec![level(&["r"]), level(&["v"])], vec![edges]).unwrap()
}

/// One vertex and one edge per level.
pub fn single_edge_chain() -> BratteliDiagram {
    odometer(1)
}

/// Stationary diagram with matrix `[[1,1],[1,0]]`; into `a` the edge from
/// `a` comes before the edge from `b`.
pub fn fibonacci() -> BratteliDiagram {
    let ab = level(&["a", "b"]);
    let e = |src, dst| Edge { src, dst };
    BratteliDiagram::new(
        periodic(1, 1),
        vec![level(&["r"]), ab.clone(), ab],
        vec![vec![e(0, 0), e(0, 1)], vec![e(0, 0), e(1, 0), e(0, 1)]],
    )
    .unwrap()
}

/// The Fibonacci diagram with the order into `a` reversed on every second
/// level, which makes the extreme paths unique.
pub fn fibonacci_proper() -> BratteliDiagram {
    let ab = level(&["a", "b"]);
    let e = |src, dst| Edge { src, dst };
    BratteliDiagram::new(
        periodic(1, 2),
        vec![level(&["r"]), ab.clone(), ab.clone(), ab],
        vec![vec![e(0, 0), e(0, 1)], vec![e(0, 0), e(1, 0), e(0, 1)], vec![e(1, 0), e(0, 0), e(0, 1)]],
    )
    .unwrap()
}

/// Two 2-adic odometers hanging from a common root.
pub fn double_odometer() -> BratteliDiagram {
    let xy = level(&["x", "y"]);
    let e = |src, dst| Edge { src, dst };
    BratteliDiagram::new(
        periodic(1, 1),
        vec![level(&["r"]), xy.clone(), xy],
        vec![vec![e(0, 0), e(0, 1)], vec![e(0, 0), e(0, 0), e(1, 1), e(1, 1)]],
    )
    .unwrap()
}

/// Random multiplicities with every row and column non-zero, as edges in a
/// random in-fiber order. Small multiplicities are favoured.
pub fn random_edges<R: Rng>(rng: &mut R, sources: usize, targets: usize, max_mult: usize) -> Vec<Edge> {
    let mut m = vec![vec![0usize; sources]; targets];
    for row in m.iter_mut() {
        for x in row.iter_mut() {
            *x = if rng.gen_bool(0.45) { 0 } else { rng.gen_range(1..=max_mult.max(1)) };
        }
    }
    for row in m.iter_mut() {
        if row.iter().all(|&x| x == 0) {
            row[rng.gen_range(0..sources)] = 1;
        }
    }
    for v in 0..sources {
        if m.iter().all(|row| row[v] == 0) {
            let w = rng.gen_range(0..targets);
            m[w][v] = 1;
        }
    }
    let mut edges = Vec::new();
    for (dst, row) in m.iter().enumerate() {
        let mut fiber: Vec<Edge> =
            row.iter().enumerate().flat_map(|(src, &k)| std::iter::repeat_n(Edge { src, dst }, k)).collect();
        fiber.shuffle(rng);
        edges.extend(fiber);
    }
    edges
}

fn random_sizes<R: Rng>(rng: &mut R, levels: usize, max_vertices: usize) -> Vec<usize> {
    let mut sizes = vec![1];
    sizes.extend((1..levels).map(|_| rng.gen_range(1..=max_vertices.max(1))));
    sizes
}

fn build<R: Rng>(rng: &mut R, presentation: Presentation, sizes: &[usize], max_mult: usize) -> BratteliDiagram {
    let vertices = sizes.iter().enumerate().map(|(n, &k)| names(&format!("v{n}_"), k)).collect();
    let edges = sizes.windows(2).map(|w| random_edges(rng, w[0], w[1], max_mult)).collect();
    BratteliDiagram::new(presentation, vertices, edges).unwrap()
}

pub fn random_finite<R: Rng>(rng: &mut R, depth: usize, max_vertices: usize, max_mult: usize) -> BratteliDiagram {
    let sizes = random_sizes(rng, depth + 1, max_vertices);
    build(rng, Presentation::Finite { depth }, &sizes, max_mult)
}

pub fn random_periodic<R: Rng>(
    rng: &mut R,
    prefix: usize,
    period: usize,
    max_vertices: usize,
    max_mult: usize,
) -> BratteliDiagram {
    let mut sizes = random_sizes(rng, prefix + period + 1, max_vertices);
    sizes[prefix + period] = sizes[prefix];
    build(rng, periodic(prefix, period), &sizes, max_mult)
}

/// A periodic diagram where every vertex has both its minimal and its
/// maximal incoming edge from vertex 0 of the previous level, so the
/// extreme paths are unique.
pub fn random_essentially_simple<R: Rng>(
    rng: &mut R,
    prefix: usize,
    period: usize,
    max_vertices: usize,
    max_mult: usize,
) -> BratteliDiagram {
    let d = random_periodic(rng, prefix, period, max_vertices, max_mult);
    let mut edges = Vec::new();
    for (n, level) in d.stored_edges().iter().enumerate() {
        let targets = d.stored_vertices()[n + 1].len();
        let mut out = Vec::new();
        for dst in 0..targets {
            let mut others: Vec<Edge> = level.iter().filter(|e| e.dst == dst && e.src != 0).copied().collect();
            let zeros = level.iter().filter(|e| e.dst == dst && e.src == 0).count();
            others.shuffle(rng);
            let anchor = Edge { src: 0, dst };
            out.push(anchor);
            if !others.is_empty() || zeros >= 2 {
                out.extend(others);
                out.extend(std::iter::repeat_n(anchor, zeros.saturating_sub(2)));
                out.push(anchor);
            }
        }
        edges.push(out);
    }
    BratteliDiagram::new(d.presentation(), d.stored_vertices().to_vec(), edges).unwrap()
}

/// Two copies of `d` hanging from a common root; vertex `x` of copy `c`
/// is named `x|c`.
pub fn doubled(d: &BratteliDiagram) -> BratteliDiagram {
    let stored = d.stored_vertices();
    let k: Vec<usize> = stored.iter().map(Vec::len).collect();
    let mut vertices = vec![stored[0].clone()];
    for level in &stored[1..] {
        vertices.push((0..2).flat_map(|c| level.iter().map(move |x| format!("{x}|{c}"))).collect());
    }
    let mut edges = Vec::new();
    for (i, level) in d.stored_edges().iter().enumerate() {
        let mut out = Vec::new();
        for c in 0..2 {
            for e in level {
                let src = if i == 0 { 0 } else { e.src + c * k[i] };
                out.push(Edge { src, dst: e.dst + c * k[i + 1] });
            }
        }
        edges.push(out);
    }
    BratteliDiagram::new(d.presentation(), vertices, edges).unwrap()
}

/// The automorphism of a doubled diagram exchanging the two copies.
pub fn swap_premorphism(dd: Arc<OrderedBratteliDiagram>) -> Premorphism {
    let stored = dd.presentation().stored_depth();
    let sets: Vec<EdgeSet> = (0..=stored)
        .map(|n| {
            let k = dd.vertex_count(n).unwrap();
            if n == 0 {
                EdgeSet::identity(1)
            } else {
                let half = k / 2;
                EdgeSet::new(k, (0..k).map(|w| vec![(w + half) % k]).collect())
            }
        })
        .collect();
    match dd.presentation() {
        Presentation::Finite { depth } => {
            let map = LevelMap::new((0..=depth).collect(), None).unwrap();
            Premorphism::new(dd.clone(), dd, map, sets, None, true).unwrap()
        }
        Presentation::EventuallyPeriodic { period, .. } => {
            Premorphism::new(dd.clone(), dd, LevelMap::identity(), sets, Some(period), true).unwrap()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_diagrams_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..50 {
            assert!(random_finite(&mut rng, 4, 4, 3).validate().is_valid());
            assert!(random_periodic(&mut rng, 1, 2, 3, 2).validate().is_valid());
            assert!(random_essentially_simple(&mut rng, 1, 2, 3, 2).validate().is_valid());
        }
    }

    #[test]
    fn swap_is_a_valid_ordered_premorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let d = doubled(&random_periodic(&mut rng, 1, 2, 3, 2));
            assert!(d.validate().is_valid());
            let swap = swap_premorphism(Arc::new(OrderedBratteliDiagram::new(d)));
            assert!(swap.validate(6).unwrap().is_valid());
        }
    }

    #[test]
    fn named_examples_are_valid() {
        for d in [odometer(2), single_edge_chain(), fibonacci(), fibonacci_proper(), double_odometer()] {
            assert!(d.validate().is_valid(), "{d:?}");
        }
    }
}
