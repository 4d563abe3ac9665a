//! Acceptance criteria 1-9, one PASS/FAIL line each.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bratteli::dimgroup::{apply_morphism, DimensionGroup, Element};
use bratteli::gen::{
    double_odometer, doubled, odometer, random_essentially_simple, random_finite, random_periodic, single_edge_chain,
    swap_premorphism,
};
use bratteli::morphism::{
    equivalent, identity_premorphism, shift_premorphism, telescoping_premorphism, EquivalenceVariant,
    EquivalenceWitness, Premorphism,
};
use bratteli::order::{is_properly_ordered, is_simple, ProperOrderFailure};
use bratteli::perron::perron_info;
use bratteli::vershik::{
    canonical_partition, compose_tower_edges, induced_map, rebuild_diagram, sigma, successor, tau, tower_edge_set,
    Successor,
};
use bratteli::{BratteliDiagram, IntMatrix, LevelSequence, OrderedBratteliDiagram, PathWord, Verdict};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ordered(d: BratteliDiagram) -> Arc<OrderedBratteliDiagram> {
    Arc::new(OrderedBratteliDiagram::new(d))
}

fn naive_product(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    IntMatrix::from_fn(a.rows(), b.cols(), |i, j| (0..a.cols()).map(|k| a.get(i, k) * b.get(k, j)).sum())
}

fn random_sequence(rng: &mut ChaCha8Rng, depth: usize) -> LevelSequence {
    let mut terms = vec![0];
    terms.extend((1..=depth).filter(|_| rng.gen_bool(0.6)));
    LevelSequence::new(terms, None).unwrap()
}

fn telescoping_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut triples = 0;
    for i in 0..200 {
        let depth = rng.gen_range(1..=6);
        let d = random_finite(&mut rng, depth, 4, 3);
        for k in 0..=depth {
            for l in k..=depth {
                let enumerated = d.path_set(k, l).unwrap().multiplicity_matrix();
                ensure(enumerated == d.path_matrix(k, l).unwrap(), || {
                    format!("diagram {i}: M(E_{{{k},{l}}}) mismatch")
                })?;
                for j in k + 1..l {
                    let split = naive_product(&d.path_matrix(j, l).unwrap(), &d.path_matrix(k, j).unwrap());
                    ensure(enumerated == split, || format!("diagram {i}: split at {j} of E_{{{k},{l}}}"))?;
                    triples += 1;
                }
            }
        }
        let s = random_sequence(&mut rng, depth);
        let once = d.telescope(&s).unwrap();
        let t = random_sequence(&mut rng, once.depth().unwrap());
        let twice = once.telescope(&t).unwrap();
        let direct = d.telescope(&s.compose(&t).unwrap()).unwrap();
        ensure(twice == direct, || format!("diagram {i}: telescope({s}) then ({t}) differs from the composite"))?;
    }
    Ok(format!("200 diagrams, {triples} triples k<j<l, telescope composition law"))
}

fn binary_increment(word: &[usize]) -> Option<Vec<usize>> {
    let mut out = word.to_vec();
    for digit in out.iter_mut() {
        if *digit == 0 {
            *digit = 1;
            return Some(out);
        }
        *digit = 0;
    }
    None
}

fn odometer_oracle() -> Outcome {
    let d = OrderedBratteliDiagram::new(odometer(2));
    let mut words = 0;
    for n in 1..=12 {
        for code in 0u32..(1 << n) {
            let word: Vec<usize> = (0..n).map(|i| ((code >> i) & 1) as usize).collect();
            let got = successor(&d, &PathWord::new(word.clone())).map_err(|e| format!("{word:?}: {e}"))?;
            let expected = match binary_increment(&word) {
                Some(next) => Successor::Next(PathWord::new(next)),
                None => Successor::WrapToMin(PathWord::new(vec![0; n])),
            };
            ensure(got == expected, || format!("{word:?}: got {got}, expected {expected}"))?;
            words += 1;
        }
    }
    Ok(format!("{words} words of length 1..=12, WrapToMin only on all-ones"))
}

fn tower_calculus() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for i in 0..100 {
        let d = OrderedBratteliDiagram::new(random_finite(&mut rng, 3, 3, 3));
        let p: Vec<_> = (1..=3).map(|n| canonical_partition(&d, n).unwrap()).collect();
        let e12 = tower_edge_set(&p[0], &p[1]).map_err(|e| e.to_string())?;
        let e23 = tower_edge_set(&p[1], &p[2]).map_err(|e| e.to_string())?;
        let e13 = tower_edge_set(&p[0], &p[2]).map_err(|e| e.to_string())?;
        let composed = compose_tower_edges(&e12, &e23).map_err(|e| e.to_string())?;
        ensure(e13 == composed, || format!("diagram {i}: E(P1,P3) != E(P1,P2)E(P2,P3)"))?;
        ensure(e13.to_edge_set() == d.path_edge_set(1, 3).unwrap(), || {
            format!("diagram {i}: E(P1,P3) differs from E_{{1,3}}")
        })?;
        for t in 0..e13.fine_towers {
            let mut expected = 0;
            for edge in e13.into_fine(t) {
                ensure(edge.offset == expected, || format!("diagram {i}: offsets are not partial sums of heights"))?;
                expected += p[0].towers()[edge.coarse].height();
            }
            ensure(expected == p[2].towers()[t].height(), || format!("diagram {i}: passages do not fill tower {t}"))?;
        }
    }
    Ok("100 diagrams, E(P1,P3) = E(P1,P2) o E(P2,P3) with offsets and order".into())
}

fn round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let depth = 4;
    for i in 0..100 {
        let d = OrderedBratteliDiagram::new(random_essentially_simple(&mut rng, 1, 2, 3, 2));
        ensure(d.is_essentially_simple(depth).is_holds(), || format!("diagram {i}: generator not essentially simple"))?;
        let rebuilt = rebuild_diagram(&d, depth).map_err(|e| e.to_string())?;
        let t = tau(&d, depth).map_err(|e| e.to_string())?;
        let report = t.validate(depth).unwrap();
        ensure(report.is_valid(), || format!("diagram {i}: tau invalid: {report}"))?;
        for m in 0..=depth {
            ensure(t.multiplicity_matrix(m).unwrap().is_permutation(), || {
                format!("diagram {i}: M(F_{m}) not a permutation")
            })?;
            if m > 0 {
                ensure(rebuilt.multiplicity_matrix(m).unwrap() == d.multiplicity_matrix(m).unwrap(), || {
                    format!("diagram {i}: level {m} multiplicities differ")
                })?;
            }
        }
        let mut seen = std::collections::HashSet::new();
        for p in d.root_paths(depth).unwrap() {
            let s = sigma(&d, &p).map_err(|e| e.to_string())?;
            ensure(s.path == p, || format!("diagram {i}: sigma({:?}) = {:?}", p.edges(), s.path.edges()))?;
            seen.insert(s.path);
        }
        ensure(seen.len() == d.root_paths(depth).unwrap().len(), || format!("diagram {i}: sigma not injective"))?;
    }
    Ok("100 essentially simple diagrams, depth 4: tau permutation matrices, sigma round trip".into())
}

#[derive(Default)]
struct Tally {
    holds: [usize; 3],
    subsequence_shallow: usize,
}

fn equivalence_pair(rng: &mut ChaCha8Rng, i: usize) -> (Premorphism, Premorphism, bool) {
    let n = rng.gen_range(1..=4);
    let d = ordered(random_periodic(rng, 1, 2, 3, 2));
    match i % 4 {
        0 | 3 => {
            let (s1, s2) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
            let f = shift_premorphism(d.clone(), d.clone(), s1).unwrap().truncate(n).unwrap();
            let g = shift_premorphism(d.clone(), d.clone(), s2).unwrap().truncate(n).unwrap();
            if i % 4 == 3 {
                (f.with_ordered(false), g.with_ordered(false), true)
            } else {
                (f, g, true)
            }
        }
        1 => {
            let dd = ordered(doubled(d.base()));
            let f = identity_premorphism(dd.clone()).truncate(n).unwrap();
            let g = swap_premorphism(dd).truncate(n).unwrap();
            (f, g, false)
        }
        _ => {
            let (_, t) = telescoping_premorphism(d.clone(), &LevelSequence::multiples(2).unwrap()).unwrap();
            let shifted = t.then(&shift_premorphism(d.clone(), d.clone(), 1).unwrap()).unwrap();
            (t.truncate(n).unwrap(), shifted.truncate(n).unwrap(), true)
        }
    }
}

fn equivalence_coherence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut tally = Tally::default();
    let variants = [EquivalenceVariant::Subsequence, EquivalenceVariant::Second, EquivalenceVariant::Third];
    for i in 0..100 {
        let (f, g, related) = equivalence_pair(&mut rng, i);
        for h in [&f, &g] {
            let report = h.validate(4).unwrap();
            ensure(report.is_valid(), || format!("pair {i}: invalid premorphism: {report}"))?;
        }
        let m_max = (0..=f.depth().unwrap()).map(|n| f.f(n).unwrap().max(g.f(n).unwrap())).max().unwrap().max(8);
        let verdicts: Vec<Verdict<EquivalenceWitness, std::convert::Infallible>> =
            variants.iter().map(|&v| equivalent(&f, &g, v, 4, m_max).unwrap()).collect();
        let holds: Vec<bool> = verdicts.iter().map(Verdict::is_holds).collect();
        for (k, h) in holds.iter().enumerate() {
            tally.holds[k] += *h as usize;
        }
        ensure(holds[1] == holds[2], || {
            format!("pair {i}: Second {} but Third {}", verdicts[1].label(), verdicts[2].label())
        })?;
        ensure(!holds[0] || (holds[1] && holds[2]), || {
            format!(
                "pair {i}: Subsequence Holds alone; {} / {} / {}; f={} g={}",
                verdicts[0].label(),
                verdicts[1].label(),
                verdicts[2].label(),
                f.level_map(),
                g.level_map()
            )
        })?;
        ensure(holds[1] == related, || {
            format!("pair {i}: Second gives {} for a pair with related = {related}", verdicts[1].label())
        })?;
        if related && !holds[0] {
            tally.subsequence_shallow += 1;
        }
    }
    Ok(format!(
        "100 pairs: Holds counts subsequence/second/third = {}/{}/{}; Second = Third on every pair; no Subsequence-only Holds; {} related pairs too shallow for an alternating chain report UnknownUpTo",
        tally.holds[0], tally.holds[1], tally.holds[2], tally.subsequence_shallow
    ))
}

fn random_element(rng: &mut ChaCha8Rng, group: &DimensionGroup, level: usize) -> Element {
    let k = group.rank(level).unwrap();
    Element::new(level, (0..k).map(|_| BigInt::from(rng.gen_range(-3..=3))).collect())
}

fn functor_d() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let horizon = 10;
    for i in 0..100 {
        let d = ordered(random_periodic(&mut rng, 1, 2, 3, 2));
        let (s1, s2) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
        let (source, f, f_alt) = if i % 2 == 0 {
            let f = shift_premorphism(d.clone(), d.clone(), s1).unwrap();
            let f_alt = shift_premorphism(d.clone(), d.clone(), s1 + 1).unwrap();
            (d.clone(), f, f_alt)
        } else {
            let (t, f) = telescoping_premorphism(d.clone(), &LevelSequence::multiples(2).unwrap()).unwrap();
            let f_alt = f.then(&shift_premorphism(d.clone(), d.clone(), 1).unwrap()).unwrap();
            (t, f, f_alt)
        };
        let g = shift_premorphism(d.clone(), d.clone(), s2).unwrap();
        ensure(equivalent(&f, &f_alt, EquivalenceVariant::Second, 3, horizon).unwrap().is_holds(), || {
            format!("triple {i}: representatives not certified equivalent")
        })?;
        let h = f.then(&g).map_err(|e| e.to_string())?;
        let (db, dc) =
            (DimensionGroup::new(Arc::new(source.base().clone())), DimensionGroup::new(Arc::new(d.base().clone())));
        let level = rng.gen_range(0..=3);
        let e = random_element(&mut rng, &db, level);
        let composite = apply_morphism(&h, &e).unwrap();
        let stepwise = apply_morphism(&g, &apply_morphism(&f, &e).unwrap()).unwrap();
        ensure(dc.equal(&composite, &stepwise, horizon).unwrap().is_holds(), || {
            format!("triple {i}: D(g f) != D(g) D(f) on {e}")
        })?;
        let a = apply_morphism(&f, &e).unwrap();
        let b = apply_morphism(&f_alt, &e).unwrap();
        ensure(dc.equal(&a, &b, horizon).unwrap().is_holds(), || {
            format!("triple {i}: equivalent premorphisms differ on {e}")
        })?;
        let pushed = dc.push(&apply_morphism(&g, &a).unwrap(), horizon).unwrap();
        ensure(pushed == dc.push(&a, horizon).unwrap(), || {
            format!("triple {i}: path premorphism is not the identity on classes")
        })?;
    }
    Ok("100 triples: D(g o f) = D(g) D(f) and D constant on equivalent representatives, exact".into())
}

fn perron_anchor() -> Outcome {
    let info = perron_info(&bratteli::gen::fibonacci(), 1e-12).map_err(|e| e.to_string())?;
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    ensure((info.lambda - phi).abs() <= 1e-6, || format!("lambda = {}", info.lambda))?;
    ensure(info.residual <= 1e-9, || format!("residual {}", info.residual))?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (mut compared, mut excluded, mut blocks) = (0, 0, 0);
    while compared + excluded < 500 {
        let d = random_periodic(&mut rng, 1, 1, 4, 3);
        let Ok(info) = perron_info(&d, 1e-12) else { continue };
        blocks += 1;
        let group = DimensionGroup::new(Arc::new(d));
        for _ in 0..10 {
            let k = group.rank(1).unwrap();
            let e = Element::new(1, (0..k).map(|_| BigInt::from(rng.gen_range(-5..=5))).collect());
            let brute = (1..=60).any(|l| group.push(&e, l).unwrap().is_nonnegative());
            match group.is_positive(&e, 1, Some(&info), 1e-6).unwrap() {
                Verdict::UnknownUpTo(_) => excluded += 1,
                v => {
                    ensure(v.is_holds() == brute, || {
                        format!("{e} on block {}: Perron {} vs pushes {brute}", info.block, v.label())
                    })?;
                    compared += 1;
                }
            }
        }
    }
    Ok(format!(
        "lambda = {:.10}, residual {:.1e}; {compared} vectors on {blocks} primitive blocks agree with 60-level pushes, {excluded} in the dead-band",
        info.lambda, info.residual
    ))
}

fn classification() -> Outcome {
    let o2 = OrderedBratteliDiagram::new(odometer(2));
    let v = is_properly_ordered(&o2, o2.default_horizon());
    ensure(v.is_holds(), || format!("O2: {}", v.label()))?;
    let chain = OrderedBratteliDiagram::new(single_edge_chain());
    match is_properly_ordered(&chain, chain.default_horizon()) {
        Verdict::Fails(ProperOrderFailure::FinitePathSpace { .. }) => {}
        other => return Err(format!("single-edge chain: {}", other.label())),
    }
    let double = OrderedBratteliDiagram::new(double_odometer());
    let simple = is_simple(&double, double.default_horizon());
    let Verdict::Fails(np) = simple else { return Err(format!("double odometer is_simple: {}", simple.label())) };
    ensure(np.pattern == vec![vec![true, false], vec![false, true]], || format!("pattern {:?}", np.pattern))?;
    match double.is_essentially_simple(double.default_horizon()) {
        Verdict::Fails(w) => ensure(w.paths.len() == 2, || format!("{} bifurcating paths", w.paths.len()))?,
        other => return Err(format!("double odometer essentially simple: {}", other.label())),
    }
    Ok("O2 properly ordered; chain fails with a finite path space; double odometer not simple and not essentially simple".into())
}

fn equivariance() -> Outcome {
    let c = ordered(odometer(2));
    let (t, f) = telescoping_premorphism(c.clone(), &LevelSequence::multiples(2).unwrap()).unwrap();
    let mut checked = 0;
    for len in [2, 4, 6, 8] {
        for p in c.root_paths(len).unwrap() {
            let alpha = induced_map(&f, &p).map_err(|e| e.to_string())?;
            let regroup: Vec<usize> = p.edges().chunks(2).map(|pair| pair[0] + 2 * pair[1]).collect();
            ensure(t.path_ranks(&alpha).unwrap() == regroup, || {
                format!("alpha({:?}) is not the base-4 regrouping", p.edges())
            })?;
            if p.edges().iter().all(|&e| e == 1) {
                continue;
            }
            let Successor::Next(next) = successor(&c, &p).unwrap() else { return Err("unexpected wrap".into()) };
            let Successor::Next(image_next) = successor(&t, &alpha).unwrap() else {
                return Err("unexpected wrap".into());
            };
            ensure(induced_map(&f, &next).unwrap() == image_next, || {
                format!("alpha o lambda != lambda o alpha at {:?}", p.edges())
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} non-boundary words of length <= 8"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("telescoping algebra", telescoping_algebra),
        ("odometer successor oracle", odometer_oracle),
        ("tower edge set composition", tower_calculus),
        ("rebuild and tau round trip", round_trip),
        ("equivalence coherence", equivalence_coherence),
        ("functor D", functor_d),
        ("Perron anchor", perron_anchor),
        ("classification predicates", classification),
        ("induced map equivariance", equivariance),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail}) [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({why}) [{secs:.2}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
