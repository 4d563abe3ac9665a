//! The scaled, unital dimension group of a diagram as a direct limit of
//! `Z^{|V_n|}` along the multiplicity matrices.
//!
//! Elements are level-tagged integer vectors. Equality and positivity are
//! semi-decided by pushing to a horizon; exact certificates come from
//! injectivity of the connecting maps and, for primitive stationary
//! diagrams, the sign of the Perron functional outside a dead-band.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::diagram::{BratteliDiagram, Presentation};
use crate::error::{Error, Result};
use crate::morphism::Premorphism;
use crate::order::OrderedBratteliDiagram;
use crate::perron::StationaryInfo;
use crate::verdict::Verdict;
use crate::{IntMatrix, RatMatrix};

/// Class of an integer vector at some level.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    pub level: usize,
    pub coords: Vec<BigInt>,
}

impl Element {
    pub fn new(level: usize, coords: Vec<BigInt>) -> Self {
        Element { level, coords }
    }

    pub fn from_i64(level: usize, coords: &[i64]) -> Self {
        Element { level, coords: coords.iter().map(|&x| BigInt::from(x)).collect() }
    }

    pub fn zero(level: usize, rank: usize) -> Self {
        Element { level, coords: vec![BigInt::zero(); rank] }
    }

    pub fn is_zero_vector(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coords.iter().all(|x| !x.is_negative())
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(BigInt::to_string).collect();
        write!(f, "{}:({})", self.level, c.join(","))
    }
}

impl FromStr for Element {
    type Err = Error;

    /// `level:(a_1,...,a_k)`; the parentheses are optional.
    fn from_str(s: &str) -> Result<Self> {
        let (level, body) = s.split_once(':').ok_or_else(|| Error::Parse(format!("element {s:?} lacks 'level:'")))?;
        let level = level.trim().parse().map_err(|e| Error::Parse(format!("element level {level:?}: {e}")))?;
        let body = body.trim().trim_start_matches('(').trim_end_matches(')');
        let coords = body
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse::<BigInt>().map_err(|e| Error::Parse(format!("coordinate {t:?}: {e}"))))
            .collect::<Result<_>>()?;
        Ok(Element { level, coords })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    /// Level from which every connecting map is injective.
    pub level: usize,
    pub left: Element,
    pub right: Element,
}

impl fmt::Display for Disagreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} != {} and every connecting map from level {} on is injective", self.left, self.right, self.level)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Positivity {
    /// The push to this level is coordinatewise non-negative.
    Push(Element),
    /// The class is zero, seen at this level.
    Zero(usize),
    /// Normalized Perron functional above the dead-band.
    Perron { anchor: usize, value: f64 },
}

impl fmt::Display for Positivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Positivity::Push(e) => write!(f, "push {e} is non-negative"),
            Positivity::Zero(l) => write!(f, "zero class at level {l}"),
            Positivity::Perron { anchor, value } => write!(f, "Perron functional {value:.3e} at level {anchor}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Negativity {
    pub anchor: usize,
    pub value: f64,
}

impl fmt::Display for Negativity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perron functional {:.3e} at level {} is below the dead-band", self.value, self.anchor)
    }
}

pub type PositivityVerdict = Verdict<Positivity, Negativity>;

#[derive(Clone, Debug, PartialEq)]
pub struct ScaleWitness {
    pub element: Positivity,
    pub complement: Positivity,
}

impl fmt::Display for ScaleWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a: {}; u - a: {}", self.element, self.complement)
    }
}

/// `D(B)`: ranks `|V_n|`, connecting maps `M(E_{n+1})`, scale boxes bounded
/// by root path counts, order unit `0:(1)`.
#[derive(Clone, Debug)]
pub struct DimensionGroup {
    diagram: Arc<BratteliDiagram>,
}

impl DimensionGroup {
    pub fn new(diagram: Arc<BratteliDiagram>) -> Self {
        DimensionGroup { diagram }
    }

    pub fn diagram(&self) -> &BratteliDiagram {
        &self.diagram
    }

    pub fn rank(&self, n: usize) -> Result<usize> {
        self.diagram.vertex_count(n)
    }

    /// `φ_n = M(E_{n+1})`.
    pub fn connecting_map(&self, n: usize) -> Result<IntMatrix> {
        self.diagram.multiplicity_matrix(n + 1)
    }

    /// Upper corner `m_n` of the scale box at level `n`.
    pub fn scale(&self, n: usize) -> Result<Vec<BigInt>> {
        self.diagram.root_path_counts(n)
    }

    pub fn unit(&self) -> Element {
        Element::from_i64(0, &[1])
    }

    fn check(&self, e: &Element) -> Result<()> {
        let k = self.rank(e.level)?;
        if e.coords.len() != k {
            return Err(Error::InvalidLevel(format!(
                "level {} has rank {k}, element has {} coordinates",
                e.level,
                e.coords.len()
            )));
        }
        Ok(())
    }

    fn cap(&self, horizon: usize) -> usize {
        self.diagram.depth().map_or(horizon, |d| horizon.min(d))
    }

    pub fn push(&self, e: &Element, m: usize) -> Result<Element> {
        self.check(e)?;
        if m < e.level {
            return Err(Error::InvalidLevel(format!("cannot push from level {} down to {m}", e.level)));
        }
        let mut coords = e.coords.clone();
        for j in e.level + 1..=m {
            coords = self.diagram.multiplicity_matrix(j)?.mul_vec(&coords);
        }
        Ok(Element { level: m, coords })
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        let l = a.level.max(b.level);
        let (a, b) = (self.push(a, l)?, self.push(b, l)?);
        Ok(Element { level: l, coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect() })
    }

    pub fn neg(&self, a: &Element) -> Element {
        Element { level: a.level, coords: a.coords.iter().map(|x| -x).collect() }
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Result<Element> {
        self.add(a, &self.neg(b))
    }

    /// Canonical levels of every `E_j` with `j > from`, for a periodic diagram.
    fn tail_levels(&self, from: usize) -> Option<std::ops::RangeInclusive<usize>> {
        match self.diagram.presentation() {
            Presentation::EventuallyPeriodic { prefix, period } => Some((from + 1).min(prefix + 1)..=prefix + period),
            Presentation::Finite { .. } => None,
        }
    }

    /// Every connecting map out of level `from` and beyond is injective.
    pub fn injective_from(&self, from: usize) -> Result<bool> {
        let Some(levels) = self.tail_levels(from) else { return Ok(false) };
        for j in levels {
            let m = self.diagram.multiplicity_matrix(j)?.map(|x| BigRational::from_integer(x.clone()));
            if !m.is_injective() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equal(&self, a: &Element, b: &Element, horizon: usize) -> Result<Verdict<usize, Disagreement>> {
        let start = a.level.max(b.level);
        let end = self.cap(horizon).max(start);
        for l in start..=end {
            if self.push(a, l)? == self.push(b, l)? {
                return Ok(Verdict::Holds(l));
            }
        }
        if self.injective_from(start)? {
            return Ok(Verdict::Fails(Disagreement {
                level: start,
                left: self.push(a, start)?,
                right: self.push(b, start)?,
            }));
        }
        Ok(Verdict::UnknownUpTo(end))
    }

    /// Positivity: integer push search up to `horizon`, then the Perron
    /// functional when `stationary` data is supplied. Inside the dead-band
    /// `[-tol, tol]` only a certified zero class decides.
    pub fn is_positive(
        &self,
        e: &Element,
        horizon: usize,
        stationary: Option<&StationaryInfo>,
        tol: f64,
    ) -> Result<PositivityVerdict> {
        self.check(e)?;
        if e.is_zero_vector() {
            return Ok(Verdict::Holds(Positivity::Zero(e.level)));
        }
        let end = self.cap(horizon).max(e.level);
        for l in e.level..=end {
            let pushed = self.push(e, l)?;
            if pushed.is_nonnegative() {
                return Ok(Verdict::Holds(if pushed.is_zero_vector() {
                    Positivity::Zero(l)
                } else {
                    Positivity::Push(pushed)
                }));
            }
        }
        let (Some(info), Presentation::EventuallyPeriodic { prefix, period }) =
            (stationary, self.diagram.presentation())
        else {
            return Ok(Verdict::UnknownUpTo(end));
        };
        if info.vector.len() != self.rank(prefix)? {
            return Err(Error::LevelMismatch { left: info.vector.len(), right: self.rank(prefix)? });
        }
        let base = e.level.max(prefix);
        let anchor = base + (period - (base - prefix) % period) % period;
        let a = self.push(e, anchor)?;
        if a.is_zero_vector() {
            return Ok(Verdict::Holds(Positivity::Zero(anchor)));
        }
        let norm: BigInt = a.coords.iter().map(|x| x.abs()).sum();
        let value = a.coords.iter().zip(&info.vector).map(|(x, v)| ratio(x, &norm) * v).sum::<f64>();
        if value > tol {
            return Ok(Verdict::Holds(Positivity::Perron { anchor, value }));
        }
        if value < -tol {
            return Ok(Verdict::Fails(Negativity { anchor, value }));
        }
        match self.equal(e, &Element::zero(e.level, e.coords.len()), horizon)? {
            Verdict::Holds(l) => Ok(Verdict::Holds(Positivity::Zero(l))),
            _ => Ok(Verdict::UnknownUpTo(end)),
        }
    }

    /// `0 ≤ a ≤ u`, decided as positivity of `a` and of `u − a`.
    pub fn in_scale(
        &self,
        e: &Element,
        horizon: usize,
        stationary: Option<&StationaryInfo>,
        tol: f64,
    ) -> Result<Verdict<ScaleWitness, Negativity>> {
        let lower = self.is_positive(e, horizon, stationary, tol)?;
        let upper = self.is_positive(&self.sub(&self.unit(), e)?, horizon, stationary, tol)?;
        Ok(match (lower, upper) {
            (Verdict::Fails(n), _) | (_, Verdict::Fails(n)) => Verdict::Fails(n),
            (Verdict::Holds(element), Verdict::Holds(complement)) => {
                Verdict::Holds(ScaleWitness { element, complement })
            }
            (Verdict::UnknownUpTo(l), _) | (_, Verdict::UnknownUpTo(l)) => Verdict::UnknownUpTo(l),
        })
    }

    /// Smallest level reachable by exact pull-backs through injective
    /// connecting maps with integral solutions.
    pub fn normal_form(&self, e: &Element) -> Result<Element> {
        self.check(e)?;
        let mut at = e.clone();
        while at.level > 0 {
            let m = self.diagram.multiplicity_matrix(at.level)?;
            let q = m.map(|x| BigRational::from_integer(x.clone()));
            let rhs: Vec<BigRational> = at.coords.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            let Some(x) = solve_integral(&q, &rhs) else { break };
            at = Element { level: at.level - 1, coords: x };
        }
        Ok(at)
    }
}

fn solve_integral(m: &RatMatrix, rhs: &[BigRational]) -> Option<Vec<BigInt>> {
    let x = m.solve_unique(rhs)?;
    x.iter().all(|r| r.is_integer()).then(|| x.iter().map(|r| r.to_integer()).collect())
}

fn ratio(x: &BigInt, norm: &BigInt) -> f64 {
    let r = BigRational::new(x.clone(), norm.clone());
    r.to_f64().unwrap_or(0.0)
}

/// `D(h)`: `(n, a) ↦ (f_n, M(F_n)·a)`.
pub fn apply_morphism(h: &Premorphism, e: &Element) -> Result<Element> {
    let m = h.multiplicity_matrix(e.level)?;
    if m.cols() != e.coords.len() {
        return Err(Error::InvalidLevel(format!(
            "level {} has rank {}, element has {} coordinates",
            e.level,
            m.cols(),
            e.coords.len()
        )));
    }
    Ok(Element { level: h.f(e.level)?, coords: m.mul_vec(&e.coords) })
}

/// `K⁰` of the Vershik system, identified with `D(B)` with its unit marked
/// distinguished; only offered when essential simplicity is certified.
#[derive(Clone, Debug)]
pub struct K0Group {
    pub group: DimensionGroup,
    pub unit: Element,
}

pub fn k0_of_system(d: &OrderedBratteliDiagram, horizon: usize) -> Result<K0Group> {
    match d.is_essentially_simple(horizon) {
        Verdict::Holds(_) => {
            let group = DimensionGroup::new(Arc::new(d.base().clone()));
            let unit = group.unit();
            Ok(K0Group { group, unit })
        }
        Verdict::Fails(w) => Err(Error::NotCertified(format!("not essentially simple: {w}"))),
        Verdict::UnknownUpTo(n) => Err(Error::NotCertified(format!("essential simplicity unknown up to level {n}"))),
    }
}

impl K0Group {
    /// Unit pushed to level `n`: the root path counts.
    pub fn unit_at(&self, n: usize) -> Result<Element> {
        self.group.push(&self.unit, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{double_odometer, fibonacci, fibonacci_proper, odometer};
    use crate::perron::perron_info;

    fn group(d: BratteliDiagram) -> DimensionGroup {
        DimensionGroup::new(Arc::new(d))
    }

    #[test]
    fn parse_and_print() {
        let e: Element = "2:(3,-1)".parse().unwrap();
        assert_eq!(e, Element::from_i64(2, &[3, -1]));
        assert_eq!(e.to_string(), "2:(3,-1)");
    }

    #[test]
    fn odometer_equality() {
        let g = group(odometer(2));
        assert_eq!(g.push(&Element::from_i64(1, &[1]), 2).unwrap(), Element::from_i64(2, &[2]));
        assert_eq!(g.equal(&Element::from_i64(1, &[1]), &Element::from_i64(2, &[2]), 5).unwrap(), Verdict::Holds(2));
        assert!(g.equal(&Element::from_i64(1, &[1]), &Element::from_i64(1, &[2]), 5).unwrap().is_fails());
    }

    #[test]
    fn fibonacci_equality_fails() {
        let g = group(fibonacci());
        assert!(g.equal(&Element::from_i64(1, &[1, 0]), &Element::from_i64(1, &[0, 1]), 6).unwrap().is_fails());
    }

    #[test]
    fn fibonacci_positivity() {
        let g = group(fibonacci());
        let info = perron_info(&fibonacci(), 1e-12).unwrap();
        match g.is_positive(&Element::from_i64(1, &[1, -1]), 6, None, 1e-9).unwrap() {
            Verdict::Holds(Positivity::Push(e)) => assert_eq!(e, Element::from_i64(2, &[0, 1])),
            v => panic!("{v:?}"),
        }
        assert!(g.is_positive(&Element::from_i64(1, &[-1, 1]), 6, Some(&info), 1e-9).unwrap().is_fails());
        assert!(g.is_positive(&Element::from_i64(1, &[-1, 1]), 6, None, 1e-9).unwrap().is_unknown());
        assert!(g.is_positive(&Element::from_i64(3, &[0, 0]), 1, None, 1e-9).unwrap().is_holds());
    }

    #[test]
    fn odometer_scale() {
        let g = group(odometer(2));
        let info = perron_info(&odometer(2), 1e-12).unwrap();
        assert!(g.in_scale(&g.unit(), 3, None, 1e-9).unwrap().is_holds());
        assert!(g.in_scale(&Element::from_i64(1, &[3]), 6, Some(&info), 1e-9).unwrap().is_fails());
        assert!(g.in_scale(&Element::from_i64(2, &[1]), 6, None, 1e-9).unwrap().is_holds());
    }

    #[test]
    fn normal_forms_pull_back() {
        let g = group(odometer(2));
        assert_eq!(g.normal_form(&Element::from_i64(3, &[4])).unwrap(), Element::from_i64(1, &[1]));
        assert_eq!(g.normal_form(&Element::from_i64(3, &[3])).unwrap(), Element::from_i64(3, &[3]));
        let f = group(fibonacci());
        assert_eq!(f.normal_form(&Element::from_i64(2, &[2, 1])).unwrap(), Element::from_i64(0, &[1]));
    }

    #[test]
    fn singular_blocks_give_no_certificate() {
        let g = group(double_odometer());
        assert!(g.injective_from(1).unwrap());
        let g = group(crate::gen::single_edge_chain());
        assert!(g.injective_from(0).unwrap());
    }

    #[test]
    fn k0_needs_essential_simplicity() {
        assert!(k0_of_system(&OrderedBratteliDiagram::new(odometer(2)), 6).is_ok());
        let k = k0_of_system(&OrderedBratteliDiagram::new(fibonacci_proper()), 6).unwrap();
        assert_eq!(k.unit_at(1).unwrap(), Element::from_i64(1, &[1, 1]));
        assert!(matches!(k0_of_system(&OrderedBratteliDiagram::new(fibonacci()), 6), Err(Error::NotCertified(_))));
    }
}
