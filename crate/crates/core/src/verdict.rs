use std::fmt;

/// Three-valued answer of a horizon-bounded predicate on an infinite object.
///
/// `Holds` and `Fails` carry checkable evidence; `UnknownUpTo(n)` reports
/// that nothing could be certified from the first `n` levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<W, C = W> {
    Holds(W),
    Fails(C),
    UnknownUpTo(usize),
}

impl<W, C> Verdict<W, C> {
    pub fn is_holds(&self) -> bool {
        matches!(self, Verdict::Holds(_))
    }

    pub fn is_fails(&self) -> bool {
        matches!(self, Verdict::Fails(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::UnknownUpTo(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Holds(_) => "Holds",
            Verdict::Fails(_) => "Fails",
            Verdict::UnknownUpTo(_) => "UnknownUpTo",
        }
    }

    pub fn map<W2, C2>(self, hold: impl FnOnce(W) -> W2, fail: impl FnOnce(C) -> C2) -> Verdict<W2, C2> {
        match self {
            Verdict::Holds(w) => Verdict::Holds(hold(w)),
            Verdict::Fails(c) => Verdict::Fails(fail(c)),
            Verdict::UnknownUpTo(n) => Verdict::UnknownUpTo(n),
        }
    }
}

impl<W: fmt::Display, C: fmt::Display> fmt::Display for Verdict<W, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds(w) => write!(f, "Holds: {w}"),
            Verdict::Fails(c) => write!(f, "Fails: {c}"),
            Verdict::UnknownUpTo(n) => write!(f, "UnknownUpTo({n})"),
        }
    }
}
