use std::fmt;

use crate::error::{Error, Result};

/// A finite path `e_1 ... e_n` from the root. `edges()[i]` indexes `E_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathWord {
    edges: Vec<usize>,
}

impl PathWord {
    pub fn new(edges: Vec<usize>) -> Self {
        PathWord { edges }
    }

    pub fn empty() -> Self {
        PathWord { edges: Vec::new() }
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn truncate(&self, n: usize) -> PathWord {
        PathWord { edges: self.edges[..n.min(self.edges.len())].to_vec() }
    }

    pub fn into_edges(self) -> Vec<usize> {
        self.edges
    }
}

/// Textual path: comma-separated in-fiber ranks, optionally `@vertex` to
/// name the range vertex, e.g. `0,1,1` or `1,0@b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankWord {
    pub ranks: Vec<usize>,
    pub end: Option<String>,
}

impl std::str::FromStr for RankWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, end) = match s.split_once('@') {
            Some((b, v)) => (b, Some(v.trim().to_string())),
            None => (s, None),
        };
        let body = body.trim().trim_start_matches('(').trim_end_matches(')');
        let ranks = if body.is_empty() {
            Vec::new()
        } else {
            body.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("rank {t:?}: {e}"))))
                .collect::<Result<_>>()?
        };
        Ok(RankWord { ranks, end })
    }
}

impl fmt::Display for RankWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r: Vec<String> = self.ranks.iter().map(usize::to_string).collect();
        write!(f, "{}", r.join(","))?;
        if let Some(v) = &self.end {
            write!(f, "@{v}")?;
        }
        Ok(())
    }
}
