//! Matrix-form diagrams: positive column vectors `V_1, V_2, ...` and
//! embedding matrices `E_n` from `V_n` to `V_{n+1}`, restricted to the
//! class where `E_n V_n = V_{n+1}` and no column of `E_n` vanishes.
//!
//! In graph form level 0 is a root with `a_i` edges to the `i`-th vertex of
//! level 1, and `E_n` becomes the multiplicity matrix of level `n + 1`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde_json::Value;

use crate::diagram::{BratteliDiagram, Edge, Presentation};
use crate::error::{Error, Result};
use crate::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFormDiagram {
    pub presentation: Presentation,
    /// `V_1, V_2, ...`
    pub vectors: Vec<Vec<BigInt>>,
    /// `E_1, E_2, ...`, `E_n` of shape `|V_{n+1}| x |V_n|`.
    pub matrices: Vec<IntMatrix>,
}

impl MatrixFormDiagram {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidMatrixForm(m));
        let levels = self.presentation.stored_depth();
        if let Presentation::EventuallyPeriodic { prefix: 0, .. } = self.presentation {
            return bad("matrix form starts at level 1, so a periodic presentation needs prefix >= 1".into());
        }
        if self.vectors.len() != levels {
            return bad(format!("presentation stores levels 1..={levels}, got {} vectors", self.vectors.len()));
        }
        if self.matrices.len() + 1 != self.vectors.len().max(1) {
            return bad(format!(
                "{} vectors need {} matrices",
                self.vectors.len(),
                self.vectors.len().saturating_sub(1)
            ));
        }
        for (n, v) in self.vectors.iter().enumerate() {
            if v.is_empty() || v.iter().any(|a| !a.is_positive()) {
                return bad(format!("V_{} must be a non-empty vector of positive integers", n + 1));
            }
        }
        for (i, m) in self.matrices.iter().enumerate() {
            let n = i + 1;
            let (from, to) = (&self.vectors[i], &self.vectors[i + 1]);
            if m.cols() != from.len() || m.rows() != to.len() {
                return bad(format!("E_{n} is {}x{}, expected {}x{}", m.rows(), m.cols(), to.len(), from.len()));
            }
            if m.to_rows().iter().flatten().any(|x| x.is_negative()) {
                return bad(format!("E_{n} has a negative entry"));
            }
            if let Some(c) = (0..m.cols()).find(|&c| m.is_zero_column(c)) {
                return bad(format!("E_{n} has a zero column {c}"));
            }
            if m.mul_vec(from) != *to {
                return bad(format!("E_{n} V_{n} differs from V_{}", n + 1));
            }
        }
        if let Presentation::EventuallyPeriodic { prefix, period } = self.presentation {
            if self.vectors[prefix - 1].len() != self.vectors[prefix + period - 1].len() {
                return bad(format!("levels {prefix} and {} must have equal ranks", prefix + period));
            }
        }
        Ok(())
    }
}

/// Vertex `(n, i, a_i)` is named `n.i`; `a_i` edges join the root to the
/// `i`-th vertex of level 1.
pub fn from_matrix_form(m: &MatrixFormDiagram) -> Result<BratteliDiagram> {
    m.validate()?;
    let mut vertices = vec![vec!["0.1".to_string()]];
    for (i, v) in m.vectors.iter().enumerate() {
        vertices.push((1..=v.len()).map(|j| format!("{}.{j}", i + 1)).collect());
    }
    let count = |x: &BigInt| {
        x.to_usize().ok_or_else(|| Error::InvalidMatrixForm(format!("multiplicity {x} is too large to materialize")))
    };
    let mut edges = Vec::new();
    let mut first = Vec::new();
    for (dst, a) in m.vectors[0].iter().enumerate() {
        first.extend(std::iter::repeat_n(Edge { src: 0, dst }, count(a)?));
    }
    edges.push(first);
    for e in &m.matrices {
        let mut level = Vec::new();
        for dst in 0..e.rows() {
            for src in 0..e.cols() {
                level.extend(std::iter::repeat_n(Edge { src, dst }, count(e.get(dst, src))?));
            }
        }
        edges.push(level);
    }
    BratteliDiagram::new(m.presentation, vertices, edges)
}

/// Root path counts as the vectors, multiplicity matrices as embeddings.
pub fn to_matrix_form(d: &BratteliDiagram) -> Result<MatrixFormDiagram> {
    let depth = d.presentation().stored_depth();
    if depth == 0 {
        return Err(Error::InvalidMatrixForm("a root-only diagram has no level 1".into()));
    }
    if let Presentation::EventuallyPeriodic { prefix: 0, .. } = d.presentation() {
        return Err(Error::InvalidMatrixForm(
            "periodic from level 0; telescope or re-present with prefix >= 1 first".into(),
        ));
    }
    let vectors = (1..=depth).map(|n| d.root_path_counts(n)).collect::<Result<Vec<_>>>()?;
    let matrices = (2..=depth).map(|n| d.multiplicity_matrix(n)).collect::<Result<Vec<_>>>()?;
    Ok(MatrixFormDiagram { presentation: d.presentation(), vectors, matrices })
}

fn int_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

fn int_from(v: &Value) -> Result<BigInt> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(Error::InvalidMatrixForm(format!("expected an integer, got {other}"))),
    };
    text.parse().map_err(|e| Error::InvalidMatrixForm(format!("{text:?}: {e}")))
}

/// `{"presentation": ..., "vectors": [[...]], "matrices": [[[...]]]}`; large
/// integers may be written as strings.
pub fn matrix_form_to_json(m: &MatrixFormDiagram) -> String {
    let presentation = match m.presentation {
        Presentation::Finite { depth } => serde_json::json!({"kind": "finite", "depth": depth}),
        Presentation::EventuallyPeriodic { prefix, period } => {
            serde_json::json!({"kind": "eventually-periodic", "prefix": prefix, "period": period})
        }
    };
    let vectors: Vec<Value> = m.vectors.iter().map(|v| Value::Array(v.iter().map(int_value).collect())).collect();
    let matrices: Vec<Value> = m
        .matrices
        .iter()
        .map(|e| Value::Array(e.to_rows().iter().map(|r| Value::Array(r.iter().map(int_value).collect())).collect()))
        .collect();
    let mut map = serde_json::Map::new();
    map.insert("presentation".into(), presentation);
    map.insert("vectors".into(), Value::Array(vectors));
    map.insert("matrices".into(), Value::Array(matrices));
    let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("json values serialize");
    s.push('\n');
    s
}

pub fn parse_matrix_form(text: &str) -> Result<MatrixFormDiagram> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix form: {e}")))?;
    let arr = |v: &Value, what: &str| -> Result<Vec<Value>> {
        v.as_array().cloned().ok_or_else(|| Error::InvalidMatrixForm(format!("{what} must be an array")))
    };
    let vectors = arr(&v["vectors"], "vectors")?
        .iter()
        .map(|x| arr(x, "a vector")?.iter().map(int_from).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let matrices = arr(&v["matrices"], "matrices")?
        .iter()
        .map(|m| {
            let rows = arr(m, "a matrix")?
                .iter()
                .map(|r| arr(r, "a matrix row")?.iter().map(int_from).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            IntMatrix::from_rows(rows).ok_or_else(|| Error::InvalidMatrixForm("ragged matrix".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let presentation = match &v["presentation"] {
        Value::Null => Presentation::Finite { depth: vectors.len() },
        p => match (p["kind"].as_str(), p["depth"].as_u64(), p["prefix"].as_u64(), p["period"].as_u64()) {
            (Some("finite"), Some(depth), _, _) => Presentation::Finite { depth: depth as usize },
            (Some("eventually-periodic"), _, Some(prefix), Some(period)) => {
                Presentation::EventuallyPeriodic { prefix: prefix as usize, period: period as usize }
            }
            _ => return Err(Error::InvalidMatrixForm(format!("bad presentation {p}"))),
        },
    };
    let m = MatrixFormDiagram { presentation, vectors, matrices };
    m.validate()?;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{fibonacci, random_finite};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn fibonacci_from_vectors() {
        let m = IntMatrix::from_rows(vec![ints(&[1, 1]), ints(&[1, 0])]).unwrap();
        let mf = MatrixFormDiagram {
            presentation: Presentation::Finite { depth: 3 },
            vectors: vec![ints(&[1, 1]), ints(&[2, 1]), ints(&[3, 2])],
            matrices: vec![m.clone(), m.clone()],
        };
        let d = from_matrix_form(&mf).unwrap();
        assert!(d.validate().is_valid());
        let fib = fibonacci();
        for n in 1..=3 {
            assert_eq!(d.multiplicity_matrix(n).unwrap(), fib.multiplicity_matrix(n).unwrap());
        }
    }

    #[test]
    fn single_vertex_chain() {
        let mf = MatrixFormDiagram {
            presentation: Presentation::Finite { depth: 2 },
            vectors: vec![ints(&[1]), ints(&[1])],
            matrices: vec![IntMatrix::from_rows(vec![ints(&[1])]).unwrap()],
        };
        let d = from_matrix_form(&mf).unwrap();
        assert_eq!(d.path_count(2).unwrap(), BigInt::from(1));
    }

    #[test]
    fn non_exact_growth_is_rejected() {
        let mf = MatrixFormDiagram {
            presentation: Presentation::Finite { depth: 2 },
            vectors: vec![ints(&[1]), ints(&[3])],
            matrices: vec![IntMatrix::from_rows(vec![ints(&[2])]).unwrap()],
        };
        assert!(matches!(from_matrix_form(&mf), Err(Error::InvalidMatrixForm(_))));
    }

    #[test]
    fn graph_matrix_graph_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..50 {
            let depth = rand::Rng::gen_range(&mut rng, 1..=5);
            let d = random_finite(&mut rng, depth, 3, 3);
            let mf = to_matrix_form(&d).unwrap();
            let back = from_matrix_form(&mf).unwrap();
            for n in 1..=depth {
                assert_eq!(back.multiplicity_matrix(n).unwrap(), d.multiplicity_matrix(n).unwrap());
            }
            assert_eq!(parse_matrix_form(&matrix_form_to_json(&mf)).unwrap(), mf);
        }
    }

    #[test]
    fn zero_vector_entry_rejected() {
        let text = r#"{"vectors":[[0]],"matrices":[]}"#;
        assert!(parse_matrix_form(text).is_err());
    }
}
