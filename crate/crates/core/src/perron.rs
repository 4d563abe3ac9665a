//! Perron–Frobenius data for the period block of a stationary diagram.
//!
//! The floating-point eigenvector is advisory: callers compare the Perron
//! functional against a dead-band and fall back to exact arithmetic inside it.

use std::fmt;

use num_traits::{Float, ToPrimitive};

use crate::diagram::BratteliDiagram;
use crate::error::{Error, Result};
use crate::order::primitivity;
use crate::IntMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct PerronData<F> {
    /// `M(E_{p,p+q})`, acting on column vectors indexed by `V_p`.
    pub block: IntMatrix,
    /// Least power of the block with every entry positive.
    pub primitive_exponent: usize,
    pub lambda: F,
    /// Left eigenvector, positive, `‖v‖₁ = 1`.
    pub vector: Vec<F>,
    /// `‖vᵀM − λvᵀ‖∞`.
    pub residual: F,
    pub iterations: usize,
}

pub type StationaryInfo = PerronData<f64>;

impl<F: Float> PerronData<F> {
    /// `⟨v, a⟩`.
    pub fn functional(&self, a: &[F]) -> F {
        self.vector.iter().zip(a).fold(F::zero(), |acc, (v, x)| acc + *v * *x)
    }
}

impl<F: Float + fmt::Display> fmt::Display for PerronData<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.vector.iter().map(|x| format!("{x:.9}")).collect();
        write!(
            f,
            "lambda = {:.6}\nv = ({})\nresidual = {:.3e}\nprimitive exponent = {}",
            self.lambda,
            v.join(", "),
            self.residual.to_f64().unwrap_or(f64::NAN),
            self.primitive_exponent
        )
    }
}

/// Power iteration on `Bᵀ` until `‖vᵀB − λvᵀ‖∞ ≤ tol·λ` or `max_iter` steps.
pub fn perron<F: Float>(block: &IntMatrix, tol: F, max_iter: usize) -> Result<PerronData<F>> {
    if block.rows() != block.cols() || block.rows() == 0 {
        return Err(Error::InvalidMatrixForm(format!("period block is {}x{}", block.rows(), block.cols())));
    }
    let exponent = primitivity(&block.support()).map_err(|np| Error::NotPrimitive { pattern: np.pattern })?;
    let k = block.rows();
    let b: Vec<Vec<F>> = (0..k)
        .map(|r| (0..k).map(|c| F::from(block.get(r, c).to_f64().unwrap_or(f64::INFINITY)).unwrap()).collect())
        .collect();
    // (vᵀB)_j = Σ_i v_i B_ij
    let left = |v: &[F]| -> Vec<F> { (0..k).map(|j| (0..k).fold(F::zero(), |acc, i| acc + v[i] * b[i][j])).collect() };
    let n = F::from(k).unwrap();
    let mut v = vec![F::one() / n; k];
    let mut lambda = F::zero();
    let mut residual = F::infinity();
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let w = left(&v);
        lambda = w.iter().fold(F::zero(), |acc, x| acc + *x);
        v = w.into_iter().map(|x| x / lambda).collect();
        let check = left(&v);
        residual = check.iter().zip(&v).fold(F::zero(), |acc, (x, y)| acc.max((*x - lambda * *y).abs()));
        if residual <= tol * lambda {
            break;
        }
    }
    Ok(PerronData { block: block.clone(), primitive_exponent: exponent, lambda, vector: v, residual, iterations })
}

/// Perron data of a periodic diagram's block, with residual below
/// `tol·λ` (or the best reached in 100000 steps).
pub fn perron_info(d: &BratteliDiagram, tol: f64) -> Result<StationaryInfo> {
    let block =
        d.period_block().ok_or_else(|| Error::NotCertified("a finite presentation has no period block".into()))?;
    perron(&block, tol, 100_000)
}
