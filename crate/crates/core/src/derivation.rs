//! Linear endomorphisms given as `d × d` rational matrices.

use crate::element::ElementVector;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A linear map `D` with `entry(k, j)` the coefficient of `e_k` in `D(e_j)`.
///
/// Nothing about the matrix is assumed; whether it is a derivation is decided
/// by [`crate::axioms::check_derivation`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DerivationMatrix {
    dim: usize,
    rows: Vec<Vec<Rational>>,
    columns: Vec<Vec<(usize, Rational)>>,
}

impl DerivationMatrix {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = rows.len();
        for row in &rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
        }
        let columns = (0..dim)
            .map(|j| (0..dim).filter(|&k| !rows[k][j].is_zero()).map(|k| (k, rows[k][j].clone())).collect())
            .collect();
        Ok(DerivationMatrix { dim, rows, columns })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let rows = (0..dim).map(|k| (0..dim).map(|j| f(k, j)).collect()).collect();
        Self::from_rows(rows).expect("square by construction")
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| Rational::zero())
    }

    /// `D(e_k) = weights[k] · e_k`.
    pub fn diagonal(weights: &[Rational]) -> Self {
        Self::from_fn(weights.len(), |k, j| if k == j { weights[k].clone() } else { Rational::zero() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, k: usize, j: usize) -> &Rational {
        &self.rows[k][j]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn scaled(&self, scale: &Rational) -> Self {
        Self::from_fn(self.dim, |k, j| &self.rows[k][j] * scale)
    }

    /// Matrix product `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let d = self.dim;
        Ok(Self::from_fn(d, |k, j| (0..d).map(|m| &self.rows[k][m] * &other.rows[m][j]).sum()))
    }

    pub fn apply(&self, x: &ElementVector) -> Result<ElementVector> {
        x.ensure_dim(self.dim)?;
        Ok(self.eval(x))
    }

    pub(crate) fn eval(&self, x: &ElementVector) -> ElementVector {
        let mut out = ElementVector::zero(self.dim);
        for (j, xj) in x.support() {
            for (k, c) in &self.columns[j] {
                out[*k] += xj * c;
            }
        }
        out
    }
}
