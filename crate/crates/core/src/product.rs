//! Structure constants of the commutative associative product.

use crate::element::ElementVector;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Dense `d × d × d` structure constants: `coeff(i, j, k)` is the coefficient
/// of `e_k` in `e_i · e_j`.
///
/// Commutativity and associativity are not enforced at construction; they are
/// checked by [`crate::axioms::check_commutative_associative`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProductTensor {
    dim: usize,
    coeffs: Vec<Rational>,
    // Nonzero (k, c) pairs of e_i · e_j, indexed by i * dim + j.
    sparse: Vec<Vec<(usize, Rational)>>,
}

impl ProductTensor {
    pub fn zero(dim: usize) -> Self {
        Self::from_fn(dim, |_, _, _| Rational::zero())
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> Rational) -> Self {
        let mut coeffs = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    coeffs.push(f(i, j, k));
                }
            }
        }
        Self::from_flat(dim, coeffs)
    }

    /// Builds from nested `[i][j][k]` arrays, validating the shape.
    pub fn from_nested(dim: usize, nested: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        if nested.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: nested.len() });
        }
        let mut coeffs = Vec::with_capacity(dim * dim * dim);
        for row in nested {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            for fibre in row {
                if fibre.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: fibre.len() });
                }
                coeffs.extend(fibre);
            }
        }
        Ok(Self::from_flat(dim, coeffs))
    }

    fn from_flat(dim: usize, coeffs: Vec<Rational>) -> Self {
        let sparse = coeffs
            .chunks(dim.max(1))
            .take(dim * dim)
            .map(|fibre| fibre.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, c.clone())).collect())
            .collect();
        ProductTensor { dim, coeffs, sparse }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.coeffs[(i * self.dim + j) * self.dim + k]
    }

    /// Nested `[i][j][k]` copy of the constants.
    pub fn to_nested(&self) -> Vec<Vec<Vec<Rational>>> {
        let d = self.dim;
        (0..d).map(|i| (0..d).map(|j| (0..d).map(|k| self.coeff(i, j, k).clone()).collect()).collect()).collect()
    }

    /// `e_i · e_j` as a vector.
    pub fn basis_product(&self, i: usize, j: usize) -> ElementVector {
        let mut out = ElementVector::zero(self.dim);
        for (k, c) in &self.sparse[i * self.dim + j] {
            out[*k] = c.clone();
        }
        out
    }

    pub fn multiply(&self, x: &ElementVector, y: &ElementVector) -> Result<ElementVector> {
        x.ensure_dim(self.dim)?;
        y.ensure_dim(self.dim)?;
        Ok(self.mul(x, y))
    }

    /// Bilinear product without shape checks.
    pub(crate) fn mul(&self, x: &ElementVector, y: &ElementVector) -> ElementVector {
        let d = self.dim;
        let mut out = ElementVector::zero(d);
        for (i, xi) in x.support() {
            for (j, yj) in y.support() {
                let fibre = &self.sparse[i * d + j];
                if fibre.is_empty() {
                    continue;
                }
                let w = xi * yj;
                for (k, c) in fibre {
                    out[*k] += &w * c;
                }
            }
        }
        out
    }
}
