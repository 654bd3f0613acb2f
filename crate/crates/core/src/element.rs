//! Coordinate vectors of algebra elements.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// An element of the ambient space, as coordinates in the fixed basis.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ElementVector(Vec<Rational>);

impl ElementVector {
    pub fn zero(dim: usize) -> Self {
        ElementVector(vec![Rational::zero(); dim])
    }

    /// The basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[index] = Rational::one();
        v
    }

    pub fn from_coords(coords: Vec<Rational>) -> Self {
        ElementVector(coords)
    }

    pub fn from_integers(coords: &[i64]) -> Self {
        ElementVector(coords.iter().map(|&c| Rational::from_integer(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    /// Index of the first nonzero coordinate.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    /// Nonzero coordinates with their indices, in increasing index order.
    pub fn support(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.0.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn ensure_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: dim, found: self.dim() })
        }
    }

    /// `self += scale * other`.
    pub fn add_scaled(&mut self, scale: &Rational, other: &ElementVector) {
        debug_assert_eq!(self.dim(), other.dim());
        if scale.is_zero() {
            return;
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            if !b.is_zero() {
                *a += scale * b;
            }
        }
    }

    pub fn add_assign(&mut self, other: &ElementVector) {
        self.add_scaled(&Rational::one(), other);
    }

    pub fn sub_assign(&mut self, other: &ElementVector) {
        self.add_scaled(&-Rational::one(), other);
    }

    pub fn scaled(&self, scale: &Rational) -> ElementVector {
        ElementVector(self.0.iter().map(|c| c * scale).collect())
    }
}

impl Index<usize> for ElementVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl IndexMut<usize> for ElementVector {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.0[i]
    }
}

impl Add<&ElementVector> for &ElementVector {
    type Output = ElementVector;
    fn add(self, rhs: &ElementVector) -> ElementVector {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl Sub<&ElementVector> for &ElementVector {
    type Output = ElementVector;
    fn sub(self, rhs: &ElementVector) -> ElementVector {
        let mut out = self.clone();
        out.sub_assign(rhs);
        out
    }
}

impl Neg for &ElementVector {
    type Output = ElementVector;
    fn neg(self) -> ElementVector {
        ElementVector(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for ElementVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for ElementVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
