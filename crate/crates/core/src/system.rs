//! A product together with named brackets and named linear maps.

use std::collections::BTreeMap;

use crate::bracket::SkewBracket;
use crate::derivation::DerivationMatrix;
use crate::error::{Error, Result};
use crate::product::ProductTensor;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraSystem {
    product: ProductTensor,
    brackets: BTreeMap<String, SkewBracket>,
    derivations: BTreeMap<String, DerivationMatrix>,
    basis_labels: Option<Vec<String>>,
}

impl AlgebraSystem {
    pub fn new(product: ProductTensor) -> Self {
        AlgebraSystem { product, brackets: BTreeMap::new(), derivations: BTreeMap::new(), basis_labels: None }
    }

    pub fn dim(&self) -> usize {
        self.product.dim()
    }

    pub fn product(&self) -> &ProductTensor {
        &self.product
    }

    pub fn brackets(&self) -> &BTreeMap<String, SkewBracket> {
        &self.brackets
    }

    pub fn derivations(&self) -> &BTreeMap<String, DerivationMatrix> {
        &self.derivations
    }

    pub fn basis_labels(&self) -> Option<&[String]> {
        self.basis_labels.as_deref()
    }

    pub fn bracket(&self, name: &str) -> Result<&SkewBracket> {
        self.brackets.get(name).ok_or_else(|| Error::UnknownBracket(name.to_string()))
    }

    pub fn derivation(&self, name: &str) -> Result<&DerivationMatrix> {
        self.derivations.get(name).ok_or_else(|| Error::UnknownDerivation(name.to_string()))
    }

    /// Adds or replaces a bracket.
    pub fn with_bracket(mut self, name: impl Into<String>, bracket: SkewBracket) -> Result<Self> {
        if bracket.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: bracket.dim() });
        }
        self.brackets.insert(name.into(), bracket);
        Ok(self)
    }

    /// Adds or replaces a derivation.
    pub fn with_derivation(mut self, name: impl Into<String>, derivation: DerivationMatrix) -> Result<Self> {
        if derivation.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: derivation.dim() });
        }
        self.derivations.insert(name.into(), derivation);
        Ok(self)
    }

    pub fn with_basis_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: labels.len() });
        }
        self.basis_labels = Some(labels);
        Ok(self)
    }
}
