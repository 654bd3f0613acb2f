//! Skew-symmetric n-ary brackets stored on strictly increasing index tuples.

use std::collections::BTreeMap;

use crate::element::ElementVector;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::tuples::{binomial, increasing_tuples, sort_with_sign};

/// Sorts `indices` and reports the parity of the sorting permutation.
///
/// The sign is `0` exactly when an index repeats; in that case the tuple is
/// returned unsorted since the bracket vanishes on it anyway.
pub fn canonicalize(indices: &[usize], dim: usize) -> Result<(Vec<usize>, i8)> {
    if let Some(&index) = indices.iter().find(|&&i| i >= dim) {
        return Err(Error::IndexOutOfRange { index, dim });
    }
    let mut sorted = indices.to_vec();
    let sign = sort_with_sign(&mut sorted);
    if sign == 0 {
        return Ok((indices.to_vec(), 0));
    }
    Ok((sorted, sign))
}

/// An arity-`n` skew-symmetric multilinear map on a `d`-dimensional space.
///
/// Only values on strictly increasing basis tuples are stored; every other
/// tuple is reached through [`canonicalize`]. Missing tuples are zero. When
/// `arity > dim` there are no increasing tuples and the bracket is zero.
#[derive(Clone, Debug)]
pub struct SkewBracket {
    dim: usize,
    arity: usize,
    entries: BTreeMap<Vec<usize>, ElementVector>,
    // Sparse values indexed by colex rank of the increasing tuple.
    table: Vec<Vec<(usize, Rational)>>,
}

impl PartialEq for SkewBracket {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.arity == other.arity && self.entries == other.entries
    }
}

impl Eq for SkewBracket {}

fn colex_rank(sorted: &[usize]) -> usize {
    sorted.iter().enumerate().map(|(k, &t)| binomial(t, k + 1)).sum()
}

impl SkewBracket {
    pub fn zero(dim: usize, arity: usize) -> Result<Self> {
        Self::from_entries(dim, arity, std::iter::empty())
    }

    /// Builds a bracket from `(increasing tuple, value)` pairs. Zero values
    /// are dropped.
    pub fn from_entries(
        dim: usize,
        arity: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, ElementVector)>,
    ) -> Result<Self> {
        if arity < 2 {
            return Err(Error::InvalidParameter(format!("bracket arity must be at least 2, got {arity}")));
        }
        let mut map = BTreeMap::new();
        for (key, value) in entries {
            if key.len() != arity {
                return Err(Error::ArityMismatch { expected: arity, found: key.len() });
            }
            if let Some(&index) = key.iter().find(|&&i| i >= dim) {
                return Err(Error::IndexOutOfRange { index, dim });
            }
            if key.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::NotStrictlyIncreasing(key));
            }
            value.ensure_dim(dim)?;
            if map.contains_key(&key) {
                return Err(Error::DuplicateEntry(key));
            }
            if !value.is_zero() {
                map.insert(key, value);
            }
        }
        Ok(Self::from_map(dim, arity, map))
    }

    fn from_map(dim: usize, arity: usize, entries: BTreeMap<Vec<usize>, ElementVector>) -> Self {
        let mut table = vec![Vec::new(); binomial(dim, arity)];
        for (key, value) in &entries {
            table[colex_rank(key)] = value.support().map(|(k, c)| (k, c.clone())).collect();
        }
        SkewBracket { dim, arity, entries, table }
    }

    /// Evaluates `f` on every increasing tuple and stores the nonzero results.
    pub fn from_fn(dim: usize, arity: usize, mut f: impl FnMut(&[usize]) -> ElementVector) -> Result<Self> {
        if arity < 2 {
            return Err(Error::InvalidParameter(format!("bracket arity must be at least 2, got {arity}")));
        }
        let mut map = BTreeMap::new();
        for key in increasing_tuples(dim, arity) {
            let value = f(&key);
            value.ensure_dim(dim)?;
            if !value.is_zero() {
                map.insert(key, value);
            }
        }
        Ok(Self::from_map(dim, arity, map))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Stored nonzero values, keyed by strictly increasing tuple.
    pub fn entries(&self) -> &BTreeMap<Vec<usize>, ElementVector> {
        &self.entries
    }

    /// Value on an increasing tuple, `None` when it is zero.
    pub fn entry(&self, key: &[usize]) -> Option<&ElementVector> {
        self.entries.get(key)
    }

    /// Returns a copy with the value on `key` replaced.
    pub fn with_entry(&self, key: Vec<usize>, value: ElementVector) -> Result<Self> {
        let mut rest: Vec<_> =
            self.entries.iter().filter(|(k, _)| **k != key).map(|(k, v)| (k.clone(), v.clone())).collect();
        rest.push((key, value));
        Self::from_entries(self.dim, self.arity, rest)
    }

    pub fn scaled(&self, scale: &Rational) -> Self {
        let entries = self.entries.iter().map(|(k, v)| (k.clone(), v.scaled(scale)));
        Self::from_entries(self.dim, self.arity, entries).expect("scaling preserves shape")
    }

    /// Value on an arbitrary basis tuple.
    pub fn basis_value(&self, indices: &[usize]) -> Result<ElementVector> {
        if indices.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: indices.len() });
        }
        let (sorted, sign) = canonicalize(indices, self.dim)?;
        let mut out = ElementVector::zero(self.dim);
        if sign != 0 {
            if let Some(v) = self.entries.get(&sorted) {
                out = v.clone();
                if sign < 0 {
                    out = -&out;
                }
            }
        }
        Ok(out)
    }

    /// Multilinear skew-symmetric extension of the stored values.
    pub fn apply(&self, args: &[&ElementVector]) -> Result<ElementVector> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: args.len() });
        }
        for a in args {
            a.ensure_dim(self.dim)?;
        }
        Ok(self.eval(args))
    }

    /// Unchecked evaluation; callers guarantee shapes.
    pub(crate) fn eval(&self, args: &[&ElementVector]) -> ElementVector {
        let mut out = ElementVector::zero(self.dim);
        if self.entries.is_empty() {
            return out;
        }
        let mut chosen = vec![0usize; self.arity];
        let mut scratch = vec![0usize; self.arity];
        let mut used = vec![false; self.dim];
        self.expand(args, 0, &Rational::one(), &mut chosen, &mut scratch, &mut used, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn expand(
        &self,
        args: &[&ElementVector],
        pos: usize,
        weight: &Rational,
        chosen: &mut [usize],
        scratch: &mut [usize],
        used: &mut [bool],
        out: &mut ElementVector,
    ) {
        if pos == self.arity {
            scratch.copy_from_slice(chosen);
            let sign = sort_with_sign(scratch);
            let value = &self.table[colex_rank(scratch)];
            if value.is_empty() {
                return;
            }
            let w = if sign < 0 { -weight } else { weight.clone() };
            for (k, c) in value {
                out[*k] += &w * c;
            }
            return;
        }
        for (i, c) in args[pos].support() {
            if used[i] {
                continue;
            }
            used[i] = true;
            chosen[pos] = i;
            let w = weight * c;
            self.expand(args, pos + 1, &w, chosen, scratch, used, out);
            used[i] = false;
        }
    }
}
