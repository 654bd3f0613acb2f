//! Lexicographic enumeration of basis-index tuples with first-failure search.

use std::ops::Range;

use rayon::prelude::*;

use crate::element::ElementVector;
use crate::error::{Error, Result};
use crate::tuples::{decode_lex, tuple_count};

/// Which tuples of `0..dim` of length `len` get evaluated.
pub(crate) struct Plan {
    pub len: usize,
    pub blocks: Vec<Range<usize>>,
    /// Blocks must be strictly increasing (not merely pruned).
    pub strict: bool,
    /// Restrict blocks to non-decreasing tuples.
    pub prune: bool,
    /// Report the first nonzero output coordinate as an extra tuple slot.
    pub output_index: bool,
}

impl Plan {
    fn admissible(&self, t: &[usize]) -> bool {
        if self.strict {
            return self.blocks.iter().all(|b| t[b.clone()].windows(2).all(|w| w[0] < w[1]));
        }
        if self.prune {
            return self.blocks.iter().all(|b| t[b.clone()].windows(2).all(|w| w[0] <= w[1]));
        }
        true
    }

    fn filtered(&self) -> bool {
        self.strict || (self.prune && !self.blocks.is_empty())
    }
}

pub(crate) struct Outcome {
    pub checked: u64,
    pub failure: Option<(Vec<usize>, ElementVector)>,
}

/// Evaluates `residual` on admissible tuples in lexicographic order and
/// returns the first nonzero one. The parallel path returns the same answer.
pub(crate) fn search<F>(plan: &Plan, dim: usize, parallel: bool, residual: F) -> Result<Outcome>
where
    F: Fn(&[&ElementVector]) -> ElementVector + Sync,
{
    let total = tuple_count(dim, plan.len)
        .ok_or_else(|| Error::InvalidParameter(format!("{dim}^{} tuples overflow", plan.len)))?;
    let basis: Vec<ElementVector> = (0..dim).map(|i| ElementVector::basis(dim, i)).collect();

    let eval = |linear: u64| -> Option<(u64, Vec<usize>, ElementVector)> {
        let mut t = vec![0usize; plan.len];
        decode_lex(linear, dim, &mut t);
        if !plan.admissible(&t) {
            return None;
        }
        let args: Vec<&ElementVector> = t.iter().map(|&i| &basis[i]).collect();
        let res = residual(&args);
        (!res.is_zero()).then_some((linear, t, res))
    };

    let found = if parallel { (0..total).into_par_iter().find_map_first(eval) } else { (0..total).find_map(eval) };

    let admissible_upto = |end: u64| -> u64 {
        if !plan.filtered() {
            return end;
        }
        let mut t = vec![0usize; plan.len];
        (0..end)
            .filter(|&l| {
                decode_lex(l, dim, &mut t);
                plan.admissible(&t)
            })
            .count() as u64
    };

    Ok(match found {
        None => {
            let checked = admissible_upto(total);
            Outcome { checked: if plan.output_index { checked * dim as u64 } else { checked }, failure: None }
        }
        Some((linear, mut t, res)) => {
            let mut checked = admissible_upto(linear + 1);
            if plan.output_index {
                let k = res.first_nonzero().expect("nonzero residual");
                checked = (checked - 1) * dim as u64 + k as u64 + 1;
                t.push(k);
            }
            Outcome { checked, failure: Some((t, res)) }
        }
    })
}
