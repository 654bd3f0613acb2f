//! Exhaustive verification of the structural identities.
//!
//! Every checker evaluates `LHS - RHS` of one identity on all basis-index
//! tuples in lexicographic order of the quantified variables. Both sides are
//! multilinear in every quantified element, so vanishing on basis tuples is
//! equivalent to vanishing on the whole space. A failing check reports the
//! lexicographically first tuple with a nonzero residual.

mod engine;
mod identities;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::bracket::SkewBracket;
use crate::derivation::DerivationMatrix;
use crate::element::ElementVector;
use crate::error::{Error, Result};
use crate::product::ProductTensor;
use crate::system::AlgebraSystem;

use engine::Plan;
use identities::Ops;

/// Identities known to the checker, in canonical report order.
#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityId {
    /// Filippov identity of an n-Lie algebra.
    NL,
    /// Transposed Leibniz rule `n h[x..] = Σ [x..h x_i..]`.
    TP,
    /// `Σ (-1)^{i-1} x_i [x_1..x̂_i..x_{n+1}] = 0`.
    NP1,
    NP2,
    NP3,
    NP4,
    /// The strong condition.
    STRONG,
    /// Consequence of the strong condition, symmetric in `y_1, y_2`.
    SCALE,
    /// `D` is a derivation of the product.
    DER_MUL,
    /// `D` is a derivation of the bracket.
    DER_BRK,
    LEM1,
    LEM2,
    COMM,
    ASSOC,
}

impl IdentityId {
    pub const ALL: [IdentityId; 14] = [
        IdentityId::NL,
        IdentityId::TP,
        IdentityId::NP1,
        IdentityId::NP2,
        IdentityId::NP3,
        IdentityId::NP4,
        IdentityId::STRONG,
        IdentityId::SCALE,
        IdentityId::DER_MUL,
        IdentityId::DER_BRK,
        IdentityId::LEM1,
        IdentityId::LEM2,
        IdentityId::COMM,
        IdentityId::ASSOC,
    ];

    /// The identities that make `(product, bracket)` a strong transposed
    /// Poisson algebra together with their consequences.
    pub const STRUCTURE: [IdentityId; 8] = [
        IdentityId::NL,
        IdentityId::TP,
        IdentityId::NP1,
        IdentityId::NP2,
        IdentityId::NP3,
        IdentityId::NP4,
        IdentityId::STRONG,
        IdentityId::SCALE,
    ];

    pub fn as_str(self) -> &'static str {
        use IdentityId::*;
        match self {
            NL => "NL",
            TP => "TP",
            NP1 => "NP1",
            NP2 => "NP2",
            NP3 => "NP3",
            NP4 => "NP4",
            STRONG => "STRONG",
            SCALE => "SCALE",
            DER_MUL => "DER_MUL",
            DER_BRK => "DER_BRK",
            LEM1 => "LEM1",
            LEM2 => "LEM2",
            COMM => "COMM",
            ASSOC => "ASSOC",
        }
    }

    pub fn requires_derivation(self) -> bool {
        use IdentityId::*;
        matches!(self, DER_MUL | DER_BRK | LEM1 | LEM2)
    }

    pub fn requires_bracket(self) -> bool {
        use IdentityId::*;
        !matches!(self, DER_MUL | COMM | ASSOC)
    }

    /// Number of quantified elements for a bracket of arity `n`.
    pub fn tuple_len(self, arity: usize) -> usize {
        identities::tuple_len(self, arity)
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        IdentityId::ALL
            .into_iter()
            .find(|id| id.as_str() == upper)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown identity `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

/// First failing tuple and its (nonzero) residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub tuple: Vec<usize>,
    pub residual: ElementVector,
}

/// Verdict of one identity on one instance.
///
/// For `COMM` and `ASSOC` the tuple carries a trailing output index `k`, the
/// first coordinate where the two sides differ.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub identity: IdentityId,
    pub status: Status,
    pub tuples_checked: u64,
    pub counterexample: Option<Counterexample>,
    pub elapsed: Duration,
}

/// Equality ignores `elapsed`.
impl PartialEq for CheckReport {
    fn eq(&self, other: &Self) -> bool {
        self.identity == other.identity
            && self.status == other.status
            && self.tuples_checked == other.tuples_checked
            && self.counterexample == other.counterexample
    }
}

impl Eq for CheckReport {}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    /// Only enumerate non-decreasing tuples inside alternating argument blocks.
    pub prune: bool,
    /// Split the tuple range across the rayon pool.
    pub parallel: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { prune: false, parallel: true }
    }
}

impl CheckOptions {
    pub fn sequential() -> Self {
        CheckOptions { prune: false, parallel: false }
    }

    pub fn pruned(self) -> Self {
        CheckOptions { prune: true, ..self }
    }
}

/// The operations an identity is evaluated against.
#[derive(Clone, Copy, Debug)]
pub struct Instance<'a> {
    pub product: &'a ProductTensor,
    pub bracket: Option<&'a SkewBracket>,
    pub derivation: Option<&'a DerivationMatrix>,
}

impl<'a> Instance<'a> {
    pub fn new(product: &'a ProductTensor) -> Self {
        Instance { product, bracket: None, derivation: None }
    }

    pub fn with_bracket(self, bracket: &'a SkewBracket) -> Self {
        Instance { bracket: Some(bracket), ..self }
    }

    pub fn with_derivation(self, derivation: &'a DerivationMatrix) -> Self {
        Instance { derivation: Some(derivation), ..self }
    }

    fn validate(&self, id: IdentityId) -> Result<usize> {
        let dim = self.product.dim();
        let arity = match self.bracket {
            Some(b) => {
                if b.dim() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: b.dim() });
                }
                b.arity()
            }
            None if id.requires_bracket() => {
                return Err(Error::InvalidParameter(format!("identity {id} requires a bracket")))
            }
            None => 0,
        };
        match self.derivation {
            Some(d) if d.dim() != dim => Err(Error::DimensionMismatch { expected: dim, found: d.dim() }),
            None if id.requires_derivation() => Err(Error::MissingDerivation(id.as_str())),
            _ => Ok(arity),
        }
    }

    fn ops(&self) -> Ops<'a> {
        Ops { product: self.product, bracket: self.bracket, derivation: self.derivation }
    }
}

/// Residual `LHS - RHS` of `id` on arbitrary elements, in the identity's
/// argument order.
pub fn evaluate_residual(id: IdentityId, inst: &Instance<'_>, args: &[&ElementVector]) -> Result<ElementVector> {
    let arity = inst.validate(id)?;
    let len = id.tuple_len(arity);
    if args.len() != len {
        return Err(Error::ArityMismatch { expected: len, found: args.len() });
    }
    for a in args {
        a.ensure_dim(inst.product.dim())?;
    }
    Ok(identities::residual(id, &inst.ops(), args))
}

/// Exhaustively checks one identity.
pub fn check_identity(id: IdentityId, inst: &Instance<'_>, opts: CheckOptions) -> Result<CheckReport> {
    let arity = inst.validate(id)?;
    let start = Instant::now();
    let plan = Plan {
        len: id.tuple_len(arity),
        blocks: identities::skew_blocks(id, arity),
        strict: id == IdentityId::DER_BRK,
        prune: opts.prune,
        output_index: matches!(id, IdentityId::COMM | IdentityId::ASSOC),
    };
    let ops = inst.ops();
    let outcome =
        engine::search(&plan, inst.product.dim(), opts.parallel, |args| identities::residual(id, &ops, args))?;
    let counterexample = outcome.failure.map(|(tuple, residual)| Counterexample { tuple, residual });
    Ok(CheckReport {
        identity: id,
        status: if counterexample.is_some() { Status::Fail } else { Status::Pass },
        tuples_checked: outcome.checked,
        counterexample,
        elapsed: start.elapsed(),
    })
}

/// `COMM` over all `(i, j, k)` and `ASSOC` over all `(i, j, l, k)`.
pub fn check_commutative_associative(p: &ProductTensor, opts: CheckOptions) -> Result<(CheckReport, CheckReport)> {
    let inst = Instance::new(p);
    Ok((check_identity(IdentityId::COMM, &inst, opts)?, check_identity(IdentityId::ASSOC, &inst, opts)?))
}

/// Filippov identity over all `d^{2n-1}` tuples `(y_1..y_n, x_1..x_{n-1})`.
pub fn check_filippov(b: &SkewBracket, opts: CheckOptions) -> Result<CheckReport> {
    // The identity never touches the product; a zero tensor fixes the shape.
    let p = ProductTensor::zero(b.dim());
    check_identity(IdentityId::NL, &Instance::new(&p).with_bracket(b), opts)
}

pub fn check_transposed_leibniz(p: &ProductTensor, b: &SkewBracket, opts: CheckOptions) -> Result<CheckReport> {
    check_identity(IdentityId::TP, &Instance::new(p).with_bracket(b), opts)
}

/// One of `NP1`..`NP4`.
pub fn check_np_identity(
    p: &ProductTensor,
    b: &SkewBracket,
    which: IdentityId,
    opts: CheckOptions,
) -> Result<CheckReport> {
    use IdentityId::*;
    if !matches!(which, NP1 | NP2 | NP3 | NP4) {
        return Err(Error::InvalidParameter(format!("{which} is not one of NP1..NP4")));
    }
    check_identity(which, &Instance::new(p).with_bracket(b), opts)
}

pub fn check_strong(p: &ProductTensor, b: &SkewBracket, opts: CheckOptions) -> Result<CheckReport> {
    check_identity(IdentityId::STRONG, &Instance::new(p).with_bracket(b), opts)
}

pub fn check_scale_identity(p: &ProductTensor, b: &SkewBracket, opts: CheckOptions) -> Result<CheckReport> {
    check_identity(IdentityId::SCALE, &Instance::new(p).with_bracket(b), opts)
}

/// `DER_MUL` over all pairs and `DER_BRK` over strictly increasing tuples.
pub fn check_derivation(
    p: &ProductTensor,
    b: &SkewBracket,
    d: &DerivationMatrix,
    opts: CheckOptions,
) -> Result<(CheckReport, CheckReport)> {
    let inst = Instance::new(p).with_bracket(b).with_derivation(d);
    Ok((check_identity(IdentityId::DER_MUL, &inst, opts)?, check_identity(IdentityId::DER_BRK, &inst, opts)?))
}

/// One of `LEM1`, `LEM2`.
pub fn check_lemma_identity(
    p: &ProductTensor,
    b: &SkewBracket,
    d: &DerivationMatrix,
    which: IdentityId,
    opts: CheckOptions,
) -> Result<CheckReport> {
    if !matches!(which, IdentityId::LEM1 | IdentityId::LEM2) {
        return Err(Error::InvalidParameter(format!("{which} is not LEM1 or LEM2")));
    }
    check_identity(which, &Instance::new(p).with_bracket(b).with_derivation(d), opts)
}

/// Runs `ids` against a named bracket (and derivation) of `sys`.
///
/// Reports come back in canonical [`IdentityId`] order regardless of the
/// order of `ids` or of parallel execution.
pub fn run_suite(
    sys: &AlgebraSystem,
    bracket_name: &str,
    derivation_name: Option<&str>,
    ids: &[IdentityId],
    opts: CheckOptions,
) -> Result<Vec<CheckReport>> {
    let bracket = sys.bracket(bracket_name)?;
    let derivation = derivation_name.map(|n| sys.derivation(n)).transpose()?;
    let mut inst = Instance::new(sys.product()).with_bracket(bracket);
    if let Some(d) = derivation {
        inst = inst.with_derivation(d);
    }
    run_ids(&inst, ids, opts)
}

/// Like [`run_suite`] on an explicit instance.
pub fn run_ids(inst: &Instance<'_>, ids: &[IdentityId], opts: CheckOptions) -> Result<Vec<CheckReport>> {
    let ordered: BTreeSet<IdentityId> = ids.iter().copied().collect();
    if inst.derivation.is_none() {
        if let Some(id) = ordered.iter().find(|id| id.requires_derivation()) {
            return Err(Error::MissingDerivation(id.as_str()));
        }
    }
    let ordered: Vec<IdentityId> = ordered.into_iter().collect();
    if opts.parallel {
        ordered.par_iter().map(|&id| check_identity(id, inst, opts)).collect()
    } else {
        ordered.iter().map(|&id| check_identity(id, inst, opts)).collect()
    }
}
