//! Building new brackets from a product, a bracket and a linear map.
//!
//! Sign conventions:
//!
//! * [`extend_bracket`] stores
//!   `μ(x_1..x_{n+1}) = Σ_k (-1)^{k-1} D(x_k) · [x_1..x̂_k..x_{n+1}]`.
//! * [`derivation_bracket`] stores `[x, y] = x·D(y) - y·D(x)`. This is the
//!   negative of reading the extension formula literally at `n = 1` with the
//!   identity as the unary bracket; the two structures are isomorphic via
//!   `x ↦ -x`, and this sign gives `[1, t] = t` for `D = t∂_t`.

use crate::axioms::{run_ids, CheckOptions, CheckReport, IdentityId, Instance};
use crate::bracket::SkewBracket;
use crate::derivation::DerivationMatrix;
use crate::element::ElementVector;
use crate::error::{Error, Result};
use crate::product::ProductTensor;
use crate::system::AlgebraSystem;

fn ensure_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Builds the `(n+1)`-ary bracket from an `n`-ary one and `D`.
///
/// No axiom is verified here; run the checkers on the result.
pub fn extend_bracket(p: &ProductTensor, b: &SkewBracket, d: &DerivationMatrix) -> Result<SkewBracket> {
    let dim = p.dim();
    ensure_dim(dim, b.dim())?;
    ensure_dim(dim, d.dim())?;
    let images: Vec<ElementVector> = (0..dim).map(|i| d.eval(&ElementVector::basis(dim, i))).collect();
    SkewBracket::from_fn(dim, b.arity() + 1, |tuple| {
        let mut out = ElementVector::zero(dim);
        for k in 0..tuple.len() {
            // Removing one index from an increasing tuple leaves it increasing.
            let rest: Vec<usize> = tuple.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, &t)| t).collect();
            let Some(value) = b.entry(&rest) else { continue };
            let term = p.mul(&images[tuple[k]], value);
            if k % 2 == 0 {
                out.add_assign(&term);
            } else {
                out.sub_assign(&term);
            }
        }
        out
    })
}

/// The binary bracket `[x, y] = x·D(y) - y·D(x)`.
pub fn derivation_bracket(p: &ProductTensor, d: &DerivationMatrix) -> Result<SkewBracket> {
    let dim = p.dim();
    ensure_dim(dim, d.dim())?;
    SkewBracket::from_fn(dim, 2, |t| {
        let (ei, ej) = (ElementVector::basis(dim, t[0]), ElementVector::basis(dim, t[1]));
        &p.mul(&ei, &d.eval(&ej)) - &p.mul(&ej, &d.eval(&ei))
    })
}

/// One level of a tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerLevel {
    /// Name of the derivation used to build this level.
    pub derivation: String,
    pub bracket: SkewBracket,
    /// Empty unless verification was requested.
    pub reports: Vec<CheckReport>,
}

impl TowerLevel {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(CheckReport::passed)
    }
}

/// Applies [`extend_bracket`] once per entry of `derivation_names`, starting
/// from the seed bracket.
///
/// With `verify`, each new level is checked against the structure identities,
/// and the next step's derivation against `DER_MUL`/`DER_BRK` for that level.
/// Failures are recorded in the reports and do not stop construction.
pub fn build_tower(
    sys: &AlgebraSystem,
    seed_bracket_name: &str,
    derivation_names: &[String],
    verify: bool,
    opts: CheckOptions,
) -> Result<Vec<TowerLevel>> {
    let seed = sys.bracket(seed_bracket_name)?;
    let derivations: Vec<&DerivationMatrix> =
        derivation_names.iter().map(|n| sys.derivation(n)).collect::<Result<_>>()?;

    let mut levels = Vec::with_capacity(derivations.len());
    let mut current = seed.clone();
    for (step, d) in derivations.iter().enumerate() {
        let next = extend_bracket(sys.product(), &current, d)?;
        let reports = if verify {
            let mut reports = run_ids(&Instance::new(sys.product()).with_bracket(&next), &IdentityId::STRUCTURE, opts)?;
            if let Some(next_d) = derivations.get(step + 1) {
                let inst = Instance::new(sys.product()).with_bracket(&next).with_derivation(next_d);
                reports.extend(run_ids(&inst, &[IdentityId::DER_MUL, IdentityId::DER_BRK], opts)?);
            }
            reports
        } else {
            Vec::new()
        };
        levels.push(TowerLevel { derivation: derivation_names[step].clone(), bracket: next.clone(), reports });
        current = next;
    }
    Ok(levels)
}
