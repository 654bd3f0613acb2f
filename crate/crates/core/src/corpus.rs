//! Instance families: truncated polynomial rings and their tensor products,
//! zero brackets, seeded random systems, and a counterexample hunter for the
//! extension outside the strong regime.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use num_traits::ToPrimitive;

use crate::axioms::{check_identity, CheckOptions, CheckReport, IdentityId, Instance};
use crate::bracket::SkewBracket;
use crate::construct::{derivation_bracket, extend_bracket};
use crate::derivation::DerivationMatrix;
use crate::element::ElementVector;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::product::ProductTensor;
use crate::rational::Rational;
use crate::system::AlgebraSystem;

/// Largest dimension [`random_system`] accepts without an explicit override.
pub const MAX_RANDOM_DIM: usize = 12;

/// `Q[t_1..t_r]/(t_1^{a_1}, .., t_r^{a_r})` on the monomial basis.
///
/// Basis order: the first variable's exponent varies fastest, so
/// `Q[s,t]/(s^2,t^2)` has basis `1, s, t, st`.
#[derive(Clone, Debug)]
pub struct MonomialAlgebra {
    bounds: Vec<usize>,
    monomials: Vec<Vec<usize>>,
    product: ProductTensor,
}

impl MonomialAlgebra {
    pub fn new(bounds: &[usize]) -> Result<Self> {
        if bounds.is_empty() || bounds.iter().any(|&a| a < 2) {
            return Err(Error::InvalidParameter(format!("exponent bounds must all be at least 2, got {bounds:?}")));
        }
        let dim: usize = bounds.iter().product();
        let monomials: Vec<Vec<usize>> = (0..dim)
            .map(|mut idx| {
                bounds
                    .iter()
                    .map(|&a| {
                        let e = idx % a;
                        idx /= a;
                        e
                    })
                    .collect()
            })
            .collect();
        let index = |m: &[usize]| m.iter().zip(bounds).rev().fold(0, |acc, (&e, &a)| acc * a + e);
        let product = ProductTensor::from_fn(dim, |i, j, k| {
            let sum: Vec<usize> = monomials[i].iter().zip(&monomials[j]).map(|(a, b)| a + b).collect();
            let fits = sum.iter().zip(bounds).all(|(e, a)| e < a);
            if fits && index(&sum) == k {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        Ok(MonomialAlgebra { bounds: bounds.to_vec(), monomials, product })
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn product(&self) -> &ProductTensor {
        &self.product
    }

    /// Exponent vector of each basis element.
    pub fn monomials(&self) -> &[Vec<usize>] {
        &self.monomials
    }

    /// `t_v ∂_{t_v}`: scales each monomial by its degree in variable `v`.
    pub fn grading(&self, v: usize) -> DerivationMatrix {
        let w: Vec<Rational> = self.monomials.iter().map(|m| Rational::from(m[v])).collect();
        DerivationMatrix::diagonal(&w)
    }

    /// `Σ_v weights[v] · t_v ∂_{t_v}`.
    pub fn weighted_grading(&self, weights: &[Rational]) -> DerivationMatrix {
        let w: Vec<Rational> =
            self.monomials.iter().map(|m| m.iter().zip(weights).map(|(&e, c)| Rational::from(e) * c).sum()).collect();
        DerivationMatrix::diagonal(&w)
    }

    /// The derivation with `D(t_v) = t_v · f_v`, i.e.
    /// `D(m) = (Σ_v deg_v(m) f_v) · m`. Every such map preserves the
    /// truncation ideal.
    pub fn multiplier_derivation(&self, multipliers: &[ElementVector]) -> DerivationMatrix {
        let dim = self.dim();
        let mut columns = Vec::with_capacity(dim);
        for (j, m) in self.monomials.iter().enumerate() {
            let mut g = ElementVector::zero(dim);
            for (&e, f) in m.iter().zip(multipliers) {
                g.add_scaled(&Rational::from(e), f);
            }
            columns.push(self.product.mul(&g, &ElementVector::basis(dim, j)));
        }
        DerivationMatrix::from_fn(dim, |k, j| columns[j][k].clone())
    }

    pub fn labels(&self, names: &[&str]) -> Vec<String> {
        self.monomials
            .iter()
            .map(|m| {
                let parts: Vec<String> = m
                    .iter()
                    .zip(names)
                    .filter(|(&e, _)| e > 0)
                    .map(|(&e, name)| if e == 1 { name.to_string() } else { format!("{name}^{e}") })
                    .collect();
                if parts.is_empty() {
                    "1".to_string()
                } else {
                    parts.join("*")
                }
            })
            .collect()
    }

    pub fn bounds(&self) -> &[usize] {
        &self.bounds
    }
}

/// `Q[t]/(t^m)` with the Euler derivation `"euler"` and the bracket
/// `"b1" = [x, y] = x·D(y) - y·D(x)`, i.e. `[e_i, e_j] = (j - i) e_{i+j}`.
pub fn make_truncated_poly(m: usize) -> Result<AlgebraSystem> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("truncation order must be at least 2, got {m}")));
    }
    let alg = MonomialAlgebra::new(&[m])?;
    let euler = alg.grading(0);
    let b1 = derivation_bracket(alg.product(), &euler)?;
    AlgebraSystem::new(alg.product().clone())
        .with_basis_labels(alg.labels(&["t"]))?
        .with_bracket("b1", b1)?
        .with_derivation("euler", euler)
}

/// `Q[s]/(s^a) ⊗ Q[t]/(t^b)` with `"d1" = s∂_s`, `"d2" = t∂_t` and
/// `"b_d1"` built from `d1`.
pub fn make_tensor_trunc(a: usize, b: usize) -> Result<AlgebraSystem> {
    let alg = MonomialAlgebra::new(&[a, b])?;
    let (d1, d2) = (alg.grading(0), alg.grading(1));
    let bracket = derivation_bracket(alg.product(), &d1)?;
    AlgebraSystem::new(alg.product().clone())
        .with_basis_labels(alg.labels(&["s", "t"]))?
        .with_bracket("b_d1", bracket)?
        .with_derivation("d1", d1)?
        .with_derivation("d2", d2)
}

/// The given product with the identically zero `n`-bracket `"zero"`.
pub fn make_zero_bracket_system(p: &ProductTensor, n: usize) -> Result<AlgebraSystem> {
    AlgebraSystem::new(p.clone()).with_bracket("zero", SkewBracket::zero(p.dim(), n)?)
}

/// `D(e_k) = k·e_{k-1}`: the formal derivative `d/dt` on `Q[t]/(t^m)`.
///
/// Not a derivation of the truncated ring: Leibniz first breaks on
/// `(e_1, e_{m-1})`, where `D(t^m) = 0` but `D(t)t^{m-1} + tD(t^{m-1}) = m t^{m-1}`.
pub fn formal_derivative(m: usize) -> DerivationMatrix {
    DerivationMatrix::from_fn(m, |k, j| if k + 1 == j { Rational::from(j) } else { Rational::zero() })
}

fn small_scalar(rng: &mut ChaCha8Rng) -> Rational {
    Rational::from_integer(rng.gen_range(-3..=3))
}

fn bernoulli(rng: &mut ChaCha8Rng, p: &Rational) -> Result<bool> {
    let (num, den) = (p.numer().to_u64(), p.denom().to_u64());
    match (num, den) {
        (Some(num), Some(den)) => Ok(rng.gen_range(0..den) < num),
        _ => Err(Error::InvalidParameter(format!("density {p} has components beyond 64 bits"))),
    }
}

/// Seeded random system with bracket `"b"` and candidate derivation `"d"`.
///
/// The product is symmetric in its two inputs; bracket entries are present
/// with probability `density`. All scalars are integers in `-3..=3`. Nothing
/// beyond shape is promised.
pub fn random_system(dim: usize, arity: usize, density: &Rational, seed: u64) -> Result<AlgebraSystem> {
    random_system_with_limit(dim, arity, density, seed, MAX_RANDOM_DIM)
}

pub fn random_system_with_limit(
    dim: usize,
    arity: usize,
    density: &Rational,
    seed: u64,
    max_dim: usize,
) -> Result<AlgebraSystem> {
    if dim == 0 || dim > max_dim {
        return Err(Error::InvalidParameter(format!("dimension must be in 1..={max_dim}, got {dim}")));
    }
    if density.is_negative() || *density > Rational::one() {
        return Err(Error::InvalidParameter(format!("density must lie in [0, 1], got {density}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut coeffs = vec![Rational::zero(); dim * dim * dim];
    for i in 0..dim {
        for j in i..dim {
            for k in 0..dim {
                let c = small_scalar(&mut rng);
                coeffs[(i * dim + j) * dim + k] = c.clone();
                coeffs[(j * dim + i) * dim + k] = c;
            }
        }
    }
    let product = ProductTensor::from_fn(dim, |i, j, k| coeffs[(i * dim + j) * dim + k].clone());

    let mut entries = Vec::new();
    for key in crate::tuples::increasing_tuples(dim, arity) {
        if bernoulli(&mut rng, density)? {
            let value = ElementVector::from_coords((0..dim).map(|_| small_scalar(&mut rng)).collect());
            entries.push((key, value));
        }
    }
    let bracket = SkewBracket::from_entries(dim, arity, entries)?;
    let derivation = DerivationMatrix::from_fn(dim, |_, _| small_scalar(&mut rng));

    AlgebraSystem::new(product).with_bracket("b", bracket)?.with_derivation("d", derivation)
}

/// Re-expresses `sys` in the basis `f_j = Σ_i change[i][j] e_i`.
///
/// Every identity is basis independent, so verdicts are preserved. Basis
/// labels are dropped.
pub fn change_basis(sys: &AlgebraSystem, change: &Matrix) -> Result<AlgebraSystem> {
    let dim = sys.dim();
    if change.len() != dim || change.iter().any(|r| r.len() != dim) {
        return Err(Error::InvalidParameter("basis change must be a square matrix of the system's dimension".into()));
    }
    let inv = linalg::inverse(change).ok_or_else(|| Error::InvalidParameter("basis change is singular".into()))?;
    let new_basis: Vec<ElementVector> =
        (0..dim).map(|j| ElementVector::from_coords((0..dim).map(|i| change[i][j].clone()).collect())).collect();
    let to_new = |v: &ElementVector| -> ElementVector {
        ElementVector::from_coords((0..dim).map(|l| v.support().map(|(k, c)| &inv[l][k] * c).sum()).collect())
    };

    let p = sys.product();
    let products: Vec<Vec<ElementVector>> =
        (0..dim).map(|a| (0..dim).map(|b| to_new(&p.mul(&new_basis[a], &new_basis[b]))).collect()).collect();
    let product = ProductTensor::from_fn(dim, |a, b, l| products[a][b][l].clone());

    let mut out = AlgebraSystem::new(product);
    for (name, b) in sys.brackets() {
        let nb = SkewBracket::from_fn(dim, b.arity(), |t| {
            let args: Vec<&ElementVector> = t.iter().map(|&i| &new_basis[i]).collect();
            to_new(&b.eval(&args))
        })?;
        out = out.with_bracket(name.clone(), nb)?;
    }
    for (name, d) in sys.derivations() {
        let m = linalg::mat_mul(&linalg::mat_mul(&inv, &d.rows().to_vec()), change);
        out = out.with_derivation(name.clone(), DerivationMatrix::from_rows(m)?)?;
    }
    Ok(out)
}

/// Random unimodular integer matrix (product of unitriangular factors).
pub fn random_unimodular(dim: usize, rng: &mut impl Rng) -> Matrix {
    let mut lower = linalg::identity(dim);
    let mut upper = linalg::identity(dim);
    for i in 0..dim {
        for j in 0..i {
            lower[i][j] = Rational::from_integer(rng.gen_range(-1..=1));
            upper[j][i] = Rational::from_integer(rng.gen_range(-1..=1));
        }
    }
    linalg::mat_mul(&lower, &upper)
}

/// Seeded instance drawn from derivation-built families, for implication
/// sweeps. Bracket `"b"` has the requested arity (2 or 3) and `"d"` is a
/// candidate derivation.
///
/// Most draws satisfy the transposed Poisson axioms by construction; a
/// fraction deliberately use non-derivations or non-commuting maps so that
/// hypothesis filters have something to reject. Half the draws are moved to
/// a random unimodular basis so the structure constants are dense.
pub fn random_structured_system(arity: usize, seed: u64) -> Result<AlgebraSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shapes: &[&[usize]] = match arity {
        2 => &[&[2], &[3], &[4], &[5], &[2, 2], &[2, 3], &[3, 2]],
        3 => &[&[2, 2], &[2, 2], &[2, 3], &[3, 2]],
        _ => return Err(Error::InvalidParameter(format!("structured draws support arity 2 or 3, got {arity}"))),
    };
    let alg = MonomialAlgebra::new(shapes[rng.gen_range(0..shapes.len())])?;
    let dim = alg.dim();
    let vars = alg.bounds().len();
    let p = alg.product();

    let weights = |rng: &mut ChaCha8Rng| -> Vec<Rational> { (0..vars).map(|_| small_scalar(rng)).collect() };
    let random_multipliers = |rng: &mut ChaCha8Rng| -> Vec<ElementVector> {
        (0..vars)
            .map(|_| {
                ElementVector::from_coords(
                    (0..dim)
                        .map(|_| {
                            if rng.gen_bool(0.5) {
                                Rational::from_integer(rng.gen_range(-2..=2))
                            } else {
                                Rational::zero()
                            }
                        })
                        .collect(),
                )
            })
            .collect()
    };

    let (bracket, derivation) = if arity == 2 {
        let roll = rng.gen_range(0..8);
        let base = match roll {
            0..=2 => alg.weighted_grading(&weights(&mut rng)),
            3..=5 => alg.multiplier_derivation(&random_multipliers(&mut rng)),
            _ => DerivationMatrix::from_fn(dim, |_, _| small_scalar(&mut rng)),
        };
        let bracket = derivation_bracket(p, &base)?;
        let derivation = match rng.gen_range(0..4) {
            // Scalar multiples commute with the base map.
            0 => base.scaled(&small_scalar(&mut rng)),
            1 if roll <= 2 => alg.weighted_grading(&weights(&mut rng)),
            _ => alg.multiplier_derivation(&random_multipliers(&mut rng)),
        };
        (bracket, derivation)
    } else {
        let first = if rng.gen_range(0..4) == 0 {
            alg.multiplier_derivation(&random_multipliers(&mut rng))
        } else {
            alg.weighted_grading(&weights(&mut rng))
        };
        let second = alg.weighted_grading(&weights(&mut rng));
        let bracket = extend_bracket(p, &derivation_bracket(p, &first)?, &second)?;
        let derivation = if rng.gen_range(0..4) == 0 {
            alg.multiplier_derivation(&random_multipliers(&mut rng))
        } else {
            alg.weighted_grading(&weights(&mut rng))
        };
        (bracket, derivation)
    };

    let sys = AlgebraSystem::new(p.clone()).with_bracket("b", bracket)?.with_derivation("d", derivation)?;
    if rng.gen_bool(0.5) {
        let change = random_unimodular(dim, &mut rng);
        change_basis(&sys, &change)
    } else {
        Ok(sys)
    }
}

/// An instance satisfying every hypothesis of the extension except the strong
/// condition, whose extension fails `NL` or `TP`.
#[derive(Clone, Debug)]
pub struct Finding {
    /// Index of the trial that produced it.
    pub trial: u64,
    /// Holds bracket `"candidate"`, its extension `"candidate_ext"` and the
    /// derivation `"candidate"`.
    pub system: AlgebraSystem,
    /// COMM, ASSOC, NL, TP, DER_MUL, DER_BRK on the candidate: all pass.
    pub premise_reports: Vec<CheckReport>,
    /// STRONG on the candidate: fails.
    pub strong_report: CheckReport,
    /// NL and TP on the extension; at least one fails.
    pub extension_reports: Vec<CheckReport>,
}

// Cheapest and most selective first; every trial stops at the first failure.
const PREMISE_ORDER: [IdentityId; 6] =
    [IdentityId::COMM, IdentityId::ASSOC, IdentityId::DER_MUL, IdentityId::TP, IdentityId::DER_BRK, IdentityId::NL];

fn trial_seed(seed: u64, trial: u64) -> u64 {
    seed ^ trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn premises_hold(inst: &Instance<'_>) -> Result<Option<Vec<CheckReport>>> {
    let mut reports = Vec::with_capacity(PREMISE_ORDER.len());
    for id in PREMISE_ORDER {
        let r = check_identity(id, inst, CheckOptions::sequential())?;
        if !r.passed() {
            return Ok(None);
        }
        reports.push(r);
    }
    reports.sort_by_key(|r| r.identity);
    Ok(Some(reports))
}

fn run_trial(dim: usize, arity: usize, seed: u64, trial: u64) -> Result<Option<Finding>> {
    let tseed = trial_seed(seed, trial);
    let mut rng = ChaCha8Rng::seed_from_u64(tseed);
    let density = Rational::new(rng.gen_range(1..=4), 4);
    let sys = random_system(dim, arity, &density, tseed)?;
    let (b, d) = (sys.bracket("b")?, sys.derivation("d")?);
    let inst = Instance::new(sys.product()).with_bracket(b).with_derivation(d);

    let Some(premise_reports) = premises_hold(&inst)? else { return Ok(None) };
    let strong_report = check_identity(IdentityId::STRONG, &inst, CheckOptions::sequential())?;
    if strong_report.passed() {
        return Ok(None);
    }
    let ext = extend_bracket(sys.product(), b, d)?;
    let ext_inst = Instance::new(sys.product()).with_bracket(&ext);
    let extension_reports = [IdentityId::NL, IdentityId::TP]
        .into_iter()
        .map(|id| check_identity(id, &ext_inst, CheckOptions::sequential()))
        .collect::<Result<Vec<_>>>()?;
    if extension_reports.iter().all(CheckReport::passed) {
        return Ok(None);
    }
    let system = AlgebraSystem::new(sys.product().clone())
        .with_bracket("candidate", b.clone())?
        .with_bracket("candidate_ext", ext)?
        .with_derivation("candidate", d.clone())?;
    Ok(Some(Finding { trial, system, premise_reports, strong_report, extension_reports }))
}

/// Searches `trials` seeded random systems for an instance where the
/// extension fails although every hypothesis except the strong condition
/// holds. Returns the finding with the smallest trial index.
///
/// At arity 2 the strong condition follows from the other axioms, so the
/// search is rejected.
pub fn hunt_counterexample(dim: usize, arity: usize, trials: u64, seed: u64) -> Result<Option<Finding>> {
    if arity < 3 {
        return Err(Error::InvalidParameter(format!(
            "hunting requires arity at least 3 (binary brackets are always strong), got {arity}"
        )));
    }
    if dim == 0 || dim > MAX_RANDOM_DIM {
        return Err(Error::InvalidParameter(format!("dimension must be in 1..={MAX_RANDOM_DIM}, got {dim}")));
    }
    let found = (0..trials).into_par_iter().map(|t| run_trial(dim, arity, seed, t)).find_map_first(|r| match r {
        Ok(None) => None,
        other => Some(other),
    });
    let Some(result) = found else { return Ok(None) };
    let finding = result?.expect("filtered to findings");
    verify_finding(&finding)?;
    Ok(Some(finding))
}

/// Re-runs every premise of a finding from scratch.
pub fn verify_finding(f: &Finding) -> Result<bool> {
    let sys = &f.system;
    let b = sys.bracket("candidate")?;
    let d = sys.derivation("candidate")?;
    let inst = Instance::new(sys.product()).with_bracket(b).with_derivation(d);
    let premises = premises_hold(&inst)?.is_some();
    let strong_fails = !check_identity(IdentityId::STRONG, &inst, CheckOptions::sequential())?.passed();
    let ext = extend_bracket(sys.product(), b, d)?;
    let same_ext = sys.bracket("candidate_ext")? == &ext;
    let ext_inst = Instance::new(sys.product()).with_bracket(&ext);
    let ext_fails = [IdentityId::NL, IdentityId::TP]
        .into_iter()
        .map(|id| check_identity(id, &ext_inst, CheckOptions::sequential()).map(|r| !r.passed()))
        .collect::<Result<Vec<_>>>()?
        .contains(&true);
    Ok(premises && strong_fails && same_ext && ext_fails)
}
