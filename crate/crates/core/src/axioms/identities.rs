//! Residuals `LHS - RHS` of every checked identity, as multilinear functions
//! of element vectors.
//!
//! Argument order follows the quantifier order in which each identity is
//! stated; the enumeration engine feeds basis vectors, the multilinearity
//! oracle feeds random rational elements. Both sides are transcribed term by
//! term without simplification.

use std::ops::Range;

use crate::bracket::SkewBracket;
use crate::derivation::DerivationMatrix;
use crate::element::ElementVector;
use crate::product::ProductTensor;
use crate::rational::Rational;

use super::IdentityId;

/// Evaluation context: the operations an identity may reference.
pub(crate) struct Ops<'a> {
    pub product: &'a ProductTensor,
    pub bracket: Option<&'a SkewBracket>,
    pub derivation: Option<&'a DerivationMatrix>,
}

type Ev = ElementVector;

fn sign(i: usize) -> Rational {
    if i % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

impl Ops<'_> {
    fn arity(&self) -> usize {
        self.bracket.map_or(0, SkewBracket::arity)
    }

    fn mul(&self, x: &Ev, y: &Ev) -> Ev {
        self.product.mul(x, y)
    }

    fn br(&self, args: &[&Ev]) -> Ev {
        self.bracket.expect("identity requires a bracket").eval(args)
    }

    fn der(&self, x: &Ev) -> Ev {
        self.derivation.expect("identity requires a derivation").eval(x)
    }

    fn zero(&self) -> Ev {
        Ev::zero(self.product.dim())
    }
}

fn without<'v>(items: &[&'v Ev], skip: usize) -> Vec<&'v Ev> {
    items.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| *v).collect()
}

fn concat<'v>(head: &[&'v Ev], tail: &[&'v Ev]) -> Vec<&'v Ev> {
    head.iter().chain(tail).copied().collect()
}

/// Length of the quantified tuple for arity `n`.
pub(crate) fn tuple_len(id: IdentityId, n: usize) -> usize {
    use IdentityId::*;
    match id {
        NL => 2 * n - 1,
        TP | NP1 | LEM1 | LEM2 => n + 1,
        NP2 | NP3 => 2 * n,
        NP4 | STRONG | SCALE => n + 2,
        DER_MUL | COMM => 2,
        DER_BRK => n,
        ASSOC => 3,
    }
}

/// Argument blocks in which the residual is alternating.
#[allow(clippy::single_range_in_vec_init)]
pub(crate) fn skew_blocks(id: IdentityId, n: usize) -> Vec<Range<usize>> {
    use IdentityId::*;
    match id {
        NL => vec![0..n, n..2 * n - 1],
        TP => vec![1..n + 1],
        NP1 | LEM1 | LEM2 => vec![0..n + 1],
        NP2 => vec![1..n, n..2 * n],
        NP3 => vec![0..n - 1, n - 1..2 * n],
        NP4 => vec![2..n + 2],
        STRONG | SCALE => vec![1..3, 3..n + 2],
        DER_BRK => vec![0..n],
        DER_MUL | COMM | ASSOC => vec![],
    }
}

pub(crate) fn residual(id: IdentityId, ops: &Ops<'_>, args: &[&Ev]) -> Ev {
    use IdentityId::*;
    match id {
        NL => filippov(ops, args),
        TP => transposed_leibniz(ops, args),
        NP1 => np1(ops, args),
        NP2 => np2(ops, args),
        NP3 => np3(ops, args),
        NP4 => np4(ops, args),
        STRONG => strong(ops, args),
        SCALE => scale(ops, args),
        DER_MUL => derivation_product(ops, args),
        DER_BRK => derivation_bracket(ops, args),
        LEM1 => lemma_first(ops, args),
        LEM2 => lemma_second(ops, args),
        COMM => &ops.mul(args[0], args[1]) - &ops.mul(args[1], args[0]),
        ASSOC => {
            let left = ops.mul(&ops.mul(args[0], args[1]), args[2]);
            let right = ops.mul(args[0], &ops.mul(args[1], args[2]));
            &left - &right
        }
    }
}

/// `[[y_1..y_n], x_1..x_{n-1}] - Σ_i (-1)^{i-1} [[y_i, x_1..x_{n-1}], y_1..ŷ_i..y_n]`
fn filippov(ops: &Ops<'_>, args: &[&Ev]) -> Ev {
    let n = ops.arity();
    let (y, x) = args.split_at(n);
    let inner = ops.br(y);
    let mut res = ops.br(&concat(&[&inner], x));
    for i in 0..n {
        let yi_x = ops.br(&concat(&[y[i]], x));
        let term = ops.br(&concat(&[&yi_x], &without(y, i)));
        res.add_scaled(&-sign(i), &term);
    }
    res
}

/// `n h [x_1..x_n] - Σ_i [x_1..h x_i..x_n]`
fn transposed_leibniz(ops: &Ops<'_>, args: &[&Ev]) -> Ev {
    let n = ops.arity();
    let (h, x) = (args[0], &args[1..]);
    let mut res = ops.mul(h, &ops.br(x)).scaled(&Rational::from(n));
    for i in 0..n {
        let hx = ops.mul(h, x[i]);
        let mut xs = x.to_vec();
        xs[i] = &hx;
        res.sub_assign(&ops.br(&xs));
    }
    res
}

/// `Σ_i (-1)^{i-1} x_i [x_1..x̂_i..x_{n+1}]`
fn np1(ops: &Ops<'_>, args: &[&Ev]) -> Ev {
    let mut res = ops.zero();
    for i in 0..args.len() {
        let term = ops.mul(args[i], &ops.br(&without(args, i)));
        res.add_scaled(&sign(i), &term);
    }
    res
}

/// `Σ_i (-1)^{i-1} [h [y_i, x..], y_1..ŷ_i..y_n] - [h [y_1..y_n], x..]`
/// with arguments `(h, x_1..x_{n-1}, y_1..y_n)`.
fn np2(ops: &Ops<'_>, args: &[&Ev]) -> Ev {
    let n = ops.arity();
    let h = args[0];
    let (x, y) = args[1..].split_at(n - 1);
    let mut res = ops.zero();
    for i in 0..n {
        let h_bracket = ops.mul(h, &ops.br(&concat(&[y[i]], x)));
        let term = ops.br(&concat(&[&h_bracket], &without(y, i)));
        res.add_scaled(&sign(i), &term);
    }
    let h_y = ops.mul(h, &ops.br(y));
    res.sub_assign(&ops.br(&concat(&[&h_y], x)));
    res
}

/// `Σ_i (-1)^{i-1} [y_i, x..] · [y_1..ŷ_i..y_{n+1}]`
/// with arguments `(x_1..x_{n-1}, y_1..y_{n+1})`.
fn np3(ops: &Ops<'_>, args: &[&Ev]) -> Ev {
    let n = ops.arity();
    let (x, y) = args.split_at(n - 1);
    let mut res = ops.zero();
    for i in 0..=n {
        let left = ops.br(&concat(&[y[i]], x));
        let right = ops.br(&without(y, i));
        res.add_scaled(&sign(i), &ops.mul(&left, &right));
    }
    res
}

/// `Σ_{i≠j} [y_1..y_i x_1..y_j x_2..y_n] - n(n-1) x_1 x_2 [y_1..y_n]`
/// with arguments `(x_1, x_2, y_1..y_n)`.
fn np4(ops: &Ops<'_>, args: &[&Ev]) -> Ev {
    let n = ops.arity();
    let (x1, x2, y) = (args[0], args[1], &args[2..]);
    let mut res = ops.zero();
    let y_x1: Vec<Ev> = y.iter().map(|yi| ops.mul(yi, x1)).collect();
    let y_x2: Vec<Ev> = y.iter().map(|yj| ops.mul(yj, x2)).collect();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut ys = y.to_vec();
            ys[i] = &y_x1[i];
            ys[j] = &y_x2[j];
            res.add_assign(&ops.br(&ys));
        }
    }
    let rhs = ops.mul(&ops.mul(x1, x2), &ops.br(y));
    res.add_scaled(&-Rational::from(n * (n - 1)), &rhs);
    res
}

/// `y_1 [h y_2, x..] - y_2 [h y_1, x..] + Σ_i (-1)^{i-1} h x_i [y_1, y_2, x_1..x̂_i..x_{n-1}]`
/// with arguments `(h, y_1, y_2, x_1..x_{n-1})`.
fn strong(ops: &Ops<'_>, args: &[&Ev]) -> Ev {
    let (h, y1, y2, x) = (args[0], args[1], args[2], &args[3..]);
    let hy1 = ops.mul(h, y1);
    let hy2 = ops.mul(h, y2);
    let mut res = ops.mul(y1, &ops.br(&concat(&[&hy2], x)));
    res.sub_assign(&ops.mul(y2, &ops.br(&concat(&[&hy1], x))));
    for i in 0..x.len() {
        let hxi = ops.mul(h, x[i]);
        let b = ops.br(&concat(&[y1, y2], &without(x, i)));
        res.add_scaled(&sign(i), &ops.mul(&hxi, &b));
    }
    res
}

/// `(y_1 [h y_2, x..] - h y_1 [y_2, x..]) - (y_2 [h y_1, x..] - h y_2 [y_1, x..])`
fn scale(ops: &Ops<'_>, args: &[&Ev]) -> Ev {
    let (h, y1, y2, x) = (args[0], args[1], args[2], &args[3..]);
    let hy1 = ops.mul(h, y1);
    let hy2 = ops.mul(h, y2);
    let mut res = ops.mul(y1, &ops.br(&concat(&[&hy2], x)));
    res.sub_assign(&ops.mul(&hy1, &ops.br(&concat(&[y2], x))));
    res.sub_assign(&ops.mul(y2, &ops.br(&concat(&[&hy1], x))));
    res.add_assign(&ops.mul(&hy2, &ops.br(&concat(&[y1], x))));
    res
}

/// `D(uv) - D(u) v - u D(v)`
fn derivation_product(ops: &Ops<'_>, args: &[&Ev]) -> Ev {
    let (u, v) = (args[0], args[1]);
    let mut res = ops.der(&ops.mul(u, v));
    res.sub_assign(&ops.mul(&ops.der(u), v));
    res.sub_assign(&ops.mul(u, &ops.der(v)));
    res
}

/// `D([x_1..x_n]) - Σ_i [x_1..D(x_i)..x_n]`
fn derivation_bracket(ops: &Ops<'_>, args: &[&Ev]) -> Ev {
    let mut res = ops.der(&ops.br(args));
    for i in 0..args.len() {
        let dxi = ops.der(args[i]);
        let mut xs = args.to_vec();
        xs[i] = &dxi;
        res.sub_assign(&ops.br(&xs));
    }
    res
}

/// Shared left side `Σ_i (-1)^{i-1} D(y_i) D([y_1..ŷ_i..y_{n+1}])`.
fn lemma_left(ops: &Ops<'_>, y: &[&Ev], dy: &[Ev]) -> Ev {
    let mut res = ops.zero();
    for (i, d) in dy.iter().enumerate() {
        let inner = ops.der(&ops.br(&without(y, i)));
        res.add_scaled(&sign(i), &ops.mul(d, &inner));
    }
    res
}

/// Left side minus `Σ_i Σ_{j≠i} (-1)^{i-1} D(y_i) [y_1..D(y_j)..ŷ_i..y_{n+1}]`.
fn lemma_first(ops: &Ops<'_>, y: &[&Ev]) -> Ev {
    let dy: Vec<Ev> = y.iter().map(|v| ops.der(v)).collect();
    let mut res = lemma_left(ops, y, &dy);
    for i in 0..y.len() {
        let mut inner = ops.zero();
        for j in (0..y.len()).filter(|&j| j != i) {
            let mut ys = y.to_vec();
            ys[j] = &dy[j];
            inner.add_assign(&ops.br(&without(&ys, i)));
        }
        res.add_scaled(&-sign(i), &ops.mul(&dy[i], &inner));
    }
    res
}

/// Left side minus
/// `Σ_i Σ_{j≠i} Σ_{k=j+1, k≠i} (-1)^i y_i [y_1..D(y_j)..D(y_k)..ŷ_i..y_{n+1}]`.
/// A sum whose lower bound exceeds its upper bound is empty.
fn lemma_second(ops: &Ops<'_>, y: &[&Ev]) -> Ev {
    let m = y.len();
    let dy: Vec<Ev> = y.iter().map(|v| ops.der(v)).collect();
    let mut res = lemma_left(ops, y, &dy);
    for i in 0..m {
        let mut inner = ops.zero();
        for j in (0..m).filter(|&j| j != i) {
            for k in (j + 1..m).filter(|&k| k != i) {
                let mut ys = y.to_vec();
                ys[j] = &dy[j];
                ys[k] = &dy[k];
                inner.add_assign(&ops.br(&without(&ys, i)));
            }
        }
        // Subtracting (-1)^i for a one-based i means adding sign(i) for a zero-based one.
        res.add_scaled(&sign(i), &ops.mul(y[i], &inner));
    }
    res
}
