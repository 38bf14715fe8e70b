//! Sparse multivariate polynomials with exact Gaussian-rational
//! coefficients.
//!
//! Two variable layouts share one representation:
//!
//! * **symplectic** with `n` pairs — variables `p_1, …, p_n, q_1, …, q_n`
//!   (indices `0..n` are the `p`s, `n..2n` the `q`s). This is the commutative
//!   symbol algebra carrying the star product and the Poisson bracket.
//! * **plain** with `n` variables `x_1, …, x_n` — the polynomial module the
//!   operator calculus acts on.
//!
//! Terms live in a `BTreeMap` keyed by graded-lex [`MultiIndex`], so every
//! iteration (arithmetic, printing, serialization) is deterministic. Zero
//! coefficients are never stored.

use crate::multi_index::MultiIndex;
use crate::scalar::Scalar;
use num::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Which variable space a polynomial lives in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VarKind {
    /// `2n` variables `p_1..p_n, q_1..q_n`.
    Symplectic { pairs: usize },
    /// `n` variables `x_1..x_n`.
    Plain { vars: usize },
}

impl VarKind {
    pub fn nvars(&self) -> usize {
        match *self {
            VarKind::Symplectic { pairs } => 2 * pairs,
            VarKind::Plain { vars } => vars,
        }
    }

    /// Number of symplectic pairs; panics on plain polynomials, which have
    /// no symplectic structure.
    pub fn pairs(&self) -> usize {
        match *self {
            VarKind::Symplectic { pairs } => pairs,
            VarKind::Plain { .. } => panic!("plain polynomial has no symplectic pairs"),
        }
    }

    pub fn var_name(&self, idx: usize) -> String {
        match *self {
            VarKind::Symplectic { pairs } => {
                if idx < pairs {
                    format!("p{}", idx + 1)
                } else {
                    format!("q{}", idx - pairs + 1)
                }
            }
            VarKind::Plain { .. } => format!("x{}", idx + 1),
        }
    }
}

/// A sparse polynomial. See the module docs for the variable layout.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    kind: VarKind,
    terms: BTreeMap<MultiIndex, Scalar>,
}

impl Poly {
    pub fn zero(kind: VarKind) -> Self {
        Poly {
            kind,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(kind: VarKind, c: Scalar) -> Self {
        let mut p = Poly::zero(kind);
        p.add_term(MultiIndex::zero(kind.nvars()), c);
        p
    }

    pub fn one(kind: VarKind) -> Self {
        Poly::constant(kind, Scalar::one())
    }

    pub fn monomial(kind: VarKind, exps: MultiIndex, c: Scalar) -> Self {
        assert_eq!(exps.len(), kind.nvars(), "exponent vector length mismatch");
        let mut p = Poly::zero(kind);
        p.add_term(exps, c);
        p
    }

    /// The variable `p_{i+1}` (0-based `i`) of a symplectic algebra with
    /// `pairs` pairs.
    pub fn p(pairs: usize, i: usize) -> Self {
        assert!(i < pairs, "p index out of range");
        let kind = VarKind::Symplectic { pairs };
        Poly::monomial(kind, MultiIndex::unit(2 * pairs, i), Scalar::one())
    }

    /// The variable `q_{i+1}` (0-based `i`).
    pub fn q(pairs: usize, i: usize) -> Self {
        assert!(i < pairs, "q index out of range");
        let kind = VarKind::Symplectic { pairs };
        Poly::monomial(kind, MultiIndex::unit(2 * pairs, pairs + i), Scalar::one())
    }

    /// The variable `x_{i+1}` (0-based `i`) of a plain algebra.
    pub fn x(vars: usize, i: usize) -> Self {
        assert!(i < vars, "x index out of range");
        let kind = VarKind::Plain { vars };
        Poly::monomial(kind, MultiIndex::unit(vars, i), Scalar::one())
    }

    pub fn from_terms<I>(kind: VarKind, terms: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex, Scalar)>,
    {
        let mut p = Poly::zero(kind);
        for (m, c) in terms {
            assert_eq!(m.len(), kind.nvars(), "exponent vector length mismatch");
            p.add_term(m, c);
        }
        p
    }

    pub fn kind(&self) -> VarKind {
        self.kind
    }

    pub fn nvars(&self) -> usize {
        self.kind.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded-lex order; reversible, so `.next_back()` is the
    /// leading (highest-degree) term.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &Scalar)> {
        self.terms.iter()
    }

    /// Coefficient of the given monomial (zero when absent).
    pub fn coeff(&self, m: &MultiIndex) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Adds `c·x^m`, removing the entry if the sum cancels.
    pub fn add_term(&mut self, m: MultiIndex, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Highest total degree, or `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        // Last key is maximal in graded-lex order, hence of maximal degree.
        self.terms.keys().next_back().map(|m| m.degree())
    }

    /// Degree shared by all terms, or `None` if the polynomial is zero or
    /// not homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let d = it.next()?.degree();
        it.all(|m| m.degree() == d).then_some(d)
    }

    /// Z₂ parity (total degree mod 2) if the polynomial is parity
    /// homogeneous; the zero polynomial reports even.
    pub fn parity(&self) -> Option<u8> {
        let mut it = self.terms.keys();
        let p = match it.next() {
            None => return Some(0),
            Some(m) => (m.degree() % 2) as u8,
        };
        it.all(|m| (m.degree() % 2) as u8 == p).then_some(p)
    }

    /// Terms of even total degree.
    pub fn even_part(&self) -> Poly {
        self.filter_terms(|m| m.degree() % 2 == 0)
    }

    /// Terms of odd total degree.
    pub fn odd_part(&self) -> Poly {
        self.filter_terms(|m| m.degree() % 2 == 1)
    }

    fn filter_terms(&self, keep: impl Fn(&MultiIndex) -> bool) -> Poly {
        Poly {
            kind: self.kind,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The degree-`d` homogeneous component.
    pub fn component(&self, d: u32) -> Poly {
        self.filter_terms(|m| m.degree() == d)
    }

    /// Splits into homogeneous components, keyed by degree. Only nonzero
    /// components appear; they sum back to the original polynomial.
    pub fn graded_components(&self) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree())
                .or_insert_with(|| Poly::zero(self.kind))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// Evaluation at the origin, i.e. the constant term.
    pub fn eval_zero(&self) -> Scalar {
        self.coeff(&MultiIndex::zero(self.nvars()))
    }

    /// Evaluates the polynomial at a point, one scalar per variable.
    ///
    /// Panics when the point has the wrong dimension.
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(
            point.len(),
            self.nvars(),
            "evaluation point must supply one value per variable"
        );
        let mut acc = Scalar::zero();
        for (exp, coeff) in self.terms() {
            let mut term = coeff.clone();
            for (v, &e) in exp.exps().iter().enumerate() {
                if e > 0 {
                    term = term * point[v].pow(e);
                }
            }
            acc = acc + term;
        }
        acc
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.kind);
        }
        Poly {
            kind: self.kind,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    /// `∂^order / ∂(var)^order`, with the usual falling-factorial
    /// coefficients.
    pub fn partial_derivative(&self, var: usize, order: u32) -> Poly {
        assert!(var < self.nvars(), "variable index out of range");
        if order == 0 {
            return self.clone();
        }
        let mut out = Poly::zero(self.kind);
        for (m, c) in &self.terms {
            let e = m.get(var);
            if e < order {
                continue;
            }
            let mut fall = Scalar::one();
            for k in 0..order {
                fall = &fall * &Scalar::from_int((e - k) as i64);
            }
            out.add_term(m.with_step(var, -(order as i64)), &fall * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.kind);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn assert_compatible(&self, other: &Poly) {
        assert_eq!(
            self.kind, other.kind,
            "polynomials live in different variable spaces"
        );
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            kind: self.kind,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.assert_compatible(rhs);
        let mut out = Poly::zero(self.kind);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.add(mb), ca * cb);
            }
        }
        out
    }
}

/// Poisson bracket `{F, G} = Σ_i (∂F/∂p_i ∂G/∂q_i − ∂F/∂q_i ∂G/∂p_i)`.
///
/// Defined only on symplectic polynomials; panics on plain ones.
pub fn poisson_bracket(f: &Poly, g: &Poly) -> Poly {
    let pairs = match (f.kind(), g.kind()) {
        (VarKind::Symplectic { pairs: a }, VarKind::Symplectic { pairs: b }) if a == b => a,
        _ => panic!("poisson bracket requires matching symplectic polynomials"),
    };
    let mut out = Poly::zero(f.kind());
    for i in 0..pairs {
        let fp = f.partial_derivative(i, 1);
        let fq = f.partial_derivative(pairs + i, 1);
        let gp = g.partial_derivative(i, 1);
        let gq = g.partial_derivative(pairs + i, 1);
        out = &out + &(&(&fp * &gq) - &(&fq * &gp));
    }
    out
}

impl fmt::Display for Poly {
    /// Graded-lex descending, coefficients in the textual syntax accepted
    /// by the parser (`parse::parse_poly` inverts this exactly).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let (sign_negative, body) = format_term(self.kind, m, c);
            if first {
                if sign_negative {
                    write!(f, "-")?;
                }
                write!(f, "{}", body)?;
                first = false;
            } else if sign_negative {
                write!(f, " - {}", body)?;
            } else {
                write!(f, " + {}", body)?;
            }
        }
        Ok(())
    }
}

/// Renders one term as `(negative?, body)`, where `body` never starts with
/// a sign. Mixed complex coefficients are parenthesized so the output stays
/// parseable.
fn format_term(kind: VarKind, m: &MultiIndex, c: &Scalar) -> (bool, String) {
    use num::Signed;

    let mut vars = String::new();
    for i in 0..m.len() {
        let e = m.get(i);
        if e == 0 {
            continue;
        }
        if !vars.is_empty() {
            vars.push('*');
        }
        vars.push_str(&kind.var_name(i));
        if e > 1 {
            vars.push_str(&format!("^{}", e));
        }
    }

    if vars.is_empty() {
        // Constant term: print the scalar, splitting a leading minus when
        // the scalar is real or pure imaginary.
        return split_scalar(c);
    }

    if c.is_one() {
        return (false, vars);
    }
    if (-c).is_one() {
        return (true, vars);
    }
    let (neg, cs) = split_scalar(c);
    if !c.is_real() && !c.re().is_zero() {
        // Mixed complex coefficient: keep it intact inside parentheses.
        (false, format!("({})*{}", c, vars))
    } else if !c.is_real() {
        // Pure imaginary: cs is like "i" or "3/4*i".
        (neg, format!("{}*{}", cs, vars))
    } else {
        (c.re().is_negative(), format!("{}*{}", cs, vars))
    }
}

/// Splits a scalar into (negative?, rendering of its absolute value) when
/// it is real or pure imaginary; mixed values are returned unsigned.
fn split_scalar(c: &Scalar) -> (bool, String) {
    use num::Signed;
    if c.is_real() {
        if c.re().is_negative() {
            return (true, (-c).to_string());
        }
        return (false, c.to_string());
    }
    if c.re().is_zero() {
        if c.im().is_negative() {
            return (true, (-c).to_string());
        }
        return (false, c.to_string());
    }
    (false, c.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pq(pairs: usize) -> (Poly, Poly) {
        (Poly::p(pairs, 0), Poly::q(pairs, 0))
    }

    #[test]
    fn arithmetic_basics() {
        let (p, q) = pq(1);
        let f = &(&p * &q) + &Poly::constant(p.kind(), Scalar::from_ratio(1, 2));
        assert_eq!(f.num_terms(), 2);
        assert_eq!((&f - &f), Poly::zero(p.kind()));
        assert_eq!(f.eval_zero(), Scalar::from_ratio(1, 2));
    }

    #[test]
    fn derivative_with_multiplicity() {
        let (p, _) = pq(1);
        let f = p.pow(4);
        let d2 = f.partial_derivative(0, 2);
        assert_eq!(d2, p.pow(2).scale(&Scalar::from_int(12)));
    }

    #[test]
    fn poisson_canonical_pairs() {
        let (p, q) = pq(2);
        let p2 = Poly::p(2, 1);
        let q2 = Poly::q(2, 1);
        assert_eq!(poisson_bracket(&p, &q), Poly::one(p.kind()));
        assert_eq!(poisson_bracket(&p, &q2), Poly::zero(p.kind()));
        assert_eq!(poisson_bracket(&p2, &q2), Poly::one(p.kind()));
        assert_eq!(poisson_bracket(&q, &p), -&Poly::one(p.kind()));
    }

    #[test]
    fn poisson_on_defining_sum_example() {
        // {p·q, p} = −p by direct evaluation of the defining sum.
        let (p, q) = pq(1);
        let f = &p * &q;
        assert_eq!(poisson_bracket(&f, &p), -&p);
        assert_eq!(poisson_bracket(&p, &f), p.clone());
    }

    #[test]
    #[should_panic(expected = "poisson bracket requires matching symplectic")]
    fn poisson_rejects_plain_polynomials() {
        let x = Poly::x(1, 0);
        let _ = poisson_bracket(&x, &x);
    }

    #[test]
    fn graded_components_reassemble() {
        let (p, q) = pq(1);
        let f = &(&p.pow(3) + &(&p * &q)) + &Poly::constant(p.kind(), Scalar::from_int(7));
        let comps = f.graded_components();
        assert_eq!(comps.keys().cloned().collect::<Vec<_>>(), vec![0, 2, 3]);
        let sum = comps
            .values()
            .fold(Poly::zero(f.kind()), |acc, c| &acc + c);
        assert_eq!(sum, f);
        for (d, c) in comps {
            assert_eq!(c.homogeneous_degree(), Some(d));
        }
    }

    #[test]
    fn parity_and_parts() {
        let (p, q) = pq(1);
        let f = &p.pow(2) + &q;
        assert_eq!(f.parity(), None);
        assert_eq!(f.even_part().parity(), Some(0));
        assert_eq!(f.odd_part().parity(), Some(1));
        assert_eq!(&f.even_part() + &f.odd_part(), f);
    }

    #[test]
    fn display_examples() {
        let (p, q) = pq(1);
        let f = &(&p * &q) + &Poly::constant(p.kind(), Scalar::from_ratio(1, 2));
        assert_eq!(f.to_string(), "p1*q1 + 1/2");
        let g = &(&p.pow(2) * &q.pow(2))
            - &(&(&p * &q).scale(&Scalar::from_int(2))
                - &Poly::constant(p.kind(), Scalar::from_ratio(1, 2)));
        assert_eq!(g.to_string(), "p1^2*q1^2 - 2*p1*q1 + 1/2");
        assert_eq!(Poly::zero(p.kind()).to_string(), "0");
        let h = p.scale(&Scalar::i());
        assert_eq!(h.to_string(), "i*p1");
    }
}
