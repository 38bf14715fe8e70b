//! Linear operators on polynomial modules and their differential-operator
//! presentations.
//!
//! The plain polynomial algebra `ℂ[x_1..x_n]` carries a Hopf structure
//! (coproduct `Δ(P)(x, x′) = P(x + x′)`, counit = evaluation at the origin,
//! antipode `𝒮(P)(x) = P(−x)`) and a nondegenerate pairing with its dual
//! monomial basis, `⟨x^I, X^J⟩ = δ_IJ · I!`. Together these let any linear
//! operator `T` on polynomials be rebuilt as a differential operator with
//! polynomial coefficients,
//!
//! ```text
//! T = Σ_N c_N(x) ∂^N,    c_N = Σ_{R+S=N} (−1)^{|S|} / (R! S!) · T(x^R) · x^S,
//! ```
//!
//! which is implemented by [`reconstruct_diffop`]. Writing `c_N(x)` back as a
//! polynomial `α_N(Q)` in the position variables produces the *normal symbol*
//! of the operator: the unique presentation `Σ_I α_I(Q) ⋆ P^I` whose
//! realization map `Σ α_I(Q) ⋆ P^I ↦ Σ α_I(x) ∂^I` intertwines the
//! star product with operator composition ([`wmap_apply`]).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational};

use crate::comb::binomial;
use crate::error::{Error, Result};
use crate::exec;
use crate::moyal;
use crate::multi_index::{monomials_up_to_degree, multi_indices_below, MultiIndex};
use crate::poly::{Poly, VarKind};
use crate::scalar::Scalar;

/// Operators with a known closed form. They act like any other [`LinOp`]
/// pointwise; keeping them symbolic lets the trace layer route them to exact
/// formulas instead of numeric summation.
#[derive(Clone, Debug, PartialEq)]
pub enum SpecialOp {
    /// Matrix unit: sends `x^source` to `x^target` and every other monomial
    /// to zero.
    E {
        target: MultiIndex,
        source: MultiIndex,
    },
    /// Dilation `x^K ↦ λ^{|K|} x^K`.
    S { lambda: Scalar },
    /// The exponential `exp(τ·Σ x_i ∂_i)` of the Euler operator, recorded
    /// through `λ = e^τ` supplied exactly. Pointwise it acts exactly like
    /// `S(λ)`; the variant only selects a different closed-form route for
    /// its integral transform.
    ExpEuler { lambda: Scalar },
}

/// A linear operator on polynomials in `n` plain variables.
#[derive(Clone)]
pub enum LinOp {
    /// Finitely supported monomial table `x^I ↦ table[I]`; monomials off the
    /// table map to zero.
    FiniteRank {
        n: usize,
        table: BTreeMap<MultiIndex, Poly>,
    },
    /// Black-box monomial rule, trusted only on degrees `≤ degree_bound`.
    /// Queries beyond the bound are errors, not zeros: nothing is known
    /// about the operator there.
    Rule {
        n: usize,
        degree_bound: u32,
        action: Arc<dyn Fn(&MultiIndex) -> Poly + Send + Sync>,
    },
    /// A named operator with known closed forms.
    Special { n: usize, op: SpecialOp },
}

impl fmt::Debug for LinOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinOp::FiniteRank { n, table } => f
                .debug_struct("FiniteRank")
                .field("n", n)
                .field("table", table)
                .finish(),
            LinOp::Rule { n, degree_bound, .. } => f
                .debug_struct("Rule")
                .field("n", n)
                .field("degree_bound", degree_bound)
                .finish_non_exhaustive(),
            LinOp::Special { n, op } => f
                .debug_struct("Special")
                .field("n", n)
                .field("op", op)
                .finish(),
        }
    }
}

impl LinOp {
    /// A finite-rank operator from an explicit table. Every key must have
    /// length `n` and every value must be a plain polynomial in `n`
    /// variables.
    pub fn finite_rank(n: usize, table: BTreeMap<MultiIndex, Poly>) -> Result<LinOp> {
        let kind = VarKind::Plain { vars: n };
        for (m, out) in &table {
            if m.len() != n {
                return Err(Error::InvalidData(format!(
                    "table key {m} has length {}, expected {n}",
                    m.len()
                )));
            }
            if out.kind() != kind {
                return Err(Error::InvalidData(format!(
                    "table value for {m} is not a plain polynomial in {n} variables"
                )));
            }
        }
        Ok(LinOp::FiniteRank { n, table })
    }

    /// A rule-backed operator trusted on monomials of degree `≤ degree_bound`.
    pub fn rule(
        n: usize,
        degree_bound: u32,
        action: impl Fn(&MultiIndex) -> Poly + Send + Sync + 'static,
    ) -> LinOp {
        LinOp::Rule {
            n,
            degree_bound,
            action: Arc::new(action),
        }
    }

    /// A special operator acting on `n` variables.
    pub fn special(n: usize, op: SpecialOp) -> Result<LinOp> {
        if let SpecialOp::E { target, source } = &op {
            if target.len() != n || source.len() != n {
                return Err(Error::InvalidData(format!(
                    "matrix unit indices must have length {n}"
                )));
            }
        }
        Ok(LinOp::Special { n, op })
    }

    /// The identity operator (a dilation with `λ = 1`).
    pub fn identity(n: usize) -> LinOp {
        LinOp::Special {
            n,
            op: SpecialOp::S {
                lambda: Scalar::one(),
            },
        }
    }

    pub fn n(&self) -> usize {
        match self {
            LinOp::FiniteRank { n, .. } | LinOp::Rule { n, .. } | LinOp::Special { n, .. } => *n,
        }
    }

    /// The image of a single monomial `x^m`.
    pub fn apply_monomial(&self, m: &MultiIndex) -> Result<Poly> {
        assert_eq!(m.len(), self.n(), "monomial arity mismatch");
        let kind = VarKind::Plain { vars: self.n() };
        match self {
            LinOp::FiniteRank { table, .. } => Ok(table
                .get(m)
                .cloned()
                .unwrap_or_else(|| Poly::zero(kind))),
            LinOp::Rule {
                degree_bound,
                action,
                ..
            } => {
                if m.degree() > *degree_bound {
                    return Err(Error::DegreeBound {
                        bound: *degree_bound,
                        requested: m.degree(),
                    });
                }
                let out = action(m);
                assert_eq!(
                    out.kind(),
                    kind,
                    "rule produced a polynomial in the wrong variables"
                );
                Ok(out)
            }
            LinOp::Special { op, .. } => Ok(match op {
                SpecialOp::E { target, source } => {
                    if m == source {
                        Poly::monomial(kind, target.clone(), Scalar::one())
                    } else {
                        Poly::zero(kind)
                    }
                }
                SpecialOp::S { lambda } | SpecialOp::ExpEuler { lambda } => {
                    Poly::monomial(kind, m.clone(), lambda.pow(m.degree()))
                }
            }),
        }
    }

    /// Linear extension of [`LinOp::apply_monomial`] to polynomials.
    pub fn apply(&self, p: &Poly) -> Result<Poly> {
        let kind = VarKind::Plain { vars: self.n() };
        assert_eq!(p.kind(), kind, "operand lives in the wrong variables");
        let mut out = Poly::zero(kind);
        for (m, c) in p.terms() {
            out = &out + &self.apply_monomial(m)?.scale(c);
        }
        Ok(out)
    }

    /// A finite monomial table describing the operator, when one exists:
    /// finite-rank operators yield their table and a matrix unit yields its
    /// single entry. Rules and dilations have no finite table.
    pub fn as_finite_table(&self) -> Option<BTreeMap<MultiIndex, Poly>> {
        match self {
            LinOp::FiniteRank { table, .. } => Some(table.clone()),
            LinOp::Special {
                n,
                op: SpecialOp::E { target, source },
            } => {
                let kind = VarKind::Plain { vars: *n };
                let image = Poly::monomial(kind, target.clone(), Scalar::one());
                Some(BTreeMap::from([(source.clone(), image)]))
            }
            _ => None,
        }
    }
}

/// Coproduct of the coordinate Hopf algebra: `Δ(P)(x, x′) = P(x + x′)`,
/// returned over `2n` plain variables with `x_i` at slot `i` and `x′_i` at
/// slot `n + i`.
pub fn hopf_coproduct(p: &Poly) -> Poly {
    let n = match p.kind() {
        VarKind::Plain { vars } => vars,
        _ => panic!("the coproduct is defined on plain polynomials"),
    };
    let out_kind = VarKind::Plain { vars: 2 * n };
    let mut out = Poly::zero(out_kind);
    for (a, c) in p.terms() {
        for b in multi_indices_below(a) {
            let rest = a.checked_sub(&b).expect("b ≤ a componentwise");
            let mut mult = BigInt::from(1);
            for v in 0..n {
                mult *= binomial(u64::from(a.get(v)), u64::from(b.get(v)));
            }
            let mut exps = vec![0u32; 2 * n];
            for v in 0..n {
                exps[v] = b.get(v);
                exps[n + v] = rest.get(v);
            }
            out.add_term(MultiIndex::new(exps), c * &Scalar::from_bigint(mult));
        }
    }
    out
}

/// Antipode of the coordinate Hopf algebra: `𝒮(P)(x) = P(−x)`.
pub fn antipode(p: &Poly) -> Poly {
    assert!(
        matches!(p.kind(), VarKind::Plain { .. }),
        "the antipode is defined on plain polynomials"
    );
    &p.even_part() - &p.odd_part()
}

/// Pairing between polynomials and the dual monomial basis:
/// `⟨x^I, X^J⟩ = δ_IJ · I!`, extended bilinearly. Both arguments are plain
/// polynomials over the same variables; the second is read in the dual
/// basis.
pub fn duality_pairing(p: &Poly, f: &Poly) -> Scalar {
    assert_eq!(p.kind(), f.kind(), "pairing requires matching variables");
    assert!(
        matches!(p.kind(), VarKind::Plain { .. }),
        "pairing is defined on plain polynomials"
    );
    let mut acc = Scalar::zero();
    for (m, c) in p.terms() {
        let dual = f.coeff(m);
        if !dual.is_zero() {
            acc = acc + c * &dual * &Scalar::from_bigint(m.factorial());
        }
    }
    acc
}

/// A differential operator with polynomial coefficients,
/// `T = Σ_N c_N(x) ∂^N`, recorded for orders `|N| ≤ truncation`. Higher
/// orders may exist but are unknown, so applications are only accepted on
/// polynomials those orders cannot touch.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOpSeries {
    n: usize,
    truncation: u32,
    coeffs: BTreeMap<MultiIndex, Poly>,
}

impl DiffOpSeries {
    pub fn new(n: usize, truncation: u32, coeffs: BTreeMap<MultiIndex, Poly>) -> Result<Self> {
        let kind = VarKind::Plain { vars: n };
        for (m, c) in &coeffs {
            if m.len() != n {
                return Err(Error::InvalidData(format!(
                    "order {m} has length {}, expected {n}",
                    m.len()
                )));
            }
            if m.degree() > truncation {
                return Err(Error::InvalidData(format!(
                    "order {m} exceeds the truncation {truncation}"
                )));
            }
            if c.kind() != kind {
                return Err(Error::InvalidData(format!(
                    "coefficient of ∂^{m} is not a plain polynomial in {n} variables"
                )));
            }
        }
        Ok(DiffOpSeries {
            n,
            truncation,
            coeffs,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Highest derivative order the series records.
    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// Nonzero coefficients, keyed by derivative order.
    pub fn coeffs(&self) -> &BTreeMap<MultiIndex, Poly> {
        &self.coeffs
    }

    /// The coefficient `c_N(x)` (zero when absent).
    pub fn coeff(&self, order: &MultiIndex) -> Poly {
        self.coeffs
            .get(order)
            .cloned()
            .unwrap_or_else(|| Poly::zero(VarKind::Plain { vars: self.n }))
    }

    /// Applies `Σ c_N(x) ∂^N` to a polynomial. Exact only when every order
    /// that could act is recorded, i.e. when `deg p ≤ truncation`; higher
    /// inputs are rejected.
    pub fn apply(&self, p: &Poly) -> Result<Poly> {
        let kind = VarKind::Plain { vars: self.n };
        assert_eq!(p.kind(), kind, "operand lives in the wrong variables");
        let d = p.total_degree().unwrap_or(0);
        if d > self.truncation {
            return Err(Error::DegreeBound {
                bound: self.truncation,
                requested: d,
            });
        }
        let mut out = Poly::zero(kind);
        for (order, c) in &self.coeffs {
            let der = multi_derivative(p, order);
            if !der.is_zero() {
                out = &out + &(c * &der);
            }
        }
        Ok(out)
    }
}

/// `∂^order p` across all variables.
fn multi_derivative(p: &Poly, order: &MultiIndex) -> Poly {
    let mut der = p.clone();
    for v in 0..order.len() {
        if order.get(v) > 0 {
            der = der.partial_derivative(v, order.get(v));
            if der.is_zero() {
                break;
            }
        }
    }
    der
}

/// Rebuilds a linear operator as a differential-operator series,
///
/// ```text
/// c_N = Σ_{R+S=N} (−1)^{|S|} / (R! S!) · T(x^R) · x^S,
/// ```
///
/// for all orders `|N| ≤ max_order`. The operator is queried once per source
/// monomial; assembling the coefficients is a data-parallel map over the
/// orders.
pub fn reconstruct_diffop(t: &LinOp, max_order: u32) -> Result<DiffOpSeries> {
    let n = t.n();
    let sources = monomials_up_to_degree(n, max_order);
    let mut images: BTreeMap<MultiIndex, Poly> = BTreeMap::new();
    for r in &sources {
        images.insert(r.clone(), t.apply_monomial(r)?);
    }
    let rows = exec::map(&sources, |order| {
        (order.clone(), diffop_coefficient(n, order, &images))
    });
    let coeffs = rows.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    Ok(DiffOpSeries {
        n,
        truncation: max_order,
        coeffs,
    })
}

/// One coefficient `c_order` of the reconstruction sum, given the operator's
/// images on every monomial `x^R` with `R ≤ order`.
pub(crate) fn diffop_coefficient(
    n: usize,
    order: &MultiIndex,
    images: &BTreeMap<MultiIndex, Poly>,
) -> Poly {
    let kind = VarKind::Plain { vars: n };
    let mut c = Poly::zero(kind);
    for r in multi_indices_below(order) {
        let image = &images[&r];
        if image.is_zero() {
            continue;
        }
        let s = order.checked_sub(&r).expect("r ≤ order componentwise");
        let sign = if s.degree() % 2 == 1 { -1 } else { 1 };
        let coeff = Scalar::from_rational(BigRational::new(
            BigInt::from(sign),
            r.factorial() * s.factorial(),
        ));
        c = &c + &(image * &Poly::monomial(kind, s, coeff));
    }
    c
}

/// The normal symbol of an element of the symplectic polynomial algebra:
/// the coefficients `α_I(Q)` of its normally ordered star-presentation
/// `Σ_I α_I(Q) ⋆ P^I`. Each `α_I` is stored as a symplectic polynomial
/// supported on the position variables only.
///
/// A symbol is *complete* when every nonzero `α_I` is present (symbols of
/// polynomials always are); otherwise orders above `truncation` are unknown
/// and applications are restricted exactly as for [`DiffOpSeries`].
#[derive(Clone, Debug, PartialEq)]
pub struct NormalSymbol {
    n: usize,
    truncation: u32,
    complete: bool,
    alphas: BTreeMap<MultiIndex, Poly>,
}

impl NormalSymbol {
    pub fn new(
        n: usize,
        truncation: u32,
        complete: bool,
        alphas: BTreeMap<MultiIndex, Poly>,
    ) -> Result<Self> {
        let kind = VarKind::Symplectic { pairs: n };
        for (i, alpha) in &alphas {
            if i.len() != n {
                return Err(Error::InvalidData(format!(
                    "symbol order {i} has length {}, expected {n}",
                    i.len()
                )));
            }
            if i.degree() > truncation {
                return Err(Error::InvalidData(format!(
                    "symbol order {i} exceeds the truncation {truncation}"
                )));
            }
            if alpha.kind() != kind {
                return Err(Error::InvalidData(format!(
                    "coefficient α_{i} is not symplectic in {n} pairs"
                )));
            }
            if alpha.terms().any(|(m, _)| (0..n).any(|v| m.get(v) > 0)) {
                return Err(Error::InvalidData(format!(
                    "coefficient α_{i} involves momentum variables"
                )));
            }
        }
        Ok(NormalSymbol {
            n,
            truncation,
            complete,
            alphas,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Highest momentum order the symbol records.
    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// Whether every nonzero coefficient is present.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Nonzero coefficients `α_I(Q)`, keyed by momentum multi-index.
    pub fn alphas(&self) -> &BTreeMap<MultiIndex, Poly> {
        &self.alphas
    }

    /// The coefficient `α_I(Q)` (zero when absent).
    pub fn alpha(&self, i: &MultiIndex) -> Poly {
        self.alphas
            .get(i)
            .cloned()
            .unwrap_or_else(|| Poly::zero(VarKind::Symplectic { pairs: self.n }))
    }
}

/// Reads a position-only symplectic polynomial as a plain polynomial in `x`.
pub(crate) fn q_poly_to_x(alpha: &Poly) -> Poly {
    let n = alpha.kind().pairs();
    let kind = VarKind::Plain { vars: n };
    let mut out = Poly::zero(kind);
    for (m, c) in alpha.terms() {
        let mut exps = vec![0u32; n];
        for v in 0..n {
            assert_eq!(m.get(v), 0, "coefficient involves momentum variables");
            exps[v] = m.get(n + v);
        }
        out.add_term(MultiIndex::new(exps), c.clone());
    }
    out
}

/// Reads a plain polynomial in `x` as a position-only symplectic polynomial.
pub(crate) fn x_poly_to_q(c: &Poly) -> Poly {
    let n = match c.kind() {
        VarKind::Plain { vars } => vars,
        _ => panic!("expected a plain polynomial"),
    };
    let kind = VarKind::Symplectic { pairs: n };
    let mut out = Poly::zero(kind);
    for (m, coeff) in c.terms() {
        let mut exps = vec![0u32; 2 * n];
        for v in 0..n {
            exps[n + v] = m.get(v);
        }
        out.add_term(MultiIndex::new(exps), coeff.clone());
    }
    out
}

/// The normal symbol of a linear operator, up to momentum order
/// `max_order`: the differential-operator coefficients `c_N(x)` of
/// [`reconstruct_diffop`] rewritten as position polynomials `α_N(Q)`.
pub fn to_normal_symbol(t: &LinOp, max_order: u32) -> Result<NormalSymbol> {
    let series = reconstruct_diffop(t, max_order)?;
    let alphas = series
        .coeffs
        .iter()
        .map(|(order, c)| (order.clone(), x_poly_to_q(c)))
        .collect();
    Ok(NormalSymbol {
        n: series.n,
        truncation: max_order,
        complete: false,
        alphas,
    })
}

/// Applies the differential-operator realization `Σ_I α_I(x) ∂^I` of a
/// normal symbol to a plain polynomial. Complete symbols act on anything;
/// truncated symbols only on polynomials of degree `≤ truncation`, since
/// higher inputs could receive contributions from unknown orders.
pub fn wmap_apply(symbol: &NormalSymbol, p: &Poly) -> Result<Poly> {
    let kind = VarKind::Plain { vars: symbol.n };
    assert_eq!(p.kind(), kind, "operand lives in the wrong variables");
    let d = p.total_degree().unwrap_or(0);
    if !symbol.complete && d > symbol.truncation {
        return Err(Error::DegreeBound {
            bound: symbol.truncation,
            requested: d,
        });
    }
    let mut out = Poly::zero(kind);
    for (order, alpha) in &symbol.alphas {
        let der = multi_derivative(p, order);
        if !der.is_zero() {
            out = &out + &(&q_poly_to_x(alpha) * &der);
        }
    }
    Ok(out)
}

/// Reassembles the symplectic polynomial `Σ_I α_I(Q) ⋆ P^I` from its normal
/// symbol. For a truncated symbol this reproduces only the recorded orders.
pub fn symbol_to_poly(symbol: &NormalSymbol) -> Poly {
    let kind = VarKind::Symplectic { pairs: symbol.n };
    let mut out = Poly::zero(kind);
    for (i, alpha) in &symbol.alphas {
        out = &out + &moyal::star(alpha, &p_power(symbol.n, i));
    }
    out
}

/// The monomial `P^I` as a symplectic polynomial.
pub(crate) fn p_power(n: usize, i: &MultiIndex) -> Poly {
    let mut exps = vec![0u32; 2 * n];
    for v in 0..n {
        exps[v] = i.get(v);
    }
    Poly::monomial(
        VarKind::Symplectic { pairs: n },
        MultiIndex::new(exps),
        Scalar::one(),
    )
}

/// Writes a symplectic polynomial in its normally ordered star-presentation
/// `Σ_I α_I(Q) ⋆ P^I` by peeling leading terms: the star-leading monomial of
/// `q^A ⋆ p^B` is `q^A p^B` with coefficient exactly 1, so the highest
/// remaining monomial determines one summand, and subtracting that summand
/// strictly lowers the remainder in graded-lex order. The result is always
/// complete.
pub fn poly_to_symbol(f: &Poly) -> NormalSymbol {
    let kind = f.kind();
    let n = kind.pairs();
    let mut alphas: BTreeMap<MultiIndex, Poly> = BTreeMap::new();
    let mut rem = f.clone();
    loop {
        let leading = rem
            .terms()
            .next_back()
            .map(|(m, c)| (m.clone(), c.clone()));
        let Some((m, c)) = leading else { break };
        let mut pexps = vec![0u32; n];
        let mut qexps = vec![0u32; 2 * n];
        for v in 0..n {
            pexps[v] = m.get(v);
            qexps[n + v] = m.get(n + v);
        }
        let order = MultiIndex::new(pexps);
        let qmono = MultiIndex::new(qexps);
        alphas
            .entry(order.clone())
            .or_insert_with(|| Poly::zero(kind))
            .add_term(qmono.clone(), c.clone());
        let summand = moyal::star(&Poly::monomial(kind, qmono, c), &p_power(n, &order));
        rem = &rem - &summand;
    }
    alphas.retain(|_, alpha| !alpha.is_zero());
    let truncation = alphas.keys().map(MultiIndex::degree).max().unwrap_or(0);
    NormalSymbol {
        n,
        truncation,
        complete: true,
        alphas,
    }
}
