//! Supertraces on operator algebras and the truncated formal inverse
//! transform.
//!
//! Finite-rank operators carry an intrinsic supertrace
//! ([`finite_rank_supertrace`]): the alternating sum of diagonal entries.
//! General operators get a supertrace through their normal symbol,
//!
//! ```text
//! Str(T) = Σ_I Str(α_I(Q) ⋆ P^I),
//! ```
//!
//! summed in batches of momentum order `|I|` ([`str_wbar`]); on finite-rank
//! operators the two agree up to the renormalizing factor `2^n`, which
//! motivates the renormalized supertrace [`rstr`] `= str_wbar / 2^n`.
//!
//! Summing the series `Σ_I α_I(Q) ⋆ P^I` itself, one homogeneous degree at a
//! time, yields the operator's formal inverse transform back into the
//! commutative algebra ([`iw_numeric`]); dilations and matrix units have
//! closed-form transforms ([`iw_closed_form`]) that serve as oracles for the
//! numeric path. Convergence of either sum is decided by a documented
//! heuristic batch policy ([`SummationPolicy`]) — the underlying theory only
//! defines topological convergence, with no tail bound.

use std::collections::BTreeMap;

use num::{BigInt, BigRational};

use crate::comb::{binomial, falling};
use crate::error::{Error, Result};
use crate::exec;
use crate::laguerre::laguerre_poly;
use crate::moyal;
use crate::multi_index::{monomials_of_degree, MultiIndex};
use crate::operators::{diffop_coefficient, p_power, x_poly_to_q, LinOp, NormalSymbol, SpecialOp};
use crate::poly::{Poly, VarKind};
use crate::scalar::Scalar;

/// Consecutive below-tolerance batch deltas required to declare convergence.
const CONVERGENCE_RUN: u32 = 3;
/// Consecutive non-decreasing batch magnitudes required to declare
/// divergence.
const DIVERGENCE_RUN: u32 = 5;
/// Absolute magnitude beyond which a sum is declared divergent outright.
const MAGNITUDE_CAP: f64 = 1e12;

/// Numeric summation policy. Terms are grouped into batches by momentum
/// order `|I|`; partial sums stay exact (Gaussian rationals) and only the
/// batch *deltas* are compared in binary64 against the tolerance.
///
/// This policy is a heuristic: it decides convergence from finitely many
/// batches, with no tail bound. Reports carry the status so callers can tell
/// a certified finite sum from a policy decision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SummationPolicy {
    /// Convergence threshold for batch deltas (binary64 comparison).
    pub tol: f64,
    /// Maximum number of batches before giving up as undetermined.
    pub max_batches: u32,
}

impl Default for SummationPolicy {
    fn default() -> Self {
        SummationPolicy {
            tol: 1e-12,
            max_batches: 200,
        }
    }
}

/// Outcome of a batch-summed scalar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceStatus {
    /// The series was finite and summed completely; the value is exact.
    Exact,
    /// The batch policy fired; the value is the partial sum at that point.
    Converged { batches_used: u32 },
    Diverged,
    Undetermined,
}

/// A batch-summed scalar with its certification status. The value is the
/// exact partial sum; it is only meaningful as an answer for `Exact` and
/// `Converged` statuses (for the others it is the last partial sum, kept for
/// diagnostics).
#[derive(Clone, Debug, PartialEq)]
pub struct TraceResult {
    pub value: Scalar,
    pub status: TraceStatus,
}

impl TraceResult {
    /// Whether the status certifies the value (exactly or by the policy).
    pub fn is_decided(&self) -> bool {
        matches!(
            self.status,
            TraceStatus::Exact | TraceStatus::Converged { .. }
        )
    }
}

/// Per-component outcome of a graded summation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesStatus {
    Converged { terms_used: u32 },
    Diverged,
    Undetermined,
}

/// One homogeneous component of a [`GradedSeries`].
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesComponent {
    pub degree: u32,
    /// Homogeneous of `degree` (possibly zero).
    pub poly: Poly,
    pub status: SeriesStatus,
}

/// A power series in the symplectic variables, truncated by total degree,
/// with a summation status per homogeneous component.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedSeries {
    n: usize,
    max_degree: u32,
    components: Vec<SeriesComponent>,
}

impl GradedSeries {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// All components, indexed by degree `0..=max_degree`.
    pub fn components(&self) -> &[SeriesComponent] {
        &self.components
    }

    pub fn component(&self, degree: u32) -> &SeriesComponent {
        &self.components[degree as usize]
    }

    /// Whether every component converged — a single diverged or undecided
    /// component means the transform does not exist (or cannot be certified)
    /// at this truncation.
    pub fn exists(&self) -> bool {
        self.components
            .iter()
            .all(|c| matches!(c.status, SeriesStatus::Converged { .. }))
    }

    /// Whether some component diverged outright.
    pub fn has_divergence(&self) -> bool {
        self.components
            .iter()
            .any(|c| c.status == SeriesStatus::Diverged)
    }

    /// The sum of all component polynomials.
    pub fn assembled(&self) -> Poly {
        let mut acc = Poly::zero(VarKind::Symplectic { pairs: self.n });
        for c in &self.components {
            acc = &acc + &c.poly;
        }
        acc
    }

    /// The constant term (the degree-0 component's value at the origin).
    pub fn value_at_zero(&self) -> Scalar {
        self.components[0].poly.eval_zero()
    }

    /// Assembles a series from a fully known truncated polynomial, marking
    /// every component converged with the given term count.
    pub fn from_polynomial(n: usize, value: &Poly, max_degree: u32, terms_used: u32) -> Self {
        let components = (0..=max_degree)
            .map(|k| SeriesComponent {
                degree: k,
                poly: value.component(k),
                status: SeriesStatus::Converged { terms_used },
            })
            .collect();
        GradedSeries {
            n,
            max_degree,
            components,
        }
    }
}

/// Input to the symbol-based summations: either an operator (whose symbol is
/// reconstructed batch by batch) or an already-computed normal symbol.
#[derive(Clone, Copy, Debug)]
pub enum TraceInput<'a> {
    Op(&'a LinOp),
    Symbol(&'a NormalSymbol),
}

impl TraceInput<'_> {
    pub fn n(&self) -> usize {
        match self {
            TraceInput::Op(t) => t.n(),
            TraceInput::Symbol(s) => s.n(),
        }
    }
}

/// Incremental supplier of normal-symbol batches: all `(I, α_I)` with
/// `|I| = d`, for ascending `d`. Operators are queried once per source
/// monomial and memoized; symbols are read off their stored table.
enum BatchSource<'a> {
    Op {
        op: &'a LinOp,
        images: BTreeMap<MultiIndex, Poly>,
    },
    Symbol(&'a NormalSymbol),
}

impl<'a> BatchSource<'a> {
    fn new(input: TraceInput<'a>) -> Self {
        match input {
            TraceInput::Op(op) => BatchSource::Op {
                op,
                images: BTreeMap::new(),
            },
            TraceInput::Symbol(s) => BatchSource::Symbol(s),
        }
    }

    fn n(&self) -> usize {
        match self {
            BatchSource::Op { op, .. } => op.n(),
            BatchSource::Symbol(s) => s.n(),
        }
    }

    /// Whether exhaustion of this source means the full series was summed.
    fn is_finite(&self) -> bool {
        matches!(self, BatchSource::Symbol(s) if s.is_complete())
    }

    /// The batch at order `d`, or `None` once the source is exhausted
    /// (truncated symbols beyond their truncation; rule operators beyond
    /// their trusted bound). Must be called with ascending `d`.
    fn batch(&mut self, d: u32) -> Result<Option<Vec<(MultiIndex, Poly)>>> {
        match self {
            BatchSource::Symbol(sym) => {
                if d > sym.truncation() {
                    return Ok(None);
                }
                Ok(Some(
                    sym.alphas()
                        .iter()
                        .filter(|(i, _)| i.degree() == d)
                        .map(|(i, a)| (i.clone(), a.clone()))
                        .collect(),
                ))
            }
            BatchSource::Op { op, images } => {
                if let LinOp::Rule { degree_bound, .. } = op {
                    if d > *degree_bound {
                        return Ok(None);
                    }
                }
                let n = op.n();
                for m in monomials_of_degree(n, d) {
                    images.insert(m.clone(), op.apply_monomial(&m)?);
                }
                let orders = monomials_of_degree(n, d);
                let rows = exec::map(&orders, |order| {
                    let c = diffop_coefficient(n, order, images);
                    (order.clone(), x_poly_to_q(&c))
                });
                Ok(Some(
                    rows.into_iter().filter(|(_, a)| !a.is_zero()).collect(),
                ))
            }
        }
    }

    /// First batch order whose contribution to the scalar supertrace can
    /// carry new information; the convergence counter starts there. The
    /// supertrace only sees the `Q^I`-diagonal of `α_I`, which is built from
    /// the operator's diagonal entries `[x^R] T(x^R)` with `R ≤ I`.
    fn trace_activation(&self) -> u32 {
        match self {
            BatchSource::Symbol(_) => 0,
            BatchSource::Op { op, .. } => match op {
                LinOp::FiniteRank { table, .. } => {
                    table.keys().map(MultiIndex::degree).max().unwrap_or(0)
                }
                // Black-box rules could hide diagonal entries anywhere below
                // their bound; counting from the start is a documented
                // heuristic, like the policy itself.
                LinOp::Rule { .. } => 0,
                LinOp::Special { op, .. } => match op {
                    SpecialOp::E { source, .. } => source.degree(),
                    SpecialOp::S { .. } | SpecialOp::ExpEuler { .. } => 0,
                },
            },
        }
    }

    /// First batch order that can touch the degree-`k` component of the
    /// inverse transform: `α_I ⋆ P^I` reaches degree at most
    /// `deg α_I + |I|`, and `deg α_I` is bounded per source kind.
    fn iw_activation(&self, k: u32) -> u32 {
        fn half_up(x: i64) -> u32 {
            if x <= 0 {
                0
            } else {
                ((x + 1) / 2) as u32
            }
        }
        match self {
            BatchSource::Symbol(_) => 0,
            BatchSource::Op { op, .. } => match op {
                // deg α_I ≤ D_out + |I| when outputs have degree ≤ D_out.
                LinOp::FiniteRank { table, .. } => {
                    let d_out = table
                        .values()
                        .filter_map(Poly::total_degree)
                        .max()
                        .unwrap_or(0);
                    half_up(i64::from(k) - i64::from(d_out))
                }
                LinOp::Rule { .. } => 0,
                LinOp::Special { op, .. } => match op {
                    // α_N = ±q^{target+N−source}/(…) for N ≥ source.
                    SpecialOp::E { target, source } => {
                        source.degree()
                            + half_up(
                                i64::from(k)
                                    - i64::from(target.degree())
                                    - i64::from(source.degree()),
                            )
                    }
                    // α_N is a multiple of q^N (deg α_N = |N|).
                    SpecialOp::S { .. } | SpecialOp::ExpEuler { .. } => k.div_ceil(2),
                },
            },
        }
    }
}

/// One summation target's policy state: convergence and divergence runs.
struct PolicyState {
    small_run: u32,
    nondec_run: u32,
    prev_mag: Option<f64>,
}

enum Decision {
    Converged,
    Diverged,
}

/// First batch at which the non-decreasing-run divergence rule may fire for
/// a target that activates at `activation`. Convergent batch families here
/// look like `poly(d)·r^d` with `r < 1` and `deg poly` on the order of the
/// activation index, so their magnitudes *rise* for roughly
/// `deg poly / ln(1/r)` batches after onset before the geometric decay wins;
/// counting that hump as divergence would flag convergent components.
/// Genuinely divergent families stay non-decreasing forever and are still
/// caught shortly after this point (the magnitude cap stays armed
/// throughout).
fn divergence_arming(activation: u32) -> u32 {
    3 * activation + DIVERGENCE_RUN
}

impl PolicyState {
    fn new() -> Self {
        PolicyState {
            small_run: 0,
            nondec_run: 0,
            prev_mag: None,
        }
    }

    /// Feeds one batch magnitude; convergence is checked before divergence,
    /// so an all-zero tail converges rather than counting as non-decreasing.
    /// The non-decreasing-run rule only fires once `armed` (see
    /// [`divergence_arming`]); the run itself is tracked from the start.
    fn feed(&mut self, mag: f64, tol: f64, armed: bool) -> Option<Decision> {
        if mag > MAGNITUDE_CAP {
            return Some(Decision::Diverged);
        }
        if mag < tol {
            self.small_run += 1;
        } else {
            self.small_run = 0;
        }
        if self.small_run >= CONVERGENCE_RUN {
            return Some(Decision::Converged);
        }
        if let Some(prev) = self.prev_mag {
            if mag >= prev {
                self.nondec_run += 1;
            } else {
                self.nondec_run = 0;
            }
        }
        self.prev_mag = Some(mag);
        if armed && self.nondec_run >= DIVERGENCE_RUN {
            return Some(Decision::Diverged);
        }
        None
    }
}

/// `Str(Q^A ⋆ P^A) = (−1)^{|A|} A! / 2^{|A|}` — the only nonzero supertrace
/// among normally ordered monomial products, and the closed form the batch
/// summation uses. Tests verify it against the star product rather than
/// assuming it (including the off-diagonal vanishing).
pub fn str_w_q_star_p(a: &MultiIndex) -> Scalar {
    let sign = if a.degree() % 2 == 1 { -1 } else { 1 };
    Scalar::from_rational(BigRational::new(
        a.factorial() * BigInt::from(sign),
        BigInt::from(1) << a.degree(),
    ))
}

/// The symplectic monomial exponents of `Q^I`.
fn q_monomial_exps(n: usize, i: &MultiIndex) -> MultiIndex {
    let mut exps = vec![0u32; 2 * n];
    for v in 0..n {
        exps[n + v] = i.get(v);
    }
    MultiIndex::new(exps)
}

/// The coefficient-magnitude of a batch delta, in binary64.
fn poly_magnitude(p: &Poly) -> f64 {
    p.terms().map(|(_, c)| c.abs_f64()).sum()
}

/// The intrinsic supertrace of a finite-rank operator: the alternating sum
/// `Σ_I (−1)^{|I|} [x^I] T(x^I)` over its diagonal. Matrix units count as
/// finite-rank; other operators are rejected.
pub fn finite_rank_supertrace(t: &LinOp) -> Result<Scalar> {
    let table = t.as_finite_table().ok_or_else(|| {
        Error::Domain("the intrinsic supertrace requires a finite-rank operator".into())
    })?;
    let mut acc = Scalar::zero();
    for (i, out) in &table {
        let diag = out.coeff(i);
        if diag.is_zero() {
            continue;
        }
        if i.degree() % 2 == 1 {
            acc = acc - diag;
        } else {
            acc = acc + diag;
        }
    }
    Ok(acc)
}

/// The operator supertrace `Σ_I Str(α_I(Q) ⋆ P^I)`, summed in batches of
/// `|I|` under the policy. Complete symbols are finite sums and come back
/// `Exact`; everything else carries a policy status.
pub fn str_wbar(input: TraceInput<'_>, policy: &SummationPolicy) -> Result<TraceResult> {
    let mut source = BatchSource::new(input);
    let n = source.n();
    let finite = source.is_finite();
    let activation = source.trace_activation();
    let mut sum = Scalar::zero();
    let mut state = PolicyState::new();
    for d in 0..policy.max_batches {
        let Some(batch) = source.batch(d)? else {
            let status = if finite {
                TraceStatus::Exact
            } else {
                TraceStatus::Undetermined
            };
            return Ok(TraceResult { value: sum, status });
        };
        let mut delta = Scalar::zero();
        for (i, alpha) in &batch {
            let diag = alpha.coeff(&q_monomial_exps(n, i));
            if !diag.is_zero() {
                delta = delta + diag * &str_w_q_star_p(i);
            }
        }
        sum = sum + &delta;
        // Finite sources are summed to exhaustion — the value is exact, so
        // the heuristic must not cut the sum short.
        if finite || d < activation {
            continue;
        }
        let armed = d >= divergence_arming(activation);
        match state.feed(delta.abs_f64(), policy.tol, armed) {
            Some(Decision::Converged) => {
                return Ok(TraceResult {
                    value: sum,
                    status: TraceStatus::Converged {
                        batches_used: d + 1,
                    },
                });
            }
            Some(Decision::Diverged) => {
                return Ok(TraceResult {
                    value: sum,
                    status: TraceStatus::Diverged,
                });
            }
            None => {}
        }
    }
    Ok(TraceResult {
        value: sum,
        status: TraceStatus::Undetermined,
    })
}

/// The renormalized supertrace `str_wbar / 2^n`: on finite-rank operators it
/// recovers the intrinsic supertrace, and it extends to every operator whose
/// batch sum the policy can decide — e.g. the identity gets `1/2^n` instead
/// of the meaningless `∞ − ∞`.
pub fn rstr(input: TraceInput<'_>, policy: &SummationPolicy) -> Result<TraceResult> {
    let n = input.n() as u32;
    let r = str_wbar(input, policy)?;
    let scale = Scalar::from_rational(BigRational::new(BigInt::from(1), BigInt::from(1) << n));
    Ok(TraceResult {
        value: r.value * scale,
        status: r.status,
    })
}

/// Report of the partial sums of `Σ_S (I+S)!/(I!S!) 2^{−|S|}`, whose limit
/// `2^{|I|+n}` is the normalization behind the `2^n` in [`rstr`].
#[derive(Clone, Debug)]
pub struct TailReport {
    /// The limit `2^{|I|+n}`.
    pub target: Scalar,
    /// Exact partial sums after each batch of `|S|`.
    pub partials: Vec<Scalar>,
    /// Whether the partial sums increased strictly at every batch.
    pub monotone: bool,
    /// `|target − last partial|` in binary64.
    pub final_gap: f64,
}

/// Sums the binomial tail identity batch by batch, exactly.
pub fn binomial_tail_identity_check(i: &MultiIndex, batches: u32) -> TailReport {
    let n = i.len();
    let mut sum = Scalar::zero();
    let mut partials = Vec::with_capacity(batches as usize);
    for d in 0..batches {
        for s in monomials_of_degree(n, d) {
            let mut num = BigInt::from(1);
            for v in 0..n {
                num *= binomial(u64::from(i.get(v) + s.get(v)), u64::from(s.get(v)));
            }
            sum = sum + Scalar::from_rational(BigRational::new(num, BigInt::from(1) << d));
        }
        partials.push(sum.clone());
    }
    let target = Scalar::from_bigint(BigInt::from(1) << (i.degree() + n as u32));
    let monotone = partials.windows(2).all(|w| {
        let diff = &w[1] - &w[0];
        !diff.is_zero() && diff.re() > &BigRational::from_integer(0.into())
    });
    let final_gap = partials
        .last()
        .map(|last| (&target - last).abs_f64())
        .unwrap_or(f64::INFINITY);
    TailReport {
        target,
        partials,
        monotone,
        final_gap,
    }
}

/// Keeps only the terms of total degree `≤ max_degree`.
fn truncate(p: &Poly, max_degree: u32) -> Poly {
    Poly::from_terms(
        p.kind(),
        p.terms()
            .filter(|(m, _)| m.degree() <= max_degree)
            .map(|(m, c)| (m.clone(), c.clone())),
    )
}

/// The formal inverse transform of an operator, summing `Σ_I α_I(Q) ⋆ P^I`
/// one homogeneous degree at a time up to `max_degree`. Each component is an
/// independent batch sum with its own policy state; the star products inside
/// a batch run as a data-parallel map. A component stops accumulating once
/// its status is decided; a single diverged component means the transform
/// does not exist.
pub fn iw_numeric(
    input: TraceInput<'_>,
    max_degree: u32,
    policy: &SummationPolicy,
) -> Result<GradedSeries> {
    let mut source = BatchSource::new(input);
    let n = source.n();
    let finite = source.is_finite();
    let kind = VarKind::Symplectic { pairs: n };

    struct Comp {
        acc: Poly,
        state: PolicyState,
        decided: Option<SeriesStatus>,
        batches_summed: u32,
    }
    let mut comps: Vec<Comp> = (0..=max_degree)
        .map(|_| Comp {
            acc: Poly::zero(kind),
            state: PolicyState::new(),
            decided: None,
            batches_summed: 0,
        })
        .collect();

    let mut exhausted_finite = false;
    for d in 0..policy.max_batches {
        if comps.iter().all(|c| c.decided.is_some()) {
            break;
        }
        let Some(batch) = source.batch(d)? else {
            exhausted_finite = finite;
            break;
        };
        let starred: Vec<Poly> = exec::map(&batch, |(i, alpha)| {
            truncate(&moyal::star(alpha, &p_power(n, i)), max_degree)
        });
        let mut total = Poly::zero(kind);
        for s in &starred {
            total = &total + s;
        }
        for k in 0..=max_degree {
            let comp = &mut comps[k as usize];
            if comp.decided.is_some() {
                continue;
            }
            let delta = total.component(k);
            comp.acc = &comp.acc + &delta;
            comp.batches_summed = d + 1;
            // Finite sources are summed to exhaustion: a component decided
            // early would stop accumulating and miss later contributions.
            let activation = source.iw_activation(k);
            if finite || d < activation {
                continue;
            }
            let armed = d >= divergence_arming(activation);
            match comp.state.feed(poly_magnitude(&delta), policy.tol, armed) {
                Some(Decision::Converged) => {
                    comp.decided = Some(SeriesStatus::Converged { terms_used: d + 1 });
                }
                Some(Decision::Diverged) => {
                    comp.decided = Some(SeriesStatus::Diverged);
                }
                None => {}
            }
        }
    }

    let components = comps
        .into_iter()
        .enumerate()
        .map(|(k, comp)| {
            let status = comp.decided.unwrap_or(if exhausted_finite {
                SeriesStatus::Converged {
                    terms_used: comp.batches_summed,
                }
            } else {
                SeriesStatus::Undetermined
            });
            SeriesComponent {
                degree: k as u32,
                poly: comp.acc,
                status,
            }
        })
        .collect();
    Ok(GradedSeries {
        n,
        max_degree,
        components,
    })
}

/// Exact domain check for the dilation closed form: `|1 − λ| < 2`, compared
/// as `|1 − λ|² < 4` in rationals.
fn dilation_domain_check(lambda: &Scalar) -> Result<()> {
    let one_minus = Scalar::one() - lambda.clone();
    let norm = one_minus.abs_sq();
    if norm >= BigRational::from_integer(4.into()) {
        return Err(Error::Domain(format!(
            "dilation closed form requires |1 − λ| < 2; λ = {lambda} has |1 − λ|² = {}",
            crate::scalar::rational_string(&norm)
        )));
    }
    Ok(())
}

/// `exp(c·u)` truncated to total degree ≤ `max_degree`, for `u` homogeneous
/// of degree 2.
fn exp_series(u: &Poly, c: &Scalar, max_degree: u32) -> Poly {
    debug_assert_eq!(u.homogeneous_degree(), Some(2));
    let mut acc = Poly::one(u.kind());
    let mut term = Poly::one(u.kind());
    for m in 1..=(max_degree / 2) {
        term = &term * u;
        term = term.scale(&(c * &Scalar::from_ratio(1, i64::from(m))));
        acc = &acc + &term;
    }
    acc
}

/// `Σ_v p_v q_v` — the rotation-invariant quadratic.
fn pq_sum(n: usize) -> Poly {
    let mut u = Poly::zero(VarKind::Symplectic { pairs: n });
    for v in 0..n {
        u = &u + &(&Poly::p(n, v) * &Poly::q(n, v));
    }
    u
}

/// Dilation closed form: `IW(S_λ) = (2/(1+λ))^n exp(2 (λ−1)/(λ+1) Σ p_v q_v)`,
/// valid for `|1 − λ| < 2`.
fn dilation_closed_form(n: usize, lambda: &Scalar, max_degree: u32) -> Result<Poly> {
    dilation_domain_check(lambda)?;
    let denom_inv = (Scalar::one() + lambda.clone()).inv();
    let pref = (Scalar::from_int(2) * &denom_inv).pow(n as u32);
    let ratio = Scalar::from_int(2) * (lambda.clone() - Scalar::one()) * denom_inv;
    Ok(exp_series(&pq_sum(n), &ratio, max_degree).scale(&pref))
}

/// Euler-exponential closed form, written in the hyperbolic shape
/// `(e^{−τ/2}/cosh(τ/2))^n exp(2 tanh(τ/2) Σ p_v q_v)` and evaluated exactly
/// through `λ = e^τ`: `tanh(τ/2) = (λ−1)/(λ+1)` and
/// `e^{−τ/2}/cosh(τ/2) = 2/(1+λ)`. Algebraically this coincides with the
/// dilation form — the consistency of the two printed shapes is pinned by a
/// test.
fn euler_exponential_closed_form(n: usize, lambda: &Scalar, max_degree: u32) -> Result<Poly> {
    dilation_domain_check(lambda)?;
    let denom_inv = (Scalar::one() + lambda.clone()).inv();
    let tanh_half = (lambda.clone() - Scalar::one()) * &denom_inv;
    let pref = (Scalar::from_int(2) * denom_inv).pow(n as u32);
    let exponent = Scalar::from_int(2) * tanh_half;
    Ok(exp_series(&pq_sum(n), &exponent, max_degree).scale(&pref))
}

/// Single-pair matrix-unit closed form in the variables `(p_v, q_v)`:
///
/// ```text
/// IW(E_ij) = (−1)^j 2^{i−j+1} L_j^{(i−j)}(4pq) e^{−2pq} q^{i−j}   (j ≤ i)
///          = (−1)^i 2^{j−i+1} (i!/j!) L_i^{(j−i)}(4pq) e^{−2pq} p^{j−i}   (j ≥ i)
/// ```
fn matrix_unit_factor(n: usize, v: usize, i: u32, j: u32, max_degree: u32) -> Poly {
    let pq = &Poly::p(n, v) * &Poly::q(n, v);
    let four_pq = pq.scale(&Scalar::from_int(4));
    let expf = exp_series(&pq, &Scalar::from_int(-2), max_degree);
    let (beta, alpha, sign_deg, pow2, ratio, tail) = if j <= i {
        (
            j,
            i64::from(i) - i64::from(j),
            j,
            i - j + 1,
            Scalar::one(),
            Poly::q(n, v).pow(i - j),
        )
    } else {
        (
            i,
            i64::from(j) - i64::from(i),
            i,
            j - i + 1,
            Scalar::from_rational(BigRational::new(
                BigInt::from(1),
                falling(u64::from(j), u64::from(j - i)),
            )),
            Poly::p(n, v).pow(j - i),
        )
    };
    let lag = laguerre_poly(beta, alpha, &four_pq);
    let sign = if sign_deg % 2 == 1 { -1 } else { 1 };
    let scale = Scalar::from_int(sign) * Scalar::from_bigint(BigInt::from(1) << pow2) * ratio;
    let product = &(&lag * &expf) * &tail;
    truncate(&product.scale(&scale), max_degree)
}

/// Matrix-unit closed form for any number of pairs: the per-variable factors
/// multiply, because the factors live in disjoint variable pairs.
fn matrix_unit_closed_form(
    n: usize,
    target: &MultiIndex,
    source: &MultiIndex,
    max_degree: u32,
) -> Poly {
    let mut acc = Poly::one(VarKind::Symplectic { pairs: n });
    for v in 0..n {
        let f = matrix_unit_factor(n, v, target.get(v), source.get(v), max_degree);
        acc = truncate(&(&acc * &f), max_degree);
    }
    acc
}

/// Closed-form inverse transform for the special operators, truncated to
/// `max_degree`. These are the oracles the numeric path is tested against.
///
/// Errors with a domain error when the dilation parameter sits outside
/// `|1 − λ| < 2` (where the closed form is invalid — and the numeric sum
/// genuinely diverges).
pub fn iw_closed_form(n: usize, op: &SpecialOp, max_degree: u32) -> Result<GradedSeries> {
    let value = match op {
        SpecialOp::S { lambda } => dilation_closed_form(n, lambda, max_degree)?,
        SpecialOp::ExpEuler { lambda } => euler_exponential_closed_form(n, lambda, max_degree)?,
        SpecialOp::E { target, source } => {
            if target.len() != n || source.len() != n {
                return Err(Error::InvalidData(format!(
                    "matrix unit indices must have length {n}"
                )));
            }
            matrix_unit_closed_form(n, target, source, max_degree)
        }
    };
    Ok(GradedSeries::from_polynomial(
        n,
        &value,
        max_degree,
        max_degree / 2 + 1,
    ))
}
