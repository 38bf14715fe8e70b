//! An independent model of the Weyl algebra: normal-ordered noncommutative
//! arithmetic on the relations `p_i q_j − q_j p_i = δ_ij`, the symmetrization
//! map ρ, and its inverse.
//!
//! The product pulled back through ρ — `ρ⁻¹(ρ(F)·ρ(G))` — must agree exactly
//! with the Moyal ⋆-product at `t = 1`. Because the two sides are computed by
//! entirely different algorithms (bidifferential operators vs. noncommutative
//! rewriting), their agreement is the crate's strongest correctness anchor,
//! and this module is deliberately kept free of any `moyal` dependency.

use std::collections::{BTreeMap, HashMap};

use crate::comb::{binomial, factorial};
use crate::multi_index::{multi_indices_below, MultiIndex};
use crate::poly::{Poly, VarKind};
use crate::scalar::Scalar;

/// A generator letter of the free algebra on `p_1..p_n, q_1..q_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gen {
    /// `p_i`, zero-based index.
    P(usize),
    /// `q_i`, zero-based index.
    Q(usize),
}

/// A word in the free monoid on the generators; the empty word is the unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    n: usize,
    letters: Vec<Gen>,
}

impl Word {
    /// Builds a word over `n` symplectic pairs, validating letter indices.
    pub fn new(n: usize, letters: Vec<Gen>) -> Self {
        assert!(n > 0, "need at least one symplectic pair");
        for g in &letters {
            let idx = match g {
                Gen::P(i) | Gen::Q(i) => *i,
            };
            assert!(idx < n, "generator index {idx} out of range for n = {n}");
        }
        Word { n, letters }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[Gen] {
        &self.letters
    }
}

/// A normal-ordered element `Σ c_{IJ} q^I p^J` of the Weyl algebra: all q's
/// to the left of all p's. This basis representation is unique, so equality
/// of normal forms is equality in the algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    n: usize,
    terms: BTreeMap<(MultiIndex, MultiIndex), Scalar>,
}

impl NormalForm {
    pub fn zero(n: usize) -> Self {
        NormalForm { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        let mut nf = NormalForm::zero(n);
        nf.add_term(MultiIndex::zero(n), MultiIndex::zero(n), Scalar::one());
        nf
    }

    /// The single basis element `q^I p^J` with coefficient `c`.
    pub fn term(n: usize, q_exps: MultiIndex, p_exps: MultiIndex, c: Scalar) -> Self {
        assert_eq!(q_exps.len(), n);
        assert_eq!(p_exps.len(), n);
        let mut nf = NormalForm::zero(n);
        nf.add_term(q_exps, p_exps, c);
        nf
    }

    /// A single generator as a normal form.
    pub fn generator(n: usize, g: Gen) -> Self {
        match g {
            Gen::Q(i) => NormalForm::term(n, MultiIndex::unit(n, i), MultiIndex::zero(n), Scalar::one()),
            Gen::P(i) => NormalForm::term(n, MultiIndex::zero(n), MultiIndex::unit(n, i), Scalar::one()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterates terms as `((q_exps, p_exps), coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (&(MultiIndex, MultiIndex), &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, q_exps: &MultiIndex, p_exps: &MultiIndex) -> Scalar {
        self.terms
            .get(&(q_exps.clone(), p_exps.clone()))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    /// Adds `c·q^I p^J`, dropping the entry if the total cancels.
    pub fn add_term(&mut self, q_exps: MultiIndex, p_exps: MultiIndex, c: Scalar) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry((q_exps, p_exps)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Maximum of `|I| + |J|` over stored terms; `None` for the zero element.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i.degree() + j.degree()).max()
    }

    pub fn scale(&self, c: &Scalar) -> NormalForm {
        if c.is_zero() {
            return NormalForm::zero(self.n);
        }
        let terms = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        NormalForm { n: self.n, terms }
    }

    pub fn add(&self, other: &NormalForm) -> NormalForm {
        assert_eq!(self.n, other.n, "mixed pair counts");
        let mut out = self.clone();
        for ((i, j), c) in &other.terms {
            out.add_term(i.clone(), j.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &NormalForm) -> NormalForm {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    /// Left multiplication by a generator, using the normal-ordering rules
    /// `q_i·(q^I p^J) = q^{I+e_i} p^J` and
    /// `p_i·(q^I p^J) = q^I p^{J+e_i} + I_i·q^{I−e_i} p^J`.
    pub fn mul_gen_left(&self, g: Gen) -> NormalForm {
        let mut out = NormalForm::zero(self.n);
        for ((i, j), c) in &self.terms {
            match g {
                Gen::Q(v) => out.add_term(i.with_step(v, 1), j.clone(), c.clone()),
                Gen::P(v) => {
                    out.add_term(i.clone(), j.with_step(v, 1), c.clone());
                    let mult = i.get(v);
                    if mult > 0 {
                        out.add_term(i.with_step(v, -1), j.clone(), c * &Scalar::from_int(i64::from(mult)));
                    }
                }
            }
        }
        out
    }

    /// Right multiplication by a generator:
    /// `(q^I p^J)·p_i = q^I p^{J+e_i}` and
    /// `(q^I p^J)·q_i = q^{I+e_i} p^J + J_i·q^I p^{J−e_i}`.
    pub fn mul_gen_right(&self, g: Gen) -> NormalForm {
        let mut out = NormalForm::zero(self.n);
        for ((i, j), c) in &self.terms {
            match g {
                Gen::P(v) => out.add_term(i.clone(), j.with_step(v, 1), c.clone()),
                Gen::Q(v) => {
                    out.add_term(i.with_step(v, 1), j.clone(), c.clone());
                    let mult = j.get(v);
                    if mult > 0 {
                        out.add_term(i.clone(), j.with_step(v, -1), c * &Scalar::from_int(i64::from(mult)));
                    }
                }
            }
        }
        out
    }

    /// `self` raised to a small power under [`oracle_multiply`].
    pub fn pow(&self, e: u32) -> NormalForm {
        let mut acc = NormalForm::one(self.n);
        for _ in 0..e {
            acc = oracle_multiply(&acc, self);
        }
        acc
    }
}

/// Normal-orders a free word by folding right multiplications, one letter at
/// a time — the map-based production form of the rewriting system
/// `p_i q_j → q_j p_i + δ_ij`.
pub fn normal_order(w: &Word) -> NormalForm {
    let mut acc = NormalForm::one(w.n);
    for &g in &w.letters {
        acc = acc.mul_gen_right(g);
    }
    acc
}

/// Product in the Weyl algebra on normal forms. The cross term commutes
/// `p^J` past `q^K` with the exact consequence of iterating the relations:
///
/// ```text
/// p^J q^K = Σ_{R ≤ min(J,K)}  ∏_i C(J_i, R_i) C(K_i, R_i) R_i!  ·  q^{K−R} p^{J−R}.
/// ```
pub fn oracle_multiply(a: &NormalForm, b: &NormalForm) -> NormalForm {
    assert_eq!(a.n, b.n, "mixed pair counts");
    let mut out = NormalForm::zero(a.n);
    for ((i1, j1), c1) in &a.terms {
        for ((i2, j2), c2) in &b.terms {
            let bound = MultiIndex::new(
                (0..a.n).map(|v| j1.get(v).min(i2.get(v))).collect::<Vec<_>>(),
            );
            for r in multi_indices_below(&bound) {
                let mut factor = num::BigInt::from(1);
                for v in 0..a.n {
                    let rv = u64::from(r.get(v));
                    factor *= binomial(u64::from(j1.get(v)), rv)
                        * binomial(u64::from(i2.get(v)), rv)
                        * factorial(rv);
                }
                let q_exps = i1.add(&i2.checked_sub(&r).expect("r bounded by i2"));
                let p_exps = j1.checked_sub(&r).expect("r bounded by j1").add(j2);
                out.add_term(q_exps, p_exps, c1 * c2 * &Scalar::from_bigint(factor));
            }
        }
    }
    out
}

/// Memoizing home of the symmetrization map ρ and its inverse.
///
/// ρ sends a commutative monomial to the average of all orderings of its
/// letters in the Weyl algebra. The recursion used here regroups that
/// permutation sum by first letter,
///
/// ```text
/// ρ(x^A) = (1/|A|) Σ_{v: A_v > 0} A_v · (letter v) · ρ(x^{A−e_v}),
/// ```
///
/// which is exact and shares all sub-multiset work through the memo table.
/// Reusing one `Symmetrizer` across many calls (as the oracle product does)
/// keeps repeated monomials free.
pub struct Symmetrizer {
    n: usize,
    memo: HashMap<MultiIndex, NormalForm>,
}

impl Symmetrizer {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "need at least one symplectic pair");
        Symmetrizer { n, memo: HashMap::new() }
    }

    /// ρ on a commutative monomial given by its exponent vector over
    /// `p_1..p_n, q_1..q_n`.
    fn rho_monomial(&mut self, a: &MultiIndex) -> NormalForm {
        if let Some(hit) = self.memo.get(a) {
            return hit.clone();
        }
        let k = a.degree();
        let result = if k == 0 {
            NormalForm::one(self.n)
        } else {
            let mut acc = NormalForm::zero(self.n);
            for v in 0..2 * self.n {
                let mult = a.get(v);
                if mult == 0 {
                    continue;
                }
                let gen = if v < self.n { Gen::P(v) } else { Gen::Q(v - self.n) };
                let sub = self.rho_monomial(&a.with_step(v, -1));
                acc = acc.add(&sub.mul_gen_left(gen).scale(&Scalar::from_ratio(i64::from(mult), i64::from(k))));
            }
            acc
        };
        self.memo.insert(a.clone(), result.clone());
        result
    }

    /// The symmetrization map ρ, extended linearly to polynomials.
    pub fn rho(&mut self, f: &Poly) -> NormalForm {
        assert_eq!(f.kind(), VarKind::Symplectic { pairs: self.n }, "wrong variable kind for this symmetrizer");
        let mut out = NormalForm::zero(self.n);
        for (a, c) in f.terms() {
            out = out.add(&self.rho_monomial(a).scale(c));
        }
        out
    }

    /// ρ⁻¹ by degree-descending back-substitution: ρ(monomial of degree k)
    /// is that monomial's normal word with coefficient exactly 1 plus terms
    /// of lower degree, so peeling top terms one at a time terminates.
    pub fn rho_inverse(&mut self, a: &NormalForm) -> Poly {
        assert_eq!(a.n, self.n, "wrong pair count for this symmetrizer");
        let kind = VarKind::Symplectic { pairs: self.n };
        let mut rest = a.clone();
        let mut out = Poly::zero(kind);
        while !rest.is_zero() {
            let ((qi, pj), c) = rest
                .terms
                .iter()
                .max_by_key(|((i, j), _)| i.degree() + j.degree())
                .map(|(k, v)| (k.clone(), v.clone()))
                .expect("nonzero normal form has a top term");
            let mut exps = vec![0u32; 2 * self.n];
            for v in 0..self.n {
                exps[v] = pj.get(v);
                exps[self.n + v] = qi.get(v);
            }
            let mono = MultiIndex::new(exps);
            out.add_term(mono.clone(), c.clone());
            rest = rest.sub(&self.rho_monomial(&mono).scale(&c));
        }
        out
    }
}

/// ρ with a throwaway memo table. For bulk work construct a [`Symmetrizer`].
pub fn symmetrize(f: &Poly) -> NormalForm {
    Symmetrizer::new(f.kind().pairs()).rho(f)
}

/// ρ⁻¹ with a throwaway memo table.
pub fn unsymmetrize(a: &NormalForm) -> Poly {
    Symmetrizer::new(a.n).rho_inverse(a)
}

/// The pullback product `ρ⁻¹(ρ(F)·ρ(G))`, which the isomorphism theorem says
/// equals the Moyal product at `t = 1`. One memo table serves all three ρ
/// evaluations.
pub fn star_via_symmetrization(f: &Poly, g: &Poly) -> Poly {
    let pairs = f.kind().pairs();
    assert_eq!(g.kind(), VarKind::Symplectic { pairs }, "mixed pair counts");
    let mut sym = Symmetrizer::new(pairs);
    let product = oracle_multiply(&sym.rho(f), &sym.rho(g));
    sym.rho_inverse(&product)
}
