//! The Moyal ⋆-product on polynomial symbols and everything built pointwise
//! from it: the bidifferential coefficients `C_k`, the four bracket flavours,
//! the supertrace `Str`, and the bilinear forms κ and B.
//!
//! The product is the finite sum `F ⋆_t G = Σ_k t^k C_k(F, G)` with
//! `C_k = (1/2^k k!) · m ∘ ℘^k`, where ℘ acts on elementary tensors by
//!
//! ```text
//! ℘(F ⊗ G) = Σ_i (∂F/∂p_i ⊗ ∂G/∂q_i − ∂F/∂q_i ⊗ ∂G/∂p_i)
//! ```
//!
//! and `m` multiplies the two tensor legs back together. On polynomials the
//! sum over `k` terminates at `min(deg F, deg G)`, so every result is exact.
//!
//! Two independent implementations of the product are kept: the ℘-iteration
//! here (any number of pairs) and the explicit one-pair formula
//! [`star_n1_closed`]; they are checked against each other in tests.

use std::collections::BTreeMap;

use crate::comb::{binomial, factorial};
use crate::multi_index::MultiIndex;
use crate::poly::{Poly, VarKind};
use crate::scalar::Scalar;

/// The four bracket flavours on the deformed algebra.
///
/// With `f`, `g` the Z₂-parities of homogeneous arguments, every flavour is
/// `F ⋆ G − (−1)^σ G ⋆ F` for the sign exponent σ:
///
/// | kind           | σ         | classical name          |
/// |----------------|-----------|--------------------------|
/// | `Lie`          | `0`       | commutator `[·,·]_ℒ`     |
/// | `Super`        | `f·g`     | super bracket `[·,·]`    |
/// | `TwistedLie`   | `f`       | `ad′_ℒ`                  |
/// | `TwistedSuper` | `f·(g+1)` | twisted adjoint `ad′`    |
///
/// Non-homogeneous arguments are split into parity parts and the results
/// summed, since the signs are only defined on homogeneous elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BracketKind {
    Lie,
    Super,
    TwistedLie,
    TwistedSuper,
}

impl BracketKind {
    /// Sign exponent σ(f, g) for parities `f`, `g` ∈ {0, 1}.
    pub fn sign_exponent(self, f: u8, g: u8) -> u8 {
        match self {
            BracketKind::Lie => 0,
            BracketKind::Super => f * g,
            BracketKind::TwistedLie => f,
            BracketKind::TwistedSuper => f * (g + 1),
        }
    }
}

/// A finite sum of elementary tensors `x^A ⊗ x^B` over one symplectic
/// variable set: the working representation for iterating ℘.
#[derive(Debug, Clone)]
struct Tensor2 {
    pairs: usize,
    terms: BTreeMap<(MultiIndex, MultiIndex), Scalar>,
}

impl Tensor2 {
    fn from_polys(f: &Poly, g: &Poly) -> Self {
        let pairs = f.kind().pairs();
        let mut terms = BTreeMap::new();
        for (a, ca) in f.terms() {
            for (b, cb) in g.terms() {
                // Over ℚ(i) a product of nonzero coefficients is nonzero.
                terms.insert((a.clone(), b.clone()), ca * cb);
            }
        }
        Tensor2 { pairs, terms }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(out: &mut BTreeMap<(MultiIndex, MultiIndex), Scalar>, key: (MultiIndex, MultiIndex), val: Scalar) {
        use std::collections::btree_map::Entry;
        match out.entry(key) {
            Entry::Vacant(e) => {
                e.insert(val);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &val;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// One application of ℘ = Σ_i (∂/∂p_i ⊗ ∂/∂q_i − ∂/∂q_i ⊗ ∂/∂p_i).
    fn wp(&self) -> Self {
        let mut out = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            for i in 0..self.pairs {
                let (pi, qi) = (i, self.pairs + i);
                let (ea, eb) = (a.get(pi), b.get(qi));
                if ea > 0 && eb > 0 {
                    let mult = Scalar::from_int(i64::from(ea) * i64::from(eb));
                    Self::add_term(&mut out, (a.with_step(pi, -1), b.with_step(qi, -1)), c * &mult);
                }
                let (ea, eb) = (a.get(qi), b.get(pi));
                if ea > 0 && eb > 0 {
                    let mult = Scalar::from_int(-i64::from(ea) * i64::from(eb));
                    Self::add_term(&mut out, (a.with_step(qi, -1), b.with_step(pi, -1)), c * &mult);
                }
            }
        }
        Tensor2 { pairs: self.pairs, terms: out }
    }

    /// The multiplication map `m`: `x^A ⊗ x^B ↦ x^{A+B}`.
    fn merge(&self) -> Poly {
        let mut out = Poly::zero(VarKind::Symplectic { pairs: self.pairs });
        for ((a, b), c) in &self.terms {
            out.add_term(a.add(b), c.clone());
        }
        out
    }
}

fn assert_symplectic_pair(f: &Poly, g: &Poly) {
    match (f.kind(), g.kind()) {
        (VarKind::Symplectic { pairs: a }, VarKind::Symplectic { pairs: b }) if a == b => {}
        (a, b) => panic!("expected symplectic polynomials over the same pairs, got {a:?} and {b:?}"),
    }
}

/// `1/(2^k k!)` as an exact scalar.
fn ck_prefactor(k: u32) -> Scalar {
    let denom = factorial(u64::from(k)) << k;
    Scalar::from_rational(num::BigRational::new(1.into(), denom))
}

/// The order-`k` bidifferential coefficient `C_k(F, G) = (1/2^k k!)(m ∘ ℘^k)(F ⊗ G)`.
///
/// For homogeneous `F ∈ S^f`, `G ∈ S^g` the result lies in `S^{f+g−2k}` and
/// vanishes for `k > min(f, g)`.
pub fn ck_coefficient(k: u32, f: &Poly, g: &Poly) -> Poly {
    assert_symplectic_pair(f, g);
    let mut tensor = Tensor2::from_polys(f, g);
    for _ in 0..k {
        if tensor.is_zero() {
            break;
        }
        tensor = tensor.wp();
    }
    tensor.merge().scale(&ck_prefactor(k))
}

/// The Moyal product `F ⋆_t G = Σ_k t^k C_k(F, G)` with deformation
/// parameter `t` carried as an exact scalar.
pub fn star_t(f: &Poly, g: &Poly, t: &Scalar) -> Poly {
    assert_symplectic_pair(f, g);
    let mut out = Poly::zero(f.kind());
    let mut tensor = Tensor2::from_polys(f, g);
    let mut t_pow = Scalar::one();
    let mut k = 0u32;
    loop {
        if tensor.is_zero() {
            break;
        }
        let mut ck = tensor.merge().scale(&ck_prefactor(k));
        ck = ck.scale(&t_pow);
        out = &out + &ck;
        tensor = tensor.wp();
        t_pow *= t;
        k += 1;
    }
    out
}

/// The Moyal product at the fixed deformation value `t = 1`.
pub fn star(f: &Poly, g: &Poly) -> Poly {
    star_t(f, g, &Scalar::one())
}

/// Explicit one-pair closed form of the product,
///
/// ```text
/// F ⋆_t G = Σ_k (t^k / 2^k k!) Σ_{r+s=k} (−1)^s C(k,s) (∂^k F/∂p^r ∂q^s)(∂^k G/∂p^s ∂q^r),
/// ```
///
/// kept as an independent implementation for cross-checking [`star_t`].
///
/// # Panics
///
/// Panics unless both inputs live over exactly one symplectic pair.
pub fn star_n1_closed(f: &Poly, g: &Poly, t: &Scalar) -> Poly {
    assert_symplectic_pair(f, g);
    assert_eq!(f.kind().pairs(), 1, "closed formula is specific to one symplectic pair");
    let deg_cap = match (f.total_degree(), g.total_degree()) {
        (Some(df), Some(dg)) => df.min(dg),
        _ => return Poly::zero(f.kind()),
    };
    let mut out = Poly::zero(f.kind());
    let mut t_pow = Scalar::one();
    for k in 0..=deg_cap {
        let pref = ck_prefactor(k);
        let mut level = Poly::zero(f.kind());
        for s in 0..=k {
            let r = k - s;
            let fa = f.partial_derivative(0, r).partial_derivative(1, s);
            let ga = g.partial_derivative(0, s).partial_derivative(1, r);
            if fa.is_zero() || ga.is_zero() {
                continue;
            }
            let mut c = Scalar::from_bigint(binomial(u64::from(k), u64::from(s)));
            if s % 2 == 1 {
                c = -&c;
            }
            level = &level + &(&fa * &ga).scale(&c);
        }
        out = &out + &level.scale(&pref).scale(&t_pow);
        t_pow *= t;
    }
    out
}

/// Bracket of the given flavour at deformation value `t`.
///
/// Non-homogeneous arguments are split by Z₂-parity, the flavour's sign is
/// applied per homogeneous pair, and the pieces are summed.
pub fn bracket_t(kind: BracketKind, f: &Poly, g: &Poly, t: &Scalar) -> Poly {
    assert_symplectic_pair(f, g);
    let mut out = Poly::zero(f.kind());
    for (fp, fpar) in [(f.even_part(), 0u8), (f.odd_part(), 1u8)] {
        if fp.is_zero() {
            continue;
        }
        for (gp, gpar) in [(g.even_part(), 0u8), (g.odd_part(), 1u8)] {
            if gp.is_zero() {
                continue;
            }
            let fwd = star_t(&fp, &gp, t);
            let rev = star_t(&gp, &fp, t);
            let piece = if kind.sign_exponent(fpar, gpar) % 2 == 0 { &fwd - &rev } else { &fwd + &rev };
            out = &out + &piece;
        }
    }
    out
}

/// Bracket of the given flavour at the fixed value `t = 1`.
pub fn bracket(kind: BracketKind, f: &Poly, g: &Poly) -> Poly {
    bracket_t(kind, f, g, &Scalar::one())
}

/// The supertrace `Str(F) = F(0)`: the constant term.
///
/// It vanishes on every super bracket and on every odd element.
pub fn supertrace(f: &Poly) -> Scalar {
    f.eval_zero()
}

/// The bilinear form `κ(F, G) = Str(F ⋆ G)`.
///
/// κ is supersymmetric — `κ(G, F) = (−1)^{fg} κ(F, G)` — and vanishes between
/// distinct homogeneous degrees: `κ(S^ℓ, S^m) = 0` for `ℓ ≠ m`.
pub fn kappa(f: &Poly, g: &Poly) -> Scalar {
    supertrace(&star(f, g))
}

/// The bilinear form `B(F, G) = (−1)^{fg+1} κ(F, G)` on homogeneous parts,
/// extended bilinearly: the invariant form of the twisted adjoint action.
///
/// On degrees 0 and 1 it restricts to `B(1, 1) = −1` and `B(φ, ψ) = ½{φ, ψ}`.
pub fn b_form(f: &Poly, g: &Poly) -> Scalar {
    assert_symplectic_pair(f, g);
    let mut out = Scalar::zero();
    for (fp, fpar) in [(f.even_part(), 0u8), (f.odd_part(), 1u8)] {
        if fp.is_zero() {
            continue;
        }
        for (gp, gpar) in [(g.even_part(), 0u8), (g.odd_part(), 1u8)] {
            if gp.is_zero() {
                continue;
            }
            let k = kappa(&fp, &gp);
            if (fpar * gpar + 1) % 2 == 0 {
                out += &k;
            } else {
                out -= &k;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::poisson_bracket;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn sp(pairs: usize) -> VarKind {
        VarKind::Symplectic { pairs }
    }

    fn parse1(s: &str) -> Poly {
        crate::parse::parse_poly(s, sp(1)).unwrap()
    }

    /// Random polynomial with small integer coefficients, for cross-checks.
    fn random_poly(rng: &mut StdRng, pairs: usize, max_deg: u32, terms: usize) -> Poly {
        let mut f = Poly::zero(sp(pairs));
        let monos = crate::multi_index::monomials_up_to_degree(2 * pairs, max_deg);
        for _ in 0..terms {
            let m = monos[rng.gen_range(0..monos.len())].clone();
            let c = Scalar::from_int(rng.gen_range(-4i64..=4));
            f.add_term(m, c);
        }
        f
    }

    /// Random parity-homogeneous polynomial of the requested parity.
    fn random_homogeneous(rng: &mut StdRng, pairs: usize, max_deg: u32) -> Poly {
        let f = random_poly(rng, pairs, max_deg, 5);
        let part = if rng.gen_bool(0.5) { f.even_part() } else { f.odd_part() };
        if part.is_zero() {
            Poly::p(pairs, 0)
        } else {
            part
        }
    }

    #[test]
    fn c1_is_half_poisson_bracket() {
        // Oracle: C_1 must reproduce ½{F, G} with the Poisson bracket
        // computed from its defining sum.
        let mut rng = StdRng::seed_from_u64(11);
        for pairs in [1usize, 2] {
            for _ in 0..20 {
                let f = random_poly(&mut rng, pairs, 4, 4);
                let g = random_poly(&mut rng, pairs, 4, 4);
                let half = Scalar::from_ratio(1, 2);
                assert_eq!(ck_coefficient(1, &f, &g), poisson_bracket(&f, &g).scale(&half));
            }
        }
        // Pinned instance: C_1(p1, q1) = ½{p1, q1} = ½.
        let p = Poly::p(1, 0);
        let q = Poly::q(1, 0);
        assert_eq!(ck_coefficient(1, &p, &q), parse1("1/2"));
    }

    #[test]
    fn ck_closed_formula_on_power_pairs() {
        // C_k(p^ℓ, q^m) = (k!/2^k)·C(ℓ,k)·C(m,k)·p^{ℓ−k} q^{m−k}: only the
        // positive half of ℘ survives when the left leg has no q's.
        for l in 0u32..=6 {
            for m in 0u32..=6 {
                for k in 0u32..=6 {
                    let f = Poly::p(1, 0).pow(l);
                    let g = Poly::q(1, 0).pow(m);
                    let got = ck_coefficient(k, &f, &g);
                    if k > l.min(m) {
                        assert!(got.is_zero());
                        continue;
                    }
                    let num = factorial(u64::from(k))
                        * binomial(u64::from(l), u64::from(k))
                        * binomial(u64::from(m), u64::from(k));
                    let coeff = Scalar::from_rational(num::BigRational::new(num, num::BigInt::from(1) << k));
                    let mono = MultiIndex::new(vec![l - k, m - k]);
                    let want = Poly::monomial(sp(1), mono, coeff);
                    assert_eq!(got, want);
                }
            }
        }
    }

    #[test]
    fn ck_two_on_q2_p2_is_one_half() {
        // Hand expansion: ℘(q²⊗p²) = −4 q⊗p, ℘²(q²⊗p²) = 4, so
        // C_2 = 4/(2²·2!) = 1/2.
        let q2 = Poly::q(1, 0).pow(2);
        let p2 = Poly::p(1, 0).pow(2);
        assert_eq!(ck_coefficient(2, &q2, &p2), parse1("1/2"));
    }

    #[test]
    fn ck_parity_in_argument_swap() {
        // (III): C_k(G, F) = (−1)^k C_k(F, G).
        let mut rng = StdRng::seed_from_u64(12);
        for _ in 0..10 {
            let f = random_poly(&mut rng, 2, 4, 4);
            let g = random_poly(&mut rng, 2, 4, 4);
            for k in 0u32..=4 {
                let fwd = ck_coefficient(k, &f, &g);
                let rev = ck_coefficient(k, &g, &f);
                let want = if k % 2 == 0 { fwd } else { -&fwd };
                assert_eq!(rev, want);
            }
        }
    }

    #[test]
    fn star_pinned_examples() {
        let p = Poly::p(1, 0);
        let q = Poly::q(1, 0);
        assert_eq!(star(&p, &q), parse1("p1*q1 + 1/2"));
        assert_eq!(star(&q, &p), parse1("p1*q1 - 1/2"));
        assert_eq!(star(&q.pow(2), &p.pow(2)), parse1("p1^2*q1^2 - 2*p1*q1 + 1/2"));
    }

    #[test]
    fn star_unit_is_identity() {
        let mut rng = StdRng::seed_from_u64(13);
        let one = Poly::one(sp(2));
        for _ in 0..10 {
            let f = random_poly(&mut rng, 2, 4, 5);
            let t = Scalar::from_ratio(rng.gen_range(-3i64..=3), 2);
            assert_eq!(star_t(&f, &one, &t), f);
            assert_eq!(star_t(&one, &f, &t), f);
        }
    }

    #[test]
    fn star_closed_n1_matches_tensor_implementation() {
        let mut rng = StdRng::seed_from_u64(14);
        for _ in 0..100 {
            let f = random_poly(&mut rng, 1, 5, 4);
            let g = random_poly(&mut rng, 1, 5, 4);
            let t = Scalar::from_ratio(rng.gen_range(-4i64..=4), rng.gen_range(1i64..=3));
            assert_eq!(star_n1_closed(&f, &g, &t), star_t(&f, &g, &t));
        }
    }

    #[test]
    fn star_degree_support_even_gaps_only() {
        // Prop-style degree count: for homogeneous F ∈ S^f, G ∈ S^g the
        // product has components exactly in f+g, f+g−2, … and none below 0.
        let mut rng = StdRng::seed_from_u64(15);
        for _ in 0..20 {
            let f_deg = rng.gen_range(0u32..=4);
            let g_deg = rng.gen_range(0u32..=4);
            let mut f = Poly::zero(sp(2));
            for m in crate::multi_index::monomials_of_degree(4, f_deg) {
                f.add_term(m, Scalar::from_int(rng.gen_range(-2i64..=2)));
            }
            let mut g = Poly::zero(sp(2));
            for m in crate::multi_index::monomials_of_degree(4, g_deg) {
                g.add_term(m, Scalar::from_int(rng.gen_range(-2i64..=2)));
            }
            let prod = star(&f, &g);
            for (d, _) in prod.graded_components() {
                let diff = f_deg + g_deg - d;
                assert!(d <= f_deg + g_deg && diff % 2 == 0, "degree {d} outside the allowed ladder");
            }
        }
    }

    #[test]
    fn lie_bracket_collects_odd_terms() {
        // (IV) as a polynomial identity in t, sampled at t = 1, 2, −1/3:
        // F ⋆_t G − G ⋆_t F = 2 Σ_p t^{2p+1} C_{2p+1}(F, G).
        let mut rng = StdRng::seed_from_u64(16);
        let samples = [Scalar::one(), Scalar::from_int(2), Scalar::from_ratio(-1, 3)];
        for _ in 0..10 {
            let f = random_poly(&mut rng, 1, 4, 4);
            let g = random_poly(&mut rng, 1, 4, 4);
            for t in &samples {
                let lhs = bracket_t(BracketKind::Lie, &f, &g, t);
                let mut rhs = Poly::zero(sp(1));
                let mut k = 1u32;
                while u64::from(k) <= 5 {
                    let ck = ck_coefficient(k, &f, &g);
                    rhs = &rhs + &ck.scale(&(t.pow(k) * &Scalar::from_int(2)));
                    k += 2;
                }
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn bracket_pinned_examples() {
        let p = Poly::p(1, 0);
        let q = Poly::q(1, 0);
        let one = Poly::one(sp(1));
        assert_eq!(bracket(BracketKind::Lie, &p, &q), parse1("1"));
        assert_eq!(bracket(BracketKind::Super, &p, &q), parse1("2*p1*q1"));
        assert_eq!(bracket(BracketKind::TwistedSuper, &p, &one), parse1("2*p1"));
    }

    #[test]
    fn lie_bracket_of_low_degree_is_poisson() {
        // For deg F ≤ 2 the deformation stops at first order:
        // [F, G]_ℒ at t = 1 equals {F, G}.
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..20 {
            let f = random_poly(&mut rng, 2, 2, 4);
            let g = random_poly(&mut rng, 2, 5, 4);
            assert_eq!(bracket(BracketKind::Lie, &f, &g), poisson_bracket(&f, &g));
        }
    }

    #[test]
    fn supertrace_pinned_and_on_brackets() {
        let p2 = Poly::p(1, 0).pow(2);
        let q2 = Poly::q(1, 0).pow(2);
        assert_eq!(supertrace(&star(&p2, &q2)), Scalar::from_ratio(1, 2));
        assert_eq!(supertrace(&Poly::one(sp(1))), Scalar::one());

        let mut rng = StdRng::seed_from_u64(18);
        for _ in 0..50 {
            let f = random_homogeneous(&mut rng, 2, 4);
            let g = random_homogeneous(&mut rng, 2, 4);
            assert!(supertrace(&bracket(BracketKind::Super, &f, &g)).is_zero());
        }
        // Odd elements have no constant term.
        for _ in 0..10 {
            let f = random_poly(&mut rng, 1, 5, 5).odd_part();
            assert!(supertrace(&f).is_zero());
        }
    }

    #[test]
    fn kappa_pinned_examples_and_supersymmetry() {
        let p = Poly::p(1, 0);
        let q = Poly::q(1, 0);
        assert_eq!(kappa(&p, &q), Scalar::from_ratio(1, 2));
        assert_eq!(kappa(&q, &p), Scalar::from_ratio(-1, 2));
        assert_eq!(kappa(&p, &q.pow(2)), Scalar::zero());

        let mut rng = StdRng::seed_from_u64(19);
        for _ in 0..30 {
            let f = random_homogeneous(&mut rng, 2, 4);
            let g = random_homogeneous(&mut rng, 2, 4);
            let sign = (f.parity().unwrap() * g.parity().unwrap()) % 2;
            let fwd = kappa(&f, &g);
            let rev = kappa(&g, &f);
            assert_eq!(rev, if sign == 0 { fwd } else { -&fwd });
        }
    }

    #[test]
    fn kappa_ad_invariance_as_printed() {
        // κ(ad(F)(G), H) + (−1)^{fg} κ(G, ad(F)(H)) = 0 on homogeneous
        // triples, with ad the super bracket.
        let mut rng = StdRng::seed_from_u64(20);
        for _ in 0..30 {
            let f = random_homogeneous(&mut rng, 1, 4);
            let g = random_homogeneous(&mut rng, 1, 4);
            let h = random_homogeneous(&mut rng, 1, 4);
            let fg = (f.parity().unwrap() * g.parity().unwrap()) % 2;
            let lhs = kappa(&bracket(BracketKind::Super, &f, &g), &h);
            let rhs = kappa(&g, &bracket(BracketKind::Super, &f, &h));
            let total = if fg == 0 { &lhs + &rhs } else { &lhs - &rhs };
            assert!(total.is_zero(), "invariance failed on a homogeneous triple");
        }
    }

    #[test]
    fn b_form_pinned_examples() {
        let one = Poly::one(sp(1));
        let p = Poly::p(1, 0);
        let q = Poly::q(1, 0);
        assert_eq!(b_form(&one, &one), Scalar::from_int(-1));
        assert_eq!(b_form(&p, &q), Scalar::from_ratio(1, 2));
        assert_eq!(b_form(&p.pow(2), &q.pow(2)), Scalar::from_ratio(-1, 2));
    }

    #[test]
    fn b_form_restricts_to_theta_on_degree_one() {
        // On odd generators B(φ, ψ) = ½{φ, ψ}.
        let mut rng = StdRng::seed_from_u64(21);
        for pairs in [1usize, 2] {
            for _ in 0..10 {
                let mut phi = Poly::zero(sp(pairs));
                let mut psi = Poly::zero(sp(pairs));
                for v in 0..2 * pairs {
                    phi.add_term(MultiIndex::unit(2 * pairs, v), Scalar::from_int(rng.gen_range(-3i64..=3)));
                    psi.add_term(MultiIndex::unit(2 * pairs, v), Scalar::from_int(rng.gen_range(-3i64..=3)));
                }
                let want = poisson_bracket(&phi, &psi).eval_zero() * &Scalar::from_ratio(1, 2);
                assert_eq!(b_form(&phi, &psi), want);
            }
        }
    }

    #[test]
    fn b_form_twisted_invariance() {
        // B(ad′(A)(F), G) + (−1)^{af} B(F, ad′(A)(G)) = 0.
        let mut rng = StdRng::seed_from_u64(22);
        for _ in 0..30 {
            let a = random_homogeneous(&mut rng, 1, 4);
            let f = random_homogeneous(&mut rng, 1, 4);
            let g = random_homogeneous(&mut rng, 1, 4);
            let af = (a.parity().unwrap() * f.parity().unwrap()) % 2;
            let lhs = b_form(&bracket(BracketKind::TwistedSuper, &a, &f), &g);
            let rhs = b_form(&f, &bracket(BracketKind::TwistedSuper, &a, &g));
            let total = if af == 0 { &lhs + &rhs } else { &lhs - &rhs };
            assert!(total.is_zero(), "twisted invariance failed on a homogeneous triple");
        }
    }

    #[test]
    fn star_associativity_spot_check() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..15 {
            let f = random_poly(&mut rng, 2, 3, 3);
            let g = random_poly(&mut rng, 2, 3, 3);
            let h = random_poly(&mut rng, 2, 3, 3);
            assert_eq!(star(&star(&f, &g), &h), star(&f, &star(&g, &h)));
        }
    }
}
