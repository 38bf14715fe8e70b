//! Generalized Laguerre polynomials and the closed monomial-product formula
//! they give for the ⋆-product of one-pair monomials:
//!
//! ```text
//! q^i ⋆ p^j = (−1)^j (j!/2^j) L_j^{(i−j)}(2pq) · q^{i−j}    (i ≥ j)
//! q^i ⋆ p^j = (−1)^i (i!/2^i) L_i^{(j−i)}(2pq) · p^{j−i}    (i ≤ j)
//! ```
//!
//! `L_β^{(α)}` is produced by the standard three-term recurrence; the test
//! module cross-checks it against a truncation of the generating function
//! `Σ_β L_β^{(α)}(x) t^β = (1−t)^{−α−1} exp(−xt/(1−t))`.

use crate::comb::factorial;
use crate::poly::{Poly, VarKind};
use crate::scalar::Scalar;

/// The generalized Laguerre polynomial `L_β^{(α)}` evaluated at the
/// polynomial argument `x`, computed exactly by the three-term recurrence
///
/// ```text
/// L_0 = 1,   L_1 = 1 + α − x,
/// (β+1) L_{β+1} = (2β + 1 + α − x) L_β − (β + α) L_{β−1}.
/// ```
pub fn laguerre_poly(beta: u32, alpha: i64, x: &Poly) -> Poly {
    let kind = x.kind();
    let one = Poly::one(kind);
    if beta == 0 {
        return one;
    }
    let mut prev = one.clone();
    let mut cur = &one.scale(&Scalar::from_int(1 + alpha)) - x;
    for b in 1..beta {
        let b_i = i64::from(b);
        let linear = &one.scale(&Scalar::from_int(2 * b_i + 1 + alpha)) - x;
        let next = &(&linear * &cur) - &prev.scale(&Scalar::from_int(b_i + alpha));
        let next = next.scale(&Scalar::from_ratio(1, b_i + 1));
        prev = cur;
        cur = next;
    }
    cur
}

/// Closed form of `q1^i ⋆ p1^j` over one symplectic pair, via the Laguerre
/// expression above. Agrees with `moyal::star(q1^i, p1^j)` exactly.
pub fn star_monomial_closed(i: u32, j: u32) -> Poly {
    let kind = VarKind::Symplectic { pairs: 1 };
    let two_pq = Poly::monomial(kind, crate::multi_index::MultiIndex::new(vec![1, 1]), Scalar::from_int(2));
    let (beta, alpha, leftover) = if i >= j {
        (j, i64::from(i) - i64::from(j), Poly::q(1, 0).pow(i - j))
    } else {
        (i, i64::from(j) - i64::from(i), Poly::p(1, 0).pow(j - i))
    };
    let mut coeff = Scalar::from_rational(num::BigRational::new(
        factorial(u64::from(beta)),
        num::BigInt::from(1) << beta,
    ));
    if beta % 2 == 1 {
        coeff = -&coeff;
    }
    let lag = laguerre_poly(beta, alpha, &two_pq);
    (&lag * &leftover).scale(&coeff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moyal::star;
    use crate::parse::parse_poly;

    fn x_poly() -> Poly {
        Poly::x(1, 0)
    }

    fn parse_x(s: &str) -> Poly {
        parse_poly(s, VarKind::Plain { vars: 1 }).unwrap()
    }

    fn parse1(s: &str) -> Poly {
        parse_poly(s, VarKind::Symplectic { pairs: 1 }).unwrap()
    }

    #[test]
    fn low_order_values() {
        let x = x_poly();
        assert_eq!(laguerre_poly(0, 5, &x), parse_x("1"));
        assert_eq!(laguerre_poly(1, 0, &x), parse_x("1 - x1"));
        assert_eq!(laguerre_poly(2, 0, &x), parse_x("1/2*x1^2 - 2*x1 + 1"));
    }

    /// Truncated formal power series in `t` with polynomial coefficients,
    /// just enough machinery to expand the Laguerre generating function.
    struct TSeries {
        coeffs: Vec<Poly>,
    }

    impl TSeries {
        fn mul(&self, other: &TSeries) -> TSeries {
            let n = self.coeffs.len();
            let kind = self.coeffs[0].kind();
            let mut out = vec![Poly::zero(kind); n];
            for (i, a) in self.coeffs.iter().enumerate() {
                for (j, b) in other.coeffs.iter().enumerate() {
                    if i + j < n {
                        out[i + j] = &out[i + j] + &(a * b);
                    }
                }
            }
            TSeries { coeffs: out }
        }
    }

    /// `(1 − t)^{−c}` for any integer `c`, via the coefficient recurrence
    /// `a_{m+1} = a_m (c + m)/(m + 1)` of the defining differential equation.
    fn one_minus_t_pow_neg(c: i64, order: usize, kind: VarKind) -> TSeries {
        let mut coeffs = vec![Poly::zero(kind); order + 1];
        let mut a = Scalar::one();
        coeffs[0] = Poly::one(kind);
        for m in 0..order {
            let m_i = m as i64;
            a = a * &Scalar::from_ratio(c + m_i, m_i + 1);
            coeffs[m + 1] = Poly::constant(kind, a.clone());
        }
        TSeries { coeffs }
    }

    /// `exp(−x·t/(1−t))` truncated: exponentiate the nilpotent-mod-t^{N+1}
    /// series u = −x(t + t² + …) term by term.
    fn exp_series(x: &Poly, order: usize) -> TSeries {
        let kind = x.kind();
        let mut u = vec![Poly::zero(kind); order + 1];
        for m in 1..=order {
            u[m] = -x;
        }
        let u = TSeries { coeffs: u };
        let mut total = one_minus_t_pow_neg(0, order, kind); // the constant series 1
        let mut power = TSeries { coeffs: { let mut v = vec![Poly::zero(kind); order + 1]; v[0] = Poly::one(kind); v } };
        let mut fact = Scalar::one();
        for k in 1..=order {
            power = power.mul(&u);
            fact = fact * &Scalar::from_ratio(1, k as i64);
            for (m, c) in power.coeffs.iter().enumerate() {
                total.coeffs[m] = &total.coeffs[m] + &c.scale(&fact);
            }
        }
        total
    }

    #[test]
    fn generating_function_oracle() {
        // Independent oracle: the t^β coefficient of
        // (1−t)^{−α−1} exp(−xt/(1−t)) must equal L_β^{(α)}(x).
        let x = x_poly();
        let order = 6usize;
        for alpha in [-2i64, -1, 0, 1, 3] {
            let gen = one_minus_t_pow_neg(alpha + 1, order, x.kind()).mul(&exp_series(&x, order));
            for beta in 0..=order as u32 {
                assert_eq!(
                    gen.coeffs[beta as usize],
                    laguerre_poly(beta, alpha, &x),
                    "generating function mismatch at β={beta}, α={alpha}"
                );
            }
        }
    }

    #[test]
    fn monomial_star_pinned_cases() {
        assert_eq!(star_monomial_closed(1, 1), parse1("p1*q1 - 1/2"));
        assert_eq!(star_monomial_closed(2, 2), parse1("p1^2*q1^2 - 2*p1*q1 + 1/2"));
    }

    #[test]
    fn diagonal_case_reduces_to_plain_laguerre() {
        // q^ℓ ⋆ p^ℓ = (−1)^ℓ (ℓ!/2^ℓ) L_ℓ(2pq).
        let two_pq = parse1("2*p1*q1");
        for l in 0u32..=5 {
            let mut coeff = Scalar::from_rational(num::BigRational::new(
                crate::comb::factorial(u64::from(l)),
                num::BigInt::from(1) << l,
            ));
            if l % 2 == 1 {
                coeff = -&coeff;
            }
            let want = laguerre_poly(l, 0, &two_pq).scale(&coeff);
            assert_eq!(star_monomial_closed(l, l), want);
        }
    }

    #[test]
    fn closed_form_matches_star_product() {
        for i in 0u32..=6 {
            for j in 0u32..=6 {
                let qi = Poly::q(1, 0).pow(i);
                let pj = Poly::p(1, 0).pow(j);
                assert_eq!(star_monomial_closed(i, j), star(&qi, &pj), "mismatch at (i,j)=({i},{j})");
            }
        }
    }
}
