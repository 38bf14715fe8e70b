//! Property-based tests: algebraic laws and round-trip identities on
//! generated inputs. Everything here is exact, so the properties are
//! equalities, not tolerances.

use proptest::prelude::*;

use weylstar::json::{poly_from_json, poly_to_json};
use weylstar::moyal::{self, BracketKind};
use weylstar::parse::{parse_poly, parse_scalar};
use weylstar::weyl;
use weylstar::{MultiIndex, Poly, Scalar, VarKind};

// -- strategies ---------------------------------------------------------------

fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=12, -20i64..=20, 1i64..=12).prop_map(|(a, b, c, d)| {
        &Scalar::from_ratio(a, b) + &(&Scalar::from_ratio(c, d) * &Scalar::i())
    })
}

/// A sparse polynomial over the given variable set with bounded exponents.
fn poly_strategy(kind: VarKind, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    let term = (
        prop::collection::vec(0..=max_exp, kind.nvars()),
        scalar_strategy(),
    );
    prop::collection::vec(term, 0..=max_terms).prop_map(move |terms| {
        let mut f = Poly::zero(kind);
        for (exps, c) in terms {
            f.add_term(MultiIndex::new(exps), c);
        }
        f
    })
}

fn sym1() -> impl Strategy<Value = Poly> {
    poly_strategy(VarKind::Symplectic { pairs: 1 }, 3, 4)
}

fn sym2() -> impl Strategy<Value = Poly> {
    poly_strategy(VarKind::Symplectic { pairs: 2 }, 2, 4)
}

// -- scalar field laws --------------------------------------------------------

proptest! {
    #[test]
    fn scalar_arithmetic_is_a_field(a in scalar_strategy(), b in scalar_strategy(), c in scalar_strategy()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv(), Scalar::one());
        }
    }

    #[test]
    fn scalar_print_parse_round_trip(a in scalar_strategy()) {
        prop_assert_eq!(parse_scalar(&a.to_string()).unwrap(), a);
    }
}

// -- polynomial round trips ----------------------------------------------------

proptest! {
    #[test]
    fn poly_print_parse_round_trip(f in sym2()) {
        prop_assert_eq!(parse_poly(&f.to_string(), f.kind()).unwrap(), f);
    }

    #[test]
    fn poly_print_parse_round_trip_plain(f in poly_strategy(VarKind::Plain { vars: 3 }, 3, 5)) {
        prop_assert_eq!(parse_poly(&f.to_string(), f.kind()).unwrap(), f);
    }

    #[test]
    fn poly_json_round_trip(f in sym2()) {
        prop_assert_eq!(poly_from_json(&poly_to_json(&f)).unwrap(), f);
    }

    #[test]
    fn parity_parts_partition(f in sym2()) {
        prop_assert_eq!(&f.even_part() + &f.odd_part(), f);
    }
}

// -- star-product laws ----------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn star_is_associative(f in sym1(), g in sym1(), h in sym1()) {
        prop_assert_eq!(
            moyal::star(&moyal::star(&f, &g), &h),
            moyal::star(&f, &moyal::star(&g, &h))
        );
    }

    #[test]
    fn star_matches_the_normal_ordering_oracle(f in sym1(), g in sym1()) {
        prop_assert_eq!(moyal::star(&f, &g), weyl::star_via_symmetrization(&f, &g));
    }

    #[test]
    fn supertrace_kills_super_brackets(f in sym1(), g in sym1()) {
        // Both sides split into parity-homogeneous parts internally, so the
        // vanishing extends bilinearly to arbitrary inputs.
        let br = moyal::bracket(BracketKind::Super, &f, &g);
        prop_assert_eq!(moyal::supertrace(&br), Scalar::zero());
    }

    #[test]
    fn kappa_is_supersymmetric(f in sym1(), g in sym1()) {
        for (fp, pf) in [(f.even_part(), 0u32), (f.odd_part(), 1u32)] {
            for (gp, pg) in [(g.even_part(), 0u32), (g.odd_part(), 1u32)] {
                let lhs = moyal::kappa(&gp, &fp);
                let rhs = moyal::kappa(&fp, &gp);
                let expected = if pf * pg == 1 {
                    &Scalar::zero() - &rhs
                } else {
                    rhs
                };
                prop_assert_eq!(lhs, expected);
            }
        }
    }

    #[test]
    fn symmetrization_round_trips(f in sym1()) {
        prop_assert_eq!(weyl::unsymmetrize(&weyl::symmetrize(&f)), f);
    }

    #[test]
    fn star_unit_is_neutral(f in sym2()) {
        let one = Poly::one(f.kind());
        prop_assert_eq!(moyal::star(&f, &one), f.clone());
        prop_assert_eq!(moyal::star(&one, &f), f);
    }
}
