//! Exact scalars and sparse multivariate polynomials.

mod monomial;
mod parse;
mod poly;
mod scalar;

pub use monomial::{Monomial, MonomialOrder};
pub use parse::{parse_poly, scan_identifiers};
pub(crate) use parse::{lex, PolyParser, Tok};
pub use poly::{Ctx, FieldOps, Poly, PolyContext, PolyOps, RingOps};
pub(crate) use poly::same_ctx;
pub use scalar::{Field, ModP, Scalar};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;
    use proptest::prelude::*;

    fn ctx(vars: &[&str]) -> Ctx {
        PolyContext::new(vars.iter().copied(), Field::Rationals, MonomialOrder::DegRevLex).unwrap()
    }

    fn p(c: &Ctx, s: &str) -> Poly {
        parse_poly(c, s).unwrap()
    }

    #[test]
    fn add_examples() {
        let c = ctx(&["x", "y"]);
        assert_eq!(p(&c, "x + y").add(&p(&c, "x - y")).unwrap(), p(&c, "2*x"));
        assert_eq!(p(&c, "x^2*y + 1").add(&Poly::zero(&c)).unwrap(), p(&c, "x^2*y + 1"));
        assert_eq!(p(&c, "x^2").add(&p(&c, "x^2")).unwrap().to_string(), "2*x^2");
    }

    #[test]
    fn mul_examples() {
        let c = ctx(&["x", "y"]);
        assert_eq!(p(&c, "x").mul(&p(&c, "y")).unwrap().to_string(), "x*y");
        assert_eq!(p(&c, "x + 1").mul(&p(&c, "x - 1")).unwrap().to_string(), "x^2 - 1");
        let q = p(&c, "3x^2 - y/2");
        assert_eq!(q.mul(&Poly::one(&c)).unwrap(), q);
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = ctx(&["x"]);
        let b = ctx(&["y"]);
        assert!(matches!(p(&a, "x").add(&p(&b, "y")), Err(Error::Context(_))));
        assert!(matches!(p(&a, "x").mul(&p(&b, "y")), Err(Error::Context(_))));
        let f5 = PolyContext::new(["x"], Field::Prime(5), MonomialOrder::DegRevLex).unwrap();
        assert!(matches!(p(&a, "x").add(&p(&f5, "x")), Err(Error::Context(_))));
    }

    #[test]
    fn partial_derivative_examples() {
        let c = ctx(&["x", "y"]);
        assert_eq!(p(&c, "x^2*y + 3*y").partial_derivative(0).unwrap(), p(&c, "2*x*y"));
        assert!(p(&c, "7").partial_derivative(0).unwrap().is_zero());
        assert_eq!(p(&c, "x").partial_derivative(0).unwrap(), Poly::one(&c));
        assert_eq!(
            p(&c, "x").partial_derivative(2),
            Err(Error::Index { index: 2, len: 2 })
        );
    }

    #[test]
    fn substitute_examples() {
        let cx = ctx(&["x"]);
        let cy = ctx(&["y"]);
        let cu = ctx(&["u"]);
        let cxy = ctx(&["x", "y"]);
        assert_eq!(
            p(&cx, "x^2").substitute(&[p(&cy, "y + 1")]).unwrap().to_string(),
            "y^2 + 2*y + 1"
        );
        let q = p(&cxy, "3x^2 y - y + 1/2");
        assert_eq!(q.substitute(&Poly::vars(&cxy)).unwrap(), q);
        assert_eq!(p(&cxy, "x*y").substitute(&[p(&cu, "u"), p(&cu, "u")]).unwrap().to_string(), "u^2");
        assert_eq!(
            p(&cxy, "x").substitute(&[p(&cu, "u")]),
            Err(Error::Arity { expected: 2, got: 1 })
        );
    }

    #[test]
    fn eval_generic_examples() {
        let c = ctx(&["x", "y"]);
        let v = p(&c, "x + y").eval_generic(&FieldOps(Field::Rationals), &[
            Field::Rationals.from_i64(3),
            Field::Rationals.from_i64(4),
        ]);
        assert_eq!(v.unwrap(), Field::Rationals.from_i64(7));
        let empty = ctx(&[]);
        let one = Poly::one(&empty).eval_generic(&FieldOps(Field::Rationals), &[]).unwrap();
        assert!(one.is_one());
        assert!(matches!(
            p(&c, "x").eval_generic(&FieldOps(Field::Rationals), &[]),
            Err(Error::Arity { .. })
        ));
    }

    #[test]
    fn terms_follow_the_monomial_order() {
        let c = PolyContext::new(["x", "y", "z"], Field::Rationals, MonomialOrder::Lex).unwrap();
        assert_eq!(p(&c, "z^3 + y^2 + x").to_string(), "x + y^2 + z^3");
        let d = ctx(&["x", "y", "z"]);
        assert_eq!(p(&d, "z^3 + y^2 + x + x*z").to_string(), "z^3 + y^2 + x*z + x");
    }

    pub(crate) fn arb_poly(c: Ctx, max_terms: usize, max_exp: u32) -> impl Strategy<Value = Poly> {
        let n = c.nvars();
        proptest::collection::vec(
            (proptest::collection::vec(0..=max_exp, n), -9i64..=9),
            0..=max_terms,
        )
        .prop_map(move |terms| {
            Poly::from_terms(
                &c,
                terms
                    .into_iter()
                    .map(|(e, k)| (Monomial::from_exponents(e), c.field().from_i64(k))),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_laws(
            a in arb_poly(ctx(&["x", "y", "z"]), 5, 3),
            b in arb_poly(ctx(&["x", "y", "z"]), 5, 3),
            d in arb_poly(ctx(&["x", "y", "z"]), 5, 3),
        ) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &d, &a * &(&b * &d));
            prop_assert_eq!(&a * &(&b + &d), &(&a * &b) + &(&a * &d));
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            prop_assert!(a.terms().iter().all(|(_, c)| !c.is_zero()));
        }

        #[test]
        fn leibniz_rule(
            a in arb_poly(ctx(&["x", "y", "z"]), 5, 3),
            b in arb_poly(ctx(&["x", "y", "z"]), 5, 3),
            i in 0usize..3,
        ) {
            let lhs = (&a * &b).partial_derivative(i).unwrap();
            let rhs = &(&a * &b.partial_derivative(i).unwrap()) + &(&b * &a.partial_derivative(i).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn substitution_is_a_ring_homomorphism(
            a in arb_poly(ctx(&["x", "y"]), 4, 2),
            b in arb_poly(ctx(&["x", "y"]), 4, 2),
            u in arb_poly(ctx(&["u", "v"]), 3, 2),
            v in arb_poly(ctx(&["u", "v"]), 3, 2),
        ) {
            let imgs = [u, v];
            let lhs = (&a * &b).substitute(&imgs).unwrap();
            let rhs = &a.substitute(&imgs).unwrap() * &b.substitute(&imgs).unwrap();
            prop_assert_eq!(lhs, rhs);
            let lhs = (&a + &b).substitute(&imgs).unwrap();
            let rhs = &a.substitute(&imgs).unwrap() + &b.substitute(&imgs).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn printing_round_trips(a in arb_poly(ctx(&["x", "y", "z"]), 6, 4)) {
            prop_assert_eq!(parse_poly(a.ctx(), &a.to_string()).unwrap(), a);
        }
    }
}
