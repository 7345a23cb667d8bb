//! Laws of derivations, Kähler modules and square-zero extensions on
//! randomly generated data.

use kahler_core::algebra::{structure_map_nu, Algebra, AlgebraElement, AlgebraMap, AlgebraPresentation};
use kahler_core::derivations::{precompose_algebra_map, Derivation};
use kahler_core::kahler::{kahler_of_algebra, omega_on_morphism};
use kahler_core::module::{ModuleMap, ModulePresentation, RestrictedModule};
use kahler_core::polyring::{parse_poly, Field, MonomialOrder, PolyContext};
use kahler_core::sample::{random_poly, rng, SampleConfig, SampleRng};
use kahler_core::wext::{
    hom_der_backward, hom_der_forward, random_w_element, w_functor_arrow, w_on_module_map, ModTArrow, ModTObject,
    WAlgebra, WMorphism,
};
use proptest::prelude::*;

fn alg(name: &str, vars: &[&str], rels: &[&str]) -> Algebra {
    let c = PolyContext::new(vars.iter().copied(), Field::Rationals, MonomialOrder::DegRevLex).unwrap();
    let rels = rels.iter().map(|r| parse_poly(&c, r).unwrap()).collect();
    AlgebraPresentation::new(name, &c, rels).unwrap()
}

fn fixed() -> Vec<Algebra> {
    vec![
        alg("free", &["x", "y"], &[]),
        alg("dual", &["x"], &["x^2"]),
        alg("circle", &["x", "y"], &["x^2 + y^2 - 1"]),
        alg("cusp", &["x", "y"], &["y^2 - x^3"]),
        alg("hyperbola", &["x", "y"], &["x*y - 1"]),
    ]
}

fn random_el(g: &mut SampleRng, a: &Algebra, deg: u32) -> AlgebraElement {
    structure_map_nu(a, &random_poly(g, a.ctx(), deg, 3, 9)).unwrap()
}

/// `c • d_A` for random `c`: a derivation into `Ω_A`.
fn scaled_universal(g: &mut SampleRng, a: &Algebra) -> Derivation {
    let om = kahler_of_algebra(a);
    let c = random_el(g, a, 2);
    let images = om.universal().images().iter().map(|v| v.act(&c).unwrap()).collect();
    Derivation::new(a, om.universal().target(), images).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn pi1_commutes_with_beta(seed in any::<u64>(), which in 0usize..5) {
        let a = &fixed()[which];
        let om = kahler_of_algebra(a);
        let w = WAlgebra::plain(om.module());
        let mut g = rng(seed);
        let cfg = SampleConfig::default();
        let args: Vec<_> = (0..2).map(|_| random_w_element(&mut g, &w, &cfg)).collect();
        let pc = PolyContext::new(["s", "t"], Field::Rationals, MonomialOrder::DegRevLex).unwrap();
        let p = random_poly(&mut g, &pc, 4, 5, 9);
        let r = w.beta_eval(&p, &args).unwrap();
        let firsts: Vec<_> = args.iter().map(|u| u.a.rep().clone()).collect();
        let direct = structure_map_nu(a, &p.substitute_in(a.ctx(), &firsts).unwrap()).unwrap();
        prop_assert_eq!(r.a, direct);
    }

    #[test]
    fn hom_der_round_trips(seed in any::<u64>(), which in 0usize..5) {
        let a = &fixed()[which];
        let mut g = rng(seed);
        let d = scaled_universal(&mut g, a);
        let phi = hom_der_backward(&AlgebraMap::identity(a), &d).unwrap();
        let (g1, d1) = hom_der_forward(&phi).unwrap();
        prop_assert!(g1.is_identity());
        prop_assert_eq!(&d1, &d);
        prop_assert_eq!(hom_der_backward(&g1, &d1).unwrap(), phi);
    }

    #[test]
    fn universal_property(seed in any::<u64>(), which in 0usize..5) {
        let a = &fixed()[which];
        let om = kahler_of_algebra(a);
        let mut g = rng(seed);
        let d = scaled_universal(&mut g, a);
        let h = om.factor_derivation(&d).unwrap();
        for _ in 0..5 {
            let x = random_el(&mut g, a, 4);
            prop_assert_eq!(h.apply(&om.universal().apply(&x).unwrap()).unwrap(), d.apply(&x).unwrap());
        }
        prop_assert_eq!(h.images(), d.images());
    }

    #[test]
    fn omega_is_functorial(seed in any::<u64>()) {
        let mut g = rng(seed);
        let p = alg("P", &["u", "v"], &[]);
        let c = alg("C", &["x", "y"], &["x^2 + y^2 - 1"]);
        let q = alg("Q", &["x", "y"], &["x^2 + y^2 - 1", "x*y"]);
        let f1 = AlgebraMap::new(&p, &c, vec![random_el(&mut g, &c, 2), random_el(&mut g, &c, 2)]).unwrap();
        let f2 = AlgebraMap::new(&c, &q, AlgebraElement::vars(&q)).unwrap();
        let (op, oc, oq) = (kahler_of_algebra(&p), kahler_of_algebra(&c), kahler_of_algebra(&q));
        let whole = omega_on_morphism(&f1.then(&f2).unwrap(), &op, &oq).unwrap();
        let parts = omega_on_morphism(&f1, &op, &oc).unwrap().then(&omega_on_morphism(&f2, &oc, &oq).unwrap()).unwrap();
        prop_assert_eq!(whole, parts);
        // The commuting square d_A;Ω_f = f;d_B.
        let of = omega_on_morphism(&f1, &op, &oc).unwrap();
        let x = random_el(&mut g, &p, 3);
        prop_assert_eq!(of.apply(&op.universal().apply(&x).unwrap()).unwrap(), oc.universal().apply(&f1.apply(&x).unwrap()).unwrap());
    }

    #[test]
    fn w_functor_laws(seed in any::<u64>()) {
        let mut g = rng(seed);
        let a = alg("A", &["x"], &[]);
        let b = alg("B", &["y"], &["y^3"]);
        let c = alg("C", &["z"], &["z^2"]);
        let ga = AlgebraMap::new(&a, &b, vec![random_el(&mut g, &b, 2)]).unwrap();
        let gb = AlgebraMap::new(&b, &c, vec![structure_map_nu(&c, &parse_poly(c.ctx(), "z").unwrap()).unwrap()]).unwrap();
        let (ma, mb, mc) = (kahler_of_algebra(&a), kahler_of_algebra(&b), kahler_of_algebra(&c));
        let h1 = omega_on_morphism(&ga, &ma, &mb).unwrap();
        let h2 = omega_on_morphism(&gb, &mb, &mc).unwrap();
        let r1 = ModTArrow::new(ga.clone(), h1).unwrap();
        let r2 = ModTArrow::new(gb, h2).unwrap();
        let composite = w_functor_arrow(&r1.then(&r2).unwrap()).unwrap();
        let stepwise = w_functor_arrow(&r1).unwrap().then(&w_functor_arrow(&r2).unwrap()).unwrap();
        let w = WAlgebra::plain(ma.module());
        let cfg = SampleConfig::default();
        for _ in 0..5 {
            let u = random_w_element(&mut g, &w, &cfg);
            let img = composite.apply(&u).unwrap();
            prop_assert_eq!(&img, &stepwise.apply(&u).unwrap());
            // π₁ square.
            prop_assert_eq!(img.a, ga.then(r2.g()).unwrap().apply(&u.a).unwrap());
        }
        let id = w_functor_arrow(&ModTArrow::identity(&ModTObject::new(ma.module()))).unwrap();
        prop_assert_eq!(id, WMorphism::identity(&w).then(&WMorphism::identity(&w)).unwrap());
    }

    #[test]
    fn module_maps_commute_with_beta(seed in any::<u64>(), which in 0usize..5) {
        let a = &fixed()[which];
        let om = kahler_of_algebra(a);
        let mut g = rng(seed);
        // h = c • identity on Ω_A.
        let c = random_el(&mut g, a, 1);
        let images = om.module().generators().iter().map(|v| v.act(&c).unwrap()).collect();
        let h = ModuleMap::plain(om.module(), om.module(), images).unwrap();
        let f = w_on_module_map(&h).unwrap();
        let w = f.source().clone();
        let cfg = SampleConfig::default();
        let args: Vec<_> = (0..2).map(|_| random_w_element(&mut g, &w, &cfg)).collect();
        let pc = PolyContext::new(["s", "t"], Field::Rationals, MonomialOrder::DegRevLex).unwrap();
        let p = random_poly(&mut g, &pc, 4, 5, 9);
        let lhs = f.apply(&w.beta_eval(&p, &args).unwrap()).unwrap();
        let mapped: Vec<_> = args.iter().map(|u| f.apply(u).unwrap()).collect();
        prop_assert_eq!(lhs, f.target().beta_eval(&p, &mapped).unwrap());
    }

    #[test]
    fn precomposition_with_restriction(seed in any::<u64>()) {
        let mut g = rng(seed);
        let a = alg("A", &["s", "t"], &[]);
        let b = &fixed()[2];
        let f = AlgebraMap::new(&a, b, vec![random_el(&mut g, b, 2), random_el(&mut g, b, 2)]).unwrap();
        let d = scaled_universal(&mut g, b);
        let pulled = precompose_algebra_map(&f, &d).unwrap();
        let x = random_el(&mut g, &a, 3);
        prop_assert_eq!(pulled.apply(&x).unwrap(), d.apply(&f.apply(&x).unwrap()).unwrap());
        let free = ModulePresentation::free("F", b, 1);
        let r = RestrictedModule::plain(&free).restrict(&f).unwrap();
        prop_assert_eq!(r.base(), &a);
    }
}
