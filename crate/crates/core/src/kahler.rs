//! Kähler differentials of a finitely presented algebra, by the Jacobian
//! presentation: `Ω_A` is free on `dx₁..dxₙ` modulo the rows
//! `(∂fⱼ/∂x₁, …, ∂fⱼ/∂xₙ)`, and `d_A(xᵢ) = dxᵢ`.

use std::fmt;

use crate::algebra::{same_algebra, structure_map_nu, Algebra, AlgebraMap};
use crate::derivations::{precompose_algebra_map, Derivation};
use crate::error::{Error, Result};
use crate::module::{Module, ModuleMap, ModulePresentation, RestrictedModule};
use crate::polyring::Poly;
use crate::report::Report;
use crate::sample::{rng, SampleConfig};
use crate::symmetric::{mu_flatten, random_outer, OuterPoly};

#[derive(Clone, Debug, PartialEq)]
pub struct KahlerModule {
    algebra: Algebra,
    module: Module,
    universal: Derivation,
}

pub fn kahler_of_algebra(a: &Algebra) -> KahlerModule {
    let name = format!("Omega_{}", a.name());
    let module = if a.is_zero_algebra() {
        ModulePresentation::free(name, a, 0)
    } else {
        let rows = a.relations().generators().iter().map(Poly::gradient).collect();
        ModulePresentation::new(name, a, a.nvars(), rows).expect("Jacobian rows have the right shape")
    };
    let target = RestrictedModule::plain(&module);
    let universal = if a.is_zero_algebra() {
        Derivation::zero(a, &target)
    } else {
        Derivation::new(a, &target, module.generators()).expect("the Jacobian rows are the relation check")
    };
    KahlerModule { algebra: a.clone(), module, universal }
}

impl KahlerModule {
    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn module(&self) -> &Module {
        &self.module
    }

    /// `d_A`.
    pub fn universal(&self) -> &Derivation {
        &self.universal
    }

    /// The unique `h : Ω_A → M` with `d_A;h = ∂`, given by `h(dxᵢ) = ∂xᵢ`.
    pub fn factor_derivation(&self, d: &Derivation) -> Result<ModuleMap> {
        if !same_algebra(d.source(), &self.algebra) {
            return Err(Error::context(format!(
                "derivation on `{}` factored through Omega of `{}`",
                d.source().name(),
                self.algebra.name()
            )));
        }
        if self.module.rank() == 0 {
            return Ok(ModuleMap::zero(&self.module, d.target()));
        }
        ModuleMap::new(&self.module, d.target(), d.images().to_vec())
    }

    /// Whether `d_A;k` agrees with `∂` on every generator, hence everywhere.
    pub fn factors(&self, d: &Derivation, k: &ModuleMap) -> Result<bool> {
        for (u, want) in self.universal.images().iter().zip(d.images()) {
            if &k.apply(u)? != want {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for KahlerModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.module)?;
        let vars = self.algebra.ctx().vars();
        for (v, m) in vars.iter().zip(self.universal.images()) {
            writeln!(f, "d({v}) = {m}")?;
        }
        Ok(())
    }
}

/// `Ω_f : Ω_A → (Ω_B)_A`, the factorization of `f;d_B` through `d_A`.
pub fn omega_on_morphism(f: &AlgebraMap, omega_a: &KahlerModule, omega_b: &KahlerModule) -> Result<ModuleMap> {
    let composite = precompose_algebra_map(f, &omega_b.universal)?;
    omega_a.factor_derivation(&composite)
}

/// Finite shadow of the coequalizer: for sampled `w ∈ S(SA)`, the free
/// differentials of `μ(w)` and of `w` with its tags reduced to normal form
/// differ in general, but have the same class in `Ω_A`.
pub fn check_coequalizer_shadow(omega: &KahlerModule, cfg: &SampleConfig) -> Result<Report> {
    let mut g = rng(cfg.seed);
    let mut r = Report::new("coequalizer_shadow").with_seed(cfg.seed);
    let a = &omega.algebra;
    let small = SampleConfig { max_degree: cfg.max_degree.min(3), ..*cfg };
    for _ in 0..cfg.samples {
        let w: OuterPoly = random_outer(&mut g, a.ctx(), &small);
        let via_mu = mu_flatten(&w);
        let reduced = w.tags().iter().map(|t| structure_map_nu(a, t).map(|e| e.rep().clone())).collect::<Result<Vec<_>>>()?;
        let via_nu = w.body().substitute_in(a.ctx(), &reduced)?;
        let lhs = omega.universal.apply_poly(&via_mu)?;
        let rhs = omega.universal.apply_poly(&via_nu)?;
        r.check(&w, &lhs, &rhs);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraElement, AlgebraPresentation};
    use crate::polyring::{parse_poly, Field, MonomialOrder, PolyContext};

    fn alg(name: &str, vars: &[&str], rels: &[&str], field: Field) -> Algebra {
        let c = PolyContext::new(vars.iter().copied(), field, MonomialOrder::DegRevLex).unwrap();
        let rels = rels.iter().map(|r| parse_poly(&c, r).unwrap()).collect();
        AlgebraPresentation::new(name, &c, rels).unwrap()
    }

    fn el(a: &Algebra, s: &str) -> AlgebraElement {
        structure_map_nu(a, &parse_poly(a.ctx(), s).unwrap()).unwrap()
    }

    #[test]
    fn free_line() {
        let a = alg("A", &["x"], &[], Field::Rationals);
        let om = kahler_of_algebra(&a);
        assert_eq!(om.module().rank(), 1);
        assert!(om.module().relations().is_empty());
        assert_eq!(om.universal().apply(&el(&a, "x^2")).unwrap().to_string(), "(2*x)");
    }

    #[test]
    fn dual_numbers() {
        let a = alg("A", &["x"], &["x^2"], Field::Rationals);
        let om = kahler_of_algebra(&a);
        let dx = om.module().generator(0);
        assert!(!dx.is_zero());
        assert!(dx.act(&el(&a, "x")).unwrap().is_zero());
        let f5 = alg("A", &["x"], &["x^2"], Field::prime(2).unwrap());
        let om2 = kahler_of_algebra(&f5);
        assert!(!om2.module().generator(0).act(&el(&f5, "x")).unwrap().is_zero());
    }

    #[test]
    fn circle_and_zero_algebra() {
        let a = alg("A", &["x", "y"], &["x^2 + y^2 - 1"], Field::Rationals);
        let om = kahler_of_algebra(&a);
        assert_eq!(om.module().to_string(), "module Omega_A over A { rank: 2; relations: (2*x, 2*y); }");
        assert!(om.universal().apply_poly(&parse_poly(a.ctx(), "x^2 + y^2 - 1").unwrap()).unwrap().is_zero());

        let z = alg("Z", &["x"], &["1"], Field::Rationals);
        let oz = kahler_of_algebra(&z);
        assert_eq!(oz.module().rank(), 0);
    }

    #[test]
    fn factor_examples() {
        let a = alg("A", &["x", "y"], &[], Field::Rationals);
        let om = kahler_of_algebra(&a);
        let h = om.factor_derivation(om.universal()).unwrap();
        assert_eq!(h, ModuleMap::identity(om.module()));

        let m = ModulePresentation::free("M", &a, 1);
        let t = RestrictedModule::plain(&m);
        let z = Derivation::zero(&a, &t);
        assert!(om.factor_derivation(&z).unwrap().images().iter().all(|v| v.is_zero()));

        let imgs = vec![m.element(vec![parse_poly(a.ctx(), "y").unwrap()]).unwrap(), m.element(vec![parse_poly(a.ctx(), "x").unwrap()]).unwrap()];
        let d = Derivation::new(&a, &t, imgs).unwrap();
        let h = om.factor_derivation(&d).unwrap();
        assert!(om.factors(&d, &h).unwrap());
        let xy = el(&a, "x*y");
        assert_eq!(h.apply(&om.universal().apply(&xy).unwrap()).unwrap(), d.apply(&xy).unwrap());
        assert_eq!(d.apply(&xy).unwrap().to_string(), "(x^2 + y^2)");
    }

    #[test]
    fn functoriality() {
        let a = alg("A", &["x"], &[], Field::Rationals);
        let b = alg("B", &["y"], &[], Field::Rationals);
        let oa = kahler_of_algebra(&a);
        let ob = kahler_of_algebra(&b);
        let f = AlgebraMap::new(&a, &b, vec![el(&b, "y^2")]).unwrap();
        let of = omega_on_morphism(&f, &oa, &ob).unwrap();
        assert_eq!(of.images()[0].to_string(), "(2*y)");
        let id = omega_on_morphism(&AlgebraMap::identity(&a), &oa, &oa).unwrap();
        assert_eq!(id, ModuleMap::identity(oa.module()));

        // k[u,v] → circle → circle/(y): composite agrees.
        let p = alg("P", &["u", "v"], &[], Field::Rationals);
        let c = alg("C", &["x", "y"], &["x^2 + y^2 - 1"], Field::Rationals);
        let q = alg("Q", &["x", "y"], &["x^2 + y^2 - 1", "y"], Field::Rationals);
        let f1 = AlgebraMap::new(&p, &c, vec![el(&c, "x*y"), el(&c, "x + y^2")]).unwrap();
        let f2 = AlgebraMap::new(&c, &q, vec![el(&q, "x"), el(&q, "y")]).unwrap();
        let (op, oc, oq) = (kahler_of_algebra(&p), kahler_of_algebra(&c), kahler_of_algebra(&q));
        let lhs = omega_on_morphism(&f1.then(&f2).unwrap(), &op, &oq).unwrap();
        let rhs = omega_on_morphism(&f1, &op, &oc).unwrap().then(&omega_on_morphism(&f2, &oc, &oq).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn coequalizer_shadow() {
        let cfg = SampleConfig { samples: 40, ..SampleConfig::default() };
        for rels in [&["x^2 + y^2 - 1"][..], &["y^2 - x^3"], &["x*y - 1"], &[]] {
            let a = alg("A", &["x", "y"], rels, Field::Rationals);
            let r = check_coequalizer_shadow(&kahler_of_algebra(&a), &cfg).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn universal_is_beck() {
        let a = alg("A", &["x", "y"], &["y^2 - x^3"], Field::Rationals);
        let om = kahler_of_algebra(&a);
        let cfg = SampleConfig::default();
        let mut g = rng(3);
        let polys = crate::derivations::chain_rule_samples(&a, &mut g, &cfg, 20);
        assert!(crate::derivations::check_beck_t_derivation(om.universal(), &polys).unwrap().passed());
    }
}
