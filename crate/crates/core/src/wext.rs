//! The square-zero extension `W(A, M) = A ⊕ M` with its polynomial
//! evaluation β, morphisms between extensions, and the correspondence
//! between derivations and algebra maps into `W`.

use std::fmt;

use crate::algebra::{same_algebra, Algebra, AlgebraElement, AlgebraMap, AlgebraOps};
use crate::derivations::Derivation;
use crate::error::{Error, Result};
use crate::module::{same_module, Module, ModuleElement, ModuleMap, RestrictedModule};
use crate::polyring::{Ctx, MonomialOrder, Poly, PolyContext, RingOps, Scalar};
use crate::report::Report;
use crate::sample::{random_poly, rng, SampleConfig, SampleRng};
use crate::symmetric::{mu_flatten, random_outer, OuterPoly};

/// `W(A, M)` for a module `M` over `A`, possibly restricted from another
/// algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct WAlgebra {
    fiber: RestrictedModule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WElement {
    pub a: AlgebraElement,
    pub m: ModuleElement,
}

impl fmt::Display for WElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.m)
    }
}

impl WAlgebra {
    pub fn new(fiber: &RestrictedModule) -> Self {
        WAlgebra { fiber: fiber.clone() }
    }

    pub fn plain(m: &Module) -> Self {
        WAlgebra { fiber: RestrictedModule::plain(m) }
    }

    pub fn base(&self) -> &Algebra {
        self.fiber.base()
    }

    pub fn fiber(&self) -> &RestrictedModule {
        &self.fiber
    }

    pub fn pair(&self, a: AlgebraElement, m: ModuleElement) -> Result<WElement> {
        if !same_algebra(a.owner(), self.base()) {
            return Err(Error::context(format!("first component is not in `{}`", self.base().name())));
        }
        if !same_module(m.owner(), self.fiber.carrier()) {
            return Err(Error::context(format!("second component is not in `{}`", self.fiber.carrier().name())));
        }
        Ok(WElement { a, m })
    }

    pub fn zero(&self) -> WElement {
        WElement { a: AlgebraElement::zero(self.base()), m: self.fiber.carrier().zero() }
    }

    pub fn one(&self) -> WElement {
        WElement { a: AlgebraElement::one(self.base()), m: self.fiber.carrier().zero() }
    }

    /// `(a, 0)`.
    pub fn inject(&self, a: &AlgebraElement) -> WElement {
        WElement { a: a.clone(), m: self.fiber.carrier().zero() }
    }

    pub fn add(&self, u: &WElement, v: &WElement) -> Result<WElement> {
        Ok(WElement { a: u.a.add(&v.a)?, m: u.m.add(&v.m)? })
    }

    /// `(a, m)(a', m') = (aa', a•m' + a'•m)`.
    pub fn mul(&self, u: &WElement, v: &WElement) -> Result<WElement> {
        let a = u.a.mul(&v.a)?;
        let m = self.fiber.act(&u.a, &v.m)?.add(&self.fiber.act(&v.a, &u.m)?)?;
        Ok(WElement { a, m })
    }

    /// β: evaluation of a polynomial in `args.len()` variables at elements
    /// of `W`, by the dual-number formula
    /// `β(p; (aᵢ, mᵢ)) = (p(a), Σᵢ (∂p/∂xᵢ)(a) • mᵢ)`.
    pub fn beta_eval(&self, p: &Poly, args: &[WElement]) -> Result<WElement> {
        if p.field() != self.base().field() {
            return Err(Error::context(format!(
                "polynomial over {} evaluated in W over {}",
                p.field(),
                self.base().field()
            )));
        }
        let ops = AlgebraOps(self.base().clone());
        let firsts: Vec<AlgebraElement> = args.iter().map(|u| u.a.clone()).collect();
        let a = p.eval_generic(&ops, &firsts)?;
        let mut m = self.fiber.carrier().zero();
        for (i, dp) in p.gradient().iter().enumerate() {
            if dp.is_zero() || args[i].m.is_zero() {
                continue;
            }
            let c = dp.eval_generic(&ops, &firsts)?;
            m = m.add(&self.fiber.act(&c, &args[i].m)?)?;
        }
        Ok(WElement { a, m })
    }

    /// β computed instead by ring operations in `W` (sums and iterated
    /// squarezero products).
    pub fn eval_by_products(&self, p: &Poly, args: &[WElement]) -> Result<WElement> {
        p.eval_generic(&WOps(self), args)
    }
}

/// `W` as a ring carrier for [`Poly::eval_generic`]. Operands come from
/// the same `W`; mismatches panic.
pub struct WOps<'a>(pub &'a WAlgebra);

impl RingOps for WOps<'_> {
    type Elem = WElement;
    fn zero(&self) -> WElement {
        self.0.zero()
    }
    fn one(&self) -> WElement {
        self.0.one()
    }
    fn add(&self, a: &WElement, b: &WElement) -> WElement {
        self.0.add(a, b).expect("elements of the same W")
    }
    fn mul(&self, a: &WElement, b: &WElement) -> WElement {
        self.0.mul(a, b).expect("elements of the same W")
    }
    fn scalar(&self, c: &Scalar) -> WElement {
        self.0.inject(&AlgebraElement::from_scalar(self.0.base(), c.clone()))
    }
}

fn sample_ctx(n: usize, w: &WAlgebra) -> Ctx {
    PolyContext::new((1..=n).map(|j| format!("t{j}")), w.base().field(), MonomialOrder::DegRevLex)
        .expect("distinct names")
}

/// Random element of `W` with small coefficients.
pub fn random_w_element(g: &mut SampleRng, w: &WAlgebra, cfg: &SampleConfig) -> WElement {
    let base = w.base();
    let a = crate::algebra::structure_map_nu(base, &random_poly(g, base.ctx(), 2, 3, cfg.coeff_bound))
        .expect("own context");
    let carrier = w.fiber.carrier();
    let rep = (0..carrier.rank())
        .map(|_| random_poly(g, carrier.owner().ctx(), 2, 2, cfg.coeff_bound))
        .collect();
    WElement { a, m: carrier.element(rep).expect("own context") }
}

/// The two T-algebra laws for β on sampled inputs: β(xᵢ; u) = uᵢ, and
/// β(μ(w); u) = β(body; β(tagⱼ; u)).
pub fn check_w_is_t_algebra(w: &WAlgebra, cfg: &SampleConfig) -> Result<Vec<Report>> {
    let mut g = rng(cfg.seed);
    let mut unit = Report::new("beta_unit").with_seed(cfg.seed);
    let mut mult = Report::new("beta_multiplication").with_seed(cfg.seed);
    let small = SampleConfig { max_degree: cfg.max_degree.min(3), ..*cfg };
    for s in 0..cfg.samples {
        let n = 1 + s % 3;
        let ctx = sample_ctx(n, w);
        let args: Vec<WElement> = (0..n).map(|_| random_w_element(&mut g, w, cfg)).collect();
        let i = s % n;
        let xi = Poly::var(&ctx, i)?;
        unit.check(format!("x{} at {}", i + 1, join(&args)), &w.beta_eval(&xi, &args)?, &args[i]);

        let outer: OuterPoly = random_outer(&mut g, &ctx, &small);
        let lhs = w.beta_eval(&mu_flatten(&outer), &args)?;
        let inner = outer.tags().iter().map(|t| w.beta_eval(t, &args)).collect::<Result<Vec<_>>>()?;
        let rhs = w.beta_eval(outer.body(), &inner)?;
        mult.check(format!("{outer} at {}", join(&args)), &lhs, &rhs);
    }
    Ok(vec![unit, mult])
}

/// β on the product `t1·t2` against the squarezero product and against
/// evaluation by ring operations, on sampled pairs.
pub fn check_product_coincides(w: &WAlgebra, cfg: &SampleConfig) -> Result<Report> {
    let mut g = rng(cfg.seed);
    let mut r = Report::new("product_coincides").with_seed(cfg.seed);
    let ctx = sample_ctx(2, w);
    let prod = &Poly::var(&ctx, 0)? * &Poly::var(&ctx, 1)?;
    for _ in 0..cfg.samples {
        let u = random_w_element(&mut g, w, cfg);
        let v = random_w_element(&mut g, w, cfg);
        let args = [u.clone(), v.clone()];
        let beta = w.beta_eval(&prod, &args)?;
        let input = format!("{u} * {v}");
        if r.check(&input, &beta, &w.mul(&u, &v)?) {
            let via_ops = w.eval_by_products(&prod, &args)?;
            if via_ops != beta {
                r.fail(input, beta.to_string(), via_ops.to_string());
            }
        }
    }
    Ok(r)
}

fn join(args: &[WElement]) -> String {
    let parts: Vec<String> = args.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

/// A T-algebra map `Q → W`, given by generator images and validated by
/// requiring β of every relation of `Q` to vanish.
#[derive(Clone, Debug, PartialEq)]
pub struct WMap {
    source: Algebra,
    target: WAlgebra,
    images: Vec<WElement>,
}

impl WMap {
    pub fn new(source: &Algebra, target: &WAlgebra, images: Vec<WElement>) -> Result<Self> {
        if images.len() != source.nvars() {
            return Err(Error::Arity { expected: source.nvars(), got: images.len() });
        }
        for u in &images {
            target.pair(u.a.clone(), u.m.clone())?;
        }
        let rels = source.relations().generators().iter().chain(source.relations().basis());
        for f in rels {
            let v = target.beta_eval(f, &images)?;
            if v != target.zero() {
                return Err(Error::RelationViolation { relation: f.to_string(), image: v.to_string() });
            }
        }
        Ok(WMap { source: source.clone(), target: target.clone(), images })
    }

    /// `x ↦ (g(x), ∂x)` for a derivation into a module restricted along `g`.
    pub fn from_derivation(d: &Derivation) -> Result<Self> {
        hom_der_backward(d.target().along(), d)
    }

    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn target(&self) -> &WAlgebra {
        &self.target
    }

    pub fn images(&self) -> &[WElement] {
        &self.images
    }

    pub fn apply_poly(&self, p: &Poly) -> Result<WElement> {
        if !crate::polyring::same_ctx(p.ctx(), self.source.ctx()) {
            return Err(Error::context(format!("`{p}` is not over `{}`", self.source.name())));
        }
        self.target.beta_eval(p, &self.images)
    }

    pub fn apply(&self, q: &AlgebraElement) -> Result<WElement> {
        if !same_algebra(q.owner(), &self.source) {
            return Err(Error::context(format!("element is not in `{}`", self.source.name())));
        }
        self.apply_poly(q.rep())
    }

    /// First projection `π₁ ∘ φ`.
    pub fn pi1(&self) -> Result<AlgebraMap> {
        AlgebraMap::new(&self.source, self.target.base(), self.images.iter().map(|u| u.a.clone()).collect())
    }

    /// Followed by a morphism of extensions.
    pub fn then(&self, f: &WMorphism) -> Result<WMap> {
        if f.source != self.target {
            return Err(Error::context("morphism does not start at this map's target".to_string()));
        }
        let images = self.images.iter().map(|u| f.apply(u)).collect::<Result<Vec<_>>>()?;
        WMap::new(&self.source, &f.target, images)
    }
}

/// `(g, ∂) ↦ φ` with `φ(x) = (g(x), ∂x)`; `∂` must take values in a module
/// restricted along `g`.
pub fn hom_der_backward(g: &AlgebraMap, d: &Derivation) -> Result<WMap> {
    if d.target().along() != g {
        return Err(Error::context("derivation target is not restricted along the given map".to_string()));
    }
    let w = WAlgebra::plain(d.target().carrier());
    let images = g.images().iter().zip(d.images()).map(|(a, m)| WElement { a: a.clone(), m: m.clone() }).collect();
    WMap::new(d.source(), &w, images)
}

/// `φ ↦ (π₁ ∘ φ, π₂ ∘ φ)`.
pub fn hom_der_forward(phi: &WMap) -> Result<(AlgebraMap, Derivation)> {
    let g = phi.pi1()?;
    let target = phi.target.fiber.restrict(&g)?;
    let images = phi.images.iter().map(|u| u.m.clone()).collect();
    let d = Derivation::new(&phi.source, &target, images)?;
    Ok((g, d))
}

/// A map `W(A, M) → W(A', M')`: an algebra map on the first component and
/// a module map on the second.
#[derive(Clone, Debug, PartialEq)]
pub struct WMorphism {
    source: WAlgebra,
    target: WAlgebra,
    alg: AlgebraMap,
    fiber: ModuleMap,
}

impl WMorphism {
    /// Requires the fiber map to be linear over `alg`: with `W(A, M)`
    /// restricted along `f` and `W(A', M')` along `f'`, the fiber map must
    /// lie over `f;ψ = alg;f'`.
    pub fn new(source: &WAlgebra, target: &WAlgebra, alg: AlgebraMap, fiber: ModuleMap) -> Result<Self> {
        if !same_algebra(alg.source(), source.base()) || !same_algebra(alg.target(), target.base()) {
            return Err(Error::context("algebra map does not match the extensions".to_string()));
        }
        if !same_module(fiber.source(), source.fiber.carrier())
            || !same_module(fiber.target().carrier(), target.fiber.carrier())
        {
            return Err(Error::context("module map does not match the extensions".to_string()));
        }
        let lhs = source.fiber.along().then(fiber.target().along())?;
        let rhs = alg.then(target.fiber.along())?;
        if lhs != rhs {
            return Err(Error::context("module map is not linear over the algebra map".to_string()));
        }
        Ok(WMorphism { source: source.clone(), target: target.clone(), alg, fiber })
    }

    pub fn identity(w: &WAlgebra) -> Self {
        WMorphism {
            source: w.clone(),
            target: w.clone(),
            alg: AlgebraMap::identity(w.base()),
            fiber: ModuleMap::identity(w.fiber.carrier()),
        }
    }

    pub fn source(&self) -> &WAlgebra {
        &self.source
    }

    pub fn target(&self) -> &WAlgebra {
        &self.target
    }

    pub fn alg(&self) -> &AlgebraMap {
        &self.alg
    }

    pub fn fiber(&self) -> &ModuleMap {
        &self.fiber
    }

    pub fn apply(&self, u: &WElement) -> Result<WElement> {
        Ok(WElement { a: self.alg.apply(&u.a)?, m: self.fiber.apply(&u.m)? })
    }

    pub fn then(&self, next: &WMorphism) -> Result<WMorphism> {
        if self.target != next.source {
            return Err(Error::context("morphisms do not compose".to_string()));
        }
        WMorphism::new(&self.source, &next.target, self.alg.then(&next.alg)?, self.fiber.then(&next.fiber)?)
    }
}

/// `W(A, h) : W(A, M) → W(A, N_A)` for `h : M → N_A`.
pub fn w_on_module_map(h: &ModuleMap) -> Result<WMorphism> {
    let source = WAlgebra::plain(h.source());
    let target = WAlgebra::new(h.target());
    WMorphism::new(&source, &target, AlgebraMap::identity(h.source().owner()), h.clone())
}

/// `W(g, N) : W(A, N_A) → W(B, N)` for `g : A → B`.
pub fn w_on_algebra_map(g: &AlgebraMap, n: &Module) -> Result<WMorphism> {
    let source = WAlgebra::new(&RestrictedModule::plain(n).restrict(g)?);
    let target = WAlgebra::plain(n);
    WMorphism::new(&source, &target, g.clone(), ModuleMap::identity(n))
}

/// An object `(A, M)` of the category of algebras with a module.
#[derive(Clone, Debug, PartialEq)]
pub struct ModTObject {
    pub algebra: Algebra,
    pub module: Module,
}

impl ModTObject {
    pub fn new(module: &Module) -> Self {
        ModTObject { algebra: module.owner().clone(), module: module.clone() }
    }
}

/// An arrow `(g, h) : (A, M) → (B, N)` with `h : M → N_A`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModTArrow {
    g: AlgebraMap,
    h: ModuleMap,
}

impl ModTArrow {
    pub fn new(g: AlgebraMap, h: ModuleMap) -> Result<Self> {
        if h.target().along() != &g {
            return Err(Error::context("module map is not over the algebra map".to_string()));
        }
        Ok(ModTArrow { g, h })
    }

    pub fn identity(obj: &ModTObject) -> Self {
        ModTArrow { g: AlgebraMap::identity(&obj.algebra), h: ModuleMap::identity(&obj.module) }
    }

    pub fn source(&self) -> ModTObject {
        ModTObject::new(self.h.source())
    }

    pub fn target(&self) -> ModTObject {
        ModTObject::new(self.h.target().carrier())
    }

    pub fn g(&self) -> &AlgebraMap {
        &self.g
    }

    pub fn h(&self) -> &ModuleMap {
        &self.h
    }

    pub fn then(&self, next: &ModTArrow) -> Result<ModTArrow> {
        ModTArrow::new(self.g.then(&next.g)?, self.h.then(&next.h)?)
    }
}

/// `W(g, h) = W(A, h) ; W(g, N)`.
pub fn w_functor_arrow(arrow: &ModTArrow) -> Result<WMorphism> {
    w_on_module_map(&arrow.h)?.then(&w_on_algebra_map(&arrow.g, arrow.h.target().carrier())?)
}

/// Given `g : A → B`, `N` over `B`, `f : Q → A` and `q : Q → W(B, N)` with
/// `f;g = π₁∘q`, returns the unique `Q → W(A, N_A)` with first component
/// `f` and second component that of `q`.
pub fn check_cartesian(g: &AlgebraMap, n: &Module, f: &AlgebraMap, q: &WMap) -> Result<WMap> {
    if !same_module(q.target.fiber.carrier(), n) || !q.target.fiber.is_plain() {
        return Err(Error::context(format!("map does not land in W(-, {})", n.name())));
    }
    if !same_algebra(f.source(), &q.source) {
        return Err(Error::context("the two maps have different sources".to_string()));
    }
    let fg = f.then(g)?;
    for (i, (via_f, u)) in fg.images().iter().zip(&q.images).enumerate() {
        if via_f != &u.a {
            return Err(Error::CommutingCondition {
                generator: q.source.ctx().vars()[i].clone(),
                via_f: via_f.to_string(),
                via_q: u.a.to_string(),
            });
        }
    }
    let w = WAlgebra::new(&restrict_plain(g, n)?);
    let images = f.images().iter().zip(&q.images).map(|(a, u)| WElement { a: a.clone(), m: u.m.clone() }).collect();
    WMap::new(&q.source, &w, images)
}

fn restrict_plain(g: &AlgebraMap, n: &Module) -> Result<RestrictedModule> {
    RestrictedModule::plain(n).restrict(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{structure_map_nu, AlgebraPresentation};
    use crate::derivations::{algebra_map_to_derivation, derivation_to_algebra_map};
    use crate::module::ModulePresentation;
    use crate::polyring::{parse_poly, Field};

    fn alg(name: &str, vars: &[&str], rels: &[&str]) -> Algebra {
        let c = PolyContext::new(vars.iter().copied(), Field::Rationals, MonomialOrder::DegRevLex).unwrap();
        let rels = rels.iter().map(|r| parse_poly(&c, r).unwrap()).collect();
        AlgebraPresentation::new(name, &c, rels).unwrap()
    }

    fn el(a: &Algebra, s: &str) -> AlgebraElement {
        structure_map_nu(a, &parse_poly(a.ctx(), s).unwrap()).unwrap()
    }

    fn cfg(samples: usize) -> SampleConfig {
        SampleConfig { samples, ..SampleConfig::default() }
    }

    #[test]
    fn dual_numbers() {
        // W(k, k) is k[ε]/(ε²): β(t², (3, 1)) = (9, 6).
        let k = alg("k", &[], &[]);
        let m = ModulePresentation::free("k", &k, 1);
        let w = WAlgebra::plain(&m);
        let ctx = sample_ctx(1, &w);
        let u = WElement { a: AlgebraElement::from_i64(&k, 3), m: m.generator(0) };
        let r = w.beta_eval(&parse_poly(&ctx, "t1^2").unwrap(), &[u]).unwrap();
        assert_eq!(r.to_string(), "(9, (6))");
    }

    #[test]
    fn beta_matches_products() {
        let a = alg("A", &["x", "y"], &["x^2 + y^2 - 1"]);
        let m = ModulePresentation::new("M", &a, 2, vec![vec![
            parse_poly(a.ctx(), "x").unwrap(),
            parse_poly(a.ctx(), "y").unwrap(),
        ]])
        .unwrap();
        let w = WAlgebra::plain(&m);
        assert!(check_product_coincides(&w, &cfg(30)).unwrap().passed());
        for r in check_w_is_t_algebra(&w, &cfg(30)).unwrap() {
            assert!(r.passed(), "{r:?}");
        }
        let mut g = rng(7);
        let ctx = sample_ctx(3, &w);
        for _ in 0..20 {
            let p = random_poly(&mut g, &ctx, 4, 5, 9);
            let args: Vec<_> = (0..3).map(|_| random_w_element(&mut g, &w, &cfg(1))).collect();
            assert_eq!(w.beta_eval(&p, &args).unwrap(), w.eval_by_products(&p, &args).unwrap());
        }
    }

    #[test]
    fn derivation_round_trip() {
        let a = alg("A", &["x", "y"], &["x^2 + y^2 - 1"]);
        let m = ModulePresentation::free("A", &a, 1);
        let target = RestrictedModule::plain(&m);
        let images = vec![
            m.element(vec![parse_poly(a.ctx(), "-y").unwrap()]).unwrap(),
            m.element(vec![parse_poly(a.ctx(), "x").unwrap()]).unwrap(),
        ];
        let d = Derivation::new(&a, &target, images).unwrap();
        let phi = derivation_to_algebra_map(&d).unwrap();
        assert_eq!(algebra_map_to_derivation(&phi).unwrap(), d);
        let (g, d2) = hom_der_forward(&phi).unwrap();
        assert!(g.is_identity());
        assert_eq!(d2, d);
        assert_eq!(hom_der_backward(&g, &d2).unwrap(), phi);
    }

    #[test]
    fn first_component_error() {
        let a = alg("A", &["x"], &[]);
        let m = ModulePresentation::free("A", &a, 1);
        let w = WAlgebra::plain(&m);
        let phi = WMap::new(&a, &w, vec![WElement { a: el(&a, "x^2"), m: m.generator(0) }]).unwrap();
        assert_eq!(
            algebra_map_to_derivation(&phi).unwrap_err(),
            Error::FirstComponent { index: 0, found: "x^2".into() }
        );
    }

    #[test]
    fn wmap_validation() {
        // x ↦ (x, 1) is not compatible with x² = 0 into W(A, A).
        let a = alg("A", &["x"], &["x^2"]);
        let m = ModulePresentation::free("A", &a, 1);
        let w = WAlgebra::plain(&m);
        assert!(WMap::new(&a, &w, vec![WElement { a: el(&a, "x"), m: m.generator(0) }]).is_err());
        let half = m.element(vec![parse_poly(a.ctx(), "x").unwrap()]).unwrap();
        assert!(WMap::new(&a, &w, vec![WElement { a: el(&a, "x"), m: half }]).is_ok());
    }

    #[test]
    fn functor_and_cartesian() {
        let a = alg("A", &["x"], &[]);
        let b = alg("B", &["y"], &["y^3"]);
        let g = AlgebraMap::new(&a, &b, vec![el(&b, "y")]).unwrap();
        let n = ModulePresentation::free("N", &b, 1);
        let m = ModulePresentation::free("M", &a, 1);
        let h = ModuleMap::new(&m, &RestrictedModule::plain(&n).restrict(&g).unwrap(), vec![n.generator(0)]).unwrap();
        let arrow = ModTArrow::new(g.clone(), h).unwrap();
        let f = w_functor_arrow(&arrow).unwrap();
        let wm = WAlgebra::plain(&m);
        let u = WElement { a: el(&a, "x^4 + x"), m: m.element(vec![parse_poly(a.ctx(), "x").unwrap()]).unwrap() };
        assert_eq!(f.apply(&u).unwrap().to_string(), "(y, (y))");
        // Preserves β.
        let ctx = sample_ctx(2, &wm);
        let p = parse_poly(&ctx, "t1^2*t2 + 3*t2").unwrap();
        let v = wm.one();
        let lhs = f.apply(&wm.beta_eval(&p, &[u.clone(), v.clone()]).unwrap()).unwrap();
        let rhs = f.target().beta_eval(&p, &[f.apply(&u).unwrap(), f.apply(&v).unwrap()]).unwrap();
        assert_eq!(lhs, rhs);
        // Identity arrow goes to the identity.
        let id = w_functor_arrow(&ModTArrow::identity(&ModTObject::new(&m))).unwrap();
        assert_eq!(id.apply(&u).unwrap(), u);

        // Cartesian factorization through W(A, N_A).
        let q = alg("Q", &["s"], &[]);
        let fq = AlgebraMap::new(&q, &a, vec![el(&a, "x^2")]).unwrap();
        let wn = WAlgebra::plain(&n);
        let qm = WMap::new(&q, &wn, vec![WElement { a: el(&b, "y^2"), m: n.generator(0) }]).unwrap();
        let fact = check_cartesian(&g, &n, &fq, &qm).unwrap();
        assert_eq!(fact.then(&w_on_algebra_map(&g, &n).unwrap()).unwrap(), qm);
        assert_eq!(fact.pi1().unwrap(), fq);
        let bad = WMap::new(&q, &wn, vec![WElement { a: el(&b, "y"), m: n.generator(0) }]).unwrap();
        assert!(matches!(check_cartesian(&g, &n, &fq, &bad), Err(Error::CommutingCondition { .. })));
    }
}
