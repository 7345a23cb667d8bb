//! Derivations `∂ : A → M` presented by generator images.
//!
//! `apply` is the chain-rule formula `∂(ν(p)) = Σᵢ ν(∂p/∂xᵢ) • ∂(xᵢ)`;
//! it is well defined on the quotient because construction checks that
//! every relation `f` satisfies `Σᵢ ν(∂f/∂xᵢ) • ∂(xᵢ) = 0`.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{same_algebra, structure_map_nu, Algebra, AlgebraElement, AlgebraMap};
use crate::error::{Error, Result};
use crate::module::{same_module, ModuleElement, RestrictedModule};
use crate::polyring::{Monomial, Poly};
use crate::report::Report;
use crate::sample::{random_poly, SampleConfig, SampleRng};
use crate::wext::WMap;

#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    source: Algebra,
    target: RestrictedModule,
    images: Vec<ModuleElement>,
}

/// A relation `f` on which a candidate derivation is not compatible:
/// `∂(ν(f)) = ∂(0) = 0` but the chain rule gives `rhs ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationWitness {
    pub relation: Poly,
    pub lhs: ModuleElement,
    pub rhs: ModuleElement,
}

/// Checks `Σᵢ ν(∂f/∂xᵢ) • images[i] = 0` for every relation of `source`.
pub fn relation_compatibility(
    source: &Algebra,
    target: &RestrictedModule,
    images: &[ModuleElement],
) -> Result<Option<RelationWitness>> {
    check_shape(source, target, images)?;
    let rels = source.relations().generators().iter().chain(source.relations().basis());
    for f in rels {
        let rhs = target.combine(&f.gradient(), images)?;
        if !rhs.is_zero() {
            return Ok(Some(RelationWitness { relation: f.clone(), lhs: target.carrier().zero(), rhs }));
        }
    }
    Ok(None)
}

fn check_shape(source: &Algebra, target: &RestrictedModule, images: &[ModuleElement]) -> Result<()> {
    if images.len() != source.nvars() {
        return Err(Error::Arity { expected: source.nvars(), got: images.len() });
    }
    if !same_algebra(source, target.base()) {
        return Err(Error::context(format!(
            "derivation on `{}` into a module over `{}`",
            source.name(),
            target.base().name()
        )));
    }
    if let Some(m) = images.iter().find(|m| !same_module(m.owner(), target.carrier())) {
        return Err(Error::context(format!("image {m} is not in `{}`", target.carrier().name())));
    }
    Ok(())
}

impl Derivation {
    pub fn new(source: &Algebra, target: &RestrictedModule, images: Vec<ModuleElement>) -> Result<Self> {
        if let Some(w) = relation_compatibility(source, target, &images)? {
            return Err(Error::RelationViolation { relation: w.relation.to_string(), image: w.rhs.to_string() });
        }
        Ok(Derivation { source: source.clone(), target: target.clone(), images })
    }

    pub fn zero(source: &Algebra, target: &RestrictedModule) -> Self {
        let images = vec![target.carrier().zero(); source.nvars()];
        Derivation { source: source.clone(), target: target.clone(), images }
    }

    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn target(&self) -> &RestrictedModule {
        &self.target
    }

    pub fn images(&self) -> &[ModuleElement] {
        &self.images
    }

    /// `Σᵢ ν(∂p/∂xᵢ) • ∂(xᵢ)` for an unreduced polynomial.
    pub fn apply_poly(&self, p: &Poly) -> Result<ModuleElement> {
        if !crate::polyring::same_ctx(p.ctx(), self.source.ctx()) {
            return Err(Error::context(format!("`{p}` is not over `{}`", self.source.name())));
        }
        self.target.combine(&p.gradient(), &self.images)
    }

    pub fn apply(&self, a: &AlgebraElement) -> Result<ModuleElement> {
        if !same_algebra(a.owner(), &self.source) {
            return Err(Error::context(format!(
                "element of `{}` given to a derivation on `{}`",
                a.owner().name(),
                self.source.name()
            )));
        }
        self.apply_poly(a.rep())
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = self.source.ctx().vars();
        let parts: Vec<String> = vars.iter().zip(&self.images).map(|(v, m)| format!("{v} -> {m}")).collect();
        write!(f, "{{{}}}", parts.join("; "))
    }
}

/// `∂(ab) = a•∂(b) + b•∂(a)` on sampled pairs.
pub fn check_leibniz(d: &Derivation, pairs: &[(AlgebraElement, AlgebraElement)]) -> Result<Report> {
    let cand = LinearCandidate::from_derivation(d);
    leibniz_report(&cand, pairs)
}

/// The chain-rule square `ν;∂ = d;(ν⊗∂);•` on sampled polynomials: the
/// derivation applied to the normal form of `p` against the chain rule on
/// `p` itself, cross-checked with β-evaluation of `p` at `(xᵢ, ∂xᵢ)`.
pub fn check_beck_t_derivation(d: &Derivation, samples: &[Poly]) -> Result<Report> {
    let mut r = Report::new("beck_t_derivation");
    let phi = WMap::from_derivation(d)?;
    let w = phi.target().clone();
    for p in samples {
        let nu_p = structure_map_nu(&d.source, p)?;
        let lhs = d.apply(&nu_p)?;
        let rhs = d.apply_poly(p)?;
        if !r.check(p, &lhs, &rhs) {
            continue;
        }
        let beta = w.beta_eval(p, phi.images())?;
        let along = d.target.along().apply(&nu_p)?;
        if beta.a != along || beta.m != rhs {
            r.fail(format!("{p} (beta cross-check)"), beta.to_string(), format!("({along}, {rhs})"));
        }
    }
    Ok(r)
}

/// `x ↦ (x, ∂x)`, the algebra map `A → A ⊕ M` over `A`.
pub fn derivation_to_algebra_map(d: &Derivation) -> Result<WMap> {
    WMap::from_derivation(d)
}

/// Inverse of [`derivation_to_algebra_map`]: requires `π₁ ∘ φ = id`.
pub fn algebra_map_to_derivation(phi: &WMap) -> Result<Derivation> {
    let w = phi.target();
    if !same_algebra(phi.source(), w.base()) {
        return Err(Error::context(format!(
            "map from `{}` into W over `{}` is not over the identity",
            phi.source().name(),
            w.base().name()
        )));
    }
    for (i, u) in phi.images().iter().enumerate() {
        if u.a != AlgebraElement::var(phi.source(), i)? {
            return Err(Error::FirstComponent { index: i, found: u.a.to_string() });
        }
    }
    let images = phi.images().iter().map(|u| u.m.clone()).collect();
    Derivation::new(phi.source(), w.fiber(), images)
}

/// `g;∂ : A → N_A` for `g : A → B` and `∂ : B → N`.
pub fn precompose_algebra_map(g: &AlgebraMap, d: &Derivation) -> Result<Derivation> {
    if !same_algebra(g.target(), &d.source) {
        return Err(Error::context(format!(
            "map lands in `{}`, derivation is on `{}`",
            g.target().name(),
            d.source.name()
        )));
    }
    let target = d.target.restrict(g)?;
    let images = g.images().iter().map(|b| d.apply(b)).collect::<Result<Vec<_>>>()?;
    Derivation::new(g.source(), &target, images)
}

type MonomialValue = Arc<dyn Fn(&Monomial) -> ModuleElement + Send + Sync>;

/// A `k`-linear map `A → M` that is not assumed to be a derivation,
/// defined on the standard monomials of `A` and extended linearly.
#[derive(Clone)]
pub struct LinearCandidate {
    pub label: String,
    source: Algebra,
    target: RestrictedModule,
    on_monomial: MonomialValue,
}

impl fmt::Debug for LinearCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinearCandidate").field("label", &self.label).finish()
    }
}

impl LinearCandidate {
    pub fn new(
        label: impl Into<String>,
        source: &Algebra,
        target: &RestrictedModule,
        on_monomial: impl Fn(&Monomial) -> ModuleElement + Send + Sync + 'static,
    ) -> Self {
        LinearCandidate {
            label: label.into(),
            source: source.clone(),
            target: target.clone(),
            on_monomial: Arc::new(on_monomial),
        }
    }

    pub fn from_derivation(d: &Derivation) -> Self {
        let inner = d.clone();
        let ctx = d.source.ctx().clone();
        LinearCandidate::new(format!("derivation {d}"), &d.source, &d.target, move |m| {
            let mono = Poly::monomial(&ctx, m.clone(), ctx.field().one());
            inner.apply_poly(&mono).expect("own context")
        })
    }

    /// A derivation plus `delta` on every standard monomial of the given
    /// degree; a derivation again only in degenerate cases.
    pub fn perturbed(d: &Derivation, degree: u32, delta: ModuleElement) -> Self {
        let base = Self::from_derivation(d);
        let f = base.on_monomial.clone();
        LinearCandidate::new(format!("perturbed(deg {degree}) {d}"), &d.source, &d.target, move |m| {
            let v = f(m);
            if m.degree() == degree {
                v.add(&delta).expect("same carrier")
            } else {
                v
            }
        })
    }

    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn target(&self) -> &RestrictedModule {
        &self.target
    }

    pub fn eval(&self, a: &AlgebraElement) -> Result<ModuleElement> {
        let mut acc = self.target.carrier().zero();
        for (m, c) in a.rep().terms() {
            acc = acc.add(&(self.on_monomial)(m).scale(c))?;
        }
        Ok(acc)
    }
}

fn leibniz_report(cand: &LinearCandidate, pairs: &[(AlgebraElement, AlgebraElement)]) -> Result<Report> {
    let mut r = Report::new("leibniz");
    for (a, b) in pairs {
        let lhs = cand.eval(&a.mul(b)?)?;
        let rhs = cand.target.act(a, &cand.eval(b)?)?.add(&cand.target.act(b, &cand.eval(a)?)?)?;
        r.check(format!("a = {a}; b = {b}"), &lhs, &rhs);
    }
    Ok(r)
}

fn chain_rule_report(cand: &LinearCandidate, samples: &[Poly]) -> Result<Report> {
    let mut r = Report::new("chain_rule");
    let gens = AlgebraElement::vars(&cand.source)
        .iter()
        .map(|x| cand.eval(x))
        .collect::<Result<Vec<_>>>()?;
    for p in samples {
        let lhs = cand.eval(&structure_map_nu(&cand.source, p)?)?;
        let rhs = cand.target.combine(&p.gradient(), &gens)?;
        r.check(p, &lhs, &rhs);
    }
    Ok(r)
}

/// Verdict of both checks on one candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateVerdict {
    pub label: String,
    pub leibniz: bool,
    pub chain_rule: bool,
}

/// Runs the Leibniz check and the chain-rule (S-derivation) check on each
/// candidate; the report fails for every candidate where they disagree.
pub fn check_s_der_equals_der(
    candidates: &[LinearCandidate],
    pairs: &[(AlgebraElement, AlgebraElement)],
    samples: &[Poly],
) -> Result<(Report, Vec<CandidateVerdict>)> {
    let mut r = Report::new("s_derivation_iff_derivation");
    let mut verdicts = Vec::with_capacity(candidates.len());
    for c in candidates {
        let pairs: Vec<_> = pairs.iter().filter(|(a, _)| same_algebra(a.owner(), &c.source)).cloned().collect();
        let samples: Vec<_> = samples.iter().filter(|p| crate::polyring::same_ctx(p.ctx(), c.source.ctx())).cloned().collect();
        let leibniz = leibniz_report(c, &pairs)?.passed();
        let chain_rule = chain_rule_report(c, &samples)?.passed();
        r.check(&c.label, &leibniz, &chain_rule);
        verdicts.push(CandidateVerdict { label: c.label.clone(), leibniz, chain_rule });
    }
    Ok((r, verdicts))
}

/// Standard monomials of `a` up to `max_degree` as algebra elements.
pub fn standard_monomials(a: &Algebra, max_degree: u32) -> Vec<AlgebraElement> {
    let n = a.nvars();
    let mut out = Vec::new();
    let mut exps = vec![0u32; n];
    fn rec(a: &Algebra, i: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<AlgebraElement>) {
        if i == exps.len() {
            let m = Monomial::from_exponents(exps.clone());
            let p = Poly::monomial(a.ctx(), m, a.field().one());
            let nf = structure_map_nu(a, &p).expect("own context");
            if nf.rep() == &p {
                out.push(nf);
            }
            return;
        }
        for e in 0..=left {
            exps[i] = e;
            rec(a, i + 1, left - e, exps, out);
        }
        exps[i] = 0;
    }
    rec(a, 0, max_degree, &mut exps, &mut out);
    out
}

/// Sample pairs for Leibniz checks: all pairs of standard monomials up to
/// degree 2 (which include every product of two generators and the unit),
/// plus random pairs.
pub fn leibniz_samples(a: &Algebra, g: &mut SampleRng, cfg: &SampleConfig, random: usize) -> Vec<(AlgebraElement, AlgebraElement)> {
    let monos = standard_monomials(a, 2);
    let mut out = Vec::new();
    for (i, p) in monos.iter().enumerate() {
        for q in &monos[i..] {
            out.push((p.clone(), q.clone()));
        }
    }
    for _ in 0..random {
        let p = random_poly(g, a.ctx(), cfg.max_degree.min(4), 4, cfg.coeff_bound);
        let q = random_poly(g, a.ctx(), cfg.max_degree.min(4), 4, cfg.coeff_bound);
        out.push((structure_map_nu(a, &p).unwrap(), structure_map_nu(a, &q).unwrap()));
    }
    out
}

/// Sample polynomials for chain-rule checks: every monomial up to degree
/// 4 in the ambient ring plus random polynomials.
pub fn chain_rule_samples(a: &Algebra, g: &mut SampleRng, cfg: &SampleConfig, random: usize) -> Vec<Poly> {
    let free = crate::algebra::AlgebraPresentation::free("free", a.ctx());
    let mut out: Vec<Poly> = standard_monomials(&free, 4).into_iter().map(|e| e.rep().clone()).collect();
    for _ in 0..random {
        out.push(random_poly(g, a.ctx(), cfg.max_degree, 5, cfg.coeff_bound));
    }
    out
}
