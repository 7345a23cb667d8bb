//! The symmetric-algebra monad on finite-dimensional spaces: `SC` is the
//! polynomial ring on a basis of `C`, `S²C` is represented by polynomials
//! in finitely many tagged elements of `SC`, and the deriving transform is
//! the gradient.
//!
//! The only monad morphism exercised is the identity `S → S`. The same
//! role is written ψ or λ in different places; here it is `monad_morphism`.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::polyring::{Ctx, Field, MonomialOrder, Poly, PolyContext, Scalar};
use crate::report::Report;
use crate::sample::{random_poly, rng, SampleConfig, SampleRng};

/// `SC` for a finite basis of `C`.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeAlgebraContext {
    ctx: Ctx,
}

impl FreeAlgebraContext {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = S>, field: Field) -> Result<Self> {
        Ok(FreeAlgebraContext { ctx: PolyContext::new(vars, field, MonomialOrder::DegRevLex)? })
    }

    pub fn from_ctx(ctx: &Ctx) -> Self {
        FreeAlgebraContext { ctx: ctx.clone() }
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.ctx.nvars()
    }

    /// η : C → SC on a basis vector.
    pub fn unit_eta(&self, var: &str) -> Result<Poly> {
        let i = self
            .ctx
            .index_of(var)
            .ok_or_else(|| Error::context(format!("unknown variable `{var}`")))?;
        Poly::var(&self.ctx, i)
    }
}

/// The identity monad morphism `S → S`, applied to an element of `SC`.
pub fn monad_morphism(p: &Poly) -> Poly {
    p.clone()
}

fn outer_ctx(n: usize, field: Field) -> Ctx {
    PolyContext::new((1..=n).map(|j| format!("X{j}")), field, MonomialOrder::DegRevLex).expect("distinct names")
}

/// An element of `S(SC)`: a polynomial `body` in outer variables
/// `X₁..X_k`, where `X_j` stands for the element `tags[j]` of `SC`.
#[derive(Clone, Debug, PartialEq)]
pub struct OuterPoly {
    base: Ctx,
    tags: Vec<Poly>,
    body: Poly,
}

impl OuterPoly {
    pub fn new(base: &Ctx, tags: Vec<Poly>, body: Poly) -> Result<Self> {
        if body.ctx().nvars() != tags.len() {
            return Err(Error::Arity { expected: tags.len(), got: body.ctx().nvars() });
        }
        if body.field() != base.field() {
            return Err(Error::context("outer body and tags over different fields"));
        }
        for (j, t) in tags.iter().enumerate() {
            if !crate::polyring::same_ctx(t.ctx(), base) {
                return Err(Error::context(format!("tag `{t}` is not over the base context")));
            }
            if tags[..j].contains(t) {
                return Err(Error::context(format!("duplicate tag `{t}`")));
            }
        }
        Ok(OuterPoly { base: base.clone(), tags, body })
    }

    /// Builds an element from a body over `X₁..X_k` and possibly repeated
    /// tags, merging outer variables whose tags coincide.
    pub fn merged(base: &Ctx, tags: Vec<Poly>, body: &Poly) -> Result<Self> {
        let mut distinct: Vec<Poly> = Vec::new();
        let mut slot = Vec::with_capacity(tags.len());
        for t in tags {
            match distinct.iter().position(|d| *d == t) {
                Some(k) => slot.push(k),
                None => {
                    slot.push(distinct.len());
                    distinct.push(t);
                }
            }
        }
        let outer = outer_ctx(distinct.len(), base.field());
        let body = body.embed(&outer, &slot)?;
        Self::new(base, distinct, body)
    }

    /// η_{SC}: `p ↦ X₁` tagged by `p`.
    pub fn eta_outer(p: &Poly) -> Self {
        let outer = outer_ctx(1, p.field());
        OuterPoly { base: p.ctx().clone(), tags: vec![p.clone()], body: Poly::var(&outer, 0).unwrap() }
    }

    /// S(η): `p` with each basis variable `xᵢ` read as the generator tagged `xᵢ`.
    pub fn s_eta(p: &Poly) -> Self {
        let base = p.ctx().clone();
        let outer = outer_ctx(base.nvars(), base.field());
        let positions: Vec<usize> = (0..base.nvars()).collect();
        OuterPoly { tags: Poly::vars(&base), body: p.embed(&outer, &positions).unwrap(), base }
    }

    pub fn base(&self) -> &Ctx {
        &self.base
    }

    pub fn tags(&self) -> &[Poly] {
        &self.tags
    }

    pub fn body(&self) -> &Poly {
        &self.body
    }
}

impl fmt::Display for OuterPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} where ", self.body)?;
        for (j, t) in self.tags.iter().enumerate() {
            if j > 0 {
                f.write_str(", ")?;
            }
            write!(f, "X{} = {}", j + 1, t)?;
        }
        Ok(())
    }
}

/// μ : S²C → SC, substitute tags and normalize.
pub fn mu_flatten(w: &OuterPoly) -> Poly {
    w.body.substitute_in(&w.base, &w.tags).expect("arity checked at construction")
}

/// An element of `S³C`: a polynomial whose variables are tagged by
/// elements of `S²C`.
#[derive(Clone, Debug)]
pub struct OuterPoly2 {
    pub tags: Vec<OuterPoly>,
    pub body: Poly,
}

impl fmt::Display for OuterPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} where ", self.body)?;
        for (j, t) in self.tags.iter().enumerate() {
            if j > 0 {
                f.write_str("; ")?;
            }
            write!(f, "Y{} = [{}]", j + 1, t)?;
        }
        Ok(())
    }
}

/// μ_{SC} : S³C → S²C, flattening the two outer layers.
pub fn mu_outer(w: &OuterPoly2, base: &Ctx) -> Result<OuterPoly> {
    let mut all_tags: Vec<Poly> = Vec::new();
    for inner in &w.tags {
        for t in &inner.tags {
            if !all_tags.contains(t) {
                all_tags.push(t.clone());
            }
        }
    }
    let outer = outer_ctx(all_tags.len(), base.field());
    let mut images = Vec::with_capacity(w.tags.len());
    for inner in &w.tags {
        let slots: Vec<usize> = inner.tags.iter().map(|t| all_tags.iter().position(|a| a == t).unwrap()).collect();
        images.push(inner.body.embed(&outer, &slots)?);
    }
    let body = w.body.substitute_in(&outer, &images)?;
    OuterPoly::new(base, all_tags, body)
}

/// S(μ) : S³C → S²C, flattening inside each tag.
pub fn s_mu(w: &OuterPoly2, base: &Ctx) -> Result<OuterPoly> {
    let tags = w.tags.iter().map(mu_flatten).collect();
    OuterPoly::merged(base, tags, &w.body)
}

/// An element of `SC ⊗ C`, the free `SC`-module on the basis of `C`:
/// one coefficient per basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivingOutput(pub Vec<Poly>);

impl DerivingOutput {
    pub fn components(&self) -> &[Poly] {
        &self.0
    }

    pub fn zero(ctx: &Ctx) -> Self {
        DerivingOutput(vec![Poly::zero(ctx); ctx.nvars()])
    }

    /// `eᵢ = 1 ⊗ xᵢ`.
    pub fn unit(ctx: &Ctx, i: usize) -> Self {
        let mut v = vec![Poly::zero(ctx); ctx.nvars()];
        v[i] = Poly::one(ctx);
        DerivingOutput(v)
    }

    pub fn add(&self, other: &Self) -> Self {
        DerivingOutput(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// The `SC`-module action.
    pub fn scale_by(&self, p: &Poly) -> Self {
        DerivingOutput(self.0.iter().map(|c| p * c).collect())
    }
}

impl fmt::Display for DerivingOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::module::row_string(&self.0))
    }
}

/// d : SC → SC ⊗ C, the gradient.
pub fn deriving_transform(p: &Poly) -> DerivingOutput {
    DerivingOutput(p.gradient())
}

/// (d1): derivatives of constants vanish.
pub fn check_d1(ctx: &Ctx, constants: &[Scalar]) -> Report {
    let mut r = Report::new("d1");
    let zero = DerivingOutput::zero(ctx);
    for c in constants {
        let p = Poly::constant(ctx, c.clone());
        r.check(&p, &deriving_transform(&p), &zero);
    }
    r
}

/// (d2): `d(pq) = p·d(q) + q·d(p)`.
pub fn check_d2(pairs: &[(Poly, Poly)]) -> Report {
    let mut r = Report::new("d2");
    for (p, q) in pairs {
        let lhs = deriving_transform(&(p * q));
        let rhs = deriving_transform(q).scale_by(p).add(&deriving_transform(p).scale_by(q));
        r.check(format!("p = {p}; q = {q}"), &lhs, &rhs);
    }
    r
}

/// (d3): `d(xᵢ) = eᵢ` for every basis vector.
pub fn check_d3(ctx: &Ctx) -> Report {
    let mut r = Report::new("d3");
    for i in 0..ctx.nvars() {
        let x = Poly::var(ctx, i).unwrap();
        r.check(&x, &deriving_transform(&x), &DerivingOutput::unit(ctx, i));
    }
    r
}

/// (d3) on arbitrary vectors of `C`: `d(η(v)) = 1 ⊗ v`, η being linear.
pub fn check_d3_linear(ctx: &Ctx, vectors: &[Vec<Scalar>]) -> Report {
    let mut r = Report::new("d3");
    for v in vectors {
        let n = ctx.nvars();
        let eta_v = Poly::from_terms(
            ctx,
            v.iter().enumerate().map(|(i, c)| (crate::polyring::Monomial::var(n, i), c.clone())),
        );
        let expected = DerivingOutput(v.iter().map(|c| Poly::constant(ctx, c.clone())).collect());
        r.check(&eta_v, &deriving_transform(&eta_v), &expected);
    }
    r
}

/// Right-hand side of the chain rule, `d;(μ⊗d);(m⊗1)`: the gradient of
/// the body in its outer variables, evaluated at the tags, contracted
/// against the gradients of the tags.
pub fn chain_rule_rhs(w: &OuterPoly) -> DerivingOutput {
    let mut acc = DerivingOutput::zero(&w.base);
    for (j, tag) in w.tags.iter().enumerate() {
        let outer_partial = w.body.partial_derivative(j).unwrap();
        let coeff = outer_partial.substitute_in(&w.base, &w.tags).unwrap();
        acc = acc.add(&deriving_transform(tag).scale_by(&coeff));
    }
    acc
}

/// (d4): `μ;d = d;(μ⊗d);(m⊗1)`.
pub fn check_d4(samples: &[OuterPoly]) -> Report {
    let mut r = Report::new("d4");
    for w in samples {
        r.check(w, &deriving_transform(&mu_flatten(w)), &chain_rule_rhs(w));
    }
    r
}

/// Random element of `S²C` with up to three tags.
pub fn random_outer(rng: &mut SampleRng, base: &Ctx, cfg: &SampleConfig) -> OuterPoly {
    let k = rng.gen_range(1..=3usize);
    let tags: Vec<Poly> = (0..k).map(|_| random_poly(rng, base, 2, 3, cfg.coeff_bound)).collect();
    let outer = outer_ctx(k, base.field());
    let body = random_poly(rng, &outer, 3, 4, cfg.coeff_bound);
    OuterPoly::merged(base, tags, &body).expect("well formed")
}

/// Random element of `S³C`.
pub fn random_outer2(rng: &mut SampleRng, base: &Ctx, cfg: &SampleConfig) -> OuterPoly2 {
    let k = rng.gen_range(1..=2usize);
    let tags = (0..k).map(|_| random_outer(rng, base, cfg)).collect();
    let outer = PolyContext::new((1..=k).map(|j| format!("Y{j}")), base.field(), MonomialOrder::DegRevLex).unwrap();
    OuterPoly2 { tags, body: random_poly(rng, &outer, 2, 3, cfg.coeff_bound) }
}

/// Runs (d1)–(d4) on `cfg.samples` random inputs over `ctx`.
pub fn check_codifferential_axioms(ctx: &Ctx, cfg: &SampleConfig) -> Vec<Report> {
    let mut g = rng(cfg.seed);
    let n = cfg.samples;
    let constants: Vec<Scalar> =
        (0..n).map(|_| ctx.field().from_i64(g.gen_range(-cfg.coeff_bound..=cfg.coeff_bound))).collect();
    let pairs: Vec<(Poly, Poly)> = (0..n)
        .map(|_| {
            let p = random_poly(&mut g, ctx, cfg.max_degree, 5, cfg.coeff_bound);
            let q = random_poly(&mut g, ctx, cfg.max_degree, 5, cfg.coeff_bound);
            (p, q)
        })
        .collect();
    let outers: Vec<OuterPoly> = (0..n).map(|_| random_outer(&mut g, ctx, cfg)).collect();
    let vectors: Vec<Vec<Scalar>> = (0..n)
        .map(|_| (0..ctx.nvars()).map(|_| ctx.field().from_i64(g.gen_range(-cfg.coeff_bound..=cfg.coeff_bound))).collect())
        .collect();
    vec![
        check_d1(ctx, &constants).with_seed(cfg.seed),
        check_d2(&pairs).with_seed(cfg.seed),
        check_d3_linear(ctx, &vectors).with_seed(cfg.seed),
        check_d4(&outers).with_seed(cfg.seed),
    ]
}

/// Linear map `C → D` as a `dim D × dim C` matrix over the ground field.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    pub source: Ctx,
    pub target: Ctx,
    pub matrix: Vec<Vec<Scalar>>,
}

impl LinearMap {
    pub fn new(source: &Ctx, target: &Ctx, matrix: Vec<Vec<Scalar>>) -> Result<Self> {
        let (rows, cols) = (target.nvars(), source.nvars());
        let shape_ok = matrix.len() == rows && matrix.iter().all(|r| r.len() == cols);
        if !shape_ok {
            return Err(Error::Shape {
                expected: format!("{rows}x{cols}"),
                got: format!("{}x{}", matrix.len(), matrix.first().map_or(0, Vec::len)),
            });
        }
        Ok(LinearMap { source: source.clone(), target: target.clone(), matrix })
    }

    /// Image of basis vector `xᵢ` as a linear polynomial over `D`.
    pub fn image_of_basis(&self, i: usize) -> Poly {
        let terms = self.matrix.iter().enumerate().map(|(j, row)| {
            (crate::polyring::Monomial::var(self.target.nvars(), j), row[i].clone())
        });
        Poly::from_terms(&self.target, terms)
    }

    /// `Sf : SC → SD`.
    pub fn s_map(&self, p: &Poly) -> Poly {
        let images: Vec<Poly> = (0..self.source.nvars()).map(|i| self.image_of_basis(i)).collect();
        p.substitute_in(&self.target, &images).expect("arity")
    }

    /// `Sf ⊗ f : SC ⊗ C → SD ⊗ D`.
    pub fn s_tensor(&self, v: &DerivingOutput) -> DerivingOutput {
        let mut out = DerivingOutput::zero(&self.target);
        for (i, c) in v.0.iter().enumerate() {
            let sc = self.s_map(c);
            for (j, row) in self.matrix.iter().enumerate() {
                out.0[j] = &out.0[j] + &sc.scale(&row[i]);
            }
        }
        out
    }
}

/// Naturality of d: `Sf;d_{SD} = d_{SC};(Sf ⊗ f)`.
pub fn check_naturality(f: &LinearMap, samples: &[Poly]) -> Result<Report> {
    let mut r = Report::new("naturality");
    for p in samples {
        if !crate::polyring::same_ctx(p.ctx(), &f.source) {
            return Err(Error::context(format!("sample `{p}` is not over the source of f")));
        }
        let lhs = deriving_transform(&f.s_map(p));
        let rhs = f.s_tensor(&deriving_transform(p));
        r.check(p, &lhs, &rhs);
    }
    Ok(r)
}

/// Monad laws for S on random nests.
pub fn check_monad_laws(ctx: &Ctx, cfg: &SampleConfig) -> Vec<Report> {
    let mut g = rng(cfg.seed ^ 0x6d6f6e6164);
    let mut left = Report::new("monad_left_unit");
    let mut right = Report::new("monad_right_unit");
    let mut assoc = Report::new("monad_associativity");
    for _ in 0..cfg.samples {
        let p = random_poly(&mut g, ctx, cfg.max_degree, 5, cfg.coeff_bound);
        left.check(&p, &mu_flatten(&OuterPoly::eta_outer(&p)), &p);
        right.check(&p, &mu_flatten(&OuterPoly::s_eta(&p)), &p);
        let w = random_outer2(&mut g, ctx, cfg);
        let via_outer = mu_flatten(&mu_outer(&w, ctx).expect("well formed"));
        let via_inner = mu_flatten(&s_mu(&w, ctx).expect("well formed"));
        assoc.check(&w, &via_outer, &via_inner);
    }
    vec![left.with_seed(cfg.seed), right.with_seed(cfg.seed), assoc.with_seed(cfg.seed)]
}

/// The converse characterization at `T = S`, `λ = id`: condition (a)
/// (`λ;d = d;(λ⊗1)`), condition (b) (the chain rule), and the axioms
/// (d1)–(d3) they entail, all on the same samples.
pub fn check_alt_characterization(ctx: &Ctx, cfg: &SampleConfig) -> Vec<Report> {
    let mut g = rng(cfg.seed ^ 0x616c74);
    let mut a = Report::new("alt_a_monad_morphism_square");
    let polys: Vec<Poly> =
        (0..cfg.samples).map(|_| random_poly(&mut g, ctx, cfg.max_degree, 5, cfg.coeff_bound)).collect();
    for p in &polys {
        let lhs = deriving_transform(&monad_morphism(p));
        let rhs = DerivingOutput(deriving_transform(p).0.iter().map(monad_morphism).collect());
        a.check(p, &lhs, &rhs);
    }
    let outers: Vec<OuterPoly> = (0..cfg.samples).map(|_| random_outer(&mut g, ctx, cfg)).collect();
    let mut b = check_d4(&outers);
    b.axiom = "alt_b_chain_rule".into();
    let constants: Vec<Scalar> = polys.iter().map(|p| p.terms().last().map_or(ctx.field().zero(), |t| t.1.clone())).collect();
    let mut d1 = check_d1(ctx, &constants);
    d1.axiom = "alt_d1".into();
    let pairs: Vec<(Poly, Poly)> = polys.chunks(2).filter(|c| c.len() == 2).map(|c| (c[0].clone(), c[1].clone())).collect();
    let mut d2 = check_d2(&pairs);
    d2.axiom = "alt_d2".into();
    let mut d3 = check_d3(ctx);
    d3.axiom = "alt_d3".into();
    [a, b, d1, d2, d3].into_iter().map(|r| r.with_seed(cfg.seed)).collect()
}

/// Random linear maps for the naturality suite: identity, zero, a swap
/// and random integer matrices into a two-dimensional target.
pub fn naturality_maps(ctx: &Ctx, g: &mut SampleRng, random: usize) -> Result<Vec<LinearMap>> {
    let field = ctx.field();
    let n = ctx.nvars();
    let mut maps = Vec::new();
    let unit = |i: usize, j: usize| if i == j { field.one() } else { field.zero() };
    maps.push(LinearMap::new(ctx, ctx, (0..n).map(|j| (0..n).map(|i| unit(i, j)).collect()).collect())?);
    maps.push(LinearMap::new(ctx, ctx, vec![vec![field.zero(); n]; n])?);
    if n >= 2 {
        let swap = |j: usize| match j {
            0 => 1,
            1 => 0,
            j => j,
        };
        maps.push(LinearMap::new(ctx, ctx, (0..n).map(|j| (0..n).map(|i| unit(i, swap(j))).collect()).collect())?);
    }
    let target = PolyContext::new(["u", "v"], field, ctx.order())?;
    for _ in 0..random {
        let m = (0..2).map(|_| (0..n).map(|_| field.from_i64(g.gen_range(-3..=3))).collect()).collect();
        maps.push(LinearMap::new(ctx, &target, m)?);
    }
    Ok(maps)
}

/// (d1)–(d4) plus naturality on random linear maps.
pub fn check_all_codifferential(ctx: &Ctx, cfg: &SampleConfig) -> Result<Vec<Report>> {
    let mut reports = check_codifferential_axioms(ctx, cfg);
    let mut g = rng(cfg.seed ^ 0x6e6174);
    let maps = naturality_maps(ctx, &mut g, 5)?;
    let mut nat = Report::new("naturality");
    for _ in 0..cfg.samples {
        let p = random_poly(&mut g, ctx, cfg.max_degree, 5, cfg.coeff_bound);
        let f = &maps[g.gen_range(0..maps.len())];
        let r = check_naturality(f, std::slice::from_ref(&p))?;
        nat.samples += r.samples;
        for fl in r.failures {
            nat.fail(fl.input, fl.lhs, fl.rhs);
        }
    }
    reports.push(nat.with_seed(cfg.seed));
    Ok(reports)
}
