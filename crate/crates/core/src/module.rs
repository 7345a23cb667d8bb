//! Finitely presented modules over presented algebras, module maps,
//! direct sums and restriction of scalars.
//!
//! A module `M = A^r / R` is stored over the polynomial ring of `A`: the
//! relation submodule carries the user rows together with `f·eᵢ` for every
//! basis element `f` of `A`'s ideal, so module normal forms are normal
//! forms over `A` itself.
//!
//! Restriction of scalars is intensional: a [`RestrictedModule`] is a
//! carrier module over `B` plus an algebra map `A → B` through which `A`
//! acts. An ordinary module is its restriction along the identity.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{same_algebra, Algebra, AlgebraElement, AlgebraMap};
use crate::error::{Error, Result};
use crate::groebner::{Ideal, SubmoduleBasis};
use crate::polyring::{Poly, PolyContext};

pub type Module = Arc<ModulePresentation>;

#[derive(Debug)]
pub struct ModulePresentation {
    name: String,
    owner: Algebra,
    rank: usize,
    relations: Vec<Vec<Poly>>,
    basis: SubmoduleBasis,
}

impl ModulePresentation {
    /// `A^rank / (rows)`; rows are reduced modulo `A`'s ideal first.
    pub fn new(name: impl Into<String>, owner: &Algebra, rank: usize, rows: Vec<Vec<Poly>>) -> Result<Module> {
        let ideal = owner.relations();
        let mut relations = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != rank {
                return Err(Error::Rank { expected: rank, got: row.len() });
            }
            relations.push(row.iter().map(|p| ideal.normal_form(p)).collect::<Result<Vec<_>>>()?);
        }
        let ctx = owner.ctx();
        let mut all = relations.clone();
        for g in ideal.basis() {
            for i in 0..rank {
                let mut row = vec![Poly::zero(ctx); rank];
                row[i] = g.clone();
                all.push(row);
            }
        }
        let basis = SubmoduleBasis::new(ctx, rank, all)?;
        Ok(Arc::new(ModulePresentation { name: name.into(), owner: owner.clone(), rank, relations, basis }))
    }

    pub fn free(name: impl Into<String>, owner: &Algebra, rank: usize) -> Module {
        Self::new(name, owner, rank, Vec::new()).expect("free module")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn owner(&self) -> &Algebra {
        &self.owner
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The user-supplied relation rows, reduced modulo the algebra.
    pub fn relations(&self) -> &[Vec<Poly>] {
        &self.relations
    }

    pub fn basis(&self) -> &SubmoduleBasis {
        &self.basis
    }

    /// True when every generator is zero.
    pub fn is_zero_module(&self) -> bool {
        let ctx = self.owner.ctx();
        (0..self.rank).all(|i| {
            let mut e = vec![Poly::zero(ctx); self.rank];
            e[i] = Poly::one(ctx);
            self.basis.contains(&e).expect("rank matches")
        })
    }

    pub fn element(self: &Arc<Self>, rep: Vec<Poly>) -> Result<ModuleElement> {
        let rep = self.basis.normal_form(&rep)?;
        Ok(ModuleElement { owner: self.clone(), rep })
    }

    pub fn zero(self: &Arc<Self>) -> ModuleElement {
        ModuleElement { owner: self.clone(), rep: vec![Poly::zero(self.owner.ctx()); self.rank] }
    }

    pub fn generator(self: &Arc<Self>, i: usize) -> ModuleElement {
        let mut rep = vec![Poly::zero(self.owner.ctx()); self.rank];
        rep[i] = Poly::one(self.owner.ctx());
        self.element(rep).expect("generator")
    }

    pub fn generators(self: &Arc<Self>) -> Vec<ModuleElement> {
        (0..self.rank).map(|i| self.generator(i)).collect()
    }
}

pub fn same_module(a: &Module, b: &Module) -> bool {
    Arc::ptr_eq(a, b)
        || (a.rank == b.rank && same_algebra(&a.owner, &b.owner) && a.basis.basis() == b.basis.basis())
}

fn check_same(a: &Module, b: &Module) -> Result<()> {
    if same_module(a, b) {
        Ok(())
    } else {
        Err(Error::context(format!("elements of modules `{}` and `{}`", a.name, b.name)))
    }
}

/// An element of a presented module, stored in module normal form.
#[derive(Clone, Debug)]
pub struct ModuleElement {
    owner: Module,
    rep: Vec<Poly>,
}

impl PartialEq for ModuleElement {
    fn eq(&self, other: &Self) -> bool {
        same_module(&self.owner, &other.owner) && self.rep == other.rep
    }
}

impl Eq for ModuleElement {}

impl ModuleElement {
    pub fn owner(&self) -> &Module {
        &self.owner
    }

    pub fn rep(&self) -> &[Poly] {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.iter().all(Poly::is_zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same(&self.owner, &other.owner)?;
        let rep = self.rep.iter().zip(&other.rep).map(|(a, b)| a + b).collect();
        // normal forms are closed under addition
        Ok(ModuleElement { owner: self.owner.clone(), rep })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        ModuleElement { owner: self.owner.clone(), rep: self.rep.iter().map(|p| -p).collect() }
    }

    pub fn scale(&self, c: &crate::polyring::Scalar) -> Self {
        ModuleElement { owner: self.owner.clone(), rep: self.rep.iter().map(|p| p.scale(c)).collect() }
    }

    /// `a • self`.
    pub fn act(&self, a: &AlgebraElement) -> Result<Self> {
        action(a, self)
    }
}

impl fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, p) in self.rep.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// `a • m`: componentwise product, then module normal form.
pub fn action(a: &AlgebraElement, m: &ModuleElement) -> Result<ModuleElement> {
    if !same_algebra(a.owner(), &m.owner.owner) {
        return Err(Error::context(format!(
            "`{}` does not act on module `{}` over `{}`",
            a.owner().name(),
            m.owner.name,
            m.owner.owner.name()
        )));
    }
    let rep = m.rep.iter().map(|p| a.rep() * p).collect();
    m.owner.element(rep)
}

/// A carrier module `N` over `B` regarded as a module over `A` through an
/// algebra map `A → B`: `a • n = along(a) • n`.
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictedModule {
    carrier: Module,
    along: AlgebraMap,
}

impl PartialEq for ModulePresentation {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank
            && same_algebra(&self.owner, &other.owner)
            && self.basis.basis() == other.basis.basis()
    }
}

impl RestrictedModule {
    /// `M` over its own algebra.
    pub fn plain(m: &Module) -> Self {
        RestrictedModule { carrier: m.clone(), along: AlgebraMap::identity(&m.owner) }
    }

    pub fn new(carrier: &Module, along: AlgebraMap) -> Result<Self> {
        if !same_algebra(along.target(), &carrier.owner) {
            return Err(Error::context(format!(
                "restriction map lands in `{}`, module `{}` is over `{}`",
                along.target().name(),
                carrier.name,
                carrier.owner.name()
            )));
        }
        Ok(RestrictedModule { carrier: carrier.clone(), along })
    }

    pub fn carrier(&self) -> &Module {
        &self.carrier
    }

    pub fn along(&self) -> &AlgebraMap {
        &self.along
    }

    /// The algebra acting on this module.
    pub fn base(&self) -> &Algebra {
        self.along.source()
    }

    pub fn is_plain(&self) -> bool {
        self.along.is_identity()
    }

    /// `a • n` with `a` in the base algebra and `n` in the carrier.
    pub fn act(&self, a: &AlgebraElement, n: &ModuleElement) -> Result<ModuleElement> {
        if !same_module(&self.carrier, &n.owner) {
            return Err(Error::context(format!("element is not in `{}`", self.carrier.name)));
        }
        action(&self.along.apply(a)?, n)
    }

    /// Further restriction along `g : A' → A`.
    pub fn restrict(&self, g: &AlgebraMap) -> Result<RestrictedModule> {
        Ok(RestrictedModule { carrier: self.carrier.clone(), along: g.then(&self.along)? })
    }

    /// `Σ along(ν(coeffs[i])) • elems[i]`, coefficients as polynomials over
    /// the base algebra's variables.
    pub fn combine(&self, coeffs: &[Poly], elems: &[ModuleElement]) -> Result<ModuleElement> {
        if coeffs.len() != elems.len() {
            return Err(Error::Arity { expected: elems.len(), got: coeffs.len() });
        }
        let mut acc = self.carrier.zero();
        for (c, e) in coeffs.iter().zip(elems) {
            if c.is_zero() {
                continue;
            }
            let a = self.along.apply_poly(c)?;
            acc = acc.add(&action(&a, e)?)?;
        }
        Ok(acc)
    }
}

/// Restriction of scalars of `n` along `g`, in intensional form.
pub fn restrict_scalars(g: &AlgebraMap, n: &Module) -> Result<RestrictedModule> {
    RestrictedModule::plain(n).restrict(g)
}

/// Restriction of scalars re-presented over the source algebra. Needs a
/// section: polynomials `s_j` over `A`'s variables with `g(s_j) = y_j` for
/// every generator `y_j` of `B` (so `g` is surjective). The result is
/// `A^r / (lifted relations + ker(g)·A^r)`, with the kernel computed by
/// lexicographic elimination.
pub fn restrict_scalars_presented(g: &AlgebraMap, n: &Module, section: &[Poly]) -> Result<Module> {
    let a = g.source();
    let b = g.target();
    if !same_algebra(b, &n.owner) {
        return Err(Error::context(format!("`{}` is not a module over `{}`", n.name, b.name())));
    }
    if section.len() != b.nvars() {
        return Err(Error::Arity { expected: b.nvars(), got: section.len() });
    }
    for (j, s) in section.iter().enumerate() {
        let img = g.apply_poly(s)?;
        if img != AlgebraElement::var(b, j)? {
            return Err(Error::RelationViolation {
                relation: format!("g(s_{j}) = {}", b.ctx().vars()[j]),
                image: img.to_string(),
            });
        }
    }
    let kernel = kernel_of(g)?;
    let ctx = a.ctx();
    let mut rows = Vec::new();
    for row in n.relations() {
        rows.push(row.iter().map(|p| p.substitute_in(ctx, section)).collect::<Result<Vec<_>>>()?);
    }
    for h in &kernel {
        for i in 0..n.rank {
            let mut row = vec![Poly::zero(ctx); n.rank];
            row[i] = h.clone();
            rows.push(row);
        }
    }
    ModulePresentation::new(format!("{}_{}", n.name, a.name()), a, n.rank, rows)
}

/// Generators of `ker(k[x] → B)` for `g : A → B`.
fn kernel_of(g: &AlgebraMap) -> Result<Vec<Poly>> {
    let a = g.source();
    let b = g.target();
    let (na, nb) = (a.nvars(), b.nvars());
    let names = (0..nb).map(|j| format!("__b{j}")).chain((0..na).map(|i| format!("__a{i}")));
    let elim = PolyContext::new(names, a.field(), crate::polyring::MonomialOrder::Lex)?;
    let b_pos: Vec<usize> = (0..nb).collect();
    let mut gens = Vec::new();
    for f in b.relations().basis() {
        gens.push(f.embed(&elim, &b_pos)?);
    }
    for (i, im) in g.images().iter().enumerate() {
        let xi = Poly::var(&elim, nb + i)?;
        gens.push(&xi - &im.rep().embed(&elim, &b_pos)?);
    }
    let ideal = Ideal::new(&elim, gens)?;
    let back: Vec<Poly> = {
        let mut imgs = vec![Poly::zero(a.ctx()); nb];
        imgs.extend(Poly::vars(a.ctx()));
        imgs
    };
    let mut out = Vec::new();
    for h in ideal.basis() {
        let only_a = h.terms().iter().all(|(m, _)| m.exponents()[..nb].iter().all(|&e| e == 0));
        if only_a {
            out.push(h.substitute_in(a.ctx(), &back)?);
        }
    }
    Ok(out)
}

/// A validated module map `M → N_A` given by generator images in the
/// carrier of `N_A`. Validation: every relation row of `M` maps to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleMap {
    source: Module,
    target: RestrictedModule,
    images: Vec<ModuleElement>,
}

impl ModuleMap {
    pub fn new(source: &Module, target: &RestrictedModule, images: Vec<ModuleElement>) -> Result<Self> {
        if images.len() != source.rank {
            return Err(Error::Arity { expected: source.rank, got: images.len() });
        }
        if !same_algebra(&source.owner, target.base()) {
            return Err(Error::context(format!(
                "map from a module over `{}` into a module over `{}`",
                source.owner.name(),
                target.base().name()
            )));
        }
        for im in &images {
            check_same(&target.carrier, &im.owner)?;
        }
        let map = ModuleMap { source: source.clone(), target: target.clone(), images };
        for row in &source.relations {
            let v = target.combine(row, &map.images)?;
            if !v.is_zero() {
                return Err(Error::RelationViolation { relation: row_string(row), image: v.to_string() });
            }
        }
        Ok(map)
    }

    /// A map between modules over the same algebra.
    pub fn plain(source: &Module, target: &Module, images: Vec<ModuleElement>) -> Result<Self> {
        Self::new(source, &RestrictedModule::plain(target), images)
    }

    pub fn identity(m: &Module) -> Self {
        ModuleMap { source: m.clone(), target: RestrictedModule::plain(m), images: m.generators() }
    }

    pub fn zero(source: &Module, target: &RestrictedModule) -> Self {
        let images = vec![target.carrier.zero(); source.rank];
        ModuleMap { source: source.clone(), target: target.clone(), images }
    }

    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &RestrictedModule {
        &self.target
    }

    pub fn images(&self) -> &[ModuleElement] {
        &self.images
    }

    pub fn apply(&self, m: &ModuleElement) -> Result<ModuleElement> {
        check_same(&self.source, &m.owner)?;
        self.target.combine(&m.rep, &self.images)
    }

    /// `self` followed by `next`; `next` must start at this map's carrier.
    pub fn then(&self, next: &ModuleMap) -> Result<ModuleMap> {
        check_same(&self.target.carrier, &next.source)?;
        let images = self.images.iter().map(|m| next.apply(m)).collect::<Result<Vec<_>>>()?;
        let target = RestrictedModule {
            carrier: next.target.carrier.clone(),
            along: self.target.along.then(&next.target.along)?,
        };
        Ok(ModuleMap { source: self.source.clone(), target, images })
    }
}

pub(crate) fn row_string(row: &[Poly]) -> String {
    let parts: Vec<String> = row.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// `M ⊕ N` with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: Module,
    pub inj1: ModuleMap,
    pub inj2: ModuleMap,
    pub proj1: ModuleMap,
    pub proj2: ModuleMap,
}

pub fn direct_sum(m: &Module, n: &Module) -> Result<DirectSum> {
    if !same_algebra(&m.owner, &n.owner) {
        return Err(Error::context(format!(
            "direct sum of modules over `{}` and `{}`",
            m.owner.name(),
            n.owner.name()
        )));
    }
    let ctx = m.owner.ctx();
    let (r, s) = (m.rank, n.rank);
    let zero = Poly::zero(ctx);
    let mut rows = Vec::new();
    for row in &m.relations {
        rows.push(row.iter().cloned().chain(std::iter::repeat(zero.clone()).take(s)).collect());
    }
    for row in &n.relations {
        rows.push(std::iter::repeat(zero.clone()).take(r).chain(row.iter().cloned()).collect());
    }
    let sum = ModulePresentation::new(format!("{}+{}", m.name, n.name), &m.owner, r + s, rows)?;
    let inj1 = ModuleMap::plain(m, &sum, (0..r).map(|i| sum.generator(i)).collect())?;
    let inj2 = ModuleMap::plain(n, &sum, (0..s).map(|i| sum.generator(r + i)).collect())?;
    let proj1 = ModuleMap::plain(
        &sum,
        m,
        (0..r).map(|i| m.generator(i)).chain((0..s).map(|_| m.zero())).collect(),
    )?;
    let proj2 = ModuleMap::plain(
        &sum,
        n,
        (0..r).map(|_| n.zero()).chain((0..s).map(|i| n.generator(i))).collect(),
    )?;
    Ok(DirectSum { module: sum, inj1, inj2, proj1, proj2 })
}

/// The zero module over `a`.
pub fn zero_module(a: &Algebra) -> Module {
    ModulePresentation::free("0", a, 0)
}

/// `A / (generators)` as a rank-one module.
pub fn cyclic_quotient(name: impl Into<String>, a: &Algebra, generators: &[Poly]) -> Result<Module> {
    ModulePresentation::new(name, a, 1, generators.iter().map(|g| vec![g.clone()]).collect())
}

impl fmt::Display for ModulePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "module {} over {} {{ rank: {};", self.name, self.owner.name(), self.rank)?;
        if !self.relations.is_empty() {
            let rows: Vec<String> = self.relations.iter().map(|r| row_string(r)).collect();
            write!(f, " relations: {};", rows.join(", "))?;
        }
        f.write_str(" }")
    }
}
