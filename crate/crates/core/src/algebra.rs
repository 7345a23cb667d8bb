//! Finitely presented commutative algebras `k[x₁..xₙ]/(f₁..fₘ)`, the
//! concrete algebras for the symmetric-algebra monad, with their maps.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::module::ModuleElement;
use crate::polyring::{same_ctx, Ctx, Field, Poly, RingOps, Scalar};

pub type Algebra = Arc<AlgebraPresentation>;

/// `k[vars]/relations` with the relations held as a reduced Gröbner basis.
#[derive(Debug)]
pub struct AlgebraPresentation {
    name: String,
    ctx: Ctx,
    relations: Ideal,
}

impl AlgebraPresentation {
    pub fn new(name: impl Into<String>, ctx: &Ctx, relations: Vec<Poly>) -> Result<Algebra> {
        let relations = Ideal::new(ctx, relations)?;
        Ok(Arc::new(AlgebraPresentation { name: name.into(), ctx: ctx.clone(), relations }))
    }

    pub fn free(name: impl Into<String>, ctx: &Ctx) -> Algebra {
        Arc::new(AlgebraPresentation {
            name: name.into(),
            ctx: ctx.clone(),
            relations: Ideal::zero(ctx),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn field(&self) -> Field {
        self.ctx.field()
    }

    pub fn nvars(&self) -> usize {
        self.ctx.nvars()
    }

    pub fn relations(&self) -> &Ideal {
        &self.relations
    }

    /// The zero algebra, `1 ∈ I`.
    pub fn is_zero_algebra(&self) -> bool {
        self.relations.is_unit()
    }

    pub fn is_free(&self) -> bool {
        self.relations.is_zero()
    }
}

impl fmt::Display for AlgebraPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "algebra {} {{ vars: {};", self.name, self.ctx.vars().join(", "))?;
        let rels = self.relations.generators();
        if !rels.is_empty() {
            let rels: Vec<String> = rels.iter().map(ToString::to_string).collect();
            write!(f, " relations: {};", rels.join(", "))?;
        }
        f.write_str(" }")
    }
}

/// Structural equality of presentations: same context, same reduced basis.
pub fn same_algebra(a: &Algebra, b: &Algebra) -> bool {
    Arc::ptr_eq(a, b) || (same_ctx(&a.ctx, &b.ctx) && a.relations.basis() == b.relations.basis())
}

impl PartialEq for AlgebraPresentation {
    fn eq(&self, other: &Self) -> bool {
        same_ctx(&self.ctx, &other.ctx) && self.relations.basis() == other.relations.basis()
    }
}

fn check_same(a: &Algebra, b: &Algebra) -> Result<()> {
    if same_algebra(a, b) {
        Ok(())
    } else {
        Err(Error::context(format!("elements of `{}` and `{}`", a.name, b.name)))
    }
}

/// ν : k[x] → A, evaluate-then-reduce.
pub fn structure_map_nu(a: &Algebra, p: &Poly) -> Result<AlgebraElement> {
    let rep = a.relations.normal_form(p)?;
    Ok(AlgebraElement { owner: a.clone(), rep })
}

/// An element of `A`, stored by its normal form.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    owner: Algebra,
    rep: Poly,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.owner, &other.owner) && self.rep == other.rep
    }
}

impl Eq for AlgebraElement {}

impl AlgebraElement {
    pub fn owner(&self) -> &Algebra {
        &self.owner
    }

    pub fn rep(&self) -> &Poly {
        &self.rep
    }

    pub fn zero(a: &Algebra) -> Self {
        AlgebraElement { owner: a.clone(), rep: Poly::zero(&a.ctx) }
    }

    pub fn one(a: &Algebra) -> Self {
        structure_map_nu(a, &Poly::one(&a.ctx)).expect("own context")
    }

    pub fn from_scalar(a: &Algebra, c: Scalar) -> Self {
        structure_map_nu(a, &Poly::constant(&a.ctx, c)).expect("own context")
    }

    pub fn from_i64(a: &Algebra, n: i64) -> Self {
        Self::from_scalar(a, a.field().from_i64(n))
    }

    pub fn var(a: &Algebra, i: usize) -> Result<Self> {
        structure_map_nu(a, &Poly::var(&a.ctx, i)?)
    }

    pub fn vars(a: &Algebra) -> Vec<Self> {
        (0..a.nvars()).map(|i| Self::var(a, i).unwrap()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same(&self.owner, &other.owner)?;
        // normal forms are closed under addition
        Ok(AlgebraElement { owner: self.owner.clone(), rep: &self.rep + &other.rep })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same(&self.owner, &other.owner)?;
        Ok(AlgebraElement { owner: self.owner.clone(), rep: &self.rep - &other.rep })
    }

    pub fn neg(&self) -> Self {
        AlgebraElement { owner: self.owner.clone(), rep: -&self.rep }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        AlgebraElement { owner: self.owner.clone(), rep: self.rep.scale(c) }
    }

    /// Quotient-ring multiplication: multiply representatives, reduce.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_same(&self.owner, &other.owner)?;
        Ok(AlgebraElement {
            owner: self.owner.clone(),
            rep: self.owner.relations.reduce_unchecked(&(&self.rep * &other.rep)),
        })
    }

    /// Multiplication induced by the algebra structure of the monad:
    /// embed both factors as degree-one generators of a fresh polynomial
    /// ring over `A` (η ⊗ η), multiply there (m), then evaluate back into
    /// `A` with ν.
    pub fn mul_from_t_structure(&self, other: &Self) -> Result<Self> {
        check_same(&self.owner, &other.owner)?;
        let outer = crate::polyring::PolyContext::new(
            ["a", "b"],
            self.owner.field(),
            self.owner.ctx.order(),
        )?;
        let ea = Poly::var(&outer, 0)?;
        let eb = Poly::var(&outer, 1)?;
        let product = &ea * &eb;
        product.eval_generic(&AlgebraOps(self.owner.clone()), &[self.clone(), other.clone()])
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.owner);
        for _ in 0..e {
            acc = acc.mul(self).expect("same owner");
        }
        acc
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.rep.fmt(f)
    }
}

/// `A` as a ring carrier for [`Poly::eval_generic`].
pub struct AlgebraOps(pub Algebra);

impl RingOps for AlgebraOps {
    type Elem = AlgebraElement;
    fn zero(&self) -> AlgebraElement {
        AlgebraElement::zero(&self.0)
    }
    fn one(&self) -> AlgebraElement {
        AlgebraElement::one(&self.0)
    }
    fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        AlgebraElement { owner: self.0.clone(), rep: &a.rep + &b.rep }
    }
    fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        AlgebraElement { owner: self.0.clone(), rep: self.0.relations.reduce_unchecked(&(&a.rep * &b.rep)) }
    }
    fn scalar(&self, c: &Scalar) -> AlgebraElement {
        AlgebraElement::from_scalar(&self.0, c.clone())
    }
}

/// A validated algebra homomorphism, given by the images of the source
/// generators. Construction fails unless every source relation maps to 0.
#[derive(Clone, Debug)]
pub struct AlgebraMap {
    source: Algebra,
    target: Algebra,
    images: Vec<AlgebraElement>,
}

impl PartialEq for AlgebraMap {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.source, &other.source)
            && same_algebra(&self.target, &other.target)
            && self.images == other.images
    }
}

impl AlgebraMap {
    pub fn new(source: &Algebra, target: &Algebra, images: Vec<AlgebraElement>) -> Result<Self> {
        check_algebra_map(source, target, images)
    }

    /// Images given as polynomials over the target's variables.
    pub fn from_polys(source: &Algebra, target: &Algebra, images: &[Poly]) -> Result<Self> {
        let images = images
            .iter()
            .map(|p| structure_map_nu(target, p))
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, images)
    }

    pub fn identity(a: &Algebra) -> Self {
        AlgebraMap { source: a.clone(), target: a.clone(), images: AlgebraElement::vars(a) }
    }

    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn target(&self) -> &Algebra {
        &self.target
    }

    pub fn images(&self) -> &[AlgebraElement] {
        &self.images
    }

    /// Image of an arbitrary (unreduced) polynomial over the source variables.
    pub fn apply_poly(&self, p: &Poly) -> Result<AlgebraElement> {
        if !same_ctx(p.ctx(), &self.source.ctx) {
            return Err(Error::context(format!("`{p}` is not over `{}`", self.source.name)));
        }
        p.eval_generic(&AlgebraOps(self.target.clone()), &self.images)
    }

    pub fn apply(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        check_same(&self.source, &a.owner)?;
        self.apply_poly(&a.rep)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &AlgebraMap) -> Result<AlgebraMap> {
        check_same(&self.target, &next.source)?;
        let images = self.images.iter().map(|a| next.apply(a)).collect::<Result<Vec<_>>>()?;
        Ok(AlgebraMap { source: self.source.clone(), target: next.target.clone(), images })
    }

    pub fn is_identity(&self) -> bool {
        same_algebra(&self.source, &self.target) && self.images == AlgebraElement::vars(&self.source)
    }
}

/// Accepts the candidate iff every source relation maps to zero.
pub fn check_algebra_map(source: &Algebra, target: &Algebra, images: Vec<AlgebraElement>) -> Result<AlgebraMap> {
    if images.len() != source.nvars() {
        return Err(Error::Arity { expected: source.nvars(), got: images.len() });
    }
    if source.field() != target.field() {
        return Err(Error::context(format!(
            "map from `{}` over {} to `{}` over {}",
            source.name,
            source.field(),
            target.name,
            target.field()
        )));
    }
    for im in &images {
        check_same(target, &im.owner)?;
    }
    let ops = AlgebraOps(target.clone());
    let rels = source.relations.generators().iter().chain(source.relations.basis());
    for f in rels {
        let v = f.eval_generic(&ops, &images)?;
        if !v.is_zero() {
            return Err(Error::RelationViolation { relation: f.to_string(), image: v.to_string() });
        }
    }
    Ok(AlgebraMap { source: source.clone(), target: target.clone(), images })
}

/// `(a, m)·(a', m') = (aa', a•m' + a'•m)` on `A ⊕ M`.
pub fn squarezero_product(
    lhs: &(AlgebraElement, ModuleElement),
    rhs: &(AlgebraElement, ModuleElement),
) -> Result<(AlgebraElement, ModuleElement)> {
    let (a, m) = lhs;
    let (b, n) = rhs;
    let first = a.mul(b)?;
    let second = crate::module::action(a, n)?.add(&crate::module::action(b, m)?)?;
    Ok((first, second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::ModulePresentation;
    use crate::polyring::{parse_poly, MonomialOrder, PolyContext};

    fn ctx(vars: &[&str]) -> Ctx {
        PolyContext::new(vars.iter().copied(), Field::Rationals, MonomialOrder::DegRevLex).unwrap()
    }

    fn alg(vars: &[&str], rels: &[&str]) -> Algebra {
        let c = ctx(vars);
        let rels = rels.iter().map(|r| parse_poly(&c, r).unwrap()).collect();
        AlgebraPresentation::new("A", &c, rels).unwrap()
    }

    fn el(a: &Algebra, s: &str) -> AlgebraElement {
        structure_map_nu(a, &parse_poly(a.ctx(), s).unwrap()).unwrap()
    }

    #[test]
    fn nu_examples() {
        let a = alg(&["x"], &["x^2"]);
        assert_eq!(el(&a, "x^3 + x"), el(&a, "x"));
        assert_eq!(el(&a, "1"), AlgebraElement::one(&a));
        for f in a.relations().generators() {
            assert!(structure_map_nu(&a, f).unwrap().is_zero());
        }
        let other = ctx(&["y"]);
        assert!(matches!(structure_map_nu(&a, &Poly::one(&other)), Err(Error::Context(_))));
    }

    #[test]
    fn t_structure_multiplication() {
        let a = alg(&["x"], &["x^2 - 2"]);
        let x = el(&a, "x");
        assert_eq!(x.mul_from_t_structure(&x).unwrap(), el(&a, "2"));
        assert_eq!(x.mul_from_t_structure(&AlgebraElement::one(&a)).unwrap(), x);
        let free = alg(&["x", "y"], &[]);
        let (p, q) = (el(&free, "x + y^2"), el(&free, "3x - 1"));
        assert_eq!(
            p.mul_from_t_structure(&q).unwrap().rep(),
            &p.rep().mul(q.rep()).unwrap()
        );
        let b = alg(&["x"], &["x^2 - 2"]);
        let c = alg(&["x"], &["x^3"]);
        assert!(el(&b, "x").mul_from_t_structure(&el(&c, "x")).is_err());
    }

    #[test]
    fn algebra_map_checks() {
        let a = alg(&["x"], &["x^2"]);
        let b = alg(&["y"], &["y^4"]);
        assert!(AlgebraMap::new(&a, &b, vec![el(&b, "y^2")]).is_ok());
        let k = alg(&[], &[]);
        let err = AlgebraMap::new(&a, &k, vec![AlgebraElement::one(&k)]).unwrap_err();
        assert_eq!(err, Error::RelationViolation { relation: "x^2".into(), image: "1".into() });
        assert!(AlgebraMap::identity(&a).is_identity());
        assert!(AlgebraMap::new(&a, &b, vec![]).is_err());
    }

    #[test]
    fn composition_of_valid_maps_is_valid() {
        let a = alg(&["x"], &["x^2"]);
        let b = alg(&["y"], &["y^4"]);
        let c = alg(&["z"], &["z^8"]);
        let f = AlgebraMap::new(&a, &b, vec![el(&b, "y^2")]).unwrap();
        let g = AlgebraMap::new(&b, &c, vec![el(&c, "z^2 + z^3")]).unwrap();
        let fg = f.then(&g).unwrap();
        assert!(AlgebraMap::new(fg.source(), fg.target(), fg.images().to_vec()).is_ok());
        assert_eq!(fg.apply(&el(&a, "x")).unwrap(), el(&c, "z^4 + 2z^5 + z^6"));
    }

    #[test]
    fn square_zero_product_examples() {
        let a = alg(&["x"], &[]);
        let m = ModulePresentation::free("M", &a, 1);
        let e = |s: &str| m.element(vec![parse_poly(a.ctx(), s).unwrap()]).unwrap();
        let lhs = (el(&a, "x"), e("1"));
        let rhs = (el(&a, "x + 2"), e("x^2"));
        let (p, q) = squarezero_product(&lhs, &rhs).unwrap();
        assert_eq!(p, el(&a, "x^2 + 2x"));
        assert_eq!(q, e("x^3 + x + 2"));
        let unit = (AlgebraElement::one(&a), m.zero());
        assert_eq!(squarezero_product(&unit, &rhs).unwrap(), rhs);
        let (z1, z2) = squarezero_product(&(el(&a, "0"), e("x")), &(el(&a, "0"), e("1"))).unwrap();
        assert!(z1.is_zero() && z2.is_zero());
    }
}
