use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{Field, Monomial, MonomialOrder, Scalar};
use crate::error::{Error, Result};

/// Ordered variable names, ground field and monomial order shared by a
/// family of polynomials.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct PolyContext {
    vars: Vec<String>,
    field: Field,
    order: MonomialOrder,
}

pub type Ctx = Arc<PolyContext>;

impl PolyContext {
    pub fn new<S: Into<String>>(
        vars: impl IntoIterator<Item = S>,
        field: Field,
        order: MonomialOrder,
    ) -> Result<Ctx> {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::context(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Arc::new(PolyContext { vars, field, order }))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

pub(crate) fn same_ctx(a: &Ctx, b: &Ctx) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Abstract commutative-ring operations: the target of [`Poly::eval_generic`].
pub trait RingOps {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Image of a ground-field scalar.
    fn scalar(&self, c: &Scalar) -> Self::Elem;
}

/// The ground field itself as a ring carrier.
pub struct FieldOps(pub Field);

impl RingOps for FieldOps {
    type Elem = Scalar;
    fn zero(&self) -> Scalar {
        self.0.zero()
    }
    fn one(&self) -> Scalar {
        self.0.one()
    }
    fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a + b
    }
    fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a * b
    }
    fn scalar(&self, c: &Scalar) -> Scalar {
        c.clone()
    }
}

/// Polynomials over a fixed context as a ring carrier.
pub struct PolyOps(pub Ctx);

impl RingOps for PolyOps {
    type Elem = Poly;
    fn zero(&self) -> Poly {
        Poly::zero(&self.0)
    }
    fn one(&self) -> Poly {
        Poly::one(&self.0)
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a + b
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a * b
    }
    fn scalar(&self, c: &Scalar) -> Poly {
        Poly::constant(&self.0, c.clone())
    }
}

/// Sparse multivariate polynomial in canonical form: nonzero coefficients
/// only, terms sorted by the context's monomial order, largest first.
#[derive(Clone, Debug)]
pub struct Poly {
    ctx: Ctx,
    terms: Vec<(Monomial, Scalar)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_ctx(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl Poly {
    pub fn zero(ctx: &Ctx) -> Self {
        Poly { ctx: ctx.clone(), terms: Vec::new() }
    }

    pub fn one(ctx: &Ctx) -> Self {
        Self::constant(ctx, ctx.field.one())
    }

    pub fn constant(ctx: &Ctx, c: Scalar) -> Self {
        Self::monomial(ctx, Monomial::one(ctx.nvars()), c)
    }

    pub fn from_i64(ctx: &Ctx, n: i64) -> Self {
        Self::constant(ctx, ctx.field.from_i64(n))
    }

    pub fn monomial(ctx: &Ctx, m: Monomial, c: Scalar) -> Self {
        assert_eq!(m.nvars(), ctx.nvars(), "monomial arity");
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Poly { ctx: ctx.clone(), terms }
    }

    pub fn var(ctx: &Ctx, i: usize) -> Result<Self> {
        if i >= ctx.nvars() {
            return Err(Error::Index { index: i, len: ctx.nvars() });
        }
        Ok(Self::monomial(ctx, Monomial::var(ctx.nvars(), i), ctx.field.one()))
    }

    pub fn vars(ctx: &Ctx) -> Vec<Poly> {
        (0..ctx.nvars()).map(|i| Self::var(ctx, i).unwrap()).collect()
    }

    /// Canonicalizes arbitrary (monomial, coefficient) pairs: merges
    /// duplicates, drops zeros, sorts.
    pub fn from_terms(ctx: &Ctx, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), ctx.nvars(), "monomial arity");
            match acc.get_mut(&m) {
                Some(v) => *v = &*v + &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let order = ctx.order;
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Poly { ctx: ctx.clone(), terms }
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn field(&self) -> Field {
        self.ctx.field
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The constant coefficient, if this is a constant polynomial.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.as_slice() {
            [] => Some(self.ctx.field.zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    fn check_ctx(&self, other: &Poly) -> Result<()> {
        if same_ctx(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::context(format!(
                "polynomials over [{}] ({}) and [{}] ({})",
                self.ctx.vars.join(", "),
                self.ctx.field,
                other.ctx.vars.join(", "),
                other.ctx.field
            )))
        }
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_ctx(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.check_ctx(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check_ctx(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Poly) -> Poly {
        let order = self.ctx.order;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match order.cmp(ma, mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), cb.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = ca + cb;
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Poly { ctx: self.ctx.clone(), terms: out }
    }

    fn mul_unchecked(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.ctx);
        }
        let products = self.terms.iter().flat_map(|(ma, ca)| {
            other.terms.iter().map(move |(mb, cb)| (ma.mul(mb), ca * cb))
        });
        Poly::from_terms(&self.ctx, products)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ctx);
        }
        Poly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// `c * m * self`; multiplying by a monomial preserves the term order.
    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ctx);
        }
        Poly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(a, b)| (a.mul(m), b * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Scales so the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading_coeff() {
            Some(c) => self.scale(&c.inverse().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn partial_derivative(&self, i: usize) -> Result<Poly> {
        let n = self.ctx.nvars();
        if i >= n {
            return Err(Error::Index { index: i, len: n });
        }
        let field = self.ctx.field;
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponents()[i];
            if e == 0 {
                return None;
            }
            let mut exps = m.exponents().to_vec();
            exps[i] -= 1;
            Some((Monomial::from_exponents(exps), c * &field.from_i64(e as i64)))
        });
        Ok(Poly::from_terms(&self.ctx, terms))
    }

    /// All partial derivatives, in variable order.
    pub fn gradient(&self) -> Vec<Poly> {
        (0..self.ctx.nvars())
            .map(|i| self.partial_derivative(i).expect("index in range"))
            .collect()
    }

    /// Evaluates with `x_i ↦ images[i]` in an arbitrary commutative ring.
    pub fn eval_generic<R: RingOps>(&self, ops: &R, images: &[R::Elem]) -> Result<R::Elem> {
        let n = self.ctx.nvars();
        if images.len() != n {
            return Err(Error::Arity { expected: n, got: images.len() });
        }
        // powers[i][k] = images[i]^k, grown lazily
        let mut powers: Vec<Vec<R::Elem>> = vec![vec![ops.one()]; n];
        let mut acc = ops.zero();
        for (m, c) in &self.terms {
            let mut t = ops.scalar(c);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = ops.mul(powers[i].last().unwrap(), &images[i]);
                    powers[i].push(next);
                }
                t = ops.mul(&t, &powers[i][e as usize]);
            }
            acc = ops.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Substitutes `x_i ↦ images[i]`, all images living in `target`.
    pub fn substitute_in(&self, target: &Ctx, images: &[Poly]) -> Result<Poly> {
        if self.ctx.field != target.field {
            return Err(Error::context(format!(
                "substitution from {} into {}",
                self.ctx.field, target.field
            )));
        }
        if let Some(bad) = images.iter().find(|p| !same_ctx(&p.ctx, target)) {
            return Err(Error::context(format!(
                "image over [{}] does not share the target context [{}]",
                bad.ctx.vars.join(", "),
                target.vars.join(", ")
            )));
        }
        self.eval_generic(&PolyOps(target.clone()), images)
    }

    /// Substitutes `x_i ↦ images[i]`; the target context is the images'
    /// (or this polynomial's own when there are no variables).
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly> {
        let target = images.first().map(|p| p.ctx.clone()).unwrap_or_else(|| self.ctx.clone());
        self.substitute_in(&target, images)
    }

    /// Renames variables into another context with the same field:
    /// variable `i` becomes variable `positions[i]` of `target`.
    pub fn embed(&self, target: &Ctx, positions: &[usize]) -> Result<Poly> {
        let images = positions
            .iter()
            .map(|&j| Poly::var(target, j))
            .collect::<Result<Vec<_>>>()?;
        self.substitute_in(target, &images)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let factors: Vec<String> = m
                .exponents()
                .iter()
                .zip(&self.ctx.vars)
                .filter(|(e, _)| **e > 0)
                .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

fn expect_same(a: &Poly, b: &Poly) {
    if let Err(e) = a.check_ctx(b) {
        panic!("{e}");
    }
}

impl Add for &Poly {
    type Output = Poly;
    /// Panics on context mismatch; use [`Poly::add`] for the checked form.
    fn add(self, rhs: &Poly) -> Poly {
        expect_same(self, rhs);
        self.add_unchecked(rhs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        expect_same(self, rhs);
        self.add_unchecked(&rhs.neg())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        expect_same(self, rhs);
        self.mul_unchecked(rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(&self)
    }
}
