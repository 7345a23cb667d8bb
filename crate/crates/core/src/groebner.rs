//! Buchberger's algorithm for ideals and for submodules of free modules.
//!
//! Both cases run through one engine over vectors of polynomials with a
//! position-over-term order: earlier positions dominate, ties are broken by
//! the context's monomial order. An ideal is the rank-1 case.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::polyring::{same_ctx, Ctx, Monomial, MonomialOrder, Poly, PolyContext, Scalar};

/// Default cap on processed critical pairs before giving up.
pub const DEFAULT_MAX_PAIRS: usize = 10_000;

type Vector = Vec<Poly>;

fn leading(v: &[Poly]) -> Option<(usize, &Monomial, &Scalar)> {
    v.iter()
        .enumerate()
        .find_map(|(j, p)| p.leading_term().map(|(m, c)| (j, m, c)))
}

fn pot_cmp(order: MonomialOrder, a: (usize, &Monomial), b: (usize, &Monomial)) -> Ordering {
    b.0.cmp(&a.0).then_with(|| order.cmp(a.1, b.1))
}

fn is_zero_vec(v: &[Poly]) -> bool {
    v.iter().all(Poly::is_zero)
}

fn make_monic(v: &mut Vector) {
    if let Some((_, _, c)) = leading(v) {
        let inv = c.inverse().expect("nonzero");
        for p in v.iter_mut() {
            *p = p.scale(&inv);
        }
    }
}

/// `v - c * m * g`, componentwise.
fn sub_scaled(v: &mut Vector, g: &[Poly], m: &Monomial, c: &Scalar) {
    let neg = -c;
    for (a, b) in v.iter_mut().zip(g) {
        if !b.is_zero() {
            *a = &*a + &b.mul_term(m, &neg);
        }
    }
}

/// Fully reduces `v` against `basis`. Every term left over is irreducible.
fn reduce(mut v: Vector, basis: &[Vector]) -> Vector {
    let ctx = v.first().map(|p| p.ctx().clone());
    let Some(ctx) = ctx else { return v };
    let leads: Vec<_> = basis.iter().map(|g| leading(g).expect("nonzero basis element")).collect();
    for j in 0..v.len() {
        let mut rem = Poly::zero(&ctx);
        while let Some((t, c)) = v[j].leading_term().map(|(t, c)| (t.clone(), c.clone())) {
            let divisor = leads
                .iter()
                .enumerate()
                .find(|(_, (pos, lm, _))| *pos == j && lm.divides(&t));
            match divisor {
                Some((k, (_, lm, lc))) => {
                    let q = t.div(lm).expect("divides");
                    let coeff = &c * &lc.inverse().expect("nonzero");
                    sub_scaled(&mut v, &basis[k], &q, &coeff);
                }
                None => {
                    rem = &rem + &Poly::monomial(&ctx, t.clone(), c.clone());
                    let head = Poly::monomial(&ctx, t, c);
                    v[j] = &v[j] - &head;
                }
            }
        }
        v[j] = rem;
    }
    v
}

fn s_vector(g: &[Poly], h: &[Poly]) -> Option<Vector> {
    let (jg, mg, cg) = leading(g)?;
    let (jh, mh, ch) = leading(h)?;
    if jg != jh {
        return None;
    }
    let l = mg.lcm(mh);
    let qg = l.div(mg).expect("lcm");
    let qh = l.div(mh).expect("lcm");
    let ig = cg.inverse().expect("nonzero");
    let ih = ch.inverse().expect("nonzero");
    Some(
        g.iter()
            .zip(h)
            .map(|(a, b)| &a.mul_term(&qg, &ig) - &b.mul_term(&qh, &ih))
            .collect(),
    )
}

/// Runs Buchberger on `gens` (all of length `rank`), returning a reduced,
/// monic basis sorted by descending leading term.
fn buchberger_vectors(ctx: &Ctx, rank: usize, gens: &[Vector], max_pairs: usize) -> Result<Vec<Vector>> {
    let order = ctx.order();
    let mut basis: Vec<Vector> = Vec::new();
    for g in gens {
        if !is_zero_vec(g) {
            let mut g = g.clone();
            make_monic(&mut g);
            if !basis.contains(&g) {
                basis.push(g);
            }
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    let mut processed = 0usize;
    while !pairs.is_empty() {
        // normal strategy: smallest lcm first, ties by index
        let pick = (0..pairs.len())
            .min_by(|&a, &b| {
                let key = |k: usize| {
                    let (i, j) = pairs[k];
                    let (pi, mi, _) = leading(&basis[i]).unwrap();
                    let (_, mj, _) = leading(&basis[j]).unwrap();
                    (pi, mi.lcm(mj))
                };
                let (ka, kb) = (key(a), key(b));
                pot_cmp(order, (ka.0, &ka.1), (kb.0, &kb.1)).then(pairs[a].cmp(&pairs[b]))
            })
            .expect("nonempty");
        let (i, j) = pairs.swap_remove(pick);
        processed += 1;
        if processed > max_pairs {
            return Err(Error::Resource(format!(
                "Buchberger processed more than {max_pairs} critical pairs"
            )));
        }
        let (_, mi, _) = leading(&basis[i]).unwrap();
        let (_, mj, _) = leading(&basis[j]).unwrap();
        if rank == 1 && mi.coprime(mj) {
            continue;
        }
        let Some(s) = s_vector(&basis[i], &basis[j]) else { continue };
        let mut r = reduce(s, &basis);
        if is_zero_vec(&r) {
            continue;
        }
        make_monic(&mut r);
        let (pr, _, _) = leading(&r).unwrap();
        let new = basis.len();
        for (k, g) in basis.iter().enumerate() {
            if leading(g).unwrap().0 == pr {
                pairs.push((k, new));
            }
        }
        basis.push(r);
    }

    // drop elements whose leading term is divisible by another's
    let mut keep: Vec<Vector> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let (pg, mg, _) = leading(g).unwrap();
        let redundant = basis.iter().enumerate().any(|(l, h)| {
            if l == k {
                return false;
            }
            let (ph, mh, _) = leading(h).unwrap();
            ph == pg && mh.divides(mg) && (mh != mg || l < k)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    // interreduce tails
    let mut reduced = Vec::with_capacity(keep.len());
    for k in 0..keep.len() {
        let others: Vec<Vector> =
            keep.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, g)| g.clone()).collect();
        let mut r = reduce(keep[k].clone(), &others);
        make_monic(&mut r);
        reduced.push(r);
    }
    reduced.sort_by(|a, b| {
        let (pa, ma, _) = leading(a).unwrap();
        let (pb, mb, _) = leading(b).unwrap();
        pot_cmp(order, (pb, mb), (pa, ma))
    });
    Ok(reduced)
}

/// A polynomial ideal together with its reduced Gröbner basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    ctx: Ctx,
    generators: Vec<Poly>,
    basis: Vec<Poly>,
}

impl Ideal {
    pub fn new(ctx: &Ctx, generators: Vec<Poly>) -> Result<Self> {
        Self::with_cap(ctx, generators, DEFAULT_MAX_PAIRS)
    }

    pub fn with_cap(ctx: &Ctx, generators: Vec<Poly>, max_pairs: usize) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| !same_ctx(g.ctx(), ctx)) {
            return Err(Error::context(format!("generator `{g}` is over a different context")));
        }
        let rows: Vec<Vector> = generators.iter().map(|g| vec![g.clone()]).collect();
        let basis = buchberger_vectors(ctx, 1, &rows, max_pairs)?
            .into_iter()
            .map(|mut v| v.pop().unwrap())
            .collect();
        Ok(Ideal { ctx: ctx.clone(), generators, basis })
    }

    pub fn zero(ctx: &Ctx) -> Self {
        Ideal { ctx: ctx.clone(), generators: Vec::new(), basis: Vec::new() }
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// `1 ∈ I`.
    pub fn is_unit(&self) -> bool {
        self.basis.iter().any(|g| g.leading_monomial().is_some_and(Monomial::is_one))
    }

    pub fn normal_form(&self, p: &Poly) -> Result<Poly> {
        if !same_ctx(p.ctx(), &self.ctx) {
            return Err(Error::context(format!("`{p}` is not over the ideal's context")));
        }
        Ok(self.reduce_unchecked(p))
    }

    pub(crate) fn reduce_unchecked(&self, p: &Poly) -> Poly {
        if self.basis.is_empty() {
            return p.clone();
        }
        let basis: Vec<Vector> = self.basis.iter().map(|g| vec![g.clone()]).collect();
        reduce(vec![p.clone()], &basis).pop().unwrap()
    }

    pub fn contains(&self, p: &Poly) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// Every S-polynomial of the basis reduces to zero.
    pub fn is_groebner_basis(&self) -> bool {
        let basis: Vec<Vector> = self.basis.iter().map(|g| vec![g.clone()]).collect();
        all_s_vectors_reduce(&basis)
    }
}

fn all_s_vectors_reduce(basis: &[Vector]) -> bool {
    for j in 0..basis.len() {
        for i in 0..j {
            if let Some(s) = s_vector(&basis[i], &basis[j]) {
                if !is_zero_vec(&reduce(s, basis)) {
                    return false;
                }
            }
        }
    }
    true
}

/// Reduced Gröbner basis of `generators` under `order`. When `order`
/// differs from the generators' context the computation happens in a copy
/// of that context carrying `order`.
pub fn buchberger(ctx: &Ctx, generators: &[Poly], order: MonomialOrder) -> Result<Ideal> {
    if ctx.order() == order {
        return Ideal::new(ctx, generators.to_vec());
    }
    let other = PolyContext::new(ctx.vars().iter().cloned(), ctx.field(), order)?;
    let positions: Vec<usize> = (0..ctx.nvars()).collect();
    let gens = generators
        .iter()
        .map(|g| g.embed(&other, &positions))
        .collect::<Result<Vec<_>>>()?;
    Ideal::new(&other, gens)
}

/// Gröbner basis of a submodule of the free module of rank `rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmoduleBasis {
    ctx: Ctx,
    rank: usize,
    rows: Vec<Vec<Poly>>,
    basis: Vec<Vec<Poly>>,
}

impl SubmoduleBasis {
    pub fn new(ctx: &Ctx, rank: usize, rows: Vec<Vec<Poly>>) -> Result<Self> {
        Self::with_cap(ctx, rank, rows, DEFAULT_MAX_PAIRS)
    }

    pub fn with_cap(ctx: &Ctx, rank: usize, rows: Vec<Vec<Poly>>, max_pairs: usize) -> Result<Self> {
        for r in &rows {
            if r.len() != rank {
                return Err(Error::Rank { expected: rank, got: r.len() });
            }
            if let Some(p) = r.iter().find(|p| !same_ctx(p.ctx(), ctx)) {
                return Err(Error::context(format!("entry `{p}` is over a different context")));
            }
        }
        let basis = if rank == 0 { Vec::new() } else { buchberger_vectors(ctx, rank, &rows, max_pairs)? };
        Ok(SubmoduleBasis { ctx: ctx.clone(), rank, rows, basis })
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rows(&self) -> &[Vec<Poly>] {
        &self.rows
    }

    pub fn basis(&self) -> &[Vec<Poly>] {
        &self.basis
    }

    pub fn normal_form(&self, v: &[Poly]) -> Result<Vec<Poly>> {
        if v.len() != self.rank {
            return Err(Error::Rank { expected: self.rank, got: v.len() });
        }
        if let Some(p) = v.iter().find(|p| !same_ctx(p.ctx(), &self.ctx)) {
            return Err(Error::context(format!("entry `{p}` is over a different context")));
        }
        Ok(reduce(v.to_vec(), &self.basis))
    }

    pub fn contains(&self, v: &[Poly]) -> Result<bool> {
        Ok(is_zero_vec(&self.normal_form(v)?))
    }

    pub fn is_groebner_basis(&self) -> bool {
        all_s_vectors_reduce(&self.basis)
    }
}

/// Convenience wrapper mirroring [`buchberger`] for submodules.
pub fn module_buchberger(ctx: &Ctx, rows: Vec<Vec<Poly>>, rank: usize) -> Result<SubmoduleBasis> {
    SubmoduleBasis::new(ctx, rank, rows)
}
