//! Presentation documents: algebras, modules and derivations in text.
//!
//! ```text
//! algebra A { vars: x, y; relations: x^2 + y^2 - 1; }
//! module M over A { rank: 2; relations: (2x, 2y); }
//! module O over A = kahler;
//! derivation D : A -> O { x -> (1, 0); y -> (0, 1); }
//! ```
//!
//! Names must be declared before use. The coefficient field and monomial
//! order are supplied by the caller.

use crate::algebra::{Algebra, AlgebraPresentation};
use crate::derivations::Derivation;
use crate::error::{Error, Result};
use crate::kahler::{kahler_of_algebra, KahlerModule};
use crate::module::{Module, ModuleElement, ModulePresentation, RestrictedModule};
use crate::polyring::{lex, Field, MonomialOrder, Poly, PolyContext, PolyParser, Tok};
use crate::wext::{WAlgebra, WElement};

#[derive(Clone, Debug, Default)]
pub struct Document {
    pub algebras: Vec<Algebra>,
    pub modules: Vec<Module>,
    /// Modules declared `= kahler`, with the declared name.
    pub kahler: Vec<(String, KahlerModule)>,
    /// Derivations with their declared names and the relation check
    /// deferred: see [`DerivationDecl::build`].
    pub derivations: Vec<DerivationDecl>,
}

/// A parsed derivation block, not yet validated.
#[derive(Clone, Debug)]
pub struct DerivationDecl {
    pub name: String,
    pub algebra: Algebra,
    pub module: Module,
    pub images: Vec<ModuleElement>,
}

impl DerivationDecl {
    pub fn build(&self) -> Result<Derivation> {
        Derivation::new(&self.algebra, &RestrictedModule::plain(&self.module), self.images.clone())
    }
}

impl Document {
    pub fn algebra(&self, name: &str) -> Option<&Algebra> {
        self.algebras.iter().find(|a| a.name() == name)
    }

    /// Modules by declared name; `= kahler` modules included.
    pub fn module(&self, name: &str) -> Option<&Module> {
        self.kahler
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, k)| k.module())
            .or_else(|| self.modules.iter().find(|m| m.name() == name))
    }

    pub fn derivation(&self, name: &str) -> Option<&DerivationDecl> {
        self.derivations.iter().find(|d| d.name == name)
    }
}

pub fn parse_document(src: &str, field: Field, order: MonomialOrder) -> Result<Document> {
    let toks = lex(src)?;
    let mut p = DocParser { src, toks: &toks, pos: 0, field, order, doc: Document::default() };
    while p.pos < toks.len() {
        p.item()?;
    }
    Ok(p.doc)
}

/// A module element `(p₁, …, p_r)` over the module's algebra; a bare
/// polynomial is accepted for rank 1.
pub fn parse_module_element(m: &Module, src: &str) -> Result<ModuleElement> {
    let toks = lex(src)?;
    let mut p = DocParser { src, toks: &toks, pos: 0, field: m.owner().field(), order: m.owner().ctx().order(), doc: Document::default() };
    let v = p.vector(m)?;
    p.finish()?;
    Ok(v)
}

/// Semicolon-separated pairs `(a, (m₁, …, m_r))` in `W`.
pub fn parse_w_elements(w: &WAlgebra, src: &str) -> Result<Vec<WElement>> {
    let toks = lex(src)?;
    let a = w.base().clone();
    let m = w.fiber().carrier().clone();
    let mut p = DocParser { src, toks: &toks, pos: 0, field: a.field(), order: a.ctx().order(), doc: Document::default() };
    let mut out = Vec::new();
    while p.pos < toks.len() {
        p.expect('(')?;
        let first = p.poly(a.ctx())?;
        p.expect(',')?;
        let second = p.vector(&m)?;
        p.expect(')')?;
        out.push(w.pair(crate::algebra::structure_map_nu(&a, &first)?, second)?);
        if !p.eat(';') {
            break;
        }
    }
    p.finish()?;
    Ok(out)
}

struct DocParser<'a> {
    src: &'a str,
    toks: &'a [(usize, Tok)],
    pos: usize,
    field: Field,
    order: MonomialOrder,
    doc: Document,
}

impl DocParser<'_> {
    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.src.len())
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.offset(), msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn finish(&self) -> Result<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            self.err("trailing input")
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected an identifier"),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("expected `{kw}`")),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn poly(&mut self, ctx: &crate::polyring::Ctx) -> Result<Poly> {
        let mut pp = PolyParser::new(ctx, self.toks, self.pos, self.src.len());
        let out = pp.expr()?;
        self.pos = pp.pos;
        Ok(out)
    }

    fn vector(&mut self, m: &Module) -> Result<ModuleElement> {
        let ctx = m.owner().ctx().clone();
        let start = self.offset();
        let rep = if self.peek() == Some(&Tok::Sym('(')) && m.rank() != 1 {
            self.tuple(&ctx)?
        } else if m.rank() == 1 {
            // `(p)` is also a parenthesized polynomial.
            vec![self.poly(&ctx)?]
        } else {
            return self.err(format!("expected a tuple of length {}", m.rank()));
        };
        if rep.len() != m.rank() {
            return Err(Error::Parse { pos: start, msg: format!("expected {} components, found {}", m.rank(), rep.len()) });
        }
        m.element(rep)
    }

    fn tuple(&mut self, ctx: &crate::polyring::Ctx) -> Result<Vec<Poly>> {
        self.expect('(')?;
        let mut out = Vec::new();
        if self.eat(')') {
            return Ok(out);
        }
        loop {
            out.push(self.poly(ctx)?);
            if self.eat(')') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn item(&mut self) -> Result<()> {
        if self.at_keyword("algebra") {
            self.algebra()
        } else if self.at_keyword("module") {
            self.module()
        } else if self.at_keyword("derivation") {
            self.derivation()
        } else {
            self.err("expected `algebra`, `module` or `derivation`")
        }
    }

    fn lookup_algebra(&mut self) -> Result<Algebra> {
        let at = self.offset();
        let name = self.ident()?;
        self.doc
            .algebra(&name)
            .cloned()
            .ok_or(Error::Parse { pos: at, msg: format!("unknown algebra `{name}`") })
    }

    fn check_fresh(&self, at: usize, name: &str) -> Result<()> {
        let taken = self.doc.algebra(name).is_some()
            || self.doc.module(name).is_some()
            || self.doc.derivation(name).is_some();
        if taken {
            return Err(Error::Parse { pos: at, msg: format!("`{name}` is already defined") });
        }
        Ok(())
    }

    fn algebra(&mut self) -> Result<()> {
        self.keyword("algebra")?;
        let at = self.offset();
        let name = self.ident()?;
        self.check_fresh(at, &name)?;
        self.expect('{')?;
        self.keyword("vars")?;
        self.expect(':')?;
        let mut vars = Vec::new();
        let vars_at = self.offset();
        if !self.eat(';') {
            loop {
                vars.push(self.ident()?);
                if self.eat(';') {
                    break;
                }
                self.expect(',')?;
            }
        }
        let ctx = PolyContext::new(vars, self.field, self.order)
            .map_err(|e| Error::Parse { pos: vars_at, msg: e.to_string() })?;
        let mut rels = Vec::new();
        if self.at_keyword("relations") {
            self.pos += 1;
            self.expect(':')?;
            if !self.eat(';') {
                loop {
                    rels.push(self.poly(&ctx)?);
                    if self.eat(';') {
                        break;
                    }
                    self.expect(',')?;
                }
            }
        }
        self.expect('}')?;
        self.eat(';');
        let a = AlgebraPresentation::new(name, &ctx, rels)?;
        self.doc.algebras.push(a);
        Ok(())
    }

    fn module(&mut self) -> Result<()> {
        self.keyword("module")?;
        let at = self.offset();
        let name = self.ident()?;
        self.check_fresh(at, &name)?;
        self.keyword("over")?;
        let a = self.lookup_algebra()?;
        if self.eat('=') {
            self.keyword("kahler")?;
            self.eat(';');
            self.doc.kahler.push((name, kahler_of_algebra(&a)));
            return Ok(());
        }
        self.expect('{')?;
        self.keyword("rank")?;
        self.expect(':')?;
        let rank = match self.peek() {
            Some(Tok::Int(n)) => usize::try_from(n.clone()).ok(),
            _ => None,
        };
        let Some(rank) = rank else {
            return self.err("expected a rank");
        };
        self.pos += 1;
        self.expect(';')?;
        let mut rows = Vec::new();
        if self.at_keyword("relations") {
            self.pos += 1;
            self.expect(':')?;
            if !self.eat(';') {
                loop {
                    let row_at = self.offset();
                    let row = if rank == 1 && self.peek() != Some(&Tok::Sym('(')) {
                        vec![self.poly(a.ctx())?]
                    } else {
                        self.tuple(a.ctx())?
                    };
                    if row.len() != rank {
                        return Err(Error::Parse { pos: row_at, msg: format!("expected {rank} components, found {}", row.len()) });
                    }
                    rows.push(row);
                    if self.eat(';') {
                        break;
                    }
                    self.expect(',')?;
                }
            }
        }
        self.expect('}')?;
        self.eat(';');
        let m = ModulePresentation::new(name, &a, rank, rows)?;
        self.doc.modules.push(m);
        Ok(())
    }

    fn derivation(&mut self) -> Result<()> {
        self.keyword("derivation")?;
        let at = self.offset();
        let name = self.ident()?;
        self.check_fresh(at, &name)?;
        self.expect(':')?;
        let a = self.lookup_algebra()?;
        self.expect('-')?;
        self.expect('>')?;
        let m_at = self.offset();
        let m_name = self.ident()?;
        let m = self
            .doc
            .module(&m_name)
            .cloned()
            .ok_or(Error::Parse { pos: m_at, msg: format!("unknown module `{m_name}`") })?;
        if !crate::algebra::same_algebra(m.owner(), &a) {
            return Err(Error::Parse { pos: m_at, msg: format!("`{m_name}` is not a module over `{}`", a.name()) });
        }
        self.expect('{')?;
        let mut images: Vec<Option<ModuleElement>> = vec![None; a.nvars()];
        while !self.eat('}') {
            let v_at = self.offset();
            let v = self.ident()?;
            let Some(i) = a.ctx().index_of(&v) else {
                return Err(Error::Parse { pos: v_at, msg: format!("unknown variable `{v}`") });
            };
            if images[i].is_some() {
                return Err(Error::Parse { pos: v_at, msg: format!("`{v}` assigned twice") });
            }
            self.expect('-')?;
            self.expect('>')?;
            images[i] = Some(self.vector(&m)?);
            if !self.eat(';') {
                self.expect('}')?;
                break;
            }
        }
        self.eat(';');
        let given = images.iter().filter(|i| i.is_some()).count();
        if given != a.nvars() {
            return Err(Error::Arity { expected: a.nvars(), got: given });
        }
        let images = images.into_iter().map(Option::unwrap).collect();
        self.doc.derivations.push(DerivationDecl { name, algebra: a, module: m, images });
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CIRCLE: &str = "
        algebra A { vars: x, y; relations: x^2 + y^2 - 1; }
        module M over A { rank: 2; relations: (2x, 2y); }
        module O over A = kahler;
        derivation D : A -> O { x -> (1, 0); y -> (0, 1); }
        derivation R : A -> M { x -> (-y, 0); y -> (x, 0) }
    ";

    fn parse(src: &str) -> Result<Document> {
        parse_document(src, Field::Rationals, MonomialOrder::DegRevLex)
    }

    #[test]
    fn parses_a_document() {
        let doc = parse(CIRCLE).unwrap();
        let a = doc.algebra("A").unwrap();
        assert_eq!(a.to_string(), "algebra A { vars: x, y; relations: x^2 + y^2 - 1; }");
        assert_eq!(doc.module("M").unwrap().to_string(), "module M over A { rank: 2; relations: (2*x, 2*y); }");
        assert_eq!(doc.module("O").unwrap(), doc.module("M").unwrap());
        let d = doc.derivation("D").unwrap().build().unwrap();
        assert_eq!(&d, doc.kahler[0].1.universal());
        assert!(doc.derivation("R").unwrap().build().is_ok());
    }

    #[test]
    fn round_trips_printing() {
        let doc = parse(CIRCLE).unwrap();
        let text = format!("{}\n{}", doc.algebra("A").unwrap(), doc.module("M").unwrap());
        let again = parse(&text).unwrap();
        assert_eq!(again.module("M").unwrap(), doc.module("M").unwrap());
    }

    #[test]
    fn empty_and_rank_one() {
        let doc = parse("algebra K { vars: ; } algebra B { vars: t; relations: t^2; } module N over B { rank: 1; relations: 2t, t^2; }").unwrap();
        assert_eq!(doc.algebra("K").unwrap().nvars(), 0);
        assert_eq!(doc.module("N").unwrap().to_string(), "module N over B { rank: 1; relations: (2*t), (0); }");
    }

    #[test]
    fn errors() {
        assert!(matches!(parse("algebra A { vars: x; relations: y; }"), Err(Error::Parse { pos: 32, .. })));
        assert!(matches!(parse("module M over A { rank: 1; }"), Err(Error::Parse { pos: 14, .. })));
        assert!(matches!(
            parse("algebra A { vars: x, y; } module M over A { rank: 2; relations: (x); }"),
            Err(Error::Parse { pos: 64, .. })
        ));
        assert!(matches!(
            parse("algebra A { vars: x, y; } module M over A { rank: 1; } derivation D : A -> M { x -> 1; }"),
            Err(Error::Arity { expected: 2, got: 1 })
        ));
        assert!(matches!(parse("algebra A { vars: x, x; }"), Err(Error::Parse { .. })));
        assert!(matches!(parse("algebra A { vars: x; } algebra A { vars: y; }"), Err(Error::Parse { pos: 31, .. })));
    }

    #[test]
    fn w_elements() {
        let doc = parse(CIRCLE).unwrap();
        let w = WAlgebra::plain(doc.module("M").unwrap());
        let args = parse_w_elements(&w, "(x, (1, 0)); (y^2, (0, y))").unwrap();
        assert_eq!(args.len(), 2);
        assert_eq!(args[1].to_string(), "(y^2, (0, y))");
        assert!(parse_w_elements(&w, "(x, (1))").is_err());
    }
}
