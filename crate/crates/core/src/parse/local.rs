//! Parser for local programs: the per-process language produced by projection.

use super::lexer::Tok;
use super::{PResult, ParseError, Parser};
use crate::name::Name;
use crate::net::{LocalExpr, LocalType};
use crate::syntax::{Atom, BaseTy, Literal};
use std::collections::{BTreeMap, BTreeSet};

pub(super) const LOCAL_KEYWORDS: &[&str] = &["bot", "ami", "send", "recv", "offer", "choose", "sub"];

impl Parser {
    fn ltype(&mut self) -> PResult<LocalType> {
        let lhs = self.lsum()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.ltype()?;
            return Ok(LocalType::arrow(lhs, rhs));
        }
        Ok(lhs)
    }

    fn lsum(&mut self) -> PResult<LocalType> {
        let mut t = self.lprod()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let r = self.lprod()?;
            t = LocalType::sum(t, r);
        }
        Ok(t)
    }

    fn lprod(&mut self) -> PResult<LocalType> {
        let mut t = self.lapp()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let r = self.lapp()?;
            t = LocalType::prod(t, r);
        }
        Ok(t)
    }

    fn starts_latom_ty(&self) -> bool {
        match self.peek() {
            Tok::LParen => true,
            Tok::Ident(s) => !matches!(s.as_str(), "then" | "else" | "of" | "in"),
            _ => false,
        }
    }

    fn lapp(&mut self) -> PResult<LocalType> {
        let mut t = self.latom_ty()?;
        while self.starts_latom_ty() {
            let a = self.latom_ty()?;
            t = LocalType::app(t, a);
        }
        Ok(t)
    }

    fn with_ltyvar<T>(&mut self, x: &Name, f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        self.push_tyvar(x);
        let r = f(self);
        self.pop_tyvar();
        r
    }

    fn latom_ty(&mut self) -> PResult<LocalType> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                if *self.peek() == Tok::RParen {
                    self.bump();
                    return Ok(LocalType::Base(BaseTy::Unit));
                }
                let t = self.ltype()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(s) => match s.as_str() {
                "Int" => {
                    self.bump();
                    Ok(LocalType::Base(BaseTy::Int))
                }
                "String" => {
                    self.bump();
                    Ok(LocalType::Base(BaseTy::Str))
                }
                "bot" => {
                    self.bump();
                    Ok(LocalType::Bot)
                }
                "forall" | "fn" => {
                    self.bump();
                    let x = self.ident()?;
                    if s == "forall" {
                        self.expect(Tok::Dot)?;
                    } else {
                        self.expect(Tok::FatArrow)?;
                    }
                    let body = Box::new(self.with_ltyvar(&x, |p| p.ltype())?);
                    Ok(if s == "forall" { LocalType::Forall(x, body) } else { LocalType::Lam(x, body) })
                }
                "ami" => {
                    self.bump();
                    let a = self.atom()?;
                    self.expect_kw("then")?;
                    let t1 = self.ltype()?;
                    self.expect_kw("else")?;
                    let t2 = self.ltype()?;
                    Ok(LocalType::AmI(a, Box::new(t1), Box::new(t2)))
                }
                _ => Ok(match self.atom()? {
                    Atom::Proc(p) => LocalType::Proc(p),
                    Atom::Var(x) => LocalType::Var(x),
                }),
            },
            other => self.error(format!("expected a local type, found {}", other.describe())),
        }
    }

    fn lexpr(&mut self) -> PResult<LocalExpr> {
        match self.peek().clone() {
            Tok::Backslash => {
                self.bump();
                let x = self.ident()?;
                self.expect(Tok::Colon)?;
                let ann = self.ltype()?;
                self.expect(Tok::Dot)?;
                let body = self.with_lvar(&x, |p| p.lexpr())?;
                Ok(LocalExpr::Lam { var: x, ann, body: Box::new(body) })
            }
            Tok::BigLambda => {
                self.bump();
                let x = self.ident()?;
                self.expect(Tok::Dot)?;
                let body = self.with_ltyvar(&x, |p| p.lexpr())?;
                Ok(LocalExpr::TLam { var: x, body: Box::new(body) })
            }
            Tok::Ident(s) if s == "case" => {
                self.bump();
                let scrut = self.lexpr()?;
                self.expect_kw("of")?;
                self.expect_kw("inl")?;
                let l = self.ident()?;
                self.expect(Tok::FatArrow)?;
                let lb = self.with_lvar(&l, |p| p.lexpr())?;
                self.expect(Tok::Bar)?;
                self.expect_kw("inr")?;
                let r = self.ident()?;
                self.expect(Tok::FatArrow)?;
                let rb = self.with_lvar(&r, |p| p.lexpr())?;
                Ok(LocalExpr::Case {
                    scrut: Box::new(scrut),
                    left: l,
                    left_body: Box::new(lb),
                    right: r,
                    right_body: Box::new(rb),
                })
            }
            Tok::Ident(s) if s == "ami" => {
                self.bump();
                let proc = self.atom()?;
                self.expect_kw("then")?;
                let then = self.lexpr()?;
                self.expect_kw("else")?;
                let els = self.lexpr()?;
                Ok(LocalExpr::AmI { proc, then: Box::new(then), els: Box::new(els) })
            }
            Tok::Ident(s) if s == "choose" => {
                self.bump();
                let to = self.atom()?;
                let label = self.ident()?;
                self.expect(Tok::Semi)?;
                let body = self.lexpr()?;
                Ok(LocalExpr::Choose { to, label, body: Box::new(body) })
            }
            _ => self.lapp_expr(),
        }
    }

    fn with_lvar<T>(&mut self, x: &Name, f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        self.vars.push(x.clone());
        let r = f(self);
        self.vars.pop();
        r
    }

    fn starts_latom_expr(&self) -> bool {
        match self.peek() {
            Tok::LParen | Tok::Int(_) | Tok::Str(_) => true,
            Tok::Ident(s) => !matches!(s.as_str(), "of" | "then" | "else" | "case" | "ami" | "choose"),
            _ => false,
        }
    }

    fn lapp_expr(&mut self) -> PResult<LocalExpr> {
        let mut m = self.lpostfix()?;
        while self.starts_latom_expr() {
            let a = self.lpostfix()?;
            m = LocalExpr::app(m, a);
        }
        Ok(m)
    }

    fn lpostfix(&mut self) -> PResult<LocalExpr> {
        let mut m = self.latom_expr()?;
        while *self.peek() == Tok::LBrack {
            self.bump();
            let t = self.ltype()?;
            self.expect(Tok::RBrack)?;
            m = LocalExpr::TApp(Box::new(m), t);
        }
        Ok(m)
    }

    fn lbracket_ty(&mut self) -> PResult<LocalType> {
        self.expect(Tok::LBrack)?;
        let t = self.ltype()?;
        self.expect(Tok::RBrack)?;
        Ok(t)
    }

    fn latom_expr(&mut self) -> PResult<LocalExpr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(LocalExpr::Lit(Literal::Int(n)))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(LocalExpr::Lit(Literal::Str(s)))
            }
            Tok::LParen => {
                self.bump();
                if *self.peek() == Tok::RParen {
                    self.bump();
                    return Ok(LocalExpr::Lit(Literal::Unit));
                }
                let a = self.lexpr()?;
                if *self.peek() == Tok::Comma {
                    self.bump();
                    let b = self.lexpr()?;
                    self.expect(Tok::RParen)?;
                    return Ok(LocalExpr::pair(a, b));
                }
                self.expect(Tok::RParen)?;
                Ok(a)
            }
            Tok::Ident(s) => match s.as_str() {
                "bot" => {
                    self.bump();
                    Ok(LocalExpr::Bot)
                }
                "inl" | "inr" => {
                    self.bump();
                    let t = self.lbracket_ty()?;
                    let m = Box::new(self.lpostfix()?);
                    Ok(if s == "inl" { LocalExpr::Inl(t, m) } else { LocalExpr::Inr(t, m) })
                }
                "fst" | "snd" => {
                    self.bump();
                    let m = Box::new(self.lpostfix()?);
                    Ok(if s == "fst" { LocalExpr::Fst(m) } else { LocalExpr::Snd(m) })
                }
                "send" | "recv" => {
                    self.bump();
                    let a = self.atom()?;
                    Ok(if s == "send" { LocalExpr::Send(a) } else { LocalExpr::Recv(a) })
                }
                "sub" => {
                    self.bump();
                    self.expect(Tok::LBrack)?;
                    let a = self.atom()?;
                    self.expect(Tok::ColonEq)?;
                    let b = self.atom()?;
                    self.expect(Tok::RBrack)?;
                    Ok(LocalExpr::RoleSub(a, b))
                }
                "offer" => {
                    self.bump();
                    let from = self.atom()?;
                    self.expect(Tok::LBrace)?;
                    let mut branches = BTreeMap::new();
                    if *self.peek() != Tok::RBrace {
                        loop {
                            let span = self.span();
                            let l = self.ident()?;
                            self.expect(Tok::Colon)?;
                            let b = self.lexpr()?;
                            if branches.insert(l.clone(), b).is_some() {
                                return Err(ParseError {
                                    line: span.line,
                                    col: span.col,
                                    msg: format!("duplicate offer label `{l}`"),
                                });
                            }
                            if *self.peek() == Tok::Comma {
                                self.bump();
                            } else {
                                break;
                            }
                        }
                    }
                    self.expect(Tok::RBrace)?;
                    Ok(LocalExpr::Offer { from, branches })
                }
                _ => {
                    let x = self.ident()?;
                    if !self.vars.contains(&x) && self.defs.contains(&x) {
                        Ok(LocalExpr::Def(x))
                    } else {
                        Ok(LocalExpr::Var(x))
                    }
                }
            },
            other => self.error(format!("expected a local term, found {}", other.describe())),
        }
    }
}

fn names(xs: &[&str]) -> BTreeSet<Name> {
    xs.iter().map(|s| Name::new(s)).collect()
}

pub fn parse_local_type(text: &str, procs: &[&str]) -> Result<LocalType, ParseError> {
    let mut p = Parser::local_parser(text, names(procs))?;
    let t = p.ltype()?;
    p.expect(Tok::Eof)?;
    Ok(t)
}

/// Parses a local program; identifiers in `defs` that are not bound denote definitions.
pub fn parse_local_expr(text: &str, procs: &[&str], defs: &[&str]) -> Result<LocalExpr, ParseError> {
    let mut p = Parser::local_parser(text, names(procs))?;
    p.defs = names(defs);
    let m = p.lexpr()?;
    p.expect(Tok::Eof)?;
    Ok(m)
}

/// Parses a sequence of `def f = M;` items.
pub fn parse_local_defs(text: &str, procs: &[&str]) -> Result<BTreeMap<Name, LocalExpr>, ParseError> {
    let mut p = Parser::local_parser(text, names(procs))?;
    for w in p.toks.windows(2) {
        if let (Tok::Ident(kw), Tok::Ident(f)) = (&w[0].tok, &w[1].tok) {
            if kw == "def" {
                p.defs.insert(Name::new(f));
            }
        }
    }
    let mut out = BTreeMap::new();
    while p.is_kw("def") {
        let span = p.span();
        p.bump();
        let f = p.ident()?;
        p.expect(Tok::Eq)?;
        let body = p.lexpr()?;
        p.expect(Tok::Semi)?;
        if out.insert(f.clone(), body).is_some() {
            return Err(ParseError { line: span.line, col: span.col, msg: format!("duplicate def `{f}`") });
        }
    }
    p.expect(Tok::Eof)?;
    Ok(out)
}
