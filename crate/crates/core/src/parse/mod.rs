//! Concrete syntax for choreographies (`.chor` files) and local programs.
//!
//! Identifiers in type positions denote processes when declared in the
//! `processes` header and type variables when bound by an enclosing binder;
//! anything else is an unknown process.

mod lexer;
mod local;
mod print;

pub use local::{parse_local_defs, parse_local_expr, parse_local_type};
pub use print::{print_expr, print_kind, print_local, print_local_defs, print_local_type, print_program, print_type};

use crate::name::{fresh, Name};
use crate::syntax::{fv_expr, Atom, BaseTy, Def, Defs, Expr, Kind, Literal, ProcSet, Type};
use lexer::{lex, Spanned, Tok};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

/// A source position (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A parsed program: process universe, global definitions and the main choreography.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceUnit {
    pub processes: Vec<Name>,
    pub defs: Defs,
    pub main: Expr,
    /// Start of each top-level item, keyed `main` or the def name.
    pub spans: BTreeMap<String, Span>,
}

impl SourceUnit {
    pub fn universe(&self) -> BTreeSet<Name> {
        self.processes.iter().cloned().collect()
    }
}

const KEYWORDS: &[&str] = &[
    "processes", "def", "main", "forall", "fn", "proc", "Int", "String", "Bool", "inl", "inr", "case",
    "of", "com", "select", "let", "in", "if", "then", "else", "fst", "snd", "true", "false",
];

pub(crate) struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    procs: BTreeSet<Name>,
    defs: BTreeSet<Name>,
    tyvars: Vec<Name>,
    vars: Vec<Name>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    pub(crate) fn new(src: &str, procs: BTreeSet<Name>) -> PResult<Self> {
        Ok(Parser { toks: lex(src)?, pos: 0, procs, defs: BTreeSet::new(), tyvars: Vec::new(), vars: Vec::new() })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub(crate) fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)].tok
    }

    pub(crate) fn span(&self) -> Span {
        let t = &self.toks[self.pos];
        Span { line: t.line, col: t.col }
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn error<T>(&self, msg: impl Into<String>) -> PResult<T> {
        let s = self.span();
        Err(ParseError { line: s.line, col: s.col, msg: msg.into() })
    }

    pub(crate) fn expect(&mut self, t: Tok) -> PResult<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", t.describe(), self.peek().describe()))
        }
    }

    pub(crate) fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    pub(crate) fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{kw}`, found {}", self.peek().describe()))
        }
    }

    pub(crate) fn ident(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) && !local::LOCAL_KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(Name::from(s))
            }
            other => self.error(format!("expected an identifier, found {}", other.describe())),
        }
    }

    /// Resolves an identifier in a type position.
    pub(crate) fn atom_of(&self, n: Name) -> PResult<Atom> {
        if self.tyvars.contains(&n) {
            Ok(Atom::Var(n))
        } else if self.procs.contains(&n) {
            Ok(Atom::Proc(n))
        } else {
            self.error(format!("unknown process name `{n}`"))
        }
    }

    pub(crate) fn atom(&mut self) -> PResult<Atom> {
        let n = self.ident()?;
        self.pos -= 1;
        let a = self.atom_of(n)?;
        self.bump();
        Ok(a)
    }

    pub(crate) fn proc_set(&mut self) -> PResult<ProcSet> {
        self.expect(Tok::LBrace)?;
        let mut s = ProcSet::new();
        if *self.peek() != Tok::RBrace {
            loop {
                s.insert(self.atom()?);
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(s)
    }

    pub(crate) fn kind(&mut self) -> PResult<Kind> {
        let k = self.kind_no_arrow()?;
        if *self.peek() == Tok::FatArrow {
            self.bump();
            let rhs = self.kind()?;
            return Ok(Kind::arrow(k, rhs));
        }
        Ok(k)
    }

    /// A kind whose top level is not an arrow; used after `fn X::`, where `=>` ends the kind.
    fn kind_no_arrow(&mut self) -> PResult<Kind> {
        let mut k = match self.peek().clone() {
            Tok::Star => {
                self.bump();
                Kind::Star
            }
            Tok::Ident(s) if s == "proc" => {
                self.bump();
                Kind::Proc
            }
            Tok::LParen => {
                self.bump();
                let k = self.kind()?;
                self.expect(Tok::RParen)?;
                k
            }
            other => return self.error(format!("expected a kind, found {}", other.describe())),
        };
        while *self.peek() == Tok::Backslash {
            self.bump();
            let rho = self.proc_set()?;
            k = Kind::without(k, rho);
        }
        Ok(k)
    }

    fn with_tyvar<T>(&mut self, x: &Name, f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        self.tyvars.push(x.clone());
        let r = f(self);
        self.tyvars.pop();
        r
    }

    fn with_var<T>(&mut self, x: &Name, f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        self.vars.push(x.clone());
        let r = f(self);
        self.vars.pop();
        r
    }

    pub(crate) fn ty(&mut self) -> PResult<Type> {
        let lhs = self.sum_ty()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rho = if *self.peek() == Tok::LBrace { self.proc_set()? } else { ProcSet::new() };
            let rhs = self.ty()?;
            return Ok(Type::arrow(lhs, rho, rhs));
        }
        Ok(lhs)
    }

    fn sum_ty(&mut self) -> PResult<Type> {
        let mut t = self.prod_ty()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let r = self.prod_ty()?;
            t = Type::sum(t, r);
        }
        Ok(t)
    }

    fn prod_ty(&mut self) -> PResult<Type> {
        let mut t = self.app_ty()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let r = self.app_ty()?;
            t = Type::prod(t, r);
        }
        Ok(t)
    }

    fn starts_atom_ty(&self) -> bool {
        match self.peek() {
            Tok::LParen => true,
            Tok::Ident(s) => !matches!(s.as_str(), "of" | "in" | "then" | "else") && !self.is_binder_kw(),
            _ => false,
        }
    }

    fn is_binder_kw(&self) -> bool {
        self.is_kw("forall") || self.is_kw("fn")
    }

    fn app_ty(&mut self) -> PResult<Type> {
        let mut t = self.atom_ty()?;
        while self.starts_atom_ty() || self.is_binder_kw() {
            let arg = self.atom_ty()?;
            t = Type::app(t, arg);
        }
        Ok(t)
    }

    /// Location after `@`: a name or a parenthesized type value.
    pub(crate) fn loc(&mut self) -> PResult<Type> {
        if *self.peek() == Tok::LParen {
            self.bump();
            let t = self.ty()?;
            self.expect(Tok::RParen)?;
            return Ok(t);
        }
        Ok(self.atom()?.to_type())
    }

    fn atom_ty(&mut self) -> PResult<Type> {
        match self.peek().clone() {
            Tok::LParen => {
                if *self.peek_at(1) == Tok::RParen {
                    self.bump();
                    self.bump();
                    self.expect(Tok::At)?;
                    return Ok(Type::unit_at(self.loc()?));
                }
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(s) => match s.as_str() {
                "Int" | "String" | "Bool" => {
                    self.bump();
                    self.expect(Tok::At)?;
                    let l = self.loc()?;
                    Ok(match s.as_str() {
                        "Int" => Type::base(BaseTy::Int, l),
                        "String" => Type::base(BaseTy::Str, l),
                        _ => Type::bool_at(l),
                    })
                }
                "forall" | "fn" => {
                    self.bump();
                    let x = self.ident()?;
                    self.expect(Tok::ColonColon)?;
                    let k = if s == "forall" { self.kind()? } else { self.kind_no_arrow()? };
                    if s == "forall" {
                        self.expect(Tok::Dot)?;
                    } else {
                        self.expect(Tok::FatArrow)?;
                    }
                    let body = self.with_tyvar(&x, |p| p.ty())?;
                    Ok(if s == "forall" {
                        Type::Forall(x, k, Box::new(body))
                    } else {
                        Type::Lam(x, k, Box::new(body))
                    })
                }
                _ => Ok(self.atom()?.to_type()),
            },
            other => self.error(format!("expected a type, found {}", other.describe())),
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Backslash => {
                self.bump();
                let rho = if *self.peek() == Tok::LBrace { Some(self.proc_set()?) } else { None };
                let x = self.ident()?;
                self.expect(Tok::Colon)?;
                let ann = self.ty()?;
                self.expect(Tok::Dot)?;
                let body = self.with_var(&x, |p| p.expr())?;
                Ok(Expr::Lam { var: x, ann, rho, body: Box::new(body) })
            }
            Tok::BigLambda => {
                self.bump();
                let x = self.ident()?;
                self.expect(Tok::ColonColon)?;
                let kind = self.kind()?;
                self.expect(Tok::Dot)?;
                let body = self.with_tyvar(&x, |p| p.expr())?;
                Ok(Expr::TLam { var: x, kind, body: Box::new(body) })
            }
            Tok::Ident(s) if s == "case" => {
                self.bump();
                let scrut = self.expr()?;
                self.expect_kw("of")?;
                self.expect_kw("inl")?;
                let l = self.ident()?;
                self.expect(Tok::FatArrow)?;
                let lb = self.with_var(&l, |p| p.expr())?;
                self.expect(Tok::Bar)?;
                self.expect_kw("inr")?;
                let r = self.ident()?;
                self.expect(Tok::FatArrow)?;
                let rb = self.with_var(&r, |p| p.expr())?;
                Ok(Expr::Case {
                    scrut: Box::new(scrut),
                    left: l,
                    left_body: Box::new(lb),
                    right: r,
                    right_body: Box::new(rb),
                })
            }
            Tok::Ident(s) if s == "select" => {
                self.bump();
                let from = self.loc()?;
                let to = self.loc()?;
                let label = self.ident()?;
                self.expect(Tok::Semi)?;
                let body = self.expr()?;
                Ok(Expr::Select { from, to, label, body: Box::new(body) })
            }
            Tok::Ident(s) if s == "let" => {
                self.bump();
                let x = self.ident()?;
                self.expect(Tok::Colon)?;
                let ann = self.ty()?;
                self.expect(Tok::Eq)?;
                let bound = self.expr()?;
                self.expect_kw("in")?;
                let body = self.with_var(&x, |p| p.expr())?;
                Ok(Expr::app(Expr::Lam { var: x, ann, rho: None, body: Box::new(body) }, bound))
            }
            Tok::Ident(s) if s == "if" => {
                self.bump();
                let c = self.expr()?;
                self.expect_kw("then")?;
                let t = self.expr()?;
                self.expect_kw("else")?;
                let e = self.expr()?;
                let mut used = fv_expr(&t);
                used.extend(fv_expr(&e));
                let b = fresh("b", |n| used.contains(n));
                Ok(Expr::Case {
                    scrut: Box::new(c),
                    left: b.clone(),
                    left_body: Box::new(t),
                    right: b,
                    right_body: Box::new(e),
                })
            }
            _ => self.app_expr(),
        }
    }

    fn starts_atom_expr(&self) -> bool {
        match self.peek() {
            Tok::LParen | Tok::Int(_) | Tok::Str(_) => true,
            Tok::Ident(s) => !matches!(
                s.as_str(),
                "of" | "in" | "then" | "else" | "case" | "select" | "let" | "if"
            ),
            _ => false,
        }
    }

    fn app_expr(&mut self) -> PResult<Expr> {
        let mut m = self.postfix_expr()?;
        while self.starts_atom_expr() {
            let a = self.postfix_expr()?;
            m = Expr::app(m, a);
        }
        Ok(m)
    }

    fn postfix_expr(&mut self) -> PResult<Expr> {
        let mut m = self.atom_expr()?;
        while *self.peek() == Tok::LBrack {
            self.bump();
            let t = self.ty()?;
            self.expect(Tok::RBrack)?;
            m = Expr::tapp(m, t);
        }
        Ok(m)
    }

    fn bracket_ty(&mut self) -> PResult<Type> {
        self.expect(Tok::LBrack)?;
        let t = self.ty()?;
        self.expect(Tok::RBrack)?;
        Ok(t)
    }

    fn atom_expr(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                self.expect(Tok::At)?;
                Ok(Expr::Lit(Literal::Int(n), self.loc()?))
            }
            Tok::Str(s) => {
                self.bump();
                self.expect(Tok::At)?;
                Ok(Expr::Lit(Literal::Str(s), self.loc()?))
            }
            Tok::LParen => {
                if *self.peek_at(1) == Tok::RParen {
                    self.bump();
                    self.bump();
                    self.expect(Tok::At)?;
                    return Ok(Expr::Lit(Literal::Unit, self.loc()?));
                }
                self.bump();
                let a = self.expr()?;
                if *self.peek() == Tok::Comma {
                    self.bump();
                    let b = self.expr()?;
                    self.expect(Tok::RParen)?;
                    return Ok(Expr::pair(a, b));
                }
                self.expect(Tok::RParen)?;
                Ok(a)
            }
            Tok::Ident(s) => match s.as_str() {
                "true" | "false" => {
                    self.bump();
                    self.expect(Tok::At)?;
                    let l = self.loc()?;
                    let u = Expr::Lit(Literal::Unit, l.clone());
                    Ok(if s == "true" {
                        Expr::Inl(Type::unit_at(l), Box::new(u))
                    } else {
                        Expr::Inr(Type::unit_at(l), Box::new(u))
                    })
                }
                "inl" | "inr" => {
                    self.bump();
                    let t = self.bracket_ty()?;
                    let m = self.postfix_expr()?;
                    Ok(if s == "inl" { Expr::Inl(t, Box::new(m)) } else { Expr::Inr(t, Box::new(m)) })
                }
                "fst" | "snd" => {
                    self.bump();
                    let m = self.postfix_expr()?;
                    Ok(if s == "fst" { Expr::Fst(Box::new(m)) } else { Expr::Snd(Box::new(m)) })
                }
                "com" => {
                    self.bump();
                    let ty = self.bracket_ty()?;
                    let from = self.loc()?;
                    let to = self.loc()?;
                    Ok(Expr::Com { ty, from, to })
                }
                _ => {
                    let x = self.ident()?;
                    if !self.vars.contains(&x) && self.defs.contains(&x) {
                        Ok(Expr::Def(x))
                    } else {
                        Ok(Expr::Var(x))
                    }
                }
            },
            other => self.error(format!("expected a term, found {}", other.describe())),
        }
    }

    fn program(&mut self) -> PResult<SourceUnit> {
        let mut spans = BTreeMap::new();
        self.expect_kw("processes")?;
        let mut processes = Vec::new();
        loop {
            let s = self.span();
            let p = self.ident()?;
            if processes.contains(&p) {
                return Err(ParseError { line: s.line, col: s.col, msg: format!("duplicate process `{p}`") });
            }
            processes.push(p);
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        self.expect(Tok::Semi)?;
        self.procs = processes.iter().cloned().collect();
        // Defs may refer to each other in any order.
        for w in self.toks.windows(2) {
            if let (Tok::Ident(kw), Tok::Ident(f)) = (&w[0].tok, &w[1].tok) {
                if kw == "def" {
                    self.defs.insert(Name::new(f));
                }
            }
        }
        let mut defs = Vec::<Def>::new();
        while self.is_kw("def") {
            let s = self.span();
            self.bump();
            let name = self.ident()?;
            if defs.iter().any(|d| d.name == name) {
                return Err(ParseError { line: s.line, col: s.col, msg: format!("duplicate def `{name}`") });
            }
            self.expect(Tok::Colon)?;
            let ty = self.ty()?;
            self.expect(Tok::Eq)?;
            let body = self.expr()?;
            self.expect(Tok::Semi)?;
            spans.insert(name.to_string(), s);
            defs.push(Def { name, ty, body });
        }
        spans.insert("main".into(), self.span());
        self.expect_kw("main")?;
        self.expect(Tok::Eq)?;
        let main = self.expr()?;
        self.expect(Tok::Semi)?;
        self.expect(Tok::Eof)?;
        Ok(SourceUnit { processes, defs: Defs(defs), main, spans })
    }
}

/// Parses a complete `.chor` source unit.
pub fn parse(text: &str) -> Result<SourceUnit, ParseError> {
    Parser::new(text, BTreeSet::new())?.program()
}

/// Parses a standalone type; identifiers outside `procs` must be bound.
pub fn parse_type(text: &str, procs: &[&str]) -> Result<Type, ParseError> {
    let mut p = Parser::new(text, procs.iter().map(|s| Name::new(s)).collect())?;
    let t = p.ty()?;
    p.expect(Tok::Eof)?;
    Ok(t)
}

pub fn parse_kind(text: &str, procs: &[&str]) -> Result<Kind, ParseError> {
    let mut p = Parser::new(text, procs.iter().map(|s| Name::new(s)).collect())?;
    let k = p.kind()?;
    p.expect(Tok::Eof)?;
    Ok(k)
}

/// Parses a standalone term; `defs` lists the names that denote global definitions.
pub fn parse_expr(text: &str, procs: &[&str], defs: &[&str]) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text, procs.iter().map(|s| Name::new(s)).collect())?;
    p.defs = defs.iter().map(|s| Name::new(s)).collect();
    let m = p.expr()?;
    p.expect(Tok::Eof)?;
    Ok(m)
}

impl Parser {
    pub(crate) fn local_parser(src: &str, procs: BTreeSet<Name>) -> PResult<Self> {
        Parser::new(src, procs)
    }
    pub(crate) fn push_tyvar(&mut self, x: &Name) {
        self.tyvars.push(x.clone());
    }
    pub(crate) fn pop_tyvar(&mut self) {
        self.tyvars.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::alpha_eq_expr;

    const PROCS: &[&str] = &["Alice", "Bob"];

    #[test]
    fn int_literal() {
        assert_eq!(parse_expr("5@Alice", PROCS, &[]).unwrap(), Expr::int(5, "Alice"));
    }

    #[test]
    fn com_application() {
        let m = parse_expr("com[fn X::proc => Int@X] Alice Bob (5@Alice)", PROCS, &[]).unwrap();
        let t = Type::lam("X", Kind::Proc, Type::int_at(Type::var("X")));
        assert_eq!(m, Expr::app(Expr::com(t, "Alice", "Bob"), Expr::int(5, "Alice")));
    }

    #[test]
    fn let_is_sugar_for_application() {
        let m = parse_expr("let x : Int@Alice = 5@Alice in x", PROCS, &[]).unwrap();
        let expect = Expr::app(Expr::lam("x", Type::int_at(Type::proc("Alice")), Expr::var("x")), Expr::int(5, "Alice"));
        assert_eq!(m, expect);
    }

    #[test]
    fn if_is_sugar_for_case() {
        let m = parse_expr("if true@Alice then 1@Bob else 2@Bob", PROCS, &[]).unwrap();
        let c = Expr::Inl(Type::unit_at(Type::proc("Alice")), Box::new(Expr::unit("Alice")));
        let expect = Expr::case(c, "z", Expr::int(1, "Bob"), "z", Expr::int(2, "Bob"));
        assert!(alpha_eq_expr(&m, &expect));
    }

    #[test]
    fn type_application_binds_tighter() {
        let m = parse_expr("f x [Alice] y", PROCS, &["f"]).unwrap();
        let expect = Expr::app(
            Expr::app(Expr::def("f"), Expr::tapp(Expr::var("x"), Type::proc("Alice"))),
            Expr::var("y"),
        );
        assert_eq!(m, expect);
    }

    #[test]
    fn arrow_rho_and_precedence() {
        let t = parse_type("Int@A * Int@B + ()@A ->{A, B} Int@B -> Int@A", &["A", "B"]).unwrap();
        let expect = Type::arrow(
            Type::sum(
                Type::prod(Type::int_at(Type::proc("A")), Type::int_at(Type::proc("B"))),
                Type::unit_at(Type::proc("A")),
            ),
            ProcSet::procs(["A", "B"]),
            Type::arrow(Type::int_at(Type::proc("B")), ProcSet::new(), Type::int_at(Type::proc("A"))),
        );
        assert_eq!(t, expect);
    }

    #[test]
    fn kinds() {
        assert_eq!(
            parse_kind("proc \\ {A} => *", &["A"]).unwrap(),
            Kind::arrow(Kind::without(Kind::Proc, ProcSet::procs(["A"])), Kind::Star)
        );
    }

    #[test]
    fn unknown_process_is_an_error() {
        let e = parse_expr("5@Carol", PROCS, &[]).unwrap_err();
        assert!(e.msg.contains("unknown process"), "{e}");
    }

    #[test]
    fn program_header_and_duplicates() {
        let u = parse("processes A, B;\ndef f : ()@A -> ()@A = \\x:()@A. x;\nmain = f ()@A;").unwrap();
        assert_eq!(u.processes.len(), 2);
        assert!(matches!(u.main, Expr::App(ref f, _) if **f == Expr::def("f")));
        assert_eq!(u.spans["main"], Span { line: 3, col: 1 });
        let e = parse("processes A, A; main = ()@A;").unwrap_err();
        assert!(e.msg.contains("duplicate process"));
        let e = parse("processes A; def f : ()@A = ()@A; def f : ()@A = ()@A; main = ()@A;").unwrap_err();
        assert!(e.msg.contains("duplicate def"));
    }

    #[test]
    fn syntax_error_position() {
        let e = parse("processes A;\nmain = (()@A;").unwrap_err();
        assert_eq!(e.line, 2);
    }
}
