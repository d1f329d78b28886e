use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::lexer::{tokenize, Token, TokenKind};
use super::{Decl, Diagnostic, DiagnosticKind, Document, Pos, SeriesDecl};
use crate::algebra::{Gen, GeneratorDecl, GradedPoly, Var};
use crate::fab::PairChain;
use crate::fgl::OrdinaryFgl;
use crate::hopf::{HopfAlgebraSpec, HopfGenerator, Ring};
use crate::hopf_fgl::{low_term_violation, HopfFgl};
use crate::series::{Multidegree, TruncatedSeries};

type PResult<T> = Result<T, Diagnostic>;

/// Parses and validates a document. Every rejection is positioned at the
/// first offending token.
pub fn parse_document(text: &str) -> PResult<Document> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens,
        at: 0,
        expected: BTreeSet::new(),
        doc: Document::new(),
    };
    while !p.check(&TokenKind::Eof) {
        p.decl()?;
    }
    Ok(p.doc)
}

#[derive(Debug, Clone)]
enum Expr {
    Int(BigInt),
    Name { name: String, tag: Option<(String, Pos)> },
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Pow(Box<Node>, u32),
}

#[derive(Debug, Clone)]
struct Node {
    expr: Expr,
    pos: Pos,
}

/// Where an expression is evaluated: over `ring`, with Hopf generators
/// tagged into `arity` factors.
struct Scope<'a> {
    ring: &'a Ring,
    hopf: &'a BTreeMap<String, Gen>,
    arity: usize,
    context: &'a str,
}

impl Scope<'_> {
    fn eval(&self, n: &Node) -> PResult<GradedPoly> {
        Ok(match &n.expr {
            Expr::Int(i) => GradedPoly::constant(BigRational::from_integer(i.clone())),
            Expr::Name { name, tag } => self.var(name, tag.as_ref(), n.pos)?,
            Expr::Neg(a) => -self.eval(a)?,
            Expr::Add(a, b) => self.eval(a)? + self.eval(b)?,
            Expr::Sub(a, b) => self.eval(a)? - self.eval(b)?,
            Expr::Mul(a, b) => self.eval(a)? * self.eval(b)?,
            Expr::Pow(a, e) => self.eval(a)?.pow(*e),
        })
    }

    fn var(&self, name: &str, tag: Option<&(String, Pos)>, pos: Pos) -> PResult<GradedPoly> {
        if let Some(g) = self.ring.generator(name) {
            if let Some((_, tpos)) = tag {
                return Err(Diagnostic::new(
                    *tpos,
                    DiagnosticKind::IllTyped,
                    format!("base ring generator `{name}` takes no factor tag"),
                ));
            }
            return Ok(GradedPoly::var(Var::base(g.clone())));
        }
        let Some(g) = self.hopf.get(name) else {
            return Err(Diagnostic::new(
                pos,
                DiagnosticKind::Undeclared,
                format!("undeclared generator `{name}`"),
            ));
        };
        let tag = match (tag, self.arity) {
            (_, 0) => {
                return Err(Diagnostic::new(
                    pos,
                    DiagnosticKind::IllTyped,
                    format!("Hopf generator `{name}` cannot occur in {}", self.context),
                ))
            }
            (None, 1) => 1,
            (None, _) => {
                return Err(Diagnostic::new(
                    pos,
                    DiagnosticKind::IllTyped,
                    format!("Hopf generator `{name}` needs a factor tag in {}", self.context),
                ))
            }
            (Some((t, tpos)), arity) => match t.parse::<usize>() {
                Ok(t) if (1..=arity).contains(&t) => t as u8,
                _ => {
                    return Err(Diagnostic::new(
                        *tpos,
                        DiagnosticKind::IllTyped,
                        format!("factor tag <{t}> in a {arity}-factor context ({})", self.context),
                    ))
                }
            },
        };
        Ok(GradedPoly::var(Var::new(g.clone(), tag)))
    }
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    /// Descriptions of the tokens tried at the current position.
    expected: BTreeSet<String>,
    doc: Document,
}

struct HopfGenSyntax {
    name: String,
    pos: Pos,
    degree: i64,
    delta: Node,
    counit: Node,
    antipode: Node,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.at]
    }

    fn pos(&self) -> Pos {
        self.peek().pos
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if t.kind != TokenKind::Eof {
            self.at += 1;
        }
        self.expected.clear();
        t
    }

    fn check(&mut self, kind: &TokenKind) -> bool {
        if self.peek().kind == *kind {
            return true;
        }
        self.expected.insert(kind.describe());
        false
    }

    fn check_kw(&mut self, kw: &str) -> bool {
        if matches!(&self.peek().kind, TokenKind::Ident(s) if s == kw) {
            return true;
        }
        self.expected.insert(format!("`{kw}`"));
        false
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        let ok = self.check(kind);
        if ok {
            self.advance();
        }
        ok
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        let ok = self.check_kw(kw);
        if ok {
            self.advance();
        }
        ok
    }

    fn unexpected(&mut self) -> Diagnostic {
        let t = self.peek();
        let mut d = Diagnostic::new(
            t.pos,
            DiagnosticKind::Syntax,
            format!("unexpected {}", t.kind.describe()),
        );
        d.expected = std::mem::take(&mut self.expected).into_iter().collect();
        d
    }

    fn expect(&mut self, kind: TokenKind) -> PResult<Pos> {
        if self.check(&kind) {
            Ok(self.advance().pos)
        } else {
            Err(self.unexpected())
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<Pos> {
        if self.check_kw(kw) {
            Ok(self.advance().pos)
        } else {
            Err(self.unexpected())
        }
    }

    fn ident(&mut self) -> PResult<(String, Pos)> {
        if let TokenKind::Ident(s) = &self.peek().kind {
            let s = s.clone();
            return Ok((s, self.advance().pos));
        }
        self.expected.insert("name".into());
        Err(self.unexpected())
    }

    fn int_text(&mut self) -> PResult<(String, Pos)> {
        if let TokenKind::Int(s) = &self.peek().kind {
            let s = s.clone();
            return Ok((s, self.advance().pos));
        }
        self.expected.insert("integer".into());
        Err(self.unexpected())
    }

    fn int<T: std::str::FromStr>(&mut self) -> PResult<(T, Pos)> {
        let (s, pos) = self.int_text()?;
        let v = s
            .parse()
            .map_err(|_| Diagnostic::new(pos, DiagnosticKind::Invalid, format!("integer {s} is out of range")))?;
        Ok((v, pos))
    }

    fn signed_int(&mut self) -> PResult<i64> {
        let negative = self.eat(&TokenKind::Minus);
        let (s, pos) = self.int_text()?;
        let text = if negative { format!("-{s}") } else { s };
        text.parse()
            .map_err(|_| Diagnostic::new(pos, DiagnosticKind::Invalid, format!("integer {text} is out of range")))
    }

    fn new_decl_name(&mut self) -> PResult<(String, Pos)> {
        let (name, pos) = self.ident()?;
        if let Some(d) = self.doc.get(&name) {
            return Err(Diagnostic::new(
                pos,
                DiagnosticKind::Duplicate,
                format!("`{name}` is already declared as a {}", d.keyword()),
            ));
        }
        Ok((name, pos))
    }

    fn lookup<T: Clone>(
        &mut self,
        want: &str,
        get: impl for<'d> Fn(&'d Document, &str) -> Option<&'d T>,
    ) -> PResult<T> {
        let (name, pos) = self.ident()?;
        if let Some(v) = get(&self.doc, &name) {
            return Ok(v.clone());
        }
        Err(match self.doc.get(&name) {
            Some(d) => Diagnostic::new(
                pos,
                DiagnosticKind::IllTyped,
                format!("`{name}` is a {}, expected a {want}", d.keyword()),
            ),
            None => Diagnostic::new(pos, DiagnosticKind::Undeclared, format!("undeclared {want} `{name}`")),
        })
    }

    fn push(&mut self, decl: Decl, pos: Pos) -> PResult<()> {
        self.doc
            .push(decl)
            .map_err(|e| Diagnostic::new(pos, DiagnosticKind::Invalid, e.to_string()))
    }

    fn decl(&mut self) -> PResult<()> {
        if self.eat_kw("ring") {
            self.ring()
        } else if self.eat_kw("hopf") {
            self.hopf()
        } else if self.eat_kw("series") {
            self.series(false)
        } else if self.eat_kw("hopffgl") {
            self.series(true)
        } else if self.eat_kw("chain") {
            self.chain()
        } else {
            Err(self.unexpected())
        }
    }

    fn ring(&mut self) -> PResult<()> {
        let (name, pos) = self.new_decl_name()?;
        self.expect(TokenKind::LBrace)?;
        let mut gens: Vec<Gen> = Vec::new();
        while self.eat_kw("gen") {
            let (g, gpos) = self.ident()?;
            if gens.iter().any(|h| h.name == g) {
                return Err(Diagnostic::new(
                    gpos,
                    DiagnosticKind::Duplicate,
                    format!("generator `{g}` is declared twice in ring `{name}`"),
                ));
            }
            self.expect(TokenKind::Colon)?;
            self.expect_kw("deg")?;
            self.expect(TokenKind::Eq)?;
            let degree = self.signed_int()?;
            let mut weight = 1;
            if self.eat(&TokenKind::Comma) {
                self.expect_kw("weight")?;
                self.expect(TokenKind::Eq)?;
                let (w, wpos) = self.int::<u32>()?;
                if w == 0 {
                    return Err(Diagnostic::new(
                        wpos,
                        DiagnosticKind::Invalid,
                        "weight must be at least 1",
                    ));
                }
                weight = w;
            }
            self.expect(TokenKind::Semi)?;
            gens.push(GeneratorDecl::base(g, degree, weight));
        }
        self.expect(TokenKind::RBrace)?;
        let ring = Ring::new(name, gens).map_err(|e| Diagnostic::new(pos, DiagnosticKind::Invalid, e.to_string()))?;
        self.push(Decl::Ring(Arc::new(ring)), pos)
    }

    fn hopf(&mut self) -> PResult<()> {
        let (name, pos) = self.new_decl_name()?;
        self.expect_kw("over")?;
        let ring = self.lookup("ring", |d, n| d.ring(n))?;
        self.expect(TokenKind::LBrace)?;
        let mut syntax: Vec<HopfGenSyntax> = Vec::new();
        while self.eat_kw("gen") {
            let (g, gpos) = self.ident()?;
            if syntax.iter().any(|h| h.name == g) || ring.generator(&g).is_some() {
                return Err(Diagnostic::new(
                    gpos,
                    DiagnosticKind::Duplicate,
                    format!("generator `{g}` is already declared"),
                ));
            }
            self.expect(TokenKind::Colon)?;
            self.expect_kw("deg")?;
            self.expect(TokenKind::Eq)?;
            let degree = self.signed_int()?;
            self.expect(TokenKind::LBrace)?;
            let mut images = Vec::new();
            for key in ["delta", "counit", "antipode"] {
                self.expect_kw(key)?;
                self.expect(TokenKind::Eq)?;
                images.push(self.expr()?);
                self.expect(TokenKind::Semi)?;
            }
            self.expect(TokenKind::RBrace)?;
            let [delta, counit, antipode] = <[Node; 3]>::try_from(images).expect("three images");
            syntax.push(HopfGenSyntax {
                name: g,
                pos: gpos,
                degree,
                delta,
                counit,
                antipode,
            });
        }
        self.expect(TokenKind::RBrace)?;

        let decls: BTreeMap<String, Gen> = syntax
            .iter()
            .map(|s| (s.name.clone(), GeneratorDecl::hopf(s.name.clone(), s.degree, 1)))
            .collect();
        let mut gens = Vec::new();
        for s in &syntax {
            let scope = |arity, context| Scope {
                ring: &ring,
                hopf: &decls,
                arity,
                context,
            };
            gens.push(HopfGenerator {
                decl: decls[&s.name].clone(),
                delta: scope(2, "a coproduct").eval(&s.delta)?,
                counit: scope(0, "a counit (an element of the base ring)").eval(&s.counit)?,
                antipode: scope(1, "an antipode").eval(&s.antipode)?,
            });
        }
        let spec = HopfAlgebraSpec::new(name, ring, gens).map_err(|e| {
            let at = syntax.first().map_or(pos, |s| s.pos);
            Diagnostic::new(at, DiagnosticKind::Invalid, e.to_string())
        })?;
        self.push(Decl::Hopf(Arc::new(spec)), pos)
    }

    /// `series` (over a ring) and `hopffgl` (over a Hopf algebra) share
    /// their syntax.
    fn series(&mut self, over_hopf: bool) -> PResult<()> {
        let (name, pos) = self.new_decl_name()?;
        self.expect_kw("over")?;
        let empty = BTreeMap::new();
        let (ring, hopf, hopf_gens) = if over_hopf {
            let h = self.lookup("hopf", |d, n| d.hopf(n))?;
            let gens: BTreeMap<String, Gen> = h
                .generators()
                .iter()
                .map(|g| (g.decl.name.clone(), g.decl.clone()))
                .collect();
            (h.base.clone(), Some(h), gens)
        } else {
            (self.lookup("ring", |d, n| d.ring(n))?, None, empty)
        };
        self.expect_kw("vars")?;
        let (x, _) = self.ident()?;
        self.expect(TokenKind::Comma)?;
        let (y, ypos) = self.ident()?;
        if x == y {
            return Err(Diagnostic::new(
                ypos,
                DiagnosticKind::Invalid,
                format!("the two series variables are both `{x}`"),
            ));
        }
        self.expect_kw("trunc")?;
        let (cutoff, _) = self.int::<u32>()?;
        self.expect(TokenKind::LBrace)?;
        let arity = if over_hopf { 2 } else { 0 };
        let scope = Scope {
            ring: &ring,
            hopf: &hopf_gens,
            arity,
            context: if over_hopf {
                "a coefficient in H⊗H"
            } else {
                "a series coefficient"
            },
        };
        let mut series = TruncatedSeries::new(vec![x, y], arity, cutoff);
        // Position of each coefficient value.
        let mut keys: BTreeMap<Multidegree, Pos> = BTreeMap::new();
        while self.check(&TokenKind::LBracket) {
            let kpos = self.advance().pos;
            let (i, _) = self.int::<u32>()?;
            self.expect(TokenKind::Comma)?;
            let (j, _) = self.int::<u32>()?;
            self.expect(TokenKind::RBracket)?;
            self.expect(TokenKind::Eq)?;
            let vpos = self.pos();
            let e = self.expr()?;
            self.expect(TokenKind::Semi)?;
            let md = Multidegree(vec![i, j]);
            if keys.insert(md.clone(), vpos).is_some() {
                return Err(Diagnostic::new(
                    kpos,
                    DiagnosticKind::Duplicate,
                    format!("coefficient {md} is given twice"),
                ));
            }
            let c = scope.eval(&e)?;
            series.add_term(md, &c);
        }
        let close = self.expect(TokenKind::RBrace)?;
        let at = |md: &[u32]| keys.get(&Multidegree(md.to_vec())).copied().unwrap_or(close);
        let invalid = |p: Pos, msg: String| Diagnostic::new(p, DiagnosticKind::Invalid, msg);

        let decl = match hopf {
            Some(h) => {
                if let Some((md, msg)) = low_term_violation(&h, &series).map_err(|e| invalid(pos, e.to_string()))? {
                    return Err(invalid(at(&md.0), msg));
                }
                let g = HopfFgl::new(name, h, series).map_err(|e| invalid(pos, e.to_string()))?;
                Decl::HopfFgl(g)
            }
            None => {
                let constant = series.constant_coefficient();
                if !constant.is_zero() {
                    return Err(invalid(
                        at(&[0, 0]),
                        format!("constant term {} is not 0", constant.display(0)),
                    ));
                }
                if cutoff >= 1 {
                    for md in [[1, 0], [0, 1]] {
                        let c = series.coeff(&md);
                        if c != GradedPoly::one() {
                            let md = Multidegree(md.to_vec());
                            return Err(invalid(
                                at(&md.0),
                                format!("coefficient {md} is {}, expected 1", c.display(0)),
                            ));
                        }
                    }
                }
                let fgl = OrdinaryFgl::new(name, series, false).map_err(|e| invalid(pos, e.to_string()))?;
                Decl::Series(SeriesDecl { ring, fgl })
            }
        };
        self.push(decl, pos)
    }

    fn chain(&mut self) -> PResult<()> {
        let (name, pos) = self.new_decl_name()?;
        self.expect(TokenKind::LBrace)?;
        self.expect_kw("pairs")?;
        self.expect(TokenKind::Eq)?;
        let mut pairs = Vec::new();
        loop {
            let ppos = self.expect(TokenKind::LParen)?;
            let (k, _) = self.int::<u64>()?;
            self.expect(TokenKind::Comma)?;
            let (l, _) = self.int::<u64>()?;
            self.expect(TokenKind::RParen)?;
            if k == 0 || l == 0 {
                return Err(Diagnostic::new(
                    ppos,
                    DiagnosticKind::Invalid,
                    format!("pair ({k},{l}) has an entry below 1"),
                ));
            }
            pairs.push((k, l));
            if !self.eat(&TokenKind::Comma) {
                break;
            }
        }
        self.expect(TokenKind::Semi)?;
        let mut dim = None;
        if self.eat_kw("dim") {
            self.expect(TokenKind::Eq)?;
            dim = Some(self.int::<u64>()?.0);
            self.expect(TokenKind::Semi)?;
        }
        self.expect(TokenKind::RBrace)?;
        let c = PairChain::new(name, pairs, dim)
            .map_err(|e| Diagnostic::new(pos, DiagnosticKind::Invalid, e.to_string()))?;
        self.push(Decl::Chain(c), pos)
    }

    // expr := term (("+" | "-") term)*
    fn expr(&mut self) -> PResult<Node> {
        let mut lhs = self.term()?;
        loop {
            let pos = self.pos();
            if self.eat(&TokenKind::Plus) {
                let rhs = self.term()?;
                lhs = Node {
                    expr: Expr::Add(Box::new(lhs), Box::new(rhs)),
                    pos,
                };
            } else if self.eat(&TokenKind::Minus) {
                let rhs = self.term()?;
                lhs = Node {
                    expr: Expr::Sub(Box::new(lhs), Box::new(rhs)),
                    pos,
                };
            } else {
                return Ok(lhs);
            }
        }
    }

    // term := power ("*" power)*
    fn term(&mut self) -> PResult<Node> {
        let mut lhs = self.power()?;
        loop {
            let pos = self.pos();
            if !self.eat(&TokenKind::Star) {
                return Ok(lhs);
            }
            let rhs = self.power()?;
            lhs = Node {
                expr: Expr::Mul(Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
    }

    // power := unary ("^" INT)*
    fn power(&mut self) -> PResult<Node> {
        let mut base = self.unary()?;
        loop {
            let pos = self.pos();
            if !self.eat(&TokenKind::Caret) {
                return Ok(base);
            }
            let (e, _) = self.int::<u32>()?;
            base = Node {
                expr: Expr::Pow(Box::new(base), e),
                pos,
            };
        }
    }

    // unary := "-" unary | atom
    fn unary(&mut self) -> PResult<Node> {
        let pos = self.pos();
        if self.eat(&TokenKind::Minus) {
            let inner = self.unary()?;
            return Ok(Node {
                expr: Expr::Neg(Box::new(inner)),
                pos,
            });
        }
        self.atom()
    }

    // atom := INT | NAME ("<" INT ">")? | "(" expr ")"
    fn atom(&mut self) -> PResult<Node> {
        let pos = self.pos();
        match self.peek().kind.clone() {
            TokenKind::Int(s) => {
                self.advance();
                let i: BigInt = s.parse().expect("digits");
                Ok(Node {
                    expr: Expr::Int(i),
                    pos,
                })
            }
            TokenKind::Ident(name) => {
                self.advance();
                let mut tag = None;
                if self.eat(&TokenKind::Lt) {
                    let t = self.int_text()?;
                    self.expect(TokenKind::Gt)?;
                    tag = Some(t);
                }
                Ok(Node {
                    expr: Expr::Name { name, tag },
                    pos,
                })
            }
            TokenKind::LParen => {
                self.advance();
                let inner = self.expr()?;
                self.expect(TokenKind::RParen)?;
                Ok(inner)
            }
            _ => {
                self.expected.insert("integer".into());
                self.expected.insert("name".into());
                self.expected.insert("`(`".into());
                self.expected.insert("`-`".into());
                Err(self.unexpected())
            }
        }
    }
}
