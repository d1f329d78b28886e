//! The declarative input format: rings, Hopf algebras, formal group law
//! series, formal groups over Hopf algebras and pair chains.
//!
//! ```text
//! ring R { gen b : deg=-2; }
//! hopf H over R { gen h : deg=-2 { delta = h<1> + h<2>; counit = 0; antipode = -h; } }
//! series F over R vars x,y trunc 6 { [1,0]=1; [0,1]=1; [1,1]=b; }
//! hopffgl G over H vars x,y trunc 6 { [1,0]=1; [0,1]=1; [1,1]=h<1>*h<2>; }
//! chain C { pairs = (2,3), (4,9); dim = 3; }
//! ```

mod lexer;
mod parser;
mod printer;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fab::PairChain;
use crate::fgl::OrdinaryFgl;
use crate::hopf::{HopfAlgebraSpec, Ring};
use crate::hopf_fgl::HopfFgl;

pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse_document;
pub use printer::print_document;

/// 1-based line and column (in characters).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    Lexical,
    Syntax,
    Undeclared,
    Duplicate,
    IllTyped,
    Invalid,
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagnosticKind::Lexical => "lexical error",
            DiagnosticKind::Syntax => "syntax error",
            DiagnosticKind::Undeclared => "undeclared reference",
            DiagnosticKind::Duplicate => "duplicate name",
            DiagnosticKind::IllTyped => "ill-typed expression",
            DiagnosticKind::Invalid => "invalid declaration",
        })
    }
}

/// A rejection, positioned at the first offending token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub pos: Pos,
    pub kind: DiagnosticKind,
    pub message: String,
    /// Tokens that would have been accepted, for syntax errors.
    pub expected: Vec<String>,
}

impl Diagnostic {
    pub fn new(pos: Pos, kind: DiagnosticKind, message: impl Into<String>) -> Self {
        Diagnostic {
            pos,
            kind,
            message: message.into(),
            expected: Vec::new(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.pos, self.kind, self.message)?;
        match self.expected.as_slice() {
            [] => Ok(()),
            [one] => write!(f, "; expected {one}"),
            many => write!(f, "; expected one of {}", many.join(", ")),
        }
    }
}

impl std::error::Error for Diagnostic {}

/// A formal group law series together with the ring it lives over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesDecl {
    pub ring: Arc<Ring>,
    pub fgl: OrdinaryFgl,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decl {
    Ring(Arc<Ring>),
    Hopf(Arc<HopfAlgebraSpec>),
    Series(SeriesDecl),
    HopfFgl(HopfFgl),
    Chain(PairChain),
}

impl Decl {
    pub fn name(&self) -> &str {
        match self {
            Decl::Ring(r) => &r.name,
            Decl::Hopf(h) => &h.name,
            Decl::Series(s) => &s.fgl.name,
            Decl::HopfFgl(g) => &g.name,
            Decl::Chain(c) => &c.name,
        }
    }

    pub fn keyword(&self) -> &'static str {
        match self {
            Decl::Ring(_) => "ring",
            Decl::Hopf(_) => "hopf",
            Decl::Series(_) => "series",
            Decl::HopfFgl(_) => "hopffgl",
            Decl::Chain(_) => "chain",
        }
    }
}

/// Declarations in order, with unique names; every reference points to an
/// earlier declaration.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    decls: Vec<Decl>,
    index: BTreeMap<String, usize>,
}

impl Document {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn decls(&self) -> &[Decl] {
        &self.decls
    }

    pub fn get(&self, name: &str) -> Option<&Decl> {
        self.index.get(name).map(|i| &self.decls[*i])
    }

    pub fn ring(&self, name: &str) -> Option<&Arc<Ring>> {
        match self.get(name) {
            Some(Decl::Ring(r)) => Some(r),
            _ => None,
        }
    }

    pub fn hopf(&self, name: &str) -> Option<&Arc<HopfAlgebraSpec>> {
        match self.get(name) {
            Some(Decl::Hopf(h)) => Some(h),
            _ => None,
        }
    }

    pub fn series(&self, name: &str) -> Option<&SeriesDecl> {
        match self.get(name) {
            Some(Decl::Series(s)) => Some(s),
            _ => None,
        }
    }

    pub fn hopffgl(&self, name: &str) -> Option<&HopfFgl> {
        match self.get(name) {
            Some(Decl::HopfFgl(g)) => Some(g),
            _ => None,
        }
    }

    pub fn chain(&self, name: &str) -> Option<&PairChain> {
        match self.get(name) {
            Some(Decl::Chain(c)) => Some(c),
            _ => None,
        }
    }

    /// Appends a declaration. Its name must be new, the ring or Hopf
    /// algebra it refers to must already be declared (and equal), and all
    /// coefficients must be integers so that the document can be printed.
    pub fn push(&mut self, decl: Decl) -> Result<()> {
        let name = decl.name().to_string();
        if self.index.contains_key(&name) {
            return Err(Error::IllFormed(format!("duplicate declaration `{name}`")));
        }
        let requires_ring = |doc: &Self, r: &Arc<Ring>| match doc.ring(&r.name) {
            Some(known) if known == r => Ok(()),
            _ => Err(Error::IllFormed(format!("ring `{}` is not declared earlier", r.name))),
        };
        match &decl {
            Decl::Ring(_) | Decl::Chain(_) => {}
            Decl::Hopf(h) => requires_ring(self, &h.base)?,
            Decl::Series(s) => {
                requires_ring(self, &s.ring)?;
                integral(s.fgl.series().terms().map(|(_, c)| c), &name)?;
            }
            Decl::HopfFgl(g) => {
                match self.hopf(&g.hopf().name) {
                    Some(h) if h == g.hopf() => {}
                    _ => {
                        return Err(Error::IllFormed(format!(
                            "Hopf algebra `{}` is not declared earlier",
                            g.hopf().name
                        )))
                    }
                }
                integral(g.series().terms().map(|(_, c)| c), &name)?;
            }
        }
        if let Decl::Hopf(h) = &decl {
            for g in h.generators() {
                integral([&g.delta, &g.counit, &g.antipode].into_iter(), &name)?;
            }
        }
        self.index.insert(name, self.decls.len());
        self.decls.push(decl);
        Ok(())
    }
}

fn integral<'a>(mut cs: impl Iterator<Item = &'a crate::algebra::GradedPoly>, name: &str) -> Result<()> {
    if cs.all(|c| c.is_integral()) {
        Ok(())
    } else {
        Err(Error::IllFormed(format!("`{name}` has non-integer coefficients")))
    }
}
