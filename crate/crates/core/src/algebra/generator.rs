use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Whether a generator lives in the base ring `R` (shared by every tensor
/// factor) or in the Hopf algebra `H` (carries a factor tag).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenKind {
    Base,
    Hopf,
}

/// A declared generator with its cohomological degree and filtration weight.
///
/// Weight is at least 1 for every declared generator. Solver-introduced
/// unknowns carry weight 0: they only ever enter multiplied by structure of
/// positive weight, so truncation still terminates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorDecl {
    pub name: String,
    pub degree: i64,
    pub weight: u32,
    pub unknown: bool,
    pub kind: GenKind,
}

pub type Gen = Arc<GeneratorDecl>;

impl GeneratorDecl {
    pub fn base(name: impl Into<String>, degree: i64, weight: u32) -> Gen {
        Arc::new(GeneratorDecl {
            name: name.into(),
            degree,
            weight,
            unknown: false,
            kind: GenKind::Base,
        })
    }

    pub fn hopf(name: impl Into<String>, degree: i64, weight: u32) -> Gen {
        Arc::new(GeneratorDecl {
            name: name.into(),
            degree,
            weight,
            unknown: false,
            kind: GenKind::Hopf,
        })
    }

    /// A free symbol in the base ring, used for ansatz coefficients.
    pub fn unknown(name: impl Into<String>, degree: i64) -> Gen {
        Arc::new(GeneratorDecl {
            name: name.into(),
            degree,
            weight: 0,
            unknown: true,
            kind: GenKind::Base,
        })
    }
}

/// A generator occurrence: base generators always carry tag 0, Hopf
/// generators carry the tensor factor `1..=arity` they live in.
#[derive(Clone, Debug)]
pub struct Var {
    pub gen: Gen,
    pub tag: u8,
}

impl Var {
    pub fn new(gen: Gen, tag: u8) -> Self {
        Var { gen, tag }
    }

    pub fn base(gen: Gen) -> Self {
        Var { gen, tag: 0 }
    }

    pub fn name(&self) -> &str {
        &self.gen.name
    }

    pub fn is_base(&self) -> bool {
        self.gen.kind == GenKind::Base
    }

    pub fn with_tag(&self, tag: u8) -> Self {
        Var {
            gen: self.gen.clone(),
            tag,
        }
    }

    /// Writes the variable as it appears in an element of the given arity:
    /// tags are shown only when there are at least two factors.
    pub fn write(&self, f: &mut impl fmt::Write, arity: usize) -> fmt::Result {
        if self.tag == 0 || arity < 2 {
            write!(f, "{}", self.gen.name)
        } else {
            write!(f, "{}<{}>", self.gen.name, self.tag)
        }
    }
}

impl PartialEq for Var {
    fn eq(&self, other: &Self) -> bool {
        self.tag == other.tag && (Arc::ptr_eq(&self.gen, &other.gen) || self.gen.name == other.gen.name)
    }
}

impl Eq for Var {}

impl Hash for Var {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.gen.name.hash(state);
        self.tag.hash(state);
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.gen, &other.gen) {
            return self.tag.cmp(&other.tag);
        }
        self.gen.name.cmp(&other.gen.name).then(self.tag.cmp(&other.tag))
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
