//! Exact graded polynomial arithmetic over named generators.
//!
//! Hopf generators carry a factor tag so that a single polynomial can stand
//! for an element of `H^{⊗r}`: `b<1>*c<2>` is `b ⊗ c`. Base-ring generators
//! are shared by all factors and are never tagged. This makes the
//! representation of `Σ a^k ⊗ b^k` canonical.

mod generator;
mod monomial;
mod poly;
mod tensor;

pub use generator::{Gen, GenKind, GeneratorDecl, Var};
pub use monomial::Monomial;
pub use poly::{int, Coeff, GradedPoly, Homogeneity};
pub use tensor::{check_tags, TensorElement};

use crate::error::Result;

pub fn poly_add(p: &GradedPoly, q: &GradedPoly) -> Result<GradedPoly> {
    p.checked_add(q)
}

pub fn poly_mul(p: &GradedPoly, q: &GradedPoly) -> Result<GradedPoly> {
    p.checked_mul(q)
}

/// Extends a generator map to the unique algebra homomorphism and applies it.
pub fn apply_generator_map<F>(image: F, p: &TensorElement, target_arity: usize) -> Result<TensorElement>
where
    F: FnMut(&Var) -> Option<GradedPoly>,
{
    p.map_generators(target_arity, image, None)
}

/// Replaces the named generators by the given values, leaving all others.
pub fn substitute_named(p: &GradedPoly, values: &std::collections::BTreeMap<String, GradedPoly>) -> GradedPoly {
    p.map_generators(
        |v| {
            Some(
                values
                    .get(v.name())
                    .cloned()
                    .unwrap_or_else(|| GradedPoly::var(v.clone())),
            )
        },
        None,
    )
    .expect("every generator has an image")
}

pub fn filtration_truncate(p: &TensorElement, w: u32) -> TensorElement {
    p.truncate(w)
}

pub fn homogeneity_check(p: &GradedPoly) -> Homogeneity {
    p.homogeneity()
}
