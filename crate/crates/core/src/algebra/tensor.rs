use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::generator::{GenKind, Var};
use super::poly::GradedPoly;
use crate::error::{Error, Result};

/// An element of `H^{⊗r}`: a polynomial whose Hopf generators carry factor
/// tags in `1..=r`. Arity 0 is the base ring itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorElement {
    arity: usize,
    poly: GradedPoly,
}

/// Checks the tagging discipline of `p` for an element of arity `arity`.
pub fn check_tags(p: &GradedPoly, arity: usize) -> Result<()> {
    for (m, _) in p.terms() {
        for (v, _) in m.factors() {
            match v.gen.kind {
                GenKind::Base if v.tag != 0 => {
                    return Err(Error::IllFormed(format!(
                        "base generator `{}` carries tag {}",
                        v.gen.name, v.tag
                    )))
                }
                GenKind::Hopf if v.tag == 0 || usize::from(v.tag) > arity => {
                    return Err(Error::IllFormed(format!(
                        "generator `{}` has tag {} in an element of arity {arity}",
                        v.gen.name, v.tag
                    )))
                }
                _ => {}
            }
        }
    }
    Ok(())
}

impl TensorElement {
    pub fn new(arity: usize, poly: GradedPoly) -> Result<Self> {
        check_tags(&poly, arity)?;
        Ok(TensorElement { arity, poly })
    }

    pub fn zero(arity: usize) -> Self {
        TensorElement {
            arity,
            poly: GradedPoly::zero(),
        }
    }

    pub fn scalar(arity: usize, poly: GradedPoly) -> Result<Self> {
        Self::new(arity, poly)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn poly(&self) -> &GradedPoly {
        &self.poly
    }

    pub fn into_poly(self) -> GradedPoly {
        self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Embeds the element in a larger arity; tags are unchanged.
    pub fn widen(&self, arity: usize) -> Result<Self> {
        Self::new(arity, self.poly.clone())
    }

    pub fn truncate(&self, w: u32) -> Self {
        TensorElement {
            arity: self.arity,
            poly: self.poly.truncate(w),
        }
    }

    fn same_arity(&self, other: &Self) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::IllFormed(format!(
                "arity {} combined with arity {}",
                self.arity, other.arity
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_arity(other)?;
        Ok(TensorElement {
            arity: self.arity,
            poly: self.poly.checked_add(&other.poly)?,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_arity(other)?;
        Ok(TensorElement {
            arity: self.arity,
            poly: self.poly.checked_mul(&other.poly)?,
        })
    }

    /// Applies the algebra homomorphism fixed by `image` on each variable;
    /// images must be valid elements of arity `target_arity`.
    pub fn map_generators<F>(&self, target_arity: usize, image: F, cutoff: Option<u32>) -> Result<Self>
    where
        F: FnMut(&Var) -> Option<GradedPoly>,
    {
        let poly = self.poly.map_generators(image, cutoff)?;
        Self::new(target_arity, poly)
    }

    pub fn display(&self) -> String {
        self.poly.display(self.arity)
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.write(f, self.arity)
    }
}

macro_rules! same_arity_op {
    ($tr:ident, $method:ident) => {
        impl $tr for &TensorElement {
            type Output = TensorElement;
            fn $method(self, rhs: &TensorElement) -> TensorElement {
                assert_eq!(self.arity, rhs.arity, "tensor arity mismatch");
                TensorElement {
                    arity: self.arity,
                    poly: $tr::$method(&self.poly, &rhs.poly),
                }
            }
        }
    };
}

same_arity_op!(Add, add);
same_arity_op!(Sub, sub);
same_arity_op!(Mul, mul);

impl Neg for &TensorElement {
    type Output = TensorElement;
    fn neg(self) -> TensorElement {
        TensorElement {
            arity: self.arity,
            poly: -&self.poly,
        }
    }
}
