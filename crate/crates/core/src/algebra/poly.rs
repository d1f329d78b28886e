use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::generator::{Gen, Var};
use super::monomial::Monomial;
use crate::error::{Error, Result};

/// Exact coefficients. Documents only ever produce integral values; the
/// rational field is needed for elimination pivots.
pub type Coeff = BigRational;

pub fn int(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

/// Verdict of a homogeneity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    /// The zero polynomial is homogeneous of every degree.
    Zero,
    Degree(i64),
    Inhomogeneous,
}

/// Sparse polynomial over declared generators with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct GradedPoly {
    terms: BTreeMap<Monomial, Coeff>,
}

impl GradedPoly {
    pub fn zero() -> Self {
        GradedPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(int(n))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Coeff::one(), Monomial::var(v))
    }

    pub fn term(c: Coeff, m: Monomial) -> Self {
        let mut p = GradedPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Coeff)>) -> Self {
        let mut p = GradedPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Coefficient of the unit monomial.
    pub fn constant_term(&self) -> Coeff {
        self.coefficient(&Monomial::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &GradedPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub_assign_ref(&mut self, other: &GradedPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }

    pub fn scale(&self, c: &Coeff) -> GradedPoly {
        if c.is_zero() {
            return GradedPoly::zero();
        }
        GradedPoly {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    /// Product dropping every monomial of weight above `cutoff`.
    pub fn mul_truncated(&self, other: &GradedPoly, cutoff: Option<u32>) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (m1, c1) in &self.terms {
            let w1 = m1.weight();
            if cutoff.is_some_and(|w| w1 > w) {
                continue;
            }
            for (m2, c2) in &other.terms {
                if cutoff.is_some_and(|w| w1 + m2.weight() > w) {
                    continue;
                }
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow_truncated(&self, exp: u32, cutoff: Option<u32>) -> GradedPoly {
        let mut acc = GradedPoly::one().truncate_opt(cutoff);
        let mut base = self.truncate_opt(cutoff);
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_truncated(&base, cutoff);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_truncated(&base, cutoff);
            }
        }
        acc
    }

    pub fn pow(&self, exp: u32) -> GradedPoly {
        self.pow_truncated(exp, None)
    }

    /// Drops every monomial of weight greater than `w`.
    pub fn truncate(&self, w: u32) -> GradedPoly {
        GradedPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight() <= w)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn truncate_opt(&self, w: Option<u32>) -> GradedPoly {
        match w {
            Some(w) => self.truncate(w),
            None => self.clone(),
        }
    }

    pub fn min_weight(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::weight).min()
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::weight).max()
    }

    /// The part made of weight-0 monomials.
    pub fn weight_zero_part(&self) -> GradedPoly {
        self.truncate(0)
    }

    pub fn max_tag(&self) -> u8 {
        self.terms.keys().map(Monomial::max_tag).max().unwrap_or(0)
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => Homogeneity::Zero,
            Some(d) => {
                if degrees.all(|e| e == d) {
                    Homogeneity::Degree(d)
                } else {
                    Homogeneity::Inhomogeneous
                }
            }
        }
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Every distinct generator occurring, keyed by name.
    pub fn generators(&self) -> BTreeMap<String, Gen> {
        let mut out = BTreeMap::new();
        for m in self.terms.keys() {
            for (v, _) in m.factors() {
                out.entry(v.gen.name.clone()).or_insert_with(|| v.gen.clone());
            }
        }
        out
    }

    pub fn contains_generator(&self, pred: impl Fn(&Var) -> bool) -> bool {
        self.terms.keys().any(|m| m.factors().iter().any(|(v, _)| pred(v)))
    }

    fn check_universe(&self, other: &GradedPoly) -> Result<()> {
        let mine = self.generators();
        for (name, g) in other.generators() {
            if let Some(h) = mine.get(&name) {
                if **h != *g {
                    return Err(Error::UniverseMismatch(name));
                }
            }
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &GradedPoly) -> Result<GradedPoly> {
        self.check_universe(other)?;
        Ok(self + other)
    }

    pub fn checked_mul(&self, other: &GradedPoly) -> Result<GradedPoly> {
        self.check_universe(other)?;
        Ok(self * other)
    }

    /// Renames variables monomial by monomial, merging terms that collide.
    pub fn map_vars(&self, mut f: impl FnMut(&Var) -> Var) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.map_vars(&mut f), c.clone());
        }
        out
    }

    /// Applies the algebra homomorphism determined by `image` on generators.
    /// Constants map to themselves; `None` from `image` is an error.
    pub fn map_generators<F>(&self, mut image: F, cutoff: Option<u32>) -> Result<GradedPoly>
    where
        F: FnMut(&Var) -> Option<GradedPoly>,
    {
        let mut images: HashMap<Var, Vec<GradedPoly>> = HashMap::new();
        let mut out = GradedPoly::zero();
        for (m, c) in &self.terms {
            let mut prod = GradedPoly::constant(c.clone());
            for (v, e) in m.factors() {
                let powers = match images.entry(v.clone()) {
                    std::collections::hash_map::Entry::Occupied(o) => o.into_mut(),
                    std::collections::hash_map::Entry::Vacant(slot) => {
                        let img = image(v).ok_or_else(|| Error::MissingImage(v.gen.name.clone()))?;
                        slot.insert(vec![GradedPoly::one(), img.truncate_opt(cutoff)])
                    }
                };
                while powers.len() <= *e as usize {
                    let next = powers.last().unwrap().mul_truncated(&powers[1], cutoff);
                    powers.push(next);
                }
                prod = prod.mul_truncated(&powers[*e as usize], cutoff);
                if prod.is_zero() {
                    break;
                }
            }
            out.add_assign_ref(&prod);
        }
        Ok(out)
    }

    /// Groups terms by the part of each monomial *not* selected by `pred`;
    /// each group holds the selected part with its coefficient.
    pub fn split_by(&self, pred: impl Fn(&Var) -> bool) -> BTreeMap<Monomial, GradedPoly> {
        let mut out: BTreeMap<Monomial, GradedPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (sel, rest) = m.partition(&pred);
            out.entry(rest).or_default().add_term(sel, c.clone());
        }
        out
    }

    pub fn write(&self, f: &mut impl fmt::Write, arity: usize) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_char('0');
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if negative {
                    f.write_char('-')?;
                }
            } else if negative {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
                continue;
            }
            // Unary minus binds tighter than `^`, so `-b^2` would read as
            // `(-b)^2`; spell out the unit coefficient in that position.
            let leading_power = k == 0 && negative && m.factors()[0].1 > 1;
            if !mag.is_one() || leading_power {
                write!(f, "{mag}*")?;
            }
            m.write(f, arity)?;
        }
        Ok(())
    }

    pub fn display(&self, arity: usize) -> String {
        let mut s = String::new();
        self.write(&mut s, arity).expect("writing to a String cannot fail");
        s
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arity = usize::from(self.max_tag()).max(2);
        self.write(f, arity)
    }
}

impl From<Var> for GradedPoly {
    fn from(v: Var) -> Self {
        GradedPoly::var(v)
    }
}

impl Add for &GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Add for GradedPoly {
    type Output = GradedPoly;
    fn add(mut self, rhs: GradedPoly) -> GradedPoly {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Sub for &GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        out.sub_assign_ref(rhs);
        out
    }
}

impl Sub for GradedPoly {
    type Output = GradedPoly;
    fn sub(mut self, rhs: GradedPoly) -> GradedPoly {
        self.sub_assign_ref(&rhs);
        self
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        GradedPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        -&self
    }
}

impl Mul for &GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &GradedPoly) -> GradedPoly {
        self.mul_truncated(rhs, None)
    }
}

impl Mul for GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: GradedPoly) -> GradedPoly {
        self.mul_truncated(&rhs, None)
    }
}
