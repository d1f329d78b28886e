use std::cmp::Ordering;
use std::fmt;

use super::generator::Var;

/// A product of generator powers, kept sorted by variable with no zero
/// exponents. Ordered by total exponent first, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        Monomial { factors: vec![(v, 1)] }
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut m = Monomial::one();
        for (v, e) in factors {
            m.mul_var(v, e);
        }
        m
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn total_exponent(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|(v, e)| v.gen.degree * i64::from(*e)).sum()
    }

    pub fn weight(&self) -> u32 {
        self.factors.iter().map(|(v, e)| v.gen.weight * e).sum()
    }

    pub fn max_tag(&self) -> u8 {
        self.factors.iter().map(|(v, _)| v.tag).max().unwrap_or(0)
    }

    pub fn mul_var(&mut self, v: Var, exp: u32) {
        if exp == 0 {
            return;
        }
        match self.factors.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) => self.factors[i].1 += exp,
            Err(i) => self.factors.insert(i, (v, exp)),
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            match self.factors[i].0.cmp(&other.factors[j].0) {
                Ordering::Less => {
                    out.push(self.factors[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.factors[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.factors[i].0.clone(), self.factors[i].1 + other.factors[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        Monomial { factors: out }
    }

    /// Rebuilds the monomial with every variable passed through `f`.
    pub fn map_vars(&self, mut f: impl FnMut(&Var) -> Var) -> Monomial {
        Monomial::from_factors(self.factors.iter().map(|(v, e)| (f(v), *e)))
    }

    /// Splits off the exponent of `pred`-matching variables.
    pub fn partition(&self, mut pred: impl FnMut(&Var) -> bool) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) = self.factors.iter().cloned().partition(|(v, _)| pred(v));
        (Monomial { factors: a }, Monomial { factors: b })
    }

    pub fn exponent_of(&self, v: &Var) -> u32 {
        self.factors.iter().find(|(w, _)| w == v).map(|(_, e)| *e).unwrap_or(0)
    }

    pub fn write(&self, f: &mut impl fmt::Write, arity: usize) -> fmt::Result {
        for (k, (v, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                f.write_char('*')?;
            }
            v.write(f, arity)?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_exponent()
            .cmp(&other.total_exponent())
            .then_with(|| self.factors.cmp(&other.factors))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
