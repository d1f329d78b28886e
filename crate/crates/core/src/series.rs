//! Truncated formal power series in a few variables with tensor-valued
//! coefficients.
//!
//! A term `c·x^e` has total weight `|e| + weight(c)`; every stored term has
//! total weight at most the cutoff. Series variables have weight 1 and
//! cohomological degree 2, the two bookkeepings are kept apart.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed};

use crate::algebra::{check_tags, GradedPoly, Monomial, Var};
use crate::error::{Error, Result};

/// Cohomological degree carried by every series variable.
pub const SERIES_VAR_DEGREE: i64 = 2;

/// Exponent vector of a series monomial, ordered graded-lexicographically:
/// lower total degree first, then larger leading exponents first, so that
/// `x^2 < x*y < y^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multidegree(pub Vec<u32>);

impl Multidegree {
    pub fn zero(n: usize) -> Self {
        Multidegree(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Multidegree(v)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Multidegree) -> Multidegree {
        Multidegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Multidegree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total().cmp(&other.total()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Multidegree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

impl<const N: usize> From<[u32; N]> for Multidegree {
    fn from(v: [u32; N]) -> Self {
        Multidegree(v.to_vec())
    }
}

/// Which argument of a two-variable series is solved for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseSide {
    /// `F(x, θ(x)) = 0`
    Right,
    /// `F(θ(x), x) = 0`
    Left,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    vars: Vec<String>,
    arity: usize,
    cutoff: u32,
    terms: BTreeMap<Multidegree, GradedPoly>,
}

impl TruncatedSeries {
    pub fn new(vars: Vec<String>, arity: usize, cutoff: u32) -> Self {
        assert!(!vars.is_empty(), "a series needs at least one variable");
        TruncatedSeries {
            vars,
            arity,
            cutoff,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        vars: Vec<String>,
        arity: usize,
        cutoff: u32,
        terms: impl IntoIterator<Item = (Multidegree, GradedPoly)>,
    ) -> Result<Self> {
        let mut s = Self::new(vars, arity, cutoff);
        for (md, c) in terms {
            if md.len() != s.vars.len() {
                return Err(Error::SeriesMismatch(format!(
                    "multidegree {md} for a series in {} variables",
                    s.vars.len()
                )));
            }
            check_tags(&c, arity)?;
            s.add_term(md, &c);
        }
        Ok(s)
    }

    /// The series consisting of the `i`-th variable.
    pub fn variable(vars: Vec<String>, arity: usize, cutoff: u32, i: usize) -> Self {
        let n = vars.len();
        let mut s = Self::new(vars, arity, cutoff);
        s.add_term(Multidegree::unit(n, i), &GradedPoly::one());
        s
    }

    pub fn constant(vars: Vec<String>, arity: usize, cutoff: u32, c: &GradedPoly) -> Self {
        let n = vars.len();
        let mut s = Self::new(vars, arity, cutoff);
        s.add_term(Multidegree::zero(n), c);
        s
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Multidegree, &GradedPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, md: &Multidegree) -> GradedPoly {
        self.terms.get(md).cloned().unwrap_or_default()
    }

    pub fn coeff(&self, exps: &[u32]) -> GradedPoly {
        self.coefficient(&Multidegree(exps.to_vec()))
    }

    pub fn constant_coefficient(&self) -> GradedPoly {
        self.coefficient(&Multidegree::zero(self.vars.len()))
    }

    /// Adds `c·x^md`, truncating `c` to the weight budget left by `md`.
    pub fn add_term(&mut self, md: Multidegree, c: &GradedPoly) {
        let total = md.total();
        if total > self.cutoff || c.is_zero() {
            return;
        }
        let c = c.truncate(self.cutoff - total);
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(md.clone()).or_default();
        slot.add_assign_ref(&c);
        if slot.is_zero() {
            self.terms.remove(&md);
        }
    }

    /// Re-truncates at a lower cutoff.
    pub fn truncated(&self, cutoff: u32) -> Self {
        let mut s = Self::new(self.vars.clone(), self.arity, cutoff.min(self.cutoff));
        for (md, c) in &self.terms {
            s.add_term(md.clone(), c);
        }
        s
    }

    fn compatible(&self, other: &Self) -> Result<u32> {
        if self.vars != other.vars {
            return Err(Error::SeriesMismatch(format!(
                "variables ({}) vs ({})",
                self.vars.join(","),
                other.vars.join(",")
            )));
        }
        if self.arity != other.arity {
            return Err(Error::SeriesMismatch(format!(
                "coefficient arity {} vs {}",
                self.arity, other.arity
            )));
        }
        Ok(self.cutoff.min(other.cutoff))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let cutoff = self.compatible(other)?;
        let mut s = self.truncated(cutoff);
        for (md, c) in &other.terms {
            s.add_term(md.clone(), c);
        }
        Ok(s)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coefficients_unchecked(|c| -c)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let cutoff = self.compatible(other)?;
        Ok(self.mul_unchecked(other, cutoff))
    }

    fn mul_unchecked(&self, other: &Self, cutoff: u32) -> Self {
        let mut s = Self::new(self.vars.clone(), self.arity, cutoff);
        for (m1, c1) in &self.terms {
            let t1 = m1.total();
            if t1 > cutoff {
                continue;
            }
            for (m2, c2) in &other.terms {
                let t = t1 + m2.total();
                if t > cutoff {
                    continue;
                }
                let c = c1.mul_truncated(c2, Some(cutoff - t));
                s.add_term(m1.add(m2), &c);
            }
        }
        s
    }

    pub fn scale(&self, c: &GradedPoly) -> Self {
        let mut s = Self::new(self.vars.clone(), self.arity, self.cutoff);
        for (md, d) in &self.terms {
            let budget = self.cutoff - md.total();
            s.add_term(md.clone(), &d.mul_truncated(c, Some(budget)));
        }
        s
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.vars.clone(), self.arity, self.cutoff, &GradedPoly::one());
        for _ in 0..e {
            acc = acc.mul_unchecked(self, self.cutoff);
        }
        acc
    }

    fn map_coefficients_unchecked(&self, mut f: impl FnMut(&GradedPoly) -> GradedPoly) -> Self {
        let mut s = Self::new(self.vars.clone(), self.arity, self.cutoff);
        for (md, c) in &self.terms {
            s.add_term(md.clone(), &f(c));
        }
        s
    }

    /// Applies `f` to every coefficient; results must have arity `arity`.
    pub fn map_coefficients(&self, arity: usize, mut f: impl FnMut(&GradedPoly) -> Result<GradedPoly>) -> Result<Self> {
        let mut s = Self::new(self.vars.clone(), arity, self.cutoff);
        for (md, c) in &self.terms {
            let img = f(c)?;
            check_tags(&img, arity)?;
            s.add_term(md.clone(), &img);
        }
        Ok(s)
    }

    /// Moves coefficient factor `t` to `tags[t - 1]` in an element of arity
    /// `target_arity`.
    pub fn retag(&self, tags: &[u8], target_arity: usize) -> Result<Self> {
        for (i, t) in tags.iter().enumerate() {
            if tags[..i].contains(t) {
                return Err(Error::NonInjectiveTagMap);
            }
            if *t == 0 || usize::from(*t) > target_arity {
                return Err(Error::PositionOutOfRange {
                    position: usize::from(*t),
                    arity: target_arity,
                });
            }
        }
        if tags.len() < self.arity {
            return Err(Error::SeriesMismatch(format!(
                "tag map covers {} of {} factors",
                tags.len(),
                self.arity
            )));
        }
        self.map_coefficients(target_arity, |c| {
            Ok(c.map_vars(|v| {
                if v.tag == 0 {
                    v.clone()
                } else {
                    v.with_tag(tags[usize::from(v.tag) - 1])
                }
            }))
        })
    }

    /// Re-expresses the series in `target_vars`, sending variable `i` to
    /// `target_vars[positions[i]]`. Positions may repeat, which identifies
    /// variables.
    pub fn embed_vars(&self, positions: &[usize], target_vars: Vec<String>) -> Result<Self> {
        if positions.len() != self.vars.len() || positions.iter().any(|p| *p >= target_vars.len()) {
            return Err(Error::SeriesMismatch("bad variable embedding".into()));
        }
        let n = target_vars.len();
        let mut s = Self::new(target_vars, self.arity, self.cutoff);
        for (md, c) in &self.terms {
            let mut e = vec![0; n];
            for (i, p) in positions.iter().enumerate() {
                e[*p] += md.0[i];
            }
            s.add_term(Multidegree(e), c);
        }
        Ok(s)
    }

    /// Renames the variables without moving any exponents.
    pub fn rename_vars(&self, vars: Vec<String>) -> Result<Self> {
        let positions: Vec<usize> = (0..self.vars.len()).collect();
        self.embed_vars(&positions, vars)
    }

    /// Swaps the two variables of a two-variable series.
    pub fn swap_vars(&self) -> Result<Self> {
        if self.vars.len() != 2 {
            return Err(Error::SeriesMismatch("swap needs two variables".into()));
        }
        self.embed_vars(&[1, 0], self.vars.clone())
    }

    /// Composes `self(args[0], args[1], ...)`. Each argument's constant
    /// term must have positive weight so that only finitely many powers
    /// survive the cutoff.
    pub fn substitute(&self, args: &[TruncatedSeries]) -> Result<Self> {
        if args.len() != self.vars.len() {
            return Err(Error::SeriesMismatch(format!(
                "{} arguments for a series in {} variables",
                args.len(),
                self.vars.len()
            )));
        }
        let first = &args[0];
        let mut cutoff = self.cutoff;
        for a in args {
            cutoff = cutoff.min(first.compatible(a)?);
            if let Some(w) = a.constant_coefficient().min_weight() {
                if w == 0 {
                    return Err(Error::NonConvergent(format!(
                        "constant term `{}` has a weight-0 part",
                        a.constant_coefficient().display(a.arity)
                    )));
                }
            }
        }
        if self.arity != 0 && self.arity != first.arity {
            return Err(Error::SeriesMismatch(format!(
                "coefficients of arity {} substituted into arguments of arity {}",
                self.arity, first.arity
            )));
        }
        let (vars, arity) = (first.vars.clone(), first.arity);
        let one = Self::constant(vars.clone(), arity, cutoff, &GradedPoly::one());
        let mut powers: Vec<Vec<TruncatedSeries>> = args.iter().map(|_| vec![one.clone()]).collect();
        let mut out = Self::new(vars, arity, cutoff);
        for (md, c) in &self.terms {
            let mut prod = one.clone();
            for (k, e) in md.0.iter().enumerate() {
                while powers[k].len() <= *e as usize {
                    let next = powers[k].last().unwrap().mul_unchecked(&args[k], cutoff);
                    powers[k].push(next);
                }
                if *e > 0 {
                    prod = prod.mul_unchecked(&powers[k][*e as usize], cutoff);
                }
                if prod.is_zero() {
                    break;
                }
            }
            for (pmd, pc) in &prod.terms {
                let budget = cutoff - pmd.total();
                out.add_term(pmd.clone(), &pc.mul_truncated(c, Some(budget)));
            }
        }
        Ok(out)
    }

    /// Reads a polynomial in series-variable generators `vars` as a series.
    pub fn from_poly(p: &GradedPoly, vars: &[Var], names: Vec<String>, arity: usize, cutoff: u32) -> Self {
        let mut s = Self::new(names, arity, cutoff);
        for (m, c) in p.terms() {
            let exps: Vec<u32> = vars.iter().map(|v| m.exponent_of(v)).collect();
            let (_, rest) = m.partition(|v| vars.contains(v));
            // Coefficient weight is budgeted against the cutoff minus the
            // variables' own weight.
            let md = Multidegree(exps);
            if md.total() <= cutoff && rest.weight() <= cutoff - md.total() {
                s.add_term(md, &GradedPoly::term(c.clone(), rest));
            }
        }
        s
    }

    /// Writes the series as a polynomial in the generators `vars`.
    pub fn to_poly(&self, vars: &[Var]) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (md, c) in &self.terms {
            let m = Monomial::from_factors(vars.iter().cloned().zip(md.0.iter().copied()));
            out.add_assign_ref(&(c * &GradedPoly::term(One::one(), m)));
        }
        out
    }

    pub fn display(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (md, c)) in self.terms.iter().enumerate() {
            let mut mono = String::new();
            for (i, e) in md.0.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push('*');
                }
                mono.push_str(&self.vars[i]);
                if *e > 1 {
                    mono.push_str(&format!("^{e}"));
                }
            }
            let single = c.len() == 1;
            let (m0, c0) = c.terms().next().expect("stored coefficients are nonzero");
            let negative = single && c0.is_negative();
            if k > 0 {
                f.write_str(if negative { " - " } else { " + " })?;
            } else if negative {
                f.write_str("-")?;
            }
            let coeff = if negative { -c } else { c.clone() };
            if mono.is_empty() {
                if single {
                    coeff.write(f, self.arity)?;
                } else {
                    write!(f, "({})", coeff.display(self.arity))?;
                }
                continue;
            }
            if single && m0.is_one() && c0.abs().is_one() {
                let leading_power = k == 0 && negative && md.0.iter().find(|e| **e > 0).is_some_and(|e| *e > 1);
                if leading_power {
                    f.write_str("1*")?;
                }
            } else if single {
                write!(f, "{}*", coeff.display(self.arity))?;
            } else {
                write!(f, "({})*", coeff.display(self.arity))?;
            }
            f.write_str(&mono)?;
        }
        Ok(())
    }
}

/// Solves `F(x, θ(x)) = 0` (or `F(θ(x), x) = 0`) weight level by weight
/// level. The solved variable's coefficient must be `±1 + (weight ≥ 1)`; its
/// inverse is a finite geometric series under truncation.
pub fn solve_functional_inverse(f: &TruncatedSeries, side: InverseSide) -> Result<TruncatedSeries> {
    if f.vars.len() != 2 {
        return Err(Error::SeriesMismatch("functional inverse needs two variables".into()));
    }
    let f = match side {
        InverseSide::Right => f.clone(),
        InverseSide::Left => f.swap_vars()?,
    };
    let cutoff = f.cutoff;
    let lead = f.coeff(&[0, 1]);
    let inv_lead = truncation_inverse(&lead, cutoff, f.arity)?;
    if f.constant_coefficient().min_weight() == Some(0) {
        return Err(Error::NonConvergent(format!(
            "constant term `{}` has a weight-0 part",
            f.constant_coefficient().display(f.arity)
        )));
    }

    let var = vec![f.vars[0].clone()];
    let x = TruncatedSeries::variable(var.clone(), f.arity, cutoff, 0);
    let mut theta = TruncatedSeries::new(var, f.arity, cutoff);
    // Each pass fixes one more weight level; cutoff + 1 levels exist.
    for _ in 0..=cutoff + 1 {
        let value = f.substitute(&[x.clone(), theta.clone()])?;
        let rest = value.sub(&theta.scale(&lead))?;
        let next = rest.scale(&inv_lead).neg();
        if next == theta {
            return Ok(theta);
        }
        theta = next;
    }
    Ok(theta)
}

/// Inverse of `±1 + n` with `n` of positive weight, truncated at `cutoff`.
pub fn truncation_inverse(c: &GradedPoly, cutoff: u32, arity: usize) -> Result<GradedPoly> {
    let unit = c.weight_zero_part();
    let sign = if unit == GradedPoly::one() {
        GradedPoly::one()
    } else if unit == GradedPoly::integer(-1) {
        GradedPoly::integer(-1)
    } else {
        return Err(Error::NotTruncationUnit(c.display(arity)));
    };
    // c = sign·(1 + n)  ⇒  c⁻¹ = sign·Σ (−n)^k
    let n = &(c * &sign) - &GradedPoly::one();
    let minus_n = -&n;
    let mut acc = GradedPoly::one();
    let mut power = GradedPoly::one();
    for _ in 0..cutoff {
        power = power.mul_truncated(&minus_n, Some(cutoff));
        if power.is_zero() {
            break;
        }
        acc.add_assign_ref(&power);
    }
    Ok(&acc * &sign)
}
