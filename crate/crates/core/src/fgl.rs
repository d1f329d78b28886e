//! Ordinary formal group laws over a base ring.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::algebra::{substitute_named, Gen, GeneratorDecl, GradedPoly, Var};
use crate::error::{Error, Result};
use crate::report::{Location, VerificationReport};
use crate::series::{solve_functional_inverse, InverseSide, Multidegree, TruncatedSeries, SERIES_VAR_DEGREE};

/// `F(x, y)` with arity-0 coefficients, normalised so that the constant
/// term is 0 and the linear coefficients are 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinaryFgl {
    pub name: String,
    series: TruncatedSeries,
    /// Whether `F(x,y) = F(y,x)` is part of the claim being verified.
    pub commutative: bool,
}

impl OrdinaryFgl {
    pub fn new(name: impl Into<String>, series: TruncatedSeries, commutative: bool) -> Result<Self> {
        if series.vars().len() != 2 {
            return Err(Error::InvalidFgl("a formal group law has two variables".into()));
        }
        if series.arity() != 0 {
            return Err(Error::InvalidFgl("coefficients must lie in the base ring".into()));
        }
        let constant = series.constant_coefficient();
        if !constant.is_zero() {
            return Err(Error::InvalidFgl(format!(
                "constant term `{}` is not 0",
                constant.display(0)
            )));
        }
        for md in [[1, 0], [0, 1]] {
            let c = series.coeff(&md);
            if series.cutoff() >= 1 && c != GradedPoly::one() {
                return Err(Error::InvalidFgl(format!(
                    "coefficient of {} is `{}`, expected 1",
                    Multidegree(md.to_vec()),
                    c.display(0)
                )));
            }
        }
        Ok(OrdinaryFgl {
            name: name.into(),
            series,
            commutative,
        })
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn cutoff(&self) -> u32 {
        self.series.cutoff()
    }

    pub fn truncated(&self, cutoff: u32) -> Self {
        OrdinaryFgl {
            name: self.name.clone(),
            series: self.series.truncated(cutoff),
            commutative: self.commutative,
        }
    }

    /// Unknown generators occurring in the coefficients, by name.
    pub fn unknowns(&self) -> BTreeMap<String, Gen> {
        let mut out = BTreeMap::new();
        for (_, c) in self.series.terms() {
            for (name, g) in c.generators() {
                if g.unknown {
                    out.insert(name, g);
                }
            }
        }
        out
    }

    /// Substitutes values for the unknowns.
    pub fn instantiate(&self, values: &BTreeMap<String, GradedPoly>) -> Result<Self> {
        let series = self.series.map_coefficients(0, |c| Ok(substitute_named(c, values)))?;
        OrdinaryFgl::new(self.name.clone(), series, self.commutative)
    }
}

fn three_vars() -> Vec<String> {
    vec!["x".into(), "y".into(), "z".into()]
}

/// `F(x, F(y, z)) - F(F(x, y), z)` in variables `x, y, z`.
pub fn associativity_residual(f: &TruncatedSeries) -> Result<TruncatedSeries> {
    let vars = three_vars();
    let (arity, cutoff) = (f.arity(), f.cutoff());
    let v = |i| TruncatedSeries::variable(vars.clone(), arity, cutoff, i);
    let f_xy = f.embed_vars(&[0, 1], vars.clone())?;
    let f_yz = f.embed_vars(&[1, 2], vars.clone())?;
    let lhs = f.substitute(&[v(0), f_yz])?;
    let rhs = f.substitute(&[f_xy, v(2)])?;
    lhs.sub(&rhs)
}

/// `F(x, 0) - x` and `F(0, y) - y` as one-variable series.
fn unit_residuals(f: &TruncatedSeries) -> Result<[TruncatedSeries; 2]> {
    let one = vec![f.vars()[0].clone()];
    let x = TruncatedSeries::variable(one.clone(), f.arity(), f.cutoff(), 0);
    let zero = TruncatedSeries::new(one, f.arity(), f.cutoff());
    let left = f.substitute(&[x.clone(), zero.clone()])?.sub(&x)?;
    let right = f.substitute(&[zero, x.clone()])?.sub(&x)?;
    Ok([left, right])
}

/// Checks the unit and associativity axioms (and commutativity when
/// claimed) modulo weight > `cutoff`.
pub fn verify_fgl(f: &OrdinaryFgl, cutoff: u32) -> VerificationReport {
    let started = Instant::now();
    let cutoff = cutoff.min(f.cutoff());
    let s = f.series.truncated(cutoff);
    let mut report = VerificationReport::new(f.name.clone(), "fgl", Some(cutoff));
    let result = (|| -> Result<()> {
        let [left, right] = unit_residuals(&s)?;
        for (label, r) in [("unit-left", left), ("unit-right", right)] {
            for (md, c) in r.terms() {
                report.push(Location::Labeled(label.into(), md.clone()), c.display(0));
            }
        }
        for (md, c) in associativity_residual(&s)?.terms() {
            report.push(Location::Multidegree(md.clone()), c.display(0));
        }
        let asym = s.sub(&s.swap_vars()?)?;
        if let Some((md, _)) = asym.terms().next() {
            if f.commutative {
                for (md, c) in asym.terms() {
                    report.push(Location::Labeled("commutativity".into(), md.clone()), c.display(0));
                }
            } else {
                report.note(format!("not commutative: F(x,y) - F(y,x) is nonzero at {md}"));
            }
        }
        Ok(())
    })();
    match result {
        Ok(()) => report.timed(started),
        Err(e) => VerificationReport::error(f.name.clone(), "fgl", Some(cutoff), e).timed(started),
    }
}

/// The series `θ(x)` with `F(x, θ(x)) = 0`.
pub fn fgl_inverse(f: &OrdinaryFgl, cutoff: u32) -> Result<TruncatedSeries> {
    fgl_inverse_side(f, cutoff, InverseSide::Right)
}

pub fn fgl_inverse_side(f: &OrdinaryFgl, cutoff: u32, side: InverseSide) -> Result<TruncatedSeries> {
    let s = f.series.truncated(cutoff);
    let theta = solve_functional_inverse(&s, side)?;
    theta.rename_vars(vec!["x".into()])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinFgl {
    /// `x + y`
    Additive,
    /// `x + y + xy`
    Multiplicative,
    /// `x + y + Σ a_ij x^i y^j` with free unknowns `a_ij`.
    Generic,
}

/// Name of the unknown coefficient of `x^i y^j`.
pub fn unknown_name(i: u32, j: u32) -> String {
    if i < 10 && j < 10 {
        format!("a{i}{j}")
    } else {
        format!("a{i}_{j}")
    }
}

/// The unknown for `x^i y^j`; in the commutative ansatz `a_ij = a_ji` share
/// the name with the smaller index first.
pub fn unknown_generator(i: u32, j: u32, commutative: bool) -> Gen {
    let (i, j) = if commutative && i > j { (j, i) } else { (i, j) };
    GeneratorDecl::unknown(
        unknown_name(i, j),
        SERIES_VAR_DEGREE * (1 - i64::from(i) - i64::from(j)),
    )
}

/// Built-in laws through total degree `max_degree`.
pub fn builtin_fgl(kind: BuiltinFgl, max_degree: u32, commutative: bool) -> OrdinaryFgl {
    let vars = vec!["x".to_string(), "y".to_string()];
    let mut s = TruncatedSeries::new(vars, 0, max_degree);
    s.add_term(Multidegree(vec![1, 0]), &GradedPoly::one());
    s.add_term(Multidegree(vec![0, 1]), &GradedPoly::one());
    let name = match kind {
        BuiltinFgl::Additive => "additive",
        BuiltinFgl::Multiplicative => {
            s.add_term(Multidegree(vec![1, 1]), &GradedPoly::one());
            "multiplicative"
        }
        BuiltinFgl::Generic => {
            for total in 2..=max_degree {
                for i in 1..total {
                    let g = unknown_generator(i, total - i, commutative);
                    s.add_term(Multidegree(vec![i, total - i]), &GradedPoly::var(Var::base(g)));
                }
            }
            "generic"
        }
    };
    let commutative = commutative || kind != BuiltinFgl::Generic;
    OrdinaryFgl::new(name, s, commutative).expect("built-in laws are normalised")
}

/// One associativity relation: the coefficient of `x^i y^j z^k` in
/// `F(F(x,y),z) - F(x,F(y,z))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub at: Multidegree,
    pub relation: GradedPoly,
}

/// All nonzero associativity relations through total degree `max_degree`,
/// in graded-lex order of the monomial.
pub fn extract_associativity_constraints(f: &OrdinaryFgl, max_degree: u32) -> Result<Vec<Constraint>> {
    let s = f.series.truncated(max_degree);
    Ok(associativity_residual(&s)?
        .terms()
        .map(|(md, c)| Constraint {
            at: md.clone(),
            relation: -c,
        })
        .collect())
}

/// Substitutes values for unknowns into every relation.
pub fn evaluate_constraints(constraints: &[Constraint], values: &BTreeMap<String, GradedPoly>) -> Vec<Constraint> {
    constraints
        .iter()
        .map(|c| Constraint {
            at: c.at.clone(),
            relation: substitute_named(&c.relation, values),
        })
        .collect()
}
