//! Commutative Hopf algebras given by generator images, their structure
//! maps at arbitrary tensor positions, and an axiom verifier.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{check_tags, Gen, GenKind, GeneratorDecl, GradedPoly, Monomial, TensorElement, Var};
use crate::error::{Error, Result};
use crate::report::{Location, VerificationReport};
use crate::series::Multidegree;

/// A commutative base ring: ℤ (or ℚ) adjoined the listed generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ring {
    pub name: String,
    pub gens: Vec<Gen>,
}

impl Ring {
    pub fn new(name: impl Into<String>, gens: Vec<Gen>) -> Result<Self> {
        for (i, g) in gens.iter().enumerate() {
            if g.kind != GenKind::Base {
                return Err(Error::IllFormed(format!(
                    "ring generator `{}` must be a base generator",
                    g.name
                )));
            }
            if g.weight == 0 && !g.unknown {
                return Err(Error::IllFormed(format!("generator `{}` needs weight >= 1", g.name)));
            }
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::IllFormed(format!("duplicate generator `{}`", g.name)));
            }
        }
        Ok(Ring {
            name: name.into(),
            gens,
        })
    }

    /// The ring of integers with no generators.
    pub fn integers() -> Self {
        Ring {
            name: "Z".into(),
            gens: Vec::new(),
        }
    }

    pub fn generator(&self, name: &str) -> Option<&Gen> {
        self.gens.iter().find(|g| g.name == name)
    }
}

/// Structure-map images of one Hopf generator `g`: `Δg` (arity 2), `εg`
/// (arity 0, in the base ring) and `Sg` (arity 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopfGenerator {
    pub decl: Gen,
    pub delta: GradedPoly,
    pub counit: GradedPoly,
    pub antipode: GradedPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopfAlgebraSpec {
    pub name: String,
    pub base: Arc<Ring>,
    gens: Vec<HopfGenerator>,
    index: BTreeMap<String, usize>,
    series_var: Option<String>,
}

impl HopfAlgebraSpec {
    /// Validates names and the arity of every image. Axioms are left to
    /// [`HopfAlgebraSpec::verify`].
    pub fn new(name: impl Into<String>, base: Arc<Ring>, gens: Vec<HopfGenerator>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, g) in gens.iter().enumerate() {
            if g.decl.kind != GenKind::Hopf {
                return Err(Error::IllFormed(format!("`{}` is not a Hopf generator", g.decl.name)));
            }
            if g.decl.weight == 0 {
                return Err(Error::IllFormed(format!(
                    "generator `{}` needs weight >= 1",
                    g.decl.name
                )));
            }
            if base.generator(&g.decl.name).is_some() || index.insert(g.decl.name.clone(), i).is_some() {
                return Err(Error::IllFormed(format!("duplicate generator `{}`", g.decl.name)));
            }
        }
        let spec = HopfAlgebraSpec {
            name: name.into(),
            base,
            gens,
            index,
            series_var: None,
        };
        for g in &spec.gens {
            let n = &g.decl.name;
            check_tags(&g.delta, 2).map_err(|e| Error::IllFormed(format!("delta of `{n}`: {e}")))?;
            check_tags(&g.counit, 0).map_err(|e| Error::IllFormed(format!("counit of `{n}`: {e}")))?;
            check_tags(&g.antipode, 1).map_err(|e| Error::IllFormed(format!("antipode of `{n}`: {e}")))?;
            for p in [&g.delta, &g.counit, &g.antipode] {
                spec.check_declared(p)?;
            }
        }
        Ok(spec)
    }

    /// Fails if `p` mentions a generator not declared here or in the base ring.
    pub fn check_declared(&self, p: &GradedPoly) -> Result<()> {
        for g in p.generators().values() {
            let known = match g.kind {
                GenKind::Hopf => self.generator(&g.name).is_some_and(|h| *h.decl == **g),
                GenKind::Base => g.unknown || self.base.generator(&g.name).is_some_and(|h| **h == **g),
            };
            if !known {
                return Err(Error::IllFormed(format!(
                    "undeclared generator `{}` in `{}`",
                    g.name, self.name
                )));
            }
        }
        Ok(())
    }

    pub fn generators(&self) -> &[HopfGenerator] {
        &self.gens
    }

    pub fn generator(&self, name: &str) -> Option<&HopfGenerator> {
        self.index.get(name).map(|i| &self.gens[*i])
    }

    /// The generator that plays the role of a series variable, if this is
    /// an extended algebra.
    pub fn series_var(&self) -> Option<&str> {
        self.series_var.as_deref()
    }

    /// Adjoins a generator, as in `H[[x]]`. Its images may mention itself.
    pub fn adjoin(&self, name: impl Into<String>, g: HopfGenerator, series_var: bool) -> Result<Self> {
        let mut gens = self.gens.clone();
        let var_name = g.decl.name.clone();
        gens.push(g);
        let mut spec = Self::new(name, self.base.clone(), gens)?;
        if series_var {
            spec.series_var = Some(var_name);
        }
        Ok(spec)
    }

    fn image(&self, v: &Var, pick: impl Fn(&HopfGenerator) -> &GradedPoly) -> Option<&GradedPoly> {
        self.generator(&v.gen.name).map(pick)
    }

    /// `Δ` applied to factor `p` of a polynomial of the given arity.
    pub fn delta_poly(&self, c: &GradedPoly, arity: usize, p: usize, cutoff: Option<u32>) -> Result<GradedPoly> {
        check_position(p, arity)?;
        let p = p as u8;
        c.map_generators(
            |v| {
                if v.is_base() || v.tag < p {
                    Some(GradedPoly::var(v.clone()))
                } else if v.tag > p {
                    Some(GradedPoly::var(v.with_tag(v.tag + 1)))
                } else {
                    let d = self.image(v, |g| &g.delta)?;
                    Some(d.map_vars(|w| {
                        if w.tag == 0 {
                            w.clone()
                        } else {
                            w.with_tag(w.tag + p - 1)
                        }
                    }))
                }
            },
            cutoff,
        )
    }

    /// `ε` applied to factor `p`.
    pub fn eps_poly(&self, c: &GradedPoly, arity: usize, p: usize, cutoff: Option<u32>) -> Result<GradedPoly> {
        check_position(p, arity)?;
        let p = p as u8;
        c.map_generators(
            |v| {
                if v.is_base() || v.tag < p {
                    Some(GradedPoly::var(v.clone()))
                } else if v.tag > p {
                    Some(GradedPoly::var(v.with_tag(v.tag - 1)))
                } else {
                    self.image(v, |g| &g.counit).cloned()
                }
            },
            cutoff,
        )
    }

    /// `S` applied to factor `p`, in place.
    pub fn antipode_poly(&self, c: &GradedPoly, arity: usize, p: usize, cutoff: Option<u32>) -> Result<GradedPoly> {
        check_position(p, arity)?;
        let p = p as u8;
        c.map_generators(
            |v| {
                if v.is_base() || v.tag != p {
                    Some(GradedPoly::var(v.clone()))
                } else {
                    let s = self.image(v, |g| &g.antipode)?;
                    Some(s.map_vars(|w| if w.tag == 0 { w.clone() } else { w.with_tag(p) }))
                }
            },
            cutoff,
        )
    }

    pub fn delta_at(&self, e: &TensorElement, p: usize) -> Result<TensorElement> {
        self.delta_at_truncated(e, p, None)
    }

    pub fn delta_at_truncated(&self, e: &TensorElement, p: usize, cutoff: Option<u32>) -> Result<TensorElement> {
        let out = self.delta_poly(e.poly(), e.arity(), p, cutoff)?;
        TensorElement::new(e.arity() + 1, out)
    }

    pub fn eps_at(&self, e: &TensorElement, p: usize) -> Result<TensorElement> {
        self.eps_at_truncated(e, p, None)
    }

    pub fn eps_at_truncated(&self, e: &TensorElement, p: usize, cutoff: Option<u32>) -> Result<TensorElement> {
        let out = self.eps_poly(e.poly(), e.arity(), p, cutoff)?;
        TensorElement::new(e.arity() - 1, out)
    }

    pub fn antipode_at(&self, e: &TensorElement, p: usize) -> Result<TensorElement> {
        self.antipode_at_truncated(e, p, None)
    }

    pub fn antipode_at_truncated(&self, e: &TensorElement, p: usize, cutoff: Option<u32>) -> Result<TensorElement> {
        let out = self.antipode_poly(e.poly(), e.arity(), p, cutoff)?;
        TensorElement::new(e.arity(), out)
    }

    /// Checks the Hopf axioms on every generator and on a few seeded random
    /// products of generators, modulo weight > `cutoff`.
    pub fn verify(&self, cutoff: u32) -> VerificationReport {
        let started = Instant::now();
        let mut report = VerificationReport::new(self.name.clone(), "hopf", Some(cutoff));
        let mut subjects: Vec<(String, GradedPoly)> = self
            .gens
            .iter()
            .map(|g| (g.decl.name.clone(), GradedPoly::var(Var::new(g.decl.clone(), 1))))
            .collect();
        subjects.extend(self.random_products(cutoff, SPOT_CHECKS, 0x5eed));
        for (name, e) in subjects {
            if let Err(err) = self.check_element(&name, &e, cutoff, &mut report) {
                return VerificationReport::error(self.name.clone(), "hopf", Some(cutoff), err).timed(started);
            }
        }
        report.timed(started)
    }

    /// Distinct seeded products of two or three generators (tag 1) of weight
    /// at most `cutoff`.
    pub fn random_products(&self, cutoff: u32, count: usize, seed: u64) -> Vec<(String, GradedPoly)> {
        let mut out = Vec::new();
        if self.gens.is_empty() {
            return out;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut seen = std::collections::BTreeSet::new();
        let mut attempts = 0;
        while out.len() < count && attempts < 20 * count {
            attempts += 1;
            let k = rng.gen_range(2..=3);
            let mut idx: Vec<usize> = (0..k).map(|_| rng.gen_range(0..self.gens.len())).collect();
            idx.sort_unstable();
            if !seen.insert(idx.clone()) {
                continue;
            }
            let picks: Vec<&HopfGenerator> = idx.iter().map(|&i| &self.gens[i]).collect();
            let m = Monomial::from_factors(picks.iter().map(|g| (Var::new(g.decl.clone(), 1), 1)));
            if m.weight() > cutoff {
                continue;
            }
            let name = picks.iter().map(|g| g.decl.name.as_str()).collect::<Vec<_>>().join("*");
            out.push((name, GradedPoly::term(num_traits::One::one(), m)));
        }
        out
    }

    /// Runs every axiom on the arity-1 element `e`, recording residuals.
    pub fn check_element(
        &self,
        name: &str,
        e: &GradedPoly,
        cutoff: u32,
        report: &mut VerificationReport,
    ) -> Result<()> {
        let w = Some(cutoff);
        let e = e.truncate(cutoff);
        let d = self.delta_poly(&e, 1, 1, w)?;
        let counit = self.eps_poly(&e, 1, 1, w)?;

        let coassoc = &self.delta_poly(&d, 2, 2, w)? - &self.delta_poly(&d, 2, 1, w)?;
        self.record(report, name, "coassociativity", &coassoc, 3);
        let left = &self.eps_poly(&d, 2, 1, w)? - &e;
        self.record(report, name, "counit-left", &left, 1);
        let right = &self.eps_poly(&d, 2, 2, w)? - &e;
        self.record(report, name, "counit-right", &right, 1);
        let s_right = mu_merge_poly(&self.antipode_poly(&d, 2, 2, w)?, 2, 1)?.truncate(cutoff);
        self.record(report, name, "antipode-right", &(&s_right - &counit), 1);
        let s_left = mu_merge_poly(&self.antipode_poly(&d, 2, 1, w)?, 2, 1)?.truncate(cutoff);
        self.record(report, name, "antipode-left", &(&s_left - &counit), 1);
        Ok(())
    }

    fn record(&self, report: &mut VerificationReport, name: &str, axiom: &str, residual: &GradedPoly, arity: usize) {
        if residual.is_zero() {
            return;
        }
        let Some(x) = self.series_var.as_deref().and_then(|s| self.generator(s)) else {
            report.push(
                Location::Generator {
                    name: name.into(),
                    axiom: axiom.into(),
                    at: None,
                },
                residual.display(arity),
            );
            return;
        };
        for (md, c) in split_by_series_var(residual, &x.decl, arity) {
            report.push(
                Location::Generator {
                    name: name.into(),
                    axiom: axiom.into(),
                    at: Some(md),
                },
                c.display(arity),
            );
        }
    }
}

const SPOT_CHECKS: usize = 8;

/// Groups a polynomial by the exponents of `x<1>..x<arity>`, in graded-lex
/// order of those exponents.
pub fn split_by_series_var(p: &GradedPoly, x: &Gen, arity: usize) -> BTreeMap<Multidegree, GradedPoly> {
    let vars: Vec<Var> = (1..=arity).map(|t| Var::new(x.clone(), t as u8)).collect();
    let mut out: BTreeMap<Multidegree, GradedPoly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let md = Multidegree(vars.iter().map(|v| m.exponent_of(v)).collect());
        let (_, rest) = m.partition(|v| vars.contains(v));
        out.entry(md).or_default().add_term(rest, c.clone());
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn check_position(p: usize, arity: usize) -> Result<()> {
    if p == 0 || p > arity {
        return Err(Error::PositionOutOfRange { position: p, arity });
    }
    Ok(())
}

/// Multiplies factors `p` and `p + 1` together.
pub fn mu_merge_poly(c: &GradedPoly, arity: usize, p: usize) -> Result<GradedPoly> {
    if p == 0 || p + 1 > arity {
        return Err(Error::PositionOutOfRange { position: p, arity });
    }
    let p = p as u8;
    Ok(c.map_vars(|v| if v.tag > p { v.with_tag(v.tag - 1) } else { v.clone() }))
}

pub fn mu_merge(e: &TensorElement, p: usize) -> Result<TensorElement> {
    let out = mu_merge_poly(e.poly(), e.arity(), p)?;
    TensorElement::new(e.arity() - 1, out)
}

pub fn flip(e: &TensorElement) -> Result<TensorElement> {
    if e.arity() != 2 {
        return Err(Error::FlipArity(e.arity()));
    }
    TensorElement::new(2, flip_poly(e.poly()))
}

pub fn flip_poly(c: &GradedPoly) -> GradedPoly {
    c.map_vars(|v| match v.tag {
        1 => v.with_tag(2),
        2 => v.with_tag(1),
        _ => v.clone(),
    })
}

/// `η`: embeds an arity-0 element into arity `arity` (no tags to move).
pub fn eta(c: &GradedPoly, arity: usize) -> Result<TensorElement> {
    check_tags(c, 0)?;
    TensorElement::new(arity, c.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinHopf {
    /// `Δg_i = g_i⊗1 + 1⊗g_i`.
    Primitive,
    /// `Δc_n = Σ_{i+j=n} c_i⊗c_j` with `c_0 = 1`.
    Binomial,
}

/// Generator names of a built-in algebra: `b` for a single primitive
/// generator, otherwise `b1..bn` or `c1..cn`.
pub fn builtin_generator_names(kind: BuiltinHopf, n: usize) -> Vec<String> {
    match (kind, n) {
        (BuiltinHopf::Primitive, 1) => vec!["b".into()],
        (BuiltinHopf::Primitive, _) => (1..=n).map(|i| format!("b{i}")).collect(),
        (BuiltinHopf::Binomial, _) => (1..=n).map(|i| format!("c{i}")).collect(),
    }
}

/// Built-in Hopf algebras over ℤ; generator `i` has degree `i * step` and
/// weight 1. The binomial antipode is solved from `μ(id⊗S)Δc_n = 0`:
/// `S(c_n) = -Σ_{i=1}^{n} c_i S(c_{n-i})`.
pub fn builtin_hopf(kind: BuiltinHopf, n: usize, step: i64) -> Result<HopfAlgebraSpec> {
    if n == 0 {
        return Err(Error::EmptyBuiltin);
    }
    let names = builtin_generator_names(kind, n);
    let decls: Vec<Gen> = names
        .iter()
        .enumerate()
        .map(|(i, name)| GeneratorDecl::hopf(name.clone(), (i as i64 + 1) * step, 1))
        .collect();
    let at = |i: usize, tag: u8| -> GradedPoly {
        if i == 0 {
            GradedPoly::one()
        } else {
            GradedPoly::var(Var::new(decls[i - 1].clone(), tag))
        }
    };
    let mut gens = Vec::with_capacity(n);
    let mut antipodes: Vec<GradedPoly> = vec![GradedPoly::one()];
    for i in 1..=n {
        let (delta, antipode) = match kind {
            BuiltinHopf::Primitive => (&at(i, 1) + &at(i, 2), -at(i, 1)),
            BuiltinHopf::Binomial => {
                let mut delta = GradedPoly::zero();
                let mut s = GradedPoly::zero();
                for j in 0..=i {
                    delta.add_assign_ref(&(&at(j, 1) * &at(i - j, 2)));
                    if j > 0 {
                        s.sub_assign_ref(&(&at(j, 1) * &antipodes[i - j]));
                    }
                }
                (delta, s)
            }
        };
        antipodes.push(antipode.clone());
        gens.push(HopfGenerator {
            decl: decls[i - 1].clone(),
            delta,
            counit: GradedPoly::zero(),
            antipode,
        });
    }
    let name = match kind {
        BuiltinHopf::Primitive => "Prim",
        BuiltinHopf::Binomial => "Binom",
    };
    HopfAlgebraSpec::new(name, Arc::new(Ring::integers()), gens)
}

/// Free-function form of [`HopfAlgebraSpec::verify`].
pub fn verify_hopf(h: &HopfAlgebraSpec, cutoff: u32) -> VerificationReport {
    h.verify(cutoff)
}
