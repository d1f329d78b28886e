use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::conditions::{condition1_residual, unit_residuals};
use super::HopfFgl;
use crate::algebra::{substitute_named, Gen, GeneratorDecl, GradedPoly, Monomial, Var};
use crate::error::Result;
use crate::fgl::unknown_name;
use crate::hopf::HopfAlgebraSpec;
use crate::series::{Multidegree, TruncatedSeries, SERIES_VAR_DEGREE};

/// One ansatz term `u·m x^i y^j`; `unknown` is `None` for the fixed
/// linear terms `x` and `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnsatzTerm {
    pub at: Multidegree,
    pub basis: Monomial,
    pub unknown: Option<Gen>,
}

/// A polynomial relation among the unknowns: the coefficient of `basis` at
/// series multidegree `at` of a condition residual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub condition: String,
    pub at: Multidegree,
    pub basis: String,
    pub relation: GradedPoly,
}

impl Equation {
    pub fn describe(&self) -> String {
        format!(
            "{}{} {}: {} = 0",
            self.condition,
            self.at,
            self.basis,
            self.relation.display(0)
        )
    }
}

#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub ansatz: HopfFgl,
    pub terms: Vec<AnsatzTerm>,
    pub unknowns: Vec<Gen>,
    /// Every nonzero equation, ordered by series degree.
    pub equations: Vec<Equation>,
    /// Unknowns eliminated by linear solving, in elimination order, each
    /// expressed in the free unknowns.
    pub solved: Vec<(String, GradedPoly)>,
    /// Equations left after elimination.
    pub remaining: Vec<Equation>,
}

/// All monomials in `vars` of weight at most `max_weight`, ordered by
/// weight and then canonically.
fn monomials_up_to(vars: &[Var], max_weight: u32) -> Vec<Monomial> {
    fn go(vars: &[Var], budget: u32, acc: Monomial, out: &mut Vec<Monomial>) {
        let Some((v, rest)) = vars.split_first() else {
            out.push(acc);
            return;
        };
        let w = v.gen.weight.max(1);
        let mut e = 0;
        let mut m = acc;
        loop {
            go(rest, budget - e * w, m.clone(), out);
            if (e + 1) * w > budget {
                break;
            }
            e += 1;
            m.mul_var(v.clone(), 1);
        }
    }
    let mut out = Vec::new();
    go(vars, max_weight, Monomial::one(), &mut out);
    out.sort_by(|a, b| a.weight().cmp(&b.weight()).then(a.cmp(b)));
    out
}

/// Builds the ansatz `𝔉 = x + y + Σ u·m x^i y^j` over all monomials `m` of
/// `H⊗H` with `i + j + weight(m) <= max_degree`, each unknown `u` of degree
/// `2(1-i-j) - deg(m)`, and extracts the equations of conditions 1 and 2.
pub fn extract_extension_constraints(hopf: Arc<HopfAlgebraSpec>, max_degree: u32) -> Result<ConstraintSystem> {
    let mut vars: Vec<Var> = hopf.base.gens.iter().map(|g| Var::base(g.clone())).collect();
    for tag in [1, 2] {
        vars.extend(hopf.generators().iter().map(|g| Var::new(g.decl.clone(), tag)));
    }
    let names = vec!["x".to_string(), "y".to_string()];
    let mut series = TruncatedSeries::new(names, 2, max_degree);
    let mut terms = Vec::new();
    let mut unknowns = Vec::new();
    for total in 0..=max_degree {
        for i in (0..=total).rev() {
            let j = total - i;
            let at = Multidegree(vec![i, j]);
            let mut k = 0;
            for m in monomials_up_to(&vars, max_degree - total) {
                if total == 0 && m.is_one() {
                    continue;
                }
                if total == 1 && m.is_one() {
                    series.add_term(at.clone(), &GradedPoly::one());
                    terms.push(AnsatzTerm {
                        at: at.clone(),
                        basis: m,
                        unknown: None,
                    });
                    continue;
                }
                let name = if m.is_one() {
                    unknown_name(i, j)
                } else {
                    k += 1;
                    format!("{}_{k}", unknown_name(i, j))
                };
                let degree = SERIES_VAR_DEGREE * (1 - i64::from(total)) - m.degree();
                let u = GeneratorDecl::unknown(name, degree);
                let term = GradedPoly::term(One::one(), m.clone()) * GradedPoly::var(Var::base(u.clone()));
                series.add_term(at.clone(), &term);
                unknowns.push(u.clone());
                terms.push(AnsatzTerm {
                    at: at.clone(),
                    basis: m,
                    unknown: Some(u),
                });
            }
        }
    }
    let ansatz = HopfFgl::new("ansatz", hopf, series)?;

    let mut equations = Vec::new();
    for (first, label) in [(true, "unit-x"), (false, "unit-y")] {
        for (k, r) in unit_residuals(&ansatz, first)? {
            push_split(&mut equations, label, Multidegree(vec![k]), &r, 1);
        }
    }
    for (md, c) in condition1_residual(&ansatz)?.terms() {
        push_split(&mut equations, "condition1", md.clone(), c, 3);
    }
    equations.sort_by_key(|e| e.at.total());

    let order: BTreeMap<String, usize> = unknowns.iter().enumerate().map(|(i, u)| (u.name.clone(), i)).collect();
    let (solved, remaining) = eliminate(&equations, &order);
    Ok(ConstraintSystem {
        ansatz,
        terms,
        unknowns,
        equations,
        solved,
        remaining,
    })
}

fn push_split(out: &mut Vec<Equation>, condition: &str, at: Multidegree, c: &GradedPoly, arity: usize) {
    for (basis, relation) in c.split_by(|v| v.gen.unknown) {
        if relation.is_zero() {
            continue;
        }
        out.push(Equation {
            condition: condition.into(),
            at: at.clone(),
            basis: GradedPoly::term(One::one(), basis).display(arity),
            relation,
        });
    }
}

/// If `e` is `c·u + rest` with `c` a nonzero number and `u` absent from
/// `rest`, returns `u` (preferring the newest such unknown) and `-rest/c`.
fn linear_solution(e: &GradedPoly, order: &BTreeMap<String, usize>) -> Option<(String, GradedPoly)> {
    let mut candidates: BTreeMap<usize, (String, GradedPoly)> = BTreeMap::new();
    for (m, c) in e.terms() {
        if let [(v, 1)] = m.factors() {
            let occurrences = e
                .terms()
                .filter(|(n, _)| n.factors().iter().any(|(w, _)| w == v))
                .count();
            if occurrences == 1 {
                let mut rest = e.clone();
                rest.add_term(m.clone(), -c.clone());
                let value = rest.scale(&(-c.recip()));
                candidates.insert(order.get(v.name()).copied().unwrap_or(0), (v.name().to_string(), value));
            }
        }
    }
    candidates.pop_last().map(|(_, s)| s)
}

fn eliminate(equations: &[Equation], order: &BTreeMap<String, usize>) -> (Vec<(String, GradedPoly)>, Vec<Equation>) {
    let mut solved: Vec<(String, GradedPoly)> = Vec::new();
    let mut pending: Vec<Equation> = equations.to_vec();
    loop {
        let mut progress = false;
        let mut next = Vec::new();
        for mut e in pending {
            let values: BTreeMap<String, GradedPoly> = solved.iter().cloned().collect();
            e.relation = substitute_named(&e.relation, &values);
            if e.relation.is_zero() {
                continue;
            }
            match linear_solution(&e.relation, order) {
                Some((name, value)) => {
                    let one: BTreeMap<String, GradedPoly> = [(name.clone(), value.clone())].into();
                    for (_, s) in solved.iter_mut() {
                        *s = substitute_named(s, &one);
                    }
                    solved.push((name, value));
                    progress = true;
                }
                None => next.push(e),
            }
        }
        pending = next;
        if !progress {
            return (solved, pending);
        }
    }
}

impl ConstraintSystem {
    pub fn free_unknowns(&self) -> Vec<Gen> {
        self.unknowns
            .iter()
            .filter(|u| !self.solved.iter().any(|(n, _)| *n == u.name))
            .cloned()
            .collect()
    }

    /// Values for every unknown given values for the free ones (missing
    /// free unknowns are 0), or `None` if a remaining equation fails.
    pub fn assignment(&self, free: &BTreeMap<String, GradedPoly>) -> Option<BTreeMap<String, GradedPoly>> {
        let mut values: BTreeMap<String, GradedPoly> = self
            .free_unknowns()
            .into_iter()
            .map(|u| (u.name.clone(), free.get(&u.name).cloned().unwrap_or_default()))
            .collect();
        for (name, expr) in &self.solved {
            values.insert(name.clone(), substitute_named(expr, &values));
        }
        let ok = self
            .remaining
            .iter()
            .all(|e| substitute_named(&e.relation, &values).is_zero());
        ok.then_some(values)
    }

    /// The ansatz with the unknowns replaced according to `free`.
    pub fn instance(&self, free: &BTreeMap<String, GradedPoly>) -> Result<Option<HopfFgl>> {
        let Some(values) = self.assignment(free) else {
            return Ok(None);
        };
        let series = self
            .ansatz
            .series()
            .map_coefficients(2, |c| Ok(substitute_named(c, &values)))?;
        Ok(Some(self.ansatz.with_series(series)?))
    }

    /// Seeded instances: free unknowns of degree 0 take values in
    /// `{-1, 0, 1}`, the others 0, so every instance respects the grading.
    /// The all-zero instance comes first.
    pub fn instances(&self, count: usize, seed: u64) -> Result<Vec<HopfFgl>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let graded: Vec<Gen> = self.free_unknowns().into_iter().filter(|u| u.degree == 0).collect();
        let mut out: Vec<HopfFgl> = Vec::new();
        for attempt in 0..count.max(1) * 4 {
            if out.len() >= count {
                break;
            }
            let free: BTreeMap<String, GradedPoly> = graded
                .iter()
                .map(|u| {
                    let v = if attempt == 0 { 0 } else { rng.gen_range(-1i64..=1) };
                    (u.name.clone(), GradedPoly::integer(v))
                })
                .collect();
            if let Some(inst) = self.instance(&free)? {
                if !out.iter().any(|o| o.series() == inst.series()) {
                    out.push(inst);
                }
            }
        }
        for (k, inst) in out.iter_mut().enumerate() {
            inst.name = format!("instance{k}");
        }
        Ok(out)
    }

    /// Whether every solved value is an integer combination.
    pub fn is_integral(&self) -> bool {
        self.solved.iter().all(|(_, v)| v.is_integral())
    }
}
