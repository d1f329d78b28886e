//! Formal groups over Hopf algebras: a series `𝔉(x⊗1, 1⊗x)` whose
//! coefficients `A_ij` lie in `H⊗H`.
//!
//! `A_ij` is stored as an arity-2 tagged polynomial, which is the canonical
//! form of `Σ_k a_ij^k ⊗ b_ij^k`.

mod conditions;
mod constraints;
mod gseries;

use std::sync::Arc;
use std::time::Instant;

use crate::algebra::{GradedPoly, Homogeneity};
use crate::error::{Error, Result};
use crate::fgl::{verify_fgl, OrdinaryFgl};
use crate::hopf::{flip_poly, HopfAlgebraSpec};
use crate::report::{Location, VerificationReport};
use crate::series::{Multidegree, TruncatedSeries, SERIES_VAR_DEGREE};

pub use conditions::{
    extend_hopf, remark3_agreement, remark3_conditions, solve_theta, verify_condition1, verify_condition2,
    verify_condition2_parts, verify_condition3, ExtendedHopf,
};
pub use constraints::{extract_extension_constraints, AnsatzTerm, ConstraintSystem, Equation};
pub use gseries::{g_series, verify_g_property, GSeries};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopfFgl {
    pub name: String,
    hopf: Arc<HopfAlgebraSpec>,
    series: TruncatedSeries,
}

impl HopfFgl {
    /// Checks the necessary consequences of the unit condition on
    /// `A_00, A_10, A_01` and that `A_00` has no weight-0 part.
    pub fn new(name: impl Into<String>, hopf: Arc<HopfAlgebraSpec>, series: TruncatedSeries) -> Result<Self> {
        let name = name.into();
        if series.vars().len() != 2 || series.arity() != 2 {
            return Err(Error::InvalidHopfFgl(
                "expected a series in two variables with coefficients in H⊗H".into(),
            ));
        }
        for (_, c) in series.terms() {
            hopf.check_declared(c)?;
        }
        if let Some((_, msg)) = low_term_violation(&hopf, &series)? {
            return Err(Error::InvalidHopfFgl(msg));
        }
        Ok(HopfFgl { name, hopf, series })
    }

    pub fn hopf(&self) -> &Arc<HopfAlgebraSpec> {
        &self.hopf
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn cutoff(&self) -> u32 {
        self.series.cutoff()
    }

    pub fn coeff(&self, i: u32, j: u32) -> GradedPoly {
        self.series.coeff(&[i, j])
    }

    /// The same object re-truncated at a lower cutoff.
    pub fn truncated(&self, cutoff: u32) -> Self {
        HopfFgl {
            name: self.name.clone(),
            hopf: self.hopf.clone(),
            series: self.series.truncated(cutoff),
        }
    }

    /// Replaces the series, keeping name and Hopf algebra.
    pub fn with_series(&self, series: TruncatedSeries) -> Result<Self> {
        HopfFgl::new(self.name.clone(), self.hopf.clone(), series)
    }

    fn eps_eps(&self, c: &GradedPoly) -> Result<GradedPoly> {
        eps_eps(&self.hopf, c)
    }
}

fn eps_eps(hopf: &HopfAlgebraSpec, c: &GradedPoly) -> Result<GradedPoly> {
    let once = hopf.eps_poly(c, 2, 2, None)?;
    hopf.eps_poly(&once, 1, 1, None)
}

/// The first of `A_00, A_10, A_01` that breaks the constructor invariants,
/// with a message.
pub(crate) fn low_term_violation(
    hopf: &HopfAlgebraSpec,
    series: &TruncatedSeries,
) -> Result<Option<(Multidegree, String)>> {
    let a00 = series.coeff(&[0, 0]);
    if a00.min_weight() == Some(0) {
        let msg = format!("A_00 = {} has a weight-0 part", a00.display(2));
        return Ok(Some((Multidegree(vec![0, 0]), msg)));
    }
    if series.cutoff() >= 1 {
        for (i, j) in [(1, 0), (0, 1)] {
            let e = eps_eps(hopf, &series.coeff(&[i, j]))?;
            if e.weight_zero_part() != GradedPoly::one() {
                let msg = format!("(ε⊗ε)A_{i}{j} = {} is not 1", e.display(0));
                return Ok(Some((Multidegree(vec![i, j]), msg)));
            }
        }
    }
    Ok(None)
}

/// `(ε⊗ε)𝔉` as an ordinary law over the base ring.
pub fn epsilon_reduce(g: &HopfFgl) -> Result<OrdinaryFgl> {
    let s = g.series.map_coefficients(0, |c| g.eps_eps(c))?;
    let commutative = s == s.swap_vars()?;
    OrdinaryFgl::new(g.name.clone(), s, commutative)
}

/// `((η⊗η)F)(x⊗1, 1⊗x)`; `F` must pass verification at its own cutoff.
pub fn trivial_extension(f: &OrdinaryFgl, hopf: Arc<HopfAlgebraSpec>) -> Result<HopfFgl> {
    if !verify_fgl(f, f.cutoff()).passed() {
        return Err(Error::FglFailsVerification(f.cutoff()));
    }
    let s = f.series().map_coefficients(2, |c| Ok(c.clone()))?;
    HopfFgl::new(f.name.clone(), hopf, s)
}

/// `flip(A_ij) = A_ji` for all `i <= j`; a mismatch is reported at `[i,j]`
/// with residual `flip(A_ij) - A_ji`.
pub fn commutativity_check(g: &HopfFgl) -> VerificationReport {
    let started = Instant::now();
    let mut report = VerificationReport::new(g.name.clone(), "commutativity", Some(g.cutoff()));
    let mut keys: Vec<Multidegree> = g.series.terms().map(|(md, _)| md.clone()).collect();
    keys.extend(g.series.terms().map(|(md, _)| Multidegree(vec![md.0[1], md.0[0]])));
    keys.sort();
    keys.dedup();
    for md in keys {
        let (i, j) = (md.0[0], md.0[1]);
        if i > j {
            continue;
        }
        let residual = &flip_poly(&g.coeff(i, j)) - &g.coeff(j, i);
        // A_ji is truncated to the same budget as A_ij (|md| is symmetric).
        if !residual.is_zero() {
            report.push(Location::Multidegree(md), residual.display(2));
        }
    }
    report.timed(started)
}

/// Every `A_ij` is homogeneous of degree `d_x(1 - i - j)`.
pub fn grading_check(g: &HopfFgl, d_x: i64) -> VerificationReport {
    let started = Instant::now();
    let mut report = VerificationReport::new(g.name.clone(), "grading", Some(g.cutoff()));
    for (md, c) in g.series.terms() {
        let expected = d_x * (1 - i64::from(md.total()));
        match c.homogeneity() {
            Homogeneity::Zero => {}
            Homogeneity::Degree(d) if d == expected => {}
            Homogeneity::Degree(d) => report.push(
                Location::Multidegree(md.clone()),
                format!("degree {d}, expected {expected}"),
            ),
            Homogeneity::Inhomogeneous => report.push(
                Location::Multidegree(md.clone()),
                format!("inhomogeneous, expected {expected}"),
            ),
        }
    }
    report.timed(started)
}

/// [`grading_check`] with the series-variable degree `2`.
pub fn grading_check_default(g: &HopfFgl) -> VerificationReport {
    grading_check(g, SERIES_VAR_DEGREE)
}
