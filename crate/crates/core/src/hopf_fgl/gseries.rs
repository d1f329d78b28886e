use std::time::Instant;

use super::conditions::mu_antipode;
use super::{epsilon_reduce, HopfFgl};
use crate::error::{Error, Result};
use crate::report::{Location, VerificationReport};
use crate::series::TruncatedSeries;

/// `𝔊(x,y) = Σ B_ij x^i y^j` with `B_ij = μ(id⊗S)A_ij`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GSeries {
    series: TruncatedSeries,
}

impl GSeries {
    pub fn new(series: TruncatedSeries) -> Result<Self> {
        if series.vars().len() != 2 || series.arity() != 1 {
            return Err(Error::SeriesMismatch(
                "a G-series has two variables and coefficients in H".into(),
            ));
        }
        if series.constant_coefficient().min_weight() == Some(0) {
            return Err(Error::NonConvergent("B_00 has a weight-0 part".into()));
        }
        Ok(GSeries { series })
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }
}

pub fn g_series(g: &HopfFgl) -> Result<GSeries> {
    GSeries::new(mu_antipode(g, true)?)
}

/// `(Δ𝔊)(𝔉(x,x), ((S⊗S)𝔉)(y,y)) = F(𝔊(x,y)⊗1, 1⊗𝔊(x,y))` with `F` the
/// ε-reduction; both series slots of each argument carry the same variable.
pub fn verify_g_property(g: &HopfFgl) -> VerificationReport {
    let started = Instant::now();
    let mut report = VerificationReport::new(g.name.clone(), "g-property", Some(g.cutoff()));
    match g_property_residual(g) {
        Ok(r) => {
            for (md, c) in r.terms() {
                report.push(Location::Multidegree(md.clone()), c.display(2));
            }
            report.timed(started)
        }
        Err(e) => VerificationReport::error(g.name.clone(), "g-property", Some(g.cutoff()), e).timed(started),
    }
}

fn g_property_residual(g: &HopfFgl) -> Result<TruncatedSeries> {
    let h = g.hopf();
    let f = g.series();
    let vars = f.vars().to_vec();
    let gs = g_series(g)?;
    let delta_g = gs.series.map_coefficients(2, |c| h.delta_poly(c, 1, 1, None))?;
    let s_s = f.map_coefficients(2, |c| {
        let once = h.antipode_poly(c, 2, 1, None)?;
        h.antipode_poly(&once, 2, 2, None)
    })?;
    let first = f.embed_vars(&[0, 0], vars.clone())?;
    let second = s_s.embed_vars(&[1, 1], vars.clone())?;
    let lhs = delta_g.substitute(&[first, second])?;

    let reduced = epsilon_reduce(g)?;
    let g1 = gs.series.retag(&[1], 2)?;
    let g2 = gs.series.retag(&[2], 2)?;
    let rhs = reduced.series().truncated(g.cutoff()).substitute(&[g1, g2])?;
    lhs.sub(&rhs)
}
