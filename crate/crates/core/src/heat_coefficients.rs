//! Closed-form heat-trace coefficients `a₀ … a₃` on the model manifolds.
//!
//! All catalog data is constant on each boundary component, so every
//! boundary integral is a sum of `volume × pointwise trace`.

use num_traits::Zero;
use serde::Serialize;

use crate::boundary_geometry::ModelManifold;
use crate::conditions::{BoundaryCondition, OperatorPair};
use crate::error::{Error, Result};
use crate::exact_algebra::{
    a3_bracket_trace, fiber_rank, int, rat, trace_chi, trace_s_coefficient, ExactJson,
    ExactValue, Rational, Weitzenbock,
};

#[derive(Clone, Debug, PartialEq)]
pub struct HeatCoefficientSet {
    pub model: String,
    pub m: usize,
    pub p: usize,
    pub bc: BoundaryCondition,
    pub a: [ExactValue; 4],
}

impl HeatCoefficientSet {
    pub fn floats(&self) -> [f64; 4] {
        [0, 1, 2, 3].map(|i| self.a[i].to_f64())
    }
}

impl Serialize for HeatCoefficientSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let a: Vec<ExactJson> = self.a.iter().map(ExactJson::from).collect();
        let mut st = s.serialize_struct("HeatCoefficientSet", 5)?;
        st.serialize_field("model", &self.model)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("bc", &self.bc)?;
        st.serialize_field("a", &a)?;
        st.end()
    }
}

fn check_degree(model: &ModelManifold, p: usize) -> Result<()> {
    if p > model.m {
        return Err(Error::DegreeOutOfRange { m: model.m, p });
    }
    Ok(())
}

fn weitzenbock(model: &ModelManifold) -> Result<Weitzenbock> {
    Ok(Weitzenbock::for_scalar_curvature(&model.tau_rational()?))
}

/// `(4π)^{−m/2} C(m,p) vol(M)`.
pub fn a0(model: &ModelManifold, p: usize) -> Result<ExactValue> {
    check_degree(model, p)?;
    let m = model.m as i64;
    Ok(&ExactValue::four_pi_pow_half(-m) * &model.vol_m.scale(&fiber_rank(model.m, p)?))
}

/// `(4π)^{−(m−1)/2} · ¼ Tr{χ} · vol(∂M)`.
pub fn a1(model: &ModelManifold, p: usize, bc: BoundaryCondition) -> Result<ExactValue> {
    check_degree(model, p)?;
    let m = model.m as i64;
    let tr_chi = trace_chi(model.m, p, bc)?;
    Ok(&ExactValue::four_pi_pow_half(1 - m) * &model.vol_dm.scale(&(tr_chi * rat(1, 4))))
}

/// `(4π)^{−m/2} · ⅙ {Tr(6E_p + τ)[M] + Tr(2L_aa + 12S)[∂M]}`.
pub fn a2(model: &ModelManifold, p: usize, bc: BoundaryCondition) -> Result<ExactValue> {
    check_degree(model, p)?;
    let m = model.m;
    let rank = fiber_rank(m, p)?;
    let tau = model.tau_rational()?;
    let e = weitzenbock(model)?.scalar(m, p)?;
    let interior = model.vol_m.scale(&(&rank * (int(6) * e + tau)));

    let s = trace_s_coefficient(m, p, bc)?;
    let mut boundary = ExactValue::zero();
    for c in &model.boundary {
        let kappa = c.form.trace();
        let pointwise = int(2) * &kappa * &rank + int(12) * &s * &kappa;
        boundary = boundary.try_add(&c.volume.scale(&pointwise))?;
    }
    let total = interior.try_add(&boundary)?;
    Ok(&ExactValue::four_pi_pow_half(-(m as i64)) * &total.scale(&rat(1, 6)))
}

/// `(4π)^{−(m−1)/2} · 1/384 · ∫_{∂M} Tr{…}`, with the bracket evaluated
/// from the fibre operators.
pub fn a3(model: &ModelManifold, p: usize, bc: BoundaryCondition) -> Result<ExactValue> {
    check_degree(model, p)?;
    let m = model.m;
    let tau = model.tau_rational()?;
    let rho = model.rho_mm_rational()?;
    let e = weitzenbock(model)?;
    let mut total = ExactValue::zero();
    for c in &model.boundary {
        let bracket = a3_bracket_trace(m, p, bc, &c.form, &tau, &rho, &e)?;
        total = total.try_add(&c.volume.scale(&bracket))?;
    }
    Ok(&ExactValue::four_pi_pow_half(1 - m as i64) * &total.scale(&rat(1, 384)))
}

pub fn heat_coefficients(
    model: &ModelManifold,
    p: usize,
    bc: BoundaryCondition,
) -> Result<HeatCoefficientSet> {
    Ok(HeatCoefficientSet {
        model: model.name.to_string(),
        m: model.m,
        p,
        bc,
        a: [a0(model, p)?, a1(model, p, bc)?, a2(model, p, bc)?, a3(model, p, bc)?],
    })
}

/// Coefficient rows `(α, β)` of `L_aaL_bb` and `L_abL_ab` as written for
/// the six operators of the three pairs, as polynomials in `m`.
pub fn pair_row(m: usize, p: usize, bc: BoundaryCondition) -> Result<(Rational, Rational)> {
    let mm = int(m as i64);
    use BoundaryCondition::*;
    match (p, bc) {
        (0, Dirichlet) | (0, Relative) => Ok((int(-7), int(10))),
        (0, Neumann) | (0, Absolute) => Ok((int(13), int(2))),
        (1, Absolute) => Ok((int(13) * &mm - int(116), int(2) * &mm + int(104))),
        (1, Relative) => Ok((int(-7) * &mm + int(116), int(10) * &mm - int(104))),
        _ => Err(Error::Unsupported(format!(
            "no pair row for p = {p}, {bc}"
        ))),
    }
}

/// `Tr χ` written out: `∓1` on functions, `m − 2` for absolute and `2 − m`
/// for relative conditions on 1-forms.
fn pair_trace_chi(m: usize, p: usize, bc: BoundaryCondition) -> Result<Rational> {
    use BoundaryCondition::*;
    let mm = int(m as i64);
    match (p, bc) {
        (0, Dirichlet) | (0, Relative) => Ok(int(-1)),
        (0, Neumann) | (0, Absolute) => Ok(int(1)),
        (1, Absolute) => Ok(mm - int(2)),
        (1, Relative) => Ok(int(2) - mm),
        _ => Err(Error::Unsupported(format!("p = {p}, {bc}"))),
    }
}

fn pair_form_value(model: &ModelManifold, p: usize, bc: BoundaryCondition) -> Result<ExactValue> {
    let m = model.m;
    if m < 2 && p > 0 {
        return Err(Error::DimensionTooSmall { m, what: "1-form pairs need m >= 2" });
    }
    let tau = model.tau_rational()?;
    let rho = &tau / int(m as i64);
    // E₀ = 0, E₁ = −τ/m
    let e = if p == 0 { Rational::zero() } else { -&tau / int(m as i64) };
    let star = pair_trace_chi(m, p, bc)? * (int(16) * &tau - int(8) * rho + int(96) * e);
    let (alpha, beta) = pair_row(m, p, bc)?;
    let mut total = ExactValue::zero();
    for c in &model.boundary {
        let pointwise = if m >= 2 {
            &star + &alpha * c.form.trace_squared() + &beta * c.form.norm_squared()
        } else {
            star.clone()
        };
        total = total.try_add(&c.volume.scale(&pointwise))?;
    }
    Ok(&ExactValue::four_pi_pow_half(1 - m as i64) * &total.scale(&rat(1, 384)))
}

/// `a₃` of both members of `pair` from the written-out pair formulas.
/// Fails with [`Error::SpecializationMismatch`] unless both agree exactly
/// with [`a3`].
pub fn a3_section4_form(
    model: &ModelManifold,
    pair: OperatorPair,
) -> Result<(ExactValue, ExactValue)> {
    if model.m < pair.min_dimension() {
        return Err(Error::DimensionTooSmall {
            m: model.m,
            what: "operator pair needs a larger dimension",
        });
    }
    let [first, second] = pair.members();
    let special = (
        pair_form_value(model, first.p, first.bc)?,
        pair_form_value(model, second.p, second.bc)?,
    );
    let general = (a3(model, first.p, first.bc)?, a3(model, second.p, second.bc)?);
    if special != general {
        return Err(Error::SpecializationMismatch(format!(
            "{} {}: ({}, {}) vs ({}, {})",
            model.name,
            pair.name(),
            special.0,
            special.1,
            general.0,
            general.1
        )));
    }
    Ok(special)
}
