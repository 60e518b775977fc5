//! Model manifolds with exact geometric data, the integral boundary
//! criteria, and a pointwise eigenvalue oracle for umbilicity.

use nalgebra::DMatrix;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact_algebra::{
    int, rational_to_f64, ExactJson, ExactValue, Rational, SecondFundamentalForm,
};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum ModelKind {
    /// `[0, ℓ]`; boundary is two points.
    Interval { length: ExactValue },
    /// Flat disk of radius `R`.
    Disk { radius: Rational },
    /// Flat `[0, H] × S¹(R)`; boundary is two circles.
    Cylinder { height: ExactValue, radius: ExactValue },
    /// Upper half of the unit round `S²`; boundary is the equator.
    Hemisphere,
    /// Hand-assembled Einstein data with no enumerable spectrum.
    Synthetic,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryComponent {
    pub volume: ExactValue,
    #[serde(rename = "L")]
    pub form: SecondFundamentalForm,
}

/// One catalog geometry. The boundary second fundamental form is constant
/// on each component, with `L_aa = +1/R` on the disk (inward normal).
#[derive(Clone, Debug, PartialEq)]
pub struct ModelManifold {
    pub name: &'static str,
    pub kind: ModelKind,
    pub m: usize,
    pub tau: ExactValue,
    pub einstein_lambda: ExactValue,
    pub vol_m: ExactValue,
    pub vol_dm: ExactValue,
    pub rho_mm: ExactValue,
    pub boundary: Vec<BoundaryComponent>,
    pub b0: u32,
    pub b1: u32,
}

fn positive(name: &str, v: &ExactValue) -> Result<()> {
    if v.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
    }
}

impl ModelManifold {
    fn flat(
        name: &'static str,
        kind: ModelKind,
        m: usize,
        vol_m: ExactValue,
        boundary: Vec<BoundaryComponent>,
        b1: u32,
    ) -> Result<Self> {
        let vol_dm = boundary
            .iter()
            .try_fold(ExactValue::zero(), |acc, c| acc.try_add(&c.volume))?;
        Ok(Self {
            name,
            kind,
            m,
            tau: ExactValue::zero(),
            einstein_lambda: ExactValue::zero(),
            vol_m,
            vol_dm,
            rho_mm: ExactValue::zero(),
            boundary,
            b0: 1,
            b1,
        })
    }

    pub fn interval(length: ExactValue) -> Result<Self> {
        positive("interval length", &length)?;
        let point = BoundaryComponent {
            volume: ExactValue::from_int(1),
            form: SecondFundamentalForm::zero(1),
        };
        Self::flat(
            "interval",
            ModelKind::Interval {
                length: length.clone(),
            },
            1,
            length,
            vec![point.clone(), point],
            0,
        )
    }

    pub fn disk(radius: Rational) -> Result<Self> {
        let r = ExactValue::rational(radius.clone());
        positive("disk radius", &r)?;
        let vol_m = ExactValue::new(&radius * &radius, 2);
        let circle = BoundaryComponent {
            volume: ExactValue::new(int(2) * &radius, 2),
            form: SecondFundamentalForm::scalar(2, radius.recip()),
        };
        Self::flat("disk", ModelKind::Disk { radius }, 2, vol_m, vec![circle], 0)
    }

    pub fn cylinder(height: ExactValue, radius: ExactValue) -> Result<Self> {
        positive("cylinder height", &height)?;
        positive("cylinder radius", &radius)?;
        let circumference = &ExactValue::new(int(2), 2) * &radius;
        let vol_m = &circumference * &height;
        let circle = BoundaryComponent {
            volume: circumference,
            form: SecondFundamentalForm::zero(2),
        };
        Self::flat(
            "cylinder",
            ModelKind::Cylinder { height, radius },
            2,
            vol_m,
            vec![circle.clone(), circle],
            1,
        )
    }

    pub fn hemisphere() -> Self {
        let two_pi = ExactValue::new(int(2), 2);
        Self {
            name: "hemisphere",
            kind: ModelKind::Hemisphere,
            m: 2,
            tau: ExactValue::from_int(2),
            einstein_lambda: ExactValue::from_int(1),
            vol_m: two_pi.clone(),
            vol_dm: two_pi.clone(),
            rho_mm: ExactValue::from_int(1),
            boundary: vec![BoundaryComponent {
                volume: two_pi,
                form: SecondFundamentalForm::zero(2),
            }],
            b0: 1,
            b1: 0,
        }
    }

    /// Einstein data in any dimension, for exercising the closed forms
    /// beyond the catalog. `rho_mm = τ/m` and `λ = τ/m` are filled in.
    pub fn synthetic(
        m: usize,
        tau: Rational,
        vol_m: ExactValue,
        boundary: Vec<BoundaryComponent>,
    ) -> Result<Self> {
        if m == 0 {
            return Err(Error::DimensionTooSmall { m, what: "manifold dimension" });
        }
        positive("volume", &vol_m)?;
        for c in &boundary {
            positive("boundary component volume", &c.volume)?;
            if c.form.m() != m {
                return Err(Error::DimensionMismatch { expected: m, got: c.form.m() });
            }
        }
        let vol_dm = boundary
            .iter()
            .try_fold(ExactValue::zero(), |acc, c| acc.try_add(&c.volume))?;
        let lambda = ExactValue::rational(&tau / int(m as i64));
        Ok(Self {
            name: "synthetic",
            kind: ModelKind::Synthetic,
            m,
            tau: ExactValue::rational(tau),
            einstein_lambda: lambda.clone(),
            vol_m,
            vol_dm,
            rho_mm: lambda,
            boundary,
            b0: 1,
            b1: 0,
        })
    }

    /// Scalar curvature as a rational; every catalog model has one.
    pub fn tau_rational(&self) -> Result<Rational> {
        self.tau
            .as_rational()
            .cloned()
            .ok_or_else(|| Error::Unsupported(format!("{}: τ is not rational", self.name)))
    }

    pub fn rho_mm_rational(&self) -> Result<Rational> {
        self.rho_mm
            .as_rational()
            .cloned()
            .ok_or_else(|| Error::Unsupported(format!("{}: ρ_mm is not rational", self.name)))
    }

    /// Length unit of the geometry: eigenvalues scale as its inverse square.
    pub fn length_scale(&self) -> f64 {
        match &self.kind {
            ModelKind::Interval { length } => length.to_f64() / std::f64::consts::PI,
            ModelKind::Disk { radius } => rational_to_f64(radius),
            ModelKind::Cylinder { radius, .. } => radius.to_f64(),
            ModelKind::Hemisphere | ModelKind::Synthetic => 1.0,
        }
    }

    pub fn boundary_invariants(&self) -> Result<BoundaryInvariants<ExactValue>> {
        let mut i0 = ExactValue::zero();
        let mut i1 = ExactValue::zero();
        let mut i2 = ExactValue::zero();
        for c in &self.boundary {
            i0 = i0.try_add(&c.volume.scale(&c.form.trace()))?;
            i1 = i1.try_add(&c.volume.scale(&c.form.trace_squared()))?;
            i2 = i2.try_add(&c.volume.scale(&c.form.norm_squared()))?;
        }
        Ok(BoundaryInvariants {
            m: self.m,
            i0,
            i1,
            i2,
            vol_dm: self.vol_dm.clone(),
        })
    }

    /// The boundary classification that holds by construction.
    pub fn ground_truth(&self) -> Result<BoundaryClassification<ExactValue>> {
        classify_boundary(&self.boundary_invariants()?, 0.0)
    }

    pub fn parameters(&self) -> Vec<(&'static str, ExactValue)> {
        match &self.kind {
            ModelKind::Interval { length } => vec![("length", length.clone())],
            ModelKind::Disk { radius } => vec![("radius", ExactValue::rational(radius.clone()))],
            ModelKind::Cylinder { height, radius } => {
                vec![("height", height.clone()), ("radius", radius.clone())]
            }
            ModelKind::Hemisphere | ModelKind::Synthetic => vec![],
        }
    }
}

impl Serialize for ModelManifold {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let params: std::collections::BTreeMap<&str, ExactJson> = self
            .parameters()
            .iter()
            .map(|(k, v)| (*k, ExactJson::from(v)))
            .collect();
        let mut st = s.serialize_struct("ModelManifold", 11)?;
        st.serialize_field("name", self.name)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("parameters", &params)?;
        st.serialize_field("tau", &self.tau)?;
        st.serialize_field("einstein_lambda", &self.einstein_lambda)?;
        st.serialize_field("vol_M", &self.vol_m)?;
        st.serialize_field("vol_dM", &self.vol_dm)?;
        st.serialize_field("rho_mm", &self.rho_mm)?;
        st.serialize_field("boundary", &self.boundary)?;
        st.serialize_field("b0", &self.b0)?;
        st.serialize_field("b1", &self.b1)?;
        st.end()
    }
}

/// Default catalog: interval of length π, unit disk, cylinder of height π
/// and radius 1, unit hemisphere.
pub fn catalog() -> Vec<ModelManifold> {
    vec![
        ModelManifold::interval(ExactValue::pi_pow_half(2)).expect("valid length"),
        ModelManifold::disk(Rational::one()).expect("valid radius"),
        ModelManifold::cylinder(ExactValue::pi_pow_half(2), ExactValue::from_int(1)).expect("valid"),
        ModelManifold::hemisphere(),
    ]
}

/// Integrated boundary invariants `L_aa[∂M]`, `L_aaL_bb[∂M]`, `L_abL_ab[∂M]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryInvariants<V> {
    pub m: usize,
    pub i0: V,
    pub i1: V,
    pub i2: V,
    #[serde(rename = "vol_dM")]
    pub vol_dm: V,
}

impl<V: Scalar> BoundaryInvariants<V> {
    pub fn to_f64(&self) -> BoundaryInvariants<f64> {
        BoundaryInvariants {
            m: self.m,
            i0: self.i0.to_f64(),
            i1: self.i1.to_f64(),
            i2: self.i2.to_f64(),
            vol_dm: self.vol_dm.to_f64(),
        }
    }

    /// Exact zero for exact inputs, `1e-8 · vol(∂M) · max(1, I2)` otherwise.
    pub fn default_tolerance(&self) -> f64 {
        if V::EXACT {
            0.0
        } else {
            1e-8 * self.vol_dm.to_f64() * self.i2.to_f64().max(1.0)
        }
    }

    /// `I2 − 2μ I0 + μ² (m−1) vol(∂M)`.
    pub fn umbilic_quadratic(&self, mu: &Rational) -> Result<V> {
        let n = int(self.m as i64 - 1);
        self.i2
            .sub(&self.i0.scale(&(int(2) * mu)))?
            .add(&self.vol_dm.scale(&(mu * mu * n)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryClassification<V> {
    pub totally_geodesic: bool,
    pub minimal: bool,
    pub totally_umbilic: bool,
    pub strongly_totally_umbilic: bool,
    pub mu: Option<V>,
}

pub fn classify_boundary<V: Scalar>(
    inv: &BoundaryInvariants<V>,
    tol: f64,
) -> Result<BoundaryClassification<V>> {
    if inv.vol_dm.le_tol(0.0) {
        return Err(Error::InvalidParameter("boundary volume must be positive".into()));
    }
    if tol < 0.0 || tol.is_nan() {
        return Err(Error::InvalidParameter("tolerance must be nonnegative".into()));
    }
    if inv.m < 2 {
        // no tangential directions: every criterion holds vacuously
        return Ok(BoundaryClassification {
            totally_geodesic: true,
            minimal: true,
            totally_umbilic: true,
            strongly_totally_umbilic: true,
            mu: Some(V::zero()),
        });
    }
    let n = int(inv.m as i64 - 1);
    let totally_geodesic = inv.i2.le_tol(tol);
    if totally_geodesic {
        return Ok(BoundaryClassification {
            totally_geodesic,
            minimal: true,
            totally_umbilic: true,
            strongly_totally_umbilic: true,
            mu: Some(V::zero()),
        });
    }
    let minimal = inv.i1.le_tol(tol);
    let totally_umbilic = inv.i2.scale(&n).sub(&inv.i1)?.le_tol(tol);
    // μ* = I0 / ((m−1) vol) minimises the quadratic; its minimum is
    // I2 − I0² / ((m−1) vol)
    let denom = inv.vol_dm.scale(&n);
    let mu_star = inv.i0.div(&denom)?;
    let minimum = inv.i2.sub(&inv.i0.mul(&inv.i0).div(&denom)?)?;
    let strongly = totally_umbilic && minimum.le_tol(tol);
    Ok(BoundaryClassification {
        totally_geodesic,
        minimal,
        totally_umbilic,
        strongly_totally_umbilic: strongly,
        mu: strongly.then_some(mu_star),
    })
}

/// Pointwise umbilicity of one second fundamental form, computed three ways.
#[derive(Clone, Debug)]
pub struct UmbilicOracle {
    pub umbilic: bool,
    pub mu: Option<Rational>,
    /// `(m−1) L_ab L_ab − L_aa L_bb` from the matrix entries.
    pub defect: Rational,
    /// The same quantity from the characteristic polynomial,
    /// `(m−1)(e₁² − 2e₂) − e₁²`.
    pub defect_char_poly: Rational,
    /// Principal curvatures, ascending.
    pub eigenvalues: Vec<f64>,
    /// `Σ_{i<j} (κ_i − κ_j)²` from the eigenvalues.
    pub spread_sum: f64,
}

pub fn pointwise_umbilic_oracle(l: &SecondFundamentalForm) -> UmbilicOracle {
    let n = l.tangent_dim();
    let defect = l.umbilic_defect();

    let e1 = l.trace();
    let mut e2 = Rational::zero();
    for a in 0..n {
        for b in a + 1..n {
            e2 += l.get(a, a) * l.get(b, b) - l.get(a, b) * l.get(a, b);
        }
    }
    let power_sum_2 = &e1 * &e1 - int(2) * &e2;
    let defect_char_poly = int(n as i64) * power_sum_2 - &e1 * &e1;
    assert_eq!(defect, defect_char_poly, "entry and characteristic-polynomial routes disagree");

    let eigenvalues = if n == 0 {
        Vec::new()
    } else {
        let mat = DMatrix::from_fn(n, n, |a, b| rational_to_f64(l.get(a, b)));
        let mut ev: Vec<f64> = mat.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    };
    let mut spread_sum = 0.0;
    for i in 0..eigenvalues.len() {
        for j in i + 1..eigenvalues.len() {
            spread_sum += (eigenvalues[i] - eigenvalues[j]).powi(2);
        }
    }

    let umbilic = defect.is_zero();
    let mu = umbilic.then(|| if n == 0 { Rational::zero() } else { l.get(0, 0).clone() });
    UmbilicOracle {
        umbilic,
        mu,
        defect,
        defect_char_poly,
        eigenvalues,
        spread_sum,
    }
}

/// `|L − μ id|² = L_ab L_ab − 2μ L_aa + (m−1) μ²`, exactly.
pub fn umbilic_distance(l: &SecondFundamentalForm, mu: &Rational) -> Rational {
    l.norm_squared() - int(2) * mu * l.trace() + int(l.tangent_dim() as i64) * mu * mu
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rat;

    fn two_pi() -> ExactValue {
        ExactValue::new(int(2), 2)
    }

    #[test]
    fn catalog_invariants() {
        for model in catalog() {
            let m = int(model.m as i64);
            assert_eq!(model.tau, &model.einstein_lambda * &ExactValue::rational(m.clone()));
            assert_eq!(model.rho_mm, model.tau.scale(&m.recip()));
            assert!(model.vol_m.is_positive() && model.vol_dm.is_positive());
        }
    }

    #[test]
    fn disk_invariants() {
        let inv = ModelManifold::disk(int(1)).unwrap().boundary_invariants().unwrap();
        assert_eq!(inv.i0, two_pi());
        assert_eq!(inv.i1, two_pi());
        assert_eq!(inv.i2, two_pi());
    }

    #[test]
    fn totally_geodesic_models() {
        let h = ModelManifold::hemisphere().boundary_invariants().unwrap();
        assert!(h.i0.is_zero() && h.i1.is_zero() && h.i2.is_zero());
        let c = ModelManifold::cylinder(ExactValue::from_int(1), ExactValue::from_int(1)).unwrap();
        let inv = c.boundary_invariants().unwrap();
        assert!(inv.i0.is_zero() && inv.i1.is_zero() && inv.i2.is_zero());
        assert_eq!(inv.vol_dm, ExactValue::new(int(4), 2));
    }

    #[test]
    fn rejects_nonpositive_scales() {
        assert!(ModelManifold::disk(int(0)).is_err());
        assert!(ModelManifold::interval(ExactValue::from_int(-1)).is_err());
        assert!(ModelManifold::cylinder(ExactValue::from_int(1), ExactValue::zero()).is_err());
    }

    #[test]
    fn classify_disk() {
        let inv = ModelManifold::disk(int(1)).unwrap().boundary_invariants().unwrap();
        let c = classify_boundary(&inv, 0.0).unwrap();
        assert!(!c.totally_geodesic && !c.minimal);
        assert!(c.totally_umbilic && c.strongly_totally_umbilic);
        assert_eq!(c.mu, Some(ExactValue::from_int(1)));
    }

    #[test]
    fn classify_disk_radii() {
        for r in [rat(1, 2), int(1), int(2)] {
            let inv = ModelManifold::disk(r.clone()).unwrap().boundary_invariants().unwrap();
            let c = classify_boundary(&inv, 0.0).unwrap();
            assert!(c.strongly_totally_umbilic);
            let mu = c.mu.unwrap();
            assert_eq!(mu.scale(&r), ExactValue::from_int(1));
        }
    }

    #[test]
    fn classify_hemisphere() {
        let inv = ModelManifold::hemisphere().boundary_invariants().unwrap();
        let c = classify_boundary(&inv, 0.0).unwrap();
        assert!(c.totally_geodesic && c.minimal && c.totally_umbilic && c.strongly_totally_umbilic);
        assert_eq!(c.mu, Some(ExactValue::zero()));
    }

    #[test]
    fn classify_direct_inequalities() {
        let inv = BoundaryInvariants {
            m: 3,
            i0: 0.0,
            i1: 0.0,
            i2: 1.0,
            vol_dm: 1.0,
        };
        let c = classify_boundary(&inv, 0.0).unwrap();
        assert!(!c.totally_geodesic);
        assert!(c.minimal);
        assert!(!c.totally_umbilic);
        assert!(!c.strongly_totally_umbilic);
    }

    #[test]
    fn classify_rejects_empty_boundary() {
        let inv = BoundaryInvariants {
            m: 2,
            i0: 0.0,
            i1: 0.0,
            i2: 0.0,
            vol_dm: 0.0,
        };
        assert!(classify_boundary(&inv, 0.0).is_err());
    }

    #[test]
    fn minimiser_beats_neighbours() {
        let inv = BoundaryInvariants {
            m: 3,
            i0: 2.5,
            i1: 4.0,
            i2: 3.0,
            vol_dm: 1.7,
        };
        let mu_star = inv.i0 / (2.0 * inv.vol_dm);
        let q = |mu: f64| inv.i2 - 2.0 * mu * inv.i0 + mu * mu * 2.0 * inv.vol_dm;
        assert!(q(mu_star) <= q(mu_star + 0.1));
        assert!(q(mu_star) <= q(mu_star - 0.1));
        let exact = inv.umbilic_quadratic(&rat(1, 3)).unwrap();
        assert!((exact - q(1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn oracle_examples() {
        let l = SecondFundamentalForm::scalar(4, int(2));
        let o = pointwise_umbilic_oracle(&l);
        assert!(o.umbilic);
        assert_eq!(o.mu, Some(int(2)));
        assert!(o.defect.is_zero());
        assert!(umbilic_distance(&l, &int(2)).is_zero());

        let l = SecondFundamentalForm::diagonal(3, &[int(1), int(2)]).unwrap();
        let o = pointwise_umbilic_oracle(&l);
        assert!(!o.umbilic);
        assert_eq!(o.defect, int(1));
        assert!((o.spread_sum - 1.0).abs() < 1e-12);

        let o = pointwise_umbilic_oracle(&SecondFundamentalForm::zero(3));
        assert!(o.umbilic);
        assert_eq!(o.mu, Some(int(0)));
    }

    #[test]
    fn catalog_serialises_with_documented_keys() {
        let json = serde_json::to_value(catalog()).unwrap();
        let disk = &json[1];
        assert_eq!(disk["name"], "disk");
        assert_eq!(disk["vol_M"]["num"], "1");
        assert_eq!(disk["vol_M"]["pi_half_exponent"], 2);
        assert_eq!(disk["boundary"][0]["L"][0][0]["num"], "1");
        assert_eq!(disk["parameters"]["radius"]["den"], "1");
    }
}
