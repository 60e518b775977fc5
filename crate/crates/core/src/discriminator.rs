//! Inversion of heat coefficients back to boundary invariants, boundary
//! classification, and the transfer of boundary properties between two
//! manifolds with the same spectral data.
//!
//! The scalar curvature `τ` is always an input: it is a hypothesis of the
//! transfer results, never inferred from `a₂`. The normal Ricci component
//! is taken to be `τ/m`.

use num_traits::Zero;
use serde::Serialize;

use crate::asymptotic_fit::{fit, TGrid, DEFAULT_N_TERMS};
use crate::boundary_geometry::{classify_boundary, BoundaryClassification, BoundaryInvariants, ModelManifold};
use crate::conditions::{OperatorPair, OperatorSpec};
use crate::error::{Error, Result};
use crate::exact_algebra::{
    coefficient_matrix, fiber_rank, int, trace_chi, trace_s_coefficient, ExactValue, Rational,
    RationalJson, Weitzenbock,
};
use crate::heat_coefficients::heat_coefficients;
use crate::scalar::Scalar;
use crate::spectra::{heat_trace_grid, EigenvalueList};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Exact,
    Fitted,
}

/// Relative agreement required between the volumes read off the two
/// members of a fitted pair.
pub const FITTED_VOLUME_AGREEMENT: f64 = 1e-3;

/// Default classification tolerance for fitted data, relative to `vol(∂M)`.
pub const DEFAULT_FITTED_TOL: f64 = 1e-2;

/// `(a₀, a₁, a₂, a₃)` of both members of one operator pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralDataset<V> {
    pub m: usize,
    #[serde(serialize_with = "ser_rational")]
    pub tau: Rational,
    pub pair: OperatorPair,
    pub coefficients: [[V; 4]; 2],
    pub provenance: Provenance,
}

fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    RationalJson::from(q).serialize(s)
}

impl SpectralDataset<ExactValue> {
    /// Closed-form coefficients of a catalog model.
    pub fn exact(model: &ModelManifold, pair: OperatorPair) -> Result<Self> {
        if model.m < pair.min_dimension() {
            return Err(Error::DimensionTooSmall {
                m: model.m,
                what: "operator pair needs a larger dimension",
            });
        }
        let [first, second] = pair.members();
        let c1 = heat_coefficients(model, first.p, first.bc)?;
        let c2 = heat_coefficients(model, second.p, second.bc)?;
        Ok(Self {
            m: model.m,
            tau: model.tau_rational()?,
            pair,
            coefficients: [c1.a, c2.a],
            provenance: Provenance::Exact,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecoveryResult<V> {
    pub pair: OperatorPair,
    pub provenance: Provenance,
    #[serde(rename = "vol_M")]
    pub vol_m: V,
    #[serde(rename = "vol_dM")]
    pub vol_dm: V,
    pub invariants: BoundaryInvariants<V>,
    pub classification: BoundaryClassification<V>,
    /// Determinant of the exact `(α, β)` matrix used in the solve.
    pub determinant: RationalJson,
    /// Absolute tolerance used by the classifier.
    pub tolerance: f64,
}

/// `E_p` as a multiple of the identity at `(m, p)`.
fn e_scalar(m: usize, p: usize, tau: &Rational) -> Result<Rational> {
    Weitzenbock::for_scalar_curvature(tau).scalar(m, p)
}

/// `Tr χ · (16τ − 8ρ_mm + 96E_p)` with `ρ_mm = τ/m`.
fn star_term(m: usize, op: OperatorSpec, tau: &Rational) -> Result<Rational> {
    let rho = tau / int(m as i64);
    let e = e_scalar(m, op.p, tau)?;
    Ok(trace_chi(m, op.p, op.bc)? * (int(16) * tau - int(8) * rho + int(96) * e))
}

fn agree<V: Scalar>(a: &V, b: &V, provenance: Provenance, what: &str) -> Result<()> {
    let ok = if provenance == Provenance::Exact && V::EXACT {
        a.sub(b).is_ok_and(|d| d.le_tol(0.0) && d.scale(&int(-1)).le_tol(0.0))
    } else {
        let rel = match provenance {
            Provenance::Exact => 1e-12,
            Provenance::Fitted => FITTED_VOLUME_AGREEMENT,
        };
        let (x, y) = (a.to_f64(), b.to_f64());
        (x - y).abs() <= rel * x.abs().max(y.abs())
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InconsistentVolumes(format!(
            "{what}: {} from the first operator, {} from the second",
            a.to_f64(),
            b.to_f64()
        )))
    }
}

/// Volumes, `L_aa[∂M]`, `L_aaL_bb[∂M]` and `L_abL_ab[∂M]` from the heat
/// coefficients of one pair, followed by classification.
///
/// `tol_rel` scales the classifier tolerance by `vol(∂M)`; when absent,
/// exact data is classified exactly and fitted data with
/// [`DEFAULT_FITTED_TOL`].
pub fn recover_invariants<V: Scalar>(data: &SpectralDataset<V>, tol_rel: Option<f64>) -> Result<RecoveryResult<V>> {
    let m = data.m;
    let pair = data.pair;
    if m < pair.min_dimension() {
        return Err(Error::DimensionTooSmall {
            m,
            what: "operator pair needs a larger dimension",
        });
    }
    let members = pair.members();
    if data.provenance == Provenance::Fitted && m != 2 && members.iter().any(|op| op.p == 1) {
        return Err(Error::Unsupported(format!(
            "fitted 1-form data is only supported for surfaces (m = {m})"
        )));
    }
    let [first, second] = members;
    let [c1, c2] = &data.coefficients;
    let tau = &data.tau;
    let mi = m as i64;

    // a₀ = (4π)^{−m/2} C(m,p) vol(M)
    let vol_from_a0 = |a0: &V, op: OperatorSpec| -> Result<V> {
        Ok(a0.mul(&V::four_pi_pow_half(mi)).scale(&fiber_rank(m, op.p)?.recip()))
    };
    let vol_m = vol_from_a0(&c1[0], first)?;
    agree(&vol_m, &vol_from_a0(&c2[0], second)?, data.provenance, "vol(M)")?;

    // a₁ = (4π)^{−(m−1)/2} ¼ Tr χ vol(∂M); Tr χ = ±1 on functions
    let vol_from_a1 = |a1: &V, tr: &Rational| a1.mul(&V::four_pi_pow_half(mi - 1)).scale(&(int(4) / tr));
    let tr1 = trace_chi(m, first.p, first.bc)?;
    let vol_dm = vol_from_a1(&c1[1], &tr1);
    let tr2 = trace_chi(m, second.p, second.bc)?;
    if !tr2.is_zero() {
        agree(&vol_dm, &vol_from_a1(&c2[1], &tr2), data.provenance, "vol(∂M)")?;
    }
    if vol_dm.le_tol(0.0) {
        return Err(Error::InconsistentVolumes(format!(
            "boundary volume {} is not positive",
            vol_dm.to_f64()
        )));
    }

    // 6(4π)^{m/2} a₂ = C(6E + τ) vol(M) + (2C + 12s) L_aa[∂M]
    let rank = fiber_rank(m, first.p)?;
    let interior = vol_m.scale(&(&rank * (int(6) * e_scalar(m, first.p, tau)? + tau)));
    let boundary_coeff = int(2) * &rank + int(12) * trace_s_coefficient(m, first.p, first.bc)?;
    let i0 = if m < 2 {
        V::zero()
    } else {
        c1[2]
            .mul(&V::four_pi_pow_half(mi))
            .scale(&int(6))
            .sub(&interior)?
            .scale(&boundary_coeff.recip())
    };

    // 384 (4π)^{(m−1)/2} a₃ − star · vol(∂M) = α L_aaL_bb[∂M] + β L_abL_ab[∂M]
    let matrix = coefficient_matrix(pair, m)?;
    let (i1, i2) = if m < 2 {
        (V::zero(), V::zero())
    } else {
        let rhs = |a3: &V, op: OperatorSpec| -> Result<V> {
            a3.mul(&V::four_pi_pow_half(mi - 1))
                .scale(&int(384))
                .sub(&vol_dm.scale(&star_term(m, op, tau)?))
        };
        let b1 = rhs(&c1[3], first)?;
        let b2 = rhs(&c2[3], second)?;
        let [[a1, be1], [a2, be2]] = &matrix.rows;
        let det = &matrix.determinant;
        if det.is_zero() {
            return Err(Error::SingularSystem);
        }
        let inv = det.recip();
        let i1 = b1.scale(&(be2 * &inv)).sub(&b2.scale(&(be1 * &inv)))?;
        let i2 = b2.scale(&(a1 * &inv)).sub(&b1.scale(&(a2 * &inv)))?;
        (i1, i2)
    };

    let invariants = BoundaryInvariants {
        m,
        i0,
        i1,
        i2,
        vol_dm: vol_dm.clone(),
    };
    let tolerance = match (tol_rel, data.provenance) {
        (Some(r), _) => r * vol_dm.to_f64(),
        (None, Provenance::Exact) if V::EXACT => 0.0,
        (None, Provenance::Exact) => invariants.default_tolerance(),
        (None, Provenance::Fitted) => DEFAULT_FITTED_TOL * vol_dm.to_f64(),
    };
    let classification = classify_boundary(&invariants, tolerance)?;
    Ok(RecoveryResult {
        pair,
        provenance: data.provenance,
        vol_m,
        vol_dm,
        invariants,
        classification,
        determinant: RationalJson::from(&matrix.determinant),
        tolerance,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyTransfer {
    pub property: &'static str,
    pub a_has: bool,
    pub b_has: bool,
    /// `false` exactly when A has the property and B does not.
    pub transfer_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransferReport<V> {
    pub m: usize,
    pub pair: OperatorPair,
    pub a: RecoveryResult<V>,
    pub b: RecoveryResult<V>,
    pub properties: Vec<PropertyTransfer>,
    /// `B − A` for `I0`, `I1`, `I2`.
    pub delta_i0: V,
    pub delta_i1: V,
    pub delta_i2: V,
    pub all_transfers_hold: bool,
}

/// Recovers both sides and reports, for each boundary property, whether it
/// carries over from A to B. Refuses data with different `τ`.
pub fn compare_manifolds<V: Scalar>(
    a: &SpectralDataset<V>,
    b: &SpectralDataset<V>,
    tol_rel: Option<f64>,
) -> Result<TransferReport<V>> {
    if a.m != b.m {
        return Err(Error::HypothesisViolation(format!(
            "dimensions differ ({} vs {})",
            a.m, b.m
        )));
    }
    if a.tau != b.tau {
        return Err(Error::HypothesisViolation(format!(
            "scalar curvatures differ (τ = {} vs {}); the transfer results assume equal τ",
            a.tau, b.tau
        )));
    }
    if a.pair != b.pair {
        return Err(Error::HypothesisViolation(format!(
            "operator pairs differ ({} vs {})",
            a.pair, b.pair
        )));
    }
    let ra = recover_invariants(a, tol_rel)?;
    let rb = recover_invariants(b, tol_rel)?;
    let flags = |c: &BoundaryClassification<V>| {
        [
            ("totally_geodesic", c.totally_geodesic),
            ("minimal", c.minimal),
            ("totally_umbilic", c.totally_umbilic),
            ("strongly_totally_umbilic", c.strongly_totally_umbilic),
        ]
    };
    let properties: Vec<PropertyTransfer> = flags(&ra.classification)
        .into_iter()
        .zip(flags(&rb.classification))
        .map(|((property, a_has), (_, b_has))| PropertyTransfer {
            property,
            a_has,
            b_has,
            transfer_holds: !a_has || b_has,
        })
        .collect();
    let all_transfers_hold = properties.iter().all(|p| p.transfer_holds);
    Ok(TransferReport {
        m: a.m,
        pair: a.pair,
        delta_i0: rb.invariants.i0.sub(&ra.invariants.i0)?,
        delta_i1: rb.invariants.i1.sub(&ra.invariants.i1)?,
        delta_i2: rb.invariants.i2.sub(&ra.invariants.i2)?,
        a: ra,
        b: rb,
        properties,
        all_transfers_hold,
    })
}

/// Fitting options for [`classify_from_spectra`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitOptions {
    /// `None` picks `[28/Λ, 2800/Λ]` with 60 points.
    pub grid: Option<TGrid>,
    pub n_terms: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            grid: None,
            n_terms: DEFAULT_N_TERMS,
        }
    }
}

/// Fits both spectra of a pair and assembles a fitted dataset.
pub fn fitted_dataset(
    spectra: [&EigenvalueList; 2],
    pair: OperatorPair,
    m: usize,
    tau: &Rational,
    options: &FitOptions,
) -> Result<SpectralDataset<f64>> {
    let members = pair.members();
    let mut coefficients = [[0.0; 4]; 2];
    for (k, (list, op)) in spectra.iter().zip(members).enumerate() {
        if list.m != m {
            return Err(Error::DimensionMismatch { expected: m, got: list.m });
        }
        if list.source.p.is_some_and(|p| p != op.p) || list.source.bc.is_some_and(|bc| bc != op.bc) {
            return Err(Error::InvalidParameter(format!(
                "spectrum {} is labelled {:?} {:?}, expected {op}",
                k + 1,
                list.source.p,
                list.source.bc
            )));
        }
        let grid = match options.grid {
            Some(g) => g,
            None => TGrid::new(28.0 / list.lambda_max, 2800.0 / list.lambda_max, 60)?,
        };
        let samples = heat_trace_grid(list, &grid.points())?;
        let f = fit(&samples, m, options.n_terms)?;
        coefficients[k] = [f.a_hat[0], f.a_hat[1], f.a_hat[2], f.a_hat[3]];
    }
    Ok(SpectralDataset {
        m,
        tau: tau.clone(),
        pair,
        coefficients,
        provenance: Provenance::Fitted,
    })
}

/// Fit, then [`recover_invariants`].
pub fn classify_from_spectra(
    spectra: [&EigenvalueList; 2],
    pair: OperatorPair,
    m: usize,
    tau: &Rational,
    tol_rel: Option<f64>,
    options: &FitOptions,
) -> Result<RecoveryResult<f64>> {
    recover_invariants(&fitted_dataset(spectra, pair, m, tau, options)?, tol_rel)
}

/// Exact data rendered as floats, for mixing with fitted data.
pub fn to_float_dataset(data: &SpectralDataset<ExactValue>) -> SpectralDataset<f64> {
    SpectralDataset {
        m: data.m,
        tau: data.tau.clone(),
        pair: data.pair,
        coefficients: [0, 1].map(|k| [0, 1, 2, 3].map(|n| data.coefficients[k][n].to_f64())),
        provenance: data.provenance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary_geometry::catalog;
    use crate::exact_algebra::rat;

    #[test]
    fn exact_round_trip_on_catalog() {
        for model in catalog() {
            let truth = model.boundary_invariants().unwrap();
            for pair in OperatorPair::ALL {
                let Ok(data) = SpectralDataset::exact(&model, pair) else {
                    assert!(model.m < pair.min_dimension(), "{} {pair}", model.name);
                    continue;
                };
                let r = recover_invariants(&data, None).unwrap();
                assert_eq!(r.vol_m, model.vol_m, "{} {pair}", model.name);
                assert_eq!(r.vol_dm, model.vol_dm);
                assert_eq!(r.invariants, truth, "{} {pair}", model.name);
                assert_eq!(r.classification, model.ground_truth().unwrap());
            }
        }
    }

    #[test]
    fn disk_classification_and_scale() {
        for r in [rat(1, 2), int(1), int(2)] {
            let disk = ModelManifold::disk(r.clone()).unwrap();
            for pair in OperatorPair::ALL {
                let res = recover_invariants(&SpectralDataset::exact(&disk, pair).unwrap(), None).unwrap();
                assert!(res.classification.strongly_totally_umbilic);
                assert!(!res.classification.minimal);
                assert_eq!(res.classification.mu, Some(ExactValue::rational(r.recip())));
            }
        }
    }

    #[test]
    fn determinants_reported() {
        let disk = ModelManifold::disk(int(1)).unwrap();
        let dets: Vec<String> = OperatorPair::ALL
            .iter()
            .map(|&p| recover_invariants(&SpectralDataset::exact(&disk, p).unwrap(), None).unwrap().determinant.num)
            .collect();
        assert_eq!(dets, ["-144", "1584", "-432"]);
    }

    #[test]
    fn transfer_reports() {
        let models = catalog();
        let disk = SpectralDataset::exact(&models[1], OperatorPair::DirichletNeumann).unwrap();
        let cyl = SpectralDataset::exact(&models[2], OperatorPair::DirichletNeumann).unwrap();
        let hemi = SpectralDataset::exact(&models[3], OperatorPair::DirichletNeumann).unwrap();

        let same = compare_manifolds(&disk, &disk, None).unwrap();
        assert!(same.all_transfers_hold);
        assert!(same.delta_i1.is_zero() && same.delta_i2.is_zero());

        let r = compare_manifolds(&cyl, &disk, None).unwrap();
        let two_pi = ExactValue::new(int(2), 2);
        assert_eq!(r.delta_i1, two_pi);
        assert_eq!(r.delta_i2, two_pi);
        assert!(!r.all_transfers_hold);
        let geodesic = &r.properties[0];
        assert!(geodesic.a_has && !geodesic.b_has && !geodesic.transfer_holds);

        assert!(matches!(
            compare_manifolds(&hemi, &disk, None),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn inconsistent_volumes_rejected() {
        let disk = ModelManifold::disk(int(1)).unwrap();
        let mut data = to_float_dataset(&SpectralDataset::exact(&disk, OperatorPair::DirichletNeumann).unwrap());
        data.provenance = Provenance::Fitted;
        data.coefficients[1][0] *= 1.1;
        assert!(matches!(recover_invariants(&data, None), Err(Error::InconsistentVolumes(_))));
    }

    #[test]
    fn float_route_matches_exact_route() {
        for model in catalog() {
            for pair in OperatorPair::ALL {
                let Ok(data) = SpectralDataset::exact(&model, pair) else { continue };
                let exact = recover_invariants(&data, None).unwrap();
                let float = recover_invariants(&to_float_dataset(&data), None).unwrap();
                let e = exact.invariants.to_f64();
                for (x, y) in [(e.i0, float.invariants.i0), (e.i1, float.invariants.i1), (e.i2, float.invariants.i2)] {
                    assert!((x - y).abs() < 1e-9, "{} {pair}: {x} vs {y}", model.name);
                }
                let (a, b) = (&exact.classification, &float.classification);
                assert_eq!(
                    (a.totally_geodesic, a.minimal, a.totally_umbilic, a.strongly_totally_umbilic),
                    (b.totally_geodesic, b.minimal, b.totally_umbilic, b.strongly_totally_umbilic),
                );
            }
        }
    }
}
