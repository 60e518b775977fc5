//! Pointwise trace of the boundary integrand of `a₃`, and everything that is
//! read off from it: the quadratic coefficients `(α, β)` of `L_aa L_bb` and
//! `L_ab L_ab`, the trace tables for `Λ¹` / `Λ^{m−1}`, and the 2×2
//! coefficient matrices of the three operator pairs.

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::operators::{build_fiber_operators, BoundaryOperators};
use super::sff::SecondFundamentalForm;
use super::value::{int, Rational, RationalJson};
use crate::conditions::{BoundaryCondition, OperatorPair};
use crate::error::{Error, Result};

/// Which Weitzenböck endomorphism `E_p` to use.
///
/// `E₀ = 0` and `E₁ = −ρ = −(τ/m)·id` on an Einstein fibre; on a flat fibre
/// `E_p = 0` for every `p`. Nothing else is supported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Weitzenbock {
    Flat,
    Einstein { tau: Rational },
}

impl Weitzenbock {
    /// For scalar curvature `τ`, the flat variant when `τ = 0`.
    pub fn for_scalar_curvature(tau: &Rational) -> Self {
        if tau.is_zero() {
            Weitzenbock::Flat
        } else {
            Weitzenbock::Einstein { tau: tau.clone() }
        }
    }

    /// `E_p` as a multiple of the identity.
    pub fn scalar(&self, m: usize, p: usize) -> Result<Rational> {
        match self {
            Weitzenbock::Flat => Ok(Rational::zero()),
            Weitzenbock::Einstein { tau } => match p {
                0 => Ok(Rational::zero()),
                1 => Ok(-tau / int(m as i64)),
                _ if tau.is_zero() => Ok(Rational::zero()),
                _ => Err(Error::UnsupportedEndomorphism { m, p }),
            },
        }
    }
}

/// The individual traces making up the bracket
/// `Tr{96χE + 16χτ − 8χρ_mm + [13Π₊−7Π₋]L_aaL_bb + [2Π₊+10Π₋]L_abL_ab
///     + 96 S L_aa + 192 S² − 12 χ_{;a}χ_{;a}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketTerms {
    pub chi_e: Rational,
    pub chi_tau: Rational,
    pub chi_rho: Rational,
    pub projector_trace_sq: Rational,
    pub projector_norm_sq: Rational,
    pub s_mean_curvature: Rational,
    pub s_squared: Rational,
    pub chi_deriv_squared: Rational,
}

impl BracketTerms {
    pub fn total(&self) -> Rational {
        [
            &self.chi_e,
            &self.chi_tau,
            &self.chi_rho,
            &self.projector_trace_sq,
            &self.projector_norm_sq,
            &self.s_mean_curvature,
            &self.s_squared,
            &self.chi_deriv_squared,
        ]
        .into_iter()
        .fold(Rational::zero(), |acc, x| acc + x)
    }

    /// The part that depends on `L`.
    pub fn quadratic_part(&self) -> Rational {
        &self.projector_trace_sq
            + &self.projector_norm_sq
            + &self.s_mean_curvature
            + &self.s_squared
            + &self.chi_deriv_squared
    }
}

pub fn bracket_terms(
    ops: &BoundaryOperators,
    l: &SecondFundamentalForm,
    e_scalar: &Rational,
    tau: &Rational,
    rho_mm: &Rational,
) -> BracketTerms {
    let tr_chi = ops.chi.trace();
    let tr_plus = ops.pi_plus.trace();
    let tr_minus = ops.pi_minus.trace();
    let kappa = l.trace();
    let chi_deriv_sq = ops
        .chi_deriv
        .iter()
        .fold(Rational::zero(), |acc, d| acc + d.trace_product(d));
    BracketTerms {
        chi_e: int(96) * e_scalar * &tr_chi,
        chi_tau: int(16) * tau * &tr_chi,
        chi_rho: int(-8) * rho_mm * &tr_chi,
        projector_trace_sq: (int(13) * &tr_plus - int(7) * &tr_minus) * l.trace_squared(),
        projector_norm_sq: (int(2) * &tr_plus + int(10) * &tr_minus) * l.norm_squared(),
        s_mean_curvature: int(96) * ops.s.trace() * &kappa,
        s_squared: int(192) * ops.s.trace_product(&ops.s),
        chi_deriv_squared: int(-12) * chi_deriv_sq,
    }
}

/// Pointwise trace of the `a₃` boundary integrand for `Δ_p` with condition
/// `bc`, scalar curvature `τ`, normal Ricci component `ρ_mm`, and
/// Weitzenböck endomorphism `e`.
pub fn a3_bracket_trace(
    m: usize,
    p: usize,
    bc: BoundaryCondition,
    l: &SecondFundamentalForm,
    tau: &Rational,
    rho_mm: &Rational,
    e: &Weitzenbock,
) -> Result<Rational> {
    let e_scalar = e.scalar(m, p)?;
    let ops = build_fiber_operators(m, p, bc, l)?;
    Ok(bracket_terms(&ops, l, &e_scalar, tau, rho_mm).total())
}

/// `Tr χ` for `(m, p, bc)`.
pub fn trace_chi(m: usize, p: usize, bc: BoundaryCondition) -> Result<Rational> {
    Ok(build_fiber_operators(m, p, bc, &SecondFundamentalForm::zero(m))?
        .chi
        .trace())
}

/// `Tr id` on the fibre, `C(m, p)`.
pub fn fiber_rank(m: usize, p: usize) -> Result<Rational> {
    if p > m {
        return Err(Error::DegreeOutOfRange { m, p });
    }
    Ok(int(super::fiber::binomial(m, p) as i64))
}

/// The constant `s` with `Tr S = s · L_aa` (`S` is linear in `L` and
/// depends only on its diagonal by isotropy).
pub fn trace_s_coefficient(m: usize, p: usize, bc: BoundaryCondition) -> Result<Rational> {
    if m < 2 {
        return Ok(Rational::zero());
    }
    let l = SecondFundamentalForm::scalar(m, Rational::one());
    let tr_s = build_fiber_operators(m, p, bc, &l)?.s.trace();
    Ok(tr_s / int(m as i64 - 1))
}

/// Coefficients of the `a₃` boundary integrand in the form
/// `c_chi_e·Tr{χE} + c_tau·Tr{χ}τ + c_rho·Tr{χ}ρ_mm + c_ll·L_aaL_bb + c_l2·L_abL_ab`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct A3IntegrandCoefficients {
    pub c_chi_e: Rational,
    pub c_tau: Rational,
    pub c_rho: Rational,
    pub c_ll_trace: Rational,
    pub c_l2_trace: Rational,
}

impl A3IntegrandCoefficients {
    pub fn new(m: usize, p: usize, bc: BoundaryCondition) -> Result<Self> {
        let (alpha, beta) = extract_quadratic_coefficients(m, p, bc)?;
        Ok(Self {
            c_chi_e: int(96),
            c_tau: int(16),
            c_rho: int(-8),
            c_ll_trace: alpha,
            c_l2_trace: beta,
        })
    }
}

const EXTRACTION_SEED: u64 = 0x5eed_a3;

/// `(α, β)` such that the `L`-dependent part of the bracket equals
/// `α·L_aaL_bb + β·L_abL_ab` for every symmetric `L`.
///
/// For `m ≥ 3` the pair is read off from sampled forms and checked on extra
/// samples. With a single tangent direction (`m = 2`) the two invariants
/// coincide, so only `α + β` is determined by the fibre itself; the split is
/// then defined by continuation in the dimension: the coefficients are
/// polynomial in `m` for fixed `(p, bc)`, so they are interpolated from
/// `m = 3, 4, …` and evaluated at 2, and `α + β` is checked against the
/// direct `m = 2` value.
pub fn extract_quadratic_coefficients(
    m: usize,
    p: usize,
    bc: BoundaryCondition,
) -> Result<(Rational, Rational)> {
    extract_quadratic_coefficients_seeded(m, p, bc, EXTRACTION_SEED)
}

pub fn extract_quadratic_coefficients_seeded(
    m: usize,
    p: usize,
    bc: BoundaryCondition,
    seed: u64,
) -> Result<(Rational, Rational)> {
    if p > m {
        return Err(Error::DegreeOutOfRange { m, p });
    }
    match m {
        0 => Err(Error::DimensionTooSmall {
            m,
            what: "no fibre in dimension 0",
        }),
        1 if p != 0 => Err(Error::DimensionTooSmall {
            m,
            what: "form-valued quadratic coefficients need m >= 2",
        }),
        1 | 2 => continued_coefficients(m, p, bc, seed),
        _ => sampled_coefficients(m, p, bc, seed),
    }
}

fn quadratic_part(m: usize, p: usize, bc: BoundaryCondition, l: &SecondFundamentalForm) -> Result<Rational> {
    let ops = build_fiber_operators(m, p, bc, l)?;
    let zero = Rational::zero();
    Ok(bracket_terms(&ops, l, &zero, &zero, &zero).quadratic_part())
}

fn sampled_coefficients(
    m: usize,
    p: usize,
    bc: BoundaryCondition,
    seed: u64,
) -> Result<(Rational, Rational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((m as u64) << 32) ^ ((p as u64) << 16));
    let mut samples: Vec<(Rational, Rational, Rational)> = Vec::new();
    let mut solution: Option<(Rational, Rational)> = None;
    let mut checks = 0;
    // at most a handful of draws are ever needed; bail out if the generator
    // keeps producing degenerate pairs
    for _ in 0..64 {
        let l = SecondFundamentalForm::random(m, &mut rng);
        let row = (l.trace_squared(), l.norm_squared(), quadratic_part(m, p, bc, &l)?);
        match &solution {
            None => {
                if let Some(first) = samples.iter().find(|s| &s.0 * &row.1 != &s.1 * &row.0) {
                    let det = &first.0 * &row.1 - &first.1 * &row.0;
                    let alpha = (&first.2 * &row.1 - &first.1 * &row.2) / &det;
                    let beta = (&first.0 * &row.2 - &first.2 * &row.0) / &det;
                    solution = Some((alpha, beta));
                }
                samples.push(row);
            }
            Some((alpha, beta)) => {
                if alpha * &row.0 + beta * &row.1 != row.2 {
                    return Err(inconsistent(m, p, bc));
                }
                checks += 1;
                if checks >= 2 {
                    break;
                }
            }
        }
    }
    let (alpha, beta) = solution.ok_or_else(|| inconsistent(m, p, bc))?;
    // the samples used to build the solution must fit too
    for s in &samples {
        if &alpha * &s.0 + &beta * &s.1 != s.2 {
            return Err(inconsistent(m, p, bc));
        }
    }
    Ok((alpha, beta))
}

fn continued_coefficients(
    m: usize,
    p: usize,
    bc: BoundaryCondition,
    seed: u64,
) -> Result<(Rational, Rational)> {
    // traces are polynomials of degree <= p + 1 in the dimension for fixed (p, bc)
    let nodes: Vec<usize> = (3..3 + p + 2).collect();
    let check_node = 3 + p + 2;
    let values = nodes
        .iter()
        .map(|&k| sampled_coefficients(k, p, bc, seed))
        .collect::<Result<Vec<_>>>()?;
    let alphas: Vec<Rational> = values.iter().map(|v| v.0.clone()).collect();
    let betas: Vec<Rational> = values.iter().map(|v| v.1.clone()).collect();

    let (check_a, check_b) = sampled_coefficients(check_node, p, bc, seed)?;
    if lagrange(&nodes, &alphas, check_node) != check_a || lagrange(&nodes, &betas, check_node) != check_b {
        return Err(inconsistent(m, p, bc));
    }
    let alpha = lagrange(&nodes, &alphas, m);
    let beta = lagrange(&nodes, &betas, m);

    if m == 2 {
        // with one tangent direction L_aaL_bb = L_abL_ab = κ²
        let l = SecondFundamentalForm::scalar(2, Rational::one());
        if quadratic_part(2, p, bc, &l)? != &alpha + &beta {
            return Err(inconsistent(m, p, bc));
        }
    }
    Ok((alpha, beta))
}

fn lagrange(nodes: &[usize], values: &[Rational], at: usize) -> Rational {
    let x = int(at as i64);
    let mut acc = Rational::zero();
    for (i, (&xi, yi)) in nodes.iter().zip(values).enumerate() {
        let mut w = Rational::one();
        for (j, &xj) in nodes.iter().enumerate() {
            if i != j {
                w *= (&x - int(xj as i64)) / int(xi as i64 - xj as i64);
            }
        }
        acc += w * yi;
    }
    acc
}

fn inconsistent(m: usize, p: usize, bc: BoundaryCondition) -> Error {
    Error::InconsistentSamples {
        m,
        p,
        bc: bc.to_string(),
    }
}

/// One line of the `Λ¹` / `Λ^{m−1}` trace tables.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub fibre: &'static str,
    pub term: &'static str,
    #[serde(serialize_with = "ser_rational")]
    pub computed: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub expected: Rational,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub m: usize,
    pub samples: usize,
    pub rows: Vec<TableRow>,
}

impl TableReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    RationalJson::from(q).serialize(s)
}

/// Checks the five absolute-condition traces on `Λ¹` and on `Λ^{m−1}`
/// against their closed forms, for `samples` seeded random forms.
pub fn verify_section4_tables(m: usize, seed: u64, samples: usize) -> Result<TableReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let forms: Vec<SecondFundamentalForm> =
        (0..samples).map(|_| SecondFundamentalForm::random(m, &mut rng)).collect();
    verify_section4_tables_with(m, &forms)
}

pub fn verify_section4_tables_with(m: usize, forms: &[SecondFundamentalForm]) -> Result<TableReport> {
    if m < 2 {
        return Err(Error::DimensionTooSmall {
            m,
            what: "trace tables need m >= 2",
        });
    }
    let mi = int(m as i64);
    let mut rows = Vec::new();
    let zero = Rational::zero();
    for l in forms {
        let ll = l.trace_squared();
        let l2 = l.norm_squared();
        for (fibre, p) in [("Λ1", 1usize), ("Λm-1", m - 1)] {
            let ops = build_fiber_operators(m, p, BoundaryCondition::Absolute, l)?;
            let t = bracket_terms(&ops, l, &zero, &zero, &zero);
            let expected: [(&'static str, Rational, Rational); 5] = if fibre == "Λ1" {
                [
                    ("[13Π+-7Π-]LaaLbb", (int(13) * &mi - int(20)) * &ll, t.projector_trace_sq.clone()),
                    ("[2Π++10Π-]LabLab", (int(2) * &mi + int(8)) * &l2, t.projector_norm_sq.clone()),
                    ("96 S Laa", int(-96) * &ll, t.s_mean_curvature.clone()),
                    ("192 S^2", int(192) * &l2, t.s_squared.clone()),
                    ("-12 χ;a χ;a", int(-96) * &l2, t.chi_deriv_squared.clone()),
                ]
            } else {
                [
                    ("[13Π+-7Π-]LaaLbb", (int(-7) * &mi + int(20)) * &ll, t.projector_trace_sq.clone()),
                    ("[2Π++10Π-]LabLab", (int(10) * &mi - int(8)) * &l2, t.projector_norm_sq.clone()),
                    ("96 S Laa", int(-96) * &ll, t.s_mean_curvature.clone()),
                    ("192 S^2", int(192) * &ll, t.s_squared.clone()),
                    ("-12 χ;a χ;a", int(-96) * &l2, t.chi_deriv_squared.clone()),
                ]
            };
            for (term, expected, computed) in expected {
                rows.push(TableRow {
                    fibre,
                    term,
                    pass: computed == expected,
                    computed,
                    expected,
                });
            }
        }
    }
    Ok(TableReport {
        m,
        samples: forms.len(),
        rows,
    })
}

/// Exact 2×2 matrix whose rows are the `(α, β)` of the two operators in the pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientMatrix {
    pub pair: OperatorPair,
    pub m: usize,
    pub rows: [[Rational; 2]; 2],
    pub determinant: Rational,
}

pub fn coefficient_matrix(pair: OperatorPair, m: usize) -> Result<CoefficientMatrix> {
    if m < pair.min_dimension() {
        return Err(Error::DimensionTooSmall {
            m,
            what: "form-valued pairs need m >= 2",
        });
    }
    let [first, second] = pair.members();
    let (a1, b1) = extract_quadratic_coefficients(m, first.p, first.bc)?;
    let (a2, b2) = extract_quadratic_coefficients(m, second.p, second.bc)?;
    let determinant = &a1 * &b2 - &b1 * &a2;
    Ok(CoefficientMatrix {
        pair,
        m,
        rows: [[a1, b1], [a2, b2]],
        determinant,
    })
}
