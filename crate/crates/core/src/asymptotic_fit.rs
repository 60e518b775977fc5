//! Least-squares recovery of `a₀, a₁, …` from heat-trace samples, using
//! `Θ(t) ≈ Σ_{n<N} t^{(n−m)/2} a_n`.
//!
//! Rows are weighted by `t^{m/2}`, which turns the model into a polynomial
//! in `s = √t`. Columns are equilibrated and the system is solved through
//! an SVD, whose singular values also give the reported condition number.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::heat_coefficients::HeatCoefficientSet;
use crate::spectra::{heat_trace_grid, EigenvalueList, HeatTraceSample, MAX_TAIL_FRACTION};

pub const DEFAULT_N_TERMS: usize = 10;
pub const DEFAULT_SAMPLES: usize = 60;
/// `Λ · t_min` for the default grid: the first neglected eigenvalue is
/// damped by `e^{−28}`.
pub const DEFAULT_DAMPING: f64 = 28.0;
/// Default upper end of the grid, in units of (length scale)².
pub const DEFAULT_T_MAX_SCALED: f64 = 0.07;
pub const MAX_CONDITION: f64 = 1e13;
pub const MIN_DECADES: f64 = 2.0;

/// Geometric grid of `n` points in `[t_min, t_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub n: usize,
}

impl TGrid {
    pub fn new(t_min: f64, t_max: f64, n: usize) -> Result<Self> {
        if !(t_min > 0.0 && t_max > t_min && t_max.is_finite()) || n < 2 {
            return Err(Error::InvalidParameter(format!(
                "t grid needs 0 < t_min < t_max and at least 2 points (got {t_min}, {t_max}, {n})"
            )));
        }
        Ok(Self { t_min, t_max, n })
    }

    /// Starts where the truncation at `lambda_max` is negligible and spans
    /// two decades, capped at `0.07 ℓ²` for a geometry of length scale `ℓ`.
    pub fn default_for(lambda_max: f64, length_scale: f64) -> Result<Self> {
        let t_min = DEFAULT_DAMPING / lambda_max;
        let t_max = (100.0 * t_min).min(DEFAULT_T_MAX_SCALED * length_scale * length_scale);
        if t_max < 100.0 * t_min * (1.0 - 1e-12) {
            return Err(Error::FitPrecondition(format!(
                "lambda_max = {lambda_max} is too small for a two-decade grid at length scale {length_scale}; \
                 need at least {}",
                100.0 * DEFAULT_DAMPING / (DEFAULT_T_MAX_SCALED * length_scale * length_scale)
            )));
        }
        Self::new(t_min, t_max, DEFAULT_SAMPLES)
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.t_min * factor, self.t_max * factor, self.n)
    }

    pub fn points(&self) -> Vec<f64> {
        let ratio = (self.t_max / self.t_min).ln();
        (0..self.n)
            .map(|i| {
                if i + 1 == self.n {
                    self.t_max
                } else {
                    self.t_min * (ratio * i as f64 / (self.n - 1) as f64).exp()
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitResult {
    pub m: usize,
    pub n_terms: usize,
    pub a_hat: Vec<f64>,
    /// Euclidean norm of the weighted residual `t^{m/2}(Θ − model)`.
    pub residual_norm: f64,
    pub condition_estimate: f64,
    pub max_tail_bound: f64,
    pub t_grid: Vec<f64>,
}

pub fn fit(samples: &[HeatTraceSample], m: usize, n_terms: usize) -> Result<FitResult> {
    if m == 0 {
        return Err(Error::FitPrecondition("dimension must be positive".into()));
    }
    if n_terms < 4 {
        return Err(Error::FitPrecondition(format!("need at least 4 terms, got {n_terms}")));
    }
    if samples.len() < 2 * n_terms {
        return Err(Error::FitPrecondition(format!(
            "{} samples for {n_terms} terms; need at least {}",
            samples.len(),
            2 * n_terms
        )));
    }
    for s in samples {
        if !(s.t > 0.0) || !s.theta.is_finite() {
            return Err(Error::FitPrecondition(format!("bad sample at t = {}", s.t)));
        }
        if s.tail_bound > MAX_TAIL_FRACTION * s.theta.abs() {
            return Err(Error::TailBoundTooLarge {
                t: s.t,
                tail: s.tail_bound,
                theta: s.theta,
            });
        }
    }
    let mut ts: Vec<f64> = samples.iter().map(|s| s.t).collect();
    ts.sort_by(f64::total_cmp);
    if ts.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::FitPrecondition("t values must be distinct".into()));
    }
    let decades = (ts[ts.len() - 1] / ts[0]).log10();
    if decades < MIN_DECADES * (1.0 - 1e-9) {
        return Err(Error::FitPrecondition(format!(
            "t grid spans {decades:.3} decades; need {MIN_DECADES}"
        )));
    }

    let rows = samples.len();
    let half_m = m as f64 / 2.0;
    let mut a = DMatrix::<f64>::zeros(rows, n_terms);
    let mut y = DVector::<f64>::zeros(rows);
    for (i, s) in samples.iter().enumerate() {
        let root = s.t.sqrt();
        let mut power = 1.0;
        for n in 0..n_terms {
            a[(i, n)] = power;
            power *= root;
        }
        y[i] = s.theta * s.t.powf(half_m);
    }
    let scales: Vec<f64> = (0..n_terms).map(|n| a.column(n).norm()).collect();
    for (n, &c) in scales.iter().enumerate() {
        a.column_mut(n).scale_mut(1.0 / c);
    }

    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let s_max = sv.max();
    let s_min = sv.min();
    let condition = s_max / s_min;
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::IllConditioned { condition });
    }
    let x = svd
        .solve(&y, s_max * f64::EPSILON)
        .map_err(|e| Error::FitPrecondition(e.to_string()))?;
    let residual_norm = (&a * &x - &y).norm();
    let a_hat = x.iter().zip(&scales).map(|(v, c)| v / c).collect();

    Ok(FitResult {
        m,
        n_terms,
        a_hat,
        residual_norm,
        condition_estimate: condition,
        max_tail_bound: samples.iter().map(|s| s.tail_bound).fold(0.0, f64::max),
        t_grid: samples.iter().map(|s| s.t).collect(),
    })
}

/// Heat traces of `list` on `grid`, then [`fit`].
pub fn fit_spectrum(list: &EigenvalueList, grid: &TGrid, n_terms: usize) -> Result<FitResult> {
    let samples = heat_trace_grid(list, &grid.points())?;
    fit(&samples, list.m, n_terms)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientComparison {
    pub n: usize,
    pub exact: f64,
    pub fitted: f64,
    pub error: f64,
    /// Relative error against `exact`, or absolute error against
    /// `tol · max|a_k|` when the exact value vanishes.
    pub relative: bool,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareReport {
    pub model: String,
    pub m: usize,
    pub p: usize,
    pub bc: crate::conditions::BoundaryCondition,
    pub entries: Vec<CoefficientComparison>,
    pub all_pass: bool,
}

pub const DEFAULT_TOLERANCES: [f64; 4] = [1e-4, 1e-4, 1e-3, 1e-2];

pub fn compare(fit: &FitResult, exact: &HeatCoefficientSet, tol: &[f64; 4]) -> Result<CompareReport> {
    if fit.m != exact.m {
        return Err(Error::FitPrecondition(format!(
            "fit is for m = {}, closed form for m = {}",
            fit.m, exact.m
        )));
    }
    let ex = exact.floats();
    let scale = ex.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let entries: Vec<CoefficientComparison> = (0..4)
        .map(|n| {
            let fitted = fit.a_hat[n];
            let relative = ex[n] != 0.0;
            let (error, threshold) = if relative {
                ((fitted - ex[n]).abs() / ex[n].abs(), tol[n])
            } else {
                (fitted.abs(), tol[n] * scale)
            };
            CoefficientComparison {
                n,
                exact: ex[n],
                fitted,
                error,
                relative,
                threshold,
                pass: error <= threshold,
            }
        })
        .collect();
    let all_pass = entries.iter().all(|e| e.pass);
    Ok(CompareReport {
        model: exact.model.clone(),
        m: exact.m,
        p: exact.p,
        bc: exact.bc,
        entries,
        all_pass,
    })
}
