//! Exact spectra of the model manifolds and truncated heat traces with a
//! certified tail.

pub mod bessel;
mod models;

use std::fmt::Write as _;
use std::io::BufRead;

use serde::Serialize;

use crate::conditions::BoundaryCondition;
use crate::error::{Error, Result};
use crate::format::f15;

pub use models::{
    cylinder_spectrum, disk_spectrum, hemisphere_spectrum, interval_spectrum,
    one_form_spectrum_2d, spectrum,
};

/// Eigenvalues closer than this (relative) are merged into one entry.
pub const MERGE_RELATIVE: f64 = 1e-13;

/// A tail bound above this fraction of `Θ(t)` is an error.
pub const MAX_TAIL_FRACTION: f64 = 1e-3;

pub const DEFAULT_LAMBDA_MAX: f64 = 4e4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumSource {
    pub model: String,
    pub p: Option<usize>,
    pub bc: Option<BoundaryCondition>,
}

impl SpectrumSource {
    pub fn new(model: &str, p: usize, bc: BoundaryCondition) -> Self {
        Self {
            model: model.to_string(),
            p: Some(p),
            bc: Some(bc),
        }
    }

    pub fn imported() -> Self {
        Self {
            model: "imported".to_string(),
            p: None,
            bc: None,
        }
    }
}

/// Sorted `(λ, multiplicity)` pairs: every eigenvalue `≤ lambda_max`.
///
/// `weyl` is a constant `W` with `N(λ) ≤ W(λ^{m/2} + 1)` for the counting
/// function of the full spectrum. It is known for generated spectra; for
/// imported ones it is whatever the caller asserts, or absent.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenvalueList {
    pub entries: Vec<(f64, u64)>,
    pub lambda_max: f64,
    pub m: usize,
    pub weyl: Option<f64>,
    pub source: SpectrumSource,
}

impl EigenvalueList {
    /// Sorts, merges coincident eigenvalues and drops anything above
    /// `lambda_max`.
    pub fn from_unsorted(
        mut raw: Vec<(f64, u64)>,
        lambda_max: f64,
        m: usize,
        weyl: Option<f64>,
        source: SpectrumSource,
    ) -> Result<Self> {
        if !(lambda_max > 0.0) || !lambda_max.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "lambda_max must be positive, got {lambda_max}"
            )));
        }
        if let Some(&(bad, _)) = raw.iter().find(|(l, _)| !(*l >= 0.0) || !l.is_finite()) {
            return Err(Error::InvalidParameter(format!("eigenvalue {bad} is not a nonnegative number")));
        }
        if raw.iter().any(|&(_, k)| k == 0) {
            return Err(Error::InvalidParameter("multiplicities must be positive".into()));
        }
        raw.retain(|&(l, _)| l <= lambda_max);
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut entries: Vec<(f64, u64)> = Vec::with_capacity(raw.len());
        for (l, k) in raw {
            match entries.last_mut() {
                Some(last) if (l - last.0).abs() <= MERGE_RELATIVE * l.max(1e-300) => last.1 += k,
                _ => entries.push((l, k)),
            }
        }
        Ok(Self {
            entries,
            lambda_max,
            m,
            weyl,
            source,
        })
    }

    /// Eigenvalues counted with multiplicity.
    pub fn count(&self) -> u64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn count_below(&self, lambda: f64) -> u64 {
        self.entries.iter().take_while(|e| e.0 <= lambda).map(|e| e.1).sum()
    }

    pub fn zero_modes(&self) -> u64 {
        self.entries.first().filter(|e| e.0 == 0.0).map_or(0, |e| e.1)
    }

    pub fn is_certified(&self) -> bool {
        self.weyl.is_some()
    }

    /// `W` used for the tail: the certified constant, or twice the observed
    /// density `N(Λ) / Λ^{m/2}`.
    pub fn tail_constant(&self) -> f64 {
        self.weyl.unwrap_or_else(|| {
            2.0 * self.count() as f64 / self.lambda_max.powf(self.m as f64 / 2.0)
        })
    }

    /// Multiset union; the Weyl constants add.
    pub fn union(&self, other: &Self, source: SpectrumSource) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: other.m,
            });
        }
        let lambda_max = self.lambda_max.min(other.lambda_max);
        let weyl = self.weyl.zip(other.weyl).map(|(a, b)| a + b);
        let raw = self.entries.iter().chain(&other.entries).copied().collect();
        Self::from_unsorted(raw, lambda_max, self.m, weyl, source)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (l, k) in &self.entries {
            writeln!(out, "{},{}", f15(*l), k).expect("write to string");
        }
        out
    }

    /// Parses `lambda,multiplicity` lines. Blank lines, `#` comments and a
    /// `lambda,multiplicity` header are skipped. `lambda_max` defaults to
    /// the largest eigenvalue read.
    pub fn from_csv<R: BufRead>(
        reader: R,
        m: usize,
        lambda_max: Option<f64>,
        weyl: Option<f64>,
    ) -> Result<Self> {
        let mut raw = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.eq_ignore_ascii_case("lambda,multiplicity") {
                continue;
            }
            let bad = || Error::Parse(format!("line {}: expected `lambda,multiplicity`, got `{line}`", lineno + 1));
            let (l, k) = line.split_once(',').ok_or_else(bad)?;
            let l: f64 = l.trim().parse().map_err(|_| bad())?;
            let k: u64 = k.trim().parse().map_err(|_| bad())?;
            raw.push((l, k));
        }
        if raw.is_empty() {
            return Err(Error::Parse("spectrum file has no eigenvalues".into()));
        }
        let top = raw.iter().map(|e| e.0).fold(0.0, f64::max);
        let lambda_max = lambda_max.unwrap_or(top);
        if top > lambda_max {
            return Err(Error::InvalidParameter(format!(
                "eigenvalue {top} exceeds lambda_max {lambda_max}"
            )));
        }
        Self::from_unsorted(raw, lambda_max, m, weyl, SpectrumSource::imported())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HeatTraceSample {
    pub t: f64,
    pub theta: f64,
    pub tail_bound: f64,
    pub certified: bool,
}

/// `t ∫_Λ^∞ (W λ^{m/2} + W − N(Λ)) e^{−λt} dλ`, which bounds
/// `Σ_{λ>Λ} e^{−λt}` whenever `N(λ) ≤ W(λ^{m/2} + 1)`.
pub fn tail_bound(m: usize, w: f64, lambda_max: f64, count: u64, t: f64) -> Result<f64> {
    let y = lambda_max * t;
    let decay = (-y).exp();
    let constant_part = (w - count as f64) * decay;
    let power_part = match m {
        1 => {
            // Γ(3/2, y) ≤ √y e^{−y} + e^{−y} / (2√y)
            let sy = y.sqrt();
            w * t.powf(-0.5) * decay * (sy + 0.5 / sy)
        }
        2 => w * decay * (lambda_max + 1.0 / t),
        _ => {
            return Err(Error::Unsupported(format!(
                "tail bound implemented for m = 1, 2 only (m = {m})"
            )))
        }
    };
    Ok((power_part + constant_part).max(0.0))
}

/// `Θ(t) = Σ mult · e^{−λt}` over the list, with the tail certificate.
pub fn heat_trace(list: &EigenvalueList, t: f64) -> Result<HeatTraceSample> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
    }
    let theta: f64 = list
        .entries
        .iter()
        .rev()
        .map(|&(l, k)| k as f64 * (-l * t).exp())
        .sum();
    let tail = tail_bound(list.m, list.tail_constant(), list.lambda_max, list.count(), t)?;
    if !(theta > 0.0) || tail > MAX_TAIL_FRACTION * theta {
        return Err(Error::TailBoundTooLarge { t, tail, theta });
    }
    Ok(HeatTraceSample {
        t,
        theta,
        tail_bound: tail,
        certified: list.is_certified(),
    })
}

/// Heat traces on a grid, evaluated in parallel, in grid order.
pub fn heat_trace_grid(list: &EigenvalueList, ts: &[f64]) -> Result<Vec<HeatTraceSample>> {
    use rayon::prelude::*;
    ts.par_iter().map(|&t| heat_trace(list, t)).collect()
}
