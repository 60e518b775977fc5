use std::f64::consts::PI;

use super::bessel::{bessel_zeros_all_orders, ZeroKind};
use super::{EigenvalueList, SpectrumSource};
use crate::boundary_geometry::{ModelKind, ModelManifold};
use crate::conditions::BoundaryCondition;
use crate::error::{Error, Result};
use crate::exact_algebra::binomial;

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
    }
}

/// Dirichlet or Neumann; absolute and relative are resolved by the caller.
fn scalar_bc(bc: BoundaryCondition) -> Result<bool> {
    match bc {
        BoundaryCondition::Dirichlet => Ok(true),
        BoundaryCondition::Neumann => Ok(false),
        other => Err(Error::Unsupported(format!(
            "scalar spectra take dirichlet or neumann, got {other}"
        ))),
    }
}

/// `(kπ/ℓ)²`, `k ≥ 1` (Dirichlet) or `k ≥ 0` (Neumann).
pub fn interval_spectrum(length: f64, bc: BoundaryCondition, lambda_max: f64) -> Result<EigenvalueList> {
    check_positive("interval length", length)?;
    check_positive("lambda_max", lambda_max)?;
    let dirichlet = scalar_bc(bc)?;
    let k_max = (length * lambda_max.sqrt() / PI).floor() as u64 + 1;
    let first = if dirichlet { 1 } else { 0 };
    let raw = (first..=k_max)
        .map(|k| ((k as f64 * PI / length).powi(2), 1))
        .collect();
    // N(λ) ≤ ℓ√λ/π + 1
    let weyl = (length / PI).max(1.0);
    EigenvalueList::from_unsorted(raw, lambda_max, 1, Some(weyl), SpectrumSource::new("interval", 0, bc))
}

/// `(j_{n,k}/R)²` (Dirichlet) or `(j′_{n,k}/R)²` plus `0` (Neumann);
/// multiplicity 2 for `n ≥ 1`.
pub fn disk_spectrum(radius: f64, bc: BoundaryCondition, lambda_max: f64) -> Result<EigenvalueList> {
    check_positive("disk radius", radius)?;
    check_positive("lambda_max", lambda_max)?;
    let dirichlet = scalar_bc(bc)?;
    let kind = if dirichlet { ZeroKind::Value } else { ZeroKind::Derivative };
    let x_max = radius * lambda_max.sqrt();
    let mut raw = Vec::new();
    if !dirichlet {
        raw.push((0.0, 1));
    }
    for (n, zeros) in bessel_zeros_all_orders(kind, x_max)? {
        let mult = if n == 0 { 1 } else { 2 };
        raw.extend(zeros.into_iter().map(|z| ((z / radius).powi(2), mult)));
    }
    // N_R(λ) = N_1(R²λ) ≤ R²λ + 1
    let weyl = (radius * radius).max(1.0);
    EigenvalueList::from_unsorted(raw, lambda_max, 2, Some(weyl), SpectrumSource::new("disk", 0, bc))
}

/// `ℓ(ℓ+1)` with multiplicity `ℓ` (Dirichlet, odd harmonics) or `ℓ + 1`
/// (Neumann, even harmonics).
pub fn hemisphere_spectrum(bc: BoundaryCondition, lambda_max: f64) -> Result<EigenvalueList> {
    check_positive("lambda_max", lambda_max)?;
    let dirichlet = scalar_bc(bc)?;
    let mut raw = Vec::new();
    for l in 0u64.. {
        let lambda = (l * (l + 1)) as f64;
        if lambda > lambda_max {
            break;
        }
        let mult = if dirichlet { l } else { l + 1 };
        if mult > 0 {
            raw.push((lambda, mult));
        }
    }
    // N(λ) ≤ Σ_{ℓ ≤ √λ} (ℓ + 1) ≤ 2λ + 2
    EigenvalueList::from_unsorted(raw, lambda_max, 2, Some(2.0), SpectrumSource::new("hemisphere", 0, bc))
}

/// `(kπ/H)² + (n/R)²`, `n ∈ ℤ`, `k ≥ 1` (Dirichlet) or `k ≥ 0` (Neumann).
pub fn cylinder_spectrum(
    height: f64,
    radius: f64,
    bc: BoundaryCondition,
    lambda_max: f64,
) -> Result<EigenvalueList> {
    check_positive("cylinder height", height)?;
    check_positive("cylinder radius", radius)?;
    check_positive("lambda_max", lambda_max)?;
    let dirichlet = scalar_bc(bc)?;
    let mut raw = Vec::new();
    let first = if dirichlet { 1 } else { 0 };
    let k_max = (height * lambda_max.sqrt() / PI).floor() as u64 + 1;
    let n_max = (radius * lambda_max.sqrt()).floor() as u64 + 1;
    for k in first..=k_max {
        let axial = (k as f64 * PI / height).powi(2);
        if axial > lambda_max {
            break;
        }
        for n in 0..=n_max {
            let lambda = axial + (n as f64 / radius).powi(2);
            if lambda > lambda_max {
                break;
            }
            raw.push((lambda, if n == 0 { 1 } else { 2 }));
        }
    }
    // lattice points in a half ellipse: N ≤ (H√λ/π + 1)(2R√λ + 1)
    let a = height / PI;
    let b = 2.0 * radius;
    let weyl = (a * b + (a + b) / 2.0).max((a + b) / 2.0 + 1.0);
    EigenvalueList::from_unsorted(raw, lambda_max, 2, Some(weyl), SpectrumSource::new("cylinder", 0, bc))
}

fn scalar_spectrum(model: &ModelManifold, bc: BoundaryCondition, lambda_max: f64) -> Result<EigenvalueList> {
    match &model.kind {
        ModelKind::Interval { length } => interval_spectrum(length.to_f64(), bc, lambda_max),
        ModelKind::Disk { radius } => {
            disk_spectrum(crate::exact_algebra::rational_to_f64(radius), bc, lambda_max)
        }
        ModelKind::Cylinder { height, radius } => {
            cylinder_spectrum(height.to_f64(), radius.to_f64(), bc, lambda_max)
        }
        ModelKind::Hemisphere => hemisphere_spectrum(bc, lambda_max),
        ModelKind::Synthetic => Err(Error::Unsupported(format!(
            "{} has no enumerable spectrum",
            model.name
        ))),
    }
}

/// 1-form spectrum of a surface from its scalar spectra:
/// `ω = df + ⋆dg + h` with `f` Neumann, `g` Dirichlet, `h` harmonic.
/// Relative conditions give the same list in dimension 2.
pub fn one_form_spectrum_2d(
    model: &ModelManifold,
    bc: BoundaryCondition,
    lambda_max: f64,
) -> Result<EigenvalueList> {
    if model.m != 2 {
        return Err(Error::Unsupported(format!(
            "1-form spectra are built for surfaces only (m = {})",
            model.m
        )));
    }
    if !matches!(bc, BoundaryCondition::Absolute | BoundaryCondition::Relative) {
        return Err(Error::Unsupported(format!("1-form spectra take absolute or relative, got {bc}")));
    }
    let neumann = scalar_spectrum(model, BoundaryCondition::Neumann, lambda_max)?;
    let dirichlet = scalar_spectrum(model, BoundaryCondition::Dirichlet, lambda_max)?;
    let mut raw: Vec<(f64, u64)> = neumann
        .entries
        .iter()
        .filter(|e| e.0 > 0.0)
        .chain(&dirichlet.entries)
        .copied()
        .collect();
    if model.b1 > 0 {
        raw.push((0.0, model.b1 as u64));
    }
    let weyl = neumann
        .weyl
        .zip(dirichlet.weyl)
        .map(|(a, b)| a + b + model.b1 as f64);
    EigenvalueList::from_unsorted(raw, lambda_max, 2, weyl, SpectrumSource::new(model.name, 1, bc))
}

/// Spectrum of `Δ_p` with boundary condition `bc` on a catalog model.
///
/// On functions absolute means Neumann and relative means Dirichlet; on
/// top-degree forms the Hodge star swaps them. Dirichlet or Neumann on
/// 1-forms of a flat model act componentwise in a parallel frame.
pub fn spectrum(
    model: &ModelManifold,
    p: usize,
    bc: BoundaryCondition,
    lambda_max: f64,
) -> Result<EigenvalueList> {
    use BoundaryCondition::*;
    let m = model.m;
    if p > m {
        return Err(Error::DegreeOutOfRange { m, p });
    }
    let relabel = |mut list: EigenvalueList| {
        list.source = SpectrumSource::new(model.name, p, bc);
        list
    };
    let scalar_for = |scalar_bc| scalar_spectrum(model, scalar_bc, lambda_max).map(relabel);
    match (p, bc) {
        (0, Dirichlet) | (0, Relative) => scalar_for(Dirichlet),
        (0, Neumann) | (0, Absolute) => scalar_for(Neumann),
        (p, Absolute) if p == m => scalar_for(Dirichlet),
        (p, Relative) if p == m => scalar_for(Neumann),
        (p, Dirichlet) | (p, Neumann) if p == m => scalar_for(bc),
        (1, Absolute) | (1, Relative) => one_form_spectrum_2d(model, bc, lambda_max),
        (p, Dirichlet) | (p, Neumann) if model.tau.is_zero() => {
            let rank = binomial(m, p);
            let mut list = scalar_for(bc)?;
            for e in &mut list.entries {
                e.1 *= rank;
            }
            list.weyl = list.weyl.map(|w| w * rank as f64);
            Ok(list)
        }
        _ => Err(Error::Unsupported(format!(
            "no spectrum for p = {p}, {bc} on {}",
            model.name
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary_geometry::catalog;
    use crate::exact_algebra::int;
    use approx::assert_relative_eq;
    use BoundaryCondition::*;

    #[test]
    fn interval_examples() {
        let d = interval_spectrum(PI, Dirichlet, 20.0).unwrap();
        let want = [1.0, 4.0, 9.0, 16.0];
        assert_eq!(d.entries.len(), 4);
        for (e, w) in d.entries.iter().zip(want) {
            assert_relative_eq!(e.0, w, max_relative = 1e-14);
            assert_eq!(e.1, 1);
        }
        let n = interval_spectrum(PI, Neumann, 10.0).unwrap();
        assert_eq!(n.entries.len(), 4);
        assert_eq!(n.entries[0], (0.0, 1));
        let d2 = interval_spectrum(2.0 * PI, Dirichlet, 2.0).unwrap();
        assert_eq!(d2.entries.len(), 2);
        assert_relative_eq!(d2.entries[0].0, 0.25, max_relative = 1e-14);
        assert!(interval_spectrum(PI, Dirichlet, 0.0).is_err());
    }

    #[test]
    fn disk_examples() {
        let d = disk_spectrum(1.0, Dirichlet, 10.0).unwrap();
        assert_relative_eq!(d.entries[0].0, 5.783185962946784, max_relative = 1e-13);
        assert_eq!(d.entries[0].1, 1);
        let n = disk_spectrum(1.0, Neumann, 5.0).unwrap();
        assert_eq!(n.entries[0], (0.0, 1));
        assert_relative_eq!(n.entries[1].0, 3.3899577166718897, max_relative = 1e-12);
        assert_eq!(n.entries[1].1, 2);
        assert_eq!(n.entries.len(), 2);
        let d2 = disk_spectrum(2.0, Dirichlet, 100.0).unwrap();
        let d1 = disk_spectrum(1.0, Dirichlet, 400.0).unwrap();
        assert_eq!(d1.entries.len(), d2.entries.len());
        for (a, b) in d2.entries.iter().zip(&d1.entries) {
            assert_relative_eq!(a.0, b.0 / 4.0, max_relative = 1e-12);
            assert_eq!(a.1, b.1);
        }
    }

    #[test]
    fn hemisphere_examples() {
        let d = hemisphere_spectrum(Dirichlet, 12.0).unwrap();
        assert_eq!(d.entries, vec![(2.0, 1), (6.0, 2), (12.0, 3)]);
        let n = hemisphere_spectrum(Neumann, 6.0).unwrap();
        assert_eq!(n.entries, vec![(0.0, 1), (2.0, 2), (6.0, 3)]);
        let n = hemisphere_spectrum(Neumann, 1000.0).unwrap();
        let d = hemisphere_spectrum(Dirichlet, 1000.0).unwrap();
        for (l, e) in n.entries.iter().skip(1).enumerate() {
            let l = l as u64 + 1;
            assert_eq!(e.1 + d.entries[l as usize - 1].1, 2 * l + 1);
        }
    }

    #[test]
    fn cylinder_examples() {
        let d = cylinder_spectrum(PI, 1.0, Dirichlet, 5.0).unwrap();
        // 5 = 1 + 4 = 4 + 1: both (k, n) = (1, ±2) and (2, ±1)
        assert_eq!(d.entries, vec![(1.0, 1), (2.0, 2), (4.0, 1), (5.0, 4)]);
        let n = cylinder_spectrum(PI, 1.0, Neumann, 1.0).unwrap();
        assert_eq!(n.entries[0], (0.0, 1));
        let d = cylinder_spectrum(2.0 * PI, 1.0, Dirichlet, 1.0).unwrap();
        assert_relative_eq!(d.entries[0].0, 0.25);
    }

    #[test]
    fn one_form_rule() {
        let models = catalog();
        let disk = &models[1];
        let cyl = &models[2];
        let abs = one_form_spectrum_2d(disk, Absolute, 200.0).unwrap();
        assert_eq!(abs.zero_modes(), 0);
        let rel = one_form_spectrum_2d(disk, Relative, 200.0).unwrap();
        assert_eq!(abs.entries, rel.entries);
        let c = one_form_spectrum_2d(cyl, Absolute, 200.0).unwrap();
        assert_eq!(c.zero_modes(), 1);
        for model in [disk, cyl, &models[3]] {
            let lm = 300.0;
            let one = one_form_spectrum_2d(model, Absolute, lm).unwrap();
            let n = spectrum(model, 0, Neumann, lm).unwrap();
            let d = spectrum(model, 0, Dirichlet, lm).unwrap();
            for cut in [10.0, 57.3, 300.0] {
                assert_eq!(
                    one.count_below(cut),
                    n.count_below(cut) + d.count_below(cut) - 1 + model.b1 as u64
                );
            }
        }
        assert!(one_form_spectrum_2d(&models[0], Absolute, 10.0).is_err());
    }

    #[test]
    fn dispatch() {
        let disk = ModelManifold::disk(int(1)).unwrap();
        let a = spectrum(&disk, 0, Absolute, 50.0).unwrap();
        assert_eq!(a.entries, spectrum(&disk, 0, Neumann, 50.0).unwrap().entries);
        assert_eq!(a.source.bc, Some(Absolute));
        let top = spectrum(&disk, 2, Absolute, 50.0).unwrap();
        assert_eq!(top.entries, spectrum(&disk, 0, Dirichlet, 50.0).unwrap().entries);
        let comp = spectrum(&disk, 1, Dirichlet, 50.0).unwrap();
        assert_eq!(comp.count(), 2 * spectrum(&disk, 0, Dirichlet, 50.0).unwrap().count());
        assert!(spectrum(&ModelManifold::hemisphere(), 1, Dirichlet, 50.0).is_err());
        assert!(spectrum(&disk, 3, Dirichlet, 50.0).is_err());
    }

    #[test]
    fn weyl_constants_bound_the_counts() {
        for model in catalog() {
            for (p, bc) in [(0, Dirichlet), (0, Neumann), (1, Absolute)] {
                let Ok(list) = spectrum(&model, p, bc, 2e4) else { continue };
                let w = list.weyl.unwrap();
                let half_m = model.m as f64 / 2.0;
                for &(l, _) in &list.entries {
                    let n = list.count_below(l) as f64;
                    assert!(n <= w * (l.powf(half_m) + 1.0) * (1.0 + 1e-12), "{} {bc} at {l}", model.name);
                }
            }
        }
    }
}
