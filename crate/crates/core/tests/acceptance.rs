//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Built with `harness = false`.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use heatspec::asymptotic_fit::{compare, fit_spectrum, FitResult, TGrid, DEFAULT_N_TERMS, DEFAULT_TOLERANCES};
use heatspec::boundary_geometry::{catalog, pointwise_umbilic_oracle, ModelManifold};
use heatspec::discriminator::{
    classify_from_spectra, compare_manifolds, fitted_dataset, recover_invariants, to_float_dataset, FitOptions,
    SpectralDataset,
};
use heatspec::exact_algebra::{coefficient_matrix, int, rat, verify_section4_tables, SecondFundamentalForm};
use heatspec::heat_coefficients::{a3_section4_form, heat_coefficients};
use heatspec::spectra::{spectrum, EigenvalueList, DEFAULT_LAMBDA_MAX};
use heatspec::BoundaryCondition::{self, *};
use heatspec::{Error, ExactValue, OperatorPair, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x4a3;

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn timed(budget: Option<Duration>, f: impl FnOnce() -> Result<Outcome, Error>) -> Outcome {
    let start = Instant::now();
    let result = f();
    let elapsed = start.elapsed();
    match result {
        Err(e) => ok(false, format!("error: {e}")),
        Ok(o) => {
            let in_budget = budget.is_none_or(|b| elapsed <= b);
            let budget_text = budget.map_or(String::new(), |b| format!(" (budget {} s)", b.as_secs()));
            ok(
                o.pass && in_budget,
                format!("{}; {:.2} s{budget_text}", o.detail, elapsed.as_secs_f64()),
            )
        }
    }
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs()
}

fn default_fit(list: &EigenvalueList, model: &ModelManifold) -> Result<FitResult, Error> {
    let grid = TGrid::default_for(list.lambda_max, model.length_scale())?;
    fit_spectrum(list, &grid, DEFAULT_N_TERMS)
}

fn fitted_a3(model: &ModelManifold, p: usize, bc: BoundaryCondition) -> Result<f64, Error> {
    let list = spectrum(model, p, bc, DEFAULT_LAMBDA_MAX)?;
    Ok(default_fit(&list, model)?.a_hat[3])
}

fn trace_tables() -> Result<Outcome, Error> {
    let mut identities = 0;
    let mut failed = Vec::new();
    for m in 2..=8 {
        let report = verify_section4_tables(m, SEED, 8)?;
        identities += report.rows.len();
        if !report.all_pass() {
            failed.push(m);
        }
    }
    Ok(ok(failed.is_empty(), format!("m=2..8, {identities} exact identities checked, failing m: {failed:?}")))
}

fn determinants() -> Result<Outcome, Error> {
    let expected = [
        (OperatorPair::DirichletNeumann, -144),
        (OperatorPair::Absolute01, 1584),
        (OperatorPair::Relative01, -432),
    ];
    let mut bad = Vec::new();
    for m in 2..=16 {
        for (pair, det) in expected {
            let cm = coefficient_matrix(pair, m)?;
            if cm.determinant != int(det) {
                bad.push(format!("m={m} {pair}: {}", cm.determinant));
            }
        }
    }
    Ok(ok(bad.is_empty(), format!("-144, 1584, -432 for m=2..16; mismatches {bad:?}")))
}

fn specialization() -> Result<Outcome, Error> {
    let mut checked = 0;
    for model in catalog() {
        for pair in OperatorPair::ALL {
            match a3_section4_form(&model, pair) {
                Ok(_) => checked += 1,
                Err(Error::DimensionTooSmall { .. }) => {}
                Err(e) => return Ok(ok(false, format!("{} {pair}: {e}", model.name))),
            }
        }
    }
    Ok(ok(checked == 10, format!("{checked} model/pair combinations agree exactly")))
}

fn disk_fit() -> Result<Outcome, Error> {
    let disk = ModelManifold::disk(int(1))?;
    let list = spectrum(&disk, 0, Dirichlet, DEFAULT_LAMBDA_MAX)?;
    let fit = default_fit(&list, &disk)?;
    let sp = PI.sqrt();
    let target = [0.25, -sp / 4.0, 1.0 / 6.0, sp / 128.0];
    let errs: Vec<f64> = (0..4).map(|k| rel(fit.a_hat[k], target[k])).collect();
    let pass = errs.iter().zip(DEFAULT_TOLERANCES).all(|(e, t)| *e <= t);
    let closed = compare(&fit, &heat_coefficients(&disk, 0, Dirichlet)?, &DEFAULT_TOLERANCES)?;
    Ok(ok(
        pass && closed.all_pass,
        format!(
            "{} eigenvalues, relative errors [{:.1e}, {:.1e}, {:.1e}, {:.1e}]",
            list.count(),
            errs[0],
            errs[1],
            errs[2],
            errs[3]
        ),
    ))
}

fn hemisphere() -> Result<Outcome, Error> {
    let hemi = ModelManifold::hemisphere();
    let target = PI.sqrt() / 16.0;
    let d = fitted_a3(&hemi, 0, Dirichlet)?;
    let n = fitted_a3(&hemi, 0, Neumann)?;
    let (ed, en) = (rel(d, -target), rel(n, target));
    let sd = spectrum(&hemi, 0, Dirichlet, DEFAULT_LAMBDA_MAX)?;
    let sn = spectrum(&hemi, 0, Neumann, DEFAULT_LAMBDA_MAX)?;
    let r = classify_from_spectra(
        [&sd, &sn],
        OperatorPair::DirichletNeumann,
        2,
        &int(2),
        Some(1e-2),
        &FitOptions::default(),
    )?;
    let geodesic = r.classification.totally_geodesic;
    Ok(ok(
        ed <= 1e-2 && en <= 1e-2 && geodesic,
        format!(
            "a3 D {d:.6} ({ed:.1e}), N {n:.6} ({en:.1e}); geodesic={geodesic} at tol {:.3e}, I2={:.2e}",
            r.tolerance, r.invariants.i2
        ),
    ))
}

fn one_forms() -> Result<Outcome, Error> {
    let disk = ModelManifold::disk(int(1))?;
    let closed = a3_section4_form(&disk, OperatorPair::Absolute01)?.1.to_f64();
    let abs = fitted_a3(&disk, 1, Absolute)?;
    let d = fitted_a3(&disk, 0, Dirichlet)?;
    let n = fitted_a3(&disk, 0, Neumann)?;
    let tol_a3 = DEFAULT_TOLERANCES[3];
    let combined = tol_a3 * (abs.abs() + d.abs() + n.abs());
    let gap = (abs - (d + n)).abs();
    let e = rel(abs, closed);
    Ok(ok(
        e <= 1e-2 && gap <= combined,
        format!("fitted {abs:.8} vs closed {closed:.8} ({e:.1e}); |abs - (D + N)| = {gap:.1e} <= {combined:.1e}"),
    ))
}

fn round_trip() -> Result<Outcome, Error> {
    let mut bad = Vec::new();
    let mut checked = 0;
    for model in catalog() {
        let truth = model.boundary_invariants()?;
        let flags = model.ground_truth()?;
        for pair in OperatorPair::ALL {
            if model.m < pair.min_dimension() {
                continue;
            }
            let r = recover_invariants(&SpectralDataset::exact(&model, pair)?, None)?;
            checked += 1;
            if r.invariants != truth || r.classification != flags {
                bad.push(format!("{} {pair}", model.name));
            }
            let c = &r.classification;
            let expected = match model.name {
                "disk" => c.strongly_totally_umbilic && !c.minimal && c.mu == Some(ExactValue::from_int(1)),
                "cylinder" | "hemisphere" => c.totally_geodesic && c.minimal,
                _ => true,
            };
            if !expected {
                bad.push(format!("{} {pair} flags", model.name));
            }
        }
    }
    for r in [rat(1, 2), int(2)] {
        let disk = ModelManifold::disk(r.clone())?;
        for pair in OperatorPair::ALL {
            let res = recover_invariants(&SpectralDataset::exact(&disk, pair)?, None)?;
            if res.classification.mu != Some(ExactValue::rational(r.recip())) {
                bad.push(format!("disk R={r} {pair}: mu"));
            }
        }
    }
    Ok(ok(bad.is_empty(), format!("{checked} catalog cases plus disks R=1/2, 2; failures {bad:?}")))
}

fn random_form(m: usize, rng: &mut ChaCha8Rng) -> SecondFundamentalForm {
    let n = m - 1;
    match rng.gen_range(0..4) {
        0 => SecondFundamentalForm::random(m, rng),
        1 => SecondFundamentalForm::scalar(m, Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into())),
        2 => SecondFundamentalForm::zero(m),
        _ => {
            let mu = Rational::new(rng.gen_range(-9i64..=9).into(), 4.into());
            let mut diag = vec![mu.clone(); n];
            let k = rng.gen_range(0..n);
            diag[k] += Rational::new(rng.gen_range(-1i64..=1).into(), 64.into());
            SecondFundamentalForm::diagonal(m, &diag).expect("diagonal form")
        }
    }
}

fn oracle_equivalence() -> Result<Outcome, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut disagreements = 0;
    let (mut umbilic, mut geodesic) = (0, 0);
    for i in 0..10_000 {
        let m = 2 + i % 4;
        let l = random_form(m, &mut rng);
        let o = pointwise_umbilic_oracle(&l);
        let spread_zero = o.spread_sum <= 1e-12;
        let all_zero = o.eigenvalues.iter().all(|k| k.abs() <= 1e-12);
        let quad_umbilic = o.defect == int(0);
        let quad_geodesic = l.norm_squared() == int(0);
        if quad_umbilic != spread_zero || quad_geodesic != all_zero {
            disagreements += 1;
        }
        umbilic += quad_umbilic as usize;
        geodesic += quad_geodesic as usize;
    }
    Ok(ok(
        disagreements == 0,
        format!("10000 forms, {umbilic} umbilic, {geodesic} geodesic, {disagreements} disagreements"),
    ))
}

fn gating() -> Result<Outcome, Error> {
    let disk = ModelManifold::disk(int(1))?;
    let cyl = ModelManifold::cylinder(ExactValue::pi_pow_half(2), ExactValue::from_int(1))?;
    let hemi = ModelManifold::hemisphere();
    let pair = OperatorPair::DirichletNeumann;

    let exact_hemi = SpectralDataset::exact(&hemi, pair)?;
    let exact_disk = SpectralDataset::exact(&disk, pair)?;
    let refused_exact = matches!(compare_manifolds(&exact_hemi, &exact_disk, None), Err(Error::HypothesisViolation(_)));
    let mut relabelled = to_float_dataset(&exact_disk);
    relabelled.tau = int(1);
    let refused_float = matches!(
        compare_manifolds(&to_float_dataset(&exact_disk), &relabelled, None),
        Err(Error::HypothesisViolation(_))
    );

    let fitted = |model: &ModelManifold| -> Result<_, Error> {
        let [first, second] = pair.members();
        let s1 = spectrum(model, first.p, first.bc, DEFAULT_LAMBDA_MAX)?;
        let s2 = spectrum(model, second.p, second.bc, DEFAULT_LAMBDA_MAX)?;
        let options = FitOptions {
            grid: Some(TGrid::default_for(DEFAULT_LAMBDA_MAX, model.length_scale())?),
            ..FitOptions::default()
        };
        fitted_dataset([&s1, &s2], pair, model.m, &model.tau_rational()?, &options)
    };
    let report = compare_manifolds(&fitted(&cyl)?, &fitted(&disk)?, None)?;
    let two_pi = 2.0 * PI;
    let (e1, e2) = (rel(report.delta_i1, two_pi), rel(report.delta_i2, two_pi));
    Ok(ok(
        refused_exact && refused_float && e1 <= 2e-2 && e2 <= 2e-2,
        format!(
            "tau mismatch refused: exact {refused_exact}, float {refused_float}; fitted dI1 {:.6} ({e1:.1e}), dI2 {:.6} ({e2:.1e})",
            report.delta_i1, report.delta_i2
        ),
    ))
}

fn main() {
    let criteria: Vec<(&str, Option<u64>, fn() -> Result<Outcome, Error>)> = vec![
        ("1 trace tables", Some(5), trace_tables),
        ("2 coefficient matrices", None, determinants),
        ("3 pair-form consistency", None, specialization),
        ("4 disk heat-trace fit", Some(60), disk_fit),
        ("5 hemisphere fit and classification", None, hemisphere),
        ("6 one-form cross-check", None, one_forms),
        ("7 exact round trip", None, round_trip),
        ("8 umbilic oracle equivalence", Some(10), oracle_equivalence),
        ("9 hypothesis gating", None, gating),
    ];
    let mut failures = 0;
    for (name, budget, f) in criteria {
        let o = timed(budget.map(Duration::from_secs), f);
        println!("{} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failures += usize::from(!o.pass);
    }
    println!("{} of 9 criteria passed", 9 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
