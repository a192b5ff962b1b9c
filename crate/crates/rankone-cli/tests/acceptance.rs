//! Acceptance gate: one test per numbered criterion, each printing a
//! pass/fail line with the measured residual. Checks run through the same
//! registry the `verify` subcommand uses, at the default configuration.

use std::time::Instant;

use rankone_cli::checks::find_check;
use rankone_cli::report::SuiteConfig;

struct Outcome {
    residual: f64,
    tolerance: f64,
    observed: String,
}

fn run_check(name: &str) -> Outcome {
    let def = find_check(name).unwrap_or_else(|| panic!("{name} is not registered"));
    match (def.run)(&SuiteConfig::default()) {
        Ok(data) => Outcome { residual: data.residual, tolerance: def.tolerance, observed: data.observed },
        Err(e) => Outcome {
            residual: f64::MAX,
            tolerance: def.tolerance,
            observed: format!("error: {e:#}"),
        },
    }
}

fn criterion(number: u32, label: &str, names: &[&str], budget_seconds: Option<f64>) {
    let start = Instant::now();
    let outcomes: Vec<(String, Outcome)> =
        names.iter().map(|n| (n.to_string(), run_check(n))).collect();
    let elapsed = start.elapsed().as_secs_f64();
    let numeric_pass = outcomes.iter().all(|(_, o)| o.residual <= o.tolerance);
    let time_pass = budget_seconds.map_or(true, |b| elapsed <= b);
    let verdict = if numeric_pass && time_pass { "PASS" } else { "FAIL" };
    let worst = outcomes.iter().map(|(_, o)| o.residual).fold(0.0f64, f64::max);
    println!("criterion {number:02} {label}: {verdict} (worst residual {worst:.3e}, {elapsed:.1}s)");
    for (name, o) in &outcomes {
        assert!(
            o.residual <= o.tolerance,
            "criterion {number} ({label}): {name} residual {:.6e} exceeds {:.1e}\n  observed: {}",
            o.residual,
            o.tolerance,
            o.observed
        );
    }
    if let Some(budget) = budget_seconds {
        assert!(
            elapsed <= budget,
            "criterion {number} ({label}): took {elapsed:.1}s, budget {budget}s"
        );
    }
}

#[test]
fn criterion_01_decomposition_round_trip() {
    criterion(1, "decomposition round-trip", &["decomposition-round-trip"], Some(5.0));
}

#[test]
fn criterion_02_horocycle_kernel_closed_form() {
    criterion(2, "H(n_u^-1 w) closed form", &["horocycle-kernel-closed-form"], None);
}

#[test]
fn criterion_03_sl3_projection_asymmetry() {
    criterion(3, "SL3 counterexample values", &["sl3-projection-asymmetry"], None);
}

#[test]
fn criterion_04_bracket_equivariance() {
    criterion(4, "horocycle bracket equivariance", &["bracket-equivariance"], None);
}

#[test]
fn criterion_05_poisson_normalization() {
    criterion(5, "Poisson kernel normalisation", &["poisson-kernel-normalization"], None);
}

#[test]
fn criterion_06_c_function_and_density() {
    criterion(
        6,
        "c-function product, normalisation, density shape",
        &["c-product-vs-integral", "c-normalization-at-rho", "plancherel-density-shape"],
        Some(10.0),
    );
}

#[test]
fn criterion_07_laplace_eigenvalue_order() {
    criterion(7, "FD Laplacian eigenvalue order", &["laplace-plane-wave-order"], None);
}

#[test]
fn criterion_08_inversion_and_plancherel() {
    criterion(
        8,
        "Fourier inversion and Plancherel pairing",
        &["fourier-inversion-round-trip", "plancherel-pairing"],
        Some(60.0),
    );
}

#[test]
fn criterion_09_intertwining_formula() {
    criterion(
        9,
        "intertwining formula with refinement",
        &["intertwine-single-pair", "intertwine-atom-grid", "intertwine-grid-refinement"],
        Some(120.0),
    );
}

#[test]
fn criterion_10_a_eigendistribution() {
    criterion(10, "A-eigendistribution flow ratio", &["flow-translation-ratio"], None);
}

#[test]
fn criterion_11_stationary_phase_order() {
    criterion(11, "Knapp-Stein leading-order decay", &["knapp-stein-decay-order"], None);
}

#[test]
fn criterion_12_kohn_nirenberg_smoke() {
    criterion(
        12,
        "Kohn-Nirenberg unit, equivariance, route agreement",
        &["kn-unit-symbol", "kn-equivariance", "kn-route-agreement"],
        Some(300.0),
    );
}
