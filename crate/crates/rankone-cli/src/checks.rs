//! The check registry behind `verify`: every entry computes one residual and
//! records it against a fixed tolerance. Checks are pure functions of the
//! config, so the report is bit-identical under a fixed seed regardless of
//! how many worker threads execute them.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;
use std::time::Instant;

use anyhow::{ensure, Context, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use rankone::geometry::{
    boundary_action, circle_quadrature, disk_action, disk_quadrature, geodesic_frame,
    horocycle_bracket, hyperbolic_dist, hyperbolic_laplacian_fd, BoundaryPoint, DiskPoint,
    TangentPoint, RHO,
};
use rankone::lie::{
    cartan_kak, check_hnw_symmetry, iwasawa_kan, iwasawa_nak, iwasawa_t, max_abs_diff,
    random_element, sl2_a, sl2_n, sl2_rotation, weyl_longest, Group, GroupElement, RootDatum,
};
use rankone::psdistrib::{
    a_translation_check, intermediate_value, intertwine_check, kn_phase_gradient, knapp_stein,
    kohn_nirenberg_convolution, kohn_nirenberg_direct, ps_distribution, weighted_radon, KnGrids,
    KnSymbol, LineQuadrature, PSData, PsGrids, SymbolFn,
};
use rankone::spectral::{
    c_function, c_function_integral, laplace_eigenvalue, plancherel_density, SpectralParam,
};
use rankone::transforms::{
    bump, helgason_ft, helgason_inverse, plancherel_check, BoundaryMeasure, LambdaGrid,
    SampledFunctionX,
};

use crate::report::{CheckRecord, Report, SuiteConfig};

/// Raw outcome of one check before the tolerance comparison.
pub struct CheckData {
    pub expected: String,
    pub observed: String,
    pub residual: f64,
}

pub struct CheckDef {
    pub name: &'static str,
    pub suite: &'static str,
    pub tolerance: f64,
    pub paper_ref: &'static str,
    pub run: fn(&SuiteConfig) -> Result<CheckData>,
}

/// Fixed registry order; the report lists checks in this order.
pub fn registry() -> Vec<CheckDef> {
    vec![
        CheckDef {
            name: "decomposition-round-trip",
            suite: "iwasawa",
            tolerance: 1e-10,
            paper_ref: "Iwasawa/Cartan theorems",
            run: decomposition_round_trip,
        },
        CheckDef {
            name: "horocycle-kernel-closed-form",
            suite: "iwasawa",
            tolerance: 1e-10,
            paper_ref: "$H(n_u^{-1}w)=\\ln(1+u^2)$",
            run: horocycle_kernel_closed_form,
        },
        CheckDef {
            name: "projection-symmetry-rank-one",
            suite: "iwasawa",
            tolerance: 1e-10,
            paper_ref: "U(1,n;\u{211d}) Iwasawa projection lemma",
            run: projection_symmetry_rank_one,
        },
        CheckDef {
            name: "sl3-projection-asymmetry",
            suite: "counterexample",
            tolerance: 1e-10,
            paper_ref: "the equations contradict if $d=e=f=1$",
            run: sl3_projection_asymmetry,
        },
        CheckDef {
            name: "bracket-equivariance",
            suite: "brackets",
            tolerance: 1e-9,
            paper_ref: "Eq. (equivariance)",
            run: bracket_equivariance,
        },
        CheckDef {
            name: "poisson-kernel-normalization",
            suite: "brackets",
            tolerance: 1e-8,
            paper_ref: "$\\int_B e^{2\\rho\\langle z,b\\rangle}db=1$",
            run: poisson_kernel_normalization,
        },
        CheckDef {
            name: "c-product-vs-integral",
            suite: "spectral",
            tolerance: 1e-6,
            paper_ref: "Eq. (to the integrals)",
            run: c_product_vs_integral,
        },
        CheckDef {
            name: "c-normalization-at-rho",
            suite: "spectral",
            tolerance: 1e-10,
            paper_ref: "Eq. (c-function)",
            run: c_normalization_at_rho,
        },
        CheckDef {
            name: "plancherel-density-shape",
            suite: "spectral",
            tolerance: 1e-7,
            paper_ref: "case (b)",
            run: plancherel_density_shape,
        },
        CheckDef {
            name: "laplace-plane-wave-order",
            suite: "spectral",
            tolerance: 1e-9,
            paper_ref: "Eq. (character of the Laplacian)",
            run: laplace_plane_wave_order,
        },
        CheckDef {
            name: "fourier-inversion-round-trip",
            suite: "inversion",
            tolerance: 1e-3,
            paper_ref: "Inversion and Plancherel theorems",
            run: fourier_inversion_round_trip,
        },
        CheckDef {
            name: "plancherel-pairing",
            suite: "inversion",
            tolerance: 1e-3,
            paper_ref: "Inversion and Plancherel theorems",
            run: plancherel_pairing,
        },
        CheckDef {
            name: "intertwine-single-pair",
            suite: "intertwining",
            tolerance: 1e-4,
            paper_ref: "Theorem \"Intertwining Formula\"",
            run: intertwine_single_pair,
        },
        CheckDef {
            name: "intertwine-atom-grid",
            suite: "intertwining",
            tolerance: 1e-3,
            paper_ref: "Lemma (intertwining)",
            run: intertwine_atom_grid,
        },
        CheckDef {
            name: "intertwine-grid-refinement",
            suite: "intertwining",
            tolerance: 0.5,
            paper_ref: "Theorem \"Intertwining Formula\"",
            run: intertwine_grid_refinement,
        },
        CheckDef {
            name: "flow-translation-ratio",
            suite: "intertwining",
            tolerance: 1e-6,
            paper_ref: "Eq. (eigendistributions)",
            run: flow_translation_ratio,
        },
        CheckDef {
            name: "knapp-stein-decay-order",
            suite: "intertwining",
            tolerance: 0.3,
            paper_ref: "Eq. (integrate this)",
            run: knapp_stein_decay_order,
        },
        CheckDef {
            name: "ps-pushforward-invariance",
            suite: "intertwining",
            tolerance: 1e-6,
            paper_ref: "Proposition \"ps invariant\"",
            run: ps_pushforward_invariance,
        },
        CheckDef {
            name: "ps-time-reversal",
            suite: "intertwining",
            tolerance: 1e-8,
            paper_ref: "Corollary \"time reversal\"",
            run: ps_time_reversal,
        },
        CheckDef {
            name: "d-lambda-equivariance",
            suite: "intertwining",
            tolerance: 1e-8,
            paper_ref: "Eq. (equivariance dlambda)",
            run: d_lambda_equivariance,
        },
        CheckDef {
            name: "kn-phase-critical-point",
            suite: "intertwining",
            tolerance: 1e-7,
            paper_ref: "Proposition \"critical points calculus\"",
            run: kn_phase_critical_point,
        },
        CheckDef {
            name: "kn-phase-perturbation",
            suite: "intertwining",
            tolerance: 1.0,
            paper_ref: "Proposition \"critical points calculus\"",
            run: kn_phase_perturbation,
        },
        CheckDef {
            name: "kn-unit-symbol",
            suite: "intertwining",
            tolerance: 1e-2,
            paper_ref: "Definition of U",
            run: kn_unit_symbol,
        },
        CheckDef {
            name: "kn-equivariance",
            suite: "intertwining",
            tolerance: 1e-2,
            paper_ref: "Prop. \"U unitary\"",
            run: kn_equivariance,
        },
        CheckDef {
            name: "kn-route-agreement",
            suite: "intertwining",
            tolerance: 1e-2,
            paper_ref: "Prop. \"U formula one\"",
            run: kn_route_agreement,
        },
    ]
}

pub fn find_check(name: &str) -> Option<CheckDef> {
    registry().into_iter().find(|d| d.name == name)
}

/// Runs the configured suite. Checks execute on a local pool sized by
/// RANKONE_THREADS (any positive value yields identical numbers: each check
/// is independent and the collection preserves registry order).
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let start = Instant::now();
    let defs: Vec<CheckDef> =
        registry().into_iter().filter(|d| cfg.suite.includes(d.suite)).collect();
    ensure!(!defs.is_empty(), "suite {} has no registered checks", cfg.suite);
    let pool = thread_pool()?;
    let records: Vec<CheckRecord> =
        pool.install(|| defs.par_iter().map(|d| run_one(d, cfg)).collect());
    Ok(Report::assemble(cfg.clone(), records, start.elapsed().as_secs_f64()))
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("RANKONE_THREADS") {
        let n: usize =
            v.parse().with_context(|| format!("RANKONE_THREADS must be a positive integer, got {v:?}"))?;
        ensure!(n > 0, "RANKONE_THREADS must be positive");
        builder = builder.num_threads(n);
    }
    Ok(builder.build()?)
}

fn run_one(def: &CheckDef, cfg: &SuiteConfig) -> CheckRecord {
    let tol = cfg.tolerance_for(def.suite, def.tolerance);
    match (def.run)(cfg) {
        Ok(data) => CheckRecord::new(
            def.name,
            def.suite,
            data.expected,
            data.observed,
            data.residual,
            tol,
            def.paper_ref,
        ),
        Err(e) => CheckRecord::new(
            def.name,
            def.suite,
            "check completes without error".into(),
            format!("error: {e:#}"),
            f64::MAX,
            tol,
            def.paper_ref,
        ),
    }
}

// ---------------------------------------------------------------------------
// Shared helpers.
// ---------------------------------------------------------------------------

/// Per-check RNG: the config seed folded with an FNV-1a hash of the check
/// name, so adding a check never shifts another check's stream.
fn rng_for(cfg: &SuiteConfig, name: &str) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in name.bytes() {
        h ^= u64::from(byte);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(cfg.seed ^ h)
}

fn rand_sl2(rng: &mut ChaCha8Rng) -> GroupElement {
    let k = sl2_rotation(rng.gen_range(-PI..PI));
    let a = sl2_a(rng.gen_range(-0.6..0.6));
    let n = sl2_n(rng.gen_range(-0.7..0.7));
    &k * &(&a * &n)
}

fn rand_disk(rng: &mut ChaCha8Rng, r_max: f64) -> DiskPoint {
    let r = r_max * rng.gen_range(0.0f64..1.0).sqrt();
    DiskPoint::new(Complex64::from_polar(r, rng.gen_range(0.0..TAU))).expect("inside the disk")
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// The standard test symbol: radial bump modulated by a smooth boundary factor.
fn modulated_symbol(r: f64) -> SymbolFn {
    let radial = bump(r);
    SymbolFn::new(r, move |z: &DiskPoint, b: &BoundaryPoint| {
        radial(z) * (1.0 + 0.3 * b.theta().cos())
    })
    .expect("positive support radius")
}

/// Smooth radial profile: 1 for d(o,z) <= plateau, 0 beyond support.
fn plateau_profile(plateau: f64, support: f64) -> impl Fn(&DiskPoint) -> f64 + Clone {
    let edge = |t: f64| if t <= 0.0 { 0.0 } else { (-1.0 / t).exp() };
    move |z: &DiskPoint| {
        let d = hyperbolic_dist(z, &DiskPoint::origin());
        if d <= plateau {
            1.0
        } else if d >= support {
            0.0
        } else {
            let s = (d - plateau) / (support - plateau);
            let up = edge(1.0 - s);
            up / (up + edge(s))
        }
    }
}

fn rel_diff(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm().max(1e-12)
}

// ---------------------------------------------------------------------------
// iwasawa suite.
// ---------------------------------------------------------------------------

fn decomposition_round_trip(cfg: &SuiteConfig) -> Result<CheckData> {
    let mut rng = rng_for(cfg, "decomposition-round-trip");
    let start = Instant::now();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        for group in [Group::Sl2, Group::Sl3] {
            let g = random_element(group, &mut rng);
            let kan = iwasawa_kan(&g)?;
            worst = worst.max(max_abs_diff(g.matrix(), &kan.reconstruct()));
            let nak = iwasawa_nak(&g)?;
            worst = worst.max(max_abs_diff(g.matrix(), &nak.reconstruct()));
            let kak = cartan_kak(&g)?;
            worst = worst.max(max_abs_diff(g.matrix(), &kak.reconstruct()));
        }
    }
    Ok(CheckData {
        expected: "1000 seeded SL2 and SL3 elements reconstruct from KAN, NAK and KAK factors"
            .into(),
        observed: format!(
            "max reconstruction residual {worst:.3e} in {:.2}s",
            start.elapsed().as_secs_f64()
        ),
        residual: worst,
    })
}

fn horocycle_kernel_closed_form(_cfg: &SuiteConfig) -> Result<CheckData> {
    let w = weyl_longest(Group::Sl2);
    let mut worst = 0.0f64;
    for i in 0..201 {
        let u = -5.0 + 0.05 * i as f64;
        let h = iwasawa_t(&(&sl2_n(u).inverse() * &w))?;
        worst = worst.max((h - (1.0 + u * u).ln()).abs());
    }
    Ok(CheckData {
        expected: "H(n_u^{-1} w) = ln(1 + u^2) on 201 nodes of [-5, 5]".into(),
        observed: format!("max deviation {worst:.3e}"),
        residual: worst,
    })
}

fn projection_symmetry_rank_one(cfg: &SuiteConfig) -> Result<CheckData> {
    let mut rng = rng_for(cfg, "projection-symmetry-rank-one");
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let probe = check_hnw_symmetry(Group::Sl2, &[rng.gen_range(-3.0..3.0)])?;
        worst = worst.max(probe.residual);
    }
    for _ in 0..20 {
        let z2 = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        worst = worst.max(check_hnw_symmetry(Group::Soh(3), &z2)?.residual);
        let z3 = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        worst = worst.max(check_hnw_symmetry(Group::Soh(4), &z3)?.residual);
    }
    Ok(CheckData {
        expected: "H(nw) = H(n^{-1}w) for SL2 and SO(1,n) horospherical elements".into(),
        observed: format!("max |s - s'| = {worst:.3e}"),
        residual: worst,
    })
}

// ---------------------------------------------------------------------------
// counterexample suite.
// ---------------------------------------------------------------------------

fn sl3_projection_asymmetry(_cfg: &SuiteConfig) -> Result<CheckData> {
    let probe = check_hnw_symmetry(Group::Sl3, &[1.0, 1.0, 1.0])?;
    let want_s = 0.5 * 3.0f64.ln();
    let want_sp = 0.5 * 2.0f64.ln();
    let want_gap = 0.5 * 1.5f64.ln();
    let residual = (probe.s - want_s)
        .abs()
        .max((probe.s_prime - want_sp).abs())
        .max((probe.residual - want_gap).abs());
    Ok(CheckData {
        expected: format!(
            "s = ln(3)/2 = {want_s:.12}, s' = ln(2)/2 = {want_sp:.12}, gap = ln(3/2)/2 = {want_gap:.12} > 0"
        ),
        observed: format!(
            "s = {:.12}, s' = {:.12}, gap = {:.12}",
            probe.s, probe.s_prime, probe.residual
        ),
        residual,
    })
}

// ---------------------------------------------------------------------------
// brackets suite.
// ---------------------------------------------------------------------------

fn bracket_equivariance(cfg: &SuiteConfig) -> Result<CheckData> {
    let mut rng = rng_for(cfg, "bracket-equivariance");
    let origin = DiskPoint::origin();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let g = rand_sl2(&mut rng);
        let z = rand_disk(&mut rng, 0.85);
        let b = BoundaryPoint::new(rng.gen_range(0.0..TAU));
        let gb = boundary_action(&g, &b).gb;
        let lhs = horocycle_bracket(&disk_action(&g, &z), &gb);
        let rhs = horocycle_bracket(&z, &b) + horocycle_bracket(&disk_action(&g, &origin), &gb);
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(CheckData {
        expected: "<g.z, g.b> = <z, b> + <g.o, g.b> over 1000 random triples".into(),
        observed: format!("max cocycle defect {worst:.3e}"),
        residual: worst,
    })
}

fn poisson_kernel_normalization(cfg: &SuiteConfig) -> Result<CheckData> {
    let mut rng = rng_for(cfg, "poisson-kernel-normalization");
    let circle = circle_quadrature(cfg.grid_sizes.circle_nodes)?;
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let z = rand_disk(&mut rng, 0.9);
        let mut total = 0.0;
        for (b, w) in circle.nodes.iter().zip(&circle.weights) {
            total += w * (2.0 * RHO * horocycle_bracket(&z, b)).exp();
        }
        worst = worst.max((total - 1.0).abs());
    }
    Ok(CheckData {
        expected: format!(
            "probability normalisation of e^{{2 rho <z,b>}} db at 50 points, {} nodes",
            cfg.grid_sizes.circle_nodes
        ),
        observed: format!("max |integral - 1| = {worst:.3e}"),
        residual: worst,
    })
}

// ---------------------------------------------------------------------------
// spectral suite.
// ---------------------------------------------------------------------------

fn c_product_vs_integral(_cfg: &SuiteConfig) -> Result<CheckData> {
    let roots = RootDatum::disk();
    let mut worst = 0.0f64;
    for j in 0..20 {
        let w = 0.2 + 1.8 * j as f64 / 19.0;
        let lam = SpectralParam::new(0.0, -w);
        let prod = c_function(lam, &roots)?;
        let integral = c_function_integral(lam)?;
        worst = worst.max(rel_diff(prod, integral));
    }
    Ok(CheckData {
        expected: "Gamma product equals the horospherical integral at 20 points of Re(i lambda) in [0.2, 2]"
            .into(),
        observed: format!("max relative difference {worst:.3e}"),
        residual: worst,
    })
}

fn c_normalization_at_rho(_cfg: &SuiteConfig) -> Result<CheckData> {
    let c = c_function(SpectralParam::new(0.0, -RHO), &RootDatum::disk())?;
    let residual = (c - real(1.0)).norm();
    Ok(CheckData {
        expected: "c(-i rho) = 1".into(),
        observed: format!("c = {:.12} + {:.3e}i", c.re, c.im),
        residual,
    })
}

fn plancherel_density_shape(_cfg: &SuiteConfig) -> Result<CheckData> {
    let roots = RootDatum::disk();
    let shape = |lam: f64| -> Result<f64> {
        Ok(plancherel_density(lam, &roots)? / (lam * (PI * lam).tanh()))
    };
    let base = shape(0.5)?;
    let mut worst = 0.0f64;
    for lam in [0.5, 1.0, 2.0, 4.0] {
        worst = worst.max((shape(lam)? / base - 1.0).abs());
    }
    Ok(CheckData {
        expected: "|c(lambda)|^{-2} proportional to lambda tanh(pi lambda) at lambda in {0.5, 1, 2, 4}"
            .into(),
        observed: format!("max ratio deviation {worst:.3e} after one-point calibration"),
        residual: worst,
    })
}

fn laplace_plane_wave_order(_cfg: &SuiteConfig) -> Result<CheckData> {
    let roots = RootDatum::disk();
    let b = BoundaryPoint::new(0.7);
    let probes = [
        DiskPoint::from_xy(0.2, 0.1)?,
        DiskPoint::from_xy(-0.3, 0.25)?,
        DiskPoint::from_xy(0.1, -0.35)?,
    ];
    let steps = [0.008, 0.004, 0.002];
    let mut min_order = f64::INFINITY;
    let mut max_order = f64::NEG_INFINITY;
    for lam in [0.5, 1.0, 2.0] {
        let sp = SpectralParam::real(lam);
        let ev = laplace_eigenvalue(sp, &roots);
        let wave = move |z: &DiskPoint| {
            ((Complex64::new(0.0, lam) + RHO) * horocycle_bracket(z, &b)).exp()
        };
        for z in &probes {
            let mut errs = [0.0f64; 3];
            for (k, h) in steps.iter().enumerate() {
                errs[k] = (hyperbolic_laplacian_fd(wave, z, *h)? - ev * wave(z)).norm();
            }
            for pair in errs.windows(2) {
                let order = (pair[0] / pair[1]).log2();
                min_order = min_order.min(order);
                max_order = max_order.max(order);
            }
        }
    }
    Ok(CheckData {
        expected: "second-order convergence of the FD Laplacian on plane waves (order >= 1.8)"
            .into(),
        observed: format!("observed orders in [{min_order:.3}, {max_order:.3}]"),
        residual: (1.8 - min_order).max(0.0),
    })
}

// ---------------------------------------------------------------------------
// inversion suite.
// ---------------------------------------------------------------------------

struct InversionSetup {
    f_fn: Box<dyn Fn(&DiskPoint) -> Complex64>,
    f: SampledFunctionX,
    lg: LambdaGrid,
    bg: rankone::geometry::CircleQuadrature,
    grid: Arc<rankone::geometry::DiskQuadrature>,
}

fn inversion_setup(cfg: &SuiteConfig) -> Result<InversionSetup> {
    let g = &cfg.grid_sizes;
    let grid = Arc::new(disk_quadrature(g.disk_radius, g.disk_radial, g.disk_angular)?);
    let f_fn = bump(1.5);
    let f = SampledFunctionX::sample(grid.clone(), 1.5, &f_fn)?;
    let lg = LambdaGrid::uniform(g.lambda_max, g.lambda_nodes)?;
    let bg = circle_quadrature(g.boundary_nodes)?;
    Ok(InversionSetup { f_fn: Box::new(f_fn), f, lg, bg, grid })
}

fn fourier_inversion_round_trip(cfg: &SuiteConfig) -> Result<CheckData> {
    let setup = inversion_setup(cfg)?;
    let fd = helgason_ft(&setup.f, &setup.lg, &setup.bg)?;
    let inv = helgason_inverse(&fd)?;
    let mut rng = rng_for(cfg, "fourier-inversion-round-trip");
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let z = DiskPoint::new(Complex64::from_polar(
            rng.gen_range(0.0..0.63),
            rng.gen_range(0.0..TAU),
        ))?;
        worst = worst.max((inv.evaluate(&z) - (setup.f_fn)(&z)).norm());
    }
    Ok(CheckData {
        expected: "inverse transform reproduces the bump at 10 probe points".into(),
        observed: format!("max round-trip error {worst:.3e}"),
        residual: worst,
    })
}

fn plancherel_pairing(cfg: &SuiteConfig) -> Result<CheckData> {
    let setup = inversion_setup(cfg)?;
    let second = SampledFunctionX::sample(setup.grid.clone(), 1.5, |z: &DiskPoint| {
        (setup.f_fn)(z) * Complex64::new(1.0 + z.z().re, 0.5 * z.z().im)
    })?;
    let sides = plancherel_check(&setup.f, &second, &setup.lg, &setup.bg)?;
    let scale = sides.space_side.norm().max(1e-12);
    let residual = (sides.space_side - sides.spectral_side).norm() / scale;
    Ok(CheckData {
        expected: "space-side pairing equals the spectral-side pairing (relative)".into(),
        observed: format!(
            "space {:.6e}{:+.6e}i, spectral {:.6e}{:+.6e}i",
            sides.space_side.re, sides.space_side.im, sides.spectral_side.re, sides.spectral_side.im
        ),
        residual,
    })
}

// ---------------------------------------------------------------------------
// intertwining suite.
// ---------------------------------------------------------------------------

/// Symbol and data behind the refinement study; the artifacts module plots
/// the same configuration at intermediate grid scales.
pub fn refinement_symbol() -> SymbolFn {
    modulated_symbol(1.0)
}

pub fn refinement_data() -> PSData {
    single_pair_data()
}

fn single_pair_data() -> PSData {
    PSData {
        lambda: SpectralParam::real(2.0),
        mu: SpectralParam::real(2.0),
        t_phi: BoundaryMeasure::from_atoms(vec![(BoundaryPoint::new(0.0), real(1.0))])
            .expect("atom"),
        t_psi: BoundaryMeasure::from_atoms(vec![(BoundaryPoint::new(PI), real(1.0))])
            .expect("atom"),
    }
}

fn single_pair_grids(scale: f64) -> Result<PsGrids> {
    let nt = ((1200.0 * scale) as usize).max(4) & !1;
    let nu = ((2400.0 * scale) as usize).max(4) & !1;
    let nr = ((280.0 * scale) as usize).max(8);
    let na = ((256.0 * scale) as usize).max(8);
    Ok(PsGrids {
        t_line: LineQuadrature::uniform(2.0, nt)?,
        u_line: LineQuadrature::uniform(3.0, nu)?,
        disk: Arc::new(disk_quadrature(1.3, nr, na)?),
    })
}

fn intertwine_single_pair(_cfg: &SuiteConfig) -> Result<CheckData> {
    let a = modulated_symbol(1.0);
    let check = intertwine_check(&a, &single_pair_data(), &single_pair_grids(1.0)?)?;
    Ok(CheckData {
        expected: "Wigner pairing equals the Knapp-Stein route for one atom pair".into(),
        observed: format!(
            "lhs {:.9e}{:+.9e}i, rhs {:.9e}{:+.9e}i",
            check.lhs.re, check.lhs.im, check.rhs.re, check.rhs.im
        ),
        residual: check.residual,
    })
}

fn intertwine_atom_grid(cfg: &SuiteConfig) -> Result<CheckData> {
    let mut rng = rng_for(cfg, "intertwine-atom-grid");
    let a = modulated_symbol(1.0);
    let mut weights = || Complex64::new(rng.gen_range(0.3..1.0), rng.gen_range(-0.5..0.5));
    let t_phi = BoundaryMeasure::from_atoms(vec![
        (BoundaryPoint::new(0.3), weights()),
        (BoundaryPoint::new(2.1), weights()),
        (BoundaryPoint::new(4.4), weights()),
    ])?;
    let t_psi = BoundaryMeasure::from_atoms(vec![
        (BoundaryPoint::new(1.1), weights()),
        (BoundaryPoint::new(3.2), weights()),
        (BoundaryPoint::new(5.5), weights()),
    ])?;
    let data =
        PSData { lambda: SpectralParam::real(1.6), mu: SpectralParam::real(2.3), t_phi, t_psi };
    let grids = PsGrids {
        t_line: LineQuadrature::uniform(4.2, 2400)?,
        u_line: LineQuadrature::uniform(16.0, 12800)?,
        disk: Arc::new(disk_quadrature(1.3, 280, 256)?),
    };
    let check = intertwine_check(&a, &data, &grids)?;
    Ok(CheckData {
        expected: "Wigner pairing equals the Knapp-Stein route on a 3 x 3 atom grid".into(),
        observed: format!(
            "lhs {:.9e}{:+.9e}i, rhs {:.9e}{:+.9e}i",
            check.lhs.re, check.lhs.im, check.rhs.re, check.rhs.im
        ),
        residual: check.residual,
    })
}

fn intertwine_grid_refinement(_cfg: &SuiteConfig) -> Result<CheckData> {
    let a = modulated_symbol(1.0);
    let data = single_pair_data();
    let coarse = intertwine_check(&a, &data, &single_pair_grids(0.5)?)?.residual;
    let fine = intertwine_check(&a, &data, &single_pair_grids(1.0)?)?.residual;
    let residual = if fine <= 1e-5 { 0.0 } else { fine / coarse };
    Ok(CheckData {
        expected: "doubling every grid at least halves the residual (or lands below 1e-5)".into(),
        observed: format!("coarse residual {coarse:.3e}, fine residual {fine:.3e}"),
        residual,
    })
}

fn flow_translation_ratio(_cfg: &SuiteConfig) -> Result<CheckData> {
    let a = modulated_symbol(1.0);
    let grids = PsGrids {
        t_line: LineQuadrature::uniform(6.0, 2400)?,
        u_line: LineQuadrature::uniform(8.0, 3200)?,
        disk: Arc::new(disk_quadrature(1.3, 120, 96)?),
    };
    let mk_data = |l: f64, m: f64| -> Result<PSData> {
        Ok(PSData {
            lambda: SpectralParam::real(l),
            mu: SpectralParam::real(m),
            t_phi: BoundaryMeasure::from_atoms(vec![(BoundaryPoint::new(0.4), real(1.0))])?,
            t_psi: BoundaryMeasure::from_atoms(vec![(
                BoundaryPoint::new(3.3),
                Complex64::new(0.7, 0.1),
            )])?,
        })
    };
    let mut worst = 0.0f64;
    let mut lines = Vec::new();
    for &(l, m, t) in &[(2.0, 1.0, 0.7), (3.0, 3.0, 1.1), (1.0, 2.0, -0.4)] {
        let check = a_translation_check(&a, &mk_data(l, m)?, t, &grids)?;
        let want = Complex64::from_polar(1.0, (l - m) * t);
        worst = worst.max((check.ratio - want).norm());
        lines.push(format!(
            "({l},{m},{t}): ratio {:.9}{:+.9}i",
            check.ratio.re, check.ratio.im
        ));
    }
    Ok(CheckData {
        expected: "PS(a o flow) / PS(a) = e^{i (lambda - mu) t}, exactly 1 on the diagonal".into(),
        observed: lines.join("; "),
        residual: worst,
    })
}

fn knapp_stein_decay_order(_cfg: &SuiteConfig) -> Result<CheckData> {
    let a = SymbolFn::gaussian_with_plateau(2.0, 1.5, 2.5)?;
    let base = TangentPoint { z: DiskPoint::origin(), b: BoundaryPoint::new(0.3) };
    let g = rankone::geometry::frame_tangent(&base);
    let ug = LineQuadrature::uniform(4.0, 8000)?;
    let av = a.evaluate(&base.z, &base.b);
    let roots = RootDatum::disk();
    let mus = [5.0, 10.0, 20.0];
    let mut devs = [0.0f64; 3];
    for (k, &mu) in mus.iter().enumerate() {
        let ks = knapp_stein(&a, &g, SpectralParam::real(mu), &ug)?;
        let c = c_function(SpectralParam::real(mu), &roots)?;
        devs[k] = (ks / (c * av) - real(1.0)).norm();
    }
    let monotone = devs[0] > devs[1] && devs[1] > devs[2];
    let slope = (devs[2].ln() - devs[0].ln()) / (mus[2].ln() - mus[0].ln());
    let residual = if monotone { (-slope - 1.0).abs() } else { 1.0 };
    Ok(CheckData {
        expected: "deviation |L_mu a / (c(mu) a) - 1| decreasing with fitted exponent near -1"
            .into(),
        observed: format!(
            "deviations {:.4e}, {:.4e}, {:.4e}; fitted exponent {:.3}",
            devs[0], devs[1], devs[2], slope
        ),
        residual,
    })
}

fn ps_pushforward_invariance(cfg: &SuiteConfig) -> Result<CheckData> {
    let a = modulated_symbol(1.0);
    let (lam, mu) = (SpectralParam::real(1.8), SpectralParam::real(0.7));
    let grids = PsGrids {
        t_line: LineQuadrature::uniform(6.0, 2400)?,
        u_line: LineQuadrature::uniform(8.0, 3200)?,
        disk: Arc::new(disk_quadrature(1.3, 120, 96)?),
    };
    let t_phi = BoundaryMeasure::from_atoms(vec![
        (BoundaryPoint::new(0.2), real(1.0)),
        (BoundaryPoint::new(2.0), Complex64::new(0.5, 0.3)),
    ])?;
    let t_psi = BoundaryMeasure::from_atoms(vec![
        (BoundaryPoint::new(1.1), Complex64::new(-0.4, 0.9)),
        (BoundaryPoint::new(4.4), real(0.8)),
    ])?;
    let data = PSData { lambda: lam, mu, t_phi: t_phi.clone(), t_psi: t_psi.clone() };
    let base = ps_distribution(&a, &data, &grids)?;
    let mut rng = rng_for(cfg, "ps-pushforward-invariance");
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let g = &sl2_rotation(rng.gen_range(-1.0..1.0))
            * &(&sl2_a(rng.gen_range(-0.35..0.35)) * &sl2_n(rng.gen_range(-0.3..0.3)));
        let pushed = PSData {
            lambda: lam,
            mu,
            t_phi: t_phi.pushforward(&g, lam)?,
            t_psi: t_psi.pushforward(&g, mu)?,
        };
        let moved = ps_distribution(&a.compose_g(&g.inverse()), &pushed, &grids)?;
        worst = worst.max((moved - base).norm() / base.norm());
    }
    Ok(CheckData {
        expected: "PS(a o g^{-1}, pushed data) = PS(a, data) for 3 random g".into(),
        observed: format!("max relative defect {worst:.3e}"),
        residual: worst,
    })
}

fn ps_time_reversal(cfg: &SuiteConfig) -> Result<CheckData> {
    let radial = bump(1.0);
    let a = SymbolFn::new(1.0, move |z: &DiskPoint, _: &BoundaryPoint| radial(z))?;
    let lam = SpectralParam::real(1.5);
    let grids = PsGrids {
        t_line: LineQuadrature::uniform(4.0, (cfg.grid_sizes.line_nodes.max(6)) & !1)?,
        u_line: LineQuadrature::uniform(8.0, 3200)?,
        disk: Arc::new(disk_quadrature(1.3, 240, 192)?),
    };
    let t_phi = BoundaryMeasure::from_atoms(vec![
        (BoundaryPoint::new(0.3), Complex64::new(1.0, -0.2)),
        (BoundaryPoint::new(2.4), Complex64::new(0.4, 0.7)),
    ])?;
    let t_psi = BoundaryMeasure::from_atoms(vec![
        (BoundaryPoint::new(1.1), Complex64::new(0.8, 0.1)),
        (BoundaryPoint::new(3.9), Complex64::new(-0.3, 0.6)),
    ])?;
    let data = PSData { lambda: lam, mu: lam, t_phi, t_psi };
    let forward = ps_distribution(&a, &data, &grids)?;
    let mut reversed = Complex64::new(0.0, 0.0);
    for (bp, wp) in data.t_phi.point_masses() {
        for (bq, wq) in data.t_psi.point_masses() {
            reversed += wp * wq * weighted_radon(&a, lam, lam, &bq, &bp, &grids.t_line)?;
        }
    }
    Ok(CheckData {
        expected: "diagonal PS pairing is invariant under swapping the endpoint roles".into(),
        observed: format!(
            "forward {:.9e}{:+.9e}i, reversed {:.9e}{:+.9e}i",
            forward.re, forward.im, reversed.re, reversed.im
        ),
        residual: (forward - reversed).norm() / forward.norm().max(1e-12),
    })
}

fn d_lambda_equivariance(cfg: &SuiteConfig) -> Result<CheckData> {
    let mut rng = rng_for(cfg, "d-lambda-equivariance");
    let lam = SpectralParam::real(1.1);
    let p = Complex64::new(RHO, lam.value().re);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let g = rand_sl2(&mut rng);
        let b = BoundaryPoint::new(rng.gen_range(0.0..TAU));
        let b2 = BoundaryPoint::new(b.theta() + rng.gen_range(0.8..4.0));
        let go = disk_action(&g, &DiskPoint::origin());
        let gb = boundary_action(&g, &b).gb;
        let gb2 = boundary_action(&g, &b2).gb;
        let lhs = intermediate_value(&geodesic_frame(&gb, &gb2)?, lam, lam)?;
        let factor = (p * (horocycle_bracket(&go, &gb) + horocycle_bracket(&go, &gb2))).exp();
        let rhs = factor * intermediate_value(&geodesic_frame(&b, &b2)?, lam, lam)?;
        worst = worst.max(rel_diff(lhs, rhs));
    }
    Ok(CheckData {
        expected: "d(g.b, g.b') = e^{(i lambda + rho)(<g.o,g.b> + <g.o,g.b'>)} d(b, b')".into(),
        observed: format!("max relative defect {worst:.3e} over 50 random moves"),
        residual: worst,
    })
}

fn kn_phase_critical_point(_cfg: &SuiteConfig) -> Result<CheckData> {
    let grad = kn_phase_gradient(1.0, 0.0, 0.0, 0.0, 1e-5)?;
    let worst = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    Ok(CheckData {
        expected: "phase gradient vanishes at the unit critical point (mu, n, a, k) = (1, e, e, e)"
            .into(),
        observed: format!(
            "gradient ({:.2e}, {:.2e}, {:.2e}, {:.2e})",
            grad[0], grad[1], grad[2], grad[3]
        ),
        residual: worst,
    })
}

fn kn_phase_perturbation(_cfg: &SuiteConfig) -> Result<CheckData> {
    let mut min_norm = f64::INFINITY;
    for &p in &[
        [1.1, 0.0, 0.0, 0.0],
        [1.0, 0.1, 0.0, 0.0],
        [1.0, 0.0, 0.1, 0.0],
        [1.0, 0.0, 0.0, 0.1],
    ] {
        let g = kn_phase_gradient(p[0], p[1], p[2], p[3], 1e-5)?;
        min_norm = min_norm.min(g.iter().map(|x| x * x).sum::<f64>().sqrt());
    }
    Ok(CheckData {
        expected: "phase gradient exceeds 1e-3 at all 0.1-perturbations of the critical point"
            .into(),
        observed: format!("smallest gradient norm {min_norm:.3e}"),
        residual: 1e-3 / min_norm,
    })
}

fn kn_unit_symbol(_cfg: &SuiteConfig) -> Result<CheckData> {
    let profile = plateau_profile(0.9, 1.8);
    let chi = KnSymbol::new(1.8, move |z: &DiskPoint, _mu: f64, _b: &BoundaryPoint| {
        real(profile(z))
    })?;
    let grids = KnGrids {
        disk: Arc::new(disk_quadrature(1.9, 140, 80)?),
        lambda: LambdaGrid::uniform(18.0, 180)?,
        boundary: circle_quadrature(80)?,
        node_budget: 300_000_000,
    };
    let b = BoundaryPoint::new(0.5);
    let probes =
        [DiskPoint::origin(), DiskPoint::from_xy(0.2, 0.1)?, DiskPoint::from_xy(-0.15, 0.25)?];
    let mut worst = 0.0f64;
    for z in &probes {
        let u = kohn_nirenberg_direct(&chi, z, 1.1, &b, &grids)?;
        worst = worst.max((u - real(1.0)).norm());
    }
    Ok(CheckData {
        expected: "U applied to a plateau cutoff returns 1 at interior probe points".into(),
        observed: format!("max |U(chi) - 1| = {worst:.3e} at 3 probes"),
        residual: worst,
    })
}

/// Symbol family for the KN identity checks: plateau cutoff in z, smooth
/// boundary modulation, Gaussian decay in the spectral slot.
fn kn_test_symbol() -> Result<KnSymbol> {
    let profile = plateau_profile(0.9, 1.5);
    Ok(KnSymbol::new(1.5, move |z: &DiskPoint, mu: f64, b: &BoundaryPoint| {
        real(profile(z) * (1.0 + 0.3 * b.theta().cos()) * (-(mu / 4.0) * (mu / 4.0)).exp())
    })?)
}

fn kn_equivariance(_cfg: &SuiteConfig) -> Result<CheckData> {
    let a = kn_test_symbol()?;
    let h = &sl2_n(0.25) * &sl2_a(0.15);
    let grids = KnGrids {
        disk: Arc::new(disk_quadrature(1.9, 90, 56)?),
        lambda: LambdaGrid::uniform(12.0, 120)?,
        boundary: circle_quadrature(56)?,
        node_budget: 200_000_000,
    };
    let probes = [
        (DiskPoint::origin(), BoundaryPoint::base(), 0.9),
        (DiskPoint::from_xy(0.15, 0.1)?, BoundaryPoint::new(2.0), 1.3),
    ];
    let moved = a.compose_g(&h);
    let mut worst = 0.0f64;
    for (z, b, lam) in &probes {
        let lhs = kohn_nirenberg_direct(&moved, z, *lam, b, &grids)?;
        let hz = disk_action(&h, z);
        let hb = boundary_action(&h, b).gb;
        let rhs = kohn_nirenberg_direct(&a, &hz, *lam, &hb, &grids)?;
        worst = worst.max(rel_diff(lhs, rhs));
    }
    Ok(CheckData {
        expected: "U(a o h)(z, lambda, b) = U(a)(h.z, lambda, h.b) at 2 probes".into(),
        observed: format!("max relative defect {worst:.3e}"),
        residual: worst,
    })
}

fn kn_route_agreement(_cfg: &SuiteConfig) -> Result<CheckData> {
    let a = kn_test_symbol()?;
    let direct_grids = KnGrids {
        disk: Arc::new(disk_quadrature(1.7, 90, 56)?),
        lambda: LambdaGrid::uniform(12.0, 120)?,
        boundary: circle_quadrature(56)?,
        node_budget: 200_000_000,
    };
    let conv_grids = KnGrids {
        disk: Arc::new(disk_quadrature(1.7, 112, 64)?),
        lambda: LambdaGrid::uniform(12.0, 120)?,
        boundary: circle_quadrature(64)?,
        node_budget: 200_000_000,
    };
    let probes = [
        (DiskPoint::origin(), BoundaryPoint::base(), 1.0),
        (DiskPoint::from_xy(0.2, 0.1)?, BoundaryPoint::new(0.8), 1.3),
        (DiskPoint::from_xy(-0.1, 0.22)?, BoundaryPoint::new(2.5), 0.7),
    ];
    let mut worst = 0.0f64;
    for (z, b, lam) in &probes {
        let direct = kohn_nirenberg_direct(&a, z, *lam, b, &direct_grids)?;
        let conv = kohn_nirenberg_convolution(&a, z, *lam, b, &conv_grids)?;
        worst = worst.max(rel_diff(conv, direct));
    }
    Ok(CheckData {
        expected: "spectral route and convolution route agree on independently chosen grids"
            .into(),
        observed: format!("max relative difference {worst:.3e} at 3 probes"),
        residual: worst,
    })
}
