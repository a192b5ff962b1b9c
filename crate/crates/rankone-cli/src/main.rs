//! Command-line front end: verification suites with report/plot emission,
//! plus small JSON utilities over the individual layers.

use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use rankone::geometry::{circle_quadrature, disk_quadrature, point_to_group, BoundaryPoint, DiskPoint};
use rankone::lie::{
    cartan_kak, check_hnw_symmetry, iwasawa_kan, iwasawa_nak, max_abs_diff, random_element, Group,
};
use rankone::psdistrib::{intertwine_check, LineQuadrature, PsGrids, SymbolFn};
use rankone::spectral::SpectralParam;
use rankone::transforms::{bump, helgason_ft, helgason_inverse, LambdaGrid, SampledFunctionX};

use rankone_cli::artifacts::{emit_artifacts, parse_formats, spectral_csv, spectral_sweep};
use rankone_cli::checks::run_suite;
use rankone_cli::report::{Suite, SuiteConfig};

#[derive(Parser)]
#[command(
    name = "rankone",
    version,
    about = "Numerical verification of rank-one symmetric-space harmonic analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and emit report artifacts.
    Verify(VerifyArgs),
    /// Decompose seeded random group elements and report round-trip residuals.
    Decompose(DecomposeArgs),
    /// Tabulate the c-function and Plancherel density as CSV.
    Cfunction(CfunctionArgs),
    /// Round-trip a bump through the Fourier transform and report errors.
    Transform(TransformArgs),
    /// Evaluate the intertwining identity for configurable distribution data.
    Ps(PsArgs),
    /// Evaluate the SL3 projection asymmetry at the unit horocyclic element.
    CounterexampleSl3(CounterexampleArgs),
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Verify(args) => run_verify(args),
        Command::Decompose(args) => run_decompose(args),
        Command::Cfunction(args) => run_cfunction(args),
        Command::Transform(args) => run_transform(args),
        Command::Ps(args) => run_ps(args),
        Command::CounterexampleSl3(args) => run_counterexample(args),
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[derive(Args)]
struct VerifyArgs {
    /// Check family to run (default: all).
    #[arg(long, value_enum)]
    suite: Option<Suite>,
    /// Seed for every randomised check.
    #[arg(long)]
    seed: Option<u64>,
    /// Path of the JSON report; companions are written next to it.
    #[arg(long)]
    output: Option<PathBuf>,
    /// JSON file with a full SuiteConfig; explicit flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Per-suite tolerance override as suite=value (repeatable).
    #[arg(long = "tolerance")]
    tolerances: Vec<String>,
    /// Comma-separated artifact formats among json, csv, svg. JSON is always written.
    #[arg(long, default_value = "json,csv,svg")]
    formats: String,
    #[arg(long)]
    disk_radius: Option<f64>,
    #[arg(long)]
    disk_radial: Option<usize>,
    #[arg(long)]
    disk_angular: Option<usize>,
    #[arg(long)]
    lambda_max: Option<f64>,
    #[arg(long)]
    lambda_nodes: Option<usize>,
    #[arg(long)]
    boundary_nodes: Option<usize>,
    #[arg(long)]
    line_nodes: Option<usize>,
    #[arg(long)]
    circle_nodes: Option<usize>,
}

fn run_verify(args: VerifyArgs) -> Result<()> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config file {}", path.display()))?;
            serde_json::from_str::<SuiteConfig>(&text)
                .with_context(|| format!("parsing config file {}", path.display()))?
        }
        None => SuiteConfig::default(),
    };
    if let Some(suite) = args.suite {
        cfg.suite = suite;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(output) = &args.output {
        cfg.output_path = Some(output.clone());
    }
    for spec in &args.tolerances {
        let (suite, value) = spec
            .split_once('=')
            .with_context(|| format!("tolerance override {spec:?} is not suite=value"))?;
        let value: f64 =
            value.parse().with_context(|| format!("tolerance value in {spec:?}"))?;
        cfg.tolerances.insert(suite.to_string(), value);
    }
    let g = &mut cfg.grid_sizes;
    if let Some(v) = args.disk_radius {
        g.disk_radius = v;
    }
    if let Some(v) = args.disk_radial {
        g.disk_radial = v;
    }
    if let Some(v) = args.disk_angular {
        g.disk_angular = v;
    }
    if let Some(v) = args.lambda_max {
        g.lambda_max = v;
    }
    if let Some(v) = args.lambda_nodes {
        g.lambda_nodes = v;
    }
    if let Some(v) = args.boundary_nodes {
        g.boundary_nodes = v;
    }
    if let Some(v) = args.line_nodes {
        g.line_nodes = v;
    }
    if let Some(v) = args.circle_nodes {
        g.circle_nodes = v;
    }
    let formats = parse_formats(&args.formats)?;

    let report = run_suite(&cfg)?;
    for check in &report.per_check {
        println!(
            "[{}] {:<30} residual {:>12.3e}  tolerance {:>9.1e}  ({})",
            if check.pass { "PASS" } else { "FAIL" },
            check.name,
            check.residual,
            check.tolerance,
            check.suite
        );
    }
    println!(
        "{} of {} checks passed, {} failed",
        report.summary.passed, report.summary.total, report.summary.failed
    );
    for path in emit_artifacts(&report, &formats)? {
        println!("wrote {}", path.display());
    }
    eprintln!("wall time {:.2}s", report.wall_time_seconds);
    if !report.all_pass() {
        std::process::exit(1);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// decompose
// ---------------------------------------------------------------------------

#[derive(Args)]
struct DecomposeArgs {
    /// Group tag: sl2, sl3, slN, or sohN.
    #[arg(long, default_value = "sl2")]
    group: String,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    count: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct DecomposeRecord {
    matrix: Vec<Vec<f64>>,
    kan_a_log: Vec<f64>,
    kan_residual: f64,
    nak_a_log: Vec<f64>,
    nak_residual: f64,
    kak_a_log: Option<Vec<f64>>,
    kak_residual: Option<f64>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct DecomposeOutput {
    group: String,
    seed: u64,
    elements: Vec<DecomposeRecord>,
    max_residual: f64,
}

fn parse_group(tag: &str) -> Result<Group> {
    let t = tag.to_lowercase();
    if t == "sl2" {
        return Ok(Group::Sl2);
    }
    if t == "sl3" {
        return Ok(Group::Sl3);
    }
    if let Some(rest) = t.strip_prefix("soh") {
        let n: usize = rest.parse().with_context(|| format!("group tag {tag:?}"))?;
        anyhow::ensure!(n >= 2, "soh needs n >= 2");
        return Ok(Group::Soh(n));
    }
    if let Some(rest) = t.strip_prefix("sl") {
        let n: usize = rest.parse().with_context(|| format!("group tag {tag:?}"))?;
        return match n {
            0 | 1 => bail!("sl needs n >= 2"),
            2 => Ok(Group::Sl2),
            3 => Ok(Group::Sl3),
            _ => Ok(Group::Sln(n)),
        };
    }
    bail!("unknown group tag {tag:?} (expected sl2, sl3, slN, sohN)")
}

fn matrix_rows(m: &nalgebra::DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn run_decompose(args: DecomposeArgs) -> Result<()> {
    let group = parse_group(&args.group)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut elements = Vec::new();
    let mut max_residual = 0.0f64;
    for _ in 0..args.count.max(1) {
        let g = random_element(group, &mut rng);
        let kan = iwasawa_kan(&g)?;
        let kan_residual = max_abs_diff(g.matrix(), &kan.reconstruct());
        let nak = iwasawa_nak(&g)?;
        let nak_residual = max_abs_diff(g.matrix(), &nak.reconstruct());
        let (kak_a_log, kak_residual) = match cartan_kak(&g) {
            Ok(kak) => {
                let r = max_abs_diff(g.matrix(), &kak.reconstruct());
                max_residual = max_residual.max(r);
                (Some(kak.a_log.clone()), Some(r))
            }
            Err(_) => (None, None),
        };
        max_residual = max_residual.max(kan_residual).max(nak_residual);
        elements.push(DecomposeRecord {
            matrix: matrix_rows(g.matrix()),
            kan_a_log: kan.a_log.clone(),
            kan_residual,
            nak_a_log: nak.a_log.clone(),
            nak_residual,
            kak_a_log,
            kak_residual,
        });
    }
    let out = DecomposeOutput {
        group: args.group.clone(),
        seed: args.seed,
        elements,
        max_residual,
    };
    emit_json(&out, args.output.as_deref())
}

// ---------------------------------------------------------------------------
// cfunction
// ---------------------------------------------------------------------------

#[derive(Args)]
struct CfunctionArgs {
    #[arg(long, default_value_t = 0.05)]
    min: f64,
    #[arg(long, default_value_t = 8.0)]
    max: f64,
    #[arg(long, default_value_t = 160)]
    nodes: usize,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn run_cfunction(args: CfunctionArgs) -> Result<()> {
    let rows = spectral_sweep(args.min, args.max, args.nodes)?;
    let csv = spectral_csv(&rows);
    match &args.output {
        Some(path) => {
            std::fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
            println!("wrote {}", path.display());
        }
        None => print!("{csv}"),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// transform
// ---------------------------------------------------------------------------

#[derive(Args)]
struct TransformArgs {
    /// Hyperbolic support radius of the bump being round-tripped.
    #[arg(long, default_value_t = 1.2)]
    support: f64,
    #[arg(long, default_value_t = 8)]
    probes: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TransformProbe {
    z: [f64; 2],
    expected: [f64; 2],
    observed: [f64; 2],
    error: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TransformOutput {
    support: f64,
    lambda_max: f64,
    lambda_nodes: usize,
    probes: Vec<TransformProbe>,
    max_error: f64,
}

fn run_transform(args: TransformArgs) -> Result<()> {
    anyhow::ensure!(args.support > 0.2 && args.support <= 1.5, "support must lie in (0.2, 1.5]");
    let grid = Arc::new(disk_quadrature(args.support + 0.4, 160, 96)?);
    let f_fn = bump(args.support);
    let f = SampledFunctionX::sample(grid, args.support, &f_fn)?;
    let lg = LambdaGrid::uniform(20.0, 240)?;
    let bg = circle_quadrature(96)?;
    let inv = helgason_inverse(&helgason_ft(&f, &lg, &bg)?)?;

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let r_cap = (args.support / 2.0).tanh() * 0.8;
    let mut probes = Vec::new();
    let mut max_error = 0.0f64;
    for _ in 0..args.probes.max(1) {
        use rand::Rng;
        let z = DiskPoint::new(Complex64::from_polar(
            rng.gen_range(0.0..r_cap),
            rng.gen_range(0.0..std::f64::consts::TAU),
        ))?;
        let want = f_fn(&z);
        let got = inv.evaluate(&z);
        let error = (got - want).norm();
        max_error = max_error.max(error);
        probes.push(TransformProbe {
            z: [z.z().re, z.z().im],
            expected: [want.re, want.im],
            observed: [got.re, got.im],
            error,
        });
    }
    let out = TransformOutput {
        support: args.support,
        lambda_max: 20.0,
        lambda_nodes: 240,
        probes,
        max_error,
    };
    emit_json(&out, args.output.as_deref())
}

// ---------------------------------------------------------------------------
// ps
// ---------------------------------------------------------------------------

#[derive(Args)]
struct PsArgs {
    #[arg(long, default_value_t = 2.0)]
    lambda: f64,
    #[arg(long, default_value_t = 2.0)]
    mu: f64,
    /// First-factor atom as angle:weightRe:weightIm (repeatable).
    #[arg(long = "phi-atom")]
    phi_atoms: Vec<String>,
    /// Second-factor atom as angle:weightRe:weightIm (repeatable).
    #[arg(long = "psi-atom")]
    psi_atoms: Vec<String>,
    /// Symbol family: bump or plateau.
    #[arg(long, default_value = "bump")]
    symbol: String,
    #[arg(long, default_value_t = 0.0)]
    center_x: f64,
    #[arg(long, default_value_t = 0.0)]
    center_y: f64,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 4.0)]
    t_max: f64,
    #[arg(long, default_value_t = 1600)]
    t_nodes: usize,
    #[arg(long, default_value_t = 8.0)]
    u_max: f64,
    #[arg(long, default_value_t = 3200)]
    u_nodes: usize,
    #[arg(long, default_value_t = 1.3)]
    disk_radius: f64,
    #[arg(long, default_value_t = 240)]
    disk_radial: usize,
    #[arg(long, default_value_t = 192)]
    disk_angular: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct PsConfigEcho {
    lambda: f64,
    mu: f64,
    phi_atoms: Vec<[f64; 3]>,
    psi_atoms: Vec<[f64; 3]>,
    symbol: String,
    center: [f64; 2],
    radius: f64,
    t_max: f64,
    t_nodes: usize,
    u_max: f64,
    u_nodes: usize,
    disk_radius: f64,
    disk_radial: usize,
    disk_angular: usize,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct PsOutput {
    lhs: [f64; 2],
    rhs: [f64; 2],
    residual: f64,
    config: PsConfigEcho,
}

fn parse_atom(spec: &str) -> Result<(f64, Complex64)> {
    let parts: Vec<&str> = spec.split(':').collect();
    anyhow::ensure!(parts.len() == 3, "atom {spec:?} is not angle:weightRe:weightIm");
    let angle: f64 = parts[0].parse().with_context(|| format!("atom angle in {spec:?}"))?;
    let re: f64 = parts[1].parse().with_context(|| format!("atom weight in {spec:?}"))?;
    let im: f64 = parts[2].parse().with_context(|| format!("atom weight in {spec:?}"))?;
    Ok((angle, Complex64::new(re, im)))
}

fn build_symbol(args: &PsArgs) -> Result<SymbolFn> {
    let center = DiskPoint::from_xy(args.center_x, args.center_y)?;
    match args.symbol.as_str() {
        "bump" => SymbolFn::bump_at(center, args.radius).map_err(Into::into),
        "plateau" => {
            let base = SymbolFn::gaussian_with_plateau(2.0, 0.6 * args.radius, args.radius)?;
            if args.center_x == 0.0 && args.center_y == 0.0 {
                Ok(base)
            } else {
                Ok(base.compose_g(&point_to_group(&center).inverse()))
            }
        }
        other => bail!("unknown symbol {other:?} (expected bump or plateau)"),
    }
}

fn run_ps(args: PsArgs) -> Result<()> {
    let phi_specs = if args.phi_atoms.is_empty() {
        vec![(0.0, Complex64::new(1.0, 0.0))]
    } else {
        args.phi_atoms.iter().map(|s| parse_atom(s)).collect::<Result<_>>()?
    };
    let psi_specs = if args.psi_atoms.is_empty() {
        vec![(std::f64::consts::PI, Complex64::new(1.0, 0.0))]
    } else {
        args.psi_atoms.iter().map(|s| parse_atom(s)).collect::<Result<_>>()?
    };
    let to_measure = |specs: &[(f64, Complex64)]| {
        rankone::transforms::BoundaryMeasure::from_atoms(
            specs.iter().map(|(angle, w)| (BoundaryPoint::new(*angle), *w)).collect(),
        )
    };
    let data = rankone::psdistrib::PSData {
        lambda: SpectralParam::real(args.lambda),
        mu: SpectralParam::real(args.mu),
        t_phi: to_measure(&phi_specs)?,
        t_psi: to_measure(&psi_specs)?,
    };
    let a = build_symbol(&args)?;
    let grids = PsGrids {
        t_line: LineQuadrature::uniform(args.t_max, args.t_nodes)?,
        u_line: LineQuadrature::uniform(args.u_max, args.u_nodes)?,
        disk: Arc::new(disk_quadrature(args.disk_radius, args.disk_radial, args.disk_angular)?),
    };
    let check = intertwine_check(&a, &data, &grids)?;
    let out = PsOutput {
        lhs: [check.lhs.re, check.lhs.im],
        rhs: [check.rhs.re, check.rhs.im],
        residual: check.residual,
        config: PsConfigEcho {
            lambda: args.lambda,
            mu: args.mu,
            phi_atoms: phi_specs.iter().map(|(a, w)| [*a, w.re, w.im]).collect(),
            psi_atoms: psi_specs.iter().map(|(a, w)| [*a, w.re, w.im]).collect(),
            symbol: args.symbol.clone(),
            center: [args.center_x, args.center_y],
            radius: args.radius,
            t_max: args.t_max,
            t_nodes: args.t_nodes,
            u_max: args.u_max,
            u_nodes: args.u_nodes,
            disk_radius: args.disk_radius,
            disk_radial: args.disk_radial,
            disk_angular: args.disk_angular,
        },
    };
    emit_json(&out, args.output.as_deref())
}

// ---------------------------------------------------------------------------
// counterexample-sl3
// ---------------------------------------------------------------------------

#[derive(Args)]
struct CounterexampleArgs {
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CounterexampleOutput {
    s: f64,
    s_prime: f64,
    gap: f64,
    expected_s: f64,
    expected_s_prime: f64,
    expected_gap: f64,
    residual: f64,
}

fn run_counterexample(args: CounterexampleArgs) -> Result<()> {
    let probe = check_hnw_symmetry(Group::Sl3, &[1.0, 1.0, 1.0])?;
    let expected_s = 0.5 * 3.0f64.ln();
    let expected_s_prime = 0.5 * 2.0f64.ln();
    let expected_gap = 0.5 * 1.5f64.ln();
    let residual = (probe.s - expected_s)
        .abs()
        .max((probe.s_prime - expected_s_prime).abs())
        .max((probe.residual - expected_gap).abs());
    let out = CounterexampleOutput {
        s: probe.s,
        s_prime: probe.s_prime,
        gap: probe.residual,
        expected_s,
        expected_s_prime,
        expected_gap,
        residual,
    };
    emit_json(&out, args.output.as_deref())
}

// ---------------------------------------------------------------------------

fn emit_json<T: Serialize>(value: &T, output: Option<&std::path::Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match output {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            println!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}
