//! File emission for `verify`: the JSON report plus optional CSV and SVG
//! companions derived from the spectral sweep and the refinement study.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use anyhow::{Context, Result};

use rankone::geometry::disk_quadrature;
use rankone::lie::RootDatum;
use rankone::psdistrib::{intertwine_check, LineQuadrature, PsGrids};
use rankone::spectral::{c_function, plancherel_density, SpectralParam};

use crate::report::Report;
use crate::svg::{line_plot, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

impl FromStr for Format {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            other => anyhow::bail!("unknown artifact format {other:?} (expected json, csv, svg)"),
        }
    }
}

pub fn parse_formats(spec: &str) -> Result<Vec<Format>> {
    let mut formats: Vec<Format> =
        spec.split(',').filter(|s| !s.trim().is_empty()).map(Format::from_str).collect::<Result<_>>()?;
    // The JSON report is always written.
    if !formats.contains(&Format::Json) {
        formats.push(Format::Json);
    }
    formats.sort();
    formats.dedup();
    Ok(formats)
}

/// One row of the spectral sweep backing the CSV table and the SVG plots.
pub struct SpectralRow {
    pub lambda: f64,
    pub c: num_complex::Complex64,
    pub density: f64,
}

pub fn spectral_sweep(min: f64, max: f64, nodes: usize) -> Result<Vec<SpectralRow>> {
    anyhow::ensure!(nodes >= 2, "spectral sweep needs at least 2 nodes");
    anyhow::ensure!(min > 0.0 && max > min, "spectral sweep needs 0 < min < max");
    let roots = RootDatum::disk();
    let mut rows = Vec::with_capacity(nodes);
    for j in 0..nodes {
        let lambda = min + (max - min) * j as f64 / (nodes - 1) as f64;
        let c = c_function(SpectralParam::real(lambda), &roots)?;
        let density = plancherel_density(lambda, &roots)?;
        rows.push(SpectralRow { lambda, c, density });
    }
    Ok(rows)
}

pub fn spectral_csv(rows: &[SpectralRow]) -> String {
    let mut out = String::from("lambda,c_re,c_im,density\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{:.12e},{:.12e},{:.12e},{:.12e}",
            row.lambda, row.c.re, row.c.im, row.density
        );
    }
    out
}

/// Single-pair intertwining residuals at shrinking grid scales; the plot of
/// these against scale is the refinement evidence.
pub fn refinement_series() -> Result<Vec<(f64, f64)>> {
    let a = crate::checks::refinement_symbol();
    let data = crate::checks::refinement_data();
    let mut points = Vec::new();
    for &scale in &[0.4, 0.7, 1.0] {
        let nt = ((1200.0 * scale) as usize).max(4) & !1;
        let nu = ((2400.0 * scale) as usize).max(4) & !1;
        let nr = ((280.0 * scale) as usize).max(8);
        let na = ((256.0 * scale) as usize).max(8);
        let grids = PsGrids {
            t_line: LineQuadrature::uniform(2.0, nt)?,
            u_line: LineQuadrature::uniform(3.0, nu)?,
            disk: Arc::new(disk_quadrature(1.3, nr, na)?),
        };
        let check = intertwine_check(&a, &data, &grids)?;
        points.push((scale, check.residual));
    }
    Ok(points)
}

/// Writes the requested artifact files next to the JSON report and returns
/// the paths written.
pub fn emit_artifacts(report: &Report, formats: &[Format]) -> Result<Vec<PathBuf>> {
    let json_path =
        report.config.output_path.clone().unwrap_or_else(|| PathBuf::from("report.json"));
    let mut written = Vec::new();

    write_file(&json_path, &report.to_json())?;
    written.push(json_path.clone());

    let needs_sweep = formats.contains(&Format::Csv) || formats.contains(&Format::Svg);
    let rows = if needs_sweep { spectral_sweep(0.05, 8.0, 160)? } else { Vec::new() };

    if formats.contains(&Format::Csv) {
        let path = sibling(&json_path, "spectral.csv");
        write_file(&path, &spectral_csv(&rows))?;
        written.push(path);
    }

    if formats.contains(&Format::Svg) {
        let cmod = Series {
            label: "|c(lambda)|".into(),
            points: rows.iter().map(|r| (r.lambda, r.c.norm())).collect(),
        };
        let path = sibling(&json_path, "cmodulus.svg");
        write_file(&path, &line_plot("Harish-Chandra c-function modulus", "lambda", "|c|", &[cmod], false))?;
        written.push(path);

        let dens = Series {
            label: "density".into(),
            points: rows.iter().map(|r| (r.lambda, r.density)).collect(),
        };
        let path = sibling(&json_path, "density.svg");
        write_file(&path, &line_plot("Plancherel density", "lambda", "|c|^-2", &[dens], false))?;
        written.push(path);

        let refine = Series { label: "residual".into(), points: refinement_series()? };
        let path = sibling(&json_path, "intertwine.svg");
        write_file(
            &path,
            &line_plot("Intertwining residual vs grid scale", "grid scale", "relative residual", &[refine], true),
        )?;
        written.push(path);
    }

    Ok(written)
}

fn sibling(json_path: &Path, suffix: &str) -> PathBuf {
    let stem = json_path.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    json_path.with_file_name(format!("{stem}.{suffix}"))
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)
                .with_context(|| format!("creating output directory {}", dir.display()))?;
        }
    }
    std::fs::write(path, content).with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_parsing_always_includes_json_and_dedups() {
        assert_eq!(parse_formats("svg,csv,svg").unwrap(), vec![Format::Json, Format::Csv, Format::Svg]);
        assert_eq!(parse_formats("json").unwrap(), vec![Format::Json]);
        assert_eq!(parse_formats("").unwrap(), vec![Format::Json]);
        assert!(parse_formats("json,png").is_err());
    }

    #[test]
    fn companions_are_named_after_the_report_stem() {
        let p = sibling(Path::new("/tmp/out/run7.json"), "spectral.csv");
        assert_eq!(p, PathBuf::from("/tmp/out/run7.spectral.csv"));
    }

    #[test]
    fn sweep_rows_match_the_requested_grid_and_serialise_fully() {
        let rows = spectral_sweep(0.5, 2.0, 4).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].lambda, 0.5);
        assert_eq!(rows[3].lambda, 2.0);
        assert!(rows.iter().all(|r| r.density > 0.0));
        let csv = spectral_csv(&rows);
        assert!(csv.starts_with("lambda,c_re,c_im,density\n"));
        assert_eq!(csv.lines().count(), 5);
        assert!(spectral_sweep(0.0, 2.0, 4).is_err());
    }
}
