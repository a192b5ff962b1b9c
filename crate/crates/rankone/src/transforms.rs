//! Helgason Fourier analysis on the disk: forward transform, inversion,
//! Plancherel pairing, and the Poisson transform of boundary measures.
//!
//! Measure conventions: functions on X are integrated against the
//! hyperbolic area measure carried by `DiskQuadrature`; the boundary
//! carries the probability measure of `CircleQuadrature`; the spectral
//! side carries kappa * density(lambda) d(lambda) on (0, Lambda] with a
//! single constant `KAPPA` calibrated once (see below) and frozen.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{
    boundary_action, disk_action, horocycle_bracket, hyperbolic_dist, BoundaryPoint,
    CircleQuadrature, DiskPoint, DiskQuadrature, RHO,
};
use crate::lie::{GroupElement, RootDatum};
use crate::spectral::{plancherel_density, SpectralParam};

/// Spectral normalisation constant 1/(2 pi^2).
///
/// Calibration: the inversion ansatz f = kappa * int nu(lambda) P_lambda f~
/// applied to radial f forces kappa * nu to match the spherical spectral
/// measure; the short-time heat trace on the disk (h_t(o,o) -> 1/(4 pi t))
/// pins that measure to (1/2pi) lambda tanh(pi lambda) d lambda, i.e.
/// kappa = 1/(2 pi^2) against nu = pi lambda tanh(pi lambda). The
/// round-trip tests below re-verify the value numerically.
pub const KAPPA: f64 = 0.050_660_591_821_168_89;

/// A function sampled on a disk grid, identically zero beyond its
/// hyperbolic support radius (enforced at construction).
#[derive(Debug, Clone)]
pub struct SampledFunctionX {
    pub grid: Arc<DiskQuadrature>,
    pub values: Vec<Complex64>,
    pub support_radius: f64,
}

impl SampledFunctionX {
    pub fn sample<F>(grid: Arc<DiskQuadrature>, support_radius: f64, f: F) -> Result<Self>
    where
        F: Fn(&DiskPoint) -> Complex64,
    {
        if !(support_radius > 0.0) || support_radius >= grid.max_radius {
            return Err(Error::InvalidGrid(format!(
                "support radius {support_radius} must sit strictly inside the grid radius {}",
                grid.max_radius
            )));
        }
        let origin = DiskPoint::origin();
        let values = grid
            .nodes
            .iter()
            .map(|z| {
                if hyperbolic_dist(z, &origin) <= support_radius {
                    f(z)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Ok(SampledFunctionX { grid, values, support_radius })
    }

    /// Pointwise linear combination on a shared grid.
    pub fn linear_combination(a: Complex64, f: &Self, b: Complex64, g: &Self) -> Result<Self> {
        if !Arc::ptr_eq(&f.grid, &g.grid) {
            return Err(Error::GridMismatch("linear combination needs a shared grid".into()));
        }
        let values = f
            .values
            .iter()
            .zip(&g.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(SampledFunctionX {
            grid: f.grid.clone(),
            values,
            support_radius: f.support_radius.max(g.support_radius),
        })
    }
}

/// Uniform spectral grid on (0, Lambda] with composite-Simpson weights.
///
/// The weights integrate functions over [0, Lambda] that vanish at
/// lambda = 0, which every spectral integrand here does (the Plancherel
/// density has a zero there); the lambda = 0 node is therefore dropped.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LambdaGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub lambda_max: f64,
}

impl LambdaGrid {
    pub fn uniform(lambda_max: f64, n: usize) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidGrid(
                "spectral grid needs an even node count of at least 4".into(),
            ));
        }
        if !(lambda_max > 0.0 && lambda_max.is_finite()) {
            return Err(Error::InvalidGrid(format!("invalid spectral cutoff {lambda_max}")));
        }
        let h = lambda_max / n as f64;
        let full = crate::numerics::simpson_weights(n, h);
        let nodes = (1..=n).map(|j| j as f64 * h).collect();
        let weights = full[1..].to_vec();
        Ok(LambdaGrid { nodes, weights, lambda_max })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn complex_pairs<S: serde::Serializer>(v: &Vec<Complex64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&v.iter().map(|c| (c.re, c.im)).collect::<Vec<_>>(), s)
}

fn complex_unpairs<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<Complex64>, D::Error> {
    let pairs: Vec<(f64, f64)> = serde::Deserialize::deserialize(d)?;
    Ok(pairs.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

/// Helgason Fourier data on a (lambda, b) product grid; values are stored
/// row-major by lambda and serialise as flat [re, im] pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FourierData {
    pub lambda_grid: LambdaGrid,
    pub b_grid: CircleQuadrature,
    #[serde(serialize_with = "complex_pairs", deserialize_with = "complex_unpairs")]
    pub values: Vec<Complex64>,
}

impl FourierData {
    pub fn value(&self, lambda_index: usize, b_index: usize) -> Complex64 {
        self.values[lambda_index * self.b_grid.len() + b_index]
    }
}

/// Forward Helgason transform f~(lambda, b) = int f(z) e^{(-i lambda + rho)<z,b>} dz.
///
/// The lambda dependence is evaluated with a per-node phase recurrence over
/// the uniform grid, so the cost is O(support nodes * (n_lambda + n_b)).
pub fn helgason_ft(
    f: &SampledFunctionX,
    lambda_grid: &LambdaGrid,
    b_grid: &CircleQuadrature,
) -> Result<FourierData> {
    if lambda_grid.is_empty() || b_grid.is_empty() {
        return Err(Error::InvalidGrid("empty spectral or boundary grid".into()));
    }
    let nl = lambda_grid.len();
    let nb = b_grid.len();
    let h = lambda_grid.lambda_max / nl as f64;
    // Support filter: nodes where f vanishes contribute nothing.
    let active: Vec<(usize, Complex64)> = f
        .values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm_sqr() > 0.0)
        .map(|(i, &v)| (i, v * f.grid.weights[i]))
        .collect();
    let mut values = vec![Complex64::new(0.0, 0.0); nl * nb];
    for (j, b) in b_grid.nodes.iter().enumerate() {
        for &(i, wv) in &active {
            let beta = horocycle_bracket(&f.grid.nodes[i], b);
            let base = wv * (RHO * beta).exp();
            // e^{-i lambda_k beta} for lambda_k = k h via repeated rotation.
            let rot = Complex64::from_polar(1.0, -h * beta);
            let mut cur = rot;
            for k in 0..nl {
                values[k * nb + j] += base * cur;
                cur *= rot;
            }
        }
    }
    Ok(FourierData {
        lambda_grid: lambda_grid.clone(),
        b_grid: b_grid.clone(),
        values,
    })
}

/// The inverse transform as an evaluator:
/// f(z) = kappa sum_k sum_j w_k nu(lambda_k) w_j e^{(i lambda_k + rho)<z,b_j>} f~(k,j).
#[derive(Debug, Clone)]
pub struct InverseFt {
    terms: Vec<(f64, BoundaryPoint, Complex64)>,
}

impl InverseFt {
    pub fn evaluate(&self, z: &DiskPoint) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(lambda, b, coeff) in &self.terms {
            let beta = horocycle_bracket(z, &b);
            acc += coeff * (Complex64::new(RHO, lambda) * beta).exp();
        }
        acc
    }
}

pub fn helgason_inverse(fd: &FourierData) -> Result<InverseFt> {
    if fd.lambda_grid.is_empty() || fd.b_grid.is_empty() {
        return Err(Error::InvalidGrid("empty Fourier data".into()));
    }
    let roots = RootDatum::disk();
    let nb = fd.b_grid.len();
    let mut terms = Vec::with_capacity(fd.lambda_grid.len() * nb);
    for (k, (&lambda, &wl)) in fd
        .lambda_grid
        .nodes
        .iter()
        .zip(&fd.lambda_grid.weights)
        .enumerate()
    {
        let spectral_weight = KAPPA * wl * plancherel_density(lambda, &roots)?;
        for (j, (&b, &wb)) in fd.b_grid.nodes.iter().zip(&fd.b_grid.weights).enumerate() {
            terms.push((lambda, b, spectral_weight * wb * fd.values[k * nb + j]));
        }
    }
    Ok(InverseFt { terms })
}

/// Both sides of the Plancherel pairing <f1, f2>.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PlancherelSides {
    pub space_side: Complex64,
    pub spectral_side: Complex64,
}

pub fn plancherel_check(
    f1: &SampledFunctionX,
    f2: &SampledFunctionX,
    lambda_grid: &LambdaGrid,
    b_grid: &CircleQuadrature,
) -> Result<PlancherelSides> {
    if !Arc::ptr_eq(&f1.grid, &f2.grid) {
        return Err(Error::GridMismatch("Plancherel pairing needs a shared grid".into()));
    }
    let mut space = Complex64::new(0.0, 0.0);
    for ((v1, v2), w) in f1.values.iter().zip(&f2.values).zip(&f1.grid.weights) {
        space += *w * v1 * v2.conj();
    }
    let fd1 = helgason_ft(f1, lambda_grid, b_grid)?;
    let fd2 = helgason_ft(f2, lambda_grid, b_grid)?;
    let roots = RootDatum::disk();
    let nb = b_grid.len();
    let mut spectral = Complex64::new(0.0, 0.0);
    for (k, (&lambda, &wl)) in lambda_grid.nodes.iter().zip(&lambda_grid.weights).enumerate() {
        let sw = KAPPA * wl * plancherel_density(lambda, &roots)?;
        for (j, &wb) in b_grid.weights.iter().enumerate() {
            spectral += sw * wb * fd1.values[k * nb + j] * fd2.values[k * nb + j].conj();
        }
    }
    Ok(PlancherelSides { space_side: space, spectral_side: spectral })
}

/// A measure on the boundary circle: finitely many atoms plus an optional
/// density part sampled on a circle grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundaryMeasure {
    atoms: Vec<(BoundaryPoint, Complex64)>,
    density: Option<(CircleQuadrature, Vec<Complex64>)>,
}

impl BoundaryMeasure {
    pub fn from_atoms(atoms: Vec<(BoundaryPoint, Complex64)>) -> Result<Self> {
        let tv: f64 = atoms.iter().map(|(_, w)| w.norm()).sum();
        if atoms.is_empty() || !tv.is_finite() || tv <= 0.0 {
            return Err(Error::InvalidGrid("atomic measure needs finite positive total variation".into()));
        }
        Ok(BoundaryMeasure { atoms, density: None })
    }

    pub fn from_density(grid: CircleQuadrature, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch("density values must match the circle grid".into()));
        }
        let tv: f64 = values.iter().zip(&grid.weights).map(|(v, w)| v.norm() * w).sum();
        if !tv.is_finite() || tv <= 0.0 {
            return Err(Error::InvalidGrid("density measure needs finite positive total variation".into()));
        }
        Ok(BoundaryMeasure { atoms: Vec::new(), density: Some((grid, values)) })
    }

    /// The uniform probability measure db on a given grid.
    pub fn uniform(grid: CircleQuadrature) -> Result<Self> {
        let n = grid.len();
        BoundaryMeasure::from_density(grid, vec![Complex64::new(1.0, 0.0); n])
    }

    pub fn atoms(&self) -> &[(BoundaryPoint, Complex64)] {
        &self.atoms
    }

    pub fn density(&self) -> Option<&(CircleQuadrature, Vec<Complex64>)> {
        self.density.as_ref()
    }

    /// All point masses of the discretised measure: atoms followed by
    /// density nodes with their quadrature weights folded in.
    pub fn point_masses(&self) -> Vec<(BoundaryPoint, Complex64)> {
        let mut out = self.atoms.clone();
        if let Some((grid, values)) = &self.density {
            for ((b, w), v) in grid.nodes.iter().zip(&grid.weights).zip(values) {
                out.push((*b, v * *w));
            }
        }
        out
    }

    /// Pushforward under g in the lambda-twisted sense: an atom at b with
    /// weight w maps to an atom at g.b with weight w e^{-(i lambda + rho)<g.o, g.b>}.
    /// Only atomic measures are supported (density grids would leave the
    /// uniform-node layout).
    pub fn pushforward(&self, g: &GroupElement, lambda: SpectralParam) -> Result<BoundaryMeasure> {
        if self.density.is_some() {
            return Err(Error::InvalidGrid("pushforward is defined for atomic measures".into()));
        }
        let go = disk_action(g, &DiskPoint::origin());
        let atoms = self
            .atoms
            .iter()
            .map(|(b, w)| {
                let gb = boundary_action(g, b).gb;
                let factor =
                    (-(Complex64::new(RHO, 0.0) + Complex64::new(0.0, 1.0) * lambda.0)
                        * horocycle_bracket(&go, &gb))
                    .exp();
                (gb, w * factor)
            })
            .collect();
        BoundaryMeasure::from_atoms(atoms)
    }
}

/// Poisson transform of a boundary measure at spectral parameter lambda.
#[derive(Debug, Clone)]
pub struct PoissonFn {
    measure: BoundaryMeasure,
    lambda: SpectralParam,
}

impl PoissonFn {
    pub fn evaluate(&self, z: &DiskPoint) -> Complex64 {
        let exponent = Complex64::new(RHO, 0.0) + Complex64::new(0.0, 1.0) * self.lambda.0;
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, w) in self.measure.point_masses() {
            acc += w * (exponent * horocycle_bracket(z, &b)).exp();
        }
        acc
    }
}

pub fn poisson_transform(measure: &BoundaryMeasure, lambda: SpectralParam) -> PoissonFn {
    PoissonFn { measure: measure.clone(), lambda }
}

/// The standard smooth bump of hyperbolic support radius r0:
/// exp(-1/(1 - (d(o,z)/r0)^2)) inside, 0 outside.
pub fn bump(r0: f64) -> impl Fn(&DiskPoint) -> Complex64 {
    move |z: &DiskPoint| {
        let d = hyperbolic_dist(z, &DiskPoint::origin());
        let x = d / r0;
        if x < 1.0 {
            Complex64::new((-1.0 / (1.0 - x * x)).exp(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }
}

/// Left translate: (g . f)(z) = f(g^{-1} z).
pub fn translate<F>(g: &GroupElement, f: F) -> impl Fn(&DiskPoint) -> Complex64
where
    F: Fn(&DiskPoint) -> Complex64,
{
    let ginv = g.inverse();
    move |z: &DiskPoint| f(&disk_action(&ginv, z))
}
