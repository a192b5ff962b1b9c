//! Patterson-Sullivan and Wigner distributions on the disk: intermediate
//! values, weighted geodesic Radon transforms, the Knapp-Stein intertwiner,
//! the quantization map, and the Kohn-Nirenberg operator.
//!
//! Truncation policy: every line integral is cut where the compactly
//! supported symbol forces the integrand to vanish, computed from the
//! geometry, never by magnitude heuristics. Grids too short for that
//! window are rejected rather than silently truncated.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{
    cayley_inv, disk_action, geodesic_frame, geodesic_origin_distance, horocycle_bracket,
    hyperbolic_dist, BoundaryPoint, CircleQuadrature, DiskPoint, DiskQuadrature, TangentPoint,
    RHO,
};
use crate::geometry::{frame_tangent, geodesic_flow};
use crate::lie::{self, Group, GroupElement, RootDatum};
use crate::numerics::pairwise_sum_c;
use crate::spectral::{plancherel_density, SpectralParam};
use crate::transforms::{helgason_ft, FourierData, LambdaGrid, SampledFunctionX, KAPPA};

/// Relative-error floor for residual denominators.
pub const RESIDUAL_FLOOR: f64 = 1e-12;

const COINCIDENCE_TOL: f64 = 1e-6;

fn exponent(lambda: SpectralParam) -> Complex64 {
    Complex64::new(0.0, 1.0) * lambda.0 + RHO
}

// ---------------------------------------------------------------------------
// Symbols.
// ---------------------------------------------------------------------------

/// An order-zero symbol a(z, b) with compact spatial support; evaluation
/// is identically zero beyond the hyperbolic support radius.
#[derive(Clone)]
pub struct SymbolFn {
    eval: Arc<dyn Fn(&DiskPoint, &BoundaryPoint) -> Complex64 + Send + Sync>,
    support_radius: f64,
}

impl std::fmt::Debug for SymbolFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SymbolFn")
            .field("support_radius", &self.support_radius)
            .finish()
    }
}

impl SymbolFn {
    pub fn new<F>(support_radius: f64, f: F) -> Result<Self>
    where
        F: Fn(&DiskPoint, &BoundaryPoint) -> Complex64 + Send + Sync + 'static,
    {
        if !(support_radius > 0.0 && support_radius.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "symbol support radius {support_radius} must be positive and finite"
            )));
        }
        Ok(SymbolFn { eval: Arc::new(f), support_radius })
    }

    /// The constant symbol 1 inside the given support radius.
    pub fn constant_one(support_radius: f64) -> Result<Self> {
        SymbolFn::new(support_radius, |_, _| Complex64::new(1.0, 0.0))
    }

    /// Smooth bump centred at a point, zero outside hyperbolic radius r0
    /// around it; the declared support radius accounts for the offset.
    pub fn bump_at(center: DiskPoint, r0: f64) -> Result<Self> {
        let offset = hyperbolic_dist(&center, &DiskPoint::origin());
        SymbolFn::new(r0 + offset, move |z, _| {
            let x = hyperbolic_dist(z, &center) / r0;
            if x < 1.0 {
                Complex64::new((-1.0 / (1.0 - x * x)).exp(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Radial Gaussian e^{-kappa d^2} under a smooth plateau cutoff that is
    /// exactly 1 for d <= plateau_radius and 0 beyond the support radius.
    /// The curvature at the peak stays kappa-controlled while the cutoff
    /// happens where the factor is already small.
    pub fn gaussian_with_plateau(
        kappa: f64,
        plateau_radius: f64,
        support_radius: f64,
    ) -> Result<Self> {
        if !(plateau_radius > 0.0 && support_radius > plateau_radius) {
            return Err(Error::InvalidGrid(format!(
                "plateau {plateau_radius} must sit inside the support {support_radius}"
            )));
        }
        let edge = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
        SymbolFn::new(support_radius, move |z: &DiskPoint, _: &BoundaryPoint| {
            let d = hyperbolic_dist(z, &DiskPoint::origin());
            let up = edge(support_radius - d);
            let down = edge(d - plateau_radius);
            Complex64::new((-kappa * d * d).exp() * up / (up + down), 0.0)
        })
    }

    pub fn evaluate(&self, z: &DiskPoint, b: &BoundaryPoint) -> Complex64 {
        if hyperbolic_dist(z, &DiskPoint::origin()) > self.support_radius {
            Complex64::new(0.0, 0.0)
        } else {
            (self.eval)(z, b)
        }
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    /// The symbol pulled back by geodesic flow for time t, so that the
    /// new symbol at (z, b) samples the old one at the flowed base point.
    pub fn flow_translated(&self, t: f64) -> SymbolFn {
        let inner = self.eval.clone();
        let r = self.support_radius;
        SymbolFn {
            eval: Arc::new(move |z: &DiskPoint, b: &BoundaryPoint| {
                let moved = geodesic_flow(&TangentPoint { z: *z, b: *b }, -t);
                if hyperbolic_dist(&moved.z, &DiskPoint::origin()) > r {
                    Complex64::new(0.0, 0.0)
                } else {
                    inner(&moved.z, b)
                }
            }),
            support_radius: self.support_radius + t.abs(),
        }
    }

    /// The pullback (a o g)(z, b) = a(g.z, g.b).
    pub fn compose_g(&self, g: &GroupElement) -> SymbolFn {
        let inner = self.eval.clone();
        let r = self.support_radius;
        let g = g.clone();
        let shift = hyperbolic_dist(&disk_action(&g, &DiskPoint::origin()), &DiskPoint::origin());
        SymbolFn {
            eval: Arc::new(move |z: &DiskPoint, b: &BoundaryPoint| {
                let gz = disk_action(&g, z);
                if hyperbolic_dist(&gz, &DiskPoint::origin()) > r {
                    Complex64::new(0.0, 0.0)
                } else {
                    inner(&gz, &crate::geometry::boundary_action(&g, b).gb)
                }
            }),
            support_radius: r + shift,
        }
    }
}

/// A symbol depending on the spectral parameter, a(z, mu, b), compactly
/// supported in z.
#[derive(Clone)]
pub struct KnSymbol {
    eval: Arc<dyn Fn(&DiskPoint, f64, &BoundaryPoint) -> Complex64 + Send + Sync>,
    support_radius: f64,
}

impl KnSymbol {
    pub fn new<F>(support_radius: f64, f: F) -> Result<Self>
    where
        F: Fn(&DiskPoint, f64, &BoundaryPoint) -> Complex64 + Send + Sync + 'static,
    {
        if !(support_radius > 0.0 && support_radius.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "symbol support radius {support_radius} must be positive and finite"
            )));
        }
        Ok(KnSymbol { eval: Arc::new(f), support_radius })
    }

    pub fn evaluate(&self, z: &DiskPoint, mu: f64, b: &BoundaryPoint) -> Complex64 {
        if hyperbolic_dist(z, &DiskPoint::origin()) > self.support_radius {
            Complex64::new(0.0, 0.0)
        } else {
            (self.eval)(z, mu, b)
        }
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    /// The pullback (a o g)(z, mu, b) = a(g.z, mu, g.b).
    pub fn compose_g(&self, g: &GroupElement) -> KnSymbol {
        let inner = self.eval.clone();
        let r = self.support_radius;
        let g = g.clone();
        let shift = hyperbolic_dist(&disk_action(&g, &DiskPoint::origin()), &DiskPoint::origin());
        KnSymbol {
            eval: Arc::new(move |z: &DiskPoint, mu: f64, b: &BoundaryPoint| {
                let gz = disk_action(&g, z);
                if hyperbolic_dist(&gz, &DiskPoint::origin()) > r {
                    Complex64::new(0.0, 0.0)
                } else {
                    inner(&gz, mu, &crate::geometry::boundary_action(&g, b).gb)
                }
            }),
            support_radius: r + shift,
        }
    }
}

// ---------------------------------------------------------------------------
// Boundary data and line grids.
// ---------------------------------------------------------------------------

/// Spectral parameters and the two boundary measures of a pairing.
#[derive(Debug, Clone)]
pub struct PSData {
    pub lambda: SpectralParam,
    pub mu: SpectralParam,
    pub t_phi: crate::transforms::BoundaryMeasure,
    pub t_psi: crate::transforms::BoundaryMeasure,
}

/// Symmetric Simpson quadrature on [-t_max, t_max].
#[derive(Debug, Clone)]
pub struct LineQuadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub t_max: f64,
}

impl LineQuadrature {
    pub fn uniform(t_max: f64, n: usize) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidGrid(
                "line grid needs an even node count of at least 4".into(),
            ));
        }
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(Error::InvalidGrid(format!("invalid truncation {t_max}")));
        }
        let h = 2.0 * t_max / n as f64;
        let weights = crate::numerics::simpson_weights(n, h);
        let nodes = (0..=n).map(|j| -t_max + j as f64 * h).collect();
        Ok(LineQuadrature { nodes, weights, t_max })
    }
}

/// Grid bundle for distribution pairings: A-line, N-line, and disk.
#[derive(Debug, Clone)]
pub struct PsGrids {
    pub t_line: LineQuadrature,
    pub u_line: LineQuadrature,
    pub disk: Arc<DiskQuadrature>,
}

// ---------------------------------------------------------------------------
// Intermediate values.
// ---------------------------------------------------------------------------

/// The weight e^{(i lambda + rho) H(g)} e^{(i mu + rho) H(g w)}, built from
/// two Iwasawa projections.
pub fn intermediate_value(
    g: &GroupElement,
    lambda: SpectralParam,
    mu: SpectralParam,
) -> Result<Complex64> {
    if g.group() != Group::Sl2 {
        return Err(Error::UnsupportedGroup(g.group().name()));
    }
    let h0 = lie::iwasawa_t(g)?;
    let h1 = lie::iwasawa_t(&(g * &lie::weyl_longest(Group::Sl2)))?;
    Ok((exponent(lambda) * h0 + exponent(mu) * h1).exp())
}

// ---------------------------------------------------------------------------
// Radon transforms.
// ---------------------------------------------------------------------------

fn check_truncation(lq: &LineQuadrature, needed: f64, what: &str) -> Result<()> {
    if lq.t_max + 1e-9 < needed {
        return Err(Error::InsufficientTruncation(format!(
            "{what} needs |t| <= {needed:.3}, grid stops at {:.3}",
            lq.t_max
        )));
    }
    Ok(())
}

/// The point on the oriented geodesic at arc time t from the frame base.
fn frame_point(frame: &GroupElement, t: f64) -> DiskPoint {
    disk_action(frame, &DiskPoint::new_unchecked(Complex64::new((t / 2.0).tanh(), 0.0)))
}

/// Line integral of the symbol over the geodesic (b2 -> b), parameterised
/// by the canonical frame; the boundary argument is the forward endpoint.
pub fn radon_transform(
    f: &SymbolFn,
    b: &BoundaryPoint,
    b2: &BoundaryPoint,
    lq: &LineQuadrature,
) -> Result<Complex64> {
    let frame = geodesic_frame(b, b2)?;
    check_truncation(lq, f.support_radius() + geodesic_origin_distance(b, b2)?, "Radon")?;
    Ok(radon_over_frame(f, &frame, b, lq))
}

pub(crate) fn radon_over_frame(
    f: &SymbolFn,
    frame: &GroupElement,
    b: &BoundaryPoint,
    lq: &LineQuadrature,
) -> Complex64 {
    let terms: Vec<Complex64> = lq
        .nodes
        .iter()
        .zip(&lq.weights)
        .map(|(&t, &w)| w * f.evaluate(&frame_point(frame, t), b))
        .collect();
    pairwise_sum_c(&terms)
}

/// Radon transform weighted by the intermediate values along the line.
pub fn weighted_radon(
    f: &SymbolFn,
    lambda: SpectralParam,
    mu: SpectralParam,
    b: &BoundaryPoint,
    b2: &BoundaryPoint,
    lq: &LineQuadrature,
) -> Result<Complex64> {
    let frame = geodesic_frame(b, b2)?;
    check_truncation(lq, f.support_radius() + geodesic_origin_distance(b, b2)?, "weighted Radon")?;
    weighted_radon_over_frame(f, lambda, mu, &frame, b, lq)
}

fn weighted_radon_over_frame(
    f: &SymbolFn,
    lambda: SpectralParam,
    mu: SpectralParam,
    frame: &GroupElement,
    b: &BoundaryPoint,
    lq: &LineQuadrature,
) -> Result<Complex64> {
    let mut terms = Vec::with_capacity(lq.nodes.len());
    for (&t, &w) in lq.nodes.iter().zip(&lq.weights) {
        let g_t = frame * &lie::sl2_a(t);
        let fv = f.evaluate(&frame_point(frame, t), b);
        if fv.norm_sqr() == 0.0 {
            terms.push(Complex64::new(0.0, 0.0));
            continue;
        }
        terms.push(w * intermediate_value(&g_t, lambda, mu)? * fv);
    }
    Ok(pairwise_sum_c(&terms))
}

// ---------------------------------------------------------------------------
// Knapp-Stein intertwiner.
// ---------------------------------------------------------------------------

pub(crate) fn knapp_stein_kernel(u: f64, mu: SpectralParam) -> Complex64 {
    (-exponent(mu) * (1.0 + u * u).ln()).exp()
}

/// L_mu a(g): the N-integral of the symbol against the kernel
/// (1+u^2)^{-(i mu + 1/2)} with the measure du/pi.
///
/// The support window in u is exact: g n_u . o lies in the support ball
/// iff (xi - u)^2 + (eta - 1)^2 <= 2 eta (cosh R - 1) for g^{-1}.o = xi + i eta
/// in the upper half-plane, so a negative discriminant means the value is
/// exactly zero and no quadrature is attempted.
pub fn knapp_stein(
    a: &SymbolFn,
    g: &GroupElement,
    mu: SpectralParam,
    u_grid: &LineQuadrature,
) -> Result<Complex64> {
    if g.group() != Group::Sl2 {
        return Err(Error::UnsupportedGroup(g.group().name()));
    }
    let r = a.support_radius();
    let zeta = cayley_inv(disk_action(&g.inverse(), &DiskPoint::origin()).z());
    let (xi, eta) = (zeta.re, zeta.im);
    let d = 2.0 * eta * (r.cosh() - 1.0) - (eta - 1.0) * (eta - 1.0);
    if d <= 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let reach = xi.abs() + d.sqrt();
    if u_grid.t_max < reach {
        return Err(Error::InsufficientTruncation(format!(
            "N-integral needs |u| <= {reach:.3}, grid stops at {:.3}",
            u_grid.t_max
        )));
    }
    let b_fwd = crate::geometry::boundary_action(g, &BoundaryPoint::new(0.0)).gb;
    let mut terms = Vec::with_capacity(u_grid.nodes.len());
    for (&u, &w) in u_grid.nodes.iter().zip(&u_grid.weights) {
        // Outside the window the symbol vanishes identically.
        if (xi - u) * (xi - u) > d {
            continue;
        }
        let z = disk_action(&(g * &lie::sl2_n(u)), &DiskPoint::origin());
        let av = a.evaluate(&z, &b_fwd);
        if av.norm_sqr() == 0.0 {
            continue;
        }
        terms.push(w / PI * knapp_stein_kernel(u, mu) * av);
    }
    Ok(pairwise_sum_c(&terms))
}

// ---------------------------------------------------------------------------
// Patterson-Sullivan and Wigner pairings.
// ---------------------------------------------------------------------------

fn paired_masses(
    data: &PSData,
) -> Result<(Vec<(BoundaryPoint, Complex64)>, Vec<(BoundaryPoint, Complex64)>)> {
    let phi = data.t_phi.point_masses();
    let psi = data.t_psi.point_masses();
    for (bp, _) in &phi {
        for (bq, _) in &psi {
            let chord = (bp.unit() - bq.unit()).norm();
            if chord < COINCIDENCE_TOL {
                return Err(Error::CoincidentAtoms(chord));
            }
        }
    }
    Ok((phi, psi))
}

/// The pairing of a symbol against the tensor product of boundary data:
/// a double sum of weighted Radon transforms, bilinear in the measures.
pub fn ps_distribution(a: &SymbolFn, data: &PSData, grids: &PsGrids) -> Result<Complex64> {
    let (phi, psi) = paired_masses(data)?;
    let mut total = Complex64::new(0.0, 0.0);
    for (bp, wp) in &phi {
        for (bq, wq) in &psi {
            total += wp * wq * weighted_radon(a, data.lambda, data.mu, bp, bq, &grids.t_line)?;
        }
    }
    Ok(total)
}

/// The pairing divided by its value on the constant symbol over a bounded
/// reference window.
pub fn normalized_ps_distribution(
    a: &SymbolFn,
    data: &PSData,
    grids: &PsGrids,
    window_radius: f64,
) -> Result<Complex64> {
    let reference = SymbolFn::constant_one(window_radius)?;
    let denom = ps_distribution(&reference, data, grids)?;
    if denom.norm() < RESIDUAL_FLOOR {
        return Err(Error::BelowFloor(denom.norm()));
    }
    Ok(ps_distribution(a, data, grids)? / denom)
}

/// Direct triple quadrature of the kernel
/// a(z,b) e^{(i lambda + rho)<z,b>} e^{(i mu + rho)<z,b'>} over the disk
/// and the two boundary factors.
pub fn wigner_distribution(a: &SymbolFn, data: &PSData, grids: &PsGrids) -> Result<Complex64> {
    let (phi, psi) = paired_masses(data)?;
    let origin = DiskPoint::origin();
    let active: Vec<usize> = grids
        .disk
        .nodes
        .iter()
        .enumerate()
        .filter(|(_, z)| hyperbolic_dist(z, &origin) <= a.support_radius())
        .map(|(i, _)| i)
        .collect();
    let (pl, pm) = (exponent(data.lambda), exponent(data.mu));
    let mut total = Complex64::new(0.0, 0.0);
    for (bp, wp) in &phi {
        let sampled: Vec<(usize, Complex64, f64)> = active
            .iter()
            .map(|&i| {
                let z = &grids.disk.nodes[i];
                (i, a.evaluate(z, bp), horocycle_bracket(z, bp))
            })
            .collect();
        for (bq, wq) in &psi {
            let terms: Vec<Complex64> = sampled
                .iter()
                .map(|&(i, av, beta_p)| {
                    let z = &grids.disk.nodes[i];
                    grids.disk.weights[i]
                        * av
                        * (pl * beta_p + pm * horocycle_bracket(z, bq)).exp()
                })
                .collect();
            total += wp * wq * pairwise_sum_c(&terms);
        }
    }
    Ok(total / PI)
}

/// Both routes of the intertwining identity and their relative residual.
#[derive(Debug, Clone, Copy)]
pub struct IntertwineCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
}

/// lhs: the Wigner triple quadrature. rhs: the pairing applied to the
/// Knapp-Stein image, so each atom pair contributes the A-line integral
/// of intermediate values times L_mu a along the geodesic frame.
pub fn intertwine_check(a: &SymbolFn, data: &PSData, grids: &PsGrids) -> Result<IntertwineCheck> {
    let lhs = wigner_distribution(a, data, grids)?;
    let (phi, psi) = paired_masses(data)?;
    let mut rhs = Complex64::new(0.0, 0.0);
    for (bp, wp) in &phi {
        for (bq, wq) in &psi {
            let frame = geodesic_frame(bp, bq)?;
            let h0 = lie::iwasawa_t(&frame)?;
            // L_mu a(frame a_t) vanishes once |t + H(frame)| exceeds the
            // support radius, because |<z,b>| <= d(o,z) on the support.
            check_truncation(&grids.t_line, a.support_radius() + h0.abs(), "intertwining")?;
            let mut terms = Vec::with_capacity(grids.t_line.nodes.len());
            for (&t, &w) in grids.t_line.nodes.iter().zip(&grids.t_line.weights) {
                if (t + h0).abs() > a.support_radius() {
                    terms.push(Complex64::new(0.0, 0.0));
                    continue;
                }
                let g_t = &frame * &lie::sl2_a(t);
                let ks = knapp_stein(a, &g_t, data.mu, &grids.u_line)?;
                if ks.norm_sqr() == 0.0 {
                    terms.push(Complex64::new(0.0, 0.0));
                    continue;
                }
                terms.push(w * intermediate_value(&g_t, data.lambda, data.mu)? * ks);
            }
            rhs += wp * wq * pairwise_sum_c(&terms);
        }
    }
    let residual = (lhs - rhs).norm() / lhs.norm().max(RESIDUAL_FLOOR);
    Ok(IntertwineCheck { lhs, rhs, residual })
}

/// Ratio record of the geodesic-flow eigendistribution law.
#[derive(Debug, Clone, Copy)]
pub struct TranslationCheck {
    pub ratio: Complex64,
}

/// ratio = PS(a o G^{-t}) / PS(a); the expected value is e^{i(lambda-mu)t}
/// for real parameters, with the diagonal case exactly flow-invariant.
pub fn a_translation_check(
    a: &SymbolFn,
    data: &PSData,
    t: f64,
    grids: &PsGrids,
) -> Result<TranslationCheck> {
    let base = ps_distribution(a, data, grids)?;
    if base.norm() < RESIDUAL_FLOOR {
        return Err(Error::BelowFloor(base.norm()));
    }
    let translated = ps_distribution(&a.flow_translated(t), data, grids)?;
    Ok(TranslationCheck { ratio: translated / base })
}

// ---------------------------------------------------------------------------
// Quantization.
// ---------------------------------------------------------------------------

/// The operator Op(a) applied to a sampled function, evaluated by
/// inserting the symbol into the spectral inversion sum.
pub struct OpApply<'a> {
    symbol: &'a SymbolFn,
    fd: FourierData,
    spectral_weights: Vec<f64>,
}

impl OpApply<'_> {
    pub fn evaluate(&self, z: &DiskPoint) -> Complex64 {
        op_sum(&self.fd, &self.spectral_weights, z, Some(self.symbol))
    }
}

fn op_sum(
    fd: &FourierData,
    spectral_weights: &[f64],
    z: &DiskPoint,
    symbol: Option<&SymbolFn>,
) -> Complex64 {
    let nb = fd.b_grid.len();
    let nl = fd.lambda_grid.len();
    let h = fd.lambda_grid.lambda_max / nl as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, (b, &wb)) in fd.b_grid.nodes.iter().zip(&fd.b_grid.weights).enumerate() {
        let av = match symbol {
            Some(a) => a.evaluate(z, b),
            None => Complex64::new(1.0, 0.0),
        };
        if av.norm_sqr() == 0.0 {
            continue;
        }
        let beta = horocycle_bracket(z, b);
        let rot = Complex64::from_polar(1.0, h * beta);
        let mut cur = rot;
        let mut inner = Complex64::new(0.0, 0.0);
        for (k, &sw) in spectral_weights.iter().enumerate() {
            inner += sw * cur * fd.values[k * nb + j];
            cur *= rot;
        }
        acc += wb * av * (RHO * beta).exp() * inner;
    }
    acc
}

/// Builds Op(a) for a sampled input. The a = 1 self-test compares the bare
/// inversion against the input samples and rejects underresolved grids.
pub fn op_quantize<'a>(
    a: &'a SymbolFn,
    u: &SampledFunctionX,
    lambda_grid: &LambdaGrid,
    b_grid: &CircleQuadrature,
    self_test_tol: f64,
) -> Result<OpApply<'a>> {
    let fd = helgason_ft(u, lambda_grid, b_grid)?;
    let roots = RootDatum::disk();
    let mut spectral_weights = Vec::with_capacity(lambda_grid.len());
    for (&lam, &w) in lambda_grid.nodes.iter().zip(&lambda_grid.weights) {
        spectral_weights.push(KAPPA * w * plancherel_density(lam, &roots)?);
    }
    // Probe at the innermost sample and two spread-out samples of
    // substantial size; edge samples sit where truncation error peaks
    // and would make the test meaningless.
    let scale = u.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let nonzero: Vec<usize> = (0..u.values.len())
        .filter(|&i| u.values[i].norm() > 5e-2 * scale)
        .collect();
    if nonzero.is_empty() {
        return Err(Error::InvalidGrid("input function is identically zero".into()));
    }
    for &idx in &[0, nonzero.len() / 2, nonzero.len() - 1] {
        let i = nonzero[idx];
        let probe = op_sum(&fd, &spectral_weights, &u.grid.nodes[i], None);
        if (probe - u.values[i]).norm() > self_test_tol * scale {
            return Err(Error::InvalidGrid(format!(
                "quantization grids underresolved: identity self-test residual {:.2e}",
                (probe - u.values[i]).norm() / scale
            )));
        }
    }
    Ok(OpApply { symbol: a, fd, spectral_weights })
}

/// The defining action on plane waves: Op(a) e_{lambda,b} = a(., b) e_{lambda,b}.
pub fn op_apply_plane_wave<'a>(
    a: &'a SymbolFn,
    lambda: SpectralParam,
    b: BoundaryPoint,
) -> impl Fn(&DiskPoint) -> Complex64 + 'a {
    move |z: &DiskPoint| a.evaluate(z, &b) * (exponent(lambda) * horocycle_bracket(z, &b)).exp()
}

// ---------------------------------------------------------------------------
// Kohn-Nirenberg operator.
// ---------------------------------------------------------------------------

/// Grid bundle for the Kohn-Nirenberg quadratures, with a node budget
/// guarding the five-fold cost.
#[derive(Debug, Clone)]
pub struct KnGrids {
    pub disk: Arc<DiskQuadrature>,
    pub lambda: LambdaGrid,
    pub boundary: CircleQuadrature,
    pub node_budget: usize,
}

fn kn_active(support: f64, grids: &KnGrids) -> Result<Vec<usize>> {
    let origin = DiskPoint::origin();
    let active: Vec<usize> = grids
        .disk
        .nodes
        .iter()
        .enumerate()
        .filter(|(_, z)| hyperbolic_dist(z, &origin) <= support)
        .map(|(i, _)| i)
        .collect();
    let got = active.len() * grids.lambda.len() * grids.boundary.len();
    if got > grids.node_budget {
        return Err(Error::NodeBudget { got, limit: grids.node_budget });
    }
    Ok(active)
}

fn kn_spectral_weights(grids: &KnGrids) -> Result<Vec<f64>> {
    let roots = RootDatum::disk();
    grids
        .lambda
        .nodes
        .iter()
        .zip(&grids.lambda.weights)
        .map(|(&m, &w)| Ok(KAPPA * w * plancherel_density(m, &roots)?))
        .collect()
}

/// Direct evaluation of the defining display: the (w, mu, b') quadrature
/// of the four-bracket kernel against the symbol, with the e^{-(i lambda+rho)<z,b>}
/// prefactor.
pub fn kohn_nirenberg_direct(
    a: &KnSymbol,
    z: &DiskPoint,
    lambda: f64,
    b: &BoundaryPoint,
    grids: &KnGrids,
) -> Result<Complex64> {
    let active = kn_active(a.support_radius(), grids)?;
    let spectral = kn_spectral_weights(grids)?;
    let pl = Complex64::new(RHO, lambda);
    // Per-node data for the fixed (z, b) pair.
    let e_wb: Vec<Complex64> = active
        .iter()
        .map(|&i| grids.disk.weights[i] * (pl * horocycle_bracket(&grids.disk.nodes[i], b)).exp())
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    for (j, (bq, &wb)) in grids.boundary.nodes.iter().zip(&grids.boundary.weights).enumerate() {
        let _ = j;
        let beta_zq = horocycle_bracket(z, bq);
        let beta_wq: Vec<f64> = active
            .iter()
            .map(|&i| horocycle_bracket(&grids.disk.nodes[i], bq))
            .collect();
        for (k, (&mu, &sw)) in grids.lambda.nodes.iter().zip(&spectral).enumerate() {
            let _ = k;
            let outer = wb * sw * (Complex64::new(RHO, mu) * beta_zq).exp();
            let mut inner = Complex64::new(0.0, 0.0);
            for (pos, &i) in active.iter().enumerate() {
                let av = a.evaluate(&grids.disk.nodes[i], mu, bq);
                if av.norm_sqr() == 0.0 {
                    continue;
                }
                inner += e_wb[pos] * (Complex64::new(RHO, -mu) * beta_wq[pos]).exp() * av;
            }
            total += outer * inner;
        }
    }
    Ok((-pl * horocycle_bracket(z, b)).exp() * total)
}

/// Convolution route: for each (w, b') node build the frame g with
/// g.(o, base) = (w, b'), evaluate E_{mu,lambda} at g^{-1} h through two
/// Iwasawa projections of matrix products, and weigh by e^{2 rho H(g)}.
/// Independent algebra from the direct route; the integrands agree.
pub fn kohn_nirenberg_convolution(
    a: &KnSymbol,
    z: &DiskPoint,
    lambda: f64,
    b: &BoundaryPoint,
    grids: &KnGrids,
) -> Result<Complex64> {
    let active = kn_active(a.support_radius(), grids)?;
    let spectral = kn_spectral_weights(grids)?;
    let g_zb = frame_tangent(&TangentPoint { z: *z, b: *b });
    let mut total = Complex64::new(0.0, 0.0);
    for (bq, &wb) in grids.boundary.nodes.iter().zip(&grids.boundary.weights) {
        for &i in &active {
            let w_i = &grids.disk.nodes[i];
            let g = frame_tangent(&TangentPoint { z: *w_i, b: *bq });
            let h = &g.inverse() * &g_zb;
            let h_fwd = lie::iwasawa_t(&h)?;
            let h_inv = lie::iwasawa_t(&h.inverse())?;
            let haar = (2.0 * RHO * lie::iwasawa_t(&g)?).exp();
            let base = wb * grids.disk.weights[i] * haar;
            for (&mu, &sw) in grids.lambda.nodes.iter().zip(&spectral) {
                let av = a.evaluate(w_i, mu, bq);
                if av.norm_sqr() == 0.0 {
                    continue;
                }
                let e_val = (-(Complex64::new(RHO, mu)) * h_inv
                    - Complex64::new(RHO, lambda) * h_fwd)
                    .exp();
                total += base * sw * e_val * av;
            }
        }
    }
    Ok(total)
}

/// The phase mu log(a) - H(n a k) in (mu, u, t, theta) coordinates.
pub fn kn_phase(m: f64, u: f64, t: f64, theta: f64) -> Result<f64> {
    let g = &(&lie::sl2_n(u) * &lie::sl2_a(t)) * &lie::sl2_rotation(theta);
    Ok(m * t - lie::iwasawa_t(&g)?)
}

/// Central-difference gradient of the phase.
pub fn kn_phase_gradient(m: f64, u: f64, t: f64, theta: f64, h: f64) -> Result<[f64; 4]> {
    let d = |f: &dyn Fn(f64) -> Result<f64>| -> Result<f64> {
        Ok((f(h)? - f(-h)?) / (2.0 * h))
    };
    Ok([
        d(&|e| kn_phase(m + e, u, t, theta))?,
        d(&|e| kn_phase(m, u + e, t, theta))?,
        d(&|e| kn_phase(m, u, t + e, theta))?,
        d(&|e| kn_phase(m, u, t, theta + e))?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{circle_quadrature, disk_quadrature};
    use crate::spectral::c_function;
    use crate::transforms::BoundaryMeasure;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn real(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn test_symbol(r: f64) -> SymbolFn {
        // Radial bump modulated by a smooth boundary factor.
        let bump = crate::transforms::bump(r);
        SymbolFn::new(r, move |z: &DiskPoint, b: &BoundaryPoint| {
            bump(z) * (1.0 + 0.3 * b.theta().cos())
        })
        .unwrap()
    }

    fn atom(theta: f64, w: Complex64) -> BoundaryMeasure {
        BoundaryMeasure::from_atoms(vec![(BoundaryPoint::new(theta), w)]).unwrap()
    }

    fn default_grids() -> PsGrids {
        PsGrids {
            t_line: LineQuadrature::uniform(4.0, 1600).unwrap(),
            u_line: LineQuadrature::uniform(8.0, 3200).unwrap(),
            disk: Arc::new(disk_quadrature(1.3, 240, 192).unwrap()),
        }
    }

    #[test]
    fn intermediate_value_basepoint_and_translation_law() {
        let e = GroupElement::identity(Group::Sl2);
        let one = intermediate_value(&e, SpectralParam::real(1.3), SpectralParam::real(-0.4))
            .unwrap();
        assert!((one - real(1.0)).norm() <= 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(57);
        let (lam, mu) = (SpectralParam::real(1.7), SpectralParam::real(0.6));
        for _ in 0..50 {
            let g = lie::random_element(Group::Sl2, &mut rng);
            let t: f64 = rng.gen_range(-1.5..1.5);
            let lhs = intermediate_value(&(&g * &lie::sl2_a(t)), lam, mu).unwrap();
            let rhs = intermediate_value(&g, lam, mu).unwrap()
                * (Complex64::new(0.0, 1.0) * (lam.0 - mu.0) * t).exp();
            assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm());
        }

        let g3 = GroupElement::identity(Group::Sl3);
        assert!(intermediate_value(&g3, lam, mu).is_err());
    }

    #[test]
    fn diagonal_intermediate_value_is_a_chord_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(58);
        for _ in 0..100 {
            let b = BoundaryPoint::new(rng.gen_range(0.0..std::f64::consts::TAU));
            let mut b2 = BoundaryPoint::new(rng.gen_range(0.0..std::f64::consts::TAU));
            while (b.unit() - b2.unit()).norm() < 0.3 {
                b2 = BoundaryPoint::new(rng.gen_range(0.0..std::f64::consts::TAU));
            }
            let lam = SpectralParam::real(rng.gen_range(0.2..3.0));
            let frame = geodesic_frame(&b, &b2).unwrap();
            let got = intermediate_value(&frame, lam, lam).unwrap();
            let chord = (b.unit() - b2.unit()).norm();
            let want = (-(2.0 * exponent(lam)) * (chord / 2.0).ln()).exp();
            assert!(
                (got - want).norm() <= 1e-8 * want.norm(),
                "chord {chord}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn diagonal_intermediate_value_is_equivariant() {
        // d(g.b, g.b2) = e^{(i lam + rho)(<g.o,g.b> + <g.o,g.b2>)} d(b, b2).
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        let lam = SpectralParam::real(1.1);
        for _ in 0..50 {
            let g = lie::random_element(Group::Sl2, &mut rng);
            let b = BoundaryPoint::new(rng.gen_range(0.0..std::f64::consts::TAU));
            let b2 = BoundaryPoint::new(b.theta() + rng.gen_range(0.8..4.0));
            let go = disk_action(&g, &DiskPoint::origin());
            let gb = crate::geometry::boundary_action(&g, &b).gb;
            let gb2 = crate::geometry::boundary_action(&g, &b2).gb;
            let lhs =
                intermediate_value(&geodesic_frame(&gb, &gb2).unwrap(), lam, lam).unwrap();
            let factor = (exponent(lam)
                * (horocycle_bracket(&go, &gb) + horocycle_bracket(&go, &gb2)))
            .exp();
            let rhs = factor
                * intermediate_value(&geodesic_frame(&b, &b2).unwrap(), lam, lam).unwrap();
            assert!((lhs - rhs).norm() <= 1e-8 * rhs.norm());
        }
    }

    #[test]
    fn radon_vanishes_when_the_geodesic_misses_the_support() {
        let f = test_symbol(1.0);
        let lq = LineQuadrature::uniform(6.0, 800).unwrap();
        let v = radon_transform(&f, &BoundaryPoint::new(0.1), &BoundaryPoint::new(0.25), &lq)
            .unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn radon_on_a_diameter_matches_the_line_oracle() {
        let f = test_symbol(1.0);
        let b = BoundaryPoint::new(0.0);
        let b2 = BoundaryPoint::new(std::f64::consts::PI);
        let lq = LineQuadrature::uniform(2.0, 4000).unwrap();
        let got = radon_transform(&f, &b, &b2, &lq).unwrap();
        // Independent 1-D quadrature along the diameter with arc length dt.
        let factor = 1.0 + 0.3; // boundary factor at theta = 0
        let oracle = crate::numerics::simpson(
            |t: f64| {
                let x: f64 = t.abs();
                if x < 1.0 {
                    real(factor * (-1.0 / (1.0 - x * x)).exp())
                } else {
                    real(0.0)
                }
            },
            -1.0,
            1.0,
            2048,
        );
        assert!((got - oracle).norm() <= 1e-9 * oracle.norm());
    }

    #[test]
    fn radon_is_independent_of_the_frame_representative() {
        let f = test_symbol(1.0);
        let b = BoundaryPoint::new(0.4);
        let b2 = BoundaryPoint::new(3.9);
        let lq = LineQuadrature::uniform(5.0, 4000).unwrap();
        let base = radon_transform(&f, &b, &b2, &lq).unwrap();
        let frame = geodesic_frame(&b, &b2).unwrap();
        for &s in &[0.237, -0.51] {
            let shifted = &(&frame * &lie::sl2_a(s)) * &lie::sl2_rotation(std::f64::consts::PI);
            let v = radon_over_frame(&f, &shifted, &b, &lq);
            assert!((v - base).norm() <= 1e-9 * base.norm().max(1.0), "s={s}");
        }
    }

    #[test]
    fn weighted_radon_diagonal_factorizes() {
        let f = test_symbol(1.0);
        let lam = SpectralParam::real(1.6);
        let b = BoundaryPoint::new(0.7);
        let b2 = BoundaryPoint::new(3.1);
        let lq = LineQuadrature::uniform(4.0, 2000).unwrap();
        let lhs = weighted_radon(&f, lam, lam, &b, &b2, &lq).unwrap();
        let d = intermediate_value(&geodesic_frame(&b, &b2).unwrap(), lam, lam).unwrap();
        let rhs = d * radon_transform(&f, &b, &b2, &lq).unwrap();
        assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm());
    }

    #[test]
    fn weighted_radon_is_frame_shift_invariant() {
        let f = test_symbol(1.0);
        let (lam, mu) = (SpectralParam::real(2.0), SpectralParam::real(0.9));
        let b = BoundaryPoint::new(1.2);
        let b2 = BoundaryPoint::new(4.4);
        let lq = LineQuadrature::uniform(5.0, 4000).unwrap();
        let frame = geodesic_frame(&b, &b2).unwrap();
        let base = weighted_radon_over_frame(&f, lam, mu, &frame, &b, &lq).unwrap();
        let shifted = &frame * &lie::sl2_a(0.31);
        let v = weighted_radon_over_frame(&f, lam, mu, &shifted, &b, &lq).unwrap();
        assert!((v - base).norm() <= 1e-9 * base.norm().max(1.0));

        let zero = SymbolFn::new(1.0, |_, _| real(0.0)).unwrap();
        let z = weighted_radon(&zero, lam, mu, &b, &b2, &lq).unwrap();
        assert_eq!(z, real(0.0));
    }

    #[test]
    fn radon_rejects_short_grids_and_coincident_endpoints() {
        let f = test_symbol(1.0);
        let lq = LineQuadrature::uniform(0.5, 100).unwrap();
        let b = BoundaryPoint::new(0.4);
        let b2 = BoundaryPoint::new(0.4 + std::f64::consts::PI);
        assert!(matches!(
            radon_transform(&f, &b, &b2, &lq),
            Err(Error::InsufficientTruncation(_))
        ));
        let near = BoundaryPoint::new(0.4 + 1e-10);
        assert!(radon_transform(&f, &b, &near, &lq).is_err());
    }

    #[test]
    fn knapp_stein_kernel_value_and_m_invariance() {
        let mu = SpectralParam::real(1.4);
        for &u in &[0.0, 0.3, -1.7, 2.5] {
            let q: f64 = 1.0 + u * u;
            let want = q.powf(-0.5) * Complex64::from_polar(1.0, -mu.0.re * q.ln());
            assert!((knapp_stein_kernel(u, mu) - want).norm() <= 1e-14);
        }

        let a = test_symbol(1.0);
        let g = frame_tangent(&TangentPoint {
            z: DiskPoint::from_xy(0.1, -0.05).unwrap(),
            b: BoundaryPoint::new(0.8),
        });
        let minus = GroupElement::new(Group::Sl2, -g.matrix().clone()).unwrap();
        let ug = LineQuadrature::uniform(4.0, 2000).unwrap();
        let v1 = knapp_stein(&a, &g, mu, &ug).unwrap();
        let v2 = knapp_stein(&a, &minus, mu, &ug).unwrap();
        assert!((v1 - v2).norm() <= 1e-14 * v1.norm().max(1.0));
    }

    #[test]
    fn knapp_stein_vanishes_outside_the_reach_of_the_horocycles() {
        // g far from the support ball on the wrong side: exact zero.
        let a = test_symbol(0.5);
        let g = &lie::sl2_a(-3.0) * &lie::sl2_n(0.4);
        let ug = LineQuadrature::uniform(4.0, 400).unwrap();
        assert_eq!(
            knapp_stein(&a, &g, SpectralParam::real(2.0), &ug).unwrap(),
            real(0.0)
        );

        // In reach but with a grid shorter than the support window: error.
        let wide = test_symbol(3.0);
        let short = LineQuadrature::uniform(1.0, 400).unwrap();
        assert!(matches!(
            knapp_stein(&wide, &GroupElement::identity(Group::Sl2), SpectralParam::real(2.0), &short),
            Err(Error::InsufficientTruncation(_))
        ));
    }

    #[test]
    fn knapp_stein_leading_order_is_the_c_function() {
        // The deviation of L_mu a / (c(mu) a) from 1 decays like 1/mu with
        // coefficient kappa/2 when the frame base sits at the peak of a
        // Gaussian-in-distance symbol. The plateau cutoff keeps the
        // support-edge contribution well below the signal.
        let a = SymbolFn::gaussian_with_plateau(2.0, 1.5, 2.5).unwrap();
        let g = frame_tangent(&TangentPoint {
            z: DiskPoint::origin(),
            b: BoundaryPoint::new(0.3),
        });
        let ug = LineQuadrature::uniform(4.0, 8000).unwrap();
        let av = a.evaluate(&DiskPoint::origin(), &BoundaryPoint::new(0.3));
        let roots = RootDatum::disk();
        let mut devs = Vec::new();
        for &mu in &[5.0, 10.0, 20.0] {
            let ks = knapp_stein(&a, &g, SpectralParam::real(mu), &ug).unwrap();
            let c = c_function(SpectralParam::real(mu), &roots).unwrap();
            devs.push((ks / (c * av) - real(1.0)).norm());
        }
        assert!(devs[0] > devs[1] && devs[1] > devs[2], "{devs:?}");
        let slope = (devs[2].ln() - devs[0].ln()) / (20.0f64.ln() - 5.0f64.ln());
        assert!((-slope - 1.0).abs() <= 0.3, "decay exponent {}", -slope);
    }

    #[test]
    fn ps_single_pair_reduces_to_weighted_radon() {
        let a = test_symbol(1.0);
        let (lam, mu) = (SpectralParam::real(2.0), SpectralParam::real(1.0));
        let grids = default_grids();
        let b = BoundaryPoint::new(0.0);
        let b2 = BoundaryPoint::new(std::f64::consts::PI);
        let data = PSData {
            lambda: lam,
            mu,
            t_phi: atom(0.0, real(1.0)),
            t_psi: atom(std::f64::consts::PI, real(1.0)),
        };
        let ps = ps_distribution(&a, &data, &grids).unwrap();
        let wr = weighted_radon(&a, lam, mu, &b, &b2, &grids.t_line).unwrap();
        assert_eq!(ps, wr);

        // Bilinearity under weight scaling.
        let scaled = PSData {
            lambda: lam,
            mu,
            t_phi: atom(0.0, Complex64::new(0.3, 0.4)),
            t_psi: atom(std::f64::consts::PI, Complex64::new(-1.2, 0.5)),
        };
        let pss = ps_distribution(&a, &scaled, &grids).unwrap();
        let want = Complex64::new(0.3, 0.4) * Complex64::new(-1.2, 0.5) * wr;
        assert!((pss - want).norm() <= 1e-12 * want.norm());

        // Coincident atoms across the two factors are a domain error.
        let bad = PSData {
            lambda: lam,
            mu,
            t_phi: atom(1.0, real(1.0)),
            t_psi: atom(1.0 + 1e-9, real(1.0)),
        };
        assert!(matches!(
            ps_distribution(&a, &bad, &grids),
            Err(Error::CoincidentAtoms(_))
        ));

        let zero = SymbolFn::new(1.0, |_, _| real(0.0)).unwrap();
        assert_eq!(ps_distribution(&zero, &data, &grids).unwrap(), real(0.0));
    }

    #[test]
    fn diagonal_ps_is_time_reversal_invariant() {
        // b-independent symbol, equal parameters, equal measures.
        let bump = crate::transforms::bump(1.0);
        let a = SymbolFn::new(1.0, move |z: &DiskPoint, _: &BoundaryPoint| bump(z)).unwrap();
        let lam = SpectralParam::real(1.5);
        let grids = default_grids();
        let t_phi = BoundaryMeasure::from_atoms(vec![
            (BoundaryPoint::new(0.3), Complex64::new(1.0, -0.2)),
            (BoundaryPoint::new(2.4), Complex64::new(0.4, 0.7)),
        ])
        .unwrap();
        let t_psi = BoundaryMeasure::from_atoms(vec![
            (BoundaryPoint::new(1.1), Complex64::new(0.8, 0.1)),
            (BoundaryPoint::new(3.9), Complex64::new(-0.3, 0.6)),
        ])
        .unwrap();
        let data = PSData { lambda: lam, mu: lam, t_phi, t_psi };
        let v = ps_distribution(&a, &data, &grids).unwrap();
        // Swap the roles of the endpoints by pairing (b2, b) instead.
        let (phi, psi) = paired_masses(&data).unwrap();
        let mut rev = Complex64::new(0.0, 0.0);
        for (bp, wp) in &phi {
            for (bq, wq) in &psi {
                rev += wp * wq * weighted_radon(&a, lam, lam, bq, bp, &grids.t_line).unwrap();
            }
        }
        assert!((v - rev).norm() <= 1e-8 * v.norm());
    }

    #[test]
    fn ps_is_invariant_under_pushed_data() {
        let a = test_symbol(1.0);
        let (lam, mu) = (SpectralParam::real(1.8), SpectralParam::real(0.7));
        let grids = PsGrids {
            t_line: LineQuadrature::uniform(6.0, 2400).unwrap(),
            u_line: LineQuadrature::uniform(8.0, 3200).unwrap(),
            disk: Arc::new(disk_quadrature(1.3, 120, 96).unwrap()),
        };
        let t_phi = BoundaryMeasure::from_atoms(vec![
            (BoundaryPoint::new(0.2), real(1.0)),
            (BoundaryPoint::new(2.0), Complex64::new(0.5, 0.3)),
        ])
        .unwrap();
        let t_psi = BoundaryMeasure::from_atoms(vec![
            (BoundaryPoint::new(1.1), Complex64::new(-0.4, 0.9)),
            (BoundaryPoint::new(4.4), real(0.8)),
        ])
        .unwrap();
        let data = PSData { lambda: lam, mu, t_phi: t_phi.clone(), t_psi: t_psi.clone() };
        let base = ps_distribution(&a, &data, &grids).unwrap();

        let mut rng = ChaCha8Rng::seed_from_u64(321);
        for _ in 0..5 {
            let g = &lie::sl2_rotation(rng.gen_range(-1.0..1.0))
                * &(&lie::sl2_a(rng.gen_range(-0.35..0.35))
                    * &lie::sl2_n(rng.gen_range(-0.3..0.3)));
            let pushed = PSData {
                lambda: lam,
                mu,
                t_phi: t_phi.pushforward(&g, lam).unwrap(),
                t_psi: t_psi.pushforward(&g, mu).unwrap(),
            };
            let moved = ps_distribution(&a.compose_g(&g.inverse()), &pushed, &grids).unwrap();
            assert!(
                (moved - base).norm() <= 1e-6 * base.norm(),
                "residual {}",
                (moved - base).norm() / base.norm()
            );
        }
    }

    #[test]
    fn translation_ratio_follows_the_flow_law() {
        let a = test_symbol(1.0);
        let grids = PsGrids {
            t_line: LineQuadrature::uniform(6.0, 2400).unwrap(),
            u_line: LineQuadrature::uniform(8.0, 3200).unwrap(),
            disk: Arc::new(disk_quadrature(1.3, 120, 96).unwrap()),
        };
        let mk_data = |l: f64, m: f64| PSData {
            lambda: SpectralParam::real(l),
            mu: SpectralParam::real(m),
            t_phi: atom(0.4, real(1.0)),
            t_psi: atom(3.3, Complex64::new(0.7, 0.1)),
        };
        for &(l, m, t) in &[(2.0, 1.0, 0.7), (3.0, 3.0, 1.1), (1.0, 2.0, -0.4)] {
            let check = a_translation_check(&a, &mk_data(l, m), t, &grids).unwrap();
            let want = Complex64::from_polar(1.0, (l - m) * t);
            assert!(
                (check.ratio - want).norm() <= 1e-6,
                "({l},{m},{t}): ratio {} vs {want}",
                check.ratio
            );
        }
        let zero_t = a_translation_check(&a, &mk_data(2.0, 1.0), 0.0, &grids).unwrap();
        assert!((zero_t.ratio - real(1.0)).norm() <= 1e-12);
    }

    #[test]
    fn intertwining_single_pair() {
        let a = test_symbol(1.0);
        let data = PSData {
            lambda: SpectralParam::real(2.0),
            mu: SpectralParam::real(2.0),
            t_phi: atom(0.0, real(1.0)),
            t_psi: atom(std::f64::consts::PI, real(1.0)),
        };
        let grids = PsGrids {
            t_line: LineQuadrature::uniform(2.0, 1200).unwrap(),
            u_line: LineQuadrature::uniform(3.0, 2400).unwrap(),
            disk: Arc::new(disk_quadrature(1.3, 280, 256).unwrap()),
        };
        let check = intertwine_check(&a, &data, &grids).unwrap();
        assert!(
            check.residual <= 1e-4,
            "residual {} (lhs {}, rhs {})",
            check.residual,
            check.lhs,
            check.rhs
        );

        let zero = SymbolFn::new(1.0, |_, _| real(0.0)).unwrap();
        let zc = intertwine_check(&zero, &data, &grids).unwrap();
        assert_eq!(zc.residual, 0.0);
    }

    #[test]
    fn op_quantize_identity_and_linearity() {
        let grid = Arc::new(disk_quadrature(1.7, 200, 128).unwrap());
        let bump = crate::transforms::bump(1.5);
        let u = SampledFunctionX::sample(grid.clone(), 1.5, &bump).unwrap();
        let lg = LambdaGrid::uniform(24.0, 400).unwrap();
        let bg = circle_quadrature(128).unwrap();

        let one = SymbolFn::constant_one(1.5).unwrap();
        let op1 = op_quantize(&one, &u, &lg, &bg, 5e-3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        for _ in 0..5 {
            let z = DiskPoint::new(Complex64::from_polar(
                rng.gen_range(0.0..0.5),
                rng.gen_range(0.0..std::f64::consts::TAU),
            ))
            .unwrap();
            let want = bump(&z);
            assert!((op1.evaluate(&z) - want).norm() <= 1e-3);
        }

        // Linearity in u.
        let v = SampledFunctionX::sample(grid.clone(), 1.5, |z: &DiskPoint| {
            bump(z) * Complex64::new(z.z().re, 0.4)
        })
        .unwrap();
        let combo = SampledFunctionX::linear_combination(real(2.0), &u, real(-0.5), &v).unwrap();
        let a = test_symbol(1.2);
        let z0 = DiskPoint::from_xy(0.2, 0.1).unwrap();
        let op_u = op_quantize(&a, &u, &lg, &bg, 5e-3).unwrap().evaluate(&z0);
        let op_v = op_quantize(&a, &v, &lg, &bg, 5e-3).unwrap().evaluate(&z0);
        let op_c = op_quantize(&a, &combo, &lg, &bg, 5e-3).unwrap().evaluate(&z0);
        let want = real(2.0) * op_u - real(0.5) * op_v;
        assert!((op_c - want).norm() <= 1e-10 * want.norm().max(1.0));

        // Underresolved spectral grid trips the self-test.
        let coarse = LambdaGrid::uniform(2.0, 8).unwrap();
        assert!(matches!(
            op_quantize(&a, &u, &coarse, &bg, 1e-3),
            Err(Error::InvalidGrid(_))
        ));
    }

    #[test]
    fn plane_wave_symbol_law_is_exact() {
        let a = test_symbol(1.0);
        let lam = SpectralParam::real(1.9);
        let b = BoundaryPoint::new(2.2);
        let op = op_apply_plane_wave(&a, lam, b);
        for &(x, y) in &[(0.0, 0.0), (0.3, -0.2), (0.45, 0.3)] {
            let z = DiskPoint::from_xy(x, y).unwrap();
            let want = a.evaluate(&z, &b)
                * (exponent(lam) * horocycle_bracket(&z, &b)).exp();
            assert_eq!(op(&z), want);
        }
    }

    #[test]
    fn kohn_nirenberg_routes_agree_on_shared_grids() {
        let a = KnSymbol::new(1.0, |z: &DiskPoint, mu: f64, b: &BoundaryPoint| {
            let x = hyperbolic_dist(z, &DiskPoint::origin());
            if x < 1.0 {
                real((-1.0 / (1.0 - x * x)).exp() * (1.0 + 0.2 * b.theta().cos()))
                    * Complex64::new(1.0, 0.05 * mu)
            } else {
                real(0.0)
            }
        })
        .unwrap();
        let grids = KnGrids {
            disk: Arc::new(disk_quadrature(1.2, 40, 32).unwrap()),
            lambda: LambdaGrid::uniform(8.0, 24).unwrap(),
            boundary: circle_quadrature(24).unwrap(),
            node_budget: 10_000_000,
        };
        let z = DiskPoint::from_xy(0.15, 0.1).unwrap();
        let b = BoundaryPoint::new(0.5);
        let direct = kohn_nirenberg_direct(&a, &z, 1.1, &b, &grids).unwrap();
        let conv = kohn_nirenberg_convolution(&a, &z, 1.1, &b, &grids).unwrap();
        assert!(
            (direct - conv).norm() <= 1e-8 * direct.norm().max(1.0),
            "direct {direct} vs convolution {conv}"
        );

        let tiny = KnGrids { node_budget: 10, ..grids };
        assert!(matches!(
            kohn_nirenberg_direct(&a, &z, 1.1, &b, &tiny),
            Err(Error::NodeBudget { .. })
        ));
    }

    #[test]
    fn kn_phase_has_the_expected_critical_point() {
        let grad = kn_phase_gradient(1.0, 0.0, 0.0, 0.0, 1e-5).unwrap();
        for (i, g) in grad.iter().enumerate() {
            assert!(g.abs() <= 1e-7, "component {i}: {g}");
        }
        for &p in &[
            [1.1, 0.0, 0.0, 0.0],
            [1.0, 0.1, 0.0, 0.0],
            [1.0, 0.0, 0.1, 0.0],
            [1.0, 0.0, 0.0, 0.1],
        ] {
            let g = kn_phase_gradient(p[0], p[1], p[2], p[3], 1e-5).unwrap();
            let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(norm > 1e-3, "{p:?}: |grad| {norm}");
        }
    }

    #[test]
    fn normalized_ps_divides_by_the_window_value() {
        let a = test_symbol(1.0);
        let data = PSData {
            lambda: SpectralParam::real(1.3),
            mu: SpectralParam::real(1.3),
            t_phi: atom(0.0, real(1.0)),
            t_psi: atom(std::f64::consts::PI, real(1.0)),
        };
        let grids = default_grids();
        let plain = ps_distribution(&a, &data, &grids).unwrap();
        let reference =
            ps_distribution(&SymbolFn::constant_one(1.5).unwrap(), &data, &grids).unwrap();
        let norm = normalized_ps_distribution(&a, &data, &grids, 1.5).unwrap();
        assert!((norm - plain / reference).norm() <= 1e-12 * norm.norm());
    }
}
