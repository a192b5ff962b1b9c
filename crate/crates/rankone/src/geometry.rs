//! The hyperbolic disk and its boundary circle.
//!
//! The internal group is SL(2,R) acting on the upper half plane; the
//! user-facing model is the unit disk through a fixed Cayley conjugation.
//! The metric has curvature -1 (hyperbolic area 4 dx dy / (1-|z|^2)^2),
//! so rho = 1/2 and the boundary circle carries the probability measure
//! db = d(theta)/2pi.
//!
//! Horocycle brackets and the Poisson kernel are given in closed form, but
//! the oracle tests in this module derive both from the matrix route
//! -H(g^{-1}k) before the closed forms are trusted anywhere else.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::lie::{self, GroupElement};

/// Half-sum of restricted roots in the disk normalisation.
pub const RHO: f64 = 0.5;

/// Points must stay this far inside the open disk.
pub const DISK_EDGE_TOL: f64 = 1e-12;

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskPoint {
    z: Complex64,
}

impl DiskPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if z.norm() < 1.0 - DISK_EDGE_TOL {
            Ok(DiskPoint { z })
        } else {
            Err(Error::OutsideDisk(z.norm()))
        }
    }

    pub fn from_xy(x: f64, y: f64) -> Result<Self> {
        DiskPoint::new(Complex64::new(x, y))
    }

    pub fn origin() -> Self {
        DiskPoint { z: Complex64::new(0.0, 0.0) }
    }

    /// Used by actions whose image is in the disk by construction.
    pub(crate) fn new_unchecked(z: Complex64) -> Self {
        DiskPoint { z }
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }
}

/// A point of the boundary circle, stored as an angle in [0, 2pi).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    theta: f64,
}

impl BoundaryPoint {
    pub fn new(theta: f64) -> Self {
        let mut t = theta.rem_euclid(TAU);
        if t >= TAU {
            t = 0.0;
        }
        BoundaryPoint { theta: t }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn unit(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta)
    }

    /// The base point b_infinity = 1, the image of the A-direction.
    pub fn base() -> Self {
        BoundaryPoint { theta: 0.0 }
    }
}

/// A point of the unit tangent bundle X x B: a disk point plus the
/// forward endpoint of the geodesic through it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentPoint {
    pub z: DiskPoint,
    pub b: BoundaryPoint,
}

// ---------------------------------------------------------------------------
// Cayley transform and Moebius actions.
// ---------------------------------------------------------------------------

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Half plane to disk: zeta -> (zeta - i)/(zeta + i).
pub fn cayley(zeta: Complex64) -> Complex64 {
    (zeta - I) / (zeta + I)
}

/// Disk to half plane: z -> i (1 + z)/(1 - z).
pub fn cayley_inv(z: Complex64) -> Complex64 {
    I * (1.0 + z) / (1.0 - z)
}

/// SU(1,1) coefficients (alpha, beta) of a real SL2 matrix conjugated to
/// the disk: z -> (alpha z + beta)/(conj(beta) z + conj(alpha)).
fn su11_coefficients(g: &GroupElement) -> (Complex64, Complex64) {
    let m = g.matrix();
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let alpha = Complex64::new((a + d) / 2.0, (b - c) / 2.0);
    let beta = Complex64::new((a - d) / 2.0, -(b + c) / 2.0);
    (alpha, beta)
}

/// Action of g in SL2 on the open disk.
pub fn disk_action(g: &GroupElement, z: &DiskPoint) -> DiskPoint {
    let (alpha, beta) = su11_coefficients(g);
    let w = (alpha * z.z + beta) / (beta.conj() * z.z + alpha.conj());
    DiskPoint::new_unchecked(w)
}

/// Boundary image together with the Jacobian of the boundary action,
/// jacobian = e^{-2 rho <g.o, g.b>}.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BoundaryAction {
    pub gb: BoundaryPoint,
    pub jacobian: f64,
}

pub fn boundary_action(g: &GroupElement, b: &BoundaryPoint) -> BoundaryAction {
    let (alpha, beta) = su11_coefficients(g);
    let w = (alpha * b.unit() + beta) / (beta.conj() * b.unit() + alpha.conj());
    let gb = BoundaryPoint::new(w.arg());
    let go = disk_action(g, &DiskPoint::origin());
    let jacobian = (-2.0 * RHO * horocycle_bracket(&go, &gb)).exp();
    BoundaryAction { gb, jacobian }
}

// ---------------------------------------------------------------------------
// Brackets and distances.
// ---------------------------------------------------------------------------

/// Horocycle bracket <z, b> = log((1 - |z|^2)/|z - b|^2).
///
/// Equals the Iwasawa quantity -H(g^{-1} k_b) whenever g.o = z; the
/// `bracket_matrix_route` oracle below computes exactly that.
pub fn horocycle_bracket(z: &DiskPoint, b: &BoundaryPoint) -> f64 {
    ((1.0 - z.z.norm_sqr()) / (z.z - b.unit()).norm_sqr()).ln()
}

/// Matrix-route bracket -H(g^{-1} k_b) for any g with g.o = z.
pub fn bracket_matrix_route(g: &GroupElement, b: &BoundaryPoint) -> Result<f64> {
    let gk = &g.inverse() * &boundary_to_k(b);
    Ok(-lie::iwasawa_t(&gk)?)
}

/// The rotation k with k . b_infinity = b on the boundary.
pub fn boundary_to_k(b: &BoundaryPoint) -> GroupElement {
    lie::sl2_rotation(-b.theta / 2.0)
}

/// Hyperbolic distance in the curvature -1 metric.
pub fn hyperbolic_dist(z: &DiskPoint, w: &DiskPoint) -> f64 {
    let q = ((z.z - w.z) / (Complex64::new(1.0, 0.0) - w.z.conj() * z.z)).norm();
    2.0 * q.atanh()
}

/// Hyperbolic area of the disk of radius r, 4 pi sinh^2(r/2).
pub fn hyperbolic_area(radius: f64) -> f64 {
    4.0 * PI * (radius / 2.0).sinh().powi(2)
}

/// AN coordinates of a disk point: z = a_s n_u . o.
pub fn an_coordinates(z: &DiskPoint) -> (f64, f64) {
    let zeta = cayley_inv(z.z);
    (zeta.im.ln(), zeta.re / zeta.im)
}

/// A canonical transvection with g . o = z (the AN representative).
pub fn point_to_group(z: &DiskPoint) -> GroupElement {
    let (s, u) = an_coordinates(z);
    &lie::sl2_a(s) * &lie::sl2_n(u)
}

/// The K A N frame of a tangent point: g = k_b a_s n_u satisfies
/// g.(o, b_infinity) = (z, b).
pub fn frame_tangent(p: &TangentPoint) -> GroupElement {
    let k = boundary_to_k(&p.b);
    let pulled = disk_action(&k.inverse(), &p.z);
    &k * &point_to_group(&pulled)
}

// ---------------------------------------------------------------------------
// Geodesics.
// ---------------------------------------------------------------------------

/// Half-angle data of the geodesic from b2 to b: the separation delta in
/// (0, pi) and the midpoint angle m, so b = e^{i(m+delta)}, b2 = e^{i(m-delta)}.
pub fn geodesic_half_data(b: &BoundaryPoint, b2: &BoundaryPoint) -> Result<(f64, f64)> {
    let chord = (b.unit() - b2.unit()).norm();
    if chord < 1e-8 {
        return Err(Error::CoincidentBoundary(chord));
    }
    let delta = 0.5 * (b.theta - b2.theta).rem_euclid(TAU);
    Ok((delta, b.theta - delta))
}

/// Foot of the perpendicular from the origin onto the geodesic (b2 -> b).
pub fn geodesic_foot(b: &BoundaryPoint, b2: &BoundaryPoint) -> Result<DiskPoint> {
    let (delta, m) = geodesic_half_data(b, b2)?;
    let r = (PI / 4.0 - delta / 2.0).tan();
    Ok(DiskPoint::new_unchecked(r * Complex64::from_polar(1.0, m)))
}

/// Hyperbolic distance from the origin to the geodesic (b2 -> b).
pub fn geodesic_origin_distance(b: &BoundaryPoint, b2: &BoundaryPoint) -> Result<f64> {
    let (delta, _) = geodesic_half_data(b, b2)?;
    Ok(2.0 * (PI / 4.0 - delta / 2.0).tan().abs().atanh())
}

/// Frame of the geodesic with endpoints (b, b2): returns g with
/// g.1 = b, g.(-1) = b2, and g.o the foot of the perpendicular from o.
/// The sign ambiguity of SL2 is fixed by making the first entry of
/// largest scan order positive, so outputs are reproducible.
pub fn geodesic_frame(b: &BoundaryPoint, b2: &BoundaryPoint) -> Result<GroupElement> {
    let (delta, m) = geodesic_half_data(b, b2)?;
    // Half-plane frame mapping (infinity, 0, i) to (-R, R, iR), R = cot(delta/2):
    // the geodesic with disk endpoints e^{+-i delta} pulled back by Cayley.
    let r = 1.0 / (delta / 2.0).tan();
    let s = 1.0 / (2.0 * r).sqrt();
    let tilt = GroupElement::new(
        lie::Group::Sl2,
        nalgebra::DMatrix::from_row_slice(2, 2, &[-r * s, -r * s, s, -s]),
    )?;
    let g = &lie::sl2_rotation(-m / 2.0) * &tilt;
    // Canonical sign: first row-major entry above threshold made positive.
    let mat = g.matrix();
    let entries = [mat[(0, 0)], mat[(0, 1)], mat[(1, 0)], mat[(1, 1)]];
    let lead = entries.iter().find(|e| e.abs() > 1e-9).copied().unwrap_or(1.0);
    if lead < 0.0 {
        Ok(GroupElement::new(lie::Group::Sl2, -mat)?)
    } else {
        Ok(g)
    }
}

/// Geodesic flow for time t: (z, b) moves distance |t| along the geodesic
/// towards b for t > 0; the forward endpoint is unchanged.
pub fn geodesic_flow(p: &TangentPoint, t: f64) -> TangentPoint {
    let g = frame_tangent(p);
    let moved = disk_action(&(&g * &lie::sl2_a(t)), &DiskPoint::origin());
    TangentPoint { z: moved, b: p.b }
}

// ---------------------------------------------------------------------------
// Quadrature grids.
// ---------------------------------------------------------------------------

/// Quadrature for the hyperbolic measure on a truncated disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiskQuadrature {
    pub nodes: Vec<DiskPoint>,
    pub weights: Vec<f64>,
    pub max_radius: f64,
}

impl DiskQuadrature {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Quadrature for the normalised boundary measure db (total mass one).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CircleQuadrature {
    pub nodes: Vec<BoundaryPoint>,
    pub weights: Vec<f64>,
}

impl CircleQuadrature {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Polar grid in geodesic coordinates: radial nodes r = tanh(s/2) at the
/// midpoints of a uniform s-grid, uniform angles. Each node carries the
/// exact hyperbolic mass of its cell, so the weights sum to the area of
/// the truncated disk up to rounding only.
pub fn disk_quadrature(max_radius: f64, n_radial: usize, n_angular: usize) -> Result<DiskQuadrature> {
    if n_radial < 4 || n_angular < 4 {
        return Err(Error::InvalidGrid("disk grid sizes must be at least 4".into()));
    }
    if !(max_radius.is_finite() && max_radius > 0.0) {
        return Err(Error::InvalidGrid(format!("invalid truncation radius {max_radius}")));
    }
    let hs = max_radius / n_radial as f64;
    let dtheta = TAU / n_angular as f64;
    let mut nodes = Vec::with_capacity(n_radial * n_angular);
    let mut weights = Vec::with_capacity(n_radial * n_angular);
    for i in 0..n_radial {
        let s0 = i as f64 * hs;
        let s1 = s0 + hs;
        let ring_mass = s1.cosh() - s0.cosh();
        // Node at the cell midpoint in s; r = tanh(s/2).
        let r = ((s0 + s1) / 4.0).tanh();
        for j in 0..n_angular {
            let theta = dtheta * j as f64;
            nodes.push(DiskPoint::new_unchecked(Complex64::from_polar(r, theta)));
            weights.push(ring_mass * dtheta);
        }
    }
    Ok(DiskQuadrature { nodes, weights, max_radius })
}

/// Uniform circle grid with weights 1/m (the normalised measure db).
pub fn circle_quadrature(m: usize) -> Result<CircleQuadrature> {
    if m < 4 {
        return Err(Error::InvalidGrid("circle grid needs at least 4 nodes".into()));
    }
    let nodes = (0..m).map(|j| BoundaryPoint::new(TAU * j as f64 / m as f64)).collect();
    let weights = vec![1.0 / m as f64; m];
    Ok(CircleQuadrature { nodes, weights })
}

// ---------------------------------------------------------------------------
// Finite-difference Laplacian.
// ---------------------------------------------------------------------------

/// Second-order central-difference hyperbolic Laplacian
/// ((1-|z|^2)^2/4)(f_xx + f_yy) at z with step h <= 1e-2.
pub fn hyperbolic_laplacian_fd<F>(f: F, z: &DiskPoint, h: f64) -> Result<Complex64>
where
    F: Fn(&DiskPoint) -> Complex64,
{
    if !(h > 0.0 && h <= 1e-2) {
        return Err(Error::StepTooLarge(h));
    }
    if z.z.norm() + h >= 1.0 - DISK_EDGE_TOL {
        return Err(Error::OutsideDisk(z.z.norm() + h));
    }
    let ex = Complex64::new(h, 0.0);
    let ey = Complex64::new(0.0, h);
    let fc = f(z);
    let sum = (f(&DiskPoint::new_unchecked(z.z + ex)) + f(&DiskPoint::new_unchecked(z.z - ex)))
        + (f(&DiskPoint::new_unchecked(z.z + ey)) + f(&DiskPoint::new_unchecked(z.z - ey)));
    let euclidean = (sum - 4.0 * fc) / (h * h);
    let conformal = (1.0 - z.z.norm_sqr()).powi(2) / 4.0;
    Ok(conformal * euclidean)
}
