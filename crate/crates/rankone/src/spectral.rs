//! Harish-Chandra c-function, Plancherel density, and e-functions for
//! rank-one root data.
//!
//! The spectral parameter is the scalar lambda with lambda_alpha = lambda,
//! calibrated so that the SL2/disk conventions (rho = 1/2, kernel
//! (1+u^2)^{-(i lambda + 1/2)}) make the product and integral routes to the
//! c-function agree; that agreement is enforced by tests, not assumed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gamma::gamma;
use crate::lie::RootDatum;
use crate::numerics;

/// Radius of the guard disk around Gamma poles.
pub const POLE_GUARD: f64 = 1e-8;

/// Spectral parameter lambda in the rank-one identification of the
/// complexified dual; real for all Plancherel evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralParam(pub Complex64);

impl SpectralParam {
    pub fn real(x: f64) -> Self {
        SpectralParam(Complex64::new(x, 0.0))
    }

    pub fn new(re: f64, im: f64) -> Self {
        SpectralParam(Complex64::new(re, im))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }
}

/// Distance from w to the nearest pole of Gamma (non-positive integers).
fn gamma_pole_distance(w: Complex64) -> f64 {
    let nearest = w.re.round().min(0.0);
    (w - Complex64::new(nearest, 0.0)).norm()
}

fn guarded_gamma_arg(w: Complex64) -> Result<Complex64> {
    let dist = gamma_pole_distance(w);
    if dist < POLE_GUARD {
        Err(Error::PoleProximity { dist })
    } else {
        Ok(w)
    }
}

/// One factor of the Gindikin-Karpelevich product, as a function of w = i lambda_alpha.
fn c_alpha(w: Complex64, roots: &RootDatum) -> Result<Complex64> {
    let m = roots.m_alpha as f64;
    let m2 = roots.m_2alpha as f64;
    let num = gamma(guarded_gamma_arg(w)?);
    let d1 = gamma(w / 2.0 + m / 4.0 + 0.5);
    let d2 = gamma(w / 2.0 + m / 4.0 + m2 / 2.0);
    let two_pow = (-w * std::f64::consts::LN_2).exp();
    Ok(two_pow * num / (d1 * d2))
}

/// Harish-Chandra c-function c(lambda) = c0 c_alpha(lambda), normalised by
/// c(-i rho) = 1.
pub fn c_function(lambda: SpectralParam, roots: &RootDatum) -> Result<Complex64> {
    let w = Complex64::new(0.0, 1.0) * lambda.0;
    let rho = Complex64::new(roots.rho(), 0.0);
    let c0 = c_alpha(rho, roots)?.finv();
    Ok(c0 * c_alpha(w, roots)?)
}

/// Direct integral route (SL2 realisation, m = (1,0)):
/// c(lambda) = (1/pi) int_R (1+u^2)^{-(i lambda + 1/2)} du, computed after
/// the substitution u = sinh v which turns the integrand into
/// (cosh v)^{-2 i lambda} with exponential decay e^{-2 Re(i lambda) |v|}.
pub fn c_function_integral(lambda: SpectralParam) -> Result<Complex64> {
    let w = Complex64::new(0.0, 1.0) * lambda.0;
    let eps = w.re;
    if eps <= 1e-3 {
        return Err(Error::ConvergenceDomain(eps));
    }
    // Truncation for a tail below 1e-14, then composite Simpson.
    let v_max = (34.0 + (1.0 / (2.0 * eps)).ln().max(0.0)) / (2.0 * eps);
    let n = 65536;
    let value = numerics::simpson(
        |v| (-2.0 * w * v.cosh().ln()).exp(),
        -v_max,
        v_max,
        n,
    );
    Ok(value / PI)
}

/// Plancherel density 1/(c(lambda) c(-lambda)) for real lambda, through the
/// closed-form parity cases, with the single overall constant calibrated
/// against the c-function at lambda = 1.
pub fn plancherel_density(lambda: f64, roots: &RootDatum) -> Result<f64> {
    let shape = density_shape(lambda, roots)?;
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let c1 = c_function(SpectralParam::real(1.0), roots)?;
    let c1m = c_function(SpectralParam::real(-1.0), roots)?;
    let calibration = ((c1 * c1m).re * density_shape(1.0, roots)?).recip();
    Ok(calibration * shape)
}

/// The uncalibrated factor lambda_alpha p_alpha(lambda) q_alpha(lambda).
fn density_shape(lambda: f64, roots: &RootDatum) -> Result<f64> {
    let m = roots.m_alpha;
    let m2 = roots.m_2alpha;
    if m2 > 0 && (m % 2 != 0 || m2 % 2 == 0) {
        return Err(Error::BadMultiplicities(m, m2));
    }
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let l = lambda;
    let (p, q) = if m2 == 0 {
        if m % 2 == 0 {
            // Even multiplicity, no double root: polynomial density.
            let mut p = l;
            for k in 1..(m / 2) {
                p *= l * l + (k as f64).powi(2);
            }
            (p, 1.0)
        } else {
            // Odd multiplicity, no double root: half-integer shifts and tanh.
            let mut p = 1.0;
            for k in 0..((m.max(1) - 1) / 2) {
                p *= l * l + (k as f64 + 0.5).powi(2);
            }
            (p, (PI * l).tanh())
        }
    } else {
        let h = l / 2.0;
        if (m / 2) % 2 == 0 {
            let mut p = 1.0;
            for k in 0..(m / 4) {
                p *= h * h + (k as f64 + 0.5).powi(2);
            }
            for lidx in 0..(m / 4 + (m2 - 1) / 2) {
                p *= h * h + (lidx as f64 + 0.5).powi(2);
            }
            (p, (PI * h).tanh())
        } else {
            let mut p = 1.0;
            for k in 0..=((m - 2) / 4) {
                p *= h * h + (k as f64).powi(2);
            }
            for lidx in 1..((m + 2 * m2) / 4) {
                p *= h * h + (lidx as f64).powi(2);
            }
            (p, 1.0 / (PI * h).tanh())
        }
    };
    Ok(l * p * q)
}

/// Harish-Chandra e-function for the longest Weyl element in rank one:
/// Gamma(m/4 + 1/2 + i lambda/2) Gamma(m/4 + m2/2 + i lambda/2).
pub fn e_function(lambda: SpectralParam, roots: &RootDatum) -> Result<Complex64> {
    let half_w = Complex64::new(0.0, 0.5) * lambda.0;
    let m = roots.m_alpha as f64;
    let m2 = roots.m_2alpha as f64;
    let a1 = guarded_gamma_arg(half_w + m / 4.0 + 0.5)?;
    let a2 = guarded_gamma_arg(half_w + m / 4.0 + m2 / 2.0)?;
    Ok(gamma(a1) * gamma(a2))
}

/// Laplace-Beltrami eigenvalue on the plane wave e_{lambda,b}:
/// -(lambda^2 + rho^2) in the rank-one scalar identification.
pub fn laplace_eigenvalue(lambda: SpectralParam, roots: &RootDatum) -> Complex64 {
    let rho = roots.rho();
    -(lambda.0 * lambda.0 + rho * rho)
}
