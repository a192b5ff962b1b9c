//! Matrix groups and their Iwasawa / Cartan decompositions.
//!
//! Supported groups: SL(2,R), SL(3,R), SL(n,R), and the identity component
//! of SO(1,n) (tag `Soh(n)`), all as dense real matrices.
//!
//! Conventions, fixed once here and relied on by every other module:
//! * SL2: `a_t = diag(e^{t/2}, e^{-t/2})` with `t` the unit-speed geodesic
//!   parameter, so the Iwasawa A-part of an SL2 element is the scalar `t`.
//! * SL3 / SLn: the A-part is the vector of diagonal logs (sums to 0).
//! * Soh(n): the A-part is the scalar boost parameter `t` of the cosh/sinh
//!   one-parameter subgroup in the (0, n) plane.
//! * KAN is computed by QR with positive diagonal; NAK comes from KAN of
//!   the inverse, which realises A(g) = -H(g^{-1}) exactly.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for membership checks (determinant, form preservation).
pub const GROUP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Group {
    Sl2,
    Sl3,
    Sln(usize),
    Soh(usize),
}

impl Group {
    /// Matrix dimension of the defining representation.
    pub fn dim(&self) -> usize {
        match *self {
            Group::Sl2 => 2,
            Group::Sl3 => 3,
            Group::Sln(n) => n,
            Group::Soh(n) => n + 1,
        }
    }

    /// Real rank (dimension of the split torus A).
    pub fn rank(&self) -> usize {
        match *self {
            Group::Sl2 => 1,
            Group::Sl3 => 2,
            Group::Sln(n) => n - 1,
            Group::Soh(_) => 1,
        }
    }

    pub fn is_special_linear(&self) -> bool {
        !matches!(self, Group::Soh(_))
    }

    pub fn name(&self) -> String {
        match *self {
            Group::Sl2 => "SL2".into(),
            Group::Sl3 => "SL3".into(),
            Group::Sln(n) => format!("SL{n}"),
            Group::Soh(n) => format!("SO(1,{n})"),
        }
    }

    /// Restricted-root data for the rank-one members. The SL tags with
    /// rank above one return the data of a single restricted root.
    pub fn root_datum(&self) -> RootDatum {
        match *self {
            Group::Sl2 => RootDatum::new(1, 1, 0),
            Group::Sl3 => RootDatum::new(2, 1, 0),
            Group::Sln(n) => RootDatum::new(n - 1, 1, 0),
            Group::Soh(n) => RootDatum::new(1, (n - 1) as u32, 0),
        }
    }
}

impl std::str::FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "sl2" => return Ok(Group::Sl2),
            "sl3" => return Ok(Group::Sl3),
            _ => {}
        }
        if let Some(n) = lower.strip_prefix("sln:").and_then(|v| v.parse::<usize>().ok()) {
            if n >= 2 {
                return Ok(Group::Sln(n));
            }
        }
        if let Some(n) = lower.strip_prefix("soh:").and_then(|v| v.parse::<usize>().ok()) {
            if n >= 2 {
                return Ok(Group::Soh(n));
            }
        }
        Err(Error::UnsupportedGroup(s.to_string()))
    }
}

/// Restricted-root multiplicities of a rank-one symmetric space,
/// plus the half-sum `rho = (m_alpha + 2 m_{2 alpha}) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootDatum {
    pub rank: usize,
    pub m_alpha: u32,
    pub m_2alpha: u32,
}

impl RootDatum {
    pub fn new(rank: usize, m_alpha: u32, m_2alpha: u32) -> Self {
        RootDatum { rank, m_alpha, m_2alpha }
    }

    /// Data of the hyperbolic disk (m_alpha = 1, no double root).
    pub fn disk() -> Self {
        RootDatum::new(1, 1, 0)
    }

    pub fn rho(&self) -> f64 {
        (self.m_alpha as f64 + 2.0 * self.m_2alpha as f64) / 2.0
    }
}

/// An element of one of the supported matrix groups.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    mat: DMatrix<f64>,
    group: Group,
}

fn minkowski_form(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::identity(n + 1, n + 1);
    j[(0, 0)] = -1.0;
    j
}

/// Orthogonal change of basis to light-cone coordinates for SO(1,n):
/// columns are (e0 + en)/sqrt2, e1, ..., e_{n-1}, (e0 - en)/sqrt2.
fn light_cone_basis(n: usize) -> DMatrix<f64> {
    let d = n + 1;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut q = DMatrix::zeros(d, d);
    q[(0, 0)] = s;
    q[(n, 0)] = s;
    for i in 1..n {
        q[(i, i)] = 1.0;
    }
    q[(0, d - 1)] = s;
    q[(n, d - 1)] = -s;
    q
}

impl GroupElement {
    /// Validates membership: unit determinant, and for SO(1,n) preservation
    /// of the Minkowski form, both to `GROUP_TOL` in max norm.
    pub fn new(group: Group, mat: DMatrix<f64>) -> Result<Self> {
        let d = group.dim();
        if mat.nrows() != d || mat.ncols() != d {
            return Err(Error::InvalidGroupElement {
                group: group.name(),
                reason: format!("expected a {d}x{d} matrix, got {}x{}", mat.nrows(), mat.ncols()),
            });
        }
        let det = mat.determinant();
        if (det - 1.0).abs() > GROUP_TOL {
            return Err(Error::InvalidGroupElement {
                group: group.name(),
                reason: format!("determinant {det} differs from 1"),
            });
        }
        if let Group::Soh(n) = group {
            let j = minkowski_form(n);
            let residual = (mat.transpose() * &j * &mat - &j).abs().max();
            if residual > GROUP_TOL {
                return Err(Error::InvalidGroupElement {
                    group: group.name(),
                    reason: format!("Minkowski form violated by {residual:.3e}"),
                });
            }
        }
        Ok(GroupElement { mat, group })
    }

    /// For products and constructors whose membership is structural.
    pub(crate) fn new_unchecked(group: Group, mat: DMatrix<f64>) -> Self {
        GroupElement { mat, group }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn identity(group: Group) -> Self {
        GroupElement::new_unchecked(group, DMatrix::identity(group.dim(), group.dim()))
    }

    pub fn inverse(&self) -> GroupElement {
        let inv = match self.group {
            // g^{-1} = J g^T J avoids a linear solve and is exact on the form.
            Group::Soh(n) => {
                let j = minkowski_form(n);
                &j * self.mat.transpose() * &j
            }
            _ => self
                .mat
                .clone()
                .try_inverse()
                .expect("group elements are invertible"),
        };
        GroupElement::new_unchecked(self.group, inv)
    }

    /// Row-major nested array form, the CLI wire format.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.mat.nrows())
            .map(|i| (0..self.mat.ncols()).map(|j| self.mat[(i, j)]).collect())
            .collect()
    }

    pub fn from_rows(group: Group, rows: &[Vec<f64>]) -> Result<Self> {
        let d = group.dim();
        if rows.len() != d || rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidGroupElement {
                group: group.name(),
                reason: "row-major data has wrong shape".into(),
            });
        }
        let mat = DMatrix::from_fn(d, d, |i, j| rows[i][j]);
        GroupElement::new(group, mat)
    }
}

impl std::ops::Mul for &GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: &GroupElement) -> GroupElement {
        assert_eq!(self.group, rhs.group, "cannot multiply across group tags");
        GroupElement::new_unchecked(self.group, &self.mat * &rhs.mat)
    }
}

// ---------------------------------------------------------------------------
// Constructors for the standard one-parameter subgroups.
// ---------------------------------------------------------------------------

/// SL2 rotation [[cos a, -sin a], [sin a, cos a]].
pub fn sl2_rotation(alpha: f64) -> GroupElement {
    let (s, c) = alpha.sin_cos();
    GroupElement::new_unchecked(Group::Sl2, DMatrix::from_row_slice(2, 2, &[c, -s, s, c]))
}

/// SL2 geodesic flow a_t = diag(e^{t/2}, e^{-t/2}).
pub fn sl2_a(t: f64) -> GroupElement {
    GroupElement::new_unchecked(
        Group::Sl2,
        DMatrix::from_row_slice(2, 2, &[(0.5 * t).exp(), 0.0, 0.0, (-0.5 * t).exp()]),
    )
}

/// SL2 horocyclic element n_u = [[1, u], [0, 1]].
pub fn sl2_n(u: f64) -> GroupElement {
    GroupElement::new_unchecked(Group::Sl2, DMatrix::from_row_slice(2, 2, &[1.0, u, 0.0, 1.0]))
}

/// Upper unitriangular element of SL3 with parameters (d, e, f).
pub fn sl3_n(d: f64, e: f64, f: f64) -> GroupElement {
    GroupElement::new_unchecked(
        Group::Sl3,
        DMatrix::from_row_slice(3, 3, &[1.0, d, e, 0.0, 1.0, f, 0.0, 0.0, 1.0]),
    )
}

/// Boost a_t of SO(1,n): cosh/sinh in the (0, n) coordinate plane.
pub fn soh_a(n: usize, t: f64) -> GroupElement {
    let d = n + 1;
    let mut m = DMatrix::identity(d, d);
    m[(0, 0)] = t.cosh();
    m[(0, n)] = t.sinh();
    m[(n, 0)] = t.sinh();
    m[(n, n)] = t.cosh();
    GroupElement::new_unchecked(Group::Soh(n), m)
}

/// Horospherical element n(z) of SO(1,n), z in R^{n-1}. Built as a unit
/// upper-triangular matrix in the light-cone basis and conjugated back.
///
/// Parameters are scaled so that H(n(z) w) = ln(1 + |z|^2), which makes
/// Soh(2) match the SL2 horocyclic parameter under SO(1,2) ~ PSL2.
pub fn soh_n(n: usize, z: &[f64]) -> Result<GroupElement> {
    if z.len() != n - 1 {
        return Err(Error::InvalidGroupElement {
            group: Group::Soh(n).name(),
            reason: format!("expected {} horospherical parameters, got {}", n - 1, z.len()),
        });
    }
    let d = n + 1;
    let mut lc = DMatrix::identity(d, d);
    let norm2 = z.iter().map(|v| v * v).sum::<f64>();
    for (i, &zi) in z.iter().enumerate() {
        lc[(0, 1 + i)] = std::f64::consts::SQRT_2 * zi;
        lc[(1 + i, d - 1)] = std::f64::consts::SQRT_2 * zi;
    }
    lc[(0, d - 1)] = norm2;
    let q = light_cone_basis(n);
    Ok(GroupElement::new_unchecked(Group::Soh(n), &q * lc * q.transpose()))
}

/// Embeds k in SO(n) as the stabiliser block diag(1, k) of SO(1,n).
pub fn soh_k(n: usize, k: &DMatrix<f64>) -> Result<GroupElement> {
    if k.nrows() != n || k.ncols() != n {
        return Err(Error::InvalidGroupElement {
            group: Group::Soh(n).name(),
            reason: "stabiliser block has wrong size".into(),
        });
    }
    let mut m = DMatrix::identity(n + 1, n + 1);
    for i in 0..n {
        for j in 0..n {
            m[(1 + i, 1 + j)] = k[(i, j)];
        }
    }
    GroupElement::new(Group::Soh(n), m)
}

/// Longest Weyl element. For the SL family this is the antidiagonal matrix
/// with entries (-1)^{k-1}; for SO(1,n) the reflection diag(1,-1,1,..,1,-1).
pub fn weyl_longest(group: Group) -> GroupElement {
    let d = group.dim();
    let mat = match group {
        Group::Soh(n) => {
            let mut m = DMatrix::identity(d, d);
            m[(1, 1)] = -1.0;
            m[(n, n)] = -1.0;
            m
        }
        _ => {
            let mut m = DMatrix::zeros(d, d);
            for k in 0..d {
                m[(k, d - 1 - k)] = if k % 2 == 0 { 1.0 } else { -1.0 };
            }
            m
        }
    };
    GroupElement::new_unchecked(group, mat)
}

// ---------------------------------------------------------------------------
// Decompositions.
// ---------------------------------------------------------------------------

/// QR with the diagonal of R made positive (unique for invertible input).
fn qr_positive(m: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let qr = m.clone().qr();
    let mut q = qr.q();
    let mut r = qr.r();
    let d = r.nrows();
    for i in 0..d {
        if r[(i, i)] < 0.0 {
            for j in 0..d {
                r[(i, j)] = -r[(i, j)];
                q[(j, i)] = -q[(j, i)];
            }
        }
    }
    (q, r)
}

/// Iwasawa decomposition g = k a n.
#[derive(Debug, Clone)]
pub struct IwasawaKAN {
    pub k: DMatrix<f64>,
    /// Scalar geodesic parameter `[t]` for SL2 and Soh(n); diagonal logs
    /// (summing to zero) for SL3 / SLn.
    pub a_log: Vec<f64>,
    pub n: DMatrix<f64>,
    group: Group,
}

impl IwasawaKAN {
    pub fn a_matrix(&self) -> DMatrix<f64> {
        a_from_log(self.group, &self.a_log)
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        &self.k * self.a_matrix() * &self.n
    }
}

/// Iwasawa decomposition g = n a k.
#[derive(Debug, Clone)]
pub struct IwasawaNAK {
    pub n: DMatrix<f64>,
    pub a_log: Vec<f64>,
    pub k: DMatrix<f64>,
    group: Group,
}

impl IwasawaNAK {
    pub fn a_matrix(&self) -> DMatrix<f64> {
        a_from_log(self.group, &self.a_log)
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        &self.n * self.a_matrix() * &self.k
    }
}

/// Cartan decomposition g = k1 exp(aLog) k2, aLog sorted non-increasing.
#[derive(Debug, Clone)]
pub struct CartanKAK {
    pub k1: DMatrix<f64>,
    pub a_log: Vec<f64>,
    pub k2: DMatrix<f64>,
}

impl CartanKAK {
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let d = self.a_log.len();
        let a = DMatrix::from_fn(d, d, |i, j| if i == j { self.a_log[i].exp() } else { 0.0 });
        &self.k1 * a * &self.k2
    }
}

fn a_from_log(group: Group, a_log: &[f64]) -> DMatrix<f64> {
    match group {
        Group::Sl2 => sl2_a(a_log[0]).mat,
        Group::Soh(n) => soh_a(n, a_log[0]).mat,
        _ => {
            let d = a_log.len();
            DMatrix::from_fn(d, d, |i, j| if i == j { a_log[i].exp() } else { 0.0 })
        }
    }
}

pub fn iwasawa_kan(g: &GroupElement) -> Result<IwasawaKAN> {
    match g.group {
        Group::Soh(n) => {
            let q = light_cone_basis(n);
            let g_lc = q.transpose() * &g.mat * &q;
            let (k_lc, r) = qr_positive(&g_lc);
            let d = n + 1;
            // In light-cone coordinates A is diag(e^t, 1, .., 1, e^{-t}) and
            // N is unit upper triangular, so R must carry that shape.
            let mut structure = (r[(0, 0)] * r[(d - 1, d - 1)] - 1.0).abs();
            for i in 1..d - 1 {
                structure = structure.max((r[(i, i)] - 1.0).abs());
            }
            if structure > 1e-8 {
                return Err(Error::InvalidGroupElement {
                    group: g.group.name(),
                    reason: format!("light-cone triangular structure violated by {structure:.3e}"),
                });
            }
            let t = r[(0, 0)].ln();
            let mut n_lc = r.clone();
            for j in 0..d {
                n_lc[(0, j)] /= r[(0, 0)];
                n_lc[(d - 1, j)] /= r[(d - 1, d - 1)];
            }
            for i in 0..d {
                n_lc[(i, i)] = if i == 0 || i == d - 1 { 1.0 } else { n_lc[(i, i)] };
            }
            Ok(IwasawaKAN {
                k: &q * k_lc * q.transpose(),
                a_log: vec![t],
                n: &q * n_lc * q.transpose(),
                group: g.group,
            })
        }
        _ => {
            let (k, r) = qr_positive(&g.mat);
            let d = r.nrows();
            let diag: Vec<f64> = (0..d).map(|i| r[(i, i)]).collect();
            let mut n = r.clone();
            for i in 0..d {
                for j in 0..d {
                    n[(i, j)] /= diag[i];
                }
            }
            let a_log = match g.group {
                Group::Sl2 => vec![2.0 * diag[0].ln()],
                _ => diag.iter().map(|x| x.ln()).collect(),
            };
            Ok(IwasawaKAN { k, a_log, n, group: g.group })
        }
    }
}

/// Iwasawa projection H(g) = aLog of the KAN decomposition.
pub fn iwasawa_h(g: &GroupElement) -> Result<Vec<f64>> {
    Ok(iwasawa_kan(g)?.a_log)
}

/// Scalar Iwasawa projection for the rank-one tags (SL2, Soh).
pub fn iwasawa_t(g: &GroupElement) -> Result<f64> {
    match g.group {
        Group::Sl2 | Group::Soh(_) => Ok(iwasawa_kan(g)?.a_log[0]),
        other => Err(Error::UnsupportedGroup(other.name())),
    }
}

/// NAK decomposition with A(g) = -H(g^{-1}) built in.
pub fn iwasawa_nak(g: &GroupElement) -> Result<IwasawaNAK> {
    let kan = iwasawa_kan(&g.inverse())?;
    let n = kan
        .n
        .clone()
        .try_inverse()
        .expect("unipotent matrices are invertible");
    Ok(IwasawaNAK {
        n,
        a_log: kan.a_log.iter().map(|x| -x).collect(),
        k: kan.k.transpose(),
        group: g.group,
    })
}

/// Cartan decomposition via SVD, for the special linear tags only.
pub fn cartan_kak(g: &GroupElement) -> Result<CartanKAK> {
    if !g.group.is_special_linear() {
        return Err(Error::UnsupportedGroup(g.group.name()));
    }
    let svd = g.mat.clone().svd(true, true);
    let mut u = svd.u.expect("svd with u requested");
    let mut vt = svd.v_t.expect("svd with v_t requested");
    let mut sv: Vec<(f64, usize)> = svd
        .singular_values
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, i))
        .collect();
    sv.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    let d = g.mat.nrows();
    let mut u_sorted = DMatrix::zeros(d, d);
    let mut vt_sorted = DMatrix::zeros(d, d);
    for (col, &(_, src)) in sv.iter().enumerate() {
        for row in 0..d {
            u_sorted[(row, col)] = u[(row, src)];
            vt_sorted[(col, row)] = vt[(src, row)];
        }
    }
    u = u_sorted;
    vt = vt_sorted;
    // det u = det v^T in {-1, +1}; flip the last column/row pair if needed
    // (the smallest singular direction, keeping the sorted order intact).
    if u.determinant() < 0.0 {
        for row in 0..d {
            u[(row, d - 1)] = -u[(row, d - 1)];
            vt[(d - 1, row)] = -vt[(d - 1, row)];
        }
    }
    Ok(CartanKAK {
        k1: u,
        a_log: sv.iter().map(|(s, _)| s.ln()).collect(),
        k2: vt,
    })
}

/// Hyperbolic-space Iwasawa projection of SO(1,n) in closed form:
/// H(g) = ln(g_{00} + g_{0n}), validated elsewhere against the QR route.
pub fn hyperbolic_h(g: &GroupElement) -> Result<f64> {
    match g.group {
        Group::Soh(n) => Ok((g.mat[(0, 0)] + g.mat[(0, n)]).abs().ln()),
        other => Err(Error::UnsupportedGroup(other.name())),
    }
}

/// Result of probing H(nw) against H(n^{-1}w).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HnwSymmetry {
    pub s: f64,
    pub s_prime: f64,
    pub residual: f64,
}

/// Compares the first Iwasawa coordinate of n w and n^{-1} w, where n is the
/// unipotent element with the given parameters and w the longest Weyl element.
/// Rank-one tags give residual 0; SL3 does not (the genuine counterexample).
pub fn check_hnw_symmetry(group: Group, n_params: &[f64]) -> Result<HnwSymmetry> {
    let n = match group {
        Group::Sl2 => {
            if n_params.len() != 1 {
                return Err(Error::InvalidGroupElement {
                    group: group.name(),
                    reason: "SL2 takes one horocyclic parameter".into(),
                });
            }
            sl2_n(n_params[0])
        }
        Group::Sl3 => {
            if n_params.len() != 3 {
                return Err(Error::InvalidGroupElement {
                    group: group.name(),
                    reason: "SL3 takes parameters (d, e, f)".into(),
                });
            }
            sl3_n(n_params[0], n_params[1], n_params[2])
        }
        Group::Soh(n) => soh_n(n, n_params)?,
        other => return Err(Error::UnsupportedGroup(other.name())),
    };
    let w = weyl_longest(group);
    let s = iwasawa_h(&(&n * &w))?[0];
    let s_prime = iwasawa_h(&(&n.inverse() * &w))?[0];
    Ok(HnwSymmetry { s, s_prime, residual: (s - s_prime).abs() })
}

// ---------------------------------------------------------------------------
// Seeded random elements for round-trip suites.
// ---------------------------------------------------------------------------

/// Random SO(n) via QR projection of a Gaussian matrix.
fn random_son<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    loop {
        let m = DMatrix::from_fn(n, n, |_, _| gaussian(rng));
        if m.determinant().abs() < 1e-3 {
            continue;
        }
        let (mut q, _) = qr_positive(&m);
        if q.determinant() < 0.0 {
            for row in 0..n {
                q[(row, n - 1)] = -q[(row, n - 1)];
            }
        }
        return q;
    }
}

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller; two uniforms per draw keeps the stream layout simple.
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Seeded random group element. SL tags: determinant-normalised Gaussian
/// with rejection of ill-conditioned samples; Soh: random K a_t K product.
pub fn random_element<R: Rng>(group: Group, rng: &mut R) -> GroupElement {
    match group {
        Group::Soh(n) => {
            let k1 = soh_k(n, &random_son(n, rng)).expect("block is SO(n)");
            let k2 = soh_k(n, &random_son(n, rng)).expect("block is SO(n)");
            let t = 1.5 * gaussian(rng);
            &(&k1 * &soh_a(n, t)) * &k2
        }
        _ => {
            let d = group.dim();
            loop {
                let mut m = DMatrix::from_fn(d, d, |_, _| gaussian(rng));
                let det = m.determinant();
                if det.abs() < 0.05 {
                    continue;
                }
                if det < 0.0 {
                    for j in 0..d {
                        m[(0, j)] = -m[(0, j)];
                    }
                }
                let scale = det.abs().powf(-1.0 / d as f64);
                m *= scale;
                let sv = m.clone().svd(false, false).singular_values;
                let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
                for &s in sv.iter() {
                    lo = lo.min(s);
                    hi = hi.max(s);
                }
                if hi / lo > 1e3 {
                    continue;
                }
                return GroupElement::new_unchecked(group, m);
            }
        }
    }
}

/// Max-norm distance between two matrices, the reconstruction metric.
pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).abs().max()
}
