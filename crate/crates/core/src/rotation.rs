//! Rotation groups `<sigma_1, ..., sigma_t> <= SO_3(R)` acting on functions on
//! the sphere, and the spectrum of the averaging operator
//! `T f(x) = sum_j f(sigma_j x) + f(sigma_j^{-1} x)` on each space of
//! spherical harmonics of degree `l`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::IntMatrix;
use crate::group::GenSet;
use crate::spectral::jacobi_eigen;

pub type Rot3 = [[f64; 3]; 3];

const ROTATION_TOL: f64 = 1e-12;
const BLOCK_TOL: f64 = 1e-9;

fn mat_mul(a: &Rot3, b: &Rot3) -> Rot3 {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

fn transpose(a: &Rot3) -> Rot3 {
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = a[j][i];
        }
    }
    t
}

fn det3(a: &Rot3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// Checks `|R^T R - I|_max` and `|det R - 1|` against `tol`.
pub fn check_rotation(r: &Rot3, tol: f64) -> Result<()> {
    let rtr = mat_mul(&transpose(r), r);
    let mut dev = 0.0f64;
    for (i, row) in rtr.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            dev = dev.max((x - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    if dev > tol {
        return Err(Error::NotARotation(format!("|R^T R - I| = {dev:e}")));
    }
    let d = det3(r);
    if (d - 1.0).abs() > tol {
        return Err(Error::NotARotation(format!("det = {d}")));
    }
    Ok(())
}

/// Generators `sigma_1..sigma_t`; their inverses are implicit.
#[derive(Clone, Debug, Serialize)]
pub struct RotationGenSet {
    pub gens: Vec<Rot3>,
}

impl RotationGenSet {
    pub fn new(gens: Vec<Rot3>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::invalid("no generators"));
        }
        for g in &gens {
            check_rotation(g, ROTATION_TOL)?;
        }
        Ok(RotationGenSet { gens })
    }

    pub fn t(&self) -> usize {
        self.gens.len()
    }
}

/// `(cos 2 pi / m, sin 2 pi / m)`, exact when both are integers.
fn cos_sin(m: u32) -> (f64, f64) {
    match m {
        1 => (1.0, 0.0),
        2 => (-1.0, 0.0),
        4 => (0.0, 1.0),
        _ => {
            let a = 2.0 * PI / m as f64;
            (a.cos(), a.sin())
        }
    }
}

/// Rotation of order `m` about the third axis and of order `n` about the
/// first.
pub fn gamma_generators(m: u32, n: u32) -> Result<RotationGenSet> {
    if m < 3 || n < 3 {
        return Err(Error::invalid(format!("orders must be at least 3, got ({m}, {n})")));
    }
    let (c, s) = cos_sin(m);
    let sigma = [[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]];
    let (c, s) = cos_sin(n);
    let tau = [[1.0, 0.0, 0.0], [0.0, c, s], [0.0, -s, c]];
    RotationGenSet::new(vec![sigma, tau])
}

/// The same generators as integer matrices, when every entry is an integer.
pub fn gamma_generators_exact(m: u32, n: u32) -> Result<Option<GenSet>> {
    let gens = gamma_generators(m, n)?;
    let mut ints = Vec::new();
    for (g, label) in gens.gens.iter().zip(["sigma", "tau"]) {
        let rows: Option<Vec<[i64; 3]>> = g
            .iter()
            .map(|row| {
                let mut out = [0i64; 3];
                for (o, &x) in out.iter_mut().zip(row) {
                    if x.fract() != 0.0 {
                        return None;
                    }
                    *o = x as i64;
                }
                Some(out)
            })
            .collect();
        match rows {
            Some(rows) => ints.push((label, IntMatrix::from_rows(&rows)?)),
            None => return Ok(None),
        }
    }
    GenSet::new(ints).map(Some)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Orthonormal real spherical harmonics of degree `l` at a unit vector,
/// ordered `m = -l..=l` (sine terms, zonal term, cosine terms).
fn real_harmonics(l: usize, p: [f64; 3]) -> Vec<f64> {
    let z = p[2].clamp(-1.0, 1.0);
    let s = (1.0 - z * z).max(0.0).sqrt();
    let phi = p[1].atan2(p[0]);
    // Normalized associated Legendre values p_l^m(z) for m = 0..=l.
    let mut plm = vec![0.0; l + 1];
    let mut pmm = (1.0 / (4.0 * PI)).sqrt();
    for m in 0..=l {
        if m > 0 {
            pmm *= ((2 * m + 1) as f64 / (2 * m) as f64).sqrt() * s;
        }
        if m == l {
            plm[m] = pmm;
            break;
        }
        let mut prev = pmm;
        let mut cur = ((2 * m + 3) as f64).sqrt() * z * pmm;
        for ll in m + 2..=l {
            let (lf, mf) = (ll as f64, m as f64);
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
            let next = a * (z * cur - b * prev);
            prev = cur;
            cur = next;
        }
        plm[m] = cur;
    }
    let mut out = vec![0.0; 2 * l + 1];
    out[l] = plm[0];
    for m in 1..=l {
        let scale = std::f64::consts::SQRT_2 * plm[m];
        out[l + m] = scale * (m as f64 * phi).cos();
        out[l - m] = scale * (m as f64 * phi).sin();
    }
    out
}

/// Quadrature points and weights on the sphere, exact for polynomials of
/// degree at most `2 l + 2`.
fn sphere_rule(l: usize) -> Vec<([f64; 3], f64)> {
    let (nodes, weights) = gauss_legendre(l + 2);
    let m = 2 * l + 3;
    let mut out = Vec::with_capacity(nodes.len() * m);
    for (&z, &w) in nodes.iter().zip(&weights) {
        let s = (1.0 - z * z).sqrt();
        for k in 0..m {
            let phi = 2.0 * PI * k as f64 / m as f64;
            out.push(([s * phi.cos(), s * phi.sin(), z], w * 2.0 * PI / m as f64));
        }
    }
    out
}

/// Matrix of `(rho(R) p)(x) = p(R^{-1} x)` on degree-`l` harmonics in the
/// orthonormal real basis, row-major `(2l+1) x (2l+1)`.
pub fn harmonic_block(r: &Rot3, l: usize) -> Result<Vec<f64>> {
    check_rotation(r, 1e-10)?;
    if l == 0 {
        return Ok(vec![1.0]);
    }
    let d = 2 * l + 1;
    let rinv = transpose(r);
    let mut rho = vec![0.0; d * d];
    for (x, w) in sphere_rule(l) {
        let y = real_harmonics(l, x);
        let rx = [0, 1, 2].map(|i| (0..3).map(|k| rinv[i][k] * x[k]).sum::<f64>());
        let yr = real_harmonics(l, rx);
        for i in 0..d {
            for j in 0..d {
                rho[i * d + j] += w * y[i] * yr[j];
            }
        }
    }
    Ok(rho)
}

fn orthogonality_defect(d: usize, m: &[f64]) -> f64 {
    let mut dev = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            let x: f64 = (0..d).map(|k| m[k * d + i] * m[k * d + j]).sum();
            dev = dev.max((x - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    dev
}

#[derive(Clone, Debug, Serialize)]
pub struct GapRow {
    pub ell: usize,
    pub dim: usize,
    pub lambda_max: f64,
    pub lambda_min: f64,
    /// `2t - max_{1 <= k <= ell} lambda_max(k)`; undefined at `ell = 0`.
    pub gap_so_far: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapTable {
    pub t: usize,
    pub max_ell: usize,
    pub rows: Vec<GapRow>,
    /// Final `gap_so_far`.
    pub gap: Option<f64>,
}

/// `T_l = sum_j rho(sigma_j) + rho(sigma_j)^T` on degree `l`; row-major.
pub fn assemble_t(s: &RotationGenSet, l: usize) -> Result<Vec<f64>> {
    let d = 2 * l + 1;
    if l == 0 {
        return Ok(vec![2.0 * s.t() as f64]);
    }
    let mut t = vec![0.0; d * d];
    for g in &s.gens {
        let rho = harmonic_block(g, l)?;
        let defect = orthogonality_defect(d, &rho);
        if defect > BLOCK_TOL {
            return Err(Error::NoConvergence(format!(
                "degree {l} block is not orthogonal (defect {defect:e})"
            )));
        }
        for i in 0..d {
            for j in 0..d {
                t[i * d + j] += rho[i * d + j] + rho[j * d + i];
            }
        }
    }
    Ok(t)
}

pub fn tsigma_gap(s: &RotationGenSet, max_ell: usize) -> Result<GapTable> {
    if max_ell < 1 {
        return Err(Error::invalid("the degree bound must be at least 1"));
    }
    let mut rows: Vec<GapRow> = (0..=max_ell)
        .into_par_iter()
        .map(|l| {
            let d = 2 * l + 1;
            match assemble_t(s, l) {
                Ok(t) => {
                    let (vals, _) = jacobi_eigen(d, &t);
                    GapRow {
                        ell: l,
                        dim: d,
                        lambda_max: vals[d - 1],
                        lambda_min: vals[0],
                        gap_so_far: None,
                        error: None,
                    }
                }
                Err(e) => GapRow {
                    ell: l,
                    dim: d,
                    lambda_max: f64::NAN,
                    lambda_min: f64::NAN,
                    gap_so_far: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let top = 2.0 * s.t() as f64;
    let mut worst = f64::NEG_INFINITY;
    let mut gap = None;
    for row in rows.iter_mut().skip(1) {
        if row.error.is_some() {
            break;
        }
        worst = worst.max(row.lambda_max);
        row.gap_so_far = Some(top - worst);
        gap = row.gap_so_far;
    }
    Ok(GapTable {
        t: s.t(),
        max_ell,
        rows,
        gap,
    })
}
