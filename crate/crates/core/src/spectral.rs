//! Floating-point symmetric eigensolvers: a thick-restart Lanczos iteration
//! for large sparse operators, a Jacobi solver for the small projected
//! problems it produces, and a dense reference solver.

use faer::linalg::matmul::matmul;
use faer::prelude::{Reborrow, ReborrowMut};
use faer::{Accum, Mat, Par};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// A real symmetric linear operator.
pub trait SymOp: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

/// Row-major dense symmetric matrix used as an operator.
pub struct DenseSym<'a> {
    pub n: usize,
    pub data: &'a [f64],
}

impl SymOp for DenseSym<'_> {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.data[i * self.n..(i + 1) * self.n]
                .iter()
                .zip(x)
                .map(|(a, b)| a * b)
                .sum();
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Which {
    Largest,
    Smallest,
    /// `nev` eigenvalues from each end, interleaved as largest, smallest,
    /// second largest, second smallest and so on.
    BothEnds,
}

#[derive(Clone, Debug)]
pub struct LanczosOptions {
    /// Number of wanted eigenvalues.
    pub nev: usize,
    /// Maximum basis size before a thick restart.
    pub basis: usize,
    /// Convergence threshold on the Ritz residual norm, relative to
    /// `max(1, |theta|)`.
    pub tol: f64,
    /// Cap on operator applications.
    pub max_matvecs: usize,
    pub seed: u64,
}

impl LanczosOptions {
    /// Matvec cap `10 sqrt(n) + 200`.
    pub fn default_cap(n: usize) -> usize {
        (10.0 * (n as f64).sqrt()) as usize + 200
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LanczosResult {
    /// Wanted Ritz values, best first (descending for `Largest`).
    pub values: Vec<f64>,
    /// Ritz residual norms `|A y - theta y|` matching `values`.
    pub residuals: Vec<f64>,
    pub matvecs: usize,
    pub converged: bool,
}

/// A second orthogonalization pass runs when one pass keeps less than this
/// fraction of the norm.
const REORTH_RATIO: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Overlaps with the basis below this fraction of the norm are left alone.
const ORTH_LEVEL: f64 = 1e-12;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Cyclic Jacobi eigensolver for a small symmetric matrix (row-major).
/// Returns eigenvalues ascending and the matching eigenvectors as columns of
/// a row-major matrix.
pub fn jacobi_eigen(n: usize, a: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut a = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum();
        let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().max(f64::MIN_POSITIVE);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vecs = vec![0.0; n * n];
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            vecs[k * n + new] = v[k * n + old];
        }
    }
    (values, vecs)
}

/// All eigenvalues (ascending) of a dense symmetric matrix.
pub fn dense_symmetric_eigenvalues(n: usize, data: &[f64]) -> Result<Vec<f64>> {
    let m = faer::Mat::<f64>::from_fn(n, n, |i, j| data[i * n + j]);
    m.self_adjoint_eigenvalues(faer::Side::Lower)
        .map_err(|e| Error::NoConvergence(format!("dense eigensolver: {e:?}")))
}

/// Thick-restart Lanczos for the extreme eigenvalues of `op` on the
/// orthogonal complement of the orthonormal vectors `deflate`.
///
/// Every new basis vector is orthogonalized against the whole basis and the
/// deflation vectors as blocked matrix products, with a second pass when the
/// first one loses too much of the norm. On restart the
/// `keep` best Ritz vectors are retained together with the current residual
/// direction.
pub fn lanczos(op: &dyn SymOp, deflate: &[Vec<f64>], which: Which, opts: &LanczosOptions) -> LanczosResult {
    let n = op.dim();
    let effective = n.saturating_sub(deflate.len());
    let empty = LanczosResult {
        values: Vec::new(),
        residuals: Vec::new(),
        matvecs: 0,
        converged: true,
    };
    if effective == 0 || opts.nev == 0 {
        return empty;
    }
    let per_end = if which == Which::BothEnds { 2 } else { 1 };
    let m = opts.basis.max(per_end * opts.nev + 2).min(effective);
    let nev = (per_end * opts.nev).min(m);
    let keep_target = (nev + (m - nev) / 2).min(m.saturating_sub(1)).max(nev.min(m - 1));

    let dmat = Mat::<f64>::from_fn(n, deflate.len(), |i, k| deflate[k][i]);
    let mut dcoef = Mat::<f64>::zeros(deflate.len(), 1);
    let mut coef = Mat::<f64>::zeros(m, 1);
    // Column `m` holds the residual direction once the basis is full.
    let mut v = Mat::<f64>::zeros(n, m + 1);
    let mut w = Mat::<f64>::zeros(n, 1);

    let project_deflation = |w: &mut Mat<f64>, dcoef: &mut Mat<f64>| {
        if deflate.is_empty() {
            return;
        }
        matmul(
            dcoef.as_mut(),
            Accum::Replace,
            dmat.transpose(),
            w.as_ref(),
            1.0,
            Par::Seq,
        );
        matmul(w.as_mut(), Accum::Add, dmat.as_ref(), dcoef.as_ref(), -1.0, Par::Seq);
    };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for x in w.col_as_slice_mut(0) {
        *x = rng.random::<f64>() - 0.5;
    }
    project_deflation(&mut w, &mut dcoef);
    project_deflation(&mut w, &mut dcoef);
    let s = norm(w.col_as_slice(0));
    for (dst, x) in v.col_as_slice_mut(0).iter_mut().zip(w.col_as_slice(0)) {
        *dst = x / s;
    }

    let mut h = vec![0.0; m * m];
    let mut j = 0usize;
    let mut matvecs = 0usize;
    loop {
        let mut beta_last = 0.0;
        let mut exhausted = false;
        while j < m {
            op.apply(v.col_as_slice(j), w.col_as_slice_mut(0));
            matvecs += 1;
            // Remove the local three-term components first, then run full
            // classical Gram-Schmidt, repeated once when a pass cancels most
            // of what is left.
            for i in j.saturating_sub(1)..=j {
                let vi = v.col_as_slice(i);
                let wc = w.col_as_slice_mut(0);
                let c = dot(vi, wc);
                for (x, y) in wc.iter_mut().zip(vi) {
                    *x -= c * y;
                }
                h[i * m + j] += c;
            }
            let mut before = norm(w.col_as_slice(0));
            for _pass in 0..2 {
                project_deflation(&mut w, &mut dcoef);
                let basis = v.subcols(0, j + 1);
                let mut c = coef.subrows_mut(0, j + 1);
                matmul(c.rb_mut(), Accum::Replace, basis.transpose(), w.as_ref(), 1.0, Par::Seq);
                let drift = (0..=j).map(|i| c[(i, 0)].abs()).fold(0.0, f64::max);
                if drift <= ORTH_LEVEL * before {
                    break;
                }
                matmul(w.as_mut(), Accum::Add, basis, c.rb(), -1.0, Par::Seq);
                for i in 0..=j {
                    h[i * m + j] += c[(i, 0)];
                }
                let after = norm(w.col_as_slice(0));
                if after > REORTH_RATIO * before {
                    break;
                }
                before = after;
            }
            for i in 0..j {
                h[j * m + i] = h[i * m + j];
            }
            let beta = norm(w.col_as_slice(0));
            j += 1;
            let scale = (0..j).map(|i| h[i * m + i].abs()).fold(1.0, f64::max);
            if beta <= 1e-13 * scale {
                exhausted = true;
                break;
            }
            for (dst, x) in v.col_as_slice_mut(j).iter_mut().zip(w.col_as_slice(0)) {
                *dst = x / beta;
            }
            if j == m {
                beta_last = beta;
            }
        }

        let k = j;
        let sub: Vec<f64> = (0..k)
            .flat_map(|r| (0..k).map(move |c| (r, c)))
            .map(|(r, c)| h[r * m + c])
            .collect();
        let (theta, vecs) = jacobi_eigen(k, &sub);
        let order: Vec<usize> = match which {
            Which::Largest => (0..k).rev().collect(),
            Which::Smallest => (0..k).collect(),
            Which::BothEnds => (0..k).map(|i| if i % 2 == 0 { k - 1 - i / 2 } else { i / 2 }).collect(),
        };
        let residual_of = |idx: usize| beta_last * vecs[(k - 1) * k + idx].abs();
        let want = nev.min(k);
        let converged = exhausted
            || order[..want]
                .iter()
                .all(|&i| residual_of(i) <= opts.tol * theta[i].abs().max(1.0));
        if converged || matvecs >= opts.max_matvecs {
            return LanczosResult {
                values: order[..want].iter().map(|&i| theta[i]).collect(),
                residuals: order[..want].iter().map(|&i| residual_of(i)).collect(),
                matvecs,
                converged,
            };
        }

        // Thick restart.
        let keep = keep_target.min(k - 1).max(1);
        let y = Mat::<f64>::from_fn(k, keep, |r, c| vecs[r * k + order[c]]);
        let mut ritz = Mat::<f64>::zeros(n, keep);
        matmul(
            ritz.as_mut(),
            Accum::Replace,
            v.subcols(0, k),
            y.as_ref(),
            1.0,
            Par::Seq,
        );
        let residual_dir = v.col_as_slice(m).to_vec();
        v.col_as_slice_mut(keep).copy_from_slice(&residual_dir);
        for c in 0..keep {
            v.col_as_slice_mut(c).copy_from_slice(ritz.col_as_slice(c));
        }
        h.iter_mut().for_each(|x| *x = 0.0);
        for (i, &idx) in order[..keep].iter().enumerate() {
            h[i * m + i] = theta[idx];
        }
        j = keep;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_laplacian(n: usize) -> Vec<f64> {
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = 2.0;
            if i + 1 < n {
                a[i * n + i + 1] = -1.0;
                a[(i + 1) * n + i] = -1.0;
            }
        }
        a
    }

    #[test]
    fn jacobi_matches_closed_form() {
        let n = 12;
        let (vals, vecs) = jacobi_eigen(n, &path_laplacian(n));
        for (k, v) in vals.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((v - exact).abs() < 1e-12);
        }
        // Columns are orthonormal.
        for a in 0..n {
            for b in 0..n {
                let d: f64 = (0..n).map(|r| vecs[r * n + a] * vecs[r * n + b]).sum();
                assert!((d - if a == b { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lanczos_extremes_of_path() {
        let n = 400;
        let a = path_laplacian(n);
        let op = DenseSym { n, data: &a };
        let opts = LanczosOptions {
            nev: 3,
            basis: 40,
            tol: 1e-10,
            max_matvecs: 20_000,
            seed: 5,
        };
        let dense = dense_symmetric_eigenvalues(n, &a).unwrap();
        let top = lanczos(&op, &[], Which::Largest, &opts);
        assert!(top.converged);
        for (i, v) in top.values.iter().enumerate() {
            assert!((v - dense[n - 1 - i]).abs() < 1e-8, "{v} vs {}", dense[n - 1 - i]);
        }
        let bottom = lanczos(&op, &[], Which::Smallest, &opts);
        assert!(bottom.converged);
        assert!((bottom.values[0] - dense[0]).abs() < 1e-8);
    }

    #[test]
    fn deflation_removes_known_vector() {
        // Complete graph K_5 normalized: eigenvalue 1 on constants, -1/4 else.
        let n = 5;
        let a: Vec<f64> = (0..n * n).map(|k| if k / n == k % n { 0.0 } else { 0.25 }).collect();
        let op = DenseSym { n, data: &a };
        let ones = vec![1.0 / (n as f64).sqrt(); n];
        let opts = LanczosOptions {
            nev: 1,
            basis: 10,
            tol: 1e-12,
            max_matvecs: 100,
            seed: 1,
        };
        let r = lanczos(&op, &[ones], Which::Largest, &opts);
        assert!(r.converged);
        assert!((r.values[0] + 0.25).abs() < 1e-12);
    }
}
