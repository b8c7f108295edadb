use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::{linalg, IntMatrix};
use crate::error::{Error, Result};

/// Square rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    n: usize,
    entries: Vec<BigRational>,
}

impl RatMatrix {
    pub fn new(n: usize, entries: Vec<BigRational>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Ok(RatMatrix { n, entries })
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        RatMatrix {
            n: m.dim(),
            entries: m.to_rational(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.n + j]
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        RatMatrix {
            n,
            entries: (0..n * n).map(|k| self.entries[(k % n) * n + k / n].clone()).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn is_antisymmetric(&self) -> bool {
        let t = self.transpose();
        self.entries.iter().zip(&t.entries).all(|(a, b)| *a == -b)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn rank(&self) -> usize {
        linalg::rank(self.rows(), self.n)
    }

    fn rows(&self) -> Vec<Vec<BigRational>> {
        self.entries.chunks(self.n.max(1)).map(<[_]>::to_vec).collect()
    }

    /// `g^T F g` for an integer matrix `g`.
    pub fn congruent_by(&self, g: &IntMatrix) -> RatMatrix {
        let n = self.n;
        let g = RatMatrix::from_int(g);
        let mut fg = vec![BigRational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let f = self.get(i, k);
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    fg[i * n + j] += f * g.get(k, j);
                }
            }
        }
        let mut out = vec![BigRational::zero(); n * n];
        for k in 0..n {
            for i in 0..n {
                let gt = g.get(k, i);
                if gt.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += gt * &fg[k * n + j];
                }
            }
        }
        RatMatrix { n, entries: out }
    }

    /// Scales to a primitive integer matrix whose first nonzero entry is
    /// positive.
    fn normalized(mut self) -> Self {
        let lcm = self.entries.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let ints: Vec<BigInt> = self
            .entries
            .iter()
            .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if g.is_zero() {
            return self;
        }
        if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            g = -g;
        }
        self.entries = ints.into_iter().map(|x| BigRational::from_integer(x / &g)).collect();
        self
    }
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.to_string()).collect())
            .collect();
        rows.serialize(serializer)
    }
}

/// Inertia of a real symmetric matrix: counts of positive, negative and
/// zero eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn is_definite(&self) -> bool {
        self.zero == 0 && (self.positive == 0 || self.negative == 0)
    }

    /// Swaps the roles of positive and negative so that `positive >= negative`.
    /// An invariant form is only determined up to scale, sign included.
    pub fn up_to_sign(self) -> Signature {
        if self.negative > self.positive {
            Signature {
                positive: self.negative,
                negative: self.positive,
                zero: self.zero,
            }
        } else {
            self
        }
    }
}

/// Signature of a symmetric rational matrix by exact LDL^T with symmetric
/// pivoting. When every remaining diagonal entry vanishes but an
/// off-diagonal one does not, row and column `i` are replaced by their sum
/// with row and column `j`, a congruence that creates the nonzero pivot
/// `2 a_ij`.
pub fn signature(form: &RatMatrix) -> Result<Signature> {
    if !form.is_symmetric() {
        return Err(Error::invalid("signature requires a symmetric matrix"));
    }
    let n = form.n;
    let mut a = form.rows();
    let mut active: Vec<usize> = (0..n).collect();
    let mut sig = Signature {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    while !active.is_empty() {
        let pivot = active.iter().position(|&i| !a[i][i].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => {
                let pair = active.iter().enumerate().find_map(|(pi, &i)| {
                    active
                        .iter()
                        .find(|&&j| j != i && !a[i][j].is_zero())
                        .map(|&j| (pi, i, j))
                });
                let Some((pi, i, j)) = pair else {
                    sig.zero += active.len();
                    break;
                };
                for &k in &active {
                    let v = &a[i][k] + &a[j][k];
                    a[i][k] = v;
                }
                for &k in &active {
                    let v = &a[k][i] + &a[k][j];
                    a[k][i] = v;
                }
                pi
            }
        };
        let p = active.remove(pivot);
        let d = a[p][p].clone();
        if d.is_positive() {
            sig.positive += 1;
        } else {
            sig.negative += 1;
        }
        for &i in &active {
            if a[i][p].is_zero() {
                continue;
            }
            let f = &a[i][p] / &d;
            for &j in &active {
                let v = &a[i][j] - &f * &a[p][j];
                a[i][j] = v;
            }
        }
    }
    Ok(sig)
}

/// Space of bilinear forms fixed by a set of matrices.
#[derive(Clone, Debug, Serialize)]
pub struct FormSpace {
    pub n: usize,
    pub basis: Vec<RatMatrix>,
    pub symmetric: Vec<RatMatrix>,
    pub antisymmetric: Vec<RatMatrix>,
    /// Signature of the first symmetric basis element, if any.
    pub signature: Option<Signature>,
}

impl FormSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn elementary(n: usize, i: usize, j: usize, sign: i64) -> RatMatrix {
    let mut entries = vec![BigRational::zero(); n * n];
    entries[i * n + j] += BigRational::one();
    if i != j {
        entries[j * n + i] += BigRational::from_integer(sign.into());
    }
    RatMatrix { n, entries }
}

/// Solves `g^T F g = F` over a basis of symmetric (or antisymmetric)
/// matrices and returns the fixed subspace.
fn fixed_subspace(gens: &[IntMatrix], n: usize, symmetric: bool) -> Vec<RatMatrix> {
    let sign = if symmetric { 1 } else { -1 };
    let unknowns: Vec<RatMatrix> = (0..n)
        .flat_map(|i| {
            let start = if symmetric { i } else { i + 1 };
            (start..n).map(move |j| (i, j))
        })
        .map(|(i, j)| elementary(n, i, j, sign))
        .collect();
    if unknowns.is_empty() {
        return Vec::new();
    }
    // Column c of the system holds g^T E_c g - E_c, stacked over generators.
    let images: Vec<Vec<RatMatrix>> = gens
        .iter()
        .map(|g| unknowns.iter().map(|e| e.congruent_by(g)).collect())
        .collect();
    let mut rows = Vec::with_capacity(gens.len() * n * n);
    for (g_images, _) in images.iter().zip(gens) {
        for k in 0..n * n {
            rows.push(
                g_images
                    .iter()
                    .zip(&unknowns)
                    .map(|(img, e)| &img.entries[k] - &e.entries[k])
                    .collect(),
            );
        }
    }
    linalg::nullspace(rows, unknowns.len())
        .into_iter()
        .map(|coeffs| {
            let mut entries = vec![BigRational::zero(); n * n];
            for (c, e) in coeffs.iter().zip(&unknowns) {
                if c.is_zero() {
                    continue;
                }
                for (x, y) in entries.iter_mut().zip(&e.entries) {
                    *x += c * y;
                }
            }
            RatMatrix { n, entries }.normalized()
        })
        .collect()
}

/// Exact basis of `{F : g^T F g = F for every g}`, split into symmetric and
/// antisymmetric parts. The fixed space is closed under transposition, so the
/// split is a direct sum.
pub fn fixed_form_space(gens: &[IntMatrix]) -> Result<FormSpace> {
    let n = gens
        .first()
        .map(IntMatrix::dim)
        .ok_or_else(|| Error::invalid("at least one generator is required"))?;
    if let Some(bad) = gens.iter().find(|g| g.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.dim(),
        });
    }
    let symmetric = fixed_subspace(gens, n, true);
    let antisymmetric = fixed_subspace(gens, n, false);
    let signature = symmetric.first().map(signature).transpose()?;
    let basis = symmetric.iter().chain(&antisymmetric).cloned().collect();
    Ok(FormSpace {
        n,
        basis,
        symmetric,
        antisymmetric,
        signature,
    })
}
