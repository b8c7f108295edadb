use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::HGParams;
use crate::error::{Error, Result};
use crate::exact::{expand_cyclotomic, fixed_form_space, signature, totient, IntMatrix, IntPoly};
use crate::exact::{RatMatrix, Signature};

/// Local monodromies about `0`, `infinity` and `1`.
#[derive(Clone, Debug, Serialize)]
pub struct MonodromyTriple {
    pub a: IntMatrix,
    pub b: IntMatrix,
    pub c: IntMatrix,
}

/// `prod_j (t - exp(2 pi i e_j))` for exponents in `[0, 1)`, together with
/// its factorization into cyclotomic polynomials. Fails unless the
/// exponents with each denominator `d` cover every unit mod `d` equally
/// often.
pub fn exponent_polynomial(exps: &[BigRational]) -> Result<(IntPoly, Vec<(u64, u32)>)> {
    let mut by_den: BTreeMap<u64, BTreeMap<u64, u32>> = BTreeMap::new();
    for e in exps {
        let den = e
            .denom()
            .to_u64()
            .ok_or_else(|| Error::NotIntegral(format!("denominator of {e} is too large")))?;
        let num = e.numer().to_u64().unwrap_or(0);
        *by_den.entry(den).or_default().entry(num).or_default() += 1;
    }
    let mut factors = Vec::new();
    for (d, counts) in by_den {
        let units = totient(d);
        let mult = counts.values().next().copied().unwrap_or(0);
        if counts.len() as u64 != units || counts.values().any(|&c| c != mult) {
            return Err(Error::NotIntegral(format!(
                "exponents with denominator {d} do not form full orbits of primitive roots"
            )));
        }
        factors.push((d, mult));
    }
    Ok((expand_cyclotomic(&factors), factors))
}

/// Companion matrix with ones on the subdiagonal and the negated low-order
/// coefficients of the monic `p` in the last column.
pub fn companion(p: &IntPoly) -> Result<IntMatrix> {
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    let n = p.degree().unwrap_or(0);
    Ok(IntMatrix::from_fn(n, |i, j| {
        if j + 1 == n {
            -p.coeff(i)
        } else if i == j + 1 {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    }))
}

/// `A` from the beta exponents, `B` from the alpha exponents, `C = A^{-1} B`.
pub fn build_monodromy(p: &HGParams) -> Result<MonodromyTriple> {
    let (beta_poly, _) = exponent_polynomial(&p.beta)?;
    let (alpha_poly, _) = exponent_polynomial(&p.alpha)?;
    let a = companion(&beta_poly)?;
    let b = companion(&alpha_poly)?;
    let a_inv = a.inverse().ok_or(Error::NotUnimodular)?;
    let c = &a_inv * &b;
    let reflection_rank = c.sub(&IntMatrix::identity(p.n)).rank();
    if reflection_rank != 1 {
        return Err(Error::invalid(format!(
            "C - I has rank {reflection_rank}, expected a pseudo-reflection"
        )));
    }
    Ok(MonodromyTriple { a, b, c })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClosureTag {
    Finite,
    Orthogonal,
    Symplectic,
    /// The invariant form is singular.
    Degenerate,
    /// The invariant forms do not span a line.
    Undetermined,
}

/// Type of the Zariski closure, read off the invariant form.
#[derive(Clone, Debug, Serialize)]
pub struct ClosureClass {
    pub tag: ClosureTag,
    /// Signature up to sign, for symmetric forms.
    pub signature: Option<Signature>,
    /// Orthogonal of signature `(n-1, 1)`.
    pub hyperbolic: bool,
    pub form_space_dim: usize,
    pub form: Option<RatMatrix>,
}

pub fn classify_triple(t: &MonodromyTriple) -> Result<ClosureClass> {
    let n = t.a.dim();
    let space = fixed_form_space(&[t.a.clone(), t.b.clone()])?;
    let mut class = ClosureClass {
        tag: ClosureTag::Undetermined,
        signature: None,
        hyperbolic: false,
        form_space_dim: space.dim(),
        form: None,
    };
    if space.dim() != 1 {
        return Ok(class);
    }
    if let Some(f) = space.antisymmetric.first() {
        class.tag = if f.rank() == n {
            ClosureTag::Symplectic
        } else {
            ClosureTag::Degenerate
        };
        class.form = Some(f.clone());
        return Ok(class);
    }
    let f = space.symmetric[0].clone();
    let sig = signature(&f)?.up_to_sign();
    class.tag = if sig.zero > 0 {
        ClosureTag::Degenerate
    } else if sig.is_definite() {
        ClosureTag::Finite
    } else {
        ClosureTag::Orthogonal
    };
    class.hyperbolic = class.tag == ClosureTag::Orthogonal && sig.negative == 1;
    class.signature = Some(sig);
    class.form = Some(f);
    Ok(class)
}

pub fn classify_closure(p: &HGParams) -> Result<ClosureClass> {
    classify_triple(&build_monodromy(p)?)
}
