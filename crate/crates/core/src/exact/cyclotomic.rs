use std::collections::BTreeMap;

use num_traits::One;
use serde::Serialize;

use super::IntPoly;
use crate::error::{Error, Result};

/// Outcome of testing a monic polynomial for being a product of cyclotomic
/// polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CyclotomicVerdict {
    /// `(d, e)` pairs with `p = prod Phi_d^e`, ordered by `d`.
    Product(Vec<(u64, u32)>),
    NotCyclotomic,
}

impl CyclotomicVerdict {
    pub fn factors(&self) -> Option<&[(u64, u32)]> {
        match self {
            CyclotomicVerdict::Product(f) => Some(f),
            CyclotomicVerdict::NotCyclotomic => None,
        }
    }
}

pub fn totient(mut d: u64) -> u64 {
    let mut result = d;
    let mut p = 2;
    while p * p <= d {
        if d % p == 0 {
            while d % p == 0 {
                d /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if d > 1 {
        result -= result / d;
    }
    result
}

fn mobius(mut d: u64) -> i8 {
    let mut sign = 1i8;
    let mut p = 2;
    while p * p <= d {
        if d % p == 0 {
            d /= p;
            if d % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if d > 1 {
        sign = -sign;
    }
    sign
}

/// The `d`-th cyclotomic polynomial, from the Möbius inversion
/// `Phi_d = prod_{e | d} (t^e - 1)^{mu(d/e)}`.
pub fn cyclotomic_poly(d: u64) -> IntPoly {
    assert!(d >= 1, "cyclotomic index must be positive");
    let divisors: Vec<u64> = (1..=d).filter(|e| d % e == 0).collect();
    let mut num = IntPoly::one();
    for &e in &divisors {
        if mobius(d / e) == 1 {
            num = num.mul_binomial(e as usize);
        }
    }
    for &e in &divisors {
        if mobius(d / e) == -1 {
            num = num.div_binomial(e as usize).expect("Möbius quotient is exact");
        }
    }
    num
}

/// Re-expands `prod Phi_d^e`.
pub fn expand_cyclotomic(factors: &[(u64, u32)]) -> IntPoly {
    factors.iter().fold(IntPoly::one(), |acc, &(d, e)| {
        let phi = cyclotomic_poly(d);
        (0..e).fold(acc, |a, _| a.mul(&phi))
    })
}

/// Decides whether a monic polynomial is a product of cyclotomic
/// polynomials by exact trial division against every `Phi_d` of small
/// enough degree.
pub fn cyclotomic_factor(p: &IntPoly) -> Result<CyclotomicVerdict> {
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    let deg = p.degree().unwrap_or(0) as u64;
    // totient(d) >= sqrt(d / 2), so every relevant d is at most 2 deg^2.
    let bound = 2 * deg * deg + 2;
    let mut rest = p.clone();
    let mut factors = BTreeMap::new();
    for d in 1..=bound {
        let remaining = rest.degree().unwrap_or(0) as u64;
        if remaining == 0 {
            break;
        }
        if totient(d) > remaining {
            continue;
        }
        let phi = cyclotomic_poly(d);
        while let Some(q) = rest.exact_div_monic(&phi) {
            *factors.entry(d).or_insert(0u32) += 1;
            rest = q;
        }
    }
    if rest.coeffs().len() == 1 && rest.coeffs()[0].is_one() {
        Ok(CyclotomicVerdict::Product(factors.into_iter().collect()))
    } else {
        Ok(CyclotomicVerdict::NotCyclotomic)
    }
}
