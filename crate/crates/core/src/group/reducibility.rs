use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::modp::is_irreducible_mod;
use crate::exact::{cyclotomic_poly, totient, IntPoly};

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Largest |constant term| for which integer roots are searched by trial
/// division.
const ROOT_SEARCH_LIMIT: u64 = 1_000_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Certificate {
    /// An integer root.
    RationalRoot(String),
    /// `gcd(f, f')` is nonconstant.
    RepeatedFactor(String),
    /// `Phi_d` divides `f` properly.
    CyclotomicFactor(u64),
    /// Explicit factorization into two monic quadratics (degree 4 only).
    QuadraticPair(String, String),
}

/// One-sided certified verdicts; anything uncertified is `Undetermined`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PolyVerdict {
    /// Irreducible modulo `prime`, hence over the rationals.
    Irreducible {
        prime: u64,
    },
    Reducible(Certificate),
    Undetermined,
}

fn integer_root(f: &IntPoly) -> Option<BigInt> {
    let c0 = f.coeff(0);
    if c0.is_zero() {
        return Some(BigInt::zero());
    }
    let a = c0.abs().to_u64().filter(|&a| a <= ROOT_SEARCH_LIMIT)?;
    let mut d = 1u64;
    while d * d <= a {
        if a % d == 0 {
            for cand in [d, a / d] {
                for r in [BigInt::from(cand), -BigInt::from(cand)] {
                    if f.eval(&r).is_zero() {
                        return Some(r);
                    }
                }
            }
        }
        d += 1;
    }
    None
}

fn is_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Monic quartic `t^4 + c3 t^3 + c2 t^2 + c1 t + c0` as
/// `(t^2 + a t + b)(t^2 + c t + d)` with integer coefficients.
fn quadratic_pair(f: &IntPoly) -> Option<(IntPoly, IntPoly)> {
    if f.degree() != Some(4) {
        return None;
    }
    let c0 = f.coeff(0);
    let a0 = c0.abs().to_u64().filter(|&a| a > 0 && a <= ROOT_SEARCH_LIMIT)?;
    let (c1, c2, c3) = (f.coeff(1), f.coeff(2), f.coeff(3));
    let mut divs = Vec::new();
    let mut k = 1u64;
    while k * k <= a0 {
        if a0 % k == 0 {
            divs.push(k);
            divs.push(a0 / k);
        }
        k += 1;
    }
    for k in divs {
        for b in [BigInt::from(k), -BigInt::from(k)] {
            let d = &c0 / &b;
            // a + c = c3 and a c = c2 - b - d.
            let s = &c3;
            let p = &c2 - &b - &d;
            let disc = s * s - BigInt::from(4) * &p;
            let Some(r) = is_square(&disc) else { continue };
            if (s + &r).is_odd() {
                continue;
            }
            let a: BigInt = (s + &r) / 2;
            let c: BigInt = (s - &r) / 2;
            for (a, c) in [(a.clone(), c.clone()), (c, a)] {
                if &a * &d + &b * &c == c1 {
                    let q1 = IntPoly::new(vec![b.clone(), a, BigInt::one()]);
                    let q2 = IntPoly::new(vec![d.clone(), c, BigInt::one()]);
                    return Some((q1, q2));
                }
            }
        }
    }
    None
}

fn reducibility_certificate(f: &IntPoly) -> Option<Certificate> {
    let deg = f.degree()?;
    if deg < 2 {
        return None;
    }
    if let Some(r) = integer_root(f) {
        return Some(Certificate::RationalRoot(r.to_string()));
    }
    let g = f.gcd(&f.derivative());
    if g.degree().unwrap_or(0) > 0 {
        return Some(Certificate::RepeatedFactor(g.to_string()));
    }
    for d in 1..=(2 * deg * deg + 2) as u64 {
        let phi_deg = totient(d) as usize;
        if phi_deg >= deg {
            continue;
        }
        if f.exact_div_monic(&cyclotomic_poly(d)).is_some() {
            return Some(Certificate::CyclotomicFactor(d));
        }
    }
    quadratic_pair(f).map(|(a, b)| Certificate::QuadraticPair(a.to_string(), b.to_string()))
}

fn reduce_mod(f: &IntPoly, p: u64) -> Vec<u64> {
    let bp = BigInt::from(p);
    f.coeffs().iter().map(|c| c.mod_floor(&bp).to_u64().unwrap()).collect()
}

/// Classifies a monic integer polynomial as certifiably reducible,
/// certifiably irreducible, or undetermined.
pub fn classify_polynomial(f: &IntPoly) -> PolyVerdict {
    assert!(f.is_monic(), "classification expects a monic polynomial");
    if let Some(cert) = reducibility_certificate(f) {
        return PolyVerdict::Reducible(cert);
    }
    for &p in &SMALL_PRIMES {
        if is_irreducible_mod(&reduce_mod(f, p), p) {
            return PolyVerdict::Irreducible { prime: p };
        }
    }
    PolyVerdict::Undetermined
}
