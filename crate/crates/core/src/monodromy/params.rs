use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};

/// Exponent data `(alpha, beta)` of a hypergeometric equation, each entry
/// reduced into `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HGParams {
    pub n: usize,
    pub alpha: Vec<BigRational>,
    pub beta: Vec<BigRational>,
}

fn frac_part(x: &BigRational) -> BigRational {
    x - BigRational::from_integer(x.floor().to_integer())
}

pub(crate) fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl HGParams {
    /// Reduces both vectors mod 1 and rejects imprimitive data, i.e. any
    /// `alpha_i - beta_j` that is an integer.
    pub fn new(alpha: Vec<BigRational>, beta: Vec<BigRational>) -> Result<Self> {
        if alpha.len() != beta.len() {
            return Err(Error::DimensionMismatch {
                expected: alpha.len(),
                found: beta.len(),
            });
        }
        if alpha.is_empty() {
            return Err(Error::invalid("exponent vectors are empty"));
        }
        let alpha: Vec<_> = alpha.iter().map(frac_part).collect();
        let beta: Vec<_> = beta.iter().map(frac_part).collect();
        for a in &alpha {
            if let Some(b) = beta.iter().find(|b| *b == a) {
                return Err(Error::NotPrimitive(format!("alpha and beta share the exponent {b}")));
            }
        }
        Ok(HGParams {
            n: alpha.len(),
            alpha,
            beta,
        })
    }

    pub fn from_pairs(alpha: &[(i64, i64)], beta: &[(i64, i64)]) -> Result<Self> {
        for &(_, d) in alpha.iter().chain(beta) {
            if d == 0 {
                return Err(Error::invalid("zero denominator"));
            }
        }
        let conv = |v: &[(i64, i64)]| v.iter().map(|&(a, b)| rat(a, b)).collect();
        HGParams::new(conv(alpha), conv(beta))
    }

    pub fn alpha_strings(&self) -> Vec<String> {
        self.alpha.iter().map(|x| x.to_string()).collect()
    }

    pub fn beta_strings(&self) -> Vec<String> {
        self.beta.iter().map(|x| x.to_string()).collect()
    }
}

impl fmt::Display for HGParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha = ({}), beta = ({})",
            self.alpha_strings().join(", "),
            self.beta_strings().join(", ")
        )
    }
}

/// Parametric families with a known closure type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `n` even: `alpha = 1/2 + k/(n+1)`, `beta = (0, 1/2 + k/n)`; symplectic
    /// and arithmetic.
    SymplecticArithmetic,
    /// `n` even, `n >= 4`: `alpha = 0`, `beta = k/(n+1)`; symplectic.
    Dwork,
    /// `n` odd: `alpha = (0, k/(n+1))` without `1/2`, `beta = (1/2, k/n)`;
    /// orthogonal of signature `(n-1, 1)`.
    HyperbolicA,
    /// `n` odd: `alpha = (1/2, (2k-1)/(2n-2))`, `beta = (0, 0, 0, k/(n-2))`;
    /// orthogonal of signature `(n-1, 1)`.
    HyperbolicB,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::SymplecticArithmetic,
        Family::Dwork,
        Family::HyperbolicA,
        Family::HyperbolicB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::SymplecticArithmetic => "symplectic-arithmetic",
            Family::Dwork => "dwork",
            Family::HyperbolicA => "hyperbolic-a",
            Family::HyperbolicB => "hyperbolic-b",
        }
    }

    /// Smallest admissible rank.
    pub fn min_rank(self) -> usize {
        match self {
            Family::SymplecticArithmetic => 2,
            Family::Dwork => 4,
            Family::HyperbolicA | Family::HyperbolicB => 3,
        }
    }

    pub fn wants_even(self) -> bool {
        matches!(self, Family::SymplecticArithmetic | Family::Dwork)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown family {s:?}")))
    }
}

/// Exponent data of `family` at rank `n`.
pub fn family_catalog(family: Family, n: usize) -> Result<HGParams> {
    if n < family.min_rank() {
        return Err(Error::invalid(format!(
            "family {family} needs n >= {}, got {n}",
            family.min_rank()
        )));
    }
    if n.is_even() != family.wants_even() {
        let parity = if family.wants_even() { "even" } else { "odd" };
        return Err(Error::invalid(format!("family {family} needs {parity} n, got {n}")));
    }
    let m = n as i64;
    let half = rat(1, 2);
    let (alpha, beta): (Vec<BigRational>, Vec<BigRational>) = match family {
        Family::SymplecticArithmetic => (
            (1..=m).map(|k| &half + rat(k, m + 1)).collect(),
            std::iter::once(BigRational::zero())
                .chain((1..m).map(|k| &half + rat(k, m)))
                .collect(),
        ),
        Family::Dwork => (vec![BigRational::zero(); n], (1..=m).map(|k| rat(k, m + 1)).collect()),
        Family::HyperbolicA => (
            std::iter::once(BigRational::zero())
                .chain((1..=m).filter(|&k| 2 * k != m + 1).map(|k| rat(k, m + 1)))
                .collect(),
            std::iter::once(half.clone()).chain((1..m).map(|k| rat(k, m))).collect(),
        ),
        Family::HyperbolicB => (
            std::iter::once(half.clone())
                .chain((1..m).map(|k| rat(2 * k - 1, 2 * m - 2)))
                .collect(),
            vec![BigRational::zero(); 3]
                .into_iter()
                .chain((1..m - 2).map(|k| rat(k, m - 2)))
                .collect(),
        ),
    };
    HGParams::new(alpha, beta)
}
