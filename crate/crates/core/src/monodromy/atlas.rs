use serde::Serialize;

use super::params::rat;
use super::MonodromyTriple;
use super::{build_monodromy, classify_triple, family_catalog, ClosureClass, Family, HGParams};
use crate::error::Result;
use crate::exact::Signature;

/// Whether the monodromy group has finite index in the integer points of its
/// closure. Curated, never computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KnownStatus {
    Arithmetic,
    Thin,
    Open,
}

#[derive(Clone, Debug, Serialize)]
pub struct AtlasRecord {
    pub name: String,
    pub n: usize,
    pub alpha: Vec<String>,
    pub beta: Vec<String>,
    pub closure: Option<ClosureClass>,
    pub signature: Option<Signature>,
    pub known_status: KnownStatus,
    pub source: String,
    pub matrices: Option<MonodromyTriple>,
    pub error: Option<String>,
}

fn record(name: String, p: Result<HGParams>, status: KnownStatus, source: &str, n_hint: usize) -> AtlasRecord {
    let mut rec = AtlasRecord {
        name,
        n: n_hint,
        alpha: Vec::new(),
        beta: Vec::new(),
        closure: None,
        signature: None,
        known_status: status,
        source: source.to_string(),
        matrices: None,
        error: None,
    };
    let outcome = p.and_then(|p| {
        rec.n = p.n;
        rec.alpha = p.alpha_strings();
        rec.beta = p.beta_strings();
        let t = build_monodromy(&p)?;
        let class = classify_triple(&t)?;
        Ok((t, class))
    });
    match outcome {
        Ok((t, class)) => {
            rec.signature = class.signature;
            rec.closure = Some(class);
            rec.matrices = Some(t);
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

fn family_status(family: Family, n: usize) -> KnownStatus {
    match family {
        Family::SymplecticArithmetic => KnownStatus::Arithmetic,
        Family::Dwork if n == 4 => KnownStatus::Thin,
        Family::Dwork => KnownStatus::Open,
        Family::HyperbolicA | Family::HyperbolicB if n == 3 => KnownStatus::Arithmetic,
        Family::HyperbolicA | Family::HyperbolicB => KnownStatus::Thin,
    }
}

/// One record per rank. Failures are kept in the record.
pub fn family_atlas(family: Family, ranks: &[usize]) -> Vec<AtlasRecord> {
    ranks
        .iter()
        .map(|&n| {
            record(
                format!("{family}-{n}"),
                family_catalog(family, n),
                family_status(family, n),
                &format!("family:{family}"),
                n,
            )
        })
        .collect()
}

/// Beta exponents (numerators over a common denominator) of the fourteen
/// rank-four symplectic cases with `alpha = 0` coming from one-parameter
/// families of Calabi-Yau threefolds.
const CALABI_YAU: [([i64; 4], i64, KnownStatus); 14] = [
    ([1, 1, 5, 5], 6, KnownStatus::Arithmetic),
    ([2, 3, 9, 10], 12, KnownStatus::Arithmetic),
    ([1, 3, 7, 9], 10, KnownStatus::Arithmetic),
    ([1, 2, 3, 4], 5, KnownStatus::Thin),
    ([1, 3, 5, 7], 8, KnownStatus::Thin),
    ([1, 5, 7, 11], 12, KnownStatus::Thin),
    ([1, 1, 1, 1], 2, KnownStatus::Thin),
    ([2, 3, 3, 4], 6, KnownStatus::Thin),
    ([1, 2, 2, 3], 4, KnownStatus::Thin),
    ([1, 3, 3, 5], 6, KnownStatus::Thin),
    ([1, 1, 2, 2], 3, KnownStatus::Open),
    ([1, 1, 3, 3], 4, KnownStatus::Open),
    ([3, 4, 8, 9], 12, KnownStatus::Open),
    ([1, 2, 4, 5], 6, KnownStatus::Open),
];

pub fn calabi_yau_atlas() -> Vec<AtlasRecord> {
    CALABI_YAU
        .iter()
        .map(|&(nums, den, status)| {
            let beta: Vec<_> = nums.iter().map(|&a| rat(a, den)).collect();
            let alpha = vec![rat(0, 1); 4];
            let name = format!(
                "calabi-yau-{}",
                nums.iter()
                    .map(|a| rat(*a, den).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            );
            record(name, HGParams::new(alpha, beta), status, "curated:calabi-yau", 4)
        })
        .collect()
}
