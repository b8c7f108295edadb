use rayon::prelude::*;
use serde::Serialize;

use super::spectrum::graph_spectrum;
use super::{congruence_graph, CayleySpectrum, ClosureOptions, ClosureResult, SpectrumOptions};
use crate::error::{Error, Result};
use crate::group::GenSet;

#[derive(Clone, Debug, Default)]
pub struct ScanOptions {
    pub closure: ClosureOptions,
    pub spectrum: SpectrumOptions,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub q: u64,
    pub closure: Option<ClosureResult>,
    pub spectrum: Option<CayleySpectrum>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    /// Moduli where the closure is known to be a proper subgroup.
    pub not_onto: Vec<u64>,
    /// Every row produced a converged, strictly positive one-sided gap.
    pub all_gaps_positive: bool,
}

fn scan_one(s: &GenSet, q: u64, opts: &ScanOptions) -> ScanRow {
    let mut row = ScanRow {
        q,
        closure: None,
        spectrum: None,
        error: None,
    };
    let graph = match congruence_graph(s, q, &opts.closure) {
        Ok((closure, graph)) => {
            row.closure = Some(closure);
            graph
        }
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let Some(graph) = graph else {
        row.error = Some(Error::CapExceeded { cap: opts.closure.cap }.to_string());
        return row;
    };
    match graph_spectrum(&graph, &opts.spectrum) {
        Ok(spec) => {
            if !spec.converged {
                row.error = Some(format!(
                    "eigensolver did not converge after {} matvecs (residual {:.3e})",
                    spec.matvecs, spec.max_residual
                ));
            }
            row.spectrum = Some(spec);
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Closure and spectrum for each modulus. Failures are recorded per row.
pub fn expander_scan(s: &GenSet, q_list: &[u64], opts: &ScanOptions) -> Result<ScanReport> {
    if q_list.is_empty() {
        return Err(Error::invalid("empty modulus list"));
    }
    let rows: Vec<ScanRow> = q_list.par_iter().map(|&q| scan_one(s, q, opts)).collect();
    let not_onto = rows
        .iter()
        .filter(|r| r.closure.as_ref().and_then(|c| c.onto) == Some(false))
        .map(|r| r.q)
        .collect();
    let all_gaps_positive = rows.iter().all(|r| {
        r.error.is_none()
            && r.spectrum
                .as_ref()
                .and_then(|s| s.one_sided_gap)
                .is_some_and(|g| g > 0.0)
    });
    Ok(ScanReport {
        rows,
        not_onto,
        all_gaps_positive,
    })
}
