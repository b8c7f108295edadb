//! Dispatch from a validated manifest to the library operations.

use std::sync::mpsc;
use std::time::Duration;

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};
use thinlab_core::congruence::{expander_scan, ClosureOptions, ScanOptions, SpectrumOptions, TargetGroup};
use thinlab_core::diophantine::{
    apollonian_orbit, apollonian_orbit_oracle, zaremba_forward, zaremba_scan, ApollonianOptions, ZarembaReport,
};
use thinlab_core::group::{ball_enumerate, relation_search, walk_charpoly_stats, BallOptions};
use thinlab_core::lattice::{component_fingerprint, min_distance_graph, QuadLattice};
use thinlab_core::monodromy::{calabi_yau_atlas, family_atlas, AtlasRecord, Family};
use thinlab_core::rotation::{gamma_generators, tsigma_gap, RotationGenSet};
use thinlab_core::GenSet;

use crate::emit::{to_value, Table};
use crate::error::{CliError, EXIT_CAP, EXIT_INVALID, EXIT_OK, EXIT_PARTIAL};
use crate::manifest::*;

const DEFAULT_RELATION_CAP: usize = 10_000_000;
const DEFAULT_LATTICE_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Invalid,
    Cap,
    Numerical,
}

/// A failure confined to one item of a run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ItemError {
    pub item: String,
    pub category: Category,
    pub message: String,
    /// Name of the cap that fired, for `Category::Cap`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<String>,
}

impl ItemError {
    fn new(item: impl Into<String>, category: Category, message: impl Into<String>) -> Self {
        ItemError {
            item: item.into(),
            category,
            message: message.into(),
            cap: None,
        }
    }

    fn cap(item: impl Into<String>, cap: &str, message: impl Into<String>) -> Self {
        ItemError {
            cap: Some(cap.to_string()),
            ..ItemError::new(item, Category::Cap, message)
        }
    }

    /// A whole-run failure recorded as a single item.
    pub fn from_hard(e: &CliError) -> Self {
        let category = match e.exit_code() {
            EXIT_CAP => Category::Cap,
            EXIT_INVALID => Category::Invalid,
            _ => Category::Numerical,
        };
        let cap = match e {
            CliError::Cap { cap, .. } => Some(cap.to_string()),
            CliError::Core(thinlab_core::Error::CapExceeded { .. }) => Some("max_elements".into()),
            _ => None,
        };
        ItemError {
            item: "run".into(),
            category,
            message: e.to_string(),
            cap,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    /// Full structured output.
    pub result: Value,
    /// Small headline values, copied into the bundle index.
    pub summary: Value,
    pub tables: Vec<Table>,
    /// Number of independent items the run was split into.
    pub items: usize,
    pub errors: Vec<ItemError>,
}

impl Outcome {
    pub fn failed(e: &CliError) -> Self {
        Outcome {
            result: Value::Null,
            summary: Value::Null,
            tables: Vec::new(),
            items: 1,
            errors: vec![ItemError::from_hard(e)],
        }
    }

    pub fn status(&self) -> &'static str {
        if self.errors.is_empty() {
            "ok"
        } else if self.errors.len() >= self.items {
            "failed"
        } else {
            "partial"
        }
    }

    /// 3 when any cap fired, 2 when every item failed, 1 when some did.
    pub fn exit_code(&self) -> i32 {
        if self.errors.iter().any(|e| e.category == Category::Cap) {
            EXIT_CAP
        } else if self.errors.is_empty() {
            EXIT_OK
        } else if self.errors.len() >= self.items {
            EXIT_INVALID
        } else {
            EXIT_PARTIAL
        }
    }
}

/// Validates and runs `m`, enforcing the wall-clock cap if one is set.
pub fn execute(m: &Manifest) -> Result<Outcome, CliError> {
    let params = m.validate()?;
    let Some(secs) = m.caps.wall_clock_secs else {
        return dispatch(m, &params);
    };
    let (tx, rx) = mpsc::channel();
    let job = m.clone();
    std::thread::spawn(move || {
        let _ = tx.send(dispatch(&job, &params));
    });
    match rx.recv_timeout(Duration::from_secs_f64(secs)) {
        Ok(r) => r,
        Err(_) => Err(CliError::Cap {
            cap: "wall_clock_secs",
            limit: secs.to_string(),
        }),
    }
}

fn dispatch(m: &Manifest, params: &Params) -> Result<Outcome, CliError> {
    match params {
        Params::Expander(p) => expander(m, p),
        Params::Monodromy(p) => monodromy(p),
        Params::Cartan(p) => cartan(m, p),
        Params::Rotation(p) => rotation(p),
        Params::Zaremba(p) => zaremba(p),
        Params::Apollonian(p) => apollonian(m, p),
        Params::Walk(p) => walk(m, p),
        Params::Ball(p) => ball(m, p),
    }
}

fn cap_usize(v: Option<u64>, default: usize) -> usize {
    v.map_or(default, |x| usize::try_from(x).unwrap_or(usize::MAX))
}

fn gens_value(s: &GenSet) -> Value {
    json!({ "labels": s.labels(), "matrices": to_value(&s.gens()) })
}

fn tag<T: Serialize>(x: &T) -> String {
    match to_value(x) {
        Value::String(s) => s,
        v => v.to_string(),
    }
}

fn expander(m: &Manifest, p: &ExpanderParams) -> Result<Outcome, CliError> {
    let gens = p.generators.build()?;
    let opts = ScanOptions {
        closure: ClosureOptions {
            cap: cap_usize(m.caps.max_elements, ClosureOptions::default().cap),
            allow_nonsquarefree: p.allow_nonsquarefree,
            target: TargetGroup::Auto,
        },
        spectrum: SpectrumOptions {
            k: p.eigenvalues,
            basis: p.basis,
            max_matvecs: m.caps.max_iterations.map(|x| cap_usize(Some(x), 0)),
            seed: m.seed,
            dense_check_limit: p.dense_check_limit,
            ..SpectrumOptions::default()
        },
    };
    let report = expander_scan(&gens, &p.q_list, &opts)?;

    let mut table = Table::new(
        "expander",
        &[
            "q",
            "order",
            "onto",
            "lambda2",
            "gap",
            "target_order",
            "index",
            "lambda1",
            "lambda_min",
            "two_sided_gap",
            "bipartite",
            "converged",
            "matvecs",
            "max_residual",
            "dense_max_diff",
            "error",
        ],
    );
    let mut errors = Vec::new();
    for row in &report.rows {
        let c = row.closure.as_ref();
        let s = row.spectrum.as_ref();
        table.push(vec![
            row.q.into(),
            c.and_then(|c| c.order).into(),
            c.and_then(|c| c.onto).into(),
            s.and_then(|s| s.lambda2).into(),
            s.and_then(|s| s.one_sided_gap).into(),
            c.and_then(|c| c.target_order).into(),
            c.and_then(|c| c.index).into(),
            s.map(|s| s.lambda1).into(),
            s.and_then(|s| s.lambda_min).into(),
            s.and_then(|s| s.two_sided_gap).into(),
            s.map(|s| s.bipartite).into(),
            s.map(|s| s.converged).into(),
            s.map(|s| s.matvecs).into(),
            s.map(|s| s.max_residual).into(),
            s.and_then(|s| s.dense_max_diff).into(),
            row.error.clone().into(),
        ]);
        let Some(msg) = &row.error else { continue };
        let item = format!("q={}", row.q);
        let err = if c.is_some_and(|c| c.overflow) {
            ItemError::cap(item, "max_elements", msg.clone())
        } else if let (Some(s), Some(cap)) = (s, m.caps.max_iterations) {
            if !s.converged && s.matvecs as u64 >= cap {
                ItemError::cap(item, "max_iterations", msg.clone())
            } else {
                ItemError::new(item, Category::Numerical, msg.clone())
            }
        } else if c.is_none() {
            ItemError::new(item, Category::Invalid, msg.clone())
        } else {
            ItemError::new(item, Category::Numerical, msg.clone())
        };
        errors.push(err);
    }
    let summary = json!({
        "moduli": report.rows.len(),
        "not_onto": report.not_onto,
        "all_gaps_positive": report.all_gaps_positive,
    });
    Ok(Outcome {
        result: json!({ "generators": gens_value(&gens), "scan": to_value(&report) }),
        summary,
        tables: vec![table],
        items: report.rows.len(),
        errors,
    })
}

fn monodromy(p: &MonodromyParams) -> Result<Outcome, CliError> {
    let mut records: Vec<AtlasRecord> = Vec::new();
    for name in &p.families {
        let family: Family = name
            .parse()
            .map_err(|e: thinlab_core::Error| CliError::schema(e.to_string()))?;
        let ranks: Vec<usize> = p
            .ranks
            .iter()
            .copied()
            .filter(|&n| n >= family.min_rank() && (n % 2 == 0) == family.wants_even())
            .collect();
        records.extend(family_atlas(family, &ranks));
    }
    if p.calabi_yau {
        records.extend(calabi_yau_atlas());
    }
    if !p.include_matrices {
        records.iter_mut().for_each(|r| r.matrices = None);
    }
    let mut table = Table::new(
        "atlas",
        &[
            "name",
            "n",
            "alpha",
            "beta",
            "closure",
            "signature",
            "hyperbolic",
            "known_status",
            "source",
            "error",
        ],
    );
    let mut errors = Vec::new();
    for r in &records {
        let sig = r.signature.map(|s| format!("({}, {})", s.positive, s.negative));
        table.push(vec![
            r.name.as_str().into(),
            r.n.into(),
            r.alpha.join(" ").into(),
            r.beta.join(" ").into(),
            r.closure.as_ref().map(|c| tag(&c.tag)).into(),
            sig.into(),
            r.closure.as_ref().map(|c| c.hyperbolic).into(),
            tag(&r.known_status).into(),
            r.source.as_str().into(),
            r.error.clone().into(),
        ]);
        if let Some(e) = &r.error {
            errors.push(ItemError::new(r.name.as_str(), Category::Invalid, e.clone()));
        }
    }
    let summary = json!({ "records": records.len() });
    Ok(Outcome {
        result: json!({ "atlas": to_value(&records) }),
        summary,
        tables: vec![table],
        items: records.len(),
        errors,
    })
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn cartan(m: &Manifest, p: &CartanParams) -> Result<Outcome, CliError> {
    let lattice = QuadLattice::from_rows(&p.gram)?;
    let cap = cap_usize(m.caps.max_elements, DEFAULT_LATTICE_CAP);
    let graph = min_distance_graph(&lattice, p.height, cap)?;
    let mut roots = Table::new("roots", &["index", "v", "primitive", "component"]);
    for (i, r) in graph.vertices.iter().enumerate() {
        roots.push(vec![
            i.into(),
            join(&r.v).into(),
            r.primitive.into(),
            graph.component_of[i].into(),
        ]);
    }
    let mut components = Vec::new();
    for (c, members) in graph.components.iter().enumerate() {
        let fp = if p.fingerprints {
            Some(to_value(&component_fingerprint(&lattice, &graph, c)?))
        } else {
            None
        };
        components.push(json!({ "index": c, "members": members, "fingerprint": fp }));
    }
    let summary = json!({
        "roots": graph.vertices.len(),
        "edges": graph.edges.len(),
        "components": graph.components.len(),
    });
    Ok(Outcome {
        result: json!({
            "gram": to_value(&lattice.gram),
            "height": p.height,
            "roots": to_value(&graph.vertices),
            "edges": graph.edges,
            "components": components,
        }),
        summary,
        tables: vec![roots],
        items: 1,
        errors: Vec::new(),
    })
}

fn rotation(p: &RotationParams) -> Result<Outcome, CliError> {
    let gens = match (&p.generators, p.m, p.n) {
        (Some(g), _, _) => RotationGenSet::new(g.clone())?,
        (None, Some(m), Some(n)) => gamma_generators(m, n)?,
        _ => return Err(CliError::schema("rotation: give either m and n or generators")),
    };
    let table_out = tsigma_gap(&gens, p.max_ell)?;
    let mut table = Table::new(
        "rotation",
        &["ell", "dim", "lambda_max", "lambda_min", "gap_so_far", "error"],
    );
    let mut errors = Vec::new();
    for r in &table_out.rows {
        table.push(vec![
            r.ell.into(),
            r.dim.into(),
            r.lambda_max.into(),
            r.lambda_min.into(),
            r.gap_so_far.into(),
            r.error.clone().into(),
        ]);
        if let Some(e) = &r.error {
            errors.push(ItemError::new(format!("ell={}", r.ell), Category::Numerical, e.clone()));
        }
    }
    let summary = json!({ "t": table_out.t, "max_ell": table_out.max_ell, "gap": table_out.gap });
    Ok(Outcome {
        result: json!({ "generators": to_value(&gens), "table": to_value(&table_out) }),
        summary,
        tables: vec![table],
        items: table_out.rows.len(),
        errors,
    })
}

fn zaremba(p: &ZarembaParams) -> Result<Outcome, CliError> {
    let run = |method: ZarembaMethod| -> Result<ZarembaReport, CliError> {
        Ok(match method {
            ZarembaMethod::Scan => zaremba_scan(p.a, p.q_max)?,
            ZarembaMethod::Forward => zaremba_forward(p.a, p.q_max)?,
        })
    };
    let report = run(p.method)?;
    let mut errors = Vec::new();
    if p.cross_check {
        let other = match p.method {
            ZarembaMethod::Scan => ZarembaMethod::Forward,
            ZarembaMethod::Forward => ZarembaMethod::Scan,
        };
        let check = run(other)?;
        for (x, y) in report.rows.iter().zip(&check.rows) {
            if x.witness.is_some() != y.witness.is_some() {
                errors.push(ItemError::new(
                    format!("q={}", x.q),
                    Category::Numerical,
                    "enumeration methods disagree",
                ));
            }
        }
    }
    let mut table = Table::new("zaremba", &["q", "achieved", "witness"]);
    for r in &report.rows {
        table.push(vec![r.q.into(), r.witness.is_some().into(), r.witness.into()]);
    }
    let summary = json!({
        "a": report.a,
        "q_max": report.q_max,
        "achieved": report.achieved.len(),
        "exceptions": report.exceptions,
        "density": report.density,
        "cross_checked": p.cross_check,
    });
    Ok(Outcome {
        result: json!({
            "a": report.a,
            "q_max": report.q_max,
            "exceptions": report.exceptions,
            "density": report.density,
            "achieved": report.achieved.len(),
        }),
        summary,
        tables: vec![table],
        items: report.rows.len(),
        errors,
    })
}

fn apollonian(m: &Manifest, p: &ApollonianParams) -> Result<Outcome, CliError> {
    let opts = ApollonianOptions {
        modulus: p.modulus,
        cap: cap_usize(m.caps.max_elements, ApollonianOptions::default().cap),
    };
    let report = apollonian_orbit(p.root, p.bound, &opts)?;
    let mut errors = Vec::new();
    if p.cross_check {
        let oracle = apollonian_orbit_oracle(p.root, p.bound, p.modulus)?;
        if oracle.distinct_curvatures() != report.distinct_curvatures() {
            errors.push(ItemError::new(
                "curvatures",
                Category::Numerical,
                "enumeration orders disagree",
            ));
        }
    }
    let mut table = Table::new("curvatures", &["curvature", "count"]);
    for &(c, k) in &report.curvature_counts {
        table.push(vec![c.into(), k.into()]);
    }
    let summary = json!({
        "circles": report.circles,
        "distinct": report.curvature_counts.len(),
        "density": report.density,
        "admissible_density": report.admissible_density,
        "residues": report.residues,
        "cross_checked": p.cross_check,
    });
    Ok(Outcome {
        result: to_value(&report),
        summary,
        tables: vec![table],
        items: 1,
        errors,
    })
}

fn walk(m: &Manifest, p: &WalkParams) -> Result<Outcome, CliError> {
    let gens = p.generators.build()?;
    let report = walk_charpoly_stats(&gens, &p.lengths, p.trials, m.seed)?;
    let mut table = Table::new(
        "walk",
        &[
            "length",
            "trials",
            "irreducible",
            "reducible",
            "undetermined",
            "irreducible_fraction",
        ],
    );
    for r in &report.rows {
        table.push(vec![
            r.length.into(),
            r.trials.into(),
            r.irreducible.into(),
            r.reducible.into(),
            r.undetermined.into(),
            r.irreducible_fraction.into(),
        ]);
    }
    Ok(Outcome {
        result: json!({ "generators": gens_value(&gens), "report": to_value(&report) }),
        summary: json!({ "lengths": p.lengths, "trials": p.trials }),
        tables: vec![table],
        items: 1,
        errors: Vec::new(),
    })
}

fn ball(m: &Manifest, p: &BallParams) -> Result<Outcome, CliError> {
    let gens = p.generators.build()?;
    let opts = BallOptions {
        norm_bound: p.norm_bound.map(BigInt::from),
        cap: cap_usize(m.caps.max_elements, BallOptions::default().cap),
    };
    let report = ball_enumerate(&gens, p.radius, &opts)?;
    let mut sizes = Table::new("ball", &["radius", "count"]);
    for (r, &k) in report.counts.iter().enumerate() {
        sizes.push(vec![r.into(), k.into()]);
    }
    let mut tables = vec![sizes];
    let mut result = json!({
        "generators": gens_value(&gens),
        "counts": report.counts,
        "stabilized_at": report.stabilized_at,
        "kept": report.elements.len(),
    });
    if p.include_elements {
        result["elements"] = to_value(&report.elements);
    }
    let mut relation_count = None;
    if let Some(len) = p.relation_length {
        let rel = relation_search(&gens, len, cap_usize(m.caps.max_elements, DEFAULT_RELATION_CAP))?;
        let mut t = Table::new("relations", &["length", "word", "cyclically_reduced"]);
        for r in &rel.relations {
            t.push(vec![
                r.letters.len().into(),
                r.word.as_str().into(),
                r.cyclically_reduced.into(),
            ]);
        }
        tables.push(t);
        relation_count = Some(rel.relations.len());
        result["relations"] = to_value(&rel);
    }
    let summary = json!({
        "radius": p.radius,
        "size": report.counts.last(),
        "stabilized_at": report.stabilized_at,
        "relations": relation_count,
    });
    Ok(Outcome {
        result,
        summary,
        tables,
        items: 1,
        errors: Vec::new(),
    })
}
