//! Experiment manifests: one `kind`, a `params` table checked against the
//! schema of that kind, a seed, an optional output directory and resource
//! caps. TOML is the primary format; JSON is accepted when the file ends in
//! `.json`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thinlab_core::monodromy::{build_monodromy, family_catalog, Family};
use thinlab_core::{GenSet, IntMatrix};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Expander,
    Monodromy,
    Cartan,
    Rotation,
    Zaremba,
    Apollonian,
    Walk,
    Ball,
}

impl Kind {
    pub const ALL: [Kind; 8] = [
        Kind::Expander,
        Kind::Monodromy,
        Kind::Cartan,
        Kind::Rotation,
        Kind::Zaremba,
        Kind::Apollonian,
        Kind::Walk,
        Kind::Ball,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Expander => "expander",
            Kind::Monodromy => "monodromy",
            Kind::Cartan => "cartan",
            Kind::Rotation => "rotation",
            Kind::Zaremba => "zaremba",
            Kind::Apollonian => "apollonian",
            Kind::Walk => "walk",
            Kind::Ball => "ball",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| CliError::schema(format!("unknown kind {s:?}")))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Caps {
    /// Group elements, graph vertices, words or circles, depending on kind.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_elements: Option<u64>,
    /// Operator applications of the eigensolver.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_secs: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub kind: Kind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub caps: Caps,
    #[serde(default = "empty_object")]
    pub params: Value,
}

fn empty_object() -> Value {
    Value::Object(Map::new())
}

impl Manifest {
    pub fn new(kind: Kind) -> Self {
        Manifest {
            kind,
            seed: 0,
            out: None,
            caps: Caps::default(),
            params: empty_object(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::schema(e.message().to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::schema(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if is_json {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        }
    }

    /// Overwrites top-level parameters with `overrides`.
    pub fn merge_params(&mut self, overrides: Map<String, Value>) -> Result<(), CliError> {
        let Value::Object(params) = &mut self.params else {
            return Err(CliError::schema("params must be a table"));
        };
        params.extend(overrides);
        Ok(())
    }

    /// Parses `params` into the schema of this manifest's kind.
    pub fn typed<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        serde_json::from_value(self.params.clone()).map_err(|e| CliError::schema(format!("{} params: {e}", self.kind)))
    }

    /// Parses and validates `params` for the declared kind.
    pub fn validate(&self) -> Result<Params, CliError> {
        if let Some(t) = self.caps.wall_clock_secs {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::schema("caps.wall_clock_secs must be positive"));
            }
        }
        if self.caps.max_elements == Some(0) || self.caps.max_iterations == Some(0) {
            return Err(CliError::schema("caps must be positive"));
        }
        let p = match self.kind {
            Kind::Expander => Params::Expander(self.typed()?),
            Kind::Monodromy => Params::Monodromy(self.typed()?),
            Kind::Cartan => Params::Cartan(self.typed()?),
            Kind::Rotation => Params::Rotation(self.typed()?),
            Kind::Zaremba => Params::Zaremba(self.typed()?),
            Kind::Apollonian => Params::Apollonian(self.typed()?),
            Kind::Walk => Params::Walk(self.typed()?),
            Kind::Ball => Params::Ball(self.typed()?),
        };
        p.check()?;
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Params {
    Expander(ExpanderParams),
    Monodromy(MonodromyParams),
    Cartan(CartanParams),
    Rotation(RotationParams),
    Zaremba(ZarembaParams),
    Apollonian(ApollonianParams),
    Walk(WalkParams),
    Ball(BallParams),
}

impl Params {
    fn check(&self) -> Result<(), CliError> {
        let fail = |msg: &str| Err(CliError::schema(msg.to_string()));
        match self {
            Params::Expander(p) => {
                p.generators.build()?;
                if p.q_list.is_empty() {
                    return fail("expander: q_list is empty");
                }
                if p.q_list.iter().any(|&q| q < 2) {
                    return fail("expander: every q must be at least 2");
                }
                if p.eigenvalues == 0 || p.basis < 4 {
                    return fail("expander: eigenvalues must be positive and basis at least 4");
                }
            }
            Params::Monodromy(p) => {
                for f in &p.families {
                    Family::from_str(f).map_err(|e| CliError::schema(e.to_string()))?;
                }
                if p.families.is_empty() && !p.calabi_yau {
                    return fail("monodromy: nothing to compute");
                }
            }
            Params::Cartan(p) => {
                let n = p.gram.len();
                if n < 2 || p.gram.iter().any(|r| r.len() != n) {
                    return fail("cartan: gram must be a square matrix of size at least 2");
                }
                if p.height < 0 {
                    return fail("cartan: height must be non-negative");
                }
            }
            Params::Rotation(p) => match (&p.generators, p.m, p.n) {
                (Some(g), None, None) if !g.is_empty() => {}
                (None, Some(m), Some(n)) if m >= 3 && n >= 3 => {}
                _ => return fail("rotation: give either m and n (both >= 3) or generators"),
            },
            Params::Zaremba(p) => {
                if p.a == 0 || p.q_max == 0 {
                    return fail("zaremba: a and q_max must be positive");
                }
            }
            Params::Apollonian(p) => {
                if p.bound < 1 || p.modulus == 0 {
                    return fail("apollonian: bound and modulus must be positive");
                }
            }
            Params::Walk(p) => {
                p.generators.build()?;
                if p.lengths.is_empty() || p.trials == 0 {
                    return fail("walk: lengths must be non-empty and trials positive");
                }
            }
            Params::Ball(p) => {
                p.generators.build()?;
                if p.norm_bound.is_some_and(|b| b < 1) {
                    return fail("ball: norm_bound must be positive");
                }
                if p.relation_length == Some(0) {
                    return fail("ball: relation_length must be positive");
                }
            }
        }
        Ok(())
    }
}

/// Generating set of an integer matrix group. Inverses are added
/// automatically.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GenSpec {
    /// `[[0,-1],[1,0]]` and `[[1,1],[0,1]]`.
    #[default]
    Sl2Standard,
    /// `[[1,k],[0,1]]` and `[[1,0],[k,1]]`.
    UnipotentPair { k: i64 },
    /// Monodromy matrices (`A`, `B`, `C`) of a catalog family.
    Hypergeometric {
        family: String,
        n: usize,
        #[serde(default = "default_pick")]
        pick: Vec<String>,
    },
    /// Explicit square integer matrices, row-major.
    Matrices { matrices: Vec<Vec<Vec<i64>>> },
}

fn default_pick() -> Vec<String> {
    vec!["A".into(), "B".into()]
}

impl GenSpec {
    pub fn build(&self) -> Result<GenSet, CliError> {
        let schema = |e: thinlab_core::Error| CliError::schema(e.to_string());
        match self {
            GenSpec::Sl2Standard => Ok(GenSet::sl2_standard()),
            GenSpec::UnipotentPair { k } => {
                if *k == 0 {
                    return Err(CliError::schema("unipotent-pair: k must be non-zero"));
                }
                Ok(GenSet::unipotent_pair(*k))
            }
            GenSpec::Hypergeometric { family, n, pick } => {
                let family = Family::from_str(family).map_err(schema)?;
                let t = build_monodromy(&family_catalog(family, *n).map_err(schema)?).map_err(schema)?;
                if pick.is_empty() {
                    return Err(CliError::schema("hypergeometric: pick is empty"));
                }
                let named = pick
                    .iter()
                    .map(|name| match name.as_str() {
                        "A" => Ok(("A", t.a.clone())),
                        "B" => Ok(("B", t.b.clone())),
                        "C" => Ok(("C", t.c.clone())),
                        other => Err(CliError::schema(format!("hypergeometric: unknown matrix {other:?}"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                GenSet::new(named).map_err(schema)
            }
            GenSpec::Matrices { matrices } => {
                if matrices.is_empty() {
                    return Err(CliError::schema("matrices: empty generating set"));
                }
                let ms = matrices
                    .iter()
                    .map(|rows| IntMatrix::from_rows(rows))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(schema)?;
                GenSet::from_matrices(ms).map_err(schema)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpanderParams {
    #[serde(default)]
    pub generators: GenSpec,
    pub q_list: Vec<u64>,
    #[serde(default)]
    pub allow_nonsquarefree: bool,
    /// Eigenvalues wanted from each end of the spectrum.
    #[serde(default = "default_eigenvalues")]
    pub eigenvalues: usize,
    #[serde(default = "default_basis")]
    pub basis: usize,
    /// Graphs up to this many vertices are also solved densely.
    #[serde(default = "default_dense_limit")]
    pub dense_check_limit: usize,
}

fn default_eigenvalues() -> usize {
    2
}

fn default_basis() -> usize {
    32
}

fn default_dense_limit() -> usize {
    5000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonodromyParams {
    #[serde(default = "all_families")]
    pub families: Vec<String>,
    /// Ranks to try; ranks a family does not admit are skipped.
    #[serde(default = "default_ranks")]
    pub ranks: Vec<usize>,
    /// Append the fourteen curated rank-four Calabi-Yau cases.
    #[serde(default = "yes")]
    pub calabi_yau: bool,
    #[serde(default = "yes")]
    pub include_matrices: bool,
}

fn all_families() -> Vec<String> {
    Family::ALL.iter().map(|f| f.name().to_string()).collect()
}

fn default_ranks() -> Vec<usize> {
    (2..=9).collect()
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CartanParams {
    /// Gram matrix of signature `(n-1, 1)`, row-major.
    pub gram: Vec<Vec<i64>>,
    /// Bound on `|v_i|`.
    pub height: i64,
    #[serde(default = "yes")]
    pub fingerprints: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotationParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Explicit rotation matrices, used instead of `m` and `n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<[[f64; 3]; 3]>>,
    #[serde(default = "default_max_ell")]
    pub max_ell: usize,
}

fn default_max_ell() -> usize {
    20
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZarembaMethod {
    /// Expand every `b / q`.
    #[default]
    Scan,
    /// Grow denominators from bounded partial quotients.
    Forward,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZarembaParams {
    pub a: u64,
    pub q_max: u64,
    #[serde(default)]
    pub method: ZarembaMethod,
    /// Run the other method as well and report any disagreement.
    #[serde(default)]
    pub cross_check: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApollonianParams {
    #[serde(default = "default_root")]
    pub root: [i64; 4],
    pub bound: i64,
    #[serde(default = "default_modulus")]
    pub modulus: u64,
    /// Also run the depth-first reference enumeration and compare.
    #[serde(default)]
    pub cross_check: bool,
}

fn default_root() -> [i64; 4] {
    [-1, 2, 2, 3]
}

fn default_modulus() -> u64 {
    24
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkParams {
    #[serde(default)]
    pub generators: GenSpec,
    pub lengths: Vec<usize>,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallParams {
    #[serde(default)]
    pub generators: GenSpec,
    pub radius: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm_bound: Option<i64>,
    /// Search for relations up to this word length.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation_length: Option<usize>,
    #[serde(default = "yes")]
    pub include_elements: bool,
}

/// Default output directory when neither the command line nor the manifest
/// names one.
pub fn default_out_dir(manifest: &Manifest, env: Option<PathBuf>) -> PathBuf {
    manifest
        .out
        .clone()
        .or(env)
        .unwrap_or_else(|| PathBuf::from("thinlab-out"))
}
