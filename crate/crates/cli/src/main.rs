use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use thinlab_cli::manifest::{default_out_dir, ZarembaMethod};
use thinlab_cli::{bundle, execute, CliError, Format, Kind, Manifest, Outcome};

const OUT_ENV: &str = "THINLAB_OUT";

#[derive(Parser)]
#[command(
    name = "thinlab",
    version,
    about = "Run thin-group experiments and write result bundles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Manifest file (TOML, or JSON when the name ends in .json).
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    /// Output directory [default: manifest `out`, then $THINLAB_OUT, then ./thinlab-out].
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for parallel items [default: all cores].
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Cap on enumerated elements (vertices, words, circles or roots).
    #[arg(long = "cap-elements", global = true)]
    cap_elements: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Run the manifest given with --manifest, whatever its kind.
    Run,
    /// Closure and spectral gap of congruence Cayley graphs.
    Expander(ExpanderArgs),
    /// Hypergeometric monodromy atlas.
    Monodromy(MonodromyArgs),
    /// Cartan roots and the minimum-distance graph of a hyperbolic lattice.
    Cartan(CartanArgs),
    /// Spectral gap of a rotation averaging operator on spherical harmonics.
    Rotation(RotationArgs),
    /// Denominators with bounded partial quotients.
    Zaremba(ZarembaArgs),
    /// Curvatures of an integral Apollonian packing.
    Apollonian(ApollonianArgs),
    /// Characteristic polynomials along random walks.
    Walk(WalkArgs),
    /// Word-metric balls and relation search.
    Ball(BallArgs),
}

/// Generating set: `sl2-standard`, `unipotent-pair:K`,
/// `hypergeometric:FAMILY:N[:A,B,C]` or `@FILE` with a JSON list of matrices.
#[derive(Args)]
struct GensArg {
    #[arg(long)]
    gens: Option<String>,
}

#[derive(Args)]
struct ExpanderArgs {
    #[command(flatten)]
    gens: GensArg,
    /// Moduli, comma separated.
    #[arg(long, value_delimiter = ',')]
    q: Vec<u64>,
    #[arg(long)]
    allow_nonsquarefree: bool,
    /// Eigenvalues from each end of the spectrum.
    #[arg(long)]
    eigenvalues: Option<usize>,
    #[arg(long)]
    basis: Option<usize>,
    #[arg(long)]
    dense_check_limit: Option<usize>,
}

#[derive(Args)]
struct MonodromyArgs {
    /// Family names, comma separated.
    #[arg(long, value_delimiter = ',')]
    family: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    ranks: Vec<usize>,
    /// Leave out the curated Calabi-Yau cases.
    #[arg(long)]
    no_calabi_yau: bool,
    #[arg(long)]
    no_matrices: bool,
}

#[derive(Args)]
struct CartanArgs {
    /// Gram matrix inline, rows separated by `;` and entries by `,`.
    #[arg(long, conflicts_with = "gram_file", allow_hyphen_values = true)]
    gram: Option<String>,
    /// Gram matrix file: one row per line, entries separated by spaces or commas.
    #[arg(long)]
    gram_file: Option<PathBuf>,
    #[arg(long)]
    height: Option<i64>,
    #[arg(long)]
    no_fingerprints: bool,
}

#[derive(Args)]
struct RotationArgs {
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long = "lmax", alias = "Lmax")]
    lmax: Option<usize>,
    /// JSON list of 3x3 rotation matrices.
    #[arg(long)]
    generators_file: Option<PathBuf>,
}

#[derive(Args)]
struct ZarembaArgs {
    /// Bound on the partial quotients.
    #[arg(long = "A")]
    a: Option<u64>,
    /// Largest denominator scanned.
    #[arg(long = "Q")]
    q: Option<u64>,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    #[arg(long)]
    cross_check: bool,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum MethodArg {
    Scan,
    Forward,
}

#[derive(Args)]
struct ApollonianArgs {
    /// Root quadruple `a,b,c,d`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    root: Vec<i64>,
    #[arg(long)]
    bound: Option<i64>,
    #[arg(long)]
    modulus: Option<u64>,
    #[arg(long)]
    cross_check: bool,
}

#[derive(Args)]
struct WalkArgs {
    #[command(flatten)]
    gens: GensArg,
    #[arg(long, value_delimiter = ',')]
    lengths: Vec<usize>,
    #[arg(long)]
    trials: Option<usize>,
}

#[derive(Args)]
struct BallArgs {
    #[command(flatten)]
    gens: GensArg,
    #[arg(long)]
    radius: Option<usize>,
    #[arg(long)]
    norm_bound: Option<i64>,
    /// Also search for relations up to this word length.
    #[arg(long)]
    relations: Option<usize>,
    #[arg(long)]
    no_elements: bool,
}

struct Overrides(Map<String, Value>);

impl Overrides {
    fn new() -> Self {
        Overrides(Map::new())
    }

    fn set(&mut self, key: &str, v: Option<Value>) {
        if let Some(v) = v {
            self.0.insert(key.to_string(), v);
        }
    }

    fn list<T: serde::Serialize>(&mut self, key: &str, xs: &[T]) {
        if !xs.is_empty() {
            self.0.insert(key.to_string(), json!(xs));
        }
    }

    fn flag(&mut self, key: &str, on: bool, value: bool) {
        if on {
            self.0.insert(key.to_string(), json!(value));
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn parse_gens(spec: &str) -> Result<Value, CliError> {
    if let Some(path) = spec.strip_prefix('@') {
        let matrices: Value =
            serde_json::from_str(&read(Path::new(path))?).map_err(|e| CliError::schema(format!("{path}: {e}")))?;
        return Ok(json!({ "preset": "matrices", "matrices": matrices }));
    }
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || CliError::schema(format!("unrecognized generating set {spec:?}"));
    match parts.as_slice() {
        ["sl2-standard"] => Ok(json!({ "preset": "sl2-standard" })),
        ["unipotent-pair", k] => {
            let k: i64 = k.parse().map_err(|_| bad())?;
            Ok(json!({ "preset": "unipotent-pair", "k": k }))
        }
        ["hypergeometric", family, n, rest @ ..] => {
            let n: usize = n.parse().map_err(|_| bad())?;
            let mut v = json!({ "preset": "hypergeometric", "family": family, "n": n });
            match rest {
                [] => {}
                [pick] => v["pick"] = json!(pick.split(',').collect::<Vec<_>>()),
                _ => return Err(bad()),
            }
            Ok(v)
        }
        _ => Err(bad()),
    }
}

fn parse_matrix(text: &str, row_sep: char) -> Result<Vec<Vec<i64>>, CliError> {
    text.split(row_sep)
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(|r| {
            r.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|x| !x.is_empty())
                .map(|x| {
                    x.parse::<i64>()
                        .map_err(|_| CliError::schema(format!("bad matrix entry {x:?}")))
                })
                .collect()
        })
        .collect()
}

fn overrides(command: &Command) -> Result<(Option<Kind>, Overrides), CliError> {
    let mut o = Overrides::new();
    let gens = |o: &mut Overrides, g: &GensArg| -> Result<(), CliError> {
        o.set("generators", g.gens.as_deref().map(parse_gens).transpose()?);
        Ok(())
    };
    let kind = match command {
        Command::Run => None,
        Command::Expander(a) => {
            gens(&mut o, &a.gens)?;
            o.list("q_list", &a.q);
            o.flag("allow_nonsquarefree", a.allow_nonsquarefree, true);
            o.set("eigenvalues", a.eigenvalues.map(|x| json!(x)));
            o.set("basis", a.basis.map(|x| json!(x)));
            o.set("dense_check_limit", a.dense_check_limit.map(|x| json!(x)));
            Some(Kind::Expander)
        }
        Command::Monodromy(a) => {
            o.list("families", &a.family);
            o.list("ranks", &a.ranks);
            o.flag("calabi_yau", a.no_calabi_yau, false);
            o.flag("include_matrices", a.no_matrices, false);
            Some(Kind::Monodromy)
        }
        Command::Cartan(a) => {
            let gram = match (&a.gram, &a.gram_file) {
                (Some(g), _) => Some(parse_matrix(g, ';')?),
                (None, Some(path)) => {
                    let text = read(path)?;
                    match serde_json::from_str::<Vec<Vec<i64>>>(&text) {
                        Ok(m) => Some(m),
                        Err(_) => Some(parse_matrix(&text, '\n')?),
                    }
                }
                (None, None) => None,
            };
            o.set("gram", gram.map(|g| json!(g)));
            o.set("height", a.height.map(|x| json!(x)));
            o.flag("fingerprints", a.no_fingerprints, false);
            Some(Kind::Cartan)
        }
        Command::Rotation(a) => {
            o.set("m", a.m.map(|x| json!(x)));
            o.set("n", a.n.map(|x| json!(x)));
            o.set("max_ell", a.lmax.map(|x| json!(x)));
            if let Some(path) = &a.generators_file {
                let g: Value = serde_json::from_str(&read(path)?)
                    .map_err(|e| CliError::schema(format!("{}: {e}", path.display())))?;
                o.set("generators", Some(g));
            }
            Some(Kind::Rotation)
        }
        Command::Zaremba(a) => {
            o.set("a", a.a.map(|x| json!(x)));
            o.set("q_max", a.q.map(|x| json!(x)));
            let method = a.method.map(|m| match m {
                MethodArg::Scan => ZarembaMethod::Scan,
                MethodArg::Forward => ZarembaMethod::Forward,
            });
            o.set("method", method.map(|m| json!(m)));
            o.flag("cross_check", a.cross_check, true);
            Some(Kind::Zaremba)
        }
        Command::Apollonian(a) => {
            if !a.root.is_empty() && a.root.len() != 4 {
                return Err(CliError::schema("--root takes four curvatures"));
            }
            o.list("root", &a.root);
            o.set("bound", a.bound.map(|x| json!(x)));
            o.set("modulus", a.modulus.map(|x| json!(x)));
            o.flag("cross_check", a.cross_check, true);
            Some(Kind::Apollonian)
        }
        Command::Walk(a) => {
            gens(&mut o, &a.gens)?;
            o.list("lengths", &a.lengths);
            o.set("trials", a.trials.map(|x| json!(x)));
            Some(Kind::Walk)
        }
        Command::Ball(a) => {
            gens(&mut o, &a.gens)?;
            o.set("radius", a.radius.map(|x| json!(x)));
            o.set("norm_bound", a.norm_bound.map(|x| json!(x)));
            o.set("relation_length", a.relations.map(|x| json!(x)));
            o.flag("include_elements", a.no_elements, false);
            Some(Kind::Ball)
        }
    };
    Ok((kind, o))
}

fn build_manifest(cli: &Cli) -> Result<Manifest, CliError> {
    let (kind, o) = overrides(&cli.command)?;
    let mut m = match (&cli.manifest, kind) {
        (Some(path), kind) => {
            let m = Manifest::load(path)?;
            if let Some(k) = kind {
                if k != m.kind {
                    return Err(CliError::schema(format!(
                        "manifest kind {} does not match subcommand {k}",
                        m.kind
                    )));
                }
            }
            m
        }
        (None, Some(k)) => Manifest::new(k),
        (None, None) => return Err(CliError::schema("run needs --manifest")),
    };
    m.merge_params(o.0)?;
    if let Some(seed) = cli.seed {
        m.seed = seed;
    }
    if let Some(cap) = cli.cap_elements {
        m.caps.max_elements = Some(cap);
    }
    Ok(m)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let m = match build_manifest(&cli) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(thinlab_cli::error::EXIT_INVALID as u8);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("global thread pool is configured once");
    }
    let threads = rayon::current_num_threads();
    let out = cli
        .out
        .clone()
        .unwrap_or_else(|| default_out_dir(&m, std::env::var_os(OUT_ENV).map(PathBuf::from)));

    let outcome = match execute(&m) {
        Ok(o) => o,
        Err(e @ CliError::Schema(_)) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
        Err(e) => {
            eprintln!("error: {e}");
            Outcome::failed(&e)
        }
    };
    match bundle::write(&out, &m, &outcome, cli.format, threads) {
        Ok(files) => {
            for e in &outcome.errors {
                eprintln!(
                    "{}: {}: {}",
                    e.item,
                    serde_json::to_value(e.category).unwrap(),
                    e.message
                );
            }
            println!(
                "{} {}: {} files in {}",
                m.kind,
                outcome.status(),
                files.len(),
                out.display()
            );
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
