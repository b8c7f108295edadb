//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! criteria run one at a time so that their wall-clock budgets are
//! measured without contention. Run with `-- --nocapture` to see the lines.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thinlab_cli::bundle::{render, Format};
use thinlab_cli::{execute, Manifest};
use thinlab_core::congruence::{
    closure_mod, congruence_graph, dense_spectrum, expander_scan, graph_spectrum, ClosureOptions, ScanOptions,
    SpectrumOptions,
};
use thinlab_core::diophantine::{
    apollonian_orbit, apollonian_orbit_oracle, apollonian_orbit_visit, zaremba_forward, zaremba_scan, ApollonianOptions,
};
use thinlab_core::group::{ball_enumerate, relation_search, BallOptions};
use thinlab_core::lattice::{cartan_involution, min_distance_graph, QuadLattice};
use thinlab_core::monodromy::{build_monodromy, classify_closure, family_catalog, ClosureTag, Family};
use thinlab_core::rotation::{assemble_t, gamma_generators, gamma_generators_exact, tsigma_gap};
use thinlab_core::spectral::jacobi_eigen;
use thinlab_core::{GenSet, IntMatrix};

type EdgeSet = HashSet<(Vec<i64>, Vec<i64>)>;

static SERIAL: Mutex<()> = Mutex::new(());

#[derive(Default)]
struct Checks {
    failures: Vec<String>,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

fn criterion(id: u32, title: &str, budget: Duration, body: impl FnOnce(&mut Checks)) {
    let _serial = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let mut checks = Checks::default();
    let start = Instant::now();
    body(&mut checks);
    let elapsed = start.elapsed();
    checks.check(elapsed <= budget, || {
        format!("runtime {elapsed:.2?} exceeds {budget:?}")
    });
    let verdict = if checks.failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {id:>2}: {verdict} {title} [{:.2}s]", elapsed.as_secs_f64());
    for f in &checks.failures {
        println!("    {f}");
    }
    assert!(
        checks.failures.is_empty(),
        "criterion {id} failed: {:#?}",
        checks.failures
    );
}

fn m(rows: &[[i64; 4]]) -> IntMatrix {
    IntMatrix::from_rows(rows).unwrap()
}

#[test]
fn c01_rank_four_dwork_matrices() {
    criterion(1, "rank-four Dwork monodromy matrices", Duration::from_secs(1), |c| {
        let t = build_monodromy(&family_catalog(Family::Dwork, 4).unwrap()).unwrap();
        let a = m(&[[0, 0, 0, -1], [1, 0, 0, -1], [0, 1, 0, -1], [0, 0, 1, -1]]);
        let cm = m(&[[1, 0, 0, 5], [0, 1, 0, -5], [0, 0, 1, 5], [0, 0, 0, 1]]);
        c.check(t.a == a, || format!("A = {:?}", t.a.to_i64_rows()));
        c.check(t.c == cm, || format!("C = {:?}", t.c.to_i64_rows()));
        c.check(t.a.pow(5).is_identity(), || "A^5 != I".into());
        let id = IntMatrix::identity(4);
        let sum = (1..=4).fold(id, |acc, k| acc.add(&t.a.pow(k)));
        c.check(sum.entries().iter().all(|e| *e == 0.into()), || {
            "A^4 + A^3 + A^2 + A + I != 0".into()
        });
        c.check(&t.a * &t.c == t.b, || "A C != B".into());
    });
}

#[test]
fn c02_closure_classification() {
    criterion(2, "Zariski closure classification", Duration::from_secs(10), |c| {
        for family in [Family::Dwork, Family::SymplecticArithmetic] {
            let class = classify_closure(&family_catalog(family, 4).unwrap()).unwrap();
            c.check(class.tag == ClosureTag::Symplectic, || {
                format!("{family} n=4: {:?}", class.tag)
            });
        }
        for family in [Family::HyperbolicA, Family::HyperbolicB] {
            for n in [5usize, 7] {
                let class = classify_closure(&family_catalog(family, n).unwrap()).unwrap();
                c.check(class.tag == ClosureTag::Orthogonal, || {
                    format!("{family} n={n}: {:?}", class.tag)
                });
                let sig = class.signature.map(|s| (s.positive, s.negative, s.zero));
                c.check(sig == Some((n - 1, 1, 0)), || {
                    format!("{family} n={n}: signature {sig:?}")
                });
                c.check(class.hyperbolic, || format!("{family} n={n}: not flagged hyperbolic"));
            }
        }
    });
}

fn primes_of(mut q: u64) -> Vec<u64> {
    let mut ps = Vec::new();
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            ps.push(p);
            while q % p == 0 {
                q /= p;
            }
        }
        p += 1;
    }
    if q > 1 {
        ps.push(q);
    }
    ps
}

fn squarefree(q: u64) -> bool {
    (2..=q).take_while(|p| p * p <= q).all(|p| q % (p * p) != 0)
}

/// `|SL_2(Z/q)| = q^3 prod_{p | q} (1 - p^-2)`.
fn sl2_order(q: u64) -> u64 {
    primes_of(q)
        .into_iter()
        .fold(q * q * q, |acc, p| acc / (p * p) * (p * p - 1))
}

#[test]
fn c03_strong_approximation() {
    criterion(
        3,
        "strong approximation for SL2 generating sets",
        Duration::from_secs(120),
        |c| {
            let opts = ClosureOptions::default();
            let qs: Vec<u64> = (2..=50).filter(|&q| squarefree(q)).collect();
            let standard = GenSet::sl2_standard();
            let pair = GenSet::unipotent_pair(3);
            for &q in &qs {
                let r = closure_mod(&standard, q, &opts).unwrap();
                c.check(r.order == Some(sl2_order(q)), || {
                    format!("standard q={q}: order {:?}", r.order)
                });
                c.check(r.onto == Some(true), || format!("standard q={q}: not onto"));
                let r = closure_mod(&pair, q, &opts).unwrap();
                let onto = r.onto == Some(true);
                c.check(onto == (q % 3 != 0), || format!("unipotent pair q={q}: onto = {onto}"));
            }
        },
    );
}

fn second_largest(mut xs: Vec<f64>) -> (f64, f64, f64) {
    xs.sort_by(|a, b| b.total_cmp(a));
    (xs[0], xs[1], *xs.last().unwrap())
}

#[test]
fn c04_spectral_cross_validation() {
    criterion(
        4,
        "Lanczos against dense oracle, positive gaps up to q = 101",
        Duration::from_secs(600),
        |c| {
            let small: Vec<(GenSet, u64)> = (2..=17)
                .filter(|&q| squarefree(q))
                .map(|q| (GenSet::sl2_standard(), q))
                .chain([2, 5, 7, 10, 11, 13].map(|q| (GenSet::unipotent_pair(3), q)))
                .collect();
            for (s, q) in &small {
                let (_, graph) = congruence_graph(s, *q, &ClosureOptions::default()).unwrap();
                let graph = graph.unwrap();
                if graph.vertex_count() > 5000 {
                    continue;
                }
                let opts = SpectrumOptions {
                    dense_check_limit: 0,
                    ..SpectrumOptions::default()
                };
                let spec = graph_spectrum(&graph, &opts).unwrap();
                let (l1, l2, lmin) = second_largest(dense_spectrum(&graph).unwrap());
                c.check((l1 - 1.0).abs() <= 1e-10, || {
                    format!("q={q}: dense trivial eigenvalue {l1}")
                });
                c.check((spec.lambda1 - 1.0).abs() <= 1e-10, || {
                    format!("q={q}: lambda1 = {}", spec.lambda1)
                });
                let d2 = spec.lambda2.map(|x| (x - l2).abs());
                c.check(d2.is_some_and(|d| d <= 1e-8), || {
                    format!("q={q}: lambda2 off by {d2:?}")
                });
                let dm = spec.lambda_min.map(|x| (x - lmin).abs());
                c.check(dm.is_some_and(|d| d <= 1e-8), || {
                    format!("q={q}: lambda_min off by {dm:?}")
                });
            }

            let qs: Vec<u64> = (2..=101).filter(|&q| squarefree(q)).collect();
            let report = expander_scan(&GenSet::sl2_standard(), &qs, &ScanOptions::default()).unwrap();
            c.check(report.rows.len() == qs.len(), || "missing scan rows".into());
            for row in &report.rows {
                c.check(row.error.is_none(), || format!("q={}: {:?}", row.q, row.error));
                let Some(s) = &row.spectrum else { continue };
                c.check((s.lambda1 - 1.0).abs() <= 1e-10, || {
                    format!("q={}: lambda1 = {}", row.q, s.lambda1)
                });
                c.check(s.one_sided_gap.is_some_and(|g| g > 0.0), || {
                    format!("q={}: gap {:?}", row.q, s.one_sided_gap)
                });
                if let Some(d) = s.dense_max_diff {
                    c.check(d <= 1e-8, || format!("q={}: dense difference {d}", row.q));
                }
            }
        },
    );
}

/// Normal form in `Z/order * Z` of a word of `(is_second_factor, exponent)`
/// letters: adjacent syllables of the same factor merge, the first factor's
/// exponents are taken mod `order`, trivial syllables vanish.
fn free_product_normal_form(word: &[(bool, i64)], order: i64) -> Vec<(bool, i64)> {
    let mut out: Vec<(bool, i64)> = Vec::new();
    for &(second, e) in word {
        match out.last_mut() {
            Some((f, acc)) if *f == second => *acc += e,
            _ => out.push((second, e)),
        }
        let (f, acc) = *out.last().unwrap();
        let trivial = if f { acc == 0 } else { acc.rem_euclid(order) == 0 };
        if trivial {
            out.pop();
        }
    }
    out
}

#[test]
fn c05_relation_search() {
    criterion(5, "relation search", Duration::from_secs(300), |c| {
        let t = build_monodromy(&family_catalog(Family::Dwork, 4).unwrap()).unwrap();
        let s = GenSet::new(vec![("A", t.a.clone()), ("C", t.c.clone())]).unwrap();
        let is_c = |i: usize| s.labels()[i].starts_with('C');
        let r = relation_search(&s, 8, 10_000_000).unwrap();
        let a5 = r
            .relations
            .iter()
            .any(|rel| rel.letters.len() == 5 && rel.letters.iter().all(|&i| !is_c(i)));
        c.check(a5, || "A^5 = I not found".into());
        c.check(t.a.pow(5).is_identity(), || "A^5 != I".into());
        // Every relation must already hold in Z/5 * Z, i.e. follow from A^5.
        for rel in &r.relations {
            let syllables: Vec<(bool, i64)> = rel
                .letters
                .iter()
                .map(|&i| (is_c(i), if s.labels()[i].ends_with("^-1") { -1 } else { 1 }))
                .collect();
            let reduced = free_product_normal_form(&syllables, 5);
            c.check(reduced.is_empty(), || {
                format!("relation beyond A^5: {} -> {reduced:?}", rel.word)
            });
        }
        let r = relation_search(&GenSet::unipotent_pair(3), 12, 10_000_000).unwrap();
        c.check(r.relations.is_empty(), || {
            format!("ping-pong pair relations: {:?}", r.relations)
        });
    });
}

/// Eigenvalues of a symmetric 3x3 integer matrix with an integer root of its
/// characteristic polynomial, by deflating that root.
fn sym3_spectrum(a: [[f64; 3]; 3]) -> Vec<f64> {
    let tr = a[0][0] + a[1][1] + a[2][2];
    let minors = a[0][0] * a[1][1] - a[0][1] * a[1][0] + a[0][0] * a[2][2] - a[0][2] * a[2][0] + a[1][1] * a[2][2]
        - a[1][2] * a[2][1];
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    let p = |x: f64| x * x * x - tr * x * x + minors * x - det;
    let root = (-12..=12)
        .map(f64::from)
        .find(|&x| p(x).abs() < 1e-9)
        .expect("integer eigenvalue");
    // Remaining quadratic x^2 - (tr - root) x + det / root, or from minors.
    let s = tr - root;
    let prod = minors - root * s;
    let disc = (s * s - 4.0 * prod).max(0.0).sqrt();
    let mut v = vec![root, (s + disc) / 2.0, (s - disc) / 2.0];
    v.sort_by(|x, y| y.total_cmp(x));
    v
}

#[test]
fn c06_rotation_blocks() {
    criterion(6, "rotation blocks", Duration::from_secs(60), |c| {
        let exact = gamma_generators_exact(4, 4).unwrap().expect("integral generators");
        let ball = ball_enumerate(&exact, 30, &BallOptions::default()).unwrap();
        c.check(ball.stabilized_at.is_some(), || "ball did not stabilize".into());
        c.check(ball.counts.last() == Some(&24), || {
            format!("closure size {:?}", ball.counts.last())
        });

        let g44 = gamma_generators(4, 4).unwrap();
        let t1 = assemble_t(&g44, 1).unwrap();
        let (vals, _) = jacobi_eigen(3, &t1);
        let mut vals = vals;
        vals.sort_by(|x, y| y.total_cmp(x));
        let mut raw = [[0.0; 3]; 3];
        for r in &g44.gens {
            for i in 0..3 {
                for j in 0..3 {
                    raw[i][j] += r[i][j] + r[j][i];
                }
            }
        }
        let oracle = sym3_spectrum(raw);
        for (k, expected) in [2.0, 2.0, 0.0].into_iter().enumerate() {
            c.check((vals[k] - expected).abs() <= 1e-10, || {
                format!("T1 eigenvalues {vals:?}")
            });
            c.check((oracle[k] - expected).abs() <= 1e-10, || {
                format!("oracle T1 eigenvalues {oracle:?}")
            });
        }
        let t0 = assemble_t(&g44, 0).unwrap();
        c.check(t0 == vec![4.0], || format!("T0 = {t0:?}"));

        let g33 = gamma_generators(3, 3).unwrap();
        let table = tsigma_gap(&g33, 20).unwrap();
        c.check(table.rows.len() == 21, || format!("{} rows", table.rows.len()));
        for row in &table.rows {
            c.check(row.error.is_none(), || format!("ell={}: {:?}", row.ell, row.error));
            let inside = row.lambda_max <= 4.0 + 1e-8 && row.lambda_min >= -4.0 - 1e-8;
            c.check(inside, || {
                format!("ell={}: [{}, {}]", row.ell, row.lambda_min, row.lambda_max)
            });
        }
    });
}

/// Random Gram matrix `P^T D P` with `D = diag(1, ..., 1, -1)` scaled
/// entrywise by small positive factors and `P` a product of elementary
/// unimodular matrices.
fn random_lattice(rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let n = rng.random_range(2..=5usize);
    let mut g = vec![vec![0i64; n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = if i + 1 == n {
            -rng.random_range(1..=2)
        } else {
            rng.random_range(1..=2)
        };
    }
    for _ in 0..rng.random_range(0..=3) {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i == j {
            continue;
        }
        let k: i64 = rng.random_range(-1..=1);
        // Column and row operation e_j -> e_j + k e_i.
        for row in g.iter_mut() {
            row[j] += k * row[i];
        }
        let ri = g[i].clone();
        for (x, y) in g[j].iter_mut().zip(&ri) {
            *x += k * y;
        }
    }
    g
}

fn bilinear(g: &[Vec<i64>], u: &[i64], v: &[i64]) -> i64 {
    (0..g.len())
        .map(|i| (0..g.len()).map(|j| u[i] * g[i][j] * v[j]).sum::<i64>())
        .sum()
}

#[test]
fn c07_cartan_machinery() {
    criterion(
        7,
        "Cartan involutions and minimum-distance graphs",
        Duration::from_secs(120),
        |c| {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let mut roots_seen = 0usize;
            let mut edges_seen = 0usize;
            for trial in 0..100 {
                let g = random_lattice(&mut rng);
                let lattice = QuadLattice::from_rows(&g).unwrap();
                let gram = IntMatrix::from_rows(&g).unwrap();
                let id = IntMatrix::identity(g.len());
                let mut prev: Option<(HashSet<Vec<i64>>, EdgeSet)> = None;
                for height in 1..=3 {
                    let graph = min_distance_graph(&lattice, height, 1_000_000).unwrap();
                    let verts: HashSet<Vec<i64>> = graph.vertices.iter().map(|r| r.v.clone()).collect();
                    let edges: HashSet<(Vec<i64>, Vec<i64>)> = graph
                        .edges
                        .iter()
                        .map(|&(i, j)| {
                            let (a, b) = (graph.vertices[i].v.clone(), graph.vertices[j].v.clone());
                            if a <= b {
                                (a, b)
                            } else {
                                (b, a)
                            }
                        })
                        .collect();
                    if let Some((pv, pe)) = &prev {
                        c.check(pv.is_subset(&verts), || {
                            format!("lattice {trial}: vertices shrink at height {height}")
                        });
                        c.check(pe.is_subset(&edges), || {
                            format!("lattice {trial}: edges shrink at height {height}")
                        });
                    }
                    for &(i, j) in &graph.edges {
                        let (u, v) = (&graph.vertices[i].v, &graph.vertices[j].v);
                        let restricted = [
                            bilinear(&g, u, u),
                            bilinear(&g, u, v),
                            bilinear(&g, v, u),
                            bilinear(&g, v, v),
                        ];
                        c.check(restricted == [-2, -3, -3, -2], || {
                            format!("lattice {trial}: edge Gram {restricted:?}")
                        });
                    }
                    if height == 3 {
                        roots_seen += graph.vertices.len();
                        edges_seen += graph.edges.len();
                        for root in &graph.vertices {
                            c.check(bilinear(&g, &root.v, &root.v) == -2, || {
                                format!("lattice {trial}: {:?}", root.v)
                            });
                            let r = cartan_involution(&lattice, &root.v).unwrap();
                            c.check(&(&r.transpose() * &gram) * &r == gram, || {
                                format!("lattice {trial}: r^T G r != G")
                            });
                            c.check(&r * &r == id, || format!("lattice {trial}: r^2 != I"));
                        }
                    }
                    prev = Some((verts, edges));
                }
            }
            c.check(roots_seen > 0 && edges_seen > 0, || {
                format!("degenerate sample: {roots_seen} roots, {edges_seen} edges")
            });
        },
    );
}

/// Partial quotients of `b / q` by Euclid's algorithm.
fn quotients(b: u64, q: u64) -> Vec<u64> {
    let (mut x, mut y) = (q, b);
    let mut out = Vec::new();
    while y > 0 {
        out.push(x / y);
        (x, y) = (y, x % y);
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `q` is achieved when some `b` coprime to `q` has quotients bounded by `a`,
/// where the last quotient may be `a + 1` (it can be split as `a, 1`).
fn achieved_oracle(a: u64, q_max: u64) -> BTreeSet<u64> {
    (1..=q_max)
        .filter(|&q| {
            q == 1
                || (1..q).any(|b| {
                    if gcd(b, q) != 1 {
                        return false;
                    }
                    let cf = quotients(b, q);
                    let (last, init) = cf.split_last().unwrap();
                    init.iter().all(|&x| x <= a) && *last <= a + 1
                })
        })
        .collect()
}

#[test]
fn c08_zaremba() {
    criterion(8, "Zaremba scans", Duration::from_secs(300), |c| {
        let fib: BTreeSet<u64> = [1, 2, 3, 5, 8, 13, 21, 34, 55, 89].into();
        let r1 = zaremba_scan(1, 100).unwrap();
        let got: BTreeSet<u64> = r1.achieved.iter().copied().collect();
        c.check(got == fib, || format!("A=1 achieved {got:?}"));

        let q_max = 10_000;
        let scan = zaremba_scan(5, q_max).unwrap();
        let forward = zaremba_forward(5, q_max).unwrap();
        let oracle_achieved = achieved_oracle(5, q_max);
        let oracle_exceptions: Vec<u64> = (1..=q_max).filter(|q| !oracle_achieved.contains(q)).collect();
        c.check(scan.exceptions == oracle_exceptions, || {
            format!("A=5 exceptions {:?}", scan.exceptions)
        });
        c.check(forward.exceptions == oracle_exceptions, || {
            format!("forward exceptions {:?}", forward.exceptions)
        });
        c.check(scan.exceptions.is_empty(), || {
            format!("A=5 has exceptions {:?}", scan.exceptions)
        });

        let mut prev: Option<BTreeSet<u64>> = None;
        for a in 1..=5 {
            let r = zaremba_scan(a, 2000).unwrap();
            let cur: BTreeSet<u64> = r.achieved.iter().copied().collect();
            if let Some(p) = &prev {
                c.check(p.is_subset(&cur), || format!("achieved set shrinks at A={a}"));
            }
            prev = Some(cur);
        }
    });
}

/// Breadth-first walk over reduced swap words, trying moves in reverse
/// order, keeping circles with curvature at most `bound`.
fn curvatures_reverse_bfs(root: [i64; 4], bound: i64) -> BTreeSet<i64> {
    let mut seen: BTreeSet<i64> = root.into_iter().collect();
    let mut queue = VecDeque::from([(root, 4usize)]);
    while let Some((x, last)) = queue.pop_front() {
        for i in (0..4).rev().filter(|&i| i != last) {
            let sum: i64 = x.iter().sum();
            let mut y = x;
            y[i] = 2 * (sum - x[i]) - x[i];
            if y[i] <= bound {
                seen.insert(y[i]);
                queue.push_back((y, i));
            }
        }
    }
    seen
}

#[test]
fn c09_apollonian() {
    criterion(9, "Apollonian curvature orbit", Duration::from_secs(60), |c| {
        let root = [-1, 2, 2, 3];
        let bound = 1000;
        let mut visited = 0usize;
        let mut bad = Vec::new();
        let report = apollonian_orbit_visit(root, bound, &ApollonianOptions::default(), |x| {
            visited += 1;
            let s: i128 = x.iter().map(|&a| a as i128).sum();
            let q: i128 = x.iter().map(|&a| (a as i128) * (a as i128)).sum();
            if 2 * q != s * s {
                bad.push(*x);
            }
        })
        .unwrap();
        c.check(visited > 1, || "nothing visited".into());
        c.check(bad.is_empty(), || {
            format!("{} quadruples off the quadric, e.g. {:?}", bad.len(), bad.first())
        });

        let forward: BTreeSet<i64> = report.distinct_curvatures().into_iter().collect();
        let reverse = curvatures_reverse_bfs(root, bound);
        c.check(forward == reverse, || {
            format!(
                "curvature sets differ: {:?}",
                forward.symmetric_difference(&reverse).take(10).collect::<Vec<_>>()
            )
        });
        let dfs: BTreeSet<i64> = apollonian_orbit_oracle(root, bound, 24)
            .unwrap()
            .distinct_curvatures()
            .into_iter()
            .collect();
        c.check(forward == dfs, || "depth-first enumeration disagrees".into());

        let ladder: Vec<(i64, f64)> = (1..=10)
            .map(|k| {
                let b = 100 * k;
                (
                    b,
                    apollonian_orbit(root, b, &ApollonianOptions::default())
                        .unwrap()
                        .density,
                )
            })
            .collect();
        for w in ladder.windows(2) {
            c.check(w[1].1 >= w[0].1, || {
                format!(
                    "achieved density drops from {:.4} at bound {} to {:.4} at bound {}",
                    w[0].1, w[0].0, w[1].1, w[1].0
                )
            });
        }
    });
}

fn manifests() -> Vec<Manifest> {
    [
        "kind = \"expander\"\nseed = 11\n[params]\nq_list = [2, 3, 5, 6, 7]\n",
        "kind = \"monodromy\"\n[params]\nranks = [3, 4, 5]\n",
        "kind = \"cartan\"\n[params]\ngram = [[2, 1, 0, 0], [1, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, -2]]\nheight = 2\n",
        "kind = \"rotation\"\n[params]\nm = 4\nn = 4\nmax_ell = 6\n",
        "kind = \"zaremba\"\n[params]\na = 3\nq_max = 300\ncross_check = true\n",
        "kind = \"apollonian\"\n[params]\nbound = 300\ncross_check = true\n",
        "kind = \"walk\"\nseed = 5\n[params]\nlengths = [4, 8]\ntrials = 20\n[params.generators]\npreset = \"unipotent-pair\"\nk = 2\n",
        "kind = \"ball\"\n[params]\nradius = 4\nrelation_length = 6\n",
    ]
    .iter()
    .map(|t| Manifest::from_toml(t).unwrap())
    .collect()
}

#[test]
fn c10_determinism() {
    criterion(
        10,
        "re-runs with a fixed seed are byte-identical",
        Duration::from_secs(120),
        |c| {
            for m in manifests() {
                for format in [Format::Json, Format::Csv] {
                    let first = render(&m, &execute(&m).unwrap(), format).unwrap();
                    let second = render(&m, &execute(&m).unwrap(), format).unwrap();
                    c.check(first == second, || {
                        format!("{} ({format:?}) differs between runs", m.kind)
                    });
                }
            }

            let bin = env!("CARGO_BIN_EXE_thinlab");
            let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
            let manifest = dirs[0].path().join("walk.toml");
            std::fs::write(
                &manifest,
                "kind = \"walk\"\nseed = 9\n[params]\nlengths = [6]\ntrials = 30\n",
            )
            .unwrap();
            for d in &dirs {
                let status = std::process::Command::new(bin)
                    .args(["run", "--manifest"])
                    .arg(&manifest)
                    .arg("--out")
                    .arg(d.path().join("out"))
                    .output()
                    .unwrap()
                    .status;
                c.check(status.success(), || format!("thinlab exited with {status}"));
            }
            for name in ["bundle.json", "result.json"] {
                let a = std::fs::read(dirs[0].path().join("out").join(name)).unwrap_or_default();
                let b = std::fs::read(dirs[1].path().join("out").join(name)).unwrap_or_default();
                c.check(!a.is_empty() && a == b, || {
                    format!("{name} differs between binary runs")
                });
            }
        },
    );
}
