use num_bigint::BigInt;
use proptest::prelude::*;
use thinlab_core::congruence::{congruence_graph, graph_spectrum, reduce_mod, ClosureOptions, SpectrumOptions};
use thinlab_core::diophantine::{
    apollonian_orbit_visit, descartes_form, swap, zaremba_forward, zaremba_scan, ApollonianOptions,
};
use thinlab_core::exact::{charpoly, fixed_form_space};
use thinlab_core::group::{ball_enumerate, random_walk_word, BallOptions, Word};
use thinlab_core::lattice::{cartan_involution, cartan_roots, QuadLattice};
use thinlab_core::rotation::{check_rotation, gamma_generators, harmonic_block};
use thinlab_core::{GenSet, IntMatrix};

fn unimodular(seed: [i64; 4]) -> IntMatrix {
    // product of elementary matrices, so the determinant is 1
    let e = |i: usize, j: usize, k: i64| {
        let mut m = IntMatrix::identity(3);
        m.set(i, j, BigInt::from(k));
        m
    };
    e(0, 1, seed[0]) * e(1, 2, seed[1]) * e(2, 0, seed[2]) * e(1, 0, seed[3])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn charpoly_is_a_conjugation_invariant(
        a in prop::array::uniform9(-4i64..=4),
        seed in prop::array::uniform4(-3i64..=3),
    ) {
        let m = IntMatrix::from_rows(&[&a[0..3], &a[3..6], &a[6..9]]).unwrap();
        let p = unimodular(seed);
        let conj = &(&p * &m) * &p.inverse().unwrap();
        prop_assert_eq!(charpoly(&m), charpoly(&conj));
        let cp = charpoly(&m);
        prop_assert_eq!(cp.degree(), Some(3));
        prop_assert_eq!(cp.coeff(0), -m.det());
    }

    #[test]
    fn walk_words_evaluate_exactly(seed in any::<u64>(), len in 0usize..12) {
        let s = GenSet::unipotent_pair(2);
        let w = random_walk_word(&s, len, seed);
        let again = Word::evaluate(&s, w.letters.clone());
        prop_assert_eq!(&w.matrix, &again.matrix);
        let mut product = IntMatrix::identity(2);
        for &i in &w.letters {
            product = &product * &s.gens()[i];
        }
        prop_assert_eq!(w.matrix, product);
    }

    #[test]
    fn reduction_keeps_determinant_mod_q(seed in prop::array::uniform4(-6i64..=6), q in 2u64..40) {
        let m = unimodular(seed);
        let r = reduce_mod(&m, q).unwrap();
        prop_assert_eq!(r.det(), 1 % q);
    }

    #[test]
    fn descartes_swaps_stay_on_the_quadric(word in prop::collection::vec(0usize..4, 0..20)) {
        let mut x = [-1, 2, 2, 3];
        for i in word {
            x = swap(x, i);
            prop_assert_eq!(descartes_form(x), 0);
        }
    }

    #[test]
    fn zaremba_partitions_the_range(a in 1u64..4, q_max in 1u64..400) {
        let r = zaremba_scan(a, q_max).unwrap();
        let mut all: Vec<u64> = r.achieved.iter().chain(&r.exceptions).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (1..=q_max).collect::<Vec<_>>());
        prop_assert_eq!(r.achieved.clone(), zaremba_forward(a, q_max).unwrap().achieved);
    }

    #[test]
    fn rotation_blocks_are_orthogonal(m in 3u32..8, n in 3u32..8, l in 0usize..7) {
        let s = gamma_generators(m, n).unwrap();
        for g in &s.gens {
            check_rotation(g, 1e-12).unwrap();
            let b = harmonic_block(g, l).unwrap();
            let d = 2 * l + 1;
            for i in 0..d {
                for j in 0..d {
                    let dot: f64 = (0..d).map(|k| b[k * d + i] * b[k * d + j]).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((dot - want).abs() < 1e-9);
                }
            }
        }
    }
}

#[test]
fn ball_counts_are_monotone() {
    let r = ball_enumerate(&GenSet::sl2_standard(), 6, &BallOptions::default()).unwrap();
    assert_eq!(r.counts[0], 1);
    assert!(r.counts.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(*r.counts.last().unwrap(), r.elements.len());
}

#[test]
fn congruence_graph_is_regular_with_unit_top() {
    let s = GenSet::sl2_standard();
    for q in [3u64, 5, 7, 11] {
        let (res, graph) = congruence_graph(&s, q, &ClosureOptions::default()).unwrap();
        let graph = graph.unwrap();
        graph.validate().unwrap();
        assert_eq!(graph.neighbors.len(), graph.vertex_count() * s.len());
        assert_eq!(res.target_order.unwrap() % res.order.unwrap() as u128, 0);
        let spec = graph_spectrum(&graph, &SpectrumOptions::default()).unwrap();
        assert!((spec.lambda1 - 1.0).abs() < 1e-10);
        assert!(spec.top.iter().all(|x| x.abs() <= 1.0 + 1e-10));
    }
}

#[test]
fn fixed_forms_are_invariant() {
    let s = GenSet::sl2_standard();
    let space = fixed_form_space(s.gens()).unwrap();
    assert_eq!(space.dim(), 1);
    for f in &space.basis {
        for g in s.gens() {
            assert_eq!(&f.congruent_by(g), f);
        }
    }
}

#[test]
fn roots_and_involutions() {
    let l = QuadLattice::from_rows(&[[2, 1, 0], [1, 2, 0], [0, 0, -2]]).unwrap();
    let roots = cartan_roots(&l, 3).unwrap();
    assert!(!roots.is_empty());
    for r in &roots {
        assert_eq!(l.norm(&r.v), -2);
        let inv = cartan_involution(&l, &r.v).unwrap();
        assert!((&inv * &inv).is_identity());
        assert_eq!(&(&inv.transpose() * &l.gram) * &inv, l.gram);
    }
}

#[test]
fn apollonian_visits_lie_on_the_quadric() {
    let mut seen = 0usize;
    let report = apollonian_orbit_visit([-1, 2, 2, 3], 200, &ApollonianOptions::default(), |x| {
        assert_eq!(descartes_form(*x), 0);
        seen += 1;
    })
    .unwrap();
    assert!(seen > 0);
    assert!(report.distinct_curvatures().iter().all(|&c| c <= 200));
}
