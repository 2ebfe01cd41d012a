use std::collections::BTreeSet;
use std::sync::Arc;
use std::thread;

use num_bigint::BigUint;
use path_ideals::closed_forms::{binomial, has_linear_resolution, linear_strand, regularity_bound};
use path_ideals::corpus::{random_tree, rooted_tree_shapes_up_to};
use path_ideals::oracle::{
    brute_force_disjoint_paths, hochster_betti, Characteristic, SquarefreeIdeal,
};
use path_ideals::resolution::{colon_components, Resolver};
use path_ideals::tree::{build_forest, RootedForest, Vertex};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random rooted forest: vertex `k + 2` hangs under an earlier vertex or
/// starts a new component, then identifiers are scrambled.
fn arb_forest(max: usize) -> impl Strategy<Value = RootedForest> {
    (
        prop::collection::vec((any::<prop::sample::Index>(), 0u8..8), 0..max),
        any::<u64>(),
    )
        .prop_map(|(choices, seed)| {
            use rand::seq::SliceRandom;
            let n = choices.len() + 1;
            let mut ids: Vec<Vertex> = (1..=(2 * n) as Vertex).collect();
            ids.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let edges: Vec<(Vertex, Vertex)> = choices
                .iter()
                .enumerate()
                .filter(|(_, (_, new_root))| *new_root != 0)
                .map(|(k, (idx, _))| (ids[idx.index(k + 1)], ids[k + 1]))
                .collect();
            build_forest(edges, ids[..n].iter().copied()).unwrap()
        })
}

fn arb_tree(max: usize) -> impl Strategy<Value = RootedForest> {
    (1..=max, any::<u64>())
        .prop_map(|(n, seed)| random_tree(&mut ChaCha8Rng::seed_from_u64(seed), n))
}

fn descendants_at_distance(f: &RootedForest, v: Vertex, d: usize) -> usize {
    let mut frontier = vec![v];
    for _ in 0..d {
        frontier = frontier
            .iter()
            .flat_map(|&u| f.children(u).to_vec())
            .collect();
    }
    frontier.len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn path_count_matches_descendant_count(f in arb_forest(12), t in 1usize..6) {
        let expected: usize = f.vertices().map(|v| descendants_at_distance(&f, v, t - 1)).sum();
        prop_assert_eq!(f.paths(t).len(), expected);
        let paths = f.paths(t);
        prop_assert!(paths.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn deleting_a_leaf_drops_exactly_its_paths(f in arb_forest(12), t in 1usize..5) {
        for leaf in f.leaves() {
            let before: BTreeSet<Vec<Vertex>> =
                f.paths(t).into_iter().map(|p| p.into_vec()).collect();
            let after: BTreeSet<Vec<Vertex>> = f
                .delete_vertices([leaf]).unwrap()
                .paths(t).into_iter().map(|p| p.into_vec()).collect();
            let without_leaf: BTreeSet<Vec<Vertex>> =
                before.iter().filter(|p| !p.contains(&leaf)).cloned().collect();
            prop_assert_eq!(after, without_leaf);
        }
    }

    #[test]
    fn cleaning_is_idempotent_and_keeps_generators(f in arb_forest(12), t in 2usize..5) {
        let clean = f.clean_form(t);
        prop_assert_eq!(clean.clean_form(t), clean.clone());
        prop_assert_eq!(clean.paths(t), f.paths(t));
    }

    #[test]
    fn highest_leaf_path_is_deterministic(f in arb_tree(12), t in 1usize..5) {
        let a = f.highest_leaf_path(t);
        let b = f.clone().highest_leaf_path(t);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn broom_verdict_survives_relabelling(f in arb_tree(10), t in 2usize..5, seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut ids: Vec<Vertex> = (1..=100).collect();
        ids.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let g = f.relabel(|v| ids[v as usize - 1]).unwrap();
        let len = |x: &RootedForest| x.broom_handle(t).unwrap().map(|b| b.handle_length());
        prop_assert_eq!(len(&f), len(&g));
    }

    #[test]
    fn packing_matches_brute_force_on_forests(f in arb_forest(11), t in 1usize..5) {
        prop_assert_eq!(f.max_disjoint_paths(t), brute_force_disjoint_paths(&f, t));
    }

    #[test]
    fn tables_stay_on_or_above_diagonal(f in arb_forest(12), t in 1usize..5) {
        let table = Resolver::new().betti(&f, t).unwrap();
        prop_assert_eq!(table.get(0, 0), BigUint::from(1u32));
        prop_assert!(table.iter().all(|(i, j, _)| j >= i));
    }

    #[test]
    fn mapping_cone_step_adds_its_summands(f in arb_tree(11), t in 2usize..5) {
        prop_assume!(f.height() + 1 >= t);
        let r = Resolver::new();
        let leaf = f.highest_leaf_path(t).unwrap().path.last().unwrap();
        let step = r.mapping_cone_step(&f, t, leaf).unwrap();
        let deleted = Resolver::new().betti(&f.delete_vertices([leaf]).unwrap(), t).unwrap();
        prop_assert_eq!(&step.deleted_table, &deleted);
        let full = r.betti(&f, t).unwrap();
        for (i, j, c) in full.iter() {
            let shifted = if i >= 1 && j >= t { step.colon_table.get(i - 1, j - t) } else { BigUint::from(0u32) };
            prop_assert_eq!(c.clone(), deleted.get(i, j) + shifted);
        }
        prop_assert_eq!(step.combined(), full);
    }

    #[test]
    fn forests_match_oracle(f in arb_forest(8), t in 2usize..4) {
        let ideal = SquarefreeIdeal::path_ideal(&f, t).unwrap();
        prop_assert_eq!(
            Resolver::new().betti(&f, t).unwrap(),
            hochster_betti(&ideal, Characteristic::ZERO)
        );
    }
}

#[test]
fn colon_quotient_diagonal_is_koszul() {
    for tree in rooted_tree_shapes_up_to(9) {
        let h = tree.height();
        for t in 2..=4 {
            if h + 1 < t {
                continue;
            }
            let r = Resolver::new();
            let lp = tree.highest_leaf_path(t).unwrap();
            let x_prev = lp.path.vertices()[t - 2];
            let deg = tree.metrics().degree[&x_prev] as i64;
            let table = r.colon_table(&colon_components(&tree, t).unwrap()).unwrap();
            let m = if h + 1 == t && t != 2 {
                deg - 2
            } else {
                deg - 1
            };
            for i in 1..=10 {
                assert_eq!(
                    table.get(i, i),
                    binomial(m, i as i64),
                    "tree {} t={t} i={i}",
                    tree.canonical_form()
                );
            }
        }
    }
}

#[test]
fn closed_forms_on_all_small_shapes() {
    let r = Resolver::new();
    for tree in rooted_tree_shapes_up_to(9) {
        for t in 2..=4 {
            let table = r.betti(&tree, t).unwrap();
            let (_, reg) = table.invariants().unwrap();
            assert!(reg <= regularity_bound(&tree, t));
            for i in 1..=10 {
                assert_eq!(table.get(i + 1, i + t), linear_strand(&tree, t, i));
            }
            assert_eq!(has_linear_resolution(&tree, t), table.is_linear(t));
        }
    }
}

/// For a clean broom of height at most 2t-1 the projective dimension of
/// I_t is D-2 when t > 2 and the highest-level vertex of maximal degree D
/// sits at level t-2, and D-1 otherwise.
#[test]
fn broom_projective_dimension() {
    let r = Resolver::new();
    let mut checked = 0;
    for tree in rooted_tree_shapes_up_to(10) {
        for t in 2..=4 {
            let clean = tree.clean_form(t);
            if clean.is_empty() || clean != tree || !has_linear_resolution(&tree, t) {
                continue;
            }
            let m = tree.metrics();
            let d = *m.degree.values().max().unwrap();
            let v = tree
                .vertices()
                .filter(|v| m.degree[v] == d)
                .max_by_key(|v| m.level[v])
                .unwrap();
            let expected = if t > 2 && m.level[&v] + 2 == t {
                d - 2
            } else {
                d - 1
            };
            let pd_quotient = r.betti(&tree, t).unwrap().projective_dimension().unwrap();
            assert_eq!(
                pd_quotient - 1,
                expected,
                "tree {} t={t}",
                tree.canonical_form()
            );
            checked += 1;
        }
    }
    assert!(checked > 50);
}

#[test]
fn shared_resolver_matches_sequential_results() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let trees: Vec<RootedForest> = (0..24).map(|k| random_tree(&mut rng, 6 + k % 8)).collect();
    let expected: Vec<_> = trees
        .iter()
        .map(|t| Resolver::new().betti(t, 3).unwrap())
        .collect();
    let shared = Arc::new(Resolver::new());
    let trees = Arc::new(trees);
    let handles: Vec<_> = (0..6)
        .map(|w| {
            let shared = Arc::clone(&shared);
            let trees = Arc::clone(&trees);
            thread::spawn(move || {
                (0..trees.len())
                    .map(|k| (k + w) % trees.len())
                    .map(|k| (k, shared.betti(&trees[k], 3).unwrap()))
                    .collect::<Vec<_>>()
            })
        })
        .collect();
    for h in handles {
        for (k, table) in h.join().unwrap() {
            assert_eq!(table, expected[k]);
        }
    }
}

#[test]
fn large_counts_exceed_machine_words() {
    // star with 80 leaves at t = 2 has C(80, 40) on the linear strand
    let star = RootedForest::star(80);
    let table = Resolver::new().betti(&star, 2).unwrap();
    assert_eq!(table.get(40, 41), linear_strand(&star, 2, 39));
    assert!(table.get(40, 41) > BigUint::from(u64::MAX));
}
