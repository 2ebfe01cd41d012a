//! Tree families used for exhaustive and randomized checking.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::tree::{build_forest, RootedForest, Vertex};

/// The 13-vertex example tree rooted at 1.
pub fn example_tree() -> RootedForest {
    build_forest(
        [
            (1, 2),
            (1, 3),
            (1, 4),
            (2, 5),
            (2, 6),
            (4, 7),
            (4, 8),
            (4, 9),
            (5, 10),
            (8, 11),
            (8, 12),
            (12, 13),
        ],
        [],
    )
    .expect("static edge list is a tree")
}

/// Every tree on vertices `1..=n` whose parent array satisfies
/// `parent(k) < k`; there are `(n-1)!` of them and every rooted tree shape
/// appears among them.
pub fn parent_array_trees(n: usize) -> Vec<RootedForest> {
    if n == 0 {
        return Vec::new();
    }
    // choice[k] in 0..k picks parent k (1-based) for vertex k + 2
    let mut choice = vec![0usize; n - 1];
    let mut out = Vec::new();
    loop {
        let edges = choice
            .iter()
            .enumerate()
            .map(|(k, &c)| ((c + 1) as Vertex, (k + 2) as Vertex));
        out.push(build_forest(edges, [1]).expect("parent array is a tree"));
        let mut k = 0;
        loop {
            if k == choice.len() {
                return out;
            }
            choice[k] += 1;
            if choice[k] <= k {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// One representative per isomorphism class, in order of first appearance.
pub fn dedup_by_shape(trees: impl IntoIterator<Item = RootedForest>) -> Vec<RootedForest> {
    let mut seen = HashSet::new();
    trees
        .into_iter()
        .filter(|t| seen.insert(t.canonical_form()))
        .collect()
}

/// All rooted trees with exactly `n` vertices up to isomorphism, labelled
/// so that parents precede children. Built by hanging a new leaf under
/// every vertex of every smaller shape.
pub fn rooted_tree_shapes(n: usize) -> Vec<RootedForest> {
    let mut layer = vec![build_forest([], [1]).expect("single vertex")];
    if n == 0 {
        return Vec::new();
    }
    for size in 2..=n {
        let grown = layer.iter().flat_map(|tree| {
            let edges = tree.edges();
            tree.vertices()
                .map(|v| {
                    let mut e = edges.clone();
                    e.push((v, size as Vertex));
                    build_forest(e, [1]).expect("grown tree")
                })
                .collect::<Vec<_>>()
        });
        layer = dedup_by_shape(grown);
    }
    layer
}

/// All shapes with between 1 and `n` vertices.
pub fn rooted_tree_shapes_up_to(n: usize) -> Vec<RootedForest> {
    (1..=n).flat_map(rooted_tree_shapes).collect()
}

/// A random recursive tree on `n` vertices with scrambled identifiers drawn
/// from `1..=3n`, so ties and orderings are not tied to the shape.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, n: usize) -> RootedForest {
    assert!(n >= 1);
    let mut pool: Vec<Vertex> = (1..=(3 * n) as Vertex).collect();
    pool.shuffle(rng);
    let ids = &pool[..n];
    let edges: Vec<(Vertex, Vertex)> = (1..n).map(|k| (ids[rng.gen_range(0..k)], ids[k])).collect();
    build_forest(edges, [ids[0]]).expect("random recursive tree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_counts_match_known_sequence() {
        // rooted trees by vertex count: 1, 1, 2, 4, 9, 20, 48, 115
        let counts: Vec<usize> = (1..=8).map(|n| rooted_tree_shapes(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 9, 20, 48, 115]);
    }

    #[test]
    fn parent_arrays_cover_all_shapes() {
        for n in 1..=7 {
            let arrays = parent_array_trees(n);
            assert_eq!(arrays.len(), (1..n).product::<usize>().max(1));
            assert_eq!(dedup_by_shape(arrays).len(), rooted_tree_shapes(n).len());
        }
    }

    #[test]
    fn random_trees_are_trees() {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for n in 1..15 {
            let t = random_tree(&mut rng, n);
            assert_eq!(t.len(), n);
            assert!(t.is_tree());
        }
    }
}
