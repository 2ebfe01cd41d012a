//! Exact graded Betti numbers of `S/I_t(Γ)` through the mapping-cone
//! recursion.
//!
//! For a tree `Γ` of height at least `t - 1` and a leaf `x_{i_t}` at the
//! highest level, with `x_{i_1}, ..., x_{i_t}` the path ending there,
//!
//! ```text
//! β_{i,j}(S/I_t(Γ)) = β_{i,j}(S/I_t(Γ \ x_{i_t}))
//!                   + β_{i-1,j-t}(S/(I_t(Γ \ x_{i_t}) : x_{i_1}⋯x_{i_t}))
//! ```
//!
//! and the colon ideal splits into path ideals on pairwise disjoint vertex
//! sets (see [`colon_components`]), so its table is a convolution.
//!
//! Every subforest table is computed in the subforest's own variables.
//! Adding free variables leaves a Betti table unchanged, so no ambient ring
//! bookkeeping is needed.

mod io;
mod table;

use std::collections::HashMap;
use std::sync::{Mutex, RwLock};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::tree::{RootedForest, TreeError, Vertex};

pub use io::TableParseError;
pub use table::BettiTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolutionError {
    #[error("Betti table is empty")]
    EmptyTable,
    #[error("bidegree ({i}, {j}) lies below the diagonal j = i")]
    BelowDiagonal { i: usize, j: usize },
    #[error("vertex {0} is not a leaf at the highest level")]
    NotHighestLeaf(Vertex),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// One summand of the colon ideal: the path ideal `I_t` of `forest`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColonPiece {
    pub forest: RootedForest,
    pub t: usize,
}

impl ColonPiece {
    pub fn is_zero_ideal(&self) -> bool {
        self.t == 0 || self.forest.paths(self.t).is_empty()
    }
}

/// `I_t(Γ \ x_{i_t}) : (x_{i_1}⋯x_{i_t})` written as
/// `(x_{i_0}) + I_t(Γ \ Γ_0) + Σ_j I_{t-j}(Δ_j \ P)`.
///
/// The first piece is `Γ \ Γ_0` (or `Γ \ Γ_1` when `x_{i_0}` is absent),
/// followed by `Δ_j \ P` with path length `t - j` for each `j` in order.
/// Pieces whose ideal is zero are kept; they contribute the trivial table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColonDecomposition {
    pub principal_vertex: Option<Vertex>,
    pub pieces: Vec<ColonPiece>,
}

impl ColonDecomposition {
    pub fn nonzero_pieces(&self) -> impl Iterator<Item = &ColonPiece> + '_ {
        self.pieces.iter().filter(|p| !p.is_zero_ideal())
    }
}

/// Colon decomposition driven by the default deepest leaf (smallest id).
pub fn colon_components(
    tree: &RootedForest,
    t: usize,
) -> Result<ColonDecomposition, ResolutionError> {
    let leaf = tree.highest_leaf_path(t)?.path.last().expect("t >= 1");
    colon_components_at(tree, t, leaf)
}

/// Colon decomposition for an explicitly chosen leaf, which must sit at the
/// highest level of the tree.
pub fn colon_components_at(
    tree: &RootedForest,
    t: usize,
    leaf: Vertex,
) -> Result<ColonDecomposition, ResolutionError> {
    let roots = tree.roots();
    if roots.len() != 1 {
        return Err(TreeError::NotATree(roots.len()).into());
    }
    if !tree.contains(leaf) {
        return Err(TreeError::UnknownVertex(leaf).into());
    }
    if !tree.highest_leaves().contains(&leaf) {
        return Err(ResolutionError::NotHighestLeaf(leaf));
    }
    let leaf_path = tree.path_to_leaf(leaf, t)?;

    // chain[k] is x_{i_{k + offset}}; offset 0 when x_{i_0} exists
    let mut chain: Vec<Vertex> = Vec::with_capacity(t + 1);
    chain.extend(leaf_path.parent);
    chain.extend_from_slice(leaf_path.path.vertices());
    let first_j = if leaf_path.parent.is_some() { 0 } else { 1 };
    let x = |j: usize| chain[j - first_j];

    let top = tree.induced_subtree_at(x(first_j))?;
    let outside = tree.delete_vertices(top.vertices())?;

    let mut pieces = vec![ColonPiece { forest: outside, t }];
    for j in first_j..t {
        let gamma_j = tree.induced_subtree_at(x(j))?;
        let gamma_next = tree.induced_subtree_at(x(j + 1))?;
        // Δ_j \ P: Γ_j minus Γ_{j+1} minus x_{i_j}, the only vertex of P left
        let delta = gamma_j.delete_vertices(gamma_next.vertices().chain([x(j)]))?;
        pieces.push(ColonPiece {
            forest: delta,
            t: t - j,
        });
    }
    Ok(ColonDecomposition {
        principal_vertex: leaf_path.parent,
        pieces,
    })
}

/// Which highest-level leaf the recursion peels off.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeafChoice {
    SmallestId,
    LargestId,
    /// Uniformly random among the admissible leaves, from a seeded stream.
    Random(u64),
}

/// One unrolled step: the table of `Γ \ x_{i_t}` and of the colon quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingConeStep {
    pub leaf: Vertex,
    pub t: usize,
    pub decomposition: ColonDecomposition,
    pub deleted_table: BettiTable,
    pub colon_table: BettiTable,
}

impl MappingConeStep {
    /// `deleted_table + colon_table` shifted by `(1, t)`.
    pub fn combined(&self) -> BettiTable {
        &self.deleted_table + &self.colon_table.shift(1, self.t as isize)
    }
}

type MemoKey = (String, usize);

/// Recursion engine with an optional memo keyed on (canonical tree, `t`).
///
/// Shareable across threads; a memo entry is only inserted once its table
/// is complete.
#[derive(Debug)]
pub struct Resolver {
    choice: LeafChoice,
    rng: Option<Mutex<StdRng>>,
    memo: Option<RwLock<HashMap<MemoKey, BettiTable>>>,
}

impl Default for Resolver {
    fn default() -> Self {
        Self::new()
    }
}

impl Resolver {
    /// Memoized resolver using the smallest-identifier tie-break.
    pub fn new() -> Self {
        Resolver {
            choice: LeafChoice::SmallestId,
            rng: None,
            memo: Some(RwLock::new(HashMap::new())),
        }
    }

    /// Unmemoized resolver with a custom leaf policy, so that every level
    /// of the recursion really exercises the policy.
    pub fn with_leaf_choice(choice: LeafChoice) -> Self {
        let rng = match choice {
            LeafChoice::Random(seed) => Some(Mutex::new(StdRng::seed_from_u64(seed))),
            _ => None,
        };
        Resolver {
            choice,
            rng,
            memo: None,
        }
    }

    pub fn memo_len(&self) -> usize {
        self.memo
            .as_ref()
            .map_or(0, |m| m.read().expect("memo lock poisoned").len())
    }

    /// `β(S/I_t(F))` for any rooted forest `F`.
    pub fn betti(&self, forest: &RootedForest, t: usize) -> Result<BettiTable, ResolutionError> {
        if t == 0 {
            return Err(TreeError::ZeroPathLength.into());
        }
        if t == 1 {
            return Ok(BettiTable::koszul(forest.len()));
        }
        let mut acc = BettiTable::trivial();
        for component in forest.components() {
            let table = self.tree_betti(&component, t)?;
            acc = acc.convolve(&table);
        }
        Ok(acc)
    }

    fn tree_betti(&self, tree: &RootedForest, t: usize) -> Result<BettiTable, ResolutionError> {
        if tree.height() + 1 < t {
            return Ok(BettiTable::trivial());
        }
        let key = self.memo.as_ref().map(|_| (tree.canonical_form(), t));
        if let (Some(memo), Some(key)) = (&self.memo, &key) {
            if let Some(hit) = memo.read().expect("memo lock poisoned").get(key) {
                return Ok(hit.clone());
            }
        }
        let leaf = self.pick_leaf(tree);
        let table = self.mapping_cone_step(tree, t, leaf)?.combined();
        if let (Some(memo), Some(key)) = (&self.memo, key) {
            memo.write()
                .expect("memo lock poisoned")
                .entry(key)
                .or_insert_with(|| table.clone());
        }
        Ok(table)
    }

    fn pick_leaf(&self, tree: &RootedForest) -> Vertex {
        let leaves = tree.highest_leaves();
        match self.choice {
            LeafChoice::SmallestId => leaves[0],
            LeafChoice::LargestId => *leaves.last().expect("nonempty tree"),
            LeafChoice::Random(_) => {
                let mut rng = self
                    .rng
                    .as_ref()
                    .expect("random policy owns an rng")
                    .lock()
                    .expect("rng lock poisoned");
                leaves[rng.gen_range(0..leaves.len())]
            }
        }
    }

    /// Performs a single mapping-cone step on `tree` with the given
    /// highest-level leaf, resolving both summands recursively.
    pub fn mapping_cone_step(
        &self,
        tree: &RootedForest,
        t: usize,
        leaf: Vertex,
    ) -> Result<MappingConeStep, ResolutionError> {
        let decomposition = colon_components_at(tree, t, leaf)?;
        let deleted_table = self.betti(&tree.delete_vertices([leaf])?, t)?;
        let colon_table = self.colon_table(&decomposition)?;
        Ok(MappingConeStep {
            leaf,
            t,
            decomposition,
            deleted_table,
            colon_table,
        })
    }

    /// Table of `S` modulo the colon ideal: the convolution of `S/(x_{i_0})`
    /// with every piece's table.
    pub fn colon_table(
        &self,
        decomposition: &ColonDecomposition,
    ) -> Result<BettiTable, ResolutionError> {
        let mut acc = if decomposition.principal_vertex.is_some() {
            BettiTable::koszul(1)
        } else {
            BettiTable::trivial()
        };
        for piece in &decomposition.pieces {
            if piece.forest.is_empty() {
                continue;
            }
            acc = acc.convolve(&self.betti(&piece.forest, piece.t)?);
        }
        Ok(acc)
    }
}

/// `β(S/I_t(F))` with a fresh memoized resolver.
pub fn betti(forest: &RootedForest, t: usize) -> Result<BettiTable, ResolutionError> {
    Resolver::new().betti(forest, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::build_forest;
    use crate::tree::tests::example_tree;
    use num_bigint::BigUint;

    fn table(entries: &[((usize, usize), u64)]) -> BettiTable {
        BettiTable::from_entries(entries.iter().map(|&(k, c)| (k, BigUint::from(c)))).unwrap()
    }

    fn vs(f: &RootedForest) -> Vec<Vertex> {
        f.vertices().collect()
    }

    #[test]
    fn colon_on_example_tree() {
        let d = colon_components(&example_tree(), 3).unwrap();
        assert_eq!(d.principal_vertex, Some(4));
        let nonzero: Vec<_> = d.nonzero_pieces().collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(vs(&nonzero[0].forest), vec![1, 2, 3, 5, 6, 10]);
        assert_eq!(nonzero[0].t, 3);
        // Δ_0 \ P = {7, 9}, Δ_1 \ P = {11}, Δ_2 \ P = {}
        let rest: Vec<_> = d.pieces[1..].iter().map(|p| (vs(&p.forest), p.t)).collect();
        assert_eq!(rest, vec![(vec![7, 9], 3), (vec![11], 2), (vec![], 1)]);
    }

    #[test]
    fn colon_on_path_graphs() {
        for t in 2..5 {
            for n in t + 1..12 {
                let d = colon_components(&RootedForest::path_graph(n), t).unwrap();
                assert_eq!(d.principal_vertex, Some((n - t) as Vertex));
                let nonzero: Vec<_> = d.nonzero_pieces().collect();
                if n - (t + 1) >= t {
                    assert_eq!(nonzero.len(), 1);
                    assert_eq!(nonzero[0].forest, RootedForest::path_graph(n - t - 1));
                    assert_eq!(nonzero[0].t, t);
                } else {
                    assert!(nonzero.is_empty());
                }
            }
            let d = colon_components(&RootedForest::path_graph(t), t).unwrap();
            assert_eq!(d.principal_vertex, None);
            assert_eq!(d.nonzero_pieces().count(), 0);
        }
    }

    #[test]
    fn colon_errors() {
        let l3 = RootedForest::path_graph(3);
        assert!(matches!(
            colon_components(&l3, 5),
            Err(ResolutionError::Tree(TreeError::HeightTooSmall { .. }))
        ));
        let t = build_forest([(1, 2), (1, 3), (3, 4)], []).unwrap();
        assert_eq!(
            colon_components_at(&t, 2, 2),
            Err(ResolutionError::NotHighestLeaf(2))
        );
        let forest = build_forest([(1, 2)], [3]).unwrap();
        assert!(colon_components(&forest, 2).is_err());
    }

    #[test]
    fn small_path_tables() {
        let r = Resolver::new();
        assert_eq!(
            r.betti(&RootedForest::path_graph(4), 2).unwrap(),
            table(&[((0, 0), 1), ((1, 2), 3), ((2, 3), 2)])
        );
        assert_eq!(
            r.betti(&RootedForest::path_graph(5), 3).unwrap(),
            table(&[((0, 0), 1), ((1, 3), 3), ((2, 4), 2)])
        );
        for t in 1..6 {
            assert_eq!(
                r.betti(&RootedForest::path_graph(t), t).unwrap(),
                BettiTable::principal(t)
            );
        }
        assert!(r.memo_len() > 0);
    }

    #[test]
    fn example_tree_generator_count() {
        let table = betti(&example_tree(), 4).unwrap();
        assert_eq!(table.get(1, 4), BigUint::from(4u32));
        assert_eq!(table.get(0, 0), BigUint::from(1u32));
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(
            betti(&RootedForest::empty(), 3).unwrap(),
            BettiTable::trivial()
        );
        assert_eq!(
            betti(&RootedForest::path_graph(2), 3).unwrap(),
            BettiTable::trivial()
        );
        assert_eq!(
            betti(&RootedForest::star(4), 1).unwrap(),
            BettiTable::koszul(5)
        );
        assert!(betti(&RootedForest::star(4), 0).is_err());
    }

    #[test]
    fn forest_is_product_of_components() {
        let f = build_forest([(1, 2), (3, 4)], []).unwrap();
        let p = BettiTable::principal(2);
        assert_eq!(betti(&f, 2).unwrap(), p.convolve(&p));
    }

    #[test]
    fn leaf_choice_does_not_matter_here() {
        let tree = example_tree();
        for t in 2..=5 {
            let reference = betti(&tree, t).unwrap();
            for choice in [LeafChoice::LargestId, LeafChoice::Random(7)] {
                let r = Resolver::with_leaf_choice(choice);
                assert_eq!(r.betti(&tree, t).unwrap(), reference);
                assert_eq!(r.memo_len(), 0);
            }
        }
    }

    #[test]
    fn step_adds_without_cancellation() {
        let r = Resolver::new();
        let tree = example_tree();
        let step = r.mapping_cone_step(&tree, 3, 13).unwrap();
        let smaller = r.betti(&tree.delete_vertices([13]).unwrap(), 3).unwrap();
        assert_eq!(step.deleted_table, smaller);
        assert_eq!(step.combined(), r.betti(&tree, 3).unwrap());
    }
}
