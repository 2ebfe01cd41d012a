//! Rooted forests and the combinatorial primitives the Betti recursion
//! consumes: directed paths, levels, subtrees, vertex deletion, cleaning,
//! disjoint path packing and broom recognition.
//!
//! Vertex identifiers are arbitrary positive integers. Every deterministic
//! choice made in this module uses ascending identifier order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Identifier of a vertex; always positive.
pub type Vertex = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("vertex identifiers must be positive, got {0}")]
    InvalidVertex(Vertex),
    #[error("self loop on vertex {0}")]
    SelfLoop(Vertex),
    #[error("vertex {child} has two parents ({first} and {second})")]
    MultiParent {
        child: Vertex,
        first: Vertex,
        second: Vertex,
    },
    #[error("parent links starting at vertex {0} form a cycle")]
    Cycle(Vertex),
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error("height {height} is smaller than t - 1 = {}", .t - 1)]
    HeightTooSmall { height: usize, t: usize },
    #[error("expected a single rooted tree, found {0} components")]
    NotATree(usize),
    #[error("path length parameter t must be positive")]
    ZeroPathLength,
}

/// A directed path listed from its top vertex down to its bottom vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DirectedPath(Vec<Vertex>);

impl DirectedPath {
    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Vertex> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Vertex> {
        self.0.last().copied()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }
}

impl fmt::Display for DirectedPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

/// The path of `t` vertices ending at a chosen deep leaf, together with the
/// parent of its top vertex when there is one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafPath {
    pub parent: Option<Vertex>,
    pub path: DirectedPath,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestMetrics {
    pub level: BTreeMap<Vertex, usize>,
    pub height: usize,
    /// Number of incident edges, children plus the parent edge.
    pub degree: BTreeMap<Vertex, usize>,
}

/// A broom handle `x_0, ..., x_s`; `s` is [`Broom::handle_length`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Broom {
    pub handle: DirectedPath,
}

impl Broom {
    pub fn handle_length(&self) -> usize {
        self.handle.len() - 1
    }
}

/// Incrementally collects vertices and parent→child edges, rejecting
/// malformed input as soon as it is seen.
#[derive(Debug, Default, Clone)]
pub struct ForestBuilder {
    parent: BTreeMap<Vertex, Option<Vertex>>,
}

impl ForestBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: Vertex) -> Result<(), TreeError> {
        if v == 0 {
            return Err(TreeError::InvalidVertex(v));
        }
        self.parent.entry(v).or_insert(None);
        Ok(())
    }

    pub fn add_edge(&mut self, parent: Vertex, child: Vertex) -> Result<(), TreeError> {
        for v in [parent, child] {
            if v == 0 {
                return Err(TreeError::InvalidVertex(v));
            }
        }
        if parent == child {
            return Err(TreeError::SelfLoop(parent));
        }
        if let Some(Some(first)) = self.parent.get(&child) {
            return Err(TreeError::MultiParent {
                child,
                first: *first,
                second: parent,
            });
        }
        self.parent.entry(parent).or_insert(None);
        self.parent.insert(child, Some(parent));
        Ok(())
    }

    pub fn build(self) -> Result<RootedForest, TreeError> {
        // 0 = unvisited, 1 = on the current walk, 2 = known to reach a root
        let mut state: BTreeMap<Vertex, u8> = BTreeMap::new();
        for &start in self.parent.keys() {
            let mut walk = Vec::new();
            let mut cur = Some(start);
            while let Some(v) = cur {
                match state.get(&v).copied().unwrap_or(0) {
                    2 => break,
                    1 => return Err(TreeError::Cycle(v)),
                    _ => {
                        state.insert(v, 1);
                        walk.push(v);
                        cur = self.parent[&v];
                    }
                }
            }
            for v in walk {
                state.insert(v, 2);
            }
        }
        Ok(RootedForest::from_parent_map(self.parent))
    }
}

/// Builds a forest from parent→child pairs plus optional isolated vertices.
pub fn build_forest<E, I>(edges: E, isolated: I) -> Result<RootedForest, TreeError>
where
    E: IntoIterator<Item = (Vertex, Vertex)>,
    I: IntoIterator<Item = Vertex>,
{
    let mut builder = ForestBuilder::new();
    for v in isolated {
        builder.add_vertex(v)?;
    }
    for (p, c) in edges {
        builder.add_edge(p, c)?;
    }
    builder.build()
}

/// A finite rooted forest with edges directed away from the roots.
///
/// Immutable once built; every operation returns a new forest.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RootedForest {
    parent: BTreeMap<Vertex, Option<Vertex>>,
    children: BTreeMap<Vertex, Vec<Vertex>>,
}

impl RootedForest {
    /// The forest with no vertices.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Path graph `1 -> 2 -> ... -> n`.
    pub fn path_graph(n: usize) -> Self {
        let n = n as Vertex;
        let parent = (1..=n)
            .map(|v| (v, if v == 1 { None } else { Some(v - 1) }))
            .collect();
        Self::from_parent_map(parent)
    }

    /// Root `1` with leaves `2..=leaves+1`.
    pub fn star(leaves: usize) -> Self {
        let mut parent: BTreeMap<Vertex, Option<Vertex>> = BTreeMap::new();
        parent.insert(1, None);
        for v in 2..=(leaves as Vertex + 1) {
            parent.insert(v, Some(1));
        }
        Self::from_parent_map(parent)
    }

    // Caller guarantees acyclicity.
    fn from_parent_map(parent: BTreeMap<Vertex, Option<Vertex>>) -> Self {
        let mut children: BTreeMap<Vertex, Vec<Vertex>> =
            parent.keys().map(|&v| (v, Vec::new())).collect();
        // parent keys iterate ascending, so children lists come out sorted
        for (&v, p) in &parent {
            if let Some(p) = p {
                children.get_mut(p).expect("parent is a vertex").push(v);
            }
        }
        RootedForest { parent, children }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.parent.contains_key(&v)
    }

    /// Vertices in ascending order.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.parent.keys().copied()
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent.get(&v).copied().flatten()
    }

    pub fn children(&self, v: Vertex) -> &[Vertex] {
        self.children.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_leaf(&self, v: Vertex) -> bool {
        self.contains(v) && self.children(v).is_empty()
    }

    pub fn roots(&self) -> Vec<Vertex> {
        self.parent
            .iter()
            .filter(|(_, p)| p.is_none())
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn leaves(&self) -> Vec<Vertex> {
        self.children
            .iter()
            .filter(|(_, c)| c.is_empty())
            .map(|(&v, _)| v)
            .collect()
    }

    /// Directed edges sorted by (parent, child).
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut edges: Vec<_> = self
            .parent
            .iter()
            .filter_map(|(&c, p)| p.map(|p| (p, c)))
            .collect();
        edges.sort_unstable();
        edges
    }

    pub fn is_tree(&self) -> bool {
        self.roots().len() == 1
    }

    /// One tree per root, ordered by root identifier.
    pub fn components(&self) -> Vec<RootedForest> {
        self.roots().into_iter().map(|r| self.subtree(r)).collect()
    }

    pub fn metrics(&self) -> ForestMetrics {
        let mut level = BTreeMap::new();
        let mut stack: Vec<(Vertex, usize)> = self.roots().into_iter().map(|r| (r, 0)).collect();
        while let Some((v, l)) = stack.pop() {
            level.insert(v, l);
            stack.extend(self.children(v).iter().map(|&c| (c, l + 1)));
        }
        let height = level.values().copied().max().unwrap_or(0);
        let degree = self
            .parent
            .iter()
            .map(|(&v, p)| (v, self.children(v).len() + usize::from(p.is_some())))
            .collect();
        ForestMetrics {
            level,
            height,
            degree,
        }
    }

    pub fn height(&self) -> usize {
        self.metrics().height
    }

    /// Every directed path on exactly `t` vertices, in lexicographic order.
    /// These are the minimal generators of the path ideal `I_t`.
    pub fn paths(&self, t: usize) -> Vec<DirectedPath> {
        if t == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(t);
        for v in self.vertices() {
            current.push(v);
            self.extend_paths(&mut current, t, &mut out);
            current.pop();
        }
        out.sort_unstable();
        out
    }

    fn extend_paths(&self, current: &mut Vec<Vertex>, t: usize, out: &mut Vec<DirectedPath>) {
        if current.len() == t {
            out.push(DirectedPath(current.clone()));
            return;
        }
        let last = *current.last().expect("nonempty");
        for &c in self.children(last) {
            current.push(c);
            self.extend_paths(current, t, out);
            current.pop();
        }
    }

    fn descendants_inclusive(&self, v: Vertex) -> BTreeSet<Vertex> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            seen.insert(u);
            stack.extend_from_slice(self.children(u));
        }
        seen
    }

    fn subtree(&self, v: Vertex) -> RootedForest {
        let keep = self.descendants_inclusive(v);
        let parent = keep
            .iter()
            .map(|&u| (u, if u == v { None } else { self.parent(u) }))
            .collect();
        Self::from_parent_map(parent)
    }

    /// The subtree on `v` and its descendants, rooted at `v`.
    pub fn induced_subtree_at(&self, v: Vertex) -> Result<RootedForest, TreeError> {
        if !self.contains(v) {
            return Err(TreeError::UnknownVertex(v));
        }
        Ok(self.subtree(v))
    }

    /// Removes the given vertices and every incident edge. Children of a
    /// removed vertex become roots.
    pub fn delete_vertices<I>(&self, removed: I) -> Result<RootedForest, TreeError>
    where
        I: IntoIterator<Item = Vertex>,
    {
        let removed: BTreeSet<Vertex> = removed.into_iter().collect();
        if let Some(&v) = removed.iter().find(|&&v| !self.contains(v)) {
            return Err(TreeError::UnknownVertex(v));
        }
        Ok(self.without(&removed))
    }

    fn without(&self, removed: &BTreeSet<Vertex>) -> RootedForest {
        let parent = self
            .parent
            .iter()
            .filter(|(v, _)| !removed.contains(v))
            .map(|(&v, &p)| (v, p.filter(|p| !removed.contains(p))))
            .collect();
        Self::from_parent_map(parent)
    }

    /// All leaves whose level equals the forest height, ascending.
    pub fn highest_leaves(&self) -> Vec<Vertex> {
        let metrics = self.metrics();
        self.leaves()
            .into_iter()
            .filter(|v| metrics.level[v] == metrics.height)
            .collect()
    }

    /// The path of `t` vertices ending at `leaf`, plus the parent of its top
    /// vertex. `leaf` must sit at level at least `t - 1`.
    pub fn path_to_leaf(&self, leaf: Vertex, t: usize) -> Result<LeafPath, TreeError> {
        if t == 0 {
            return Err(TreeError::ZeroPathLength);
        }
        if !self.contains(leaf) {
            return Err(TreeError::UnknownVertex(leaf));
        }
        let mut path = vec![leaf];
        let mut cur = leaf;
        while path.len() < t {
            match self.parent(cur) {
                Some(p) => {
                    path.push(p);
                    cur = p;
                }
                None => {
                    return Err(TreeError::HeightTooSmall {
                        height: path.len() - 1,
                        t,
                    })
                }
            }
        }
        path.reverse();
        Ok(LeafPath {
            parent: self.parent(cur),
            path: DirectedPath(path),
        })
    }

    /// Picks the leaf of maximal level (smallest identifier on ties) and
    /// returns the path of `t` vertices ending there.
    pub fn highest_leaf_path(&self, t: usize) -> Result<LeafPath, TreeError> {
        if t == 0 {
            return Err(TreeError::ZeroPathLength);
        }
        let height = self.height();
        if self.is_empty() || height + 1 < t {
            return Err(TreeError::HeightTooSmall { height, t });
        }
        let leaf = self.highest_leaves()[0];
        self.path_to_leaf(leaf, t)
    }

    /// Number of leaves at level at least `t - 1`.
    pub fn deep_leaf_count(&self, t: usize) -> usize {
        let metrics = self.metrics();
        self.leaves()
            .into_iter()
            .filter(|v| metrics.level[v] + 1 >= t)
            .count()
    }

    /// Maximum number of vertex-disjoint directed paths of length `t`
    /// (that is, on `t + 1` vertices).
    ///
    /// Bottom-up: each vertex carries the longest still-unused descending
    /// chain below it; once a chain reaches `t + 1` vertices it is cut off
    /// and counted.
    pub fn max_disjoint_paths(&self, t: usize) -> usize {
        let metrics = self.metrics();
        let mut order: Vec<Vertex> = self.vertices().collect();
        order.sort_by_key(|v| std::cmp::Reverse(metrics.level[v]));
        let mut chain: BTreeMap<Vertex, usize> = BTreeMap::new();
        let mut count = 0;
        for v in order {
            let below = self.children(v).iter().map(|c| chain[c]).max().unwrap_or(0);
            let mut len = below + 1;
            if len == t + 1 {
                count += 1;
                len = 0;
            }
            chain.insert(v, len);
        }
        count
    }

    /// Repeatedly strips leaves of level `< t - 1`. The surviving forest has
    /// the same `I_t` generators.
    pub fn clean_form(&self, t: usize) -> RootedForest {
        // deleting leaves never changes the level of what remains
        let level = self.metrics().level;
        let mut forest = self.clone();
        loop {
            let doomed: BTreeSet<Vertex> = forest
                .leaves()
                .into_iter()
                .filter(|v| level[v] + 1 < t)
                .collect();
            if doomed.is_empty() {
                return forest;
            }
            forest = forest.without(&doomed);
        }
    }

    /// Broom recognition for a single tree.
    ///
    /// A handle is a root-to-leaf path `x_0, ..., x_s`; the tree is a broom
    /// of type `t` when every vertex off the handle is a leaf hanging from
    /// some `x_i` with `i >= s - t`. Off-handle vertices are required to be
    /// leaves; any grandchild would hang off a non-handle vertex and break
    /// the edge form anyway. Returns the valid handle of maximal length.
    pub fn broom_handle(&self, t: usize) -> Result<Option<Broom>, TreeError> {
        let roots = self.roots();
        if roots.len() != 1 {
            return Err(TreeError::NotATree(roots.len()));
        }
        let mut best: Option<Broom> = None;
        for leaf in self.leaves() {
            let mut handle = vec![leaf];
            let mut cur = leaf;
            while let Some(p) = self.parent(cur) {
                handle.push(p);
                cur = p;
            }
            handle.reverse();
            let s = handle.len() - 1;
            let position: BTreeMap<Vertex, usize> =
                handle.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            let valid = self
                .vertices()
                .filter(|v| !position.contains_key(v))
                .all(|y| {
                    self.is_leaf(y)
                        && self
                            .parent(y)
                            .and_then(|p| position.get(&p))
                            .is_some_and(|&i| i + t >= s)
                });
            if valid && best.as_ref().is_none_or(|b| b.handle_length() < s) {
                best = Some(Broom {
                    handle: DirectedPath(handle),
                });
            }
        }
        Ok(best)
    }

    /// Canonical string for the isomorphism class of this rooted forest.
    ///
    /// Each vertex encodes as `(` + sorted child codes + `)`; a forest is the
    /// sorted concatenation of its tree codes. Two forests get the same
    /// string exactly when they are isomorphic as rooted forests.
    pub fn canonical_form(&self) -> String {
        let metrics = self.metrics();
        let mut order: Vec<Vertex> = self.vertices().collect();
        order.sort_by_key(|v| std::cmp::Reverse(metrics.level[v]));
        let mut code: BTreeMap<Vertex, String> = BTreeMap::new();
        for v in order {
            let mut parts: Vec<String> = self
                .children(v)
                .iter()
                .map(|c| code.remove(c).expect("children are encoded first"))
                .collect();
            parts.sort_unstable();
            let mut s = String::with_capacity(2 + parts.iter().map(String::len).sum::<usize>());
            s.push('(');
            parts.iter().for_each(|p| s.push_str(p));
            s.push(')');
            code.insert(v, s);
        }
        let mut trees: Vec<String> = code.into_values().collect();
        trees.sort_unstable();
        trees.concat()
    }

    /// Renames vertices through `map`, which must be injective and map into
    /// positive identifiers.
    pub fn relabel<F>(&self, map: F) -> Result<RootedForest, TreeError>
    where
        F: Fn(Vertex) -> Vertex,
    {
        let isolated: Vec<Vertex> = self.vertices().map(&map).collect();
        let edges = self.edges().into_iter().map(|(p, c)| (map(p), map(c)));
        build_forest(edges, isolated)
    }
}

impl fmt::Display for RootedForest {
    /// Writes the forest in the plain text tree format: a `vertices:` line
    /// when there are isolated vertices, then one `parent child` line per
    /// edge.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let isolated: Vec<String> = self
            .vertices()
            .filter(|&v| self.parent(v).is_none() && self.children(v).is_empty())
            .map(|v| v.to_string())
            .collect();
        if !isolated.is_empty() {
            writeln!(f, "vertices: {}", isolated.join(" "))?;
        }
        for (p, c) in self.edges() {
            writeln!(f, "{p} {c}")?;
        }
        Ok(())
    }
}
