//! Independent ground truth.
//!
//! Graded Betti numbers of a squarefree monomial ideal come from Hochster's
//! formula,
//!
//! ```text
//! β_{i,j}(S/I) = Σ_{W ⊆ V, |W| = j} dim H̃_{j-i-1}(Δ_W)
//! ```
//!
//! where `Δ` is the Stanley–Reisner complex of `I` and `Δ_W` its restriction
//! to `W`. Homology ranks are computed exactly: integer elimination (unit
//! pivots first, Bareiss for the rest) for characteristic zero, plain
//! elimination mod `p` otherwise. Nothing here touches the mapping-cone code.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::resolution::BettiTable;
use crate::tree::{RootedForest, Vertex};

/// Largest ground set the bitmask representation accepts.
pub const MAX_GROUND: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("generators must be nonempty")]
    EmptyGenerator,
    #[error("generator vertex {0} is outside the ground set")]
    OutsideGround(Vertex),
    #[error("ground set of {0} vertices exceeds the supported {MAX_GROUND}")]
    TooLarge(usize),
    #[error("characteristic must be 0 or a prime, got {0}")]
    BadCharacteristic(u64),
}

/// Characteristic of the coefficient field: `0` for the rationals, or a
/// prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Characteristic(u64);

impl Characteristic {
    pub const ZERO: Characteristic = Characteristic(0);

    pub fn new(p: u64) -> Result<Self, OracleError> {
        let prime = p >= 2
            && (2..)
                .take_while(|d| d * d <= p)
                .all(|d| !p.is_multiple_of(d));
        if p == 0 || prime {
            Ok(Characteristic(p))
        } else {
            Err(OracleError::BadCharacteristic(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

/// A squarefree monomial ideal given by the supports of its generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeIdeal {
    ground: Vec<Vertex>,
    // bit k stands for ground[k]; minimal, sorted, no duplicates
    generators: Vec<u64>,
}

impl SquarefreeIdeal {
    /// Normalizes to a minimal generating set (an antichain).
    pub fn new<G, I, J>(ground: G, generators: I) -> Result<Self, OracleError>
    where
        G: IntoIterator<Item = Vertex>,
        I: IntoIterator<Item = J>,
        J: IntoIterator<Item = Vertex>,
    {
        let ground: Vec<Vertex> = ground
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if ground.len() > MAX_GROUND {
            return Err(OracleError::TooLarge(ground.len()));
        }
        let mut masks = Vec::new();
        for g in generators {
            let mut mask = 0u64;
            for v in g {
                let k = ground
                    .binary_search(&v)
                    .map_err(|_| OracleError::OutsideGround(v))?;
                mask |= 1 << k;
            }
            if mask == 0 {
                return Err(OracleError::EmptyGenerator);
            }
            masks.push(mask);
        }
        masks.sort_unstable_by_key(|m| (m.count_ones(), *m));
        masks.dedup();
        let mut minimal: Vec<u64> = Vec::with_capacity(masks.len());
        for m in masks {
            if !minimal.iter().any(|&g| g & !m == 0) {
                minimal.push(m);
            }
        }
        minimal.sort_unstable();
        Ok(SquarefreeIdeal {
            ground,
            generators: minimal,
        })
    }

    /// The path ideal `I_t(F)` over the vertex set of `F`.
    pub fn path_ideal(forest: &RootedForest, t: usize) -> Result<Self, OracleError> {
        Self::new(
            forest.vertices(),
            forest.paths(t).into_iter().map(|p| p.into_vec()),
        )
    }

    pub fn ground(&self) -> &[Vertex] {
        &self.ground
    }

    pub fn generators(&self) -> Vec<BTreeSet<Vertex>> {
        self.generators.iter().map(|&m| self.unmask(m)).collect()
    }

    fn unmask(&self, mask: u64) -> BTreeSet<Vertex> {
        self.ground
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &v)| v)
            .collect()
    }

    fn is_face(&self, mask: u64) -> bool {
        !self.generators.iter().any(|&g| g & !mask == 0)
    }

    fn full_mask(&self) -> u64 {
        (1u64 << self.ground.len()) - 1
    }
}

/// A simplicial complex on a ground set, stored by its facets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    ground: Vec<Vertex>,
    facets: Vec<BTreeSet<Vertex>>,
}

impl SimplicialComplex {
    /// The complex generated by `facets`; non-maximal entries are dropped.
    pub fn from_facets<G, I, J>(ground: G, facets: I) -> Result<Self, OracleError>
    where
        G: IntoIterator<Item = Vertex>,
        I: IntoIterator<Item = J>,
        J: IntoIterator<Item = Vertex>,
    {
        let ground: BTreeSet<Vertex> = ground.into_iter().collect();
        let mut sets: Vec<BTreeSet<Vertex>> = Vec::new();
        for f in facets {
            let f: BTreeSet<Vertex> = f.into_iter().collect();
            if let Some(&v) = f.iter().find(|v| !ground.contains(v)) {
                return Err(OracleError::OutsideGround(v));
            }
            sets.push(f);
        }
        let mut facets: Vec<BTreeSet<Vertex>> = Vec::new();
        for f in &sets {
            let dominated = sets.iter().any(|g| g != f && f.is_subset(g));
            if !dominated && !facets.contains(f) {
                facets.push(f.clone());
            }
        }
        facets.sort_unstable();
        Ok(SimplicialComplex {
            ground: ground.into_iter().collect(),
            facets,
        })
    }

    pub fn facets(&self) -> &[BTreeSet<Vertex>] {
        &self.facets
    }

    pub fn ground(&self) -> &[Vertex] {
        &self.ground
    }

    pub fn contains_face(&self, face: &BTreeSet<Vertex>) -> bool {
        face.is_empty() || self.facets.iter().any(|f| face.is_subset(f))
    }

    /// Every face, the empty face included, as ground-index bitmasks.
    fn face_masks(&self) -> Vec<u64> {
        let index = |v: &Vertex| self.ground.binary_search(v).expect("facet inside ground");
        let mut faces = BTreeSet::new();
        faces.insert(0u64);
        for f in &self.facets {
            let mask = f.iter().fold(0u64, |m, v| m | 1 << index(v));
            let mut sub = mask;
            loop {
                faces.insert(sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & mask;
            }
        }
        faces.into_iter().collect()
    }
}

/// The complex whose faces are the vertex sets containing no generator.
pub fn stanley_reisner(ideal: &SquarefreeIdeal) -> SimplicialComplex {
    let full = ideal.full_mask();
    let n = ideal.ground.len();
    let facets: Vec<BTreeSet<Vertex>> = (0..=full)
        .filter(|&m| ideal.is_face(m))
        .filter(|&m| (0..n).all(|k| m >> k & 1 == 1 || !ideal.is_face(m | 1 << k)))
        .map(|m| ideal.unmask(m))
        .collect();
    SimplicialComplex::from_facets(ideal.ground.iter().copied(), facets)
        .expect("facets come from the ground set")
}

/// Reduced homology dimensions; entry `k` is `dim H̃_{k-1}`, so the list
/// starts at degree `-1`. A complex whose only face is the empty face has
/// `H̃_{-1}` of dimension one.
pub fn reduced_homology_dims(complex: &SimplicialComplex, ch: Characteristic) -> Vec<usize> {
    homology_of_faces(&complex.face_masks(), ch)
}

// `faces` must be closed under subsets and contain the empty face.
fn homology_of_faces(faces: &[u64], ch: Characteristic) -> Vec<usize> {
    let top = faces
        .iter()
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0);
    // by_size[s] holds faces with s vertices (dimension s - 1), sorted
    let mut by_size: Vec<Vec<u64>> = vec![Vec::new(); top + 1];
    for &f in faces {
        by_size[f.count_ones() as usize].push(f);
    }
    for layer in &mut by_size {
        layer.sort_unstable();
    }
    // rank[s] = rank of the boundary from size-s faces to size-(s-1) faces
    let mut rank = vec![0usize; top + 2];
    for s in 1..=top {
        rank[s] = boundary_rank(&by_size[s - 1], &by_size[s], ch);
    }
    let dims: Vec<usize> = (0..=top)
        .map(|s| by_size[s].len() - rank[s] - rank[s + 1])
        .collect();
    debug_assert_eq!(
        euler(by_size.iter().map(Vec::len)),
        euler(dims.iter().copied()),
        "Euler characteristic mismatch"
    );
    dims
}

// alternating sum starting with + at degree -1
fn euler(counts: impl Iterator<Item = usize>) -> i64 {
    counts
        .enumerate()
        .map(|(k, c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}

/// Boundary signs: removing the `m`-th smallest vertex carries `(-1)^m`.
fn boundary_rank(lower: &[u64], upper: &[u64], ch: Characteristic) -> usize {
    if lower.is_empty() || upper.is_empty() {
        return 0;
    }
    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(upper.len());
    for &face in upper {
        let mut row = vec![0i64; lower.len()];
        let mut bits = face;
        let mut m = 0;
        while bits != 0 {
            let b = bits & bits.wrapping_neg();
            let idx = lower
                .binary_search(&(face & !b))
                .expect("faces closed under subsets");
            row[idx] = if m % 2 == 0 { 1 } else { -1 };
            bits &= bits - 1;
            m += 1;
        }
        rows.push(row);
    }
    match ch.get() {
        0 => rank_over_integers(rows),
        p => rank_mod_p(rows, p),
    }
}

/// Exact rank over the rationals. Pivots on `±1` entries with plain integer
/// row operations while any exist; the remainder goes to [`bareiss_rank`].
fn rank_over_integers(mut a: Vec<Vec<i64>>) -> usize {
    let mut rank = 0;
    loop {
        a.retain(|row| row.iter().any(|&x| x != 0));
        let unit = a
            .iter()
            .enumerate()
            .find_map(|(k, row)| row.iter().position(|&x| x == 1 || x == -1).map(|c| (k, c)));
        let Some((k, c)) = unit else { break };
        let pivot = a.swap_remove(k);
        let mut overflow = false;
        for row in a.iter_mut() {
            let f = row[c] * pivot[c];
            if f == 0 {
                continue;
            }
            let updated: Option<Vec<i64>> = row
                .iter()
                .zip(&pivot)
                .map(|(&x, &p)| f.checked_mul(p).and_then(|fp| x.checked_sub(fp)))
                .collect();
            match updated {
                Some(u) => *row = u,
                None => {
                    overflow = true;
                    break;
                }
            }
        }
        if overflow {
            a.push(pivot);
            break;
        }
        rank += 1;
    }
    rank + bareiss_rank(a)
}

/// Bareiss fraction-free elimination over big integers.
fn bareiss_rank(rows: Vec<Vec<i64>>) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows
        .into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect();
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pivot) = (r..nrows).find(|&k| !a[k][c].is_zero()) else {
            continue;
        };
        a.swap(r, pivot);
        for k in r + 1..nrows {
            for col in c + 1..ncols {
                let v = (&a[r][c] * &a[k][col] - &a[k][c] * &a[r][col]) / &prev;
                a[k][col] = v;
            }
            a[k][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

fn rank_mod_p(rows: Vec<Vec<i64>>, p: u64) -> usize {
    let pi = p as i64;
    let mut a: Vec<Vec<u64>> = rows
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.rem_euclid(pi) as u64).collect())
        .collect();
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pivot) = (r..nrows).find(|&k| a[k][c] != 0) else {
            continue;
        };
        a.swap(r, pivot);
        let inv = pow_mod(a[r][c], p - 2, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut().filter(|row| row[c] != 0) {
            let factor = mul_mod(row[c], inv, p);
            for (x, &y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x = (*x + p - mul_mod(factor, y, p)) % p;
            }
        }
        r += 1;
    }
    r
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn restricted_faces(ideal: &SquarefreeIdeal, w: u64) -> Vec<u64> {
    let mut faces = Vec::new();
    let mut sub = w;
    loop {
        if ideal.is_face(sub) {
            faces.push(sub);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & w;
    }
    faces
}

fn hochster(ideal: &SquarefreeIdeal, ch: Characteristic, prune: bool) -> BettiTable {
    let full = ideal.full_mask();
    let contributions: Vec<((usize, usize), BigUint)> = (0..=full)
        .into_par_iter()
        .filter(|&w| {
            // a vertex of W lying in no generator inside W is a cone point,
            // so Δ_W is acyclic and contributes nothing
            !prune
                || ideal
                    .generators
                    .iter()
                    .filter(|&&g| g & w == g)
                    .fold(0u64, |u, &g| u | g)
                    == w
        })
        .flat_map_iter(|w| {
            let j = w.count_ones() as usize;
            let dims = homology_of_faces(&restricted_faces(ideal, w), ch);
            dims.into_iter()
                .enumerate()
                .filter(|&(_, d)| d > 0)
                .map(move |(k, d)| ((j - k, j), BigUint::from(d)))
                .collect::<Vec<_>>()
        })
        .collect();
    BettiTable::from_entries(contributions).expect("Hochster bidegrees satisfy j >= i")
}

/// `β(S/I)` via Hochster's formula over the field of characteristic `ch`.
///
/// Only subsets `W` that are unions of generators are visited; every other
/// restriction is a cone.
pub fn hochster_betti(ideal: &SquarefreeIdeal, ch: Characteristic) -> BettiTable {
    hochster(ideal, ch, true)
}

/// Same as [`hochster_betti`] but summing over all `2^n` subsets.
pub fn hochster_betti_exhaustive(ideal: &SquarefreeIdeal, ch: Characteristic) -> BettiTable {
    hochster(ideal, ch, false)
}

/// Maximum number of vertex-disjoint directed paths on `t + 1` vertices,
/// by exhaustive search over path subsets.
pub fn brute_force_disjoint_paths(forest: &RootedForest, t: usize) -> usize {
    let vertices: Vec<Vertex> = forest.vertices().collect();
    assert!(vertices.len() <= 64, "brute force is for small forests");
    let bit = |v: Vertex| 1u64 << vertices.binary_search(&v).expect("own vertex");
    // each path is found from its bottom vertex by walking up t parents
    let mut paths = Vec::new();
    for &bottom in &vertices {
        let mut mask = bit(bottom);
        let mut cur = bottom;
        let mut ok = true;
        for _ in 0..t {
            match forest.parent(cur) {
                Some(p) => {
                    mask |= bit(p);
                    cur = p;
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            paths.push(mask);
        }
    }
    fn best(paths: &[u64], used: u64) -> usize {
        let Some((&first, rest)) = paths.split_first() else {
            return 0;
        };
        let skip = best(rest, used);
        if first & used == 0 {
            skip.max(1 + best(rest, used | first))
        } else {
            skip
        }
    }
    best(&paths, 0)
}
