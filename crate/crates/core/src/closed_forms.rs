//! Closed formulas for the linear strand, the regularity bound, the
//! linear-resolution classification and the invariants of path graphs.
//!
//! Index convention: everything here speaks about `β(S/I)`. Statements
//! usually made for `β(I)` are moved by `+1` on the homological index, so
//! `β_{i,i+t}(I) = β_{i+1,i+t}(S/I)`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::tree::RootedForest;

/// `C(n, k)`, zero whenever `n < 0`, `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for m in 0..k {
        acc = acc * (n - m) / (m + 1);
    }
    acc
}

/// `β_{i,i+t}(I_t(T))` for `i >= 1`, from vertex degrees and levels.
///
/// For `t = 2` this is `Σ_v C(deg v, i+1)`. For `t > 2` it sums
/// `C(deg v, i+1)` over vertices of level `>= t-1` and `C(deg v - 1, i+1)`
/// over vertices of level exactly `t-2`. Forests are handled vertex by
/// vertex with levels taken inside each component.
pub fn linear_strand(tree: &RootedForest, t: usize, i: usize) -> BigUint {
    assert!(t >= 2, "linear strand formula needs t >= 2");
    let metrics = tree.metrics();
    let k = i as i64 + 1;
    tree.vertices()
        .map(|v| {
            let deg = metrics.degree[&v] as i64;
            let level = metrics.level[&v];
            if t == 2 || level + 1 >= t {
                binomial(deg, k)
            } else if level + 2 == t {
                binomial(deg - 1, k)
            } else {
                BigUint::zero()
            }
        })
        .sum()
}

/// `(t - 1) * (l_t + p_t)`: an upper bound for `reg(S/I_t(T))`.
pub fn regularity_bound(tree: &RootedForest, t: usize) -> usize {
    t.saturating_sub(1) * (tree.deep_leaf_count(t) + tree.max_disjoint_paths(t))
}

/// Outcome of the broom test on the clean form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearityVerdict {
    pub linear: bool,
    /// `None` when the clean form is empty (the ideal is zero).
    pub broom_handle_length: Option<usize>,
    pub is_broom: bool,
    pub clean_height: usize,
}

/// Decides whether `I_t(T)` has a linear resolution: the clean form must be
/// a broom of type `t` with height at most `2t - 1`.
///
/// A tree of height `< t - 1` has the zero ideal; it is reported linear.
pub fn linearity(tree: &RootedForest, t: usize) -> LinearityVerdict {
    assert!(t >= 2, "linear-resolution classification needs t >= 2");
    let clean = tree.clean_form(t);
    if clean.is_empty() {
        return LinearityVerdict {
            linear: true,
            broom_handle_length: None,
            is_broom: false,
            clean_height: 0,
        };
    }
    let clean_height = clean.height();
    // a clean tree stays connected: its root keeps a deep leaf below it
    let broom = clean
        .broom_handle(t)
        .expect("clean form of a tree is a tree");
    let broom_handle_length = broom.as_ref().map(|b| b.handle_length());
    LinearityVerdict {
        linear: broom.is_some() && clean_height < 2 * t,
        broom_handle_length,
        is_broom: broom.is_some(),
        clean_height,
    }
}

pub fn has_linear_resolution(tree: &RootedForest, t: usize) -> bool {
    linearity(tree, t).linear
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// `pd(S/I_t(L_n))`, `n >= t >= 2`.
pub fn line_pd(n: usize, t: usize) -> usize {
    assert!(t >= 2 && n >= t, "line_pd needs n >= t >= 2");
    let d = n % (t + 1);
    if d < t {
        2 * (n - d) / (t + 1)
    } else {
        (2 * n - (t - 1)) / (t + 1)
    }
}

/// `reg(S/I_t(L_n)) = (t - 1) ⌈(n - t + 1)/(t + 1)⌉`.
pub fn line_reg(n: usize, t: usize) -> usize {
    assert!(t >= 2 && n >= t, "line_reg needs n >= t >= 2");
    (t - 1) * ceil_div(n - t + 1, t + 1)
}

/// `β_{i,it}(S/I_t(L_n)) = C(n - it + 1, i)`.
pub fn line_betti_linear(n: usize, t: usize, i: usize) -> BigUint {
    binomial(n as i64 - (i * t) as i64 + 1, i as i64)
}

/// Whether `β_{i,j}(S/I_t(L_n))` is nonzero: `j - i = s(t - 1)` for some
/// `0 <= s <= min(i, ⌈(n-t+1)/(t+1)⌉)` with `i <= min(2s, pd)`.
pub fn line_nonzero(n: usize, t: usize, i: usize, j: usize) -> bool {
    assert!(t >= 2 && n >= t, "line_nonzero needs n >= t >= 2");
    if j < i || !(j - i).is_multiple_of(t - 1) {
        return false;
    }
    let s = (j - i) / (t - 1);
    s <= i.min(ceil_div(n - t + 1, t + 1)) && i <= (2 * s).min(line_pd(n, t))
}
