use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::ResolutionError;

/// Graded Betti numbers `β_{i,j}` of a quotient `S/I`, stored sparsely.
///
/// Keys are `(i, j)` with `i` the homological and `j` the internal degree.
/// Zero counts are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BettiTable {
    entries: BTreeMap<(usize, usize), BigUint>,
}

impl BettiTable {
    /// `β(S/0)`: a single `1` at `(0, 0)`.
    pub fn trivial() -> Self {
        Self::from_raw([((0, 0), BigUint::one())])
    }

    /// `β(S/(m))` for one monomial `m` of degree `d`.
    pub fn principal(d: usize) -> Self {
        assert!(d >= 1, "a principal generator has positive degree");
        Self::from_raw([((0, 0), BigUint::one()), ((1, d), BigUint::one())])
    }

    /// Koszul complex on `m` variables: `β_{i,i} = C(m, i)`.
    pub fn koszul(m: usize) -> Self {
        let mut entries = BTreeMap::new();
        let mut c = BigUint::one();
        for i in 0..=m {
            entries.insert((i, i), c.clone());
            c = c * (m - i) / (i + 1);
        }
        BettiTable { entries }
    }

    /// Builds a table from explicit entries, dropping zeros and summing
    /// repeated bidegrees.
    pub fn from_entries<I>(entries: I) -> Result<Self, ResolutionError>
    where
        I: IntoIterator<Item = ((usize, usize), BigUint)>,
    {
        let mut table = BettiTable::default();
        for ((i, j), count) in entries {
            if j < i {
                return Err(ResolutionError::BelowDiagonal { i, j });
            }
            table.add_at(i, j, count);
        }
        Ok(table)
    }

    fn from_raw<I>(entries: I) -> Self
    where
        I: IntoIterator<Item = ((usize, usize), BigUint)>,
    {
        let mut table = BettiTable::default();
        for ((i, j), c) in entries {
            table.add_at(i, j, c);
        }
        table
    }

    fn add_at(&mut self, i: usize, j: usize, count: BigUint) {
        if count.is_zero() {
            return;
        }
        *self.entries.entry((i, j)).or_default() += count;
    }

    pub fn get(&self, i: usize, j: usize) -> BigUint {
        self.entries.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Nonzero entries in `(i, j)` order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &BigUint)> + '_ {
        self.entries.iter().map(|(&(i, j), c)| (i, j, c))
    }

    /// The set of bidegrees carrying a nonzero count.
    pub fn support(&self) -> Vec<(usize, usize)> {
        self.entries.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Betti table of the tensor product of two resolutions over disjoint
    /// variable sets. Disjointness is the caller's responsibility.
    pub fn convolve(&self, other: &BettiTable) -> BettiTable {
        let mut out = BettiTable::default();
        for (&(a, b), x) in &self.entries {
            for (&(c, d), y) in &other.entries {
                out.add_at(a + c, b + d, x * y);
            }
        }
        out
    }

    /// Moves every entry from `(i, j)` to `(i + di, j + dj)`.
    ///
    /// # Panics
    ///
    /// If an entry would land on a negative bidegree.
    pub fn shift(&self, di: isize, dj: isize) -> BettiTable {
        let mv = |x: usize, d: isize| {
            x.checked_add_signed(d)
                .expect("shift moves an entry to a negative bidegree")
        };
        BettiTable {
            entries: self
                .entries
                .iter()
                .map(|(&(i, j), c)| ((mv(i, di), mv(j, dj)), c.clone()))
                .collect(),
        }
    }

    pub fn projective_dimension(&self) -> Option<usize> {
        self.entries.keys().map(|&(i, _)| i).max()
    }

    pub fn regularity(&self) -> Option<usize> {
        self.entries.keys().map(|&(i, j)| j - i).max()
    }

    /// `(pd, reg)` read off the table.
    pub fn invariants(&self) -> Result<(usize, usize), ResolutionError> {
        match (self.projective_dimension(), self.regularity()) {
            (Some(pd), Some(reg)) => Ok((pd, reg)),
            _ => Err(ResolutionError::EmptyTable),
        }
    }

    /// True when every entry past `(0, 0)` lies on the diagonal
    /// `j - i = d - 1`, i.e. the ideal has a `d`-linear resolution.
    pub fn is_linear(&self, d: usize) -> bool {
        self.iter()
            .filter(|&(i, _, _)| i >= 1)
            .all(|(i, j, _)| j - i + 1 == d)
    }

    /// First bidegree, in `(i, j)` order, where the two tables disagree.
    pub fn first_difference(&self, other: &BettiTable) -> Option<(usize, usize)> {
        let mut keys: Vec<_> = self.entries.keys().chain(other.entries.keys()).collect();
        keys.sort_unstable();
        keys.into_iter()
            .find(|&&(i, j)| self.get(i, j) != other.get(i, j))
            .copied()
    }
}

impl Add for &BettiTable {
    type Output = BettiTable;

    fn add(self, rhs: &BettiTable) -> BettiTable {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.entries {
            out.add_at(i, j, c.clone());
        }
        out
    }
}

impl fmt::Display for BettiTable {
    /// Conventional Macaulay2-style grid: rows are `j - i`, columns `i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (Some(pd), Some(reg)) = (self.projective_dimension(), self.regularity()) else {
            return writeln!(f, "(empty)");
        };
        let cells: Vec<Vec<String>> = (0..=reg)
            .map(|r| {
                (0..=pd)
                    .map(|i| {
                        let c = self.get(i, i + r);
                        if c.is_zero() {
                            "-".to_string()
                        } else {
                            c.to_string()
                        }
                    })
                    .collect()
            })
            .collect();
        let width = cells
            .iter()
            .flatten()
            .map(String::len)
            .chain((0..=pd).map(|i| i.to_string().len()))
            .max()
            .unwrap_or(1);
        write!(f, "{:>4}", "")?;
        for i in 0..=pd {
            write!(f, " {i:>width$}")?;
        }
        writeln!(f)?;
        for (r, row) in cells.iter().enumerate() {
            write!(f, "{:>3}:", r)?;
            for c in row {
                write!(f, " {c:>width$}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
