//! Undominated patches and the `Ξ` matrix.
//!
//! Row `J` of `Ξ` is the indicator of the patches that lie strictly outside
//! every other budget of the subfamily `J`. A behavioral type satisfies SARP
//! iff it picks at least one such patch in every subfamily, and a stochastic
//! demand system is rationalizable iff `Ξπ >= 1`.

mod chain;
mod tum;

use std::fmt;

use num_traits::Zero;

use crate::geometry::{Patch, PatchLayout, Sign};
use crate::rational::{ratio, Rational};
use crate::revealed::BehavioralType;

pub use chain::{chain_partition, ChainPartition};
pub use tum::{check_total_unimodularity, determinant, TumVerdict, EXHAUSTIVE_LIMIT};

/// A set of budgets, stored as a bit mask over zero-based indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subfamily(u64);

impl Subfamily {
    pub fn from_mask(mask: u64) -> Self {
        Subfamily(mask)
    }

    pub fn from_budgets(budgets: &[usize]) -> Self {
        Subfamily(budgets.iter().fold(0, |m, &j| m | (1 << j)))
    }

    /// Builds from one-based budget labels as printed in reports.
    pub fn from_labels(labels: &[usize]) -> Self {
        Subfamily(labels.iter().fold(0, |m, &j| m | (1 << (j - 1))))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, j: usize) -> bool {
        self.0 >> j & 1 == 1
    }

    pub fn is_subset(self, other: Subfamily) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Subfamily) -> Subfamily {
        Subfamily(self.0 | other.0)
    }

    pub fn members(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..64).filter(move |&j| mask >> j & 1 == 1)
    }

    pub fn labels(self) -> Vec<usize> {
        self.members().map(|j| j + 1).collect()
    }

    /// Every subfamily with at least two of `budgets` budgets, ordered by
    /// size and then lexicographically on the sorted member list.
    pub fn all(budgets: usize) -> Vec<Subfamily> {
        let mut out: Vec<Subfamily> = (0..(1u64 << budgets))
            .map(Subfamily)
            .filter(|s| s.len() >= 2)
            .collect();
        out.sort();
        out
    }
}

impl Ord for Subfamily {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.members().cmp(other.members()))
    }
}

impl PartialOrd for Subfamily {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subfamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels().iter().map(|j| j.to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

/// A row of the extended system: an ordinary subfamily or the constant
/// `1/J` row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RowIndex {
    Subfamily(Subfamily),
    Extended,
}

impl fmt::Display for RowIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowIndex::Subfamily(s) => s.fmt(f),
            RowIndex::Extended => f.write_str("extended"),
        }
    }
}

/// True iff `patch` belongs to a budget of `subfamily` and lies strictly
/// outside every other budget of it.
pub fn is_undominated(patch: &Patch, subfamily: Subfamily) -> bool {
    subfamily.contains(patch.budget)
        && subfamily
            .members()
            .filter(|&k| k != patch.budget)
            .all(|k| patch.signs.against(k) == Sign::Above)
}

/// `ξ^J` as a rational vector over the flat patch coordinates.
pub fn xi_vector(layout: &PatchLayout, row: RowIndex) -> Vec<Rational> {
    match row {
        RowIndex::Subfamily(s) => layout
            .iter()
            .map(|p| {
                if is_undominated(p, s) {
                    Rational::from_integer(1.into())
                } else {
                    Rational::zero()
                }
            })
            .collect(),
        RowIndex::Extended => vec![ratio(1, layout.budgets() as i64); layout.total()],
    }
}

/// All ordinary rows of `Ξ` plus the extended row.
#[derive(Debug, Clone, PartialEq)]
pub struct XiMatrix {
    budgets: usize,
    subfamilies: Vec<Subfamily>,
    rows: Vec<Vec<bool>>,
    extended: Vec<Rational>,
}

pub fn build_xi(layout: &PatchLayout) -> XiMatrix {
    let subfamilies = Subfamily::all(layout.budgets());
    let rows = subfamilies
        .iter()
        .map(|&s| layout.iter().map(|p| is_undominated(p, s)).collect())
        .collect();
    XiMatrix {
        budgets: layout.budgets(),
        subfamilies,
        rows,
        extended: xi_vector(layout, RowIndex::Extended),
    }
}

impl XiMatrix {
    /// Wraps an explicit 0/1 matrix; used for probing arbitrary matrices.
    pub fn from_rows(subfamilies: Vec<Subfamily>, rows: Vec<Vec<bool>>, budgets: usize) -> Self {
        let width = rows.first().map_or(0, Vec::len);
        XiMatrix {
            budgets,
            subfamilies,
            rows,
            extended: vec![ratio(1, budgets.max(1) as i64); width],
        }
    }

    pub fn budgets(&self) -> usize {
        self.budgets
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.extended.len()
    }

    pub fn subfamilies(&self) -> &[Subfamily] {
        &self.subfamilies
    }

    /// Ordinary rows followed by the extended row.
    pub fn row_indices(&self) -> Vec<RowIndex> {
        self.subfamilies
            .iter()
            .map(|&s| RowIndex::Subfamily(s))
            .chain(std::iter::once(RowIndex::Extended))
            .collect()
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    pub fn row(&self, subfamily: Subfamily) -> Option<&[bool]> {
        self.position(subfamily).map(|k| self.rows[k].as_slice())
    }

    pub fn position(&self, subfamily: Subfamily) -> Option<usize> {
        self.subfamilies.binary_search(&subfamily).ok()
    }

    pub fn extended_row(&self) -> &[Rational] {
        &self.extended
    }

    /// `ξ^J · v`
    pub fn dot(&self, row: RowIndex, v: &[Rational]) -> Rational {
        match row {
            RowIndex::Subfamily(s) => {
                let bits = self.row(s).expect("subfamily is a row of this matrix");
                bits.iter()
                    .zip(v)
                    .filter(|(&b, _)| b)
                    .fold(Rational::zero(), |acc, (_, x)| acc + x)
            }
            RowIndex::Extended => self
                .extended
                .iter()
                .zip(v)
                .fold(Rational::zero(), |acc, (w, x)| acc + w * x),
        }
    }

    /// `ξ^J · a` for an ordinary row: the number of chosen patches that are
    /// undominated in `J`.
    pub fn count_undominated(&self, layout: &PatchLayout, s: Subfamily, a: &BehavioralType) -> usize {
        let bits = self.row(s).expect("subfamily is a row of this matrix");
        (0..layout.budgets())
            .filter(|&j| bits[layout.flat(j, a.choice(j))])
            .count()
    }

    /// `ξ^J · a` for any row of the extended system.
    pub fn dot_type(&self, layout: &PatchLayout, row: RowIndex, a: &BehavioralType) -> Rational {
        match row {
            RowIndex::Subfamily(s) => {
                Rational::from_integer((self.count_undominated(layout, s, a) as i64).into())
            }
            RowIndex::Extended => (0..layout.budgets())
                .fold(Rational::zero(), |acc, j| {
                    acc + &self.extended[layout.flat(j, a.choice(j))]
                }),
        }
    }

    /// `Ξa >= 1`: the type picks an undominated patch in every subfamily.
    pub fn covers(&self, layout: &PatchLayout, a: &BehavioralType) -> bool {
        self.subfamilies
            .iter()
            .all(|&s| self.count_undominated(layout, s, a) >= 1)
    }

    /// Ordinary rows as a 0/1 integer matrix.
    pub fn as_integers(&self) -> Vec<Vec<i64>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&b| i64::from(b)).collect())
            .collect()
    }
}
