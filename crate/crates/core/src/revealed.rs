//! Behavioral types, direct revealed preference and SARP.

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{PatchLayout, Sign};

/// Default cap on the number of enumerated behavioral types.
pub const DEFAULT_TYPE_CAP: u128 = 1 << 20;

/// One chosen patch per budget.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BehavioralType {
    choices: Vec<usize>,
}

impl BehavioralType {
    pub fn new(layout: &PatchLayout, choices: Vec<usize>) -> Result<Self> {
        if choices.len() != layout.budgets() {
            return Err(Error::BehavioralType(format!(
                "{} choices for {} budgets",
                choices.len(),
                layout.budgets()
            )));
        }
        for (j, &i) in choices.iter().enumerate() {
            if i >= layout.count(j) {
                return Err(Error::BehavioralType(format!(
                    "budget {} has {} patches, choice {} is out of range",
                    j + 1,
                    layout.count(j),
                    i + 1
                )));
            }
        }
        Ok(BehavioralType { choices })
    }

    /// Reads a flat 0/1 vector with exactly one 1 per budget block.
    pub fn from_binary(layout: &PatchLayout, bits: &[u8]) -> Result<Self> {
        if bits.len() != layout.total() {
            return Err(Error::BehavioralType(format!(
                "vector has {} entries, layout has {} patches",
                bits.len(),
                layout.total()
            )));
        }
        let mut choices = Vec::with_capacity(layout.budgets());
        for j in 0..layout.budgets() {
            let block = &bits[layout.offset(j)..layout.offset(j) + layout.count(j)];
            if block.iter().any(|&b| b > 1) {
                return Err(Error::BehavioralType(format!(
                    "block {} has entries other than 0 and 1",
                    j + 1
                )));
            }
            let ones: Vec<usize> = (0..block.len()).filter(|&i| block[i] == 1).collect();
            if ones.len() != 1 {
                return Err(Error::BehavioralType(format!(
                    "block {} must contain exactly one 1, found {}",
                    j + 1,
                    ones.len()
                )));
            }
            choices.push(ones[0]);
        }
        Ok(BehavioralType { choices })
    }

    pub fn choice(&self, j: usize) -> usize {
        self.choices[j]
    }

    pub fn choices(&self) -> &[usize] {
        &self.choices
    }

    pub fn to_binary(&self, layout: &PatchLayout) -> Vec<u8> {
        let mut bits = vec![0u8; layout.total()];
        for (j, &i) in self.choices.iter().enumerate() {
            bits[layout.flat(j, i)] = 1;
        }
        bits
    }

    /// Copy with the choice on budget `j` replaced.
    pub fn with_choice(&self, j: usize, i: usize) -> Self {
        let mut choices = self.choices.clone();
        choices[j] = i;
        BehavioralType { choices }
    }
}

impl fmt::Display for BehavioralType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.choices.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `a(B_from) ≻ a(B_to)`: the bundle chosen on `to` is strictly affordable
/// under budget `from`.
pub fn revealed_prefers(layout: &PatchLayout, a: &BehavioralType, from: usize, to: usize) -> bool {
    assert_ne!(from, to);
    layout.patch(to, a.choice(to)).signs.against(from) == Sign::Below
}

/// Direct revealed preference as adjacency lists over budgets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RevealedGraph {
    successors: Vec<Vec<usize>>,
}

impl RevealedGraph {
    pub fn new(layout: &PatchLayout, a: &BehavioralType) -> Self {
        let budgets = layout.budgets();
        let successors = (0..budgets)
            .map(|from| {
                (0..budgets)
                    .filter(|&to| to != from && revealed_prefers(layout, a, from, to))
                    .collect()
            })
            .collect();
        RevealedGraph { successors }
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.successors[from].contains(&to)
    }

    pub fn successors(&self, from: usize) -> &[usize] {
        &self.successors[from]
    }

    /// First directed cycle found by depth-first search from the lowest
    /// budget, as `[j1, ..., jl]` with `j1 ≻ j2 ≻ ... ≻ jl ≻ j1`.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        let n = self.successors.len();
        let mut mark = vec![Mark::New; n];
        for root in 0..n {
            if mark[root] != Mark::New {
                continue;
            }
            // (node, next successor position)
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            mark[root] = Mark::Active;
            while let Some(&mut (node, ref mut pos)) = stack.last_mut() {
                if let Some(&next) = self.successors[node].get(*pos) {
                    *pos += 1;
                    match mark[next] {
                        Mark::New => {
                            mark[next] = Mark::Active;
                            stack.push((next, 0));
                        }
                        Mark::Active => {
                            let start = stack.iter().position(|&(v, _)| v == next).unwrap();
                            return Some(stack[start..].iter().map(|&(v, _)| v).collect());
                        }
                        Mark::Done => {}
                    }
                } else {
                    mark[node] = Mark::Done;
                    stack.pop();
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SarpVerdict {
    pub consistent: bool,
    pub cycle: Option<Vec<usize>>,
}

pub fn satisfies_sarp(layout: &PatchLayout, a: &BehavioralType) -> SarpVerdict {
    let cycle = RevealedGraph::new(layout, a).find_cycle();
    SarpVerdict {
        consistent: cycle.is_none(),
        cycle,
    }
}

/// All behavioral types with their SARP flags.
#[derive(Debug, Clone)]
pub struct TypeSpace {
    pub all: Vec<BehavioralType>,
    pub rational: Vec<bool>,
}

impl TypeSpace {
    pub fn len(&self) -> usize {
        self.all.len()
    }

    pub fn is_empty(&self) -> bool {
        self.all.is_empty()
    }

    pub fn rational_types(&self) -> impl Iterator<Item = &BehavioralType> {
        self.all
            .iter()
            .zip(&self.rational)
            .filter(|(_, &r)| r)
            .map(|(a, _)| a)
    }

    pub fn rational_count(&self) -> usize {
        self.rational.iter().filter(|&&r| r).count()
    }

    pub fn position(&self, a: &BehavioralType) -> Option<usize> {
        // `all` is sorted lexicographically.
        self.all.binary_search(a).ok()
    }
}

pub fn type_count(layout: &PatchLayout) -> u128 {
    layout
        .counts()
        .iter()
        .fold(1u128, |acc, &c| acc.saturating_mul(c as u128))
}

/// Enumerates the full Cartesian product of patch choices in lexicographic
/// order (budget 1 most significant) and flags the SARP-consistent ones.
pub fn enumerate_types(layout: &PatchLayout, cap: u128) -> Result<TypeSpace> {
    let product = type_count(layout);
    if product > cap {
        return Err(Error::EnumerationCap { product, cap });
    }
    let counts = layout.counts();
    let mut all = Vec::with_capacity(product as usize);
    let mut choices = vec![0usize; counts.len()];
    loop {
        all.push(BehavioralType {
            choices: choices.clone(),
        });
        let mut j = counts.len();
        loop {
            if j == 0 {
                let rational = all
                    .iter()
                    .map(|a| satisfies_sarp(layout, a).consistent)
                    .collect();
                return Ok(TypeSpace { all, rational });
            }
            j -= 1;
            choices[j] += 1;
            if choices[j] < counts[j] {
                break;
            }
            choices[j] = 0;
        }
    }
}
