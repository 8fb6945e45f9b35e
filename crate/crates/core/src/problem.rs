//! Problem files: a budget family plus optional demand, behavioral types
//! and a display relabeling of the patches.
//!
//! ```json
//! {
//!   "n": 2,
//!   "prices": [["4", "1"], ["2", "2"], ["1", "4"]],
//!   "pi": [["1/3", "1/3", "1/3"], ["1/3", "1/3", "1/3"], ["1/3", "1/3", "1/3"]],
//!   "types": [[1, 0, 0, 0, 0, 1, 1, 0, 0]],
//!   "index_map": [[3, 2, 1], [1, 3, 2], [1, 2, 3]]
//! }
//! ```
//!
//! `index_map[j][d]` is the one-based canonical index of the patch shown at
//! position `d + 1` on budget `j + 1`. When a map is present, `pi` and
//! `types` are read in display order and every report is written in it.

use std::io::Read;

use num_traits::Signed;
use serde::Deserialize;
use serde_json::Value;

use crate::analysis::StochasticDemand;
use crate::error::{Error, Result};
use crate::geometry::{enumerate_patches, BudgetFamily, PatchLayout};
use crate::rational::{one, parse_rational, Rational};
use crate::revealed::BehavioralType;
use crate::xi::{build_xi, XiMatrix};

fn field_error(field: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::Problem {
        field: field.into(),
        reason: reason.into(),
    }
}

/// A parsed and validated problem document.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFile {
    pub n: usize,
    pub prices: Vec<Vec<Rational>>,
    pub pi: Option<Vec<Vec<Rational>>>,
    pub types: Option<Vec<Vec<u8>>>,
    pub index_map: Option<Vec<Vec<usize>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    n: usize,
    prices: Vec<Vec<Value>>,
    #[serde(default)]
    pi: Option<Vec<Vec<Value>>>,
    #[serde(default)]
    types: Option<Vec<Vec<u8>>>,
    #[serde(default)]
    index_map: Option<Vec<Vec<usize>>>,
}

/// Accepts `"p/q"`, `"k"` or a bare JSON integer. Floats are refused.
fn rational_value(value: &Value, field: &str) -> Result<Rational> {
    match value {
        Value::String(s) => parse_rational(s).map_err(|e| field_error(field, e.to_string())),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap().into())),
        Value::Number(n) => Err(field_error(
            field,
            format!("{n} is not an integer; write fractions as \"p/q\" strings"),
        )),
        other => Err(field_error(field, format!("expected a rational, found {other}"))),
    }
}

fn rational_matrix(rows: &[Vec<Value>], name: &str) -> Result<Vec<Vec<Rational>>> {
    rows.iter()
        .enumerate()
        .map(|(j, row)| {
            row.iter()
                .enumerate()
                .map(|(k, v)| rational_value(v, &format!("{name}[{j}][{k}]")))
                .collect()
        })
        .collect()
}

pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let raw: RawProblem =
        serde_json::from_str(text).map_err(|e| field_error("document", e.to_string()))?;

    let prices = rational_matrix(&raw.prices, "prices")?;
    for (j, row) in prices.iter().enumerate() {
        if row.len() != raw.n {
            return Err(field_error(
                format!("prices[{j}]"),
                format!("has {} entries but n = {}", row.len(), raw.n),
            ));
        }
        if let Some(g) = row.iter().position(|p| !p.is_positive()) {
            return Err(field_error(
                format!("prices[{j}][{g}]"),
                "price must be strictly positive",
            ));
        }
    }
    BudgetFamily::new(prices.clone()).map_err(|e| field_error("prices", e.to_string()))?;

    let pi = match &raw.pi {
        None => None,
        Some(blocks) => {
            let blocks = rational_matrix(blocks, "pi")?;
            if blocks.len() != prices.len() {
                return Err(field_error(
                    "pi",
                    format!("{} blocks for {} budgets", blocks.len(), prices.len()),
                ));
            }
            for (j, block) in blocks.iter().enumerate() {
                if let Some(k) = block.iter().position(|x| x.is_negative()) {
                    return Err(field_error(format!("pi[{j}][{k}]"), "probability is negative"));
                }
                let sum: Rational = block.iter().sum();
                if sum != one() {
                    return Err(field_error(format!("pi[{j}]"), format!("block sums to {sum}, not 1")));
                }
            }
            Some(blocks)
        }
    };

    if let Some(types) = &raw.types {
        for (t, bits) in types.iter().enumerate() {
            if let Some(k) = bits.iter().position(|&b| b > 1) {
                return Err(field_error(format!("types[{t}][{k}]"), "entries must be 0 or 1"));
            }
        }
    }

    Ok(ProblemFile {
        n: raw.n,
        prices,
        pi,
        types: raw.types,
        index_map: raw.index_map,
    })
}

pub fn read_problem<R: Read>(mut reader: R) -> Result<ProblemFile> {
    let mut text = String::new();
    reader
        .read_to_string(&mut text)
        .map_err(|e| field_error("document", e.to_string()))?;
    parse_problem(&text)
}

/// Parses a standalone index map document: a JSON array of arrays.
pub fn parse_index_map(text: &str) -> Result<Vec<Vec<usize>>> {
    serde_json::from_str(text).map_err(|e| field_error("index_map", e.to_string()))
}

/// A per-budget permutation between display positions and canonical
/// patch indices, both zero-based here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexMap {
    to_canonical: Vec<Vec<usize>>,
    to_display: Vec<Vec<usize>>,
}

impl IndexMap {
    pub fn identity(layout: &PatchLayout) -> Self {
        let id: Vec<Vec<usize>> = layout.counts().into_iter().map(|c| (0..c).collect()).collect();
        IndexMap {
            to_canonical: id.clone(),
            to_display: id,
        }
    }

    /// Validates a one-based map against the layout.
    pub fn new(layout: &PatchLayout, one_based: &[Vec<usize>]) -> Result<Self> {
        if one_based.len() != layout.budgets() {
            return Err(field_error(
                "index_map",
                format!("{} rows for {} budgets", one_based.len(), layout.budgets()),
            ));
        }
        let mut to_canonical = Vec::with_capacity(layout.budgets());
        let mut to_display = Vec::with_capacity(layout.budgets());
        for (j, row) in one_based.iter().enumerate() {
            let count = layout.count(j);
            let mut inverse = vec![usize::MAX; count];
            for (d, &c) in row.iter().enumerate() {
                if c == 0 || c > count || inverse[c - 1] != usize::MAX {
                    return Err(field_error(
                        format!("index_map[{j}]"),
                        format!("must be a permutation of 1..={count}"),
                    ));
                }
                inverse[c - 1] = d;
            }
            if row.len() != count {
                return Err(field_error(
                    format!("index_map[{j}]"),
                    format!("must be a permutation of 1..={count}"),
                ));
            }
            to_canonical.push(row.iter().map(|c| c - 1).collect());
            to_display.push(inverse);
        }
        Ok(IndexMap {
            to_canonical,
            to_display,
        })
    }

    pub fn canonical(&self, j: usize, display: usize) -> usize {
        self.to_canonical[j][display]
    }

    pub fn display(&self, j: usize, canonical: usize) -> usize {
        self.to_display[j][canonical]
    }

    /// Reorders a flat canonical vector into display order.
    pub fn flat_to_display<T: Clone>(&self, layout: &PatchLayout, values: &[T]) -> Vec<T> {
        let mut out = Vec::with_capacity(values.len());
        for j in 0..layout.budgets() {
            for d in 0..layout.count(j) {
                out.push(values[layout.flat(j, self.canonical(j, d))].clone());
            }
        }
        out
    }

    /// Reorders a flat display-order vector into canonical order.
    pub fn flat_from_display<T: Clone>(&self, layout: &PatchLayout, values: &[T]) -> Vec<T> {
        let mut out = Vec::with_capacity(values.len());
        for j in 0..layout.budgets() {
            for c in 0..layout.count(j) {
                out.push(values[layout.offset(j) + self.display(j, c)].clone());
            }
        }
        out
    }

    /// One-based display label of a canonical patch, e.g. `B13`.
    pub fn label(&self, j: usize, canonical: usize) -> String {
        format!("B{}{}", j + 1, self.display(j, canonical) + 1)
    }
}

/// A problem resolved against its patch layout.
#[derive(Debug, Clone)]
pub struct Instance {
    pub family: BudgetFamily,
    pub layout: PatchLayout,
    pub xi: XiMatrix,
    pub index_map: IndexMap,
    pub pi: Option<StochasticDemand>,
    pub types: Vec<BehavioralType>,
}

impl Instance {
    /// Enumerates patches and interprets `pi` and `types` through the
    /// index map. `map_override` replaces the map stored in the file.
    pub fn from_problem(problem: &ProblemFile, map_override: Option<&[Vec<usize>]>) -> Result<Self> {
        let family = BudgetFamily::new(problem.prices.clone())?;
        let layout = enumerate_patches(&family)?;
        let index_map = match map_override.or(problem.index_map.as_deref()) {
            Some(raw) => IndexMap::new(&layout, raw)?,
            None => IndexMap::identity(&layout),
        };

        let pi = match &problem.pi {
            None => None,
            Some(blocks) => {
                for (j, block) in blocks.iter().enumerate() {
                    if block.len() != layout.count(j) {
                        return Err(field_error(
                            format!("pi[{j}]"),
                            format!("has {} entries, budget {} has {} patches", block.len(), j + 1, layout.count(j)),
                        ));
                    }
                }
                let flat: Vec<Rational> = blocks.iter().flatten().cloned().collect();
                let canonical = index_map.flat_from_display(&layout, &flat);
                Some(StochasticDemand::new(&layout, canonical).map_err(|e| field_error("pi", e.to_string()))?)
            }
        };

        let mut types = Vec::new();
        for (t, bits) in problem.types.iter().flatten().enumerate() {
            if bits.len() != layout.total() {
                return Err(field_error(
                    format!("types[{t}]"),
                    format!("has {} entries, the family has {} patches", bits.len(), layout.total()),
                ));
            }
            let canonical = index_map.flat_from_display(&layout, bits);
            let a = BehavioralType::from_binary(&layout, &canonical)
                .map_err(|e| field_error(format!("types[{t}]"), e.to_string()))?;
            types.push(a);
        }

        let xi = build_xi(&layout);
        Ok(Instance {
            family,
            layout,
            xi,
            index_map,
            pi,
            types,
        })
    }

    pub fn require_pi(&self) -> Result<&StochasticDemand> {
        self.pi
            .as_ref()
            .ok_or_else(|| field_error("pi", "this command needs a stochastic demand system"))
    }

    /// Reorders a canonical flat vector into display order.
    pub fn display<T: Clone>(&self, values: &[T]) -> Vec<T> {
        self.index_map.flat_to_display(&self.layout, values)
    }

    /// A behavioral type as a display-order 0/1 vector.
    pub fn display_type(&self, a: &BehavioralType) -> Vec<u8> {
        self.display(&a.to_binary(&self.layout))
    }
}
