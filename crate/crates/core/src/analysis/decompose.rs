//! Decompositions of `π` into behavioral types and the primal/dual
//! programs over the type matrix `A`.

use num_traits::{Signed, Zero};

use super::demand::StochasticDemand;
use crate::error::{Error, Result};
use crate::geometry::PatchLayout;
use crate::lp::{solve_lp, LinearProgram, LpOutcome, Relation, Sense};
use crate::rational::{int, one, Rational};
use crate::revealed::{satisfies_sarp, BehavioralType, TypeSpace};
use crate::xi::{RowIndex, XiMatrix};

/// `π = Σ τ_a a` with positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    /// Support of `τ` with its weights.
    pub weights: Vec<(BehavioralType, Rational)>,
    /// Total weight on SARP-consistent types.
    pub total_rational_weight: Rational,
    /// `P(π)`, the largest achievable rational weight.
    pub value_p: Rational,
}

impl Decomposition {
    /// Validates an explicit decomposition of `pi`. Zero weights are
    /// dropped; negative weights, a total other than one or an inexact
    /// reconstruction are errors.
    pub fn from_weights(
        layout: &PatchLayout,
        pi: &StochasticDemand,
        weights: Vec<(BehavioralType, Rational)>,
        value_p: Rational,
    ) -> Result<Self> {
        if weights.iter().any(|(_, w)| w.is_negative()) {
            return Err(Error::Demand("decomposition has a negative weight".into()));
        }
        let weights: Vec<_> = weights.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        let total: Rational = weights.iter().map(|(_, w)| w).sum();
        if total != one() {
            return Err(Error::Demand(format!("decomposition weights sum to {total}")));
        }
        let mut rebuilt = vec![Rational::zero(); layout.total()];
        for (a, w) in &weights {
            for j in 0..layout.budgets() {
                rebuilt[layout.flat(j, a.choice(j))] += w;
            }
        }
        if rebuilt != pi.as_slice() {
            return Err(Error::Demand("decomposition does not reproduce π".into()));
        }
        let total_rational_weight = weights
            .iter()
            .filter(|(a, _)| satisfies_sarp(layout, a).consistent)
            .map(|(_, w)| w)
            .sum();
        Ok(Decomposition {
            weights,
            total_rational_weight,
            value_p,
        })
    }

    pub fn is_optimal(&self) -> bool {
        self.total_rational_weight == self.value_p
    }

    pub fn support(&self) -> impl Iterator<Item = &BehavioralType> {
        self.weights.iter().map(|(a, _)| a)
    }
}

fn type_columns(layout: &PatchLayout, space: &TypeSpace, pi: &StochasticDemand) -> Result<Vec<Vec<u8>>> {
    if pi.as_slice().len() != layout.total() {
        return Err(Error::Dimension("demand does not match the layout".into()));
    }
    Ok(space.all.iter().map(|a| a.to_binary(layout)).collect())
}

fn equality_rows(lp: &mut LinearProgram, columns: &[&Vec<u8>], pi: &StochasticDemand) {
    for (k, target) in pi.as_slice().iter().enumerate() {
        let row = columns.iter().map(|c| int(i64::from(c[k]))).collect();
        lp.add_constraint(row, Relation::Equal, target.clone());
    }
}

/// Solves `max Σ_{a ∈ A*} τ_a` subject to `Aτ = π`, `τ >= 0`.
///
/// The optimal value is unique; which optimal support is returned depends
/// on the pivoting path.
pub fn primal_decompose(layout: &PatchLayout, space: &TypeSpace, pi: &StochasticDemand) -> Result<Decomposition> {
    let columns = type_columns(layout, space, pi)?;
    let objective = space.rational.iter().map(|&r| int(i64::from(r))).collect();
    let mut lp = LinearProgram::new(Sense::Maximize, objective);
    let refs: Vec<&Vec<u8>> = columns.iter().collect();
    equality_rows(&mut lp, &refs, pi);
    let (value, point) = match solve_lp(&lp)? {
        LpOutcome::Optimal { value, point } => (value, point),
        other => {
            return Err(Error::Internal(format!(
                "primal program ended {:?}; every demand decomposes into types",
                other.status()
            )))
        }
    };
    let weights = space
        .all
        .iter()
        .zip(point)
        .filter(|(_, w)| !w.is_zero())
        .map(|(a, w)| (a.clone(), w))
        .collect();
    let decomposition = Decomposition::from_weights(layout, pi, weights, value)?;
    if !decomposition.is_optimal() {
        return Err(Error::Internal("primal optimum disagrees with its own support".into()));
    }
    Ok(decomposition)
}

/// Whether `π = A* τ*` has a solution with `τ* >= 0`.
pub fn rational_types_span(layout: &PatchLayout, space: &TypeSpace, pi: &StochasticDemand) -> Result<bool> {
    let columns = type_columns(layout, space, pi)?;
    let rational: Vec<&Vec<u8>> = columns
        .iter()
        .zip(&space.rational)
        .filter(|(_, &r)| r)
        .map(|(c, _)| c)
        .collect();
    let mut lp = LinearProgram::new(Sense::Maximize, vec![Rational::zero(); rational.len()]);
    equality_rows(&mut lp, &rational, pi);
    Ok(matches!(solve_lp(&lp)?, LpOutcome::Optimal { .. }))
}

/// Solves the dual `min ξ · π` subject to `ξ · a >= 1(a ∈ A*)` for every
/// type, with `ξ` free. Returns the optimum and an optimal `ξ`.
pub fn solve_dual(layout: &PatchLayout, space: &TypeSpace, pi: &StochasticDemand) -> Result<(Rational, Vec<Rational>)> {
    let columns = type_columns(layout, space, pi)?;
    let mut lp = LinearProgram::new(Sense::Minimize, pi.as_slice().to_vec());
    for k in 0..layout.total() {
        lp.set_lower_bound(k, None);
    }
    for (column, &rational) in columns.iter().zip(&space.rational) {
        let row = column.iter().map(|&b| int(i64::from(b))).collect();
        lp.add_constraint(row, Relation::GreaterEq, int(i64::from(rational)));
    }
    match solve_lp(&lp)? {
        LpOutcome::Optimal { value, point } => Ok((value, point)),
        other => Err(Error::Internal(format!("dual program ended {:?}", other.status()))),
    }
}

/// `A^J`: the types for which row `J` attains their dual value.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeClass {
    pub row: RowIndex,
    pub members: Vec<BehavioralType>,
}

impl TypeClass {
    pub fn contains(&self, a: &BehavioralType) -> bool {
        self.members.binary_search(a).is_ok()
    }
}

/// `D(a) = 1(a ∈ A*)`.
pub fn type_dual_value(layout: &PatchLayout, a: &BehavioralType) -> Rational {
    int(i64::from(satisfies_sarp(layout, a).consistent))
}

/// Whether `a ∈ A^J` for the given row.
pub fn in_class(layout: &PatchLayout, xi: &XiMatrix, row: RowIndex, a: &BehavioralType, rational: bool) -> bool {
    xi.dot_type(layout, row, a) == int(i64::from(rational))
}

/// Every class `A^J` over the extended row set, in row order, the extended
/// row last.
pub fn type_classes(layout: &PatchLayout, xi: &XiMatrix, space: &TypeSpace) -> Vec<TypeClass> {
    xi.row_indices()
        .into_iter()
        .map(|row| TypeClass {
            row,
            members: space
                .all
                .iter()
                .zip(&space.rational)
                .filter(|(a, &r)| in_class(layout, xi, row, a, r))
                .map(|(a, _)| a.clone())
                .collect(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalityVerdict {
    pub optimal: bool,
    /// Every row whose class contains the whole support.
    pub witnesses: Vec<RowIndex>,
}

/// A decomposition attains `P(π)` iff its support lies inside one class.
pub fn check_decomposition_optimality(decomposition: &Decomposition, classes: &[TypeClass]) -> OptimalityVerdict {
    let witnesses: Vec<RowIndex> = classes
        .iter()
        .filter(|c| decomposition.support().all(|a| c.contains(a)))
        .map(|c| c.row)
        .collect();
    OptimalityVerdict {
        optimal: !witnesses.is_empty(),
        witnesses,
    }
}

/// Rows of the extended set whose class contains every type in `types`.
pub fn shared_classes(layout: &PatchLayout, xi: &XiMatrix, types: &[BehavioralType]) -> Vec<RowIndex> {
    let rational: Vec<bool> = types
        .iter()
        .map(|a| satisfies_sarp(layout, a).consistent)
        .collect();
    xi.row_indices()
        .into_iter()
        .filter(|&row| {
            types
                .iter()
                .zip(&rational)
                .all(|(a, &r)| in_class(layout, xi, row, a, r))
        })
        .collect()
}

