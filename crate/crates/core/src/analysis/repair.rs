//! Exchange repair: rearranging the choices of several behavioral types,
//! budget by budget, so that their sum is unchanged and at least one of
//! them becomes SARP-consistent.
//!
//! Two irrational types without a common class are repaired by walking the
//! budgets: at each step the remaining budgets form a subfamily, and the
//! first type keeps (or takes from the second type) a choice that is
//! undominated there. For more than two types whose irrational members
//! pairwise share a class, choices are exchanged between two irrational
//! types until no row separates the first type from all the others; the
//! remaining types then lack a common class and the procedure recurses on
//! them.
//!
//! The multi-type procedure is applied to arbitrary tuples of types, not
//! only to those appearing in a uniform mixture.

use super::decompose::{in_class, shared_classes};
use crate::error::{Error, Result};
use crate::geometry::PatchLayout;
use crate::revealed::{satisfies_sarp, BehavioralType};
use crate::xi::{is_undominated, RowIndex, Subfamily, XiMatrix};

/// Choices on `budget` were swapped between the types that started at
/// input positions `inputs.0` and `inputs.1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exchange {
    pub budget: usize,
    pub inputs: (usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepairOutcome {
    /// Repaired types in output order.
    pub types: Vec<BehavioralType>,
    /// `order[k]` is the input position whose type ended up in slot `k`.
    pub order: Vec<usize>,
    pub exchanges: Vec<Exchange>,
}

impl RepairOutcome {
    pub fn first_rational(&self, layout: &PatchLayout) -> Option<usize> {
        self.types
            .iter()
            .position(|a| satisfies_sarp(layout, a).consistent)
    }
}

struct Work<'a> {
    layout: &'a PatchLayout,
    xi: &'a XiMatrix,
    slots: Vec<(usize, BehavioralType)>,
    exchanges: Vec<Exchange>,
}

impl Work<'_> {
    fn rational(&self, k: usize) -> bool {
        satisfies_sarp(self.layout, &self.slots[k].1).consistent
    }

    /// Moves slot `from` to position `to`, shifting the ones in between.
    fn move_slot(&mut self, from: usize, to: usize) {
        let item = self.slots.remove(from);
        self.slots.insert(to, item);
    }

    fn exchange(&mut self, budget: usize, a: usize, b: usize) {
        let ca = self.slots[a].1.choice(budget);
        let cb = self.slots[b].1.choice(budget);
        self.slots[a].1 = self.slots[a].1.with_choice(budget, cb);
        self.slots[b].1 = self.slots[b].1.with_choice(budget, ca);
        self.exchanges.push(Exchange {
            budget,
            inputs: (self.slots[a].0, self.slots[b].0),
        });
    }

    fn undominated_choice(&self, k: usize, budget: usize, within: Subfamily) -> bool {
        let a = &self.slots[k].1;
        is_undominated(self.layout.patch(budget, a.choice(budget)), within)
    }

    fn types(&self, from: usize) -> Vec<BehavioralType> {
        self.slots[from..].iter().map(|(_, a)| a.clone()).collect()
    }

    /// Repairs the slots `start..`, which must have no common class.
    fn repair_from(&mut self, start: usize) -> Result<()> {
        let m = self.slots.len();
        let irrational: Vec<usize> = (start..m).filter(|&k| !self.rational(k)).collect();
        if irrational.len() < 2 {
            // A rational type is already present; put it first.
            let k = (start..m).find(|&k| self.rational(k)).expect("at least one rational");
            self.move_slot(k, start);
            return Ok(());
        }

        for (x, &p) in irrational.iter().enumerate() {
            for &q in &irrational[x + 1..] {
                let pair = [self.slots[p].1.clone(), self.slots[q].1.clone()];
                if shared_classes(self.layout, self.xi, &pair).is_empty() {
                    self.move_slot(p, start);
                    self.move_slot(q, start + 1);
                    return self.chain_walk(start, start + 1);
                }
            }
        }

        // Every irrational pair shares a class.
        self.move_slot(irrational[0], start);
        self.move_slot(irrational[1], start + 1);
        self.shrink_exchanges(start)?;
        let rest = self.types(start + 1);
        if let Some(row) = shared_classes(self.layout, self.xi, &rest).first() {
            return Err(Error::Internal(format!(
                "after exchanges the remaining types still share {row}"
            )));
        }
        self.repair_from(start + 1)
    }

    /// Two irrational types without a common class: walk the budgets so
    /// that slot `first` becomes SARP-consistent.
    fn chain_walk(&mut self, first: usize, second: usize) -> Result<()> {
        let mut remaining: Vec<usize> = (0..self.layout.budgets()).collect();
        while remaining.len() >= 2 {
            let within = Subfamily::from_budgets(&remaining);
            let keep = remaining
                .iter()
                .position(|&j| self.undominated_choice(first, j, within));
            let pos = match keep {
                Some(pos) => pos,
                None => {
                    let pos = remaining
                        .iter()
                        .position(|&j| self.undominated_choice(second, j, within))
                        .ok_or_else(|| {
                            Error::Internal(format!("both types are dominated throughout {within}"))
                        })?;
                    self.exchange(remaining[pos], first, second);
                    pos
                }
            };
            remaining.remove(pos);
        }
        if !self.rational(first) {
            return Err(Error::Internal("chain walk left the first type irrational".into()));
        }
        Ok(())
    }

    /// Rows `J` with `ξ^J · a_1 > D(a_1)` and `ξ^J · a_k = D(a_k)` for
    /// every other active type.
    fn separating_rows(&self, start: usize) -> Vec<RowIndex> {
        let active: Vec<(BehavioralType, bool)> = (start..self.slots.len())
            .map(|k| (self.slots[k].1.clone(), self.rational(k)))
            .collect();
        self.xi
            .row_indices()
            .into_iter()
            .filter(|&row| {
                let (a1, r1) = &active[0];
                !in_class(self.layout, self.xi, row, a1, *r1)
                    && active[1..]
                        .iter()
                        .all(|(a, r)| in_class(self.layout, self.xi, row, a, *r))
            })
            .collect()
    }

    /// Exchanges choices between slots `start` and `start + 1` until no row
    /// separates the first from the other active types. Each exchange
    /// strictly shrinks the separating set.
    fn shrink_exchanges(&mut self, start: usize) -> Result<()> {
        let mut separating = self.separating_rows(start);
        while !separating.is_empty() {
            // Largest cardinality, then lexicographically last; such an
            // element is inclusion-maximal.
            let target = separating
                .iter()
                .filter_map(|r| match r {
                    RowIndex::Subfamily(s) => Some(*s),
                    RowIndex::Extended => None,
                })
                .max()
                .ok_or_else(|| Error::Internal("only the extended row separates".into()))?;
            let budget = target
                .members()
                .find(|&j| self.undominated_choice(start, j, target))
                .ok_or_else(|| Error::Internal(format!("no undominated choice in {target}")))?;
            if self.undominated_choice(start + 1, budget, target) {
                return Err(Error::Internal(format!(
                    "second type is undominated in separating row {target}"
                )));
            }
            self.exchange(budget, start, start + 1);
            let next = self.separating_rows(start);
            if next.len() >= separating.len() || next.iter().any(|r| !separating.contains(r)) {
                return Err(Error::Internal("exchange did not shrink the separating rows".into()));
            }
            separating = next;
        }
        Ok(())
    }
}

/// Rearranges choices among `types` so that their coordinate sum is kept
/// and at least one output type satisfies SARP.
///
/// Refuses when all inputs lie in a common class `A^J`; then no exchange
/// can raise the rational weight of their mixture.
pub fn exchange_repair(layout: &PatchLayout, xi: &XiMatrix, types: &[BehavioralType]) -> Result<RepairOutcome> {
    if types.len() < 2 {
        return Err(Error::BehavioralType(format!(
            "exchange repair needs at least two types, got {}",
            types.len()
        )));
    }
    for a in types {
        BehavioralType::new(layout, a.choices().to_vec())?;
    }
    if let Some(row) = shared_classes(layout, xi, types).first() {
        return Err(Error::SharedClass {
            subfamily: row.to_string(),
        });
    }

    let mut work = Work {
        layout,
        xi,
        slots: types.iter().cloned().enumerate().collect(),
        exchanges: Vec::new(),
    };
    work.repair_from(0)?;

    let outcome = RepairOutcome {
        order: work.slots.iter().map(|(k, _)| *k).collect(),
        types: work.slots.into_iter().map(|(_, a)| a).collect(),
        exchanges: work.exchanges,
    };
    if choice_counts(layout, &outcome.types) != choice_counts(layout, types) {
        return Err(Error::Internal("exchange repair changed the coordinate sum".into()));
    }
    if outcome.first_rational(layout).is_none() {
        return Err(Error::Internal("exchange repair produced no rational type".into()));
    }
    Ok(outcome)
}

/// `Σ a_k` as patch counts.
pub fn choice_counts(layout: &PatchLayout, types: &[BehavioralType]) -> Vec<usize> {
    let mut counts = vec![0; layout.total()];
    for a in types {
        for j in 0..layout.budgets() {
            counts[layout.flat(j, a.choice(j))] += 1;
        }
    }
    counts
}
