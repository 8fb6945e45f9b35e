//! Exact two-phase simplex over [`Rational`].
//!
//! Callers state constraints in natural form (`<=`, `=`, `>=`) with an
//! optional lower bound per variable; the reduction to standard form with
//! nonnegative right-hand sides happens here. Pivoting follows Bland's rule
//! (smallest entering index, ties in the ratio test broken by the smallest
//! basic index), so every solve terminates even on degenerate programs.
//! Phase one minimizes the sum of artificial variables; no big-M constant
//! is ever introduced.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{dot, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    LessEq,
    Equal,
    GreaterEq,
}

impl Relation {
    fn flipped(self) -> Self {
        match self {
            Relation::LessEq => Relation::GreaterEq,
            Relation::Equal => Relation::Equal,
            Relation::GreaterEq => Relation::LessEq,
        }
    }

    fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::LessEq => lhs <= rhs,
            Relation::Equal => lhs == rhs,
            Relation::GreaterEq => lhs >= rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// A linear program in natural form.
///
/// Variables default to a lower bound of zero; use
/// [`LinearProgram::set_lower_bound`] with `None` for a free variable.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub lower_bounds: Vec<Option<Rational>>,
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<Rational>) -> Self {
        let lower_bounds = vec![Some(Rational::zero()); objective.len()];
        LinearProgram {
            sense,
            objective,
            constraints: Vec::new(),
            lower_bounds,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coefficients: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint {
            coefficients,
            relation,
            rhs,
        });
    }

    pub fn set_lower_bound(&mut self, var: usize, bound: Option<Rational>) {
        self.lower_bounds[var] = bound;
    }

    fn validate(&self) -> Result<()> {
        let n = self.objective.len();
        if self.lower_bounds.len() != n {
            return Err(Error::Dimension(format!(
                "{} lower bounds for {} variables",
                self.lower_bounds.len(),
                n
            )));
        }
        for (k, c) in self.constraints.iter().enumerate() {
            if c.coefficients.len() != n {
                return Err(Error::Dimension(format!(
                    "constraint {} has {} coefficients, objective has {}",
                    k,
                    c.coefficients.len(),
                    n
                )));
            }
        }
        Ok(())
    }

    /// True when `point` satisfies every constraint and bound exactly.
    pub fn is_feasible(&self, point: &[Rational]) -> bool {
        if point.len() != self.num_vars() {
            return false;
        }
        let bounds_ok = self
            .lower_bounds
            .iter()
            .zip(point)
            .all(|(lb, x)| lb.as_ref().is_none_or(|lb| x >= lb));
        bounds_ok
            && self
                .constraints
                .iter()
                .all(|c| c.relation.holds(&dot(&c.coefficients, point), &c.rhs))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal { .. } => LpStatus::Optimal,
            LpOutcome::Infeasible => LpStatus::Infeasible,
            LpOutcome::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

/// How an original variable maps onto nonnegative tableau columns.
#[derive(Debug, Clone)]
struct VarMap {
    plus: usize,
    minus: Option<usize>,
    shift: Rational,
}

#[derive(Debug)]
struct Tableau {
    /// Constraint rows, last entry is the right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Reduced-cost row for the current maximization objective; last entry
    /// is the objective value.
    costs: Vec<Rational>,
    basis: Vec<usize>,
    width: usize,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rational {
        &self.rows[r][self.width]
    }

    /// Loads `objective` (to be maximized) and prices out the basis.
    fn set_objective(&mut self, objective: &[Rational]) {
        let mut costs: Vec<Rational> = objective.iter().map(|c| -c).collect();
        costs.push(Rational::zero());
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &objective[b];
            if cb.is_zero() {
                continue;
            }
            for (j, a) in self.rows[r].iter().enumerate() {
                if !a.is_zero() {
                    costs[j] += cb * a;
                }
            }
        }
        self.costs = costs;
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let pivot = self.rows[pr][pc].clone();
        for a in self.rows[pr].iter_mut() {
            if !a.is_zero() {
                *a /= &pivot;
            }
        }
        let prow = self.rows[pr].clone();
        let support: Vec<usize> = (0..=self.width).filter(|&j| !prow[j].is_zero()).collect();
        for (r, row) in self.rows.iter_mut().enumerate() {
            if r == pr || row[pc].is_zero() {
                continue;
            }
            let factor = row[pc].clone();
            for &j in &support {
                row[j] -= &factor * &prow[j];
            }
        }
        if !self.costs[pc].is_zero() {
            let factor = self.costs[pc].clone();
            for &j in &support {
                self.costs[j] -= &factor * &prow[j];
            }
        }
        self.basis[pr] = pc;
    }

    /// Runs Bland's-rule simplex iterations over the allowed columns.
    fn optimize(&mut self, allowed: &[bool]) -> Phase {
        loop {
            let entering = (0..self.width).find(|&j| allowed[j] && self.costs[j].is_negative());
            let Some(pc) = entering else {
                return Phase::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][pc];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                best = match best {
                    None => Some((r, ratio)),
                    Some((br, bratio)) => {
                        if ratio < bratio || (ratio == bratio && self.basis[r] < self.basis[br]) {
                            Some((r, ratio))
                        } else {
                            Some((br, bratio))
                        }
                    }
                };
            }
            match best {
                None => return Phase::Unbounded,
                Some((pr, _)) => self.pivot(pr, pc),
            }
        }
    }
}

/// Solves `lp` exactly.
///
/// An `Optimal` outcome is re-verified against every constraint before it
/// is returned; a failed verification surfaces as [`Error::Internal`].
pub fn solve_lp(lp: &LinearProgram) -> Result<LpOutcome> {
    lp.validate()?;
    let n = lp.num_vars();

    let mut maps = Vec::with_capacity(n);
    let mut structural = 0usize;
    for lb in &lp.lower_bounds {
        let plus = structural;
        structural += 1;
        let (minus, shift) = match lb {
            Some(l) => (None, l.clone()),
            None => {
                structural += 1;
                (Some(plus + 1), Rational::zero())
            }
        };
        maps.push(VarMap { plus, minus, shift });
    }

    // Normalized rows over structural columns with nonnegative rhs.
    let mut normalized: Vec<(Vec<Rational>, Relation, Rational)> = Vec::new();
    for c in &lp.constraints {
        let mut coeffs = vec![Rational::zero(); structural];
        let mut rhs = c.rhs.clone();
        for (i, a) in c.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let m = &maps[i];
            coeffs[m.plus] = a.clone();
            if let Some(minus) = m.minus {
                coeffs[minus] = -a;
            }
            if !m.shift.is_zero() {
                rhs -= a * &m.shift;
            }
        }
        let mut relation = c.relation;
        if rhs.is_negative() {
            for a in coeffs.iter_mut() {
                *a = -a.clone();
            }
            rhs = -rhs;
            relation = relation.flipped();
        }
        normalized.push((coeffs, relation, rhs));
    }

    let slack_count = normalized
        .iter()
        .filter(|(_, rel, _)| *rel != Relation::Equal)
        .count();
    let artificial_count = normalized
        .iter()
        .filter(|(_, rel, _)| *rel != Relation::LessEq)
        .count();
    let width = structural + slack_count + artificial_count;
    let first_artificial = structural + slack_count;

    let mut rows = Vec::with_capacity(normalized.len());
    let mut basis = Vec::with_capacity(normalized.len());
    let mut next_slack = structural;
    let mut next_artificial = first_artificial;
    for (coeffs, relation, rhs) in normalized {
        let mut row = coeffs;
        row.resize(width + 1, Rational::zero());
        row[width] = rhs;
        match relation {
            Relation::LessEq => {
                row[next_slack] = Rational::from_integer(1.into());
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::GreaterEq => {
                row[next_slack] = Rational::from_integer((-1).into());
                next_slack += 1;
                row[next_artificial] = Rational::from_integer(1.into());
                basis.push(next_artificial);
                next_artificial += 1;
            }
            Relation::Equal => {
                row[next_artificial] = Rational::from_integer(1.into());
                basis.push(next_artificial);
                next_artificial += 1;
            }
        }
        rows.push(row);
    }

    let mut tableau = Tableau {
        rows,
        costs: Vec::new(),
        basis,
        width,
    };

    // Phase one: maximize minus the sum of artificials.
    if artificial_count > 0 {
        let phase_one: Vec<Rational> = (0..width)
            .map(|j| {
                if j >= first_artificial {
                    Rational::from_integer((-1).into())
                } else {
                    Rational::zero()
                }
            })
            .collect();
        tableau.set_objective(&phase_one);
        let allowed = vec![true; width];
        // Bounded below by zero, so phase one cannot be unbounded.
        let _ = tableau.optimize(&allowed);
        if tableau.costs[width].is_negative() {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut r = 0;
        while r < tableau.rows.len() {
            if tableau.basis[r] >= first_artificial {
                let replacement =
                    (0..first_artificial).find(|&j| !tableau.rows[r][j].is_zero());
                match replacement {
                    Some(pc) => {
                        tableau.pivot(r, pc);
                        r += 1;
                    }
                    None => {
                        tableau.rows.remove(r);
                        tableau.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
    }

    // Phase two.
    let flip = match lp.sense {
        Sense::Maximize => Rational::from_integer(1.into()),
        Sense::Minimize => Rational::from_integer((-1).into()),
    };
    let mut objective = vec![Rational::zero(); width];
    for (i, m) in maps.iter().enumerate() {
        let c = &lp.objective[i] * &flip;
        if let Some(minus) = m.minus {
            objective[minus] = -c.clone();
        }
        objective[m.plus] = c;
    }
    tableau.set_objective(&objective);
    let allowed: Vec<bool> = (0..width).map(|j| j < first_artificial).collect();
    if let Phase::Unbounded = tableau.optimize(&allowed) {
        return Ok(LpOutcome::Unbounded);
    }

    let mut columns = vec![Rational::zero(); width];
    for (r, &b) in tableau.basis.iter().enumerate() {
        columns[b] = tableau.rhs(r).clone();
    }
    let point: Vec<Rational> = maps
        .iter()
        .map(|m| {
            let mut x = &m.shift + &columns[m.plus];
            if let Some(minus) = m.minus {
                x -= &columns[minus];
            }
            x
        })
        .collect();
    let value = dot(&lp.objective, &point);

    if !lp.is_feasible(&point) {
        return Err(Error::Internal(
            "simplex returned a point violating a constraint".into(),
        ));
    }
    let tableau_value = &tableau.costs[width] * &flip
        + maps
            .iter()
            .zip(&lp.objective)
            .fold(Rational::zero(), |acc, (m, c)| acc + &m.shift * c);
    if tableau_value != value {
        return Err(Error::Internal(
            "simplex objective disagrees with the returned point".into(),
        ));
    }
    Ok(LpOutcome::Optimal { value, point })
}
