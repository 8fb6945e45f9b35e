//! Budget families and their patches.
//!
//! A patch is a cell of one budget hyperplane on which the strict position
//! relative to every other budget hyperplane is constant. Points lying on
//! an intersection of two budgets are never part of a patch.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{solve_lp, LinearProgram, LpOutcome, Relation, Sense};
use crate::rational::{dot, one, Rational};

/// `J` budgets `{y >= 0 : p_j . y = 1}` over `n` goods, indexed from zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetFamily {
    goods: usize,
    prices: Vec<Vec<Rational>>,
}

impl BudgetFamily {
    pub fn new(prices: Vec<Vec<Rational>>) -> Result<Self> {
        if prices.len() < 2 {
            return Err(Error::Family(format!(
                "need at least 2 budgets, got {}",
                prices.len()
            )));
        }
        // Subfamilies are stored as 64-bit masks.
        if prices.len() > 63 {
            return Err(Error::Family(format!(
                "at most 63 budgets are supported, got {}",
                prices.len()
            )));
        }
        let goods = prices[0].len();
        if goods < 2 {
            return Err(Error::Family(format!("need at least 2 goods, got {goods}")));
        }
        for (j, p) in prices.iter().enumerate() {
            if p.len() != goods {
                return Err(Error::Dimension(format!(
                    "budget {} has {} prices, expected {}",
                    j + 1,
                    p.len(),
                    goods
                )));
            }
            if let Some(g) = p.iter().position(|x| !x.is_positive()) {
                return Err(Error::NonPositivePrice {
                    budget: j + 1,
                    good: g + 1,
                });
            }
        }
        for a in 0..prices.len() {
            for b in a + 1..prices.len() {
                if prices[a] == prices[b] {
                    return Err(Error::DuplicatePrices {
                        first: a + 1,
                        second: b + 1,
                    });
                }
            }
        }
        Ok(BudgetFamily { goods, prices })
    }

    pub fn goods(&self) -> usize {
        self.goods
    }

    pub fn budgets(&self) -> usize {
        self.prices.len()
    }

    pub fn prices(&self, j: usize) -> &[Rational] {
        &self.prices[j]
    }

    /// `p_j . y - 1`
    pub fn excess(&self, j: usize, y: &[Rational]) -> Rational {
        dot(&self.prices[j], y) - one()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    /// `p_j' . y < 1`: the bundle is strictly affordable under budget `j'`.
    Below,
    /// `p_j' . y > 1`
    Above,
}

impl Sign {
    fn of(value: &Rational) -> Option<Sign> {
        if value.is_positive() {
            Some(Sign::Above)
        } else if value.is_negative() {
            Some(Sign::Below)
        } else {
            None
        }
    }

    fn factor(self) -> Rational {
        match self {
            Sign::Below => -one(),
            Sign::Above => one(),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Below => '-',
            Sign::Above => '+',
        }
    }
}

/// Position of a cell of budget `budget` against every other budget.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector {
    budget: usize,
    /// One entry per other budget, ascending budget index.
    signs: Vec<Sign>,
}

impl SignVector {
    pub fn new(budget: usize, signs: Vec<Sign>) -> Self {
        SignVector { budget, signs }
    }

    /// Builds the sign vector whose canonical code is `code`.
    pub fn from_code(budget: usize, budgets: usize, code: u64) -> Self {
        let width = budgets - 1;
        let signs = (0..width)
            .map(|k| {
                if code >> (width - 1 - k) & 1 == 1 {
                    Sign::Above
                } else {
                    Sign::Below
                }
            })
            .collect();
        SignVector { budget, signs }
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Sign against budget `other`. Panics if `other` is the own budget.
    pub fn against(&self, other: usize) -> Sign {
        assert_ne!(other, self.budget, "a budget has no sign against itself");
        let k = if other < self.budget { other } else { other - 1 };
        self.signs[k]
    }

    /// `(other budget, sign)` pairs in ascending budget order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, Sign)> + '_ {
        let own = self.budget;
        self.signs
            .iter()
            .enumerate()
            .map(move |(k, &s)| (if k < own { k } else { k + 1 }, s))
    }

    /// Bits over the other budgets in ascending order, most significant
    /// first, `Above = 1`.
    pub fn code(&self) -> u64 {
        self.signs
            .iter()
            .fold(0, |acc, s| (acc << 1) | u64::from(*s == Sign::Above))
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.signs {
            write!(f, "{}", s.symbol())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Patch {
    pub budget: usize,
    pub index: usize,
    pub signs: SignVector,
    /// A point of the cell with every inequality strict.
    pub witness: Vec<Rational>,
}

/// All patches of a family, flattened budget by budget.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchLayout {
    patches: Vec<Vec<Patch>>,
    offsets: Vec<usize>,
    total: usize,
}

impl PatchLayout {
    pub fn from_patches(patches: Vec<Vec<Patch>>) -> Self {
        let mut offsets = Vec::with_capacity(patches.len());
        let mut total = 0;
        for block in &patches {
            offsets.push(total);
            total += block.len();
        }
        PatchLayout {
            patches,
            offsets,
            total,
        }
    }

    pub fn budgets(&self) -> usize {
        self.patches.len()
    }

    /// `I_j`
    pub fn count(&self, j: usize) -> usize {
        self.patches[j].len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.patches.iter().map(Vec::len).collect()
    }

    /// `I`
    pub fn total(&self) -> usize {
        self.total
    }

    pub fn offset(&self, j: usize) -> usize {
        self.offsets[j]
    }

    pub fn flat(&self, j: usize, i: usize) -> usize {
        debug_assert!(i < self.count(j));
        self.offsets[j] + i
    }

    pub fn locate(&self, flat: usize) -> (usize, usize) {
        assert!(flat < self.total, "flat index out of range");
        let j = self.offsets.partition_point(|&o| o <= flat) - 1;
        (j, flat - self.offsets[j])
    }

    pub fn patch(&self, j: usize, i: usize) -> &Patch {
        &self.patches[j][i]
    }

    pub fn block(&self, j: usize) -> &[Patch] {
        &self.patches[j]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Patch> {
        self.patches.iter().flatten()
    }

    /// Index of the patch of budget `j` with the given sign vector.
    pub fn find(&self, signs: &SignVector) -> Option<usize> {
        self.patches[signs.budget()]
            .iter()
            .position(|p| &p.signs == signs)
    }
}

/// Decides whether the sign cell `signs` of budget `signs.budget()` is
/// nonempty. Returns a witness with strictly positive slack when it is.
///
/// Solves `max t` subject to `y >= 0`, `p_j . y = 1`,
/// `s_j' (p_j' . y - 1) >= t` for every other budget and `t <= 1`; the cell
/// is nonempty iff the optimum is positive.
pub fn patch_feasibility(family: &BudgetFamily, signs: &SignVector) -> Result<Option<Vec<Rational>>> {
    let j = signs.budget();
    let n = family.goods();
    if j >= family.budgets() || signs.signs.len() + 1 != family.budgets() {
        return Err(Error::Dimension(format!(
            "sign vector for budget {} does not fit a family of {} budgets",
            j + 1,
            family.budgets()
        )));
    }
    let mut objective = vec![Rational::zero(); n + 1];
    objective[n] = one();
    let mut lp = LinearProgram::new(Sense::Maximize, objective);
    lp.set_lower_bound(n, None);

    let mut own = family.prices(j).to_vec();
    own.push(Rational::zero());
    lp.add_constraint(own, Relation::Equal, one());
    for (other, sign) in signs.entries() {
        let s = sign.factor();
        let mut row: Vec<Rational> = family.prices(other).iter().map(|p| p * &s).collect();
        row.push(-one());
        lp.add_constraint(row, Relation::GreaterEq, s);
    }
    let mut cap = vec![Rational::zero(); n + 1];
    cap[n] = one();
    lp.add_constraint(cap, Relation::LessEq, one());

    match solve_lp(&lp)? {
        LpOutcome::Optimal { value, mut point } if value.is_positive() => {
            point.truncate(n);
            Ok(Some(point))
        }
        LpOutcome::Optimal { .. } => Ok(None),
        other => Err(Error::Internal(format!(
            "patch feasibility program ended {:?}",
            other.status()
        ))),
    }
}

/// Sign vector of a point on budget `j`; `None` if the point lies on
/// another budget hyperplane.
pub fn sign_vector_of(family: &BudgetFamily, j: usize, y: &[Rational]) -> Option<SignVector> {
    let signs = (0..family.budgets())
        .filter(|&k| k != j)
        .map(|k| Sign::of(&family.excess(k, y)))
        .collect::<Option<Vec<_>>>()?;
    Some(SignVector::new(j, signs))
}

/// Enumerates every nonempty sign cell of every budget, in canonical order
/// (ascending [`SignVector::code`]).
pub fn enumerate_patches(family: &BudgetFamily) -> Result<PatchLayout> {
    let budgets = family.budgets();
    let mut blocks = Vec::with_capacity(budgets);
    for j in 0..budgets {
        let mut block = Vec::new();
        for code in 0..(1u64 << (budgets - 1)) {
            let signs = SignVector::from_code(j, budgets, code);
            if let Some(witness) = patch_feasibility(family, &signs)? {
                verify_witness(family, &signs, &witness)?;
                block.push(Patch {
                    budget: j,
                    index: block.len(),
                    signs,
                    witness,
                });
            }
        }
        if block.is_empty() {
            return Err(Error::Internal(format!("budget {} has no patch", j + 1)));
        }
        blocks.push(block);
    }
    Ok(PatchLayout::from_patches(blocks))
}

fn verify_witness(family: &BudgetFamily, signs: &SignVector, y: &[Rational]) -> Result<()> {
    let j = signs.budget();
    let on_budget = family.excess(j, y).is_zero();
    let nonnegative = y.iter().all(|x| !x.is_negative());
    if on_budget && nonnegative && sign_vector_of(family, j, y).as_ref() == Some(signs) {
        Ok(())
    } else {
        Err(Error::Internal(format!(
            "witness for budget {} cell {} is not strictly inside",
            j + 1,
            signs
        )))
    }
}
