use num_traits::{Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::PatchLayout;
use crate::rational::{int, one, Rational};
use crate::revealed::BehavioralType;

/// Patch-level choice probabilities, one distribution per budget.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StochasticDemand {
    probabilities: Vec<Rational>,
}

impl StochasticDemand {
    pub fn new(layout: &PatchLayout, probabilities: Vec<Rational>) -> Result<Self> {
        if probabilities.len() != layout.total() {
            return Err(Error::Dimension(format!(
                "demand has {} entries, layout has {} patches",
                probabilities.len(),
                layout.total()
            )));
        }
        if let Some(k) = probabilities.iter().position(|p| p.is_negative()) {
            let (j, i) = layout.locate(k);
            return Err(Error::Demand(format!(
                "probability of patch {} on budget {} is negative",
                i + 1,
                j + 1
            )));
        }
        for j in 0..layout.budgets() {
            let start = layout.offset(j);
            let sum: Rational = probabilities[start..start + layout.count(j)].iter().sum();
            if sum != one() {
                return Err(Error::Demand(format!(
                    "block of budget {} sums to {}, not 1",
                    j + 1,
                    sum
                )));
            }
        }
        Ok(StochasticDemand { probabilities })
    }

    /// Builds from per-budget blocks.
    pub fn from_blocks(layout: &PatchLayout, blocks: Vec<Vec<Rational>>) -> Result<Self> {
        if blocks.len() != layout.budgets() {
            return Err(Error::Dimension(format!(
                "{} demand blocks for {} budgets",
                blocks.len(),
                layout.budgets()
            )));
        }
        for (j, b) in blocks.iter().enumerate() {
            if b.len() != layout.count(j) {
                return Err(Error::Dimension(format!(
                    "demand block {} has {} entries, budget has {} patches",
                    j + 1,
                    b.len(),
                    layout.count(j)
                )));
            }
        }
        Self::new(layout, blocks.into_iter().flatten().collect())
    }

    /// The point mass `π = a`.
    pub fn from_type(layout: &PatchLayout, a: &BehavioralType) -> Self {
        let probabilities = a
            .to_binary(layout)
            .into_iter()
            .map(|b| int(i64::from(b)))
            .collect();
        StochasticDemand { probabilities }
    }

    /// `Σ w_k a_k`; the weights must be nonnegative and sum to one.
    pub fn mixture(layout: &PatchLayout, parts: &[(BehavioralType, Rational)]) -> Result<Self> {
        let mut probabilities = vec![Rational::zero(); layout.total()];
        for (a, w) in parts {
            for j in 0..layout.budgets() {
                probabilities[layout.flat(j, a.choice(j))] += w;
            }
        }
        Self::new(layout, probabilities)
    }

    /// Uniform mixture of `types`.
    pub fn uniform(layout: &PatchLayout, types: &[BehavioralType]) -> Result<Self> {
        let w = Rational::new(1.into(), (types.len() as i64).into());
        let parts: Vec<_> = types.iter().map(|a| (a.clone(), w.clone())).collect();
        Self::mixture(layout, &parts)
    }

    /// `λ self + (1 - λ) other`
    pub fn blend(&self, other: &Self, lambda: &Rational) -> Self {
        let rest = one() - lambda;
        let probabilities = self
            .probabilities
            .iter()
            .zip(&other.probabilities)
            .map(|(a, b)| lambda * a + &rest * b)
            .collect();
        StochasticDemand { probabilities }
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.probabilities
    }

    pub fn into_vec(self) -> Vec<Rational> {
        self.probabilities
    }
}

/// Draws integer weights in `0..=9` per patch and normalizes each budget
/// block. A block of all zeros is redrawn.
pub fn random_demand<R: Rng>(layout: &PatchLayout, rng: &mut R) -> StochasticDemand {
    let mut probabilities = Vec::with_capacity(layout.total());
    for j in 0..layout.budgets() {
        let weights = loop {
            let w: Vec<i64> = (0..layout.count(j)).map(|_| rng.gen_range(0..=9)).collect();
            if w.iter().any(|&x| x > 0) {
                break w;
            }
        };
        let total: i64 = weights.iter().sum();
        probabilities.extend(weights.into_iter().map(|w| Rational::new(w.into(), total.into())));
    }
    StochasticDemand { probabilities }
}

/// A uniformly drawn behavioral type.
pub fn random_type<R: Rng>(layout: &PatchLayout, rng: &mut R) -> BehavioralType {
    let choices = (0..layout.budgets())
        .map(|j| rng.gen_range(0..layout.count(j)))
        .collect();
    BehavioralType::new(layout, choices).expect("choices are in range")
}
