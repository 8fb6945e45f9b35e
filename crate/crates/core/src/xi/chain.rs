use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{is_undominated, Subfamily};
use crate::error::{Error, Result};
use crate::geometry::{sign_vector_of, BudgetFamily, PatchLayout};
use crate::rational::{dot, int, Rational};

const DIRECTION_SEED: u64 = 0x5eed_c4a1;
const MAX_DIRECTION_TRIALS: usize = 100_000;

/// Budgets sorted along a direction `d`, the chain of patches containing
/// `d / (p_k . d)`, and the induced partition of the subfamilies.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainPartition {
    pub direction: Vec<Rational>,
    /// `order[k]` is the budget in position `k`, ascending `p . d`.
    pub order: Vec<usize>,
    /// `p_{order[k]} . d`, strictly increasing.
    pub values: Vec<Rational>,
    /// Canonical patch index of the chain patch on budget `order[k]`.
    pub chain_patches: Vec<usize>,
    /// `parts[k]`: subfamilies containing `order[k]` and no earlier budget.
    /// There are `J - 1` parts.
    pub parts: Vec<Vec<Subfamily>>,
}

impl ChainPartition {
    /// Flat coordinate of the chain patch in position `k`.
    pub fn chain_coordinate(&self, layout: &PatchLayout, k: usize) -> usize {
        layout.flat(self.order[k], self.chain_patches[k])
    }

    /// Index of the part holding `subfamily`.
    pub fn part_of(&self, subfamily: Subfamily) -> Option<usize> {
        self.parts.iter().position(|p| p.contains(&subfamily))
    }
}

fn candidate_directions(goods: usize) -> impl Iterator<Item = Vec<Rational>> {
    let axes = (0..goods).map(move |g| (0..goods).map(|k| int(i64::from(k == g))).collect());
    let ones = std::iter::once(vec![int(1); goods]);
    let mut rng = ChaCha8Rng::seed_from_u64(DIRECTION_SEED);
    let random = std::iter::repeat_with(move || {
        loop {
            let d: Vec<Rational> = (0..goods).map(|_| int(rng.gen_range(0..=64))).collect();
            if d.iter().any(|x| !x.is_zero()) {
                return d;
            }
        }
    });
    axes.chain(ones).chain(random).take(MAX_DIRECTION_TRIALS)
}

fn strictly_sorted(family: &BudgetFamily, d: &[Rational]) -> Option<(Vec<usize>, Vec<Rational>)> {
    let mut keyed: Vec<(Rational, usize)> = (0..family.budgets())
        .map(|j| (dot(family.prices(j), d), j))
        .collect();
    keyed.sort();
    if keyed.windows(2).any(|w| w[0].0 == w[1].0) {
        return None;
    }
    Some(keyed.into_iter().map(|(v, j)| (j, v)).unzip())
}

/// Builds the chain partition used to show that `Ξ` has Chvátal rank zero.
///
/// Directions are tried in a fixed order: coordinate axes, the all-ones
/// vector, then seeded pseudo-random nonnegative integer vectors. The first
/// one giving pairwise distinct `p_j . d` is used. The partition invariants
/// are checked before returning.
pub fn chain_partition(family: &BudgetFamily, layout: &PatchLayout) -> Result<ChainPartition> {
    let (direction, order, values) = candidate_directions(family.goods())
        .find_map(|d| strictly_sorted(family, &d).map(|(order, values)| (d, order, values)))
        .ok_or_else(|| {
            Error::Internal(format!(
                "no direction separating the price vectors within {MAX_DIRECTION_TRIALS} trials"
            ))
        })?;

    let mut chain_patches = Vec::with_capacity(order.len());
    for (&j, v) in order.iter().zip(&values) {
        debug_assert!(v.is_positive());
        let point: Vec<Rational> = direction.iter().map(|x| x / v).collect();
        let signs = sign_vector_of(family, j, &point).ok_or_else(|| {
            Error::Internal(format!("chain point of budget {} lies on another budget", j + 1))
        })?;
        let i = layout.find(&signs).ok_or_else(|| {
            Error::Internal(format!("chain point of budget {} is in no patch", j + 1))
        })?;
        chain_patches.push(i);
    }

    let budgets = family.budgets();
    let all = Subfamily::all(budgets);
    let parts: Vec<Vec<Subfamily>> = (0..budgets - 1)
        .map(|k| {
            let earlier = Subfamily::from_budgets(&order[..k]);
            all.iter()
                .copied()
                .filter(|s| s.contains(order[k]) && s.mask() & earlier.mask() == 0)
                .collect()
        })
        .collect();

    let partition = ChainPartition {
        direction,
        order,
        values,
        chain_patches,
        parts,
    };
    verify(&partition, layout, &all)?;
    Ok(partition)
}

fn verify(partition: &ChainPartition, layout: &PatchLayout, all: &[Subfamily]) -> Result<()> {
    let total: usize = partition.parts.iter().map(Vec::len).sum();
    if total != all.len() || all.iter().any(|&s| partition.part_of(s).is_none()) {
        return Err(Error::Internal("chain parts do not partition the subfamilies".into()));
    }
    for k in 0..partition.order.len() {
        let patch = layout.patch(partition.order[k], partition.chain_patches[k]);
        for &s in all {
            let in_part = partition.parts.get(k).is_some_and(|p| p.contains(&s));
            if is_undominated(patch, s) != in_part {
                return Err(Error::Internal(format!(
                    "chain patch {} disagrees with its part on {}",
                    k + 1,
                    s
                )));
            }
        }
    }
    Ok(())
}
