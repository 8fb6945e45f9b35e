#![allow(dead_code, clippy::needless_range_loop)]

use std::path::PathBuf;

use rum_dual::geometry::{enumerate_patches, BudgetFamily, PatchLayout};
use rum_dual::problem::{parse_problem, Instance};
use rum_dual::rational::{parse_rational, Rational};

pub fn problem_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("problems")
        .join(format!("{name}.json"))
}

pub fn load(name: &str) -> Instance {
    let text = std::fs::read_to_string(problem_path(name)).unwrap();
    Instance::from_problem(&parse_problem(&text).unwrap(), None).unwrap()
}

pub fn q(text: &str) -> Rational {
    parse_rational(text).unwrap()
}

pub fn qs(texts: &[&str]) -> Vec<Rational> {
    texts.iter().map(|t| q(t)).collect()
}

pub fn family(rows: &[&[i64]]) -> BudgetFamily {
    BudgetFamily::new(
        rows.iter()
            .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
            .collect(),
    )
    .unwrap()
}

pub fn layout(rows: &[&[i64]]) -> PatchLayout {
    enumerate_patches(&family(rows)).unwrap()
}

/// Revealed preference from witness points: `from` is revealed preferred
/// to the choice on `to` iff that choice's witness is strictly inside
/// budget `from`. Acyclicity by transitive closure.
pub fn witness_sarp(fam: &BudgetFamily, layout: &PatchLayout, choices: &[usize]) -> bool {
    let j = fam.budgets();
    let mut reach = vec![vec![false; j]; j];
    for to in 0..j {
        let y = &layout.patch(to, choices[to]).witness;
        for from in 0..j {
            if from != to && fam.excess(from, y) < Rational::from_integer(0.into()) {
                reach[from][to] = true;
            }
        }
    }
    for k in 0..j {
        for a in 0..j {
            for b in 0..j {
                if reach[a][k] && reach[k][b] {
                    reach[a][b] = true;
                }
            }
        }
    }
    (0..j).all(|a| !reach[a][a])
}

/// Every choice profile, in lexicographic order.
pub fn all_profiles(counts: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &c in counts {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..c).map(move |i| {
                    let mut q = p.clone();
                    q.push(i);
                    q
                })
            })
            .collect();
    }
    out
}
