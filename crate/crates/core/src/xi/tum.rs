use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Exhaustive search is used when `min(rows, cols)` is at most this.
pub const EXHAUSTIVE_LIMIT: usize = 12;

const SAMPLES_PER_ORDER: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TumVerdict {
    /// No square submatrix up to `max_order` has a determinant outside
    /// `{-1, 0, 1}`. `exhaustive` is false when submatrices were sampled.
    NoViolation { max_order: usize, exhaustive: bool },
    Violation {
        rows: Vec<usize>,
        cols: Vec<usize>,
        determinant: BigInt,
    },
}

impl TumVerdict {
    pub fn is_unimodular(&self) -> bool {
        matches!(self, TumVerdict::NoViolation { .. })
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(matrix: &[Vec<i64>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num.div_floor(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn submatrix(matrix: &[Vec<i64>], rows: &[usize], cols: &[usize]) -> Vec<Vec<i64>> {
    rows.iter()
        .map(|&r| cols.iter().map(|&c| matrix[r][c]).collect())
        .collect()
}

fn is_unit(det: &BigInt) -> bool {
    det.is_zero() || det == &BigInt::one() || det == &-BigInt::one()
}

/// Advances `combo` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Checks that every square submatrix of order at most `max_order` has
/// determinant in `{-1, 0, 1}`.
///
/// The search is exhaustive when `min(rows, cols) <= EXHAUSTIVE_LIMIT`;
/// larger matrices are probed with seeded random submatrices and a clean
/// result only means no violation was found.
pub fn check_total_unimodularity(matrix: &[Vec<i64>], max_order: usize, seed: u64) -> TumVerdict {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    let order_cap = max_order.min(rows).min(cols);
    let exhaustive = rows.min(cols) <= EXHAUSTIVE_LIMIT;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for k in 1..=order_cap {
        if exhaustive {
            let mut rsel: Vec<usize> = (0..k).collect();
            loop {
                let mut csel: Vec<usize> = (0..k).collect();
                loop {
                    let det = determinant(&submatrix(matrix, &rsel, &csel));
                    if !is_unit(&det) {
                        return TumVerdict::Violation {
                            rows: rsel,
                            cols: csel,
                            determinant: det,
                        };
                    }
                    if !next_combination(&mut csel, cols) {
                        break;
                    }
                }
                if !next_combination(&mut rsel, rows) {
                    break;
                }
            }
        } else {
            for _ in 0..SAMPLES_PER_ORDER {
                let mut rsel = sample(&mut rng, rows, k).into_vec();
                let mut csel = sample(&mut rng, cols, k).into_vec();
                rsel.sort_unstable();
                csel.sort_unstable();
                let det = determinant(&submatrix(matrix, &rsel, &csel));
                if !is_unit(&det) {
                    return TumVerdict::Violation {
                        rows: rsel,
                        cols: csel,
                        determinant: det,
                    };
                }
            }
        }
    }
    TumVerdict::NoViolation {
        max_order: order_cap,
        exhaustive,
    }
}
