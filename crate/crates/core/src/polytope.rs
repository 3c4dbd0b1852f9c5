//! H-polytopes `{x | a_k·x <= b_k}` and exhaustive vertex enumeration.

use std::cmp::Ordering;
use std::collections::HashSet;

use itertools::Itertools;
use num::{BigInt, One, Signed, Zero};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::rational::{common_denominator, dot, Rational};

#[derive(Clone, Debug)]
pub struct HPolytope {
    dim: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub point: Vec<Rational>,
    /// Bit `k` is set when inequality `k` (zero-based) holds with equality.
    pub tight: BitString,
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

impl HPolytope {
    pub fn new(dim: usize, rows: Vec<Vec<Rational>>, rhs: Vec<Rational>) -> Result<Self> {
        if rows.len() != rhs.len() || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "{} rows / {} right-hand sides in dimension {dim}",
                rows.len(),
                rhs.len()
            )));
        }
        Ok(Self { dim, rows, rhs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inequality_count(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, k: usize) -> &[Rational] {
        &self.rows[k]
    }

    pub fn rhs(&self, k: usize) -> &Rational {
        &self.rhs[k]
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.rows.iter().zip(&self.rhs).all(|(a, b)| dot(a, x) <= *b)
    }

    pub fn tight_set(&self, x: &[Rational]) -> BitString {
        BitString::from_positions(
            self.rows.len(),
            self.rows
                .iter()
                .zip(&self.rhs)
                .positions(|(a, b)| dot(a, x) == *b),
        )
    }

    /// Every vertex, found by solving each `dim`-subset of inequalities as equalities.
    /// Vertices lying on more than `dim` inequalities are reported once. Sorted by
    /// tight set, then coordinates.
    pub fn vertices(&self, max_subsets: u128) -> Result<Vec<Vertex>> {
        let subsets = binomial(self.rows.len(), self.dim);
        if subsets > max_subsets {
            return Err(Error::BudgetExceeded(format!(
                "{subsets} inequality subsets exceed the budget of {max_subsets}"
            )));
        }
        let scaled: Vec<Vec<BigInt>> = self
            .rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| {
                let scale = Rational::from_integer(common_denominator(row.iter().chain([b])));
                row.iter().chain([b]).map(|v| (v * &scale).to_integer()).collect()
            })
            .collect();
        let mut seen = HashSet::new();
        let mut found: Vec<Vertex> = Vec::new();
        for subset in (0..self.rows.len()).combinations(self.dim) {
            let Some((nums, det)) = solve_integer(&scaled, &subset, self.dim) else {
                continue;
            };
            let mut tight = BitString::zeros(self.rows.len());
            let mut feasible = true;
            for (k, row) in scaled.iter().enumerate() {
                let lhs: BigInt = row[..self.dim].iter().zip(&nums).map(|(a, x)| a * x).sum();
                let rhs = &row[self.dim] * &det;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => {
                        feasible = false;
                        break;
                    }
                    Ordering::Equal => tight.set(k),
                    Ordering::Less => {}
                }
            }
            if !feasible || !seen.insert(tight.clone()) {
                continue;
            }
            let point = nums.into_iter().map(|x| Rational::new(x, det.clone())).collect();
            found.push(Vertex { point, tight });
        }
        found.sort_by(|a, b| a.tight.cmp(&b.tight).then_with(|| a.point.cmp(&b.point)));
        Ok(found)
    }
}

/// Fraction-free Gauss-Jordan on the chosen rows of `[A | b]`. Returns numerators and a
/// positive common denominator of the unique solution, or `None` when singular.
fn solve_integer(scaled: &[Vec<BigInt>], subset: &[usize], dim: usize) -> Option<(Vec<BigInt>, BigInt)> {
    let mut t: Vec<Vec<BigInt>> = subset.iter().map(|&k| scaled[k].clone()).collect();
    let mut used = vec![false; dim];
    let mut row_of = vec![0; dim];
    let mut prev = BigInt::one();
    for c in 0..dim {
        let r = (0..dim).find(|&i| !used[i] && !t[i][c].is_zero())?;
        used[r] = true;
        row_of[c] = r;
        let pivot = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c].clone();
            for (x, pv) in row.iter_mut().zip(&pivot) {
                *x = (&*x * &pivot[c] - &f * pv) / &prev;
            }
        }
        prev = pivot[c].clone();
    }
    let mut nums: Vec<BigInt> = row_of.iter().map(|&r| t[r][dim].clone()).collect();
    if prev.is_negative() {
        prev = -prev;
        nums.iter_mut().for_each(|x| *x = -&*x);
    }
    Some((nums, prev))
}
