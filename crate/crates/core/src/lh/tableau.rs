//! Integer-preserving tableaux for `M v + s = 1, v >= 0, s >= 0`.
//!
//! Entries are integers sharing the denominator `det`; a pivot on entry `p` replaces
//! every other row by `(row * p - f * pivot_row) / det`, which divides exactly.

use std::cmp::Ordering;

use num::{BigInt, One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct Tableau {
    vars: usize,
    /// `rows x (vars + 1)`, right-hand side last.
    coeffs: Vec<Vec<BigInt>>,
    det: BigInt,
    basic: Vec<usize>,
    row_of: Vec<Option<usize>>,
    /// Variable basic in each row initially; its current column is a column of `det * B^-1`.
    initial_basis: Vec<usize>,
}

/// Outcome of a pivot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pivot {
    pub leaving: usize,
    /// More than one row attained the minimum ratio of the right-hand side.
    pub tie: bool,
}

impl Tableau {
    /// Builds the tableau of `rows[r] · v + s_r = 1` where `v` are the variables
    /// `structural[..]` and `s_r` is variable `slack[r]`. Entries must be integral.
    pub fn new(vars: usize, rows: &[Vec<BigInt>], structural: &[usize], slack: &[usize]) -> Self {
        assert_eq!(rows.len(), slack.len());
        let mut coeffs = Vec::with_capacity(rows.len());
        let mut row_of = vec![None; vars];
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), structural.len());
            let mut full = vec![BigInt::zero(); vars + 1];
            for (&var, c) in structural.iter().zip(row) {
                full[var] = c.clone();
            }
            full[slack[r]] = BigInt::one();
            full[vars] = BigInt::one();
            coeffs.push(full);
            row_of[slack[r]] = Some(r);
        }
        Self {
            vars,
            coeffs,
            det: BigInt::one(),
            basic: slack.to_vec(),
            row_of,
            initial_basis: slack.to_vec(),
        }
    }

    pub fn is_basic(&self, var: usize) -> bool {
        self.row_of[var].is_some()
    }

    pub fn basis(&self) -> &[usize] {
        &self.basic
    }

    pub fn value(&self, var: usize) -> Rational {
        match self.row_of[var] {
            Some(r) => Rational::new(self.coeffs[r][self.vars].clone(), self.det.clone()),
            None => Rational::zero(),
        }
    }

    pub fn feasible(&self) -> bool {
        self.coeffs.iter().all(|row| !row[self.vars].is_negative())
    }

    /// Compares the ratios `coeffs[a][col] / coeffs[a][enter]` and the same for `b`;
    /// both entering coefficients are positive.
    fn ratio_cmp(&self, a: usize, b: usize, col: usize, enter: usize) -> Ordering {
        let lhs = &self.coeffs[a][col] * &self.coeffs[b][enter];
        let rhs = &self.coeffs[b][col] * &self.coeffs[a][enter];
        lhs.cmp(&rhs)
    }

    /// Lexicographic minimum ratio test: right-hand side first, then the columns of the
    /// initial basis in row order. `None` when the entering column has no positive entry.
    pub fn leaving_row(&self, enter: usize) -> Option<(usize, bool)> {
        let candidates: Vec<usize> = (0..self.coeffs.len()).filter(|&r| self.coeffs[r][enter].is_positive()).collect();
        let &first = candidates.first()?;
        let mut best = first;
        let mut rhs_ties = 1;
        for &r in &candidates[1..] {
            match self.ratio_cmp(r, best, self.vars, enter) {
                Ordering::Less => {
                    best = r;
                    rhs_ties = 1;
                }
                Ordering::Equal => {
                    rhs_ties += 1;
                    let lex = self
                        .initial_basis
                        .iter()
                        .map(|&col| self.ratio_cmp(r, best, col, enter))
                        .find(|o| *o != Ordering::Equal)
                        .unwrap_or(Ordering::Equal);
                    if lex == Ordering::Less {
                        best = r;
                    }
                }
                Ordering::Greater => {}
            }
        }
        Some((best, rhs_ties > 1))
    }

    /// Pivots `enter` into the basis. `None` on ray termination.
    pub fn pivot(&mut self, enter: usize) -> Option<Pivot> {
        assert!(!self.is_basic(enter), "variable {enter} is already basic");
        let (r, tie) = self.leaving_row(enter)?;
        let p = self.coeffs[r][enter].clone();
        let pivot_row = self.coeffs[r].clone();
        for (i, row) in self.coeffs.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[enter].clone();
            for (v, pr) in row.iter_mut().zip(&pivot_row) {
                let updated = &*v * &p - &f * pr;
                *v = updated / &self.det;
            }
        }
        self.det = p;
        let leaving = self.basic[r];
        self.row_of[leaving] = None;
        self.row_of[enter] = Some(r);
        self.basic[r] = enter;
        Some(Pivot { leaving, tie })
    }
}
