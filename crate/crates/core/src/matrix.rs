//! Dense rational matrices and fraction-free linear solves.

use std::fmt;
use std::ops::{Index, IndexMut};

use num::{BigInt, Zero};

use crate::error::{Error, Result};
use crate::rational::{common_denominator, dot, format_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m[(i, i)] = Rational::from_integer(1.into());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let n_rows = rows.len();
        Ok(Self {
            rows: n_rows,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor for tests and fixtures.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Rational> {
        self.data.iter()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// `M v`
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// `vᵀ M`
    pub fn vec_mul(&self, v: &[Rational]) -> Vec<Rational> {
        debug_assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| {
                (0..self.rows).fold(Rational::zero(), |acc, i| acc + &v[i] * &self[(i, j)])
            })
            .collect()
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn min_entry(&self) -> Option<&Rational> {
        self.data.iter().min()
    }

    /// Scales the whole matrix by the lcm of its denominators; the result is integral.
    pub fn to_integer(&self) -> Vec<Vec<BigInt>> {
        let scale = Rational::from_integer(common_denominator(&self.data));
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|v| (v * &scale).to_integer())
                    .collect()
            })
            .collect()
    }

    /// Stacks `[[0, upper_right], [lower_left, 0]]`.
    pub fn block_antidiagonal(upper_right: &Matrix, lower_left: &Matrix) -> Self {
        let size = upper_right.rows + lower_left.rows;
        assert_eq!(size, upper_right.cols + lower_left.cols);
        let mut c = Self::zeros(size, size);
        let top = upper_right.rows;
        for i in 0..upper_right.rows {
            for j in 0..upper_right.cols {
                c[(i, lower_left.cols + j)] = upper_right[(i, j)].clone();
            }
        }
        for i in 0..lower_left.rows {
            for j in 0..lower_left.cols {
                c[(top + i, j)] = lower_left[(i, j)].clone();
            }
        }
        c
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Solves `M z = rhs` for `M` given as rows, returning `Some` only when the system is
/// consistent with a unique solution. Uses Bareiss fraction-free elimination on an
/// integer copy of the augmented matrix; rank deficiency is a normal `None`.
pub fn solve_unique(rows: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(rows.len(), rhs.len());
    let unknowns = rows.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<BigInt>> = rows
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let scale = Rational::from_integer(common_denominator(row.iter().chain([b])));
            row.iter()
                .chain([b])
                .map(|v| (v * &scale).to_integer())
                .collect()
        })
        .collect();

    let n_rows = aug.len();
    let mut prev = BigInt::from(1);
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..unknowns {
        if r == n_rows {
            break;
        }
        let Some(p) = (r..n_rows).find(|&i| !aug[i][c].is_zero()) else {
            continue;
        };
        aug.swap(r, p);
        for i in r + 1..n_rows {
            let factor = aug[i][c].clone();
            for j in c + 1..=unknowns {
                let v = &aug[r][c] * &aug[i][j] - &factor * &aug[r][j];
                aug[i][j] = v / &prev;
            }
            aug[i][c] = BigInt::zero();
        }
        prev = aug[r][c].clone();
        pivot_cols.push(c);
        r += 1;
    }

    if aug[r..].iter().any(|row| !row[unknowns].is_zero()) {
        return None;
    }
    if pivot_cols.len() < unknowns {
        return None;
    }

    let mut z = vec![Rational::zero(); unknowns];
    for (row, &c) in pivot_cols.iter().enumerate().rev() {
        let mut acc = Rational::from_integer(aug[row][unknowns].clone());
        for j in c + 1..unknowns {
            if !aug[row][j].is_zero() {
                acc -= Rational::from_integer(aug[row][j].clone()) * &z[j];
            }
        }
        z[c] = acc / Rational::from_integer(aug[row][c].clone());
    }
    Some(z)
}

/// Like [`solve_unique`] for a square matrix, mapping failure to [`Error::Singular`].
pub fn solve_square(m: &Matrix, rhs: &[Rational]) -> Result<Vec<Rational>> {
    if !m.is_square() || m.rows() != rhs.len() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} system with {} right-hand sides",
            m.rows(),
            m.cols(),
            rhs.len()
        )));
    }
    let rows: Vec<Vec<Rational>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    solve_unique(&rows, rhs).ok_or_else(|| Error::Singular(format!("{}x{} matrix", m.rows(), m.cols())))
}
