//! Bimatrix games, mixed strategies, labels and equilibrium checks.
//!
//! Labels `1..=m` name the row player's pure strategies and `m+1..=m+n` the column
//! player's. A mixed strategy carries the labels of its unplayed own strategies and of
//! the opponent's pure best responses; a profile is an equilibrium exactly when the two
//! label sets together cover every label.

use std::collections::BTreeSet;
use std::fmt;

use num::{One, Signed, Zero};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::polytope::HPolytope;
use crate::rational::{format_vector, int, sum, Rational};

pub type Label = usize;

/// An `m x n` game. The payoffs are kept as given; `normalized_*` are the shifted copies
/// with `A` and `Bᵀ` nonnegative and free of zero columns that every solver works on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimatrixGame {
    a: Matrix,
    b: Matrix,
    norm_a: Matrix,
    norm_b: Matrix,
}

/// Constant that makes a payoff matrix nonnegative without zero lines; zero if it
/// already is. `by_rows` checks rows instead of columns (for `Bᵀ`).
fn normalizing_shift(m: &Matrix, by_rows: bool) -> Rational {
    let min = m.min_entry().cloned().unwrap_or_else(Rational::zero);
    let zero_line = if by_rows {
        (0..m.rows()).any(|i| m.row(i).iter().all(Zero::is_zero))
    } else {
        (0..m.cols()).any(|j| (0..m.rows()).all(|i| m[(i, j)].is_zero()))
    };
    if min.is_negative() || zero_line {
        Rational::one() - min
    } else {
        Rational::zero()
    }
}

impl BimatrixGame {
    pub fn new(a: Matrix, b: Matrix) -> Result<Self> {
        if a.rows() != b.rows() || a.cols() != b.cols() {
            return Err(Error::DimensionMismatch(format!(
                "A is {}x{} but B is {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        if a.rows() == 0 || a.cols() == 0 {
            return Err(Error::InvalidArgument("games need at least one row and one column".into()));
        }
        let shift_a = normalizing_shift(&a, false);
        let shift_b = normalizing_shift(&b, true);
        let norm_a = a.map(|v| v + &shift_a);
        let norm_b = b.map(|v| v + &shift_b);
        Ok(Self {
            a,
            b,
            norm_a,
            norm_b,
        })
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn label_count(&self) -> usize {
        self.m() + self.n()
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn normalized_a(&self) -> &Matrix {
        &self.norm_a
    }

    pub fn normalized_b(&self) -> &Matrix {
        &self.norm_b
    }

    pub fn check_label(&self, label: Label) -> Result<()> {
        if label == 0 || label > self.label_count() {
            Err(Error::LabelOutOfRange {
                label,
                max: self.label_count(),
            })
        } else {
            Ok(())
        }
    }

    /// `P = {x >= 0, Bᵀx <= 1}` and `Q = {Ay <= 1, y >= 0}` on the normalized payoffs.
    /// Inequality `k - 1` of either polytope carries label `k`.
    pub fn best_response_polytopes(&self) -> (HPolytope, HPolytope) {
        let (m, n) = (self.m(), self.n());
        let mut p_rows = Vec::with_capacity(m + n);
        let mut p_rhs = Vec::with_capacity(m + n);
        for i in 0..m {
            let mut row = vec![Rational::zero(); m];
            row[i] = -Rational::one();
            p_rows.push(row);
            p_rhs.push(Rational::zero());
        }
        for j in 0..n {
            p_rows.push(self.norm_b.column(j));
            p_rhs.push(Rational::one());
        }
        let mut q_rows = Vec::with_capacity(m + n);
        let mut q_rhs = Vec::with_capacity(m + n);
        for i in 0..m {
            q_rows.push(self.norm_a.row(i).to_vec());
            q_rhs.push(Rational::one());
        }
        for j in 0..n {
            let mut row = vec![Rational::zero(); n];
            row[j] = -Rational::one();
            q_rows.push(row);
            q_rhs.push(Rational::zero());
        }
        (
            HPolytope::new(m, p_rows, p_rhs).expect("P dimensions"),
            HPolytope::new(n, q_rows, q_rhs).expect("Q dimensions"),
        )
    }
}

impl fmt::Display for BimatrixGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\n{}", self.a, self.b)
    }
}

/// A pair of mixed strategies.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MixedProfile {
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
}

fn normalize(v: &[Rational]) -> Result<Vec<Rational>> {
    if v.iter().any(Signed::is_negative) {
        return Err(Error::InvalidArgument("negative polytope coordinate".into()));
    }
    let total = sum(v);
    if total.is_zero() {
        return Err(Error::InvalidArgument("the origin has no mixed-strategy counterpart".into()));
    }
    Ok(v.iter().map(|c| c / &total).collect())
}

impl MixedProfile {
    pub fn new(x: Vec<Rational>, y: Vec<Rational>) -> Result<Self> {
        for (name, v) in [("x", &x), ("y", &y)] {
            if v.iter().any(Signed::is_negative) || sum(v) != Rational::one() {
                return Err(Error::InvalidArgument(format!("{name} is not a probability vector")));
            }
        }
        Ok(Self { x, y })
    }

    /// Rescales a nonzero point pair of `P x Q` to probability vectors.
    pub fn from_polytope_point(x: &[Rational], y: &[Rational]) -> Result<Self> {
        Ok(Self {
            x: normalize(x)?,
            y: normalize(y)?,
        })
    }

    pub fn pure(m: usize, n: usize, row: usize, col: usize) -> Self {
        let mut x = vec![Rational::zero(); m];
        let mut y = vec![Rational::zero(); n];
        x[row] = Rational::one();
        y[col] = Rational::one();
        Self { x, y }
    }

    pub fn support_x(&self) -> Vec<usize> {
        self.x.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, _)| i).collect()
    }

    pub fn support_y(&self) -> Vec<usize> {
        self.y.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, _)| j).collect()
    }
}

impl fmt::Display for MixedProfile {
    /// `x1 x2 ... ; y1 y2 ...`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ; {}", format_vector(&self.x), format_vector(&self.y))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelSet(pub BTreeSet<Label>);

impl LabelSet {
    pub fn contains(&self, label: Label) -> bool {
        self.0.contains(&label)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Label> + '_ {
        self.0.iter().copied()
    }

    /// Labels of the set bits of a zero-based tight-inequality bitstring.
    pub fn from_tight(tight: &BitString) -> Self {
        Self(tight.ones().map(|k| k + 1).collect())
    }

    /// Digits run together, as in `236`; only unambiguous when every label is below 10.
    pub fn compact(&self) -> String {
        self.0.iter().map(ToString::to_string).collect()
    }
}

impl FromIterator<Label> for LabelSet {
    fn from_iter<I: IntoIterator<Item = Label>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

fn check_dims(game: &BimatrixGame, p: &MixedProfile) -> Result<()> {
    if p.x.len() != game.m() || p.y.len() != game.n() {
        return Err(Error::DimensionMismatch(format!(
            "profile has {}+{} entries for a {}x{} game",
            p.x.len(),
            p.y.len(),
            game.m(),
            game.n()
        )));
    }
    Ok(())
}

fn argmax_set(values: &[Rational]) -> Vec<usize> {
    let Some(best) = values.iter().max() else {
        return Vec::new();
    };
    values.iter().enumerate().filter(|(_, v)| *v == best).map(|(i, _)| i).collect()
}

/// Labels of `x` and of `y`.
pub fn labels_of_profile(game: &BimatrixGame, p: &MixedProfile) -> Result<(LabelSet, LabelSet)> {
    check_dims(game, p)?;
    let m = game.m();
    let col_payoffs = game.b().vec_mul(&p.x);
    let row_payoffs = game.a().mul_vec(&p.y);

    let mut x_labels: BTreeSet<Label> = p.x.iter().enumerate().filter(|(_, v)| v.is_zero()).map(|(i, _)| i + 1).collect();
    x_labels.extend(argmax_set(&col_payoffs).into_iter().map(|j| m + j + 1));

    let mut y_labels: BTreeSet<Label> = argmax_set(&row_payoffs).into_iter().map(|i| i + 1).collect();
    y_labels.extend(p.y.iter().enumerate().filter(|(_, v)| v.is_zero()).map(|(j, _)| m + j + 1));
    Ok((LabelSet(x_labels), LabelSet(y_labels)))
}

/// Labels in `1..=m+n` carried by neither strategy.
pub fn missing_labels(game: &BimatrixGame, p: &MixedProfile) -> Result<Vec<Label>> {
    let (xl, yl) = labels_of_profile(game, p)?;
    Ok((1..=game.label_count()).filter(|&k| !xl.contains(k) && !yl.contains(k)).collect())
}

pub fn verify_equilibrium(game: &BimatrixGame, p: &MixedProfile) -> Result<bool> {
    Ok(missing_labels(game, p)?.is_empty())
}

/// Limits for exhaustive vertex enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    /// Refuse games with more than this many labels `m + n`.
    pub max_labels: usize,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        Self { max_labels: 20 }
    }
}

/// Vertices of `P` (resp. `Q`) whose tight-inequality count exceeds `m` (resp. `n`).
pub fn is_nondegenerate(game: &BimatrixGame, budget: &EnumerationBudget) -> Result<bool> {
    if game.label_count() > budget.max_labels {
        return Err(Error::BudgetExceeded(format!(
            "{} labels exceed the nondegeneracy budget of {}",
            game.label_count(),
            budget.max_labels
        )));
    }
    let (p, q) = game.best_response_polytopes();
    for poly in [&p, &q] {
        for v in poly.vertices(u128::MAX)? {
            if v.tight.count_ones() != poly.dim() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Completely labeled vertex pairs of `P x Q` other than the origin, rescaled to
/// mixed strategies and sorted.
pub fn completely_labeled_vertex_pairs(game: &BimatrixGame, budget: &EnumerationBudget) -> Result<Vec<MixedProfile>> {
    if game.label_count() > budget.max_labels {
        return Err(Error::BudgetExceeded(format!(
            "{} labels exceed the vertex enumeration budget of {}",
            game.label_count(),
            budget.max_labels
        )));
    }
    let (p, q) = game.best_response_polytopes();
    let pv = p.vertices(u128::MAX)?;
    let qv = q.vertices(u128::MAX)?;
    let k = game.label_count();
    let mut out = Vec::new();
    for x in &pv {
        for y in &qv {
            let covered = (0..k).all(|l| x.tight.get(l) || y.tight.get(l));
            let origin = x.point.iter().all(Zero::is_zero) && y.point.iter().all(Zero::is_zero);
            if covered && !origin {
                out.push(MixedProfile::from_polytope_point(&x.point, &y.point)?);
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// The symmetric game `(C, Cᵀ)` with `C = [[0, A], [Bᵀ, 0]]` over the normalized payoffs.
pub fn symmetrize(game: &BimatrixGame) -> BimatrixGame {
    let c = Matrix::block_antidiagonal(game.normalized_a(), &game.normalized_b().transpose());
    let ct = c.transpose();
    BimatrixGame::new(c, ct).expect("square symmetric game")
}

/// Mixed strategy `z` with `(z, z)` the symmetric equilibrium of [`symmetrize`] that
/// corresponds to the profile: `x` and `y` are mapped into `P` and `Q` by dividing by the
/// opponent's best payoff, concatenated and rescaled to sum one.
pub fn symmetric_profile(game: &BimatrixGame, p: &MixedProfile) -> Result<Vec<Rational>> {
    check_dims(game, p)?;
    let v = game.normalized_b().vec_mul(&p.x).into_iter().max().unwrap_or_else(Rational::zero);
    let u = game.normalized_a().mul_vec(&p.y).into_iter().max().unwrap_or_else(Rational::zero);
    if !v.is_positive() || !u.is_positive() {
        return Err(Error::InvalidArgument("best-response payoffs must be positive".into()));
    }
    let z: Vec<Rational> = p.x.iter().map(|c| c / &v).chain(p.y.iter().map(|c| c / &u)).collect();
    normalize(&z)
}

/// Splits a symmetric strategy of [`symmetrize`] back into a profile of the original
/// game, rescaling each block.
pub fn split_symmetric_profile(game: &BimatrixGame, z: &[Rational]) -> Result<MixedProfile> {
    if z.len() != game.label_count() {
        return Err(Error::DimensionMismatch(format!("z has {} entries", z.len())));
    }
    MixedProfile::from_polytope_point(&z[..game.m()], &z[game.m()..])
}

/// The imitation game `(I, Cᵀ)` of a square matrix `C`.
pub fn imitation_game(c: &Matrix) -> Result<BimatrixGame> {
    if !c.is_square() {
        return Err(Error::DimensionMismatch(format!("imitation needs a square matrix, got {}x{}", c.rows(), c.cols())));
    }
    BimatrixGame::new(Matrix::identity(c.rows()), c.transpose())
}

/// A game whose column `j` of `A` is the unit vector `e_{ell(j)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitVectorGame {
    m: usize,
    ell: Vec<Label>,
    b: Matrix,
}

impl UnitVectorGame {
    pub fn new(m: usize, ell: Vec<Label>, b: Matrix) -> Result<Self> {
        if m == 0 || ell.is_empty() {
            return Err(Error::InvalidArgument("unit vector games need m >= 1 and n >= 1".into()));
        }
        if let Some(&bad) = ell.iter().find(|&&l| l == 0 || l > m) {
            return Err(Error::LabelOutOfRange { label: bad, max: m });
        }
        if b.rows() != m || b.cols() != ell.len() {
            return Err(Error::DimensionMismatch(format!(
                "B is {}x{} for m={} and {} labels",
                b.rows(),
                b.cols(),
                m,
                ell.len()
            )));
        }
        Ok(Self { m, ell, b })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.ell.len()
    }

    pub fn ell(&self) -> &[Label] {
        &self.ell
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    /// Zero-based columns `j` with `ell(j) = i`, for `i = 1..=m`.
    pub fn label_classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.m];
        for (j, &l) in self.ell.iter().enumerate() {
            classes[l - 1].push(j);
        }
        classes
    }

    /// Label of facet `f` of `P^ell` (1-based): `f` itself for `f <= m`, else `ell(f - m)`.
    pub fn facet_label(&self, facet: usize) -> Label {
        if facet <= self.m {
            facet
        } else {
            self.ell[facet - self.m - 1]
        }
    }
}

pub fn unit_vector_game(u: &UnitVectorGame) -> BimatrixGame {
    let mut a = Matrix::zeros(u.m, u.n());
    for (j, &l) in u.ell.iter().enumerate() {
        a[(l - 1, j)] = int(1);
    }
    BimatrixGame::new(a, u.b.clone()).expect("validated dimensions")
}

/// Completely labeled points of `P^ell` other than the origin, as vertices of `P` on the
/// normalized payoffs.
pub fn completely_labeled_points(u: &UnitVectorGame, budget: &EnumerationBudget) -> Result<Vec<Vec<Rational>>> {
    if u.m() + u.n() > budget.max_labels {
        return Err(Error::BudgetExceeded(format!("{} facets exceed the budget", u.m() + u.n())));
    }
    let game = unit_vector_game(u);
    let (p, _) = game.best_response_polytopes();
    let mut out = Vec::new();
    for v in p.vertices(u128::MAX)? {
        if v.point.iter().all(Zero::is_zero) {
            continue;
        }
        let labels: BTreeSet<Label> = v.tight.ones().map(|f| u.facet_label(f + 1)).collect();
        if labels.len() == u.m() {
            out.push(v.point);
        }
    }
    Ok(out)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// The 3x3 unit vector game with `A = I` whose only equilibrium is
    /// `((1/3, 2/3, 0), (1/2, 1/2, 0))`.
    pub fn example_game() -> BimatrixGame {
        BimatrixGame::new(
            Matrix::identity(3),
            Matrix::from_i64(&[&[0, 2, 4], &[3, 2, 0], &[0, 2, 0]]),
        )
        .unwrap()
    }

    pub fn example_symmetric_matrix() -> Matrix {
        Matrix::from_i64(&[&[0, 3, 0], &[2, 2, 2], &[4, 0, 0]])
    }

    pub fn degenerate_symmetric_matrix() -> Matrix {
        Matrix::from_i64(&[&[0, 4, 0], &[2, 2, 2], &[4, 0, 0]])
    }

    pub fn example_equilibrium() -> MixedProfile {
        use crate::rational::rat;
        MixedProfile::new(vec![rat(1, 3), rat(2, 3), int(0)], vec![rat(1, 2), rat(1, 2), int(0)]).unwrap()
    }
}
