//! Support enumeration and the randomized support-guessing cost model.

use std::collections::HashMap;
use std::io::Write;

use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{BimatrixGame, MixedProfile};
use crate::matrix::{solve_unique, Matrix};
use crate::polytope::binomial;
use crate::rational::Rational;

/// Zero-based row and column supports.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportPair {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

fn clean(mut v: Vec<usize>, bound: usize, who: &str) -> Result<Vec<usize>> {
    v.sort_unstable();
    v.dedup();
    if v.is_empty() {
        return Err(Error::InvalidArgument(format!("empty {who} support")));
    }
    if let Some(&bad) = v.iter().find(|&&i| i >= bound) {
        return Err(Error::InvalidArgument(format!("{who} index {bad} out of range 0..{bound}")));
    }
    Ok(v)
}

impl SupportPair {
    pub fn new(game: &BimatrixGame, rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        Ok(Self {
            rows: clean(rows, game.m(), "row")?,
            cols: clean(cols, game.n(), "column")?,
        })
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn is_balanced(&self) -> bool {
        self.rows.len() == self.cols.len()
    }
}

/// Mixed strategy on `support` making the opponent indifferent over `opponent`:
/// `sum_s z_s payoff(s, t) = v` for `t` in `opponent`, `sum z = 1`. `payoff(s, t)` is
/// the opponent's payoff when this player plays `s` and the opponent plays `t`.
fn indifference(
    support: &[usize],
    opponent: &[usize],
    payoff: impl Fn(usize, usize) -> Rational,
) -> Option<(Vec<Rational>, Rational)> {
    let k = support.len();
    let mut rows = Vec::with_capacity(opponent.len() + 1);
    let mut rhs = Vec::with_capacity(opponent.len() + 1);
    for &t in opponent {
        let mut row: Vec<Rational> = support.iter().map(|&s| payoff(s, t)).collect();
        row.push(-Rational::one());
        rows.push(row);
        rhs.push(Rational::zero());
    }
    let mut total = vec![Rational::one(); k];
    total.push(Rational::zero());
    rows.push(total);
    rhs.push(Rational::one());
    let mut z = solve_unique(&rows, &rhs)?;
    let v = z.pop()?;
    Some((z, v))
}

fn spread(support: &[usize], weights: Vec<Rational>, len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (&i, w) in support.iter().zip(weights) {
        out[i] = w;
    }
    out
}

/// The equilibrium supported exactly on `pair`, if the indifference systems have unique
/// solutions that are strictly positive on the supports and no strategy outside a
/// support pays more. Unbalanced pairs are accepted and normally yield `None`.
pub fn solve_support(game: &BimatrixGame, pair: &SupportPair) -> Result<Option<MixedProfile>> {
    let (a, b) = (game.a(), game.b());
    if pair.rows.iter().any(|&i| i >= game.m()) || pair.cols.iter().any(|&j| j >= game.n()) {
        return Err(Error::DimensionMismatch(format!("support pair does not fit a {}x{} game", game.m(), game.n())));
    }
    let Some((xs, v)) = indifference(&pair.rows, &pair.cols, |i, j| b[(i, j)].clone()) else {
        return Ok(None);
    };
    let Some((ys, u)) = indifference(&pair.cols, &pair.rows, |j, i| a[(i, j)].clone()) else {
        return Ok(None);
    };
    if !xs.iter().chain(&ys).all(Signed::is_positive) {
        return Ok(None);
    }
    let x = spread(&pair.rows, xs, game.m());
    let y = spread(&pair.cols, ys, game.n());
    if a.mul_vec(&y).iter().any(|p| *p > u) || b.vec_mul(&x).iter().any(|p| *p > v) {
        return Ok(None);
    }
    Ok(Some(MixedProfile { x, y }))
}

/// Limits for [`enumerate_equilibria`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SupportBudget {
    pub max_pairs: u128,
    /// Only try pairs with `|S1| = |S2|`.
    pub balanced_only: bool,
}

impl Default for SupportBudget {
    fn default() -> Self {
        Self {
            max_pairs: 1 << 24,
            balanced_only: true,
        }
    }
}

/// Number of support pairs [`enumerate_equilibria`] will try.
pub fn support_pair_count(m: usize, n: usize, balanced_only: bool) -> u128 {
    if balanced_only {
        (1..=m.min(n)).map(|k| binomial(m, k).saturating_mul(binomial(n, k))).fold(0u128, u128::saturating_add)
    } else {
        let side = |k: usize| 1u128.checked_shl(k as u32).map_or(u128::MAX, |p| p - 1);
        side(m).saturating_mul(side(n))
    }
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u64..1u64 << n).map(move |mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
}

/// Every equilibrium found on some support pair, deduplicated and sorted. Complete for
/// nondegenerate games.
pub fn enumerate_equilibria(game: &BimatrixGame, budget: &SupportBudget) -> Result<Vec<MixedProfile>> {
    let (m, n) = (game.m(), game.n());
    let pairs = support_pair_count(m, n, budget.balanced_only);
    if m >= 64 || n >= 64 || pairs > budget.max_pairs {
        return Err(Error::BudgetExceeded(format!("{pairs} support pairs exceed the budget of {}", budget.max_pairs)));
    }
    let cols: Vec<Vec<usize>> = subsets(n).collect();
    let mut out = Vec::new();
    for rows in subsets(m) {
        for c in cols.iter().filter(|c| !budget.balanced_only || c.len() == rows.len()) {
            let pair = SupportPair { rows: rows.clone(), cols: c.clone() };
            if let Some(p) = solve_support(game, &pair)? {
                out.push(p);
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Which column supports are guessed against the full row support.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Universe {
    /// All `C(n, m)` column sets of size `m`.
    AllMSubsets,
    /// One column per row for games whose `A` has unit-vector columns: a column `j`
    /// with `A e_j = e_i` is chosen for each `i`.
    OnePerUnitVector,
}

impl Universe {
    pub fn name(self) -> &'static str {
        match self {
            Universe::AllMSubsets => "all-m-subsets",
            Universe::OnePerUnitVector => "one-per-unit-vector",
        }
    }
}

impl std::str::FromStr for Universe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all-m-subsets" => Ok(Universe::AllMSubsets),
            "one-per-unit-vector" => Ok(Universe::OnePerUnitVector),
            _ => Err(Error::InvalidArgument(format!("unknown universe {s:?}"))),
        }
    }
}

/// An indexable set of column supports.
#[derive(Clone, Debug)]
pub struct SupportUniverse {
    m: usize,
    n: usize,
    kind: Universe,
    classes: Vec<Vec<usize>>,
    size: u128,
}

fn unit_vector_classes(a: &Matrix) -> Result<Vec<Vec<usize>>> {
    let mut classes = vec![Vec::new(); a.rows()];
    for j in 0..a.cols() {
        let col = a.column(j);
        let ones: Vec<usize> = (0..a.rows()).filter(|&i| col[i].is_one()).collect();
        let zeros = col.iter().filter(|v| v.is_zero()).count();
        if ones.len() != 1 || zeros + 1 != a.rows() {
            return Err(Error::InvalidArgument(format!("column {} of A is not a unit vector", j + 1)));
        }
        classes[ones[0]].push(j);
    }
    Ok(classes)
}

impl SupportUniverse {
    pub fn new(game: &BimatrixGame, kind: Universe) -> Result<Self> {
        let (m, n) = (game.m(), game.n());
        let (classes, size) = match kind {
            Universe::AllMSubsets => (Vec::new(), binomial(n, m)),
            Universe::OnePerUnitVector => {
                let classes = unit_vector_classes(game.a())?;
                let size = classes.iter().map(|c| c.len() as u128).fold(1u128, u128::saturating_mul);
                (classes, size)
            }
        };
        if size == 0 {
            return Err(Error::InvalidArgument(format!("the {} universe is empty", kind.name())));
        }
        Ok(Self { m, n, kind, classes, size })
    }

    pub fn kind(&self) -> Universe {
        self.kind
    }

    pub fn len(&self) -> u128 {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// The column support with the given rank, in lexicographic order.
    pub fn get(&self, mut index: u128) -> Vec<usize> {
        assert!(index < self.size, "index {index} outside universe of size {}", self.size);
        match self.kind {
            Universe::AllMSubsets => {
                let mut out = Vec::with_capacity(self.m);
                let mut next = 0;
                for left in (1..=self.m).rev() {
                    loop {
                        let with_next = binomial(self.n - next - 1, left - 1);
                        if index < with_next {
                            break;
                        }
                        index -= with_next;
                        next += 1;
                    }
                    out.push(next);
                    next += 1;
                }
                out
            }
            Universe::OnePerUnitVector => {
                let mut digits = vec![0; self.classes.len()];
                for (d, class) in digits.iter_mut().zip(&self.classes).rev() {
                    let radix = class.len() as u128;
                    *d = class[(index % radix) as usize];
                    index /= radix;
                }
                digits.sort_unstable();
                digits
            }
        }
    }

    pub fn pair(&self, index: u128) -> SupportPair {
        SupportPair {
            rows: (0..self.m).collect(),
            cols: self.get(index),
        }
    }
}

/// A uniformly random ordering of `0..len`, produced one element at a time by a
/// Fisher–Yates shuffle that only records displaced entries.
pub struct LazyShuffle {
    rng: ChaCha8Rng,
    len: u128,
    next: u128,
    moved: HashMap<u128, u128>,
}

impl LazyShuffle {
    pub fn new(len: u128, seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            len,
            next: 0,
            moved: HashMap::new(),
        }
    }
}

impl Iterator for LazyShuffle {
    type Item = u128;

    fn next(&mut self) -> Option<u128> {
        if self.next >= self.len {
            return None;
        }
        let t = self.next;
        let r = self.rng.gen_range(t..self.len);
        let at_r = self.moved.get(&r).copied().unwrap_or(r);
        let at_t = self.moved.remove(&t).unwrap_or(t);
        if r != t {
            self.moved.insert(r, at_t);
        }
        self.next += 1;
        Some(at_r)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub seed: u64,
    /// Supports tried, including the successful one.
    pub guesses: u64,
    pub universe: u128,
    /// Equilibrium supports in the universe, when counted.
    pub equilibria_found: Option<u128>,
}

/// Tries column supports in a seeded random order against the full row support until
/// one yields an equilibrium.
pub fn randomized_support_search(game: &BimatrixGame, universe: Universe, seed: u64) -> Result<(MixedProfile, SearchStats)> {
    let u = SupportUniverse::new(game, universe)?;
    for (tried, index) in LazyShuffle::new(u.len(), seed).enumerate() {
        if let Some(p) = solve_support(game, &u.pair(index))? {
            let stats = SearchStats {
                seed,
                guesses: tried as u64 + 1,
                universe: u.len(),
                equilibria_found: None,
            };
            return Ok((p, stats));
        }
    }
    Err(Error::NotFound(format!("no equilibrium support among {} candidates", u.len())))
}

/// Number of supports in the universe that carry an equilibrium.
pub fn count_equilibrium_supports(game: &BimatrixGame, universe: Universe, max_size: u128) -> Result<u128> {
    let u = SupportUniverse::new(game, universe)?;
    if u.len() > max_size {
        return Err(Error::BudgetExceeded(format!("universe of {} supports exceeds {max_size}", u.len())));
    }
    let mut count = 0;
    for index in 0..u.len() {
        if solve_support(game, &u.pair(index))?.is_some() {
            count += 1;
        }
    }
    Ok(count)
}

/// `(|U| - |E|) / (|E| + 1) + 1`, the expected number of guesses when drawing without
/// replacement from `|U|` supports of which `|E|` succeed.
pub fn expected_guesses(universe_size: u128, equilibrium_count: u128) -> Result<Rational> {
    if equilibrium_count == 0 {
        return Err(Error::InvalidArgument("no equilibrium supports".into()));
    }
    if equilibrium_count > universe_size {
        return Err(Error::InvalidArgument(format!("{equilibrium_count} equilibrium supports in a universe of {universe_size}")));
    }
    let u = Rational::from_integer(universe_size.into());
    let e = Rational::from_integer(equilibrium_count.into());
    Ok((&u - &e) / (&e + Rational::one()) + Rational::one())
}

/// Sample mean and its standard error.
pub fn mean_and_standard_error(samples: &[u64]) -> (f64, f64) {
    let n = samples.len() as f64;
    if samples.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = samples.iter().map(|&s| s as f64).sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = samples.iter().map(|&s| (s as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Writes `seed,guesses,universe,equilibria_found` rows.
pub fn write_stats_csv<W: Write>(stats: &[SearchStats], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in stats {
        w.serialize(s)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::fixtures::{example_equilibrium, example_game, example_symmetric_matrix};
    use crate::game::{completely_labeled_vertex_pairs, unit_vector_game, verify_equilibrium, EnumerationBudget};
    use crate::generators::triple_morris_game;
    use crate::rational::rat;

    fn pair(game: &BimatrixGame, rows: &[usize], cols: &[usize]) -> SupportPair {
        SupportPair::new(game, rows.to_vec(), cols.to_vec()).unwrap()
    }

    #[test]
    fn example_support() {
        let g = example_game();
        assert_eq!(solve_support(&g, &pair(&g, &[0, 1], &[0, 1])).unwrap(), Some(example_equilibrium()));
        assert_eq!(solve_support(&g, &pair(&g, &[2], &[2])).unwrap(), None);
    }

    #[test]
    fn pure_supports_match_pure_equilibria() {
        let g = BimatrixGame::new(Matrix::from_i64(&[&[3, 0], &[5, 1]]), Matrix::from_i64(&[&[3, 5], &[0, 1]])).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let found = solve_support(&g, &pair(&g, &[i], &[j])).unwrap();
                let pure = MixedProfile::pure(2, 2, i, j);
                assert_eq!(found.is_some(), verify_equilibrium(&g, &pure).unwrap(), "cell {i},{j}");
            }
        }
    }

    #[test]
    fn support_pair_validation() {
        let g = example_game();
        assert!(SupportPair::new(&g, vec![], vec![0]).is_err());
        assert!(SupportPair::new(&g, vec![3], vec![0]).is_err());
        assert_eq!(pair(&g, &[1, 0, 1], &[2]).rows(), &[0, 1]);
    }

    #[test]
    fn symmetric_example_has_three_equilibria() {
        let eq = enumerate_equilibria(&example_symmetric_game(), &SupportBudget::default()).unwrap();
        let third = |a, b, c| vec![rat(a, 6), rat(b, 6), rat(c, 6)];
        let mut expected = vec![
            MixedProfile { x: third(2, 4, 0), y: third(2, 4, 0) },
            MixedProfile { x: third(3, 3, 0), y: third(0, 4, 2) },
            MixedProfile { x: third(0, 4, 2), y: third(3, 3, 0) },
        ];
        expected.sort();
        assert_eq!(eq, expected);
    }

    #[test]
    fn agrees_with_vertex_enumeration() {
        let g = example_game();
        let budget = EnumerationBudget::default();
        assert_eq!(
            enumerate_equilibria(&g, &SupportBudget::default()).unwrap(),
            completely_labeled_vertex_pairs(&g, &budget).unwrap()
        );
    }

    #[test]
    fn triple_morris_two() {
        let g = unit_vector_game(&triple_morris_game(2).unwrap());
        let eq = enumerate_equilibria(&g, &SupportBudget::default()).unwrap();
        assert_eq!(eq.len(), 3);
        assert!(eq.iter().all(|p| p.x.iter().all(Signed::is_positive)));
        assert_eq!(SupportUniverse::new(&g, Universe::AllMSubsets).unwrap().len(), 15);
        assert_eq!(count_equilibrium_supports(&g, Universe::AllMSubsets, 100).unwrap(), 3);
        assert_eq!(SupportUniverse::new(&g, Universe::OnePerUnitVector).unwrap().len(), 9);
        assert_eq!(count_equilibrium_supports(&g, Universe::OnePerUnitVector, 100).unwrap(), 3);
    }

    #[test]
    fn closed_form() {
        assert_eq!(expected_guesses(15, 3).unwrap(), rat(4, 1));
        assert_eq!(expected_guesses(7, 7).unwrap(), rat(1, 1));
        assert_eq!(expected_guesses(1, 1).unwrap(), rat(1, 1));
        assert_eq!(expected_guesses(495, 9).unwrap(), rat(248, 5));
        assert!(expected_guesses(5, 0).is_err());
        assert!(expected_guesses(2, 3).is_err());
    }

    #[test]
    fn closed_form_matches_exact_average() {
        // Average over every ordering of a universe with 2 successes among 5.
        use itertools::Itertools;
        let (mut total, mut count) = (0u64, 0u64);
        for order in (0..5).permutations(5) {
            total += order.iter().position(|&i| i < 2).unwrap() as u64 + 1;
            count += 1;
        }
        assert_eq!(Rational::new(total.into(), count.into()), expected_guesses(5, 2).unwrap());
    }

    #[test]
    fn subset_unranking_is_lexicographic() {
        let g = unit_vector_game(&triple_morris_game(2).unwrap());
        let u = SupportUniverse::new(&g, Universe::AllMSubsets).unwrap();
        let all: Vec<Vec<usize>> = (0..u.len()).map(|i| u.get(i)).collect();
        let mut expected = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                expected.push(vec![a, b]);
            }
        }
        assert_eq!(all, expected);
    }

    #[test]
    fn unit_vector_universe_picks_one_per_class() {
        let g = unit_vector_game(&triple_morris_game(2).unwrap());
        let u = SupportUniverse::new(&g, Universe::OnePerUnitVector).unwrap();
        let classes = unit_vector_classes(g.a()).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for i in 0..u.len() {
            let cols = u.get(i);
            for class in &classes {
                assert_eq!(cols.iter().filter(|c| class.contains(c)).count(), 1);
            }
            seen.insert(cols);
        }
        assert_eq!(seen.len(), 9);
        assert!(SupportUniverse::new(&example_symmetric_game(), Universe::OnePerUnitVector).is_err());
    }

    fn example_symmetric_game() -> BimatrixGame {
        let c = example_symmetric_matrix();
        BimatrixGame::new(c.clone(), c.transpose()).unwrap()
    }

    #[test]
    fn lazy_shuffle_is_a_permutation() {
        for seed in 0..20 {
            let mut v: Vec<u128> = LazyShuffle::new(37, seed).collect();
            v.sort_unstable();
            assert_eq!(v, (0..37).collect::<Vec<_>>());
        }
        let a: Vec<u128> = LazyShuffle::new(1 << 100, 5).take(4).collect();
        let b: Vec<u128> = LazyShuffle::new(1 << 100, 5).take(4).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn lazy_shuffle_first_element_is_uniform() {
        let mut counts = [0u32; 4];
        for seed in 0..4000 {
            counts[LazyShuffle::new(4, seed).next().unwrap() as usize] += 1;
        }
        assert!(counts.iter().all(|&c| (850..1150).contains(&c)), "{counts:?}");
    }

    #[test]
    fn search_finds_equilibria() {
        let g = unit_vector_game(&triple_morris_game(2).unwrap());
        for seed in 0..30 {
            let (p, stats) = randomized_support_search(&g, Universe::AllMSubsets, seed).unwrap();
            assert!(verify_equilibrium(&g, &p).unwrap());
            assert!((1..=13).contains(&stats.guesses));
        }
        let one = BimatrixGame::new(Matrix::from_i64(&[&[1]]), Matrix::from_i64(&[&[1]])).unwrap();
        let (_, stats) = randomized_support_search(&one, Universe::AllMSubsets, 9).unwrap();
        assert_eq!((stats.guesses, stats.universe), (1, 1));
    }

    #[test]
    fn stats_csv() {
        let stats = vec![SearchStats { seed: 3, guesses: 2, universe: 15, equilibria_found: Some(3) }];
        let mut buf = Vec::new();
        write_stats_csv(&stats, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "seed,guesses,universe,equilibria_found\n3,2,15,3\n");
    }

    #[test]
    fn standard_error() {
        let (mean, se) = mean_and_standard_error(&[1, 2, 3, 4]);
        assert_eq!(mean, 2.5);
        assert!((se - (5.0f64 / 12.0).sqrt()).abs() < 1e-12);
    }
}
