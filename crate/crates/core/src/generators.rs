//! Instance families: Morris and triple Morris labelings and games, permutation games,
//! and seeded random games.

use std::ops::RangeInclusive;

use itertools::Itertools;
use num::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cyclic::{cyclic_geometry, to_canonical_form};
use crate::error::{Error, Result};
use crate::gale::LabeledGalePolytope;
use crate::game::{is_nondegenerate, BimatrixGame, EnumerationBudget, Label, MixedProfile, UnitVectorGame};
use crate::matrix::Matrix;
use crate::rational::{int, Rational};

fn check_even(m: usize) -> Result<()> {
    if m < 2 || m % 2 == 1 {
        Err(Error::InvalidArgument(format!("Morris strings need even m >= 2, got {m}")))
    } else {
        Ok(())
    }
}

/// `1, 3, 2, 5, 4, ..., m-1, m-2, m`: interior entries swap in pairs.
pub fn morris_tau(m: usize) -> Result<Vec<Label>> {
    check_even(m)?;
    Ok((1..=m)
        .map(|i| match i {
            1 => 1,
            i if i == m => m,
            i if i % 2 == 0 => i + 1,
            i => i - 1,
        })
        .collect())
}

/// `tau` reversed.
pub fn morris_sigma(m: usize) -> Result<Vec<Label>> {
    let mut s = morris_tau(m)?;
    s.reverse();
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MorrisVariant {
    /// Label string `sigma`.
    Single,
    /// Label string `sigma tau sigma`.
    Triple,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MorrisSpec {
    pub m: usize,
    pub variant: MorrisVariant,
}

impl MorrisSpec {
    pub fn labels(&self) -> Result<Vec<Label>> {
        let sigma = morris_sigma(self.m)?;
        Ok(match self.variant {
            MorrisVariant::Single => sigma,
            MorrisVariant::Triple => {
                let tau = morris_tau(self.m)?;
                [sigma.as_slice(), &tau, &sigma].concat()
            }
        })
    }

    pub fn polytope(&self) -> Result<LabeledGalePolytope> {
        LabeledGalePolytope::new(self.m, self.labels()?)
    }

    /// Unit vector game over the canonical form of the dual cyclic polytope with
    /// `t_j = j`. Coordinates grow quickly with `m`.
    pub fn game(&self) -> Result<UnitVectorGame> {
        let ell = self.labels()?;
        let geom = cyclic_geometry(self.m, self.m + ell.len(), None)?;
        to_canonical_form(&geom)?.unit_vector_game(ell)
    }
}

pub fn morris_polytope(m: usize) -> Result<LabeledGalePolytope> {
    MorrisSpec { m, variant: MorrisVariant::Single }.polytope()
}

pub fn triple_morris_polytope(m: usize) -> Result<LabeledGalePolytope> {
    MorrisSpec { m, variant: MorrisVariant::Triple }.polytope()
}

/// The `m x 3m` unit vector game of the triple Morris polytope.
pub fn triple_morris_game(m: usize) -> Result<UnitVectorGame> {
    MorrisSpec { m, variant: MorrisVariant::Triple }.game()
}

/// A permutation `pi` of `1..=n`, stored one-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PermutationGameSpec {
    pi: Vec<usize>,
}

impl PermutationGameSpec {
    pub fn new(pi: Vec<usize>) -> Result<Self> {
        let n = pi.len();
        if n == 0 {
            return Err(Error::InvalidArgument("empty permutation".into()));
        }
        let mut seen = vec![false; n + 1];
        for &v in &pi {
            if v == 0 || v > n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidArgument(format!("{pi:?} is not a permutation of 1..={n}")));
            }
        }
        Ok(Self { pi })
    }

    pub fn identity(n: usize) -> Self {
        Self { pi: (1..=n).collect() }
    }

    pub fn n(&self) -> usize {
        self.pi.len()
    }

    /// `pi(i)`, one-based.
    pub fn image(&self, i: usize) -> usize {
        self.pi[i - 1]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.pi
    }

    /// Cycles as lists of one-based elements, each starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n + 1];
        let mut out = Vec::new();
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.image(i);
            }
            out.push(cycle);
        }
        out
    }
}

/// `(I, I^pi)`: row `i` of `B` is the unit vector `e_{pi(i)}`.
pub fn permutation_game(spec: &PermutationGameSpec) -> BimatrixGame {
    let n = spec.n();
    let mut b = Matrix::zeros(n, n);
    for i in 1..=n {
        b[(i - 1, spec.image(i) - 1)] = Rational::one();
    }
    BimatrixGame::new(Matrix::identity(n), b).expect("square game")
}

/// One equilibrium per nonempty union `S` of cycles: both players uniform on `S`. Sorted.
pub fn permutation_equilibria(spec: &PermutationGameSpec) -> Vec<MixedProfile> {
    let cycles = spec.cycles();
    let n = spec.n();
    let mut out = Vec::with_capacity((1usize << cycles.len()) - 1);
    for mask in 1u64..(1u64 << cycles.len()) {
        let support: Vec<usize> = cycles
            .iter()
            .enumerate()
            .filter(|(c, _)| mask >> c & 1 == 1)
            .flat_map(|(_, cyc)| cyc.iter().copied())
            .collect();
        let weight = Rational::new(1.into(), (support.len() as i64).into());
        let mut x = vec![Rational::zero(); n];
        for &i in &support {
            x[i - 1] = weight.clone();
        }
        out.push(MixedProfile { x: x.clone(), y: x });
    }
    out.sort();
    out
}

/// All permutations of `1..=n` in lexicographic order.
pub fn all_permutations(n: usize) -> impl Iterator<Item = PermutationGameSpec> {
    (1..=n).permutations(n).map(|pi| PermutationGameSpec { pi })
}

/// Uniform permutation by a seeded Fisher–Yates shuffle.
pub fn random_permutation(n: usize, seed: u64) -> Result<PermutationGameSpec> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pi: Vec<usize> = (1..=n).collect();
    pi.shuffle(&mut rng);
    Ok(PermutationGameSpec { pi })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomGameOptions {
    pub payoffs: RangeInclusive<i64>,
    /// Draws allowed before giving up on finding a nondegenerate game.
    pub retry_cap: usize,
    pub budget: EnumerationBudget,
}

impl Default for RandomGameOptions {
    fn default() -> Self {
        Self {
            payoffs: 0..=99,
            retry_cap: 100,
            budget: EnumerationBudget::default(),
        }
    }
}

/// Integer payoffs drawn uniformly from `options.payoffs`. Within the enumeration
/// budget, degenerate draws are rejected; beyond it the draw is returned unchecked, so
/// use a wide range (at least 10^6 values) for large games.
pub fn random_game(m: usize, n: usize, seed: u64, options: &RandomGameOptions) -> Result<BimatrixGame> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("games need at least one row and one column".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checkable = m + n <= options.budget.max_labels;
    for _ in 0..options.retry_cap.max(1) {
        let mut draw = || {
            let rows: Vec<Vec<Rational>> = (0..m).map(|_| (0..n).map(|_| int(rng.gen_range(options.payoffs.clone()))).collect()).collect();
            Matrix::from_rows(rows).expect("rectangular")
        };
        let a = draw();
        let b = draw();
        let game = BimatrixGame::new(a, b)?;
        if !checkable || is_nondegenerate(&game, &options.budget)? {
            return Ok(game);
        }
    }
    Err(Error::Degenerate(format!("no nondegenerate {m}x{n} game after {} draws", options.retry_cap)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::verify_equilibrium;
    use crate::rational::rat;

    #[test]
    fn tau_strings() {
        assert_eq!(morris_tau(2).unwrap(), vec![1, 2]);
        assert_eq!(morris_tau(4).unwrap(), vec![1, 3, 2, 4]);
        assert_eq!(morris_tau(6).unwrap(), vec![1, 3, 2, 5, 4, 6]);
        assert_eq!(morris_tau(8).unwrap(), vec![1, 3, 2, 5, 4, 7, 6, 8]);
        assert!(morris_tau(5).is_err());
        assert!(morris_tau(0).is_err());
    }

    #[test]
    fn sigma_strings() {
        assert_eq!(morris_sigma(4).unwrap(), vec![4, 2, 3, 1]);
        assert_eq!(morris_sigma(6).unwrap(), vec![6, 4, 5, 2, 3, 1]);
        assert_eq!(morris_sigma(8).unwrap(), vec![8, 6, 7, 4, 5, 2, 3, 1]);
        for m in (2..=20).step_by(2) {
            let mut s = morris_sigma(m).unwrap();
            let mut sorted = s.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (1..=m).collect::<Vec<_>>());
            s.reverse();
            assert_eq!(s, morris_tau(m).unwrap());
        }
    }

    #[test]
    fn triple_strings() {
        let six = triple_morris_polytope(6).unwrap();
        assert_eq!(crate::gale::format_labels(6, six.ell()), "645231132546645231");
        assert_eq!(triple_morris_polytope(2).unwrap().ell(), &[2, 1, 1, 2, 2, 1]);
        for m in [2, 4, 6, 8] {
            assert_eq!(triple_morris_polytope(m).unwrap().f(), 4 * m);
        }
        assert!(triple_morris_polytope(3).is_err());
    }

    #[test]
    fn triple_morris_game_shape() {
        let g = triple_morris_game(2).unwrap();
        assert_eq!((g.m(), g.n()), (2, 6));
        assert_eq!(g.ell(), &[2, 1, 1, 2, 2, 1]);
    }

    #[test]
    fn permutation_game_structure() {
        let spec = PermutationGameSpec::new(vec![2, 3, 1]).unwrap();
        let g = permutation_game(&spec);
        assert_eq!(g.b(), &Matrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]));
        assert_eq!(spec.cycles(), vec![vec![1, 2, 3]]);
        assert!(PermutationGameSpec::new(vec![1, 1]).is_err());
        assert!(PermutationGameSpec::new(vec![0, 1]).is_err());
    }

    #[test]
    fn permutation_equilibria_small() {
        let id = PermutationGameSpec::identity(2);
        let eq = permutation_equilibria(&id);
        assert_eq!(eq.len(), 3);
        let swap = PermutationGameSpec::new(vec![2, 1]).unwrap();
        let eq = permutation_equilibria(&swap);
        assert_eq!(eq, vec![MixedProfile { x: vec![rat(1, 2), rat(1, 2)], y: vec![rat(1, 2), rat(1, 2)] }]);
        let one = PermutationGameSpec::identity(1);
        assert_eq!(permutation_equilibria(&one), vec![MixedProfile::pure(1, 1, 0, 0)]);
    }

    #[test]
    fn counts_follow_cycle_structure() {
        for spec in all_permutations(5) {
            let eq = permutation_equilibria(&spec);
            assert_eq!(eq.len(), (1 << spec.cycles().len()) - 1);
            let game = permutation_game(&spec);
            assert!(eq.iter().all(|p| verify_equilibrium(&game, p).unwrap()));
        }
    }

    #[test]
    fn single_cycle_fraction() {
        let total = all_permutations(5).count();
        let single = all_permutations(5).filter(|p| p.cycles().len() == 1).count();
        assert_eq!(Rational::new(single.into(), total.into()), rat(1, 5));
    }

    #[test]
    fn seeded_permutations_are_reproducible() {
        let a = random_permutation(9, 42).unwrap();
        assert_eq!(a, random_permutation(9, 42).unwrap());
        assert_ne!(a, random_permutation(9, 43).unwrap());
        assert!(random_permutation(0, 1).is_err());
    }

    #[test]
    fn random_games_are_nondegenerate_and_reproducible() {
        let opts = RandomGameOptions::default();
        let g = random_game(3, 4, 11, &opts).unwrap();
        assert_eq!(g, random_game(3, 4, 11, &opts).unwrap());
        assert!(is_nondegenerate(&g, &opts.budget).unwrap());
        let hopeless = RandomGameOptions {
            payoffs: 0..=0,
            retry_cap: 3,
            ..RandomGameOptions::default()
        };
        assert!(matches!(random_game(2, 2, 1, &hopeless), Err(Error::Degenerate(_))));
    }
}
