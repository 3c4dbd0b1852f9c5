//! Lemke–Howson pivoting on `P x Q`.
//!
//! `P` is the system `Bᵀx + r = 1` and `Q` is `Ay + s = 1`. In both, the variable with
//! label `k` is `x_k`/`s_k` for `k <= m` and `r_j`/`y_j` for `k = m + j`, so a vertex
//! carries label `k` exactly when that variable is nonbasic. Vertices are identified by
//! their nonbasic sets, stored as bitstrings over `1..=m+n`.

mod tableau;

use std::collections::HashSet;

use num::Zero;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::game::{unit_vector_game, verify_equilibrium, BimatrixGame, Label, MixedProfile, UnitVectorGame};
use crate::matrix::Matrix;
use crate::path::{Endpoint, PathVertex, PivotPath, PivotStep, Side};
use crate::rational::Rational;

pub use tableau::{Pivot, Tableau};

pub const DEFAULT_STEP_CAP: u64 = 10_000_000;

/// Label sets of the current vertices of `P` and `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LhVertex {
    pub p: BitString,
    pub q: BitString,
}

impl LhVertex {
    pub fn labels(&self, side: Side) -> &BitString {
        match side {
            Side::P => &self.p,
            Side::Q => &self.q,
        }
    }

    /// Labels of both vertices, each label listed once per vertex carrying it.
    pub fn label_multiset(&self) -> Vec<Label> {
        let mut v: Vec<Label> = self.p.ones().chain(self.q.ones()).map(|k| k + 1).collect();
        v.sort_unstable();
        v
    }
}

impl PathVertex for LhVertex {
    /// Basic variables of the pivoted polytope, named by their labels.
    fn basis_ids(&self, side: Side) -> Vec<usize> {
        let labels = self.labels(side);
        (0..labels.len()).filter(|&k| !labels.get(k)).map(|k| k + 1).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LhOptions {
    /// Maximum number of pivots; `None` for no limit.
    pub step_cap: Option<u64>,
    /// Fail with [`Error::Degenerate`] if the ratio test ever ties.
    pub strict_nondegenerate: bool,
    /// Keep every visited vertex pair and fail with [`Error::Cycling`] on a repeat.
    pub detect_cycles: bool,
}

impl Default for LhOptions {
    fn default() -> Self {
        Self {
            step_cap: Some(DEFAULT_STEP_CAP),
            strict_nondegenerate: false,
            detect_cycles: true,
        }
    }
}

/// Resumable cursor over the pivots of one LH path.
#[derive(Clone, Debug)]
pub struct LhWalker {
    m: usize,
    n: usize,
    p: Tableau,
    q: Tableau,
    missing: Label,
    next: Option<(Side, Label)>,
    steps: u64,
    strict: bool,
}

fn integer_rows(m: &Matrix) -> Vec<Vec<num::BigInt>> {
    m.to_integer()
}

impl LhWalker {
    /// Starts at the origin pair of `game` with the given missing label.
    pub fn new(game: &BimatrixGame, missing_label: Label) -> Result<Self> {
        game.check_label(missing_label)?;
        let (m, n) = (game.m(), game.n());
        let vars = m + n;
        // P: one row per column j of B, structural x_i (vars 0..m), slack r_j (m + j)
        let bt = integer_rows(&game.normalized_b().transpose());
        let p = Tableau::new(vars, &bt, &(0..m).collect::<Vec<_>>(), &(m..vars).collect::<Vec<_>>());
        // Q: one row per row i of A, structural y_j (m + j), slack s_i (i)
        let a = integer_rows(game.normalized_a());
        let q = Tableau::new(vars, &a, &(m..vars).collect::<Vec<_>>(), &(0..m).collect::<Vec<_>>());
        let side = if missing_label <= m { Side::P } else { Side::Q };
        Ok(Self {
            m,
            n,
            p,
            q,
            missing: missing_label,
            next: Some((side, missing_label)),
            steps: 0,
            strict: false,
        })
    }

    /// Fail on ratio-test ties instead of resolving them lexicographically.
    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    pub fn missing_label(&self) -> Label {
        self.missing
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps
    }

    pub fn is_finished(&self) -> bool {
        self.next.is_none()
    }

    fn tableau(&self, side: Side) -> &Tableau {
        match side {
            Side::P => &self.p,
            Side::Q => &self.q,
        }
    }

    fn labels(&self, side: Side) -> BitString {
        let t = self.tableau(side);
        BitString::from_positions(self.m + self.n, (0..self.m + self.n).filter(|&v| !t.is_basic(v)))
    }

    pub fn vertex(&self) -> LhVertex {
        LhVertex {
            p: self.labels(Side::P),
            q: self.labels(Side::Q),
        }
    }

    /// Current points of `P` and `Q` (not rescaled).
    pub fn points(&self) -> (Vec<Rational>, Vec<Rational>) {
        let x = (0..self.m).map(|i| self.p.value(i)).collect();
        let y = (0..self.n).map(|j| self.q.value(self.m + j)).collect();
        (x, y)
    }

    pub fn is_at_origin(&self) -> bool {
        let (x, y) = self.points();
        x.iter().chain(&y).all(Zero::is_zero)
    }

    pub fn feasible(&self) -> bool {
        self.p.feasible() && self.q.feasible()
    }

    fn step(&mut self, side: Side, drop: Label) -> Result<PivotStep<LhVertex>> {
        let strict = self.strict;
        let tableau = match side {
            Side::P => &mut self.p,
            Side::Q => &mut self.q,
        };
        let Pivot { leaving, tie } = tableau.pivot(drop - 1).ok_or(Error::Unbounded(drop))?;
        if tie && strict {
            return Err(Error::Degenerate(format!("ratio-test tie when dropping label {drop} in {side:?}")));
        }
        self.steps += 1;
        let picked = leaving + 1;
        self.next = (picked != self.missing).then_some((side.other(), picked));
        Ok(PivotStep {
            side,
            dropped: drop,
            picked,
            vertex: self.vertex(),
        })
    }
}

impl Iterator for LhWalker {
    type Item = Result<PivotStep<LhVertex>>;

    fn next(&mut self) -> Option<Self::Item> {
        let (side, drop) = self.next.take()?;
        Some(self.step(side, drop))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LhResult {
    pub equilibrium: MixedProfile,
    pub path: PivotPath<LhVertex>,
    pub path_length: usize,
}

pub fn lh_solve(game: &BimatrixGame, missing_label: Label) -> Result<LhResult> {
    lh_solve_with(game, missing_label, &LhOptions::default())
}

pub fn lh_solve_with(game: &BimatrixGame, missing_label: Label, options: &LhOptions) -> Result<LhResult> {
    let mut walker = LhWalker::new(game, missing_label)?.strict(options.strict_nondegenerate);
    let start = walker.vertex();
    let mut seen = HashSet::new();
    if options.detect_cycles {
        seen.insert(start.clone());
    }
    let mut steps = Vec::new();
    while !walker.is_finished() {
        if options.step_cap.is_some_and(|cap| walker.steps_taken() >= cap) {
            return Err(Error::BudgetExceeded(format!("step cap of {} pivots reached", walker.steps_taken())));
        }
        let step = walker.next().expect("walker not finished")?;
        if options.detect_cycles && !seen.insert(step.vertex.clone()) {
            return Err(Error::Cycling { steps: walker.steps_taken() });
        }
        steps.push(step);
    }
    let (x, y) = walker.points();
    let equilibrium = MixedProfile::from_polytope_point(&x, &y)?;
    if !verify_equilibrium(game, &equilibrium)? {
        return Err(Error::NotFound(format!("LH endpoint for label {missing_label} is not an equilibrium")));
    }
    let path_length = steps.len();
    Ok(LhResult {
        equilibrium,
        path: PivotPath {
            missing_label,
            start,
            steps,
            endpoint: Endpoint::Equilibrium,
        },
        path_length,
    })
}

/// One LH run per missing label `1..=m+n`.
pub fn lh_all_labels(game: &BimatrixGame) -> Result<Vec<(Label, LhResult)>> {
    (1..=game.label_count()).map(|k| lh_solve(game, k).map(|r| (k, r))).collect()
}

/// Vertex sequences visited in `P` and in `Q`, each vertex listed when first reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub p: Vec<BitString>,
    pub q: Vec<BitString>,
}

impl Projection {
    /// Neither sequence revisits a vertex it has left.
    pub fn is_simple(&self) -> bool {
        [&self.p, &self.q].iter().all(|seq| {
            let mut seen = HashSet::new();
            seq.iter().all(|v| seen.insert(v))
        })
    }
}

pub fn project_path(result: &LhResult) -> Projection {
    project(&result.path)
}

pub fn project(path: &PivotPath<LhVertex>) -> Projection {
    let mut p = vec![path.start.p.clone()];
    let mut q = vec![path.start.q.clone()];
    for s in &path.steps {
        match s.side {
            Side::P => p.push(s.vertex.p.clone()),
            Side::Q => q.push(s.vertex.q.clone()),
        }
    }
    Projection { p, q }
}

/// The LH path of the unit vector game for `missing_label in 1..=m+n`, projected to `P`
/// and relabeled as a path on `P^ell`: facet `m + j` carries label `ell(j)`. Vertices are
/// facet-incidence bitstrings of length `m + n`.
pub fn lemke_path_on_unit_vector_game(u: &UnitVectorGame, missing_label: Label) -> Result<PivotPath<BitString>> {
    let game = unit_vector_game(u);
    let options = LhOptions {
        strict_nondegenerate: true,
        ..LhOptions::default()
    };
    let result = lh_solve_with(&game, missing_label, &options)?;
    let polytope_label = u.facet_label(missing_label);
    let steps = result
        .path
        .steps
        .into_iter()
        .filter(|s| s.side == Side::P)
        .map(|s| PivotStep {
            side: Side::P,
            dropped: u.facet_label(s.dropped),
            picked: u.facet_label(s.picked),
            vertex: s.vertex.p,
        })
        .collect();
    Ok(PivotPath {
        missing_label: polytope_label,
        start: result.path.start.p,
        steps,
        endpoint: Endpoint::Equilibrium,
    })
}

impl PathVertex for BitString {
    /// One-based positions of the set bits.
    fn basis_ids(&self, _side: Side) -> Vec<usize> {
        self.ones().map(|k| k + 1).collect()
    }
}
