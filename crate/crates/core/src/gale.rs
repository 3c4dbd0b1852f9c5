//! Gale evenness bitstrings and the combinatorial Lemke path engine.
//!
//! For even `m`, the vertices of the dual cyclic polytope with `f` facets are the
//! length-`f` bitstrings with `m` ones in which every run of ones is even once the
//! string is read cyclically. A labeled polytope attaches label `i` to position `i <= m`
//! and `ell(j)` to position `m + j`. Positions in the public API are one-based.

use std::collections::HashSet;
use std::fmt;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::game::Label;
use crate::path::{Endpoint, PivotPath, PivotStep, Side};
use crate::polytope::binomial;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaleString {
    bits: BitString,
}

fn check_even_dimension(m: usize) -> Result<()> {
    if m == 0 || m % 2 == 1 {
        Err(Error::InvalidArgument(format!("dimension must be even and positive, got {m}")))
    } else {
        Ok(())
    }
}

/// Cyclic run check. `bits` must contain at least one zero.
fn runs_even(bits: &BitString) -> bool {
    let f = bits.len();
    let Some(zero) = (0..f).find(|&p| !bits.get(p)) else {
        return false;
    };
    let mut run = 0usize;
    for step in 1..=f {
        if bits.get((zero + step) % f) {
            run += 1;
        } else {
            if run % 2 == 1 {
                return false;
            }
            run = 0;
        }
    }
    true
}

/// Gale evenness of a bitstring with exactly `m` ones, `m` even.
pub fn is_gale_even(bits: &BitString, m: usize) -> Result<bool> {
    check_even_dimension(m)?;
    if bits.count_ones() != m {
        return Err(Error::InvalidArgument(format!("expected {m} ones, found {}", bits.count_ones())));
    }
    if bits.len() <= m {
        return Err(Error::InvalidArgument("need more positions than ones".into()));
    }
    Ok(runs_even(bits))
}

impl GaleString {
    pub fn new(bits: BitString) -> Result<Self> {
        let m = bits.count_ones();
        if !is_gale_even(&bits, m)? {
            return Err(Error::InvalidArgument(format!("{bits} violates Gale evenness")));
        }
        Ok(Self { bits })
    }

    /// `1^m 0^(f-m)`.
    pub fn origin(m: usize, f: usize) -> Result<Self> {
        check_even_dimension(m)?;
        if f <= m {
            return Err(Error::InvalidArgument(format!("need f > m, got f={f}, m={m}")));
        }
        Ok(Self {
            bits: BitString::from_positions(f, 0..m),
        })
    }

    /// Accepts `1` for set and `.` or `0` for clear.
    pub fn parse(text: &str) -> Result<Self> {
        let bits = BitString::parse(text).ok_or_else(|| Error::InvalidArgument(format!("not a bitstring: `{text}`")))?;
        Self::new(bits)
    }

    pub fn bits(&self) -> &BitString {
        &self.bits
    }

    pub fn into_bits(self) -> BitString {
        self.bits
    }

    pub fn m(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn f(&self) -> usize {
        self.bits.len()
    }

    /// One-based.
    pub fn is_set(&self, position: usize) -> bool {
        self.bits.get(position - 1)
    }

    /// One-based positions of the ones.
    pub fn positions(&self) -> Vec<usize> {
        self.bits.ones().map(|p| p + 1).collect()
    }

    pub fn to_binary_string(&self) -> String {
        self.bits.to_binary_string()
    }
}

impl fmt::Display for GaleString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.bits.fmt(f)
    }
}

/// The unique position, other than `drop`, that restores Gale evenness after clearing
/// `drop` (both zero-based). The run through `drop` splits into an even and an odd
/// part; the odd part is extended at its outer end.
fn entering_position(bits: &BitString, drop: usize) -> usize {
    let f = bits.len();
    let mut left = 0;
    let mut p = (drop + f - 1) % f;
    while bits.get(p) {
        left += 1;
        p = (p + f - 1) % f;
    }
    if left % 2 == 1 {
        return p;
    }
    let mut q = (drop + 1) % f;
    while bits.get(q) {
        q = (q + 1) % f;
    }
    q
}

/// Leaves the facet at `drop_position` and returns the other endpoint of that edge with
/// the newly entered position.
pub fn gale_pivot(s: &GaleString, drop_position: usize) -> Result<(GaleString, usize)> {
    if drop_position == 0 || drop_position > s.f() || !s.is_set(drop_position) {
        return Err(Error::InvalidArgument(format!("position {drop_position} is not a one of {s}")));
    }
    let mut bits = s.bits.clone();
    let entered = entering_position(&bits, drop_position - 1);
    bits.clear(drop_position - 1);
    bits.set(entered);
    Ok((GaleString { bits }, entered + 1))
}

/// Dual cyclic polytope of even dimension `m` with facet labels `1..=m, ell(1..=n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGalePolytope {
    m: usize,
    ell: Vec<Label>,
}

impl LabeledGalePolytope {
    pub fn new(m: usize, ell: Vec<Label>) -> Result<Self> {
        check_even_dimension(m)?;
        if ell.is_empty() {
            return Err(Error::InvalidArgument("label string must be nonempty".into()));
        }
        if let Some(&bad) = ell.iter().find(|&&l| l == 0 || l > m) {
            return Err(Error::LabelOutOfRange { label: bad, max: m });
        }
        Ok(Self { m, ell })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.ell.len()
    }

    pub fn f(&self) -> usize {
        self.m + self.ell.len()
    }

    pub fn ell(&self) -> &[Label] {
        &self.ell
    }

    /// Label of one-based position `pos`.
    pub fn label(&self, pos: usize) -> Label {
        if pos <= self.m {
            pos
        } else {
            self.ell[pos - self.m - 1]
        }
    }

    /// Labels of all positions, zero-based index.
    pub fn position_labels(&self) -> Vec<Label> {
        (1..=self.f()).map(|p| self.label(p)).collect()
    }

    pub fn origin(&self) -> GaleString {
        GaleString::origin(self.m, self.f()).expect("validated dimensions")
    }

    pub fn is_completely_labeled(&self, s: &GaleString) -> bool {
        let mut seen = vec![false; self.m + 1];
        for p in s.positions() {
            seen[self.label(p)] = true;
        }
        seen[1..].iter().all(|&b| b)
    }
}

/// Number of Gale strings of length `f` with `m` ones.
pub fn gale_vertex_count(m: usize, f: usize) -> u128 {
    let h = m / 2;
    if f <= m {
        return 0;
    }
    // pairs placed linearly, plus those with a pair wrapping from position f to 1
    binomial(f - h, h) + binomial(f - 2 - (h - 1), h - 1)
}

pub const DEFAULT_ENUMERATION_BUDGET: u128 = 10_000_000;

struct PairPlacer<'a> {
    labels: Option<&'a [Label]>,
    used: Vec<bool>,
    bits: BitString,
    out: Vec<BitString>,
}

impl PairPlacer<'_> {
    fn try_mark(&mut self, a: usize, b: usize) -> bool {
        let Some(labels) = self.labels else {
            return true;
        };
        let (la, lb) = (labels[a], labels[b]);
        if la == lb || self.used[la] || self.used[lb] {
            return false;
        }
        self.used[la] = true;
        self.used[lb] = true;
        true
    }

    fn unmark(&mut self, a: usize, b: usize) {
        if let Some(labels) = self.labels {
            self.used[labels[a]] = false;
            self.used[labels[b]] = false;
        }
    }

    /// Places `remaining` disjoint pairs `(i, i+1)` with `start <= i` and `i + 1 <= last`.
    fn place(&mut self, start: usize, remaining: usize, last: usize) {
        if remaining == 0 {
            self.out.push(self.bits.clone());
            return;
        }
        let mut i = start;
        while i + 2 * remaining - 1 <= last {
            if self.try_mark(i, i + 1) {
                self.bits.set(i);
                self.bits.set(i + 1);
                self.place(i + 2, remaining - 1, last);
                self.bits.clear(i);
                self.bits.clear(i + 1);
                self.unmark(i, i + 1);
            }
            i += 1;
        }
    }
}

/// Gale strings of length `f` with `m` ones, optionally only those whose ones carry
/// distinct labels (zero-based `labels`, values in `1..=m`). Sorted lexicographically.
fn generate(m: usize, f: usize, labels: Option<&[Label]>) -> Vec<GaleString> {
    let h = m / 2;
    let mut placer = PairPlacer {
        labels,
        used: vec![false; m + 1],
        bits: BitString::zeros(f),
        out: Vec::new(),
    };
    placer.place(0, h, f - 1);
    // a pair wrapping from position f to position 1
    if placer.try_mark(f - 1, 0) {
        placer.bits.set(f - 1);
        placer.bits.set(0);
        if f >= 3 {
            placer.place(1, h - 1, f - 2);
        } else if h == 1 {
            placer.out.push(placer.bits.clone());
        }
        placer.bits.clear(f - 1);
        placer.bits.clear(0);
        placer.unmark(f - 1, 0);
    }
    let mut out: Vec<GaleString> = placer.out.into_iter().map(|bits| GaleString { bits }).collect();
    out.sort();
    out.dedup();
    out
}

/// All vertices of the dual cyclic polytope in dimension `m` with `f` facets, sorted
/// lexicographically with `0 < 1`.
pub fn enumerate_gale_vertices(m: usize, f: usize, budget: u128) -> Result<Vec<GaleString>> {
    check_even_dimension(m)?;
    if f <= m {
        return Err(Error::InvalidArgument(format!("need f > m, got f={f}, m={m}")));
    }
    let count = gale_vertex_count(m, f);
    if count > budget {
        return Err(Error::BudgetExceeded(format!("{count} Gale strings exceed the budget of {budget}")));
    }
    Ok(generate(m, f, None))
}

/// Completely labeled vertices, always including `1^m 0^n`, sorted.
pub fn completely_labeled_strings(poly: &LabeledGalePolytope, budget: u128) -> Result<Vec<GaleString>> {
    let count = gale_vertex_count(poly.m, poly.f());
    if count > budget {
        return Err(Error::BudgetExceeded(format!("{count} Gale strings exceed the budget of {budget}")));
    }
    let labels = poly.position_labels();
    Ok(generate(poly.m, poly.f(), Some(&labels)))
}

/// Streaming Lemke path on a labeled Gale polytope. Each item is one pivot; labels are
/// tracked per position so a step costs the length of the run it splits.
#[derive(Clone, Debug)]
pub struct GaleLemkeWalker<'a> {
    poly: &'a LabeledGalePolytope,
    bits: BitString,
    /// Zero-based position currently holding each label (the newest one for the
    /// duplicate label).
    holder: Vec<Option<usize>>,
    missing: Label,
    next_drop: Option<usize>,
    steps: u64,
}

impl<'a> GaleLemkeWalker<'a> {
    pub fn new(poly: &'a LabeledGalePolytope, missing_label: Label) -> Result<Self> {
        Self::from_vertex(poly, &poly.origin(), missing_label)
    }

    /// Starts at any completely labeled vertex.
    pub fn from_vertex(poly: &'a LabeledGalePolytope, start: &GaleString, missing_label: Label) -> Result<Self> {
        if missing_label == 0 || missing_label > poly.m {
            return Err(Error::LabelOutOfRange {
                label: missing_label,
                max: poly.m,
            });
        }
        if start.f() != poly.f() || start.m() != poly.m || !poly.is_completely_labeled(start) {
            return Err(Error::InvalidArgument(format!("{start} is not a completely labeled vertex")));
        }
        let mut holder = vec![None; poly.m + 1];
        for p in start.bits.ones() {
            holder[poly.label(p + 1)] = Some(p);
        }
        Ok(Self {
            poly,
            bits: start.bits.clone(),
            next_drop: holder[missing_label],
            holder,
            missing: missing_label,
            steps: 0,
        })
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps
    }

    pub fn is_finished(&self) -> bool {
        self.next_drop.is_none()
    }

    pub fn current(&self) -> GaleString {
        GaleString { bits: self.bits.clone() }
    }

    /// Runs to the end without recording, giving up after `cap` pivots.
    pub fn count_to_end(&mut self, cap: Option<u64>) -> std::result::Result<u64, u64> {
        while let Some(drop) = self.next_drop {
            if cap.is_some_and(|c| self.steps >= c) {
                return Err(self.steps);
            }
            self.advance(drop);
        }
        Ok(self.steps)
    }

    /// Returns `(dropped label, picked label, entered position)`, zero-based position.
    fn advance(&mut self, drop: usize) -> (Label, Label, usize) {
        let dropped = self.poly.label(drop + 1);
        let entered = entering_position(&self.bits, drop);
        self.bits.clear(drop);
        self.bits.set(entered);
        if self.holder[dropped] == Some(drop) {
            self.holder[dropped] = None;
        }
        let picked = self.poly.label(entered + 1);
        self.next_drop = if picked == self.missing {
            None
        } else {
            self.holder[picked]
        };
        self.holder[picked] = Some(entered);
        self.steps += 1;
        (dropped, picked, entered)
    }
}

impl Iterator for GaleLemkeWalker<'_> {
    type Item = PivotStep<GaleString>;

    fn next(&mut self) -> Option<Self::Item> {
        let drop = self.next_drop?;
        let (dropped, picked, _) = self.advance(drop);
        Some(PivotStep {
            side: Side::P,
            dropped,
            picked,
            vertex: self.current(),
        })
    }
}

/// The Lemke path from `1^m 0^n` for `missing_label in 1..=m`.
pub fn combinatorial_lemke(poly: &LabeledGalePolytope, missing_label: Label) -> Result<PivotPath<GaleString>> {
    combinatorial_lemke_from(poly, &poly.origin(), missing_label, Some(crate::lh::DEFAULT_STEP_CAP))
}

pub fn combinatorial_lemke_from(
    poly: &LabeledGalePolytope,
    start: &GaleString,
    missing_label: Label,
    step_cap: Option<u64>,
) -> Result<PivotPath<GaleString>> {
    let mut walker = GaleLemkeWalker::from_vertex(poly, start, missing_label)?;
    let mut seen = HashSet::new();
    seen.insert(start.clone());
    let mut steps = Vec::new();
    while !walker.is_finished() {
        if step_cap.is_some_and(|cap| walker.steps_taken() >= cap) {
            return Err(Error::BudgetExceeded(format!("step cap of {} pivots reached", walker.steps_taken())));
        }
        let step = walker.next().expect("walker not finished");
        if !seen.insert(step.vertex.clone()) {
            return Err(Error::Cycling { steps: walker.steps_taken() });
        }
        steps.push(step);
    }
    let end = walker.current();
    Ok(PivotPath {
        missing_label,
        endpoint: if end == poly.origin() { Endpoint::Origin } else { Endpoint::Equilibrium },
        start: start.clone(),
        steps,
    })
}

/// Number of pivots of the Lemke path from the origin, or `Err(steps)` at the cap.
pub fn lemke_path_length(poly: &LabeledGalePolytope, missing_label: Label, cap: Option<u64>) -> Result<std::result::Result<u64, u64>> {
    let mut walker = GaleLemkeWalker::new(poly, missing_label)?;
    Ok(walker.count_to_end(cap))
}

/// Label strings: digits run together when `m <= 9`, otherwise comma-separated.
pub fn format_labels(m: usize, ell: &[Label]) -> String {
    let parts: Vec<String> = ell.iter().map(ToString::to_string).collect();
    if m <= 9 {
        parts.concat()
    } else {
        parts.join(",")
    }
}

pub fn parse_labels(text: &str) -> Result<Vec<Label>> {
    let text = text.trim();
    let bad = || Error::InvalidArgument(format!("invalid label string `{text}`"));
    if text.contains(',') {
        text.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
    } else {
        text.chars().map(|c| c.to_digit(10).map(|d| d as Label).ok_or_else(bad)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn g(s: &str) -> GaleString {
        GaleString::parse(s).unwrap()
    }

    fn b(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    /// Exhaustive filter over all placements of `m` ones.
    fn brute_force(m: usize, f: usize) -> Vec<BitString> {
        let mut v: Vec<BitString> = (0..f)
            .combinations(m)
            .map(|c| BitString::from_positions(f, c))
            .filter(|s| is_gale_even(s, m).unwrap())
            .collect();
        v.sort();
        v
    }

    #[test]
    fn evenness_examples() {
        assert!(is_gale_even(&b("1100"), 2).unwrap());
        assert!(is_gale_even(&b("1001"), 2).unwrap());
        assert!(!is_gale_even(&b("1010"), 2).unwrap());
        assert!(!is_gale_even(&b("0101"), 2).unwrap());
        assert!(is_gale_even(&b("110110"), 4).unwrap());
        assert!(!is_gale_even(&b("111010"), 4).unwrap());
        assert!(is_gale_even(&b("101101"), 4).unwrap());
        assert!(is_gale_even(&b("111011000001"), 6).unwrap());
        assert!(matches!(is_gale_even(&b("1110"), 2), Err(Error::InvalidArgument(_))));
        assert!(matches!(is_gale_even(&b("1100"), 3), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn vertex_counts_by_exhaustive_filter() {
        assert_eq!(brute_force(2, 4).len(), 4);
        assert_eq!(brute_force(4, 6).len(), 9);
        let v: Vec<String> = enumerate_gale_vertices(2, 4, 100).unwrap().iter().map(GaleString::to_binary_string).collect();
        assert_eq!(v, ["0011", "0110", "1001", "1100"]);
    }

    #[test]
    fn generator_matches_exhaustive_filter() {
        for m in [2, 4, 6] {
            for f in m + 1..=m + 8 {
                let fast: Vec<BitString> = enumerate_gale_vertices(m, f, u128::MAX).unwrap().into_iter().map(GaleString::into_bits).collect();
                assert_eq!(fast, brute_force(m, f), "m={m} f={f}");
                assert_eq!(gale_vertex_count(m, f), fast.len() as u128);
                assert!(fast.contains(&BitString::from_positions(f, 0..m)));
            }
            assert_eq!(enumerate_gale_vertices(m, m + 1, 1000).unwrap().len(), m + 1);
        }
    }

    #[test]
    fn enumeration_rejects_bad_input() {
        assert!(enumerate_gale_vertices(3, 6, 100).is_err());
        assert!(enumerate_gale_vertices(4, 4, 100).is_err());
        assert!(matches!(enumerate_gale_vertices(6, 20, 10), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn pivot_examples() {
        assert_eq!(gale_pivot(&g("1100"), 1).unwrap(), (g("0110"), 3));
        assert_eq!(gale_pivot(&g("0110"), 2).unwrap(), (g("0011"), 4));
        let (back, _) = gale_pivot(&g("0110"), 3).unwrap();
        assert_eq!(back, g("1100"));
        assert!(gale_pivot(&g("1100"), 3).is_err());
    }

    #[test]
    fn two_completions_for_every_facet() {
        for m in [2, 4, 6] {
            for f in m + 1..=m + 8 {
                for s in enumerate_gale_vertices(m, f, u128::MAX).unwrap() {
                    for d in s.positions() {
                        let mut rest = s.bits().clone();
                        rest.clear(d - 1);
                        let completions: Vec<usize> = (0..f)
                            .filter(|&p| !rest.get(p))
                            .filter(|&p| {
                                let mut t = rest.clone();
                                t.set(p);
                                is_gale_even(&t, m).unwrap()
                            })
                            .collect();
                        assert_eq!(completions.len(), 2, "{s} drop {d}");
                        let (next, entered) = gale_pivot(&s, d).unwrap();
                        assert!(completions.contains(&(entered - 1)) && entered != d);
                        assert_ne!(next, s);
                        assert_eq!(gale_pivot(&next, entered).unwrap(), (s.clone(), d));
                    }
                }
            }
        }
    }

    #[test]
    fn short_lemke_path() {
        let poly = LabeledGalePolytope::new(2, vec![2, 1]).unwrap();
        let path = combinatorial_lemke(&poly, 1).unwrap();
        let v: Vec<String> = path.vertices().map(GaleString::to_binary_string).collect();
        assert_eq!(v, ["1100", "0110", "0011"]);
        assert_eq!(path.len(), 2);
        assert!(path.starts_and_ends_with_missing_label());
        assert_eq!(path.endpoint, Endpoint::Equilibrium);
    }

    #[test]
    fn morris_six_first_pivots() {
        let poly = LabeledGalePolytope::new(6, vec![6, 4, 5, 2, 3, 1]).unwrap();
        let path = combinatorial_lemke(&poly, 1).unwrap();
        assert_eq!(path.steps[0].vertex, g("011111100000"));
        assert_eq!(path.steps[0].picked, 6);
        assert_eq!(path.steps[1].dropped, 6);
        assert_eq!(path.steps[1].vertex, g("011110110000"));
        assert_eq!(path.steps[1].picked, 4);
        assert!(!path.has_repeated_vertex());
        assert!(path.labels_chain());

        let path4 = combinatorial_lemke(&poly, 4).unwrap();
        assert_eq!(path4.steps[0].vertex, g("111011000001"));
        assert_eq!(path4.steps[0].picked, 1);
    }

    #[test]
    fn completely_labeled_examples() {
        let poly = LabeledGalePolytope::new(2, vec![2, 1, 1, 2, 2, 1]).unwrap();
        let v: Vec<String> = completely_labeled_strings(&poly, 1000).unwrap().iter().map(GaleString::to_binary_string).collect();
        assert_eq!(v, ["00000011", "00001100", "00110000", "11000000"]);

        let single = LabeledGalePolytope::new(2, vec![1, 1]).unwrap();
        let v: Vec<String> = completely_labeled_strings(&single, 1000).unwrap().iter().map(GaleString::to_binary_string).collect();
        // 0110 has labels 2,1; 0011 has 1,1; 1001 has 1,1
        assert_eq!(v, ["0110", "1100"]);
    }

    #[test]
    fn walker_from_other_endpoint_returns() {
        let poly = LabeledGalePolytope::new(2, vec![2, 1, 1, 2, 2, 1]).unwrap();
        for k in 1..=2 {
            let forward = combinatorial_lemke(&poly, k).unwrap();
            let end = forward.steps.last().unwrap().vertex.clone();
            let back = combinatorial_lemke_from(&poly, &end, k, None).unwrap();
            assert_eq!(back.steps.last().unwrap().vertex, poly.origin());
            assert_eq!(back.endpoint, Endpoint::Origin);
            assert_eq!(back.len(), forward.len());
        }
    }

    #[test]
    fn label_string_text_form() {
        assert_eq!(format_labels(6, &[6, 4, 5, 2, 3, 1]), "645231");
        assert_eq!(format_labels(10, &[10, 1]), "10,1");
        assert_eq!(parse_labels("645231").unwrap(), vec![6, 4, 5, 2, 3, 1]);
        assert_eq!(parse_labels("10, 1").unwrap(), vec![10, 1]);
        assert!(parse_labels("6a").is_err());
    }

    #[test]
    fn polytope_validation() {
        assert!(LabeledGalePolytope::new(3, vec![1]).is_err());
        assert!(matches!(LabeledGalePolytope::new(2, vec![3]), Err(Error::LabelOutOfRange { .. })));
        let poly = LabeledGalePolytope::new(2, vec![2, 1]).unwrap();
        assert!(GaleLemkeWalker::new(&poly, 3).is_err());
        assert_eq!(poly.label(3), 2);
    }
}
