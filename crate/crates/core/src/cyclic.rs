//! Dual cyclic polytopes `{x | (mu(t_j) - mean)ᵀ x <= 1}` on the moment curve
//! `mu(t) = (t, t^2, ..., t^m)` and their affine transform to the form
//! `{x >= 0, Bᵀx <= 1}` of a best-response polytope.

use num::{One, Signed, Zero};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::gale::GaleString;
use crate::game::{Label, UnitVectorGame};
use crate::matrix::{solve_square, solve_unique, Matrix};
use crate::polytope::{HPolytope, Vertex};
use crate::rational::{dot, int, Rational};

#[derive(Clone, Debug)]
pub struct CyclicPolytopeGeometry {
    m: usize,
    t: Vec<Rational>,
    /// Facet normals `mu(t_j) - mean`, one per facet.
    normals: Vec<Vec<Rational>>,
}

fn moment_point(t: &Rational, m: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(m);
    let mut power = Rational::one();
    for _ in 0..m {
        power *= t;
        out.push(power.clone());
    }
    out
}

/// Dual cyclic polytope in even dimension `m` with `f` facets. `t` defaults to `1..=f`.
pub fn cyclic_geometry(m: usize, f: usize, t: Option<Vec<Rational>>) -> Result<CyclicPolytopeGeometry> {
    if m == 0 || m % 2 == 1 {
        return Err(Error::InvalidArgument(format!("dimension must be even and positive, got {m}")));
    }
    if f <= m {
        return Err(Error::InvalidArgument(format!("need f > m, got f={f}, m={m}")));
    }
    let t = t.unwrap_or_else(|| (1..=f as i64).map(int).collect());
    if t.len() != f {
        return Err(Error::DimensionMismatch(format!("{} parameters for {f} facets", t.len())));
    }
    if t.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("moment-curve parameters must be strictly increasing".into()));
    }
    let points: Vec<Vec<Rational>> = t.iter().map(|tj| moment_point(tj, m)).collect();
    let count = Rational::from_integer(f.into());
    let mean: Vec<Rational> = (0..m)
        .map(|i| points.iter().fold(Rational::zero(), |acc, p| acc + &p[i]) / &count)
        .collect();
    let normals = points
        .into_iter()
        .map(|p| p.into_iter().zip(&mean).map(|(a, b)| a - b).collect())
        .collect();
    Ok(CyclicPolytopeGeometry { m, t, normals })
}

impl CyclicPolytopeGeometry {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn f(&self) -> usize {
        self.normals.len()
    }

    pub fn parameters(&self) -> &[Rational] {
        &self.t
    }

    pub fn normals(&self) -> &[Vec<Rational>] {
        &self.normals
    }

    pub fn polytope(&self) -> HPolytope {
        HPolytope::new(self.m, self.normals.clone(), vec![Rational::one(); self.f()]).expect("consistent dimensions")
    }

    /// Vertices found by solving every `m`-subset of facets; exponential in `m`.
    pub fn vertices(&self, max_subsets: u128) -> Result<Vec<Vertex>> {
        self.polytope().vertices(max_subsets)
    }
}

/// `P = {x >= 0, Bᵀx <= 1}` affinely equivalent to a dual cyclic polytope, facet `i`
/// of `P` being facet `i` of the cyclic polytope. The vertex `1^m 0^n` maps to the origin.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    m: usize,
    b: Matrix,
    /// First `m` facet normals, as rows.
    leading: Matrix,
}

/// Sends `x` to the slacks `1 - g_i·x` of the first `m` facets; each remaining facet
/// `g_j·x <= 1` becomes `-(g_jᵀ G⁻¹ / c_j) x' <= 1` with `c_j` the slack of facet `j` at
/// the vertex `G⁻¹ 1`.
pub fn to_canonical_form(geom: &CyclicPolytopeGeometry) -> Result<CanonicalForm> {
    let m = geom.m;
    let leading = Matrix::from_rows(geom.normals[..m].to_vec())?;
    let ones = vec![Rational::one(); m];
    let origin = solve_square(&leading, &ones)?;
    let leading_t = leading.transpose();
    let n = geom.f() - m;
    let mut b = Matrix::zeros(m, n);
    for (j, g) in geom.normals[m..].iter().enumerate() {
        let slack = Rational::one() - dot(g, &origin);
        if !slack.is_positive() {
            return Err(Error::Degenerate(format!("facet {} is tight at the vertex of the first {m} facets", m + j + 1)));
        }
        // w with w G = gᵀ
        let w = solve_square(&leading_t, g)?;
        for i in 0..m {
            b[(i, j)] = -&w[i] / &slack;
        }
    }
    Ok(CanonicalForm { m, b, leading })
}

impl CanonicalForm {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.b.cols()
    }

    /// The `m x n` matrix with `P = {x >= 0, Bᵀx <= 1}`.
    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn polytope(&self) -> HPolytope {
        let (m, n) = (self.m, self.n());
        let mut rows = Vec::with_capacity(m + n);
        let mut rhs = Vec::with_capacity(m + n);
        for i in 0..m {
            let mut row = vec![Rational::zero(); m];
            row[i] = -Rational::one();
            rows.push(row);
            rhs.push(Rational::zero());
        }
        for j in 0..n {
            rows.push(self.b.column(j));
            rhs.push(Rational::one());
        }
        HPolytope::new(m, rows, rhs).expect("consistent dimensions")
    }

    /// Image in `P` of a point of the cyclic polytope.
    pub fn map_point(&self, x: &[Rational]) -> Vec<Rational> {
        self.leading.mul_vec(x).into_iter().map(|v| Rational::one() - v).collect()
    }

    /// The vertex of `P` on the facets set in `s`.
    pub fn vertex_of(&self, s: &GaleString) -> Result<Vec<Rational>> {
        if s.f() != self.m + self.n() || s.m() != self.m {
            return Err(Error::DimensionMismatch(format!("{s} does not fit m={}, n={}", self.m, self.n())));
        }
        let poly = self.polytope();
        let rows: Vec<Vec<Rational>> = s.positions().iter().map(|&p| poly.row(p - 1).to_vec()).collect();
        let rhs: Vec<Rational> = s.positions().iter().map(|&p| poly.rhs(p - 1).clone()).collect();
        solve_unique(&rows, &rhs).ok_or_else(|| Error::Singular(format!("facets of {s}")))
    }

    /// Facet incidence of a point of `P`.
    pub fn incidence(&self, x: &[Rational]) -> BitString {
        self.polytope().tight_set(x)
    }

    pub fn unit_vector_game(&self, ell: Vec<Label>) -> Result<UnitVectorGame> {
        UnitVectorGame::new(self.m, ell, self.b.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gale::enumerate_gale_vertices;

    fn incidence_strings(vertices: &[Vertex]) -> Vec<BitString> {
        let mut v: Vec<BitString> = vertices.iter().map(|v| v.tight.clone()).collect();
        v.sort();
        v
    }

    fn gale_strings(m: usize, f: usize) -> Vec<BitString> {
        enumerate_gale_vertices(m, f, u128::MAX).unwrap().into_iter().map(GaleString::into_bits).collect()
    }

    #[test]
    fn quadrilateral() {
        let geom = cyclic_geometry(2, 4, None).unwrap();
        let v = geom.vertices(u128::MAX).unwrap();
        assert_eq!(v.len(), 4);
        assert_eq!(incidence_strings(&v), gale_strings(2, 4));
    }

    #[test]
    fn geometric_vertices_are_gale_strings() {
        for m in [2, 4] {
            for f in m + 1..=m + 6 {
                let geom = cyclic_geometry(m, f, None).unwrap();
                let v = geom.vertices(u128::MAX).unwrap();
                assert!(v.iter().all(|v| v.tight.count_ones() == m), "simple, m={m} f={f}");
                assert_eq!(incidence_strings(&v), gale_strings(m, f), "m={m} f={f}");
            }
        }
    }

    #[test]
    fn other_parameters_give_the_same_combinatorics() {
        let t: Vec<Rational> = [-3, -1, 0, 2, 5, 6, 9].iter().map(|&v| int(v)).collect();
        let geom = cyclic_geometry(4, 7, Some(t)).unwrap();
        assert_eq!(incidence_strings(&geom.vertices(u128::MAX).unwrap()), gale_strings(4, 7));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(cyclic_geometry(3, 6, None).is_err());
        assert!(cyclic_geometry(2, 2, None).is_err());
        assert!(cyclic_geometry(2, 3, Some(vec![int(1), int(1), int(2)])).is_err());
    }

    #[test]
    fn canonical_form_preserves_incidence() {
        for (m, f) in [(2, 4), (4, 8)] {
            let geom = cyclic_geometry(m, f, None).unwrap();
            let canon = to_canonical_form(&geom).unwrap();
            let pv = canon.polytope().vertices(u128::MAX).unwrap();
            assert_eq!(incidence_strings(&pv), gale_strings(m, f));
            // the origin is the vertex of the first m facets
            let origin = pv.iter().find(|v| v.point.iter().all(Zero::is_zero)).unwrap();
            assert_eq!(origin.tight, BitString::from_positions(f, 0..m));
            // every cyclic vertex maps to a P vertex with the same incidence
            for v in geom.vertices(u128::MAX).unwrap() {
                let x = canon.map_point(&v.point);
                assert_eq!(canon.incidence(&x), v.tight);
                let s = GaleString::new(v.tight.clone()).unwrap();
                assert_eq!(canon.vertex_of(&s).unwrap(), x);
            }
        }
    }

    #[test]
    fn remaining_inequalities_have_unit_right_hand_side() {
        let canon = to_canonical_form(&cyclic_geometry(4, 8, None).unwrap()).unwrap();
        let poly = canon.polytope();
        for k in 4..8 {
            assert_eq!(poly.rhs(k), &Rational::one());
        }
        assert_eq!((canon.m(), canon.n()), (4, 4));
    }
}
