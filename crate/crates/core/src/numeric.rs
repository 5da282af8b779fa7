//! The pinned rigidity matrix and everything computed from it.
//!
//! Rows follow the sorted edge order, columns come in `(x, y)` pairs for the
//! inner vertices in sorted order. Pin columns are dropped, so pins have zero
//! velocity and equilibrium is only required at inner vertices.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::counts::pinned_generic_rank;
use crate::error::{Error, Result};
use crate::model::{Configuration, Edge, Framework, PinnedGraph, Point, VertexId};

/// Entries below `LEAK_THRESHOLD` times the largest entry of a basis vector count as zero.
pub const LEAK_THRESHOLD: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    /// Singular values below `rank_rel * sigma_max * max(rows, cols)` are zero.
    pub rank_rel: f64,
    /// Bound for equilibrium and first-order residuals.
    pub residual_abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rank_rel: 1e-9, residual_abs: 1e-8 }
    }
}

#[derive(Clone, Debug)]
pub struct RigidityMatrix {
    pub matrix: DMatrix<f64>,
    /// Edge behind each row.
    pub edges: Vec<Edge>,
    /// Inner vertex behind each column pair `2k, 2k + 1`.
    pub columns: Vec<VertexId>,
}

impl RigidityMatrix {
    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }
}

/// Edge weights `lambda_ij`.
#[derive(Clone, Debug, PartialEq)]
pub struct SelfStress {
    pub lambda: BTreeMap<Edge, f64>,
}

impl SelfStress {
    pub fn from_vector(edges: &[Edge], v: &DVector<f64>) -> Self {
        SelfStress { lambda: edges.iter().cloned().zip(v.iter().copied()).collect() }
    }

    pub fn get(&self, e: &Edge) -> f64 {
        self.lambda.get(e).copied().unwrap_or(0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.lambda.values().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn min_abs(&self) -> f64 {
        self.lambda.values().fold(f64::INFINITY, |m, x| m.min(x.abs()))
    }

    /// Nonzero on every edge relative to the largest entry.
    pub fn is_full(&self) -> bool {
        !self.lambda.is_empty() && self.min_abs() > LEAK_THRESHOLD * self.max_abs()
    }

    pub fn scaled(&self, k: f64) -> Self {
        SelfStress { lambda: self.lambda.iter().map(|(e, x)| (e.clone(), k * x)).collect() }
    }
}

/// Velocities of the inner vertices; pins are implicitly at rest.
#[derive(Clone, Debug, PartialEq)]
pub struct Motion {
    pub velocity: BTreeMap<VertexId, Point>,
}

impl Motion {
    pub fn zero(inner: impl IntoIterator<Item = VertexId>) -> Self {
        Motion { velocity: inner.into_iter().map(|v| (v, Point::zeros())).collect() }
    }

    pub fn from_vector(columns: &[VertexId], v: &DVector<f64>) -> Self {
        Motion {
            velocity: columns
                .iter()
                .enumerate()
                .map(|(k, id)| (id.clone(), Point::new(v[2 * k], v[2 * k + 1])))
                .collect(),
        }
    }

    pub fn to_vector(&self, columns: &[VertexId]) -> DVector<f64> {
        let mut v = DVector::zeros(2 * columns.len());
        for (k, id) in columns.iter().enumerate() {
            let p = self.get(id);
            v[2 * k] = p.x;
            v[2 * k + 1] = p.y;
        }
        v
    }

    /// Velocity of `v`, zero for vertices without an entry (pins).
    pub fn get(&self, v: &VertexId) -> Point {
        self.velocity.get(v).copied().unwrap_or_else(Point::zeros)
    }

    pub fn max_speed(&self) -> f64 {
        self.velocity.values().fold(0.0, |m, p| m.max(p.norm()))
    }

    pub fn min_speed(&self) -> f64 {
        self.velocity.values().fold(f64::INFINITY, |m, p| m.min(p.norm()))
    }

    /// Every listed vertex moves, relative to the fastest one.
    pub fn moves_all(&self) -> bool {
        !self.velocity.is_empty() && self.min_speed() > LEAK_THRESHOLD * self.max_speed()
    }
}

pub(crate) fn row_block(
    points: &[Point],
    col_of: &[Option<usize>],
    edges: &[[usize; 2]],
    ncols: usize,
) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(edges.len(), 2 * ncols);
    for (r, &[i, j]) in edges.iter().enumerate() {
        let d = points[i] - points[j];
        if let Some(c) = col_of[i] {
            m[(r, 2 * c)] = d.x;
            m[(r, 2 * c + 1)] = d.y;
        }
        if let Some(c) = col_of[j] {
            m[(r, 2 * c)] = -d.x;
            m[(r, 2 * c + 1)] = -d.y;
        }
    }
    m
}

/// Column index per vertex of `ix` (inner vertices only, in order).
pub(crate) fn inner_columns(pinned: &[bool]) -> (Vec<Option<usize>>, usize) {
    let mut next = 0;
    let cols = pinned
        .iter()
        .map(|&p| {
            if p {
                None
            } else {
                next += 1;
                Some(next - 1)
            }
        })
        .collect();
    (cols, next)
}

pub fn build_rigidity_matrix(f: &Framework) -> Result<RigidityMatrix> {
    let ix = f.graph().index();
    let points = f.points();
    let (col_of, ncols) = inner_columns(&ix.pinned);
    let matrix = row_block(&points, &col_of, &ix.edges, ncols);
    Ok(RigidityMatrix {
        matrix,
        edges: f.graph().edges().iter().cloned().collect(),
        columns: f.graph().inner().iter().cloned().collect(),
    })
}

/// Singular values in decreasing order with the matching right singular vectors
/// as columns of an `n x n` matrix.
pub(crate) struct RightSpectrum {
    pub sigma: Vec<f64>,
    pub v: DMatrix<f64>,
}

pub(crate) fn right_spectrum(a: &DMatrix<f64>) -> RightSpectrum {
    let (m, n) = a.shape();
    if n == 0 {
        return RightSpectrum { sigma: Vec::new(), v: DMatrix::zeros(0, 0) };
    }
    let padded;
    let a = if m < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        padded = p;
        &padded
    } else {
        a
    };
    let svd = a.clone().svd(false, true);
    let vt = svd.v_t.expect("requested V");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
    let mut v = DMatrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (k, &i) in order.iter().enumerate() {
        sigma.push(svd.singular_values[i]);
        v.set_column(k, &vt.row(i).transpose());
    }
    // Only min(m, n) values are genuine; the padding contributes exact zeros.
    sigma.truncate(m.min(n));
    RightSpectrum { sigma, v }
}

fn cutoff(sigma: &[f64], shape: (usize, usize), tol: &Tolerance) -> f64 {
    let max = sigma.first().copied().unwrap_or(0.0);
    tol.rank_rel * max * shape.0.max(shape.1) as f64
}

pub(crate) fn rank_of(a: &DMatrix<f64>, tol: &Tolerance) -> usize {
    let spec = right_spectrum(a);
    let c = cutoff(&spec.sigma, a.shape(), tol);
    spec.sigma.iter().filter(|&&s| s > c && s > 0.0).count()
}

/// Singular values of `a` in decreasing order.
pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    right_spectrum(a).sigma
}

/// Orthonormal basis of the null space of `a`, one vector per column, with
/// each vector's largest entry made positive.
pub(crate) fn null_space(a: &DMatrix<f64>, tol: &Tolerance) -> Vec<DVector<f64>> {
    let n = a.ncols();
    if n == 0 {
        return Vec::new();
    }
    let spec = right_spectrum(a);
    let c = cutoff(&spec.sigma, a.shape(), tol);
    let rank = spec.sigma.iter().filter(|&&s| s > c && s > 0.0).count();
    (rank..n).map(|k| canonical_sign(spec.v.column(k).into_owned())).collect()
}

pub(crate) fn canonical_sign(mut v: DVector<f64>) -> DVector<f64> {
    let big = v.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
    if big < 0.0 {
        v.neg_mut();
    }
    v
}

pub fn numeric_rank(m: &RigidityMatrix, tol: &Tolerance) -> usize {
    rank_of(&m.matrix, tol)
}

pub fn first_order_motions(f: &Framework, tol: &Tolerance) -> Result<Vec<Motion>> {
    let r = build_rigidity_matrix(f)?;
    Ok(null_space(&r.matrix, tol).iter().map(|v| Motion::from_vector(&r.columns, v)).collect())
}

pub fn self_stresses(f: &Framework, tol: &Tolerance) -> Result<Vec<SelfStress>> {
    let r = build_rigidity_matrix(f)?;
    let t = r.matrix.transpose();
    Ok(null_space(&t, tol).iter().map(|v| SelfStress::from_vector(&r.edges, v)).collect())
}

/// Motions of an unpinned framework orthogonal to translations and rotation.
pub fn nontrivial_motions(f: &Framework, tol: &Tolerance) -> Result<Vec<Motion>> {
    let r = build_rigidity_matrix(f)?;
    let kernel = null_space(&r.matrix, tol);
    if !f.graph().pins().is_empty() || kernel.is_empty() {
        return Ok(kernel.iter().map(|v| Motion::from_vector(&r.columns, v)).collect());
    }
    let n = r.columns.len();
    let points: Vec<Point> = f.points();
    let mut trivial = DMatrix::zeros(2 * n, 3);
    for (k, p) in points.iter().enumerate() {
        trivial[(2 * k, 0)] = 1.0;
        trivial[(2 * k + 1, 1)] = 1.0;
        trivial[(2 * k, 2)] = -p.y;
        trivial[(2 * k + 1, 2)] = p.x;
    }
    let q = trivial.clone().qr().q();
    let tr = rank_of(&trivial, tol);
    let q = q.columns(0, tr).into_owned();
    let k = DMatrix::from_columns(&kernel);
    let projected = &k - &q * (q.transpose() * &k);
    let svd = projected.svd(true, false);
    let u = svd.u.expect("requested U");
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    for i in idx {
        if svd.singular_values[i] > 0.5 {
            out.push(Motion::from_vector(&r.columns, &canonical_sign(u.column(i).into_owned())));
        }
    }
    Ok(out)
}

/// Largest equilibrium defect `|sum_j lambda_ij (p_i - p_j)|` over inner vertices.
pub fn equilibrium_residual(f: &Framework, s: &SelfStress) -> f64 {
    let mut force: BTreeMap<&VertexId, Point> =
        f.graph().inner().iter().map(|v| (v, Point::zeros())).collect();
    for e in f.graph().edges() {
        let (a, b) = (e.first(), e.second());
        let d = f.config().get(a).unwrap() - f.config().get(b).unwrap();
        let l = s.get(e);
        if let Some(fa) = force.get_mut(a) {
            *fa += l * d;
        }
        if let Some(fb) = force.get_mut(b) {
            *fb -= l * d;
        }
    }
    force.values().fold(0.0, |m, p| m.max(p.norm()))
}

/// Largest first-order defect `|(p_i - p_j).(v_i - v_j)|` over edges.
pub fn motion_residual(f: &Framework, m: &Motion) -> f64 {
    f.graph()
        .edges()
        .iter()
        .map(|e| {
            let d = f.config().get(e.first()).unwrap() - f.config().get(e.second()).unwrap();
            d.dot(&(m.get(e.first()) - m.get(e.second()))).abs()
        })
        .fold(0.0, f64::max)
}

/// Natural log of `|det|` and the sign of the determinant via LU with partial pivoting.
pub(crate) fn log_det(a: &DMatrix<f64>) -> (f64, f64) {
    if a.nrows() == 0 {
        return (1.0, 0.0);
    }
    let lu = a.clone().lu();
    let mut sign: f64 = lu.p().determinant();
    let u = lu.u();
    let mut log = 0.0;
    for k in 0..u.nrows() {
        let d = u[(k, k)];
        if d == 0.0 {
            return (0.0, f64::NEG_INFINITY);
        }
        sign *= d.signum();
        log += d.abs().ln();
    }
    (sign, log)
}

pub(crate) fn det(a: &DMatrix<f64>) -> f64 {
    let (sign, log) = log_det(a);
    sign * log.exp()
}

/// Determinant of the square pinned rigidity matrix.
pub fn pure_condition_value(f: &Framework) -> Result<f64> {
    let r = build_rigidity_matrix(f)?;
    if !r.is_square() {
        return Err(Error::NotSquare { rows: r.rows(), cols: r.cols() });
    }
    Ok(det(&r.matrix))
}

/// `(p_u - p_v).(v_u - v_v)`.
pub fn strain(f: &Framework, m: &Motion, pair: (&VertexId, &VertexId)) -> Result<f64> {
    let (u, v) = pair;
    let d = f.config().point(u)? - f.config().point(v)?;
    Ok(d.dot(&(m.get(u) - m.get(v))))
}

pub const SAMPLER_ATTEMPTS: usize = 64;

const GRID: f64 = (1u64 << 20) as f64;

/// A point with coordinates `k / 2^20` in `[-10, 10]`.
pub(crate) fn grid_point(rng: &mut impl Rng) -> Point {
    let span = 10 * (1i64 << 20);
    Point::new(
        rng.random_range(-span..=span) as f64 / GRID,
        rng.random_range(-span..=span) as f64 / GRID,
    )
}

pub(crate) fn sample_configuration(vertices: &[VertexId], rng: &mut impl Rng) -> Configuration {
    vertices.iter().map(|v| (v.clone(), grid_point(rng))).collect()
}

/// Whether `f` is generic as far as its rank and pure condition can tell.
pub(crate) fn looks_generic(f: &Framework, combinatorial_rank: usize) -> bool {
    let Ok(r) = build_rigidity_matrix(f) else { return false };
    let tol = Tolerance::default();
    if numeric_rank(&r, &tol) != combinatorial_rank {
        return false;
    }
    if r.is_square() && r.rows() > 0 {
        let hadamard: f64 = r.matrix.row_iter().map(|row| row.norm()).product();
        let d = det(&r.matrix).abs();
        if d.is_nan() || d <= 1e-10 * hadamard {
            return false;
        }
    }
    true
}

/// Seeded pseudorandom configuration, resampled until it is generic for `g`.
pub fn random_generic_configuration(g: &PinnedGraph, seed: u64) -> Result<Configuration> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    generic_configuration_with(g, &mut rng)
}

pub(crate) fn generic_configuration_with(
    g: &PinnedGraph,
    rng: &mut impl Rng,
) -> Result<Configuration> {
    let rank = pinned_generic_rank(g);
    let vertices = g.vertices();
    for _ in 0..SAMPLER_ATTEMPTS {
        let c = sample_configuration(&vertices, rng);
        let Ok(f) = Framework::new(g.clone(), c.clone()) else { continue };
        if looks_generic(&f, rank) {
            return Ok(c);
        }
    }
    Err(Error::RetryExhausted(SAMPLER_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use crate::model::pt;

    fn fw(g: PinnedGraph, pts: &[(&str, f64, f64)]) -> Framework {
        Framework::new(g, pts.iter().map(|&(v, x, y)| (v, pt(x, y))).collect()).unwrap()
    }

    fn k4_square() -> Framework {
        fw(k4(), &[("1", 0.0, 0.0), ("2", 1.0, 0.0), ("3", 0.0, 1.0), ("4", 1.0, 1.0)])
    }

    fn dyad_at(p2: (f64, f64)) -> Framework {
        fw(dyad(), &[("a", 0.0, 0.0), ("p1", 1.0, 0.0), ("p2", p2.0, p2.1)])
    }

    #[test]
    fn k4_matrix_follows_the_template() {
        let r = build_rigidity_matrix(&k4_square()).unwrap();
        assert_eq!(r.matrix.shape(), (6, 8));
        // Row for edge 1-2: (p1 - p2, p2 - p1) in the columns of 1 and 2.
        let row = r.edges.iter().position(|e| *e == Edge::new("1", "2")).unwrap();
        let expected = [-1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        for (c, x) in expected.iter().enumerate() {
            assert_eq!(r.matrix[(row, c)], *x);
        }
        let row = r.edges.iter().position(|e| *e == Edge::new("2", "3")).unwrap();
        let expected = [0.0, 0.0, 1.0, -1.0, -1.0, 1.0, 0.0, 0.0];
        for (c, x) in expected.iter().enumerate() {
            assert_eq!(r.matrix[(row, c)], *x);
        }
    }

    #[test]
    fn blocks_are_negatives() {
        let r = build_rigidity_matrix(&k4_square()).unwrap();
        for (row, e) in r.edges.iter().enumerate() {
            let i = r.columns.iter().position(|v| v == e.first()).unwrap();
            let j = r.columns.iter().position(|v| v == e.second()).unwrap();
            for k in 0..2 {
                assert_eq!(r.matrix[(row, 2 * i + k)], -r.matrix[(row, 2 * j + k)]);
            }
            let nonzero = (0..8).filter(|&c| r.matrix[(row, c)] != 0.0).count();
            assert!(nonzero <= 4);
        }
    }

    #[test]
    fn dyad_matrix_and_determinant() {
        let f = fw(dyad(), &[("a", 0.0, 0.0), ("p1", 1.0, 0.0), ("p2", 0.0, 1.0)]);
        let r = build_rigidity_matrix(&f).unwrap();
        assert_eq!(r.matrix, DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, -1.0]));
        assert_eq!(numeric_rank(&r, &Tolerance::default()), 2);
        assert!((pure_condition_value(&f).unwrap() - 1.0).abs() < 1e-15);
        assert!(first_order_motions(&f, &Tolerance::default()).unwrap().is_empty());
    }

    #[test]
    fn collinear_dyad_has_stress_and_motion() {
        let f = dyad_at((-1.0, 0.0));
        let tol = Tolerance::default();
        let m = first_order_motions(&f, &tol).unwrap();
        assert_eq!(m.len(), 1);
        let v = m[0].get(&"a".into());
        assert!(v.x.abs() < 1e-12 && (v.y - 1.0).abs() < 1e-12);
        let s = self_stresses(&f, &tol).unwrap();
        assert_eq!(s.len(), 1);
        let l: Vec<f64> = s[0].lambda.values().copied().collect();
        assert!((l[0] - l[1]).abs() < 1e-12 && l[0] > 0.5);
        assert_eq!(pure_condition_value(&f).unwrap(), 0.0);
    }

    #[test]
    fn k4_rank_and_stress() {
        let tol = Tolerance::default();
        let f = Framework::new(k4(), random_generic_configuration(&k4(), 3).unwrap()).unwrap();
        let r = build_rigidity_matrix(&f).unwrap();
        assert_eq!(numeric_rank(&r, &tol), 5);
        assert_eq!(self_stresses(&f, &tol).unwrap().len(), 1);
        assert_eq!(first_order_motions(&f, &tol).unwrap().len(), 3);
        assert!(nontrivial_motions(&f, &tol).unwrap().is_empty());
    }

    #[test]
    fn pinned_triangle_is_independent() {
        let g = PinnedGraph::new(["c"], ["a", "b"], [("a", "c"), ("b", "c")]).unwrap();
        let f = fw(g, &[("a", 0.0, 0.0), ("b", 2.0, 0.5), ("c", 0.7, 1.9)]);
        assert!(self_stresses(&f, &Tolerance::default()).unwrap().is_empty());
    }

    #[test]
    fn collinear_triangle_stress_is_full() {
        let f = fw(triangle(), &[("1", 0.0, 0.0), ("2", 1.0, 0.0), ("3", 3.0, 0.0)]);
        let s = self_stresses(&f, &Tolerance::default()).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s[0].is_full());
        assert!(equilibrium_residual(&f, &s[0]) < 1e-12);
        // The unpinned collinear triangle also has a nontrivial motion.
        assert_eq!(nontrivial_motions(&f, &Tolerance::default()).unwrap().len(), 1);
    }

    #[test]
    fn concurrent_triad_is_singular() {
        // Legs along lines through the origin.
        let f = fw(
            triad(),
            &[
                ("a", 1.0, 0.0),
                ("b", -0.5, 0.9),
                ("c", -0.4, -1.1),
                ("p1", 3.0, 0.0),
                ("p2", -1.5, 2.7),
                ("p3", -1.2, -3.3),
            ],
        );
        assert!(pure_condition_value(&f).unwrap().abs() < 1e-10);
        let r = build_rigidity_matrix(&f).unwrap();
        assert_eq!(numeric_rank(&r, &Tolerance::default()), 5);
    }

    #[test]
    fn fourbar_motion_and_strain() {
        let g = fourbar();
        let f = Framework::new(g.clone(), random_generic_configuration(&g, 7).unwrap()).unwrap();
        let tol = Tolerance::default();
        let m = first_order_motions(&f, &tol).unwrap();
        assert_eq!(m.len(), 1);
        assert!(m[0].moves_all());
        for e in g.edges() {
            assert!(strain(&f, &m[0], (e.first(), e.second())).unwrap().abs() < 1e-9);
        }
        let s = strain(&f, &m[0], (&"a".into(), &"p2".into())).unwrap();
        assert!(s.abs() > 1e-3);
        let zero = Motion::zero(g.inner().iter().cloned());
        assert_eq!(strain(&f, &zero, (&"a".into(), &"p2".into())).unwrap(), 0.0);
        assert!(strain(&f, &zero, (&"zz".into(), &"a".into())).is_err());
    }

    #[test]
    fn sampler_is_deterministic_and_generic() {
        let a = random_generic_configuration(&dyad(), 1).unwrap();
        let b = random_generic_configuration(&dyad(), 1).unwrap();
        assert_eq!(a, b);
        let f = Framework::new(dyad(), a).unwrap();
        assert!(pure_condition_value(&f).unwrap().abs() > 1e-6);
        for (_, p) in f.config().iter() {
            assert_eq!((p.x * GRID).fract(), 0.0);
            assert!(p.x.abs() <= 10.0 && p.y.abs() <= 10.0);
        }
    }

    #[test]
    fn sampler_gives_up_on_dependent_square_graphs() {
        let g = PinnedGraph::new(
            ["a", "b"],
            ["p1", "p2", "p3"],
            [("a", "p1"), ("a", "p2"), ("a", "p3"), ("a", "b")],
        )
        .unwrap();
        assert_eq!(random_generic_configuration(&g, 0), Err(Error::RetryExhausted(SAMPLER_ATTEMPTS)));
    }

    #[test]
    fn non_square_has_no_pure_condition() {
        let f = Framework::new(fourbar(), random_generic_configuration(&fourbar(), 0).unwrap()).unwrap();
        assert!(matches!(pure_condition_value(&f), Err(Error::NotSquare { rows: 3, cols: 4 })));
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        assert_eq!(rank_of(&DMatrix::zeros(3, 4), &Tolerance::default()), 0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn rank_nullity(seed in 0u64..1000, pick in 0usize..5) {
                let g = [dyad(), triad(), fourbar(), k4(), stacked_dyads()][pick].clone();
                let mut rng = ChaCha20Rng::seed_from_u64(seed);
                let c = sample_configuration(&g.vertices(), &mut rng);
                let Ok(f) = Framework::new(g.clone(), c) else { return Ok(()) };
                let tol = Tolerance::default();
                let s = self_stresses(&f, &tol).unwrap();
                let m = first_order_motions(&f, &tol).unwrap();
                prop_assert_eq!(s.len() as i64 - m.len() as i64, g.edge_count() as i64 - 2 * g.inner().len() as i64);
                for x in &s {
                    prop_assert!(equilibrium_residual(&f, x) < 1e-8 * f.config().diameter().max(1.0));
                }
                for x in &m {
                    prop_assert!(motion_residual(&f, x) < 1e-8 * f.config().diameter().max(1.0));
                }
            }

            #[test]
            fn determinant_bisection_finds_singular_point(seed in 0u64..200) {
                // Move the dyad's vertex along a segment across the line p1-p2.
                let mut rng = ChaCha20Rng::seed_from_u64(seed);
                let p1 = grid_point(&mut rng);
                let p2 = grid_point(&mut rng);
                let n = crate::model::rot90(p2 - p1);
                prop_assume!(n.norm() > 1e-3);
                let mid = (p1 + p2) * 0.5;
                let at = |t: f64| {
                    let a = mid + n * t + (p2 - p1) * 0.1;
                    let c: Configuration = [("a", a), ("p1", p1), ("p2", p2)].into_iter().collect();
                    pure_condition_value(&Framework::new(dyad(), c).unwrap()).unwrap()
                };
                let (mut lo, mut hi) = (-0.5, 0.7);
                prop_assert!(at(lo) * at(hi) < 0.0);
                for _ in 0..200 {
                    let m = 0.5 * (lo + hi);
                    if at(m) * at(lo) <= 0.0 { hi = m } else { lo = m }
                    if at(m).abs() <= 1e-10 { break; }
                }
                prop_assert!(at(0.5 * (lo + hi)).abs() <= 1e-10 || (hi - lo) < 1e-15);
            }
        }
    }
}
