//! Reciprocal diagrams, parallel drawings and Bow's notation.
//!
//! A reciprocal places one point per face of a planar embedding so that for
//! every edge `k` with left face `l`, right face `r` and endpoints
//! `tail -> head` (along dart `2k`):
//!
//! ```text
//! q_l - q_r = lambda_k (p_tail - p_head)
//! ```
//!
//! Equilibrium at every vertex is exactly the condition that these
//! increments close around each vertex, so any self-stress of an unpinned
//! framework has a reciprocal on any of its planar embeddings.

mod bow;
mod planar;

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::model::{cross, diameter, rot90, Configuration, Edge, Framework, Graph, Point};
use crate::numeric::{Motion, SelfStress};

pub use bow::{bow_insert_crossings, motions_transfer_check, BowedFramework, TransferReport};
pub use planar::{face_label, is_planar, planar_embed, twin, PlanarEmbedding};

/// The dual multigraph; dual edge `k` crosses primal edge `k`.
#[derive(Clone, Debug)]
pub struct DualGraph {
    pub graph: Graph,
    /// Primal edge index behind each dual edge (the identity, kept explicit).
    pub primal_edge: Vec<usize>,
}

pub fn dual_graph(e: &PlanarEmbedding) -> DualGraph {
    let d = e.dual();
    let primal_edge = (0..d.graph().edge_count()).collect();
    DualGraph { graph: d.graph().clone(), primal_edge }
}

/// Reciprocal of a framework under a self-stress.
#[derive(Clone, Debug)]
pub struct ReciprocalDiagram {
    /// Points of the faces, keyed by [`face_label`].
    pub dual_config: Configuration,
    /// The same points indexed by face.
    pub dual_points: Vec<Point>,
    pub embedding: PlanarEmbedding,
    pub stress: SelfStress,
    /// Global factor applied to the stress before drawing.
    pub scale: f64,
    pub closure_residual: f64,
}

impl ReciprocalDiagram {
    /// Dual edge `k` as a segment `(q_left, q_right)`.
    pub fn segment(&self, k: usize) -> (Point, Point) {
        let (l, r) = self.embedding.edge_faces(k);
        (self.dual_points[l], self.dual_points[r])
    }
}

/// Face points for the edge weights `lambda`, starting from `q_root = 0`.
/// Returns the points and the largest closure defect.
pub(crate) fn reciprocal_points(
    emb: &PlanarEmbedding,
    points: &[Point],
    lambda: &[f64],
    root: usize,
) -> (Vec<Point>, f64) {
    let g = emb.graph();
    let nf = emb.face_count();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nf];
    for k in 0..g.edge_count() {
        let (l, r) = emb.edge_faces(k);
        adj[l].push((k, r));
        adj[r].push((k, l));
    }
    let force = |k: usize| {
        let [a, b] = g.edges()[k];
        lambda[k] * (points[a] - points[b])
    };
    let mut q = vec![Point::zeros(); nf];
    let mut placed = vec![false; nf];
    placed[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(f) = queue.pop_front() {
        for &(k, h) in &adj[f] {
            if placed[h] {
                continue;
            }
            let (l, _) = emb.edge_faces(k);
            q[h] = if f == l { q[f] - force(k) } else { q[f] + force(k) };
            placed[h] = true;
            queue.push_back(h);
        }
    }
    let residual = (0..g.edge_count())
        .map(|k| {
            let (l, r) = emb.edge_faces(k);
            (q[l] - q[r] - force(k)).norm()
        })
        .fold(0.0, f64::max);
    (q, residual)
}

/// Closure bound: `1e-7` times the size of the diagram.
pub(crate) fn closure_bound(q: &[Point], points: &[Point], lambda: &[f64], edges: &[[usize; 2]]) -> f64 {
    let forces = edges
        .iter()
        .zip(lambda)
        .map(|(&[a, b], &l)| (l * (points[a] - points[b])).norm())
        .fold(0.0, f64::max);
    1e-7 * diameter(q.iter()).max(forces)
}

fn check_embeds(f: &Framework, e: &PlanarEmbedding) -> Result<()> {
    let u = f.graph().underlying();
    if u.labels() != e.graph().labels() || u.edges() != e.graph().edges() {
        return Err(Error::InvalidGraph("embedding does not match the framework's graph".into()));
    }
    Ok(())
}

/// Builds the reciprocal of `f` under `s` by walking a spanning tree of the
/// dual from the outer face, placed at the origin.
pub fn reciprocal_from_stress(
    f: &Framework,
    s: &SelfStress,
    e: &PlanarEmbedding,
) -> Result<ReciprocalDiagram> {
    check_embeds(f, e)?;
    let points = f.points();
    let edges: Vec<Edge> = f.graph().edges().iter().cloned().collect();
    let lambda: Vec<f64> = edges.iter().map(|x| s.get(x)).collect();
    let (q, residual) = reciprocal_points(e, &points, &lambda, e.outer_face());
    let bound = closure_bound(&q, &points, &lambda, e.graph().edges());
    if residual > bound {
        return Err(Error::ClosureFailure { residual, bound });
    }
    Ok(ReciprocalDiagram {
        dual_config: q.iter().enumerate().map(|(i, p)| (face_label(i), *p)).collect(),
        dual_points: q,
        embedding: e.clone(),
        stress: s.clone(),
        scale: 1.0,
        closure_residual: residual,
    })
}

/// Reads the stress off a reciprocal: `lambda = (q_l - q_r).(p_i - p_j) / |p_i - p_j|^2`.
pub fn stress_from_reciprocal(f: &Framework, r: &ReciprocalDiagram) -> Result<SelfStress> {
    check_embeds(f, &r.embedding)?;
    let points = f.points();
    let scale = diameter(r.dual_points.iter()).max(1e-300);
    let mut lambda = std::collections::BTreeMap::new();
    for (k, edge) in f.graph().edges().iter().enumerate() {
        let [a, b] = r.embedding.graph().edges()[k];
        let d = points[a] - points[b];
        let len2 = d.norm_squared();
        if len2 == 0.0 {
            return Err(Error::ZeroLength(edge.clone()));
        }
        let (ql, qr) = r.segment(k);
        let w = ql - qr;
        if cross(w, d).abs() > 1e-8 * scale * d.norm() {
            return Err(Error::NotParallel(edge.clone()));
        }
        lambda.insert(edge.clone(), w.dot(&d) / len2);
    }
    Ok(SelfStress { lambda })
}

/// A redrawing of `base` with every edge parallel to the original.
#[derive(Clone, Debug)]
pub struct ParallelDrawing {
    pub points: Configuration,
    pub base: Framework,
}

impl ParallelDrawing {
    /// Checks parallelism of every edge.
    pub fn new(base: Framework, points: Configuration) -> Result<Self> {
        let scale = base.config().diameter().max(diameter(points.iter().map(|(_, p)| p)));
        for e in base.graph().edges() {
            let d = base.config().point(e.first())? - base.config().point(e.second())?;
            let w = points.point(e.first())? - points.point(e.second())?;
            if cross(d, w).abs() > 1e-8 * scale * scale.max(1e-300) {
                return Err(Error::NotParallel(e.clone()));
            }
        }
        Ok(ParallelDrawing { points, base })
    }
}

/// `v_i = rot90(p'_i - p_i)` on the inner vertices.
pub fn motion_from_parallel_drawing(f: &Framework, pd: &ParallelDrawing) -> Result<Motion> {
    let scale = f.config().diameter().max(1.0);
    for v in f.graph().pins() {
        if (pd.points.point(v)? - f.config().point(v)?).norm() > 1e-9 * scale {
            return Err(Error::PinMoved(v.clone()));
        }
    }
    let mut velocity = std::collections::BTreeMap::new();
    for v in f.graph().inner() {
        velocity.insert(v.clone(), rot90(pd.points.point(v)? - f.config().point(v)?));
    }
    Ok(Motion { velocity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counts::is_rigidity_circuit;
    use crate::model::{fixtures, pt, PinnedGraph};
    use crate::numeric::{equilibrium_residual, motion_residual, random_generic_configuration, self_stresses, Tolerance};

    fn fw(g: PinnedGraph, pts: &[(&str, f64, f64)]) -> Framework {
        Framework::new(g, pts.iter().map(|&(v, x, y)| (v, pt(x, y))).collect()).unwrap()
    }

    fn collinear_triangle() -> Framework {
        fw(fixtures::triangle(), &[("1", 0.0, 0.0), ("2", 1.0, 0.0), ("3", 3.0, 0.0)])
    }

    #[test]
    fn collinear_triangle_reciprocal() {
        let f = collinear_triangle();
        let s = self_stresses(&f, &Tolerance::default()).unwrap().remove(0);
        let e = planar_embed(&f.graph().underlying()).unwrap();
        let r = reciprocal_from_stress(&f, &s, &e).unwrap();
        assert_eq!(r.dual_points.len(), 2);
        for k in 0..3 {
            let (a, b) = r.segment(k);
            assert!((a - b).y.abs() < 1e-12);
            assert!((a - b).x.abs() > 1e-3);
        }
        let back = stress_from_reciprocal(&f, &r).unwrap();
        for (e, l) in &s.lambda {
            assert!((back.get(e) - l).abs() < 1e-12);
        }
    }

    #[test]
    fn k4_reciprocal_is_parallel() {
        let g = fixtures::k4();
        let f = Framework::new(g.clone(), random_generic_configuration(&g, 11).unwrap()).unwrap();
        let s = self_stresses(&f, &Tolerance::default()).unwrap().remove(0);
        let e = planar_embed(&g.underlying()).unwrap();
        let r = reciprocal_from_stress(&f, &s, &e).unwrap();
        assert_eq!(r.dual_points.len(), 4);
        let pts = f.points();
        for (k, &[a, b]) in e.graph().edges().iter().enumerate() {
            let (ql, qr) = r.segment(k);
            let d = pts[a] - pts[b];
            assert!(cross(ql - qr, d).abs() < 1e-9 * d.norm() * (ql - qr).norm().max(1.0));
            assert!((ql - qr).norm() > 1e-6);
        }
    }

    #[test]
    fn zero_stress_collapses_the_diagram() {
        let f = collinear_triangle();
        let zero = SelfStress { lambda: f.graph().edges().iter().map(|e| (e.clone(), 0.0)).collect() };
        let e = planar_embed(&f.graph().underlying()).unwrap();
        let r = reciprocal_from_stress(&f, &zero, &e).unwrap();
        assert!(r.dual_points.iter().all(|q| q.norm() == 0.0));
        let back = stress_from_reciprocal(&f, &r).unwrap();
        assert!(back.lambda.values().all(|&l| l == 0.0));
    }

    #[test]
    fn non_stress_fails_to_close() {
        let g = fixtures::k4();
        let f = Framework::new(g.clone(), random_generic_configuration(&g, 2).unwrap()).unwrap();
        let bogus = SelfStress { lambda: g.edges().iter().map(|e| (e.clone(), 1.0)).collect() };
        let e = planar_embed(&g.underlying()).unwrap();
        assert!(matches!(reciprocal_from_stress(&f, &bogus, &e), Err(Error::ClosureFailure { .. })));
    }

    #[test]
    fn perturbed_dual_is_not_parallel() {
        let f = collinear_triangle();
        let s = self_stresses(&f, &Tolerance::default()).unwrap().remove(0);
        let e = planar_embed(&f.graph().underlying()).unwrap();
        let mut r = reciprocal_from_stress(&f, &s, &e).unwrap();
        r.dual_points[1].y += 0.1;
        assert!(matches!(stress_from_reciprocal(&f, &r), Err(Error::NotParallel(_))));
    }

    #[test]
    fn equilibrium_of_recovered_stress() {
        let g = fixtures::k4();
        let f = Framework::new(g.clone(), random_generic_configuration(&g, 5).unwrap()).unwrap();
        let s = self_stresses(&f, &Tolerance::default()).unwrap().remove(0);
        let e = planar_embed(&g.underlying()).unwrap();
        let r = reciprocal_from_stress(&f, &s, &e).unwrap();
        let back = stress_from_reciprocal(&f, &r).unwrap();
        assert!(equilibrium_residual(&f, &back) < 1e-10);
    }

    #[test]
    fn dual_of_planar_circuit_is_circuit() {
        let d = dual_graph(&planar_embed(&fixtures::k4().underlying()).unwrap());
        assert!(is_rigidity_circuit(&d.graph, false));
        // The triad's contraction is K4 as well; its dual is again a circuit.
        let c = crate::model::contract_pins(&fixtures::triad()).unwrap();
        let d = dual_graph(&planar_embed(&c.graph).unwrap());
        assert!(is_rigidity_circuit(&d.graph, true));
        // Doubled edge (dyad): its dual is a doubled edge too.
        let c = crate::model::contract_pins(&fixtures::dyad()).unwrap();
        let d = dual_graph(&planar_embed(&c.graph).unwrap());
        assert!(is_rigidity_circuit(&d.graph, true));
    }

    #[test]
    fn parallel_drawings_give_motions() {
        let g = fixtures::k4();
        let f = Framework::new(g.clone(), random_generic_configuration(&g, 1).unwrap()).unwrap();
        let same = ParallelDrawing::new(f.clone(), f.config().clone()).unwrap();
        let m = motion_from_parallel_drawing(&f, &same).unwrap();
        assert_eq!(m.max_speed(), 0.0);
        let doubled: Configuration = f.config().iter().map(|(v, p)| (v.clone(), 2.0 * p)).collect();
        let pd = ParallelDrawing::new(f.clone(), doubled).unwrap();
        let m = motion_from_parallel_drawing(&f, &pd).unwrap();
        assert!(motion_residual(&f, &m) < 1e-12);
        assert!(m.max_speed() > 0.1);
    }

    #[test]
    fn parallel_drawing_must_fix_pins() {
        let f = fw(fixtures::dyad(), &[("a", 0.0, 0.0), ("p1", 1.0, 0.0), ("p2", -1.0, 0.0)]);
        let moved: Configuration =
            [("a", pt(0.0, 0.0)), ("p1", pt(2.0, 0.0)), ("p2", pt(-1.0, 0.0))].into_iter().collect();
        let pd = ParallelDrawing::new(f.clone(), moved).unwrap();
        assert_eq!(motion_from_parallel_drawing(&f, &pd), Err(Error::PinMoved("p1".into())));
        let skew: Configuration =
            [("a", pt(0.0, 1.0)), ("p1", pt(1.0, 0.0)), ("p2", pt(-1.0, 0.0))].into_iter().collect();
        assert!(matches!(ParallelDrawing::new(f, skew), Err(Error::NotParallel(_))));
    }
}
