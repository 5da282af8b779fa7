//! Singular realizations of Assur graphs carrying a unique self-stress that is
//! nonzero on every bar and a unique first-order motion of every inner vertex.
//!
//! The constructive route works on the dual. With the pins contracted to one
//! vertex `p*` the graph is a planar rigidity circuit `G*`; a generic drawing
//! of its dual carries a full stress. The pins are separated again by a ground
//! triangulation (a fan), whose dual is a 3-valent tree placed in the dual face
//! of `p*`. The tree adds one more stress; mixing the two and taking
//! reciprocals yields the configuration, and a second mixture yields a
//! parallel drawing whose quarter-turned displacement is the motion.
//!
//! Combinatorially everything hangs off one embedding of `H`, the graph with
//! an extra hub vertex joined to every pin:
//!
//! * the hub rotation fixes the pin order `q_1, ..., q_m`;
//! * `G^` (pins separated plus the ground fan) replaces the hub dart at each
//!   pin by its ground darts, ordered by cyclic offset in the pin order;
//! * `G*` contracts the star: the rotation at `p*` concatenates each pin's
//!   rotation after its hub dart.

use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::assur::{is_assur, sufficiency_report};
use crate::counts::pinned_framework_conditions;
use crate::error::{Error, Result};
use crate::model::{contract_pins, Configuration, Edge, Framework, Graph, Indexed, PinnedGraph, Point, VertexId};
use crate::numeric::{
    equilibrium_residual, first_order_motions,
    inner_columns, log_det, motion_residual, null_space, row_block, sample_configuration,
    self_stresses, Motion, SelfStress, Tolerance, LEAK_THRESHOLD,
};
use crate::reciprocal::{
    bow_insert_crossings, closure_bound, planar_embed, reciprocal_points, PlanarEmbedding,
};

/// Configurations tried before a construction gives up.
pub const CONSTRUCTION_ATTEMPTS: usize = 24;

/// A realization with one-dimensional stress and motion spaces.
#[derive(Clone, Debug)]
pub struct SingularCertificate {
    pub framework: Framework,
    pub stress: SelfStress,
    pub motion: Motion,
    /// Largest equilibrium defect of `stress`, relative to its size.
    pub stress_residual: f64,
    /// Largest first-order defect of `motion`, relative to its size.
    pub motion_residual: f64,
    /// `min |lambda| / max |lambda|`.
    pub stress_margin: f64,
    /// `min speed / max speed` over inner vertices.
    pub motion_margin: f64,
    /// The configuration with all pins at one point (the reciprocal of the dual
    /// circuit stress), when produced by the construction.
    pub coincident_pins: Option<Configuration>,
    /// The parallel drawing behind `motion`, when produced by the construction.
    pub parallel_drawing: Option<Configuration>,
    pub attempts: usize,
}

fn hub_label(ix: &Indexed) -> VertexId {
    let mut name = String::from("hub");
    while ix.position.contains_key(&VertexId::new(name.clone())) {
        name.push('\'');
    }
    VertexId::new(name)
}

/// Combinatorial scaffolding shared by every attempt.
struct Skeleton {
    ix: Indexed,
    /// Pin vertex indices in hub order.
    hub_order: Vec<usize>,
    ghat: PlanarEmbedding,
    /// Number of bars of the pinned graph; ground edges follow them in `ghat`.
    bars: usize,
    gstar: PlanarEmbedding,
    /// `ghat` face of every `gstar` face.
    face_map: Vec<usize>,
    dual: PlanarEmbedding,
    /// Dual face enclosing each vertex of `ghat`.
    dual_face_of_vertex: Vec<usize>,
    fan_faces: Vec<usize>,
    /// Faces of `ghat` met by the ground polygon sides: the leaves of the dual tree.
    leaves: Vec<usize>,
}

/// Rotation of `H` (bars first, then one star edge per pin in pin index order).
fn h_from_planar_embed(ix: &Indexed) -> Result<(Graph, Vec<Vec<usize>>)> {
    let hub = ix.ids.len();
    let mut labels = ix.ids.clone();
    labels.push(hub_label(ix));
    let mut edges = ix.edges.clone();
    for (i, &p) in ix.pinned.iter().enumerate() {
        if p {
            edges.push([hub, i]);
        }
    }
    let h = Graph::new(labels, edges)?;
    let emb = planar_embed(&h)?;
    Ok((h, emb.rotations().to_vec()))
}

/// Rotation of `H` from a given embedding of the contracted graph: the bars at
/// `p*` must come in one contiguous run per pin.
fn h_from_contracted(g: &PinnedGraph, ix: &Indexed, e: &PlanarEmbedding) -> Result<(Graph, Vec<Vec<usize>>)> {
    let c = contract_pins(g)?;
    if e.graph() != &c.graph {
        return Err(Error::InvalidGraph("embedding is not an embedding of the contracted graph".into()));
    }
    let hub = ix.ids.len();
    let mut labels = ix.ids.clone();
    labels.push(hub_label(ix));
    let mut edges = ix.edges.clone();
    let pins: Vec<usize> = (0..ix.ids.len()).filter(|&i| ix.pinned[i]).collect();
    let star_edge: BTreeMap<usize, usize> =
        pins.iter().enumerate().map(|(k, &p)| (p, ix.edges.len() + k)).collect();
    for &p in &pins {
        edges.push([hub, p]);
    }
    let h = Graph::new(labels, edges)?;
    // Pin carried by each dart leaving p*.
    let pin_of = |d: usize| ix.edges[d / 2].iter().copied().find(|&v| ix.pinned[v]).unwrap();
    let at_ground = e.rotation(c.ground);
    let mut runs: Vec<(usize, Vec<usize>)> = Vec::new();
    for &d in at_ground {
        let p = pin_of(d);
        match runs.last_mut() {
            Some((q, run)) if *q == p => run.push(d),
            _ => runs.push((p, vec![d])),
        }
    }
    if runs.len() > 1 && runs[0].0 == runs.last().unwrap().0 {
        let (_, tail) = runs.pop().unwrap();
        let mut head = tail;
        head.extend(runs[0].1.iter().copied());
        runs[0].1 = head;
    }
    let distinct: BTreeSet<usize> = runs.iter().map(|r| r.0).collect();
    if distinct.len() != runs.len() {
        return Err(Error::Construction(
            "the ground face is not a single face: pin bars interleave around p*".into(),
        ));
    }
    // Vertex indices of the contraction: inner vertices in order, then p*.
    let inner_pos: BTreeMap<usize, usize> =
        (0..ix.ids.len()).filter(|&i| !ix.pinned[i]).enumerate().map(|(k, i)| (i, k)).collect();
    let mut rotation = vec![Vec::new(); ix.ids.len() + 1];
    for (&i, &k) in &inner_pos {
        rotation[i] = e.rotation(k).to_vec();
    }
    for (p, run) in &runs {
        // Star edge [hub, p]: dart 2s leaves the hub, 2s + 1 leaves the pin.
        let s = star_edge[p];
        rotation[*p].push(2 * s + 1);
        rotation[*p].extend(run.iter().copied());
        rotation[hub].push(2 * s);
    }
    for &p in &pins {
        if !runs.iter().any(|r| r.0 == p) {
            let s = star_edge[&p];
            rotation[p].push(2 * s + 1);
            rotation[hub].push(2 * s);
        }
    }
    Ok((h, rotation))
}

fn skeleton(g: &PinnedGraph, given: Option<&PlanarEmbedding>) -> Result<Skeleton> {
    let ix = g.index();
    let bars = ix.edges.len();
    let (h, hrot) = match given {
        Some(e) => h_from_contracted(g, &ix, e)?,
        None => h_from_planar_embed(&ix)?,
    };
    let hemb = PlanarEmbedding::from_rotation(h.clone(), hrot)
        .map_err(|e| Error::Construction(format!("hub embedding is invalid: {e}")))?;
    let hub = ix.ids.len();
    let hub_order: Vec<usize> = hemb.rotation(hub).iter().map(|&d| hemb.head(d)).collect();
    let m = hub_order.len();
    let slot: BTreeMap<usize, usize> = hub_order.iter().enumerate().map(|(k, &p)| (p, k)).collect();

    // Ground fan in hub order: a path q1..qm and chords from q1.
    let mut ground: Vec<[usize; 2]> = Vec::new();
    for k in 0..m.saturating_sub(1) {
        ground.push([hub_order[k], hub_order[k + 1]]);
    }
    for k in 2..m {
        ground.push([hub_order[0], hub_order[k]]);
    }
    let mut ghat_edges = ix.edges.clone();
    ghat_edges.extend(ground.iter().copied());
    let ghat_graph = Graph::new(ix.ids.clone(), ghat_edges)?;
    let mut rot: Vec<Vec<usize>> = Vec::with_capacity(hub);
    for v in 0..hub {
        let r = hemb.rotation(v);
        if !ix.pinned[v] {
            rot.push(r.to_vec());
            continue;
        }
        let k = slot[&v];
        let mut ground_darts: Vec<(usize, usize)> = Vec::new();
        for (j, &[a, b]) in ground.iter().enumerate() {
            let e = bars + j;
            if a == v {
                ground_darts.push(((slot[&b] + m - k) % m, 2 * e));
            } else if b == v {
                ground_darts.push(((slot[&a] + m - k) % m, 2 * e + 1));
            }
        }
        ground_darts.sort_unstable();
        let mut out = Vec::new();
        for &d in r {
            if d / 2 >= bars {
                out.extend(ground_darts.iter().map(|x| x.1));
            } else {
                out.push(d);
            }
        }
        rot.push(out);
    }
    let ghat = PlanarEmbedding::from_rotation(ghat_graph, rot)
        .map_err(|e| Error::Construction(format!("ground triangulation is not planar: {e}")))?;

    // The contraction: inner vertices keep their rotation, p* concatenates pins.
    let inner_idx: Vec<usize> = (0..hub).filter(|&i| !ix.pinned[i]).collect();
    let pstar = inner_idx.len();
    let c = contract_pins(g)?;
    let mut grot: Vec<Vec<usize>> = inner_idx.iter().map(|&i| hemb.rotation(i).to_vec()).collect();
    let mut at_pstar = Vec::new();
    for &q in &hub_order {
        let r = hemb.rotation(q);
        let start = r.iter().position(|&d| d / 2 >= bars).unwrap();
        for t in 1..r.len() {
            at_pstar.push(r[(start + t) % r.len()]);
        }
    }
    grot.push(at_pstar);
    debug_assert_eq!(grot.len(), pstar + 1);
    let gstar = PlanarEmbedding::from_rotation(c.graph, grot)
        .map_err(|e| Error::Construction(format!("contracted embedding is invalid: {e}")))?;
    let face_map: Vec<usize> = gstar.faces().iter().map(|f| ghat.face_of(f[0])).collect();

    let dual = ghat.dual();
    let mut dual_face_of_vertex = vec![usize::MAX; hub];
    for (f, v) in ghat.dual_face_vertices(&dual).into_iter().enumerate() {
        dual_face_of_vertex[v] = f;
    }
    let fan_faces: Vec<usize> = (0..ghat.face_count())
        .filter(|&f| ghat.faces()[f].iter().all(|&d| d / 2 >= bars))
        .collect();
    let mut leaves: BTreeSet<usize> = BTreeSet::new();
    for j in 0..ground.len() {
        let (l, r) = ghat.edge_faces(bars + j);
        for f in [l, r] {
            if !fan_faces.contains(&f) {
                leaves.insert(f);
            }
        }
    }
    Ok(Skeleton {
        ix,
        hub_order,
        ghat,
        bars,
        gstar,
        face_map,
        dual,
        dual_face_of_vertex,
        fan_faces,
        leaves: leaves.into_iter().collect(),
    })
}

/// One run of the dual pipeline.
struct Realization {
    /// Positions of the vertices of the pinned graph.
    x: Vec<Point>,
    x_parallel: Vec<Point>,
    coincident: Vec<Point>,
}

fn dual_stresses(sk: &Skeleton, q: &[Point], edges: std::ops::Range<usize>) -> Vec<DVector<f64>> {
    let all: Vec<[usize; 2]> = sk.dual.graph().edges()[edges].to_vec();
    let cols: Vec<Option<usize>> = (0..q.len()).map(Some).collect();
    let m = row_block(q, &cols, &all, q.len());
    null_space(&m.transpose(), &Tolerance::default())
}

fn full(v: &DVector<f64>) -> bool {
    let max = v.amax();
    max > 0.0 && v.iter().all(|x| x.abs() > LEAK_THRESHOLD * max)
}

fn margin(v: &DVector<f64>) -> f64 {
    let max = v.amax();
    if max == 0.0 {
        0.0
    } else {
        v.iter().fold(f64::INFINITY, |m, x| m.min(x.abs())) / max
    }
}

/// Runs the dual pipeline once. `base` gives the dual points of the faces of
/// the contracted graph (indexed by `gstar` face).
fn realize(sk: &Skeleton, base: &[Point], rng: &mut impl Rng) -> Result<Realization> {
    let nf = sk.ghat.face_count();
    let mut q = vec![Point::zeros(); nf];
    for (f, &p) in base.iter().enumerate() {
        q[sk.face_map[f]] = p;
    }
    let leaf_pts: Vec<Point> = sk.leaves.iter().map(|&f| q[f]).collect();
    let centroid = leaf_pts.iter().fold(Point::zeros(), |a, p| a + p) / leaf_pts.len().max(1) as f64;
    let spread = crate::model::diameter(leaf_pts.iter()).max(1e-3);
    for &f in &sk.fan_faces {
        let jitter = Point::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        q[f] = centroid + 0.25 * spread * jitter;
    }

    let circuit = dual_stresses(sk, &q, 0..sk.bars);
    if circuit.len() != 1 || !full(&circuit[0]) {
        return Err(Error::Construction(format!(
            "dual circuit stress has dimension {} or vanishes on a bar",
            circuit.len()
        )));
    }
    let total = sk.dual.graph().edge_count();
    let space = dual_stresses(sk, &q, 0..total);
    if space.len() != 2 {
        return Err(Error::Construction(format!(
            "dual with tree has stress dimension {}, expected 2",
            space.len()
        )));
    }
    let mut ext = DVector::zeros(total);
    ext.rows_mut(0, sk.bars).copy_from(&circuit[0]);
    ext /= ext.norm();
    let new = space
        .iter()
        .map(|s| s - &ext * ext.dot(s))
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap();
    let new = &new / new.norm();
    let tree = new.rows(sk.bars, total - sk.bars).into_owned();
    if !full(&tree) || tree.amax() < LEAK_THRESHOLD * new.amax() {
        return Err(Error::Construction("tree stress vanishes on a ground edge".into()));
    }

    // Mixing: start at 1e-2 of the circuit stress, halve, keep the best margin.
    let mut best: Option<(f64, DVector<f64>)> = None;
    let mut eps = 1e-2 * ext.amax();
    for _ in 0..12 {
        let mix = &ext + &new * eps;
        let m = margin(&mix);
        if best.as_ref().is_none_or(|(bm, _)| m > *bm) {
            best = Some((m, mix));
        }
        eps *= 0.5;
    }
    let (best_margin, lambda) = best.unwrap();
    if best_margin <= LEAK_THRESHOLD {
        return Err(Error::Construction("mixed stress has a vanishing entry".into()));
    }

    let root = sk.dual_face_of_vertex[sk.hub_order[0]];
    let reciprocal = |lam: &DVector<f64>| -> Result<Vec<Point>> {
        let lam: Vec<f64> = lam.iter().copied().collect();
        let (pts, residual) = reciprocal_points(&sk.dual, &q, &lam, root);
        let bound = closure_bound(&pts, &q, &lam, sk.dual.graph().edges());
        if residual > bound {
            return Err(Error::ClosureFailure { residual, bound });
        }
        Ok(sk.dual_face_of_vertex.iter().map(|&f| pts[f]).collect())
    };
    let x = reciprocal(&lambda)?;
    let coincident = reciprocal(&ext)?;
    let x_parallel = reciprocal(&(&lambda + &ext * 0.1))?;
    Ok(Realization { x, x_parallel, coincident })
}

fn scale_to(points: &[Point], target: f64) -> (Point, f64) {
    let c = points.iter().fold(Point::zeros(), |a, p| a + p) / points.len().max(1) as f64;
    let d = crate::model::diameter(points.iter());
    (c, if d > 0.0 { target / d } else { 1.0 })
}

/// Numerical check of a candidate configuration.
fn certify(
    g: &PinnedGraph,
    config: Configuration,
    coincident: Option<Configuration>,
    parallel: Option<Configuration>,
    attempts: usize,
) -> Result<SingularCertificate> {
    let f = Framework::new(g.clone(), config)?;
    let tol = Tolerance::default();
    let report = sufficiency_report(&f, &tol)?;
    if !report.certified {
        return Err(Error::Construction(format!(
            "stress dimension {}, motion dimension {}, margins {:.2e}/{:.2e}",
            report.stress_dim, report.motion_dim, report.stress_margin, report.motion_margin
        )));
    }
    let stress = self_stresses(&f, &tol)?.remove(0);
    let motion = first_order_motions(&f, &tol)?.remove(0);
    let scale = f.config().diameter().max(1.0);
    let stress_residual = equilibrium_residual(&f, &stress) / (stress.max_abs() * scale);
    let motion_residual = motion_residual(&f, &motion) / (motion.max_speed() * scale);
    if stress_residual > tol.residual_abs || motion_residual > tol.residual_abs {
        return Err(Error::Construction("certificate residuals too large".into()));
    }
    if !is_assur(g) {
        return Err(Error::Internal("certified configuration for a non-Assur graph".into()));
    }
    Ok(SingularCertificate {
        stress_margin: report.stress_margin,
        motion_margin: report.motion_margin,
        framework: f,
        stress,
        motion,
        stress_residual,
        motion_residual,
        coincident_pins: coincident,
        parallel_drawing: parallel,
        attempts,
    })
}

/// Turns a realization into configurations on the vertices of `keep`, scaled
/// to diameter 10 about the centroid.
fn configurations(
    sk: &Skeleton,
    r: &Realization,
    keep: &PinnedGraph,
) -> (Configuration, Configuration, Configuration) {
    let (c, s) = scale_to(&r.x, 10.0);
    let map = |pts: &[Point], shift: Point| -> Configuration {
        sk.ix
            .ids
            .iter()
            .zip(pts)
            .filter(|(v, _)| keep.contains(v))
            .map(|(v, p)| (v.clone(), (p - shift) * s))
            .collect()
    };
    (map(&r.x, c), map(&r.x_parallel, c), map(&r.coincident, c))
}

fn drop_isolated_pins(g: &PinnedGraph) -> Result<PinnedGraph> {
    let pins = g.pins().iter().filter(|p| g.degree(p) > 0).cloned().collect();
    PinnedGraph::from_parts(g.inner().clone(), pins, g.edges().clone())
}

fn check_assur(g: &PinnedGraph) -> Result<PinnedGraph> {
    if !is_assur(g) {
        return Err(Error::NotAssur);
    }
    drop_isolated_pins(g)
}

/// Builds a singular realization of a planar Assur graph by the dual
/// construction. `embedding`, when given, embeds the pin contraction.
pub fn construct_singular_planar(
    g: &PinnedGraph,
    embedding: Option<&PlanarEmbedding>,
    seed: u64,
) -> Result<SingularCertificate> {
    let g = check_assur(g)?;
    let sk = skeleton(&g, embedding)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let nfaces = sk.gstar.face_count();
    let mut last = Error::Construction("no attempt made".into());
    for attempt in 1..=CONSTRUCTION_ATTEMPTS {
        let base: Vec<Point> = (0..nfaces).map(|_| crate::numeric::grid_point(&mut rng)).collect();
        let r = match realize(&sk, &base, &mut rng) {
            Ok(r) => r,
            Err(e) => {
                last = e;
                continue;
            }
        };
        let (x, par, coin) = configurations(&sk, &r, &g);
        match certify(&g, x, Some(coin), Some(par), attempt) {
            Ok(c) => return Ok(c),
            Err(Error::Internal(m)) => return Err(Error::Internal(m)),
            Err(e) => last = e,
        }
    }
    log::debug!("planar construction failed: {last}");
    Err(Error::RetryExhausted(CONSTRUCTION_ATTEMPTS))
}

/// Builds a singular realization when the pin contraction is not planar.
/// `sketch` lists bar pairs drawn crossing; inserting those crossings must
/// make the contraction planar.
pub fn construct_singular_nonplanar(
    g: &PinnedGraph,
    sketch: &[(Edge, Edge)],
    seed: u64,
) -> Result<SingularCertificate> {
    if sketch.is_empty() {
        return construct_singular_planar(g, None, seed);
    }
    let g = check_assur(g)?;
    let merged = |v: &VertexId| if g.is_pin(v) { None } else { Some(v.clone()) };
    for (e, f) in sketch {
        for x in [e, f] {
            if !g.edges().contains(x) {
                return Err(Error::InvalidGraph(format!("sketch names unknown bar {x}")));
            }
        }
        let shared = [e.first(), e.second()]
            .iter()
            .any(|u| [f.first(), f.second()].iter().any(|w| merged(u) == merged(w)));
        if shared {
            return Err(Error::BadCrossing(
                e.clone(),
                f.clone(),
                "bars meet once the pins are merged".into(),
            ));
        }
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut last = Error::Construction("no attempt made".into());
    for attempt in 1..=CONSTRUCTION_ATTEMPTS {
        // Generic circuit drawing with every pin at one point.
        let mut inner: Vec<VertexId> = g.inner().iter().cloned().collect();
        inner.push(VertexId::new("\u{0}ground"));
        let sample = sample_configuration(&inner, &mut rng);
        let ground = sample.get(inner.last().unwrap()).unwrap();
        let mut cfg: Configuration =
            g.inner().iter().map(|v| (v.clone(), sample.get(v).unwrap())).collect();
        for p in g.pins() {
            cfg.insert(p.clone(), ground);
        }
        let Ok(f) = Framework::new(g.clone(), cfg) else { continue };
        let bowed = match bow_insert_crossings(&f, sketch) {
            Ok(b) => b,
            Err(e @ Error::BadCrossing(..)) => {
                last = e;
                continue;
            }
            Err(e) => return Err(e),
        };
        let gb = bowed.framework.graph().clone();
        let sk = skeleton(&gb, None)?;
        // Stress of the crossed circuit with the pins merged.
        let bix = &sk.ix;
        let pts: Vec<Point> = bix.ids.iter().map(|v| bowed.framework.config().get(v).unwrap()).collect();
        let cols: Vec<Option<usize>> = (0..pts.len()).map(Some).collect();
        let mut merged_pts = pts.clone();
        let pstar_idx: Vec<usize> = (0..pts.len()).filter(|&i| bix.pinned[i]).collect();
        for &i in &pstar_idx {
            merged_pts[i] = ground;
        }
        // Unpinned stress with all pins identified: sum the pin columns.
        let m = row_block(&merged_pts, &cols, &bix.edges, pts.len());
        let mut reduced = nalgebra::DMatrix::zeros(m.nrows(), 2 * (pts.len() - pstar_idx.len() + 1));
        let mut next = 0;
        let mut target = vec![0; pts.len()];
        for (i, t) in target.iter_mut().enumerate() {
            if !bix.pinned[i] {
                *t = next;
                next += 1;
            }
        }
        for &i in &pstar_idx {
            target[i] = next;
        }
        for r in 0..m.nrows() {
            for (i, &t) in target.iter().enumerate() {
                reduced[(r, 2 * t)] += m[(r, 2 * i)];
                reduced[(r, 2 * t + 1)] += m[(r, 2 * i + 1)];
            }
        }
        let stresses = null_space(&reduced.transpose(), &Tolerance::default());
        if stresses.len() != 1 || !full(&stresses[0]) {
            last = Error::Construction("crossed circuit stress is not unique and full".into());
            continue;
        }
        let lambda: Vec<f64> = stresses[0].iter().copied().collect();
        // Reciprocal of the crossed circuit gives the dual points.
        let gpts: Vec<Point> = {
            let mut v: Vec<Point> = (0..pts.len()).filter(|&i| !bix.pinned[i]).map(|i| pts[i]).collect();
            v.push(ground);
            v
        };
        let (base, residual) = reciprocal_points(&sk.gstar, &gpts, &lambda, 0);
        let bound = closure_bound(&base, &gpts, &lambda, sk.gstar.graph().edges());
        if residual > bound {
            last = Error::ClosureFailure { residual, bound };
            continue;
        }
        let r = match realize(&sk, &base, &mut rng) {
            Ok(r) => r,
            Err(e) => {
                last = e;
                continue;
            }
        };
        let (x, par, coin) = configurations(&sk, &r, &g);
        match certify(&g, x, Some(coin), Some(par), attempt) {
            Ok(c) => return Ok(c),
            Err(Error::Internal(m)) => return Err(Error::Internal(m)),
            Err(e) => last = e,
        }
    }
    log::debug!("non-planar construction failed: {last}");
    Err(Error::RetryExhausted(CONSTRUCTION_ATTEMPTS))
}

/// Scale-free pure condition: the determinant divided by the product of row norms.
fn normalized_det(g: &PinnedGraph, pts: &[Point]) -> f64 {
    let ix = g.index();
    let (cols, n) = inner_columns(&ix.pinned);
    let m = row_block(pts, &cols, &ix.edges, n);
    let norms: f64 = m.row_iter().map(|r| r.norm()).product();
    if norms == 0.0 {
        return 0.0;
    }
    let (sign, log) = log_det(&m);
    sign * (log - norms.ln()).exp()
}

fn normalize(pts: &mut [Point]) {
    let (c, s) = scale_to(pts, 1.0);
    for p in pts.iter_mut() {
        *p = (*p - c) * s;
    }
}

/// Searches for a singular configuration by Newton projection onto the zero
/// set of the pure condition, polished by bisection. Returns `None` when no
/// start in the budget yields a certificate.
pub fn numeric_singular_search(
    g: &PinnedGraph,
    seed: u64,
    iters: usize,
) -> Result<Option<SingularCertificate>> {
    let counts = pinned_framework_conditions(g);
    if !counts.satisfied {
        return Err(Error::NotIsostatic(counts.witness.map(|w| w.violated).unwrap_or_default()));
    }
    let ix = g.index();
    let n = ix.ids.len();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let h = 1e-7;
    for attempt in 1..=iters {
        let mut pts: Vec<Point> = (0..n).map(|_| crate::numeric::grid_point(&mut rng)).collect();
        normalize(&mut pts);
        let det_at = |p: &[Point]| normalized_det(g, p);
        let mut converged = false;
        for _ in 0..200 {
            let f0 = det_at(&pts);
            if f0.abs() <= 1e-13 {
                converged = true;
                break;
            }
            let mut grad = vec![Point::zeros(); n];
            for i in 0..n {
                for k in 0..2 {
                    let mut a = pts.clone();
                    let mut b = pts.clone();
                    a[i][k] += h;
                    b[i][k] -= h;
                    grad[i][k] = (det_at(&a) - det_at(&b)) / (2.0 * h);
                }
            }
            let g2: f64 = grad.iter().map(|v| v.norm_squared()).sum();
            if g2 < 1e-24 {
                break;
            }
            let mut t = f0 / g2;
            let step_norm = t.abs() * g2.sqrt();
            if step_norm > 0.1 {
                t *= 0.1 / step_norm;
            }
            let next: Vec<Point> = pts.iter().zip(&grad).map(|(p, d)| p - d * t).collect();
            // Bisection once the sign flips along the step.
            if det_at(&next).signum() != f0.signum() && f0.abs() < 1e-6 {
                let (mut lo, mut hi) = (pts.clone(), next);
                for _ in 0..200 {
                    let mid: Vec<Point> = lo.iter().zip(&hi).map(|(a, b)| (a + b) * 0.5).collect();
                    let fm = det_at(&mid);
                    if fm.abs() <= 1e-13 {
                        lo = mid;
                        break;
                    }
                    if fm.signum() == det_at(&lo).signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                pts = lo;
                normalize(&mut pts);
                converged = det_at(&pts).abs() <= 1e-10;
                break;
            }
            pts = next;
            normalize(&mut pts);
        }
        if !converged {
            continue;
        }
        let shortest = ix.edges.iter().map(|&[a, b]| (pts[a] - pts[b]).norm()).fold(f64::INFINITY, f64::min);
        if shortest < 1e-3 {
            continue;
        }
        let config: Configuration = ix.ids.iter().cloned().zip(pts.iter().copied()).collect();
        if let Ok(c) = certify(g, config, None, None, attempt) {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Motion data at a stressed configuration, for the open question of whether
/// a full stress forces every bar to have a moving end.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub motion_dim: usize,
    pub one_dimensional: bool,
    /// Every bar has at least one inner endpoint with nonzero velocity.
    pub every_bar_moves: bool,
    /// Bars whose ends are both at rest.
    pub resting_bars: Vec<Edge>,
}

impl ConjectureReport {
    pub fn consistent(&self) -> bool {
        self.one_dimensional && self.every_bar_moves
    }
}

pub fn conjecture_probe(f: &Framework, tol: &Tolerance) -> Result<ConjectureReport> {
    if !is_assur(f.graph()) {
        return Err(Error::NotAssur);
    }
    let stresses = self_stresses(f, tol)?;
    if stresses.len() != 1 || !stresses[0].is_full() {
        return Err(Error::InvalidConfiguration(
            "probe needs a unique stress that is nonzero on every bar".into(),
        ));
    }
    let motions = first_order_motions(f, tol)?;
    let cols: Vec<VertexId> = f.graph().inner().iter().cloned().collect();
    let speed: BTreeMap<&VertexId, f64> = cols
        .iter()
        .map(|v| (v, motions.iter().map(|m| m.get(v).norm_squared()).sum::<f64>().sqrt()))
        .collect();
    let max = speed.values().copied().fold(0.0, f64::max);
    let moving = |v: &VertexId| speed.get(v).is_some_and(|&s| s > LEAK_THRESHOLD * max);
    let resting_bars: Vec<Edge> = f
        .graph()
        .edges()
        .iter()
        .filter(|e| !moving(e.first()) && !moving(e.second()))
        .cloned()
        .collect();
    Ok(ConjectureReport {
        motion_dim: motions.len(),
        one_dimensional: motions.len() == 1,
        every_bar_moves: resting_bars.is_empty(),
        resting_bars,
    })
}

/// Running tally of probe outcomes.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ConjectureStats {
    pub runs: usize,
    pub one_dimensional: usize,
    pub every_bar_moves: usize,
    pub consistent: usize,
}

impl ConjectureStats {
    pub fn record(&mut self, r: &ConjectureReport) {
        self.runs += 1;
        self.one_dimensional += r.one_dimensional as usize;
        self.every_bar_moves += r.every_bar_moves as usize;
        self.consistent += r.consistent() as usize;
    }
}

/// Motion of a certificate recomputed from its parallel drawing.
pub fn certificate_motion(cert: &SingularCertificate) -> Option<Motion> {
    let par = cert.parallel_drawing.as_ref()?;
    let f = &cert.framework;
    let velocity = f
        .graph()
        .inner()
        .iter()
        .map(|v| (v.clone(), crate::model::rot90(par.get(v).unwrap() - f.config().get(v).unwrap())))
        .collect();
    Some(Motion { velocity })
}
