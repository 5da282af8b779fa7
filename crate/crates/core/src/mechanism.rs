//! One-degree-of-freedom linkages with a driver: replacement and insertion
//! rules, activity, path following and dead-end probing.
//!
//! Every driver acts through a virtual bar: the piston pair itself, `ac` for
//! an angle at `b`, and `a p_j` for an angle at a pin. Angle drivers set the
//! virtual length through the law of cosines, so one Newton core on squared
//! lengths serves all three kinds.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::assur::is_assur;
use crate::counts::{generic_dof, is_pinned_isostatic, pinned_generic_rank};
use crate::error::{Error, Result};
use crate::model::{cross, Configuration, Edge, Framework, Indexed, PinnedGraph, Point, VertexId};
use crate::numeric::{inner_columns, log_det, null_space, rank_of, row_block, Tolerance, LEAK_THRESHOLD};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DriverKind {
    Piston { a: VertexId, b: VertexId },
    /// Angle `abc` at the inner vertex `b`.
    InnerAngle { a: VertexId, b: VertexId, c: VertexId },
    /// Angle `a pivot reference` at the pin `pivot`, measured from the ground line.
    PinAngle { a: VertexId, pivot: VertexId, reference: VertexId },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Driver {
    #[serde(flatten)]
    pub kind: DriverKind,
    /// Commanded rate of the driven length or angle.
    pub rate: f64,
}

impl Driver {
    pub fn piston(a: impl Into<VertexId>, b: impl Into<VertexId>, rate: f64) -> Self {
        Driver { kind: DriverKind::Piston { a: a.into(), b: b.into() }, rate }
    }

    pub fn inner_angle(a: impl Into<VertexId>, b: impl Into<VertexId>, c: impl Into<VertexId>, rate: f64) -> Self {
        Driver { kind: DriverKind::InnerAngle { a: a.into(), b: b.into(), c: c.into() }, rate }
    }

    pub fn pin_angle(
        a: impl Into<VertexId>,
        pivot: impl Into<VertexId>,
        reference: impl Into<VertexId>,
        rate: f64,
    ) -> Self {
        Driver {
            kind: DriverKind::PinAngle { a: a.into(), pivot: pivot.into(), reference: reference.into() },
            rate,
        }
    }

    pub fn vertices(&self) -> Vec<&VertexId> {
        match &self.kind {
            DriverKind::Piston { a, b } => vec![a, b],
            DriverKind::InnerAngle { a, b, c } => vec![a, b, c],
            DriverKind::PinAngle { a, pivot, reference } => vec![a, pivot, reference],
        }
    }

    /// The pair whose distance the driver controls.
    pub fn virtual_bar(&self) -> Edge {
        match &self.kind {
            DriverKind::Piston { a, b } => Edge::new(a.clone(), b.clone()),
            DriverKind::InnerAngle { a, c, .. } => Edge::new(a.clone(), c.clone()),
            DriverKind::PinAngle { a, reference, .. } => Edge::new(a.clone(), reference.clone()),
        }
    }

    fn is_angle(&self) -> bool {
        !matches!(self.kind, DriverKind::Piston { .. })
    }

    /// Apex and arm ends of an angle driver.
    fn angle_parts(&self) -> Option<(&VertexId, &VertexId, &VertexId)> {
        match &self.kind {
            DriverKind::Piston { .. } => None,
            DriverKind::InnerAngle { a, b, c } => Some((b, a, c)),
            DriverKind::PinAngle { a, pivot, reference } => Some((pivot, a, reference)),
        }
    }

    /// Driven length, or signed angle in `(-pi, pi]` from the first arm to the second.
    pub fn parameter(&self, c: &Configuration) -> Result<f64> {
        match self.angle_parts() {
            None => {
                let e = self.virtual_bar();
                Ok((c.point(e.first())? - c.point(e.second())?).norm())
            }
            Some((apex, u, w)) => {
                let o = c.point(apex)?;
                let (du, dw) = (c.point(u)? - o, c.point(w)? - o);
                Ok(cross(du, dw).atan2(du.dot(&dw)))
            }
        }
    }

    fn check(&self, g: &PinnedGraph) -> Result<()> {
        for v in self.vertices() {
            if !g.contains(v) {
                return Err(Error::UnknownVertex(v.clone()));
            }
        }
        let distinct: BTreeSet<_> = self.vertices().into_iter().collect();
        if distinct.len() != self.vertices().len() {
            return Err(Error::Driver("driver vertices must be distinct".into()));
        }
        match &self.kind {
            DriverKind::Piston { a, b } => {
                if g.is_pin(a) && g.is_pin(b) {
                    return Err(Error::Driver("piston between two pins".into()));
                }
            }
            DriverKind::InnerAngle { a, b, c } => {
                if !g.is_inner(b) {
                    return Err(Error::Driver(format!("angle vertex `{b}` is not inner")));
                }
                if !g.has_edge(a, b) || !g.has_edge(b, c) {
                    return Err(Error::Driver(format!("angle {a}{b}{c} needs bars {a}{b} and {b}{c}")));
                }
            }
            DriverKind::PinAngle { a, pivot, reference } => {
                if !g.is_inner(a) || !g.is_pin(pivot) || !g.is_pin(reference) {
                    return Err(Error::Driver("pin angle needs an inner vertex and two pins".into()));
                }
                if !g.has_edge(a, pivot) {
                    return Err(Error::Driver(format!("pin angle needs bar {a}{pivot}")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Linkage {
    graph: PinnedGraph,
    driver: Driver,
}

impl Linkage {
    /// Validates an independent one-degree-of-freedom graph and its driver.
    pub fn new(graph: PinnedGraph, driver: Driver) -> Result<Self> {
        driver.check(&graph)?;
        let dof = generic_dof(&graph);
        if dof != 1 || pinned_generic_rank(&graph) != graph.edge_count() {
            return Err(Error::Driver(format!(
                "linkage must be independent with one degree of freedom (has {dof})"
            )));
        }
        Ok(Linkage { graph, driver })
    }

    pub fn graph(&self) -> &PinnedGraph {
        &self.graph
    }

    pub fn driver(&self) -> &Driver {
        &self.driver
    }
}

/// Applies one replacement rule without checking degrees of freedom.
fn replace_one(g: &PinnedGraph, d: &Driver) -> Result<PinnedGraph> {
    match &d.kind {
        DriverKind::Piston { a, b } => {
            if g.has_edge(a, b) {
                return Err(Error::Driver(format!("piston on existing bar {}", Edge::new(a.clone(), b.clone()))));
            }
            g.with_edge(Edge::new(a.clone(), b.clone()))
        }
        DriverKind::InnerAngle { a, b, c } => {
            if g.has_edge(a, c) {
                return Err(Error::Driver(format!("angle brace {} already present", Edge::new(a.clone(), c.clone()))));
            }
            let braced = g.with_edge(Edge::new(a.clone(), c.clone()))?;
            if g.degree(b) == 2 {
                braced.without_vertex(b)
            } else {
                Ok(braced)
            }
        }
        DriverKind::PinAngle { a, .. } => g.pin_vertex(a),
    }
}

/// The graph with the driver replaced by a bar (or pin).
pub fn replace_driver(l: &Linkage) -> Result<PinnedGraph> {
    replace_one(&l.graph, &l.driver)
}

/// The four ways of turning a bar or pin into a driver.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InsertionSpec {
    /// Remove `bar` and drive its length.
    Piston { bar: Edge },
    /// Remove `bar` of a triangle and drive the angle at `apex`.
    TriangleAngle { bar: Edge, apex: VertexId },
    /// Remove `bar = ac` and drive the angle at a new 2-valent vertex.
    TwoValentAngle { bar: Edge, vertex: VertexId },
    /// Make `pin` inner with a single bar to `pivot`; drive the angle to `reference`.
    PinDemotion { pin: VertexId, pivot: VertexId, reference: VertexId },
}

fn fresh_id(g: &PinnedGraph, base: String) -> VertexId {
    let mut id = VertexId::new(base);
    while g.contains(&id) {
        id = VertexId::new(format!("{id}'"));
    }
    id
}

pub fn insert_driver(g: &PinnedGraph, spec: &InsertionSpec) -> Result<Linkage> {
    if !is_assur(g) {
        if is_pinned_isostatic(g) {
            log::warn!("inserting a driver into an isostatic graph that is not Assur");
        } else {
            return Err(Error::NotIsostatic("driver insertion needs an isostatic graph".into()));
        }
    }
    let need_bar = |e: &Edge| -> Result<()> {
        if g.edges().contains(e) {
            Ok(())
        } else {
            Err(Error::InvalidGraph(format!("bar {e} not present")))
        }
    };
    let (graph, driver) = match spec {
        InsertionSpec::Piston { bar } => {
            need_bar(bar)?;
            (g.without_edge(bar)?, Driver::piston(bar.first().clone(), bar.second().clone(), 1.0))
        }
        InsertionSpec::TriangleAngle { bar, apex } => {
            need_bar(bar)?;
            let (a, c) = (bar.first(), bar.second());
            if !g.has_edge(a, apex) || !g.has_edge(apex, c) {
                return Err(Error::InvalidGraph(format!("{a}{apex}{c} is not a triangle")));
            }
            (g.without_edge(bar)?, Driver::inner_angle(a.clone(), apex.clone(), c.clone(), 1.0))
        }
        InsertionSpec::TwoValentAngle { bar, vertex } => {
            need_bar(bar)?;
            if g.contains(vertex) {
                return Err(Error::InvalidGraph(format!("vertex `{vertex}` already exists")));
            }
            let (a, c) = (bar.first().clone(), bar.second().clone());
            let mut inner = g.inner().clone();
            inner.insert(vertex.clone());
            let mut edges = g.edges().clone();
            edges.remove(bar);
            edges.insert(Edge::new(a.clone(), vertex.clone()));
            edges.insert(Edge::new(vertex.clone(), c.clone()));
            let h = PinnedGraph::from_parts(inner, g.pins().clone(), edges)?;
            (h, Driver::inner_angle(a, vertex.clone(), c, 1.0))
        }
        InsertionSpec::PinDemotion { pin, pivot, reference } => {
            if g.pins().len() < 3 {
                return Err(Error::Driver("pin demotion needs at least three pins".into()));
            }
            for p in [pin, pivot, reference] {
                if !g.is_pin(p) {
                    return Err(Error::InvalidGraph(format!("`{p}` is not a pin")));
                }
            }
            if pin == pivot || pin == reference || pivot == reference {
                return Err(Error::Driver("pin demotion needs three distinct pins".into()));
            }
            let mut inner = g.inner().clone();
            let mut pins = g.pins().clone();
            pins.remove(pin);
            inner.insert(pin.clone());
            let mut edges = g.edges().clone();
            edges.insert(Edge::new(pin.clone(), pivot.clone()));
            let h = PinnedGraph::from_parts(inner, pins, edges)?;
            (h, Driver::pin_angle(pin.clone(), pivot.clone(), reference.clone(), 1.0))
        }
    };
    Linkage::new(graph, driver)
}

/// Rejects a pin demotion whose demoted pin is collinear with two other pins.
pub fn check_demotion_geometry(g: &PinnedGraph, spec: &InsertionSpec, c: &Configuration) -> Result<()> {
    let InsertionSpec::PinDemotion { pin, .. } = spec else { return Ok(()) };
    let p = c.point(pin)?;
    let others: Vec<Point> = g.pins().iter().filter(|q| *q != pin).map(|q| c.point(q)).collect::<Result<_>>()?;
    let scale = c.diameter().max(f64::MIN_POSITIVE);
    for i in 0..others.len() {
        for j in i + 1..others.len() {
            if cross(others[i] - p, others[j] - p).abs() <= 1e-9 * scale * scale {
                return Err(Error::InvalidConfiguration(format!(
                    "demoted pin `{pin}` is collinear with two other pins"
                )));
            }
        }
    }
    Ok(())
}

/// Every legal insertion into an Assur graph.
pub fn enumerate_insertions(g: &PinnedGraph) -> Result<Vec<InsertionSpec>> {
    if !is_assur(g) {
        return Err(Error::NotAssur);
    }
    let mut out = Vec::new();
    for e in g.edges() {
        out.push(InsertionSpec::Piston { bar: e.clone() });
    }
    // Triangles on three inner vertices; the apex must keep a third bar so
    // that replacement adds the brace rather than removing the apex.
    let inner: Vec<&VertexId> = g.inner().iter().collect();
    for (i, a) in inner.iter().enumerate() {
        for (j, b) in inner.iter().enumerate().skip(i + 1) {
            for c in inner.iter().skip(j + 1) {
                if g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c) {
                    for (apex, u, w) in [(b, a, c), (a, b, c), (c, a, b)] {
                        if g.degree(apex) >= 3 {
                            out.push(InsertionSpec::TriangleAngle {
                                bar: Edge::new((*u).clone(), (*w).clone()),
                                apex: (*apex).clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    for e in g.edges() {
        let vertex = fresh_id(g, format!("{}_{}", e.first(), e.second()));
        out.push(InsertionSpec::TwoValentAngle { bar: e.clone(), vertex });
    }
    if g.pins().len() >= 3 {
        for p in g.pins() {
            let mut rest = g.pins().iter().filter(|q| *q != p);
            let pivot = rest.next().unwrap().clone();
            let reference = rest.next().unwrap().clone();
            out.push(InsertionSpec::PinDemotion { pin: p.clone(), pivot, reference });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct InsertionTally {
    pub pistons: usize,
    pub triangle_angles: usize,
    pub two_valent_angles: usize,
    pub pin_angles: usize,
}

pub fn tally(specs: &[InsertionSpec]) -> InsertionTally {
    let mut t = InsertionTally::default();
    for s in specs {
        match s {
            InsertionSpec::Piston { .. } => t.pistons += 1,
            InsertionSpec::TriangleAngle { .. } => t.triangle_angles += 1,
            InsertionSpec::TwoValentAngle { .. } => t.two_valent_angles += 1,
            InsertionSpec::PinDemotion { .. } => t.pin_angles += 1,
        }
    }
    t
}

/// Whether all drivers together leave an isostatic graph. Replacement bars
/// inserted twice are a conflict.
pub fn drivers_independent(g: &PinnedGraph, drivers: &[Driver]) -> Result<bool> {
    let mut current = g.clone();
    let mut inserted: BTreeSet<Edge> = BTreeSet::new();
    for d in drivers {
        d.check(g)?;
        if !matches!(d.kind, DriverKind::PinAngle { .. }) {
            let bar = d.virtual_bar();
            if !inserted.insert(bar.clone()) {
                return Err(Error::DriverConflict(bar));
            }
        }
        current = replace_one(&current, d)?;
    }
    Ok(is_pinned_isostatic(&current))
}

/// The replaced graph at the linkage's coordinates, minus a removed 2-valent vertex.
pub fn replaced_framework(l: &Linkage, c: &Configuration) -> Result<Framework> {
    let g = replace_driver(l)?;
    let config = g.vertices().into_iter().map(|v| c.point(&v).map(|p| (v, p))).collect::<Result<_>>()?;
    Framework::new(g, config)
}

/// Bars plus the virtual driver bar, indexed over the linkage's vertices.
struct System {
    ix: Indexed,
    cols: Vec<Option<usize>>,
    ncols: usize,
    /// Bars, then the virtual bar last.
    rows: Vec<[usize; 2]>,
    /// Squared bar lengths to hold.
    lengths_sq: Vec<f64>,
    /// Arm lengths of an angle driver.
    arms: Option<(f64, f64)>,
    angle: bool,
    diameter: f64,
}

impl System {
    fn new(l: &Linkage, c: &Configuration) -> Result<(Self, Vec<Point>)> {
        let f = Framework::new(l.graph.clone(), c.clone())?;
        let ix = l.graph.index();
        let pts = f.points();
        let (cols, ncols) = inner_columns(&ix.pinned);
        let vb = l.driver.virtual_bar();
        let mut rows = ix.edges.clone();
        rows.push([ix.position[vb.first()], ix.position[vb.second()]]);
        let lengths_sq = ix.edges.iter().map(|&[a, b]| (pts[a] - pts[b]).norm_squared()).collect();
        let arms = match l.driver.angle_parts() {
            None => None,
            Some((apex, u, w)) => {
                let o = c.point(apex)?;
                Some(((c.point(u)? - o).norm(), (c.point(w)? - o).norm()))
            }
        };
        let diameter = c.diameter().max(f64::MIN_POSITIVE);
        let sys = System { ix, cols, ncols, rows, lengths_sq, arms, angle: l.driver.is_angle(), diameter };
        Ok((sys, pts))
    }

    fn target_sq(&self, t: f64) -> f64 {
        match self.arms {
            None => t * t,
            Some((r1, r2)) => r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * t.cos(),
        }
    }

    fn matrix(&self, pts: &[Point]) -> DMatrix<f64> {
        row_block(pts, &self.cols, &self.rows, self.ncols)
    }

    /// Constraint values `|p_u - p_v|^2 - L^2`, halved.
    fn residual(&self, pts: &[Point], t: f64) -> DVector<f64> {
        let n = self.rows.len();
        DVector::from_fn(n, |k, _| {
            let [a, b] = self.rows[k];
            let target = if k + 1 == n { self.target_sq(t) } else { self.lengths_sq[k] };
            0.5 * ((pts[a] - pts[b]).norm_squared() - target)
        })
    }

    fn converged(&self, r: &DVector<f64>, t: f64) -> bool {
        let n = r.len();
        let floor = 1e-6 * self.diameter * self.diameter;
        (0..n).all(|k| {
            let scale = if k + 1 == n { self.target_sq(t) } else { self.lengths_sq[k] };
            r[k].abs() <= 5e-14 * scale.max(floor)
        })
    }

    fn apply(&self, pts: &[Point], delta: &DVector<f64>) -> Vec<Point> {
        let mut out = pts.to_vec();
        for (i, c) in self.cols.iter().enumerate() {
            if let Some(c) = c {
                out[i] += Point::new(delta[2 * c], delta[2 * c + 1]);
            }
        }
        out
    }

    /// Newton on the square system; `pinv` switches to a least-squares step
    /// that tolerates singular Jacobians.
    fn newton(&self, start: &[Point], t: f64, pinv: bool) -> Option<Vec<Point>> {
        let mut pts = start.to_vec();
        let iterations = if pinv { 60 } else { 30 };
        for _ in 0..iterations {
            let r = self.residual(&pts, t);
            if self.converged(&r, t) {
                return Some(pts);
            }
            let m = self.matrix(&pts);
            let delta = if pinv {
                m.svd(true, true).solve(&(-&r), 1e-12 * self.diameter).ok()?
            } else {
                m.lu().solve(&(-&r))?
            };
            if !delta.iter().all(|x| x.is_finite()) || delta.norm() > self.diameter {
                return None;
            }
            pts = self.apply(&pts, &delta);
        }
        let r = self.residual(&pts, t);
        self.converged(&r, t).then_some(pts)
    }

    fn min_step(&self) -> f64 {
        if self.angle {
            1e-6
        } else {
            1e-6 * self.diameter
        }
    }

    fn config(&self, pts: &[Point]) -> Configuration {
        self.ix.ids.iter().cloned().zip(pts.iter().copied()).collect()
    }
}

/// Cokernel dimension of the system matrix: the stress dimension of the replaced graph.
fn stress_dim(m: &DMatrix<f64>, tol: &Tolerance) -> usize {
    m.nrows() - rank_of(m, tol)
}

/// Whether unit strain on the driver bar is reachable with every bar held.
pub fn is_active(l: &Linkage, c: &Configuration, tol: &Tolerance) -> Result<bool> {
    let (sys, pts) = System::new(l, c)?;
    let m = sys.matrix(&pts);
    let mut e = DVector::zeros(m.nrows());
    e[m.nrows() - 1] = 1.0;
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let cut = tol.rank_rel * smax * m.nrows().max(m.ncols()) as f64;
    let x = svd.solve(&e, cut).map_err(|s| Error::Internal(s.into()))?;
    Ok((&m * x - e).norm() <= LEAK_THRESHOLD)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    SingularCrossing,
    DeadEnd,
    StepFailure,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Event {
    pub index: usize,
    pub kind: EventKind,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub config: Configuration,
    /// Driven length or angle.
    pub parameter: f64,
    pub pure_condition: f64,
    pub stress_dim: usize,
    pub min_singular: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub events: Vec<Event>,
}

impl Trajectory {
    /// Largest relative change of any bar length from the first sample.
    pub fn max_length_drift(&self, g: &PinnedGraph) -> f64 {
        let Some(first) = self.samples.first() else { return 0.0 };
        let len = |c: &Configuration, e: &Edge| (c.get(e.first()).unwrap() - c.get(e.second()).unwrap()).norm();
        self.samples
            .iter()
            .flat_map(|s| g.edges().iter().map(move |e| (s, e)))
            .map(|(s, e)| {
                let l0 = len(&first.config, e);
                (len(&s.config, e) - l0).abs() / l0
            })
            .fold(0.0, f64::max)
    }
}

fn sample(sys: &System, pts: &[Point], t: f64, tol: &Tolerance) -> Sample {
    let m = sys.matrix(pts);
    let (sign, log) = log_det(&m);
    let sv = m.clone().singular_values();
    Sample {
        config: sys.config(pts),
        parameter: t,
        pure_condition: sign * log.exp(),
        stress_dim: stress_dim(&m, tol),
        min_singular: sv.min(),
    }
}

/// Follows the linkage for `n` steps of `step * rate` in the driver
/// parameter, halving steps on corrector failure.
pub fn drive(l: &Linkage, c0: &Configuration, step: f64, n: usize) -> Result<Trajectory> {
    let tol = Tolerance::default();
    let (sys, mut pts) = System::new(l, c0)?;
    if !is_active(l, c0, &tol)? {
        return Err(Error::Driver("driver is not active at the start configuration".into()));
    }
    let mut t = l.driver.parameter(c0)?;
    let mut samples = vec![sample(&sys, &pts, t, &tol)];
    let mut events = Vec::new();
    let full = step * l.driver.rate;
    for _ in 0..n {
        let goal = t + full;
        let mut h = full;
        let mut failed = false;
        while (goal - t).abs() > 1e-15 * goal.abs().max(1.0) {
            let dt = if (goal - t).abs() < h.abs() { goal - t } else { h };
            match sys.newton(&pts, t + dt, false) {
                Some(next) => {
                    pts = next;
                    t += dt;
                    h = (h * 2.0).clamp(-full.abs(), full.abs());
                }
                None => {
                    h *= 0.5;
                    if h.abs() < sys.min_step() {
                        failed = true;
                        break;
                    }
                }
            }
        }
        let s = sample(&sys, &pts, t, &tol);
        let prev = samples.last().unwrap().pure_condition;
        let crossing = prev != 0.0 && s.pure_condition != 0.0 && prev.signum() != s.pure_condition.signum();
        if !failed || (t - samples.last().unwrap().parameter).abs() > 0.0 {
            samples.push(s);
            if crossing {
                events.push(Event { index: samples.len() - 1, kind: EventKind::SingularCrossing });
            }
        }
        if failed {
            let m = sys.matrix(&pts);
            let sv = m.singular_values();
            let near_singular = sv.min() <= 1e-2 * sv.max();
            let kind = if near_singular { EventKind::DeadEnd } else { EventKind::StepFailure };
            events.push(Event { index: samples.len() - 1, kind });
            break;
        }
    }
    Ok(Trajectory { samples, events })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeadEndClass {
    NoEvidence,
    SingularButPassable,
    DeadEndCandidate,
}

/// Evidence for a dead end. The classification is a numerical proxy: a stress
/// is necessary for a dead end but never sufficient.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeadEndReport {
    pub stress_dim: usize,
    pub active: bool,
    pub forward: bool,
    pub backward: bool,
    pub class: DeadEndClass,
}

/// Tries to reach parameter `t` from `pts`, seeding Newton along the
/// near-kernel directions as well, and staying close to the start.
fn reachable(sys: &System, pts: &[Point], t: f64, delta: f64) -> bool {
    let m = sys.matrix(pts);
    let svd = m.svd(false, true);
    let vt = svd.v_t.unwrap();
    let k = svd.singular_values.imin();
    let kernel = vt.row(k).transpose();
    let length_step = if sys.angle { delta * sys.diameter } else { delta };
    let s0 = (length_step * sys.diameter).sqrt();
    let mut seeds = vec![pts.to_vec()];
    for f in [0.25, 1.0, 4.0, -0.25, -1.0, -4.0] {
        seeds.push(sys.apply(pts, &(&kernel * (f * s0))));
    }
    seeds.iter().any(|seed| {
        sys.newton(seed, t, true).is_some_and(|q| {
            let moved = q.iter().zip(pts).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            moved <= 20.0 * s0 + 10.0 * length_step
        })
    })
}

pub fn detect_dead_end(l: &Linkage, c: &Configuration, tol: &Tolerance) -> Result<DeadEndReport> {
    let (sys, pts) = System::new(l, c)?;
    let m = sys.matrix(&pts);
    let stress_dim = stress_dim(&m, tol);
    let active = is_active(l, c, tol)?;
    let t = l.driver.parameter(c)?;
    let delta = if sys.angle { 1e-4 } else { 1e-4 * sys.diameter };
    let forward = reachable(&sys, &pts, t + delta, delta);
    let backward = reachable(&sys, &pts, t - delta, delta);
    let class = if stress_dim == 0 {
        DeadEndClass::NoEvidence
    } else if forward && backward {
        DeadEndClass::SingularButPassable
    } else {
        DeadEndClass::DeadEndCandidate
    };
    Ok(DeadEndReport { stress_dim, active, forward, backward, class })
}

/// Normalizes an angle to `(-pi, pi]`.
pub fn wrap_angle(t: f64) -> f64 {
    let r = (t + PI).rem_euclid(2.0 * PI) - PI;
    if r == -PI {
        PI
    } else {
        r
    }
}

/// Basis of first-order motions of the linkage at `c` (pins fixed).
pub fn linkage_motions(l: &Linkage, c: &Configuration, tol: &Tolerance) -> Result<Vec<DVector<f64>>> {
    let (sys, pts) = System::new(l, c)?;
    let m = row_block(&pts, &sys.cols, &sys.ix.edges, sys.ncols);
    Ok(null_space(&m, tol))
}
