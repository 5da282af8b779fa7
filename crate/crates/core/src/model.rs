//! Pinned graphs, configurations and frameworks.
//!
//! Vertex ids are opaque strings. Every collection in this module is kept in
//! sorted order so that index views, matrices and reports are deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = nalgebra::Vector2<f64>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(id: impl Into<String>) -> Self {
        VertexId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId(s.to_owned())
    }
}

impl From<String> for VertexId {
    fn from(s: String) -> Self {
        VertexId(s)
    }
}

impl From<&VertexId> for VertexId {
    fn from(v: &VertexId) -> Self {
        v.clone()
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Unordered vertex pair, stored with the smaller id first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    a: VertexId,
    b: VertexId,
}

impl Edge {
    pub fn new(u: impl Into<VertexId>, v: impl Into<VertexId>) -> Self {
        let (u, v) = (u.into(), v.into());
        if u <= v {
            Edge { a: u, b: v }
        } else {
            Edge { a: v, b: u }
        }
    }

    pub fn first(&self) -> &VertexId {
        &self.a
    }

    pub fn second(&self) -> &VertexId {
        &self.b
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        &self.a == v || &self.b == v
    }

    /// The endpoint that is not `v`.
    pub fn other(&self, v: &VertexId) -> Option<&VertexId> {
        if &self.a == v {
            Some(&self.b)
        } else if &self.b == v {
            Some(&self.a)
        } else {
            None
        }
    }

    pub fn is_loop(&self) -> bool {
        self.a == self.b
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

impl Serialize for Edge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [&self.a, &self.b].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Edge {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [a, b] = <[VertexId; 2]>::deserialize(d)?;
        Ok(Edge::new(a, b))
    }
}

/// A pinned graph `G(I, P; E)`: inner vertices, pinned vertices and bars.
///
/// An unpinned graph is a pinned graph with an empty pin set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PinnedGraph {
    inner: BTreeSet<VertexId>,
    pins: BTreeSet<VertexId>,
    edges: BTreeSet<Edge>,
}

impl PinnedGraph {
    pub fn new<I, P, E, V>(inner: I, pins: P, edges: E) -> Result<Self>
    where
        I: IntoIterator<Item = V>,
        P: IntoIterator<Item = V>,
        E: IntoIterator<Item = (V, V)>,
        V: Into<VertexId>,
    {
        let inner: BTreeSet<VertexId> = inner.into_iter().map(Into::into).collect();
        let pins: BTreeSet<VertexId> = pins.into_iter().map(Into::into).collect();
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            let e = Edge::new(u, v);
            if !set.insert(e.clone()) {
                return Err(Error::InvalidGraph(format!("duplicate edge {e}")));
            }
        }
        Self::from_parts(inner, pins, set)
    }

    pub fn unpinned<I, E, V>(vertices: I, edges: E) -> Result<Self>
    where
        I: IntoIterator<Item = V>,
        E: IntoIterator<Item = (V, V)>,
        V: Into<VertexId>,
    {
        Self::new(vertices, std::iter::empty::<V>(), edges)
    }

    pub fn from_parts(
        inner: BTreeSet<VertexId>,
        pins: BTreeSet<VertexId>,
        edges: BTreeSet<Edge>,
    ) -> Result<Self> {
        if let Some(v) = inner.intersection(&pins).next() {
            return Err(Error::InvalidGraph(format!("vertex `{v}` is both inner and pinned")));
        }
        for e in &edges {
            if e.is_loop() {
                return Err(Error::InvalidGraph(format!("self-loop at `{}`", e.a)));
            }
            for v in [&e.a, &e.b] {
                if !inner.contains(v) && !pins.contains(v) {
                    return Err(Error::UnknownVertex(v.clone()));
                }
            }
            if pins.contains(&e.a) && pins.contains(&e.b) {
                return Err(Error::InvalidGraph(format!("edge {e} joins two pinned vertices")));
            }
        }
        Ok(PinnedGraph { inner, pins, edges })
    }

    pub fn inner(&self) -> &BTreeSet<VertexId> {
        &self.inner
    }

    pub fn pins(&self) -> &BTreeSet<VertexId> {
        &self.pins
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_inner(&self, v: &VertexId) -> bool {
        self.inner.contains(v)
    }

    pub fn is_pin(&self, v: &VertexId) -> bool {
        self.pins.contains(v)
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.is_inner(v) || self.is_pin(v)
    }

    pub fn has_edge(&self, u: &VertexId, v: &VertexId) -> bool {
        self.edges.contains(&Edge::new(u, v))
    }

    /// All vertices in sorted order.
    pub fn vertices(&self) -> Vec<VertexId> {
        let all: BTreeSet<&VertexId> = self.inner.iter().chain(self.pins.iter()).collect();
        all.into_iter().cloned().collect()
    }

    pub fn degree(&self, v: &VertexId) -> usize {
        self.edges.iter().filter(|e| e.contains(v)).count()
    }

    pub fn neighbors(&self, v: &VertexId) -> Vec<VertexId> {
        self.edges.iter().filter_map(|e| e.other(v).cloned()).collect()
    }

    /// Index view with vertices in sorted order and edges in sorted order.
    pub fn index(&self) -> Indexed {
        let ids = self.vertices();
        let position: BTreeMap<VertexId, usize> =
            ids.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let edges = self
            .edges
            .iter()
            .map(|e| [position[&e.a], position[&e.b]])
            .collect();
        let pinned = ids.iter().map(|v| self.pins.contains(v)).collect();
        Indexed { ids, position, edges, pinned }
    }

    /// The graph forgetting which vertices are pinned.
    pub fn underlying(&self) -> Graph {
        let ix = self.index();
        Graph { labels: ix.ids, edges: ix.edges }
    }

    pub fn with_edge(&self, e: Edge) -> Result<Self> {
        let mut edges = self.edges.clone();
        if !edges.insert(e.clone()) {
            return Err(Error::InvalidGraph(format!("edge {e} already present")));
        }
        Self::from_parts(self.inner.clone(), self.pins.clone(), edges)
    }

    pub fn without_edge(&self, e: &Edge) -> Result<Self> {
        let mut edges = self.edges.clone();
        if !edges.remove(e) {
            return Err(Error::InvalidGraph(format!("edge {e} not present")));
        }
        Self::from_parts(self.inner.clone(), self.pins.clone(), edges)
    }

    /// Removes a vertex and its incident edges.
    pub fn without_vertex(&self, v: &VertexId) -> Result<Self> {
        if !self.contains(v) {
            return Err(Error::UnknownVertex(v.clone()));
        }
        let mut inner = self.inner.clone();
        let mut pins = self.pins.clone();
        inner.remove(v);
        pins.remove(v);
        let edges = self.edges.iter().filter(|e| !e.contains(v)).cloned().collect();
        Self::from_parts(inner, pins, edges)
    }

    /// Turns inner vertex `v` into a pin. Edges from `v` to other pins are dropped.
    pub fn pin_vertex(&self, v: &VertexId) -> Result<Self> {
        if !self.is_inner(v) {
            return Err(Error::InvalidGraph(format!("`{v}` is not an inner vertex")));
        }
        let mut inner = self.inner.clone();
        let mut pins = self.pins.clone();
        inner.remove(v);
        let edges = self
            .edges
            .iter()
            .filter(|e| match e.other(v) {
                Some(w) => !pins.contains(w),
                None => true,
            })
            .cloned()
            .collect();
        pins.insert(v.clone());
        Self::from_parts(inner, pins, edges)
    }

    /// Relabels every vertex through `f`, which must be injective.
    pub fn relabel(&self, f: impl Fn(&VertexId) -> VertexId) -> Result<Self> {
        let inner = self.inner.iter().map(&f).collect::<BTreeSet<_>>();
        let pins = self.pins.iter().map(&f).collect::<BTreeSet<_>>();
        if inner.len() != self.inner.len() || pins.len() != self.pins.len() {
            return Err(Error::InvalidGraph("relabeling is not injective".into()));
        }
        let edges = self.edges.iter().map(|e| Edge::new(f(&e.a), f(&e.b))).collect();
        Self::from_parts(inner, pins, edges)
    }
}

/// Integer view of a pinned graph used by the combinatorial and numerical kernels.
#[derive(Clone, Debug)]
pub struct Indexed {
    pub ids: Vec<VertexId>,
    pub position: BTreeMap<VertexId, usize>,
    pub edges: Vec<[usize; 2]>,
    pub pinned: Vec<bool>,
}

/// Unpinned multigraph on labelled vertices. Parallel edges are allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    labels: Vec<VertexId>,
    edges: Vec<[usize; 2]>,
}

impl Graph {
    pub fn new(labels: Vec<VertexId>, edges: Vec<[usize; 2]>) -> Result<Self> {
        let n = labels.len();
        if labels.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(Error::InvalidGraph("duplicate vertex label".into()));
        }
        if let Some(e) = edges.iter().find(|e| e[0] >= n || e[1] >= n) {
            return Err(Error::InvalidGraph(format!("edge {:?} out of range", e)));
        }
        Ok(Graph { labels, edges })
    }

    /// Builds a graph on vertices `0..n` labelled by their index.
    pub fn from_indices(n: usize, edges: Vec<[usize; 2]>) -> Result<Self> {
        Self::new((0..n).map(|i| VertexId::new(format!("v{i}"))).collect(), edges)
    }

    pub fn labels(&self) -> &[VertexId] {
        &self.labels
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges.iter().all(|&[u, v]| u != v && seen.insert((u.min(v), u.max(v))))
    }

    /// Vertices incident to at least one edge.
    pub fn support(&self) -> BTreeSet<usize> {
        self.edges.iter().flat_map(|e| e.iter().copied()).collect()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.labels.len();
        if n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); n];
        for &[u, v] in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// The unpinned graph obtained by identifying every pin with one ground vertex `p*`.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub graph: Graph,
    /// Index of `p*` in `graph`.
    pub ground: usize,
    /// The original edge behind each contracted edge.
    pub origin: Vec<Edge>,
}

/// Contracts all pins of `g` to a single vertex. Parallel edges produced by
/// the contraction are kept, so a dyad becomes a doubled edge.
pub fn contract_pins(g: &PinnedGraph) -> Result<Contraction> {
    if g.pins().is_empty() {
        return Err(Error::InvalidGraph("cannot contract an empty pin set".into()));
    }
    let mut ground_label = String::from("p*");
    while g.contains(&VertexId::new(ground_label.clone())) {
        ground_label.push('\'');
    }
    let mut labels: Vec<VertexId> = g.inner().iter().cloned().collect();
    let ground = labels.len();
    labels.push(VertexId::new(ground_label));
    let position: BTreeMap<&VertexId, usize> =
        g.inner().iter().enumerate().map(|(i, v)| (v, i)).collect();
    let at = |v: &VertexId| position.get(v).copied().unwrap_or(ground);
    let mut edges = Vec::with_capacity(g.edge_count());
    let mut origin = Vec::with_capacity(g.edge_count());
    for e in g.edges() {
        edges.push([at(e.first()), at(e.second())]);
        origin.push(e.clone());
    }
    Ok(Contraction { graph: Graph::new(labels, edges)?, ground, origin })
}

/// Subgraph induced on `vs`, inheriting inner/pinned status.
pub fn induced_pinned_subgraph(g: &PinnedGraph, vs: &BTreeSet<VertexId>) -> Result<PinnedGraph> {
    if let Some(v) = vs.iter().find(|v| !g.contains(v)) {
        return Err(Error::UnknownVertex((*v).clone()));
    }
    let inner = g.inner().intersection(vs).cloned().collect();
    let pins = g.pins().intersection(vs).cloned().collect();
    let edges = g
        .edges()
        .iter()
        .filter(|e| vs.contains(e.first()) && vs.contains(e.second()))
        .cloned()
        .collect();
    PinnedGraph::from_parts(inner, pins, edges)
}

/// Point positions keyed by vertex id. Dual configurations use the same type.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Configuration(BTreeMap<VertexId, Point>);

impl Serialize for Configuration {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (v, p) in &self.0 {
            m.serialize_entry(v, &[p.x, p.y])?;
        }
        m.end()
    }
}

impl Configuration {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, v: impl Into<VertexId>, p: Point) {
        self.0.insert(v.into(), p);
    }

    pub fn get(&self, v: &VertexId) -> Option<Point> {
        self.0.get(v).copied()
    }

    pub fn point(&self, v: &VertexId) -> Result<Point> {
        self.get(v).ok_or_else(|| Error::UnknownVertex(v.clone()))
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.0.contains_key(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexId, &Point)> {
        self.0.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &VertexId> {
        self.0.keys()
    }

    /// Largest distance between two points; zero for fewer than two points.
    pub fn diameter(&self) -> f64 {
        diameter(self.0.values())
    }
}

impl<V: Into<VertexId>> FromIterator<(V, Point)> for Configuration {
    fn from_iter<T: IntoIterator<Item = (V, Point)>>(iter: T) -> Self {
        Configuration(iter.into_iter().map(|(v, p)| (v.into(), p)).collect())
    }
}

pub(crate) fn diameter<'a>(points: impl IntoIterator<Item = &'a Point>) -> f64 {
    let pts: Vec<&Point> = points.into_iter().collect();
    let mut d: f64 = 0.0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            d = d.max((pts[i] - pts[j]).norm());
        }
    }
    d
}

/// A pinned graph together with a placement of all its vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct Framework {
    graph: PinnedGraph,
    config: Configuration,
}

impl Framework {
    pub fn new(graph: PinnedGraph, config: Configuration) -> Result<Self> {
        for v in graph.vertices() {
            if !config.contains(&v) {
                return Err(Error::InvalidConfiguration(format!("vertex `{v}` has no point")));
            }
        }
        if let Some(v) = config.keys().find(|v| !graph.contains(v)) {
            return Err(Error::InvalidConfiguration(format!("point for unknown vertex `{v}`")));
        }
        for e in graph.edges() {
            let (p, q) = (config.point(e.first())?, config.point(e.second())?);
            if p == q {
                return Err(Error::CoincidentPoints(e.first().clone(), e.second().clone()));
            }
        }
        Ok(Framework { graph, config })
    }

    /// Rejects two or more pins all placed at one point. The pinned analysis
    /// needs at least two distinct ground locations.
    pub fn check_pin_locations(&self) -> Result<()> {
        let mut pins = self.graph.pins().iter().filter_map(|p| self.config.get(p));
        match pins.next() {
            Some(first) if self.graph.pins().len() >= 2 && pins.all(|q| q == first) => Err(
                Error::InvalidConfiguration("all pins occupy one point".into()),
            ),
            _ => Ok(()),
        }
    }

    pub fn graph(&self) -> &PinnedGraph {
        &self.graph
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    /// Positions in the sorted vertex order of [`PinnedGraph::index`].
    pub fn points(&self) -> Vec<Point> {
        self.graph.vertices().iter().map(|v| self.config.0[v]).collect()
    }
}

pub fn pt(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

/// Rotation by a quarter turn counter-clockwise.
pub fn rot90(v: Point) -> Point {
    Point::new(-v.y, v.x)
}

pub(crate) fn cross(u: Point, v: Point) -> f64 {
    u.x * v.y - u.y * v.x
}

/// Canonical graphs used throughout the examples and tests.
pub mod fixtures {
    use super::PinnedGraph;

    /// One inner vertex on two pins.
    pub fn dyad() -> PinnedGraph {
        PinnedGraph::new(["a"], ["p1", "p2"], [("a", "p1"), ("a", "p2")]).unwrap()
    }

    /// Triangle `abc` with one leg from each corner to its own pin.
    pub fn triad() -> PinnedGraph {
        PinnedGraph::new(
            ["a", "b", "c"],
            ["p1", "p2", "p3"],
            [("a", "b"), ("b", "c"), ("c", "a"), ("a", "p1"), ("b", "p2"), ("c", "p3")],
        )
        .unwrap()
    }

    /// Four-bar linkage: crank `p1-a`, coupler `a-b`, rocker `b-p2`. One degree of freedom.
    pub fn fourbar() -> PinnedGraph {
        PinnedGraph::new(["a", "b"], ["p1", "p2"], [("p1", "a"), ("a", "b"), ("b", "p2")]).unwrap()
    }

    /// Complete graph on four vertices, unpinned.
    pub fn k4() -> PinnedGraph {
        PinnedGraph::unpinned(
            ["1", "2", "3", "4"],
            [("1", "2"), ("1", "3"), ("1", "4"), ("2", "3"), ("2", "4"), ("3", "4")],
        )
        .unwrap()
    }

    pub fn triangle() -> PinnedGraph {
        PinnedGraph::unpinned(["1", "2", "3"], [("1", "2"), ("2", "3"), ("1", "3")]).unwrap()
    }

    /// Dyad `b` resting on the inner vertex of dyad `a`.
    pub fn stacked_dyads() -> PinnedGraph {
        PinnedGraph::new(
            ["a", "b"],
            ["p1", "p2", "p3"],
            [("a", "p1"), ("a", "p2"), ("b", "a"), ("b", "p3")],
        )
        .unwrap()
    }

    /// Two independent dyads on four pins, drawn with crossing bars in the tests.
    pub fn double_dyad() -> PinnedGraph {
        PinnedGraph::new(
            ["a", "b"],
            ["p1", "p2", "p3", "p4"],
            [("a", "p1"), ("a", "p2"), ("b", "p3"), ("b", "p4")],
        )
        .unwrap()
    }

    /// Assur graph whose pin contraction is `K_{3,3}` plus one edge, hence non-planar.
    ///
    /// Parts `{u1,u2,u3}` and `{w1,w2,w*}`; `w*` is split into the pins `q1,q2,q3`.
    pub fn k33_assur() -> PinnedGraph {
        PinnedGraph::new(
            ["u1", "u2", "u3", "w1", "w2"],
            ["q1", "q2", "q3"],
            [
                ("u1", "w1"),
                ("u1", "w2"),
                ("u2", "w1"),
                ("u2", "w2"),
                ("u3", "w1"),
                ("u3", "w2"),
                ("u1", "u2"),
                ("u1", "q1"),
                ("u2", "q2"),
                ("u3", "q3"),
            ],
        )
        .unwrap()
    }
}
