//! Combinatorial planar embeddings as rotation systems.
//!
//! Edge `k` of the underlying multigraph owns the darts `2k` (from
//! `edges[k][0]` to `edges[k][1]`) and `2k + 1` (the reverse). A rotation lists
//! the darts leaving each vertex in counter-clockwise order. Faces are traced
//! with the face on the left: the successor of `u -> v` is the dart preceding
//! `v -> u` in the rotation at `v`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::model::{cross, Graph, Point};

pub fn twin(d: usize) -> usize {
    d ^ 1
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlanarEmbedding {
    graph: Graph,
    rotation: Vec<Vec<usize>>,
    faces: Vec<Vec<usize>>,
    face_of: Vec<usize>,
    outer: usize,
}

impl PlanarEmbedding {
    /// Builds an embedding from explicit rotations and checks Euler's formula.
    pub fn from_rotation(graph: Graph, rotation: Vec<Vec<usize>>) -> Result<Self> {
        let n = graph.vertex_count();
        if rotation.len() != n {
            return Err(Error::InvalidGraph("one rotation per vertex required".into()));
        }
        let darts = 2 * graph.edge_count();
        let mut seen = vec![false; darts];
        for (v, rot) in rotation.iter().enumerate() {
            for &d in rot {
                if d >= darts || seen[d] || dart_tail(&graph, d) != v {
                    return Err(Error::InvalidGraph(format!("bad dart {d} in rotation at {v}")));
                }
                seen[d] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidGraph("rotation misses a dart".into()));
        }
        if graph.edges().iter().any(|e| e[0] == e[1]) {
            return Err(Error::InvalidGraph("self-loops cannot be embedded".into()));
        }
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        let (faces, face_of) = trace_faces(&graph, &rotation);
        let chi = n as i64 - graph.edge_count() as i64 + faces.len() as i64;
        if chi != 2 {
            return Err(Error::InvalidGraph(format!("rotation system has Euler characteristic {chi}")));
        }
        let outer = (0..faces.len()).max_by_key(|&f| (faces[f].len(), usize::MAX - f)).unwrap_or(0);
        Ok(PlanarEmbedding { graph, rotation, faces, face_of, outer })
    }

    /// Embedding read off a straight-line drawing: darts sorted by angle and
    /// the outer face chosen as the one with negative signed area.
    pub fn from_drawing(graph: Graph, points: &[Point]) -> Result<Self> {
        if points.len() != graph.vertex_count() {
            return Err(Error::InvalidConfiguration("one point per vertex required".into()));
        }
        let mut rotation = vec![Vec::new(); graph.vertex_count()];
        for d in 0..2 * graph.edge_count() {
            rotation[dart_tail(&graph, d)].push(d);
        }
        for (v, rot) in rotation.iter_mut().enumerate() {
            rot.sort_by(|&a, &b| {
                let ta = points[dart_head(&graph, a)] - points[v];
                let tb = points[dart_head(&graph, b)] - points[v];
                ta.y.atan2(ta.x).total_cmp(&tb.y.atan2(tb.x)).then(a.cmp(&b))
            });
        }
        let mut e = Self::from_rotation(graph, rotation)?;
        let areas: Vec<f64> = (0..e.faces.len()).map(|f| e.signed_area(f, points)).collect();
        e.outer = (0..areas.len()).min_by(|&a, &b| areas[a].total_cmp(&areas[b])).unwrap_or(0);
        Ok(e)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    /// Faces as dart cycles.
    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn outer_face(&self) -> usize {
        self.outer
    }

    pub fn with_outer_face(mut self, f: usize) -> Self {
        assert!(f < self.faces.len(), "face index out of range");
        self.outer = f;
        self
    }

    /// The face to the left of dart `d`.
    pub fn face_of(&self, d: usize) -> usize {
        self.face_of[d]
    }

    /// Left and right faces of edge `k` (seen along dart `2k`).
    pub fn edge_faces(&self, k: usize) -> (usize, usize) {
        (self.face_of[2 * k], self.face_of[2 * k + 1])
    }

    pub fn tail(&self, d: usize) -> usize {
        dart_tail(&self.graph, d)
    }

    pub fn head(&self, d: usize) -> usize {
        dart_head(&self.graph, d)
    }

    /// Vertices around face `f`, in traversal order.
    pub fn face_vertices(&self, f: usize) -> Vec<usize> {
        self.faces[f].iter().map(|&d| self.tail(d)).collect()
    }

    pub fn signed_area(&self, f: usize, points: &[Point]) -> f64 {
        0.5 * self.faces[f]
            .iter()
            .map(|&d| cross(points[self.tail(d)], points[self.head(d)]))
            .sum::<f64>()
    }

    /// `|V| - |E| + |F|`.
    pub fn euler_characteristic(&self) -> i64 {
        self.graph.vertex_count() as i64 - self.graph.edge_count() as i64 + self.faces.len() as i64
    }

    /// Embedding of the dual multigraph. Dual edge `k` crosses primal edge `k`;
    /// its dart `d` runs from the face right of primal dart `d` to the face on
    /// its left. Dual vertex `f` is labelled `f{f}`.
    pub fn dual(&self) -> PlanarEmbedding {
        let labels = (0..self.faces.len()).map(|f| face_label(f).into()).collect();
        let edges = (0..self.graph.edge_count())
            .map(|k| [self.face_of[2 * k + 1], self.face_of[2 * k]])
            .collect();
        let graph = Graph::new(labels, edges).expect("dual labels are distinct");
        let rotation: Vec<Vec<usize>> =
            self.faces.iter().map(|f| f.iter().map(|&b| twin(b)).collect()).collect();
        let (faces, face_of) = trace_faces(&graph, &rotation);
        let outer = 0;
        PlanarEmbedding { graph, rotation, faces, face_of, outer }
    }

    /// For a dual embedding produced by [`PlanarEmbedding::dual`], the primal
    /// vertex enclosed by each dual face.
    pub fn dual_face_vertices(&self, dual: &PlanarEmbedding) -> Vec<usize> {
        dual.faces.iter().map(|f| self.tail(f[0])).collect()
    }
}

pub fn face_label(f: usize) -> String {
    format!("f{f}")
}

fn dart_tail(g: &Graph, d: usize) -> usize {
    g.edges()[d / 2][d % 2]
}

fn dart_head(g: &Graph, d: usize) -> usize {
    g.edges()[d / 2][1 - d % 2]
}

fn trace_faces(g: &Graph, rotation: &[Vec<usize>]) -> (Vec<Vec<usize>>, Vec<usize>) {
    let darts = 2 * g.edge_count();
    let mut pos = vec![0; darts];
    for rot in rotation {
        for (i, &d) in rot.iter().enumerate() {
            pos[d] = i;
        }
    }
    let next = |d: usize| {
        let v = dart_head(g, d);
        let rot = &rotation[v];
        rot[(pos[twin(d)] + rot.len() - 1) % rot.len()]
    };
    let mut face_of = vec![usize::MAX; darts];
    let mut faces = Vec::new();
    for start in 0..darts {
        if face_of[start] != usize::MAX {
            continue;
        }
        let mut face = Vec::new();
        let mut d = start;
        while face_of[d] == usize::MAX {
            face_of[d] = faces.len();
            face.push(d);
            d = next(d);
        }
        faces.push(face);
    }
    if g.edge_count() == 0 {
        faces.push(Vec::new());
    }
    (faces, face_of)
}

/// Embeds a connected multigraph, or reports a Kuratowski obstruction.
pub fn planar_embed(g: &Graph) -> Result<PlanarEmbedding> {
    if g.edges().iter().any(|e| e[0] == e[1]) {
        return Err(Error::InvalidGraph("self-loops cannot be embedded".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    // Underlying simple graph; every pair keeps its first edge as representative.
    let mut first: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut copies: Vec<(usize, usize)> = Vec::new();
    for (k, &[u, v]) in g.edges().iter().enumerate() {
        let key = (u.min(v), u.max(v));
        match first.get(&key) {
            Some(&k0) => copies.push((k, k0)),
            None => {
                first.insert(key, k);
            }
        }
    }
    let simple: Vec<[usize; 2]> = first.keys().map(|&(u, v)| [u, v]).collect();
    let Some(simple_rot) = embed_simple(g.vertex_count(), &simple) else {
        return Err(Error::NotPlanar { witness: kuratowski_witness(g.vertex_count(), &simple) });
    };
    // Translate simple darts to darts of g.
    let to_dart = |sd: usize| {
        let [u, v] = simple[sd / 2];
        let (t, h) = if sd.is_multiple_of(2) { (u, v) } else { (v, u) };
        let k = first[&(t.min(h), t.max(h))];
        if g.edges()[k][0] == t {
            2 * k
        } else {
            2 * k + 1
        }
    };
    let mut rotation: Vec<Vec<usize>> =
        simple_rot.iter().map(|rot| rot.iter().map(|&sd| to_dart(sd)).collect()).collect();
    // Each parallel copy goes right after its representative at one end and
    // right before it at the other, which bounds a digon.
    for (k, k0) in copies {
        let d0 = if g.edges()[k0][0] == g.edges()[k][0] { 2 * k0 } else { 2 * k0 + 1 };
        let (t, h) = (dart_tail(g, d0), dart_head(g, d0));
        let at_t = rotation[t].iter().position(|&d| d == d0).unwrap();
        rotation[t].insert(at_t + 1, 2 * k);
        let at_h = rotation[h].iter().position(|&d| d == twin(d0)).unwrap();
        rotation[h].insert(at_h, 2 * k + 1);
    }
    PlanarEmbedding::from_rotation(g.clone(), rotation)
        .map_err(|e| Error::Internal(format!("embedding failed validation: {e}")))
}

pub fn is_planar(n: usize, edges: &[[usize; 2]]) -> bool {
    let mut set = BTreeSet::new();
    for &[u, v] in edges {
        if u != v {
            set.insert((u.min(v), u.max(v)));
        }
    }
    let simple: Vec<[usize; 2]> = set.into_iter().map(|(u, v)| [u, v]).collect();
    embed_simple(n, &simple).is_some()
}

/// Minimal non-planar edge subset found by greedy deletion.
fn kuratowski_witness(n: usize, edges: &[[usize; 2]]) -> Vec<(usize, usize)> {
    let mut keep: Vec<[usize; 2]> = edges.to_vec();
    let mut i = 0;
    while i < keep.len() {
        let mut trial = keep.clone();
        trial.remove(i);
        if embed_simple(n, &trial).is_none() {
            keep = trial;
        } else {
            i += 1;
        }
    }
    keep.into_iter().map(|[u, v]| (u, v)).collect()
}

/// Rotation system (in simple-dart numbering) of a simple graph, possibly
/// disconnected, or `None` when it is not planar.
fn embed_simple(n: usize, edges: &[[usize; 2]]) -> Option<Vec<Vec<usize>>> {
    let mut rotation = vec![Vec::new(); n];
    for block in blocks(n, edges) {
        if block.len() == 1 {
            let k = block[0];
            rotation[edges[k][0]].push(2 * k);
            rotation[edges[k][1]].push(2 * k + 1);
            continue;
        }
        // Local numbering of the block.
        let mut local: BTreeMap<usize, usize> = BTreeMap::new();
        let mut global = Vec::new();
        for &k in &block {
            for v in edges[k] {
                local.entry(v).or_insert_with(|| {
                    global.push(v);
                    global.len() - 1
                });
            }
        }
        let ledges: Vec<[usize; 2]> =
            block.iter().map(|&k| [local[&edges[k][0]], local[&edges[k][1]]]).collect();
        let faces = dmp(global.len(), &ledges)?;
        // Dart of the block for a local directed pair.
        let mut dart: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (i, &k) in block.iter().enumerate() {
            let [u, v] = ledges[i];
            dart.insert((u, v), 2 * k);
            dart.insert((v, u), 2 * k + 1);
        }
        // Consecutive face darts d, d' give ccw_next(d') = twin(d).
        let mut ccw_next: BTreeMap<usize, usize> = BTreeMap::new();
        for f in &faces {
            for i in 0..f.len() {
                let d = dart[&(f[i], f[(i + 1) % f.len()])];
                let d2 = dart[&(f[(i + 1) % f.len()], f[(i + 2) % f.len()])];
                ccw_next.insert(d2, twin(d));
            }
        }
        for (lv, &v) in global.iter().enumerate() {
            let start = block
                .iter()
                .enumerate()
                .find_map(|(i, &k)| {
                    let [a, b] = ledges[i];
                    if a == lv {
                        Some(2 * k)
                    } else if b == lv {
                        Some(2 * k + 1)
                    } else {
                        None
                    }
                })
                .expect("block vertex has an edge");
            let mut d = start;
            loop {
                rotation[v].push(d);
                d = ccw_next[&d];
                if d == start {
                    break;
                }
            }
        }
    }
    Some(rotation)
}

/// Edge sets of the biconnected components.
fn blocks(n: usize, edges: &[[usize; 2]]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for (k, &[u, v]) in edges.iter().enumerate() {
        adj[u].push((v, k));
        adj[v].push((u, k));
    }
    struct State<'a> {
        adj: &'a [Vec<(usize, usize)>],
        disc: Vec<usize>,
        low: Vec<usize>,
        time: usize,
        stack: Vec<usize>,
        out: Vec<Vec<usize>>,
    }
    fn visit(s: &mut State, u: usize, parent_edge: Option<usize>) {
        s.time += 1;
        s.disc[u] = s.time;
        s.low[u] = s.time;
        for i in 0..s.adj[u].len() {
            let (w, k) = s.adj[u][i];
            if Some(k) == parent_edge {
                continue;
            }
            if s.disc[w] == 0 {
                s.stack.push(k);
                visit(s, w, Some(k));
                s.low[u] = s.low[u].min(s.low[w]);
                if s.low[w] >= s.disc[u] {
                    let mut block = Vec::new();
                    while let Some(e) = s.stack.pop() {
                        block.push(e);
                        if e == k {
                            break;
                        }
                    }
                    block.sort_unstable();
                    s.out.push(block);
                }
            } else if s.disc[w] < s.disc[u] {
                s.stack.push(k);
                s.low[u] = s.low[u].min(s.disc[w]);
            }
        }
    }
    let mut s = State { adj: &adj, disc: vec![0; n], low: vec![0; n], time: 0, stack: Vec::new(), out: Vec::new() };
    for v in 0..n {
        if s.disc[v] == 0 {
            visit(&mut s, v, None);
        }
    }
    s.out
}

/// Demoucron-Malgrange-Pertuiset on a biconnected simple graph with at least
/// three vertices. Returns the faces as vertex cycles.
fn dmp(n: usize, edges: &[[usize; 2]]) -> Option<Vec<Vec<usize>>> {
    let mut adj = vec![Vec::new(); n];
    for &[u, v] in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let key = |u: usize, v: usize| (u.min(v), u.max(v));
    let cycle = find_cycle(&adj)?;
    let mut in_h = vec![false; n];
    let mut h_edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..cycle.len() {
        in_h[cycle[i]] = true;
        h_edges.insert(key(cycle[i], cycle[(i + 1) % cycle.len()]));
    }
    let mut faces = vec![cycle.clone(), cycle.iter().rev().copied().collect::<Vec<_>>()];

    while h_edges.len() < edges.len() {
        // Fragments: chords, then components of G - V(H) with their attachments.
        let mut fragments: Vec<(BTreeSet<usize>, Vec<usize>)> = Vec::new();
        for &[u, v] in edges {
            if in_h[u] && in_h[v] && !h_edges.contains(&key(u, v)) {
                fragments.push(([u, v].into_iter().collect(), vec![u, v]));
            }
        }
        let mut comp = vec![usize::MAX; n];
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for s in 0..n {
            if in_h[s] || comp[s] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let u = members[i];
                for &w in &adj[u] {
                    if !in_h[w] && comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
                i += 1;
            }
            comps.push(members);
        }
        for members in &comps {
            let contacts: BTreeSet<usize> =
                members.iter().flat_map(|&u| adj[u].iter().copied()).filter(|&w| in_h[w]).collect();
            fragments.push((contacts, members.clone()));
        }

        let admissible: Vec<Vec<usize>> = fragments
            .iter()
            .map(|(contacts, _)| {
                (0..faces.len())
                    .filter(|&f| contacts.iter().all(|c| faces[f].contains(c)))
                    .collect()
            })
            .collect();
        if admissible.iter().any(|a| a.is_empty()) {
            return None;
        }
        let pick = (0..fragments.len()).find(|&i| admissible[i].len() == 1).unwrap_or(0);
        let face = admissible[pick][0];
        let (contacts, body) = &fragments[pick];

        let path: Vec<usize> = if body.len() == 2 && contacts.len() == 2 && in_h[body[0]] && in_h[body[1]] {
            body.clone()
        } else {
            let inside: BTreeSet<usize> = body.iter().copied().collect();
            let c1 = *contacts.iter().next().expect("fragment has contacts");
            let x = *adj[c1].iter().find(|w| inside.contains(w)).expect("contact touches body");
            let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
            let mut queue = VecDeque::from([x]);
            parent.insert(x, x);
            let mut end = None;
            while let Some(u) = queue.pop_front() {
                if let Some(&c2) = adj[u].iter().find(|&&w| in_h[w] && w != c1) {
                    end = Some((u, c2));
                    break;
                }
                for &w in &adj[u] {
                    if inside.contains(&w) && !parent.contains_key(&w) {
                        parent.insert(w, u);
                        queue.push_back(w);
                    }
                }
            }
            let (y, c2) = end?;
            let mut chain = vec![c2, y];
            let mut u = y;
            while parent[&u] != u {
                u = parent[&u];
                chain.push(u);
            }
            chain.push(c1);
            chain.reverse();
            chain
        };

        let f = faces[face].clone();
        let (c1, c2) = (path[0], *path.last().unwrap());
        let i1 = f.iter().position(|&v| v == c1)?;
        let i2 = f.iter().position(|&v| v == c2)?;
        let walk = |from: usize, to: usize| {
            let mut out = vec![f[from]];
            let mut i = from;
            while i != to {
                i = (i + 1) % f.len();
                out.push(f[i]);
            }
            out
        };
        let interior = &path[1..path.len() - 1];
        let mut f1 = walk(i1, i2);
        f1.extend(interior.iter().rev());
        let mut f2 = walk(i2, i1);
        f2.extend(interior.iter());
        faces[face] = f1;
        faces.push(f2);
        for w in path.windows(2) {
            h_edges.insert(key(w[0], w[1]));
        }
        for &v in &path {
            in_h[v] = true;
        }
    }
    Some(faces)
}

fn find_cycle(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut parent = vec![usize::MAX; n];
    parent[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if parent[w] == usize::MAX {
                parent[w] = u;
                queue.push_back(w);
            } else if w != parent[u] && parent[w] != u {
                // Non-tree edge: close the cycle through the lowest common ancestor.
                let mut up_u = vec![u];
                while *up_u.last().unwrap() != 0 {
                    up_u.push(parent[*up_u.last().unwrap()]);
                }
                let mut up_w = vec![w];
                while !up_u.contains(up_w.last().unwrap()) {
                    up_w.push(parent[*up_w.last().unwrap()]);
                }
                let lca = *up_w.last().unwrap();
                let cut = up_u.iter().position(|&x| x == lca).unwrap();
                let mut cycle: Vec<usize> = up_u[..=cut].to_vec();
                cycle.extend(up_w[..up_w.len() - 1].iter().rev());
                return Some(cycle);
            }
        }
    }
    None
}
