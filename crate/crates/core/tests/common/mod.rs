//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use assur_kit::{pt, Configuration, Edge, Framework, Graph, PinnedGraph, Point, VertexId};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdos-Renyi graph on `n` vertices.
pub fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push([u, v]);
            }
        }
    }
    Graph::from_indices(n, edges).unwrap()
}

/// Edge list of the `mask`-th subgraph of `K_n`.
pub fn subgraph_of_complete(n: usize, mask: u32) -> Vec<[usize; 2]> {
    let mut all = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            all.push([u, v]);
        }
    }
    all.into_iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e).collect()
}

fn induced(edges: &[[usize; 2]], s: u32) -> usize {
    edges.iter().filter(|e| s >> e[0] & 1 == 1 && s >> e[1] & 1 == 1).count()
}

/// Laman by enumerating every vertex subset.
pub fn brute_laman(n: usize, edges: &[[usize; 2]]) -> bool {
    if edges.len() + 3 != 2 * n {
        return false;
    }
    (1u32..1 << n).filter(|s| s.count_ones() >= 2).all(|s| induced(edges, s) + 3 <= 2 * s.count_ones() as usize)
}

/// Rigidity circuit by enumerating every proper subset of the support.
pub fn brute_circuit(n: usize, edges: &[[usize; 2]]) -> bool {
    let support: u32 = edges.iter().fold(0, |acc, e| acc | 1 << e[0] | 1 << e[1]);
    let s = support.count_ones() as usize;
    if edges.is_empty() || edges.len() + 2 != 2 * s {
        return false;
    }
    (1u32..1 << n)
        .filter(|&t| t & !support == 0 && t != support && t.count_ones() >= 2)
        .all(|t| induced(edges, t) + 3 <= 2 * t.count_ones() as usize)
}

/// Pinned isostatic graph grown by vertex additions and edge splits.
/// Pins that end up unused are dropped.
pub fn henneberg_pinned(inner: usize, pins: usize, rng: &mut impl Rng) -> PinnedGraph {
    let pin_ids: Vec<String> = (1..=pins).map(|k| format!("p{k}")).collect();
    let mut vertices: Vec<String> = pin_ids.clone();
    let mut edges: Vec<(String, String)> = Vec::new();
    for i in 0..inner {
        let w = format!("v{i}");
        if !edges.is_empty() && vertices.len() >= 3 && rng.random_bool(0.5) {
            let (u, v) = edges.swap_remove(rng.random_range(0..edges.len()));
            let third: Vec<&String> = vertices.iter().filter(|x| **x != u && **x != v).collect();
            let x = (*third.choose(rng).unwrap()).clone();
            edges.push((w.clone(), u));
            edges.push((w.clone(), v));
            edges.push((w.clone(), x));
        } else {
            let ends: Vec<&String> = vertices.choose_multiple(rng, 2).collect();
            edges.push((w.clone(), ends[0].clone()));
            edges.push((w.clone(), ends[1].clone()));
        }
        vertices.push(w);
    }
    let used: BTreeSet<&String> = edges.iter().flat_map(|(u, v)| [u, v]).collect();
    let pins: Vec<&String> = pin_ids.iter().filter(|p| used.contains(p)).collect();
    let inner: Vec<String> = (0..inner).map(|i| format!("v{i}")).collect();
    PinnedGraph::new(
        inner.iter().map(String::as_str),
        pins.into_iter().map(String::as_str),
        edges.iter().map(|(u, v)| (u.as_str(), v.as_str())),
    )
    .unwrap()
}

/// Stacked triangulation with a straight-line planar drawing: every new
/// vertex lands strictly inside the face it subdivides.
pub fn stacked_triangulation(n: usize, rng: &mut impl Rng) -> Framework {
    let mut points: Vec<Point> = vec![
        pt(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
        pt(10.0 + rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
        pt(5.0 + rng.random_range(-1.0..1.0), 9.0 + rng.random_range(-1.0..1.0)),
    ];
    let mut edges = vec![(0, 1), (1, 2), (0, 2)];
    let mut faces = vec![[0, 1, 2]];
    while points.len() < n {
        let k = rng.random_range(0..faces.len());
        let [a, b, c] = faces.swap_remove(k);
        let w: [f64; 3] = [rng.random_range(0.2..1.0), rng.random_range(0.2..1.0), rng.random_range(0.2..1.0)];
        let s = w.iter().sum::<f64>();
        let p = (points[a] * w[0] + points[b] * w[1] + points[c] * w[2]) / s;
        let v = points.len();
        points.push(p);
        edges.extend([(a, v), (b, v), (c, v)]);
        faces.extend([[a, b, v], [b, c, v], [a, c, v]]);
    }
    let name = |i: usize| format!("{i}");
    let g = PinnedGraph::unpinned(
        (0..n).map(name),
        edges.iter().map(|&(u, v)| (name(u), name(v))),
    )
    .unwrap();
    let c: Configuration = points.iter().enumerate().map(|(i, &p)| (name(i), p)).collect();
    Framework::new(g, c).unwrap()
}

/// `g` with every vertex renamed by a random bijection onto `x0, x1, ...`;
/// returns the graph and the map back.
pub fn shuffle_labels(g: &PinnedGraph, rng: &mut impl Rng) -> (PinnedGraph, impl Fn(&VertexId) -> VertexId) {
    let mut vs = g.vertices();
    vs.shuffle(rng);
    let fwd: std::collections::BTreeMap<VertexId, VertexId> =
        vs.iter().enumerate().map(|(i, v)| (v.clone(), VertexId::new(format!("x{i}")))).collect();
    let back: std::collections::BTreeMap<VertexId, VertexId> =
        fwd.iter().map(|(k, v)| (v.clone(), k.clone())).collect();
    let h = g.relabel(|v| fwd[v].clone()).unwrap();
    (h, move |v: &VertexId| back[v].clone())
}

pub fn cross(a: Point, b: Point) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Whether the open segments `e` and `f` cross in `c`.
pub fn segments_cross(c: &Configuration, e: &Edge, f: &Edge) -> bool {
    let p = |v: &VertexId| c.get(v).unwrap();
    let (a, b, x, y) = (p(e.first()), p(e.second()), p(f.first()), p(f.second()));
    let s1 = cross(b - a, x - a) * cross(b - a, y - a);
    let s2 = cross(y - x, a - x) * cross(y - x, b - x);
    s1 < 0.0 && s2 < 0.0
}

/// One line per criterion, then the verdict.
pub fn report(name: &str, ok: bool, detail: impl std::fmt::Display) {
    println!("[{}] {name}: {detail}", if ok { "PASS" } else { "FAIL" });
}
