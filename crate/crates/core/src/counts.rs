//! Combinatorial rigidity: pebble games, Laman counts, rigidity circuits and
//! the pinned framework conditions.
//!
//! Pinned graphs are counted by adding a fan triangulation on the pins (a
//! rigid ground) and running the ordinary (2,3) pebble game. With the ground
//! edges inserted first, the number of accepted bars equals the generic rank
//! of the pinned rigidity matrix.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Edge, Graph, PinnedGraph, VertexId};

/// Pebble game with per-vertex capacities.
///
/// An edge `uv` is accepted when `need` pebbles can be gathered on its
/// endpoints; the edge is then oriented out of an endpoint that pays one
/// pebble. With capacity 2 everywhere and `need = 4` this is the (2,3) game.
#[derive(Clone, Debug)]
pub(crate) struct PebbleGame {
    cap: Vec<u8>,
    pebbles: Vec<u8>,
    out: Vec<Vec<usize>>,
    need: u8,
}

impl PebbleGame {
    pub(crate) fn new(cap: Vec<u8>, need: u8) -> Self {
        let n = cap.len();
        PebbleGame { pebbles: cap.clone(), cap, out: vec![Vec::new(); n], need }
    }

    pub(crate) fn laman(n: usize) -> Self {
        Self::new(vec![2; n], 4)
    }

    /// Heads of the edges oriented out of `u`.
    pub(crate) fn out_edges(&self, u: usize) -> &[usize] {
        &self.out[u]
    }

    /// Moves a free pebble from some vertex reachable from `x` onto `x`,
    /// never taking the pebbles of `frozen`.
    fn fetch(&mut self, x: usize, frozen: usize) -> bool {
        let n = self.cap.len();
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[x] = true;
        let mut stack = vec![x];
        let mut found = None;
        'search: while let Some(a) = stack.pop() {
            for &b in &self.out[a] {
                if seen[b] {
                    continue;
                }
                seen[b] = true;
                parent[b] = Some(a);
                if b != frozen && self.pebbles[b] > 0 {
                    found = Some(b);
                    break 'search;
                }
                stack.push(b);
            }
        }
        let Some(w) = found else { return false };
        // Reverse the path x -> ... -> w.
        let mut b = w;
        while let Some(a) = parent[b] {
            let slot = self.out[a].iter().position(|&h| h == b).expect("path edge");
            self.out[a].swap_remove(slot);
            self.out[b].push(a);
            b = a;
        }
        self.pebbles[w] -= 1;
        self.pebbles[x] += 1;
        true
    }

    /// Tries to add edge `uv`. On rejection returns the vertices reachable from
    /// `u` and `v`, which span a tight set.
    pub(crate) fn insert(&mut self, u: usize, v: usize) -> std::result::Result<(), Vec<usize>> {
        if u == v {
            return Err(vec![u]);
        }
        while self.pebbles[u] + self.pebbles[v] < self.need {
            if self.pebbles[u] < self.cap[u] && self.fetch(u, v) {
                continue;
            }
            if self.pebbles[v] < self.cap[v] && self.fetch(v, u) {
                continue;
            }
            break;
        }
        if self.pebbles[u] + self.pebbles[v] >= self.need {
            let (tail, head) = if self.pebbles[u] > 0 { (u, v) } else { (v, u) };
            self.pebbles[tail] -= 1;
            self.out[tail].push(head);
            Ok(())
        } else {
            Err(self.reach(&[u, v]))
        }
    }

    fn reach(&self, from: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.cap.len()];
        let mut stack = from.to_vec();
        for &s in from {
            seen[s] = true;
        }
        while let Some(a) = stack.pop() {
            for &b in &self.out[a] {
                if !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        (0..seen.len()).filter(|&i| seen[i]).collect()
    }
}

/// Number of independent edges of `edges` on `n` vertices in the generic 2D rigidity matroid.
pub fn pebble_rank(n: usize, edges: &[[usize; 2]]) -> usize {
    let mut game = PebbleGame::laman(n);
    edges.iter().filter(|&&[u, v]| game.insert(u, v).is_ok()).count()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub edges: usize,
    pub inner: usize,
    pub pins: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<Edge>,
    /// The count the witness violates, written out as an inequality.
    pub violated: String,
}

/// Outcome of a counting check. When `satisfied` is false the witness is
/// present and `counts` are its counts; otherwise `counts` describe the whole graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub satisfied: bool,
    pub witness: Option<Witness>,
    pub counts: Counts,
}

/// Laman's conditions for an unpinned graph: `|E| = 2|V| - 3` and every
/// non-empty edge subset spans at most `2|V(F)| - 3` edges.
pub fn laman_check(g: &Graph) -> Result<CountReport> {
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let n = g.vertex_count();
    let mut game = PebbleGame::laman(n);
    for &[u, v] in g.edges() {
        if let Err(region) = game.insert(u, v) {
            let inside: BTreeSet<usize> = region.into_iter().collect();
            let edges: Vec<Edge> = g
                .edges()
                .iter()
                .filter(|e| inside.contains(&e[0]) && inside.contains(&e[1]))
                .map(|e| Edge::new(&g.labels()[e[0]], &g.labels()[e[1]]))
                .collect();
            let counts = Counts { edges: edges.len(), inner: inside.len(), pins: 0 };
            return Ok(CountReport {
                satisfied: false,
                witness: Some(Witness {
                    vertices: inside.iter().map(|&i| g.labels()[i].clone()).collect(),
                    edges,
                    violated: "|F| <= 2|V(F)| - 3".into(),
                }),
                counts,
            });
        }
    }
    let counts = Counts { edges: g.edge_count(), inner: n, pins: 0 };
    if g.edge_count() + 3 == 2 * n {
        Ok(CountReport { satisfied: true, witness: None, counts })
    } else {
        Ok(CountReport {
            satisfied: false,
            witness: Some(Witness {
                vertices: g.labels().to_vec(),
                edges: g
                    .edges()
                    .iter()
                    .map(|e| Edge::new(&g.labels()[e[0]], &g.labels()[e[1]]))
                    .collect(),
                violated: "|E| = 2|V| - 3".into(),
            }),
            counts,
        })
    }
}

/// Whether the edges of `g` form a rigidity circuit: `|C| = 2|V(C)| - 2` with
/// every proper subset independent. Parallel edges are only accepted when
/// `allow_multi` is set, which makes the doubled edge the smallest circuit.
pub fn is_rigidity_circuit(g: &Graph, allow_multi: bool) -> bool {
    if g.edge_count() == 0 || g.edges().iter().any(|e| e[0] == e[1]) {
        return false;
    }
    if !allow_multi && !g.is_simple() {
        return false;
    }
    let support = g.support().len();
    if g.edge_count() + 2 != 2 * support {
        return false;
    }
    let n = g.vertex_count();
    (0..g.edge_count()).all(|skip| {
        let rest: Vec<[usize; 2]> = g
            .edges()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, &e)| e)
            .collect();
        pebble_rank(n, &rest) == rest.len()
    })
}

/// Edges of a fan triangulation on the pins of `ix` (a path through the pins
/// plus chords from the first pin), in indexed form.
fn ground_fan(pins: &[usize]) -> Vec<[usize; 2]> {
    let mut edges = Vec::new();
    for w in pins.windows(2) {
        edges.push([w[0], w[1]]);
    }
    for &p in pins.iter().skip(2) {
        edges.push([pins[0], p]);
    }
    edges
}

/// Pebble game on the pinned graph with a rigid ground; returns the game and,
/// for the first dependent bar, the offending region.
fn pinned_game(g: &PinnedGraph) -> (usize, Option<(usize, Vec<usize>)>) {
    let ix = g.index();
    let mut game = PebbleGame::laman(ix.ids.len());
    let pins: Vec<usize> = (0..ix.ids.len()).filter(|&i| ix.pinned[i]).collect();
    if pins.len() >= 2 {
        for [u, v] in ground_fan(&pins) {
            game.insert(u, v).expect("a fan triangulation is independent");
        }
    }
    let mut accepted = 0;
    let mut first_failure = None;
    for (k, &[u, v]) in ix.edges.iter().enumerate() {
        match game.insert(u, v) {
            Ok(()) => accepted += 1,
            Err(region) => {
                if first_failure.is_none() {
                    first_failure = Some((k, region));
                }
            }
        }
    }
    (accepted, first_failure)
}

/// Generic rank of the pinned rigidity matrix (pins at distinct generic points).
pub fn pinned_generic_rank(g: &PinnedGraph) -> usize {
    pinned_game(g).0
}

/// Generic number of internal degrees of freedom, `2|I| - rank`.
pub fn generic_dof(g: &PinnedGraph) -> usize {
    2 * g.inner().len() - pinned_generic_rank(g)
}

fn pinned_bound(inner: usize, pins: usize) -> (i64, &'static str) {
    let i = inner as i64;
    match pins {
        0 => (2 * i - 3, "|E'| <= 2|I'| - 3"),
        1 => (2 * i - 1, "|E'| <= 2|I'| - 1"),
        _ => (2 * i, "|E'| <= 2|I'|"),
    }
}

/// The pinned framework conditions: `|E| = 2|I|` and, for every subgraph,
/// `|E'| <= 2|I'|` (two or more pins), `<= 2|I'| - 1` (one pin) or
/// `<= 2|I'| - 3` (no pins).
pub fn pinned_framework_conditions(g: &PinnedGraph) -> CountReport {
    let (accepted, failure) = pinned_game(g);
    let whole = Counts { edges: g.edge_count(), inner: g.inner().len(), pins: g.pins().len() };
    if let Some((_, region)) = failure {
        let ix = g.index();
        let inside: BTreeSet<usize> = region.into_iter().collect();
        let edges: Vec<Edge> = g
            .edges()
            .iter()
            .zip(&ix.edges)
            .filter(|(_, e)| inside.contains(&e[0]) && inside.contains(&e[1]))
            .map(|(e, _)| e.clone())
            .collect();
        let inner = inside.iter().filter(|&&i| !ix.pinned[i]).count();
        let pins = inside.len() - inner;
        let (bound, violated) = pinned_bound(inner, pins);
        debug_assert!(edges.len() as i64 > bound, "pebble region must violate its count");
        return CountReport {
            satisfied: false,
            witness: Some(Witness {
                vertices: inside.iter().map(|&i| ix.ids[i].clone()).collect(),
                edges: edges.clone(),
                violated: violated.into(),
            }),
            counts: Counts { edges: edges.len(), inner, pins },
        };
    }
    debug_assert_eq!(accepted, g.edge_count());
    if g.edge_count() == 2 * g.inner().len() {
        CountReport { satisfied: true, witness: None, counts: whole }
    } else {
        CountReport {
            satisfied: false,
            witness: Some(Witness {
                vertices: g.vertices(),
                edges: g.edges().iter().cloned().collect(),
                violated: "|E| = 2|I|".into(),
            }),
            counts: whole,
        }
    }
}

/// Pinned isostatic: the pinned framework conditions hold.
pub fn is_pinned_isostatic(g: &PinnedGraph) -> bool {
    pinned_framework_conditions(g).satisfied
}
