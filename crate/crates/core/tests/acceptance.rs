//! End-to-end acceptance checks. Each test prints one PASS/FAIL line.
//! Run with `cargo test --test acceptance -- --nocapture` to see them.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use assur_kit::assur::{characterization_crosscheck, decompose, sufficiency_report, verify_sufficiency, AssurScheme};
use assur_kit::counts::{generic_dof, is_rigidity_circuit, laman_check, pebble_rank};
use assur_kit::mechanism::{
    detect_dead_end, drive, enumerate_insertions, insert_driver, replace_driver, tally, DeadEndClass, Driver,
    InsertionSpec, Linkage,
};
use assur_kit::numeric::{
    build_rigidity_matrix, first_order_motions, numeric_rank, random_generic_configuration, self_stresses,
    Tolerance,
};
use assur_kit::reciprocal::{bow_insert_crossings, reciprocal_from_stress, stress_from_reciprocal, PlanarEmbedding};
use assur_kit::singular::construct_singular_planar;
use assur_kit::{fixtures, pt, rot90, Configuration, Edge, Framework, Graph, PinnedGraph, Point, VertexId};
use common::*;
use nalgebra::DMatrix;
use rand::Rng;

#[test]
fn rank_identities() {
    let tol = Tolerance::default();
    let start = Instant::now();
    let k4 = fixtures::k4();
    let c = random_generic_configuration(&k4, 3).unwrap();
    let f = Framework::new(k4.clone(), c).unwrap();
    let rank = numeric_rank(&build_rigidity_matrix(&f).unwrap(), &tol);
    let stresses = self_stresses(&f, &tol).unwrap().len();
    let k4_ok = rank == 5 && stresses == k4.edge_count() - (2 * 4 - 3);

    let mut r = rng(1);
    let mut mismatches = 0;
    for trial in 0..200u64 {
        let n = r.random_range(2..=12);
        let g = random_graph(n, r.random_range(0.15..0.8), &mut r);
        if g.edge_count() == 0 {
            continue;
        }
        let expected = pebble_rank(n, g.edges());
        let pg = PinnedGraph::unpinned(
            g.labels().iter().cloned(),
            g.edges().iter().map(|e| (g.labels()[e[0]].clone(), g.labels()[e[1]].clone())),
        )
        .unwrap();
        let numeric = |seed: u64| {
            let mut cr = rng(seed);
            let c: Configuration = pg
                .vertices()
                .into_iter()
                .map(|v| (v, pt(cr.random_range(-10.0..10.0), cr.random_range(-10.0..10.0))))
                .collect();
            numeric_rank(&build_rigidity_matrix(&Framework::new(pg.clone(), c).unwrap()).unwrap(), &tol)
        };
        if numeric(trial) != expected && numeric(trial + 10_000) != expected {
            mismatches += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = k4_ok && mismatches == 0 && secs < 10.0;
    report(
        "rank identities",
        ok,
        format!("K4 rank {rank}, stress dim {stresses}; {mismatches} rank mismatches in 200 graphs; {secs:.2}s"),
    );
    assert!(ok);
}

#[test]
fn laman_and_circuit_exhaustive() {
    let start = Instant::now();
    let (mut graphs, mut laman_bad, mut circuit_bad) = (0, 0, 0);
    for n in 2..=6usize {
        for mask in 1u32..1 << (n * (n - 1) / 2) {
            let edges = subgraph_of_complete(n, mask);
            let g = Graph::from_indices(n, edges.clone()).unwrap();
            graphs += 1;
            if laman_check(&g).unwrap().satisfied != brute_laman(n, &edges) {
                laman_bad += 1;
            }
            if is_rigidity_circuit(&g, false) != brute_circuit(n, &edges) {
                circuit_bad += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = laman_bad == 0 && circuit_bad == 0 && secs < 60.0;
    report(
        "Laman and circuit counts",
        ok,
        format!("{graphs} graphs, {laman_bad} Laman and {circuit_bad} circuit disagreements; {secs:.2}s"),
    );
    assert!(ok);
}

#[test]
fn characterizations_agree() {
    let mut cases = vec![fixtures::dyad(), fixtures::triad(), fixtures::stacked_dyads()];
    let mut r = rng(2);
    for _ in 0..100 {
        let inner = r.random_range(1..=8);
        let pins = r.random_range(2..=4);
        cases.push(henneberg_pinned(inner, pins, &mut r));
    }
    let mut disagreements = 0;
    let mut assur = 0;
    for (i, g) in cases.iter().enumerate() {
        let c = characterization_crosscheck(g, i as u64).unwrap();
        let v = [c.minimal, c.circuit, c.vertex_deletion, c.edge_deletion];
        if v.iter().any(|&x| x != v[0]) || !c.agree {
            disagreements += 1;
        }
        assur += v[0] as usize;
    }
    let ok = disagreements == 0;
    report(
        "four characterizations",
        ok,
        format!("{} graphs ({assur} Assur), {disagreements} disagreements", cases.len()),
    );
    assert!(ok);
}

/// Components and dependency pairs, expressed as graphs so that the
/// comparison does not depend on component numbering.
fn scheme_shape(s: &AssurScheme) -> (BTreeSet<String>, BTreeSet<(String, String)>) {
    let key = |g: &PinnedGraph| format!("{:?}|{:?}|{:?}", g.inner(), g.pins(), g.edges());
    let comps = s.components.iter().map(key).collect();
    let order = s.order.iter().map(|&(a, b)| (key(&s.components[a]), key(&s.components[b]))).collect();
    (comps, order)
}

fn composite() -> PinnedGraph {
    PinnedGraph::new(
        ["a", "b", "c", "d", "e"],
        ["p1", "p2", "p3", "p4", "p5"],
        [
            ("a", "p1"),
            ("a", "p2"),
            ("b", "c"),
            ("c", "d"),
            ("b", "d"),
            ("b", "a"),
            ("c", "p3"),
            ("d", "p4"),
            ("e", "d"),
            ("e", "p5"),
        ],
    )
    .unwrap()
}

#[test]
fn decomposition_is_label_invariant() {
    let mut r = rng(3);
    let mut cases = vec![fixtures::dyad(), fixtures::triad(), fixtures::stacked_dyads(), composite(), fixtures::k33_assur()];
    for _ in 0..5 {
        cases.push(henneberg_pinned(r.random_range(2..=7), 3, &mut r));
    }
    let mut failures = 0;
    for g in &cases {
        let base = decompose(g).unwrap();
        let shape = scheme_shape(&base);
        if base.recompose().unwrap() != *g {
            failures += 1;
            continue;
        }
        for _ in 0..20 {
            let (h, back) = shuffle_labels(g, &mut r);
            let s = decompose(&h).unwrap();
            let mapped = AssurScheme {
                components: s.components.iter().map(|c| c.relabel(&back).unwrap()).collect(),
                order: s.order.clone(),
            };
            if scheme_shape(&mapped) != shape || s.recompose().unwrap() != h {
                failures += 1;
            }
        }
    }
    let ok = failures == 0;
    report(
        "decomposition uniqueness",
        ok,
        format!("{} fixtures x 20 relabelings, {failures} failures", cases.len()),
    );
    assert!(ok);
}

fn relative_scaled_error(a: &[f64], b: &[f64]) -> f64 {
    let ab: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let bb: f64 = b.iter().map(|y| y * y).sum();
    let k = ab / bb;
    let err: f64 = a.iter().zip(b).map(|(x, y)| (x - k * y).powi(2)).sum::<f64>().sqrt();
    err / a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dual_diameter(q: &[Point]) -> f64 {
    let mut d: f64 = 0.0;
    for a in q {
        for b in q {
            d = d.max((a - b).norm());
        }
    }
    d
}

#[test]
fn reciprocal_roundtrip() {
    let tol = Tolerance::default();
    let mut r = rng(4);
    let k4_config: Configuration =
        [("1", pt(0.0, 0.0)), ("2", pt(4.0, 0.0)), ("3", pt(1.7, 3.1)), ("4", pt(1.9, 1.1))].into_iter().collect();
    let mut frameworks = vec![Framework::new(fixtures::k4(), k4_config).unwrap()];
    for _ in 0..20 {
        let n = r.random_range(4..=10);
        frameworks.push(stacked_triangulation(n, &mut r));
    }
    let (mut worst_err, mut worst_closure) = (0.0f64, 0.0f64);
    let mut failures = 0;
    for f in &frameworks {
        let basis = self_stresses(f, &tol).unwrap();
        let edges: Vec<Edge> = f.graph().edges().iter().cloned().collect();
        let lambda: Vec<f64> = edges
            .iter()
            .map(|e| basis.iter().map(|s| s.get(e)).sum::<f64>())
            .collect();
        let mut s = basis[0].clone();
        for (e, l) in edges.iter().zip(&lambda) {
            s.lambda.insert(e.clone(), *l);
        }
        let emb = PlanarEmbedding::from_drawing(f.graph().underlying(), &f.points()).unwrap();
        let Ok(diagram) = reciprocal_from_stress(f, &s, &emb) else {
            failures += 1;
            continue;
        };
        let back = stress_from_reciprocal(f, &diagram).unwrap();
        let recovered: Vec<f64> = edges.iter().map(|e| back.get(e)).collect();
        worst_err = worst_err.max(relative_scaled_error(&recovered, &lambda));
        worst_closure = worst_closure.max(diagram.closure_residual / dual_diameter(&diagram.dual_points));
    }
    let ok = failures == 0 && worst_err <= 1e-8 && worst_closure <= 1e-7;
    report(
        "reciprocal roundtrip",
        ok,
        format!(
            "{} frameworks, max relative error {worst_err:.2e}, max closure/diameter {worst_closure:.2e}",
            frameworks.len()
        ),
    );
    assert!(ok);
}

/// `|det|` of the three leg lines written as unit normals with offsets in
/// units of the diameter; zero exactly when the lines are concurrent.
fn concurrency_defect(c: &Configuration, legs: [(&str, &str); 3]) -> f64 {
    let d = c.diameter();
    let line = |(u, v): (&str, &str)| {
        let (a, b) = (c.get(&u.into()).unwrap(), c.get(&v.into()).unwrap());
        let n = rot90(b - a).normalize();
        [n.x, n.y, -n.dot(&a) / d]
    };
    let rows: Vec<[f64; 3]> = legs.into_iter().map(line).collect();
    DMatrix::from_fn(3, 3, |i, j| rows[i][j]).determinant().abs()
}

#[test]
fn singular_synthesis() {
    let tol = Tolerance::default();
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, g) in [("dyad", fixtures::dyad()), ("triad", fixtures::triad())] {
        let start = Instant::now();
        let cert = construct_singular_planar(&g, None, 11).unwrap();
        let secs = start.elapsed().as_secs_f64();
        let f = &cert.framework;
        let rep = sufficiency_report(f, &tol).unwrap();
        let stresses = self_stresses(f, &tol).unwrap();
        let motions = first_order_motions(f, &tol).unwrap();
        let stress_margin = stresses[0].min_abs() / stresses[0].max_abs();
        let motion_margin = motions[0].min_speed() / motions[0].max_speed();
        let c = f.config();
        let geometry = if name == "dyad" {
            let p = |v: &str| c.get(&v.into()).unwrap();
            let (u, w) = (p("p1") - p("a"), p("p2") - p("a"));
            cross(u, w).abs() / (u.norm() * w.norm())
        } else {
            concurrency_defect(c, [("a", "p1"), ("b", "p2"), ("c", "p3")])
        };
        let this = stresses.len() == 1
            && motions.len() == 1
            && rep.stress_dim == 1
            && rep.motion_dim == 1
            && stress_margin >= 1e-6
            && motion_margin >= 1e-6
            && geometry <= 1e-6
            && verify_sufficiency(f, &tol).unwrap()
            && secs < 5.0;
        ok &= this;
        lines.push(format!(
            "{name}: margins {stress_margin:.2e}/{motion_margin:.2e}, geometric defect {geometry:.1e}, {secs:.2}s"
        ));
    }
    report("singular synthesis", ok, lines.join("; "));
    assert!(ok);
}

/// Largest distance of a unit vector of span(a) from span(b), via projections.
fn span_residual(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    if a.ncols() == 0 {
        return 0.0;
    }
    if b.ncols() == 0 {
        return 1.0;
    }
    let qa = a.clone().qr().q();
    let qb = b.clone().qr().q();
    let leftover = &qa - &qb * (qb.transpose() * &qa);
    leftover.column_iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn motion_matrix(f: &Framework, columns: &[VertexId], tol: &Tolerance) -> DMatrix<f64> {
    let ms = first_order_motions(f, tol).unwrap();
    DMatrix::from_fn(2 * columns.len(), ms.len(), |i, j| {
        let v = ms[j].get(&columns[i / 2]);
        if i % 2 == 0 {
            v.x
        } else {
            v.y
        }
    })
}

fn crossed_double_dyad() -> (Framework, Vec<(Edge, Edge)>) {
    let c: Configuration = [
        ("a", pt(0.3, 1.7)),
        ("b", pt(2.1, 1.9)),
        ("p1", pt(-0.4, -0.2)),
        ("p2", pt(2.6, 0.1)),
        ("p3", pt(0.2, 0.3)),
        ("p4", pt(3.3, 0.6)),
    ]
    .into_iter()
    .collect();
    (
        Framework::new(fixtures::double_dyad(), c).unwrap(),
        vec![(Edge::new("a", "p2"), Edge::new("b", "p3"))],
    )
}

/// Crank and rocker drawn crossing; one degree of freedom to transfer.
fn crossed_fourbar() -> (Framework, Vec<(Edge, Edge)>) {
    let c: Configuration =
        [("p1", pt(0.0, 0.0)), ("a", pt(2.0, 2.1)), ("b", pt(-0.2, 1.9)), ("p2", pt(2.3, 0.1))].into_iter().collect();
    (Framework::new(fixtures::fourbar(), c).unwrap(), vec![(Edge::new("p1", "a"), Edge::new("b", "p2"))])
}

/// First seeded generic drawing of the non-planar Assur graph in which the
/// declared bars cross.
fn crossed_k33() -> (Framework, Vec<(Edge, Edge)>) {
    let g = fixtures::k33_assur();
    let pair = (Edge::new("q1", "u1"), Edge::new("u2", "w1"));
    let c = (0..)
        .map(|seed| random_generic_configuration(&g, seed).unwrap())
        .find(|c| segments_cross(c, &pair.0, &pair.1))
        .unwrap();
    (Framework::new(g, c).unwrap(), vec![pair])
}

#[test]
fn crossing_transfer() {
    let tol = Tolerance::default();
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, (f, crossings)) in [
        ("double dyad", crossed_double_dyad()),
        ("four-bar", crossed_fourbar()),
        ("K33 Assur", crossed_k33()),
    ] {
        let geometric = crossings.iter().all(|(e, g)| segments_cross(f.config(), e, g));
        let b = bow_insert_crossings(&f, &crossings).unwrap();
        let columns: Vec<VertexId> = f.graph().inner().iter().cloned().collect();
        let m0 = motion_matrix(&f, &columns, &tol);
        let m1 = motion_matrix(&b.framework, &columns, &tol);
        let s0 = self_stresses(&f, &tol).unwrap().len();
        let s1 = self_stresses(&b.framework, &tol).unwrap().len();
        let residual = span_residual(&m0, &m1).max(span_residual(&m1, &m0));
        let this = geometric && s0 == s1 && m0.ncols() == m1.ncols() && residual <= 1e-8;
        ok &= this;
        lines.push(format!(
            "{name}: stresses {s0}/{s1}, motions {}/{}, span residual {residual:.1e}",
            m0.ncols(),
            m1.ncols()
        ));
    }
    report("crossing transfer", ok, lines.join("; "));
    assert!(ok);
}

/// Counts read straight off the graph: bars, inner triangles and pins.
fn expected_tally(g: &PinnedGraph) -> [usize; 4] {
    let inner: Vec<&VertexId> = g.inner().iter().collect();
    let mut triangles = 0;
    for i in 0..inner.len() {
        for j in i + 1..inner.len() {
            for k in j + 1..inner.len() {
                let (a, b, c) = (inner[i], inner[j], inner[k]);
                triangles += (g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c)) as usize;
            }
        }
    }
    let pins = if g.pins().len() >= 3 { g.pins().len() } else { 0 };
    [g.edge_count(), 3 * triangles, g.edge_count(), pins]
}

fn fourbar_pose(theta: f64, elbow: f64) -> Configuration {
    let a = pt(theta.cos(), theta.sin());
    let p2 = pt(3.0, 0.0);
    let d = (p2 - a).norm();
    let u = (p2 - a) / d;
    let x = (1.5f64.powi(2) - 1.2f64.powi(2) + d * d) / (2.0 * d);
    let h = elbow * (1.5f64.powi(2) - x * x).max(0.0).sqrt();
    let b = a + u * x + rot90(u) * h;
    [("a", a), ("b", b), ("p1", pt(0.0, 0.0)), ("p2", p2)].into_iter().collect()
}

#[test]
fn driver_calculus() {
    let tol = Tolerance::default();
    let mut problems = Vec::new();
    let mut linkages = 0;
    for (name, g) in [("dyad", fixtures::dyad()), ("triad", fixtures::triad())] {
        let specs = enumerate_insertions(&g).unwrap();
        let t = tally(&specs);
        let got = [t.pistons, t.triangle_angles, t.two_valent_angles, t.pin_angles];
        if got != expected_tally(&g) {
            problems.push(format!("{name} tally {got:?}"));
        }
        for (i, spec) in specs.iter().enumerate() {
            let l = insert_driver(&g, spec).unwrap();
            linkages += 1;
            if replace_driver(&l).unwrap() != g {
                problems.push(format!("{name} roundtrip {spec:?}"));
            }
            if generic_dof(l.graph()) != 1 {
                problems.push(format!("{name} dof {spec:?}"));
            }
            let c = random_generic_configuration(l.graph(), 100 + i as u64).unwrap();
            if matches!(spec, InsertionSpec::PinDemotion { .. }) {
                assur_kit::mechanism::check_demotion_geometry(&g, spec, &c).unwrap();
            }
            let ms = first_order_motions(&Framework::new(l.graph().clone(), c).unwrap(), &tol).unwrap();
            if ms.len() != 1 || ms[0].min_speed() < 1e-6 * ms[0].max_speed() {
                problems.push(format!("{name} motion {spec:?}"));
            }
        }
    }

    let crank = Linkage::new(fixtures::fourbar(), Driver::pin_angle("a", "p1", "p2", 1.0)).unwrap();
    let dead = detect_dead_end(&crank, &fourbar_pose((2.71f64 / 6.0).acos(), 0.0), &tol).unwrap();
    if dead.class != DeadEndClass::DeadEndCandidate || dead.stress_dim == 0 {
        problems.push(format!("dead center {dead:?}"));
    }
    let mut generic_ok = 0;
    for k in 0..10 {
        let theta = [0.15, 0.35, 0.55, 0.75, 0.95][k % 5] * if k < 5 { 1.0 } else { -1.0 };
        let elbow = if k % 2 == 0 { 1.0 } else { -1.0 };
        let rep = detect_dead_end(&crank, &fourbar_pose(theta, elbow), &tol).unwrap();
        if rep.class == DeadEndClass::NoEvidence {
            generic_ok += 1;
        } else {
            problems.push(format!("generic pose {theta} {elbow}: {:?}", rep.class));
        }
    }
    let ok = problems.is_empty();
    report(
        "driver calculus",
        ok,
        format!(
            "{linkages} linkages, dead center {:?} (stress dim {}), {generic_ok}/10 generic poses without evidence{}",
            dead.class,
            dead.stress_dim,
            if ok { String::new() } else { format!("; {}", problems.join(", ")) }
        ),
    );
    assert!(ok);
}

#[test]
fn piston_follows_circle() {
    let g = PinnedGraph::new(["a"], ["p1", "p2"], [("a", "p2")]).unwrap();
    let l = Linkage::new(g.clone(), Driver::piston("a", "p1", 1.0)).unwrap();
    let theta0: f64 = 0.5;
    let c: Configuration =
        [("a", pt(theta0.cos(), theta0.sin())), ("p1", pt(3.0, 0.0)), ("p2", pt(0.0, 0.0))].into_iter().collect();
    let t = drive(&l, &c, 1e-3, 1000).unwrap();
    let mut worst: f64 = 0.0;
    let len0 = (c.get(&"a".into()).unwrap() - pt(3.0, 0.0)).norm();
    for (k, s) in t.samples.iter().enumerate() {
        let a = s.config.get(&"a".into()).unwrap();
        let len = len0 + 1e-3 * k as f64;
        let theta = ((10.0 - len * len) / 6.0).acos();
        worst = worst.max((a - pt(theta.cos(), theta.sin())).norm());
    }
    let drift = t.max_length_drift(&g);
    let ok = t.samples.len() == 1001 && t.events.is_empty() && worst <= 1e-7 && drift <= 1e-8;
    report(
        "piston path following",
        ok,
        format!("{} samples, max arc error {worst:.2e}, bar drift {drift:.2e}", t.samples.len()),
    );
    assert!(ok);
}
