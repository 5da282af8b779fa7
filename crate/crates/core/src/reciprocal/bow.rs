//! Crossing insertion (Bow's notation) and the transfer of stresses and
//! motions between a framework and its crossed version.

use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::{cross, Configuration, Edge, Framework, PinnedGraph, Point, VertexId};
use crate::numeric::{first_order_motions, rank_of, self_stresses, Tolerance};

/// A framework with crossing points inserted as 4-valent inner vertices.
#[derive(Clone, Debug)]
pub struct BowedFramework {
    pub framework: Framework,
    /// For every original edge, the vertex chain from its first to its second endpoint.
    pub chains: BTreeMap<Edge, Vec<VertexId>>,
    pub crossings: Vec<VertexId>,
}

impl BowedFramework {
    /// New edges replacing `e`, in chain order.
    pub fn chain_edges(&self, e: &Edge) -> Vec<Edge> {
        self.chains
            .get(e)
            .map(|c| c.windows(2).map(|w| Edge::new(&w[0], &w[1])).collect())
            .unwrap_or_default()
    }
}

fn fresh_name(g: &PinnedGraph, taken: &BTreeSet<VertexId>, i: usize) -> VertexId {
    let mut name = format!("x{i}");
    while g.contains(&VertexId::new(name.clone())) || taken.contains(&VertexId::new(name.clone())) {
        name.push('\'');
    }
    VertexId::new(name)
}

/// Inserts a vertex at the intersection of the lines of each listed edge pair
/// and splits both edges there.
pub fn bow_insert_crossings(f: &Framework, crossings: &[(Edge, Edge)]) -> Result<BowedFramework> {
    let g = f.graph();
    let scale = f.config().diameter().max(1e-300);
    let mut on_edge: BTreeMap<Edge, Vec<(f64, VertexId)>> = BTreeMap::new();
    let mut config = f.config().clone();
    let mut names = Vec::new();
    let mut taken = BTreeSet::new();
    for (i, (e1, e2)) in crossings.iter().enumerate() {
        for e in [e1, e2] {
            if !g.edges().contains(e) {
                return Err(Error::BadCrossing(e1.clone(), e2.clone(), format!("{e} is not an edge")));
            }
        }
        if e1 == e2 {
            return Err(Error::BadCrossing(e1.clone(), e2.clone(), "an edge cannot cross itself".into()));
        }
        let (a, b) = (f.config().point(e1.first())?, f.config().point(e1.second())?);
        let (c, d) = (f.config().point(e2.first())?, f.config().point(e2.second())?);
        let (u, v) = (b - a, d - c);
        let denom = cross(u, v);
        if denom.abs() <= 1e-12 * u.norm() * v.norm() {
            return Err(Error::BadCrossing(e1.clone(), e2.clone(), "lines are parallel".into()));
        }
        let t = cross(c - a, v) / denom;
        let s = cross(c - a, u) / denom;
        let x = a + t * u;
        if [a, b, c, d].iter().any(|p| (p - x).norm() <= 1e-9 * scale) {
            return Err(Error::BadCrossing(e1.clone(), e2.clone(), "lines meet at a vertex".into()));
        }
        let name = fresh_name(g, &taken, i);
        taken.insert(name.clone());
        config.insert(name.clone(), x);
        on_edge.entry(e1.clone()).or_default().push((t, name.clone()));
        on_edge.entry(e2.clone()).or_default().push((s, name.clone()));
        names.push(name);
    }
    let mut inner: BTreeSet<VertexId> = g.inner().clone();
    inner.extend(names.iter().cloned());
    let mut edges = BTreeSet::new();
    let mut chains = BTreeMap::new();
    for e in g.edges() {
        let mut chain = vec![e.first().clone()];
        if let Some(list) = on_edge.get_mut(e) {
            list.sort_by(|x, y| x.0.total_cmp(&y.0));
            for w in list.windows(2) {
                let gap = (config.get(&w[0].1).unwrap() - config.get(&w[1].1).unwrap()).norm();
                if gap <= 1e-9 * scale {
                    return Err(Error::BadCrossing(
                        e.clone(),
                        e.clone(),
                        "two crossings coincide on this edge".into(),
                    ));
                }
            }
            chain.extend(list.iter().map(|(_, n)| n.clone()));
        }
        chain.push(e.second().clone());
        for w in chain.windows(2) {
            edges.insert(Edge::new(&w[0], &w[1]));
        }
        chains.insert(e.clone(), chain);
    }
    let graph = PinnedGraph::from_parts(inner, g.pins().clone(), edges)?;
    Ok(BowedFramework { framework: Framework::new(graph, config)?, chains, crossings: names })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransferReport {
    /// Stress dimensions of the original and the crossed framework.
    pub stress_dims: (usize, usize),
    pub motion_dims: (usize, usize),
    /// Largest distance of an original motion from the span of the restricted motions.
    pub span_residual: f64,
    /// Largest equilibrium defect of crossed stresses read back on the original edges.
    pub stress_residual: f64,
    pub chains_valid: bool,
    pub passed: bool,
}

/// Orthonormal basis of the column span of `m`.
fn span(m: &DMatrix<f64>, tol: &Tolerance) -> DMatrix<f64> {
    if m.ncols() == 0 || m.nrows() == 0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let r = rank_of(m, tol);
    let svd = m.clone().svd(true, false);
    let u = svd.u.unwrap();
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let cols: Vec<_> = idx[..r].iter().map(|&i| u.column(i).into_owned()).collect();
    if cols.is_empty() {
        DMatrix::zeros(m.nrows(), 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Compares stress and motion spaces of `f` and its crossed version `fb`.
pub fn motions_transfer_check(f: &Framework, fb: &BowedFramework, tol: &Tolerance) -> TransferReport {
    let mut report = TransferReport {
        stress_dims: (0, 0),
        motion_dims: (0, 0),
        span_residual: f64::INFINITY,
        stress_residual: f64::INFINITY,
        chains_valid: false,
        passed: false,
    };
    let (Ok(s0), Ok(s1), Ok(m0), Ok(m1)) = (
        self_stresses(f, tol),
        self_stresses(&fb.framework, tol),
        first_order_motions(f, tol),
        first_order_motions(&fb.framework, tol),
    ) else {
        return report;
    };
    report.stress_dims = (s0.len(), s1.len());
    report.motion_dims = (m0.len(), m1.len());

    // Motions: restrict to the original inner vertices and compare spans.
    let cols: Vec<VertexId> = f.graph().inner().iter().cloned().collect();
    let orig = DMatrix::from_fn(2 * cols.len(), m0.len(), |r, c| {
        let v = m0[c].get(&cols[r / 2]);
        if r % 2 == 0 { v.x } else { v.y }
    });
    let restricted = DMatrix::from_fn(2 * cols.len(), m1.len(), |r, c| {
        let v = m1[c].get(&cols[r / 2]);
        if r % 2 == 0 { v.x } else { v.y }
    });
    let q = span(&restricted, tol);
    report.span_residual = if q.ncols() != m0.len() {
        f64::INFINITY
    } else {
        let proj = &orig - &q * (q.transpose() * &orig);
        proj.column_iter().map(|c| c.norm()).fold(0.0, f64::max)
    };

    // Stresses: read each crossed stress back on the original edges.
    let chains_valid = f.graph().edges().iter().all(|e| match fb.chains.get(e) {
        Some(c) => {
            c.len() >= 2
                && c.first() == Some(e.first())
                && c.last() == Some(e.second())
                && c.windows(2).all(|w| fb.framework.graph().has_edge(&w[0], &w[1]))
        }
        None => false,
    });
    report.chains_valid = chains_valid;
    if chains_valid {
        let at = |cfg: &Configuration, v: &VertexId| cfg.get(v).unwrap_or_else(Point::zeros);
        let mut worst: f64 = 0.0;
        let mut induced = Vec::new();
        for s in &s1 {
            let mut lambda = BTreeMap::new();
            for e in f.graph().edges() {
                let c = &fb.chains[e];
                let d = at(f.config(), e.first()) - at(f.config(), e.second());
                let seg = at(fb.framework.config(), &c[0]) - at(fb.framework.config(), &c[1]);
                let l = s.get(&Edge::new(&c[0], &c[1])) * seg.dot(&d) / d.norm_squared();
                lambda.insert(e.clone(), l);
            }
            let induced_stress = crate::numeric::SelfStress { lambda };
            let scale = induced_stress.max_abs().max(1e-300) * f.config().diameter().max(1.0);
            worst = worst.max(crate::numeric::equilibrium_residual(f, &induced_stress) / scale);
            induced.push(induced_stress);
        }
        let edges: Vec<Edge> = f.graph().edges().iter().cloned().collect();
        let m = DMatrix::from_fn(edges.len(), induced.len(), |r, c| induced[c].get(&edges[r]));
        report.stress_residual = if rank_of(&m, tol) == s0.len() { worst } else { f64::INFINITY };
    }
    report.passed = report.stress_dims.0 == report.stress_dims.1
        && report.motion_dims.0 == report.motion_dims.1
        && report.span_residual <= 1e-8
        && report.stress_residual <= tol.residual_abs
        && chains_valid;
    report
}
