//! The `assur-kit` command line. JSON goes to stdout; exit codes are 0 on
//! success, 1 when the analysis answers negatively and 2 on bad input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::assur::{characterization_crosscheck, decompose, is_assur, sufficiency_report};
use crate::counts::{generic_dof, is_pinned_isostatic, laman_check, pinned_framework_conditions, pinned_generic_rank};
use crate::error::Error;
use crate::io::{config_json, framework_json, parse_configuration, parse_framework, parse_linkage, Document};
use crate::mechanism::{detect_dead_end, drive};
use crate::model::{Configuration, Framework, PinnedGraph};
use crate::numeric::{build_rigidity_matrix, first_order_motions, numeric_rank, random_generic_configuration, self_stresses, Motion, SelfStress, Tolerance};
use crate::reciprocal::{bow_insert_crossings, planar_embed, reciprocal_from_stress, PlanarEmbedding};
use crate::render::{render_svg, RenderSpec, Scene};
use crate::singular::{construct_singular_nonplanar, construct_singular_planar, numeric_singular_search, SingularCertificate};

#[derive(Parser, Debug)]
#[command(name = "assur-kit", version, about = "Rigidity and Assur analysis of pinned bar-joint frameworks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Framework or linkage JSON document.
    input: PathBuf,
    /// Seed for every random draw.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative singular-value cutoff for numerical rank.
    #[arg(long)]
    tol: Option<f64>,
    /// Configuration JSON overriding the document's own.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write an SVG drawing here.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Counting conditions (Laman, or the pinned conditions when there are pins).
    Check {
        #[command(flatten)]
        common: Common,
        /// Also compare with the numerical rank at a configuration.
        #[arg(long)]
        numeric: bool,
    },
    /// Assur test, characterization cross-check and stress/motion data.
    Analyze {
        #[command(flatten)]
        common: Common,
    },
    /// Assur components and their partial order.
    Decompose {
        #[command(flatten)]
        common: Common,
    },
    /// A realization with a full self-stress and a full motion.
    Singular {
        #[command(flatten)]
        common: Common,
        /// Search numerically instead of the dual construction.
        #[arg(long)]
        numeric: bool,
        /// Multistart budget for the numerical search.
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Reciprocal diagram of the framework (pins ignored) under its self-stress.
    Reciprocal {
        #[command(flatten)]
        common: Common,
    },
    /// Follow a linkage along its driver.
    Drive {
        #[command(flatten)]
        common: Common,
        /// Number of steps to take
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Driver parameter increment per step, scaled by the driver's rate
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
    /// Dead-end evidence at a linkage configuration.
    Deadend {
        #[command(flatten)]
        common: Common,
    },
}

/// Failure of a command: the message and its exit code.
struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotAssur
            | Error::NotPlanar { .. }
            | Error::RetryExhausted(_)
            | Error::Construction(_)
            | Error::ClosureFailure { .. }
            | Error::NotParallel(_)
            | Error::PinMoved(_)
            | Error::Internal(_) => 1,
            _ => 2,
        };
        Failure(code, e.to_string())
    }
}

type Outcome = std::result::Result<(Value, i32), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(2, format!("{}: {e}", path.display())))
}

fn tolerance(c: &Common) -> Tolerance {
    let mut t = Tolerance::default();
    if let Some(x) = c.tol {
        t.rank_rel = x;
    }
    t
}

fn document(c: &Common) -> std::result::Result<Document, Failure> {
    let mut doc = parse_framework(&read(&c.input)?)?;
    if let Some(p) = &c.config {
        doc.config = Some(parse_configuration(&read(p)?)?);
    }
    Ok(doc)
}

fn framework_or_sample(doc: &Document, seed: u64) -> std::result::Result<Framework, Failure> {
    let config = match &doc.config {
        Some(c) => c.clone(),
        None => random_generic_configuration(&doc.graph, seed)?,
    };
    let f = Framework::new(doc.graph.clone(), config)?;
    f.check_pin_locations()?;
    Ok(f)
}

fn write_svg(c: &Common, scene: Scene) -> std::result::Result<(), Failure> {
    if let Some(path) = &c.svg {
        let svg = render_svg(&scene, &RenderSpec::default())?;
        fs::write(path, svg).map_err(|e| Failure(2, format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn stress_json(s: &SelfStress) -> Value {
    Value::Array(s.lambda.iter().map(|(e, l)| json!({ "edge": e, "lambda": l })).collect())
}

fn motion_json(m: &Motion) -> Value {
    let c: Configuration = m.velocity.iter().map(|(v, p)| (v.clone(), *p)).collect();
    config_json(&c)
}

fn check(c: &Common, numeric: bool) -> Outcome {
    let doc = document(c)?;
    let g = &doc.graph;
    let pinned = !g.pins().is_empty();
    let report = if pinned { pinned_framework_conditions(g) } else { laman_check(&g.underlying())? };
    let mut out = json!({
        "pinned": pinned,
        "satisfied": report.satisfied,
        "counts": report.counts,
        "witness": report.witness,
        "generic_rank": pinned_generic_rank(g),
        "generic_dof": generic_dof(g),
    });
    if numeric {
        let f = framework_or_sample(&doc, c.seed)?;
        let r = build_rigidity_matrix(&f)?;
        out["numeric_rank"] = json!(numeric_rank(&r, &tolerance(c)));
    }
    if c.svg.is_some() {
        let f = framework_or_sample(&doc, c.seed)?;
        write_svg(c, Scene::Framework { framework: &f, stress: None, motion: None, driver: None })?;
    }
    Ok((out, if report.satisfied { 0 } else { 1 }))
}

fn analyze(c: &Common) -> Outcome {
    let doc = document(c)?;
    let g = &doc.graph;
    let tol = tolerance(c);
    let counts = pinned_framework_conditions(g);
    let assur = is_assur(g);
    let mut out = json!({
        "isostatic": is_pinned_isostatic(g),
        "assur": assur,
        "counts": counts,
        "generic_dof": generic_dof(g),
    });
    if counts.satisfied {
        out["crosscheck"] = serde_json::to_value(characterization_crosscheck(g, c.seed)?).unwrap();
        out["components"] = json!(decompose(g)?.components.len());
    }
    let f = framework_or_sample(&doc, c.seed)?;
    let stresses = self_stresses(&f, &tol)?;
    let motions = first_order_motions(&f, &tol)?;
    out["stress_dim"] = json!(stresses.len());
    out["motion_dim"] = json!(motions.len());
    if doc.config.is_some() {
        out["sufficiency"] = serde_json::to_value(sufficiency_report(&f, &tol)?).unwrap();
    } else {
        out["config"] = config_json(f.config());
    }
    write_svg(
        c,
        Scene::Framework { framework: &f, stress: stresses.first(), motion: motions.first(), driver: None },
    )?;
    Ok((out, if assur { 0 } else { 1 }))
}

fn decompose_cmd(c: &Common) -> Outcome {
    let doc = document(c)?;
    let scheme = decompose(&doc.graph)?;
    let components: Vec<Value> = scheme.components.iter().map(|k| framework_json(k, None)).collect();
    let out = json!({
        "components": components,
        "order": scheme.order,
        "sources": scheme.sources(),
        "assur": scheme.components.len() == 1,
    });
    Ok((out, 0))
}

fn certificate_json(cert: &SingularCertificate, method: &str) -> Value {
    let mut v = json!({
        "method": method,
        "framework": framework_json(cert.framework.graph(), Some(cert.framework.config())),
        "stress": stress_json(&cert.stress),
        "motion": motion_json(&cert.motion),
        "stress_margin": cert.stress_margin,
        "motion_margin": cert.motion_margin,
        "stress_residual": cert.stress_residual,
        "motion_residual": cert.motion_residual,
        "attempts": cert.attempts,
    });
    if let Some(p) = &cert.parallel_drawing {
        v["parallel_drawing"] = config_json(p);
    }
    if let Some(p) = &cert.coincident_pins {
        v["coincident_pins"] = config_json(p);
    }
    v
}

fn singular(c: &Common, numeric: bool, budget: usize) -> Outcome {
    let doc = document(c)?;
    let g = &doc.graph;
    let (cert, method) = if numeric {
        match numeric_singular_search(g, c.seed, budget)? {
            Some(cert) => (cert, "numeric"),
            None => return Ok((json!({ "method": "numeric", "found": false }), 1)),
        }
    } else if doc.crossings.is_empty() {
        (construct_singular_planar(g, None, c.seed)?, "dual")
    } else {
        (construct_singular_nonplanar(g, &doc.crossings, c.seed)?, "crossings")
    };
    write_svg(
        c,
        Scene::Framework {
            framework: &cert.framework,
            stress: Some(&cert.stress),
            motion: Some(&cert.motion),
            driver: None,
        },
    )?;
    Ok((certificate_json(&cert, method), 0))
}

fn reciprocal(c: &Common) -> Outcome {
    let doc = document(c)?;
    let config = doc
        .config
        .clone()
        .ok_or_else(|| Failure(2, "the reciprocal needs a configuration".into()))?;
    let unpinned = PinnedGraph::unpinned(doc.graph.vertices(), doc.graph.edges().iter().map(|e| (e.first().clone(), e.second().clone())))?;
    let mut f = Framework::new(unpinned, config)?;
    if !doc.crossings.is_empty() {
        f = bow_insert_crossings(&f, &doc.crossings)?.framework;
    }
    let stresses = self_stresses(&f, &tolerance(c))?;
    let Some(s) = stresses.first() else {
        return Ok((json!({ "stress_dim": 0 }), 1));
    };
    let g = f.graph().underlying();
    let embedding = PlanarEmbedding::from_drawing(g.clone(), &f.points()).or_else(|_| planar_embed(&g))?;
    let r = reciprocal_from_stress(&f, s, &embedding)?;
    write_svg(c, Scene::Reciprocal { framework: &f, diagram: &r })?;
    let out = json!({
        "stress_dim": stresses.len(),
        "stress": stress_json(s),
        "framework": framework_json(f.graph(), Some(f.config())),
        "dual_config": config_json(&r.dual_config),
        "closure_residual": r.closure_residual,
    });
    Ok((out, 0))
}

fn linkage_and_config(c: &Common) -> std::result::Result<(crate::mechanism::Linkage, Configuration), Failure> {
    let doc = parse_linkage(&read(&c.input)?)?;
    let config = match &c.config {
        Some(p) => parse_configuration(&read(p)?)?,
        None => doc.config.ok_or_else(|| Failure(2, "the linkage needs a configuration".into()))?,
    };
    Ok((doc.linkage, config))
}

fn drive_cmd(c: &Common, steps: usize, step: f64) -> Outcome {
    let (l, config) = linkage_and_config(c)?;
    let t = drive(&l, &config, step, steps)?;
    let bar = l.driver().virtual_bar();
    write_svg(c, Scene::Trajectory { graph: l.graph(), trajectory: &t, driver: Some(&bar) })?;
    let out = json!({
        "samples": t.samples,
        "events": t.events,
        "max_length_drift": t.max_length_drift(l.graph()),
    });
    Ok((out, 0))
}

fn deadend(c: &Common) -> Outcome {
    let (l, config) = linkage_and_config(c)?;
    let r = detect_dead_end(&l, &config, &tolerance(c))?;
    let mut out = serde_json::to_value(&r).unwrap();
    out["note"] = json!("numerical proxy: a self-stress is necessary for a dead end, never sufficient");
    Ok((out, 0))
}

/// Runs the command line given by `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Check { common, numeric } => check(common, *numeric),
        Command::Analyze { common } => analyze(common),
        Command::Decompose { common } => decompose_cmd(common),
        Command::Singular { common, numeric, steps } => singular(common, *numeric, *steps),
        Command::Reciprocal { common } => reciprocal(common),
        Command::Drive { common, steps, step } => drive_cmd(common, *steps, *step),
        Command::Deadend { common } => deadend(common),
    };
    match result {
        Ok((value, code)) => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&value).unwrap());
            code
        }
        Err(Failure(code, message)) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}
