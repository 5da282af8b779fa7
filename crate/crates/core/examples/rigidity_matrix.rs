//! Rigidity matrix, self-stresses and motions of K4 and of a pinned triad.
use assur_kit::numeric::{build_rigidity_matrix, nontrivial_motions, numeric_rank, self_stresses, Tolerance};
use assur_kit::{fixtures, pt, Configuration, Framework};

fn main() -> assur_kit::Result<()> {
    let tol = Tolerance::default();
    let c: Configuration =
        [("1", pt(0.0, 0.0)), ("2", pt(4.0, 0.0)), ("3", pt(1.7, 3.1)), ("4", pt(1.9, 1.1))].into_iter().collect();
    let k4 = Framework::new(fixtures::k4(), c)?;
    let r = build_rigidity_matrix(&k4)?;
    println!("K4: {}x{} matrix, rank {}", r.rows(), r.cols(), numeric_rank(&r, &tol));
    for s in self_stresses(&k4, &tol)? {
        for (e, l) in &s.lambda {
            println!("  lambda[{e}] = {l:+.6}");
        }
    }
    println!("nontrivial motions: {}", nontrivial_motions(&k4, &tol)?.len());
    Ok(())
}
