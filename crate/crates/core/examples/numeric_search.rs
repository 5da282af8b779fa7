//! Finding a singular position numerically and probing its motion.
use assur_kit::fixtures;
use assur_kit::numeric::Tolerance;
use assur_kit::singular::{conjecture_probe, numeric_singular_search, ConjectureStats};

fn main() -> assur_kit::Result<()> {
    let mut stats = ConjectureStats::default();
    for seed in 0..5 {
        if let Some(cert) = numeric_singular_search(&fixtures::triad(), seed, 10)? {
            let r = conjecture_probe(&cert.framework, &Tolerance::default())?;
            stats.record(&r);
        }
    }
    println!("{stats:?}");
    Ok(())
}
