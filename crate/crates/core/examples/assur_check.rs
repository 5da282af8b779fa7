//! Assur recognition with the four characterizations compared.
use assur_kit::assur::{characterization_crosscheck, is_assur};
use assur_kit::fixtures;

fn main() -> assur_kit::Result<()> {
    for (name, g) in [
        ("dyad", fixtures::dyad()),
        ("triad", fixtures::triad()),
        ("stacked dyads", fixtures::stacked_dyads()),
    ] {
        let r = characterization_crosscheck(&g, 0)?;
        println!(
            "{name:14} assur={} minimal={} circuit={} vertex={} edge={} agree={}",
            is_assur(&g),
            r.minimal,
            r.circuit,
            r.vertex_deletion,
            r.edge_deletion,
            r.agree
        );
    }
    Ok(())
}
