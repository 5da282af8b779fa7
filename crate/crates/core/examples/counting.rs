//! Laman counts, rigidity circuits and the pinned conditions.
use assur_kit::counts::{is_rigidity_circuit, laman_check, pinned_framework_conditions};
use assur_kit::{contract_pins, fixtures, Graph};

fn main() -> assur_kit::Result<()> {
    let k4 = Graph::from_indices(4, vec![[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]])?;
    let r = laman_check(&k4)?;
    println!("K4 Laman: {} ({:?})", r.satisfied, r.witness.map(|w| w.violated));
    println!("K4 is a circuit: {}", is_rigidity_circuit(&k4, false));

    for (name, g) in [("dyad", fixtures::dyad()), ("fourbar", fixtures::fourbar())] {
        let r = pinned_framework_conditions(&g);
        println!("{name}: pinned conditions {}", r.satisfied);
    }
    let c = contract_pins(&fixtures::dyad())?;
    println!("contracted dyad is a circuit (multigraph): {}", is_rigidity_circuit(&c.graph, true));
    Ok(())
}
