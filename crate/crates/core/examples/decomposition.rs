//! Splitting an isostatic pinned graph into Assur components.
use assur_kit::assur::decompose;
use assur_kit::PinnedGraph;

fn main() -> assur_kit::Result<()> {
    // A dyad carrying a triad, which in turn carries a dyad.
    let g = PinnedGraph::new(
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
    )?;
    let scheme = decompose(&g)?;
    for (i, c) in scheme.components.iter().enumerate() {
        let inner: Vec<_> = c.inner().iter().map(|v| v.as_str()).collect();
        let pins: Vec<_> = c.pins().iter().map(|v| v.as_str()).collect();
        println!("component {i}: inner {inner:?} on {pins:?}");
    }
    println!("order (lower, dependent): {:?}", scheme.order);
    assert_eq!(scheme.recompose()?, g);
    Ok(())
}
