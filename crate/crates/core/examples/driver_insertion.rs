//! All ways of turning a triad into a driven one-degree-of-freedom linkage.
use assur_kit::fixtures;
use assur_kit::mechanism::{enumerate_insertions, insert_driver, replace_driver, tally};

fn main() -> assur_kit::Result<()> {
    let g = fixtures::triad();
    let specs = enumerate_insertions(&g)?;
    println!("{:?}", tally(&specs));
    for s in &specs {
        let l = insert_driver(&g, s)?;
        assert_eq!(replace_driver(&l)?, g);
        println!("{:?} -> {} bars", l.driver().kind, l.graph().edge_count());
    }
    Ok(())
}
