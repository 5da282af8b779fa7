//! Driving a piston: the moving vertex follows a circle about its pin.
use assur_kit::mechanism::{drive, Driver, Linkage};
use assur_kit::{pt, Configuration, PinnedGraph};

fn main() -> assur_kit::Result<()> {
    let g = PinnedGraph::new(["a"], ["p1", "p2"], [("a", "p2")])?;
    let l = Linkage::new(g, Driver::piston("a", "p1", 1.0))?;
    let c: Configuration =
        [("a", pt(0.5f64.cos(), 0.5f64.sin())), ("p1", pt(3.0, 0.0)), ("p2", pt(0.0, 0.0))].into_iter().collect();
    let t = drive(&l, &c, 0.01, 100)?;
    for s in t.samples.iter().step_by(20) {
        let a = s.config.get(&"a".into()).unwrap();
        println!("piston {:.3}: a = ({:+.5}, {:+.5}), |a| = {:.12}", s.parameter, a.x, a.y, a.norm());
    }
    println!("bar drift {:.2e}", t.max_length_drift(l.graph()));
    Ok(())
}
