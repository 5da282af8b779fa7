//! A triad placed so that it carries a full self-stress and a full motion.
use assur_kit::fixtures;
use assur_kit::singular::construct_singular_planar;

fn main() -> assur_kit::Result<()> {
    let cert = construct_singular_planar(&fixtures::triad(), None, 7)?;
    for (v, p) in cert.framework.config().iter() {
        let vel = cert.motion.velocity.get(v).copied().unwrap_or_default();
        println!("{v}: ({:+.4}, {:+.4})  velocity ({:+.4}, {:+.4})", p.x, p.y, vel.x, vel.y);
    }
    for (e, l) in &cert.stress.lambda {
        println!("lambda[{e}] = {l:+.5}");
    }
    println!("margins: stress {:.3e}, motion {:.3e}", cert.stress_margin, cert.motion_margin);
    Ok(())
}
