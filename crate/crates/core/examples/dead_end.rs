//! A crank-driven four-bar at its dead center, and at an ordinary position.
use assur_kit::mechanism::{detect_dead_end, Driver, Linkage};
use assur_kit::numeric::Tolerance;
use assur_kit::{fixtures, pt, Configuration};

fn main() -> assur_kit::Result<()> {
    let l = Linkage::new(fixtures::fourbar(), Driver::pin_angle("a", "p1", "p2", 1.0))?;
    let pose = |theta: f64, dead: bool| -> Configuration {
        let a = pt(theta.cos(), theta.sin());
        let p2 = pt(3.0, 0.0);
        let d = (p2 - a).norm();
        let u = (p2 - a) / d;
        let x = (1.5f64.powi(2) - 1.2f64.powi(2) + d * d) / (2.0 * d);
        let h = if dead { 0.0 } else { (1.5f64.powi(2) - x * x).sqrt() };
        let b = a + u * x + assur_kit::rot90(u) * h;
        [("a", a), ("b", b), ("p1", pt(0.0, 0.0)), ("p2", p2)].into_iter().collect()
    };
    let tol = Tolerance::default();
    println!("dead center: {:?}", detect_dead_end(&l, &pose((2.71f64 / 6.0).acos(), true), &tol)?);
    println!("ordinary:    {:?}", detect_dead_end(&l, &pose(0.6, false), &tol)?);
    Ok(())
}
