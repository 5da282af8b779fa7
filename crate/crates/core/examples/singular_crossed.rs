//! The same synthesis when the pin contraction is not planar: one crossing is
//! declared, which makes the crossed contraction planar.
use assur_kit::singular::construct_singular_nonplanar;
use assur_kit::{fixtures, Edge};

fn main() -> assur_kit::Result<()> {
    let g = fixtures::k33_assur();
    let sketch = [(Edge::new("q1", "u1"), Edge::new("u2", "w1"))];
    let cert = construct_singular_nonplanar(&g, &sketch, 1)?;
    println!("stress margin {:.3e}, motion margin {:.3e}", cert.stress_margin, cert.motion_margin);
    println!("every bar stressed: {}", cert.stress.is_full());
    println!("every inner vertex moving: {}", cert.motion.moves_all());
    Ok(())
}
