//! Reciprocal of a stressed K4 and the stress read back from it.
use assur_kit::numeric::{self_stresses, Tolerance};
use assur_kit::reciprocal::{reciprocal_from_stress, stress_from_reciprocal, PlanarEmbedding};
use assur_kit::render::{render_svg, RenderSpec, Scene};
use assur_kit::{fixtures, pt, Configuration, Framework};

fn main() -> assur_kit::Result<()> {
    let c: Configuration =
        [("1", pt(0.0, 0.0)), ("2", pt(4.0, 0.0)), ("3", pt(1.7, 3.1)), ("4", pt(1.9, 1.1))].into_iter().collect();
    let f = Framework::new(fixtures::k4(), c)?;
    let s = self_stresses(&f, &Tolerance::default())?.remove(0);
    let e = PlanarEmbedding::from_drawing(f.graph().underlying(), &f.points())?;
    let r = reciprocal_from_stress(&f, &s, &e)?;
    for (face, q) in r.dual_config.iter() {
        println!("{face}: ({:+.4}, {:+.4})", q.x, q.y);
    }
    let back = stress_from_reciprocal(&f, &r)?;
    for (edge, l) in &back.lambda {
        println!("{edge}: {l:+.6} (was {:+.6})", s.get(edge));
    }
    let svg = render_svg(&Scene::Reciprocal { framework: &f, diagram: &r }, &RenderSpec::default())?;
    println!("svg: {} bytes", svg.len());
    Ok(())
}
