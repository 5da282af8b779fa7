//! Inserting crossing vertices and checking that stresses and motions carry over.
use assur_kit::numeric::Tolerance;
use assur_kit::reciprocal::{bow_insert_crossings, motions_transfer_check};
use assur_kit::{fixtures, pt, Configuration, Edge, Framework};

fn main() -> assur_kit::Result<()> {
    let c: Configuration = [
        ("a", pt(0.3, 1.7)),
        ("b", pt(2.1, 1.9)),
        ("p1", pt(-0.4, -0.2)),
        ("p2", pt(2.6, 0.1)),
        ("p3", pt(0.2, 0.3)),
        ("p4", pt(3.3, 0.6)),
    ]
    .into_iter()
    .collect();
    let f = Framework::new(fixtures::double_dyad(), c)?;
    let b = bow_insert_crossings(&f, &[(Edge::new("a", "p2"), Edge::new("b", "p3"))])?;
    for (edge, chain) in &b.chains {
        let names: Vec<_> = chain.iter().map(|v| v.as_str()).collect();
        println!("{edge}: {}", names.join(" - "));
    }
    let r = motions_transfer_check(&f, &b, &Tolerance::default());
    println!("{r:#?}");
    Ok(())
}
