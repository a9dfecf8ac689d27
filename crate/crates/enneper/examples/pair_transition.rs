//! Topology of the south regions of a same-handed pair and of a dipole as
//! the pitch grows: two islands merge into one at a critical pitch.

use enneper::levelset::{detect_transition, south_component_count};
use enneper::MotifField;

fn main() -> enneper::Result<()> {
    let r = 1.0;
    let bbox = (-1.8, 1.8, -1.4, 1.4);
    println!("south components (|g| <= 1) for the same-handed pair, R = {}", r);
    for p in [0.6, 0.8, 1.0, 1.2, 1.4] {
        let n = south_component_count(&MotifField::same_handed_pair(r, p)?, bbox, 384);
        println!("  p = {:.1}: {}", p, n);
    }

    let pair = detect_transition(
        &|p| MotifField::same_handed_pair(r, p),
        0.55 * r,
        1.45 * r,
        bbox,
        512,
        20,
    )?;
    println!(
        "pair transition at p = {:.4} (merge of the two islands; expect R = {})",
        pair.pitch_critical, r
    );

    let dipole = detect_transition(
        &|p| MotifField::dipole(r, p),
        0.28 * r,
        0.72 * r,
        (-1.2, 1.2, -0.9, 0.9),
        512,
        20,
    )?;
    println!(
        "dipole transition at p = {:.4} (Cassini ovals touch; expect R/2 = {})",
        dipole.pitch_critical,
        0.5 * r
    );
    Ok(())
}
