//! Infinite motif chains: total curvature of a period cell and the pitch at
//! which the south bands of neighboring motifs merge.

use enneper::area::{strip_tail_bound, total_curvature_north};
use enneper::levelset::detect_transition;
use enneper::region::Region;
use enneper::MotifField;

fn main() -> enneper::Result<()> {
    let (p, l) = (0.3, 1.0);
    let y = 3.0 * l;
    let cell = Region::rect(0.0, 2.0 * l, -y, y)?;
    println!("chains with pitch {} and spacing {}", p, l);
    println!("truncation tail bound at |y| = {}: {:.2e}", y, strip_tail_bound(p, l, y));

    for (name, field) in [
        ("equal-handed", MotifField::tgb(p, l)?),
        ("alternating", MotifField::utgb(p, l)?),
    ] {
        let k = total_curvature_north(&field, &cell, 1e-6)?;
        println!(
            "  {}: total curvature over one 2l cell {:.6} ({:.6} in units of -4 pi)",
            name,
            k,
            k / (-4.0 * std::f64::consts::PI)
        );
    }

    let want = 2.0 * l / std::f64::consts::PI;
    for (name, family) in [
        ("equal-handed", (&|p| MotifField::tgb(p, l)) as &dyn Fn(f64) -> enneper::Result<MotifField>),
        ("alternating", &|p| MotifField::utgb(p, l)),
    ] {
        let t = detect_transition(family, 0.45 * l, 0.9 * l, (-0.5, 1.5, -1.0, 1.0), 512, 20)?;
        println!(
            "  {} chain transition at p = {:.4} (expect 2 l / pi = {:.4})",
            name, t.pitch_critical, want
        );
    }
    Ok(())
}
