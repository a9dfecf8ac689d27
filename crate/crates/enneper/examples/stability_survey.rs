//! Stability verdicts across motif arrangements: the two polynomial
//! criteria, their agreement, and the exact-arithmetic authority for inputs
//! on dyadic coordinates.

use enneper::stability::{decide_stability, decide_stability_exact, ExactMotif};
use enneper::{Complex, HelicalMotif, MotifField};

fn survey(name: &str, field: &MotifField) -> enneper::Result<()> {
    let report = decide_stability(field)?;
    let b: Vec<String> = report.b.iter().map(|v| format!("{:.3}{:+.3}i", v.re, v.im)).collect();
    println!("  {:<22} {:?}  b = [{}]", name, report.verdict, b.join(", "));
    Ok(())
}

fn main() -> enneper::Result<()> {
    println!("verdicts (b_k are the pitch moments sum p_j z_j^k):");
    survey("dipole", &MotifField::dipole(1.0, 0.45)?)?;
    survey("same-handed pair", &MotifField::same_handed_pair(1.0, 0.5)?)?;
    survey("single motif", &MotifField::single(Complex::new(0.0, 0.0), 0.7)?)?;

    // A ring of five motifs with a compensating center cancels every moment
    // below the ring order.
    let n = 5usize;
    let (p, radius) = (0.4, 1.2);
    let mut motifs = vec![HelicalMotif::new(Complex::new(0.0, 0.0), -(n as f64) * p)];
    for j in 0..n {
        let ang = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
        motifs.push(HelicalMotif::new(Complex::from_polar(radius, ang), p));
    }
    survey("5-ring with center", &MotifField::finite(motifs.clone())?)?;

    // Nudge one ring pitch: the cancellation breaks.
    motifs[2] = HelicalMotif::new(motifs[2].center(), p + 1e-3);
    survey("perturbed 5-ring", &MotifField::finite(motifs)?)?;

    // Exact arithmetic settles perturbations far below float noise. The
    // motifs sit on rationals: +3/4 and -3/4 with pitches 1/2 and -1/2,
    // the second bumped by (1e-9)^3 = 1e-27.
    let tiny = ExactMotif::ratio(1, 1_000_000_000);
    let exact = vec![
        ExactMotif::new(
            enneper::stability::ExactComplex::new(ExactMotif::ratio(3, 4), ExactMotif::ratio(0, 1)),
            ExactMotif::ratio(1, 2),
        ),
        ExactMotif::new(
            enneper::stability::ExactComplex::new(
                ExactMotif::ratio(-3, 4),
                ExactMotif::ratio(0, 1),
            ),
            ExactMotif::ratio(-1, 2) + tiny.clone() * tiny.clone() * tiny,
        ),
    ];
    println!(
        "exact dipole with a 1e-27 pitch bump: {:?}",
        decide_stability_exact(&exact)?
    );
    Ok(())
}
