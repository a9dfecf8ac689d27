//! Far-field behaviour of finite configurations: the height decomposes into
//! a shared helical term plus a convergent series in 1/z, and curvature
//! decays like 1/r^4 once the pitches cancel.

use enneper::immersion::curvature_exact;
use enneper::multipole::{far_field_check, MultipoleExpansion};
use enneper::{Complex, MotifField};

fn main() -> enneper::Result<()> {
    let r = 1.0;
    let pitch = 0.5;
    let dipole = MotifField::dipole(r, pitch)?;

    let exp = MultipoleExpansion::of(&dipole, 6)?;
    println!("opposite pair R = {}, p = {}:", r, pitch);
    println!("  total pitch {:+.3} (helical term vanishes)", exp.total_pitch);
    println!("  series coefficients c_k:");
    for (k, c) in exp.coefficients.iter().enumerate() {
        println!("    c_{}: {:+.6}{:+.6}i", k + 1, c.re, c.im);
    }
    // c_1 = -sum p_j z_j = -p R for this arrangement, all higher odd
    // moments follow the powers of R/2.
    println!("  expected c_1 = -pR = {:+.6}", -pitch * r);

    println!("series accuracy on distant circles:");
    for radius in [5.0, 10.0, 20.0] {
        let report = far_field_check(&dipole, radius, 8, 256)?;
        println!(
            "  r {:>4}: sup |h - series| {:.3e} (bound {:.3e}), fitted pitch {:+.2e}",
            radius, report.sup_error, report.truncation_bound, report.fitted_pitch
        );
    }

    println!("curvature decay against the leading-order prediction:");
    for radius in [10.0, 30.0, 100.0] {
        let k = curvature_exact(&dipole, Complex::new(radius, 0.0))?;
        let prediction = exp.predicted_far_curvature(radius);
        println!(
            "  r {:>4}: K {:+.6e}, predicted {:+.6e}, ratio {:.6}",
            radius,
            k,
            prediction,
            k / prediction
        );
    }

    // An equal pair keeps a net helical term; the fitted pitch on a far
    // circle recovers the sum of the pitches.
    let pair = MotifField::same_handed_pair(r, pitch)?;
    let report = far_field_check(&pair, 25.0, 8, 256)?;
    println!(
        "equal pair: fitted pitch {:+.6} vs total {:+.6}",
        report.fitted_pitch, report.total_pitch
    );
    Ok(())
}
