//! Closed-form checks on the single helical motif: the planar image, the
//! curvature profile, and the annulus area.

use enneper::area::integrate_area;
use enneper::immersion::{curvature_exact, immerse};
use enneper::region::Region;
use enneper::{Complex, MotifField};

fn main() -> enneper::Result<()> {
    let p0 = 1.0;
    let field = MotifField::single(Complex::new(0.0, 0.0), p0)?;

    println!("single motif, pitch {}", p0);
    println!("chart radius r maps to planar radius r - p0^2/(4r):");
    for r in [0.6, 1.0, 2.0, 4.0] {
        let z = Complex::new(r, 0.0);
        let [x, y, h] = immerse(&field, z)?;
        let rho = (x * x + y * y).sqrt();
        let k = curvature_exact(&field, z)?;
        let k_formula = -p0 * p0 / (p0 * p0 + rho * rho).powi(2);
        println!(
            "  r {:>4}: planar radius {:.6} height {:+.6} K {:+.6} (formula {:+.6})",
            r, rho, h, k, k_formula
        );
    }

    // The |g| = 1 ring r = p0/2 lands on the vertical axis itself.
    let ring = Complex::new(0.5 * p0, 0.0);
    let [x, y, _] = immerse(&field, ring)?;
    println!("ring r = p0/2 maps to axis distance {:.2e}", (x * x + y * y).sqrt());

    let (r1, r2) = (1.0, 2.0);
    let area = integrate_area(&field, &Region::annulus(Complex::new(0.0, 0.0), r1, r2)?, 1e-10)?;
    let closed = std::f64::consts::PI
        * ((r2 * r2 - r1 * r1) + p0 * p0 * (r2 / r1).ln()
            - p0.powi(4) / 16.0 * (1.0 / (r2 * r2) - 1.0 / (r1 * r1)));
    println!("annulus [{}, {}] area {:.12}", r1, r2, area);
    println!("closed form          {:.12}", closed);
    Ok(())
}
