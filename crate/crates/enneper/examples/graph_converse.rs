//! The converse direction: starting from a harmonic graph, recover the
//! potential by integrating the slope system, and measure how far a motif
//! field's own graph is from satisfying it.

use enneper::graph::{
    deviation_scan, graph_to_enneper, helicoid_outer_preimage, integrability_residual, MotifGraph,
};
use enneper::{Complex, MotifField};

fn main() -> enneper::Result<()> {
    // Helicoid graph: integrate the slope system along a square path and
    // compare with the closed-form potential on the steep sheet.
    let p0 = 1.0;
    let single = MotifField::single(Complex::new(0.0, 0.0), p0)?;
    let graph = MotifGraph(&single);
    let path = [
        Complex::new(2.0, 0.0),
        Complex::new(2.0, 2.0),
        Complex::new(-2.0, 2.0),
        Complex::new(-2.0, -1.5),
    ];
    let anchor = -helicoid_outer_preimage(p0, path[0], 200).conj();
    let states = graph_to_enneper(&graph, &path, anchor, 1e-10)?;
    println!("helicoid graph, potential along a polyline:");
    for st in states.iter().skip(1) {
        let exact = -helicoid_outer_preimage(p0, st.zeta, 200).conj();
        println!(
            "  zeta {:+.3}{:+.3}i: recovered P {:+.9}{:+.9}i (err {:.2e})",
            st.zeta.re,
            st.zeta.im,
            st.p.re,
            st.p.im,
            (st.p - exact).norm()
        );
    }

    // A motif pair is not a minimal graph. The obstruction is the mixed
    // second derivative of the slope system, which equals -H h_z exactly.
    let dipole = MotifField::dipole(1.0, 0.45)?;
    let dipole_graph = MotifGraph(&dipole);
    println!("opposite pair, integrability defect -H h_z at sample points:");
    for z in [Complex::new(1.5, 0.5), Complex::new(0.0, 1.0), Complex::new(-0.8, -1.2)] {
        let r = integrability_residual(&dipole_graph, z)?;
        println!("  z {:+.2}{:+.2}i: residual {:+.6}{:+.6}i (|r| {:.3e})", z.re, z.im, r.re, r.im, r.norm());
    }

    // Dimensionless deviation |H| / sqrt(-K): zero for a true minimal
    // surface, and decaying like 1/|z|^2 here.
    let points: Vec<Complex> =
        (1..=6).map(|k| Complex::new(k as f64 * 1.5, 0.75)).collect();
    let samples = deviation_scan(&dipole, &points)?;
    println!("deviation |H|/sqrt(-K) along a ray:");
    for s in &samples {
        let r = (s.x * s.x + s.y * s.y).sqrt();
        println!("  |z| {:>5.2}: deviation {:.6}", r, s.deviation);
    }
    Ok(())
}
