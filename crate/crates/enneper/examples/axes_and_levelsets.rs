//! Axis curves: the |g| = 1 contours lift to the near-vertical filaments of
//! the surface. Extracts them for a pair, measures straightness and
//! separation, and shows the CSV serializations used by the CLI reports.

use enneper::levelset::{axes_csv, axis_metrics, extract_axes, level_set_csv, trace_level_set};
use enneper::MotifField;

fn main() -> enneper::Result<()> {
    let pitch = 0.5;
    let field = MotifField::same_handed_pair(1.0, pitch)?;
    let bbox = (-1.8, 1.8, -1.4, 1.4);

    let axes = extract_axes(&field, bbox, 512, 1e-8)?;
    let metrics = axis_metrics(&axes);
    println!("equal pair R = 1, p = {}:", pitch);
    println!("  {} axis curves", metrics.count);
    println!("  min planar separation {:.6} (motif separation 1)", metrics.min_separation);
    println!(
        "  inclination from vertical: max {:.3e} rad, mean {:.3e} rad",
        metrics.max_inclination, metrics.mean_inclination
    );
    for (i, axis) in axes.iter().enumerate() {
        let top = axis.points.iter().map(|p| p[2]).fold(f64::MIN, f64::max);
        let bottom = axis.points.iter().map(|p| p[2]).fold(f64::MAX, f64::min);
        println!(
            "  axis {}: {} points, closed {}, height span [{:+.4}, {:+.4}]",
            i,
            axis.points.len(),
            axis.closed,
            bottom,
            top
        );
    }

    let csv = axes_csv(&axes);
    println!("axes CSV, first rows:");
    for line in csv.lines().take(3) {
        println!("  {}", line);
    }

    // Raw level sets of log|g| at a few heights; negative levels bound the
    // south islands around each motif. |g| is the reciprocal of the height
    // gradient modulus.
    let s = |x: f64, y: f64| match field.hz_hzz(enneper::Complex::new(x, y)) {
        Ok((hz, _)) => -hz.norm().ln(),
        Err(_) => f64::NEG_INFINITY,
    };
    for level in [-0.5, 0.0, 0.5] {
        let contours = trace_level_set(&|x, y| s(x, y) - level, bbox, 384, 384, true);
        let total: usize = contours.iter().map(|c| c.points.len()).sum();
        println!(
            "level log|g| = {:+.1}: {} contour(s), {} points",
            level,
            contours.len(),
            total
        );
        if level == 0.0 {
            let head = level_set_csv(&contours);
            for line in head.lines().take(2) {
                println!("  {}", line);
            }
        }
    }
    Ok(())
}
