//! Level sets of the Gauss map, hemisphere transitions and screw axes.
//!
//! The unit circle `|g| = 1` of the Gauss map separates north-pointing from
//! south-pointing normals; its preimage curves lift to the near-vertical axis
//! curves of the surface. The south sublevel set `|g| <= 1` consists of one
//! component per motif when motifs are weak, and its components fuse at a
//! critical pitch; counting components on a grid locates that transition for
//! every family with the same code path.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Complex, MotifField};

/// One traced level curve. For closed curves the first vertex is repeated at
/// the end, so lifted quantities expose their monodromy over one loop.
#[derive(Clone, Debug)]
pub struct Contour {
    pub points: Vec<Complex>,
    pub closed: bool,
}

struct Tracer<'a> {
    s: &'a dyn Fn(f64, f64) -> f64,
    x0: f64,
    y0: f64,
    dx: f64,
    dy: f64,
    nx: usize,
    refine: bool,
    crossings: HashMap<u64, usize>,
    points: Vec<Complex>,
    segments: Vec<(usize, usize)>,
}

impl Tracer<'_> {
    fn grid_point(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x0 + self.dx * i as f64, self.y0 + self.dy * j as f64)
    }

    /// Crossing on the edge from grid node (i, j) toward +x (horizontal) or
    /// +y (vertical), located by linear interpolation and optionally polished
    /// by bisection.
    fn crossing(&mut self, i: usize, j: usize, vertical: bool, sa: f64, sb: f64) -> usize {
        let key = 2 * (j as u64 * self.nx as u64 + i as u64) + vertical as u64;
        if let Some(&idx) = self.crossings.get(&key) {
            return idx;
        }
        let (xa, ya) = self.grid_point(i, j);
        let (xb, yb) = if vertical {
            (xa, ya + self.dy)
        } else {
            (xa + self.dx, ya)
        };
        let mut t = if sa == sb { 0.5 } else { sa / (sa - sb) };
        if self.refine {
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            let inside_a = sa >= 0.0;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let sm = (self.s)(xa + (xb - xa) * mid, ya + (yb - ya) * mid);
                if (sm >= 0.0) == inside_a {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            t = 0.5 * (lo + hi);
        }
        let p = Complex::new(xa + (xb - xa) * t, ya + (yb - ya) * t);
        self.points.push(p);
        let idx = self.points.len() - 1;
        self.crossings.insert(key, idx);
        idx
    }
}

/// Marching squares on `[x0, x1] x [y0, y1]` with an `nx x ny` node grid.
/// Saddle cells are disambiguated by the sign at the cell center. With
/// `refine` the crossings are polished to the actual zero by bisection.
pub fn trace_level_set(
    s: &dyn Fn(f64, f64) -> f64,
    bbox: (f64, f64, f64, f64),
    nx: usize,
    ny: usize,
    refine: bool,
) -> Vec<Contour> {
    let (x0, x1, y0, y1) = bbox;
    assert!(nx >= 2 && ny >= 2);
    let dx = (x1 - x0) / (nx - 1) as f64;
    let dy = (y1 - y0) / (ny - 1) as f64;
    let mut values = vec![0.0f64; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            values[j * nx + i] = s(x0 + dx * i as f64, y0 + dy * j as f64);
        }
    }
    let mut tr = Tracer {
        s,
        x0,
        y0,
        dx,
        dy,
        nx,
        refine,
        crossings: HashMap::new(),
        points: Vec::new(),
        segments: Vec::new(),
    };
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let s0 = values[j * nx + i];
            let s1 = values[j * nx + i + 1];
            let s2 = values[(j + 1) * nx + i + 1];
            let s3 = values[(j + 1) * nx + i];
            let code = (s0 >= 0.0) as u8
                | ((s1 >= 0.0) as u8) << 1
                | ((s2 >= 0.0) as u8) << 2
                | ((s3 >= 0.0) as u8) << 3;
            if code == 0 || code == 15 {
                continue;
            }
            // Edge crossing indices, computed on demand.
            let e0 = |tr: &mut Tracer| tr.crossing(i, j, false, s0, s1);
            let e1 = |tr: &mut Tracer| tr.crossing(i + 1, j, true, s1, s2);
            let e2 = |tr: &mut Tracer| tr.crossing(i, j + 1, false, s3, s2);
            let e3 = |tr: &mut Tracer| tr.crossing(i, j, true, s0, s3);
            let push = |tr: &mut Tracer, a: usize, b: usize| tr.segments.push((a, b));
            match code {
                1 | 14 => {
                    let (a, b) = (e3(&mut tr), e0(&mut tr));
                    push(&mut tr, a, b);
                }
                2 | 13 => {
                    let (a, b) = (e0(&mut tr), e1(&mut tr));
                    push(&mut tr, a, b);
                }
                3 | 12 => {
                    let (a, b) = (e3(&mut tr), e1(&mut tr));
                    push(&mut tr, a, b);
                }
                4 | 11 => {
                    let (a, b) = (e1(&mut tr), e2(&mut tr));
                    push(&mut tr, a, b);
                }
                6 | 9 => {
                    let (a, b) = (e0(&mut tr), e2(&mut tr));
                    push(&mut tr, a, b);
                }
                7 | 8 => {
                    let (a, b) = (e2(&mut tr), e3(&mut tr));
                    push(&mut tr, a, b);
                }
                5 | 10 => {
                    let cx = x0 + dx * (i as f64 + 0.5);
                    let cy = y0 + dy * (j as f64 + 0.5);
                    let center_in = s(cx, cy) >= 0.0;
                    let diag_in = code == 5;
                    // The center sign decides which pairs of pockets the
                    // saddle separates.
                    let pair_bottom_right = center_in == diag_in;
                    if pair_bottom_right {
                        let (a, b) = (e0(&mut tr), e1(&mut tr));
                        push(&mut tr, a, b);
                        let (a, b) = (e2(&mut tr), e3(&mut tr));
                        push(&mut tr, a, b);
                    } else {
                        let (a, b) = (e3(&mut tr), e0(&mut tr));
                        push(&mut tr, a, b);
                        let (a, b) = (e1(&mut tr), e2(&mut tr));
                        push(&mut tr, a, b);
                    }
                }
                _ => unreachable!(),
            }
        }
    }
    chain_segments(&tr.points, &tr.segments)
}

fn chain_segments(points: &[Complex], segments: &[(usize, usize)]) -> Vec<Contour> {
    let mut at_point: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, &(a, b)) in segments.iter().enumerate() {
        at_point.entry(a).or_default().push(k);
        at_point.entry(b).or_default().push(k);
    }
    let other = |seg: (usize, usize), p: usize| if seg.0 == p { seg.1 } else { seg.0 };
    let mut used = vec![false; segments.len()];
    let mut contours = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a0, b0) = segments[start];
        // Walk forward from b0, then stitch the backward walk from a0.
        let walk = |used: &mut Vec<bool>, from: usize| -> Vec<usize> {
            let mut chain = Vec::new();
            let mut here = from;
            loop {
                let next = at_point[&here]
                    .iter()
                    .copied()
                    .find(|&k| !used[k]);
                match next {
                    Some(k) => {
                        used[k] = true;
                        here = other(segments[k], here);
                        chain.push(here);
                    }
                    None => break,
                }
            }
            chain
        };
        let fwd = walk(&mut used, b0);
        let closed = fwd.last() == Some(&a0);
        let mut ids: Vec<usize> = if closed {
            let mut v = vec![a0, b0];
            v.extend(&fwd);
            v
        } else {
            let mut back = walk(&mut used, a0);
            back.reverse();
            back.push(a0);
            back.push(b0);
            back.extend(&fwd);
            back
        };
        if ids.len() < 2 {
            continue;
        }
        if closed {
            // First vertex already repeated by construction above only if
            // fwd ended exactly at a0; make it explicit.
            if ids.first() != ids.last() {
                let f = ids[0];
                ids.push(f);
            }
        }
        contours.push(Contour {
            points: ids.iter().map(|&i| points[i]).collect(),
            closed,
        });
    }
    contours
}

/// Number of 4-connected components of `{inside}` rasterized on an
/// `n x n` cell grid over `bbox`.
pub fn region_component_count(
    inside: &dyn Fn(f64, f64) -> bool,
    bbox: (f64, f64, f64, f64),
    n: usize,
) -> usize {
    let (x0, x1, y0, y1) = bbox;
    let dx = (x1 - x0) / n as f64;
    let dy = (y1 - y0) / n as f64;
    let mut grid = vec![false; n * n];
    for j in 0..n {
        for i in 0..n {
            let x = x0 + dx * (i as f64 + 0.5);
            let y = y0 + dy * (j as f64 + 0.5);
            grid[j * n + i] = inside(x, y);
        }
    }
    let mut seen = vec![false; n * n];
    let mut count = 0;
    let mut stack = Vec::new();
    for idx in 0..n * n {
        if !grid[idx] || seen[idx] {
            continue;
        }
        count += 1;
        seen[idx] = true;
        stack.push(idx);
        while let Some(k) = stack.pop() {
            let (i, j) = (k % n, k / n);
            let mut visit = |t: usize| {
                if grid[t] && !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            };
            if i > 0 {
                visit(k - 1);
            }
            if i + 1 < n {
                visit(k + 1);
            }
            if j > 0 {
                visit(k - n);
            }
            if j + 1 < n {
                visit(k + n);
            }
        }
    }
    count
}

/// Sign function of the south sublevel set `|g| <= 1`, i.e. `|hz| >= 1`.
/// Points inside the singular guard count as south (the Gauss map tends to
/// zero into a motif center).
pub fn south_indicator(field: &MotifField) -> impl Fn(f64, f64) -> bool + '_ {
    move |x, y| match field.hz_hzz(Complex::new(x, y)) {
        Ok((hz, _)) => hz.norm_sqr() >= 1.0,
        Err(_) => true,
    }
}

pub fn south_component_count(
    field: &MotifField,
    bbox: (f64, f64, f64, f64),
    n: usize,
) -> usize {
    region_component_count(&south_indicator(field), bbox, n)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TransitionReport {
    pub pitch_critical: f64,
    pub pitch_low: f64,
    pub pitch_high: f64,
    pub count_low: usize,
    pub count_high: usize,
    pub grid: usize,
}

/// Locates the pitch where the south sublevel set changes component count,
/// by bisection on the pitch parameter of `family`.
pub fn detect_transition(
    family: &dyn Fn(f64) -> Result<MotifField>,
    pitch_lo: f64,
    pitch_hi: f64,
    bbox: (f64, f64, f64, f64),
    grid: usize,
    iterations: usize,
) -> Result<TransitionReport> {
    let count_at = |p: f64| -> Result<usize> {
        Ok(south_component_count(&family(p)?, bbox, grid))
    };
    let count_low = count_at(pitch_lo)?;
    let count_high = count_at(pitch_hi)?;
    if count_low <= count_high {
        return Err(Error::Config(format!(
            "no fusion between pitch {} (count {}) and {} (count {})",
            pitch_lo, count_low, pitch_hi, count_high
        )));
    }
    let (mut lo, mut hi) = (pitch_lo, pitch_hi);
    for _ in 0..iterations {
        let mid = 0.5 * (lo + hi);
        if count_at(mid)? > count_high {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(TransitionReport {
        pitch_critical: 0.5 * (lo + hi),
        pitch_low: pitch_lo,
        pitch_high: pitch_hi,
        count_low,
        count_high,
        grid,
    })
}

/// An axis curve: the lift of one `|g| = 1` contour onto the surface.
#[derive(Clone, Debug)]
pub struct AxisCurve {
    pub planar: Vec<Complex>,
    pub points: Vec<[f64; 3]>,
    pub closed: bool,
}

/// Traces `|g| = 1` in the box and lifts each contour through the immersion,
/// carrying the potential and the height along the curve continuously
/// (quadrature for `P`, exact branch increments for `h`). Heights are
/// anchored per contour at the principal branch of its first vertex.
pub fn extract_axes(
    field: &MotifField,
    bbox: (f64, f64, f64, f64),
    grid: usize,
    tol: f64,
) -> Result<Vec<AxisCurve>> {
    let s = |x: f64, y: f64| match field.hz_hzz(Complex::new(x, y)) {
        Ok((hz, _)) => hz.norm() - 1.0,
        Err(_) => 1e9,
    };
    let contours = trace_level_set(&s, bbox, grid, grid, true);
    let mut axes = Vec::with_capacity(contours.len());
    for contour in contours {
        if contour.points.len() < 2 {
            continue;
        }
        let start_jet = field.eval_jet(contour.points[0])?;
        let heights = field.eval_h_continuous(&contour.points, start_jet.h)?;
        let seg_tol = tol / (contour.points.len() - 1) as f64;
        let mut p = start_jet.p;
        let mut pts = Vec::with_capacity(contour.points.len());
        for (k, &z) in contour.points.iter().enumerate() {
            if k > 0 {
                p += field.numeric_p_along(&contour.points[k - 1..=k], seg_tol)?;
            }
            let planar = z - p.conj();
            pts.push([planar.re, planar.im, heights[k]]);
        }
        axes.push(AxisCurve { planar: contour.points, points: pts, closed: contour.closed });
    }
    Ok(axes)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct AxisMetrics {
    pub count: usize,
    /// Smallest planar distance between points of distinct axes; infinite
    /// when fewer than two axes exist.
    pub min_separation: f64,
    /// Largest angle (radians) between a fitted axis line and the vertical.
    pub max_inclination: f64,
    pub mean_inclination: f64,
}

/// Direction of the least-squares line through the 3D points, by power
/// iteration on the scatter matrix.
fn principal_direction(points: &[[f64; 3]]) -> [f64; 3] {
    let n = points.len().max(1) as f64;
    let mut mean = [0.0f64; 3];
    for p in points {
        for a in 0..3 {
            mean[a] += p[a];
        }
    }
    for a in 0..3 {
        mean[a] /= n;
    }
    let mut cov = [[0.0f64; 3]; 3];
    for p in points {
        let d = [p[0] - mean[0], p[1] - mean[1], p[2] - mean[2]];
        for a in 0..3 {
            for b in 0..3 {
                cov[a][b] += d[a] * d[b];
            }
        }
    }
    let mut v = [0.577350269189626, 0.577350269189626, 0.577350269189626];
    for _ in 0..200 {
        let mut w = [0.0f64; 3];
        for a in 0..3 {
            for b in 0..3 {
                w[a] += cov[a][b] * v[b];
            }
        }
        let len = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
        if len < 1e-300 {
            return [0.0, 0.0, 1.0];
        }
        for a in 0..3 {
            v[a] = w[a] / len;
        }
    }
    v
}

pub fn axis_metrics(axes: &[AxisCurve]) -> AxisMetrics {
    let mut min_sep = f64::INFINITY;
    for (i, a) in axes.iter().enumerate() {
        for b in axes.iter().skip(i + 1) {
            for &pa in &a.planar {
                for &pb in &b.planar {
                    min_sep = min_sep.min((pa - pb).norm());
                }
            }
        }
    }
    let mut max_inc = 0.0f64;
    let mut sum_inc = 0.0f64;
    for axis in axes {
        let d = principal_direction(&axis.points);
        let vertical = d[2].abs().min(1.0);
        let inc = vertical.acos();
        max_inc = max_inc.max(inc);
        sum_inc += inc;
    }
    AxisMetrics {
        count: axes.len(),
        min_separation: min_sep,
        max_inclination: max_inc,
        mean_inclination: if axes.is_empty() { 0.0 } else { sum_inc / axes.len() as f64 },
    }
}

/// CSV rows `curve,x,y` for traced contours.
pub fn level_set_csv(contours: &[Contour]) -> String {
    let mut out = String::from("curve,x,y\n");
    for (id, c) in contours.iter().enumerate() {
        for p in &c.points {
            out.push_str(&format!("{},{},{}\n", id, p.re, p.im));
        }
    }
    out
}

/// CSV rows `axis,x,y,z` for lifted axis curves.
pub fn axes_csv(axes: &[AxisCurve]) -> String {
    let mut out = String::from("axis,x,y,z\n");
    for (id, a) in axes.iter().enumerate() {
        for p in &a.points {
            out.push_str(&format!("{},{},{},{}\n", id, p[0], p[1], p[2]));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn traces_a_circle() {
        let s = |x: f64, y: f64| 1.0 - x * x - y * y;
        let contours = trace_level_set(&s, (-1.6, 1.6, -1.6, 1.6), 96, 96, true);
        assert_eq!(contours.len(), 1);
        let ring = &contours[0];
        assert!(ring.closed);
        assert_eq!(ring.points.first(), ring.points.last());
        for p in &ring.points {
            assert!((p.norm() - 1.0).abs() < 1e-12, "radius {}", p.norm());
        }
        // Polygon length close to the circumference.
        let len: f64 = ring.points.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
        assert!((len - 2.0 * std::f64::consts::PI).abs() < 3e-2, "len {}", len);
    }

    #[test]
    fn traces_open_curves_to_the_boundary() {
        let s = |x: f64, _: f64| x;
        let contours = trace_level_set(&s, (-1.0, 1.0, 0.0, 1.0), 32, 32, true);
        assert_eq!(contours.len(), 1);
        assert!(!contours[0].closed);
        for p in &contours[0].points {
            assert!(p.re.abs() < 1e-12);
        }
    }

    #[test]
    fn saddle_cells_split_consistently() {
        // s = x y has a saddle at the origin; with the center rule each
        // quadrant pairing is consistent and chains do not cross.
        let s = |x: f64, y: f64| x * y + 0.001;
        let contours = trace_level_set(&s, (-1.0, 1.0, -1.0, 1.0), 64, 64, true);
        assert_eq!(contours.len(), 2);
        for ct in &contours {
            for p in &ct.points {
                assert!((p.re * p.im + 0.001).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn component_counts_across_transitions() {
        // Fused and split sublevel sets for the pair families; critical
        // pitches are R for the same-handed pair and R/2 for the dipole.
        let bbox = (-1.8, 1.8, -1.4, 1.4);
        let pair = |p: f64| MotifField::same_handed_pair(1.0, p).unwrap();
        assert_eq!(south_component_count(&pair(0.85), bbox, 192), 2);
        assert_eq!(south_component_count(&pair(1.15), bbox, 192), 1);
        let dip = |p: f64| MotifField::dipole(1.0, p).unwrap();
        assert_eq!(south_component_count(&dip(0.42), bbox, 192), 2);
        assert_eq!(south_component_count(&dip(0.58), bbox, 192), 1);
    }

    #[test]
    fn transition_detection_all_families() {
        let grid = 256;
        let dip = detect_transition(
            &|p| MotifField::dipole(1.0, p),
            0.3,
            0.7,
            (-1.2, 1.2, -0.9, 0.9),
            grid,
            24,
        )
        .unwrap();
        assert!(
            (dip.pitch_critical - 0.5).abs() < 0.015,
            "dipole p_c = {}",
            dip.pitch_critical
        );
        let tgb = detect_transition(
            &|p| MotifField::tgb(p, 1.0),
            0.4,
            0.9,
            (-0.5, 1.5, -1.0, 1.0),
            grid,
            24,
        )
        .unwrap();
        let want = 2.0 / std::f64::consts::PI;
        assert!(
            (tgb.pitch_critical - want).abs() < 0.015,
            "tgb p_c = {} want {}",
            tgb.pitch_critical,
            want
        );
        let utgb = detect_transition(
            &|p| MotifField::utgb(p, 1.0),
            0.4,
            0.9,
            (-0.5, 1.5, -1.0, 1.0),
            grid,
            24,
        )
        .unwrap();
        assert!(
            (utgb.pitch_critical - want).abs() < 0.015,
            "utgb p_c = {}",
            utgb.pitch_critical
        );
    }

    #[test]
    fn transition_rejects_unbracketed_sweep() {
        assert!(detect_transition(
            &|p| MotifField::dipole(1.0, p),
            0.6,
            0.7,
            (-1.2, 1.2, -0.9, 0.9),
            64,
            8,
        )
        .is_err());
    }

    #[test]
    fn helicoid_axis_is_the_vertical_line() {
        // The |g| = 1 ring of one motif maps exactly onto the vertical line
        // through its center, rising by 2 pi p0 per loop.
        let z0 = c(0.3, -0.2);
        let f = MotifField::single(z0, 1.0).unwrap();
        let axes = extract_axes(&f, (-0.4, 1.0, -0.9, 0.5), 128, 1e-10).unwrap();
        assert_eq!(axes.len(), 1);
        let axis = &axes[0];
        assert!(axis.closed);
        for p in &axis.points {
            assert!((p[0] - 0.3).abs() < 1e-8 && (p[1] + 0.2).abs() < 1e-8);
        }
        let dz = axis.points.last().unwrap()[2] - axis.points[0][2];
        assert!(
            (dz.abs() - 2.0 * std::f64::consts::PI).abs() < 1e-8,
            "monodromy {}",
            dz
        );
        let m = axis_metrics(&axes);
        assert!(m.max_inclination < 1e-6);
        assert!(m.min_separation.is_infinite());
    }

    #[test]
    fn pair_axes_metrics() {
        let f = MotifField::same_handed_pair(1.0, 0.5).unwrap();
        let axes = extract_axes(&f, (-1.2, 1.2, -0.8, 0.8), 160, 1e-9).unwrap();
        assert_eq!(axes.len(), 2);
        let m = axis_metrics(&axes);
        assert_eq!(m.count, 2);
        // Lifted axes are helices wobbling about the motif centers, so the
        // closest approach dips well below the center spacing R = 1.
        assert!(
            m.min_separation > 0.35 && m.min_separation < 1.0,
            "separation {}",
            m.min_separation
        );
        // One helical turn has a genuinely tilted least-squares line.
        assert!(m.max_inclination < 0.35, "inclination {}", m.max_inclination);
    }

    #[test]
    fn csv_emitters() {
        let s = |x: f64, y: f64| 0.25 - x * x - y * y;
        let contours = trace_level_set(&s, (-1.0, 1.0, -1.0, 1.0), 32, 32, false);
        let csv = level_set_csv(&contours);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("curve,x,y"));
        let first = lines.next().unwrap();
        assert_eq!(first.split(',').count(), 3);

        let f = MotifField::single(c(0.0, 0.0), 1.0).unwrap();
        let axes = extract_axes(&f, (-0.8, 0.8, -0.8, 0.8), 64, 1e-8).unwrap();
        let csv = axes_csv(&axes);
        assert!(csv.starts_with("axis,x,y,z\n"));
        assert_eq!(csv.lines().nth(1).unwrap().split(',').count(), 4);
    }
}
