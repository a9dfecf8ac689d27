use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Complex = num_complex::Complex64;

/// Relative guard radius around singular sites. Evaluation closer than
/// `SINGULAR_GUARD * field.scale()` to a motif center is rejected.
pub const SINGULAR_GUARD: f64 = 1e-9;

/// A helical motif: a screw-dislocation-like center around which the height
/// field gains `2 * pi * pitch` per counterclockwise turn.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HelicalMotif {
    pub x: f64,
    pub y: f64,
    pub pitch: f64,
}

impl HelicalMotif {
    pub fn new(center: Complex, pitch: f64) -> Self {
        HelicalMotif { x: center.re, y: center.im, pitch }
    }

    pub fn center(&self) -> Complex {
        Complex::new(self.x, self.y)
    }
}

/// A harmonic height field assembled from helical motifs.
///
/// `Finite` sums `pitch * arg(z - center)` over an explicit motif list.
/// `Tgb` is the doubly-infinite chain of same-handed motifs at `n * spacing`
/// on the real axis; `Utgb` alternates the handedness along the same chain.
/// Both chains have closed-form jets (cotangent / cosecant sums).
///
/// Construct through the checked constructors or [`MotifField::from_json`];
/// building enum values directly skips validation.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum MotifField {
    Finite { motifs: Vec<HelicalMotif> },
    Tgb { pitch: f64, spacing: f64 },
    Utgb { pitch: f64, spacing: f64 },
}

/// Two-jet of the height field plus the holomorphic potential `P` with
/// `P' = (dh/dz)^2`. `h` is the principal-branch value; a consumer tracking a
/// continuous branch stores its correction in `branch_offset` so that
/// `h - branch_offset` is always the principal value.
#[derive(Clone, Copy, Debug)]
pub struct FieldJet {
    pub h: f64,
    pub hz: Complex,
    pub hzz: Complex,
    pub p: Complex,
    pub branch_offset: f64,
}

impl MotifField {
    pub fn finite(motifs: Vec<HelicalMotif>) -> Result<Self> {
        let field = MotifField::Finite { motifs };
        field.validate()?;
        Ok(field)
    }

    /// Single motif: the exact helicoid.
    pub fn single(center: Complex, pitch: f64) -> Result<Self> {
        Self::finite(vec![HelicalMotif::new(center, pitch)])
    }

    /// Motifs of equal pitch `p` at `±r/2` on the real axis.
    pub fn same_handed_pair(r: f64, pitch: f64) -> Result<Self> {
        Self::finite(vec![
            HelicalMotif::new(Complex::new(r / 2.0, 0.0), pitch),
            HelicalMotif::new(Complex::new(-r / 2.0, 0.0), pitch),
        ])
    }

    /// Opposite-handed pair: `+p` at `+r/2`, `-p` at `-r/2`.
    pub fn dipole(r: f64, pitch: f64) -> Result<Self> {
        Self::finite(vec![
            HelicalMotif::new(Complex::new(r / 2.0, 0.0), pitch),
            HelicalMotif::new(Complex::new(-r / 2.0, 0.0), -pitch),
        ])
    }

    /// `n` identical motifs at `0, spacing, ..., (n-1) * spacing`.
    pub fn chain(n: usize, spacing: f64, pitch: f64) -> Result<Self> {
        let motifs = (0..n)
            .map(|k| HelicalMotif::new(Complex::new(k as f64 * spacing, 0.0), pitch))
            .collect();
        Self::finite(motifs)
    }

    pub fn tgb(pitch: f64, spacing: f64) -> Result<Self> {
        let field = MotifField::Tgb { pitch, spacing };
        field.validate()?;
        Ok(field)
    }

    pub fn utgb(pitch: f64, spacing: f64) -> Result<Self> {
        let field = MotifField::Utgb { pitch, spacing };
        field.validate()?;
        Ok(field)
    }

    /// Empty motif list: the flat plane. Only for internal tests; the public
    /// constructors require at least one motif.
    #[cfg(test)]
    pub(crate) fn plane_for_tests() -> Self {
        MotifField::Finite { motifs: Vec::new() }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MotifField::Finite { motifs } => {
                if motifs.is_empty() {
                    return Err(Error::DegenerateGeometry("no motifs".into()));
                }
                for m in motifs {
                    if !(m.x.is_finite() && m.y.is_finite() && m.pitch.is_finite()) {
                        return Err(Error::DegenerateGeometry(
                            "non-finite motif coordinates".into(),
                        ));
                    }
                    if m.pitch == 0.0 {
                        return Err(Error::DegenerateGeometry("zero pitch motif".into()));
                    }
                }
                let scale = self.scale();
                for (i, a) in motifs.iter().enumerate() {
                    for b in motifs.iter().skip(i + 1) {
                        if (a.center() - b.center()).norm() < 1e-12 * scale {
                            return Err(Error::DegenerateGeometry(format!(
                                "coincident centers near ({}, {})",
                                a.x, a.y
                            )));
                        }
                    }
                }
                Ok(())
            }
            MotifField::Tgb { pitch, spacing } | MotifField::Utgb { pitch, spacing } => {
                if !(pitch.is_finite() && spacing.is_finite()) {
                    return Err(Error::DegenerateGeometry("non-finite chain parameters".into()));
                }
                if *pitch == 0.0 {
                    return Err(Error::DegenerateGeometry("zero pitch".into()));
                }
                if *spacing <= 0.0 {
                    return Err(Error::DegenerateGeometry("spacing must be positive".into()));
                }
                Ok(())
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let field: MotifField =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("bad field JSON: {}", e)))?;
        field.validate()?;
        Ok(field)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("field serialization cannot fail")
    }

    /// Characteristic length used to normalize guards and tolerances.
    pub fn scale(&self) -> f64 {
        match self {
            MotifField::Finite { motifs } => motifs
                .iter()
                .map(|m| m.center().norm().max(m.pitch.abs()))
                .fold(1.0, f64::max),
            MotifField::Tgb { pitch, spacing } | MotifField::Utgb { pitch, spacing } => {
                spacing.max(pitch.abs())
            }
        }
    }

    pub fn guard_radius(&self) -> f64 {
        SINGULAR_GUARD * self.scale()
    }

    /// All pitches, in motif order (chains report their single pitch).
    pub fn pitches(&self) -> Vec<f64> {
        match self {
            MotifField::Finite { motifs } => motifs.iter().map(|m| m.pitch).collect(),
            MotifField::Tgb { pitch, .. } | MotifField::Utgb { pitch, .. } => vec![*pitch],
        }
    }

    /// Sum of pitches; the winding of `h` on a large circle. Chains have no
    /// meaningful total and report their per-motif pitch.
    pub fn total_pitch(&self) -> f64 {
        match self {
            MotifField::Finite { motifs } => motifs.iter().map(|m| m.pitch).sum(),
            MotifField::Tgb { pitch, .. } | MotifField::Utgb { pitch, .. } => *pitch,
        }
    }

    /// Singular sites inside the rectangle `[x0, x1] x [y0, y1]`.
    pub fn singularities_in(&self, x0: f64, x1: f64, y0: f64, y1: f64) -> Vec<Complex> {
        match self {
            MotifField::Finite { motifs } => motifs
                .iter()
                .map(|m| m.center())
                .filter(|c| c.re >= x0 && c.re <= x1 && c.im >= y0 && c.im <= y1)
                .collect(),
            MotifField::Tgb { spacing, .. } | MotifField::Utgb { spacing, .. } => {
                if y0 > 0.0 || y1 < 0.0 {
                    return Vec::new();
                }
                let lo = (x0 / spacing).ceil() as i64;
                let hi = (x1 / spacing).floor() as i64;
                (lo..=hi).map(|n| Complex::new(n as f64 * spacing, 0.0)).collect()
            }
        }
    }

    /// Nearest singular site and its distance.
    pub fn nearest_singularity(&self, z: Complex) -> (Complex, f64) {
        match self {
            MotifField::Finite { motifs } => {
                let mut best = (Complex::new(0.0, 0.0), f64::INFINITY);
                for m in motifs {
                    let d = (z - m.center()).norm();
                    if d < best.1 {
                        best = (m.center(), d);
                    }
                }
                best
            }
            MotifField::Tgb { spacing, .. } | MotifField::Utgb { spacing, .. } => {
                let n = (z.re / spacing).round();
                let site = Complex::new(n * spacing, 0.0);
                (site, (z - site).norm())
            }
        }
    }

    /// Pitch of the motif whose center is closest to `z`.
    pub fn nearest_pitch(&self, z: Complex) -> f64 {
        match self {
            MotifField::Finite { motifs } => {
                let mut best = (f64::INFINITY, 0.0);
                for m in motifs {
                    let d = (z - m.center()).norm();
                    if d < best.0 {
                        best = (d, m.pitch);
                    }
                }
                best.1
            }
            MotifField::Tgb { pitch, .. } => *pitch,
            MotifField::Utgb { pitch, spacing } => {
                let n = (z.re / spacing).round() as i64;
                if n.rem_euclid(2) == 0 {
                    *pitch
                } else {
                    -pitch
                }
            }
        }
    }

    pub fn check_regular(&self, z: Complex) -> Result<()> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::DegenerateGeometry("non-finite evaluation point".into()));
        }
        let (_, d) = self.nearest_singularity(z);
        if d < self.guard_radius() {
            return Err(Error::SingularPoint { z });
        }
        Ok(())
    }

    /// Height, Wirtinger derivatives and potential at `z`.
    ///
    /// `h` uses the principal branch of each `arg`/`log` term; the additive
    /// constant of `P` is fixed to zero (no constant term at infinity for
    /// finite sets, odd-symmetric choice for the chains).
    pub fn eval_jet(&self, z: Complex) -> Result<FieldJet> {
        self.check_regular(z)?;
        let i = Complex::i();
        match self {
            MotifField::Finite { motifs } => {
                let mut h = 0.0;
                let mut hz = Complex::new(0.0, 0.0);
                let mut hzz = Complex::new(0.0, 0.0);
                let mut p = Complex::new(0.0, 0.0);
                for m in motifs {
                    let d = z - m.center();
                    let inv = d.inv();
                    h += m.pitch * d.arg();
                    hz += m.pitch * -0.5 * i * inv;
                    hzz += m.pitch * 0.5 * i * inv * inv;
                    p += 0.25 * m.pitch * m.pitch * inv;
                }
                for (k, mk) in motifs.iter().enumerate() {
                    for mj in motifs.iter().skip(k + 1) {
                        let sep = mj.center() - mk.center();
                        let quot = (z - mj.center()) / (z - mk.center());
                        p -= 0.5 * mj.pitch * mk.pitch / sep * quot.ln();
                    }
                }
                Ok(FieldJet { h, hz, hzz, p, branch_offset: 0.0 })
            }
            MotifField::Tgb { pitch, spacing } => {
                let w = PI * z / spacing;
                let (s, c) = (w.sin(), w.cos());
                let cot = c / s;
                let csc2 = (s * s).inv();
                let a = pitch * PI / (2.0 * spacing);
                Ok(FieldJet {
                    h: pitch * s.ln().im,
                    hz: -i * a * cot,
                    hzz: i * a * PI / spacing * csc2,
                    p: pitch * a / 2.0 * cot + a * a * z,
                    branch_offset: 0.0,
                })
            }
            MotifField::Utgb { pitch, spacing } => {
                let w = PI * z / spacing;
                let half = 0.5 * w;
                let (s, c) = (w.sin(), w.cos());
                let a = pitch * PI / (2.0 * spacing);
                Ok(FieldJet {
                    h: pitch * (half.sin().ln().im - half.cos().ln().im),
                    hz: -i * a / s,
                    hzz: i * a * PI / spacing * c / (s * s),
                    p: pitch * a / 2.0 * c / s,
                    branch_offset: 0.0,
                })
            }
        }
    }

    /// Closed form for `P'`, assembled independently of `hz` so that the
    /// defining identity `P' = hz^2` can be checked rather than assumed.
    pub fn p_prime(&self, z: Complex) -> Result<Complex> {
        self.check_regular(z)?;
        match self {
            MotifField::Finite { motifs } => {
                let inv: Vec<Complex> = motifs.iter().map(|m| (z - m.center()).inv()).collect();
                let mut acc = Complex::new(0.0, 0.0);
                for (k, mk) in motifs.iter().enumerate() {
                    acc += mk.pitch * mk.pitch * inv[k] * inv[k];
                    for (j, mj) in motifs.iter().enumerate().skip(k + 1) {
                        acc += 2.0 * mk.pitch * mj.pitch * inv[k] * inv[j];
                    }
                }
                Ok(-0.25 * acc)
            }
            MotifField::Tgb { pitch, spacing } => {
                let w = PI * z / spacing;
                let cot = w.cos() / w.sin();
                let a = pitch * PI / (2.0 * spacing);
                Ok(-a * a * cot * cot)
            }
            MotifField::Utgb { pitch, spacing } => {
                let w = PI * z / spacing;
                let s = w.sin();
                let a = pitch * PI / (2.0 * spacing);
                Ok(-a * a / (s * s))
            }
        }
    }

    /// First and second Wirtinger derivatives only. The pointwise geometry
    /// (curvature, Gauss map, area weight) needs nothing else, and skipping
    /// `h` and `P` avoids the quadratic pair-log work inside tight loops.
    pub fn hz_hzz(&self, z: Complex) -> Result<(Complex, Complex)> {
        self.check_regular(z)?;
        let i = Complex::i();
        match self {
            MotifField::Finite { motifs } => {
                let mut hz = Complex::new(0.0, 0.0);
                let mut hzz = Complex::new(0.0, 0.0);
                for m in motifs {
                    let inv = (z - m.center()).inv();
                    hz += m.pitch * -0.5 * i * inv;
                    hzz += m.pitch * 0.5 * i * inv * inv;
                }
                Ok((hz, hzz))
            }
            MotifField::Tgb { pitch, spacing } => {
                let w = PI * z / spacing;
                let (s, c) = (w.sin(), w.cos());
                let a = pitch * PI / (2.0 * spacing);
                Ok((-i * a * c / s, i * a * PI / spacing / (s * s)))
            }
            MotifField::Utgb { pitch, spacing } => {
                let w = PI * z / spacing;
                let (s, c) = (w.sin(), w.cos());
                let a = pitch * PI / (2.0 * spacing);
                Ok((-i * a / s, i * a * PI / spacing * c / (s * s)))
            }
        }
    }

    /// Exact height change along the straight segment `a -> b`, staying on a
    /// continuous branch. Works per log-term: the principal argument of each
    /// term's quotient is the true change as long as no term rotates by more
    /// than a half turn, which the coarseness guard rejects.
    pub fn h_increment(&self, a: Complex, b: Complex) -> Result<f64> {
        const COARSE: Error = Error::PathTooCoarse { segment: 0 };
        let mut dh = 0.0;
        match self {
            MotifField::Finite { motifs } => {
                for m in motifs {
                    let delta = ((b - m.center()) / (a - m.center())).arg();
                    if delta.abs() > PI / 2.0 {
                        return Err(COARSE);
                    }
                    dh += m.pitch * delta;
                }
            }
            MotifField::Tgb { pitch, spacing } => {
                let (wa, wb) = (PI * a / spacing, PI * b / spacing);
                let delta = (wb.sin() / wa.sin()).arg();
                if delta.abs() > PI / 2.0 {
                    return Err(COARSE);
                }
                dh = pitch * delta;
            }
            MotifField::Utgb { pitch, spacing } => {
                let (ha, hb) = (0.5 * PI * a / spacing, 0.5 * PI * b / spacing);
                let ds = (hb.sin() / ha.sin()).arg();
                let dc = (hb.cos() / ha.cos()).arg();
                if ds.abs() > PI / 2.0 || dc.abs() > PI / 2.0 {
                    return Err(COARSE);
                }
                dh = pitch * (ds - dc);
            }
        }
        Ok(dh)
    }

    /// Heights along a sampled path on one continuous branch, starting from
    /// `h_start` at `path[0]`. Consecutive points must be closer than half
    /// the distance to the nearest singularity.
    pub fn eval_h_continuous(&self, path: &[Complex], h_start: f64) -> Result<Vec<f64>> {
        if path.is_empty() {
            return Err(Error::DegenerateGeometry("empty path".into()));
        }
        for &z in path {
            self.check_regular(z)?;
        }
        let mut out = Vec::with_capacity(path.len());
        out.push(h_start);
        for (idx, pair) in path.windows(2).enumerate() {
            let (a, b) = (pair[0], pair[1]);
            let step = (b - a).norm();
            let d = self.nearest_singularity(a).1.min(self.nearest_singularity(b).1);
            if step > 0.5 * d {
                return Err(Error::PathTooCoarse { segment: idx });
            }
            let dh = self
                .h_increment(a, b)
                .map_err(|_| Error::PathTooCoarse { segment: idx })?;
            let last = *out.last().unwrap();
            out.push(last + dh);
        }
        Ok(out)
    }

    /// `P(z) - P(base)` by adaptive quadrature of `hz^2` along the straight
    /// segment from `base` to `z`. Independent of the closed form for `P`.
    pub fn numeric_p(&self, z: Complex, base: Complex, tol: f64) -> Result<Complex> {
        self.numeric_p_along(&[base, z], tol)
    }

    /// Same as [`numeric_p`](Self::numeric_p) over a polyline path.
    pub fn numeric_p_along(&self, path: &[Complex], tol: f64) -> Result<Complex> {
        if path.len() < 2 {
            return Err(Error::DegenerateGeometry("path needs at least two points".into()));
        }
        let guard = self.guard_radius();
        for (idx, pair) in path.windows(2).enumerate() {
            let (a, b) = (pair[0], pair[1]);
            if let Some(site) = self.segment_hits_singularity(a, b, guard) {
                return Err(Error::PathHitsSingularity { segment: idx, z: site });
            }
        }
        let seg_tol = tol / (path.len() - 1) as f64;
        let mut total = Complex::new(0.0, 0.0);
        for pair in path.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let f = |t: f64| {
                let z = a + (b - a) * t;
                let hz = self.eval_jet(z).map(|j| j.hz).unwrap_or(Complex::new(f64::NAN, 0.0));
                hz * hz * (b - a)
            };
            total += crate::quad::adaptive_complex(&f, 0.0, 1.0, seg_tol)?;
        }
        Ok(total)
    }

    fn segment_hits_singularity(&self, a: Complex, b: Complex, guard: f64) -> Option<Complex> {
        let sites: Vec<Complex> = match self {
            MotifField::Finite { motifs } => motifs.iter().map(|m| m.center()).collect(),
            MotifField::Tgb { spacing, .. } | MotifField::Utgb { spacing, .. } => {
                let lo = ((a.re.min(b.re) - spacing) / spacing).floor() as i64;
                let hi = ((a.re.max(b.re) + spacing) / spacing).ceil() as i64;
                (lo..=hi).map(|n| Complex::new(n as f64 * spacing, 0.0)).collect()
            }
        };
        sites
            .into_iter()
            .find(|&s| point_segment_distance(s, a, b) < guard)
    }
}

fn point_segment_distance(p: Complex, a: Complex, b: Complex) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}
