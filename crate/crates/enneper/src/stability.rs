//! Stability of finite motif arrangements under normal variations that fix
//! the boundary.
//!
//! Two equivalent algebraic criteria decide the verdict. The power-sum route
//! uses `b_k = sum_j p_j z_j^k`: the arrangement is stable exactly when
//! `b_0 = ... = b_{n-2} = 0` and `b_{n-1} != 0`. The symmetric-polynomial
//! route uses `d_{k+1} = sum_j p_j e_k(centers without j)`; both are computed
//! and must agree. A tolerance band keeps floating-point noise from
//! fabricating zeros; dyadic inputs can be decided exactly instead.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Complex, HelicalMotif, MotifField};
use crate::region::Region;

/// Values below `ZERO_BAND * scale` count as zero; values within
/// `AMBIGUOUS_FACTOR` of the band refuse a verdict instead of guessing.
const ZERO_BAND: f64 = 1e-12;
const AMBIGUOUS_FACTOR: f64 = 1e3;

pub const BOUNDARY_CAVEAT: &str = "verdict covers normal variations with fixed boundary; \
for variations that move boundaries or motif centers the vanishing conditions are necessary only";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Stable,
    Unstable,
    Indeterminate,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub n: usize,
    pub b: Vec<Complex>,
    pub d: Vec<Complex>,
    pub verdict: Verdict,
    pub spherical_area: Option<f64>,
    pub caveat: &'static str,
}

fn finite_motifs(field: &MotifField) -> Result<&[HelicalMotif]> {
    match field {
        MotifField::Finite { motifs } => Ok(motifs),
        _ => Err(Error::WrongFamily(
            "stability criteria require a finite motif arrangement",
        )),
    }
}

/// Pitch-weighted power sums `b_k = sum_j p_j z_j^k` for `k = 0..count`.
pub fn coefficients_b(field: &MotifField, count: usize) -> Result<Vec<Complex>> {
    let motifs = finite_motifs(field)?;
    let mut powers: Vec<Complex> = motifs.iter().map(|_| Complex::new(1.0, 0.0)).collect();
    let mut b = Vec::with_capacity(count);
    for _ in 0..count {
        let mut sum = Complex::new(0.0, 0.0);
        for (m, w) in motifs.iter().zip(powers.iter()) {
            sum += m.pitch * w;
        }
        b.push(sum);
        for (m, w) in motifs.iter().zip(powers.iter_mut()) {
            *w *= m.center();
        }
    }
    Ok(b)
}

/// `d_{k+1} = sum_j p_j e_k(z_1..z_n without z_j)`, k = 0..n-1, via the
/// elementary-symmetric recurrence per leave-one-out set. Factors enter in
/// ascending magnitude to keep the recurrence tame.
pub fn coefficients_d(field: &MotifField) -> Result<Vec<Complex>> {
    let motifs = finite_motifs(field)?;
    let n = motifs.len();
    let mut d = vec![Complex::new(0.0, 0.0); n];
    for j in 0..n {
        let mut others: Vec<Complex> = motifs
            .iter()
            .enumerate()
            .filter(|&(m, _)| m != j)
            .map(|(_, mm)| mm.center())
            .collect();
        others.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
        let mut e = vec![Complex::new(0.0, 0.0); n];
        e[0] = Complex::new(1.0, 0.0);
        for (c, &z) in others.iter().enumerate() {
            for k in (1..=c + 1).rev() {
                e[k] = e[k] + z * e[k - 1];
            }
        }
        for k in 0..n {
            d[k] += motifs[j].pitch * e[k];
        }
    }
    Ok(d)
}

/// Elementary symmetric polynomials `s_0..s_n` of all centers.
pub fn symmetric_polynomials(field: &MotifField) -> Result<Vec<Complex>> {
    let motifs = finite_motifs(field)?;
    let n = motifs.len();
    let mut s = vec![Complex::new(0.0, 0.0); n + 1];
    s[0] = Complex::new(1.0, 0.0);
    for (c, m) in motifs.iter().enumerate() {
        for k in (1..=c + 1).rev() {
            s[k] = s[k] + m.center() * s[k - 1];
        }
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Class {
    Zero,
    Ambiguous,
    NonZero,
}

fn classify(value: f64, band: f64) -> Class {
    if value < band {
        Class::Zero
    } else if value < AMBIGUOUS_FACTOR * band {
        Class::Ambiguous
    } else {
        Class::NonZero
    }
}

fn b_band(motifs: &[HelicalMotif], k: usize) -> f64 {
    let scale = motifs
        .iter()
        .map(|m| m.pitch.abs() * m.center().norm().max(1.0).powi(k as i32))
        .fold(0.0f64, f64::max);
    ZERO_BAND * scale.max(f64::MIN_POSITIVE)
}

fn d_band(motifs: &[HelicalMotif], k1: usize) -> f64 {
    // d_{k1} sums p_j e_{k1-1}; its natural magnitude carries a binomial
    // count of products of centers.
    let n = motifs.len();
    let zmax = motifs
        .iter()
        .map(|m| m.center().norm())
        .fold(1.0f64, f64::max);
    let pmax = motifs.iter().map(|m| m.pitch.abs()).fold(0.0f64, f64::max);
    let mut binom = 1.0f64;
    for i in 0..k1 - 1 {
        binom *= (n - 1 - i) as f64 / (i + 1) as f64;
    }
    ZERO_BAND * (pmax * binom * zmax.powi((k1 - 1) as i32)).max(f64::MIN_POSITIVE)
}

/// Verdict from a coefficient vector whose prefix must vanish and whose last
/// entry must not.
fn verdict_from(values: &[Complex], bands: &[f64]) -> Verdict {
    let n = values.len();
    let classes: Vec<Class> = values
        .iter()
        .zip(bands)
        .map(|(v, &b)| classify(v.norm(), b))
        .collect();
    if classes[..n - 1].contains(&Class::NonZero) {
        return Verdict::Unstable;
    }
    if classes[..n - 1].contains(&Class::Ambiguous) {
        return Verdict::Indeterminate;
    }
    match classes[n - 1] {
        Class::NonZero => Verdict::Stable,
        // An exact all-zero vector is impossible for distinct centers and
        // nonzero pitches, so a vanishing tail is numerical trouble.
        _ => Verdict::Indeterminate,
    }
}

/// Decides stability from the power-sum criterion, cross-checked against the
/// independently computed symmetric-polynomial criterion.
pub fn decide_stability(field: &MotifField) -> Result<StabilityReport> {
    let motifs = finite_motifs(field)?;
    let n = motifs.len();
    let b = coefficients_b(field, n)?;
    let d = coefficients_d(field)?;
    let bands_b: Vec<f64> = (0..n).map(|k| b_band(motifs, k)).collect();
    let bands_d: Vec<f64> = (1..=n).map(|k| d_band(motifs, k)).collect();
    let vb = verdict_from(&b, &bands_b);
    let vd = verdict_from(&d, &bands_d);
    let verdict = match (vb, vd) {
        (x, y) if x == y => x,
        (Verdict::Indeterminate, y) => y_blend(y),
        (x, Verdict::Indeterminate) => y_blend(x),
        _ => {
            return Err(Error::Numeric(format!(
                "stability criteria disagree: power sums say {:?}, symmetric polynomials say {:?}",
                vb, vd
            )))
        }
    };
    Ok(StabilityReport {
        n,
        b,
        d,
        verdict,
        spherical_area: None,
        caveat: BOUNDARY_CAVEAT,
    })
}

/// One criterion undecided: stay undecided rather than trust the other side
/// of a borderline input.
fn y_blend(_other: Verdict) -> Verdict {
    Verdict::Indeterminate
}

/// Area on the unit sphere covered by the Gauss-map image of `region`,
/// without multiplicity: the sphere is split into `2r x 2r` equal-area cells
/// (bands in the vertical coordinate, aligned so the equator is a cell
/// boundary) and cells hit by sampled normals are counted.
///
/// With `within_omega_n` only sample points whose normal lies in the closed
/// north hemisphere (`|hz| <= 1`) contribute.
pub fn spherical_image_area(
    field: &MotifField,
    region: &Region,
    resolution: usize,
    within_omega_n: bool,
) -> Result<f64> {
    if resolution < 2 {
        return Err(Error::Config("spherical resolution must be at least 2".into()));
    }
    let (x0, x1, y0, y1) = region.bounding_box();
    let nu = 2 * resolution;
    let nphi = 2 * resolution;
    let m = 8 * resolution;
    let mut covered = vec![false; nu * nphi];
    let dx = (x1 - x0) / m as f64;
    let dy = (y1 - y0) / m as f64;
    for j in 0..m {
        for i in 0..m {
            let x = x0 + dx * (i as f64 + 0.5);
            let y = y0 + dy * (j as f64 + 0.5);
            let z = Complex::new(x, y);
            if !region.contains(z) {
                continue;
            }
            // u is the vertical normal component; motif centers map to the
            // south pole.
            let (u, phi) = match field.hz_hzz(z) {
                Ok((hz, _)) => {
                    let n2 = hz.norm_sqr();
                    ((1.0 - n2) / (1.0 + n2), hz.im.atan2(-hz.re))
                }
                Err(_) => (-1.0, 0.0),
            };
            if within_omega_n && u < 0.0 {
                continue;
            }
            let iu = (((u + 1.0) * 0.5 * nu as f64) as usize).min(nu - 1);
            let ip = (((phi + std::f64::consts::PI) / (2.0 * std::f64::consts::PI)
                * nphi as f64) as usize)
                .min(nphi - 1);
            covered[iu * nphi + ip] = true;
        }
    }
    let hits = covered.iter().filter(|&&c| c).count();
    Ok(hits as f64 * 4.0 * std::f64::consts::PI / (nu * nphi) as f64)
}

/// Gaussian rational, for the exact decision mode.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ExactComplex { re, im }
    }

    pub fn zero() -> Self {
        ExactComplex { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &ExactComplex) -> ExactComplex {
        ExactComplex {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn scaled(&self, f: &BigRational) -> ExactComplex {
        ExactComplex { re: f * &self.re, im: f * &self.im }
    }

    fn add_assign(&mut self, o: &ExactComplex) {
        self.re += &o.re;
        self.im += &o.im;
    }

    pub fn to_complex(&self) -> Complex {
        Complex::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

#[derive(Clone, Debug)]
pub struct ExactMotif {
    pub center: ExactComplex,
    pub pitch: BigRational,
}

impl ExactMotif {
    pub fn new(center: ExactComplex, pitch: BigRational) -> Self {
        ExactMotif { center, pitch }
    }

    /// Interprets floats as the dyadic rationals they are.
    pub fn from_f64(x: f64, y: f64, pitch: f64) -> Option<Self> {
        Some(ExactMotif {
            center: ExactComplex::new(
                BigRational::from_float(x)?,
                BigRational::from_float(y)?,
            ),
            pitch: BigRational::from_float(pitch)?,
        })
    }

    pub fn ratio(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

pub fn coefficients_b_exact(motifs: &[ExactMotif], count: usize) -> Vec<ExactComplex> {
    let one = ExactComplex::new(BigRational::from_integer(BigInt::from(1)), BigRational::zero());
    let mut powers: Vec<ExactComplex> = motifs.iter().map(|_| one.clone()).collect();
    let mut b = Vec::with_capacity(count);
    for _ in 0..count {
        let mut sum = ExactComplex::zero();
        for (m, w) in motifs.iter().zip(powers.iter()) {
            sum.add_assign(&w.scaled(&m.pitch));
        }
        b.push(sum);
        for (m, w) in motifs.iter().zip(powers.iter_mut()) {
            *w = w.mul(&m.center);
        }
    }
    b
}

pub fn coefficients_d_exact(motifs: &[ExactMotif]) -> Vec<ExactComplex> {
    let n = motifs.len();
    let one = ExactComplex::new(BigRational::from_integer(BigInt::from(1)), BigRational::zero());
    let mut d = vec![ExactComplex::zero(); n];
    for j in 0..n {
        let mut e = vec![ExactComplex::zero(); n];
        e[0] = one.clone();
        let mut placed = 0usize;
        for (m, motif) in motifs.iter().enumerate() {
            if m == j {
                continue;
            }
            placed += 1;
            for k in (1..=placed).rev() {
                let t = motif.center.mul(&e[k - 1]);
                e[k].add_assign(&t);
            }
        }
        for k in 0..n {
            d[k].add_assign(&e[k].scaled(&motifs[j].pitch));
        }
    }
    d
}

/// Exact-arithmetic verdict; no tolerance band, no indeterminate outcome.
pub fn decide_stability_exact(motifs: &[ExactMotif]) -> Result<Verdict> {
    if motifs.is_empty() {
        return Err(Error::Config("exact stability needs at least one motif".into()));
    }
    for m in motifs {
        if m.pitch.is_zero() {
            return Err(Error::Config("motif pitch must be nonzero".into()));
        }
    }
    let n = motifs.len();
    let b = coefficients_b_exact(motifs, n);
    let stable = b[..n - 1].iter().all(ExactComplex::is_zero) && !b[n - 1].is_zero();
    let d = coefficients_d_exact(motifs);
    let stable_d = d[..n - 1].iter().all(ExactComplex::is_zero) && !d[n - 1].is_zero();
    if stable != stable_d {
        return Err(Error::Numeric(
            "exact stability criteria disagree; input may violate distinct-center assumptions"
                .into(),
        ));
    }
    Ok(if stable { Verdict::Stable } else { Verdict::Unstable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    /// Central motif of pitch -n*p plus n motifs of pitch p on a numeric
    /// circle of radius r.
    fn ngon(n: usize, r: f64, p: f64) -> MotifField {
        let mut motifs = vec![HelicalMotif::new(c(0.0, 0.0), -(n as f64) * p)];
        for j in 0..n {
            let th = 2.0 * PI * j as f64 / n as f64;
            motifs.push(HelicalMotif::new(c(r * th.cos(), r * th.sin()), p));
        }
        MotifField::finite(motifs).unwrap()
    }

    #[test]
    fn hand_values_for_pairs() {
        let dip = MotifField::dipole(1.0, 0.7).unwrap();
        let b = coefficients_b(&dip, 2).unwrap();
        assert!(b[0].norm() < 1e-15);
        assert!((b[1] - c(0.7, 0.0)).norm() < 1e-15, "b1 = {}", b[1]);
        let d = coefficients_d(&dip).unwrap();
        assert!(d[0].norm() < 1e-15);
        assert!((d[1] - c(-0.7, 0.0)).norm() < 1e-15, "d2 = {}", d[1]);

        let pair = MotifField::same_handed_pair(1.0, 0.7).unwrap();
        assert!((coefficients_b(&pair, 1).unwrap()[0] - c(1.4, 0.0)).norm() < 1e-15);
        assert!((coefficients_d(&pair).unwrap()[0] - c(1.4, 0.0)).norm() < 1e-15);

        let single = MotifField::single(c(2.0, -1.0), 0.3).unwrap();
        assert!((coefficients_d(&single).unwrap()[0] - c(0.3, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pair_verdicts() {
        let dip = decide_stability(&MotifField::dipole(1.0, 0.7).unwrap()).unwrap();
        assert_eq!(dip.verdict, Verdict::Stable);
        let pair = decide_stability(&MotifField::same_handed_pair(1.0, 0.7).unwrap()).unwrap();
        assert_eq!(pair.verdict, Verdict::Unstable);
        let single = decide_stability(&MotifField::single(c(0.0, 0.0), 1.0).unwrap()).unwrap();
        assert_eq!(single.verdict, Verdict::Stable);
    }

    #[test]
    fn ngon_arrangements_are_stable() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..=6 {
            let r = rng.gen_range(0.5..2.0);
            let p = rng.gen_range(0.2..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let field = ngon(n, r, p);
            let report = decide_stability(&field).unwrap();
            assert_eq!(report.verdict, Verdict::Stable, "n = {}", n);
            // One order beyond the motif count: b_n = n p r^n.
            let b = coefficients_b(&field, n + 2).unwrap();
            let want = n as f64 * p * r.powi(n as i32);
            assert!(
                (b[n] - c(want, 0.0)).norm() < 1e-10 * want.abs(),
                "b_{} = {} want {}",
                n,
                b[n],
                want
            );
        }
    }

    #[test]
    fn unbalanced_pitch_is_always_unstable() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let n = rng.gen_range(2..=8);
            let mut motifs = Vec::new();
            let mut total = 0.0;
            for _ in 0..n {
                let p = rng.gen_range(0.2..1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                total += p;
                motifs.push(HelicalMotif::new(
                    c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                    p,
                ));
            }
            if total.abs() < 0.3 {
                motifs[0].pitch += 0.5 - total;
            }
            let report = decide_stability(&MotifField::finite(motifs).unwrap()).unwrap();
            assert_eq!(report.verdict, Verdict::Unstable);
        }
    }

    #[test]
    fn criteria_agree_and_link_through_symmetric_polynomials() {
        // d_{k+1} = sum_{i<=k} (-1)^i b_i s_{k-i}; checking the reconstruction
        // against the leave-one-out evaluation ties the two criteria together.
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=8);
            let mut motifs = Vec::new();
            for _ in 0..n {
                motifs.push(HelicalMotif::new(
                    c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                    rng.gen_range(0.1..1.2) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
                ));
            }
            let field = MotifField::finite(motifs.clone()).unwrap();
            let b = coefficients_b(&field, n).unwrap();
            let d = coefficients_d(&field).unwrap();
            let s = symmetric_polynomials(&field).unwrap();
            for k in 0..n {
                let mut linked = c(0.0, 0.0);
                let mut sign = 1.0;
                for i in 0..=k {
                    linked += sign * b[i] * s[k - i];
                    sign = -sign;
                }
                let scale = d[k].norm().max(b[0].norm()).max(1.0);
                assert!(
                    (linked - d[k]).norm() < 1e-10 * scale,
                    "n {} k {}: {} vs {}",
                    n,
                    k,
                    linked,
                    d[k]
                );
            }
        }
    }

    #[test]
    fn verdict_invariant_under_rigid_motions_and_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let base: Vec<(MotifField, Verdict)> = vec![
            (ngon(3, 1.0, 0.6), Verdict::Stable),
            (ngon(5, 1.3, -0.4), Verdict::Stable),
            (MotifField::same_handed_pair(1.0, 0.5).unwrap(), Verdict::Unstable),
            (MotifField::dipole(2.0, 0.8).unwrap(), Verdict::Stable),
        ];
        for (field, want) in &base {
            let motifs = match field {
                MotifField::Finite { motifs } => motifs.clone(),
                _ => unreachable!(),
            };
            for _ in 0..6 {
                let w = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
                let phi = rng.gen_range(0.0..2.0 * PI);
                let lam = rng.gen_range(0.3..3.0);
                let rot = c(phi.cos(), phi.sin()) * lam;
                let moved: Vec<HelicalMotif> = motifs
                    .iter()
                    .map(|m| HelicalMotif::new(m.center() * rot + w, m.pitch))
                    .collect();
                let report = decide_stability(&MotifField::finite(moved).unwrap()).unwrap();
                assert_eq!(report.verdict, *want);
            }
        }
    }

    #[test]
    fn perturbed_ngon_flips_to_unstable() {
        for delta in [1e-3, 1e-6] {
            let mut motifs = match ngon(4, 1.0, 0.5) {
                MotifField::Finite { motifs } => motifs,
                _ => unreachable!(),
            };
            motifs[2].x += delta;
            let report = decide_stability(&MotifField::finite(motifs).unwrap()).unwrap();
            assert_eq!(report.verdict, Verdict::Unstable, "delta = {}", delta);
        }
        // Displacements inside the ambiguous band refuse a verdict.
        let mut motifs = match ngon(4, 1.0, 0.5) {
            MotifField::Finite { motifs } => motifs,
            _ => unreachable!(),
        };
        motifs[2].x += 1e-11;
        let report = decide_stability(&MotifField::finite(motifs).unwrap()).unwrap();
        assert_eq!(report.verdict, Verdict::Indeterminate);
    }

    #[test]
    fn exact_mode_decides_dyadic_input() {
        // Central pitch -1 with two pitch-1/2 motifs at +-3/4: exact n-gon.
        let half = ExactMotif::ratio(1, 2);
        let r = ExactMotif::ratio(3, 4);
        let zero = BigRational::zero();
        let motifs = vec![
            ExactMotif::new(ExactComplex::new(zero.clone(), zero.clone()), -&half - &half),
            ExactMotif::new(ExactComplex::new(r.clone(), zero.clone()), half.clone()),
            ExactMotif::new(ExactComplex::new(-r.clone(), zero.clone()), half.clone()),
        ];
        assert_eq!(decide_stability_exact(&motifs).unwrap(), Verdict::Stable);

        let mut bumped = motifs.clone();
        bumped[1].center.re += ExactMotif::ratio(1, 1024);
        assert_eq!(decide_stability_exact(&bumped).unwrap(), Verdict::Unstable);

        // A displacement far below any floating band still flips exactly.
        let mut tiny = motifs.clone();
        tiny[1].center.im += BigRational::new(BigInt::from(1), BigInt::from(10).pow(40));
        assert_eq!(decide_stability_exact(&tiny).unwrap(), Verdict::Unstable);

        let b = coefficients_b_exact(&motifs, 3);
        assert!(b[0].is_zero() && b[1].is_zero());
        assert!((b[2].to_complex() - c(0.5 * 0.75 * 0.75 * 2.0, 0.0)).norm() < 1e-15);
        let d = coefficients_d_exact(&motifs);
        assert!(d[0].is_zero() && d[1].is_zero() && !d[2].is_zero());
    }

    #[test]
    fn exact_mode_accepts_float_input() {
        let motifs: Vec<ExactMotif> = [
            (0.5, 0.0, 0.7),
            (-0.5, 0.0, -0.7),
        ]
        .iter()
        .map(|&(x, y, p)| ExactMotif::from_f64(x, y, p).unwrap())
        .collect();
        assert_eq!(decide_stability_exact(&motifs).unwrap(), Verdict::Stable);
    }

    #[test]
    fn equal_pair_sphere_image_fills_the_hemisphere() {
        // Over the disc between the motifs the normals sweep the full closed
        // north hemisphere, the fingerprint of the borderline-unstable pair.
        let field = MotifField::same_handed_pair(1.0, 0.5).unwrap();
        let region = Region::disc(c(0.0, 0.0), 0.5).unwrap();
        let half_sphere = 2.0 * PI;
        let coarse = spherical_image_area(&field, &region, 16, true).unwrap();
        let fine = spherical_image_area(&field, &region, 32, true).unwrap();
        assert!((coarse - half_sphere).abs() < 0.02 * half_sphere, "coarse {}", coarse);
        assert!((fine - half_sphere).abs() < 0.01 * half_sphere, "fine {}", fine);
    }

    #[test]
    fn dipole_sphere_image_stays_under_the_cap_bound() {
        // Away from |g| = 1 the image fits in a polar cap of area
        // 4 pi / (1 + min|g|^2) < 2 pi.
        let field = MotifField::dipole(1.0, 0.45).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut tested = 0;
        while tested < 20 {
            let cx = rng.gen_range(-1.5..1.5);
            let cy = rng.gen_range(-1.5..1.5);
            let (hz, _) = match field.hz_hzz(c(cx, cy)) {
                Ok(v) => v,
                Err(_) => continue,
            };
            if hz.norm() > 0.7 {
                continue;
            }
            let radius = rng.gen_range(0.05..0.15);
            let region = Region::disc(c(cx, cy), radius).unwrap();
            // Empirical min |g| over the disc, for the cap bound.
            let mut min_g = f64::INFINITY;
            let mut all_north = true;
            for j in 0..48 {
                for i in 0..48 {
                    let z = c(
                        cx - radius + 2.0 * radius * (i as f64 + 0.5) / 48.0,
                        cy - radius + 2.0 * radius * (j as f64 + 0.5) / 48.0,
                    );
                    if !region.contains(z) {
                        continue;
                    }
                    let g = 1.0 / field.hz_hzz(z).unwrap().0.norm();
                    min_g = min_g.min(g);
                    all_north &= g >= 1.0;
                }
            }
            if !all_north || min_g < 1.05 {
                continue;
            }
            tested += 1;
            let area = spherical_image_area(&field, &region, 24, true).unwrap();
            let bound = 4.0 * PI / (1.0 + min_g * min_g);
            assert!(
                area <= bound * 1.05 + 0.05,
                "area {} exceeds cap bound {} (min |g| = {})",
                area,
                bound,
                min_g
            );
            assert!(area < 2.0 * PI - 0.1);
        }
    }

    #[test]
    fn tiny_region_has_tiny_image() {
        let field = MotifField::dipole(1.0, 0.45).unwrap();
        let region = Region::disc(c(0.0, 0.3), 1e-3).unwrap();
        let area = spherical_image_area(&field, &region, 24, true).unwrap();
        assert!(area < 0.05, "area {}", area);
    }

    #[test]
    fn report_serializes_with_lowercase_verdict() {
        let report = decide_stability(&MotifField::dipole(1.0, 0.7).unwrap()).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"verdict\":\"stable\""));
        assert!(json.contains("\"caveat\""));
        assert!(json.contains("\"spherical_area\":null"));
    }

    #[test]
    fn chains_are_rejected() {
        let field = MotifField::tgb(0.3, 1.0).unwrap();
        assert!(matches!(decide_stability(&field), Err(Error::WrongFamily(_))));
    }
}
