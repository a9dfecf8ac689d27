//! Far-field structure of finite motif configurations.
//!
//! Outside a disc containing every motif the height field collapses to
//! `h = Im(p ln z + sum c_k z^-k)` with `p` the total pitch and
//! `c_k = -(1/k) sum_j p_j z_j^k`: a single helical motif of pitch `p`
//! dressed by decaying corrections. The expansion identifies the far field,
//! bounds the truncation error, and predicts the curvature decay law.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Complex, MotifField};

#[derive(Clone, Debug, Serialize)]
pub struct MultipoleExpansion {
    pub total_pitch: f64,
    /// `c_1 .. c_K`.
    pub coefficients: Vec<Complex>,
    /// Radius of the smallest origin-centered disc containing the motifs.
    pub center_radius: f64,
    /// `sum |p_j|`, the scale in the truncation bound.
    pub pitch_scale: f64,
}

impl MultipoleExpansion {
    /// Expands a finite configuration to the given order. Chains have no
    /// such expansion (their far field is not helical).
    pub fn of(field: &MotifField, order: usize) -> Result<Self> {
        let motifs = match field {
            MotifField::Finite { motifs } => motifs,
            MotifField::Tgb { .. } | MotifField::Utgb { .. } => {
                return Err(Error::WrongFamily(
                    "multipole expansion requires a finite motif set",
                ))
            }
        };
        if order == 0 {
            return Err(Error::Config("expansion order must be at least 1".into()));
        }
        let mut coefficients = Vec::with_capacity(order);
        for k in 1..=order {
            let mut acc = Complex::new(0.0, 0.0);
            for m in motifs {
                acc += m.pitch * m.center().powu(k as u32);
            }
            coefficients.push(-acc / k as f64);
        }
        Ok(MultipoleExpansion {
            total_pitch: field.total_pitch(),
            coefficients,
            center_radius: motifs.iter().map(|m| m.center().norm()).fold(0.0, f64::max),
            pitch_scale: motifs.iter().map(|m| m.pitch.abs()).sum(),
        })
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    /// Series tail `sum c_k z^-k` (single-valued part).
    fn tail(&self, z: Complex) -> Complex {
        let inv = z.inv();
        let mut acc = Complex::new(0.0, 0.0);
        let mut pw = Complex::new(1.0, 0.0);
        for ck in &self.coefficients {
            pw *= inv;
            acc += ck * pw;
        }
        acc
    }

    /// Height on the continuous branch through `theta = 0`; `theta` need not
    /// be reduced, extra turns add `2 pi p` each.
    pub fn h_continuous(&self, r: f64, theta: f64) -> f64 {
        let z = Complex::from_polar(r, theta);
        self.total_pitch * theta + self.tail(z).im
    }

    /// Height with the principal argument branch.
    pub fn h(&self, z: Complex) -> f64 {
        self.total_pitch * z.arg() + self.tail(z).im
    }

    /// Rigorous sup bound on the series truncation error at radius `r > `
    /// [`Self::center_radius`].
    pub fn truncation_bound(&self, r: f64) -> f64 {
        let q = self.center_radius / r;
        if q >= 1.0 {
            return f64::INFINITY;
        }
        let k1 = (self.order() + 1) as f64;
        self.pitch_scale * q.powf(k1) / (k1 * (1.0 - q))
    }

    /// Leading far-field Gauss curvature at radius `r`: `-p^2 / r^4` when the
    /// total pitch `p` survives, else the balanced decay `-4 |c_1|^2 / r^6`.
    pub fn predicted_far_curvature(&self, r: f64) -> f64 {
        let p = self.total_pitch;
        if p.abs() > 1e-12 * self.pitch_scale.max(1e-300) {
            -p * p / (r * r * r * r)
        } else {
            let c1 = self.coefficients.first().copied().unwrap_or_default();
            -4.0 * c1.norm_sqr() / r.powi(6)
        }
    }
}

/// Far-field comparison of the expansion against the exact field on the
/// circle of radius `r`.
#[derive(Clone, Debug, Serialize)]
pub struct FarFieldReport {
    pub radius: f64,
    pub order: usize,
    /// Sup of `|h_exact - h_series|` over the sampled circle, both on the
    /// continuous branch through `theta = 0`.
    pub sup_error: f64,
    pub truncation_bound: f64,
    /// Slope of `h` in `theta` recovered by least squares with the periodic
    /// components projected out.
    pub fitted_pitch: f64,
    pub total_pitch: f64,
}

/// Walks the circle of radius `r`, compares continuous heights, and refits
/// the pitch from the monodromy model `h = a + b theta + (periodic)`.
pub fn far_field_check(
    field: &MotifField,
    r: f64,
    order: usize,
    samples: usize,
) -> Result<FarFieldReport> {
    let exp = MultipoleExpansion::of(field, order)?;
    if r <= 2.0 * exp.center_radius {
        return Err(Error::Config(format!(
            "far-field radius {} inside twice the configuration radius {}",
            r, exp.center_radius
        )));
    }
    let n = samples.max(16);
    let thetas: Vec<f64> = (0..=n)
        .map(|i| 2.0 * std::f64::consts::PI * i as f64 / n as f64)
        .collect();
    let path: Vec<Complex> = thetas.iter().map(|&t| Complex::from_polar(r, t)).collect();
    let h_start = field.eval_jet(path[0])?.h;
    let h_exact = field.eval_h_continuous(&path, h_start)?;
    let mut sup = 0.0f64;
    for (i, &t) in thetas.iter().enumerate() {
        sup = sup.max((h_exact[i] - exp.h_continuous(r, t)).abs());
    }
    let fitted = fit_pitch(&thetas, &h_exact, order)?;
    Ok(FarFieldReport {
        radius: r,
        order,
        sup_error: sup,
        truncation_bound: exp.truncation_bound(r),
        fitted_pitch: fitted,
        total_pitch: exp.total_pitch,
    })
}

/// Least squares for `h(theta) = a + b theta + sum_k (alpha_k cos k theta +
/// beta_k sin k theta)`; returns `b / (2 pi)`... the slope `b` itself is the
/// pitch because `h` grows by `2 pi p` per turn while the rest is periodic.
fn fit_pitch(thetas: &[f64], h: &[f64], harmonics: usize) -> Result<f64> {
    let dim = 2 + 2 * harmonics;
    let mut basis = vec![0.0f64; dim];
    let mut normal = vec![0.0f64; dim * dim];
    let mut rhs = vec![0.0f64; dim];
    for (&t, &hv) in thetas.iter().zip(h) {
        basis[0] = 1.0;
        basis[1] = t;
        for k in 1..=harmonics {
            basis[2 * k] = (k as f64 * t).cos();
            basis[2 * k + 1] = (k as f64 * t).sin();
        }
        for i in 0..dim {
            rhs[i] += basis[i] * hv;
            for j in 0..dim {
                normal[i * dim + j] += basis[i] * basis[j];
            }
        }
    }
    solve_dense(&mut normal, &mut rhs, dim)?;
    Ok(rhs[1])
}

/// Gaussian elimination with partial pivoting on a dense system; tiny
/// symmetric systems only, so no factorization reuse.
fn solve_dense(a: &mut [f64], b: &mut [f64], n: usize) -> Result<()> {
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if a[row * n + col].abs() > a[pivot * n + col].abs() {
                pivot = row;
            }
        }
        if a[pivot * n + col].abs() < 1e-12 {
            return Err(Error::Numeric("singular least-squares system".into()));
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
            }
            b.swap(col, pivot);
        }
        let d = a[col * n + col];
        for row in col + 1..n {
            let f = a[row * n + col] / d;
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row * n + k] -= f * a[col * n + k];
            }
            b[row] -= f * b[col];
        }
    }
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in col + 1..n {
            acc -= a[col * n + k] * b[k];
        }
        b[col] = acc / a[col * n + col];
    }
    Ok(())
}
