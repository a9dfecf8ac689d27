//! Surface area and total curvature integrals.
//!
//! The conformal structure makes both integrands closed-form pointwise:
//! `dA = (1 + |hz|^2)^2 dx dy` and `K dA = -4 |hzz|^2 / (1 + |hz|^2)^2 dx dy`.
//! Area integrals require a region free of motif centers (the area density
//! diverges there); the curvature density instead vanishes at the centers,
//! and the north-hemisphere restriction excludes their neighborhoods anyway.

use crate::error::{Error, Result};
use crate::field::{Complex, MotifField};
use crate::quad::{annulus_integral, masked_rows, nested_rect};
use crate::region::Region;

fn area_density(field: &MotifField, x: f64, y: f64) -> f64 {
    match field.hz_hzz(Complex::new(x, y)) {
        Ok((hz, _)) => {
            let w = 1.0 + hz.norm_sqr();
            w * w
        }
        Err(_) => f64::NAN,
    }
}

/// `K dA` per unit planar area. `K` vanishes like `r^4` into a motif center
/// while the area weight grows like `r^-4`, so the density extends
/// continuously to `-16 / pitch^2` there; guard-radius rejections are healed
/// with that limit.
pub fn curvature_density(field: &MotifField, x: f64, y: f64) -> f64 {
    let z = Complex::new(x, y);
    match field.hz_hzz(z) {
        Ok((hz, hzz)) => {
            let w = 1.0 + hz.norm_sqr();
            -4.0 * hzz.norm_sqr() / (w * w)
        }
        Err(Error::SingularPoint { .. }) => {
            let p = field.nearest_pitch(z);
            -16.0 / (p * p)
        }
        Err(_) => f64::NAN,
    }
}

fn require_no_centers(field: &MotifField, region: &Region) -> Result<()> {
    let (x0, x1, y0, y1) = region.bounding_box();
    let pad = field.guard_radius();
    for s in field.singularities_in(x0 - pad, x1 + pad, y0 - pad, y1 + pad) {
        if region.mask(s.re, s.im) > -pad {
            return Err(Error::DegenerateGeometry(format!(
                "area integral diverges: motif center at {} touches the region",
                s
            )));
        }
    }
    Ok(())
}

/// Surface area over `region`, which must stay clear of all motif centers.
pub fn integrate_area(field: &MotifField, region: &Region, tol: f64) -> Result<f64> {
    region.validate()?;
    require_no_centers(field, region)?;
    let f = |x: f64, y: f64| area_density(field, x, y);
    match *region {
        Region::Annulus { cx, cy, r_inner, r_outer } => {
            annulus_integral(&f, cx, cy, r_inner, r_outer, tol)
        }
        Region::Rect { x0, x1, y0, y1 } => nested_rect(&f, x0, x1, y0, y1, tol),
    }
}

/// Scan resolution for the north-hemisphere mask: enough intervals to
/// separate the `|g| = 1` lobes of every motif crossed by a row.
fn mask_scan(field: &MotifField, region: &Region) -> usize {
    let (x0, x1, y0, y1) = region.bounding_box();
    let n = field.singularities_in(x0, x1, y0, y1).len();
    (64 + 48 * n).min(4096)
}

/// Total curvature `int K dA` over `region` intersected with the
/// north-hemisphere set `|g| >= 1`.
pub fn total_curvature_north(field: &MotifField, region: &Region, tol: f64) -> Result<f64> {
    region.validate()?;
    let (x0, x1, y0, y1) = region.bounding_box();
    let f = |x: f64, y: f64| curvature_density(field, x, y);
    let mask = |x: f64, y: f64| {
        let omega = match field.hz_hzz(Complex::new(x, y)) {
            Ok((hz, _)) => 1.0 - hz.norm_sqr(),
            Err(_) => -1.0,
        };
        match *region {
            Region::Rect { .. } => omega,
            _ => omega.min(region.mask(x, y)),
        }
    };
    masked_rows(&f, &mask, x0, x1, y0, y1, mask_scan(field, region), tol)
}

/// Total curvature over all of `region`, without the hemisphere restriction.
pub fn total_curvature(field: &MotifField, region: &Region, tol: f64) -> Result<f64> {
    region.validate()?;
    let f = |x: f64, y: f64| curvature_density(field, x, y);
    match *region {
        Region::Annulus { cx, cy, r_inner, r_outer } => {
            annulus_integral(&f, cx, cy, r_inner, r_outer, tol)
        }
        Region::Rect { x0, x1, y0, y1 } => nested_rect(&f, x0, x1, y0, y1, tol),
    }
}

/// Upper bound on `|int K dA|` outside the disc of radius `r_max` for a
/// finite field with zero total pitch. The leading far-field of `hz` is then
/// dipolar, giving `|K| dA <= 4 p^2 R^2 / r^6 dx dy` with `p` the pitch scale
/// and `R` the configuration diameter; the factor 2 is safety margin.
pub fn balanced_tail_bound(pitch_scale: f64, diameter: f64, r_max: f64) -> f64 {
    4.0 * std::f64::consts::PI * pitch_scale * pitch_scale * diameter * diameter
        / (r_max * r_max * r_max * r_max)
}

/// Upper bound on the total curvature missed by truncating a chain strip at
/// `|y| = y_max`: the curvature density decays as `exp(-4 pi y / spacing)`.
pub fn strip_tail_bound(pitch: f64, spacing: f64, y_max: f64) -> f64 {
    let l = spacing;
    let p = pitch.abs();
    16.0 * p * p * std::f64::consts::PI.powi(3) / (l * l)
        * (-4.0 * std::f64::consts::PI * y_max / l).exp()
}
