//! Planar integration regions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Complex;

/// Region of the motif plane over which areas and curvatures are integrated.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum Region {
    Annulus { cx: f64, cy: f64, r_inner: f64, r_outer: f64 },
    Rect { x0: f64, x1: f64, y0: f64, y1: f64 },
}

impl Region {
    pub fn annulus(center: Complex, r_inner: f64, r_outer: f64) -> Result<Self> {
        let r = Region::Annulus { cx: center.re, cy: center.im, r_inner, r_outer };
        r.validate()?;
        Ok(r)
    }

    pub fn disc(center: Complex, radius: f64) -> Result<Self> {
        Self::annulus(center, 0.0, radius)
    }

    pub fn rect(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        let r = Region::Rect { x0, x1, y0, y1 };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Region::Annulus { cx, cy, r_inner, r_outer } => {
                cx.is_finite()
                    && cy.is_finite()
                    && r_inner.is_finite()
                    && r_outer.is_finite()
                    && r_inner >= 0.0
                    && r_outer > r_inner
            }
            Region::Rect { x0, x1, y0, y1 } => {
                x0.is_finite() && x1.is_finite() && y0.is_finite() && y1.is_finite()
                    && x1 > x0
                    && y1 > y0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("degenerate region {:?}", self)))
        }
    }

    /// Axis-aligned bounding box `(x0, x1, y0, y1)`.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        match *self {
            Region::Annulus { cx, cy, r_outer, .. } => {
                (cx - r_outer, cx + r_outer, cy - r_outer, cy + r_outer)
            }
            Region::Rect { x0, x1, y0, y1 } => (x0, x1, y0, y1),
        }
    }

    /// Signed membership function, positive inside, with a sign change
    /// exactly on the boundary. Not a distance.
    pub fn mask(&self, x: f64, y: f64) -> f64 {
        match *self {
            Region::Annulus { cx, cy, r_inner, r_outer } => {
                let r = ((x - cx) * (x - cx) + (y - cy) * (y - cy)).sqrt();
                (r_outer - r).min(r - r_inner)
            }
            Region::Rect { x0, x1, y0, y1 } => {
                (x - x0).min(x1 - x).min(y - y0).min(y1 - y)
            }
        }
    }

    pub fn contains(&self, z: Complex) -> bool {
        self.mask(z.re, z.im) >= 0.0
    }

    /// Planar (flat) area, for sanity checks and tolerance budgeting.
    pub fn planar_area(&self) -> f64 {
        match *self {
            Region::Annulus { r_inner, r_outer, .. } => {
                std::f64::consts::PI * (r_outer * r_outer - r_inner * r_inner)
            }
            Region::Rect { x0, x1, y0, y1 } => (x1 - x0) * (y1 - y0),
        }
    }
}
