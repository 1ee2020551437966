//! Upper half-plane geometry: distance, geodesics through two points, the
//! angle function `ang_p`, hyperbolic balls as Euclidean disks, and sector
//! areas.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{self, Geodesic, IntForm, RmCurve};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointH {
    pub x: f64,
    pub y: f64,
}

impl PointH {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::NonFinite("point coordinates"));
        }
        if y <= 0.0 {
            return Err(Error::NotInUpperHalfPlane(y));
        }
        Ok(PointH { x, y })
    }

    /// `z ↦ (az + b)/(cz + d)` for a real matrix of determinant 1.
    pub fn mobius(self, g: [[f64; 2]; 2]) -> PointH {
        let [[a, b], [c, d]] = g;
        // (a z + b)(c z̄ + d) / |c z + d|²
        let (x, y) = (self.x, self.y);
        let den = (c * x + d).powi(2) + (c * y).powi(2);
        let re = (a * x + b) * (c * x + d) + a * c * y * y;
        let im = (a * d - b * c) * y;
        PointH { x: re / den, y: im / den }
    }

    pub fn mobius_int(self, g: [[i64; 2]; 2]) -> PointH {
        self.mobius([[g[0][0] as f64, g[0][1] as f64], [g[1][0] as f64, g[1][1] as f64]])
    }
}

/// Hyperbolic distance, `arccosh(1 + |z1 − z2|² / (2 y1 y2))`, computed as
/// `2 asinh(|z1 − z2| / (2√(y1 y2)))` to keep precision for close points.
pub fn dist(z1: PointH, z2: PointH) -> f64 {
    let e = (z1.x - z2.x).hypot(z1.y - z2.y);
    2.0 * (e / (2.0 * (z1.y * z2.y).sqrt())).asinh()
}

/// The geodesic through two distinct points.
pub fn geodesic_through(p: PointH, z: PointH) -> Result<Geodesic> {
    if p == z {
        return Err(Error::CoincidentPoints);
    }
    if p.x == z.x {
        return Ok(Geodesic::HalfLine { x: p.x });
    }
    let q = 0.5 * (z.x + p.x) + (z.y * z.y - p.y * p.y) / (2.0 * (z.x - p.x));
    let r = (p.x - q).hypot(p.y);
    Ok(Geodesic::Semicircle { q, r })
}

/// Angle of `z` seen from `p`, in `[0, 2π)`.
///
/// With `G_{q,r}` the geodesic through both points the base value is
/// `arccos((q − x0)/r)`; it is used as is when `z` lies to the right of `p`
/// (or straight below), and shifted by `π` otherwise.
pub fn ang_p(p: PointH, z: PointH) -> Result<f64> {
    if p == z {
        return Err(Error::CoincidentPoints);
    }
    if z.x == p.x {
        return Ok(if z.y < p.y { 0.0 } else { PI });
    }
    let Geodesic::Semicircle { q, r } = geodesic_through(p, z)? else {
        unreachable!("distinct real parts give a semicircle")
    };
    let base = ((q - p.x) / r).clamp(-1.0, 1.0).acos();
    Ok(if z.x > p.x { base } else { (base + PI) % TAU })
}

/// Argument of `z` about the center of a semicircle, `atan2(y, x − q)`.
pub fn arg_about(q: f64, z: PointH) -> f64 {
    z.y.atan2(z.x - q)
}

/// A hyperbolic ball written as a Euclidean disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallE {
    pub center: PointH,
    pub radius_euclid: f64,
}

impl BallE {
    pub fn contains(&self, z: PointH) -> bool {
        (z.x - self.center.x).hypot(z.y - self.center.y) <= self.radius_euclid
    }

    pub fn y_min(&self) -> f64 {
        self.center.y - self.radius_euclid
    }

    pub fn y_max(&self) -> f64 {
        self.center.y + self.radius_euclid
    }
}

/// `{z : dist(z, z0) ≤ s0}`: center `x0 + i y0 cosh s0`, radius `y0 sinh s0`.
pub fn ball(z0: PointH, s0: f64) -> Result<BallE> {
    if !(s0 > 0.0) || !s0.is_finite() {
        return Err(Error::InvalidArgument(format!("ball radius must be positive, got {s0}")));
    }
    Ok(BallE {
        center: PointH { x: z0.x, y: z0.y * s0.cosh() },
        radius_euclid: z0.y * s0.sinh(),
    })
}

/// Hyperbolic area (`dx dy / y²`) of the sector of `ball(z0, s0)` between the
/// angles `θ1 ≤ θ2`.
pub fn sector_area(_z0: PointH, s0: f64, theta1: f64, theta2: f64) -> Result<f64> {
    if !(0.0 <= theta1 && theta1 <= theta2 && theta2 <= TAU) {
        return Err(Error::BadAngleOrder(theta1, theta2));
    }
    Ok((theta2 - theta1) * (s0.cosh() - 1.0))
}

/// The intersection point of an RM curve with a perpendicular rational
/// geodesic.
pub fn perp_foot(rm: &RmCurve, g: &IntForm) -> Result<PointH> {
    if !forms::rm_perp_geodesic(&rm.form, g)? {
        return Err(Error::NotPerpendicularPair);
    }
    circle_meet(rm, g)
}

/// Where an RM curve crosses the geodesic `G_g`, from the radical-axis
/// formula for `Re z`. No perpendicularity is assumed.
pub fn circle_meet(rm: &RmCurve, g: &IntForm) -> Result<PointH> {
    let (a, b, c) = rm.form.as_f64();
    let (a0, b0, c0) = g.as_f64();
    let x = if g.a() == 0 {
        -c0 / b0
    } else {
        (a0 * c - c0 * a) / (b0 * a - a0 * b)
    };
    let dx = x - rm.center;
    let y2 = (rm.radius - dx) * (rm.radius + dx);
    if !(y2 > 0.0) || !x.is_finite() {
        return Err(Error::NotPerpendicularPair);
    }
    Ok(PointH { x, y: y2.sqrt() })
}
