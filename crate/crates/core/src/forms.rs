//! Integer binary quadratic forms `ax² + bxy + cy²`, the objects they name
//! in the upper half-plane (CM points, RM curves, rational geodesics), and the
//! exact incidence relation `2aC + 2cA = bB` that links them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::PointH;

pub(crate) fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i128
}

/// A normalized integer form: `gcd(a,b,c) = 1` and the first nonzero
/// coefficient is positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntForm {
    a: i128,
    b: i128,
    c: i128,
}

impl IntForm {
    /// Normalizes the raw triple.
    pub fn new(a: i128, b: i128, c: i128) -> Result<Self> {
        normalize(a, b, c)
    }

    pub fn a(&self) -> i128 {
        self.a
    }

    pub fn b(&self) -> i128 {
        self.b
    }

    pub fn c(&self) -> i128 {
        self.c
    }

    pub fn coefficients(&self) -> (i128, i128, i128) {
        (self.a, self.b, self.c)
    }

    pub fn discriminant(&self) -> Result<i128> {
        discriminant_raw(self.a, self.b, self.c)
    }

    /// Value of the form at the integer pair `(x, y)`.
    pub fn eval(&self, x: i128, y: i128) -> Result<i128> {
        let ov = || Error::Overflow("form evaluation");
        let ax2 = self.a.checked_mul(x).and_then(|v| v.checked_mul(x)).ok_or_else(ov)?;
        let bxy = self.b.checked_mul(x).and_then(|v| v.checked_mul(y)).ok_or_else(ov)?;
        let cy2 = self.c.checked_mul(y).and_then(|v| v.checked_mul(y)).ok_or_else(ov)?;
        ax2.checked_add(bxy).and_then(|v| v.checked_add(cy2)).ok_or_else(ov)
    }

    pub fn as_f64(&self) -> (f64, f64, f64) {
        (self.a as f64, self.b as f64, self.c as f64)
    }
}

impl std::fmt::Display for IntForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// Divides out the content and flips the sign so the first nonzero entry is
/// positive. The roots of `ax² + bx + c` are unchanged.
pub fn normalize(a: i128, b: i128, c: i128) -> Result<IntForm> {
    if a == 0 && b == 0 && c == 0 {
        return Err(Error::ZeroForm);
    }
    let g = gcd_i128(gcd_i128(a, b), c);
    let lead = if a != 0 {
        a
    } else if b != 0 {
        b
    } else {
        c
    };
    let sign = if lead < 0 { -1 } else { 1 };
    // g fits in i128 unless every nonzero entry is i128::MIN.
    let g = i128::try_from(g as u128).map_err(|_| Error::Overflow("normalize"))?;
    let scale = |v: i128| -> Result<i128> {
        (v / g).checked_mul(sign).ok_or(Error::Overflow("normalize"))
    };
    Ok(IntForm { a: scale(a)?, b: scale(b)?, c: scale(c)? })
}

/// `b² − 4ac` with overflow detection.
pub fn discriminant_raw(a: i128, b: i128, c: i128) -> Result<i128> {
    let ov = || Error::Overflow("discriminant");
    let b2 = b.checked_mul(b).ok_or_else(ov)?;
    let ac4 = a.checked_mul(c).and_then(|v| v.checked_mul(4)).ok_or_else(ov)?;
    b2.checked_sub(ac4).ok_or_else(ov)
}

/// A real form `(A,B,C)` with `(A,B) ≠ (0,0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealForm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl RealForm {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::NonFinite("real form coefficients"));
        }
        if a == 0.0 && b == 0.0 {
            return Err(Error::DegenerateRealForm);
        }
        Ok(RealForm { a, b, c })
    }

    pub fn discriminant(&self) -> f64 {
        self.b * self.b - 4.0 * self.a * self.c
    }

    /// `At² + Bt + C`.
    pub fn value(&self, t: f64) -> f64 {
        (self.a * t + self.b) * t + self.c
    }

    /// The coefficients as integers when all three are integral and small
    /// enough that `F(m,n)` can be evaluated exactly in `i128`.
    pub fn integer_coefficients(&self) -> Option<(i128, i128, i128)> {
        const LIMIT: f64 = 9.0e15;
        let conv = |x: f64| (x.fract() == 0.0 && x.abs() <= LIMIT).then_some(x as i128);
        Some((conv(self.a)?, conv(self.b)?, conv(self.c)?))
    }

    /// Real roots in increasing order.
    pub fn real_roots(&self) -> Vec<f64> {
        let (a, b, c) = (self.a, self.b, self.c);
        if a == 0.0 {
            return vec![-c / b];
        }
        let d = self.discriminant();
        if d < 0.0 {
            return vec![];
        }
        if d == 0.0 {
            return vec![-b / (2.0 * a)];
        }
        let s = d.sqrt();
        // stable form of the quadratic formula
        let q = -0.5 * (b + b.signum_or_one() * s);
        let (r1, r2) = if c == 0.0 { (0.0, -b / a) } else { (q / a, c / q) };
        if r1 <= r2 {
            vec![r1, r2]
        } else {
            vec![r2, r1]
        }
    }
}

impl From<IntForm> for RealForm {
    fn from(f: IntForm) -> Self {
        RealForm { a: f.a as f64, b: f.b as f64, c: f.c as f64 }
    }
}

pub(crate) trait SignumOrOne {
    fn signum_or_one(self) -> f64;
}

impl SignumOrOne for f64 {
    fn signum_or_one(self) -> f64 {
        if self < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
}

/// A hyperbolic geodesic: a vertical half-line or a semicircle centered on
/// the real axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Geodesic {
    HalfLine { x: f64 },
    Semicircle { q: f64, r: f64 },
}

impl Geodesic {
    pub fn semicircle(q: f64, r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() || !q.is_finite() {
            return Err(Error::BadRadius(r));
        }
        Ok(Geodesic::Semicircle { q, r })
    }

    /// Signed distance-like residual of `z` from the curve: `x − x0` for a
    /// half-line, `|z − q| − r` for a semicircle.
    pub fn residual(&self, z: PointH) -> f64 {
        match *self {
            Geodesic::HalfLine { x } => z.x - x,
            Geodesic::Semicircle { q, r } => (z.x - q).hypot(z.y) - r,
        }
    }

    pub fn contains(&self, z: PointH, tol: f64) -> bool {
        self.residual(z).abs() <= tol
    }

    /// Unit tangent at a point of the curve (orientation is arbitrary).
    pub fn tangent(&self, z: PointH) -> (f64, f64) {
        match *self {
            Geodesic::HalfLine { .. } => (0.0, 1.0),
            Geodesic::Semicircle { q, .. } => {
                let (dx, dy) = (z.x - q, z.y);
                let n = dx.hypot(dy);
                (-dy / n, dx / n)
            }
        }
    }
}

/// The geodesic `G_(A,B,C) = {z : A|z|² + B Re z + C = 0}` of a normalized
/// form of positive discriminant.
pub fn geodesic_of_form(f: &IntForm) -> Result<Geodesic> {
    let d = f.discriminant()?;
    if d <= 0 {
        return Err(Error::NotPositiveDiscriminant(d));
    }
    let (a, b, c) = f.as_f64();
    if f.a == 0 {
        Ok(Geodesic::HalfLine { x: -c / b })
    } else {
        Ok(Geodesic::Semicircle { q: -b / (2.0 * a), r: (d as f64).sqrt() / (2.0 * a) })
    }
}

/// A CM point `[a,b,c] = (−b + √(b²−4ac)) / 2a`, `D < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CmPoint {
    pub form: IntForm,
    pub disc: i128,
    pub z: PointH,
}

impl CmPoint {
    pub fn new(form: IntForm) -> Result<Self> {
        let disc = form.discriminant()?;
        if disc >= 0 {
            return Err(Error::WrongDiscriminantSign(format!(
                "CM point needs D < 0, form {form} has D = {disc}"
            )));
        }
        let a = form.a as f64;
        let z = PointH { x: -(form.b as f64) / (2.0 * a), y: ((-disc) as f64).sqrt() / (2.0 * a) };
        Ok(CmPoint { form, disc, z })
    }

    /// `|az² + bz + c|` relative to `|a||z|² + |b||z| + |c|`; zero up to
    /// rounding.
    pub fn residual(&self) -> f64 {
        let (a, b, c) = self.form.as_f64();
        let z = num_complex::Complex64::new(self.z.x, self.z.y);
        let r = (a * z * z + b * z + c).norm();
        r / (a.abs() * z.norm_sqr() + b.abs() * z.norm() + c.abs())
    }
}

/// An RM curve `⟨a,b,c⟩`: the semicircle joining the real roots of a
/// normalized form with `D > 0`, `a ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RmCurve {
    pub form: IntForm,
    pub disc: i128,
    pub center: f64,
    pub radius: f64,
}

impl RmCurve {
    pub fn new(form: IntForm) -> Result<Self> {
        let disc = form.discriminant()?;
        if disc <= 0 {
            return Err(Error::NotPositiveDiscriminant(disc));
        }
        if form.a == 0 {
            return Err(Error::InvalidArgument(format!(
                "{form} has a = 0 and names a half-line, not an RM curve"
            )));
        }
        let a = form.a as f64;
        Ok(RmCurve {
            form,
            disc,
            center: -(form.b as f64) / (2.0 * a),
            radius: (disc as f64).sqrt() / (2.0 * a.abs()),
        })
    }

    pub fn geodesic(&self) -> Geodesic {
        Geodesic::Semicircle { q: self.center, r: self.radius }
    }
}

/// `2aC + 2cA − bB` for the pair `(a,b,c)`, `(A,B,C)`.
pub fn incidence_defect(x: &IntForm, y: &IntForm) -> Result<i128> {
    let ov = || Error::Overflow("incidence relation");
    let t1 = x.a.checked_mul(y.c).and_then(|v| v.checked_mul(2)).ok_or_else(ov)?;
    let t2 = x.c.checked_mul(y.a).and_then(|v| v.checked_mul(2)).ok_or_else(ov)?;
    let t3 = x.b.checked_mul(y.b).ok_or_else(ov)?;
    t1.checked_add(t2).and_then(|v| v.checked_sub(t3)).ok_or_else(ov)
}

fn require_sign(f: &IntForm, positive: bool, role: &str) -> Result<i128> {
    let d = f.discriminant()?;
    let ok = if positive { d > 0 } else { d < 0 };
    if ok {
        Ok(d)
    } else {
        Err(Error::WrongDiscriminantSign(format!(
            "{role} {f} has D = {d}, expected {}",
            if positive { "D > 0" } else { "D < 0" }
        )))
    }
}

/// Whether the CM point `[a,b,c]` lies on the rational geodesic `G_(A,B,C)`.
pub fn cm_on_geodesic(cm: &IntForm, g: &IntForm) -> Result<bool> {
    require_sign(cm, false, "CM point")?;
    require_sign(g, true, "geodesic")?;
    Ok(incidence_defect(cm, g)? == 0)
}

/// Whether the RM curve `⟨a,b,c⟩` meets `G_(A,B,C)` at a right angle.
pub fn rm_perp_geodesic(rm: &IntForm, g: &IntForm) -> Result<bool> {
    require_sign(rm, true, "RM curve")?;
    if rm.a == 0 {
        return Err(Error::InvalidArgument(format!("{rm} has a = 0 and is not an RM curve")));
    }
    require_sign(g, true, "geodesic")?;
    Ok(incidence_defect(rm, g)? == 0)
}

/// Whether the RM curve `⟨a,b,c⟩` passes through the CM point `[A,B,C]`.
pub fn rm_through_cm(rm: &IntForm, p: &IntForm) -> Result<bool> {
    require_sign(rm, true, "RM curve")?;
    if rm.a == 0 {
        return Err(Error::InvalidArgument(format!("{rm} has a = 0 and is not an RM curve")));
    }
    require_sign(p, false, "CM point")?;
    Ok(incidence_defect(rm, p)? == 0)
}
