use std::f64::consts::PI;

use super::interval::{Piece, ProjInterval};
use crate::error::{Error, Result};
use crate::forms::RealForm;

/// Checks that `I` avoids the real roots of `F`, that `F > 0` on it, and
/// that `∫_I dμ` is finite. Returns the pieces of `I`.
pub fn validate(f: &RealForm, i: &ProjInterval) -> Result<Vec<Piece>> {
    let pieces = i.pieces();
    let roots = f.real_roots();
    for p in &pieces {
        if let Some(&root) = roots.iter().find(|&&r| p.contains(r)) {
            return Err(Error::IntervalTouchesRoot { root });
        }
        if !(f.value(p.sample()) > 0.0) {
            return Err(Error::IntervalOutsidePositivityRegion);
        }
        if !p.is_bounded() && f.a == 0.0 {
            return Err(Error::UnboundedDivergence);
        }
    }
    Ok(pieces)
}

/// An antiderivative of `1/(At² + Bt + C)` valid away from the real roots,
/// with its limits at `±∞`.
fn antiderivative(f: &RealForm, t: f64) -> f64 {
    let (a, b, c) = (f.a, f.b, f.c);
    let d = f.discriminant();
    if a == 0.0 {
        return (b * t + c).abs().ln() / b;
    }
    if d > 0.0 {
        if t.is_infinite() {
            return 0.0;
        }
        let s = d.sqrt();
        let roots = f.real_roots();
        let (rm, rp) = if a > 0.0 { (roots[0], roots[1]) } else { (roots[1], roots[0]) };
        // ln|(t − r₊)/(t − r₋)| = ln|1 − w|, w = (r₊ − r₋)/(t − r₋)
        let w = (rp - rm) / (t - rm);
        let l = if w.abs() < 0.5 { (-w).ln_1p() } else { ((t - rp) / (t - rm)).abs().ln() };
        return l / s;
    }
    if d < 0.0 {
        let s = (-d).sqrt();
        let arg = if t.is_infinite() { t.signum() * f64::INFINITY } else { (2.0 * a * t + b) / s };
        return 2.0 / s * arg.atan();
    }
    if t.is_infinite() {
        return 0.0;
    }
    -2.0 / (2.0 * a * t + b)
}

fn piece_integral(f: &RealForm, p: &Piece) -> f64 {
    antiderivative(f, p.hi) - antiderivative(f, p.lo)
}

/// `μ(I) = ∫_I dt / (At² + Bt + C)` in closed form.
pub fn mu_integral(f: &RealForm, i: &ProjInterval) -> Result<f64> {
    let pieces = validate(f, i)?;
    Ok(pieces.iter().map(|p| piece_integral(f, p)).sum())
}

/// The main term `(3Δ/π²) μ(I)`.
pub fn predicted_count(f: &RealForm, delta: f64, i: &ProjInterval) -> Result<f64> {
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::InvalidArgument(format!("Δ must be finite and non-negative, got {delta}")));
    }
    let mu = mu_integral(f, i)?;
    Ok(3.0 * delta / (PI * PI) * mu)
}
