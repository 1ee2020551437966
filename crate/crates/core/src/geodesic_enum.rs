//! CM points and RM curves attached to a fixed rational geodesic or CM
//! point.
//!
//! Incidence with the base form `(A0,B0,C0)` is the linear condition
//! `aP = bQ + cR`, whose primitive solutions with `a ≥ 1` are in bijection
//! with coprime `(m, n)`, `n ≥ 1`. The discriminant of the solution at
//! `(m, n)` is a fixed integer quadratic form in `(m, n)`, so every
//! enumeration here is an aggregate-Linnik enumeration of that form over a
//! window of `t = m/n` cut out by the requested arc.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{gcd_i128, CmPoint, IntForm, RealForm, RmCurve};
use crate::hyperbolic::{self, PointH};
use crate::linnik::{self, Enumeration, Fraction, Piece};
use crate::numtheory::{ext_gcd, is_square, isqrt};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    CmOnGeodesic,
    RmPerpGeodesic,
    RmThroughPoint,
}

/// The solution lattice of the incidence equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum Lattice {
    /// `a = nS`, `b = nPb0 + mR/S`, `c = nPc0 − mQ/S`.
    Semicircle { p: i128, q: i128, r: i128, s: i128, b0: i128, c0: i128 },
    /// `(a, b, c) = (nQ, nP, −m)`.
    HalfLine { p: i128, q: i128 },
}

/// Which coordinate records carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordKind {
    /// Argument about the center of a semicircle, `ds = dθ / sin θ`.
    Theta,
    /// Height on a vertical half-line, `ds = dy / y`.
    Y,
    /// `ang_p` of a curve through a point, uniform `dθ`.
    Angle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicParam {
    base: IntForm,
    mode: Mode,
    lattice: Lattice,
    derived: (i128, i128, i128),
    derived_disc: i128,
}

fn ck(v: Option<i128>) -> Result<i128> {
    v.ok_or(Error::Overflow("geodesic parametrization"))
}

/// Builds the parametrization of the objects incident to `g` in `mode`.
pub fn build_param(g: &IntForm, mode: Mode) -> Result<GeodesicParam> {
    let d0 = g.discriminant()?;
    let point = mode == Mode::RmThroughPoint;
    if (point && d0 >= 0) || (!point && d0 <= 0) {
        return Err(Error::WrongDiscriminantSign(format!(
            "{mode:?} needs a form with D {} 0, {g} has D = {d0}",
            if point { "<" } else { ">" }
        )));
    }
    let (a0, b0, c0) = g.coefficients();
    let (lattice, derived) = if a0 == 0 {
        let h = if b0 % 2 == 0 { 2 } else { 1 };
        let sg = b0.signum();
        let p = ck(c0.checked_mul(2 * sg))? / h;
        let q = b0 * sg / h;
        (Lattice::HalfLine { p, q }, (0, ck(q.checked_mul(4))?, ck(p.checked_mul(p))?))
    } else {
        let h = if d0 % 2 == 0 { 2 } else { 1 };
        let p = ck(c0.checked_mul(-2))? / h;
        let q = -b0 / h;
        let r = ck(a0.checked_mul(2))? / h;
        let (s, bb, cc) = ext_gcd(q, r)?;
        let rs = r / s;
        let big_a = ck(rs.checked_mul(rs))?;
        let big_b = ck(p
            .checked_mul(bb)
            .and_then(|v| v.checked_mul(2 * rs))
            .and_then(|v| v.checked_add(q.checked_mul(4)?)))?;
        let pb = ck(p.checked_mul(bb))?;
        let big_c = ck(pb
            .checked_mul(pb)
            .and_then(|v| v.checked_sub(s.checked_mul(4)?.checked_mul(p)?.checked_mul(cc)?)))?;
        (Lattice::Semicircle { p, q, r, s, b0: bb, c0: cc }, (big_a, big_b, big_c))
    };
    let (a, b, c) = derived;
    let derived_disc = ck(b.checked_mul(b).and_then(|v| v.checked_sub(a.checked_mul(c)?.checked_mul(4)?)))?;
    let h = if d0 % 2 == 0 { 2 } else { 1 };
    debug_assert_eq!(derived_disc * h * h, 16 * d0);
    Ok(GeodesicParam { base: *g, mode, lattice, derived, derived_disc })
}

impl GeodesicParam {
    pub fn base(&self) -> IntForm {
        self.base
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    /// `(A, B, C)` with `disc(mn_to_form(m, n)) = Am² + Bmn + Cn²`.
    pub fn derived(&self) -> (i128, i128, i128) {
        self.derived
    }

    pub fn derived_disc(&self) -> i128 {
        self.derived_disc
    }

    pub fn coord_kind(&self) -> CoordKind {
        match (self.mode, self.lattice) {
            (Mode::RmThroughPoint, _) => CoordKind::Angle,
            (_, Lattice::Semicircle { .. }) => CoordKind::Theta,
            (_, Lattice::HalfLine { .. }) => CoordKind::Y,
        }
    }

    /// The form whose positive values up to `Δ` are enumerated.
    pub fn target_form(&self) -> (i128, i128, i128) {
        let (a, b, c) = self.derived;
        match self.mode {
            Mode::CmOnGeodesic => (-a, -b, -c),
            _ => (a, b, c),
        }
    }

    fn target_real(&self) -> RealForm {
        let (a, b, c) = self.target_form();
        RealForm { a: a as f64, b: b as f64, c: c as f64 }
    }

    fn derived_f64(&self) -> (f64, f64, f64, f64) {
        let (a, b, c) = self.derived;
        (a as f64, b as f64, c as f64, (self.derived_disc as f64).abs().sqrt())
    }

    /// The raw incident triple at `(m, n)`.
    pub fn triple(&self, m: i128, n: i128) -> Result<(i128, i128, i128)> {
        match self.lattice {
            Lattice::Semicircle { p, q, r, s, b0, c0 } => Ok((
                ck(n.checked_mul(s))?,
                ck(n.checked_mul(p)
                    .and_then(|v| v.checked_mul(b0))
                    .and_then(|v| v.checked_add(m.checked_mul(r / s)?)))?,
                ck(n.checked_mul(p)
                    .and_then(|v| v.checked_mul(c0))
                    .and_then(|v| v.checked_sub(m.checked_mul(q / s)?)))?,
            )),
            Lattice::HalfLine { p, q } => Ok((ck(n.checked_mul(q))?, ck(n.checked_mul(p))?, ck(m.checked_neg())?)),
        }
    }

    /// The coordinate of the object at `t = m/n`.
    pub fn coordinate(&self, t: f64) -> f64 {
        let (a, b, c, sd) = self.derived_f64();
        let acos = |x: f64| x.clamp(-1.0, 1.0).acos();
        match (self.mode, self.lattice) {
            (Mode::RmThroughPoint, _) => {
                let f = a * t * t + b * t + c;
                acos((b + 2.0 * a * t) / (2.0 * a.sqrt() * f.sqrt()))
            }
            (Mode::CmOnGeodesic, Lattice::Semicircle { .. }) => acos((-b - 2.0 * a * t) / sd),
            (Mode::RmPerpGeodesic, Lattice::Semicircle { .. }) => acos(-sd / (2.0 * a * t + b)),
            (Mode::CmOnGeodesic, Lattice::HalfLine { .. }) => (-4.0 * t / b - 4.0 * c / (b * b)).max(0.0).sqrt(),
            (Mode::RmPerpGeodesic, Lattice::HalfLine { .. }) => (4.0 * t / b + 4.0 * c / (b * b)).max(0.0).sqrt(),
        }
    }

    /// Inverse of [`coordinate`](Self::coordinate); `±∞` where the
    /// coordinate is attained only at `t = ∞`.
    pub fn t_of_coordinate(&self, x: f64) -> f64 {
        let (a, b, c, sd) = self.derived_f64();
        match (self.mode, self.lattice) {
            (Mode::RmThroughPoint, _) => {
                if x <= 0.0 {
                    f64::INFINITY
                } else if x >= PI {
                    f64::NEG_INFINITY
                } else {
                    (sd / x.tan() - b) / (2.0 * a)
                }
            }
            (Mode::CmOnGeodesic, Lattice::Semicircle { .. }) => (-b - sd * x.cos()) / (2.0 * a),
            (Mode::RmPerpGeodesic, Lattice::Semicircle { .. }) => {
                if x == FRAC_PI_2 {
                    f64::INFINITY
                } else {
                    (-sd / x.cos() - b) / (2.0 * a)
                }
            }
            (Mode::CmOnGeodesic, Lattice::HalfLine { .. }) => -b * x * x / 4.0 - c / b,
            (Mode::RmPerpGeodesic, Lattice::HalfLine { .. }) => b * x * x / 4.0 - c / b,
        }
    }
}

/// The incident object at coprime `(m, n)`, `n ≥ 1`, normalized.
pub fn mn_to_form(param: &GeodesicParam, m: i64, n: i64) -> Result<IntForm> {
    if n < 1 || gcd_i128(m as i128, n as i128) != 1 {
        return Err(Error::InvalidArgument(format!("({m}, {n}) is not a coprime pair with n ≥ 1")));
    }
    let (a, b, c) = param.triple(m as i128, n as i128)?;
    IntForm::new(a, b, c)
}

/// A window along the geodesic, in its own coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Arc {
    /// `θ ∈ [lo, hi] ⊆ [0, π]` on a semicircle.
    Theta { lo: f64, hi: f64 },
    /// `y ∈ [lo, hi] ⊆ [0, ∞]` on a half-line.
    Y {
        lo: f64,
        #[serde(with = "crate::extf")]
        hi: f64,
    },
}

/// Pieces of `t`-space plus whether a closed piece reaches a root of the
/// target form, where the plain `n` bound is unavailable.
#[derive(Debug, Clone)]
struct TWindow {
    pieces: Vec<Piece>,
    touches_root: bool,
}

fn bad_arc(msg: String) -> Error {
    Error::InvalidInterval(msg)
}

fn t_window(param: &GeodesicParam, arc: Option<Arc>) -> Result<TWindow> {
    let full_line = TWindow { pieces: vec![Piece { lo: f64::NEG_INFINITY, hi: f64::INFINITY }], touches_root: false };
    if param.mode == Mode::RmThroughPoint {
        return match arc {
            None => Ok(full_line),
            Some(_) => Err(Error::InvalidArgument("curves through a point take no arc".into())),
        };
    }
    let semicircle = matches!(param.lattice, Lattice::Semicircle { .. });
    let (lo, hi) = match (arc, semicircle) {
        (None, true) => (0.0, PI),
        (None, false) => (0.0, f64::INFINITY),
        (Some(Arc::Theta { lo, hi }), true) => {
            if !(0.0 <= lo && lo <= hi && hi <= PI) {
                return Err(bad_arc(format!("θ-arc [{lo}, {hi}] is not inside [0, π]")));
            }
            (lo, hi)
        }
        (Some(Arc::Y { lo, hi }), false) => {
            if !(0.0 <= lo && lo <= hi) || hi.is_nan() {
                return Err(bad_arc(format!("y-arc [{lo}, {hi}] is not inside [0, ∞]")));
            }
            (lo, hi)
        }
        (Some(a), _) => {
            return Err(Error::InvalidArgument(format!(
                "{a:?} does not match a {} geodesic",
                if semicircle { "semicircle" } else { "half-line" }
            )))
        }
    };
    let t = |x: f64| param.t_of_coordinate(x);
    let piece = |lo: f64, hi: f64| Piece { lo, hi };
    Ok(match (param.mode, semicircle) {
        (Mode::CmOnGeodesic, true) => TWindow { pieces: vec![piece(t(lo), t(hi))], touches_root: lo == 0.0 || hi == PI },
        (Mode::CmOnGeodesic, false) => {
            let upper = if hi.is_infinite() { f64::NEG_INFINITY } else { t(hi) };
            TWindow { pieces: vec![piece(upper, t(lo))], touches_root: lo == 0.0 }
        }
        (Mode::RmPerpGeodesic, false) => {
            let upper = if hi.is_infinite() { f64::INFINITY } else { t(hi) };
            TWindow { pieces: vec![piece(t(lo), upper)], touches_root: lo == 0.0 }
        }
        (Mode::RmPerpGeodesic, true) => {
            // θ falls from π to π/2 on [r₊, ∞] and from π/2 to 0 on [−∞, r₋]
            let touches_root = lo == 0.0 || hi == PI;
            let pieces = if hi < FRAC_PI_2 || lo > FRAC_PI_2 {
                // one side of the top: no jump through ∞
                vec![piece(t(hi), t(lo))]
            } else if lo == FRAC_PI_2 && hi == FRAC_PI_2 {
                vec![]
            } else if lo == FRAC_PI_2 {
                vec![piece(t(hi), f64::INFINITY)]
            } else if hi == FRAC_PI_2 {
                vec![piece(f64::NEG_INFINITY, t(lo))]
            } else {
                vec![piece(t(hi), f64::INFINITY), piece(f64::NEG_INFINITY, t(lo))]
            };
            TWindow { pieces, touches_root }
        }
        (Mode::RmThroughPoint, _) => unreachable!("handled above"),
    })
}

/// `n` bound for windows reaching a root: `n ≤ Δ` for a linear form and
/// `n ≤ 2Δ·q/√D` for rational roots with denominators at most `q`.
fn root_n_bound(f: (i128, i128, i128), delta: u64) -> Result<u64> {
    let (a, b, c) = f;
    if a == 0 {
        return Ok(delta);
    }
    let d = b * b - 4 * a * c;
    if d <= 0 || !is_square(d) {
        return Err(Error::InfiniteEnumeration(format!(
            "the form ({a},{b},{c}) has irrational roots, so infinitely many objects accumulate at the \
             ends of the geodesic; restrict to an arc that stays away from them"
        )));
    }
    let sd = isqrt(d as u128) as i128;
    let den = |num: i128| (2 * a / gcd_i128(num, 2 * a)).abs();
    let qmax = den(-b + sd).max(den(-b - sd)) as u128;
    let bound = (2 * delta as u128 * qmax) / sd as u128 + 1;
    u64::try_from(bound).map_err(|_| Error::GuardExceeded(format!("n bound {bound} is too large")))
}

fn window_n_bound(param: &GeodesicParam, delta: u64, w: &TWindow) -> Result<u64> {
    if delta == 0 || w.pieces.is_empty() {
        return Ok(0);
    }
    if w.touches_root {
        root_n_bound(param.target_form(), delta)
    } else {
        linnik::n_bound(&param.target_real(), delta as f64, &w.pieces)
    }
}

fn enumerate_window(param: &GeodesicParam, delta: u64, w: &TWindow) -> Result<Enumeration> {
    let n_max = window_n_bound(param, delta, w)?;
    if n_max == 0 {
        return Ok(Enumeration { fractions: vec![], ties: 0, n_max: 0 });
    }
    linnik::enumerate_pieces(&param.target_real(), delta as f64, &w.pieces, n_max)
}

/// Largest denominator `n` an enumeration would scan; a cheap work estimate
/// that fails the same way the enumeration would.
pub fn n_bound_for(param: &GeodesicParam, delta: u64, arc: Option<Arc>) -> Result<u64> {
    window_n_bound(param, delta, &t_window(param, arc)?)
}

fn enumerate_param(param: &GeodesicParam, delta: u64, arc: Option<Arc>) -> Result<Vec<Fraction>> {
    let w = t_window(param, arc)?;
    Ok(enumerate_window(param, delta, &w)?.fractions)
}

fn sort_by_coord<T>(v: &mut [T], key: impl Fn(&T) -> f64) {
    v.sort_by(|x, y| key(x).total_cmp(&key(y)));
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CmRecord {
    pub point: CmPoint,
    pub t: Fraction,
    /// `θ` on a semicircle, `y` on a half-line.
    pub coord: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RmPerpRecord {
    pub curve: RmCurve,
    pub t: Fraction,
    pub foot: PointH,
    pub coord: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RmThroughRecord {
    pub curve: RmCurve,
    pub t: Fraction,
    pub angle: f64,
}

/// CM points on an already built parametrization, sorted by coordinate.
pub fn enum_cm_on_param(param: &GeodesicParam, delta: u64, arc: Option<Arc>) -> Result<Vec<CmRecord>> {
    if param.mode != Mode::CmOnGeodesic {
        return Err(Error::InvalidArgument(format!("parametrization is in {:?} mode", param.mode)));
    }
    let fr = enumerate_param(param, delta, arc)?;
    let mut out = fr
        .par_iter()
        .map(|t| {
            let point = CmPoint::new(mn_to_form(param, t.m, t.n)?)?;
            Ok(CmRecord { point, t: *t, coord: param.coordinate(t.value()) })
        })
        .collect::<Result<Vec<_>>>()?;
    sort_by_coord(&mut out, |r| r.coord);
    Ok(out)
}

/// CM points of discriminant `|D| ≤ Δ` on the geodesic `G_g`, optionally
/// restricted to an arc.
pub fn enum_cm_on_geodesic(g: &IntForm, delta: u64, arc: Option<Arc>) -> Result<Vec<CmRecord>> {
    enum_cm_on_param(&build_param(g, Mode::CmOnGeodesic)?, delta, arc)
}

/// RM curves of discriminant `≤ Δ` crossing `G_g` at a right angle, with
/// their feet on `G_g`.
pub fn enum_rm_perp_geodesic(g: &IntForm, delta: u64, arc: Option<Arc>) -> Result<Vec<RmPerpRecord>> {
    let param = build_param(g, Mode::RmPerpGeodesic)?;
    let fr = enumerate_param(&param, delta, arc)?;
    let mut out = fr
        .par_iter()
        .map(|t| {
            let curve = RmCurve::new(mn_to_form(&param, t.m, t.n)?)?;
            let foot = hyperbolic::perp_foot(&curve, g)?;
            Ok(RmPerpRecord { curve, t: *t, foot, coord: param.coordinate(t.value()) })
        })
        .collect::<Result<Vec<_>>>()?;
    sort_by_coord(&mut out, |r| r.coord);
    Ok(out)
}

/// RM curves of discriminant `≤ Δ` through the CM point of `p`, with the
/// angle `ang_p` at which each passes.
pub fn enum_rm_through_point(p: &IntForm, delta: u64) -> Result<Vec<RmThroughRecord>> {
    let param = build_param(p, Mode::RmThroughPoint)?;
    let fr = enumerate_param(&param, delta, None)?;
    let mut out = fr
        .par_iter()
        .map(|t| {
            let curve = RmCurve::new(mn_to_form(&param, t.m, t.n)?)?;
            Ok(RmThroughRecord { curve, t: *t, angle: param.coordinate(t.value()) })
        })
        .collect::<Result<Vec<_>>>()?;
    sort_by_coord(&mut out, |r| r.angle);
    Ok(out)
}

/// Which discriminants a ball enumeration collects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiscSelect {
    Exactly(i128),
    UpTo(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallRecord {
    pub point: CmPoint,
    /// `ang_{z0}`; absent for the center itself.
    pub angle: Option<f64>,
}

const BALL_WORK_GUARD: f64 = 1e11;

/// CM points in the closed hyperbolic ball `B(z0, s0)`.
///
/// `a ≤ √|D| / (2 y_min) + 1` and `b` is confined to the ball's `x`-window;
/// `c` then follows from `D` (or ranges over the admissible `D`).
pub fn enum_cm_in_ball(z0: PointH, s0: f64, sel: DiscSelect) -> Result<Vec<BallRecord>> {
    let ball = hyperbolic::ball(z0, s0)?;
    let (dmin, dmax): (i128, i128) = match sel {
        DiscSelect::Exactly(d) => {
            if d >= 0 {
                return Err(Error::WrongDiscriminantSign(format!("CM discriminant must be negative, got {d}")));
            }
            if !matches!(d.rem_euclid(4), 0 | 1) {
                return Err(Error::BadResidue(d));
            }
            (-d, -d)
        }
        DiscSelect::UpTo(delta) => (3, delta as i128),
    };
    if dmax < dmin {
        return Ok(vec![]);
    }
    let (ymin, ymax) = (ball.y_min(), ball.y_max());
    let a_max_f = (dmax as f64).sqrt() / (2.0 * ymin) + 1.0;
    let xl = ball.center.x - ball.radius_euclid;
    let xr = ball.center.x + ball.radius_euclid;
    let work = a_max_f * a_max_f * 2.0 * ball.radius_euclid.max(1e-300);
    if !(work <= BALL_WORK_GUARD) || !a_max_f.is_finite() {
        return Err(Error::GuardExceeded(format!("ball enumeration needs about {work:e} steps")));
    }
    let a_max = a_max_f as i128;
    let tol = 1e-12 * (1.0 + s0);
    let per_a = |a: i128| -> Result<Vec<BallRecord>> {
        let af = a as f64;
        let b_lo = (-2.0 * af * xr).floor() as i128 - 1;
        let b_hi = (-2.0 * af * xl).ceil() as i128 + 1;
        // |D| = 4a²y² must lie in the ball's height band
        let band_lo = ((4.0 * af * af * ymin * ymin).floor() as i128 - 1).max(dmin);
        let band_hi = ((4.0 * af * af * ymax * ymax).ceil() as i128 + 1).min(dmax);
        let mut out = Vec::new();
        if band_lo > band_hi {
            return Ok(out);
        }
        for b in b_lo..=b_hi {
            let b2 = b * b;
            // 4ac = b² + |D|
            let c_lo = (b2 + band_lo + 4 * a - 1).div_euclid(4 * a);
            let c_hi = (b2 + band_hi).div_euclid(4 * a);
            for c in c_lo..=c_hi {
                let nd = 4 * a * c - b2;
                if nd < dmin || nd > dmax || gcd_i128(gcd_i128(a, b), c) != 1 {
                    continue;
                }
                let point = CmPoint::new(IntForm::new(a, b, c)?)?;
                if hyperbolic::dist(point.z, z0) > s0 + tol {
                    continue;
                }
                let angle = if point.z == z0 { None } else { Some(hyperbolic::ang_p(z0, point.z)?) };
                out.push(BallRecord { point, angle });
            }
        }
        Ok(out)
    };
    let chunks = (1..=a_max).into_par_iter().map(per_a).collect::<Result<Vec<_>>>()?;
    let mut out: Vec<BallRecord> = chunks.into_iter().flatten().collect();
    out.sort_by_key(|r| (-r.point.disc, r.point.form));
    Ok(out)
}

/// CM points on the horocycle `Im z = k` with `|D| ≤ Δ` and
/// `Re z ∈ [x_lo, x_hi]`, sorted by real part. Here `|D| = 4a²k²`.
pub fn enum_cm_at_height(k: u64, delta: u64, x_lo: f64, x_hi: f64) -> Result<Vec<CmPoint>> {
    if k == 0 {
        return Err(Error::InvalidArgument("height must be positive".into()));
    }
    if !(x_lo <= x_hi) || !x_lo.is_finite() || !x_hi.is_finite() {
        return Err(Error::InvalidInterval(format!("[{x_lo}, {x_hi}]")));
    }
    let k = k as i128;
    let a_max = (isqrt(delta as u128) as i128) / (2 * k) + 1;
    let mut out = Vec::new();
    for a in 1..=a_max {
        let nd = 4 * a * a * k * k;
        if nd > delta as i128 {
            break;
        }
        let af = a as f64;
        for b in ((-2.0 * af * x_hi).floor() as i128 - 1)..=((-2.0 * af * x_lo).ceil() as i128 + 1) {
            let num = b * b + nd;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if gcd_i128(gcd_i128(a, b), c) != 1 {
                continue;
            }
            let x = -(b as f64) / (2.0 * af);
            if x < x_lo || x > x_hi {
                continue;
            }
            out.push(CmPoint::new(IntForm::new(a, b, c)?)?);
        }
    }
    out.sort_by(|p, q| p.z.x.total_cmp(&q.z.x));
    Ok(out)
}

/// The density the coordinate should carry: `(2/√D)/sin θ`, `(2/B)/y` or
/// the constant `2/√−D`.
fn target_density(param: &GeodesicParam, x: f64) -> f64 {
    let (_, b, _, sd) = param.derived_f64();
    match param.coord_kind() {
        CoordKind::Theta => 2.0 / sd / x.sin(),
        CoordKind::Y => 2.0 / b / x,
        CoordKind::Angle => 2.0 / sd,
    }
}

/// A grid of 1000 coordinates strictly inside the coordinate range; the even
/// count keeps `θ = π/2`, where an RM foot sits at `t = ∞`, off the grid.
pub fn default_grid(param: &GeodesicParam) -> Vec<f64> {
    let (lo, hi) = match param.coord_kind() {
        CoordKind::Theta | CoordKind::Angle => (0.1, PI - 0.1),
        CoordKind::Y => (0.1, 10.0),
    };
    (0..1000).map(|i| lo + (hi - lo) * i as f64 / 999.0).collect()
}

/// Max relative deviation, over the grid, of `(1/F(t))·|dt/dx|` from the
/// target density, with `dx/dt` taken by finite differences of the
/// coordinate map.
pub fn pushforward_check(param: &GeodesicParam, grid: &[f64]) -> Result<f64> {
    let f = param.target_real();
    let mut worst: f64 = 0.0;
    for &x in grid {
        let t = param.t_of_coordinate(x);
        let ft = f.value(t);
        if !t.is_finite() || !(ft > 0.0) {
            return Err(Error::GridTouchesSingularity(t));
        }
        // five-point stencil; the step is small against both the distance to
        // a root (about 1e-4 in the coordinate) and |t|
        let h = (0.5 * (param.t_of_coordinate(x + 1e-4) - param.t_of_coordinate(x - 1e-4)).abs())
            .min(1e-3 * (1.0 + t.abs()));
        if !h.is_finite() || h == 0.0 {
            return Err(Error::GridTouchesSingularity(t));
        }
        let c = |k: f64| param.coordinate(t + k * h);
        let dxdt = (8.0 * (c(1.0) - c(-1.0)) - (c(2.0) - c(-2.0))) / (12.0 * h);
        if !(dxdt != 0.0) || !dxdt.is_finite() {
            return Err(Error::GridTouchesSingularity(t));
        }
        let got = 1.0 / ft / dxdt.abs();
        let want = target_density(param, x);
        worst = worst.max((got / want - 1.0).abs());
    }
    Ok(worst)
}

/// Hyperbolic position along the geodesic: `log tan(θ/2)`, `log y`, or the
/// angle itself.
pub fn arclength_coordinate(kind: CoordKind, x: f64) -> f64 {
    match kind {
        CoordKind::Theta => (0.5 * x).tan().ln(),
        CoordKind::Y => x.ln(),
        CoordKind::Angle => x,
    }
}

/// Counts in `k` buckets of equal hyperbolic length (equal angle for
/// [`CoordKind::Angle`]) over `[lo, hi]`.
pub fn equal_mass_histogram(kind: CoordKind, coords: &[f64], lo: f64, hi: f64, k: usize) -> Result<Vec<u64>> {
    let (ul, uh) = (arclength_coordinate(kind, lo), arclength_coordinate(kind, hi));
    if k < 1 || !(ul < uh) || !ul.is_finite() || !uh.is_finite() {
        return Err(Error::InvalidInterval(format!("histogram range [{lo}, {hi}] with {k} buckets")));
    }
    let mut counts = vec![0u64; k];
    for &x in coords {
        if x < lo || x > hi {
            continue;
        }
        let u = arclength_coordinate(kind, x);
        let i = (((u - ul) / (uh - ul)) * k as f64).floor().clamp(0.0, (k - 1) as f64) as usize;
        counts[i] += 1;
    }
    Ok(counts)
}

/// `max/min − 1` over bucket counts.
pub fn max_ratio_deviation(counts: &[u64]) -> f64 {
    let max = counts.iter().copied().max().unwrap_or(0) as f64;
    let min = counts.iter().copied().min().unwrap_or(0) as f64;
    if min == 0.0 {
        return f64::INFINITY;
    }
    max / min - 1.0
}

/// `max |count/mean − 1|`.
pub fn max_mean_deviation(counts: &[u64]) -> f64 {
    let mean = counts.iter().sum::<u64>() as f64 / counts.len().max(1) as f64;
    if mean == 0.0 {
        return f64::INFINITY;
    }
    counts.iter().map(|&c| (c as f64 / mean - 1.0).abs()).fold(0.0, f64::max)
}

/// Pearson's statistic against the uniform expectation.
pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let n: u64 = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let e = n as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum()
}
