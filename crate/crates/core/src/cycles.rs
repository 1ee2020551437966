//! Closed geodesics on the modular surface: the stabilizer generator of an
//! indefinite form, the fundamental arc, CM counts along it, and cycle
//! values of modular functions by CM averaging.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forms::{gcd_i128, IntForm};
use crate::geodesic_enum::{self, Arc, CmRecord, Mode};
use crate::hyperbolic::PointH;
use crate::numtheory::{is_square, pell_fundamental, sl2z_reduce, PellSolution};
use crate::quad::integrate;

pub type BigMat2 = [[BigInt; 2]; 2];

/// The image of `G_(A,B,C)` in `SL₂(ℤ)\H`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedGeodesic {
    pub form: IntForm,
    pub disc: i128,
    pub pell: PellSolution,
    /// `[[(t0 − Bu0)/2, −Cu0], [Au0, (t0 + Bu0)/2]]`.
    pub gamma: BigMat2,
    /// `2 log ε_D`.
    pub length: f64,
}

/// Builds the closed geodesic of a form with non-square `D > 0`.
pub fn closed_geodesic(f: &IntForm) -> Result<ClosedGeodesic> {
    let disc = f.discriminant()?;
    if disc <= 0 {
        return Err(Error::NotPositiveDiscriminant(disc));
    }
    if is_square(disc) {
        return Err(Error::SquareDiscriminant(disc));
    }
    let pell = pell_fundamental(disc)?;
    let t0 = BigInt::from(pell.t0.clone());
    let u0 = BigInt::from(pell.u0.clone());
    let (a, b, c) = f.coefficients();
    let (a, b, c) = (BigInt::from(a), BigInt::from(b), BigInt::from(c));
    let half = |x: BigInt| -> BigInt {
        debug_assert!((&x % 2u32).is_zero());
        x / 2
    };
    let gamma = [
        [half(&t0 - &b * &u0), -(&c * &u0)],
        [&a * &u0, half(&t0 + &b * &u0)],
    ];
    let length = 2.0 * pell.log_epsilon();
    Ok(ClosedGeodesic { form: *f, disc, pell, gamma, length })
}

/// Like [`closed_geodesic`] for a raw triple, rejecting imprimitive input
/// instead of normalizing it.
pub fn closed_geodesic_of(a: i128, b: i128, c: i128) -> Result<ClosedGeodesic> {
    if gcd_i128(gcd_i128(a, b), c) != 1 {
        return Err(Error::ImprimitiveForm(a, b, c));
    }
    closed_geodesic(&IntForm::new(a, b, c)?)
}

fn big_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

impl ClosedGeodesic {
    /// Center and radius of the semicircle (`A > 0` for a normalized form
    /// with non-square `D`).
    pub fn circle(&self) -> (f64, f64) {
        let (a, b, _) = self.form.as_f64();
        (-b / (2.0 * a), (self.disc as f64).sqrt() / (2.0 * a))
    }

    pub fn gamma_f64(&self) -> [[f64; 2]; 2] {
        let g = &self.gamma;
        [[big_f64(&g[0][0]), big_f64(&g[0][1])], [big_f64(&g[1][0]), big_f64(&g[1][1])]]
    }

    pub fn gamma_i64(&self) -> Option<[[i64; 2]; 2]> {
        let g = &self.gamma;
        Some([[g[0][0].to_i64()?, g[0][1].to_i64()?], [g[1][0].to_i64()?, g[1][1].to_i64()?]])
    }

    pub fn determinant(&self) -> BigInt {
        let g = &self.gamma;
        &g[0][0] * &g[1][1] - &g[0][1] * &g[1][0]
    }

    /// The form `f∘γ`, which equals `f` exactly.
    pub fn transformed_form(&self) -> (BigInt, BigInt, BigInt) {
        let (a, b, c) = self.form.coefficients();
        act_on_form(&(a.into(), b.into(), c.into()), &self.gamma)
    }

    /// The top point `q + ri`, the default seam.
    pub fn top_point(&self) -> PointH {
        let (q, r) = self.circle();
        PointH { x: q, y: r }
    }

    /// `γ·z` evaluated in floating point.
    pub fn apply(&self, z: PointH) -> PointH {
        z.mobius(self.gamma_f64())
    }

    pub fn default_arc(&self) -> FundamentalArc {
        fundamental_arc(self, self.top_point()).expect("top point lies on the geodesic")
    }
}

/// `(a,b,c) ↦` coefficients of `Q(px + qy, rx + sy)` for `m = [[p,q],[r,s]]`.
fn act_on_form(f: &(BigInt, BigInt, BigInt), m: &BigMat2) -> (BigInt, BigInt, BigInt) {
    let (a, b, c) = f;
    let [[p, q], [r, s]] = m;
    (
        a * p * p + b * p * r + c * r * r,
        a * p * q * 2 + b * (p * s + q * r) + c * r * s * 2,
        a * q * q + b * q * s + c * s * s,
    )
}

/// A stretch of the geodesic between a seam point and its `γ`-image,
/// recorded by argument about the center and by `u = log tan(θ/2)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FundamentalArc {
    pub theta_start: f64,
    pub theta_end: f64,
    pub u_start: f64,
    pub u_end: f64,
}

impl FundamentalArc {
    pub fn lo(&self) -> f64 {
        self.theta_start.min(self.theta_end)
    }

    pub fn hi(&self) -> f64 {
        self.theta_start.max(self.theta_end)
    }

    /// `|∫ dθ / sin θ|` over the arc.
    pub fn hyperbolic_length(&self) -> f64 {
        (self.u_end - self.u_start).abs()
    }
}

/// The arc from `z_start` to `γ·z_start`.
///
/// `γ` attracts towards the right endpoint `(−B + √D)/2A` (its multiplier
/// there is `ε_D⁻²`), so the image sits `length` further along in the
/// direction of decreasing `θ`. The endpoint is placed by `u`, which stays
/// exact even when `γ` has entries far beyond `f64` precision.
pub fn fundamental_arc(cg: &ClosedGeodesic, z_start: PointH) -> Result<FundamentalArc> {
    let (q, r) = cg.circle();
    let resid = ((z_start.x - q).hypot(z_start.y) - r) / r.max(1.0);
    if !(resid.abs() <= 1e-9) {
        return Err(Error::PointNotOnGeodesic(resid));
    }
    let theta_start = z_start.y.atan2(z_start.x - q);
    let u_start = (0.5 * theta_start).tan().ln();
    let u_end = u_start - cg.length;
    let theta_end = 2.0 * u_end.exp().atan();
    Ok(FundamentalArc { theta_start, theta_end, u_start, u_end })
}

/// Point of the geodesic at `u = log tan(θ/2)`.
fn point_at_u(q: f64, r: f64, u: f64) -> PointH {
    // sin θ = sech u, cos θ = −tanh u
    PointH { x: q - r * u.tanh(), y: r / u.cosh() }
}

/// Empirical and predicted CM counts on one period of the closed geodesic.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ClosedCount {
    pub empirical: u64,
    /// `3 gcd(D,2) · length / (2π²√D) · Δ`.
    pub predicted: f64,
    /// Records whose CM point is `SL₂(ℤ)`-equivalent to an earlier record.
    pub coincidences: u64,
}

/// `3 gcd(D,2) · length / (2π²√D)`, the count per unit of `Δ`.
pub fn closed_density(cg: &ClosedGeodesic) -> f64 {
    let g = if cg.disc % 2 == 0 { 2.0 } else { 1.0 };
    3.0 * g * cg.length / (2.0 * PI * PI * (cg.disc as f64).sqrt())
}

/// CM points with `|D| ≤ Δ` on the default fundamental arc, half-open at the
/// `γ`-image of the seam.
pub fn cm_on_closed(cg: &ClosedGeodesic, delta: u64) -> Result<Vec<CmRecord>> {
    cm_on_periods(cg, delta, 1)
}

/// Same over `k` consecutive periods starting at the top point.
///
/// The arc is widened slightly for the enumeration and then cut exactly in
/// `t`: the seam sits at the rational `t = −B/2A` of the derived form, and
/// its `γᵏ`-image is again rational because `γ` acts linearly on the
/// `(m, n)` lattice.
pub fn cm_on_periods(cg: &ClosedGeodesic, delta: u64, k: u32) -> Result<Vec<CmRecord>> {
    if delta == 0 || k == 0 {
        return Ok(vec![]);
    }
    let param = geodesic_enum::build_param(&cg.form, Mode::CmOnGeodesic)?;
    let mut recs = geodesic_enum::enum_cm_on_param(&param, delta, Some(period_window(cg, k)))?;
    let (start, end) = seam_fractions(cg, &param, k)?;
    // (m, n) ↦ sign of m/n − t for t = (tm, tn), tn > 0
    let side = |m: i64, n: i64, t: &(BigInt, BigInt)| (BigInt::from(m) * &t.1).cmp(&(BigInt::from(n) * &t.0));
    let ascending = (&start.0 * &end.1) < (&end.0 * &start.1);
    recs.retain(|r| {
        let (ms, me) = (side(r.t.m, r.t.n, &start), side(r.t.m, r.t.n, &end));
        use std::cmp::Ordering::*;
        if ascending {
            ms != Less && me == Less
        } else {
            ms != Greater && me == Greater
        }
    });
    Ok(recs)
}

/// `θ`-window over `k` periods from the top point, padded so the exact cut
/// decides the ends.
fn period_window(cg: &ClosedGeodesic, k: u32) -> Arc {
    let arc = cg.default_arc();
    let theta_far = 2.0 * (arc.u_start - k as f64 * cg.length).exp().atan();
    let (lo, hi) = (theta_far.min(arc.theta_start), theta_far.max(arc.theta_start));
    let pad = 1e-9;
    Arc::Theta { lo: (lo - pad).max(0.0), hi: (hi + pad).min(PI) }
}

/// Work estimate for [`cm_on_periods`]: the largest `n` it would scan.
pub fn periods_n_bound(cg: &ClosedGeodesic, delta: u64, k: u32) -> Result<u64> {
    if delta == 0 || k == 0 {
        return Ok(0);
    }
    let param = geodesic_enum::build_param(&cg.form, Mode::CmOnGeodesic)?;
    geodesic_enum::n_bound_for(&param, delta, Some(period_window(cg, k)))
}

/// `t` of the top point and of its `γᵏ`-image, as fractions with positive
/// denominators.
fn seam_fractions(
    cg: &ClosedGeodesic,
    param: &geodesic_enum::GeodesicParam,
    k: u32,
) -> Result<((BigInt, BigInt), (BigInt, BigInt))> {
    let geodesic_enum::Lattice::Semicircle { p, r, s, b0, .. } = param.lattice() else {
        return Err(Error::InvalidArgument("closed geodesics are semicircles".into()));
    };
    let (da, db, _) = param.derived();
    let g = gcd_i128(db, 2 * da);
    let (m0, n0) = (-db / g, 2 * da / g);
    let (a, b, c) = param.triple(m0, n0)?;
    // forms move by Q ↦ Q∘γ⁻¹
    let gm = &cg.gamma;
    let inv: BigMat2 = [[gm[1][1].clone(), -gm[0][1].clone()], [-gm[1][0].clone(), gm[0][0].clone()]];
    let mut form: (BigInt, BigInt, BigInt) = (a.into(), b.into(), c.into());
    for _ in 0..k {
        form = act_on_form(&form, &inv);
    }
    let n2 = &form.0 / BigInt::from(s);
    let m2 = (&form.1 - &n2 * BigInt::from(p) * BigInt::from(b0)) * BigInt::from(s) / BigInt::from(r);
    Ok(((m0.into(), n0.into()), (m2, n2)))
}

/// Prop-style count on one period, with exact `SL₂(ℤ)` coincidence
/// detection by reduced forms.
pub fn cm_count_closed(cg: &ClosedGeodesic, delta: u64) -> Result<ClosedCount> {
    let recs = cm_on_closed(cg, delta)?;
    let mut reduced: Vec<(i128, i128, i128)> =
        recs.iter().map(|r| reduce_definite(r.point.form.coefficients())).collect();
    reduced.sort_unstable();
    let coincidences = reduced.windows(2).filter(|w| w[0] == w[1]).count() as u64;
    Ok(ClosedCount {
        empirical: recs.len() as u64,
        predicted: closed_density(cg) * delta as f64,
        coincidences,
    })
}

/// Gauss reduction of a positive definite form: `|b| ≤ a ≤ c`, `b ≥ 0` when
/// `|b| = a` or `a = c`.
pub fn reduce_definite((mut a, mut b, mut c): (i128, i128, i128)) -> (i128, i128, i128) {
    loop {
        if b.abs() > a {
            // b ↦ b − 2ak into (−a, a]
            let k = (b + a - 1).div_euclid(2 * a);
            let nb = b - 2 * a * k;
            c += a * k * k - b * k;
            b = nb;
        }
        if a > c {
            (a, b, c) = (c, -b, a);
            continue;
        }
        if b.abs() > a {
            continue;
        }
        break;
    }
    if b < 0 && (a == c || -b == a) {
        b = -b;
    }
    (a, b, c)
}

/// A function on `H` invariant under `SL₂(ℤ)`, callable from many threads.
pub trait ModularFunction: Sync {
    fn name(&self) -> &str;
    fn eval(&self, z: PointH) -> Complex64;
}

/// The constant function 1.
#[derive(Debug, Clone, Copy, Default)]
pub struct One;

impl ModularFunction for One {
    fn name(&self) -> &str {
        "one"
    }

    fn eval(&self, _z: PointH) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
}

/// Klein's `j`.
#[derive(Debug, Clone, Copy, Default)]
pub struct JInvariant;

impl ModularFunction for JInvariant {
    fn name(&self) -> &str {
        "j"
    }

    fn eval(&self, z: PointH) -> Complex64 {
        j_invariant(z)
    }
}

fn sigma(k: u32, n: u64) -> f64 {
    let mut s = 0.0;
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += (d as f64).powi(k as i32);
            let e = n / d;
            if e != d {
                s += (e as f64).powi(k as i32);
            }
        }
        d += 1;
    }
    s
}

/// `j(z) = E4(z)³ / Δ(z)` with `Δ = q∏(1 − qⁿ)²⁴`, evaluated after
/// reduction to the fundamental domain so that `|q| ≤ e^{−π√3}`.
pub fn j_invariant(z: PointH) -> Complex64 {
    let Ok((w, _)) = sl2z_reduce(z) else {
        return Complex64::new(f64::NAN, f64::NAN);
    };
    let q = Complex64::from_polar((-2.0 * PI * w.y).exp(), 2.0 * PI * w.x);
    let qa = q.norm();
    let mut e4 = Complex64::new(1.0, 0.0);
    let mut prod = Complex64::new(1.0, 0.0);
    let mut qn = Complex64::new(1.0, 0.0);
    let mut n = 1u64;
    loop {
        qn *= q;
        e4 += 240.0 * sigma(3, n) * qn;
        prod *= (Complex64::new(1.0, 0.0) - qn).powu(24);
        if qa.powi(n as i32) * (n as f64).powi(4) < 1e-18 || n > 200 {
            break;
        }
        n += 1;
    }
    e4 * e4 * e4 / (q * prod)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CycleEstimate {
    pub delta: u64,
    pub count: u64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CycleValue {
    pub function: String,
    pub length: f64,
    pub estimates: Vec<CycleEstimate>,
    /// `∫ f ds` over the fundamental arc by quadrature in `u`.
    pub classical_re: f64,
    pub classical_im: f64,
}

/// `∫_Ḡ f ds`, integrating `f(q + r e^{iθ(u)})` in `u = log tan(θ/2)`.
pub fn cycle_integral(f: &dyn ModularFunction, cg: &ClosedGeodesic) -> Complex64 {
    let (q, r) = cg.circle();
    let arc = cg.default_arc();
    let (u0, u1) = (arc.u_end.min(arc.u_start), arc.u_end.max(arc.u_start));
    let g = |u: f64| f.eval(point_at_u(q, r, u));
    let re = integrate(|u| g(u).re, u0, u1, 1e-12, 1e-11);
    let im = integrate(|u| g(u).im, u0, u1, 1e-12, 1e-11);
    Complex64::new(re, im)
}

/// Scaled CM averages `2π²√D / (3 gcd(D,2) Δ) · Σ f(p)` along a ladder of
/// `Δ`, with the quadrature value of the cycle integral.
pub fn cycle_value(f: &dyn ModularFunction, w: &IntForm, ladder: &[u64]) -> Result<CycleValue> {
    let cg = closed_geodesic(w)?;
    let scale = cg.length / closed_density(&cg);
    let mut estimates = Vec::with_capacity(ladder.len());
    for &delta in ladder {
        if delta == 0 {
            estimates.push(CycleEstimate { delta, count: 0, re: 0.0, im: 0.0 });
            continue;
        }
        let recs = cm_on_closed(&cg, delta)?;
        let vals: Vec<Complex64> = recs.par_iter().map(|r| f.eval(r.point.z)).collect();
        // fixed-order sum
        let sum: Complex64 = vals.iter().sum();
        let est = sum * scale / delta as f64;
        estimates.push(CycleEstimate { delta, count: recs.len() as u64, re: est.re, im: est.im });
    }
    let classical = cycle_integral(f, &cg);
    Ok(CycleValue {
        function: f.name().to_string(),
        length: cg.length,
        estimates,
        classical_re: classical.re,
        classical_im: classical.im,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::cm_on_geodesic;
    use crate::hyperbolic;

    fn f(a: i128, b: i128, c: i128) -> IntForm {
        IntForm::new(a, b, c).unwrap()
    }

    fn mat(cg: &ClosedGeodesic) -> [[i64; 2]; 2] {
        cg.gamma_i64().unwrap()
    }

    // [DERIVED] matrix formula with (t0, u0) = (3, 1) and (6, 2)
    #[test]
    fn gamma_examples() {
        let cg = closed_geodesic(&f(1, 1, -1)).unwrap();
        assert_eq!(mat(&cg), [[1, 1], [1, 2]]);
        assert!((cg.length - 1.924847).abs() < 1e-6);
        assert!((cg.length - 2.0 * ((3.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-14);
        let cg = closed_geodesic(&f(1, 0, -2)).unwrap();
        assert_eq!(mat(&cg), [[3, 4], [2, 3]]);
        assert!((cg.length - 3.525494).abs() < 1e-6);
    }

    #[test]
    fn determinant_and_fixing() {
        for (a, b, c) in [(1, 1, -1), (1, 0, -2), (2, 3, -4), (7, 1, -3), (1, 0, -409), (5, 11, -13)] {
            let cg = closed_geodesic(&f(a, b, c)).unwrap();
            assert_eq!(cg.determinant(), BigInt::from(1));
            let (x, y, z) = cg.transformed_form();
            assert_eq!((x, y, z), (a.into(), b.into(), c.into()));
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(closed_geodesic(&f(1, 0, -1)), Err(Error::SquareDiscriminant(4))));
        assert!(matches!(closed_geodesic_of(2, 2, -2), Err(Error::ImprimitiveForm(2, 2, -2))));
        assert!(matches!(closed_geodesic(&f(1, 0, 1)), Err(Error::NotPositiveDiscriminant(-4))));
    }

    // [DERIVED] numeric integration of dθ/sin θ over the returned interval
    #[test]
    fn arc_length_and_image() {
        let cg = closed_geodesic(&f(1, 1, -1)).unwrap();
        let arc = cg.default_arc();
        let len = integrate(|t| 1.0 / t.sin(), arc.lo(), arc.hi(), 1e-14, 1e-13);
        assert!((len - cg.length).abs() < 1e-9);
        assert!((arc.hyperbolic_length() - 1.924847).abs() < 1e-6);
        let (q, _) = cg.circle();
        let img = cg.apply(cg.top_point());
        assert!((hyperbolic::arg_about(q, img) - arc.theta_end).abs() < 1e-12);
        // twice the arc from the image
        let arc2 = fundamental_arc(&cg, img).unwrap();
        assert!(((arc2.u_end - arc.u_start).abs() - 2.0 * cg.length).abs() < 1e-12);
        let img2 = cg.apply(img);
        assert!((hyperbolic::arg_about(q, img2) - arc2.theta_end).abs() < 1e-12);
        // endpoints agree in the quotient
        let (w1, _) = sl2z_reduce(cg.top_point()).unwrap();
        let (w2, _) = sl2z_reduce(img).unwrap();
        assert!(hyperbolic::dist(w1, w2) < 1e-9 || (w1.x.abs() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn off_geodesic_start_rejected() {
        let cg = closed_geodesic(&f(1, 1, -1)).unwrap();
        assert!(matches!(fundamental_arc(&cg, PointH { x: 0.0, y: 5.0 }), Err(Error::PointNotOnGeodesic(_))));
    }

    #[test]
    fn gamma_preserves_geodesic() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for g in [f(1, 1, -1), f(1, 0, -2), f(3, 1, -1), f(1, 0, -3)] {
            let cg = closed_geodesic(&g).unwrap();
            let (q, r) = cg.circle();
            let geo = crate::forms::geodesic_of_form(&g).unwrap();
            for _ in 0..100 {
                let th: f64 = rng.random_range(0.05..3.09);
                let z = PointH { x: q + r * th.cos(), y: r * th.sin() };
                let w = cg.apply(z);
                assert!(geo.residual(w).abs() < 1e-9 * r.max(1.0), "{g}");
            }
        }
    }

    // [TRIVIAL]
    #[test]
    fn empty_count() {
        let cg = closed_geodesic(&f(1, 1, -1)).unwrap();
        let c = cm_count_closed(&cg, 0).unwrap();
        assert_eq!((c.empirical, c.predicted), (0, 0.0));
    }

    #[test]
    fn seam_is_counted_once() {
        // the top point of (1,1,−1) is the CM point of (2,2,3)
        let cg = closed_geodesic(&f(1, 1, -1)).unwrap();
        let one = cm_on_closed(&cg, 5000).unwrap();
        assert!(one.iter().any(|r| r.point.form == f(2, 2, 3)));
        let img = cg.apply(cg.top_point());
        assert!(!one.iter().any(|r| hyperbolic::dist(r.point.z, img) < 1e-9));
        for rec in &one {
            assert!(cm_on_geodesic(&rec.point.form, &cg.form).unwrap());
        }
        for g in [f(1, 1, -1), f(1, 0, -2), f(1, 0, -3)] {
            let cg = closed_geodesic(&g).unwrap();
            let one = cm_on_periods(&cg, 4000, 1).unwrap();
            let two = cm_on_periods(&cg, 4000, 2).unwrap();
            assert_eq!(two.len(), 2 * one.len(), "{g}");
        }
    }

    #[test]
    fn reduction_of_definite_forms() {
        assert_eq!(reduce_definite((1, 0, 1)), (1, 0, 1));
        assert_eq!(reduce_definite((2, -3, 2)), (1, 1, 2));
        assert_eq!(reduce_definite((5, 8, 4)), (1, 0, 4));
        assert_eq!(reduce_definite((1, -1, 1)), (1, 1, 1));
        assert_eq!(reduce_definite((2, -2, 3)), (2, 2, 3));
        // equivalent forms reduce alike
        let (a, b, c) = (3i128, 5i128, 7i128);
        for (p, q, r, s) in [(1i128, 1, 0, 1), (0, -1, 1, 0), (2, 1, 1, 1), (3, 5, 1, 2)] {
            let t = (a * p * p + b * p * r + c * r * r, 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s, a * q * q + b * q * s + c * s * s);
            assert_eq!(reduce_definite(t), reduce_definite((a, b, c)));
        }
    }

    // [TRIVIAL] / [DERIVED] classical CM values
    #[test]
    fn j_values() {
        let j = j_invariant(PointH { x: 0.0, y: 1.0 });
        assert!((j.re - 1728.0).abs() < 1e-9 && j.im.abs() < 1e-9);
        let j = j_invariant(PointH { x: 0.5, y: 3f64.sqrt() / 2.0 });
        assert!(j.norm() < 1e-9, "{j}");
        let j = j_invariant(PointH { x: 0.0, y: 2.0 });
        assert!((j.re / 287496.0 - 1.0).abs() < 1e-12 && j.im.abs() < 1e-6);
        // j((1 + i√7)/2) = −3375
        let j = j_invariant(PointH { x: 0.5, y: 7f64.sqrt() / 2.0 });
        assert!((j.re + 3375.0).abs() < 1e-8, "{j}");
    }

    #[test]
    fn j_is_modular() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let z = PointH { x: rng.random_range(-2.0..2.0), y: rng.random_range(0.1..10.0) };
            let j0 = j_invariant(z);
            for w in [z.mobius_int([[1, 1], [0, 1]]), z.mobius_int([[0, -1], [1, 0]])] {
                let j1 = j_invariant(w);
                worst = worst.max((j1 - j0).norm() / j0.norm().max(1.0));
            }
        }
        assert!(worst < 1e-7, "{worst}");
    }

    // [TRIVIAL] f ≡ 1 integrates to the length
    #[test]
    fn constant_cycle_integral() {
        let cg = closed_geodesic(&f(1, 1, -1)).unwrap();
        let v = cycle_integral(&One, &cg);
        assert!((v.re - cg.length).abs() < 1e-10 && v.im == 0.0);
    }

    #[test]
    fn counts_track_prediction() {
        for g in [f(1, 1, -1), f(1, 0, -2)] {
            let cg = closed_geodesic(&g).unwrap();
            let c = cm_count_closed(&cg, 100_000).unwrap();
            let rel = c.empirical as f64 / c.predicted - 1.0;
            assert!(rel.abs() < 0.05, "{g}: {c:?}");
        }
    }
}
