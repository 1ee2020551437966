use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::interval::{Piece, ProjInterval};
use super::measure::validate;
use crate::error::{Error, Result};
use crate::forms::{gcd_i128, RealForm};

/// Work guard for the `n` loop.
pub const MAX_N: u64 = 4_000_000_000;
/// Guard for the brute-force oracle.
pub const BRUTE_FORCE_MAX_DELTA: f64 = 1e6;
const TIE_REL: f64 = 1e-9;
/// Widest m-window scanned for a single n.
const MAX_M_WINDOW: f64 = 1e10;

/// A reduced fraction `m/n`, `n ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fraction {
    pub m: i64,
    pub n: i64,
}

impl Fraction {
    pub fn value(&self) -> f64 {
        self.m as f64 / self.n as f64
    }

    /// Exact comparison of `m/n` values.
    pub fn cmp_value(&self, other: &Fraction) -> Ordering {
        (self.m as i128 * other.n as i128).cmp(&(other.m as i128 * self.n as i128))
    }
}

/// The result of an enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct Enumeration {
    pub fractions: Vec<Fraction>,
    /// Pairs with `|F(m,n) − Δ| < 10⁻⁹Δ` in floating evaluation (always 0 for
    /// integer forms).
    pub ties: usize,
    pub n_max: u64,
}

#[derive(Debug, Clone, Copy)]
enum Evaluator {
    Exact { a: i128, b: i128, c: i128, limit: i128 },
    Float { a: f64, b: f64, c: f64, delta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Out,
    In,
    InTie,
    OutTie,
}

impl Evaluator {
    fn new(f: &RealForm, delta: f64) -> Self {
        match f.integer_coefficients() {
            Some((a, b, c)) => Evaluator::Exact { a, b, c, limit: delta.floor().min(1e30) as i128 },
            None => Evaluator::Float { a: f.a, b: f.b, c: f.c, delta },
        }
    }

    fn check(&self, m: i64, n: i64) -> Result<Verdict> {
        match *self {
            Evaluator::Exact { a, b, c, limit } => {
                let (m, n) = (m as i128, n as i128);
                let ov = || Error::Overflow("F(m,n)");
                let v = a
                    .checked_mul(m * m)
                    .and_then(|x| x.checked_add(b.checked_mul(m * n)?))
                    .and_then(|x| x.checked_add(c.checked_mul(n * n)?))
                    .ok_or_else(ov)?;
                Ok(if v > 0 && v <= limit { Verdict::In } else { Verdict::Out })
            }
            Evaluator::Float { a, b, c, delta } => {
                let (m, n) = (m as f64, n as f64);
                let v = a * m * m + b * m * n + c * n * n;
                let tie = (v - delta).abs() < TIE_REL * delta;
                Ok(match (v > 0.0 && v <= delta, tie) {
                    (true, false) => Verdict::In,
                    (true, true) => Verdict::InTie,
                    (false, true) => Verdict::OutTie,
                    (false, false) => Verdict::Out,
                })
            }
        }
    }
}

/// `{t : F(t) ≤ c}` as up to two closed intervals, slightly enlarged.
fn sublevel(f: &RealForm, c: f64) -> Vec<(f64, f64)> {
    let (a, b, cc) = (f.a, f.b, f.c);
    if a == 0.0 {
        let x = (c - cc) / b;
        let x = x + 1e-12 * (x.abs() + 1.0) * b.signum();
        return if b > 0.0 { vec![(f64::NEG_INFINITY, x)] } else { vec![(x, f64::INFINITY)] };
    }
    // roots of a t² + b t + k in the cancellation-free form
    let k = cc - c;
    let disc = b * b - 4.0 * a * k;
    let tol = 1e-12 * (b * b + (4.0 * a * k).abs());
    let roots = |s: f64| {
        let q = -0.5 * (b + s.copysign(b));
        let r1 = q / a;
        let r2 = if q != 0.0 { k / q } else { r1 };
        (r1.min(r2), r1.max(r2))
    };
    let pad = |x: f64| 1e-12 * x.abs() + f64::MIN_POSITIVE;
    if a > 0.0 {
        if disc < -tol {
            return vec![];
        }
        let (l, h) = roots((disc.max(0.0) + tol).sqrt());
        vec![(l - pad(l), h + pad(h))]
    } else {
        if disc <= tol {
            return vec![(f64::NEG_INFINITY, f64::INFINITY)];
        }
        let (l, h) = roots((disc - tol).sqrt());
        vec![(f64::NEG_INFINITY, l + pad(l)), (h - pad(h), f64::INFINITY)]
    }
}

fn m_ranges(f: &RealForm, delta: f64, pieces: &[Piece], n: u64) -> Result<Vec<(i64, i64)>> {
    let nf = n as f64;
    let c = delta / (nf * nf);
    let mut out: Vec<(i64, i64)> = Vec::new();
    for s in sublevel(f, c) {
        for p in pieces {
            let lo = s.0.max(p.lo);
            let hi = s.1.min(p.hi);
            if lo > hi {
                continue;
            }
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InfiniteEnumeration(format!(
                    "for n = {n} the window [{lo}, {hi}] is unbounded"
                )));
            }
            let (ml, mh) = ((lo * nf).floor() - 1.0, (hi * nf).ceil() + 1.0);
            if ml.abs() > 9e18 || mh.abs() > 9e18 || mh - ml > MAX_M_WINDOW {
                return Err(Error::GuardExceeded(format!("m window too large at n = {n}")));
            }
            out.push((ml as i64, mh as i64));
        }
    }
    out.sort_unstable();
    let mut merged: Vec<(i64, i64)> = Vec::with_capacity(out.len());
    for (l, h) in out {
        match merged.last_mut() {
            Some(last) if l <= last.1 + 1 => last.1 = last.1.max(h),
            _ => merged.push((l, h)),
        }
    }
    Ok(merged)
}

fn piece_index(pieces: &[Piece], t: f64) -> Option<usize> {
    pieces.iter().position(|p| p.contains(t))
}

fn sort_fractions(v: &mut [(usize, Fraction)]) {
    v.sort_unstable_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.cmp_value(&y.1)));
}

/// Enumerates coprime `(m, n)`, `1 ≤ n ≤ n_max`, with `m/n` in one of the
/// closed `pieces` and `0 < F(m,n) ≤ Δ`, sorted piece by piece and by value.
/// Every sublevel window met inside a piece must be bounded.
pub fn enumerate_pieces(f: &RealForm, delta: f64, pieces: &[Piece], n_max: u64) -> Result<Enumeration> {
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::InvalidArgument(format!("Δ must be finite and non-negative, got {delta}")));
    }
    if n_max > MAX_N {
        return Err(Error::GuardExceeded(format!("n bound {n_max} exceeds {MAX_N}")));
    }
    if delta == 0.0 || n_max == 0 {
        return Ok(Enumeration { fractions: vec![], ties: 0, n_max });
    }
    let ev = Evaluator::new(f, delta);
    let per_n = |n: u64| -> Result<(Vec<(usize, Fraction)>, usize)> {
        let mut found = Vec::new();
        let mut ties = 0usize;
        let ni = n as i64;
        for (ml, mh) in m_ranges(f, delta, pieces, n)? {
            for m in ml..=mh {
                if gcd_i128(m as i128, ni as i128) != 1 {
                    continue;
                }
                let t = m as f64 / n as f64;
                let Some(idx) = piece_index(pieces, t) else { continue };
                match ev.check(m, ni)? {
                    Verdict::In => found.push((idx, Fraction { m, n: ni })),
                    Verdict::InTie => {
                        ties += 1;
                        found.push((idx, Fraction { m, n: ni }));
                    }
                    Verdict::OutTie => ties += 1,
                    Verdict::Out => {}
                }
            }
        }
        Ok((found, ties))
    };
    let chunks: Vec<(Vec<(usize, Fraction)>, usize)> = (1..n_max as usize + 1)
        .into_par_iter()
        .with_min_len(64)
        .map(|n| per_n(n as u64))
        .collect::<Result<_>>()?;
    let ties = chunks.iter().map(|c| c.1).sum();
    let mut all: Vec<(usize, Fraction)> = chunks.into_iter().flat_map(|c| c.0).collect();
    sort_fractions(&mut all);
    Ok(Enumeration { fractions: all.into_iter().map(|x| x.1).collect(), ties, n_max })
}

/// `min F` over the pieces, which avoid the roots and on which `F > 0`.
fn min_on_pieces(f: &RealForm, pieces: &[Piece]) -> f64 {
    let mut best = f64::INFINITY;
    for p in pieces {
        for e in [p.lo, p.hi] {
            if e.is_finite() {
                best = best.min(f.value(e));
            }
        }
        if f.a > 0.0 {
            let v = -f.b / (2.0 * f.a);
            if p.contains(v) {
                best = best.min(f.value(v));
            }
        }
    }
    best
}

/// `n ≤ √(Δ / min_I F)`, padded by one.
pub fn n_bound(f: &RealForm, delta: f64, pieces: &[Piece]) -> Result<u64> {
    let fmin = min_on_pieces(f, pieces);
    if !(fmin > 0.0) {
        return Err(Error::IntervalOutsidePositivityRegion);
    }
    let nb = (delta / fmin).sqrt().floor() + 1.0;
    if !(nb <= MAX_N as f64) {
        return Err(Error::GuardExceeded(format!("n bound {nb:e} exceeds {MAX_N}")));
    }
    Ok(nb as u64)
}

/// `W_Δ ∩ I` with the tie count.
pub fn enumerate_w_detailed(f: &RealForm, delta: f64, i: &ProjInterval) -> Result<Enumeration> {
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::InvalidArgument(format!("Δ must be finite and non-negative, got {delta}")));
    }
    let pieces = validate(f, i)?;
    if delta == 0.0 {
        return Ok(Enumeration { fractions: vec![], ties: 0, n_max: 0 });
    }
    let n_max = n_bound(f, delta, &pieces)?;
    enumerate_pieces(f, delta, &pieces, n_max)
}

/// `{m/n ∈ I : n ≥ 1, gcd(m,n) = 1, 0 < F(m,n) ≤ Δ}`, sorted by value
/// (a wrapping interval is listed from `lo` up to `∞`, then from `−∞`).
pub fn enumerate_w(f: &RealForm, delta: f64, i: &ProjInterval) -> Result<Vec<Fraction>> {
    Ok(enumerate_w_detailed(f, delta, i)?.fractions)
}

/// Bound on `|t|` for `t` in a piece with `F(t) ≤ Δ`.
fn t_bound(f: &RealForm, delta: f64, p: &Piece) -> f64 {
    let mut bound = if p.is_bounded() { p.lo.abs().max(p.hi.abs()) } else { f64::INFINITY };
    if f.a > 0.0 {
        let v = -f.b / (2.0 * f.a);
        let fv = f.value(v);
        bound = bound.min(v.abs() + ((delta + fv.abs()) / f.a).sqrt() + 1.0);
    }
    bound
}

/// Same contract as [`enumerate_w`] by a plain double loop over
/// `n ≤ √(Δ/min F)` and every `|m| ≤ n·T + 1`.
pub fn brute_force_w(f: &RealForm, delta: f64, i: &ProjInterval) -> Result<Vec<Fraction>> {
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::InvalidArgument(format!("Δ must be finite and non-negative, got {delta}")));
    }
    if delta > BRUTE_FORCE_MAX_DELTA {
        return Err(Error::GuardExceeded(format!("brute force limited to Δ ≤ {BRUTE_FORCE_MAX_DELTA}")));
    }
    let pieces = validate(f, i)?;
    if delta == 0.0 {
        return Ok(vec![]);
    }
    let n_max = n_bound(f, delta, &pieces)?;
    let t = pieces.iter().map(|p| t_bound(f, delta, p)).fold(0.0, f64::max);
    if !t.is_finite() {
        return Err(Error::InfiniteEnumeration("no finite bound on m".into()));
    }
    let ev = Evaluator::new(f, delta);
    let mut out = Vec::new();
    for n in 1..=n_max as i64 {
        let mm = (n as f64 * t).ceil() as i64 + 1;
        for m in -mm..=mm {
            if gcd_i128(m as i128, n as i128) != 1 {
                continue;
            }
            let Some(idx) = piece_index(&pieces, m as f64 / n as f64) else { continue };
            if matches!(ev.check(m, n)?, Verdict::In | Verdict::InTie) {
                out.push((idx, Fraction { m, n }));
            }
        }
    }
    sort_fractions(&mut out);
    Ok(out.into_iter().map(|x| x.1).collect())
}

/// Estimated number of `(m, n)` pairs the brute-force oracle would visit.
pub fn brute_force_cost(f: &RealForm, delta: f64, i: &ProjInterval) -> Result<f64> {
    let pieces = validate(f, i)?;
    if delta == 0.0 {
        return Ok(0.0);
    }
    let n_max = n_bound(f, delta, &pieces)? as f64;
    let t = pieces.iter().map(|p| t_bound(f, delta, p)).fold(0.0, f64::max);
    Ok(n_max * n_max * (t + 1.0))
}
