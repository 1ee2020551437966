use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::sieve::{mobius_sieve, phi_sieve, MAX_SIEVE};
use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SIX_OVER_PI2: f64 = 6.0 / (PI * PI);
const GAMMA0_FIT_AT: u64 = 1_000_000;

/// An exact partial sum next to its asymptotic main term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumEstimate {
    pub exact: f64,
    pub main_term: f64,
    /// Set when the main term contains an empirically fitted constant.
    pub fitted_constant: Option<f64>,
}

impl SumEstimate {
    pub fn residual(&self) -> f64 {
        self.exact - self.main_term
    }
}

/// `Σ_{n ≤ T} φ(n)` against `3T²/π²`.
pub fn sum_phi(t: u64) -> Result<SumEstimate> {
    let tab = phi_sieve(t)?;
    let exact: u128 = tab.values().iter().map(|&v| v as u128).sum();
    let tf = t as f64;
    Ok(SumEstimate { exact: exact as f64, main_term: 3.0 * tf * tf / (PI * PI), fitted_constant: None })
}

/// `Σ_{n ≤ T} φ(n)/n` against `6T/π²`.
pub fn sum_phi_over_n(t: u64) -> Result<SumEstimate> {
    let tab = phi_sieve(t)?;
    let exact: f64 = tab.values().iter().enumerate().map(|(i, &v)| v as f64 / (i + 1) as f64).sum();
    Ok(SumEstimate { exact, main_term: SIX_OVER_PI2 * t as f64, fitted_constant: None })
}

fn phi_over_n2(t: u64) -> Result<f64> {
    let tab = phi_sieve(t)?;
    Ok(tab
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let n = (i + 1) as f64;
            v as f64 / (n * n)
        })
        .sum())
}

/// `Σ_{n ≤ T} φ(n)/n² − (6/π²) log T`.
pub fn fit_gamma0(t: u64) -> Result<f64> {
    Ok(phi_over_n2(t)? - SIX_OVER_PI2 * (t as f64).ln())
}

/// The constant term of `Σ_{n ≤ T} φ(n)/n²`, fitted once at `T = 10⁶`.
pub fn gamma0() -> f64 {
    static G: OnceLock<f64> = OnceLock::new();
    *G.get_or_init(|| fit_gamma0(GAMMA0_FIT_AT).expect("limit within sieve range"))
}

/// Partial sum of `Σ_d μ(d)(γ − log d)/d²` over `d ≤ N`.
pub fn gamma0_series(terms: usize) -> f64 {
    let mu = mobius_sieve(terms);
    (1..=terms)
        .filter(|&d| mu[d] != 0)
        .map(|d| {
            let df = d as f64;
            mu[d] as f64 * (EULER_GAMMA - df.ln()) / (df * df)
        })
        .sum()
}

/// `Σ_{n ≤ T} φ(n)/n²` against `(6/π²) log T + γ₀` with `γ₀` fitted.
pub fn sum_phi_over_n2(t: u64) -> Result<SumEstimate> {
    let g = gamma0();
    Ok(SumEstimate {
        exact: phi_over_n2(t)?,
        main_term: SIX_OVER_PI2 * (t as f64).ln() + g,
        fitted_constant: Some(g),
    })
}

/// Largest `n ≥ 0` with `n² ≤ x`.
fn floor_sqrt_f(x: f64) -> u64 {
    if x <= 0.0 {
        return 0;
    }
    let mut n = x.sqrt().floor() as u64;
    while n > 0 && (n as f64) * (n as f64) > x {
        n -= 1;
    }
    while ((n + 1) as f64) * ((n + 1) as f64) <= x {
        n += 1;
    }
    n
}

/// `Σ φ(n) √(D + 4AΔ/n²)` over `√(s1Δ) < n ≤ √(s2Δ)` together with the
/// log (`D > 0`) or arctan (`A > 0`, `D < 0`) main term.
pub fn weighted_sqrt_sum(a: f64, d: f64, s1: f64, s2: f64, delta: f64) -> Result<SumEstimate> {
    if ![a, d, s1, s2, delta].iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("weighted_sqrt_sum arguments"));
    }
    if a == 0.0 {
        return Err(Error::DomainError("A must be nonzero".into()));
    }
    if d == 0.0 {
        return Err(Error::DomainError("D must be nonzero".into()));
    }
    if !(s1 <= s2) || delta < 0.0 {
        return Err(Error::DomainError(format!("need s1 <= s2 and Δ >= 0, got s1={s1}, s2={s2}, Δ={delta}")));
    }
    let bracket: Box<dyn Fn(f64) -> f64> = if d > 0.0 {
        let lo = (-4.0 * a / d).max(0.0);
        if s1 < lo {
            return Err(Error::DomainError(format!("log branch needs s1 >= {lo}, got {s1}")));
        }
        Box::new(move |u: f64| {
            let rad = (d * u * u + 4.0 * a * u).max(0.0);
            rad.sqrt() + 4.0 * a / d.sqrt() * ((d * u).sqrt() + (d * u + 4.0 * a).max(0.0).sqrt()).ln()
        })
    } else {
        let hi = 4.0 * a / -d;
        if a < 0.0 || s1 < 0.0 || s2 > hi {
            return Err(Error::DomainError(format!(
                "arctan branch needs A > 0 and 0 <= s1 <= s2 <= {hi}"
            )));
        }
        Box::new(move |u: f64| {
            let rad = (d * u * u + 4.0 * a * u).max(0.0);
            let num = (d * u + 4.0 * a).max(0.0).sqrt();
            let den = (-d * u).sqrt();
            let at = if den == 0.0 { PI / 2.0 } else { (num / den).atan() };
            rad.sqrt() - 4.0 * a / (-d).sqrt() * at
        })
    };
    if s1 == s2 || delta == 0.0 {
        return Ok(SumEstimate { exact: 0.0, main_term: 0.0, fitted_constant: None });
    }
    let n_lo = floor_sqrt_f(s1 * delta);
    let n_hi = floor_sqrt_f(s2 * delta);
    if n_hi > MAX_SIEVE {
        return Err(Error::LimitTooLarge(n_hi));
    }
    let mut exact = 0.0;
    if n_hi > n_lo {
        let tab = phi_sieve(n_hi)?;
        for n in n_lo + 1..=n_hi {
            let nf = n as f64;
            let rad = d + 4.0 * a * delta / (nf * nf);
            if rad < -1e-12 * d.abs() {
                return Err(Error::DomainError(format!("radicand negative at n = {n}")));
            }
            exact += tab.get(n).expect("in range") as f64 * rad.max(0.0).sqrt();
        }
    }
    let main_term = 3.0 * delta / (PI * PI) * (bracket(s2) - bracket(s1));
    Ok(SumEstimate { exact, main_term, fitted_constant: None })
}
