//! Arithmetic support: totients, summatory estimates, Bezout
//! coefficients, Pell's equation `t² − Du² = 4`, and reduction to the
//! fundamental domain of SL₂(ℤ).

mod pell;
mod reduce;
mod sieve;
mod sums;

pub use pell::{pell_brute_force, pell_fundamental, PellSolution};
pub use reduce::{sl2z_reduce, Mat2};
pub use sieve::{count_coprime_upto, distinct_prime_factors, mobius_sieve, phi_sieve, PhiTable, MAX_SIEVE};
pub use sums::{
    fit_gamma0, gamma0, gamma0_series, sum_phi, sum_phi_over_n, sum_phi_over_n2, weighted_sqrt_sum,
    SumEstimate,
};

use crate::error::{Error, Result};

/// `(S, b0, c0)` with `b0·Q + c0·R = S = gcd(Q, R) ≥ 1`, choosing `|b0|`
/// minimal and `b0 ≥ 0` on ties. When `R = 0`, `c0 = 0`.
pub fn ext_gcd(q: i128, r: i128) -> Result<(i128, i128, i128)> {
    if q == 0 && r == 0 {
        return Err(Error::InvalidArgument("ext_gcd(0, 0) is undefined".into()));
    }
    let (mut old_r, mut cur_r) = (q, r);
    let (mut old_s, mut cur_s) = (1i128, 0i128);
    let (mut old_t, mut cur_t) = (0i128, 1i128);
    while cur_r != 0 {
        let k = old_r.div_euclid(cur_r);
        (old_r, cur_r) = (cur_r, old_r - k * cur_r);
        (old_s, cur_s) = (cur_s, old_s - k * cur_s);
        (old_t, cur_t) = (cur_t, old_t - k * cur_t);
    }
    let (mut s, mut b0, mut c0) = (old_r, old_s, old_t);
    if s < 0 {
        (s, b0, c0) = (-s, -b0, -c0);
    }
    if r == 0 {
        // q·b0 = s forces b0 = sgn q
        return Ok((s, q.signum(), 0));
    }
    // all solutions: b0 + k·R/S, c0 − k·Q/S
    let step_b = r / s;
    let step_c = q / s;
    let sb = step_b.abs();
    let k = -b0.div_euclid(sb);
    let mut cands = [(b0 + k * sb), (b0 + (k - 1) * sb), (b0 + (k + 1) * sb)];
    cands.sort_by_key(|&b| (b.abs(), b < 0));
    let best = cands[0];
    let kk = (best - b0) / step_b;
    b0 = best;
    c0 -= kk * step_c;
    debug_assert_eq!(b0 * q + c0 * r, s);
    Ok((s, b0, c0))
}

/// Fundamental discriminants: `D ≡ 1 (mod 4)` squarefree, or `D = 4m` with
/// `m ≡ 2, 3 (mod 4)` squarefree.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let squarefree = |m: i64| -> bool {
        let m = m.unsigned_abs();
        let mut p = 2u64;
        while p * p <= m {
            if m.is_multiple_of(p * p) {
                return false;
            }
            p += 1;
        }
        true
    };
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
        }
        _ => false,
    }
}

pub fn is_square(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = isqrt(n as u128);
    r * r == n as u128
}

pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x.checked_mul(x).is_none_or(|v| v > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|v| v <= n) {
        x += 1;
    }
    x
}
