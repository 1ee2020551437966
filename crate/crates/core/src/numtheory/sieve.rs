use crate::error::{Error, Result};

pub const MAX_SIEVE: u64 = 100_000_000;

/// `φ(1..=T)` from a linear sieve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiTable {
    limit: u64,
    // index 0 unused
    values: Vec<u32>,
}

impl PhiTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn get(&self, n: u64) -> Option<u32> {
        (n >= 1 && n <= self.limit).then(|| self.values[n as usize])
    }

    /// `φ(1), …, φ(T)`.
    pub fn values(&self) -> &[u32] {
        &self.values[1..]
    }
}

pub fn phi_sieve(limit: u64) -> Result<PhiTable> {
    if limit == 0 || limit > MAX_SIEVE {
        return Err(Error::LimitTooLarge(limit));
    }
    let n = limit as usize;
    let mut phi = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    phi[1] = 1;
    for i in 2..=n {
        if phi[i] == 0 {
            phi[i] = (i - 1) as u32;
            primes.push(i as u32);
        }
        for &p in &primes {
            let ip = i * p as usize;
            if ip > n {
                break;
            }
            if i % p as usize == 0 {
                phi[ip] = phi[i] * p;
                break;
            }
            phi[ip] = phi[i] * (p - 1);
        }
    }
    Ok(PhiTable { limit, values: phi })
}

/// `μ(0..=N)` (index 0 is 0).
pub fn mobius_sieve(limit: usize) -> Vec<i8> {
    let mut mu = vec![0i8; limit + 1];
    if limit == 0 {
        return mu;
    }
    let mut composite = vec![false; limit + 1];
    let mut primes: Vec<usize> = Vec::new();
    mu[1] = 1;
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > limit {
                break;
            }
            composite[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    mu
}

pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `#{1 ≤ m ≤ T : gcd(m, n) = 1}` as `Σ_{d | n} μ(d) ⌊T/d⌋`.
pub fn count_coprime_upto(t: f64, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if !t.is_finite() {
        return Err(Error::NonFinite("T"));
    }
    if t < 1.0 {
        return Ok(0);
    }
    let tf = t.floor() as u64;
    let ps = distinct_prime_factors(n);
    let mut total: i128 = 0;
    for mask in 0u32..(1 << ps.len()) {
        let d: u64 = ps
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &p)| p)
            .product();
        let term = (tf / d) as i128;
        total += if mask.count_ones() % 2 == 0 { term } else { -term };
    }
    Ok(total as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_sieve(1).unwrap().values(), &[1]);
        assert_eq!(phi_sieve(10).unwrap().values(), &[1, 1, 2, 2, 4, 2, 6, 4, 6, 4]);
        assert_eq!(phi_sieve(100).unwrap().get(97), Some(96));
        assert!(matches!(phi_sieve(0), Err(Error::LimitTooLarge(0))));
        assert!(matches!(phi_sieve(MAX_SIEVE + 1), Err(Error::LimitTooLarge(_))));
    }

    #[test]
    fn phi_matches_definition() {
        let t = phi_sieve(2000).unwrap();
        for n in 1..=2000u64 {
            let direct = (1..=n).filter(|&m| gcd(m, n) == 1).count() as u32;
            assert_eq!(t.get(n), Some(direct), "n = {n}");
        }
        // multiplicativity
        for (a, b) in [(8u64, 9u64), (7, 11), (25, 16), (13, 81)] {
            assert_eq!(t.get(a * b).unwrap(), t.get(a).unwrap() * t.get(b).unwrap());
        }
    }

    #[test]
    fn mobius_small() {
        assert_eq!(mobius_sieve(12), vec![0, 1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
    }

    #[test]
    fn coprime_examples() {
        assert_eq!(count_coprime_upto(10.0, 1).unwrap(), 10);
        assert_eq!(count_coprime_upto(10.0, 6).unwrap(), 3);
        assert_eq!(count_coprime_upto(100.0, 30).unwrap(), 26);
        assert_eq!(count_coprime_upto(10.9, 6).unwrap(), 3);
        assert_eq!(count_coprime_upto(0.5, 6).unwrap(), 0);
    }

    #[test]
    fn coprime_matches_scan() {
        for n in 1..=100u64 {
            for t in [1.0, 7.5, 30.0, 99.0, 250.0] {
                let direct = (1..=t as u64).filter(|&m| gcd(m, n) == 1).count() as u64;
                assert_eq!(count_coprime_upto(t, n).unwrap(), direct);
            }
        }
    }

    #[test]
    fn coprime_matches_mobius_sum() {
        let mu = mobius_sieve(10_000);
        for n in (1..=10_000u64).step_by(97) {
            for t in [1e3, 3.3e4, 1e5] {
                let mut s = 0i64;
                for d in 1..=n {
                    if n % d == 0 {
                        s += mu[d as usize] as i64 * (t / d as f64).floor() as i64;
                    }
                }
                assert_eq!(count_coprime_upto(t, n).unwrap() as i64, s);
            }
        }
    }

    #[test]
    fn coprime_near_main_term() {
        let t = phi_sieve(5000).unwrap();
        for n in 1..=5000u64 {
            let c = count_coprime_upto(1e5, n).unwrap() as f64;
            let main = t.get(n).unwrap() as f64 / n as f64 * 1e5;
            let k = distinct_prime_factors(n).len() as i32;
            assert!((c - main).abs() <= 2f64.powi(k), "n = {n}");
        }
    }
}
