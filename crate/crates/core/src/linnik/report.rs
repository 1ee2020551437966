use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::enumerate::{enumerate_w_detailed, Fraction};
use super::interval::ProjInterval;
use super::measure::{mu_integral, validate};
use crate::error::{Error, Result};
use crate::forms::RealForm;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bucket {
    #[serde(with = "crate::extf")]
    pub lo: f64,
    #[serde(with = "crate::extf")]
    pub hi: f64,
    pub mu_mass: f64,
    pub predicted: f64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumReport {
    pub delta: f64,
    pub interval: ProjInterval,
    pub empirical: u64,
    pub predicted: f64,
    pub residual: f64,
    /// `residual / Δ^0.6`
    pub normalized_residual: f64,
    /// `residual / (√Δ log² Δ)`
    pub error_scale: f64,
    pub histogram: Vec<Bucket>,
    /// `max count / min count − 1` over the buckets.
    pub max_ratio_deviation: f64,
    /// `max |count − mean| / mean`.
    pub max_mean_deviation: f64,
    pub ties: usize,
}

/// `2 atan t`, continued past `π` on the second piece of a wrapping
/// interval.
fn phase(i: &ProjInterval, t: f64) -> f64 {
    let p = 2.0 * t.atan();
    if i.wraps && t < i.lo {
        p + TAU
    } else {
        p
    }
}

fn phase_to_t(p: f64) -> f64 {
    if (p - PI).abs() < 1e-15 {
        return f64::INFINITY;
    }
    if p <= -PI {
        return f64::NEG_INFINITY;
    }
    if p >= 3.0 * PI {
        return f64::INFINITY;
    }
    let q = if p > PI { p - TAU } else { p };
    if q >= PI {
        f64::INFINITY
    } else {
        (q / 2.0).tan()
    }
}

/// `μ([lo, t(p)])` along the interval.
fn cumulative(f: &RealForm, i: &ProjInterval, p: f64) -> Result<f64> {
    let start = phase(i, i.lo);
    if p <= start {
        return Ok(0.0);
    }
    let t = phase_to_t(p);
    let sub = if p > PI + 1e-15 {
        ProjInterval::wrapping(i.lo, t)?
    } else {
        ProjInterval::new(i.lo, t)?
    };
    mu_integral(f, &sub)
}

/// Phases `p_0 < … < p_k` splitting `I` into `k` parts of equal `μ`-mass.
fn boundaries(f: &RealForm, i: &ProjInterval, total: f64, k: usize) -> Result<Vec<f64>> {
    let p0 = phase(i, i.lo);
    let p1 = if i.wraps { phase(i, i.hi) } else { 2.0 * i.hi.atan() };
    let mut out = vec![p0];
    for j in 1..k {
        let target = total * j as f64 / k as f64;
        let (mut a, mut b) = (*out.last().expect("nonempty"), p1);
        for _ in 0..200 {
            if b - a <= 1e-12 * (1.0 + a.abs()) {
                break;
            }
            let mid = 0.5 * (a + b);
            if cumulative(f, i, mid)? < target {
                a = mid;
            } else {
                b = mid;
            }
        }
        out.push(0.5 * (a + b));
    }
    out.push(p1);
    Ok(out)
}

fn deviations(counts: &[u64]) -> (f64, f64) {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return (0.0, 0.0);
    }
    let max = *counts.iter().max().expect("nonempty") as f64;
    let min = *counts.iter().min().expect("nonempty") as f64;
    let mean = total as f64 / counts.len() as f64;
    let ratio = if min == 0.0 { f64::INFINITY } else { max / min - 1.0 };
    let dev = counts.iter().map(|&c| (c as f64 - mean).abs() / mean).fold(0.0, f64::max);
    (ratio, dev)
}

/// Buckets `fractions` into the μ-equal parts of `I`.
pub(crate) fn bucket_counts(i: &ProjInterval, phases: &[f64], fractions: &[Fraction]) -> Vec<u64> {
    let k = phases.len() - 1;
    let inner = &phases[1..k];
    let mut counts = vec![0u64; k];
    for fr in fractions {
        let p = phase(i, fr.value());
        counts[inner.partition_point(|&b| b <= p)] += 1;
    }
    counts
}

/// Empirical against predicted counts of `W_Δ ∩ I` and a histogram over
/// `buckets` parts of equal `μ`-mass.
pub fn equid_report(f: &RealForm, delta: f64, i: &ProjInterval, buckets: usize) -> Result<EnumReport> {
    Ok(equid_report_with_fractions(f, delta, i, buckets)?.0)
}

/// [`equid_report`] together with the enumerated fractions.
pub fn equid_report_with_fractions(
    f: &RealForm,
    delta: f64,
    i: &ProjInterval,
    buckets: usize,
) -> Result<(EnumReport, Vec<Fraction>)> {
    if buckets < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 buckets, got {buckets}")));
    }
    validate(f, i)?;
    let total_mu = mu_integral(f, i)?;
    let e = enumerate_w_detailed(f, delta, i)?;
    let phases = boundaries(f, i, total_mu, buckets)?;
    let counts = bucket_counts(i, &phases, &e.fractions);
    let scale = 3.0 * delta / (PI * PI);
    let histogram: Vec<Bucket> = (0..buckets)
        .map(|j| Bucket {
            lo: phase_to_t(phases[j]),
            hi: phase_to_t(phases[j + 1]),
            mu_mass: total_mu / buckets as f64,
            predicted: scale * total_mu / buckets as f64,
            count: counts[j],
        })
        .collect();
    let empirical = e.fractions.len() as u64;
    let predicted = scale * total_mu;
    let residual = empirical as f64 - predicted;
    let (normalized_residual, error_scale) = if delta > 1.0 {
        (residual / delta.powf(0.6), residual / (delta.sqrt() * delta.ln().powi(2)))
    } else {
        (0.0, 0.0)
    };
    let (max_ratio_deviation, max_mean_deviation) = deviations(&counts);
    let report = EnumReport {
        delta,
        interval: *i,
        empirical,
        predicted,
        residual,
        normalized_residual,
        error_scale,
        histogram,
        max_ratio_deviation,
        max_mean_deviation,
        ties: e.ties,
    };
    Ok((report, e.fractions))
}
