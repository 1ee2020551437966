use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A closed interval of the projectively extended line. When `wraps` is set
/// it runs from `lo` up through `∞` and back from `−∞` to `hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjInterval {
    #[serde(with = "crate::extf")]
    pub lo: f64,
    #[serde(with = "crate::extf")]
    pub hi: f64,
    pub wraps: bool,
}

/// One ordinary closed piece `[lo, hi]`, possibly with infinite ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
}

impl Piece {
    pub fn contains(&self, t: f64) -> bool {
        t >= self.lo && t <= self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// A point well inside the piece.
    pub fn sample(&self) -> f64 {
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => 0.5 * (self.lo + self.hi),
            (true, false) => self.lo + 1.0 + self.lo.abs(),
            (false, true) => self.hi - 1.0 - self.hi.abs(),
            (false, false) => 0.0,
        }
    }
}

impl ProjInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::InvalidInterval("NaN endpoint".into()));
        }
        if lo > hi {
            return Err(Error::InvalidInterval(format!(
                "lo = {lo} > hi = {hi}; pass a wrapping interval explicitly"
            )));
        }
        if lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(Error::InvalidInterval("interval lies entirely at infinity".into()));
        }
        Ok(ProjInterval { lo, hi, wraps: false })
    }

    /// `[lo, ∞) ∪ (−∞, hi]` with finite `lo > hi`.
    pub fn wrapping(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidInterval("wrapping interval needs finite endpoints".into()));
        }
        if lo <= hi {
            return Err(Error::InvalidInterval(format!(
                "wrapping interval needs lo > hi, got [{lo}, {hi}]"
            )));
        }
        Ok(ProjInterval { lo, hi, wraps: true })
    }

    pub fn full() -> Self {
        ProjInterval { lo: f64::NEG_INFINITY, hi: f64::INFINITY, wraps: false }
    }

    pub fn pieces(&self) -> Vec<Piece> {
        if self.wraps {
            vec![Piece { lo: self.lo, hi: f64::INFINITY }, Piece { lo: f64::NEG_INFINITY, hi: self.hi }]
        } else {
            vec![Piece { lo: self.lo, hi: self.hi }]
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        if self.wraps {
            t >= self.lo || t <= self.hi
        } else {
            t >= self.lo && t <= self.hi
        }
    }

    /// The image under `t ↦ −t`.
    pub fn negate(&self) -> Self {
        ProjInterval { lo: -self.hi, hi: -self.lo, wraps: self.wraps }
    }
}

impl std::fmt::Display for ProjInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.wraps {
            write!(f, "[{}, ∞] ∪ [−∞, {}]", self.lo, self.hi)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}
