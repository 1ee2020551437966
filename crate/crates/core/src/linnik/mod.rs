//! Aggregate-Linnik sets `W_Δ = {m/n : gcd(m,n) = 1, 0 < F(m,n) ≤ Δ}` on
//! intervals of the projective line: exact enumeration, the measure
//! `dμ = dt/F(t)`, predicted counts and equidistribution reports.

mod enumerate;
mod interval;
mod measure;
mod report;

pub use enumerate::{
    brute_force_cost, brute_force_w, enumerate_pieces, enumerate_w, enumerate_w_detailed, n_bound,
    Enumeration, Fraction, BRUTE_FORCE_MAX_DELTA, MAX_N,
};
pub use interval::{Piece, ProjInterval};
pub use measure::{mu_integral, predicted_count, validate};
pub use report::{equid_report, equid_report_with_fractions, Bucket, EnumReport};
