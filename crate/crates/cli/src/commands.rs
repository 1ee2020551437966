use std::io::Write;

use linnik::cycles::{closed_geodesic, cycle_value, periods_n_bound, JInvariant, ModularFunction, One};
use linnik::linnik::{equid_report_with_fractions, n_bound, predicted_count, validate, EnumReport, Fraction, ProjInterval};
use linnik::{IntForm, RealForm};
use serde::Serialize;

use crate::dump::{self, GeoDump, SCHEMA};
use crate::error::{CliError, CliResult};
use crate::output::{csv_row, emit, json, CSV_HEADER};
use crate::{
    parse_ladder, svg, CycleArgs, Format, FunctionArg, GeoArgs, RenderArgs, VerifyArgs, WsetArgs,
    MAX_GEODESIC_DELTA, MAX_SCAN_N, MAX_WSET_OUTPUT,
};

fn interval(lo: f64, hi: f64, wrap: bool) -> CliResult<ProjInterval> {
    match (wrap, lo > hi) {
        (true, true) => Ok(ProjInterval::wrapping(lo, hi)?),
        (true, false) => Err(CliError::Input(format!("--wrap needs lo > hi, got [{lo}, {hi}]"))),
        (false, true) => Err(CliError::Input(format!(
            "lo > hi ({lo} > {hi}); pass --wrap for the interval through infinity"
        ))),
        (false, false) => Ok(ProjInterval::new(lo, hi)?),
    }
}

/// Rejects `wset`-style runs whose output or scan would be too large.
fn guard_wset(f: &RealForm, delta: f64, i: &ProjInterval) -> CliResult<()> {
    let pieces = validate(f, i)?;
    if delta == 0.0 {
        return Ok(());
    }
    let expected = predicted_count(f, delta, i)?;
    if !(expected <= MAX_WSET_OUTPUT) {
        return Err(CliError::Guard(format!("about {expected:.3e} fractions expected")));
    }
    let n = n_bound(f, delta, &pieces)?;
    if n > MAX_SCAN_N {
        return Err(CliError::Guard(format!("enumeration would scan n up to {n}")));
    }
    Ok(())
}

/// `F(m, n)`, exact when the coefficients are integers.
fn form_value(f: &RealForm, m: i64, n: i64) -> String {
    if let Some((a, b, c)) = f.integer_coefficients() {
        let (m, n) = (m as i128, n as i128);
        let v = a.checked_mul(m * m).zip(b.checked_mul(m * n)).zip(c.checked_mul(n * n));
        if let Some(((x, y), z)) = v {
            if let Some(s) = x.checked_add(y).and_then(|s| s.checked_add(z)) {
                return s.to_string();
            }
        }
    }
    let (m, n) = (m as f64, n as f64);
    (f.a * m * m + f.b * m * n + f.c * n * n).to_string()
}

#[derive(Serialize)]
struct WsetDump<'a> {
    schema: u32,
    command: &'static str,
    form: [f64; 3],
    delta: f64,
    interval: ProjInterval,
    fractions: &'a [Fraction],
    report: &'a EnumReport,
}

pub fn wset(a: &WsetArgs, out: &mut dyn Write) -> CliResult<()> {
    if !(a.delta >= 0.0) {
        return Err(CliError::Input(format!("Δ must be non-negative, got {}", a.delta)));
    }
    if a.buckets < 2 {
        return Err(CliError::Input(format!("need at least 2 buckets, got {}", a.buckets)));
    }
    let f = RealForm::new(a.a, a.b, a.c)?;
    let i = interval(a.lo, a.hi, a.wrap)?;
    guard_wset(&f, a.delta, &i)?;
    let (report, fractions) = equid_report_with_fractions(&f, a.delta, &i, a.buckets)?;
    let body = match a.out.format {
        Format::Csv => {
            let mut s = format!("{CSV_HEADER}\n");
            for r in &fractions {
                csv_row(&mut s, r.m, r.n, r.value(), form_value(&f, r.m, r.n), "");
            }
            s
        }
        Format::Json => json(&WsetDump {
            schema: SCHEMA,
            command: "wset",
            form: [a.a, a.b, a.c],
            delta: a.delta,
            interval: i,
            fractions: &fractions,
            report: &report,
        })?,
        Format::Svg => return Err(CliError::Input("wset writes csv or json; use enum or render for svg".into())),
    };
    emit(out, a.out.output.as_deref(), &body)
}

fn geo_csv(d: &GeoDump) -> String {
    let mut s = format!("{CSV_HEADER}\n");
    for r in &d.records {
        csv_row(&mut s, r.m, r.n, r.t, r.disc, r.coord);
    }
    s
}

pub fn enumerate(a: &GeoArgs, out: &mut dyn Write) -> CliResult<()> {
    let d = dump::build(a.mode.into(), (a.a, a.b, a.c), a.delta, a.lo, a.hi)?;
    let body = match a.out.format {
        Format::Csv => geo_csv(&d),
        Format::Json => json(&d)?,
        Format::Svg => svg::render(&d, a.fundamental_domain)?,
    };
    emit(out, a.out.output.as_deref(), &body)
}

pub fn render(a: &RenderArgs, out: &mut dyn Write) -> CliResult<()> {
    let d = match &a.input {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let d: GeoDump = serde_json::from_str(&text)?;
            if d.schema != SCHEMA {
                return Err(CliError::Input(format!("unsupported schema {}", d.schema)));
            }
            d
        }
        None => {
            let (Some(x), Some(y), Some(z), Some(delta)) = (a.a, a.b, a.c, a.delta) else {
                return Err(CliError::Input("render needs --input or -A, -B, -C and --delta".into()));
            };
            dump::build(a.mode.into(), (x, y, z), delta, a.lo, a.hi)?
        }
    };
    emit(out, a.output.as_deref(), &svg::render(&d, a.fundamental_domain)?)
}

/// The six sign cases with a default form and interval for each.
type Case = (&'static str, (f64, f64, f64), (f64, f64));

const CASES: [Case; 6] = [
    ("a0-bpos", (0.0, 1.0, 0.0), (1.0, 2.0)),
    ("a0-bneg", (0.0, -1.0, 3.0), (-2.0, 2.0)),
    ("apos-dpos", (1.0, 0.0, -1.0), (2.0, 3.0)),
    ("apos-dneg", (1.0, 0.0, 1.0), (0.0, 1.0)),
    ("d0", (1.0, 2.0, 1.0), (1.0, 4.0)),
    ("aneg", (-1.0, 0.0, 1.0), (-0.5, 0.5)),
];

fn case_of(a: f64, b: f64, c: f64) -> &'static str {
    let d = b * b - 4.0 * a * c;
    if a == 0.0 {
        if b > 0.0 {
            "a0-bpos"
        } else {
            "a0-bneg"
        }
    } else if a < 0.0 {
        "aneg"
    } else if d > 0.0 {
        "apos-dpos"
    } else if d < 0.0 {
        "apos-dneg"
    } else {
        "d0"
    }
}

#[derive(Serialize)]
struct VerifyRow {
    delta: u64,
    empirical: u64,
    predicted: f64,
    residual: f64,
    normalized_residual: f64,
    error_scale: f64,
}

#[derive(Serialize)]
struct VerifyDump<'a> {
    schema: u32,
    command: &'static str,
    case: &'a str,
    form: [f64; 3],
    interval: ProjInterval,
    tol: f64,
    rows: &'a [VerifyRow],
    pass: bool,
}

pub fn verify(a: &VerifyArgs, out: &mut dyn Write) -> CliResult<()> {
    let Some(&(tag, default_form, default_iv)) = CASES.iter().find(|c| c.0 == a.case) else {
        let tags: Vec<&str> = CASES.iter().map(|c| c.0).collect();
        return Err(CliError::Input(format!("unknown case {:?}; expected one of {}", a.case, tags.join(", "))));
    };
    let (fa, fb, fc) = match (a.a, a.b, a.c) {
        (Some(x), Some(y), Some(z)) => (x, y, z),
        _ => default_form,
    };
    if case_of(fa, fb, fc) != tag {
        return Err(CliError::Input(format!("form ({fa},{fb},{fc}) is not in case {tag}")));
    }
    if !(a.tol > 0.0) {
        return Err(CliError::Input(format!("tolerance must be positive, got {}", a.tol)));
    }
    if matches!(a.out.format, Format::Svg) {
        return Err(CliError::Input("verify writes csv or json".into()));
    }
    let f = RealForm::new(fa, fb, fc)?;
    let (lo, hi) = match (a.lo, a.hi) {
        (Some(x), Some(y)) => (x, y),
        _ => default_iv,
    };
    let i = interval(lo, hi, a.wrap)?;
    let ladder = parse_ladder(&a.delta_ladder)?;
    let mut rows = Vec::with_capacity(ladder.len());
    for &delta in &ladder {
        let df = delta as f64;
        guard_wset(&f, df, &i)?;
        let (rep, _) = equid_report_with_fractions(&f, df, &i, 8)?;
        rows.push(VerifyRow {
            delta,
            empirical: rep.empirical,
            predicted: rep.predicted,
            residual: rep.residual,
            normalized_residual: rep.normalized_residual,
            error_scale: rep.error_scale,
        });
    }
    let pass = rows.iter().all(|r| r.normalized_residual.abs() < a.tol);
    let body = match a.out.format {
        Format::Json => json(&VerifyDump {
            schema: SCHEMA,
            command: "verify",
            case: tag,
            form: [fa, fb, fc],
            interval: i,
            tol: a.tol,
            rows: &rows,
            pass,
        })?,
        _ => {
            let mut s = String::from("delta,empirical,predicted,residual,normalized_residual,error_scale\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.delta, r.empirical, r.predicted, r.residual, r.normalized_residual, r.error_scale
                ));
            }
            s
        }
    };
    emit(out, a.out.output.as_deref(), &body)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Tolerance(format!("|residual|/Δ^0.6 reached {} (tolerance {})", worst(&rows), a.tol)))
    }
}

fn worst(rows: &[VerifyRow]) -> f64 {
    rows.iter().map(|r| r.normalized_residual.abs()).fold(0.0, f64::max)
}

#[derive(Serialize)]
struct Pell {
    t0: String,
    u0: String,
    log_epsilon: f64,
}

#[derive(Serialize)]
struct CycleRow {
    delta: u64,
    count: u64,
    re: f64,
    im: f64,
    /// `|estimate − quadrature| / |quadrature|`
    rel_err: f64,
}

#[derive(Serialize)]
struct CycleDump<'a> {
    schema: u32,
    command: &'static str,
    form: [i128; 3],
    disc: i128,
    function: &'a str,
    length: f64,
    pell: Pell,
    gamma: [[String; 2]; 2],
    estimates: &'a [CycleRow],
    quadrature: Complex,
}

#[derive(Serialize)]
struct Complex {
    re: f64,
    im: f64,
}

pub fn cycle(a: &CycleArgs, out: &mut dyn Write) -> CliResult<()> {
    let g = IntForm::new(a.a, a.b, a.c)?;
    let cg = closed_geodesic(&g)?;
    let ladder = parse_ladder(&a.delta_ladder)?;
    for &delta in &ladder {
        if delta > MAX_GEODESIC_DELTA {
            return Err(CliError::Guard(format!("Δ = {delta} exceeds {MAX_GEODESIC_DELTA}")));
        }
        let n = periods_n_bound(&cg, delta, 1)?;
        if n > MAX_SCAN_N {
            return Err(CliError::Guard(format!("Δ = {delta} would scan n up to {n}")));
        }
    }
    if matches!(a.out.format, Format::Svg) {
        return Err(CliError::Input("cycle writes csv or json".into()));
    }
    let f: &dyn ModularFunction = match a.function {
        FunctionArg::One => &One,
        FunctionArg::J => &JInvariant,
    };
    let v = cycle_value(f, &g, &ladder)?;
    let q = (v.classical_re, v.classical_im);
    let qn = q.0.hypot(q.1);
    let rows: Vec<CycleRow> = v
        .estimates
        .iter()
        .map(|e| CycleRow {
            delta: e.delta,
            count: e.count,
            re: e.re,
            im: e.im,
            rel_err: (e.re - q.0).hypot(e.im - q.1) / qn,
        })
        .collect();
    let body = match a.out.format {
        Format::Json => json(&CycleDump {
            schema: SCHEMA,
            command: "cycle",
            form: {
                let (x, y, z) = g.coefficients();
                [x, y, z]
            },
            disc: cg.disc,
            function: &v.function,
            length: v.length,
            pell: Pell { t0: cg.pell.t0.to_string(), u0: cg.pell.u0.to_string(), log_epsilon: cg.pell.log_epsilon() },
            gamma: [0, 1].map(|r| [0, 1].map(|c| cg.gamma[r][c].to_string())),
            estimates: &rows,
            quadrature: Complex { re: q.0, im: q.1 },
        })?,
        _ => {
            let mut s = String::from("delta,count,re,im,rel_err\n");
            for r in &rows {
                s.push_str(&format!("{},{},{},{},{}\n", r.delta, r.count, r.re, r.im, r.rel_err));
            }
            s.push_str(&format!("quadrature,,{},{},\n", q.0, q.1));
            s
        }
    };
    emit(out, a.out.output.as_deref(), &body)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_requires_wrap_flag() {
        assert!(interval(0.0, 1.0, false).is_ok());
        assert!(interval(1.0, 0.0, true).unwrap().wraps);
        assert_eq!(interval(1.0, 0.0, false).unwrap_err().exit_code(), 2);
        assert_eq!(interval(0.0, 1.0, true).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn default_cases_carry_their_own_tag() {
        for (tag, (a, b, c), _) in CASES {
            assert_eq!(case_of(a, b, c), tag);
        }
    }

    #[test]
    fn form_value_is_exact_for_integers() {
        let f = RealForm::new(3.0, -7.0, 11.0).unwrap();
        // 3·(10^8+1)² is past 2^53, where f64 would round
        let m = 100_000_001i64;
        let exact = 3i128 * (m as i128) * (m as i128) - 7 * m as i128 + 11;
        assert_eq!(form_value(&f, m, 1), exact.to_string());
        let g = RealForm::new(0.5, 0.0, 0.5).unwrap();
        assert_eq!(form_value(&g, 1, 1), "1");
    }

    #[test]
    fn wset_guard_trips_on_huge_delta() {
        let f = RealForm::new(1.0, 0.0, 1.0).unwrap();
        let i = ProjInterval::new(0.0, 1.0).unwrap();
        assert!(guard_wset(&f, 1e4, &i).is_ok());
        assert_eq!(guard_wset(&f, 1e12, &i).unwrap_err().exit_code(), 3);
    }
}
