//! Deterministic SVG drawing of a [`GeoDump`]: the base geodesic (or base
//! point), RM curves, the real axis, and point glyphs colored by `|D|`.

use std::fmt::Write;

use linnik::forms::{geodesic_of_form, CmPoint};
use linnik::{Geodesic, IntForm};

use crate::dump::{DumpMode, GeoDump};
use crate::error::{CliError, CliResult};

const WIDTH: f64 = 800.0;
const MAX_HEIGHT: f64 = 1600.0;
const MARGIN: f64 = 24.0;
const GLYPH_R: f64 = 2.5;

struct View {
    x0: f64,
    k: f64,
    h: f64,
    w: f64,
}

impl View {
    fn x(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) * self.k
    }

    fn y(&self, y: f64) -> f64 {
        self.h - MARGIN - y * self.k
    }
}

enum Base {
    Curve(Geodesic),
    Point(f64, f64),
}

fn bad(msg: &str) -> CliError {
    CliError::Input(format!("cannot render: {msg}"))
}

/// Hue from blue (small `|D|`) to red (`|D|` near `Δ`).
fn color(disc: i128, delta: u64) -> String {
    let s = ((disc.unsigned_abs() as f64).ln_1p() / (delta as f64).ln_1p().max(1e-9)).clamp(0.0, 1.0);
    format!("hsl({},70%,45%)", (240.0 * (1.0 - s)).round() as i64)
}

pub fn render(d: &GeoDump, fundamental_domain: bool) -> CliResult<String> {
    let g = IntForm::new(d.form[0], d.form[1], d.form[2])?;
    let base = match d.mode {
        DumpMode::RmThrough => {
            let p = CmPoint::new(g)?;
            Base::Point(p.z.x, p.z.y)
        }
        _ => Base::Curve(geodesic_of_form(&g)?),
    };
    // bounding box in the half-plane
    let (mut xl, mut xh, mut yh) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
    let mut add = |x: f64, y: f64| {
        xl = xl.min(x);
        xh = xh.max(x);
        yh = yh.max(y);
    };
    match base {
        Base::Curve(Geodesic::Semicircle { q, r }) => {
            add(q - r, 0.0);
            add(q + r, r);
        }
        Base::Curve(Geodesic::HalfLine { x }) => add(x, 0.0),
        Base::Point(x, y) => add(x, y),
    }
    for r in &d.records {
        if let Some([x, y]) = r.point {
            add(x, y);
        }
        if let Some([c, rad]) = r.circle {
            add(c - rad, 0.0);
            add(c + rad, rad);
        }
    }
    if fundamental_domain {
        add(-1.0, 1.2);
        add(1.0, 0.0);
    }
    if !(xl.is_finite() && xh.is_finite() && yh.is_finite()) {
        return Err(bad("non-finite coordinates"));
    }
    if let Base::Curve(Geodesic::HalfLine { .. }) = base {
        yh = yh.max(1.0);
    }
    let span = (xh - xl).max(yh).max(1e-9);
    let (xl, xh) = (xl - 0.05 * span, xh + 0.05 * span);
    let yh = yh + 0.05 * span;
    let mut k = (WIDTH - 2.0 * MARGIN) / (xh - xl);
    if 2.0 * MARGIN + yh * k > MAX_HEIGHT {
        k = (MAX_HEIGHT - 2.0 * MARGIN) / yh;
    }
    if !(k.is_finite() && k > 0.0) {
        return Err(bad("degenerate view"));
    }
    let v = View { x0: xl, k, h: 2.0 * MARGIN + yh * k, w: 2.0 * MARGIN + (xh - xl) * k };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.2}" height="{:.2}" viewBox="0 0 {:.2} {:.2}">"#,
        v.w, v.h, v.w, v.h
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(
        s,
        r##"<line class="axis" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#000000" stroke-width="1"/>"##,
        v.x(xl),
        v.y(0.0),
        v.x(xh),
        v.y(0.0)
    );
    if fundamental_domain {
        let top = yh;
        let h = 3f64.sqrt() / 2.0;
        let _ = writeln!(
            s,
            r##"<path class="domain" d="M {:.2} {:.2} L {:.2} {:.2} A {:.2} {:.2} 0 0 1 {:.2} {:.2} L {:.2} {:.2}" fill="none" stroke="#888888" stroke-dasharray="4 3"/>"##,
            v.x(-0.5),
            v.y(top),
            v.x(-0.5),
            v.y(h),
            k,
            k,
            v.x(0.5),
            v.y(h),
            v.x(0.5),
            v.y(top)
        );
    }
    for r in &d.records {
        if let Some([c, rad]) = r.circle {
            let _ = writeln!(
                s,
                r#"<path class="curve" d="{}" fill="none" stroke="{}" stroke-width="0.6" stroke-opacity="0.6"/>"#,
                semicircle(&v, c, rad),
                color(r.disc, d.delta)
            );
        }
    }
    match base {
        Base::Curve(Geodesic::Semicircle { q, r }) => {
            let _ = writeln!(
                s,
                r##"<path class="geodesic" d="{}" fill="none" stroke="#000000" stroke-width="1.5"/>"##,
                semicircle(&v, q, r)
            );
        }
        Base::Curve(Geodesic::HalfLine { x }) => {
            let _ = writeln!(
                s,
                r##"<line class="geodesic" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#000000" stroke-width="1.5"/>"##,
                v.x(x),
                v.y(0.0),
                v.x(x),
                v.y(yh)
            );
        }
        Base::Point(x, y) => {
            let _ = writeln!(
                s,
                r##"<circle class="point" cx="{:.2}" cy="{:.2}" r="{GLYPH_R}" fill="#000000"/>"##,
                v.x(x),
                v.y(y)
            );
        }
    }
    for r in &d.records {
        if let Some([x, y]) = r.point {
            let _ = writeln!(
                s,
                r#"<circle class="point" cx="{:.2}" cy="{:.2}" r="{GLYPH_R}" fill="{}"/>"#,
                v.x(x),
                v.y(y),
                color(r.disc, d.delta)
            );
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn semicircle(v: &View, c: f64, r: f64) -> String {
    let rk = r * v.k;
    format!("M {:.2} {:.2} A {rk:.2} {rk:.2} 0 0 1 {:.2} {:.2}", v.x(c - r), v.y(0.0), v.x(c + r), v.y(0.0))
}
