//! The JSON form of a geodesic enumeration, shared by `enum` and `render`.

use linnik::geodesic_enum::{self, Arc, Mode};
use linnik::IntForm;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::{ModeArg, MAX_GEODESIC_DELTA, MAX_SCAN_N};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DumpMode {
    CmOn,
    RmPerp,
    RmThrough,
}

impl From<ModeArg> for DumpMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::CmOn => DumpMode::CmOn,
            ModeArg::RmPerp => DumpMode::RmPerp,
            ModeArg::RmThrough => DumpMode::RmThrough,
        }
    }
}

impl DumpMode {
    fn core(self) -> Mode {
        match self {
            DumpMode::CmOn => Mode::CmOnGeodesic,
            DumpMode::RmPerp => Mode::RmPerpGeodesic,
            DumpMode::RmThrough => Mode::RmThroughPoint,
        }
    }

    pub fn coordinate_name(self, half_line: bool) -> &'static str {
        match (self, half_line) {
            (DumpMode::RmThrough, _) => "angle",
            (_, true) => "y",
            (_, false) => "theta",
        }
    }
}

/// One enumerated object. `point` is the CM point (or the foot of a
/// perpendicular curve); `circle` is `(center, radius)` of an RM curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeoRecord {
    pub m: i64,
    pub n: i64,
    pub t: f64,
    pub form: [i128; 3],
    pub disc: i128,
    pub coord: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circle: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeoDump {
    pub schema: u32,
    pub mode: DumpMode,
    pub form: [i128; 3],
    pub delta: u64,
    pub arc: Option<Arc>,
    pub coordinate: String,
    pub records: Vec<GeoRecord>,
}

/// The arc in the coordinate the geodesic of `g` uses.
fn arc_for(g: &IntForm, mode: DumpMode, lo: Option<f64>, hi: Option<f64>) -> CliResult<Option<Arc>> {
    let (Some(lo), Some(hi)) = (lo, hi) else { return Ok(None) };
    if mode == DumpMode::RmThrough {
        return Err(CliError::Input("curves through a point take no arc".into()));
    }
    Ok(Some(if g.a() == 0 { Arc::Y { lo, hi } } else { Arc::Theta { lo, hi } }))
}

/// Runs the enumeration behind a dump, after the work guards.
pub fn build(mode: DumpMode, abc: (i128, i128, i128), delta: u64, lo: Option<f64>, hi: Option<f64>) -> CliResult<GeoDump> {
    let g = IntForm::new(abc.0, abc.1, abc.2)?;
    if delta > MAX_GEODESIC_DELTA {
        return Err(CliError::Guard(format!("Δ = {delta} exceeds {MAX_GEODESIC_DELTA}")));
    }
    let param = geodesic_enum::build_param(&g, mode.core())?;
    let arc = arc_for(&g, mode, lo, hi)?;
    let n = geodesic_enum::n_bound_for(&param, delta, arc)?;
    if n > MAX_SCAN_N {
        return Err(CliError::Guard(format!("enumeration would scan n up to {n}")));
    }
    let fin = |v: f64| if v.is_finite() { Some(v) } else { None };
    let records = match mode {
        DumpMode::CmOn => geodesic_enum::enum_cm_on_param(&param, delta, arc)?
            .into_iter()
            .map(|r| GeoRecord {
                m: r.t.m,
                n: r.t.n,
                t: r.t.value(),
                form: coeffs(&r.point.form),
                disc: r.point.disc,
                coord: r.coord,
                point: Some([r.point.z.x, r.point.z.y]),
                circle: None,
            })
            .collect(),
        DumpMode::RmPerp => geodesic_enum::enum_rm_perp_geodesic(&g, delta, arc)?
            .into_iter()
            .map(|r| GeoRecord {
                m: r.t.m,
                n: r.t.n,
                t: r.t.value(),
                form: coeffs(&r.curve.form),
                disc: r.curve.disc,
                coord: r.coord,
                point: Some([r.foot.x, r.foot.y]),
                circle: Some([r.curve.center, r.curve.radius]),
            })
            .collect(),
        DumpMode::RmThrough => geodesic_enum::enum_rm_through_point(&g, delta)?
            .into_iter()
            .map(|r| GeoRecord {
                m: r.t.m,
                n: r.t.n,
                t: r.t.value(),
                form: coeffs(&r.curve.form),
                disc: r.curve.disc,
                coord: r.angle,
                point: None,
                circle: Some([r.curve.center, r.curve.radius]),
            })
            .collect(),
    };
    let dump = GeoDump {
        schema: SCHEMA,
        mode,
        form: coeffs(&g),
        delta,
        arc,
        coordinate: mode.coordinate_name(g.a() == 0).to_string(),
        records,
    };
    // t = ±∞ never reaches a record; keep the JSON free of non-numbers anyway
    if dump.records.iter().any(|r| fin(r.t).is_none() || fin(r.coord).is_none()) {
        return Err(CliError::Internal("non-finite record".into()));
    }
    Ok(dump)
}

fn coeffs(f: &IntForm) -> [i128; 3] {
    let (a, b, c) = f.coefficients();
    [a, b, c]
}
