//! Acceptance battery: one PASS/FAIL line per criterion.

#![allow(clippy::type_complexity)]

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};
use std::time::Instant;

use linnik::cycles::{closed_geodesic, cm_count_closed, cycle_value, JInvariant, One};
use linnik::geodesic_enum::{
    build_param, chi_square_uniform, enum_cm_at_height, enum_cm_in_ball, enum_cm_on_geodesic,
    enum_rm_through_point, equal_mass_histogram, max_mean_deviation, max_ratio_deviation, Arc,
    CoordKind, DiscSelect, Mode,
};
use linnik::hyperbolic::{ang_p, ball, dist, sector_area};
use linnik::linnik::{brute_force_cost, brute_force_w, enumerate_w, equid_report, validate, ProjInterval};
use linnik::numtheory::{is_fundamental_discriminant, is_square, pell_fundamental, sum_phi, sum_phi_over_n, weighted_sqrt_sum};
use linnik::quad::integrate;
use linnik::{IntForm, PointH, RealForm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(bool, String), String>;

fn form(a: i128, b: i128, c: i128) -> IntForm {
    IntForm::new(a, b, c).unwrap()
}

fn pt(x: f64, y: f64) -> PointH {
    PointH::new(x, y).unwrap()
}

fn single_threaded<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(f)
}

fn c1_linnik_battery() -> Outcome {
    let battery: [((f64, f64, f64), (f64, f64)); 7] = [
        ((0.0, 1.0, 0.0), (1.0, 2.0)),
        ((0.0, -1.0, 3.0), (-2.0, 2.0)),
        ((1.0, 0.0, -1.0), (2.0, 3.0)),
        ((1.0, 0.0, 1.0), (0.0, 1.0)),
        ((1.0, 0.0, 1.0), (f64::NEG_INFINITY, f64::INFINITY)),
        ((1.0, 2.0, 1.0), (1.0, 4.0)),
        ((-1.0, 0.0, 1.0), (-0.5, 0.5)),
    ];
    let mut ok = true;
    let mut worst_scale = 0.0f64;
    let mut slowest = 0.0f64;
    for ((a, b, c), (lo, hi)) in battery {
        let f = RealForm::new(a, b, c).map_err(|e| e.to_string())?;
        let i = ProjInterval::new(lo, hi).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let rep = single_threaded(|| equid_report(&f, 1e6, &i, 8)).map_err(|e| e.to_string())?;
        let secs = start.elapsed().as_secs_f64();
        let scale = rep.error_scale.abs();
        worst_scale = worst_scale.max(scale);
        slowest = slowest.max(secs);
        let fast = enumerate_w(&f, 1e4, &i).map_err(|e| e.to_string())?;
        let slow = brute_force_w(&f, 1e4, &i).map_err(|e| e.to_string())?;
        let case_ok = scale <= 10.0 && secs < 30.0 && fast == slow;
        if !case_ok {
            println!(
                "  case ({a},{b},{c}) on [{lo},{hi}]: scale {scale:.3}, {secs:.1}s, oracle match {}",
                fast == slow
            );
        }
        ok &= case_ok;
    }
    Ok((ok, format!("max |emp-pred|/(sqrt(D) log^2 D) = {worst_scale:.3}, slowest case {slowest:.2}s")))
}

/// Sign case of `(A, B, C)`, indexed 0..6.
fn sign_case(a: f64, b: f64, c: f64) -> usize {
    let d = b * b - 4.0 * a * c;
    match () {
        _ if a == 0.0 && b > 0.0 => 0,
        _ if a == 0.0 => 1,
        _ if a < 0.0 => 2,
        _ if d > 0.0 => 3,
        _ if d < 0.0 => 4,
        _ => 5,
    }
}

fn random_instance(rng: &mut ChaCha8Rng, case: usize) -> (RealForm, f64, ProjInterval) {
    loop {
        let mut k = |lo: i32, hi: i32| rng.random_range(lo..=hi) as f64;
        let (a, b, c) = match case {
            0 => (0.0, k(1, 4), k(-4, 4)),
            1 => (0.0, k(-4, -1), k(-4, 4)),
            2 => (k(-4, -1), k(-4, 4), k(1, 6)),
            3 => (k(1, 4), k(-4, 4), k(-6, -1)),
            4 => {
                let a = k(1, 4);
                let b = k(-4, 4);
                (a, b, (b * b / (4.0 * a)).floor() + k(1, 4))
            }
            _ => {
                let a = k(1, 3);
                let r = k(-3, 3);
                (a, -2.0 * a * r, a * r * r)
            }
        };
        if a == 0.0 && b == 0.0 {
            continue;
        }
        let delta = rng.random_range(10.0..=1e4f64).round();
        let lo = rng.random_range(-6.0..6.0f64);
        let w = rng.random_range(0.1..6.0f64);
        let i = match rng.random_range(0..8) {
            0 if a != 0.0 => ProjInterval::new(f64::NEG_INFINITY, lo),
            1 if a != 0.0 => ProjInterval::new(lo, f64::INFINITY),
            2 if a != 0.0 => ProjInterval::wrapping(lo + w, lo),
            _ => ProjInterval::new(lo, lo + w),
        };
        let Ok(i) = i else { continue };
        let Ok(f) = RealForm::new(a, b, c) else { continue };
        if sign_case(a, b, c) != case || validate(&f, &i).is_err() {
            continue;
        }
        if brute_force_cost(&f, delta, &i).map_or(true, |cost| cost > 5e7) {
            continue;
        }
        return (f, delta, i);
    }
}

fn c2_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut per_case = [0usize; 6];
    let mut mismatches = 0;
    for k in 0..200 {
        let case = k % 6;
        let (f, delta, i) = random_instance(&mut rng, case);
        per_case[case] += 1;
        let fast = enumerate_w(&f, delta, &i).map_err(|e| e.to_string())?;
        let slow = brute_force_w(&f, delta, &i).map_err(|e| e.to_string())?;
        if fast != slow {
            mismatches += 1;
            println!("  mismatch: {f:?} delta={delta} {i:?}: {} vs {}", fast.len(), slow.len());
        }
    }
    Ok((mismatches == 0, format!("200 instances, per sign case {per_case:?}, {mismatches} mismatches")))
}

fn geodesic_histogram(g: &IntForm, delta: u64, arc: Arc) -> Result<Vec<u64>, String> {
    let kind = build_param(g, Mode::CmOnGeodesic).map_err(|e| e.to_string())?.coord_kind();
    let recs = enum_cm_on_geodesic(g, delta, Some(arc)).map_err(|e| e.to_string())?;
    let coords: Vec<f64> = recs.iter().map(|r| r.coord).collect();
    let (lo, hi) = match arc {
        Arc::Theta { lo, hi } | Arc::Y { lo, hi } => (lo, hi),
    };
    equal_mass_histogram(kind, &coords, lo, hi, 8).map_err(|e| e.to_string())
}

fn c3_geodesic_equidistribution() -> Outcome {
    let cases = [
        (form(1, 0, -1), Arc::Theta { lo: 0.5, hi: 2.5 }),
        (form(0, 1, 0), Arc::Y { lo: 0.5, hi: 2.0 }),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (g, arc) in cases {
        let big = max_ratio_deviation(&geodesic_histogram(&g, 1_000_000, arc)?);
        let small = max_ratio_deviation(&geodesic_histogram(&g, 10_000, arc)?);
        ok &= big <= 0.03 && big < small;
        detail.push(format!("{g}: {:.2}% at 1e6, {:.2}% at 1e4", 100.0 * big, 100.0 * small));
    }
    Ok((ok, detail.join("; ")))
}

fn c4_angle_equidistribution() -> Outcome {
    let recs = enum_rm_through_point(&form(1, 0, 1), 1_000_000).map_err(|e| e.to_string())?;
    let angles: Vec<f64> = recs.iter().map(|r| r.angle).collect();
    let counts = equal_mass_histogram(CoordKind::Angle, &angles, 0.0, PI, 8).map_err(|e| e.to_string())?;
    let dev = max_mean_deviation(&counts);
    Ok((dev <= 0.03, format!("{} curves, max deviation from mean {:.2}%", recs.len(), 100.0 * dev)))
}

fn fundamental_near(target: i64) -> i64 {
    (0..).map(|k| target - k).find(|&d| is_fundamental_discriminant(d)).expect("fundamental discriminants are dense")
}

fn c5_ball_trend() -> Outcome {
    let mut stats = Vec::new();
    for target in [-10_000i64, -100_000, -1_000_000] {
        let d = fundamental_near(target);
        let recs = enum_cm_in_ball(pt(0.0, 1.0), 1.0, DiscSelect::Exactly(d as i128)).map_err(|e| e.to_string())?;
        let angles: Vec<f64> = recs.iter().filter_map(|r| r.angle).collect();
        let counts = equal_mass_histogram(CoordKind::Angle, &angles, 0.0, TAU, 8).map_err(|e| e.to_string())?;
        let chi = chi_square_uniform(&counts);
        stats.push((d, angles.len(), chi, chi / angles.len().max(1) as f64));
    }
    let ok = stats.windows(2).all(|w| w[1].3 < w[0].3);
    let raw_decreasing = stats.windows(2).all(|w| w[1].2 < w[0].2);
    let detail = stats
        .iter()
        .map(|(d, n, chi, per)| format!("D={d}: N={n}, chi2={chi:.2}, chi2/N={per:.2e}"))
        .collect::<Vec<_>>()
        .join("; ");
    Ok((ok, format!("{detail}; raw chi2 decreasing: {raw_decreasing}")))
}

fn c6_closed_counts() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for g in [form(1, 1, -1), form(1, 0, -2), form(1, 0, -3), form(1, 1, -3), form(1, 1, -4)] {
        let cg = closed_geodesic(&g).map_err(|e| e.to_string())?;
        let count = cm_count_closed(&cg, 1_000_000).map_err(|e| e.to_string())?;
        let rel = count.empirical as f64 / count.predicted - 1.0;
        ok &= rel.abs() <= 0.05;
        detail.push(format!("D={}: {} vs {:.0} ({:+.2}%)", cg.disc, count.empirical, count.predicted, 100.0 * rel));
    }
    Ok((ok, detail.join("; ")))
}

fn c7_cycle_values() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for g in [form(1, 1, -1), form(1, 0, -2)] {
        let v = cycle_value(&One, &g, &[1_000_000]).map_err(|e| e.to_string())?;
        let rel = v.estimates[0].re / v.length - 1.0;
        ok &= rel.abs() <= 0.03;
        detail.push(format!("f=1 on {g}: {:.4} vs length {:.4} ({:+.2}%)", v.estimates[0].re, v.length, 100.0 * rel));
    }
    let v = cycle_value(&JInvariant, &form(1, 1, -1), &[1_000_000]).map_err(|e| e.to_string())?;
    let (er, ei) = (v.estimates[0].re, v.estimates[0].im);
    let rel = (er - v.classical_re).hypot(ei - v.classical_im) / v.classical_re.hypot(v.classical_im);
    ok &= rel <= 0.05;
    detail.push(format!(
        "f=j on D=5: {er:.1}{ei:+.1}i vs {:.1}{:+.1}i ({:.2}%)",
        v.classical_re,
        v.classical_im,
        100.0 * rel
    ));
    Ok((ok, detail.join("; ")))
}

fn c8_arith_sums() -> Outcome {
    let s = sum_phi(100_000).map_err(|e| e.to_string())?;
    let ratio = s.exact * PI * PI / 3e10;
    let s1 = sum_phi_over_n(100_000).map_err(|e| e.to_string())?;
    let err1 = (s1.exact - 6.0 / (PI * PI) * 1e5).abs();
    let delta = 1e4f64;
    let budget = 5.0 * delta.sqrt() * delta.ln().powi(2);
    let log_branch = weighted_sqrt_sum(1.0, 5.0, 0.25, 4.0, delta).map_err(|e| e.to_string())?;
    let atan_branch = weighted_sqrt_sum(2.0, -3.0, 0.25, 2.0, delta).map_err(|e| e.to_string())?;
    let ok = (0.999..=1.001).contains(&ratio)
        && err1 < 5.0 * 1e5f64.ln()
        && log_branch.residual().abs() <= budget
        && atan_branch.residual().abs() <= budget;
    Ok((
        ok,
        format!(
            "sum_phi ratio {ratio:.6}; phi/n error {err1:.3}; weighted residuals {:.1} (log), {:.1} (atan) vs {budget:.0}",
            log_branch.residual(),
            atan_branch.residual()
        ),
    ))
}

fn jacobian_defect(p: PointH, z: PointH) -> f64 {
    let h = 1e-5 * z.y;
    let s = |x: f64, y: f64| dist(p, pt(x, y));
    let t = |x: f64, y: f64| ang_p(p, pt(x, y)).unwrap();
    let d = |g: &dyn Fn(f64, f64) -> f64, dx: f64, dy: f64| {
        let at = |k: f64| g(z.x + k * dx, z.y + k * dy);
        (8.0 * (at(1.0) - at(-1.0)) - (at(2.0) - at(-2.0))) / (12.0 * h)
    };
    let (sx, sy) = (d(&s, h, 0.0), d(&s, 0.0, h));
    let (tx, ty) = (d(&t, h, 0.0), d(&t, 0.0, h));
    (sx * ty - sy * tx + 1.0 / (z.y * z.y * dist(p, z).sinh())).abs()
}

/// `∫∫ dx dy / y²` over the part of `ball(z0, s0)` with `x` in `[x_lo, x_hi]`,
/// as an iterated quadrature.
fn disk_area(z0: PointH, s0: f64, x_lo: f64, x_hi: f64) -> f64 {
    let b = ball(z0, s0).unwrap();
    let (cx, cy, r) = (b.center.x, b.center.y, b.radius_euclid);
    integrate(
        |x| {
            let h = (r * r - (x - cx) * (x - cx)).max(0.0).sqrt();
            integrate(|y| 1.0 / (y * y), cy - h, cy + h, 1e-14, 1e-13)
        },
        x_lo.max(cx - r),
        x_hi.min(cx + r),
        1e-13,
        1e-12,
    )
}

fn c9_geometry() -> Outcome {
    let p = pt(0.3, 1.2);
    let mut worst = 0.0f64;
    for i in 0..40 {
        for j in 0..25 {
            let s = 0.3 + 1.2 * i as f64 / 39.0;
            // directions away from the vertical through p
            let th = 0.15 + (PI - 0.3) * j as f64 / 24.0 + if j % 2 == 0 { 0.0 } else { PI };
            let (sin_t, cos_t) = th.sin_cos();
            // w = tanh(s/2) e^{iθ} in the disk, sent to H by w ↦ i(1+w)/(1−w)
            let w = (0.5 * s).tanh();
            let (u, v) = (w * cos_t, w * sin_t);
            let den = (1.0 - u) * (1.0 - u) + v * v;
            let (zx, zy) = (-2.0 * v / den, (1.0 - w * w) / den);
            let z = pt(p.x + p.y * zx, p.y * zy);
            worst = worst.max(jacobian_defect(p, z));
        }
    }
    let mut area_err = 0.0f64;
    for (z0, s0) in [(pt(0.0, 1.0), 1.0), (pt(3.0, 2.0), 0.5), (pt(-1.5, 0.4), 1.7)] {
        let full = disk_area(z0, s0, f64::NEG_INFINITY, f64::INFINITY);
        let right = disk_area(z0, s0, z0.x, f64::INFINITY);
        let left = disk_area(z0, s0, f64::NEG_INFINITY, z0.x);
        for (got, (t1, t2)) in [(full, (0.0, TAU)), (right, (0.0, PI)), (left, (PI, TAU))] {
            let want = sector_area(z0, s0, t1, t2).map_err(|e| e.to_string())?;
            area_err = area_err.max((got / want - 1.0).abs());
        }
    }
    let delta = 10_000u64;
    let got: BTreeSet<(i128, i128, i128)> = enum_cm_at_height(1, delta, -1.0, 2.0)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|p| p.form.coefficients())
        .collect();
    let mut want = BTreeSet::new();
    for n in 1i128.. {
        if 4 * n.pow(4) > delta as i128 {
            break;
        }
        for m in -n..=2 * n {
            if gcd(m, n) == 1 {
                want.insert((n * n, -2 * m * n, m * m + n * n));
            }
        }
    }
    let farey_ok = got == want;
    let ok = worst < 1e-6 && area_err < 1e-6 && farey_ok;
    Ok((
        ok,
        format!(
            "jacobian defect {worst:.2e} on 1000 points; sector area rel err {area_err:.2e}; Im=1 line {} points, Farey match {farey_ok}",
            got.len()
        ),
    ))
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn c10_pell_and_gamma() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for d in 2..=500i128 {
        if is_square(d) || !matches!(d % 4, 0 | 1) {
            continue;
        }
        let sol = pell_fundamental(d).map_err(|e| e.to_string())?;
        checked += 1;
        if !(sol.satisfies() && sol.is_minimal()) {
            bad.push(d);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0010);
    let mut forms = 0;
    let mut gamma_bad = 0;
    while forms < 50 {
        let (a, b, c): (i128, i128, i128) =
            (rng.random_range(-40..=40), rng.random_range(-40..=40), rng.random_range(-40..=40));
        let d = b * b - 4 * a * c;
        if d <= 0 || is_square(d) || gcd(gcd(a, b), c) != 1 {
            continue;
        }
        let g = form(a, b, c);
        let cg = closed_geodesic(&g).map_err(|e| e.to_string())?;
        forms += 1;
        let (na, nb, nc) = g.coefficients();
        let fixed = cg.transformed_form() == (na.into(), nb.into(), nc.into());
        if cg.determinant() != 1.into() || !fixed {
            gamma_bad += 1;
        }
    }
    Ok((
        bad.is_empty() && gamma_bad == 0,
        format!("pell: {checked} discriminants, failures {bad:?}; gamma: {forms} forms, {gamma_bad} failures"),
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("linnik battery at 1e6", c1_linnik_battery),
        ("enumerate_w equals brute force", c2_oracle_equivalence),
        ("equidistribution along geodesics", c3_geodesic_equidistribution),
        ("angle equidistribution through i", c4_angle_equidistribution),
        ("ball histogram trend", c5_ball_trend),
        ("closed geodesic counts", c6_closed_counts),
        ("cycle values", c7_cycle_values),
        ("arithmetic sums", c8_arith_sums),
        ("geometry", c9_geometry),
        ("pell and gamma", c10_pell_and_gamma),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failures += usize::from(!pass);
        println!(
            "{} criterion {:>2} ({name}): {detail} [{:.1}s]",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            start.elapsed().as_secs_f64()
        );
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
