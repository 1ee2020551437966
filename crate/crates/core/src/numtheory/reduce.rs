use crate::error::{Error, Result};
use crate::hyperbolic::PointH;

/// Integer 2×2 matrix `[[a, b], [c, d]]`.
pub type Mat2 = [[i64; 2]; 2];

fn mul(x: Mat2, y: Mat2) -> Option<Mat2> {
    let e = |i: usize, j: usize| -> Option<i64> {
        x[i][0].checked_mul(y[0][j])?.checked_add(x[i][1].checked_mul(y[1][j])?)
    };
    Some([[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]])
}

/// Moves `z` into the closed fundamental domain `|Re z| ≤ 1/2, |z| ≥ 1` and
/// returns the matrix `γ` with `z' = γ·z`.
pub fn sl2z_reduce(z: PointH) -> Result<(PointH, Mat2)> {
    if !(z.y > 0.0) {
        return Err(Error::NotInUpperHalfPlane(z.y));
    }
    if !z.x.is_finite() || !z.y.is_finite() {
        return Err(Error::NonFinite("point to reduce"));
    }
    let over = || Error::NumericalInstability("reduction matrix overflow".into());
    let mut w = z;
    let mut g: Mat2 = [[1, 0], [0, 1]];
    for _ in 0..10_000 {
        let n = (w.x + 0.5).floor();
        if n != 0.0 {
            if n.abs() > 9e15 {
                return Err(over());
            }
            let n = n as i64;
            w.x -= n as f64;
            g = mul([[1, -n], [0, 1]], g).ok_or_else(over)?;
        }
        let r2 = w.x * w.x + w.y * w.y;
        if r2 < 1.0 - 1e-13 {
            w = PointH { x: -w.x / r2, y: w.y / r2 };
            g = mul([[0, -1], [1, 0]], g).ok_or_else(over)?;
        } else {
            return Ok((w, g));
        }
    }
    Err(Error::NumericalInstability("reduction did not terminate in 10⁴ steps".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let (w, g) = sl2z_reduce(PointH { x: 5.0, y: 1.0 }).unwrap();
        assert_eq!((w.x, w.y), (0.0, 1.0));
        assert_eq!(g, [[1, -5], [0, 1]]);
        let (w, _) = sl2z_reduce(PointH { x: 0.5, y: 0.5 }).unwrap();
        assert!(w.x.abs() < 1e-15 && (w.y - 1.0).abs() < 1e-15);
        let (w, g) = sl2z_reduce(PointH { x: 0.4, y: 2.0 }).unwrap();
        assert_eq!((w.x, w.y, g), (0.4, 2.0, [[1, 0], [0, 1]]));
    }

    proptest! {
        #[test]
        fn lands_in_domain(x in -50.0..50.0f64, y in 1e-4..10.0f64) {
            let z = PointH { x, y };
            let (w, g) = sl2z_reduce(z).unwrap();
            prop_assert_eq!(g[0][0] * g[1][1] - g[0][1] * g[1][0], 1);
            prop_assert!(w.x.abs() <= 0.5 + 1e-12);
            prop_assert!(w.x.hypot(w.y) >= 1.0 - 1e-12);
            let v = z.mobius_int(g);
            prop_assert!((v.x - w.x).abs() < 1e-10 * (1.0 + w.x.abs()));
            prop_assert!((v.y - w.y).abs() < 1e-10 * w.y);
        }
    }
}
