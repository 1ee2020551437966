"""Smoke test for the `linnik` Python module.

Build and install it first:

    pip install --no-build-isolation ./crates/py
    python3 python/smoke_test.py
"""

import cmath
import math
import sys

import linnik


def check(cond, what):
    if not cond:
        raise AssertionError(what)
    print(f"ok  {what}")


def main():
    w = linnik.wset(1, 0, 1, 2, -1, 1)
    check(w == [(-1, 1), (0, 1), (1, 1)], "wset on m^2 + n^2 with delta 2")
    check(linnik.wset(1, 0, 1, 0, -1, 1) == [], "wset with delta 0 is empty")

    for a, b, c in [(1, 1, 1), (2, -1, 3)]:
        for m, n in linnik.wset(a, b, c, 500, -2, 3):
            v = a * m * m + b * m * n + c * n * n
            assert 0 < v <= 500 and math.gcd(m, n) == 1 and -2 <= m / n <= 3
    check(True, "wset members satisfy the defining conditions")

    wrapped = linnik.wset(1, 0, -2, 300, 2, -2, wrap=True)
    check(all(abs(m / n) >= 2 for m, n in wrapped) and wrapped, "wrapping interval")

    r = linnik.equid_report(1, 0, 1, 1e5, -1, 1)
    rel = abs(r["empirical"] - r["predicted"]) / r["predicted"]
    check(rel < 0.01 and sum(r["counts"]) == r["empirical"], "equid_report near the main term")
    p = linnik.predicted_count(1, 0, 1, 1e5, -1, 1)
    check(abs(p - r["predicted"]) < 1e-9 * p, "predicted_count agrees with the report")

    cm = linnik.cm_on_geodesic(1, 0, -1, 7)
    check([d["disc"] for d in cm] == [-7, -3, -4, -3, -7], "CM points on |z| = 1")
    check(all(abs(abs(d["z"]) - 1) < 1e-12 for d in cm), "CM points lie on the unit circle")

    perp = linnik.rm_perp_geodesic(1, 1, -1, 200, 0.5, 2.5)
    check(perp and all(d["disc"] > 0 for d in perp), "RM curves perpendicular to a geodesic")
    through = linnik.rm_through_point(1, 0, 1, 100)
    check(all(abs(abs(1j - d["center"]) - d["radius"]) < 1e-9 for d in through), "RM curves pass through i")

    c = linnik.cycle(1, 1, -1, "one", [10_000, 100_000])
    est = c["estimates"][-1][2]
    check(abs(est - c["quadrature"]) / abs(c["quadrature"]) < 1e-3, "cycle average of 1")
    check(abs(c["quadrature"] - 2 * math.log((3 + math.sqrt(5)) / 2)) < 1e-9, "cycle length 2 log eps")
    cj = linnik.cycle(1, 1, -1, "j", [10_000])
    check(cmath.isfinite(cj["quadrature"]), "cycle integral of j is finite")

    check(linnik.pell(5) == (3, 1), "Pell solution for D = 5")
    t, u = linnik.pell(61)
    check(t * t - 61 * u * u == 4, "Pell solution for D = 61")
    check(abs(linnik.j(1j) - 1728) < 1e-8, "j(i) = 1728")
    rho = complex(-0.5, math.sqrt(3) / 2)
    check(abs(linnik.j(rho)) < 1e-6, "j(rho) = 0")

    for bad in [
        lambda: linnik.wset(1, 0, -1, 10, 0, 2),
        lambda: linnik.wset(1, 0, 1, 10, 1, -1),
        lambda: linnik.cm_on_geodesic(1, 1, -1, 100),
        lambda: linnik.cycle(1, 0, -1),
        lambda: linnik.cycle(1, 1, -1, "k"),
        lambda: linnik.pell(4),
        lambda: linnik.j(complex(0, -1)),
    ]:
        try:
            bad()
        except ValueError:
            continue
        raise AssertionError("expected ValueError")
    check(True, "bad input raises ValueError")

    try:
        linnik.wset(1, 0, 1, 1e20, 0, 1)
    except RuntimeError:
        check(True, "oversized work raises RuntimeError")
    else:
        raise AssertionError("expected RuntimeError")

    print("all smoke checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
