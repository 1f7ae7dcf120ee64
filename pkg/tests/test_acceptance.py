"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line through the ``criterion`` fixture; the lines
are repeated in the terminal summary.  Tolerances and runtime budgets are the
stated ones; nothing is relaxed here.
"""
import math
import time

import numpy as np

from normmax import calibrate, mc, specfn, verify
from normmax.distance import scaled_distance_table, sup_distance
from normmax.norming import AuxiliaryKind, LogSize, Method, exact_b, location, norming_pair, parse_aux, parse_method

from reference_tables import P_HAT, TABLE1, TABLE2, TABLE2_N, TABLE3, TABLE3_N

AF = AuxiliaryKind.FISHER_TIPPETT


def worst(pairs):
    """Largest |got - expected| and where it happened."""
    return max(pairs, key=lambda t: abs(t[1] - t[2]))


def test_criterion_01_table3(criterion):
    t0 = time.perf_counter()
    cells = []
    for name, expected in TABLE3.items():
        m = parse_method(name)
        for label, e in zip(TABLE3_N, expected):
            cells.append(((name, label), location(m, LogSize.parse(label)), e))
    elapsed = time.perf_counter() - t0
    tol = 1e-5 + 1e-12
    bad = [c for c in cells if abs(c[1] - c[2]) > tol]
    where, got, e = worst(cells)
    ok = len(cells) == 36 and not bad and elapsed < 1.0
    criterion(1, "table 3 constants", ok, f"max err {abs(got - e):.2e} at {where}, {elapsed:.2f}s")
    assert ok, bad


def test_criterion_02_table2(criterion):
    t0 = time.perf_counter()
    rows = [(parse_method(m), parse_aux(a)) for m, a in TABLE2]
    table = scaled_distance_table([LogSize.parse(s) for s in TABLE2_N], rows, tol=1e-8, jobs=1)
    elapsed = time.perf_counter() - t0
    cells = [
        ((key, TABLE2_N[j]), float(table[i, j]), e)
        for i, (key, expected) in enumerate(TABLE2.items())
        for j, e in enumerate(expected)
    ]
    bad = [c for c in cells if abs(c[1] - c[2]) > 2e-4]
    ok = len(cells) == 30 and not bad and elapsed < 30.0
    detail = f"{30 - len(bad)}/30 cells within 2e-4, {elapsed:.1f}s"
    if bad:
        detail += "; off: " + ", ".join(f"{w} got {g:.4f} vs {e:.4f}" for w, g, e in bad)
    criterion(2, "table 2 scaled distances", ok, detail)
    assert ok, bad


def test_criterion_03_table1(criterion):
    t0 = time.perf_counter()
    cells = []
    for label, (c, c_tilde) in TABLE1.items():
        n0 = LogSize.parse(label)
        cells.append((("C", label), verify.theorem_constant(n0), c))
        cells.append((("C_tilde", label), verify.theorem_constant_tilde(n0), c_tilde))
    elapsed = time.perf_counter() - t0
    # the printed values carry two decimals; allow float noise on the 0.01 edge
    bad = [c for c in cells if abs(c[1] - c[2]) > 0.01 + 1e-12]
    ok = len(cells) == 18 and not bad and elapsed < 1.0
    detail = f"{18 - len(bad)}/18 within 0.01, {elapsed:.2f}s"
    if bad:
        detail += "; off: " + ", ".join(f"{w} got {g:.4f} vs {e:.2f}" for w, g, e in bad)
    criterion(3, "table 1 constants", ok, detail)
    assert ok, bad


def test_criterion_04_rate_bound(criterion):
    t0 = time.perf_counter()
    results = []
    for n0 in (5, 16, 10**4):
        c = verify.theorem_constant(n0)
        for n in (n0, 10 * n0, 10**3, LogSize.pow10(10), LogSize.pow10(30)):
            size = LogSize.of(n) if isinstance(n, int) else n
            rep = sup_distance(size, norming_pair(Method.EXACT, AF, size))
            results.append((n0, size.label, rep.scaled, c))
    elapsed = time.perf_counter() - t0
    bad = [r for r in results if not r[2] < r[3]]
    tightest = min(results, key=lambda r: r[3] - r[2])
    ok = len(results) == 15 and not bad and elapsed < 60.0
    criterion(4, "scaled distance below C(n0)", ok,
              f"tightest margin {tightest[3] - tightest[2]:.4f} at n0={tightest[0]}, n={tightest[1]}, {elapsed:.1f}s")
    assert ok, bad


def test_criterion_05_hall_pair(criterion):
    certs = verify.hall_certificates(range(1, 61))
    values = [c.lhs for c in certs]
    upper = all(c.passed for c in certs)
    lower = all(v >= 0.33 for v in values[2:])
    ok = len(certs) == 60 and upper and lower
    criterion(5, "Hall pair scaled distance in [0.33, 3)", ok,
              f"max {max(values):.4f}, min over k>=3 {min(values[2:]):.4f}")
    assert ok


def test_criterion_06_sharpness(criterion):
    floor = verify.sharpness_floor((20, 40, 60))
    ok = 0.119 <= floor <= 0.122
    criterion(6, "sharpness floor", ok, f"max scaled distance {floor:.5f}")
    assert ok


def test_criterion_07_square_sandwich(criterion):
    grid = verify.prop4_grid(200)
    certs = verify.prop4_certificates(grid)
    ok = len(grid) == 200 and len(certs) == 400 and all(c.passed for c in certs)
    criterion(7, "b_n^2 sandwich", ok, f"min margin {min(c.margin for c in certs):.3e}")
    assert ok


def test_criterion_08_ratio_increasing(criterion):
    grid = verify.prop4_grid(200)
    ratios = [exact_b(n) ** 2 / n.log_n for n in grid]
    steps = np.diff(ratios)
    ok = bool(np.all(steps > 0))
    criterion(8, "b_n^2/log n increasing", ok, f"min step {steps.min():.3e}")
    assert ok


def test_criterion_09_decomposition(criterion):
    samples = []
    for n in verify.DIFE_SIZES:
        pair = norming_pair(Method.EXACT, AF, n)
        for x in verify.DIFE_POINTS:
            samples.append(verify.decomposition_sample(n, pair, x))
    identity = [abs(s.i_n + math.log(s.n.n * specfn.survival(
        norming_pair(Method.EXACT, AF, s.n).scale * s.x + exact_b(s.n)))) for s in samples]
    ok = len(samples) == 15 and max(identity) <= 1e-8 and all(s.inside for s in samples)
    criterion(9, "integral identity and remainder bounds", ok, f"max identity error {max(identity):.2e}")
    assert ok


def test_criterion_10_proof_constants(criterion):
    certs = verify.proof_constants_check()
    ok = len(certs) == 6 and all(c.passed for c in certs)
    detail = ", ".join(f"{c.name}={c.lhs:.4f}@{c.argument:.4f}" for c in certs if c.name.endswith(".max"))
    criterion(10, "proof constants", ok, detail)
    assert ok


def test_criterion_11_rates(criterion):
    certs = verify.rate_certificates(range(2, 61))
    ok = len(certs) == 3 and all(c.passed for c in certs)
    detail = ", ".join(f"{c.name} last {c.lhs:.3g} vs first {c.rhs:.3g}" for c in certs)
    criterion(11, "asymptotic rate trends", ok, detail)
    assert ok


def test_criterion_12_calibration(criterion):
    got = {}
    elapsed = 0.0
    for m in sorted(P_HAT):
        t0 = time.perf_counter()
        got[m] = calibrate.p_hat(m).p_hat
        if m == 10**5:
            elapsed = time.perf_counter() - t0
    bad = {m: v for m, v in got.items() if abs(v - P_HAT[m]) > 0.01 + 1e-12}
    ok = not bad and elapsed < 120.0
    criterion(12, "calibration p_hat", ok,
              ", ".join(f"m=10^{round(math.log10(m))}: {v:.4f}" for m, v in got.items()) + f", {elapsed:.1f}s")
    assert ok, bad


def test_criterion_13_monte_carlo(criterion):
    reps = 10**6
    pair = norming_pair(Method.EXACT, AF, 10)
    t0 = time.perf_counter()
    rep = mc.simulate(mc.SimConfig(LogSize.of(10), reps, 1, pair), jobs=1)
    elapsed = time.perf_counter() - t0
    d = sup_distance(10, pair).sup
    gap = abs(rep.ks_distance - d)
    ok = gap <= 5 / math.sqrt(reps) and elapsed < 30.0
    criterion(13, "Monte Carlo KS vs analytic", ok,
              f"KS {rep.ks_distance:.5f} vs {d:.5f}, gap {gap:.2e} <= {5 / math.sqrt(reps):.0e}, {elapsed:.1f}s")
    assert ok


def test_criterion_14_special_functions(criterion):
    rel = []
    for k in range(1, 101):
        p = 10.0**-k
        x = specfn.std_normal_quantile_upper(p)
        rel.append(abs(specfn.survival(x) / p - 1.0))
    lambert = []
    for t in (1e-6, 1.0, math.e, 10.0, 100 / (2 * math.pi), 1e6, 1e100):
        w = specfn.lambert_w0(t)
        lambert.append(abs(w * math.exp(w) - t) / max(t, 1.0))
    x = np.logspace(-3, math.log10(40.0), 200)
    m = specfn.mills_ratio(x)
    sandwich = bool(np.all(specfn.mills_lower(x) < m) and np.all(m < specfn.mills_upper(x)))
    ok = max(rel) <= 1e-12 and max(lambert) <= 1e-14 and sandwich
    criterion(14, "special functions", ok,
              f"quantile {max(rel):.1e}, Lambert {max(lambert):.1e}, sandwich {'strict' if sandwich else 'broken'}")
    assert ok
