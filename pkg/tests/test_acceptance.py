"""Acceptance criteria 1-9, each printing one PASS/FAIL line."""
import math
import time

import numpy as np
import pytest

from turanlab import constants as C
from turanlab.extremal import SearchConfig, empirical_constant_table, loglog_slope, minimize_ratio
from turanlab.families import FamilySpec, generate, qn_closed_norms, task_seed
from turanlab.inequalities import PROVEN_IDS, RULES, check, sweep
from turanlab.measure import layer_cake_check, sublevel_measure_halfdisk, sublevel_measure_segment
from turanlab.norms import NormSpec, Weight, lp_integral
from turanlab.polycore import make_root_poly

INF = math.inf
ALPHAS = (0.01, 0.1, 0.5, 1.0)


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} | {detail}")
        return ok

    return emit


def test_criterion_1_beta_oracles(report):
    t0 = time.perf_counter()
    worst = 0.0
    for n in range(1, 21):
        P = generate(FamilySpec("qn", n))
        for p in (0.5, 1, 2, 3, 7):
            for k in (0, 1):
                got = lp_integral(P, NormSpec(p, Weight.NONE, k))
                worst = max(worst, abs(got / qn_closed_norms(n, p, k) - 1))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-8 and elapsed < 10
    assert report(1, ok, f"max rel err {worst:.2e} (<=1e-8), {elapsed:.2f}s (<10s)")


def test_criterion_2_sharp_equality(report):
    worst5 = worst6 = 0.0
    for n in range(1, 31):
        P = generate(FamilySpec("one-plus-x-pow-n", n))
        worst5 = max(worst5, abs(check("INEQ-5", P).ratio - 1))
        for p in (1, 1.5, 2, 3, 5, 7, 10):
            worst6 = max(worst6, abs(check("INEQ-6", P, p=p).ratio - 1))
    ok = worst5 <= 1e-7 and worst6 <= 1e-7
    assert report(2, ok, f"max |ratio-1|: INEQ-5 {worst5:.2e}, INEQ-6 {worst6:.2e} (<=1e-7)")


def test_criterion_3_random_suite(report):
    trials = 167  # 167 * 60 degrees > 10^4 polynomials per class
    grids = dict(n_range=range(1, 61), p_grid=[1, 2, 5, INF], q_grid=[1.5, 2, 5, INF], trials=trials, admissible_only=True)
    halfdisk_ids = [i for i in PROVEN_IDS if not RULES[i].segment_only]
    t0 = time.perf_counter()
    seg = sweep(PROVEN_IDS, "random-segment", seed=101, **grids)
    half = sweep(halfdisk_ids, "random-halfdisk", seed=202, **grids)
    elapsed = time.perf_counter() - t0
    violations = len(seg.failures) + len(half.failures)
    errors = len(seg.errors) + len(half.errors)
    checks = len(seg.reports) + len(half.reports)
    covered = {r.inequality_id for r in seg.reports} | {r.inequality_id for r in half.reports}
    ok = violations == 0 and errors == 0 and covered == set(PROVEN_IDS) and elapsed < 600
    detail = f"{checks} checks on {60 * trials} polys/class, {violations} violations, {errors} errors, {elapsed:.0f}s (<600s)"
    assert report(3, ok, detail)


def test_criterion_4_order_optimality(report):
    ns = list(range(10, 101))
    Qs = [generate(FamilySpec("qn", n)) for n in ns]
    lines, ok = [], True
    for p in (0.5, 1, 2, 3):
        v0 = [lp_integral(Q, NormSpec(p, Weight.NONE, 0)) for Q in Qs]
        v1 = [lp_integral(Q, NormSpec(p, Weight.NONE, 1)) for Q in Qs]
        v2 = [lp_integral(Q, NormSpec(p, Weight.NONE, 2)) for Q in Qs]
        bounds = [qn_closed_norms(n, p, 2).value for n in ns]
        s0, s1, s2 = loglog_slope(ns, v0), loglog_slope(ns, v1), loglog_slope(ns, v2)
        ok &= abs(s0 + 0.5) <= 0.05
        ok &= abs(s1 - (p - 1) / 2) <= 0.05
        ok &= s2 <= p - 0.5 + 0.05 and all(v <= b for v, b in zip(v2, bounds))
        lines.append(f"p={p}: {s0:+.3f}/{s1:+.3f}/{s2:+.3f}")
    assert report(4, ok, "slopes d0/d1/d2 " + "; ".join(lines))


def test_criterion_5_constants(report):
    a1 = max(abs(C.A_p(1, n) - 1) for n in range(1, 101))
    gap = max(abs(C.A_p(1e4, n) - C.A_inf(n)) / C.A_inf(n) for n in range(1, 21))
    k = abs(70 * math.e / (4 / (27 * C.A**2)) - 1)
    c1 = max(abs(C.C_pq(1, INF, n) / C.A_inf(n) - 1) for n in range(2, 101))
    ok = a1 <= 1e-12 and gap < 1e-3 and k <= 1e-14 and c1 <= 1e-12
    assert report(5, ok, f"|A_1-1| {a1:.1e}, A_p gap {gap:.1e}, 70e {k:.1e}, C_1inf {c1:.1e}")


def test_criterion_6_measure_bounds(report):
    seg_bad = half_bad = 0
    worst_seg = worst_half = 0.0
    for t in range(1000):
        n = 1 + t % 40
        P = generate(FamilySpec("random-segment", n, seed=task_seed(61, t)))
        H = generate(FamilySpec("random-halfdisk", n, seed=task_seed(62, t)))
        for a in ALPHAS:
            e = sublevel_measure_segment(P, a)
            seg_bad += not e.passed
            worst_seg = max(worst_seg, e.measure / a)
            h = sublevel_measure_halfdisk(H, a)
            half_bad += not h.measure < C.K_HALFDISK * a
            worst_half = max(worst_half, h.measure / a)
    analytic = max(
        abs(sublevel_measure_segment(make_root_poly([0.0] * n), a).measure - (2 + a - math.sqrt(a * a + 4)))
        for n in (1, 2, 5, 20)
        for a in ALPHAS
    )
    ok = seg_bad == 0 and half_bad == 0 and analytic <= 1e-9
    detail = (
        f"segment violations {seg_bad} (max m/alpha {worst_seg:.3f} vs 2), "
        f"half-disk violations {half_bad} (max m/alpha {worst_half:.2f} vs {C.K_HALFDISK:.1f}), x^n err {analytic:.1e}"
    )
    assert report(6, ok, detail)


def test_criterion_7_layer_cake(report):
    worst = 0.0
    for t in range(100):
        rng = np.random.default_rng(task_seed(71, t))
        n = int(rng.integers(1, 21))
        kind = "random-segment" if t % 2 == 0 else "random-halfdisk"
        Q = generate(FamilySpec(kind, n, seed=task_seed(72, t)))
        q = float(rng.choice([1.5, 2.0, 3.0, 5.0]))
        lhs, rhs = layer_cake_check(Q, q)
        worst = max(worst, abs(rhs - lhs) / lhs)
    assert report(7, worst <= 1e-4, f"max relative difference {worst:.2e} (<=1e-4)")


def _grid_minimum_n1():
    """Closed-form one-root ratios scanned on 10^5-point parameter grids."""
    a = np.linspace(-1, 1, 100_001)
    m = int(math.isqrt(100_000))
    r, th = np.meshgrid(np.linspace(0, 1, m), np.linspace(0, math.pi, m))
    z = (r * np.exp(1j * th)).ravel()
    sup_half = np.maximum(np.abs(1 - z), np.abs(1 + z))
    q7 = 2.0
    const7 = 6 ** (1 / q7) * (1 - 1 / q7) ** (1 / q7) * C.A ** (1 + 1 / q7)
    return {
        ("INEQ-1", "Segment", None, None): np.min(1 / (C.A * (1 + np.abs(a)))),
        ("INEQ-1", "HalfDisk", None, None): np.min(1 / (C.A * sup_half)),
        ("INEQ-2", "Segment", None, None): np.min(6 / (1 + np.abs(a))),
        ("INEQ-5", "Segment", None, None): np.min(1 / (C.A_inf(1) * (1 + np.abs(a)))),
        ("INEQ-3", "Segment", 2.0, None): np.min(math.sqrt(2) / np.sqrt(((1 - a) ** 3 + (1 + a) ** 3) / 3)),
        ("INEQ-7", "HalfDisk", None, q7): np.min(1 / (const7 * np.sqrt(2 / 3 + 2 * np.abs(z) ** 2))),
    }


def test_criterion_8_extremal_soundness(report):
    worst_gap = 0.0
    for (iid, cls, p, q), grid_min in _grid_minimum_n1().items():
        res = minimize_ratio(SearchConfig(iid, 1, p, q, cls, starts=8, seed=8))
        worst_gap = max(worst_gap, abs(res.best_ratio - grid_min) / grid_min)
    lowest, where = INF, None
    for iid in PROVEN_IDS:
        rule = RULES[iid]
        classes = ["Segment"] if rule.segment_only else ["Segment", "HalfDisk"]
        p = 2.0 if rule.uses_p else None
        q = 3.0 if rule.uses_q else None
        for cls in classes:
            for n in (2, 3):
                res = minimize_ratio(SearchConfig(iid, n, p, q, cls, starts=3, max_iters_per_start=600, seed=n))
                if res.best_ratio < lowest:
                    lowest, where = res.best_ratio, f"{iid}/{cls}/n={n}"
    ok = worst_gap <= 1e-3 and lowest >= 1 - 1e-6
    assert report(8, ok, f"n=1 search vs grid max rel gap {worst_gap:.1e} (<=1e-3); lowest searched ratio {lowest:.6f} at {where}")


def test_criterion_9_empirical_constants(report):
    ns = [2, 4, 8, 16]
    lines, ok = [], True
    for iid, p, q in (("INEQ-3", 2.0, None), ("INEQ-4", 1.0, 1.0)):
        table = empirical_constant_table(iid, ns, p, q, starts=6, seed=9)
        vals = [v for _, v in table]
        slope = loglog_slope(ns, vals)
        ok &= all(v > 0 for v in vals) and abs(slope) <= 0.1
        lines.append(f"{iid} minima {', '.join(f'{v:.3f}' for v in vals)} slope {slope:+.3f}")
    assert report(9, ok, "; ".join(lines) + " (|slope|<=0.1)")
