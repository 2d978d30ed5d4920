import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from turanlab import constants as C
from turanlab.errors import ClassMismatch, ParamOutOfRange
from turanlab.families import FamilySpec, generate
from turanlab.inequalities import IDS, PROVEN_IDS, check, required_norms, sweep
from turanlab.polycore import make_root_poly

INF = math.inf


@pytest.mark.parametrize("n", [1, 4, 9])
def test_turan_monomial(n):
    r = check("INEQ-2", make_root_poly([0.0] * n))
    assert r.lhs == pytest.approx(n, rel=1e-13)
    assert r.rhs == pytest.approx(math.sqrt(n) / 6, rel=1e-13)
    assert r.ratio == pytest.approx(6 * math.sqrt(n), rel=1e-12)
    assert r.passed


@pytest.mark.parametrize("n", [1, 2, 6, 15])
def test_sharp_equality(n):
    P = make_root_poly([-1.0] * n)
    assert check("INEQ-5", P).ratio == pytest.approx(1, abs=1e-9)
    for p in (1, 2, 5):
        assert check("INEQ-6", P, p=p).ratio == pytest.approx(1, abs=1e-8)


def test_ineq5_linear():
    r = check("INEQ-5", make_root_poly([0.0]))
    assert r.lhs == pytest.approx(1, rel=1e-14) and r.rhs == pytest.approx(0.5, rel=1e-14)
    assert r.passed


def test_bp2_quadratic():
    r = check("INEQ-BP2", make_root_poly([-1, 1]))
    assert r.lhs == pytest.approx(2) and r.rhs == pytest.approx(0.5)
    assert r.passed


def test_c2_special_case():
    P = make_root_poly([-0.4, 0.1, 0.8, 0.9])
    r = check("INEQ-C2", P, p=1, q=INF)
    sup = check("INEQ-BP2", P).rhs / C.BP2(4)
    assert r.rhs == pytest.approx(C.A_inf(4) * sup, rel=1e-12)
    assert r.lhs > math.sqrt(4) / math.sqrt(2 * math.e) * sup


@given(st.lists(st.floats(-1, 1), min_size=1, max_size=8))
def test_q_infinity_consistency(rs):
    P = make_root_poly(rs)
    assert check("INEQ-7", P, q=INF).same_outcome(check("INEQ-1", P))
    assert check("INEQ-8", P, q=INF).same_outcome(check("INEQ-5", P))


def test_q_infinity_consistency_halfdisk():
    P = generate(FamilySpec("random-halfdisk", 6, seed=4))
    assert check("INEQ-7", P, q=INF).same_outcome(check("INEQ-1", P))


def test_errors():
    H = make_root_poly([0.5j], "HalfDisk")
    with pytest.raises(ClassMismatch):
        check("INEQ-2", H)
    P = make_root_poly([0.1, 0.2])
    with pytest.raises(ParamOutOfRange):
        check("INEQ-7", P, q=1)
    with pytest.raises(ParamOutOfRange):
        check("INEQ-6", P, p=INF)
    with pytest.raises(ParamOutOfRange):
        check("INEQ-4", P, p=4, q=0.5)
    with pytest.raises(ParamOutOfRange):
        check("INEQ-4", P, p=0.5, q=INF)
    with pytest.raises(ParamOutOfRange):
        check("INEQ-BP2", make_root_poly([0.3]))
    with pytest.raises(ParamOutOfRange):
        check("INEQ-99", P)


def test_statistics_have_no_verdict():
    P = make_root_poly([0.2, -0.5, 0.9])
    assert check("INEQ-3", P, p=2).passed is None
    assert check("INEQ-4", P, p=2, q=4).passed is None


@given(st.lists(st.floats(-1, 1), min_size=2, max_size=8), st.randoms(use_true_random=False))
def test_permutation_invariance(rs, rnd):
    perm = list(rs)
    rnd.shuffle(perm)
    for iid, p, q in [("INEQ-6", 2, None), ("INEQ-QT", 1, 2), ("INEQ-10", None, 3)]:
        a = check(iid, make_root_poly(rs), p, q)
        b = check(iid, make_root_poly(perm), p, q)
        assert a.to_dict() == b.to_dict()


@given(st.lists(st.floats(-1, 1), min_size=2, max_size=10))
def test_proven_segment(rs):
    P = make_root_poly(rs)
    for iid in PROVEN_IDS:
        for p in (1, 2):
            for q in (1.5, 5):
                assert check(iid, P, p, q).passed


@pytest.mark.parametrize("p,q", [(1, 1), (2, 2), (2, 4)])
def test_ineq4_on_qn_bounded(p, q):
    ns = list(range(5, 101, 5))
    vals = [check("INEQ-4", generate(FamilySpec("qn", n)), p, q).ratio for n in ns]
    slope = np.polyfit(np.log(ns), np.log(vals), 1)[0]
    assert min(vals) > 0 and abs(slope) <= 0.05


def test_required_norms_nonempty():
    for iid in IDS:
        assert required_norms(iid, 4, 2.0, 3.0)


def test_sweep_equality_family():
    res = sweep(["INEQ-5"], "qn", range(1, 11))
    assert len(res.reports) == 10 and not res.failures
    assert res.summaries[0].min_ratio > 1


def test_sweep_records_errors_and_is_reproducible():
    kw = dict(ids=["INEQ-6", "INEQ-7"], family="random-segment", n_range=range(1, 4), p_grid=[2, INF], q_grid=[2], trials=2, seed=9)
    a = sweep(**kw)
    b = sweep(**kw)
    assert [r.to_dict() for r in a.reports] == [r.to_dict() for r in b.reports]
    assert {e.error for e in a.errors} == {"ParamOutOfRange"}
    assert not sweep(**kw, admissible_only=True).errors
