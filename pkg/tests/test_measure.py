import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from turanlab.errors import ParamOutOfRange
from turanlab.families import FamilySpec, generate
from turanlab.measure import (
    DistributionFunction,
    layer_cake_check,
    lemma9_chain,
    lemma9_check,
    sublevel_measure_halfdisk,
    sublevel_measure_segment,
    sublevel_measures,
)
from turanlab.polycore import make_root_poly


@pytest.mark.parametrize("n", [1, 3, 8])
@pytest.mark.parametrize("alpha", [0.01, 0.1, 1.0])
def test_monomial_closed_form(n, alpha):
    e = sublevel_measure_segment(make_root_poly([0.0] * n), alpha)
    assert e.measure == pytest.approx(2 + alpha - math.sqrt(alpha**2 + 4), abs=1e-9)
    assert e.bound == 2 * alpha and e.passed


def test_halfdisk_examples():
    assert sublevel_measure_halfdisk(make_root_poly([0.0] * 4, "HalfDisk"), 1.0).measure == pytest.approx(0, abs=1e-12)
    assert sublevel_measure_halfdisk(make_root_poly([1j] * 3, "HalfDisk"), 0.5).measure == pytest.approx(0, abs=1e-12)
    e = sublevel_measure_halfdisk(make_root_poly([1j], "HalfDisk"), 2.0)
    assert e.measure == pytest.approx(2, abs=1e-12) and e.passed


def test_segment_variant_rejects_halfdisk():
    with pytest.raises(ParamOutOfRange):
        sublevel_measure_segment(make_root_poly([0.5j], "HalfDisk"), 0.1)
    with pytest.raises(ParamOutOfRange):
        sublevel_measures(make_root_poly([0.5]), [0.0], "segment")


@given(st.lists(st.floats(-1, 1), min_size=1, max_size=12))
def test_monotone_in_alpha(rs):
    m = sublevel_measures(make_root_poly(rs), [0.01, 0.1, 0.5, 1.0], "segment")
    assert all(a <= b + 1e-9 for a, b in zip(m, m[1:]))


def test_layer_cake_linear():
    lhs, rhs = layer_cake_check(make_root_poly([0.0]), 2.0)
    assert lhs == pytest.approx(2 / 3, rel=1e-12) and rhs == pytest.approx(2 / 3, rel=1e-8)


def test_distribution_function_linear():
    h = DistributionFunction(make_root_poly([0.0]))
    assert h(np.array([0.25, 0.5]))[:] == pytest.approx([1.5, 1.0], abs=1e-10)


@pytest.mark.parametrize("roots,q", [([-1, 1], 2.0), ([0.3, -0.6, 0.1], 1.01), ([0.5j, 0.2 + 0.3j], 3.0)])
def test_layer_cake_identity(roots, q):
    tag = "HalfDisk" if any(isinstance(r, complex) for r in roots) else "Segment"
    lhs, rhs = layer_cake_check(make_root_poly(roots, tag), q)
    assert rhs == pytest.approx(lhs, rel=1e-4)


def test_lemma_examples():
    r = lemma9_check(generate(FamilySpec("qn", 5)), 2.0, "SegmentK2")
    assert r.passed
    r = lemma9_check(make_root_poly([1j], "HalfDisk"), 3.0, "HalfDiskK70e")
    assert r.passed and r.lhs > 10 * r.rhs
    with pytest.raises(ParamOutOfRange):
        lemma9_check(make_root_poly([0.1]), 1.0)


def test_lemma_trivial_branch():
    r = lemma9_check(make_root_poly([0.0]), 2.0, "SegmentK2")
    assert r.extra["trivial_branch"] and r.extra["trivial_branch_pass"]


@pytest.mark.parametrize("seed", range(5))
def test_lemma_chain(seed):
    P = generate(FamilySpec("random-segment", 12, seed=seed))
    a, b, c = lemma9_chain(P, 2.5)
    assert a <= b * (1 + 1e-9) and b < c
