import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from slowdec import (
    AtZeroError,
    PoissonRepresentation,
    ProductEvaluator,
    RadiusError,
    SequenceSpec,
    SlowdecError,
    build_sequence,
    favorov_log,
    from_points,
    poisson_log,
    poisson_log_lower,
)
from slowdec.product_eval import log_abs_sin_pi


def test_single_zero():
    seq = from_points([1.0], radius=math.inf)
    assert favorov_log(seq, 2.0) == pytest.approx(0.0, abs=1e-15)  # |1 - 2/1| = 1
    assert favorov_log(seq, 3.0) == pytest.approx(math.log(2.0), abs=1e-15)
    assert favorov_log(seq, 0.0) == 0.0


def test_at_zero_and_radius_errors():
    seq = from_points([1.0, -1.0], radius=10.0)
    with pytest.raises(AtZeroError):
        favorov_log(seq, 1.0)
    with pytest.raises(RadiusError):
        favorov_log(seq, 2.0, R=20.0)
    with pytest.raises(SlowdecError):
        favorov_log(seq, 2.0, R=-1.0)


points = st.lists(
    st.tuples(st.floats(-20, 20), st.floats(-20, 20)).filter(lambda p: abs(complex(*p)) > 1e-2),
    min_size=1, max_size=25)


@given(points, st.floats(-25, 25), st.floats(-25, 25))
def test_finite_identity(pts, x, y):
    vals = np.array([complex(a, b) for a, b in pts])
    z = complex(x, y)
    if np.min(np.abs(vals - z)) < 1e-6:
        return
    seq = from_points(vals, radius=math.inf)
    exact = math.fsum(m * math.log(abs(1 - z / v)) for v, m in zip(seq.values, seq.multiplicities))
    assert favorov_log(seq, z) == pytest.approx(exact, abs=1e-9)
    assert ProductEvaluator(seq).log_abs(z).value == pytest.approx(exact, abs=1e-9)


@given(points, points, st.floats(-25, 25), st.floats(0.5, 25))
def test_union_is_additive(p, q, x, y):
    a = np.array([complex(*t) for t in p])
    b = np.array([complex(*t) for t in q])
    z = complex(x, y)
    if np.min(np.abs(np.concatenate((a, b)) - z)) < 1e-6:
        return
    fa = favorov_log(from_points(a, radius=math.inf), z)
    fb = favorov_log(from_points(b, radius=math.inf), z)
    fab = favorov_log(from_points(np.concatenate((a, b)), radius=math.inf), z)
    assert fab == pytest.approx(fa + fb, abs=1e-9)


@given(points, st.floats(-25, 25), st.floats(-25, 25), st.floats(0.1, 50), st.floats(0.1, 50))
def test_cutoff_only_adds_far_zeros(pts, x, y, r1, r2):
    # terms with both distances under R are frozen once R passes them
    vals = np.array([complex(*t) for t in pts])
    z = complex(x, y)
    if np.min(np.abs(vals - z)) < 1e-6:
        return
    seq = from_points(vals, radius=100.0)
    lo, hi = sorted((r1, r2))
    reach = np.maximum(np.abs(vals), np.abs(vals - z)).max()
    if lo >= reach:
        assert favorov_log(seq, z, R=lo) == pytest.approx(favorov_log(seq, z, R=hi), abs=1e-9)


def test_lattice_cutoff_error_is_small():
    seq = build_sequence(SequenceSpec("lattice"), 1e5)
    z = 0.5
    exact = float(log_abs_sin_pi(np.array([z]))[0] - math.log(math.pi * z))
    assert abs(favorov_log(seq, z, R=1e5) - exact) < 1e-4


@pytest.fixture(scope="module")
def lattice_poisson():
    seq = build_sequence(SequenceSpec("lattice"), 1e4)
    ev = ProductEvaluator(seq, "even")
    return PoissonRepresentation(ev, tail_cut=2e3, quadrature_step=1.0)


def sinc(z):
    return float(log_abs_sin_pi(np.array([z]))[0] - math.log(math.pi * abs(z)))


@pytest.mark.parametrize("z", [3 + 1j, 10.5 + 5j, -20 + 2j, 0.5 + 0.25j])
def test_poisson_upper(lattice_poisson, z):
    r = lattice_poisson.log_abs(z)
    assert abs(r.value - sinc(z)) <= r.error_estimate


@pytest.mark.parametrize("z", [3 - 1j, 10.5 - 5j])
def test_poisson_lower_by_reflection(lattice_poisson, z):
    lo = lattice_poisson.log_abs_lower(z)
    up = lattice_poisson.log_abs(z.conjugate())
    assert lo.value == pytest.approx(up.value, abs=1e-12)
    assert abs(lo.value - sinc(z)) <= lo.error_estimate


def test_poisson_imaginary_axis_growth(lattice_poisson):
    # for the sine, ln|phi(iy)| = pi y - ln(2 pi y) + o(1)
    y = 20.0
    r = lattice_poisson.log_abs(1j * y)
    asymptotic = math.pi * y - math.log(2 * math.pi * y)
    assert abs(r.value - asymptotic) <= r.error_estimate + 1e-6
    assert abs(sinc(1j * y) - asymptotic) < 1e-20


def test_poisson_argument_errors(lattice_poisson):
    with pytest.raises(SlowdecError):
        lattice_poisson.log_abs(3.0)
    with pytest.raises(SlowdecError):
        lattice_poisson.log_abs_lower(3 + 1j)
    seq = build_sequence(SequenceSpec("lattice"), 1e3)
    with pytest.raises(RadiusError):
        PoissonRepresentation(ProductEvaluator(seq, "even"), tail_cut=1e3)
    with pytest.raises(SlowdecError):
        poisson_log(seq, 2.0, tail_cut=100.0)
    c = from_points([1 + 1j, 2 - 1j], radius=10.0)
    with pytest.raises(SlowdecError):
        poisson_log(c, 1j, tail_cut=2.0)


def test_one_shot_helpers_agree(lattice_poisson):
    seq = build_sequence(SequenceSpec("lattice"), 1e3)
    a = poisson_log(seq, 2 + 1j, tail_cut=400.0)
    b = poisson_log_lower(seq, 2 - 1j, tail_cut=400.0)
    assert a.value == pytest.approx(b.value, abs=1e-12)
    assert abs(a.value - sinc(2 + 1j)) <= a.error_estimate
