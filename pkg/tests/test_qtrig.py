import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from qhermite.qcore import QDomainError, QParameter, TruncationConfig
from qhermite.qtrig import (
    TrigConvention,
    lattice_trig,
    n_q,
    q_cos,
    q_sin,
    trig_orthogonality_residual,
    trig_orthogonality_sum,
    validate_conventions,
    validated_convention,
)

Q13 = QParameter(1.3)
C = TrigConvention.C

# oracles.trig(x, 1.3**-2, odd) at 60 digits
SERIES_VALUES = {
    0.3: (0.88311309949317332, 0.6904503806051608),
    1.0: (-0.098104580501169891, 1.0242415703431788),
    2.0: (-1.2331293375140811, -1.7810077991871349),
    -1.7: (-1.1306659494221993, 0.90608900098324834),
}
# oracles.trig_lattice(m, 1.3, odd) for m = -3, -1, 3, 5
LATTICE_COS = {-3: 0.94378847396541762, -1: 0.56600556792743847,
               3: -0.028921403550050639, 5: -6.9057864975276386e-6}
LATTICE_SIN = {-3: 0.49272650391076145, -1: 1.1223461508443487,
               3: -0.0061504384665644721, 5: -5.0250039514149078e-7}
# oracles.n_q
N_Q_13 = 0.54127947834351925
N_Q_50 = 0.99960015987207676


def test_validator_selects_unique_convention():
    worst = validate_conventions()
    passing = [c for c, w in worst.items() if w < 1e-6]
    assert passing == [C]
    assert validated_convention() is C
    assert not math.isfinite(worst[TrigConvention.A]) or worst[TrigConvention.A] > 1
    assert not math.isfinite(worst[TrigConvention.B]) or worst[TrigConvention.B] > 1


@pytest.mark.parametrize("x", sorted(SERIES_VALUES))
def test_series_values(x):
    cos_ref, sin_ref = SERIES_VALUES[x]
    assert q_cos(x, Q13.p4) == pytest.approx(cos_ref, rel=1e-14)
    assert q_sin(x, Q13.p4) == pytest.approx(sin_ref, rel=1e-14)


def test_values_at_zero():
    assert q_cos(0.0, 0.3) == 1.0
    assert q_sin(0.0, 0.3) == 0.0


@given(st.floats(min_value=-6, max_value=6), st.floats(min_value=0.05, max_value=0.95),
       st.sampled_from(list(TrigConvention)))
def test_parity(x, b, conv):
    assert q_cos(-x, b, conv) == q_cos(x, b, conv)
    assert q_sin(-x, b, conv) == -q_sin(x, b, conv)


@settings(max_examples=30)
@given(st.floats(min_value=-5, max_value=5), st.floats(min_value=0.05, max_value=0.9))
def test_truncation_stability(x, b):
    loose = TruncationConfig(series_tol=1e-10)
    tight = TruncationConfig(series_tol=5e-11)
    for f in (q_cos, q_sin):
        a, c = f(x, b, C, loose), f(x, b, C, tight)
        assert abs(a - c) <= 10 * 5e-11 * max(1.0, abs(c))


def test_conventions_differ():
    x, b = 0.8, 0.3
    a = q_cos(x, b, TrigConvention.A)
    bb = q_cos(x, b, TrigConvention.B)
    c = q_cos(x, b, TrigConvention.C)
    assert len({a, bb, c}) == 3
    # A keeps its coefficients in the nominal base, C in the half base
    assert c == pytest.approx(q_cos(x, math.sqrt(b), TrigConvention.A), rel=1e-15)


def test_domain_errors():
    with pytest.raises(QDomainError):
        q_cos(1.0, 1.2)
    with pytest.raises(QDomainError):
        q_sin(1.0, 0.0)
    with pytest.raises(QDomainError):
        lattice_trig("tan", 0, 3, Q13)
    with pytest.raises(QDomainError):
        lattice_trig("cos", 3, 0, Q13)


# oracles.trig at the float points x = 1.3**(2m), base 1.3**-4, 200 digits
FLOAT_POINT_COS = {2: 0.35221843670222431, 3: -0.028921403550044996, 4: 0.00076558819426749184}


@pytest.mark.parametrize("m", sorted(FLOAT_POINT_COS))
def test_cancelling_arguments(m):
    # the largest term exceeds the value by 1e3..1e6 here
    assert q_cos(1.3 ** (2 * m), 1.3 ** -4) == pytest.approx(FLOAT_POINT_COS[m], rel=1e-13)


@pytest.mark.parametrize("method", ["series", "recurrence"])
def test_lattice_values(method):
    cos = lattice_trig("cos", -3, 5, Q13, C, method=method)
    sin = lattice_trig("sin", -3, 5, Q13, C, method=method)
    for m, ref in LATTICE_COS.items():
        assert cos[m + 3] == pytest.approx(ref, rel=1e-12)
    for m, ref in LATTICE_SIN.items():
        assert sin[m + 3] == pytest.approx(ref, rel=1e-12)


def test_recurrence_agrees_with_series_deep_in_the_tail():
    for kind in ("cos", "sin"):
        a = lattice_trig(kind, -5, 30, Q13, C, method="series")
        b = lattice_trig(kind, -5, 30, Q13, C, method="recurrence")
        live = a != 0
        assert np.all(np.abs(a[live] - b[live]) <= 1e-11 * np.abs(a[live]))


def test_lattice_table_is_read_only():
    tab = lattice_trig("cos", 0, 4, Q13)
    with pytest.raises(ValueError):
        tab[0] = 1.0


def test_precision_mode_lattice():
    cfg = TruncationConfig(precision=40)
    with mpmath.workdps(60):
        q = mpmath.mpf(1.3)
        x, b = q ** 10, q ** -4
    val = q_cos(x, b, C, cfg)
    assert isinstance(val, mpmath.mpf)
    assert float(val) == pytest.approx(LATTICE_COS[5], rel=1e-12)


def test_n_q():
    assert n_q(Q13) == pytest.approx(N_Q_13, rel=1e-14)
    assert n_q(QParameter(50.0)) == pytest.approx(N_Q_50, rel=1e-13)
    assert n_q(QParameter(50.0)) == pytest.approx(1.0, abs=1e-3)


def test_n_q_from_lattice_sum():
    total, _ = trig_orthogonality_sum(0, 0, "cos", Q13)
    assert 1 / math.sqrt(total) == pytest.approx(n_q(Q13), rel=1e-6)


def test_cos_diagonal_k0():
    total, _ = trig_orthogonality_sum(0, 0, "cos", Q13)
    assert total == pytest.approx(1 / N_Q_13 ** 2, rel=1e-8)


def test_sin_diagonal_k1():
    total, _ = trig_orthogonality_sum(1, 1, "sin", Q13)
    assert total == pytest.approx(Q13.q ** 2 / N_Q_13 ** 2, rel=1e-8)


def test_named_residuals():
    assert trig_orthogonality_residual(0, 5, "cos", Q13) < 1e-8
    scale = Q13.q ** 4 / n_q(Q13) ** 2
    assert trig_orthogonality_residual(2, 2, "sin", Q13) < 1e-8 * scale


@pytest.mark.parametrize("q", [1.2, 1.5, 2.0])
@pytest.mark.parametrize("kind", ["cos", "sin"])
def test_orthogonality_grid(q, kind):
    qp = QParameter(q)
    scale = 1 / n_q(qp) ** 2
    worst = max(trig_orthogonality_residual(k, l, kind, qp, C) / (q ** (2 * l) * scale)
                for k in range(-3, 4) for l in range(-3, 4))
    assert worst < 1e-8


def test_rejected_convention_fails_orthogonality():
    r = trig_orthogonality_residual(0, 0, "cos", Q13, TrigConvention.A, TruncationConfig(lattice_cutoff=8))
    assert not r < 1e-3


def test_oracle_lattice_sum_agrees():
    # slow high-precision cross-check of one off-diagonal pair
    ref = oracles.trig_orthogonality(0, 1, 1.3, 0, cutoff=20)
    total, _ = trig_orthogonality_sum(0, 1, "cos", Q13)
    assert abs(total - float(ref)) < 1e-12
