"""q-trigonometric functions on the exponential lattice.

``cos(x; b)`` and ``sin(x; b)`` are entire power series in ``x``.  Three
coefficient conventions are implemented, all taking the nominal base
``b = q**-4`` of the oscillator:

* ``A``: ``(-1)^k b^{k(k+1)} x^{2k} / (b;b)_{2k}``
* ``B``: ``(-1)^k b^{k^2} x^{2k} / (b;b)_{2k}``
* ``C``: convention ``A`` in the half base ``sqrt(b) = q**-2``, i.e. the
  Hahn-Exton normalisation where ``b`` is the base of the underlying
  q-Bessel function.

Only one of them makes the lattice sums

    sum_n q^{-2n} f(q^{-2(k+n)}) f(q^{-2(l+n)}) = q^{2l} delta_kl / N_q^2

hold; :func:`validated_convention` finds it numerically (it is ``C``).

On the lattice ``x = q^{2m}`` the series cancel catastrophically for large
``m``: the largest term is about ``q^{2 m^2}`` while the value is about
``q^{-2 m^2}``.  :func:`q_cos`/:func:`q_sin` therefore switch to mpmath with
enough digits, and :func:`lattice_trig` uses a stable backward recurrence
for convention ``C``.
"""
from __future__ import annotations

import enum
import functools
import math
from typing import Optional

import mpmath
import numpy as np

from .qcore import (
    DEFAULT_CONFIG,
    CompensatedSum,
    ConvergenceError,
    QDomainError,
    QParameter,
    TruncationConfig,
    qpoch_infinite,
)

__all__ = [
    "TrigConvention",
    "q_cos",
    "q_sin",
    "lattice_trig",
    "n_q",
    "trig_orthogonality_sum",
    "trig_orthogonality_residual",
    "validate_conventions",
    "validated_convention",
]

# cancellation ratio (largest term / result) beyond which mpmath takes over
CANCELLATION_LIMIT = 1e3
# results smaller than this are reported as 0.0
_FLOOR_DIGITS = 340


class TrigConvention(enum.Enum):
    A = "A"
    B = "B"
    C = "C"

    def series_base(self, base):
        return base ** 0.5 if self is TrigConvention.C else base

    def exponent(self, k: int) -> int:
        return k * k if self is TrigConvention.B else k * (k + 1)


def _terms_float(x, b, conv, odd, cfg):
    """Float series; returns (value, largest |term|)."""
    acc = CompensatedSum()
    term = x / (1 - b) if odd else 1.0
    biggest = abs(term)
    quiet = 0
    k = 0
    while True:
        acc.add(term)
        biggest = max(biggest, abs(term))
        if abs(term) <= cfg.series_tol * abs(acc.total):
            quiet += 1
            if quiet == 2:
                return acc.value, biggest
        else:
            quiet = 0
        k += 1
        if k >= cfg.max_terms:
            raise ConvergenceError("q-trig series did not converge", acc.value)
        j = 2 * k + odd
        step = b ** (conv.exponent(k) - conv.exponent(k - 1))
        term = -term * step * x * x / ((1 - b ** (j - 1)) * (1 - b ** j))
        if not math.isfinite(term):
            return math.nan, math.inf


def _terms_mp(x, b, conv, odd, tol, max_terms):
    """Same series in the ambient mpmath precision."""
    s = mpmath.mpf(0)
    term = x / (1 - b) if odd else mpmath.mpf(1)
    biggest = abs(term)
    if term == 0:
        return s, s
    k = 0
    x2 = x * x
    prev = term
    while True:
        s += term
        biggest = max(biggest, abs(term))
        # once past the peak, stop when the absolute tail is below tol
        if k > 2 and abs(term) < tol * biggest and abs(term) <= abs(prev):
            return s, biggest
        prev = term
        k += 1
        if k >= max_terms:
            raise ConvergenceError("q-trig series did not converge", s)
        j = 2 * k + odd
        step = b ** (conv.exponent(k) - conv.exponent(k - 1))
        bj = b ** (j - 1)
        term = -term * step * x2 / ((1 - bj) * (1 - bj * b))


def _eval_precise(make_args, conv, odd, cfg, guess_digits):
    """Evaluate with mpmath, raising the precision until the result is good.

    ``make_args`` is called inside the working precision and returns the
    exact ``(x, series_base)`` pair, so lattice points can be built from
    ``q`` at full precision.
    """
    digits = int(guess_digits) + 30
    if cfg.precision is not None:
        digits = max(digits, cfg.precision)
    for _ in range(8):
        with mpmath.workdps(digits):
            x, b = make_args()
            tol = mpmath.mpf(10) ** (-digits)
            value, biggest = _terms_mp(x, b, conv, odd, tol, cfg.max_terms)
            big = float(mpmath.log10(biggest)) if biggest else 0.0
            if value == 0:
                lost = digits
            else:
                lost = big - float(mpmath.log10(abs(value)))
            # enough digits either for 20 correct ones, or to certify
            # the value sits below the double-precision floor
            if digits >= lost + 20 or digits >= big + _FLOOR_DIGITS:
                if value == 0 or float(mpmath.log10(abs(value))) < -_FLOOR_DIGITS:
                    return mpmath.mpf(0) if cfg.precision else 0.0
                return +value if cfg.precision else float(value)
            digits = int(min(max(lost + 30, 1.5 * digits), big + _FLOOR_DIGITS + 10))
    raise ConvergenceError("q-trig evaluation could not reach the target precision")


def _q_trig(x, base, conv, cfg, odd):
    if not 0 < base < 1:
        raise QDomainError(f"base must lie in (0, 1), got {base!r}")
    conv = validated_convention() if conv is None else TrigConvention(conv)
    if cfg.precision is None:
        b = conv.series_base(base)
        value, biggest = _terms_float(float(x), b, conv, odd, cfg)
        if biggest == 0:
            return 0.0  # sine at x == 0
        if math.isfinite(value) and value != 0 and biggest / abs(value) <= CANCELLATION_LIMIT:
            return value
        guess = math.log10(biggest) if math.isfinite(biggest) and biggest > 0 else 0.0
    else:
        guess = 0.0

    def make_args():
        b = mpmath.mpf(base)
        return mpmath.mpf(x), (mpmath.sqrt(b) if conv is TrigConvention.C else b)

    return _eval_precise(make_args, conv, odd, cfg, guess)


def q_cos(x, base, conv: Optional[TrigConvention] = None, cfg: TruncationConfig = DEFAULT_CONFIG):
    """q-cosine ``cos(x; base)``; ``conv=None`` means the validated convention."""
    return _q_trig(x, base, conv, cfg, odd=0)


def q_sin(x, base, conv: Optional[TrigConvention] = None, cfg: TruncationConfig = DEFAULT_CONFIG):
    """q-sine ``sin(x; base)``, the odd companion of :func:`q_cos`."""
    return _q_trig(x, base, conv, cfg, odd=1)


# -- lattice tables -------------------------------------------------------


@functools.lru_cache(maxsize=4096)
def _lattice_series(kind, m, qp, conv, cfg):
    """``f(q^{2m}; q^{-4})`` with the lattice point built at full precision."""
    odd = 1 if kind == "sin" else 0
    q = qp.q
    if m <= 0:
        # argument <= 1: mild cancellation, float is fine unless flagged
        return _q_trig(q ** (2 * m), qp.p4, conv, cfg, odd)

    def make_args():
        qq = mpmath.mpf(q)
        b = qq ** -2 if conv is TrigConvention.C else qq ** -4
        return qq ** (2 * m), b

    # largest term ~ q^{2m^2} (C) or q^{m^2} (A, B); a decaying value is
    # about as small as the largest term is large
    big = (2 if conv is TrigConvention.C else 1) * m * m * math.log10(q)
    return _eval_precise(make_args, conv, odd, cfg, min(2 * big, big + _FLOOR_DIGITS))


def _miller(kind, qp, m_max, seed_lo, seed_0):
    """Minimal solution of the lattice q-difference equation for m = 0..m_max.

    With ``p = q^-2`` and ``y_m = f(q^{2m})`` (``f(x)/x`` for the sine),

        y_m = (1 + a - p^{2-2m}) y_{m-1} - a y_{m-2},   a = 1/p (cos), p (sin)

    The decaying solution is dominated in the forward direction, so it is
    generated backwards from far beyond ``m_max`` and normalised on the
    directly summed values at ``m = -1`` and ``m = 0``.
    """
    q = qp.q
    p = qp.p2
    a = 1.0 / p if kind == "cos" else p
    # beyond m_zero the values (~ q^{-2 m^2}) are below the double range
    m_zero = int(math.sqrt(_FLOOR_DIGITS / (2 * math.log10(q)))) + 2
    if m_max > m_zero:
        out = np.zeros(m_max + 1)
        out[:m_zero + 1] = _miller(kind, qp, m_zero, seed_lo, seed_0)
        return out
    top = m_max + 12
    while q ** (4 * top) < 1e40:
        top += 4
    y = np.zeros(top + 3)  # y[i] holds m = i - 1
    y[top + 2] = 0.0
    y[top + 1] = 1e-300
    for m in range(top + 1, 0, -1):
        A = 1 + a - p ** (2 - 2 * m)
        y[m - 1] = (A * y[m] - y[m + 1]) / a
        if abs(y[m - 1]) > 1e200:
            y[m - 1:] *= 1e-200
    if kind == "sin":
        # back to sin values: y holds f(x)/x
        y = y * q ** (2.0 * (np.arange(top + 3) - 1))
    y = y / math.hypot(y[0], y[1])
    scale = seed_lo * y[0] + seed_0 * y[1]
    return y[1:m_max + 2] * scale


@functools.lru_cache(maxsize=256)
def _lattice_cached(kind, m_lo, m_hi, qp, conv, cfg, method):
    vals = np.zeros(m_hi - m_lo + 1)
    if method == "recurrence" and conv is TrigConvention.C and m_hi > 0:
        neg_lo = min(m_lo, -1)
        for m in range(neg_lo, 1):
            if m >= m_lo:
                vals[m - m_lo] = _lattice_series(kind, m, qp, conv, cfg)
        seed_lo = _lattice_series(kind, -1, qp, conv, cfg)
        seed_0 = _lattice_series(kind, 0, qp, conv, cfg)
        pos = _miller(kind, qp, m_hi, seed_lo, seed_0)
        for m in range(max(m_lo, 1), m_hi + 1):
            vals[m - m_lo] = pos[m]
    else:
        for m in range(m_lo, m_hi + 1):
            vals[m - m_lo] = _lattice_series(kind, m, qp, conv, cfg)
    vals.setflags(write=False)
    return vals


def lattice_trig(kind: str, m_lo: int, m_hi: int, qp: QParameter,
                 conv: Optional[TrigConvention] = None,
                 cfg: TruncationConfig = DEFAULT_CONFIG,
                 method: str = "auto") -> np.ndarray:
    """Array of ``cos(q^{2m}; q^{-4})`` (or ``sin``) for ``m = m_lo..m_hi``.

    ``method="series"`` sums the power series at exact lattice points in
    high precision; ``"recurrence"`` (the default for convention C) uses the
    backward q-difference recurrence.  Values below the double range are 0.
    """
    if kind not in ("cos", "sin"):
        raise QDomainError(f"kind must be 'cos' or 'sin', got {kind!r}")
    if m_hi < m_lo:
        raise QDomainError("empty lattice range")
    conv = validated_convention() if conv is None else TrigConvention(conv)
    if method == "auto":
        method = "recurrence" if conv is TrigConvention.C and cfg.precision is None else "series"
    if method not in ("series", "recurrence"):
        raise QDomainError(f"unknown method {method!r}")
    return _lattice_cached(kind, int(m_lo), int(m_hi), qp, conv, cfg, method)


def n_q(qp: QParameter, cfg: TruncationConfig = DEFAULT_CONFIG):
    """``N_q = (q^-2; q^-4)_inf / (q^-4; q^-4)_inf``."""
    return qpoch_infinite(qp.p2, qp.p4, cfg) / qpoch_infinite(qp.p4, qp.p4, cfg)


def trig_orthogonality_sum(k: int, l: int, kind: str, qp: QParameter,
                           conv: Optional[TrigConvention] = None,
                           cfg: TruncationConfig = DEFAULT_CONFIG):
    """``sum_n q^{-2n} f(q^{-2(k+n)}) f(q^{-2(l+n)})`` over a widening window.

    Starts from ``n in [-L, L]`` and doubles ``L`` (up to ``8L``) until the
    boundary terms on both tails are below ``series_tol`` times the scale.
    Returns ``(total, cutoff_used)``.
    """
    q = qp.q
    cutoff = cfg.lattice_cutoff
    scale = q ** (k + l)  # diagonal size, up to the 1/N_q^2 constant
    while True:
        n = np.arange(-cutoff, cutoff + 1)
        lo = min(-(k + cutoff), -(l + cutoff))
        hi = max(-(k - cutoff), -(l - cutoff))
        table = lattice_trig(kind, lo, hi, qp, conv, cfg)
        fk = table[-(k + n) - lo]
        fl = table[-(l + n) - lo]
        with np.errstate(over="ignore", invalid="ignore"):
            terms = q ** (-2.0 * n) * fk * fl
        if not np.all(np.isfinite(terms)):
            return math.inf, cutoff
        total = math.fsum(terms)
        edge = max(abs(terms[0]), abs(terms[-1]))
        if edge <= cfg.series_tol * max(abs(total), scale) or cutoff >= 8 * cfg.lattice_cutoff:
            return total, cutoff
        cutoff *= 2


def trig_orthogonality_residual(k: int, l: int, kind: str, qp: QParameter,
                                conv: Optional[TrigConvention] = None,
                                cfg: TruncationConfig = DEFAULT_CONFIG) -> float:
    """``|lattice sum - q^{2l} delta_kl / N_q^2|`` (absolute)."""
    total, _ = trig_orthogonality_sum(k, l, kind, qp, conv, cfg)
    target = qp.q ** (2 * l) / n_q(qp, cfg) ** 2 if k == l else 0.0
    return abs(total - target)


def validate_conventions(qp: QParameter = QParameter(1.3),
                         cfg: TruncationConfig = DEFAULT_CONFIG,
                         span: int = 2) -> dict:
    """Largest relative lattice residual of each convention.

    Residuals are taken over ``k, l in [-span, span]`` for both cos and
    sin, relative to ``q^{2l} / N_q^2``.
    """
    nq2 = n_q(qp, cfg) ** 2
    worst = {}
    for conv in TrigConvention:
        w = 0.0
        for kind in ("cos", "sin"):
            for k in range(-span, span + 1):
                for l in range(-span, span + 1):
                    if math.isfinite(w):
                        r = trig_orthogonality_residual(k, l, kind, qp, conv, cfg)
                        w = max(w, r * nq2 / qp.q ** (2 * l)) if math.isfinite(r) else math.inf
        worst[conv] = w
    return worst


@functools.lru_cache(maxsize=1)
def validated_convention(threshold: float = 1e-6) -> TrigConvention:
    """The unique convention whose lattice residuals at q = 1.3 are below threshold."""
    ok = [c for c, w in validate_conventions().items() if w < threshold]
    if len(ok) != 1:
        raise RuntimeError(f"expected exactly one valid q-trig convention, got {ok}")
    return ok[0]
