"""Scalar q-series primitives.

Everything here works in a base ``b`` with ``0 < b < 1``; the oscillator
bases are ``q**-2`` and ``q**-4`` for a deformation parameter ``q > 1``.

By default all routines run in IEEE double precision.  Setting
``TruncationConfig.precision`` to a number of decimal digits switches the
same algorithms over to :mod:`mpmath` at that working precision, and the
results come back as ``mpmath.mpf``.
"""
from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass
from types import SimpleNamespace
from typing import Iterable, Iterator, Optional

import mpmath

__all__ = [
    "QDomainError",
    "ConvergenceError",
    "QParameter",
    "TruncationConfig",
    "CompensatedSum",
    "q_bracket",
    "q_factorial",
    "qpoch_finite",
    "qpoch_infinite",
    "log_qpoch_infinite",
    "q_gamma",
    "q_exp_E",
    "q_exp_e",
]


class QDomainError(ValueError):
    """An argument lies outside the domain of the requested function."""


class ConvergenceError(ArithmeticError):
    """A series or product did not settle within ``max_terms`` terms.

    The partially accumulated value is kept on ``partial``.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class QParameter:
    """Deformation parameter ``q > 1`` with its two derived bases."""

    q: float

    def __post_init__(self):
        q = float(self.q)
        if not math.isfinite(q) or q <= 1.0:
            raise QDomainError(f"q must exceed 1, got {self.q!r}")
        object.__setattr__(self, "q", q)

    @property
    def p2(self) -> float:
        return self.q ** -2

    @property
    def p4(self) -> float:
        return self.q ** -4


@dataclass(frozen=True)
class TruncationConfig:
    """Truncation policy for every infinite sum and product.

    series_tol
        Relative size below which a term (or ``|factor - 1|``) counts as
        negligible.  Two consecutive negligible terms end a series.
    max_terms
        Hard cap on the number of terms before :class:`ConvergenceError`.
    lattice_cutoff
        Bilateral lattice sums start on ``-L..L``; some callers widen the
        window adaptively when the boundary terms are not yet negligible.
    precision
        ``None`` for double precision, otherwise the number of decimal
        digits used by the :mod:`mpmath` backend.
    """

    series_tol: float = 2.0 ** -53
    max_terms: int = 20000
    lattice_cutoff: int = 60
    precision: Optional[int] = None

    def __post_init__(self):
        if not self.series_tol > 0:
            raise QDomainError("series_tol must be positive")
        if self.max_terms < 8:
            raise QDomainError("max_terms must be at least 8")
        if self.lattice_cutoff < 4:
            raise QDomainError("lattice_cutoff must be at least 4")
        if self.precision is not None and self.precision < 15:
            raise QDomainError("precision must be at least 15 decimal digits")


DEFAULT_CONFIG = TruncationConfig()


class CompensatedSum:
    """Running Neumaier sum; works for floats and mpmath numbers alike."""

    __slots__ = ("total", "_comp")

    def __init__(self, start=0.0):
        self.total = start
        self._comp = start * 0

    def add(self, x):
        t = self.total + x
        if abs(self.total) >= abs(x):
            self._comp += (self.total - t) + x
        else:
            self._comp += (x - t) + self.total
        self.total = t

    @property
    def value(self):
        return self.total + self._comp


_DOUBLE = SimpleNamespace(
    num=float,
    exp=math.exp,
    log=math.log,
    expm1=math.expm1,
    log1p=math.log1p,
    sqrt=math.sqrt,
    fsum=math.fsum,
    isfinite=math.isfinite,
)


@contextlib.contextmanager
def backend(cfg: Optional[TruncationConfig]) -> Iterator[SimpleNamespace]:
    """Yield the arithmetic namespace selected by ``cfg.precision``."""
    if cfg is None or cfg.precision is None:
        yield _DOUBLE
        return
    with mpmath.workdps(cfg.precision):
        yield SimpleNamespace(
            num=mpmath.mpf,
            exp=mpmath.exp,
            log=mpmath.log,
            expm1=mpmath.expm1,
            log1p=mpmath.log1p,
            sqrt=mpmath.sqrt,
            fsum=mpmath.fsum,
            isfinite=mpmath.isfinite,
        )


def _check_base(base):
    if not 0 < base < 1:
        raise QDomainError(f"base must lie in (0, 1), got {base!r}")


def _check_count(n, name="n"):
    if int(n) != n or n < 0:
        raise QDomainError(f"{name} must be a nonnegative integer, got {n!r}")
    return int(n)


def _tolerance(cfg: TruncationConfig):
    """``series_tol``, tightened to the working precision in mpmath mode."""
    if cfg.precision is None:
        return cfg.series_tol
    return min(cfg.series_tol, 10.0 ** -cfg.precision)


def sum_series(terms: Iterable, cfg: TruncationConfig, what: str = "series",
               with_peak: bool = False):
    """Compensated sum of ``terms`` with the two-small-terms stopping rule.

    With ``with_peak`` the largest ``|term|`` is returned alongside the sum,
    so callers can judge cancellation.
    """
    tol = _tolerance(cfg)
    acc = CompensatedSum(0 * cfg.series_tol)
    peak = 0 * cfg.series_tol
    quiet = 0
    for count, t in enumerate(terms):
        if not mpmath.isfinite(t):
            raise OverflowError(f"{what} left the floating-point range")
        acc.add(t)
        peak = max(peak, abs(t))
        if abs(t) <= tol * abs(acc.total):
            quiet += 1
            if quiet == 2:
                return (acc.value, peak) if with_peak else acc.value
        else:
            quiet = 0
        if count + 1 >= cfg.max_terms:
            break
    else:
        return (acc.value, peak) if with_peak else acc.value
    raise ConvergenceError(f"{what} did not converge in {cfg.max_terms} terms", acc.value)


# alternating q-exponential sums lose log10(peak / |sum|) digits; beyond
# this ratio the sum is redone in mpmath
_CANCELLATION_RATIO = 1e4
_MAX_GUARD_DIGITS = 4000


def _guarded(series, t, base, cfg, what):
    """Sum ``series(t, base, B)`` and redo it in mpmath if it cancelled badly."""
    with backend(cfg) as B:
        value, peak = sum_series(series(B.num(t), B.num(base), B), cfg, what, with_peak=True)
    if cfg.precision is not None or value == 0 or peak <= _CANCELLATION_RATIO * abs(value):
        return value
    # the float value may itself be noise, so size the precision from each mp pass
    digits = 20 + math.ceil(math.log10(peak / abs(value)))
    while True:
        fine = TruncationConfig(cfg.series_tol, cfg.max_terms, cfg.lattice_cutoff, digits)
        with backend(fine) as B:
            value, peak = sum_series(series(B.num(t), B.num(base), B), fine, what, with_peak=True)
            needed = 20 + (math.ceil(float(mpmath.log10(peak / abs(value)))) if value else digits)
        if needed <= digits or digits >= _MAX_GUARD_DIGITS:
            return float(value)
        digits = max(needed, 2 * digits)


def q_bracket(x, base, cfg: Optional[TruncationConfig] = None):
    """The q-number ``(1 - base**x) / (1 - base)``.

    ``x`` may be any real; half-integers show up in the q-gamma reduction.
    """
    _check_base(base)
    with backend(cfg) as B:
        b = B.num(base)
        return -B.expm1(B.num(x) * B.log(b)) / (1 - b)


def q_factorial(n, base, cfg: Optional[TruncationConfig] = None):
    """``[1][2]...[n]`` in the given base; the empty product is 1."""
    n = _check_count(n)
    _check_base(base)
    with backend(cfg) as B:
        b = B.num(base)
        out = B.num(1)
        for k in range(1, n + 1):
            out *= -B.expm1(k * B.log(b)) / (1 - b)
        return out


def qpoch_finite(a, base, n, cfg: Optional[TruncationConfig] = None):
    """Finite q-Pochhammer symbol ``prod_{k<n} (1 - a*base**k)``."""
    n = _check_count(n)
    with backend(cfg) as B:
        a, b = B.num(a), B.num(base)
        out = B.num(1)
        for k in range(n):
            out *= 1 - a * b ** k
        return out


def qpoch_infinite(a, base, cfg: TruncationConfig = DEFAULT_CONFIG):
    """Infinite q-Pochhammer symbol ``(a; base)_inf``.

    Stops once ``|factor - 1| < series_tol`` for two factors in a row.
    """
    _check_base(base)
    with backend(cfg) as B:
        a, b = B.num(a), B.num(base)
        out = B.num(1)
        quiet = 0
        for k in range(cfg.max_terms):
            step = a * b ** k
            out *= 1 - step
            if abs(step) < _tolerance(cfg):
                quiet += 1
                if quiet == 2:
                    return out
            else:
                quiet = 0
        raise ConvergenceError(
            f"(a; b)_inf did not converge in {cfg.max_terms} factors", out
        )


def log_qpoch_infinite(a, base, cfg: TruncationConfig = DEFAULT_CONFIG):
    """``(log|(a; base)_inf|, sign)`` for products whose size overflows.

    Raises QDomainError when a factor vanishes.
    """
    _check_base(base)
    with backend(cfg) as B:
        a, b = B.num(a), B.num(base)
        acc = CompensatedSum(B.num(0))
        sign = 1
        quiet = 0
        for k in range(cfg.max_terms):
            step = a * b ** k
            factor = 1 - step
            if factor == 0:
                raise QDomainError("(a; b)_inf vanishes: a*b**k == 1")
            if factor < 0:
                sign = -sign
            acc.add(B.log1p(-step) if abs(step) < 0.5 else B.log(abs(factor)))
            if abs(step) < _tolerance(cfg):
                quiet += 1
                if quiet == 2:
                    return acc.value, sign
            else:
                quiet = 0
        raise ConvergenceError(
            f"log (a; b)_inf did not converge in {cfg.max_terms} factors", acc.value
        )


def q_gamma(x, base, cfg: TruncationConfig = DEFAULT_CONFIG):
    """q-gamma function ``(b;b)_inf / (b**x;b)_inf * (1-b)**(1-x)``.

    Satisfies ``q_gamma(x+1) == q_bracket(x) * q_gamma(x)``.  Poles at
    ``x = 0, -1, -2, ...`` raise QDomainError.
    """
    _check_base(base)
    if x <= 0 and float(x) == int(x):
        raise QDomainError(f"q_gamma has a pole at x = {x!r}")
    with backend(cfg) as B:
        b, x = B.num(base), B.num(x)
        num = qpoch_infinite(b, b, cfg)
        den = qpoch_infinite(b ** x, b, cfg)
        return num / den * (1 - b) ** (1 - x)


def _big_e_terms(t, b, B):
    term = B.num(1)
    n = 0
    while True:
        yield term
        n += 1
        term = term * b ** (n - 1) * t / (1 - b ** n)


def _small_e_terms(t, b, B):
    term = B.num(1)
    n = 0
    while True:
        yield term
        n += 1
        term = term * t / (1 - b ** n)


def q_exp_E(t, base, cfg: TruncationConfig = DEFAULT_CONFIG):
    """``E_b(t) = sum_n b**C(n,2) t**n / (b;b)_n``, an entire function of t.

    Equals ``(-t; b)_inf``.  The classical limit is ``E_b((1-b) t) -> exp(t)``.
    For negative ``t`` the series alternates; heavy cancellation is detected
    and the sum repeated in mpmath.
    """
    _check_base(base)
    return _guarded(_big_e_terms, t, base, cfg, "E_b(t)")


def q_exp_e(t, base, cfg: TruncationConfig = DEFAULT_CONFIG):
    """``e_b(t) = sum_n t**n / (b;b)_n`` for ``|t| < 1``; equals ``1/(t;b)_inf``."""
    _check_base(base)
    if not abs(t) < 1:
        raise QDomainError(f"e_b(t) needs |t| < 1, got t = {t!r}")
    return _guarded(_small_e_terms, t, base, cfg, "e_b(t)")
