"""Moment functional of the q-Hermite polynomials.

``L[xi^k]`` is the ground-state expectation value of ``xi^k``.  It is
computed three ways: from the closed product ``q^{C(2n,2)} 2^{-n} [1][3]...[2n-1]``,
from q-gamma functions in base ``q^-4``, and by summing against either
discrete measure.  Odd moments vanish.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from .hermite import MAX_DEGREE, HermiteRangeError, hermite_eval
from .oscillator import measure
from .qcore import (
    DEFAULT_CONFIG,
    QDomainError,
    QParameter,
    TruncationConfig,
    q_bracket,
    q_gamma,
    qpoch_finite,
)
from .qtrig import TrigConvention

__all__ = [
    "CancellationWarning",
    "HermiteExpansion",
    "expand_power",
    "moment_closed",
    "moment_qgamma",
    "moment_measure",
]


class CancellationWarning(RuntimeWarning):
    """A lattice moment sum lost most of its significant digits."""


@dataclass(frozen=True)
class HermiteExpansion:
    """``xi^k = sum_j coeffs[j] H_{k-2j}(xi)``."""

    power: int
    coeffs: Dict[int, float]

    def __call__(self, xi, qp: QParameter):
        return sum(b * hermite_eval(self.power - 2 * j, xi, qp) for j, b in self.coeffs.items())

    @property
    def constant_term(self) -> float:
        """Coefficient of ``H_0``; zero for odd powers."""
        if self.power % 2:
            return 0.0
        return self.coeffs[self.power // 2]


def _check_order(k):
    if int(k) != k or k < 0:
        raise QDomainError(f"order must be a nonnegative integer, got {k!r}")
    if k > MAX_DEGREE:
        raise QDomainError(f"order {k} exceeds the supported maximum {MAX_DEGREE}")
    return int(k)


def expand_power(k: int, qp: QParameter) -> HermiteExpansion:
    """Coefficients of ``xi^k`` in the Hermite basis.

    ``b_j = q^{k^2 - 2j^2 - k/2} 2^{j-k} (p;p)_k / ((p;p)_{k-2j} (p^2;p^2)_j (1-p)^j)``
    with ``p = q^-2``, assembled in log space.
    """
    k = _check_order(k)
    q, p2, p4 = qp.q, qp.p2, qp.p4
    lq = math.log(q)
    log_pk = math.log(qpoch_finite(p2, p2, k))
    coeffs = {}
    for j in range(k // 2 + 1):
        log_b = ((k * k - 2 * j * j - k / 2) * lq + (j - k) * math.log(2.0) + log_pk
                 - math.log(qpoch_finite(p2, p2, k - 2 * j))
                 - math.log(qpoch_finite(p4, p4, j)) - j * math.log1p(-p2))
        if log_b > 709.0:
            raise HermiteRangeError(f"expansion coefficient b_{j} of xi^{k} overflows")
        coeffs[j] = math.exp(log_b)
    return HermiteExpansion(k, coeffs)


def moment_closed(order: int, qp: QParameter) -> float:
    """``L[xi^{2n}] = q^{C(2n,2)} / 2^n * [1][3]...[2n-1]``; odd orders give 0."""
    order = _check_order(order)
    if order % 2:
        return 0.0
    n = order // 2
    q, p2 = qp.q, qp.p2
    value = q ** (n * (2 * n - 1)) / 2.0 ** n
    for j in range(1, n + 1):
        value *= q_bracket(2 * j - 1, p2)
    return value


def moment_qgamma(order: int, qp: QParameter, cfg: TruncationConfig = DEFAULT_CONFIG) -> float:
    """Moment via ``[2]^n Gamma_{q^-4}(n + 1/2) / Gamma_{q^-4}(1/2)``; odd orders give 0."""
    order = _check_order(order)
    if order % 2:
        return 0.0
    n = order // 2
    q, p2, p4 = qp.q, qp.p2, qp.p4
    ratio = q_gamma(n + 0.5, p4, cfg) / q_gamma(0.5, p4, cfg)
    return q ** (n * (2 * n - 1)) / 2.0 ** n * q_bracket(2, p2) ** n * ratio


def _moment_terms(xi, w, order):
    # xi**order can overflow where the weight has already underflowed
    terms = np.zeros_like(w)
    live = w > 0
    log_mag = order * np.log(np.abs(xi[live])) + np.log(w[live])
    with np.errstate(over="ignore"):
        terms[live] = np.sign(xi[live]) ** order * np.exp(log_mag)
    return terms


def moment_measure(order: int, r: int, qp: QParameter,
                   conv: Optional[TrigConvention] = None,
                   cfg: TruncationConfig = DEFAULT_CONFIG) -> float:
    """``sum_{nu,tau} xi^order mu^r(nu)``, summed in increasing ``|xi|``.

    The window grows until the summand at the outer edge is negligible, so
    high orders are not cut off by the order-0 support.  Emits
    :class:`CancellationWarning` when the largest summand exceeds the result
    by more than ``1 / series_tol``.
    """
    order = _check_order(order)
    mu = measure(r, qp, conv, cfg)
    for _ in range(6):
        xi, w = mu.points(qp)
        terms = _moment_terms(xi, w, order)
        half = len(mu.weights)
        edge = max(abs(terms[half - 1]), abs(terms[-1]))
        if np.all(np.isfinite(terms)) and (edge <= cfg.series_tol * np.max(np.abs(terms))):
            break
        cfg = TruncationConfig(cfg.series_tol, cfg.max_terms, cfg.lattice_cutoff * 3 // 2,
                               cfg.precision)
        mu = measure(r, qp, conv, cfg)
    order_idx = np.argsort(np.abs(xi), kind="stable")
    total = math.fsum(terms[order_idx])
    biggest = float(np.max(np.abs(terms)))
    if order % 2 == 0 and biggest > abs(total) / cfg.series_tol:
        warnings.warn(f"moment of order {order} lost its significant digits", CancellationWarning)
    return total
