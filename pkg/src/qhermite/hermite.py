"""q-deformed Hermite polynomials ``H_n^{(q)}(xi)``.

They obey

    H_{n+1} = 2 q^{-1/2} q^{-2n} xi H_n - 2 q^{-2} [n] H_{n-1},
    H_0 = 1,  H_1 = 2 q^{-1/2} xi,

with ``[n]`` the q-number in base ``q**-2``.  The explicit coefficients are

    coeff(xi^{n-2k}) = q^{-n/2} q^{-k} q^{-2 C(n-2k, 2)} 2^{n-k} (-1)^k [n]!
                       / ([2]^k [n-2k]! [k]_{q^-4}!)

and both routes are offered through :class:`EvalMethod`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .qcore import (
    DEFAULT_CONFIG,
    QDomainError,
    QParameter,
    TruncationConfig,
    backend,
    q_bracket,
    q_factorial,
    qpoch_finite,
)

__all__ = [
    "MAX_DEGREE",
    "HermiteRangeError",
    "EvalMethod",
    "PolynomialCoeffs",
    "hermite_eval",
    "hermite_coefficients",
    "hermite_norm",
    "generating_coefficient",
    "christoffel_darboux_sides",
    "christoffel_darboux_residual",
    "to_hermite_ii",
]

MAX_DEGREE = 64
# above this degree coefficients are assembled from logarithms
_LOG_SPACE_DEGREE = 15


class HermiteRangeError(OverflowError):
    """Double precision cannot represent an intermediate value.

    Retry with ``TruncationConfig(precision=...)``.
    """


class EvalMethod(enum.Enum):
    RECURSION = "recursion"
    CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class PolynomialCoeffs:
    """Dense coefficients of ``H_n``; ``coeffs[k]`` multiplies ``xi**k``."""

    degree: int
    coeffs: tuple

    def __call__(self, xi):
        # ascending powers, so reverse for polyval
        return np.polyval(np.asarray(self.coeffs[::-1], dtype=float), xi)

    @property
    def leading(self):
        return self.coeffs[-1]


def _check_degree(n):
    if int(n) != n or n < 0:
        raise QDomainError(f"degree must be a nonnegative integer, got {n!r}")
    if n > MAX_DEGREE:
        raise QDomainError(f"degree {n} exceeds the supported maximum {MAX_DEGREE}")
    return int(n)


def _finite_or_raise(value, what):
    if not np.all(np.isfinite(value)):
        raise HermiteRangeError(
            f"{what} left the double-precision range; use TruncationConfig(precision=...)"
        )
    return value


def _coefficient_terms(n, qp, cfg):
    """Coefficients of ``xi^{n-2k}`` for k = 0..n//2, in the backend's numbers."""
    with backend(cfg) as B:
        q = B.num(qp.q)
        p2, p4 = q ** -2, q ** -4
        out = []
        if n <= _LOG_SPACE_DEGREE or cfg.precision is not None:
            fn = q_factorial(n, p2, cfg)
            br2 = q_bracket(2, p2, cfg)
            for k in range(n // 2 + 1):
                m = n - 2 * k
                c = (q ** (-B.num(n) / 2 - k - m * (m - 1))
                     * B.num(2) ** (n - k) * (-1) ** k * fn
                     / (br2 ** k * q_factorial(m, p2, cfg) * q_factorial(k, p4, cfg)))
                out.append(c)
            return out

        lq = math.log(qp.q)
        lbr = [0.0] + [math.log(q_bracket(j, qp.p2)) for j in range(1, n + 1)]
        lbr4 = [0.0] + [math.log(q_bracket(j, qp.p4)) for j in range(1, n // 2 + 1)]
        lfact = np.cumsum(lbr)
        lfact4 = np.cumsum(lbr4)
        for k in range(n // 2 + 1):
            m = n - 2 * k
            log_mag = (-(n / 2 + k + m * (m - 1)) * lq + (n - k) * math.log(2.0)
                       + lfact[n] - k * lbr[2] - lfact[m] - lfact4[k])
            if not -745.0 < log_mag < 709.0:
                raise HermiteRangeError(
                    f"coefficient of xi^{m} in H_{n} leaves the double range; "
                    "use TruncationConfig(precision=...)"
                )
            out.append((-1) ** k * math.exp(log_mag))
        return out


def hermite_coefficients(n: int, qp: QParameter,
                         cfg: TruncationConfig = DEFAULT_CONFIG) -> PolynomialCoeffs:
    """Closed-form coefficients of ``H_n^{(q)}`` in ascending powers of xi."""
    n = _check_degree(n)
    coeffs = [0.0] * (n + 1)
    for k, c in enumerate(_coefficient_terms(n, qp, cfg)):
        coeffs[n - 2 * k] = c
    return PolynomialCoeffs(n, tuple(coeffs))


def _eval_recursion(n, xi, qp, cfg):
    with backend(cfg) as B:
        q = B.num(qp.q)
        p2 = q ** -2
        rq = q ** (-B.num(1) / 2)
        h_prev, h = 0 * xi + 1, 2 * rq * xi
        if n == 0:
            return h_prev
        for m in range(1, n):
            h_prev, h = h, 2 * rq * q ** (-2 * m) * xi * h - 2 * p2 * q_bracket(m, p2, cfg) * h_prev
        return h


def _eval_closed(n, xi, qp, cfg):
    terms = _coefficient_terms(n, qp, cfg)
    if cfg.precision is not None:
        with backend(cfg) as B:
            return B.fsum(c * xi ** (n - 2 * k) for k, c in enumerate(terms))
    xi = np.asarray(xi, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        parts = np.array([c * xi ** (n - 2 * k) for k, c in enumerate(terms)])
    if parts.ndim == 1:
        return math.fsum(parts)
    flat = parts.reshape(len(terms), -1)
    return np.array([math.fsum(col) for col in flat.T]).reshape(xi.shape)


def hermite_eval(n: int, xi, qp: QParameter,
                 method: EvalMethod = EvalMethod.RECURSION,
                 cfg: TruncationConfig = DEFAULT_CONFIG):
    """Value of ``H_n^{(q)}(xi)``; ``xi`` may be a scalar or a numpy array.

    With ``cfg.precision`` set, ``xi`` must be a scalar and an mpmath number
    is returned.
    """
    n = _check_degree(n)
    method = EvalMethod(method)
    if cfg.precision is not None:
        with mpmath.workdps(cfg.precision):
            x = mpmath.mpf(xi)
            if method is EvalMethod.RECURSION:
                return _eval_recursion(n, x, qp, cfg)
            return _eval_closed(n, x, qp, cfg)
    scalar = np.ndim(xi) == 0
    x = float(xi) if scalar else np.asarray(xi, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        if method is EvalMethod.RECURSION:
            value = _eval_recursion(n, x, qp, cfg)
        else:
            value = _eval_closed(n, x, qp, cfg)
    _finite_or_raise(value, f"H_{n}")
    return float(value) if scalar else value


def hermite_norm(n: int, qp: QParameter) -> float:
    """``2^n [n]!`` in base ``q**-2``, the squared norm of ``H_n``."""
    return 2.0 ** n * q_factorial(n, qp.p2)


def generating_coefficient(n: int, xi, qp: QParameter,
                           cfg: TruncationConfig = DEFAULT_CONFIG) -> float:
    """Coefficient of ``t^n`` in ``E_{q^-2}(xi t) e_{q^-4}(t^2 q / (2(1 - q^2)))``.

    Obtained as a finite Cauchy product of the two exponential series; it
    should equal ``q^{n/2} 2^{-n} H_n(xi) / (q^-2; q^-2)_n``.
    """
    n = _check_degree(n)
    q, p2, p4 = qp.q, qp.p2, qp.p4
    s = q / (2.0 * (1.0 - q * q))
    parts = []
    for j in range(n // 2 + 1):
        m = n - 2 * j
        big_e = p2 ** (m * (m - 1) // 2) / qpoch_finite(p2, p2, m) * xi ** m
        small_e = s ** j / qpoch_finite(p4, p4, j)
        parts.append(big_e * small_e)
    return math.fsum(parts)


def christoffel_darboux_sides(n: int, xi1, xi2, qp: QParameter):
    """Both sides of the Christoffel-Darboux identity at two distinct points.

    Returns ``(lhs, rhs, scale)`` where ``scale`` is the sum of the absolute
    kernel terms, a natural yardstick for relative residuals.
    """
    n = _check_degree(n)
    if xi1 == xi2:
        raise QDomainError("Christoffel-Darboux needs two distinct points")
    q = qp.q
    h1 = [hermite_eval(m, xi1, qp) for m in range(n + 2)]
    h2 = [hermite_eval(m, xi2, qp) for m in range(n + 2)]
    kernel = [h1[m] * h2[m] / hermite_norm(m, qp) for m in range(n + 1)]
    lhs = math.fsum(kernel)
    pref = q ** 0.5 * q ** (2 * n) / (2.0 * hermite_norm(n, qp))
    rhs = pref * (h1[n + 1] * h2[n] - h2[n + 1] * h1[n]) / (xi1 - xi2)
    return lhs, rhs, math.fsum(abs(t) for t in kernel)


def christoffel_darboux_residual(n: int, xi1, xi2, qp: QParameter) -> float:
    """``|lhs - rhs|`` of the Christoffel-Darboux identity."""
    lhs, rhs, _ = christoffel_darboux_sides(n, xi1, xi2, qp)
    return abs(lhs - rhs)


def to_hermite_ii(n: int, xprime, qp: QParameter):
    """q-Hermite II polynomial ``h~_n(x'; q^-2)`` via the rescaling bridge.

    ``h~_n(x') = H_n(xi) (1 - q^-2)^{n/2} q^{n^2} / 2^{n/2}`` with
    ``xi = x' / sqrt(2 (q - 1/q))``; the result is monic in ``x'``.
    """
    n = _check_degree(n)
    q = qp.q
    xi = np.asarray(xprime, dtype=float) / math.sqrt(2.0 * (q - 1.0 / q))
    log_factor = n * n * math.log(q) + 0.5 * n * (math.log1p(-qp.p2) - math.log(2.0))
    if log_factor > 709.0:
        raise HermiteRangeError(f"q^(n^2) prefactor overflows for n = {n}")
    value = hermite_eval(n, xi, qp) * math.exp(log_factor)
    return float(value) if np.ndim(value) == 0 else value
