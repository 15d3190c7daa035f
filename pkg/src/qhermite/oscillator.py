"""q-deformed oscillator on the momentum and position lattices.

Momentum states ``|l, sigma>`` have eigenvalue ``sigma q^l``; position
states ``|nu, tau>`` have eigenvalue ``-tau q^{nu - 1/2} / (q - 1/q)``.  The
two bases are linked by the q-Fourier transform built from the lattice
values of :mod:`qhermite.qtrig`; the shift ``U`` raises the position index
by one, and odd momentum states are ``|2l+1> = U^{-1} |2l>``.

The oscillator eigenstates are ``H_n(xi) |0>^r / sqrt(2^n [n]!)`` for two
degenerate ground states ``r = 0, 1`` living on the even and odd position
sublattices.  The argument ``xi`` of the polynomials is the position
eigenvalue rescaled by ``sqrt((1 - q^-2) / 2)``::

    xi_{nu,tau} = -tau q^{nu - 1/2} / sqrt(2 (q^2 - 1))

With this scale both squared ground states are orthogonality measures for
``H_n`` with norm ``2^n [n]!`` and reproduce the moment functional; with the
raw eigenvalue they do not.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Dict, Iterator, NamedTuple, Optional, Tuple

import numpy as np

from .hermite import hermite_eval, hermite_norm, to_hermite_ii
from .qcore import (
    DEFAULT_CONFIG,
    ConvergenceError,
    QDomainError,
    QParameter,
    TruncationConfig,
    log_qpoch_infinite,
    qpoch_finite,
)
from .qtrig import TrigConvention, lattice_trig, n_q, validated_convention

__all__ = [
    "LatticeSite",
    "GroundState",
    "DiscreteMeasure",
    "position_eigenvalue",
    "hermite_argument",
    "momentum_eigenvalue",
    "ground_c0",
    "ground_state",
    "fourier_amplitude",
    "fourier_matrix",
    "fourier_unitarity_defect",
    "ground_amplitude",
    "ground_amplitudes",
    "measure",
    "excited_amplitude",
    "state_overlap",
    "hermite_orthogonality_sum",
    "hermite_orthogonality_residual",
    "hermite_ii_weight",
    "hermite_ii_orthogonality",
    "heisenberg_residual",
]


@dataclass(frozen=True)
class LatticeSite:
    """Integer lattice index with a sign label (sigma or tau)."""

    index: int
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise QDomainError(f"sign must be +1 or -1, got {self.sign!r}")
        if int(self.index) != self.index:
            raise QDomainError(f"index must be an integer, got {self.index!r}")
        object.__setattr__(self, "index", int(self.index))


def _check_parity(r):
    if r not in (0, 1):
        raise QDomainError(f"parity label r must be 0 or 1, got {r!r}")
    return r


def position_eigenvalue(site: LatticeSite, qp: QParameter) -> float:
    """Eigenvalue ``-tau q^{nu-1/2} / (q - 1/q)`` of X on ``|nu, tau>``."""
    q = qp.q
    return -site.sign * q ** (site.index - 0.5) / (q - 1.0 / q)


def hermite_argument(site: LatticeSite, qp: QParameter) -> float:
    """Polynomial argument ``xi`` at a position site (see module docstring)."""
    q = qp.q
    return -site.sign * q ** (site.index - 0.5) / math.sqrt(2.0 * (q * q - 1.0))


def momentum_eigenvalue(site: LatticeSite, qp: QParameter) -> float:
    """Eigenvalue ``sigma q^l`` of P on ``|l, sigma>``."""
    return site.sign * qp.q ** site.index


# -- ground state in the momentum basis ----------------------------------


def _c_exponents(ls):
    ls = np.asarray(ls, dtype=float)
    return -(ls * ls + ls) / 2.0


def ground_c0(qp: QParameter, cfg: TruncationConfig = DEFAULT_CONFIG) -> float:
    """Normalisation ``c0`` making ``sum_l c_l^2 = 1``, ``c_l = q^{-(l^2+l)/2} c0``."""
    L = cfg.lattice_cutoff
    ls = np.arange(-L, L + 1)
    weights = qp.q ** (2.0 * _c_exponents(ls))
    total = math.fsum(weights)
    if max(weights[0], weights[-1]) > cfg.series_tol * total:
        raise ConvergenceError(
            f"ground-state sum not converged at lattice_cutoff={L}", total ** -0.5
        )
    return total ** -0.5


@dataclass(frozen=True)
class GroundState:
    """Momentum-space ground state ``|0>^r``: amplitudes ``c_l`` on ``l = -L..L``."""

    r: int
    c0: float
    qp: QParameter
    cutoff: int

    def c(self, l):
        return self.c0 * self.qp.q ** _c_exponents(l)

    def amplitude(self, site: LatticeSite) -> float:
        """``<l, sigma|0>^r = (-1)^l sigma^{l+r} c_l / sqrt(2)``."""
        l, s = site.index, site.sign
        return (-1) ** (l % 2) * s ** ((l + self.r) % 2) * float(self.c(l)) / math.sqrt(2.0)

    def norm_squared(self) -> float:
        ls = np.arange(-self.cutoff, self.cutoff + 1)
        return math.fsum(self.c(ls) ** 2)


def ground_state(r: int, qp: QParameter, cfg: TruncationConfig = DEFAULT_CONFIG) -> GroundState:
    return GroundState(_check_parity(r), ground_c0(qp, cfg), qp, cfg.lattice_cutoff)


# -- q-Fourier transform ---------------------------------------------------


def _trig_pair(qp, conv, cfg, m_lo, m_hi):
    cos = lattice_trig("cos", m_lo, m_hi, qp, conv, cfg)
    sin = lattice_trig("sin", m_lo, m_hi, qp, conv, cfg)
    return cos, sin


def _resolve(conv):
    return validated_convention() if conv is None else TrigConvention(conv)


def fourier_amplitude(momentum_site: LatticeSite, position_site: LatticeSite,
                      qp: QParameter, conv: Optional[TrigConvention] = None,
                      cfg: TruncationConfig = DEFAULT_CONFIG) -> complex:
    """Overlap ``<nu, tau | k, sigma>`` of a position and a momentum state.

    For ``k = 2l``: ``(N_q/2) q^{j+l} cos_q(j+l)`` on ``nu = 2j`` and
    ``-i sigma tau (N_q/2) q^{j+l} sin_q(j+l)`` on ``nu = 2j+1``.  Odd
    ``k = 2l+1`` is ``U^{-1}`` of the even state, which moves the cosine part
    to ``nu = 2j-1``.
    """
    conv = _resolve(conv)
    q = qp.q
    k, sigma = momentum_site.index, momentum_site.sign
    nu, tau = position_site.index, position_site.sign
    l, kodd = divmod(k, 2)
    # undo U^{-1}: the odd state at nu equals the even state at nu + 1
    nu_even_frame = nu + kodd
    j, nodd = divmod(nu_even_frame, 2)
    m = j + l
    cos, sin = _trig_pair(qp, conv, cfg, m, m)
    half_n = n_q(qp, cfg) / 2.0
    if nodd == 0:
        return complex(half_n * q ** m * cos[0], 0.0)
    return complex(0.0, -sigma * tau * half_n * q ** m * sin[0])


def fourier_matrix(qp: QParameter, conv: Optional[TrigConvention] = None,
                   cfg: TruncationConfig = DEFAULT_CONFIG,
                   momentum_cutoff: Optional[int] = None):
    """Truncated transform: rows are position sites, columns momentum sites.

    Position half-indices run over ``-L..L`` (sites ``nu = -2L-1 .. 2L+1``);
    momentum half-indices over ``-K..K`` with ``K = momentum_cutoff``
    (default ``L // 4``, keeping every column's support well inside the
    window).  Returns ``(matrix, position_sites, momentum_sites)``.
    """
    conv = _resolve(conv)
    L = cfg.lattice_cutoff
    K = L // 4 if momentum_cutoff is None else momentum_cutoff
    q = qp.q
    half_n = n_q(qp, cfg) / 2.0
    cos, sin = _trig_pair(qp, conv, cfg, -L - K - 1, L + K + 1)
    off = L + K + 1
    pos = [LatticeSite(nu, tau) for nu in range(-2 * L - 1, 2 * L + 2) for tau in (1, -1)]
    mom = [LatticeSite(k, s) for k in range(-2 * K, 2 * K + 2) for s in (1, -1)]
    F = np.zeros((len(pos), len(mom)), dtype=complex)
    for b, ms in enumerate(mom):
        l, kodd = divmod(ms.index, 2)
        for a, ps in enumerate(pos):
            j, nodd = divmod(ps.index + kodd, 2)
            m = j + l
            if not -L - K - 1 <= m <= L + K + 1:
                continue
            if nodd == 0:
                F[a, b] = half_n * q ** m * cos[m + off]
            else:
                F[a, b] = -1j * ms.sign * ps.sign * half_n * q ** m * sin[m + off]
    return F, pos, mom


def fourier_unitarity_defect(qp: QParameter, conv: Optional[TrigConvention] = None,
                             cfg: TruncationConfig = DEFAULT_CONFIG,
                             momentum_cutoff: Optional[int] = None) -> float:
    """``max |F^H F - I|`` over the truncated transform's columns."""
    F, _, _ = fourier_matrix(qp, conv, cfg, momentum_cutoff)
    gram = F.conj().T @ F
    return float(np.max(np.abs(gram - np.eye(gram.shape[0]))))


# -- ground states in the position basis -----------------------------------


def _scaled(log_factor, values):
    out = np.zeros_like(values)
    live = values != 0
    with np.errstate(over="ignore", under="ignore"):
        out[live] = np.exp(log_factor[live]) * values[live]
    return out


@functools.lru_cache(maxsize=64)
def _ground_table(r, qp, conv, cfg, half_cutoff):
    """``<2j+r, tau=+1 | 0>^r`` for ``j = -J..J``; ``tau=-1`` is the conjugate."""
    J = half_cutoff
    L = cfg.lattice_cutoff
    q = qp.q
    c0 = ground_c0(qp, cfg)
    ls = np.arange(-L, L + 1)
    js = np.arange(-J, J + 1)
    m_lo, m_hi = -J - L, J + L + 1
    cos, sin = _trig_pair(qp, conv, cfg, m_lo, m_hi)
    M = js[:, None] + ls[None, :]  # j + l
    # q^{j+l} c_l combined in the exponent so wide windows cannot overflow
    lq = math.log(q)
    e_even = M * lq + _c_exponents(2 * ls)[None, :] * lq
    e_odd = M * lq + _c_exponents(2 * ls + 1)[None, :] * lq
    if r == 0:
        re_terms = _scaled(e_even, cos[M - m_lo])
        im_terms = _scaled(e_odd, sin[M - m_lo])
        sign = 1.0
    else:
        re_terms = q * _scaled(e_odd, cos[M + 1 - m_lo])
        im_terms = _scaled(e_even, sin[M - m_lo])
        sign = -1.0
    re_terms *= c0
    im_terms *= c0
    pref = sign * n_q(qp, cfg) / math.sqrt(2.0)
    re = np.array([math.fsum(row) for row in re_terms]) * pref
    im = np.array([math.fsum(row) for row in im_terms]) * pref
    amp = re + 1j * im
    amp.setflags(write=False)
    return js * 2 + r, amp


def _adaptive_table(r, qp, conv, cfg):
    """Ground-state table, widened until both boundary weights are negligible."""
    J = cfg.lattice_cutoff
    for _ in range(6):
        sites, amp = _ground_table(r, qp, conv, cfg, J)
        w = np.abs(amp) ** 2
        if max(w[0], w[-1]) <= cfg.series_tol * w.max():
            return sites, amp
        J = J * 3 // 2
    raise ConvergenceError(
        f"ground-state measure tails not negligible at half-cutoff {J}", (sites, amp)
    )


def ground_amplitudes(r: int, qp: QParameter, conv: Optional[TrigConvention] = None,
                      cfg: TruncationConfig = DEFAULT_CONFIG):
    """Arrays ``(nu, amplitude at tau=+1)`` over the support sublattice of ``r``."""
    return _adaptive_table(_check_parity(r), qp, _resolve(conv), cfg)


def ground_amplitude(r: int, position_site: LatticeSite, qp: QParameter,
                     conv: Optional[TrigConvention] = None,
                     cfg: TruncationConfig = DEFAULT_CONFIG) -> complex:
    """``<nu, tau | 0>^r``; exactly zero off the parity-``r`` sublattice."""
    r = _check_parity(r)
    nu, tau = position_site.index, position_site.sign
    if nu % 2 != r:
        return 0j
    sites, amp = ground_amplitudes(r, qp, conv, cfg)
    i = (nu - sites[0]) // 2
    if not 0 <= i < len(sites):
        return 0j
    a = complex(amp[i])
    return a if tau == 1 else a.conjugate()


@dataclass(frozen=True)
class DiscreteMeasure:
    """Squared ground-state amplitudes on the position lattice.

    ``indices[i]`` is a position index ``nu`` of parity ``r``; the site
    ``(nu, +1)`` and ``(nu, -1)`` both carry ``weights[i]``.
    """

    r: int
    indices: np.ndarray
    weights: np.ndarray

    def weight(self, site: LatticeSite) -> float:
        if site.index % 2 != self.r:
            return 0.0
        i = (site.index - int(self.indices[0])) // 2
        return float(self.weights[i]) if 0 <= i < len(self.indices) else 0.0

    def items(self) -> Iterator[Tuple[LatticeSite, float]]:
        for nu, w in zip(self.indices, self.weights):
            for tau in (1, -1):
                yield LatticeSite(int(nu), tau), float(w)

    def as_dict(self) -> Dict[LatticeSite, float]:
        return dict(self.items())

    def total_mass(self) -> float:
        return 2.0 * math.fsum(self.weights)

    def points(self, qp: QParameter) -> Tuple[np.ndarray, np.ndarray]:
        """Polynomial arguments and weights over all sites (both signs)."""
        q = qp.q
        xi = -q ** (self.indices - 0.5) / math.sqrt(2.0 * (q * q - 1.0))
        return np.concatenate([xi, -xi]), np.concatenate([self.weights, self.weights])


def measure(r: int, qp: QParameter, conv: Optional[TrigConvention] = None,
            cfg: TruncationConfig = DEFAULT_CONFIG) -> DiscreteMeasure:
    """``mu^r(nu) = |<nu, tau | 0>^r|^2`` (independent of tau)."""
    sites, amp = ground_amplitudes(r, qp, conv, cfg)
    w = np.abs(amp) ** 2
    w.setflags(write=False)
    return DiscreteMeasure(r, sites, w)


def excited_amplitude(n: int, r: int, position_site: LatticeSite, qp: QParameter,
                      conv: Optional[TrigConvention] = None,
                      cfg: TruncationConfig = DEFAULT_CONFIG) -> complex:
    """``<nu, tau | n>^r = H_n(xi) <nu, tau | 0>^r / sqrt(2^n [n]!)``."""
    g = ground_amplitude(r, position_site, qp, conv, cfg)
    if g == 0:
        return 0j
    xi = hermite_argument(position_site, qp)
    return hermite_eval(n, xi, qp) * g / math.sqrt(hermite_norm(n, qp))


def state_overlap(n: int, r: int, m: int, r2: int, qp: QParameter,
                  conv: Optional[TrigConvention] = None,
                  cfg: TruncationConfig = DEFAULT_CONFIG) -> complex:
    """``^r<n | m>^r2`` summed over the position lattice (no parity shortcut)."""
    out = []
    for rr in (0, 1):
        sites, _ = ground_amplitudes(rr, qp, conv, cfg)
        for nu in sites:
            for tau in (1, -1):
                s = LatticeSite(int(nu), tau)
                a = excited_amplitude(n, r, s, qp, conv, cfg)
                b = excited_amplitude(m, r2, s, qp, conv, cfg)
                out.append(a.conjugate() * b)
    return complex(math.fsum(z.real for z in out), math.fsum(z.imag for z in out))


def hermite_orthogonality_sum(n: int, m: int, r: int, qp: QParameter,
                              conv: Optional[TrigConvention] = None,
                              cfg: TruncationConfig = DEFAULT_CONFIG) -> float:
    """``sum_{nu,tau} H_n(xi) H_m(xi) mu^r(nu)``."""
    xi, w = measure(r, qp, conv, cfg).points(qp)
    live = w > 0
    xi, root = xi[live], np.sqrt(w[live])
    return math.fsum((hermite_eval(n, xi, qp) * root) * (hermite_eval(m, xi, qp) * root))


def hermite_orthogonality_residual(n: int, m: int, r: int, qp: QParameter,
                                   conv: Optional[TrigConvention] = None,
                                   cfg: TruncationConfig = DEFAULT_CONFIG) -> float:
    """``|sum - 2^n [n]! delta_nm| / max(1, 2^n [n]!)``."""
    total = hermite_orthogonality_sum(n, m, r, qp, conv, cfg)
    norm = hermite_norm(n, qp)
    return abs(total - (norm if n == m else 0.0)) / max(1.0, norm)


# -- q-Hermite II orthogonality ---------------------------------------------


def hermite_ii_weight(k: int, qp: QParameter, cfg: TruncationConfig = DEFAULT_CONFIG) -> float:
    """``omega(p^k) = 1 / (-p^{2k}; p^2)_inf`` with ``p = q^-2``; underflows to 0."""
    p = qp.p2
    log_val, _ = log_qpoch_infinite(-p ** (2 * k), p * p, cfg)
    return math.exp(-log_val) if log_val < 745.0 else 0.0


class HermiteIISum(NamedTuple):
    total: float
    n_tilde: float


def hermite_ii_orthogonality(n: int, m: int, qp: QParameter,
                             cfg: TruncationConfig = DEFAULT_CONFIG,
                             k_range: str = "all") -> HermiteIISum:
    """Weighted lattice sum of ``h~_n h~_m`` at ``x = +-p^k``, ``p = q^-2``.

    ``k_range="all"`` sums ``k = -L..L``; ``"nonnegative"`` sums ``k = 0..L``.
    ``n_tilde = total p^{n^2} / (p; p)_n`` when ``n == m``, else ``nan``.
    """
    if k_range not in ("all", "nonnegative"):
        raise QDomainError(f"k_range must be 'all' or 'nonnegative', got {k_range!r}")
    p = qp.p2
    L = cfg.lattice_cutoff
    ks = range(-L if k_range == "all" else 0, L + 1)
    terms = []
    for k in ks:
        w = hermite_ii_weight(k, qp, cfg)
        if w == 0.0:
            continue
        x = p ** k
        pair = (to_hermite_ii(n, x, qp) * to_hermite_ii(m, x, qp)
                + to_hermite_ii(n, -x, qp) * to_hermite_ii(m, -x, qp))
        terms.append(pair * w * x)
    total = math.fsum(terms)
    n_tilde = total * p ** (n * n) / qpoch_finite(p, p, n) if n == m else math.nan
    return HermiteIISum(total, n_tilde)


# -- optional algebra check ------------------------------------------------------


def heisenberg_residual(qp: QParameter, conv: Optional[TrigConvention] = None,
                        cfg: TruncationConfig = DEFAULT_CONFIG,
                        interior: int = 4) -> float:
    """Size of ``q^{1/2} X P - q^{-1/2} P X - i U`` on interior position sites.

    X is diagonal on the position lattice, P is transported from its
    momentum eigenbasis through the truncated Fourier matrix, and U shifts
    ``nu -> nu + 1``.  The largest entry modulus over rows and columns with
    ``|nu| <= interior`` is returned; truncation makes it nonzero.
    """
    F, pos, mom = fourier_matrix(qp, conv, cfg, momentum_cutoff=cfg.lattice_cutoff // 2)
    p_diag = np.array([momentum_eigenvalue(s, qp) for s in mom])
    P = (F * p_diag[None, :]) @ F.conj().T
    x_diag = np.array([position_eigenvalue(s, qp) for s in pos])
    index = {(s.index, s.sign): i for i, s in enumerate(pos)}
    U = np.zeros_like(P)
    for s in pos:
        tgt = index.get((s.index + 1, s.sign))
        if tgt is not None:
            U[tgt, index[(s.index, s.sign)]] = 1.0
    q = qp.q
    R = q ** 0.5 * x_diag[:, None] * P - q ** -0.5 * P * x_diag[None, :] - 1j * U
    inner = [i for i, s in enumerate(pos) if abs(s.index) <= interior]
    return float(np.max(np.abs(R[np.ix_(inner, inner)])))
