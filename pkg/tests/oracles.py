"""Independent reference computations.

Nothing here imports ``qhermite``.  Every routine works in mpmath at a
generous working precision using the textbook definitions directly
(brute-force products, explicit series, polynomial recurrences on
coefficient lists).  Running this file prints the frozen constants used by
the test modules.
"""
import mpmath as mp

DPS = 60


def qpoch(a, b, n=None):
    """``(a; b)_n`` by brute force, or ``(a; b)_inf`` via mpmath.qp."""
    with mp.workdps(DPS):
        if n is None:
            return mp.qp(a, b)
        out = mp.mpf(1)
        for k in range(n):
            out *= 1 - mp.mpf(a) * mp.mpf(b) ** k
        return out


def qbracket(x, b):
    with mp.workdps(DPS):
        b = mp.mpf(b)
        return (1 - b ** x) / (1 - b)


def hermite_poly(n, q):
    """Coefficient list (ascending) of H_n from the three-term recurrence."""
    with mp.workdps(DPS):
        q = mp.mpf(q)
        p = q ** -2
        prev, cur = [mp.mpf(1)], [mp.mpf(0), 2 / mp.sqrt(q)]
        if n == 0:
            return prev
        for m in range(1, n):
            nxt = [mp.mpf(0)] + [2 / mp.sqrt(q) * q ** (-2 * m) * c for c in cur]
            for i, c in enumerate(prev):
                nxt[i] -= 2 * p * qbracket(m, p) * c
            prev, cur = cur, nxt
        return cur


def hermite(n, xi, q):
    with mp.workdps(DPS):
        return mp.polyval(hermite_poly(n, q)[::-1], mp.mpf(xi))


def hermite_ii(n, x, q):
    """Monic q-Hermite II by ``x h_n = h_{n+1} + p^{1-2n} (1 - p^n) h_{n-1}``, p = q^-2."""
    with mp.workdps(DPS):
        p = mp.mpf(q) ** -2
        x = mp.mpf(x)
        prev, cur = mp.mpf(1), x
        if n == 0:
            return prev
        for m in range(1, n):
            prev, cur = cur, x * cur - p ** (1 - 2 * m) * (1 - p ** m) * prev
        return cur


def trig(x, p, odd, dps=DPS):
    """``sum_k (-1)^k p^{k(k+1)} x^{2k+odd} / (p; p)_{2k+odd}``."""
    with mp.workdps(dps):
        x, p = mp.mpf(x), mp.mpf(p)
        total = mp.mpf(0)
        k = 0
        while True:
            j = 2 * k + odd
            t = (-1) ** k * p ** (k * (k + 1)) * x ** j / mp.qp(p, p, j)
            total += t
            if k > 4 and abs(t) < mp.mpf(10) ** (-dps) and abs(x) ** 2 * p ** (2 * k) < 1:
                return total
            k += 1


def trig_lattice(m, q, odd):
    """``f(q^{2m})`` in base ``q^-2`` with enough digits to survive cancellation."""
    q = mp.mpf(q)
    extra = max(0, int(4 * m * m * float(mp.log10(q)))) if m > 0 else 0
    dps = DPS + extra
    with mp.workdps(dps):
        qq = mp.mpf(q)
        val = trig(qq ** (2 * m), qq ** -2, odd, dps)
    with mp.workdps(DPS):
        return +val


def n_q(q):
    with mp.workdps(DPS):
        q = mp.mpf(q)
        return mp.qp(q ** -2, q ** -4) / mp.qp(q ** -4, q ** -4)


def trig_orthogonality(k, l, q, odd, cutoff=40):
    with mp.workdps(DPS):
        qq = mp.mpf(q)
        return mp.fsum(qq ** (-2 * n) * trig_lattice(-(k + n), q, odd) * trig_lattice(-(l + n), q, odd)
                       for n in range(-cutoff, 4 * cutoff + 1))


def ground_c0(q, cutoff=12):
    with mp.workdps(DPS):
        qq = mp.mpf(q)
        return 1 / mp.sqrt(mp.fsum(qq ** (-(l * l + l)) for l in range(-cutoff, cutoff + 1)))


def ground_amplitude(r, nu, q, cutoff=24):
    """``<nu, +1 | 0>^r`` summed over momentum half-indices ``|l| <= cutoff``."""
    with mp.workdps(DPS):
        qq = mp.mpf(q)
        c0 = ground_c0(q, 40)
        c = lambda l: c0 * qq ** (-(l * l + l) / mp.mpf(2))
        pref = n_q(q) / mp.sqrt(2)
        if nu % 2 != r:
            return mp.mpc(0)
        j = (nu - r) // 2
        total = mp.mpc(0)
        for l in range(-cutoff, cutoff + 1):
            m = j + l
            if r == 0:
                total += qq ** m * (c(2 * l) * trig_lattice(m, q, 0)
                                    + 1j * c(2 * l + 1) * trig_lattice(m, q, 1))
            else:
                total -= qq ** m * (c(2 * l + 1) * qq * trig_lattice(m + 1, q, 0)
                                    + 1j * c(2 * l) * trig_lattice(m, q, 1))
        return pref * total


def moment(order, q):
    """Moment from the q-gamma reduction with mpmath.qgamma in base q^-4."""
    if order % 2:
        return mp.mpf(0)
    n = order // 2
    with mp.workdps(DPS):
        qq = mp.mpf(q)
        b4 = qq ** -4
        ratio = mp.qgamma(n + mp.mpf(1) / 2, b4) / mp.qgamma(mp.mpf(1) / 2, b4)
        return qq ** (n * (2 * n - 1)) / 2 ** n * qbracket(2, qq ** -2) ** n * ratio


def hermite_ii_norm(q):
    """Literature closed form of the q-Hermite II normalisation over the full lattice."""
    with mp.workdps(DPS):
        p = mp.mpf(q) ** -2
        P = p * p
        return 2 * mp.qp(P, P) * mp.qp(-p, P) ** 2 / (mp.qp(p, P) * mp.qp(-1, P) * mp.qp(-P, P))


def hermite_ii_weight(k, q):
    with mp.workdps(DPS):
        p = mp.mpf(q) ** -2
        return 1 / mp.qp(-p ** (2 * k), p * p)


if __name__ == "__main__":
    mp.mp.dps = 20
    r2 = mp.sqrt(2)
    print("phi(1/2)", qpoch(0.5, 0.5))
    print("N_q(1.3)", n_q(1.3))
    print("cos lattice 1.3, m=0,1,2", [trig_lattice(m, 1.3, 0) for m in range(3)])
    print("sin lattice 1.3, m=0,1,2", [trig_lattice(m, 1.3, 1) for m in range(3)])
    print("trig sum cos k=l=0", trig_orthogonality(0, 0, 1.3, 0) * n_q(1.3) ** 2)
    print("trig sum sin k=l=1", trig_orthogonality(1, 1, 1.3, 1) * n_q(1.3) ** 2)
    print("c0 sqrt2", ground_c0(r2), "c0 10", ground_c0(10))
    for r, nu in ((0, 0), (0, 2), (0, -4), (1, 1), (1, -1), (1, 3)):
        print("ground", r, nu, ground_amplitude(r, nu, 1.3))
    print("H_6(0.7; 1.2)", hermite(6, 0.7, 1.2))
    print("H_4(0.7; 1.2)", hermite(4, 0.7, 1.2))
    print("H_10(1.3; 1.05)", hermite(10, 1.3, 1.05))
    print("moments sqrt2", [moment(o, r2) for o in (2, 4, 12)])
    print("moments 1.2", [moment(o, 1.2) for o in (2, 8, 12)])
    print("Ntilde 1.3", hermite_ii_norm(1.3))
    print("h~_1(1; 1.3)", hermite_ii(1, 1, 1.3))
    print("h~_3(0.4; 1.3)", hermite_ii(3, 0.4, 1.3))
