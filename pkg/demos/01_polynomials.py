"""The q-Hermite polynomials: two ways to compute them, and their limit at q = 1.

Run: python3 demos/01_polynomials.py
"""
import numpy as np
from numpy.polynomial.hermite import hermval

from qhermite import EvalMethod, QParameter, hermite_coefficients, hermite_eval
from qhermite.hermite import christoffel_darboux_residual

qp = QParameter(np.sqrt(2.0))

print("Coefficients at q = sqrt 2 (ascending powers of xi):")
for n in range(5):
    coeffs = hermite_coefficients(n, qp).coeffs
    print(f"  H_{n}:", "  ".join(f"{c:+.6f}" for c in coeffs))

# The three-term recursion and the explicit sum agree to rounding.
print("\nRecursion against closed form at q = 1.2, n = 20:")
q12 = QParameter(1.2)
for xi in (-2.0, 0.4, 2.5):
    a = hermite_eval(20, xi, q12, EvalMethod.RECURSION)
    b = hermite_eval(20, xi, q12, EvalMethod.CLOSED_FORM)
    print(f"  xi = {xi:+.1f}:  {a:+.12e}  vs  {b:+.12e}")

# The reproducing kernel identity holds at pairs of distinct points.
print("\nChristoffel-Darboux residuals at q = 2, n = 12:")
for a, b in ((-1.7, 0.2), (0.9, 1.8)):
    print(f"  ({a}, {b}): {christoffel_darboux_residual(12, a, b, QParameter(2.0)):.2e}")

# Near q = 1 the classical Hermite polynomials come back.
print("\nApproach to the classical H_6(1.3) = %.6f:" % hermval(1.3, [0] * 6 + [1]))
for eps in (1e-2, 1e-4, 1e-6):
    print(f"  q = 1 + {eps:g}:  {hermite_eval(6, 1.3, QParameter(1 + eps)):.6f}")
