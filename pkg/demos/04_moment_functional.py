"""The moment functional: a closed product, a q-gamma ratio and two lattice sums.

Run: python3 demos/04_moment_functional.py
"""
import math

from qhermite import QParameter, expand_power, moment_closed, moment_measure, moment_qgamma

qp = QParameter(math.sqrt(2.0))
print(f"{'order':>5} {'closed':>22} {'q-gamma':>22} {'mu^0':>22} {'mu^1':>22}")
for order in range(0, 13, 2):
    vals = (moment_closed(order, qp), moment_qgamma(order, qp),
            moment_measure(order, 0, qp), moment_measure(order, 1, qp))
    print(f"{order:>5} " + " ".join(f"{v:22.15g}" for v in vals))

print("\nodd orders vanish on both measures:",
      [moment_measure(k, r, qp) for k in (1, 3, 5) for r in (0, 1)])

# The H_0 coefficient of xi^k is the moment, since only H_0 survives the integral.
exp = expand_power(6, qp)
print("\nxi^6 in the Hermite basis:", {6 - 2 * j: f"{b:.6g}" for j, b in exp.coeffs.items()})
print("constant term", exp.constant_term, "vs moment", moment_closed(6, qp))

print("\nGaussian limit (2n-1)!!/2^n at q = 1 + 1e-6:")
near = QParameter(1 + 1e-6)
for n in range(1, 6):
    print(f"  n = {n}: {moment_closed(2 * n, near):.6f}  vs  {math.prod(range(1, 2 * n, 2)) / 2 ** n}")
