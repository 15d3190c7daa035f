"""Two ground states, two disjoint measures, one set of orthogonal polynomials.

Run: python3 demos/03_two_measures.py
"""
from qhermite import QParameter, measure
from qhermite.hermite import hermite_norm
from qhermite.oscillator import hermite_orthogonality_sum

qp = QParameter(1.3)
mu0, mu1 = measure(0, qp), measure(1, qp)

print("Largest weights (nu, weight) of each measure:")
for mu in (mu0, mu1):
    top = sorted(zip(mu.indices, mu.weights), key=lambda t: -t[1])[:4]
    print(f"  r = {mu.r}:", ", ".join(f"({nu:+d}, {w:.4f})" for nu, w in top),
          f" total mass {mu.total_mass():.15f}")

support0 = {int(nu) for nu in mu0.indices}
support1 = {int(nu) for nu in mu1.indices}
print("\nsupports overlap:", bool(support0 & support1))

print("\nsum H_n H_m dmu^r divided by 2^n [n]!:")
print("        " + "".join(f"   m={m}   " for m in range(5)))
for r in (0, 1):
    for n in range(5):
        row = [hermite_orthogonality_sum(n, m, r, qp) / hermite_norm(n, qp) for m in range(5)]
        print(f"  r={r} n={n}" + "".join(f" {v:+.2e}" for v in row))
