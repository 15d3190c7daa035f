"""q-trigonometric functions on the lattice and the Fourier transform they build.

Run: python3 demos/02_trig_and_fourier.py
"""
from qhermite import QParameter, lattice_trig, n_q
from qhermite.oscillator import fourier_unitarity_defect
from qhermite.qcore import TruncationConfig
from qhermite.qtrig import validate_conventions, trig_orthogonality_sum

qp = QParameter(1.3)

# Three candidate normalisations of the series; only one is orthogonal on the lattice.
print("Worst lattice-orthogonality residual per convention:")
for conv, worst in validate_conventions(qp).items():
    print(f"  {conv.name}: {worst:.3e}")

print("\ncos_q on the lattice x = q^(2m), m = -3..6:")
cos = lattice_trig("cos", -3, 6, qp)
for m, v in zip(range(-3, 7), cos):
    print(f"  m = {m:+d}: {v:+.6e}")
# the tail collapses super-exponentially, which is what makes the sums converge

norm = n_q(qp)
total, _ = trig_orthogonality_sum(0, 0, "cos", qp)
print(f"\nN_q = {norm:.15f};  1/sqrt(sum of cos^2 weights) = {total ** -0.5:.15f}")

for L in (30, 60, 90):
    defect = fourier_unitarity_defect(qp, cfg=TruncationConfig(lattice_cutoff=L))
    print(f"Fourier matrix, cutoff {L}: max |F^H F - I| = {defect:.2e}")
