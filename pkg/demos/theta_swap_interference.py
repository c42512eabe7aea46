"""Where the partial-SWAP interference channel turns very strong.

Each receiver mostly gets the *other* sender's qubit once the swap angle
is large enough; inside that window every product input distribution
prefers the cross observation and the two cross links carry everything.
The grid test is one-sided: a violating distribution proves the
condition false for good, while a clean sweep only says no counterexample
was found at that resolution, so refining the grid can flip edge angles
from true to false and the window shrinks toward its true extent,
roughly [0.96, 2.18].  At theta = pi/2 (full swap of the signal qubits)
the single-letter rectangle collapses to the origin: each sender alone
conveys nothing to its own receiver.
"""

import math

import numpy as np

from qnetcap.channels import theta_swap
from qnetcap.entropic import ProbDist
from qnetcap.network import CodeDistribution, vsi_capacity, vsi_check

coarse = np.arange(0.7, 2.51, 0.05)
flags = [vsi_check(theta_swap(t), grid=21) for t in coarse]
inside = [t for t, f in zip(coarse, flags) if f]
print(f"scan at grid 21: no counterexample on [{inside[0]:.2f}, {inside[-1]:.2f}]")

print("\nverdicts near the edges as the distribution grid refines:")
for th in (0.93, 0.95, 2.19, 2.21):
    verdicts = [vsi_check(theta_swap(th), grid=g) for g in (11, 21, 41)]
    marks = "  ".join(f"grid {g}: {str(v):5s}" for g, v in zip((11, 21, 41), verdicts))
    print(f"    theta = {th:4.2f}   {marks}")

u = ProbDist.uniform(("0", "1"))
rect = vsi_capacity(theta_swap(math.pi / 2), CodeDistribution.no_time_share(u, u))
bounds = [b for _, b in rect.inequalities]
print(f"\nrectangle bounds at theta = pi/2: {bounds[0]:.2e}, {bounds[1]:.2e}")
print("full swap routes each qubit entirely to the wrong receiver")
