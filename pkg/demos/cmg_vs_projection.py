"""Two routes to the common-message rate region, one answer.

The nine-inequality region in the net rates (R1, R2) can also be reached
the long way: write each receiver's constraints in the split rates
(R1p, R1c, R2p, R2c), intersect, and project onto R1 = R1p + R1c,
R2 = R2p + R2c by Fourier-Motzkin elimination.  The demo builds both for
a random code distribution on the shared-output BB84 channel and checks
membership agreement on a dense grid.
"""

import numpy as np

from qnetcap.channels import builtin
from qnetcap.network import (
    cmg_region,
    cmg_region_via_projection,
    random_cmg_distribution,
)

ch = builtin("bb84_qmac")
dist = random_cmg_distribution(ch, seed=7)

direct = cmg_region(ch, dist)
projected = cmg_region_via_projection(ch, dist)

print("direct construction:")
for coeffs, bound in direct.inequalities:
    print(f"    {coeffs[0]:+.0f} R1 {coeffs[1]:+.0f} R2 <= {bound:.6f}")
print("after projection:")
for coeffs, bound in projected.inequalities:
    print(f"    {coeffs[0]:+.0f} R1 {coeffs[1]:+.0f} R2 <= {bound:.6f}")

top = 1.05 * max(b for r in (direct, projected) for _, b in r.inequalities)
axis = np.linspace(0.0, top, 200)
agree = sum(
    direct.contains((x, y), tol=1e-6) == projected.contains((x, y), tol=1e-6)
    for x in axis
    for y in axis
)
print(f"membership agreement on a 200x200 grid: {agree / 200**2:.6f}")
