#!/usr/bin/env python3
"""Print h(beta) over a beta grid for small k, and the large-k bound."""

import numpy as np

from cuckoo_thresholds import analytic

betas = np.round(np.arange(0.50, 1.0001, 0.05), 2)

print("=== h(beta) at xi = xi*(k) ===\n")
print(f"  {'beta':>6}" + "".join(f"{'k=' + str(k):>12}" for k in range(3, 8)))
for beta in betas:
    cells = []
    for k in range(3, 8):
        xi = analytic.solve_xi_star(k)
        try:
            cells.append(f"{analytic.h_beta(float(beta), k, xi):>12.5f}")
        except ValueError:
            cells.append(f"{'-':>12}")
    print(f"  {beta:>6.2f}" + "".join(cells))

print("\n=== f on the boundary q = 1 - 2(1-beta)/k, k = 3 ===\n")
xi3 = analytic.solve_xi_star(3)
for beta in betas[betas < 1.0]:
    print(f"  beta={beta:.2f}  f={analytic.f_upper_boundary(float(beta), 3, xi3):.5f}")

print("\n=== Large-k bound ===\n")
for k in range(7, 21):
    print(f"  k={k:<3} bound={analytic.h_large_k_bound(k):.5f}")
