# Solving P u = f for a convergent f can still produce a divergent u.
# Run: python demos/02_divergent_solution.py

import math

import numpy as np

from formalauto import Series1, estimate_order, parse_operator, solve_1d, verify_bound

P = parse_operator("1 + z*Dz + z^3*Dz^2")
f = Series1.of([1] * 200)   # 1 / (1 - z), radius of convergence 1

sol = solve_1d(P, f, 199)
u = sol.u
print("first coefficients:", [str(c) for c in u.coeffs[:8]])

# log|u_n| against log n! : the slope approaches 1
logs = np.array([math.log(abs(c.re.numerator)) - math.log(c.re.denominator) for c in u.coeffs])
lgam = np.array([math.lgamma(n + 1) for n in range(len(logs))])
for n in (20, 50, 100, 199):
    print(f"n = {n:3d}  log|u_n| / log n! = {logs[n] / lgam[n]:.3f}")

est = estimate_order(u)
print("\nfitted Gevrey order:", est.s_hat, f"(float {est.s_float:.4f}, window {est.fit_window})")

# exact bound checks on the first 100 coefficients
print("s = 1 bound:", verify_bound(u, 1, 100))
print("s = 0 first failure at n =", verify_bound(u, 0, 100))
