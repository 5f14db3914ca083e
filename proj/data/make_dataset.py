"""Regenerates the bundled 20x50 sparse-regression dataset."""
import numpy as np

rng = np.random.default_rng(20240)
A = rng.standard_normal((20, 50)) / np.sqrt(20)
x = np.zeros(50)
x[rng.choice(50, 5, replace=False)] = rng.choice([-1.0, 1.0], 5) * rng.uniform(1, 2, 5)
b = A @ x + 0.01 * rng.standard_normal(20)
np.savetxt("regression_20x50_A.csv", A, delimiter=",", fmt="%.17g")
np.savetxt("regression_20x50_b.csv", b, fmt="%.17g")
np.savetxt("regression_20x50_xtrue.csv", x, fmt="%.17g")
