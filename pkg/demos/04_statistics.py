"""The statistics on their own, fed with synthetic data.

    python3 demos/04_statistics.py
"""

import random

from kernscan.stats import logseries
from kernscan.stats.buckets import bucket_sizes
from kernscan.stats.rates import relative_rate
from kernscan.stats.survival import km_estimate

rng = random.Random(7)

# fault counts per file follow a log series; recover its parameter
theta = 0.8
draws = logseries.sample(theta, 3000, rng)
hist = {}
for k in draws:
    hist[k] = hist.get(k, 0) + 1
fit = logseries.logseries_fit(hist)
print(f"log series: true theta {theta}, fitted {fit.theta:.4f}, "
      f"chi2 {fit.chi2:.2f} on {fit.dof} dof, p={fit.p_value:.3f}")

# lifespans with censoring
obs = []
for _ in range(200):
    life = rng.expovariate(1 / 1.5)
    window = rng.uniform(0.5, 6.0)
    obs.append((min(life, window), life <= window))
curve = km_estimate(obs, bands=True)
print(f"survival: restricted mean {curve.mean:.2f} y up to {curve.bound:.2f} y, median {curve.median:.2f} y")

# a directory whose rate is double everyone else's
counts = {"drivers": (20, 100), "fs": (5, 50), "net": (5, 50)}
print("relative rate of drivers:", relative_rate("drivers", counts))

print("log-halving bucket sizes for 100 functions:", bucket_sizes(100, "log_halving", 6))
