"""Deliberate flipping for the (0,k) run-length constraint.

Walks the sliding-window constrainer over a worst-case all-zero block and a
random block, then checks the Monte-Carlo flip rate against the run-length
Markov chain.
"""

import numpy as np

from rllsim.rll_flip import apply_binary, binary_locate, flip_rate, verify_rll

k = 3
v = np.zeros(16, dtype=np.uint8)
loc = binary_locate(v, k)
print(f"all-zero block, k={k}")
print("  v =", v.tolist())
print("  q =", loc.q.tolist(), " (every (k+1)-th zero flips)")
print("  y =", apply_binary(v, loc).tolist())

rng = np.random.default_rng(0)
v = rng.integers(0, 2, 24, dtype=np.uint8)
loc = binary_locate(v, k)
y = apply_binary(v, loc)
print("\nrandom block")
print("  v =", v.tolist())
print("  y =", y.tolist())
print("  constraint satisfied:", verify_rll(y, k))
print("  flips:", int(loc.q.sum()))

# stationary flip probability of the (k+1)-state run-length chain:
# p^(k+1) (1-p) / (1 - p^(k+1)) with p = P(zero symbol)
p = 0.5
chain = p ** (k + 1) * (1 - p) / (1 - p ** (k + 1))
mean, std = flip_rate(k, n=2000, trials=300, seed=1)
print(f"\nflip rate, k={k}: monte-carlo {mean:.5f}  chain {chain:.5f}")

for kk in (1, 2, 3, 7):
    mean, _ = flip_rate(kk, n=2000, trials=100, seed=kk)
    chain = p ** (kk + 1) * (1 - p) / (1 - p ** (kk + 1))
    print(f"  k={kk}: rate {mean:.6f} (chain {chain:.6f})")
