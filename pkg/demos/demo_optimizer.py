"""Differential-evolution search over two-class degree distributions.

First on a synthetic objective with a known optimum, then a tiny run of the
real reduced-pipeline evaluator (a few minutes of simulation).
"""

from rllsim.optimize import (
    Candidate,
    de_optimize,
    make_simulation_evaluator,
    make_synthetic_evaluator,
)

target = Candidate(degrees=(2, 5, 7), delta=(0.5, 0.46, 0.04))
res = de_optimize(
    Candidate(degrees=(2, 5), delta=(0.5, 0.5)),
    make_synthetic_evaluator(target),
    alpha=0.5, population_size=20, max_degree_cap=8, generations=40, seed=1,
)
print("synthetic objective:")
print(f"  target {target.degrees} {target.delta}")
print(f"  found  {res.best.degrees} {tuple(round(float(w), 4) for w in res.best.delta)}")
print(f"  squared distance {res.best.fitness.ber:.2e} in {res.generations_run} generations")

print("\nreduced pipeline (N=512, PR target), small budget:")
evaluator = make_simulation_evaluator(
    n=512, rate=0.65, probe_snrs=(14.5, 15.5), trials=10, u_o=3, u_i=3,
    master_seed=11,
)
res = de_optimize(
    Candidate(degrees=(2, 5), delta=(0.5, 0.5)),
    evaluator,
    alpha=0.5, population_size=4, max_degree_cap=7, generations=3, seed=2,
)
for e in res.log:
    mark = " <- best" if e.is_best else ""
    print(f"  gen {e.generation}: VND {list(e.degrees)} "
          f"delta {[round(float(w), 3) for w in e.delta]} ber {e.ber:.2e} "
          f"floor={e.error_floor}{mark}")
