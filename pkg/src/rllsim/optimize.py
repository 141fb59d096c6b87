"""Differential-evolution search over two-class UEP variable distributions.

Candidates carry a node-perspective weight vector split into a weak class
(degrees 2-3, optionally 4) and a strong class (the rest), each holding half
the node mass.  Mutation is best + alpha * (member_i - member_j) followed by
projection back onto the two half-simplices.  The degree ceiling grows by one
per generation while improvements keep coming, mirroring the rule of raising
the maximum weight until performance stops getting better.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np


@dataclass(frozen=True)
class Fitness:
    error_floor: bool
    ber: float

    def better_than(self, other) -> bool:
        if other is None:
            return True
        return (self.error_floor, self.ber) < (other.error_floor, other.ber)


@dataclass(frozen=True)
class Candidate:
    degrees: tuple
    delta: tuple
    weak_four: bool = False
    fitness: Fitness | None = None

    def __post_init__(self):
        if len(self.degrees) != len(self.delta):
            raise ValueError("degrees/delta length mismatch")
        if any(b <= a for a, b in zip(self.degrees, self.degrees[1:])):
            raise ValueError("degrees must be strictly increasing")
        if min(self.degrees) < 2:
            raise ValueError("variable degrees below 2 unsupported")
        if any(w < 0 for w in self.delta):
            raise ValueError("negative class weight")
        w, s = self.class_masses()
        if abs(w - 0.5) > 1e-9 or abs(s - 0.5) > 1e-9:
            raise ValueError(f"class masses {w}/{s} != 0.5/0.5")

    def weak_mask(self):
        limit = 4 if self.weak_four else 3
        return np.array([d <= limit for d in self.degrees])

    def class_masses(self):
        d = np.asarray(self.delta)
        m = self.weak_mask()
        return float(d[m].sum()), float(d[~m].sum())

    def as_vnd_delta(self):
        return list(self.degrees), list(self.delta)


def project(degrees, raw_delta, weak_four=False) -> Candidate:
    """Clip negatives and renormalize each class to mass 0.5."""
    degrees = tuple(int(d) for d in degrees)
    raw = np.clip(np.asarray(raw_delta, dtype=np.float64), 0.0, None)
    limit = 4 if weak_four else 3
    mask = np.array([d <= limit for d in degrees])
    out = np.zeros_like(raw)
    for m in (mask, ~mask):
        if not m.any():
            raise ValueError("a protection class has no degrees in support")
        total = raw[m].sum()
        if total <= 0.0:
            # degenerate mutation: fall back to uniform over the class
            out[m] = 0.5 / m.sum()
        else:
            out[m] = 0.5 * raw[m] / total
    return Candidate(degrees=degrees, delta=tuple(float(x) for x in out),
                     weak_four=weak_four)


def random_candidate(degrees, rng, weak_four=False) -> Candidate:
    degrees = tuple(int(d) for d in degrees)
    limit = 4 if weak_four else 3
    mask = np.array([d <= limit for d in degrees])
    raw = np.zeros(len(degrees))
    raw[mask] = rng.dirichlet(np.ones(mask.sum()))
    raw[~mask] = rng.dirichlet(np.ones((~mask).sum()))
    return project(degrees, raw, weak_four)


def _aligned(cand: Candidate, degrees) -> np.ndarray:
    w = dict(zip(cand.degrees, cand.delta))
    return np.array([w.get(d, 0.0) for d in degrees])


def mutate(population, best: Candidate, alpha: float, rng) -> Candidate:
    """best + alpha * (member_i - member_j), projected back onto the classes.

    With alpha = 0 the mutant is the reprojected best regardless of the
    population.  Otherwise at least four members are required and i, j are
    distinct members other than the best itself.
    """
    degrees = best.degrees
    if alpha == 0.0:
        return project(degrees, _aligned(best, degrees), best.weak_four)
    if len(population) < 4:
        raise ValueError("population too small for mutation (need >= 4)")
    candidates = [c for c in population if c is not best]
    i, j = rng.choice(len(candidates), size=2, replace=False)
    vec = (
        _aligned(best, degrees)
        + alpha * (_aligned(candidates[i], degrees) - _aligned(candidates[j], degrees))
    )
    return project(degrees, vec, best.weak_four)


@dataclass
class SearchLogEntry:
    generation: int
    degrees: tuple
    delta: tuple
    error_floor: bool
    ber: float
    is_best: bool


@dataclass
class SearchResult:
    best: Candidate
    log: list
    generations_run: int


def de_optimize(
    init_best: Candidate,
    evaluator,
    alpha: float = 0.5,
    population_size: int = 50,
    max_degree_cap: int = 10,
    generations: int = 50,
    patience: int = 5,
    seed: int = 0,
) -> SearchResult:
    """Generational search seeded from a known-good distribution.

    The degree ceiling grows by one per generation while improvements keep
    coming and the cap allows; each expansion re-randomizes the population on
    the widened support so the new degree gets explored.  Otherwise the
    mutants of one generation become the next population, so the spread
    contracts by about alpha*sqrt(2) per generation and the search refines
    around the incumbent best.  Ends once the ceiling is frozen and
    ``patience`` consecutive generations brought no improvement, or after
    ``generations``.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    if population_size < 1:
        raise ValueError("population_size must be >= 1")
    rng = np.random.default_rng(seed)
    weak_four = init_best.weak_four
    best = replace(init_best, fitness=evaluator(init_best))
    log = [
        SearchLogEntry(0, best.degrees, best.delta, best.fitness.error_floor,
                       best.fitness.ber, True)
    ]
    support = list(init_best.degrees)
    ceiling = max(support)
    population = [random_candidate(support, rng, weak_four) for _ in range(population_size)]
    last_improved = True
    expanding = True
    stagnant = 0
    gens = 0
    for g in range(1, generations + 1):
        gens = g
        if expanding and last_improved and ceiling < max_degree_cap:
            ceiling += 1
            support = sorted(set(support) | {ceiling})
            fit = best.fitness  # zero weight on the new degree, same fitness
            best = replace(project(support, _aligned(best, support), weak_four), fitness=fit)
            population = [
                random_candidate(support, rng, weak_four) for _ in range(population_size)
            ]
        elif expanding and not last_improved:
            expanding = False  # raising the maximum weight stopped helping
        mutants = []
        improved = False
        for _ in range(population_size):
            cand = mutate(population, best, alpha, rng)
            fit = evaluator(cand)
            cand = replace(cand, fitness=fit)
            mutants.append(cand)
            is_best = fit.better_than(best.fitness)
            log.append(
                SearchLogEntry(g, cand.degrees, cand.delta, fit.error_floor, fit.ber, is_best)
            )
            if is_best:
                best = cand
                improved = True
        population = mutants
        last_improved = improved
        stagnant = 0 if improved else stagnant + 1
        if not improved and (not expanding or ceiling >= max_degree_cap) and stagnant >= patience:
            break
    return SearchResult(best=best, log=log, generations_run=gens)


# ---------------------------------------------------------------------------
# evaluators


def make_synthetic_evaluator(target: Candidate):
    """Negative squared distance to a known target distribution (as a BER
    stand-in); closed-form optimum is the target itself."""

    def evaluate(cand: Candidate) -> Fitness:
        degrees = sorted(set(cand.degrees) | set(target.degrees))
        diff = _aligned(cand, degrees) - _aligned(target, degrees)
        return Fitness(error_floor=False, ber=float(np.sum(diff**2)))

    return evaluate


def detect_error_floor(snrs, bers, knee=1e-3, ratio=0.5):
    """Plateau rule: successive-SNR BER ratio above ``ratio`` while already
    below the knee."""
    for (s1, b1), (s2, b2) in zip(zip(snrs, bers), zip(snrs[1:], bers[1:])):
        if b1 < knee and b1 > 0 and b2 / b1 > ratio:
            return True
    return False


def make_simulation_evaluator(
    n=1024, rate=0.65, probe_snrs=(15.5, 16.5), ref_snr=None,
    trials=24, stop_at_errors=None, master_seed=1234, code_seed=3,
    channel_kind="pr", u_o=3, u_i=3, rll_k=3, threads=1, cache=None,
):
    """Fitness from the reduced flipped pipeline.

    Same seeds for every candidate (common random numbers), so the evaluator
    is a deterministic function of the candidate.
    """
    from rllsim.system import ber_sweep, make_system

    ref = ref_snr if ref_snr is not None else probe_snrs[-1]
    if cache is None:
        cache = {}

    def evaluate(cand: Candidate) -> Fitness:
        key = (cand.degrees, cand.delta)
        if key in cache:
            return cache[key]
        vnd, delta = cand.as_vnd_delta()
        system = make_system(
            n=n, rate=rate, vnd=vnd, delta=delta, code_seed=code_seed,
            channel_kind=channel_kind, scheme="type_II", flipping=True,
            rll_k=rll_k, u_o=u_o, u_i=u_i,
        )
        points = ber_sweep(system, list(probe_snrs), trials, stop_at_errors,
                           master_seed=master_seed, threads=threads)
        bers = [p.ber for p in points]
        floor = detect_error_floor(list(probe_snrs), bers)
        ref_ber = bers[list(probe_snrs).index(ref)]
        fit = Fitness(error_floor=floor, ber=ref_ber)
        cache[key] = fit
        return fit

    return evaluate
