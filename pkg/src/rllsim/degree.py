"""Degree-distribution algebra for irregular LDPC ensembles.

A distribution carries variable-side and check-side (degree, weight) lists in
either the edge perspective (fraction of edges attached to degree-k nodes) or
the node perspective (fraction of nodes of degree k).  Conversions between the
two and the design rate are the primitives everything else builds on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_WEIGHT_TOL = 1e-12


class InvalidDistributionError(ValueError):
    """Degree profile violates a structural invariant."""


class InfeasibleDistributionError(ValueError):
    """Distribution implies a design rate outside (0, 1)."""


def _check_side(pairs, side):
    if not pairs:
        raise InvalidDistributionError(f"{side} side is empty")
    degs = [int(d) for d, _ in pairs]
    ws = np.array([float(w) for _, w in pairs], dtype=np.float64)
    if any(d < 1 for d in degs):
        raise InvalidDistributionError(f"{side} side contains degree < 1")
    if any(b <= a for a, b in zip(degs, degs[1:])):
        raise InvalidDistributionError(f"{side} degrees must be strictly increasing")
    if np.any(ws < 0):
        raise InvalidDistributionError(f"{side} weights must be nonnegative")
    total = float(ws.sum())
    if abs(total - 1.0) > 1e-9:
        raise InvalidDistributionError(f"{side} weights sum to {total}, expected 1")
    # snap tiny float drift so downstream arithmetic sees an exact simplex point
    ws = ws / total
    return list(zip(degs, ws.tolist()))


@dataclass(frozen=True)
class DegreeDistribution:
    """Variable/check degree profile in one perspective.

    Parameters
    ----------
    var_degrees, chk_degrees : list of (degree, weight)
        Strictly increasing degrees >= 1; weights sum to 1.
    perspective : {"edge", "node"}
        Edge perspective is the lambda/rho view, node perspective the
        delta/gamma view.
    """

    var_degrees: list = field(default_factory=list)
    chk_degrees: list = field(default_factory=list)
    perspective: str = "edge"

    def __post_init__(self):
        if self.perspective not in ("edge", "node"):
            raise InvalidDistributionError(f"unknown perspective {self.perspective!r}")
        object.__setattr__(self, "var_degrees", _check_side(self.var_degrees, "variable"))
        object.__setattr__(self, "chk_degrees", _check_side(self.chk_degrees, "check"))

    # -- convenience views -------------------------------------------------
    def var_arrays(self):
        d = np.array([k for k, _ in self.var_degrees], dtype=np.int64)
        w = np.array([w for _, w in self.var_degrees], dtype=np.float64)
        return d, w

    def chk_arrays(self):
        d = np.array([k for k, _ in self.chk_degrees], dtype=np.int64)
        w = np.array([w for _, w in self.chk_degrees], dtype=np.float64)
        return d, w

    def to_json_dict(self):
        return {
            "var": [[int(k), float(w)] for k, w in self.var_degrees],
            "chk": [[int(l), float(w)] for l, w in self.chk_degrees],
            "perspective": self.perspective,
        }

    @classmethod
    def from_json_dict(cls, obj):
        return cls(
            var_degrees=[(int(k), float(w)) for k, w in obj["var"]],
            chk_degrees=[(int(l), float(w)) for l, w in obj["chk"]],
            perspective=obj["perspective"],
        )


def _convert_side(pairs, direction):
    degs = np.array([k for k, _ in pairs], dtype=np.float64)
    ws = np.array([w for _, w in pairs], dtype=np.float64)
    if direction == "edge_to_node":
        raw = ws / degs
    else:
        raw = ws * degs
    raw /= raw.sum()
    return [(int(k), float(w)) for k, w in zip(degs, raw)]


def edge_to_node(d: DegreeDistribution) -> DegreeDistribution:
    """Convert lambda/rho (edge view) to delta/gamma (node view).

    delta_k = (lambda_k / k) / sum_j (lambda_j / j), same on the check side.
    """
    if d.perspective != "edge":
        raise InvalidDistributionError("edge_to_node expects an edge-perspective input")
    return DegreeDistribution(
        var_degrees=_convert_side(d.var_degrees, "edge_to_node"),
        chk_degrees=_convert_side(d.chk_degrees, "edge_to_node"),
        perspective="node",
    )


def node_to_edge(d: DegreeDistribution) -> DegreeDistribution:
    """Inverse of :func:`edge_to_node`: lambda_k proportional to k * delta_k."""
    if d.perspective != "node":
        raise InvalidDistributionError("node_to_edge expects a node-perspective input")
    return DegreeDistribution(
        var_degrees=_convert_side(d.var_degrees, "node_to_edge"),
        chk_degrees=_convert_side(d.chk_degrees, "node_to_edge"),
        perspective="edge",
    )


def average_node_degrees(d: DegreeDistribution):
    """Mean variable and check node degree under either perspective."""
    vd, vw = d.var_arrays()
    cd, cw = d.chk_arrays()
    if d.perspective == "node":
        return float(vd @ vw), float(cd @ cw)
    # edge view: mean node degree is 1 / sum(w_k / k)
    return 1.0 / float((vw / vd).sum()), 1.0 / float((cw / cd).sum())


def design_rate(d: DegreeDistribution) -> float:
    """Design rate 1 - avg_var_degree / avg_chk_degree.

    Equals 1 - M/N of any graph realizing the distribution (up to the integer
    rounding of node counts).
    """
    avg_v, avg_c = average_node_degrees(d)
    rate = 1.0 - avg_v / avg_c
    if not 0.0 < rate < 1.0:
        raise InfeasibleDistributionError(f"design rate {rate} outside (0, 1)")
    return rate


def node_counts(weights, total):
    """Integer node counts from node-perspective weights.

    Rounds weight*total per class and repairs the largest-weight class so the
    counts sum exactly to ``total``.
    """
    ws = np.asarray(weights, dtype=np.float64)
    counts = np.rint(ws * total).astype(np.int64)
    counts[int(np.argmax(ws))] += total - int(counts.sum())
    if np.any(counts < 0):
        raise InfeasibleDistributionError("node counts went negative after rounding")
    return counts
