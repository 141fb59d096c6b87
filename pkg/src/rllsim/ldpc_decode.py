"""Iterative message-passing decoding with reset and non-reset scheduling.

Flooding schedule: every check node updates, then every variable node.
Messages are clipped to +/-50.  Sum-product check updates use the stable
log-magnitude/sign decomposition; min-sum uses the two smallest magnitudes
per check.  In the non-reset schedule the edge messages persist across calls
and a new channel LLR vector only replaces the intrinsic term inside the
variable-to-check messages.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from rllsim.peg import TannerGraph

LLR_CLIP = 50.0
_PHI_FLOOR = 1e-12


@njit(cache=True, nogil=True)
def _phi(x):
    # -log(tanh(x/2)), self-inverse on (0, inf)
    if x < _PHI_FLOOR:
        x = _PHI_FLOOR
    t = np.tanh(0.5 * x)
    if t <= 0.0:
        return 709.0
    return -np.log(t)


@njit(cache=True, nogil=True)
def _check_update(v2c, c2v, chk_ptr, algo_min_sum):
    m = chk_ptr.shape[0] - 1
    for c in range(m):
        lo, hi = chk_ptr[c], chk_ptr[c + 1]
        if hi - lo == 1:
            # single-input check pins its variable toward zero
            c2v[lo] = LLR_CLIP
            continue
        neg = 0
        if algo_min_sum:
            min1 = 1e30
            min2 = 1e30
            arg1 = lo
            for e in range(lo, hi):
                a = abs(v2c[e])
                if v2c[e] < 0:
                    neg += 1
                if a < min1:
                    min2 = min1
                    min1 = a
                    arg1 = e
                elif a < min2:
                    min2 = a
            for e in range(lo, hi):
                mag = min2 if e == arg1 else min1
                if mag > LLR_CLIP:
                    mag = LLR_CLIP
                s = -1.0 if (neg - (1 if v2c[e] < 0 else 0)) % 2 == 1 else 1.0
                c2v[e] = s * mag
        else:
            total = 0.0
            for e in range(lo, hi):
                if v2c[e] < 0:
                    neg += 1
                total += _phi(abs(v2c[e]))
            for e in range(lo, hi):
                rest = total - _phi(abs(v2c[e]))
                mag = _phi(rest)
                if mag > LLR_CLIP:
                    mag = LLR_CLIP
                s = -1.0 if (neg - (1 if v2c[e] < 0 else 0)) % 2 == 1 else 1.0
                c2v[e] = s * mag


@njit(cache=True, nogil=True)
def _variable_update(v2c, c2v, edge_var, channel, extrinsic):
    n = channel.shape[0]
    for v in range(n):
        extrinsic[v] = 0.0
    for e in range(edge_var.shape[0]):
        extrinsic[edge_var[e]] += c2v[e]
    for e in range(edge_var.shape[0]):
        msg = channel[edge_var[e]] + extrinsic[edge_var[e]] - c2v[e]
        if msg > LLR_CLIP:
            msg = LLR_CLIP
        elif msg < -LLR_CLIP:
            msg = -LLR_CLIP
        v2c[e] = msg


@njit(cache=True, nogil=True)
def _run_iterations(v2c, c2v, edge_var, chk_ptr, channel, extrinsic, iters, algo_min_sum):
    for _ in range(iters):
        _check_update(v2c, c2v, chk_ptr, algo_min_sum)
        _variable_update(v2c, c2v, edge_var, channel, extrinsic)


@dataclass
class DecoderState:
    """Per-worker decoder state; owns its edge message arrays."""

    graph: TannerGraph
    edge_var: np.ndarray = field(init=False, repr=False)
    chk_ptr: np.ndarray = field(init=False, repr=False)
    v2c: np.ndarray = field(init=False, repr=False)
    c2v: np.ndarray = field(init=False, repr=False)
    last_channel: np.ndarray = field(init=False, repr=False)
    iterations: int = 0
    _primed: bool = False

    def __post_init__(self):
        edge_var, chk_ptr = self.graph.edge_layout()
        self.edge_var = edge_var
        self.chk_ptr = chk_ptr
        e = self.graph.n_edges
        self.v2c = np.zeros(e, dtype=np.float64)
        self.c2v = np.zeros(e, dtype=np.float64)
        self.last_channel = np.zeros(self.graph.n_var, dtype=np.float64)

    def reset(self):
        self.v2c[:] = 0.0
        self.c2v[:] = 0.0
        self.last_channel[:] = 0.0
        self.iterations = 0
        self._primed = False


def decode(state: DecoderState, channel_llr, iters: int, algo: str = "sum-product",
           reset: bool = True):
    """Run ``iters`` flooding iterations; returns (app, extrinsic, hard, parity_ok).

    app = channel + extrinsic with the channel clipped to +/-50 on entry.
    hard bit is 0 where the app LLR is positive.  With reset=False the edge
    messages persist from the previous call and only the intrinsic part of
    the variable-to-check messages is replaced by the new channel LLRs.
    """
    channel_llr = np.asarray(channel_llr, dtype=np.float64)
    if channel_llr.shape[0] != state.graph.n_var:
        raise ValueError("channel LLR length mismatch")
    if np.isnan(channel_llr).any():
        raise ValueError("NaN in channel LLRs")
    if iters < 1:
        raise ValueError("iters must be >= 1")
    channel = np.clip(channel_llr, -LLR_CLIP, LLR_CLIP)

    if reset or not state._primed:
        state.v2c[:] = channel[state.edge_var]
        state.c2v[:] = 0.0
    else:
        delta = channel - state.last_channel
        state.v2c += delta[state.edge_var]
        np.clip(state.v2c, -LLR_CLIP, LLR_CLIP, out=state.v2c)
    state.last_channel[:] = channel
    state._primed = True

    extrinsic = np.zeros(state.graph.n_var, dtype=np.float64)
    algo_min_sum = {"sum-product": False, "min-sum": True}[algo]
    _run_iterations(
        state.v2c, state.c2v, state.edge_var, state.chk_ptr, channel, extrinsic,
        iters, algo_min_sum,
    )
    state.iterations += iters

    app = channel + extrinsic
    hard = (app <= 0).astype(np.uint8)
    parity_ok = _parity_ok(hard, state.edge_var, state.chk_ptr)
    return app, extrinsic, hard, bool(parity_ok)


@njit(cache=True, nogil=True)
def _parity_ok(hard, edge_var, chk_ptr):
    m = chk_ptr.shape[0] - 1
    for c in range(m):
        s = 0
        for e in range(chk_ptr[c], chk_ptr[c + 1]):
            s ^= hard[edge_var[e]]
        if s:
            return False
    return True
