"""Joint precoder/ISI trellis, exact BCJR detection, and turbo equalization.

The trellis input alphabet is the pre-precoder symbol stream, with the
precoder recursion folded into the state, so the detector emits APPs of the
symbols the decoder cares about directly.  States live over an extended
digit set: 0..A-1 are real symbols, digit A is the virtual blank before and
after the block (amplitude zero, precoder value zero).  Received blocks are
the full zero-history convolution, length N + memory, and the trellis flushes
through ``memory`` blank steps so the forward/backward recursions match the
channel exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from rllsim.ldpc_decode import LLR_CLIP, DecoderState, decode
from rllsim.map_mod import Labeling, Interleaver, deinterleave, interleave

_PROB_FLOOR = 1e-300


@dataclass
class Trellis:
    """Time-invariant branch structure for one channel/precoder pair."""

    alphabet: int
    taps: np.ndarray
    precoded: bool = True
    amplitudes: np.ndarray | None = None

    memory: int = field(init=False)
    n_states: int = field(init=False)
    next_state: np.ndarray = field(init=False, repr=False)
    output: np.ndarray = field(init=False, repr=False)
    flush_next: np.ndarray = field(init=False, repr=False)
    flush_output: np.ndarray = field(init=False, repr=False)
    start_state: int = field(init=False)

    def __post_init__(self):
        A = self.alphabet
        self.taps = np.asarray(self.taps, dtype=np.float64)
        self.memory = len(self.taps) - 1
        if self.amplitudes is None:
            if A == 2:
                self.amplitudes = np.array([1.0, -1.0])
            elif A == 4:
                self.amplitudes = np.array([-3.0, -1.0, 1.0, 3.0]) / np.sqrt(5.0)
            else:
                raise ValueError("alphabet must be 2 or 4 unless amplitudes given")
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.float64)
        # precoding needs at least one symbol of state even on a memoryless tap
        state_mem = max(self.memory, 1) if self.precoded else self.memory
        taps_ext = np.zeros(state_mem + 1)
        taps_ext[: len(self.taps)] = self.taps
        base = A + 1
        S = base**state_mem
        amp_ext = np.append(self.amplitudes, 0.0)  # blank has zero amplitude
        ns = np.zeros((S, A), dtype=np.int64)
        out = np.zeros((S, A), dtype=np.float64)
        fns = np.zeros(S, dtype=np.int64)
        fout = np.zeros(S, dtype=np.float64)
        for s in range(S):
            digits = [(s // base**j) % base for j in range(state_mem)]
            hist = sum(taps_ext[j + 1] * amp_ext[digits[j]] for j in range(state_mem))
            prev = digits[0] if state_mem else A
            prev_val = 0 if prev == A else prev
            tail = (s % base ** max(state_mem - 1, 0)) * base if state_mem else 0
            for a in range(A):
                x = (prev_val + a) % A if self.precoded else a
                ns[s, a] = x + tail if state_mem else 0
                out[s, a] = taps_ext[0] * self.amplitudes[x] + hist
            fns[s] = A + tail if state_mem else 0
            fout[s] = hist
        self.n_states = S
        self.next_state = ns
        self.output = out
        self.flush_next = fns
        self.flush_output = fout
        self.start_state = S - 1 if state_mem else 0  # all-blank digits


@njit(cache=True, nogil=True)
def _ladd(a, b):
    if a < b:
        a, b = b, a
    if b == -np.inf:
        return a
    d = b - a
    if d < -37.0:  # below double precision relevance
        return a
    return a + np.log1p(np.exp(d))


@njit(cache=True, nogil=True)
def _bcjr_core(r, log_priors, ns, out, fns, fout, start, inv2s2, n_sym, n_flush):
    S, A = out.shape
    T = n_sym + n_flush
    NEG = -np.inf
    alpha = np.full((T + 1, S), NEG)
    alpha[0, start] = 0.0
    for t in range(T):
        if t < n_sym:
            for s in range(S):
                a_s = alpha[t, s]
                if a_s == NEG:
                    continue
                for a in range(A):
                    g = log_priors[t, a] - (r[t] - out[s, a]) ** 2 * inv2s2
                    j = ns[s, a]
                    alpha[t + 1, j] = _ladd(alpha[t + 1, j], a_s + g)
        else:
            for s in range(S):
                a_s = alpha[t, s]
                if a_s == NEG:
                    continue
                g = -((r[t] - fout[s]) ** 2) * inv2s2
                j = fns[s]
                alpha[t + 1, j] = _ladd(alpha[t + 1, j], a_s + g)
        # normalize to keep magnitudes bounded
        mx = NEG
        for s in range(S):
            if alpha[t + 1, s] > mx:
                mx = alpha[t + 1, s]
        for s in range(S):
            alpha[t + 1, s] -= mx

    beta = np.full((T + 1, S), NEG)
    for s in range(S):
        beta[T, s] = 0.0
    for t in range(T - 1, -1, -1):
        if t < n_sym:
            for s in range(S):
                acc = NEG
                for a in range(A):
                    g = log_priors[t, a] - (r[t] - out[s, a]) ** 2 * inv2s2
                    acc = _ladd(acc, g + beta[t + 1, ns[s, a]])
                beta[t, s] = acc
        else:
            for s in range(S):
                beta[t, s] = -((r[t] - fout[s]) ** 2) * inv2s2 + beta[t + 1, fns[s]]
        mx = NEG
        for s in range(S):
            if beta[t, s] > mx:
                mx = beta[t, s]
        for s in range(S):
            beta[t, s] -= mx

    post = np.full((n_sym, A), NEG)
    for t in range(n_sym):
        for s in range(S):
            a_s = alpha[t, s]
            if a_s == NEG:
                continue
            for a in range(A):
                g = log_priors[t, a] - (r[t] - out[s, a]) ** 2 * inv2s2
                post[t, a] = _ladd(post[t, a], a_s + g + beta[t + 1, ns[s, a]])
    return post


def bcjr(r, trellis: Trellis, sigma: float, priors=None):
    """Exact symbol APPs under Gaussian branch metrics.

    ``r`` must hold n_sym + memory samples (full convolution).  ``priors`` is
    an (n_sym, A) probability table; rows are floored and renormalized.
    Returns an (n_sym, A) APP table whose rows sum to 1.
    """
    r = np.asarray(r, dtype=np.float64)
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    n_flush = trellis.memory
    n_sym = len(r) - n_flush
    if n_sym < 1:
        raise ValueError("received block shorter than the channel memory")
    A = trellis.alphabet
    if priors is None:
        priors = np.full((n_sym, A), 1.0 / A)
    priors = np.maximum(np.asarray(priors, dtype=np.float64), _PROB_FLOOR)
    priors /= priors.sum(axis=1, keepdims=True)
    if priors.shape != (n_sym, A):
        raise ValueError("priors shape mismatch")
    post = _bcjr_core(
        r,
        np.log(priors),
        trellis.next_state,
        trellis.output,
        trellis.flush_next,
        trellis.flush_output,
        trellis.start_state,
        1.0 / (2.0 * sigma * sigma),
        n_sym,
        n_flush,
    )
    post -= post.max(axis=1, keepdims=True)
    app = np.exp(post)
    app /= app.sum(axis=1, keepdims=True)
    return app


# ---------------------------------------------------------------------------
# symbol <-> bit LLR conversion


def symbol_bit_llr(app, labeling: Labeling | None = None):
    """Per-bit LLRs log(P(bit=0)/P(bit=1)) from a symbol APP table.

    4-ary: returns the interleaved (Z1, Z2) bit stream, 2 bits per symbol.
    Binary (labeling None): one LLR per symbol.  Outputs are clipped to twice
    the decoder range: the extrinsic subtraction L(y) - La(y) needs headroom
    above the +/-50 prior rail, otherwise saturated agreement would cancel to
    zero channel evidence.
    """
    app = np.maximum(np.asarray(app, dtype=np.float64), _PROB_FLOOR)
    if labeling is None:
        llr = np.log(app[:, 0]) - np.log(app[:, 1])
        return np.clip(llr, -2 * LLR_CLIP, 2 * LLR_CLIP)
    bits = labeling.bits_of_symbol  # (4, 2)
    out = np.empty((app.shape[0], 2))
    for b in range(2):
        mask0 = bits[:, b] == 0
        p0 = app[:, mask0].sum(axis=1)
        p1 = app[:, ~mask0].sum(axis=1)
        out[:, b] = np.log(np.maximum(p0, _PROB_FLOOR)) - np.log(np.maximum(p1, _PROB_FLOOR))
    return np.clip(out.reshape(-1), -2 * LLR_CLIP, 2 * LLR_CLIP)


def bit_llr_to_priors(bit_llr, labeling: Labeling | None = None):
    """Symbol prior table from per-bit LLRs, assuming intra-symbol independence."""
    bit_llr = np.asarray(bit_llr, dtype=np.float64)
    if labeling is None:
        p0 = 1.0 / (1.0 + np.exp(-bit_llr))
        return np.stack([p0, 1.0 - p0], axis=1)
    if len(bit_llr) % 2 != 0:
        raise ValueError("bit LLR stream length must be even")
    pairs = bit_llr.reshape(-1, 2)
    # log P(bit = b) for b in {0, 1}
    lp0 = -np.log1p(np.exp(-pairs))
    lp1 = -np.log1p(np.exp(pairs))
    bits = labeling.bits_of_symbol
    logp = np.empty((pairs.shape[0], 4))
    for s in range(4):
        z1, z2 = bits[s]
        logp[:, s] = (lp0[:, 0] if z1 == 0 else lp1[:, 0]) + (
            lp0[:, 1] if z2 == 0 else lp1[:, 1]
        )
    logp -= logp.max(axis=1, keepdims=True)
    p = np.exp(logp)
    p /= p.sum(axis=1, keepdims=True)
    return p


# ---------------------------------------------------------------------------
# turbo equalization


@dataclass
class TurboSchedule:
    """Outer/inner iteration counts and decoder scheduling."""

    u_o: int = 5
    u_i: int = 3
    reset: bool = False
    algo: str = "sum-product"

    def __post_init__(self):
        if self.u_o < 1 or self.u_i < 1:
            raise ValueError("iteration counts must be >= 1")


@dataclass
class TurboResult:
    message: np.ndarray
    hard_codeword: np.ndarray
    ber_trace: list          # per outer iteration, message BER (nan without ref)
    parity_trace: list
    decoder_in_llr: list     # populated when collect_llrs is set
    decoder_out_llr: list


def turbo_decode(
    r,
    graph,
    encoder,
    trellis: Trellis,
    sigma: float,
    sched: TurboSchedule,
    labeling: Labeling | None = None,
    interleaver: Interleaver | None = None,
    ref_message=None,
    collect_llrs: bool = False,
) -> TurboResult:
    """Alternate MAP equalization and LDPC decoding for u_o rounds.

    Extrinsic exchange at the equalizer boundary follows
    La(v) = L(y) - La(y) and La(y) = L(v) - La(v): the decoder sees the
    equalizer output minus what it provided, and vice versa.
    """
    n = graph.n_var
    n_sym = n // 2 if labeling is not None else n
    if len(np.asarray(r)) != n_sym + trellis.memory:
        raise ValueError("received length inconsistent with code and trellis")
    if interleaver is not None and interleaver.n != n:
        raise ValueError("interleaver length != codeword length")

    la_y = np.zeros(n)
    state = DecoderState(graph)
    ber_trace, parity_trace = [], []
    dec_in, dec_out = [], []
    hard = np.zeros(n, dtype=np.uint8)
    app_v = np.zeros(n)

    for _ in range(sched.u_o):
        priors = bit_llr_to_priors(la_y, labeling)
        app = bcjr(r, trellis, sigma, priors)
        l_y = symbol_bit_llr(app, labeling)
        la_v = l_y - la_y
        l_d = deinterleave(interleaver, la_v) if interleaver is not None else la_v
        app_v, ext_v, hard, parity_ok = decode(
            state, l_d, sched.u_i, algo=sched.algo, reset=sched.reset
        )
        out = interleave(interleaver, ext_v) if interleaver is not None else ext_v
        la_y = np.clip(out, -LLR_CLIP, LLR_CLIP)
        parity_trace.append(parity_ok)
        if ref_message is not None:
            ber_trace.append(float(np.mean(hard[encoder.free_cols] != ref_message)))
        else:
            ber_trace.append(float("nan"))
        if collect_llrs:
            dec_in.append(l_d.copy())
            dec_out.append(app_v.copy())

    return TurboResult(
        message=hard[encoder.free_cols].copy(),
        hard_codeword=hard,
        ber_trace=ber_trace,
        parity_trace=parity_trace,
        decoder_in_llr=dec_in,
        decoder_out_llr=dec_out,
    )
