"""Deliberate-flipping (0,k) run-length constrainers.

The write side forces the constraint by flipping the bit/symbol that would
otherwise complete a run of k+1 zeros.  Flip positions are recorded in a
location vector so tests and analysis can reason about where the intentional
errors landed.  The constraint is enforced within one codeword only; no state
is carried across blocks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LocationVector:
    """Flip positions produced by a sliding-window constrainer.

    ``q[i] == 1`` marks position i as flipped.  For the binary constrainer a
    flip is an XOR with 1; for the quaternary constrainer the zero symbol is
    replaced by ``fill_symbol`` (1 or 2).
    """

    q: np.ndarray
    fill_symbol: int = 1

    def __len__(self):
        return len(self.q)


def binary_locate(v, k: int) -> LocationVector:
    """Sliding-window location vector for a binary (0,k) constraint.

    Window size k+1.  For i = 0 .. N-k-1, if both v[i:i+k+1] and q[i:i+k+1]
    are all-zero then q[i+k] is set, i.e. the bit completing a run of k+1
    zeros is flipped.  The flipped sequence is ``v XOR q``.
    """
    v = np.asarray(v, dtype=np.uint8)
    n = len(v)
    if n <= k:
        raise ValueError(f"sequence length {n} must exceed k={k}")
    q = np.zeros(n, dtype=np.uint8)
    run = 0  # length of the current all-zero run of v XOR q ending just before i
    for i in range(n):
        if v[i] == 0:
            run += 1
            if run == k + 1:
                q[i] = 1
                run = 0
        else:
            run = 0
    return LocationVector(q=q, fill_symbol=1)


def apply_binary(v, loc: LocationVector):
    """Flipped sequence y = v XOR q."""
    return np.bitwise_xor(np.asarray(v, dtype=np.uint8), loc.q)


def quaternary_locate(w, k: int, fill: int = 1) -> LocationVector:
    """Symbol-level location vector for a quaternary (0,k) constraint.

    Mirrors the binary rule: each symbol that would complete a run of k+1
    zero symbols is replaced by the nonzero ``fill`` symbol (1 or 2).
    """
    if fill not in (1, 2):
        raise ValueError(f"fill symbol must be 1 or 2, got {fill}")
    w = np.asarray(w, dtype=np.uint8)
    if np.any(w > 3):
        raise ValueError("quaternary symbols must lie in 0..3")
    n = len(w)
    if n <= k:
        raise ValueError(f"sequence length {n} must exceed k={k}")
    q = np.zeros(n, dtype=np.uint8)
    run = 0
    for i in range(n):
        if w[i] == 0:
            run += 1
            if run == k + 1:
                q[i] = 1
                run = 0
        else:
            run = 0
    return LocationVector(q=q, fill_symbol=fill)


def apply_quaternary(w, loc: LocationVector):
    w = np.asarray(w, dtype=np.uint8)
    x = w.copy()
    x[loc.q == 1] = loc.fill_symbol
    return x


def verify_rll(seq, k: int) -> bool:
    """True when no interior run of k+1 or more zeros exists."""
    seq = np.asarray(seq)
    run = 0
    for s in seq:
        if s == 0:
            run += 1
            if run > k:
                return False
        else:
            run = 0
    return True


def flip_rate(k: int, n: int, trials: int, seed, alphabet: int = 2):
    """Monte-Carlo flips-per-symbol over i.i.d. uniform sequences.

    Returns (mean, std) of the per-sequence flip rate across ``trials``
    sequences of length ``n``.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = np.random.default_rng(seed)
    rates = np.empty(trials, dtype=np.float64)
    for t in range(trials):
        seq = rng.integers(0, alphabet, size=n)
        if alphabet == 2:
            loc = binary_locate(seq, k)
        else:
            loc = quaternary_locate(seq, k, fill=1)
        rates[t] = loc.q.sum() / n
    return float(rates.mean()), float(rates.std(ddof=1) if trials > 1 else 0.0)
