"""UEP regular interleavers, precoders, signal mappers, and the AEWE.

Bit-order convention, used consistently everywhere: a symbol is formed from
two consecutive interleaved bits (b[2j], b[2j+1]) read as the label pair
(Z1, Z2).  The 4-PAM constellation is fixed at (-3, -1, +1, +3)/sqrt(5) with
symbol value s mapped to level index s; a labeling is the bijection between
label pairs and symbol values.  Under the type-II interleaver the second half
of the codeword (the strongly protected bits) lands on Z1, whose label has
the fewest nearest neighbors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_SQRT5 = np.sqrt(5.0)
PAM4_LEVELS = np.array([-3.0, -1.0, 1.0, 3.0]) / _SQRT5

# label pair (Z1, Z2) per symbol value; "gray" assigns Gray-coded labels to
# adjacent amplitudes
_LABEL_BITS = {
    "natural": np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=np.uint8),
    "gray": np.array([[0, 0], [0, 1], [1, 1], [1, 0]], dtype=np.uint8),
}


@dataclass(frozen=True)
class Labeling:
    """Bit labeling of the unit-energy 4-PAM constellation."""

    name: str
    bits_of_symbol: np.ndarray = field(repr=False, default=None)
    symbol_of_bits: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.name not in _LABEL_BITS:
            raise ValueError(f"unknown labeling {self.name!r}")
        bits = _LABEL_BITS[self.name]
        sym = np.zeros(4, dtype=np.uint8)
        for s in range(4):
            sym[bits[s, 0] * 2 + bits[s, 1]] = s
        object.__setattr__(self, "bits_of_symbol", bits)
        object.__setattr__(self, "symbol_of_bits", sym)

    @property
    def amplitudes(self):
        return PAM4_LEVELS

    def amplitude(self, symbols):
        return PAM4_LEVELS[np.asarray(symbols, dtype=np.int64)]


def get_labeling(name: str) -> Labeling:
    return Labeling(name=name)


@dataclass(frozen=True)
class Interleaver:
    """Regular UEP interleaver: out[pi[l]] = in[l].

    type_I:  pi(l) = 2l mod (N-1) for l <= N-2, pi(N-1) = N-1.
    type_II: pi(l) = (2l+1) mod (N+1) for l <= N-2, pi(N-1) = N-2.

    Both are bijections for every even N; construction verifies this and
    fails loudly otherwise.  Type I sends the first half of the input onto
    even output positions; type II reverses the parity assignment.
    """

    kind: str
    n: int
    permutation: np.ndarray = field(repr=False, default=None)
    inverse: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        n = self.n
        if n % 2 != 0 or n < 4:
            raise ValueError(f"interleaver length must be even and >= 4, got {n}")
        l = np.arange(n, dtype=np.int64)
        if self.kind == "type_I":
            pi = (2 * l) % (n - 1)
            pi[n - 1] = n - 1
        elif self.kind == "type_II":
            pi = (2 * l + 1) % (n + 1)
            pi[n - 1] = n - 2
        elif self.kind == "none":
            pi = l.copy()
        else:
            raise ValueError(f"unknown interleaver kind {self.kind!r}")
        counts = np.bincount(pi, minlength=n)
        if np.any(counts != 1):
            raise ValueError(f"{self.kind} ordering is not a bijection for N={n}")
        inv = np.empty(n, dtype=np.int64)
        inv[pi] = l
        object.__setattr__(self, "permutation", pi)
        object.__setattr__(self, "inverse", inv)


def make_interleaver(kind: str, n: int) -> Interleaver:
    return Interleaver(kind=kind, n=n)


def interleave(intl: Interleaver, v):
    v = np.asarray(v)
    if len(v) != intl.n:
        raise ValueError(f"length {len(v)} != interleaver length {intl.n}")
    out = np.empty_like(v)
    out[intl.permutation] = v
    return out


def deinterleave(intl: Interleaver, v):
    v = np.asarray(v)
    if len(v) != intl.n:
        raise ValueError(f"length {len(v)} != interleaver length {intl.n}")
    return v[intl.permutation]


def precode(seq, base: int = 2):
    """Running sum modulo ``base`` with initial state 0 (NRZI-style)."""
    seq = np.asarray(seq, dtype=np.int64)
    if np.any(seq < 0) or np.any(seq >= base):
        raise ValueError(f"symbols out of range for base {base}")
    return np.cumsum(seq) % base


def deprecode(seq, base: int = 2):
    """First difference modulo ``base``; inverse of :func:`precode`."""
    seq = np.asarray(seq, dtype=np.int64)
    return np.diff(seq, prepend=0) % base


def map_signal(z, labeling: Labeling | None = None):
    """Symbols to channel amplitudes.

    Binary (labeling None): 0 -> +1, 1 -> -1.  Quaternary: the fixed 4-PAM
    levels, independent of labeling (the labeling only assigns bits).
    """
    z = np.asarray(z, dtype=np.int64)
    if labeling is None:
        if np.any((z != 0) & (z != 1)):
            raise ValueError("binary mapper expects bits")
        return 1.0 - 2.0 * z
    if np.any((z < 0) | (z > 3)):
        raise ValueError("4-PAM mapper expects symbols in 0..3")
    return labeling.amplitude(z)


def bits_to_symbols(bits, labeling: Labeling):
    """Pairs (b[2j], b[2j+1]) = (Z1, Z2) to symbol values."""
    bits = np.asarray(bits, dtype=np.int64)
    if len(bits) % 2 != 0:
        raise ValueError("bit sequence length must be even")
    pairs = bits.reshape(-1, 2)
    return labeling.symbol_of_bits[pairs[:, 0] * 2 + pairs[:, 1]]


def symbols_to_bits(symbols, labeling: Labeling):
    symbols = np.asarray(symbols, dtype=np.int64)
    return labeling.bits_of_symbol[symbols].reshape(-1)


def aewe(labeling: Labeling):
    """Average Euclidean weight enumerator per 2-bit error label.

    For each error label e, the squared distances ||f(z) - f(z xor e)||^2
    averaged over the four labels z, returned as sorted (distance, weight)
    pairs keyed by "00", "01", "10", "11".
    """
    table = {}
    for e1 in (0, 1):
        for e2 in (0, 1):
            dists = {}
            for s in range(4):
                z1, z2 = labeling.bits_of_symbol[s]
                s2 = labeling.symbol_of_bits[(z1 ^ e1) * 2 + (z2 ^ e2)]
                d = float(np.round((PAM4_LEVELS[s] - PAM4_LEVELS[s2]) ** 2, 12))
                dists[d] = dists.get(d, 0.0) + 0.25
            table[f"{e1}{e2}"] = sorted(dists.items())
    return table
