"""End-to-end recording system: code construction, write chain, trial loop.

The 4-level write chain is encode -> UEP interleave -> bit pairs to symbols
-> deliberate flipping -> mod-4 precode -> 4-PAM -> channel; the binary chain
drops the interleaver and symbol stages.  The read side is turbo
equalization.  Everything is deterministic given the per-trial seed.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from rllsim.channel import ChannelParams, transmit
from rllsim.degree import DegreeDistribution, node_counts
from rllsim.equalize import Trellis, TurboSchedule, TurboResult, turbo_decode
from rllsim.ldpc_decode import LLR_CLIP
from rllsim.map_mod import (
    Labeling,
    bits_to_symbols,
    get_labeling,
    interleave,
    make_interleaver,
    map_signal,
    precode,
)
from rllsim.peg import Encoder, EncoderBuildError, TannerGraph, build_encoder, peg_construct
from rllsim.rll_flip import apply_binary, apply_quaternary, binary_locate, quaternary_locate

SCHEME_FILL = {"type_I": 1, "type_II": 2}


def balanced_check_side(var_degrees, n: int, rate: float):
    """Two-degree check distribution matching round(n*(1-rate)) checks."""
    vd = np.array([k for k, _ in var_degrees], dtype=np.int64)
    vw = np.array([w for _, w in var_degrees], dtype=np.float64)
    counts = node_counts(vw, n)
    E = int(vd @ counts)
    m = int(round(n * (1.0 - rate)))
    d0 = E // m
    c_hi = E - d0 * m
    c_lo = m - c_hi
    if c_hi == 0:
        return [(int(d0), 1.0)]
    return [(int(d0), c_lo / m), (int(d0) + 1, c_hi / m)]


def make_distribution(n, rate, vnd, delta, cnd=None, gamma=None) -> DegreeDistribution:
    var = list(zip(vnd, delta))
    chk = list(zip(cnd, gamma)) if cnd is not None else balanced_check_side(var, n, rate)
    return DegreeDistribution(var_degrees=var, chk_degrees=chk, perspective="node")


def build_code(n, rate, vnd, delta, cnd=None, gamma=None, seed=1, attempts=5):
    """PEG graph plus encoder, retrying with the next seed on rank failure."""
    dist = make_distribution(n, rate, vnd, delta, cnd, gamma)
    k_design = int(round(n * rate))
    last = None
    for s in range(seed, seed + attempts):
        graph = peg_construct(dist, n, rate, seed=s)
        try:
            enc = build_encoder(graph, k_design=k_design)
            return graph, enc
        except EncoderBuildError as exc:  # pragma: no cover - rare
            last = exc
    raise last


@dataclass
class System:
    """One fully wired simulation configuration (SNR left open)."""

    graph: TannerGraph
    encoder: Encoder
    channel: ChannelParams
    sched: TurboSchedule
    levels: int = 4
    scheme: str = "type_II"
    labeling: Labeling | None = None
    fill_symbol: int | None = None
    flipping: bool = True
    rll_k: int = 3
    interleaver: object = field(init=False, default=None, repr=False)
    trellis: Trellis = field(init=False, repr=False)

    def __post_init__(self):
        n = self.graph.n_var
        if self.levels == 4:
            if n % 2:
                raise ValueError("4-level systems need an even codeword length")
            if self.labeling is None:
                self.labeling = get_labeling("natural")
            if self.fill_symbol is None:
                self.fill_symbol = SCHEME_FILL.get(self.scheme, 1)
            self.interleaver = make_interleaver(
                self.scheme if self.scheme in ("type_I", "type_II") else "none", n
            )
            alphabet = 4
        else:
            if self.scheme != "none":
                raise ValueError("UEP interleaving schemes apply to the 4-level system")
            self.labeling = None
            self.interleaver = None
            alphabet = 2
        self.channel = replace(
            self.channel,
            code_rate=self.encoder.k / n,
            bits_per_symbol=2 if self.levels == 4 else 1,
        )
        self.trellis = Trellis(alphabet=alphabet, taps=self.channel.h, precoded=True)

    @property
    def n(self):
        return self.graph.n_var

    def at_snr(self, ebn0_db) -> ChannelParams:
        return replace(self.channel, ebn0_db=ebn0_db)

    def strong_half(self):
        """v-domain indices interleaved onto the flip-carrying label bit."""
        return np.arange(self.n // 2, self.n)


def make_system(
    n, rate, vnd, delta, cnd=None, gamma=None, code_seed=1,
    levels=4, scheme="type_II", labeling="natural", fill_symbol=None,
    flipping=True, rll_k=3, channel_kind="pr", beta=None, taps=None,
    u_o=5, u_i=3, reset=False, algo="sum-product",
) -> System:
    graph, enc = build_code(n, rate, vnd, delta, cnd, gamma, seed=code_seed)
    chan = ChannelParams(kind=channel_kind, ebn0_db=None, beta=beta, taps=taps)
    sched = TurboSchedule(u_o=u_o, u_i=u_i, reset=reset, algo=algo)
    lab = get_labeling(labeling) if levels == 4 else None
    return System(
        graph=graph, encoder=enc, channel=chan, sched=sched, levels=levels,
        scheme=scheme, labeling=lab, fill_symbol=fill_symbol,
        flipping=flipping, rll_k=rll_k,
    )


@dataclass
class WriteResult:
    v: np.ndarray            # codeword
    amplitudes: np.ndarray   # written signal
    n_flips: int
    flip_positions: np.ndarray  # indices in the symbol (or bit) stream


def write_chain(system: System, u) -> WriteResult:
    v = system.encoder.encode(u)
    if system.levels == 4:
        b = interleave(system.interleaver, v)
        w = bits_to_symbols(b, system.labeling)
        if system.flipping:
            loc = quaternary_locate(w, system.rll_k, fill=system.fill_symbol)
            x = apply_quaternary(w, loc)
            flips = np.flatnonzero(loc.q)
        else:
            x, flips = w, np.empty(0, dtype=np.int64)
        xp = precode(x, base=4)
        amps = map_signal(xp, system.labeling)
    else:
        if system.flipping:
            loc = binary_locate(v, system.rll_k)
            y = apply_binary(v, loc)
            flips = np.flatnonzero(loc.q)
        else:
            y, flips = v, np.empty(0, dtype=np.int64)
        z = precode(y, base=2)
        amps = map_signal(z)
    return WriteResult(v=v, amplitudes=amps, n_flips=len(flips), flip_positions=flips)


@dataclass
class TrialResult:
    u: np.ndarray
    v: np.ndarray
    n_flips: int
    turbo: TurboResult

    @property
    def bit_errors(self):
        return int(np.sum(self.turbo.message != self.u))

    @property
    def frame_error(self):
        return self.bit_errors > 0


def simulate_trial(system: System, ebn0_db, seed, collect_llrs=False) -> TrialResult:
    """One frame end to end; ``seed`` may be any SeedSequence entropy."""
    rng = np.random.default_rng(seed)
    u = rng.integers(0, 2, size=system.encoder.k, dtype=np.uint8)
    wr = write_chain(system, u)
    params = system.at_snr(ebn0_db)
    r = transmit(wr.amplitudes, params, rng=rng)
    turbo = turbo_decode(
        r,
        system.graph,
        system.encoder,
        system.trellis,
        params.detector_sigma,
        system.sched,
        labeling=system.labeling,
        interleaver=system.interleaver if system.scheme in ("type_I", "type_II") else None,
        ref_message=u,
        collect_llrs=collect_llrs,
    )
    return TrialResult(u=u, v=wr.v, n_flips=wr.n_flips, turbo=turbo)


def trial_seed(master_seed, point_index, trial_index):
    return np.random.SeedSequence((master_seed, point_index, trial_index))


@dataclass
class BerPoint:
    snr_db: float
    trials: int
    bit_errors: int
    frame_errors: int
    ber: float
    fer: float
    ber_per_iteration: list
    mean_flips: float


def ber_point(
    system: System, snr_db, trials, stop_at_errors=None, master_seed=0,
    point_index=0, threads=1, chunk=16,
) -> BerPoint:
    """Monte-Carlo BER at one SNR with deterministic per-trial streams.

    Trials run in fixed-size chunks; the stop decision is taken at chunk
    boundaries on the in-order prefix, so the measured set of trials does not
    depend on thread scheduling.
    """
    k = system.encoder.k
    u_o = system.sched.u_o
    done = 0
    bit_err = 0
    frame_err = 0
    iter_err = np.zeros(u_o, dtype=np.int64)
    flips = 0

    def run(idx):
        return simulate_trial(system, snr_db, trial_seed(master_seed, point_index, idx))

    while done < trials:
        n_chunk = min(chunk, trials - done)
        idxs = range(done, done + n_chunk)
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(run, idxs))
        else:
            results = [run(i) for i in idxs]
        for res in results:
            bit_err += res.bit_errors
            frame_err += int(res.frame_error)
            iter_err += np.array(
                [int(round(b * k)) for b in res.turbo.ber_trace], dtype=np.int64
            )
            flips += res.n_flips
        done += n_chunk
        if stop_at_errors is not None and frame_err >= stop_at_errors:
            break
    return BerPoint(
        snr_db=float("nan") if snr_db is None else float(snr_db),
        trials=done,
        bit_errors=bit_err,
        frame_errors=frame_err,
        ber=bit_err / (done * k),
        fer=frame_err / done,
        ber_per_iteration=(iter_err / (done * k)).tolist(),
        mean_flips=flips / done,
    )


def ber_sweep(system, snr_list, trials, stop_at_errors=None, master_seed=0, threads=1):
    return [
        ber_point(system, snr, trials, stop_at_errors, master_seed, i, threads)
        for i, snr in enumerate(snr_list)
    ]
