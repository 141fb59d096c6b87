"""Min-sum density evolution with flipped/non-flipped message classes, and
EXIT transfer measurement from empirical LLR histograms.

Densities live on a uniform LLR grid (default step 0.05, range +/-25) with
two saturation bins.  The check update is the exact min-sum density: magnitude
tail functions give

    P(out > 0, |out| >= k) = [ (a_k + b_k)^n + (a_k - b_k)^n ] / 2

for n = d_c - 1 inputs, with a_k, b_k the positive/negative tails; output bin
masses follow by differencing, and the zero bin catches 1 - (a_1 + b_1)^n.
The first decoder iteration sees the flipped and non-flipped input classes as
an equal mixture (the two halves of the codeword); later iterations use the
merged density throughout.

Mutual information uses the shared-histogram estimator with no Gaussian
assumption; the two limit cases (all-zero LLRs, perfectly separated LLRs)
come out exactly 0 and 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

from rllsim.channel import transmit
from rllsim.degree import DegreeDistribution, node_to_edge
from rllsim.equalize import bcjr, symbol_bit_llr
from rllsim.map_mod import deinterleave
from rllsim.system import System, write_chain

DEFAULT_STEP = 0.05
DEFAULT_HALF_BINS = 500  # +/-25 LLR range at the default step


@dataclass
class QuantizedPdf:
    """Probability mass on a signed uniform LLR grid with saturation bins.

    mass[0] is the negative saturation bin, mass[1..2B+1] the interior bins
    centered at (i - B - 1)*step, mass[2B+2] the positive saturation bin.
    """

    step: float = DEFAULT_STEP
    half_bins: int = DEFAULT_HALF_BINS
    mass: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.mass is None:
            self.mass = np.zeros(2 * self.half_bins + 3)
        self.mass = np.asarray(self.mass, dtype=np.float64)
        if len(self.mass) != 2 * self.half_bins + 3:
            raise ValueError("mass array inconsistent with half_bins")

    @classmethod
    def from_samples(cls, samples, step=DEFAULT_STEP, half_bins=DEFAULT_HALF_BINS):
        samples = np.asarray(samples, dtype=np.float64)
        b = np.rint(samples / step).astype(np.int64)
        b = np.clip(b, -(half_bins + 1), half_bins + 1)
        mass = np.bincount(b + half_bins + 1, minlength=2 * half_bins + 3)
        return cls(step=step, half_bins=half_bins, mass=mass / len(samples))

    @classmethod
    def point_mass(cls, value, step=DEFAULT_STEP, half_bins=DEFAULT_HALF_BINS):
        return cls.from_samples(np.array([value]), step, half_bins)

    def total(self):
        return float(self.mass.sum())

    def error_probability(self):
        """Mass below zero plus half the zero bin."""
        z = self.half_bins + 1
        return float(self.mass[:z].sum() + 0.5 * self.mass[z])

    def mean(self):
        centers = np.arange(-(self.half_bins + 1), self.half_bins + 2) * self.step
        return float(centers @ self.mass)

    def mix(self, other, weight_self=0.5):
        if other.step != self.step or other.half_bins != self.half_bins:
            raise ValueError("grid mismatch")
        return QuantizedPdf(
            self.step, self.half_bins,
            weight_self * self.mass + (1 - weight_self) * other.mass,
        )


def _magnitude_tails(pdf: QuantizedPdf):
    """(a, b): P(V>0, |V|>=k) and P(V<0, |V|>=k) for k = 1..B+1, plus a
    trailing zero entry so tails at level M+1 exist."""
    B = pdf.half_bins
    z = B + 1
    plus = pdf.mass[z + 1 :]          # magnitudes 1..B, then +saturation
    minus = pdf.mass[z - 1 :: -1]     # magnitudes 1..B, then -saturation
    a = np.concatenate([np.cumsum(plus[::-1])[::-1], [0.0]])
    b = np.concatenate([np.cumsum(minus[::-1])[::-1], [0.0]])
    return a, b


def _min_sum_density(pdf: QuantizedPdf, rho_edge) -> QuantizedPdf:
    """Exact min-sum check output density for edge-perspective rho."""
    B = pdf.half_bins
    a, b = _magnitude_tails(pdf)
    s, d = a + b, a - b
    out = np.zeros_like(pdf.mass)
    z = B + 1
    for deg, w in rho_edge:
        n = deg - 1
        if n == 0:
            continue
        sp = s**n
        dp = d**n
        even = 0.5 * (sp + dp)   # P(out>0, |out|>=k)
        odd = 0.5 * (sp - dp)    # P(out<0, |out|>=k)
        out[z + 1 :] += w * (even[:-1] - even[1:])
        out[z - 1 :: -1] += w * (odd[:-1] - odd[1:])
        out[z] += w * (1.0 - sp[0])
    np.clip(out, 0.0, None, out=out)
    return QuantizedPdf(pdf.step, B, out)


def de_check_update(pdf_f: QuantizedPdf, pdf_nf: QuantizedPdf, rho,
                    flipped_fraction=0.5) -> QuantizedPdf:
    """First-iteration (split) check update: the incoming message classes are
    mixed, then pushed through the exact min-sum density."""
    rho_edge = _edge_side(rho)
    return _min_sum_density(pdf_f.mix(pdf_nf, flipped_fraction), rho_edge)


def de_check_update_merged(pdf: QuantizedPdf, rho) -> QuantizedPdf:
    return _min_sum_density(pdf, _edge_side(rho))


def _edge_side(rho):
    """Accept [(deg, w)], a DegreeDistribution, or its check side."""
    if isinstance(rho, DegreeDistribution):
        d = rho if rho.perspective == "edge" else node_to_edge(rho)
        return d.chk_degrees
    return list(rho)


def _extended(pdf: QuantizedPdf):
    # saturation bins treated as masses one step beyond the interior range
    return pdf.mass, pdf.half_bins + 1


def de_variable_update(pdf_check: QuantizedPdf, lam, pdf_channel: QuantizedPdf) -> QuantizedPdf:
    """Variable-node density: channel pdf convolved with (d-1) check pdfs,
    mixed over the edge-perspective lambda; fast convolution on the padded
    integer grid, saturation bins absorbing out-of-range mass."""
    if pdf_check.step != pdf_channel.step or pdf_check.half_bins != pdf_channel.half_bins:
        raise ValueError("grid mismatch")
    if isinstance(lam, DegreeDistribution):
        d = lam if lam.perspective == "edge" else node_to_edge(lam)
        lam = d.var_degrees
    B = pdf_check.half_bins
    chk, _ = _extended(pdf_check)
    acc, center = _extended(pdf_channel)  # offset of index 0 is -center
    out = np.zeros(2 * B + 3)
    max_deg = max(deg for deg, _ in lam)
    weights = dict(lam)
    for deg in range(2, max_deg + 1):
        acc = fftconvolve(acc, chk)
        center += B + 1
        w = weights.get(deg, 0.0)
        if w > 0.0:
            out += w * _fold(acc, center, B)
    np.clip(out, 0.0, None, out=out)
    return QuantizedPdf(pdf_check.step, B, out)


def _fold(arr, center, B):
    folded = np.zeros(2 * B + 3)
    lo, hi = center - B, center + B + 1
    folded[1 : 2 * B + 2] = arr[lo:hi]
    folded[0] = arr[:lo].sum()
    folded[-1] = arr[hi:].sum()
    return folded


@dataclass
class DeResult:
    pe_trace: list
    converged: bool
    iterations: int

    @property
    def final_pe(self):
        return self.pe_trace[-1]


def de_evolve(pdf_f: QuantizedPdf, pdf_nf: QuantizedPdf, dist: DegreeDistribution,
              u_max: int = 15, pe_target: float = 1e-6,
              flipped_fraction: float = 0.5) -> DeResult:
    """Density-evolution recursion from measured decoder-input densities.

    Iteration 0 runs the split check update on the two classes; from then on
    the classes stay merged.  Stops at u_max iterations or once the message
    error probability drops below ``pe_target``.
    """
    edge = dist if dist.perspective == "edge" else node_to_edge(dist)
    channel = pdf_f.mix(pdf_nf, flipped_fraction)
    trace = [channel.error_probability()]
    if trace[0] < pe_target:
        return DeResult(trace, True, 0)
    q = de_check_update(pdf_f, pdf_nf, edge.chk_degrees, flipped_fraction)
    for u in range(1, u_max + 1):
        p_v = de_variable_update(q, edge.var_degrees, channel)
        trace.append(p_v.error_probability())
        if trace[-1] < pe_target:
            return DeResult(trace, True, u)
        q = de_check_update_merged(p_v, edge.chk_degrees)
    return DeResult(trace, False, u_max)


# ---------------------------------------------------------------------------
# Monte-Carlo estimation of the decoder-input densities


@dataclass
class InitialPdfs:
    flipped: QuantizedPdf
    nonflipped: QuantizedPdf
    too_few_samples: bool = False


def estimate_initial_pdfs(system: System, snr_db, trials: int, seed=0,
                          step=DEFAULT_STEP, half_bins=DEFAULT_HALF_BINS) -> InitialPdfs:
    """Decoder-input LLR densities from one equalizer pass per codeword.

    LLRs are sign-adjusted so positive means agreeing with the transmitted
    codeword, then split by whether the position lies in the interleaved half
    that carries the deliberate flips (the strongly protected half).
    """
    strong = system.strong_half()
    mask = np.zeros(system.n, dtype=bool)
    mask[strong] = True
    has_split = system.scheme in ("type_I", "type_II")
    f_samples, nf_samples = [], []
    params_tpl = system.at_snr(snr_db)
    for t in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence((seed, t)))
        u = rng.integers(0, 2, system.encoder.k, dtype=np.uint8)
        wr = write_chain(system, u)
        r = transmit(wr.amplitudes, params_tpl, rng=rng)
        app = bcjr(r, system.trellis, params_tpl.detector_sigma)
        l_y = symbol_bit_llr(app, system.labeling)
        l_d = deinterleave(system.interleaver, l_y) if system.interleaver is not None else l_y
        adj = l_d * (1.0 - 2.0 * wr.v.astype(np.float64))
        if has_split:
            f_samples.append(adj[mask])
            nf_samples.append(adj[~mask])
        else:
            nf_samples.append(adj)
    nf = np.concatenate(nf_samples)
    f = np.concatenate(f_samples) if f_samples else np.empty(0)
    too_few = len(f) < 1000 or len(nf) < 1000
    pdf_nf = QuantizedPdf.from_samples(nf, step, half_bins)
    pdf_f = QuantizedPdf.from_samples(f, step, half_bins) if len(f) else QuantizedPdf(step, half_bins, pdf_nf.mass.copy())
    return InitialPdfs(flipped=pdf_f, nonflipped=pdf_nf, too_few_samples=too_few)


def de_run(system: System, snr_db, u_max=15, trials=1000, seed=0,
           pe_target=1e-6, step=DEFAULT_STEP, half_bins=DEFAULT_HALF_BINS) -> DeResult:
    """Full density-evolution evaluation of a system at one SNR."""
    init = estimate_initial_pdfs(system, snr_db, trials, seed, step, half_bins)
    dist = make_code_distribution(system)
    return de_evolve(init.flipped, init.nonflipped, dist, u_max, pe_target)


def make_code_distribution(system: System) -> DegreeDistribution:
    """Node-perspective distribution realized by the system's graph."""
    degs, counts = np.unique(system.graph.var_deg, return_counts=True)
    var = [(int(d), c / system.n) for d, c in zip(degs, counts)]
    return DegreeDistribution(var, system.graph.measured_gamma(), "node")


# ---------------------------------------------------------------------------
# EXIT measurement


def mutual_information(llrs, bits, n_bins: int = 400):
    """Histogram mutual information between LLRs and their reference bits.

    Follows I = 1/2 sum_{x=-1,1} int p(xi|x) log2 [2 p(xi|x) / (p(xi|-1) +
    p(xi|+1))] with empirical class-conditional histograms on shared bins.
    No Gaussian assumption.  Result clamped to [0, 1].
    """
    llrs = np.asarray(llrs, dtype=np.float64)
    bits = np.asarray(bits)
    if len(llrs) != len(bits):
        raise ValueError("sample count mismatch")
    pos = llrs[bits == 0]
    neg = llrs[bits == 1]
    if len(pos) == 0 or len(neg) == 0:
        return 0.0
    lo, hi = llrs.min(), llrs.max()
    if lo == hi:
        return 0.0
    edges = np.linspace(lo, hi, n_bins + 1)
    p = np.histogram(pos, bins=edges)[0] / len(pos)
    q = np.histogram(neg, bins=edges)[0] / len(neg)
    i = 0.0
    for cls in (p, q):
        nz = cls > 0
        i += 0.5 * float(np.sum(cls[nz] * np.log2(2.0 * cls[nz] / (p[nz] + q[nz]))))
    return float(min(max(i, 0.0), 1.0))


def exit_transfer(llr_in, llr_out, reference_bits, n_bins: int = 400):
    """Input/output mutual information of one decoding stage."""
    return (
        mutual_information(llr_in, reference_bits, n_bins),
        mutual_information(llr_out, reference_bits, n_bins),
    )


def exit_trajectory(system: System, snr_db, frames: int = 4, seed=0):
    """Measured per-outer-iteration (I_in, I_out) of the LDPC decoder.

    Pools decoder input/output LLRs over ``frames`` codewords of the running
    flipped system, referenced against the true code bits.
    """
    from rllsim.system import simulate_trial, trial_seed

    ins = [[] for _ in range(system.sched.u_o)]
    outs = [[] for _ in range(system.sched.u_o)]
    refs = []
    for t in range(frames):
        res = simulate_trial(system, snr_db, trial_seed(seed, 0, t), collect_llrs=True)
        refs.append(res.v)
        for i in range(system.sched.u_o):
            ins[i].append(res.turbo.decoder_in_llr[i])
            outs[i].append(res.turbo.decoder_out_llr[i])
    ref = np.concatenate(refs)
    return [
        exit_transfer(np.concatenate(ins[i]), np.concatenate(outs[i]), ref)
        for i in range(system.sched.u_o)
    ]
