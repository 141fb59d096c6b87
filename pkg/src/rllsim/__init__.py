"""Desk-scale simulator for an RLL-constrained UEP-LDPC recording system.

Write side: LDPC encoding, UEP regular interleaving, 4-PAM labeling,
deliberate flipping to force the (0,k) run-length constraint, precoding.
Read side: BCJR MAP equalization and iterative LDPC decoding (turbo
equalization).  Analysis instruments: min-sum density evolution with
flipped/non-flipped message classes, histogram EXIT measurement, and a
differential-evolution search over two-class degree distributions.
"""

from rllsim.analysis import (
    DeResult,
    QuantizedPdf,
    de_check_update,
    de_check_update_merged,
    de_evolve,
    de_run,
    de_variable_update,
    estimate_initial_pdfs,
    exit_trajectory,
    exit_transfer,
    mutual_information,
)
from rllsim.channel import ChannelParams, noise_sigma, transmit
from rllsim.degree import (
    DegreeDistribution,
    design_rate,
    edge_to_node,
    node_to_edge,
)
from rllsim.equalize import (
    Trellis,
    TurboSchedule,
    bcjr,
    bit_llr_to_priors,
    symbol_bit_llr,
    turbo_decode,
)
from rllsim.ldpc_decode import DecoderState, decode
from rllsim.map_mod import (
    Interleaver,
    Labeling,
    aewe,
    bits_to_symbols,
    deinterleave,
    get_labeling,
    interleave,
    make_interleaver,
    map_signal,
    precode,
    symbols_to_bits,
)
from rllsim.optimize import Candidate, de_optimize, mutate
from rllsim.peg import (
    Encoder,
    TannerGraph,
    build_encoder,
    exact_girth,
    load_alist,
    peg_construct,
    save_alist,
)
from rllsim.rll_flip import (
    LocationVector,
    binary_locate,
    flip_rate,
    quaternary_locate,
    verify_rll,
)
from rllsim.system import System, ber_point, ber_sweep, make_system, simulate_trial

__all__ = [
    "ChannelParams",
    "Candidate",
    "DecoderState",
    "DeResult",
    "DegreeDistribution",
    "Encoder",
    "Interleaver",
    "Labeling",
    "LocationVector",
    "QuantizedPdf",
    "System",
    "TannerGraph",
    "Trellis",
    "TurboSchedule",
    "aewe",
    "bcjr",
    "ber_point",
    "ber_sweep",
    "binary_locate",
    "bit_llr_to_priors",
    "bits_to_symbols",
    "build_encoder",
    "de_check_update",
    "de_check_update_merged",
    "de_evolve",
    "de_optimize",
    "de_run",
    "de_variable_update",
    "decode",
    "deinterleave",
    "design_rate",
    "edge_to_node",
    "estimate_initial_pdfs",
    "exact_girth",
    "exit_trajectory",
    "exit_transfer",
    "flip_rate",
    "get_labeling",
    "interleave",
    "load_alist",
    "make_interleaver",
    "make_system",
    "map_signal",
    "mutate",
    "mutual_information",
    "node_to_edge",
    "noise_sigma",
    "peg_construct",
    "precode",
    "quaternary_locate",
    "save_alist",
    "simulate_trial",
    "symbol_bit_llr",
    "symbols_to_bits",
    "transmit",
    "turbo_decode",
    "verify_rll",
]

__version__ = "0.1.0"
