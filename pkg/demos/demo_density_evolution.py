"""Min-sum density evolution on measured decoder-input densities.

Estimates the flipped/non-flipped LLR densities from one equalizer pass,
then iterates the check/variable updates and prints the message error
probability trace for two node distributions.
"""

from rllsim.analysis import de_run
from rllsim.system import make_system

codes = {
    "VND [2,5]": dict(vnd=[2, 5], delta=[0.5, 0.5]),
    "VND [2,7]": dict(vnd=[2, 7], delta=[0.5, 0.5]),
}
snr = 8.2
for name, cd in codes.items():
    system = make_system(
        n=1024, rate=0.65, channel_kind="mo_4level", beta=0.15,
        scheme="type_II", flipping=True, **cd,
    )
    res = de_run(system, snr, u_max=12, trials=150, seed=2)
    trace = "  ".join(f"{p:.2e}" for p in res.pe_trace)
    print(f"{name} at {snr} dB: converged={res.converged}")
    print(f"  P_e trace: {trace}")
