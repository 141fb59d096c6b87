"""EXIT-style measurement of the turbo loop.

Pools decoder input/output LLRs per outer iteration and prints the mutual
information trajectory; a converging system walks into the (1, 1) corner.
"""

from rllsim.analysis import exit_trajectory
from rllsim.system import make_system

for snr in (15.0, 16.5):
    system = make_system(
        n=1024, rate=0.65, vnd=[2, 5], delta=[0.5, 0.5],
        channel_kind="pr", scheme="type_II", u_o=5, u_i=3, flipping=True,
    )
    traj = exit_trajectory(system, snr, frames=10, seed=4)
    print(f"flipped system at {snr} dB:")
    for it, (i_in, i_out) in enumerate(traj, start=1):
        print(f"  outer {it}: I_in={i_in:.4f}  I_out={i_out:.4f}")
