"""Small BER sweep of the flipped vs non-flipped system on the PR target.

Uses a short code so the sweep finishes in about a minute; the full-scale
experiment configs live in demos/configs/.
"""

import numpy as np

from rllsim.system import ber_sweep, make_system

snrs = [14.5, 15.5, 16.5]
for flipping in (False, True):
    system = make_system(
        n=1024, rate=0.65, vnd=[2, 5], delta=[0.5, 0.5],
        channel_kind="pr", scheme="type_II", u_o=5, u_i=3, flipping=flipping,
    )
    points = ber_sweep(system, snrs, trials=60, stop_at_errors=15, master_seed=1)
    label = "flipped   " if flipping else "non-flipped"
    print(f"{label} (N=1024, rate {system.encoder.k}/{system.n}):")
    for pt in points:
        print(f"  {pt.snr_db:5.2f} dB  ber={pt.ber:.3e}  fer={pt.fer:.3f}  "
              f"mean flips/frame={pt.mean_flips:.1f}")
        print(f"            per-outer-iteration ber: "
              + "  ".join(f"{b:.1e}" for b in pt.ber_per_iteration))
