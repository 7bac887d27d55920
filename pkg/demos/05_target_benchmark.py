"""Circular-menu benchmark with synthetic subjects.

More targets leave less room between them, so a noisy subject misses more
often. This sweeps target count and noise and prints an accuracy table.
"""

from tiltgest.harness import TargetSession, run_target_session

sigmas = (0.0, 0.04, 0.08, 0.1)
print("sigma   " + "".join("%8d" % n for n in (4, 8, 12, 16)))
for s in sigmas:
    row = [run_target_session(TargetSession(n, trials=300, noise_sigma=s, seed=0)).accuracy
           for n in (4, 8, 12, 16)]
    print("%.2f    " % s + "".join("%8.3f" % a for a in row))
