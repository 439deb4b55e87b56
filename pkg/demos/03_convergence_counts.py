"""How many pulses until the stationary state is reached?

Decomposes the one-period map at an entropy minimum, estimates the pulse
count n_puls for 1% convergence from the spectrum, and spot-checks the
estimate by evaluating the mode sum at n_puls and n_puls/2.  At the
default (slow-bath) parameters the answer is ~2e12 pulses; the fast-bath
variant (j_max = 0.1, z = 0.1) converges five orders of magnitude sooner.
"""

import numpy as np

import spindistill as sd


def analyze(tag, params):
    ops = sd.build_spin_operators(params)
    basis = sd.joint_eigenbasis(ops)
    pmap = sd.build_pulse_map(params, basis, ops)
    spec = sd.full_spectrum(pmap)
    est = sd.convergence_pulses(spec, p_thresh=0.01)
    stat = sd.stationary_state(pmap)
    print(f"[{tag}] h = {params.h}")
    print(f"  spectral gap 1 - |lambda_1| = {spec.gap():.3e}")
    print(f"  modes kept {len(est.n_j)}, excluded (negligible weight) "
          f"{est.excluded_small_alpha}")
    print(f"  n_puls = {est.n_puls:.3e}")
    # the estimate bounds each mode separately; with many comparably slow
    # modes the sum can sit right at the threshold, so report the ratio
    v0 = stat.v0.matrix
    scale = 0.01 * np.linalg.norm(v0)
    for label, n in (("n_puls/2", est.n_puls // 2), ("n_puls", est.n_puls),
                     ("2*n_puls", 2 * est.n_puls)):
        dev = np.linalg.norm(sd.mode_sum_state(spec, n) - v0) / scale
        print(f"  ||rho_n - V0|| / (p ||V0||) at {label:>8}: {dev:9.3f}")
    print()


analyze("slow bath, defaults", sd.default_params(3, h=490.976))
analyze("fast bath", sd.default_params(3, h=24.612, j_max=0.1, z=0.1))

# transient view: entropy over the first thousand pulses at the minimum
params = sd.default_params(2, h=490.9847)
rows = sd.iterate_pulses(sd.maximally_mixed(params.dim), 1000, params, stride=200)
print("transient at N = 2 (pulse index, entropy):")
for r in rows:
    print(f"  {r[0]:5d}  {r[1]:.6f}")
