"""Intracavity fields of the odd and even modes at one transmissive wavelength.

The mode with the larger coupling builds up a strong field between the
membranes. Its partner of opposite parity has the inner field suppressed.
"""
import numpy as np

from mtmm import CavityConfig, MembraneArray, SlabMembrane, find_transmissive_wavelengths
from mtmm.optomech import couplings_at
from mtmm.tmm_core import field_profile

pair = MembraneArray(SlabMembrane(2.0, 100.0), 2, 9000.0)
cavity = CavityConfig(5.0e6, pair, finesse=3000.0)
root = next(r for r in find_transmissive_wavelengths(pair, 700.0, 800.0) if not r.degenerate)
print(f"transmissive wavelength {root.wavelength:.4f} nm ({root.branch} root)")

for parity in ("odd", "even"):
    tuned, res = couplings_at(cavity, root, parity)
    (a0, a1), (b0, b1) = tuned.membrane_spans()
    prof = field_profile(tuned.stack(), res.k_res,
                         np.concatenate([np.linspace(a1, b0, 4001),
                                         np.linspace(0.2, 0.3, 4001) * tuned.length]))
    inner, outer = prof.intensity[:4001].max(), prof.intensity[4001:].max()
    print(f"  {parity:4s} mode: g/g_ref = {res.breathing_normalized:+.3f}, "
          f"peak intensity between membranes / outside = {inner / outer:.2f}")
