"""Transmission spectra of two- and four-membrane arrays.

Two 100 nm membranes (n = 2) 9 um apart transmit perfectly at a comb of
wavelengths. The thick-slab and padded thin-membrane models give the same
spectrum. With four membranes the transmissive wavelengths bunch in threes.
"""
import numpy as np

from mtmm import MembraneArray, SlabMembrane, find_transmissive_wavelengths
from mtmm.array import transmittance_spectrum

m = SlabMembrane(2.0, 100.0)
pair = MembraneArray(m, 2, 9000.0)

lam, t_full = transmittance_spectrum(pair, 200.0, 1000.0, 100_000)
_, t_thin = transmittance_spectrum(pair.with_model("thin-padded"), 200.0, 1000.0, 100_000)
print(f"two membranes: max |T_full - T_thin| = {np.max(np.abs(t_full - t_thin)):.1e}")

roots = find_transmissive_wavelengths(pair, 200.0, 1000.0)
print(f"{len(roots)} transmissive wavelengths in [200, 1000] nm, "
      f"{sum(r.degenerate for r in roots)} of them at internal resonances")
print("first few:")
for r in roots[:6]:
    tag = "degenerate" if r.degenerate else r.branch
    print(f"  {r.wavelength:10.4f} nm  zeta = {r.zeta:+.4f}  {tag}")

quad = MembraneArray(m, 4, 9000.0)
q_roots = [r for r in find_transmissive_wavelengths(quad, 300.0, 600.0) if not r.degenerate]
k = np.sort([r.k for r in q_roots])
gaps = np.diff(k) / np.diff(k).max()
print(f"\nfour membranes: {len(q_roots)} transmissive wavelengths in [300, 600] nm")
print("successive wavenumber gaps (relative to the largest):")
print("  " + " ".join(f"{g:.2f}" for g in gaps[:15]))
print("one wide gap, then two narrow ones: the roots come in triplets")
