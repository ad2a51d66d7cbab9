"""A thick slab behaves exactly like a thin scatterer with two phase paddings.

We compare the two transfer matrices over a wide wavelength sweep for a few
refractive indices, then look at the field around a single membrane in both
pictures: it is identical everywhere outside the slab.
"""
import numpy as np

from mtmm import SlabMembrane, verify_equivalence
from mtmm.membrane import PaddedMembrane, padding_phase, polarizability
from mtmm.tmm_core import Gap, Stack, field_profile

lam = np.arange(150.0, 1201.0)
k = 2 * np.pi / lam

print("largest |M_slab - M_padded| over 150-1200 nm, l = 100 nm")
for n in (1.5, 2.0, 3.0, 4.0):
    print(f"  n = {n:3.1f}: {verify_equivalence(SlabMembrane(n, 100.0), k):.2e}")

# The padding phase grows by pi every time the optical thickness passes a
# whole wavelength. Its polarizability vanishes at the internal resonances.
m = SlabMembrane(2.0, 100.0)
print("\n lambda    zeta      phi/pi")
for x in (1000.0, 800.0, 400.0, 300.0, 200.0):
    kk = 2 * np.pi / x
    print(f"{x:7.1f}  {polarizability(m, kk):+.4f}  {padding_phase(m, kk) / np.pi:.4f}")

# Field around one membrane at 633 nm
k633 = 2 * np.pi / 633.0
x = np.linspace(0, 2100, 4201)
full = field_profile(Stack([Gap(1000.0), m, Gap(1000.0)]), k633, x)
thin = field_profile(Stack([Gap(1000.0), PaddedMembrane(m), Gap(1000.0)]), k633, x)
outside = (x < 1000) | (x > 1100)
diff = np.abs(full.amplitude - thin.amplitude)
print(f"\nfield difference outside the slab: {diff[outside].max():.1e}")
print(f"field difference inside the slab:  {diff[~outside].max():.2f}")
