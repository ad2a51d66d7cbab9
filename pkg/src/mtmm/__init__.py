"""Transfer-matrix optics and optomechanics of thick membrane arrays in a cavity."""
from .array import (MembraneArray, TransmissiveWavelength, array_matrix, array_polarizability,
                    array_transmittance, find_transmissive_wavelengths, transmittance_spectrum)
from .cavity import (CavityConfig, ResonanceRecord, cavity_matrix, classify_parity,
                     find_resonances, mirror_zeta_from_finesse, refine_resonance, tune_length)
from .membrane import (SlabMembrane, ThinMembrane, padding_phase, polarizability, slab_matrix,
                       thin_matrix, verify_equivalence)
from .optomech import (CouplingResult, analytic_frequency_pull, analytic_g_pm,
                       compare_numeric_analytic, extract_couplings)
from .tmm_core import (Stack, field_profile, free_space, multiply, reflectivity_transmissivity)

__version__ = "0.1.0"
