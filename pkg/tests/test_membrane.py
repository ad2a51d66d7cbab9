import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mtmm.membrane import (PaddedMembrane, SlabMembrane, ThinMembrane, fresnel, padded_matrix,
                           padding_phase, polarizability, slab_matrix, thin_matrix,
                           verify_equivalence)
from mtmm.tmm_core import Gap, Stack, field_profile, transmittance


def airy_transmittance(n, l, k):
    """Textbook Fabry-Perot transmittance of a lossless slab."""
    r2 = ((n - 1) / (n + 1)) ** 2
    coef = 4 * r2 / (1 - r2) ** 2
    return 1 / (1 + coef * np.sin(n * k * l) ** 2)


def arccos_phase(n, l, k):
    """Closed-form padding phase (arccos branch form)."""
    x = n * k * l
    c = np.cos(x)
    num = (n ** 2 - 1) + (n ** 2 + 1) * c
    den = (n ** 2 + 1) + (n ** 2 - 1) * c
    phi0 = 0.5 * np.arccos(num / den)
    q = np.floor(n * l * k / (2 * np.pi))
    return np.where(np.sin(x) >= 0, phi0, np.pi - phi0) + q * np.pi


def test_fresnel_amplitudes():
    f = fresnel(2.0)
    assert f.rho == pytest.approx(-1 / 3)
    assert f.tau_l * f.tau_r == pytest.approx(1 - f.rho ** 2)


@pytest.mark.parametrize("n", [1.2, 2.0, 3.5])
def test_slab_matches_airy(n):
    k = 2 * np.pi / np.linspace(150, 1500, 2000)
    assert np.allclose(transmittance(slab_matrix(SlabMembrane(n, 137.0), k)),
                       airy_transmittance(n, 137.0, k), atol=1e-13)


def test_slab_diagonal_element():
    n, l, k = 2.0, 100.0, 2 * np.pi / 633
    x = n * k * l
    m11 = np.cos(x) + 1j * (n ** 2 + 1) / (2 * n) * np.sin(x)
    assert slab_matrix(SlabMembrane(n, l), k)[1, 1] == pytest.approx(np.conj(m11), abs=1e-14)


def test_polarizability_zero_at_internal_resonance():
    m = SlabMembrane(2.0, 100.0)
    assert polarizability(m, 2 * np.pi / 400) == pytest.approx(0, abs=1e-15)
    assert polarizability(m, 2 * np.pi / 800) == pytest.approx(0.75)
    assert transmittance(slab_matrix(m, 2 * np.pi / 400)) == pytest.approx(1, abs=1e-15)


def test_padding_phase_quarter_wave_example():
    # n = 2, k n l = pi/2: phi = arccos(3/5)/2 = atan(1/2)
    m = SlabMembrane(2.0, 100.0)
    k = np.pi / 2 / 200.0
    assert padding_phase(m, k) == pytest.approx(0.5 * np.arccos(0.6), abs=1e-15)
    assert padding_phase(m, k) == pytest.approx(np.arctan(0.5), abs=1e-15)


@settings(max_examples=300, deadline=None)
@given(n=st.floats(1.05, 4.0), l=st.floats(20.0, 1000.0), lam=st.floats(150.0, 2000.0))
def test_padding_phase_matches_arccos_form(n, l, lam):
    k = 2 * np.pi / lam
    x = n * k * l
    # arccos loses digits where its argument nears +-1
    if abs(np.sin(x)) < 1e-3:
        return
    assert padding_phase(SlabMembrane(n, l), k) == pytest.approx(arccos_phase(n, l, k), abs=1e-9)


@settings(max_examples=300, deadline=None)
@given(n=st.floats(1.0, 4.0), l=st.floats(1.0, 1000.0), lam=st.floats(100.0, 3000.0))
def test_equivalence_everywhere(n, l, lam):
    assert verify_equivalence(SlabMembrane(n, l), 2 * np.pi / lam) < 1e-12


def test_padding_phase_continuous_and_steps_by_pi():
    lam, n = 500.0, 2.0
    l = np.linspace(1.0, 800.0, 200_001)
    phi = padding_phase(SlabMembrane(n, 1.0), 2 * np.pi / lam * l)  # k l scales together
    assert np.max(np.abs(np.diff(phi))) < 1e-3
    for m in (1, 2, 3):
        lm = m * lam / n
        at = padding_phase(SlabMembrane(n, lm), 2 * np.pi / lam)
        assert at == pytest.approx(m * np.pi, abs=1e-12)


def test_thin_matrix_without_padding():
    t = ThinMembrane(0.4, 0.3)
    assert thin_matrix(t, include_padding=False)[0, 1] == 0.4j
    assert abs(thin_matrix(t)[0, 1]) == pytest.approx(0.4)


def test_padded_element_matches_slab_outside():
    m = SlabMembrane(2.5, 180.0)
    k = 2 * np.pi / 531.0
    x_out = np.concatenate([np.linspace(0, 1000, 300), np.linspace(1180, 2180, 300)])
    full = field_profile(Stack([Gap(1000.0), m, Gap(1000.0)]), k, x_out)
    thin = field_profile(Stack([Gap(1000.0), PaddedMembrane(m), Gap(1000.0)]), k, x_out)
    assert np.max(np.abs(full.amplitude - thin.amplitude)) < 1e-12
    assert np.allclose(padded_matrix(m, k), slab_matrix(m, k), atol=1e-13)


@pytest.mark.parametrize("n, l", [(0.9, 100.0), (2.0, 0.0), (2.0, -5.0)])
def test_invalid_slab(n, l):
    with pytest.raises(ValueError):
        SlabMembrane(n, l)
