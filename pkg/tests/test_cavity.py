import numpy as np
import pytest
from scipy.optimize import brentq

from mtmm import CavityConfig, find_transmissive_wavelengths
from mtmm.cavity import (cavity_transmittance, classify_parity, field_parity,
                         finesse_from_mirror_zeta, find_resonances, mirror_zeta_from_finesse,
                         mode_number, refine_resonance, resonance_at, tune_length)
from mtmm.errors import GeometryError, TrackingError
from mtmm.tmm_core import field_profile


@pytest.mark.parametrize("finesse", [3.0, 100.0, 3000.0, 1e6])
def test_finesse_inversion(finesse):
    zeta = mirror_zeta_from_finesse(finesse)
    r2 = zeta ** 2 / (1 + zeta ** 2)
    # oracle: solve pi sqrt(R)/(1-R) = F numerically
    ref = brentq(lambda R: np.pi * np.sqrt(R) / (1 - R) - finesse, 1e-12, 1 - 1e-15,
                 xtol=1e-16, rtol=1e-15)
    assert r2 == pytest.approx(ref, rel=1e-12)
    assert finesse_from_mirror_zeta(zeta) == pytest.approx(finesse, rel=1e-10)


def test_configuration_errors(pair):
    with pytest.raises(ValueError):
        CavityConfig(5e6, pair)
    with pytest.raises(ValueError):
        CavityConfig(5e6, pair, finesse=3000.0, mirror_zeta=10.0)
    with pytest.raises(ValueError):
        CavityConfig(5e6, pair, finesse=0.5)
    with pytest.raises(GeometryError):
        CavityConfig(50_000.0, pair, finesse=3000.0)
    with pytest.raises(GeometryError):
        CavityConfig(5e6, pair, finesse=3000.0, center_offset=2.6e6)


def test_displacements(cavity):
    lm, lp = cavity.outer_gaps
    assert lm == lp == pytest.approx((5e6 - 9200) / 2)
    g = cavity.gaps([1.0, -2.0])
    assert g == pytest.approx([lm + 1, 9000 - 3, lp + 2])
    assert cavity.stack([1.0, -2.0]).extent == pytest.approx(cavity.length)
    with pytest.raises(GeometryError):
        cavity.gaps([4600.0, 0.0])
    with pytest.raises(GeometryError):
        cavity.gaps([1.0])


def test_empty_cavity_resonances():
    c = CavityConfig(5e6, None, finesse=3000.0)
    k0 = 2 * np.pi / 700
    res = find_resonances(c, k0, 5 * c.fsr)
    for r in res:
        assert r.peak_transmittance == pytest.approx(1, abs=1e-9)
        # perfect-mirror picture: k L = (m + 1) pi shifted by the mirror phase
        assert (r.mode_number % 2 == 1) == (r.mode_parity == "odd")
    assert np.diff([r.mode_number for r in res]).tolist() == [1] * (len(res) - 1)
    with pytest.raises(ValueError):
        find_resonances(c, k0, c.fsr)


def test_empty_cavity_fundamental_single_maximum():
    c = CavityConfig(1000.0, None, mirror_zeta=30.0)
    k = refine_resonance(c, np.pi / 1000.0, half_width=0.3 * np.pi / 1000)
    # fundamental sin(pi x / L): mode number 1, symmetric
    assert mode_number(c, k) == 1
    assert field_parity(c, k) == "odd"
    x = np.linspace(0, 1000, 2001)
    inten = field_profile(c.stack(), k, x).intensity
    peaks = np.flatnonzero((inten[1:-1] > inten[:-2]) & (inten[1:-1] > inten[2:]))
    assert len(peaks) == 1
    assert x[peaks[0] + 1] == pytest.approx(500, abs=1)


def test_refine_raises_without_peak(cavity):
    k = 2 * np.pi / 700
    with pytest.raises(TrackingError):
        refine_resonance(cavity, k + 0.3 * cavity.fsr, half_width=0.05 * cavity.fsr)


@pytest.fixture(scope="module")
def root_700(pair):
    roots = find_transmissive_wavelengths(pair, 690.0, 710.0)
    return next(r for r in roots if not r.degenerate)


@pytest.mark.parametrize("parity", ["odd", "even"])
def test_tuned_resonance_sits_on_root(cavity, root_700, parity):
    tuned, rec = resonance_at(cavity, root_700.k, parity)
    assert abs(tuned.length - cavity.length) < root_700.wavelength / 2
    assert rec.k_res == pytest.approx(root_700.k, rel=1e-12)
    assert rec.peak_transmittance == pytest.approx(1, abs=1e-6)
    assert rec.mode_parity == parity == field_parity(tuned, rec.k_res)
    assert classify_parity(tuned, rec) == parity


def test_odd_and_even_modes_alternate(cavity, root_700):
    tuned = tune_length(cavity, root_700.k, "odd")
    res = find_resonances(tuned, root_700.k, 6 * tuned.fsr)
    parities = [r.mode_parity for r in res]
    assert all(a != b for a, b in zip(parities, parities[1:]))
    assert {"odd", "even"} <= set(parities)


def test_full_width_matches_finesse():
    c = CavityConfig(5e6, None, finesse=3000.0)
    k = find_resonances(c, 2 * np.pi / 633, 3 * c.fsr)[1].k_res

    def half(x):
        return cavity_transmittance(c, x) - 0.5

    lo = brentq(half, k - c.fsr / 4, k, xtol=1e-18)
    hi = brentq(half, k, k + c.fsr / 4, xtol=1e-18)
    assert hi - lo == pytest.approx(c.linewidth, rel=1e-3)


def test_asymmetric_cavity_uses_mode_number(pair):
    c = CavityConfig(5e6, pair, finesse=3000.0, center_offset=1234.5)
    res = find_resonances(c, 2 * np.pi / 700, 3 * c.fsr)
    assert res and all(r.mode_parity in ("odd", "even") for r in res)
