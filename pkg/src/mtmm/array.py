"""Periodic arrays of identical membranes and their transmissive wavelengths."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.optimize import brentq

from .membrane import PaddedMembrane, SlabMembrane, padding_phase, polarizability
from .tmm_core import Gap, Stack, free_space, multiply, transmittance

Model = Literal["full", "thin-padded"]
MODELS = ("full", "thin-padded")

DEGENERACY_EPS = 1e-3
SAMPLES_PER_DECADE = 20_000


@dataclass(frozen=True)
class MembraneArray:
    """`count` identical membranes separated by vacuum gaps of `spacing` nm.

    `spacing` is the gap between facing membrane surfaces, not the period;
    the period is ``spacing + l``.
    """

    membrane: SlabMembrane
    count: int = 2
    spacing: float = 9000.0
    model: Model = "full"

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 1:
            raise ValueError(f"count must be a positive integer, got {self.count}")
        if not self.spacing > 0:
            raise ValueError(f"spacing must be > 0 nm, got {self.spacing}")
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}, got {self.model!r}")

    @property
    def extent(self):
        return self.count * self.membrane.l + (self.count - 1) * self.spacing

    @property
    def optical_path(self):
        """Straight-through optical path, ``N n l + (N-1) d``."""
        return self.count * self.membrane.optical_thickness + (self.count - 1) * self.spacing

    def membrane_element(self):
        if self.model == "full":
            return self.membrane
        return PaddedMembrane(self.membrane)

    def elements(self, gaps=None):
        """Element list; `gaps` overrides the N-1 inner gap lengths."""
        if gaps is None:
            gaps = [self.spacing] * (self.count - 1)
        mem = self.membrane_element()
        out = [mem]
        for g in gaps:
            out += [Gap(g), mem]
        return out

    def stack(self, origin=0.0):
        return Stack(self.elements(), origin=origin)

    def with_model(self, model):
        return MembraneArray(self.membrane, self.count, self.spacing, model)


def array_matrix(a, k):
    """``M_m M_fs(d) M_m ... M_m`` with the membrane matrix for `a.model`."""
    m = a.membrane_element().matrix(k)
    gap = free_space(k, a.spacing)
    mats = [m]
    for _ in range(a.count - 1):
        mats += [gap, m]
    return multiply(*mats)


def array_transmittance(a, k):
    return transmittance(array_matrix(a, k))


def array_polarizability(a, k):
    """Real polarizability ``chi = -i m12`` of the whole array.

    The array is palindromic and lossless, so ``m12`` is purely imaginary and
    ``1 - T = chi**2 / (1 + chi**2)``; transmissive points are sign changes
    of ``chi``.
    """
    return array_matrix(a, k)[..., 0, 1].imag


def effective_phase_spacing(a, k):
    """Phase between the two thin scatterers of the padded model, ``k d + 2 phi``."""
    return np.multiply(k, a.spacing) + 2 * padding_phase(a.membrane, k)


def _check_range(lam_min, lam_max):
    if not (0 < lam_min < lam_max) or not np.isfinite(lam_max):
        raise ValueError(f"need 0 < lambda_min < lambda_max, got [{lam_min}, {lam_max}]")


def transmittance_spectrum(a, lam_min, lam_max, samples):
    """Transmittance on a uniform wavelength grid; returns ``(lam, T)`` arrays."""
    _check_range(lam_min, lam_max)
    if int(samples) < 2:
        raise ValueError(f"samples must be >= 2, got {samples}")
    lam = np.linspace(lam_min, lam_max, int(samples))
    return lam, array_transmittance(a, 2 * np.pi / lam)


@dataclass(frozen=True)
class TransmissiveWavelength:
    """A wavelength where the array transmits fully.

    ``branch`` is ``"plus"``/``"minus"`` for two-membrane arrays, labelled by
    which root of ``cos(nu) = -+ zeta / sqrt(1 + zeta^2)`` the padded spacing
    phase satisfies, else ``"unclassified"``. ``residual`` is the distance to
    that root (nan when unclassified).
    """

    wavelength: float
    branch: str
    zeta: float
    degenerate: bool
    residual: float = float("nan")

    @property
    def k(self):
        return 2 * np.pi / self.wavelength


def transmissive_branch(zeta, nu, tol=1e-6):
    """Label the two-membrane transmissive root ``nu`` as plus or minus.

    Returns ``(branch, residual)``; ``"unclassified"`` if neither
    ``cos(nu) = -zeta/q`` (plus) nor ``cos(nu) = +zeta/q`` (minus), with
    ``q = sqrt(1 + zeta^2)``, holds within `tol`, or if both do.
    """
    q = np.sqrt(1 + zeta ** 2)
    plus = abs(np.cos(nu) + zeta / q)
    minus = abs(np.cos(nu) - zeta / q)
    if (plus < tol) == (minus < tol):
        return "unclassified", min(plus, minus)
    return ("plus", plus) if plus < tol else ("minus", minus)


def _wavelength_grid(lam_min, lam_max, per_decade):
    n = max(int(np.ceil(np.log10(lam_max / lam_min) * per_decade)) + 1, 64)
    return np.geomspace(lam_min, lam_max, n)


def _bracket_roots(f, lam, values, xtol):
    roots = []
    for i in np.flatnonzero(values[:-1] * values[1:] <= 0):
        a, b = lam[i], lam[i + 1]
        if values[i] == 0:
            roots.append(a)
        elif values[i + 1] == 0:
            roots.append(b)
        else:
            roots.append(brentq(f, a, b, xtol=xtol, rtol=4 * np.finfo(float).eps))
    return roots


def find_transmissive_wavelengths(a, lam_min, lam_max, *, degeneracy_eps=DEGENERACY_EPS,
                                  samples_per_decade=SAMPLES_PER_DECADE, xtol=1e-10):
    """All wavelengths in ``[lam_min, lam_max]`` at which the array has ``T = 1``.

    Sign changes of the array polarizability are bracketed on a logarithmic
    grid and refined with Brent's method to a bracket below `xtol` nm. Grid
    cells where ``1 - T < 1e-3`` at a local minimum of ``|chi|`` without a
    sign change are re-sampled 200x finer so close root pairs are not lost.
    Roots with ``|zeta| < degeneracy_eps`` (next to internal resonances) are
    flagged degenerate. An empty list is a valid result.
    """
    _check_range(lam_min, lam_max)

    def chi(lam):
        return float(array_polarizability(a, 2 * np.pi / lam))

    lam = _wavelength_grid(lam_min, lam_max, samples_per_decade)
    values = array_polarizability(a, 2 * np.pi / lam)
    roots = _bracket_roots(chi, lam, values, xtol)

    absval = np.abs(values)
    minima = np.flatnonzero((absval[1:-1] <= absval[:-2]) & (absval[1:-1] <= absval[2:])) + 1
    for i in minima:
        near_unity = values[i] ** 2 / (1 + values[i] ** 2) < 1e-3
        if not near_unity or values[i - 1] * values[i] <= 0 or values[i] * values[i + 1] <= 0:
            continue
        fine = np.linspace(lam[i - 1], lam[i + 1], 401)
        roots += _bracket_roots(chi, fine, array_polarizability(a, 2 * np.pi / fine), xtol)

    roots = sorted(roots)
    unique = []
    for r in roots:
        if not unique or r - unique[-1] > 10 * xtol:
            unique.append(r)

    out = []
    for lam_t in unique:
        k = 2 * np.pi / lam_t
        zeta = float(polarizability(a.membrane, k))
        degenerate = abs(zeta) < degeneracy_eps
        if a.count == 2:
            branch, residual = transmissive_branch(zeta, float(effective_phase_spacing(a, k)))
        else:
            branch, residual = "unclassified", float("nan")
        out.append(TransmissiveWavelength(float(lam_t), branch, zeta, bool(degenerate),
                                          float(residual)))
    return out
