"""Dielectric membranes: full slab model and the padded thin-scatterer model.

A lossless slab of index ``n`` and thickness ``l`` has exactly the same
transfer matrix as an infinitely thin scatterer of polarizability

    zeta = (n**2 - 1) / (2 n) * sin(k n l)

sandwiched between two vacuum paddings of phase ``phi`` each. Both models
are provided here, together with the padding phase that makes them agree.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tmm_core import free_space, propagation, thin_scatterer


@dataclass(frozen=True)
class FresnelPair:
    """Normal-incidence Fresnel amplitudes of a vacuum-dielectric slab.

    ``rho`` is the reflection at the left (vacuum to dielectric) face; the
    right face reflects ``-rho``. ``tau_l``/``tau_r`` are the transmissions
    into and out of the dielectric.
    """

    rho: float
    tau_l: float
    tau_r: float


def fresnel(n):
    return FresnelPair(rho=(1 - n) / (1 + n), tau_l=2 / (1 + n), tau_r=2 * n / (1 + n))


def interface_matrix(rho, tau):
    """``(1/tau) [[1, rho], [rho, 1]]`` for a single flat interface."""
    return np.array([[1, rho], [rho, 1]], dtype=complex) / tau


@dataclass(frozen=True)
class SlabMembrane:
    """Lossless dielectric slab with real refractive index `n` and thickness `l` [nm].

    Also usable as a stack element (full-slab model).
    """

    n: float
    l: float

    def __post_init__(self):
        if not self.n >= 1:
            raise ValueError(f"refractive index must be >= 1, got {self.n}")
        if not self.l > 0:
            raise ValueError(f"thickness must be > 0 nm, got {self.l}")

    @property
    def length(self):
        return self.l

    @property
    def optical_thickness(self):
        return self.n * self.l

    def fresnel(self):
        return fresnel(self.n)

    def matrix(self, k):
        return slab_matrix(self, k)

    def polarizability(self, k):
        return polarizability(self, k)

    def padding_phase(self, k):
        return padding_phase(self, k)

    def state_at(self, k, s, right):
        # state just inside the dielectric, in dielectric amplitudes
        f = self.fresnel()
        inside = interface_matrix(-f.rho, f.tau_r) @ right
        if s <= 0:
            return interface_matrix(f.rho, f.tau_l) @ free_space(self.n * k, self.l) @ inside
        return free_space(self.n * k, self.l - s) @ inside


def slab_matrix(m, k):
    """Transfer matrix of a dielectric slab, ``M_l @ M_fs(n l) @ M_r``."""
    f = fresnel(m.n)
    left = interface_matrix(f.rho, f.tau_l)
    right = interface_matrix(-f.rho, f.tau_r)
    return left @ free_space(np.multiply(m.n, k), m.l) @ right


def polarizability(m, k):
    """Polarizability ``zeta = (n^2-1)/(2n) sin(k n l)`` of a slab."""
    return (m.n ** 2 - 1) / (2 * m.n) * np.sin(np.multiply(k, m.n * m.l))


def padding_phase(m, k):
    """Padding phase ``phi`` that makes the padded thin membrane equal the slab.

    Closed form: with ``x = k n l`` and ``q = floor(n l / lambda)``,

        phi0 = arccos[((n^2-1) + (n^2+1) cos x) / ((n^2+1) + (n^2-1) cos x)] / 2
        phi  = phi0 + q pi          if sin x >= 0
        phi  = pi - phi0 + q pi     if sin x < 0

    evaluated here through the equivalent ``tan(phi) = tan(x/2) / n`` on the
    branch ``phi - q pi`` in ``[0, pi)``, which stays accurate where the
    arccos argument approaches +-1. The result is continuous in ``l`` and
    grows by ``pi`` whenever ``n l`` passes a multiple of ``lambda``.
    """
    x = np.multiply(k, m.n * m.l)
    q = np.floor(x / (2 * np.pi))
    y = x / 2 - q * np.pi
    return q * np.pi + np.arctan2(np.sin(y), m.n * np.cos(y))


@dataclass(frozen=True)
class ThinMembrane:
    """Effective thin membrane: polarizability and padding phase [rad]."""

    zeta: float
    padding_phase: float = 0.0

    @classmethod
    def from_slab(cls, m, k):
        return cls(zeta=polarizability(m, k), padding_phase=padding_phase(m, k))


def thin_matrix(t, k=None, include_padding=True):
    """Transfer matrix of a thin membrane, optionally with its two paddings.

    ``M_fs(phi/k) @ Mtilde @ M_fs(phi/k)``; the padding enters only through
    its phase so `k` is not needed.
    """
    core = thin_scatterer(t.zeta)
    if not include_padding:
        return core
    pad = propagation(t.padding_phase)
    return pad @ core @ pad


def padded_matrix(m, k):
    """Padded thin-membrane matrix equivalent to ``slab_matrix(m, k)``."""
    return thin_matrix(ThinMembrane.from_slab(m, k), k, include_padding=True)


def verify_equivalence(m, k):
    """Largest element-wise ``|M_slab - M_padded|`` over all entries and all `k`."""
    return float(np.max(np.abs(slab_matrix(m, k) - padded_matrix(m, k))))


@dataclass(frozen=True)
class PaddedMembrane:
    """Stack element: a slab replaced by its padded thin-membrane model.

    The element occupies the slab's extent ``l`` so that fields outside it
    coincide with the full model. The thin scatterer sits at the centre and
    each padding phase is spread uniformly over one half of the extent.
    """

    membrane: SlabMembrane

    @property
    def length(self):
        return self.membrane.l

    def matrix(self, k):
        return padded_matrix(self.membrane, k)

    def state_at(self, k, s, right):
        half = self.membrane.l / 2
        phi = padding_phase(self.membrane, k)
        rate = phi / half
        if s >= half:
            return propagation(rate * (self.membrane.l - s)) @ right
        centre = thin_scatterer(polarizability(self.membrane, k)) @ propagation(phi) @ right
        return propagation(rate * (half - s)) @ centre
