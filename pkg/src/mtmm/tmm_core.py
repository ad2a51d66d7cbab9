"""Complex 2x2 transfer-matrix algebra for one-dimensional optics.

A transfer matrix maps the wave state on the right of an element to the
state on its left, ``(A, B) = M @ (C, D)``. The first component of a state
is the amplitude of the left-moving (backward) wave, the second that of the
right-moving (forward) wave, both referred to the plane where the state is
taken. The electric field at that plane is the sum of the two.

Matrices are numpy arrays of shape ``(..., 2, 2)``; every function broadcasts
over leading axes so that whole wavelength sweeps are evaluated at once.
Lengths are in nanometres and wavenumbers ``k = 2*pi/lambda`` in rad/nm.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import DegenerateMatrixError, PositionError

# underflow guard, not a physics tolerance
M22_FLOOR = 1e-300


def propagation(phase):
    """Diagonal propagation matrix ``diag(exp(i*phase), exp(-i*phase))``."""
    phase = np.asarray(phase, dtype=float)
    out = np.zeros(phase.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = np.exp(1j * phase)
    out[..., 1, 1] = np.exp(-1j * phase)
    return out


def free_space(k, d):
    """Free-space propagation over a distance `d` at wavenumber `k`.

    Negative `d` gives the inverse matrix.
    """
    return propagation(np.multiply(k, d))


def thin_scatterer(zeta):
    """Transfer matrix of an infinitely thin scatterer of polarizability `zeta`.

    ``[[1 + i*zeta, i*zeta], [-i*zeta, 1 - i*zeta]]``; used both for the
    effective thin membrane and for the cavity end mirrors.
    """
    zeta = np.asarray(zeta, dtype=float)
    out = np.empty(zeta.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = 1 + 1j * zeta
    out[..., 0, 1] = 1j * zeta
    out[..., 1, 0] = -1j * zeta
    out[..., 1, 1] = 1 - 1j * zeta
    return out


def identity(shape=()):
    return np.broadcast_to(np.eye(2, dtype=complex), tuple(shape) + (2, 2)).copy()


def multiply(*matrices):
    """Product of transfer matrices, evaluated strictly left to right."""
    if not matrices:
        return identity()
    return reduce(np.matmul, matrices)


def det(m):
    m = np.asarray(m)
    return m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]


def _check_m22(m22):
    if np.any(np.abs(m22) < M22_FLOOR):
        raise DegenerateMatrixError("|m22| underflowed; transmissivity undefined")


def reflectivity_transmissivity(m):
    """Amplitude reflectivity and transmissivity for a wave incident from the left.

    Returns ``(r, t)`` with ``t = 1/m22`` and ``r = m12/m22``.
    """
    m = np.asarray(m)
    m22 = m[..., 1, 1]
    _check_m22(m22)
    return m[..., 0, 1] / m22, 1.0 / m22


def mirrored_reflectivity(m):
    """Reflectivity for a wave incident from the right, ``-m21/m22``.

    Sign conventions for this quantity vary between references.
    """
    m = np.asarray(m)
    m22 = m[..., 1, 1]
    _check_m22(m22)
    return -m[..., 1, 0] / m22


def transmittance(m):
    """Intensity transmittance ``1/|m22|**2``."""
    m22 = np.asarray(m)[..., 1, 1]
    _check_m22(m22)
    return 1.0 / np.abs(m22) ** 2


# --------------------------------------------------------------------------
# Stack layout
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Gap:
    """Vacuum layer of the given length [nm]."""

    length: float

    def matrix(self, k):
        return free_space(k, self.length)

    def state_at(self, k, s, right):
        return free_space(k, self.length - s) @ right


@dataclass(frozen=True)
class ThinScatterer:
    """Zero-thickness scatterer (thin membrane or cavity mirror)."""

    zeta: float
    length = 0.0

    def matrix(self, k):
        return np.broadcast_to(thin_scatterer(self.zeta), np.shape(k) + (2, 2))

    def state_at(self, k, s, right):
        return right


class Stack:
    """Ordered sequence of optical elements starting at position `origin`.

    Elements need a ``length`` attribute, a ``matrix(k)`` method and a
    ``state_at(k, s, right)`` method returning the wave state at distance
    ``s`` from the element's left face given the state at its right face.
    """

    def __init__(self, elements, origin=0.0):
        self.elements = tuple(elements)
        self.origin = float(origin)
        lengths = [float(e.length) for e in self.elements]
        self.boundaries = self.origin + np.concatenate([[0.0], np.cumsum(lengths)])

    @property
    def extent(self):
        return self.boundaries[-1] - self.origin

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"Stack({list(self.elements)!r}, origin={self.origin})"

    def matrices(self, k):
        return [e.matrix(k) for e in self.elements]

    def matrix(self, k):
        k = np.asarray(k, dtype=float)
        if not self.elements:
            return identity(k.shape)
        return multiply(*self.matrices(k))


@dataclass(frozen=True)
class FieldProfile:
    """Total electric field sampled along a stack (arbitrary units).

    ``amplitude`` is normalised to a unit forward wave incident from the left.
    """

    position: np.ndarray
    amplitude: np.ndarray

    @property
    def intensity(self):
        return self.amplitude.real ** 2 + self.amplitude.imag ** 2

    def __len__(self):
        return len(self.position)


def field_profile(stack, k, positions):
    """Field at `positions` for a unit wave incident from the left at wavenumber `k`.

    Nothing is incident from the right. The state at the right boundary is
    ``(0, t)``; it is carried back through the stack element by element and
    each sample reports the forward + backward superposition at its position.
    Inside a dielectric the local wavenumber is ``n*k``.
    """
    k = float(k)
    x = np.atleast_1d(np.asarray(positions, dtype=float))
    lo, hi = stack.boundaries[0], stack.boundaries[-1]
    tol = 1e-9 * max(1.0, abs(hi))
    if np.any(x < lo - tol) or np.any(x > hi + tol):
        raise PositionError(f"sample outside stack extent [{lo}, {hi}] nm")

    mats = stack.matrices(k)
    _, t = reflectivity_transmissivity(multiply(*mats) if mats else identity())
    right_states = [None] * len(mats)
    state = np.array([0.0, t], dtype=complex)
    for i in range(len(mats) - 1, -1, -1):
        right_states[i] = state
        state = mats[i] @ state

    amp = np.empty(x.shape, dtype=complex)
    if not mats:
        # vacuum of zero length: only the incident wave
        amp[:] = np.exp(1j * k * (x - lo))
        return FieldProfile(x, amp)
    # element index containing each sample; zero-length elements never own one
    idx = np.searchsorted(stack.boundaries, x, side="right") - 1
    idx = np.clip(idx, 0, len(mats) - 1)
    for j, (xj, i) in enumerate(zip(x, idx)):
        while i > 0 and stack.elements[i].length == 0:
            i -= 1
        elem = stack.elements[i]
        s = min(max(xj - stack.boundaries[i], 0.0), float(elem.length))
        amp[j] = np.sum(elem.state_at(k, s, right_states[i]))
    return FieldProfile(x, amp)
