"""Fabry-Perot cavity loaded with a membrane array: assembly, resonances, parity."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .array import MembraneArray, array_matrix
from .errors import ClassificationError, GeometryError, TrackingError
from .tmm_core import Gap, Stack, ThinScatterer, field_profile, transmittance

EPS = np.finfo(float).eps


def mirror_zeta_from_finesse(finesse):
    """Mirror polarizability giving a lossless cavity of the given finesse.

    Solves ``pi sqrt(R) / (1 - R) = F`` for the intensity reflectance ``R``
    and returns ``sqrt(R / (1 - R))``, the polarizability of a thin
    scatterer with that reflectance.
    """
    finesse = float(finesse)
    if not finesse > 1:
        raise ValueError(f"finesse must be > 1, got {finesse}")
    # positive root of F s^2 + pi s - F = 0, s = sqrt(R)
    s = 2 * finesse / (np.pi + np.sqrt(np.pi ** 2 + 4 * finesse ** 2))
    r2 = s * s
    return float(np.sqrt(r2 / (1 - r2)))


def finesse_from_mirror_zeta(zeta):
    r2 = zeta ** 2 / (1 + zeta ** 2)
    return float(np.pi * np.sqrt(r2) / (1 - r2))


@dataclass(frozen=True)
class CavityConfig:
    """Two identical thin mirrors a distance `length` [nm] apart, array inside.

    Exactly one of `finesse` and `mirror_zeta` is given. The array (if any)
    sits at the centre, shifted right by `center_offset` nm.
    """

    length: float
    array: MembraneArray | None = None
    finesse: float | None = None
    mirror_zeta: float | None = None
    center_offset: float = 0.0

    def __post_init__(self):
        if (self.finesse is None) == (self.mirror_zeta is None):
            raise ValueError("give exactly one of finesse and mirror_zeta")
        if self.finesse is not None and not self.finesse > 1:
            raise ValueError(f"finesse must be > 1, got {self.finesse}")
        if self.mirror_zeta is not None and not self.mirror_zeta > 0:
            raise ValueError(f"mirror_zeta must be > 0, got {self.mirror_zeta}")
        if not self.length > 10 * self.array_extent:
            raise GeometryError(
                f"cavity length {self.length} nm must exceed 10x the array extent "
                f"({self.array_extent} nm)")
        lm, lp = self.outer_gaps
        if lm <= 0 or lp <= 0:
            raise GeometryError("center_offset pushes the array into a mirror")

    @property
    def zeta_c(self):
        if self.mirror_zeta is not None:
            return float(self.mirror_zeta)
        return mirror_zeta_from_finesse(self.finesse)

    @property
    def effective_finesse(self):
        return finesse_from_mirror_zeta(self.zeta_c)

    @property
    def count(self):
        return 0 if self.array is None else self.array.count

    @property
    def array_extent(self):
        return 0.0 if self.array is None else self.array.extent

    @property
    def outer_gaps(self):
        """Lengths ``(L-, L+)`` of the subcavities left and right of the array."""
        half = (self.length - self.array_extent) / 2
        return half + self.center_offset, half - self.center_offset

    @property
    def optical_length(self):
        """Optical path between the mirrors with the array transparent."""
        lm, lp = self.outer_gaps
        inner = 0.0 if self.array is None else self.array.optical_path
        return lm + lp + inner

    @property
    def fsr(self):
        """Free spectral range in wavenumber, ``pi / L_opt``."""
        return np.pi / self.optical_length

    @property
    def linewidth(self):
        """Estimated resonance full width in wavenumber, ``fsr / F``."""
        return self.fsr / self.effective_finesse

    @property
    def is_symmetric(self):
        return self.center_offset == 0

    def gaps(self, displacements=None):
        """Vacuum gap lengths from the left mirror to the right mirror.

        Displacing membrane j by ``dx_j`` (positive = towards the right
        mirror) lengthens the gap on its left and shortens the one on its
        right, so the total length is unchanged.
        """
        lm, lp = self.outer_gaps
        n = self.count
        if n == 0:
            if displacements is not None and len(displacements):
                raise GeometryError("empty cavity takes no displacements")
            return [lm + lp]
        dx = np.zeros(n) if displacements is None else np.asarray(displacements, float)
        if dx.shape != (n,):
            raise GeometryError(f"expected {n} displacements, got {dx.shape}")
        d = self.array.spacing
        if n > 1 and np.any(np.abs(dx) >= d / 2):
            raise GeometryError("displacements must stay below half the membrane spacing")
        out = [lm + dx[0]]
        out += [d + dx[j + 1] - dx[j] for j in range(n - 1)]
        out.append(lp - dx[-1])
        if min(out) <= 0:
            raise GeometryError("displacement closes a gap")
        return out

    def stack(self, displacements=None):
        mirror = ThinScatterer(self.zeta_c)
        gaps = self.gaps(displacements)
        elements = [mirror, Gap(gaps[0])]
        if self.array is not None:
            elements += self.array.elements(gaps[1:-1])
            elements.append(Gap(gaps[-1]))
        elements.append(mirror)
        return Stack(elements)

    def membrane_spans(self):
        """``(left, right)`` positions of each membrane at equilibrium."""
        if self.array is None:
            return []
        lm, _ = self.outer_gaps
        l, d = self.array.membrane.l, self.array.spacing
        return [(lm + j * (l + d), lm + j * (l + d) + l) for j in range(self.count)]


def cavity_matrix(c, k, displacements=None):
    """``M_c M_fs(L-) M_N M_fs(L+) M_c`` with optional membrane displacements."""
    return c.stack(displacements).matrix(k)


def cavity_transmittance(c, k, displacements=None):
    return transmittance(cavity_matrix(c, k, displacements))


@dataclass(frozen=True)
class ResonanceRecord:
    """A cavity transmission peak.

    ``index`` is the ordinal within the scan window and ``mode_number`` the
    longitudinal mode number from :func:`mode_number`.
    """

    k_res: float
    mode_parity: str
    peak_transmittance: float
    index: int
    mode_number: int
    bracket: float

    @property
    def wavelength(self):
        return 2 * np.pi / self.k_res


def resolution(k):
    """Smallest resolvable change of a resonance wavenumber near `k`."""
    return 8 * EPS * abs(k)


def refine_resonance(c, k_guess, half_width=None, displacements=None, stack=None):
    """Locate the transmission maximum within ``k_guess +- half_width``.

    The peak is the sign change of ``|m22(k+h)|^2 - |m22(k-h)|^2`` with
    ``h`` a thousandth of the linewidth, solved with Brent's method down to
    the floating-point resolution of ``k``. Raises TrackingError when no
    maximum lies inside the bracket.
    """
    if stack is None:
        stack = c.stack(displacements)
    if half_width is None:
        half_width = 0.5 * c.linewidth
    h = 1e-3 * c.linewidth

    def slope(k):
        a = np.abs(stack.matrix(np.array([k - h, k + h]))[:, 1, 1]) ** 2
        return a[1] - a[0]

    lo, hi = k_guess - half_width, k_guess + half_width
    if not (slope(lo) < 0 < slope(hi)):
        raise TrackingError(f"no transmission maximum within {half_width:.3g} rad/nm "
                            f"of k={k_guess!r}")
    return brentq(slope, lo, hi, xtol=2 * EPS * abs(k_guess), rtol=4 * EPS)


def single_pass_phase(c, k):
    """Phase that a resonance of mode number m brings to ``(m + 1) pi``.

    Sum of free propagation over both subcavities, the unwrapped phase of
    the array transmission and the inner reflection phase of one mirror.
    Exact at wavelengths where the array does not reflect.
    """
    lm, lp = c.outer_gaps
    phase = k * (lm + lp)
    if c.array is not None:
        opt = c.array.optical_path
        t = 1.0 / array_matrix(c.array, k)[..., 1, 1]
        phase = phase + k * opt + np.angle(t * np.exp(-1j * k * opt))
    z = c.zeta_c
    return phase + np.angle(1j * z / (1 - 1j * z))


def mode_number(c, k):
    """Longitudinal mode number; ``k L / pi`` for an empty perfect-mirror cavity."""
    return int(np.rint(single_pass_phase(c, k) / np.pi)) - 1


def index_parity(c, k):
    return "odd" if mode_number(c, k) % 2 else "even"


def _symmetry_samples(c):
    lm, _ = c.outer_gaps
    outer = np.linspace(0.01, 0.99, 97) * lm
    if c.array is None:
        return outer
    inner = np.linspace(lm, c.length / 2, 41)
    return np.concatenate([outer, inner])


def field_parity(c, k, displacements=None):
    """Parity from the field's mirror symmetry about the cavity centre.

    Odd modes are symmetric, ``E(L - x) = E(x)``, as for ``sin(m pi x / L)``
    with m odd; even modes are antisymmetric.
    """
    x = _symmetry_samples(c)
    prof = field_profile(c.stack(displacements), k, np.concatenate([x, c.length - x]))
    e1, e2 = prof.amplitude[: len(x)], prof.amplitude[len(x):]
    sym = np.sum(np.abs(e1 + e2) ** 2)
    anti = np.sum(np.abs(e1 - e2) ** 2)
    if max(sym, anti) < 10 * min(sym, anti):
        raise ClassificationError(f"field at k={k!r} is neither symmetric nor antisymmetric")
    return "odd" if sym > anti else "even"


def classify_parity(c, r):
    """Mode parity of resonance `r` (a ResonanceRecord or a wavenumber).

    The mode-number parity is cross-checked against the field symmetry for
    centred arrays; disagreement raises ClassificationError.
    """
    k = r.k_res if isinstance(r, ResonanceRecord) else float(r)
    by_index = index_parity(c, k)
    if c.is_symmetric:
        by_field = field_parity(c, k)
        if by_field != by_index:
            raise ClassificationError(
                f"mode number {mode_number(c, k)} says {by_index}, field symmetry says {by_field}")
    return by_index


def find_resonances(c, k_center, window):
    """All cavity transmission maxima within ``k_center +- window/2``.

    Coarse scan at an eighth of the linewidth, keeping local maxima above
    half the largest transmittance, each refined by :func:`refine_resonance`.
    Parity comes from the field symmetry for centred arrays, else from the
    mode number.
    """
    if window < 2 * c.fsr:
        raise ValueError("window must cover at least two free spectral ranges")
    step = c.linewidth / 8
    n = int(np.ceil(window / step)) + 1
    ks = k_center - window / 2 + step * np.arange(n)
    stack = c.stack()
    t = transmittance(stack.matrix(ks))
    inner = np.flatnonzero((t[1:-1] > t[:-2]) & (t[1:-1] >= t[2:])) + 1
    inner = inner[t[inner] > 0.5 * t.max()]
    out = []
    for i, j in enumerate(inner):
        k = refine_resonance(c, ks[j], half_width=2 * step, stack=stack)
        parity = field_parity(c, k) if c.is_symmetric else index_parity(c, k)
        peak = float(transmittance(stack.matrix(k)))
        out.append(ResonanceRecord(k, parity, peak, i, mode_number(c, k), resolution(k)))
    return out


def tune_length(c, k, parity):
    """Copy of `c` with its length adjusted so a mode of `parity` resonates at `k`.

    The array stays centred; the change is below half a wavelength. Meant
    for wavelengths where the array is transmissive, where the resonance
    condition is exact.
    """
    if parity not in ("odd", "even"):
        raise ValueError(f"parity must be 'odd' or 'even', got {parity!r}")
    lm, lp = c.outer_gaps
    rest = single_pass_phase(c, k) - k * (lm + lp)
    m0 = mode_number(c, k)
    want = 1 if parity == "odd" else 0
    best = None
    for m in (m0 - 1, m0, m0 + 1):
        if m % 2 != want:
            continue
        outer = ((m + 1) * np.pi - rest) / k
        if best is None or abs(outer - (lm + lp)) < abs(best - (lm + lp)):
            best = outer
    return replace(c, length=float(best + c.array_extent))


def resonance_at(c, k, parity):
    """Tune `c` for a `parity` mode at `k`; returns ``(config, ResonanceRecord)``."""
    tuned = tune_length(c, k, parity)
    k_res = refine_resonance(tuned, k)
    got = classify_parity(tuned, k_res)
    if got != parity:
        raise ClassificationError(f"tuned for {parity} mode but found {got}")
    peak = float(cavity_transmittance(tuned, k_res))
    return tuned, ResonanceRecord(k_res, got, peak, 0, mode_number(tuned, k_res),
                                  resolution(k_res))
