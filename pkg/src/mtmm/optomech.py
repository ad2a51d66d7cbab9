"""Linear optomechanical couplings of membrane arrays in a cavity.

Couplings are resonance shifts per unit membrane displacement. The
zero-point extent is set to one, so only ratios to the reference coupling
``g = 2 omega / L`` carry physical meaning without a mechanical model.

Displacements are positive towards the right mirror. With that
orientation the two-membrane pull ``dk/dx1`` and the collective coupling
are related by ``g_pm = sqrt(2) c dk/dx1``, for the analytic and the
numerical results alike.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c as _C_SI

from .array import DEGENERACY_EPS, find_transmissive_wavelengths
from .cavity import (CavityConfig, ResonanceRecord, refine_resonance, resolution, resonance_at)
from .errors import ClassificationError, NotTransmissiveError, PoleError, StepDegenerateError
from .membrane import polarizability

SPEED_OF_LIGHT = _C_SI * 1e9  # nm/s
SQRT2 = np.sqrt(2.0)


# --------------------------------------------------------------------------
# Analytic two-membrane results (thin-membrane model)
# --------------------------------------------------------------------------

def array_chi(zeta, nu):
    """Two-membrane polarizability ``chi = 2 zeta (cos nu - zeta sin nu)``."""
    return 2 * zeta * (np.cos(nu) - zeta * np.sin(nu))


def transmissive_nu(zeta, branch):
    """Spacing phase in ``(-pi, pi]`` where ``cos nu = -+ zeta/sqrt(1+zeta^2)``."""
    q = np.sqrt(1 + np.square(zeta))
    sign = -1.0 if branch == "plus" else 1.0
    return np.arctan2(sign / q, sign * zeta / q)


def _pole_check(den, what):
    if np.any(np.abs(den) < 1e-12):
        raise PoleError(f"{what}: denominator vanishes (effective cavity length -> 0)")


def analytic_g_pm(zeta, d_over_L):
    """Collective couplings ``(g_plus, g_minus)`` in units of g.

        g_pm = sqrt(2) zeta (+-sqrt(1+zeta^2) + zeta) / (1 +- 4 (d/L) zeta sqrt(1+zeta^2))
    """
    zeta = np.asarray(zeta, dtype=float)
    q = np.sqrt(1 + zeta ** 2)
    den_p = 1 + 4 * d_over_L * zeta * q
    den_m = 1 - 4 * d_over_L * zeta * q
    _pole_check(den_p, "g_plus")
    _pole_check(den_m, "g_minus")
    g_plus = SQRT2 * zeta * (q + zeta) / den_p
    g_minus = SQRT2 * zeta * (-q + zeta) / den_m
    return g_plus, g_minus


def limiting_g_plus(zeta, d_over_L):
    """Large-|zeta| form ``2 sqrt(2) zeta^2 / (1 + 4 (d/L) zeta^2)`` of g_plus/g."""
    return 2 * SQRT2 * zeta ** 2 / (1 + 4 * d_over_L * zeta ** 2)


def limiting_g_minus(zeta, d_over_L):
    """Large-|zeta| form ``-(1/sqrt(2)) / (1 - 4 (d/L) zeta^2)`` of g_minus/g."""
    return -1 / SQRT2 / (1 - 4 * d_over_L * zeta ** 2)


def analytic_frequency_pull(zeta, nu, d, L, k, tol=1e-9):
    """``dk/d(dx1) = -Im{beta - e^{i nu} alpha} / (L + 2 d dchi/dnu)``.

    With ``alpha = 2 i k zeta^2 e^{-i nu}`` and
    ``beta = -2 k zeta (1 - i zeta) e^{-i nu}``. Only valid at transmissive
    points; the pull on the second membrane is the negative of this one.
    """
    if abs(array_chi(zeta, nu)) > tol:
        raise NotTransmissiveError(f"chi={array_chi(zeta, nu):.3g} at nu={nu}")
    e = np.exp(-1j * nu)
    alpha = 2j * k * zeta ** 2 * e
    beta = -2 * k * zeta * (1 - 1j * zeta) * e
    dchi = 2 * zeta * (-np.sin(nu) - zeta * np.cos(nu))
    den = L + 2 * d * dchi
    _pole_check(den / L, "frequency pull")
    return -np.imag(beta - np.exp(1j * nu) * alpha) / den


def frequency_pull_closed_form(zeta, d, L, k, branch):
    """``2 k zeta (+-q + zeta) / (L [1 +- 4 (d/L) zeta q])`` with ``q = sqrt(1+zeta^2)``.

    Simplified form of :func:`analytic_frequency_pull` on the plus/minus roots.
    """
    s = 1.0 if branch == "plus" else -1.0
    q = np.sqrt(1 + zeta ** 2)
    den = L * (1 + s * 4 * (d / L) * zeta * q)
    _pole_check(den / L, "frequency pull")
    return 2 * k * zeta * (s * q + zeta) / den


def g_pm_from_pull(dk_dx1, k, L):
    """Collective coupling in units of g from the analytic frequency pull."""
    return SQRT2 * dk_dx1 * L / (2 * k)


# --------------------------------------------------------------------------
# Numerical couplings
# --------------------------------------------------------------------------

@dataclass
class CouplingResult:
    """Per-membrane couplings at one cavity resonance.

    ``g_per_membrane`` and ``g_collective`` are in rad/s per nm,
    ``normalized`` holds ``g_j / g_reference``.
    """

    g_per_membrane: np.ndarray
    g_collective: float
    g_reference: float
    normalized: np.ndarray
    wavelength: float
    parity: str | None = None
    branch: str = "n/a"
    step: float = float("nan")
    richardson: float = float("nan")
    k_res: float = float("nan")

    @property
    def collective_normalized(self):
        return self.g_collective / self.g_reference

    @property
    def breathing_normalized(self):
        """Signed breathing-mode coupling ``(g1 - g2)/sqrt(2)`` over g (two membranes)."""
        if len(self.normalized) != 2:
            raise ValueError("breathing coupling is defined for two membranes")
        return float((self.normalized[0] - self.normalized[1]) / SQRT2)


def _pull_per_membrane(c, k_res, step, window):
    n = c.count
    out = np.empty(n)
    for j in range(n):
        dx = np.zeros(n)
        dx[j] = step
        kp = refine_resonance(c, k_res, half_width=window, displacements=dx)
        km = refine_resonance(c, k_res, half_width=window, displacements=-dx)
        out[j] = (kp - km) / (2 * step)
    return out


def extract_couplings(c: CavityConfig, r, step=None, *, rtol=1e-3, strict=True,
                      max_step_fraction=1e-3):
    """Couplings ``g_j = c [k(+dx_j) - k(-dx_j)] / (2 dx_j)`` at resonance `r`.

    `r` is a ResonanceRecord or a resonance wavenumber. The default step is
    ``1e-6`` of the wavelength; it is enlarged until the largest resonance
    shift exceeds 1000x the resonance resolution. Repeating with half the
    step must agree within `rtol` (relative to the largest |g_j|). With
    ``strict=False`` neither guard raises, which is only useful where the
    couplings vanish.
    """
    if isinstance(r, ResonanceRecord):
        k_res, parity = r.k_res, r.mode_parity
    else:
        k_res, parity = float(r), None
    if c.count == 0:
        raise ValueError("cavity has no membranes")
    lam = 2 * np.pi / k_res
    step = 1e-6 * lam if step is None else float(step)
    window = 0.5 * c.linewidth
    floor = 1e3 * resolution(k_res)

    while True:
        pull = _pull_per_membrane(c, k_res, step, window)
        if np.max(np.abs(pull)) * 2 * step >= floor:
            break
        if step * 4 > max_step_fraction * lam:
            if strict:
                raise StepDegenerateError(
                    f"resonance shift below resolution at k={k_res!r} even with step {step:.3g} nm")
            break
        step *= 4

    half = _pull_per_membrane(c, k_res, step / 2, window)
    scale = max(np.max(np.abs(pull)), np.finfo(float).tiny)
    dev = float(np.max(np.abs(pull - half)) / scale)
    if strict and dev > rtol:
        raise StepDegenerateError(f"finite difference not converged: halving the step "
                                  f"changes g by {dev:.2e} (relative)")

    g = SPEED_OF_LIGHT * pull
    g_ref = SPEED_OF_LIGHT * 2 * k_res / c.length
    return CouplingResult(
        g_per_membrane=g,
        g_collective=float(np.sqrt(np.sum(g ** 2))),
        g_reference=float(g_ref),
        normalized=g / g_ref,
        wavelength=float(lam),
        parity=parity,
        step=step,
        richardson=dev,
        k_res=float(k_res),
    )


def expected_branch(root_branch, parity):
    """Analytic branch realised by the `parity` mode at a transmissive root.

    A plus-labelled root carries g_plus on the odd mode and g_minus on the
    even one; a minus-labelled root the other way round.
    """
    if root_branch not in ("plus", "minus"):
        raise ClassificationError(f"root has no branch label ({root_branch})")
    same = (root_branch == "plus") == (parity == "odd")
    return "plus" if same else "minus"


def sign_branch(g_numeric, zeta):
    """Branch implied by the sign structure: g_plus has the sign of zeta, g_minus the opposite."""
    return "plus" if np.sign(g_numeric) == np.sign(zeta) else "minus"


@dataclass(frozen=True)
class ComparisonRow:
    wavelength: float
    branch: str
    parity: str
    zeta: float
    g_numeric: float
    g_analytic: float
    rel_dev: float
    coupling: CouplingResult = field(repr=False, compare=False)

    @property
    def abs_numeric(self):
        return abs(self.g_numeric)


@dataclass
class Comparison:
    """Numeric-versus-analytic coupling table and the excluded degenerate roots."""

    rows: list
    degenerate: list

    @property
    def max_rel_dev(self):
        return max((r.rel_dev for r in self.rows), default=0.0)


def couplings_at(c, root, parity, **kwargs):
    """Tune the cavity for a `parity` mode at transmissive `root` and extract couplings."""
    tuned, rec = resonance_at(c, root.k, parity)
    res = extract_couplings(tuned, rec, **kwargs)
    return tuned, res


def compare_numeric_analytic(c, lam_min, lam_max, *, degeneracy_eps=DEGENERACY_EPS,
                             step=None, roots=None):
    """Full-model couplings against the thin-membrane prediction, two-membrane arrays.

    For every non-degenerate transmissive wavelength both resonances of the
    pair (odd and even) are tuned onto it. Each is assigned the analytic
    branch from the root label and its parity; the sign of the numeric
    coupling must agree with that assignment.
    """
    if c.array is None or c.array.count != 2:
        raise ValueError("numeric/analytic comparison needs a two-membrane array")
    if roots is None:
        roots = find_transmissive_wavelengths(c.array, lam_min, lam_max,
                                              degeneracy_eps=degeneracy_eps)
    rows, degenerate = [], []
    for root in roots:
        if root.degenerate:
            degenerate.append(root)
            continue
        for parity in ("odd", "even"):
            tuned, res = couplings_at(c, root, parity, step=step)
            branch = expected_branch(root.branch, parity)
            g_num = res.breathing_normalized
            zeta = float(polarizability(c.array.membrane, res.k_res))
            if sign_branch(g_num, zeta) != branch:
                raise ClassificationError(
                    f"at {root.wavelength:.6f} nm the {parity} mode has the sign of "
                    f"g_{sign_branch(g_num, zeta)} but the root label predicts g_{branch}")
            res.branch = branch
            g_plus, g_minus = analytic_g_pm(zeta, c.array.spacing / tuned.length)
            g_ana = float(g_plus if branch == "plus" else g_minus)
            rows.append(ComparisonRow(root.wavelength, branch, parity, zeta, g_num, g_ana,
                                      abs(g_num - g_ana) / abs(g_ana), res))
    return Comparison(rows, degenerate)

