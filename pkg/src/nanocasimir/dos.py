"""Frequency-domain density of states for a Drude sphere near a substrate."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from math import pi

import numpy as np
from scipy.signal import find_peaks

from .errors import BreakdownError, DomainError, MaterialKindError
from .materials import DRUDE, contrast_factor
from .spectral import coupled_modes, isolated_modes

UNITY = "per_mode_unity"
VERBATIM = "verbatim"
_ALIASES = {"unity": UNITY, UNITY: UNITY, VERBATIM: VERBATIM}

CSV_HEADER = ("omega_eV", "rho_sp", "rho_s", "diff")


def normalization_name(normalization):
    try:
        return _ALIASES[normalization]
    except KeyError:
        raise DomainError(f"unknown normalization {normalization!r}") from None


def fmt(x):
    """Scientific notation with 9 significant digits."""
    return f"{x:.8e}"


def mode_line(n, omega, omega_p, gamma):
    """Unit-area Drude line of a single mode with depolarization factor `n` (1/eV)."""
    w = np.asarray(omega, dtype=float)
    width = gamma * omega_p
    detune = w * w - n * omega_p * omega_p
    return (2.0 / pi) * omega_p * np.sqrt(n) * w * width / (detune * detune + (w * width) ** 2)


def mode_line_dn(n, omega, omega_p, gamma):
    """Derivative of :func:`mode_line` with respect to `n`."""
    w = np.asarray(omega, dtype=float)
    width = gamma * omega_p
    detune = w * w - n * omega_p * omega_p
    denom = detune * detune + (w * width) ** 2
    root = np.sqrt(n)
    return (2.0 / pi) * omega_p * w * width * (
        0.5 / (root * denom) + root * 2.0 * omega_p * omega_p * detune / (denom * denom))


def _require_valid(modes):
    if not modes.valid:
        raise BreakdownError(
            f"dipolar approximation breakdown: depolarization factors {modes.factors.tolist()} "
            "are not all inside (0, 1)", factors=modes.factors)


def dos_omega(modes, omega, omega_p, gamma, normalization=UNITY):
    """Total density of states ``rho_0 + 2 rho_1`` at photon energy `omega`.

    In the default ``per_mode_unity`` normalization every mode line has unit
    area (units 1/eV).  ``verbatim`` keeps the extra factor ``omega_p``.
    """
    _require_valid(modes)
    if not omega_p > 0:
        raise DomainError("omega_p must be > 0")
    if not gamma > 0:
        raise DomainError("gamma must be > 0")
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise DomainError("omega must be >= 0")
    total = np.zeros(w.shape)
    for e in modes.entries:
        total = total + e.degeneracy * e.weight * mode_line(e.n, w, omega_p, gamma)
    if normalization_name(normalization) == VERBATIM:
        total = total * omega_p
    return total[()] if total.ndim == 0 else total


@dataclass(frozen=True)
class DOSProfile:
    omegas: np.ndarray
    rho_sp: np.ndarray
    rho_s: np.ndarray
    diff: np.ndarray
    normalization: str = UNITY

    def __post_init__(self):
        n = len(self.omegas)
        if n < 2 or not (len(self.rho_sp) == len(self.rho_s) == len(self.diff) == n):
            raise DomainError("profile arrays must have equal length >= 2")
        if np.any(np.diff(self.omegas) <= 0):
            raise DomainError("omega grid must be strictly increasing")

    def rows(self):
        for row in zip(self.omegas, self.rho_sp, self.rho_s, self.diff):
            yield [fmt(v) for v in row]

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        writer.writerows(self.rows())
        return buf.getvalue()


def default_grid(omega_p, points=2000):
    return np.linspace(0.0, 2.0 * omega_p, points)


def _sphere_params(environment, gamma):
    sphere = environment.sphere
    if sphere.kind != DRUDE:
        raise MaterialKindError("the frequency-domain density of states needs a Drude sphere")
    if gamma is None:
        gamma = sphere.damping_ratio
    return sphere.plasma_energy, gamma


def dos_difference(environment, geometry, grid=None, gamma=None, normalization=UNITY,
                   selection_rule=True):
    """Coupled and isolated densities of states sampled on `grid` (eV)."""
    omega_p, gamma = _sphere_params(environment, gamma)
    grid = default_grid(omega_p) if grid is None else np.asarray(grid, dtype=float)
    f_c = contrast_factor(environment)
    coupled = coupled_modes(f_c, geometry.d_over_R, selection_rule)
    rho_sp = dos_omega(coupled, grid, omega_p, gamma, normalization)
    if f_c == 0:
        rho_s = rho_sp.copy()
    else:
        rho_s = dos_omega(isolated_modes(), grid, omega_p, gamma, normalization)
    return DOSProfile(grid, rho_sp, rho_s, rho_sp - rho_s, normalization_name(normalization))


def dos_peaks(profile, rel_prominence=0.01):
    """Positions (eV) of the positive and negative extrema of ``profile.diff``.

    The difference is smoothed with a 3-point moving average first; only peaks
    with prominence of at least `rel_prominence` times ``max|diff|`` count.
    """
    diff = np.asarray(profile.diff)
    scale = np.max(np.abs(diff))
    if scale == 0:
        return np.array([]), np.array([])
    smooth = np.convolve(diff, np.ones(3) / 3.0, mode="same")
    smooth[0], smooth[-1] = diff[0], diff[-1]
    prom = rel_prominence * scale
    pos, _ = find_peaks(smooth, prominence=prom)
    neg, _ = find_peaks(-smooth, prominence=prom)
    pos = pos[smooth[pos] > 0]
    neg = neg[smooth[neg] < 0]
    return profile.omegas[pos], profile.omegas[neg]


FIG4_RATIOS = (0.0, 0.5, 1.0, 2.0, 4.0)


def sample_dos_figure4(environment, z_over_R=FIG4_RATIOS, grid=None, radius=10.0,
                       normalization=UNITY):
    """One profile per separation ratio; breakdown cases come back as ``None``.

    Returns a list of ``(z_over_R, profile_or_None, message)`` tuples in input
    order.  The profiles depend only on ``z/R``, so `radius` is a formality.
    """
    from .spectral import Geometry

    out = []
    for ratio in z_over_R:
        try:
            prof = dos_difference(environment, Geometry.from_ratio(radius, ratio), grid,
                                  normalization=normalization)
        except BreakdownError as exc:
            out.append((ratio, None, str(exc)))
        else:
            out.append((ratio, prof, ""))
    return out


def figure4_csv(samples):
    """CSV table ``z_over_R,valid,omega_eV,rho_sp,rho_s,diff`` for :func:`sample_dos_figure4` output."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("z_over_R", "valid") + CSV_HEADER)
    for ratio, prof, _ in samples:
        if prof is None:
            writer.writerow([fmt(ratio), "false", "", "", "", ""])
            continue
        for row in prof.rows():
            writer.writerow([fmt(ratio), "true"] + row)
    return buf.getvalue()
