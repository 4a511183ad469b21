"""Image-dipole mode matrix and its spectral decomposition.

The sphere dipole components are indexed by ``m`` in the order ``(0, 1, -1)``:
``m = 0`` is perpendicular to the substrate, ``m = +-1`` are parallel.  The
mode matrix depends on the geometry only through ``d / R``, the ratio of the
sphere-center height to the radius.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial, pi, sqrt

import numpy as np

from .errors import DomainError

N_ISOLATED = 1.0 / 3.0
M_ORDER = (0, 1, -1)
_SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class Geometry:
    """Sphere of radius `radius` (nm) whose surface sits `gap` nm above the substrate."""

    radius: float
    gap: float

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError("radius must be > 0")
        if not self.gap >= 0:
            raise DomainError("gap must be >= 0")

    @classmethod
    def from_ratio(cls, radius, z_over_R):
        return cls(radius, z_over_R * radius)

    @property
    def center_distance(self):
        return self.gap + self.radius

    @property
    def d_over_R(self):
        return 1.0 + self.gap / self.radius


@dataclass(frozen=True)
class ModeEntry:
    m: int
    n: float
    weight: float
    degeneracy: int


@dataclass(frozen=True)
class SpectralModes:
    """Depolarization factors and spectral weights for the ``m = 0`` and ``|m| = 1`` channels."""

    entries: tuple
    f_c: float
    d_over_R: float

    @property
    def valid(self):
        return all(0.0 < e.n < 1.0 for e in self.entries)

    @property
    def factors(self):
        return np.array([e.n for e in self.entries])

    def channel(self, m):
        return [e for e in self.entries if e.m == m]

    @property
    def degeneracy_total(self):
        return sum({e.m: e.degeneracy for e in self.entries}.values())


def _check_ratio(d_over_R):
    if not d_over_R >= 1:
        raise DomainError(f"d/R = {d_over_R!r} < 1: the sphere intersects the substrate")


def interaction_element(d_over_R, m, m_prime, selection_rule=True):
    """Dimensionless dipole / image-dipole coupling between components `m` and `m_prime`."""
    _check_ratio(d_over_R)
    if m not in (-1, 0, 1) or m_prime not in (-1, 0, 1):
        raise DomainError("m and m_prime must be in {-1, 0, 1}")
    if selection_rule and m != m_prime:
        return 0.0
    norm = factorial(1 + m) * factorial(1 - m) * factorial(1 + m_prime) * factorial(1 - m_prime)
    return 4 * pi * (-1) ** m * d_over_R ** -3 * (2.0 / 3.0) / sqrt(norm)


def h_matrix(f_c, d_over_R, selection_rule=True):
    """3x3 mode matrix over ``M_ORDER``.

    With the default axial selection rule the matrix is diagonal with
    ``H00 = 1/3 + 2/3 f_c (R/d)**3`` and ``H11 = 1/3 + 1/3 f_c (R/d)**3``.
    """
    _check_ratio(d_over_R)
    if not abs(f_c) <= 1:
        raise DomainError("|f_c| must be <= 1")
    H = np.empty((3, 3))
    for i, m in enumerate(M_ORDER):
        for j, mp in enumerate(M_ORDER):
            H[i, j] = (N_ISOLATED * (i == j)
                       + f_c / (4 * pi) * (-1) ** m * interaction_element(d_over_R, m, mp, selection_rule))
    return H


def _blocks(H):
    """Connected components of the off-diagonal sparsity pattern."""
    n = len(H)
    seen = set()
    out = []
    for start in range(n):
        if start in seen:
            continue
        stack, comp = [start], []
        seen.add(start)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if j not in seen and (H[i, j] != 0 or H[j, i] != 0):
                    seen.add(j)
                    stack.append(j)
        out.append(sorted(comp))
    return out


def eigenmodes(H, f_c, d_over_R):
    """Decompose `H` into depolarization factors and spectral weights.

    The weight of eigenvector ``s`` in channel ``m`` is ``|U[m, s]|**2``; the
    weights of a channel sum to one.  Blocks of size one (the default, with the
    selection rule) give ``n = H[m, m]`` and weight exactly 1.
    """
    H = np.asarray(H, dtype=float)
    if H.shape != (3, 3):
        raise DomainError("H must be 3x3 over m = (0, 1, -1)")
    if not np.allclose(H, H.T, rtol=0, atol=_SYMMETRY_TOL):
        raise DomainError("H is not symmetric")
    per_index = {}
    for block in _blocks(H):
        if len(block) == 1:
            i = block[0]
            per_index[i] = [(float(H[i, i]), 1.0)]
            continue
        sub = H[np.ix_(block, block)]
        vals, vecs = np.linalg.eigh(sub)
        for row, i in enumerate(block):
            per_index[i] = [(float(v), float(vecs[row, s] ** 2)) for s, v in enumerate(vals)]
    entries = [ModeEntry(0, n, w, 1) for n, w in per_index[0]]
    # m = -1 mirrors m = +1 (H is invariant under m -> -m)
    entries += [ModeEntry(1, n, w, 2) for n, w in per_index[1]]
    return SpectralModes(tuple(entries), float(f_c), float(d_over_R))


def coupled_modes(f_c, d_over_R, selection_rule=True):
    return eigenmodes(h_matrix(f_c, d_over_R, selection_rule), f_c, d_over_R)


def isolated_modes():
    # f_c = 0 removes the image; d/R is irrelevant
    return coupled_modes(0.0, 1.0)


def dos_u(modes, u, eta=1e-3):
    """Density of states in the spectral variable.

    Returns ``(per_channel, total)`` where ``per_channel`` maps ``m`` to
    ``-1/pi Im sum_s C_s / (u + i eta - n_s)`` and ``total = rho_0 + 2 rho_1``.
    """
    if not eta > 0:
        raise DomainError("eta must be > 0")
    z = np.asarray(u, dtype=float) + 1j * eta
    per = {}
    deg = {}
    for e in modes.entries:
        per[e.m] = per.get(e.m, 0.0) + e.weight / (z - e.n)
        deg[e.m] = e.degeneracy
    per = {m: -np.imag(v) / pi for m, v in per.items()}
    total = sum(deg[m] * v for m, v in per.items())
    return per, total


def solve_response(H, u, g):
    """Solve ``(u - H) x = g``.

    This is the sign-flipped form of ``(-u + H) x = g`` whose solution is the
    resolvent ``1 / (u - n_s)`` applied to `g`, so that
    ``-1/pi Im x[m]`` at ``u + i eta`` with ``g = e_m`` is the channel density.
    """
    H = np.asarray(H, dtype=float)
    u = complex(u)
    if u.imag == 0:
        gaps = np.abs(np.linalg.eigvalsh(H) - u.real)
        if np.min(gaps) <= 1e-14 * max(1.0, abs(u.real)):
            raise DomainError("u is an eigenvalue of H; add a finite broadening")
    return np.linalg.solve(u * np.eye(len(H)) - H, np.asarray(g, dtype=complex))


def resolvent_dos(H, u, eta, m=0):
    """Channel density from the linear-solve path (independent of :func:`eigenmodes`)."""
    i = M_ORDER.index(m)
    g = np.zeros(len(H))
    g[i] = 1.0
    return -np.imag(solve_response(H, complex(u, eta), g)[i]) / pi
