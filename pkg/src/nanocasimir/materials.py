"""Dielectric models for the sphere, the substrate and the ambient medium.

All frequencies are photon energies in eV.  The Drude damping is stored as the
dimensionless ratio ``gamma = 1 / (tau * omega_p)``, so the dielectric function
reads

    eps(w) = 1 - wp**2 / (w * (w + 1j * gamma * wp))

Substrates and the ambient are restricted to real constant permittivities (or
the perfect-conductor limit) so that the contrast factor stays real.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, MaterialKindError

DRUDE = "drude"
CONSTANT = "constant"
PERFECT_CONDUCTOR = "perfect_conductor"
KINDS = (DRUDE, CONSTANT, PERFECT_CONDUCTOR)

HBAR_C_EV_NM = 197.3269804


@dataclass(frozen=True)
class Material:
    """Dielectric-model descriptor.

    Use the :meth:`drude`, :meth:`constant` and :meth:`perfect_conductor`
    constructors rather than filling the fields by hand.
    """

    kind: str
    plasma_energy: float | None = None
    damping_ratio: float | None = None
    epsilon: float | None = None
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MaterialKindError(f"unknown material kind {self.kind!r}")
        if self.kind == DRUDE:
            if self.plasma_energy is None or not self.plasma_energy > 0:
                raise DomainError("plasma_energy must be > 0 for a Drude material")
            if self.damping_ratio is None or not self.damping_ratio >= 0:
                raise DomainError("damping_ratio must be >= 0 for a Drude material")
        elif self.kind == CONSTANT:
            if self.epsilon is None or not self.epsilon > 0:
                raise DomainError("epsilon must be > 0 for a constant material")

    @classmethod
    def drude(cls, plasma_energy, damping_ratio, name=None):
        return cls(DRUDE, plasma_energy=float(plasma_energy),
                   damping_ratio=float(damping_ratio), name=name)

    @classmethod
    def constant(cls, epsilon, name=None):
        return cls(CONSTANT, epsilon=float(epsilon), name=name)

    @classmethod
    def perfect_conductor(cls, name="perfect"):
        return cls(PERFECT_CONDUCTOR, name=name)

    @property
    def label(self):
        if self.name:
            return self.name
        if self.kind == DRUDE:
            return f"drude:{self.plasma_energy:g},{self.damping_ratio:g}"
        if self.kind == CONSTANT:
            return f"eps:{self.epsilon:g}"
        return "perfect"


VACUUM = Material.constant(1.0, name="vacuum")


@dataclass(frozen=True)
class Environment:
    """Sphere, substrate and ambient taken together."""

    sphere: Material
    substrate: Material
    ambient: Material = VACUUM

    def __post_init__(self):
        if self.ambient.kind != CONSTANT:
            raise MaterialKindError("the ambient medium must have a constant real permittivity")


# Presets.  TiO2 and sapphire permittivities are back-solved from the
# contrast factors -0.773 and -0.516 in air: eps = (1 - f) / (1 + f).
POTASSIUM = Material.drude(3.8, 0.105, name="K")
GOLD = Material.drude(8.55, 0.0126, name="Au")
TIO2 = Material.constant(1.773 / 0.227, name="tio2")
SAPPHIRE = Material.constant(1.516 / 0.484, name="sapphire")
PERFECT = Material.perfect_conductor()

SPHERE_PRESETS = {"K": POTASSIUM, "Au": GOLD}
SUBSTRATE_PRESETS = {
    "tio2": TIO2,
    "sapphire": SAPPHIRE,
    "perfect": PERFECT,
    "vacuum": VACUUM,
}


def sphere_from_name(spec):
    """Parse ``K``, ``Au`` or ``drude:<wp_eV>,<gamma>``."""
    if spec in SPHERE_PRESETS:
        return SPHERE_PRESETS[spec]
    lowered = {k.lower(): v for k, v in SPHERE_PRESETS.items()}
    if spec.lower() in lowered:
        return lowered[spec.lower()]
    if spec.startswith("drude:"):
        try:
            wp, gamma = (float(p) for p in spec[len("drude:"):].split(","))
        except ValueError:
            raise DomainError(f"cannot parse sphere {spec!r}; expected drude:<wp_eV>,<gamma>") from None
        return Material.drude(wp, gamma)
    raise DomainError(f"unknown sphere {spec!r}")


def substrate_from_name(spec):
    """Parse ``tio2``, ``sapphire``, ``perfect``, ``vacuum`` or ``eps:<value>``."""
    key = spec.lower()
    if key in SUBSTRATE_PRESETS:
        return SUBSTRATE_PRESETS[key]
    if key in ("al2o3", "al3o2"):
        return SAPPHIRE
    if key.startswith("eps:"):
        try:
            eps = float(key[4:])
        except ValueError:
            raise DomainError(f"cannot parse substrate {spec!r}; expected eps:<value>") from None
        return Material.constant(eps)
    raise DomainError(f"unknown substrate {spec!r}")


def epsilon_at(material, omega):
    """Complex permittivity of `material` at photon energy `omega` (eV).

    Works elementwise on arrays.  A Drude material has a pole at ``omega = 0``.
    """
    if material.kind == PERFECT_CONDUCTOR:
        raise MaterialKindError("a perfect conductor has no finite permittivity")
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise DomainError("omega must be >= 0")
    if material.kind == CONSTANT:
        out = np.full(w.shape, complex(material.epsilon))
    else:
        if np.any(w == 0):
            raise DomainError("the Drude permittivity has a pole at omega = 0")
        wp = material.plasma_energy
        out = 1.0 - wp * wp / (w * (w + 1j * material.damping_ratio * wp))
    return out[()] if out.ndim == 0 else out


def contrast_factor(environment, omega=None):
    """Image-dipole strength ``(eps_a - eps_p) / (eps_a + eps_p)`` of the substrate.

    Only real (constant or perfectly conducting) substrates are supported, so the
    result does not depend on `omega`; the argument is accepted for symmetry with
    the other dielectric functions.
    """
    substrate = environment.substrate
    if substrate.kind == PERFECT_CONDUCTOR:
        return -1.0
    if substrate.kind != CONSTANT:
        raise MaterialKindError("dispersive substrates give a complex contrast factor; "
                                "use a constant or perfect_conductor substrate")
    eps_a = environment.ambient.epsilon
    eps_p = substrate.epsilon
    return (eps_a - eps_p) / (eps_a + eps_p)


def spectral_u(environment, omega):
    """Spectral variable ``u = 1 / (1 - eps_s / eps_a)``."""
    eps_s = epsilon_at(environment.sphere, omega)
    ratio = np.asarray(eps_s / environment.ambient.epsilon)
    if np.any(ratio == 1):
        raise DomainError("u is undefined where eps_s equals eps_a")
    out = 1.0 / (1.0 - ratio)
    return out[()] if out.ndim == 0 else out


def polarizability(environment, radius, omega):
    """Quasi-static sphere polarizability ``R**3 (eps_s - 1) / (eps_s + 2)`` in nm^3."""
    if not radius > 0:
        raise DomainError("radius must be > 0")
    r3 = float(radius) ** 3
    if environment.sphere.kind == PERFECT_CONDUCTOR:
        return complex(r3)
    eps_s = np.asarray(epsilon_at(environment.sphere, omega))
    if np.any(eps_s == -2):
        raise DomainError("polarizability has a pole at eps_s = -2")
    out = r3 * (eps_s - 1.0) / (eps_s + 2.0)
    return out[()] if out.ndim == 0 else out


def retardation_length(material):
    """``c / omega_p`` in nm, the length scale above which retardation matters."""
    if material.kind != DRUDE:
        return float("inf")
    return HBAR_C_EV_NM / material.plasma_energy
