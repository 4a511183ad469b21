"""Zero-point interaction energy and Casimir force.

The energy is ``U = int_0^inf (w/2) [rho_sp(w) - rho_s(w)] dw`` with the mode
densities of :mod:`nanocasimir.dos`.  Frequencies are photon energies in eV, so
with per-mode unit normalization ``U`` comes out in eV and forces in eV/nm.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from math import pi, sqrt

import numpy as np
from scipy import integrate

from .dos import UNITY, VERBATIM, _sphere_params, mode_line_dn, normalization_name
from .errors import BreakdownError, ConvergenceError, DomainError
from .materials import contrast_factor
from .spectral import N_ISOLATED, Geometry, coupled_modes

EV_PER_NM_TO_PN = 160.21766339

FINITE_DIFFERENCE = "finite_difference"
SEMI_ANALYTIC = "semi_analytic"
_METHODS = {"fd": FINITE_DIFFERENCE, FINITE_DIFFERENCE: FINITE_DIFFERENCE,
            "analytic": SEMI_ANALYTIC, SEMI_ANALYTIC: SEMI_ANALYTIC}

# dn/d(R/d)^3 for the two channels of the diagonal mode matrix
_CHANNEL_COUPLING = {0: 2.0 / 3.0, 1: 1.0 / 3.0}


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-8
    omega_max: float = 50.0
    tail_correction: bool = True
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not 0 < self.rel_tol <= 1e-2:
            raise DomainError("rel_tol must be in (0, 1e-2]")
        if not self.omega_max >= 10:
            raise DomainError("omega_max must be >= 10 (units of omega_p)")
        if int(self.max_subdivisions) < 1:
            raise DomainError("max_subdivisions must be >= 1")


@dataclass(frozen=True)
class EnergyResult:
    """Outcome of :func:`casimir_energy`.

    `energy` is ``None`` when the geometry is in dipolar breakdown; use
    :attr:`value` to get the number or a :class:`BreakdownError`.
    """

    energy: float | None
    estimated_error: float
    breakdown: bool = False
    diagnostics: dict = field(default_factory=dict)

    @property
    def value(self):
        if self.breakdown:
            raise BreakdownError(self.diagnostics.get("message", "dipolar approximation breakdown"),
                                 factors=self.diagnostics.get("factors"))
        return self.energy


@dataclass(frozen=True)
class ForceResult:
    force: float
    estimated_error: float
    method: str
    diagnostics: dict = field(default_factory=dict)

    @property
    def force_pN(self):
        return self.force * EV_PER_NM_TO_PN


def _weighted(modes):
    """Flatten modes into ``(n, degeneracy * weight, m)`` triples."""
    return [(e.n, e.degeneracy * e.weight, e.m) for e in modes.entries]


def _integrand(terms, omega_p, gamma):
    """``(w/2) (rho_sp - rho_s)`` in unit normalization.

    Plain arithmetic on precomputed constants so the scalar calls made by
    ``quad`` stay cheap; arrays work too.
    """
    width2 = (gamma * omega_p) ** 2
    lines = [(c * sqrt(n), n * omega_p * omega_p) for n, c, _ in terms]
    lines.append((-3.0 * sqrt(N_ISOLATED), N_ISOLATED * omega_p * omega_p))
    pref = omega_p * gamma * omega_p / pi

    def f(w):
        w2 = w * w
        acc = 0.0
        for amp, center in lines:
            detune = w2 - center
            acc = acc + amp / (detune * detune + w2 * width2)
        return pref * w2 * acc
    return f


def _tail(f, upper, omega_p):
    """Analytic estimate of ``int_upper^inf f`` from the last decade below `upper`.

    ``w**2 f(w)`` is fitted as a polynomial in ``t = (omega_p / w)**2``; the
    quadratic fit gives the estimate, its distance to the linear fit the error.
    """
    w = np.geomspace(upper / 10.0, upper, 48)
    t = (omega_p / w) ** 2
    y = w * w * f(w)
    scale = omega_p / upper

    def integrate_fit(deg):
        coef = np.polynomial.polynomial.polyfit(t, y, deg)
        # int_upper^inf w^-2 t^k dw = omega_p^{2k} / ((2k+1) upper^{2k+1})
        return sum(c * scale ** (2 * k) / ((2 * k + 1) * upper) for k, c in enumerate(coef))

    best = integrate_fit(2)
    return best, abs(best - integrate_fit(1))


def _integrate(f, resonances, upper, quad):
    points = sorted(r for r in resonances if 0 < r < upper)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err, info, *rest = integrate.quad(
            f, 0.0, upper, points=points, epsabs=0.0, epsrel=quad.rel_tol,
            limit=int(quad.max_subdivisions), full_output=1)
    ier = rest[0] if rest else 0
    return val, err, info["last"], ier


def _modes_for(environment, geometry, selection_rule):
    return coupled_modes(contrast_factor(environment), geometry.d_over_R, selection_rule)


def _integrate_energy(f, resonances, omega_p, quad):
    upper = quad.omega_max * omega_p
    val, err, nsub, ier = _integrate(f, resonances, upper, quad)
    tail = tail_err = 0.0
    if quad.tail_correction:
        tail, tail_err = _tail(f, upper, omega_p)
    total = val + tail
    error = err + tail_err
    if ier != 0 and err > quad.rel_tol * abs(total):
        raise ConvergenceError(f"quadrature did not converge (ier={ier}, "
                               f"abserr={err:.3e}, value={total:.3e})")
    diag = {"omega_cutoff_eV": upper, "subdivisions": int(nsub), "tail": tail}
    return total, error, diag


def casimir_energy(environment, geometry, quad=None, normalization=UNITY, gamma=None,
                   selection_rule=True):
    """Interaction energy of the sphere with the substrate (eV, or eV*omega_p verbatim)."""
    quad = quad or QuadratureConfig()
    omega_p, gamma = _sphere_params(environment, gamma)
    norm = normalization_name(normalization)
    f_c = contrast_factor(environment)
    modes = _modes_for(environment, geometry, selection_rule)
    if not modes.valid:
        msg = (f"dipolar approximation breakdown at d/R = {geometry.d_over_R:.6g}: "
               f"depolarization factors {modes.factors.tolist()}")
        return EnergyResult(None, 0.0, True,
                            {"message": msg, "factors": modes.factors, "d_over_R": geometry.d_over_R})
    if f_c == 0:
        return EnergyResult(0.0, 0.0, False, {"omega_cutoff_eV": quad.omega_max * omega_p,
                                              "subdivisions": 0, "tail": 0.0})
    terms = _weighted(modes)
    resonances = [sqrt(n) * omega_p for n, _, _ in terms] + [sqrt(N_ISOLATED) * omega_p]
    total, error, diag = _integrate_energy(_integrand(terms, omega_p, gamma), resonances, omega_p, quad)
    if norm == VERBATIM:
        total, error = total * omega_p, error * omega_p
    return EnergyResult(float(total), float(error), False, diag)


def sharp_limit_energy(environment, geometry, normalization=UNITY, selection_rule=True):
    """Closed-form energy ``(omega_p / 2) [sum_s g_s C_s sqrt(n_s) - 3 sqrt(1/3)]``."""
    omega_p, _ = _sphere_params(environment, None)
    modes = _modes_for(environment, geometry, selection_rule)
    if not modes.valid:
        raise BreakdownError("dipolar approximation breakdown", factors=modes.factors)
    if modes.f_c == 0:
        return 0.0
    total = sum(c * sqrt(n) for n, c, _ in _weighted(modes)) - 3.0 * sqrt(N_ISOLATED)
    value = 0.5 * omega_p * total
    if normalization_name(normalization) == VERBATIM:
        value *= omega_p
    return value


def _energy_at(environment, radius, gap, quad, normalization, gamma, selection_rule):
    res = casimir_energy(environment, Geometry(radius, gap), quad, normalization, gamma,
                         selection_rule)
    return res.value, res.estimated_error


def _finite_difference(environment, geometry, quad, normalization, gamma, selection_rule):
    R, z = geometry.radius, geometry.gap
    h = max(1e-3 * R, 1e-3)

    def U(gap):
        return _energy_at(environment, R, gap, quad, normalization, gamma, selection_rule)[0]

    def central(step):
        return (U(z + step) - U(z - step)) / (2 * step)

    def forward(step):
        return (-3 * U(z) + 4 * U(z + step) - U(z + 2 * step)) / (2 * step)

    diag = {"step_nm": h}
    modes = _modes_for(environment, geometry, selection_rule)
    if not modes.valid:
        raise BreakdownError(f"dipolar approximation breakdown at d/R = {geometry.d_over_R:.6g}",
                             factors=modes.factors)
    one_sided = z - h < 0
    if not one_sided:
        try:
            d1, d2 = central(h), central(h / 2)
        except BreakdownError:
            one_sided = True
        else:
            deriv = (4 * d2 - d1) / 3
            err = abs(deriv - d2)
    if one_sided:
        d1, d2 = forward(h), forward(h / 2)
        deriv = (4 * d2 - d1) / 3
        err = abs(deriv - d2)
        diag["one_sided"] = True
    else:
        diag["one_sided"] = False
    return -deriv, err, diag


def _semi_analytic(environment, geometry, quad, normalization, gamma, selection_rule):
    if not selection_rule:
        raise DomainError("the semi-analytic force needs the diagonal (selection-rule) mode matrix")
    omega_p, gamma = _sphere_params(environment, gamma)
    f_c = contrast_factor(environment)
    modes = _modes_for(environment, geometry, selection_rule)
    if not modes.valid:
        raise BreakdownError("dipolar approximation breakdown", factors=modes.factors)
    if f_c == 0:
        return 0.0, 0.0, {}
    R, d = geometry.radius, geometry.center_distance
    # dn/dd from H_mm = 1/3 + c_m f_c (R/d)^3
    terms = [(n, c, -3.0 * f_c * _CHANNEL_COUPLING[m] * R ** 3 / d ** 4)
             for n, c, m in _weighted(modes)]

    def f(w):
        out = 0.0
        for n, c, dn in terms:
            out = out + c * dn * mode_line_dn(n, w, omega_p, gamma)
        return 0.5 * w * out

    resonances = [sqrt(n) * omega_p for n, _, _ in terms]
    dU, err, diag = _integrate_energy(f, resonances, omega_p, quad)
    if normalization_name(normalization) == VERBATIM:
        dU, err = dU * omega_p, err * omega_p
    return -dU, err, diag


def casimir_force(environment, geometry, quad=None, method=FINITE_DIFFERENCE, normalization=UNITY,
                  gamma=None, selection_rule=True):
    """Force ``F = -dU/dz`` in eV/nm; negative values are attractive."""
    quad = quad or QuadratureConfig()
    try:
        method = _METHODS[method]
    except KeyError:
        raise DomainError(f"unknown force method {method!r}") from None
    if contrast_factor(environment) == 0:
        _sphere_params(environment, gamma)
        return ForceResult(0.0, 0.0, method, {})
    if method == FINITE_DIFFERENCE:
        F, err, diag = _finite_difference(environment, geometry, quad, normalization, gamma,
                                          selection_rule)
    else:
        F, err, diag = _semi_analytic(environment, geometry, quad, normalization, gamma,
                                      selection_rule)
    return ForceResult(float(F), float(err), method, diag)
