"""Nonretarded Casimir interaction of a Drude nanosphere with a flat substrate.

The sphere's dipolar surface modes are shifted by its image in the substrate;
the interaction energy is the change in zero-point energy of those modes.
"""
__version__ = "0.1.0"

from .errors import BreakdownError, CasimirError, ConvergenceError, DomainError, MaterialKindError
from .materials import (GOLD, PERFECT, POTASSIUM, SAPPHIRE, TIO2, VACUUM, Environment, Material,
                        contrast_factor, epsilon_at, polarizability, spectral_u)
from .spectral import (Geometry, ModeEntry, SpectralModes, coupled_modes, dos_u, eigenmodes,
                       h_matrix, interaction_element, isolated_modes, solve_response)
from .dos import DOSProfile, dos_difference, dos_omega, dos_peaks, sample_dos_figure4
from .energy import (EnergyResult, ForceResult, QuadratureConfig, casimir_energy, casimir_force,
                     sharp_limit_energy)
