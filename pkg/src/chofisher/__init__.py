"""Energies, radial moments and Fisher information of the confined isotropic
harmonic oscillator, the particle in a spherical box, and the free oscillator.

Typical use::

    from chofisher import StateSpec, analyze_state
    a = analyze_state(StateSpec(0, 1, m=1, r_c=0.5, system="cho"))
    a.fisher.i_r, a.fisher.i_p
"""
from __future__ import annotations

__version__ = "0.1.0"

from ._accel import backend
from .eigensolve import solve_energy
from .errors import (
    ChoFisherError,
    DomainError,
    InvariantViolation,
    LabelParseError,
    SolverError,
)
from .model import (
    UNCONFINED,
    EnergyLevel,
    FisherReport,
    Moments,
    RadialFunction,
    Space,
    StateSpec,
    System,
    format_state_label,
    parse_state_label,
)
from .momentum import TransformSettings, to_momentum_space
from .observables import (
    analyze_state,
    compute_moments,
    fho_fisher_closed_form,
    fisher_information,
    omega_scaling_check,
    virial_identities,
)
from .wavefun import build_position_wavefunction, count_interior_nodes

__all__ = [
    "UNCONFINED",
    "ChoFisherError",
    "DomainError",
    "EnergyLevel",
    "FisherReport",
    "InvariantViolation",
    "LabelParseError",
    "Moments",
    "RadialFunction",
    "SolverError",
    "Space",
    "StateSpec",
    "System",
    "TransformSettings",
    "analyze_state",
    "backend",
    "build_position_wavefunction",
    "compute_moments",
    "count_interior_nodes",
    "fho_fisher_closed_form",
    "fisher_information",
    "format_state_label",
    "omega_scaling_check",
    "parse_state_label",
    "solve_energy",
    "to_momentum_space",
    "virial_identities",
]
