"""Brute-force cross-checks: a finite-difference radial eigensolver and
trapezoid-rule moments on its uniform grid.

Nothing here shares code with the Kummer/Bessel pipeline apart from the
Sturm bisection kernel, so agreement between the two is meaningful.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from . import kernels
from .errors import DomainError
from .model import StateSpec, System

MIN_POINTS = 2000
MAX_LEVELS = 10


@dataclass(frozen=True, eq=False)
class FdSolution:
    """Lowest eigenpairs of the discretised radial equation for u(r) = r R(r).

    ``vectors[i]`` holds u at ``radii`` (the N interior points) with
    sum(u^2) * spacing = 1. ``extrapolated`` combines this grid with one of
    half the spacing as (4 E_fine - E_coarse) / 3.
    """

    grid_points: int
    spacing: float
    radii: np.ndarray
    energies: np.ndarray
    vectors: np.ndarray
    extrapolated: np.ndarray
    fine_energies: np.ndarray
    l: int


def _tridiagonal(spec: StateSpec, n: int):
    h = spec.r_c / (n + 1)
    r = h * np.arange(1, n + 1)
    v = np.zeros(n) if spec.system is System.PISB else 0.5 * spec.omega**2 * r * r
    diag = 1.0 / (h * h) + 0.5 * spec.l * (spec.l + 1) / (r * r) + v
    off = np.full(n - 1, -0.5 / (h * h))
    return r, h, diag, off


def _inverse_iteration(diag, off, energy):
    n = diag.size
    shift = energy - 1e-10 * max(1.0, abs(energy))
    banded = np.zeros((3, n))
    banded[0, 1:] = off
    banded[1] = diag - shift
    banded[2, :-1] = off
    x = np.ones(n)
    for _ in range(3):
        x = solve_banded((1, 1), banded, x)
        x /= np.linalg.norm(x)
    return x


def fd_solve(spec: StateSpec, n: int = 4000, k: int = 1) -> FdSolution:
    """Second-order finite differences with Dirichlet ends at 0 and r_c.

    The refined run uses 2n + 1 points so its spacing is exactly half.
    """
    if not spec.confined:
        raise DomainError("the finite-difference oracle needs a finite r_c")
    if n < MIN_POINTS:
        raise DomainError(f"need at least {MIN_POINTS} grid points")
    if not 1 <= k <= MAX_LEVELS:
        raise DomainError(f"k must be in 1..{MAX_LEVELS}")
    r, h, diag, off = _tridiagonal(spec, n)
    energies = kernels.tridiag_lowest(diag, off, k)
    _, _, diag_f, off_f = _tridiagonal(spec, 2 * n + 1)
    fine = kernels.tridiag_lowest(diag_f, off_f, k)
    vectors = np.empty((k, n))
    for i, e in enumerate(energies):
        u = _inverse_iteration(diag, off, e)
        lead = u[np.argmax(np.abs(u) > 1e-8 * np.abs(u).max())]
        u = np.sign(lead) * u / np.sqrt(h)
        vectors[i] = u
    return FdSolution(
        grid_points=n,
        spacing=h,
        radii=r,
        energies=energies,
        vectors=vectors,
        extrapolated=(4 * fine - energies) / 3,
        fine_energies=fine,
        l=spec.l,
    )


def trapezoid_moment(solution: FdSolution, k_power: int, index: int = 0) -> float:
    """<r^k> for eigenvector ``index`` by the trapezoid rule on the FD grid.

    Both ends carry u = 0. For l = 0 and k = -2 the integrand u^2/r^2 tends
    to (u_1/h)^2 at the origin, which supplies the left endpoint term.
    """
    if k_power not in (-2, 2):
        raise DomainError("k_power must be -2 or 2")
    u = solution.vectors[index]
    r = solution.radii
    h = solution.spacing
    total = h * float(np.sum(u * u * r**k_power))
    if k_power == -2 and solution.l == 0:
        total += 0.5 * h * (u[0] / r[0]) ** 2
    return total
