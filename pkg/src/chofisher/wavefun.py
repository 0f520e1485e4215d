"""Normalised position-space radial functions on composite Gauss-Legendre grids."""
from __future__ import annotations

import math

import numpy as np

from .eigensolve import free_cutoff_x, wall_is_inert
from .errors import DomainError, NormalizationError
from .model import EnergyLevel, RadialFunction, Space, StateSpec, System, WallData
from .specfun import composite_gauss_legendre, kummer_1f1_array, spherical_bessel_j_array, terminating_index

DEFAULT_ORDER = 128
DEFAULT_PANELS = 4


def unconfined_extent(spec: StateSpec) -> float:
    """Radius past which the free state carries less than 1e-34 density."""
    return math.sqrt(free_cutoff_x(spec.n_r, spec.l) / spec.omega)


def _oscillator_amplitude(l: int, omega: float, level: EnergyLevel):
    if level.kummer_shift is not None:
        n, da = level.kummer_shift
        a_int = -n
    else:
        # a bare energy: let a within rounding of -n snap to the polynomial
        a = 0.5 * (l + 1.5 - level.energy / omega)
        n = terminating_index(a)
        a_int, da = (-n, 0.0) if n is not None else (0, a)
    a = a_int + da
    b = l + 1.5

    def amp(r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        x = omega * r * r
        return r**l * kummer_1f1_array(da, b, x, a_int=a_int) * np.exp(-0.5 * x)

    def slope(r: float) -> float:
        # d/dr [r^l 1F1(a,b,w r^2) e^{-w r^2/2}]
        x = omega * r * r
        f = kummer_1f1_array(da, b, [x], a_int=a_int)[0]
        df = (a / b) * kummer_1f1_array(da, b + 1, [x], a_int=a_int + 1)[0]
        return r**l * math.exp(-0.5 * x) * ((l / r) * f + 2 * omega * r * df - omega * r * f)

    return amp, slope


def _box_amplitude(l: int, energy: float):
    k = math.sqrt(2 * energy)

    def amp(r: np.ndarray) -> np.ndarray:
        return spherical_bessel_j_array(l, k * np.asarray(r, dtype=float))

    def slope(r: float) -> float:
        _, dj = spherical_bessel_j_array(l, [k * r], derivative=True)
        return k * float(dj[0])

    return amp, slope


def build_position_wavefunction(
    spec: StateSpec,
    level: EnergyLevel,
    order: int = DEFAULT_ORDER,
    panels: int = DEFAULT_PANELS,
) -> RadialFunction:
    """Sample and normalise the radial function of ``spec`` at energy ``level``.

    Confined states live on ``[0, r_c]`` and carry :class:`WallData`; free
    states (and confined oscillators whose wall is too far out to matter) are
    cut at :func:`unconfined_extent`.
    """
    if order < 64:
        raise DomainError("quadrature order must be at least 64")
    energy = level.energy
    if spec.system is System.PISB:
        amp, slope = _box_amplitude(spec.l, energy)
    else:
        amp, slope = _oscillator_amplitude(spec.l, spec.omega, level)

    walled = spec.confined and not wall_is_inert(spec)
    r_end = spec.r_c if walled else unconfined_extent(spec)
    rule = composite_gauss_legendre(order, 0.0, r_end, panels)
    raw = amp(rule.nodes)
    norm2 = rule.integrate(raw * raw * rule.nodes**2)
    if not (math.isfinite(norm2) and norm2 > 0):
        raise NormalizationError(f"radial norm is {norm2!r} for {spec}")
    scale = 1.0 / math.sqrt(norm2)
    values = raw * scale
    residual = abs(rule.integrate(values * values * rule.nodes**2) - 1.0)

    wall = None
    if walled:
        v_wall = float(spec.potential(r_end))
        ratio = spec.l * (spec.l + 1) / r_end**2 + 2 * v_wall - 2 * energy
        wall = WallData(r_end, scale * slope(r_end), ratio)

    def evaluator(r: np.ndarray) -> np.ndarray:
        return scale * amp(r)

    values.setflags(write=False)
    return RadialFunction(
        space=Space.POSITION,
        grid=rule.nodes,
        values=values,
        rule=rule,
        norm_residual=residual,
        l=spec.l,
        wall=wall,
        evaluator=evaluator,
    )


def count_interior_nodes(f: RadialFunction, rel_floor: float = 1e-10) -> int:
    """Sign changes of the sampled function, ignoring near-zero samples."""
    if f.space is not Space.POSITION:
        raise DomainError("node counting is defined for position-space functions")
    v = np.asarray(f.values)
    peak = float(np.max(np.abs(v)))
    signs = np.sign(v[np.abs(v) > rel_floor * peak])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))
