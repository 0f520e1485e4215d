"""Momentum-space radial functions by direct spherical Bessel transform.

A Dirichlet wall leaves a kink in R(r), so the transform decays only like
p^-3 and <p^2> converges as 1/p_max. The missing high-p weight is recovered
analytically: a two-term combination of box eigenfunctions shares the
wall slope and the wall curvature ratio of R, hence shares its asymptotic
transform, and all of its moments are known in closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .errors import DomainError, TailTruncationError
from .model import RadialFunction, Space, StateSpec
from .specfun import bessel_zero, composite_gauss_legendre, spherical_bessel_j_array

_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
# p_max * r_c for confined states; 200 puts the residual tail error near 1e-12
WALL_RESOLUTION = 200.0
FREE_RESOLUTION = 30.0
# phase-space product p_max * r_end covered by one quadrature panel
PANEL_SPAN = 50.0


@dataclass(frozen=True)
class TransformSettings:
    """Momentum grid controls. ``p_max=None`` means "pick from the state"."""

    p_max: float | None = None
    p_order: int = 128
    tail_tolerance: float = 1e-10
    max_doublings: int = 3

    def __post_init__(self):
        if self.p_max is not None and not self.p_max > 0:
            raise DomainError("p_max must be positive")
        if not 0 < self.tail_tolerance <= 1e-6:
            raise DomainError("tail_tolerance must lie in (0, 1e-6]")
        if self.p_order < 16:
            raise DomainError("p_order must be at least 16")

    def resolve(self, spec: StateSpec) -> "TransformSettings":
        """Fill in the default cutoff for ``spec``."""
        if self.p_max is not None:
            return self
        return replace(self, p_max=default_p_max(spec))


def default_p_max(spec: StateSpec) -> float:
    p = FREE_RESOLUTION * math.sqrt(spec.omega)
    if spec.confined:
        p = max(p, WALL_RESOLUTION / spec.r_c)
    return p


@dataclass(frozen=True)
class _WallModel:
    """c1 j_l(k1 r) + c2 j_l(k2 r) matched to the wall behaviour of R."""

    l: int
    k: tuple[float, float]
    c: tuple[float, float]
    # closed-form <p^2>-weighted norm of the model
    p2_total: float

    def __call__(self, r: np.ndarray) -> np.ndarray:
        j1 = spherical_bessel_j_array(self.l, self.k[0] * r)
        j2 = spherical_bessel_j_array(self.l, self.k[1] * r)
        return self.c[0] * j1 + self.c[1] * j2


def _wall_model(f: RadialFunction) -> _WallModel:
    wall = f.wall
    l = f.l
    rc = wall.radius
    cent = l * (l + 1) / rc**2
    # effective wavenumber at the wall picks the nearest pair of box modes
    k_eff = math.sqrt(max(cent - wall.third_ratio, 0.0)) * rc
    idx = 1
    while idx < 63 and bessel_zero(l, idx + 1) < k_eff:
        idx += 1
    if idx > 1 and k_eff - bessel_zero(l, idx - 1) < bessel_zero(l, idx) - k_eff:
        idx -= 1
    zeros = (bessel_zero(l, idx), bessel_zero(l, idx + 1))
    ks = tuple(z / rc for z in zeros)
    _, djz = spherical_bessel_j_array(l, np.array(zeros), derivative=True)
    d = [ks[i] * djz[i] for i in range(2)]
    s = [cent - ks[i] ** 2 for i in range(2)]
    c1 = wall.slope * (wall.third_ratio - s[1]) / ((s[0] - s[1]) * d[0])
    c2 = wall.slope * (s[0] - wall.third_ratio) / ((s[0] - s[1]) * d[1])
    # box eigenfunctions are orthogonal, and int_0^rc j_l(k r)^2 r^2 dr
    # = rc^3 j_{l+1}(Z)^2 / 2 = rc^3 j_l'(Z)^2 / 2 at a zero Z of j_l
    norms = [0.5 * rc**3 * djz[i] ** 2 for i in range(2)]
    p2 = c1 * c1 * ks[0] ** 2 * norms[0] + c2 * c2 * ks[1] ** 2 * norms[1]
    return _WallModel(l, ks, (c1, c2), p2)


def _panels(p_max: float, r_end: float) -> int:
    return max(4, math.ceil(p_max * r_end / PANEL_SPAN))


def _transform_once(f: RadialFunction, l: int, p_max: float, settings: TransformSettings) -> RadialFunction:
    r_end = f.extent
    panels = _panels(p_max, r_end)
    r_rule = composite_gauss_legendre(f.rule.order, 0.0, r_end, panels)
    p_rule = composite_gauss_legendre(settings.p_order, 0.0, p_max, panels)
    r, wr = r_rule.nodes, r_rule.weights
    p, wp = p_rule.nodes, p_rule.weights
    R = f.evaluate(r)

    rows = [R]
    model = _wall_model(f) if f.wall is not None else None
    if model is not None:
        rows.append(model(r))
    rows = np.array(rows)
    weighted = _SQRT_2_OVER_PI * rows * (r * r * wr)
    weighted_d = weighted * r
    vals, dvals = kernels.bessel_sums(l, p, r, weighted, weighted_d)
    Rt, dRt = vals[0], dvals[0]

    tail = {"0": 0.0, "2": 0.0, "-2": 0.0, "grad": 0.0}
    if model is not None:
        G, Gt, dGt = rows[1], vals[1], dvals[1]
        lcent = l * (l + 1)
        tail["0"] = np.dot(wr, G * G * r * r) - np.dot(wp, Gt * Gt * p * p)
        tail["2"] = model.p2_total - np.dot(wp, Gt * Gt * p**4)
        tail["grad"] = np.dot(wr, G * G * r**4) - np.dot(wp, dGt * dGt * p * p + lcent * Gt * Gt)
        tail["-2"] = (f.wall.radius * f.wall.slope) ** 2 / (5 * math.pi * p_max**5)

    raw_norm = float(np.dot(wp, Rt * Rt * p * p) + tail["0"])
    residual = abs(raw_norm - 1.0)
    if not residual <= settings.tail_tolerance:
        raise TailTruncationError(
            f"momentum norm off by {residual:.3e} with p_max={p_max:.6g} "
            f"(tolerance {settings.tail_tolerance:.1e})"
        )
    scale = 1.0 / math.sqrt(raw_norm)
    values = Rt * scale
    deriv = dRt * scale
    tail = {key: float(val) * scale * scale for key, val in tail.items()}
    values.setflags(write=False)
    deriv.setflags(write=False)

    coeff = weighted[0] * scale

    def evaluator(q: np.ndarray) -> np.ndarray:
        q = np.atleast_1d(np.asarray(q, dtype=float))
        out, _ = kernels.bessel_sums(l, q, r, coeff[None, :], coeff[None, :])
        return out[0]

    return RadialFunction(
        space=Space.MOMENTUM,
        grid=p,
        values=values,
        rule=p_rule,
        norm_residual=residual,
        l=l,
        derivative=deriv,
        tail=tail,
        tail_mass=tail["0"],
        evaluator=evaluator,
    )


def to_momentum_space(f: RadialFunction, l: int, settings: TransformSettings) -> RadialFunction:
    """Spherical Bessel transform of a normalised position-space function.

    ``settings.p_max`` must be set (see :meth:`TransformSettings.resolve`).
    The cutoff is doubled up to ``max_doublings`` times when the momentum
    norm misses 1 by more than ``tail_tolerance``. The returned function is
    renormalised; ``norm_residual`` keeps the deficit before that step and
    ``tail`` holds the analytic contributions beyond ``p_max``.
    """
    if f.space is not Space.POSITION:
        raise DomainError("input must be a position-space function")
    if l != f.l:
        raise DomainError(f"angular momentum mismatch: l={l}, function has l={f.l}")
    if settings.p_max is None:
        raise DomainError("settings.p_max is unset; call settings.resolve(spec) first")
    p_max = settings.p_max
    for attempt in range(settings.max_doublings + 1):
        try:
            return _transform_once(f, l, p_max, settings)
        except TailTruncationError:
            if attempt == settings.max_doublings:
                raise
            p_max *= 2.0
    raise AssertionError("unreachable")
