"""Radial moments, Fisher information by two independent routes, and the
identity checks that tie them together."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

from .eigensolve import solve_energy
from .errors import (
    BoundViolationError,
    ConsistencyError,
    DomainError,
    RouteDisagreementError,
)
from .model import EnergyLevel, FisherReport, Moments, RadialFunction, StateSpec, System
from .momentum import TransformSettings, to_momentum_space
from .wavefun import DEFAULT_ORDER, build_position_wavefunction

KINETIC_RTOL = 1e-6
ROUTE_RTOL = 1e-5
BOUND_SLACK = 1e-9


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def compute_moments(f_r: RadialFunction, f_p: RadialFunction, spec: StateSpec, level: EnergyLevel) -> Moments:
    """<r^2>, <r^-2>, <p^2>, <p^-2>, <v> and <T> for one state.

    Raises :class:`ConsistencyError` when <p^2> from the transform and
    2<T> from the energy differ by more than 1e-6 relative.
    """
    r2 = f_r.expectation(2)
    rm2 = f_r.expectation(-2)
    p2 = f_p.expectation(2)
    pm2 = f_p.expectation(-2)
    v = 0.0 if spec.system is System.PISB else 0.5 * spec.omega**2 * r2
    t = level.energy - v
    if _rel(p2, 2 * t) > KINETIC_RTOL:
        raise ConsistencyError(f"<p^2>={p2:.12g} but 2<T>={2 * t:.12g} for {spec}")
    r2_p = f_p.gradient_norm() if f_p.derivative is not None else math.nan
    return Moments(r2=r2, rm2=rm2, p2=p2, pm2=pm2, v_mean=v, t_mean=t, r2_momentum=r2_p)


def fisher_information(moments: Moments, spec: StateSpec, level: EnergyLevel, *, check: bool = True) -> FisherReport:
    """Position, momentum and product Fisher information with bound checks.

    ``i_r`` uses <p^2> from the momentum transform and ``i_r_energy_route``
    uses 8(E - <v>). ``i_p`` uses the momentum-space gradient functional and
    ``i_p_energy_route`` uses <r^2> from position space. With ``check`` the
    product bounds and route agreement are enforced.
    """
    mm = 2 * (2 * spec.l + 1) * abs(spec.m)
    i_r = 4 * moments.p2 - mm * moments.rm2
    i_r_e = 8 * (level.energy - moments.v_mean) - mm * moments.rm2
    r2_p = moments.r2_momentum if math.isfinite(moments.r2_momentum) else moments.r2
    i_p = 4 * r2_p - mm * moments.pm2
    i_p_e = 4 * moments.r2 - mm * moments.pm2
    rp = moments.r2 * moments.p2
    report = FisherReport(
        i_r=i_r,
        i_p=i_p,
        i_t=i_r * i_p,
        i_r_energy_route=i_r_e,
        i_p_energy_route=i_p_e,
        bound_low=81.0 / rp,
        bound_high=16.0 * rp,
        route_residual=max(_rel(i_r, i_r_e), _rel(i_p, i_p_e)),
    )
    if check:
        if not report.bounds_hold(BOUND_SLACK):
            raise BoundViolationError(
                f"I_t={report.i_t:.12g} outside [{report.bound_low:.12g}, {report.bound_high:.12g}] for {spec}"
            )
        if report.route_residual > ROUTE_RTOL:
            raise RouteDisagreementError(f"routes differ by {report.route_residual:.3e} for {spec}")
    return report


def fho_fisher_closed_form(n_r: int, l: int, m: int, omega: float) -> tuple[float, float]:
    if abs(m) > l:
        raise DomainError(f"|m|={abs(m)} exceeds l={l}")
    if not omega > 0:
        raise DomainError("omega must be positive")
    c = 2 * n_r + l - abs(m) + 1.5
    return 4 * omega * c, 4 * c / omega


# --------------------------------------------------------------------------
# Full pipeline
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class StateAnalysis:
    spec: StateSpec
    level: EnergyLevel
    position: RadialFunction
    momentum: RadialFunction
    moments: Moments
    fisher: FisherReport


@lru_cache(maxsize=256)
def _radial_solution(radial_spec: StateSpec, order: int, settings: TransformSettings):
    level = solve_energy(radial_spec)
    f_r = build_position_wavefunction(radial_spec, level, order)
    f_p = to_momentum_space(f_r, radial_spec.l, settings.resolve(radial_spec))
    moments = compute_moments(f_r, f_p, radial_spec, level)
    return level, f_r, f_p, moments


def analyze_state(
    spec: StateSpec,
    *,
    order: int = DEFAULT_ORDER,
    settings: TransformSettings | None = None,
    check: bool = True,
) -> StateAnalysis:
    """Energy, both radial functions, moments and Fisher report for ``spec``.

    The radial part does not depend on m, so it is cached per (n_r, l, omega,
    r_c, system) and shared across magnetic sublevels.
    """
    settings = settings or TransformSettings()
    level, f_r, f_p, moments = _radial_solution(replace(spec, m=0), int(order), settings)
    fisher = fisher_information(moments, spec, level, check=check)
    return StateAnalysis(spec, level, f_r, f_p, moments, fisher)


def clear_cache() -> None:
    _radial_solution.cache_clear()


# --------------------------------------------------------------------------
# Scaling and virial identities
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalingReport:
    """How I_r, I_p and I_t move when omega changes at fixed quantum numbers.

    ``linear_ratio_*`` are the free-oscillator predictions (I_r ~ omega,
    I_p ~ 1/omega). ``sqrt2_law_i_r`` evaluates the alternative rule
    omega/sqrt(2) * I_r(omega=1) for comparison only. ``rescaled_*`` use
    the exact coordinate-scaling law I_r(w, r_c) = w I_r(1, sqrt(w) r_c),
    I_p(w, r_c) = I_p(1, sqrt(w) r_c) / w, obtained from separate solves.
    """

    omegas: tuple[float, float]
    i_r: tuple[float, float]
    i_p: tuple[float, float]
    i_t: tuple[float, float]
    measured_ratio_r: float
    measured_ratio_p: float
    linear_ratio_r: float
    linear_ratio_p: float
    sqrt2_law_i_r: tuple[float, float]
    rescaled_i_r: tuple[float, float]
    rescaled_i_p: tuple[float, float]
    rescaled_residual: float
    i_t_drift: float


def omega_scaling_check(spec: StateSpec, omega1: float, omega2: float, **kwargs) -> ScalingReport:
    runs = [analyze_state(replace(spec, omega=w), **kwargs).fisher for w in (omega1, omega2)]
    unit = []
    for w in (omega1, omega2):
        r_c = spec.r_c if not spec.confined else spec.r_c * math.sqrt(w)
        unit.append(analyze_state(replace(spec, omega=1.0, r_c=r_c), **kwargs).fisher)
    rescaled_r = tuple(w * u.i_r for w, u in zip((omega1, omega2), unit))
    rescaled_p = tuple(u.i_p / w for w, u in zip((omega1, omega2), unit))
    residual = max(
        max(_rel(run.i_r, pred) for run, pred in zip(runs, rescaled_r)),
        max(_rel(run.i_p, pred) for run, pred in zip(runs, rescaled_p)),
    )
    i_r_unit = analyze_state(replace(spec, omega=1.0), **kwargs).fisher.i_r
    return ScalingReport(
        omegas=(omega1, omega2),
        i_r=(runs[0].i_r, runs[1].i_r),
        i_p=(runs[0].i_p, runs[1].i_p),
        i_t=(runs[0].i_t, runs[1].i_t),
        measured_ratio_r=runs[1].i_r / runs[0].i_r,
        measured_ratio_p=runs[1].i_p / runs[0].i_p,
        linear_ratio_r=omega2 / omega1,
        linear_ratio_p=omega1 / omega2,
        sqrt2_law_i_r=tuple(w / math.sqrt(2) * i_r_unit for w in (omega1, omega2)),
        rescaled_i_r=rescaled_r,
        rescaled_i_p=rescaled_p,
        rescaled_residual=residual,
        i_t_drift=abs(runs[1].i_t / runs[0].i_t - 1.0),
    )


@dataclass(frozen=True)
class VirialReport:
    """I_r against 8<T>, and I_p against (8/w^2)<v> next to the printed 64/w^2 variant."""

    i_r: float
    eight_t: float
    i_r_residual: float
    i_p: float
    eight_v_over_w2: float
    i_p_residual: float
    sixty_four_v_over_w2: float
    i_p_residual_64: float


def virial_identities(moments: Moments, spec: StateSpec, level: EnergyLevel) -> VirialReport:
    if spec.m != 0:
        raise DomainError("virial identities hold for m = 0 states only")
    i_r = 4 * moments.p2
    i_p = 4 * moments.r2
    eight_t = 8 * (level.energy - moments.v_mean)
    if spec.system is System.PISB:
        v8 = v64 = math.nan
    else:
        v8 = 8 * moments.v_mean / spec.omega**2
        v64 = 64 * moments.v_mean / spec.omega**2
    return VirialReport(
        i_r=i_r,
        eight_t=eight_t,
        i_r_residual=_rel(i_r, eight_t),
        i_p=i_p,
        eight_v_over_w2=v8,
        i_p_residual=_rel(i_p, v8) if math.isfinite(v8) else math.nan,
        sixty_four_v_over_w2=v64,
        i_p_residual_64=_rel(i_p, v64) if math.isfinite(v64) else math.nan,
    )
