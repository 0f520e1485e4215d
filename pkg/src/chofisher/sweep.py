"""Batch evaluation over states, confinement radii and oscillator strengths."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .model import UNCONFINED, StateSpec, System, parse_radius, parse_state_label
from .momentum import TransformSettings
from .observables import analyze_state
from .wavefun import DEFAULT_ORDER

OUTPUT_GROUPS = {
    "energy": ("energy",),
    "I_r": ("I_r",),
    "I_p": ("I_p",),
    "I_t": ("I_t",),
    "bounds": ("bound_low", "bound_high"),
    "moments": ("r2", "rm2", "p2", "pm2"),
}
KEY_COLUMNS = ("system", "label", "n_r", "l", "m", "omega", "rc")
DEFAULT_OUTPUTS = ("energy", "I_r", "I_p", "I_t", "bounds")


def canonical(x: float) -> float:
    """Round to the 12 significant digits written to CSV, so rows re-read exactly."""
    return x if math.isinf(x) else float(f"{x:.12g}")


def format_value(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.12g}"


def make_spec(system: str | System, label: str, m: int, omega: float, r_c) -> StateSpec:
    """Build a state; an infinite radius always means the free oscillator."""
    n_r, l = parse_state_label(label)
    radius = parse_radius(r_c)
    system = System(system)
    if radius is UNCONFINED:
        if system is System.PISB:
            raise DomainError("a box needs a finite radius")
        system = System.FHO
    else:
        radius = canonical(radius)
    return StateSpec(n_r, l, int(m), canonical(float(omega)), radius, system)


def parse_state_list(text: str) -> list[tuple[str, int]]:
    """``"1s,1p:1"`` -> ``[("1s", 0), ("1p", 1)]``; an empty string gives []."""
    out = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        label, _, m = item.partition(":")
        try:
            m_val = int(m) if m else 0
        except ValueError as exc:
            raise DomainError(f"bad magnetic quantum number in {item!r}") from exc
        out.append((label.strip(), m_val))
    return out


def parse_float_list(text: str) -> list[float]:
    values = []
    for s in filter(None, (s.strip() for s in text.split(","))):
        try:
            values.append(float(s))
        except ValueError as exc:
            raise DomainError(f"not a number: {s!r}") from exc
    return values


def log_range(lo: float, hi: float, count: int) -> list[float]:
    if not (0 < lo < hi) or count < 2:
        raise DomainError("log range needs 0 < lo < hi and at least 2 points")
    return [canonical(x) for x in np.geomspace(lo, hi, count)]


@dataclass(frozen=True)
class SweepRequest:
    """Cartesian product of states x omega^2 x r_c, evaluated in that order."""

    system: System
    states: tuple[tuple[str, int], ...]
    r_c_values: tuple = ()
    omega2_values: tuple[float, ...] = (1.0,)
    outputs: tuple[str, ...] = DEFAULT_OUTPUTS
    specs: tuple[StateSpec, ...] = field(default=(), init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "system", System(self.system))
        unknown = [o for o in self.outputs if o not in OUTPUT_GROUPS]
        if unknown:
            raise DomainError(f"unknown output(s) {unknown}; choose from {sorted(OUTPUT_GROUPS)}")
        if any(not w2 > 0 for w2 in self.omega2_values):
            raise DomainError("omega^2 values must be positive")
        radii = [parse_radius(r) for r in self.r_c_values]
        if any(r is not UNCONFINED and not r > 0 for r in radii):
            raise DomainError("r_c values must be positive")
        specs = []
        for label, m in self.states:
            for w2 in self.omega2_values:
                for r in radii:
                    specs.append(make_spec(self.system, label, m, math.sqrt(w2), r))
        object.__setattr__(self, "specs", tuple(specs))

    @property
    def columns(self) -> tuple[str, ...]:
        cols = list(KEY_COLUMNS)
        for o in self.outputs:
            cols.extend(OUTPUT_GROUPS[o])
        cols.append("route_residual")
        return tuple(cols)


def state_row(spec: StateSpec, *, order: int = DEFAULT_ORDER, settings: TransformSettings | None = None) -> dict:
    """Every column a sweep can emit, for one state."""
    a = analyze_state(spec, order=order, settings=settings)
    f, mo = a.fisher, a.moments
    return {
        "system": spec.system.value,
        "label": spec.label,
        "n_r": spec.n_r,
        "l": spec.l,
        "m": spec.m,
        "omega": spec.omega,
        "rc": float(spec.r_c),
        "energy": a.level.energy,
        "I_r": f.i_r,
        "I_p": f.i_p,
        "I_t": f.i_t,
        "bound_low": f.bound_low,
        "bound_high": f.bound_high,
        "route_residual": f.route_residual,
        "r2": mo.r2,
        "rm2": mo.rm2,
        "p2": mo.p2,
        "pm2": mo.pm2,
    }


def run_sweep(
    request: SweepRequest,
    *,
    workers: int = 1,
    order: int = DEFAULT_ORDER,
    settings: TransformSettings | None = None,
) -> list[dict]:
    """Evaluate every state; rows come back in request order whatever ``workers`` is."""
    specs = request.specs

    def job(idx: int):
        return idx, state_row(specs[idx], order=order, settings=settings)

    if workers <= 1 or len(specs) <= 1:
        results = [job(i) for i in range(len(specs))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, range(len(specs))))
    results.sort(key=lambda item: item[0])
    return [row for _, row in results]
