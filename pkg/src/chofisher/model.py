"""Shared domain types and spectroscopic label handling."""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import DomainError, LabelParseError
from .specfun import QuadratureRule

# j is skipped; beyond m the sequence continues alphabetically without p and s
ORBITAL_LETTERS = "spdfghiklmnoqrtuv"


class System(str, enum.Enum):
    CHO = "cho"
    PISB = "pisb"
    FHO = "fho"


class Space(str, enum.Enum):
    POSITION = "position"
    MOMENTUM = "momentum"


class _Unconfined:
    """Marker for an infinitely distant wall."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNCONFINED"

    def __str__(self) -> str:
        return "inf"

    def __float__(self) -> float:
        return math.inf

    def __reduce__(self):
        return (_Unconfined, ())


UNCONFINED = _Unconfined()


def parse_radius(text: str | float | _Unconfined):
    """Turn ``"inf"``/``inf`` into :data:`UNCONFINED`, anything else into a float."""
    if text is UNCONFINED:
        return UNCONFINED
    if isinstance(text, str) and text.strip().lower() in ("inf", "infinity", "unconfined"):
        return UNCONFINED
    value = float(text)
    if math.isinf(value):
        return UNCONFINED
    return value


@dataclass(frozen=True)
class StateSpec:
    n_r: int
    l: int
    m: int = 0
    omega: float = 1.0
    r_c: float | _Unconfined = UNCONFINED
    system: System = System.FHO

    def __post_init__(self):
        object.__setattr__(self, "system", System(self.system))
        if isinstance(self.r_c, str) or (isinstance(self.r_c, float) and math.isinf(self.r_c) and self.r_c > 0):
            object.__setattr__(self, "r_c", parse_radius(self.r_c))
        if self.n_r < 0 or self.l < 0:
            raise DomainError("quantum numbers n_r and l must be nonnegative")
        if abs(self.m) > self.l:
            raise DomainError(f"|m|={abs(self.m)} exceeds l={self.l}")
        if not self.omega > 0:
            raise DomainError("omega must be positive")
        if self.r_c is not UNCONFINED:
            if not (isinstance(self.r_c, (int, float)) and self.r_c > 0 and math.isfinite(self.r_c)):
                raise DomainError(f"confinement radius must be positive and finite, got {self.r_c!r}")
            object.__setattr__(self, "r_c", float(self.r_c))
        if self.system is System.FHO and self.r_c is not UNCONFINED:
            raise DomainError("the free oscillator has no wall")
        if self.system in (System.CHO, System.PISB) and self.r_c is UNCONFINED:
            raise DomainError(f"{self.system.value} needs a finite r_c")

    @property
    def n(self) -> int:
        """Principal quantum number 2 n_r + l."""
        return 2 * self.n_r + self.l

    @property
    def label(self) -> str:
        return format_state_label(self.n_r, self.l)

    @property
    def confined(self) -> bool:
        return self.r_c is not UNCONFINED

    def potential(self, r):
        if self.system is System.PISB:
            return np.zeros_like(np.asarray(r, dtype=float))
        return 0.5 * self.omega**2 * np.asarray(r, dtype=float) ** 2


@dataclass(frozen=True)
class WallData:
    """Behaviour of a Dirichlet radial function at its wall.

    ``slope`` is R'(r_c). ``third_ratio`` is u'''(r_c)/u'(r_c) for u = r R,
    which the radial equation fixes to l(l+1)/r_c^2 + 2 v(r_c) - 2E.
    """

    radius: float
    slope: float
    third_ratio: float


@dataclass(frozen=True, eq=False)
class RadialFunction:
    space: Space
    grid: np.ndarray
    values: np.ndarray
    rule: QuadratureRule
    norm_residual: float
    l: int
    derivative: np.ndarray | None = None
    tail: Mapping[str, float] = field(default_factory=dict)
    tail_mass: float = 0.0
    wall: WallData | None = None
    evaluator: Callable[[np.ndarray], np.ndarray] | None = None

    def expectation(self, power: int) -> float:
        """Radial moment with the measure x^2 dx, tail beyond the grid included."""
        dens = self.values * self.values * self.grid ** (2 + power)
        return self.rule.integrate(dens) + self.tail.get(str(power), 0.0)

    def gradient_norm(self) -> float:
        """Integral of |grad f|^2 over all space for f = R Y_lm."""
        if self.derivative is None:
            raise ValueError("radial derivative not available for this function")
        g = self.derivative**2 * self.grid**2 + self.l * (self.l + 1) * self.values**2
        return self.rule.integrate(g) + self.tail.get("grad", 0.0)

    def norm(self) -> float:
        return self.expectation(0)

    def evaluate(self, x) -> np.ndarray:
        if self.evaluator is None:
            raise ValueError("this function can only be sampled on its grid")
        return self.evaluator(np.asarray(x, dtype=float))

    @property
    def extent(self) -> float:
        return self.rule.b


@dataclass(frozen=True)
class EnergyLevel:
    """A solved level.

    ``kummer_shift`` is ``(n, delta)`` with the Kummer parameter
    a = -n + delta held exactly; near the free limit delta is far below the
    resolution of ``energy`` and the wavefunction needs it at full precision.
    """

    energy: float
    bracket: tuple[float, float]
    residual: float
    iterations: int
    method: str = "kummer-root"
    kummer_shift: tuple[int, float] | None = None


@dataclass(frozen=True)
class Moments:
    r2: float
    rm2: float
    p2: float
    pm2: float
    v_mean: float
    t_mean: float
    # <r^2> obtained in momentum space as the p-gradient functional
    r2_momentum: float = math.nan


@dataclass(frozen=True)
class FisherReport:
    i_r: float
    i_p: float
    i_t: float
    i_r_energy_route: float
    i_p_energy_route: float
    bound_low: float
    bound_high: float
    route_residual: float

    def bounds_hold(self, slack: float = 1e-9) -> bool:
        return (self.bound_low <= self.i_t * (1 + slack)) and (self.i_t <= self.bound_high * (1 + slack))


_LABEL_RE = re.compile(r"^\s*(\d+)\s*([A-Za-z])\s*$")


def parse_state_label(label: str) -> tuple[int, int]:
    """``"2p"`` -> ``(n_r, l) = (1, 1)``."""
    match = _LABEL_RE.match(label)
    if not match:
        raise LabelParseError(f"cannot parse state label {label!r}")
    number = int(match.group(1))
    letter = match.group(2).lower()
    if number < 1:
        raise LabelParseError(f"label {label!r}: leading integer must be positive")
    idx = ORBITAL_LETTERS.find(letter)
    if idx < 0:
        raise LabelParseError(f"label {label!r}: unknown orbital letter {letter!r}")
    return number - 1, idx


def format_state_label(n_r: int, l: int) -> str:
    if n_r < 0 or not 0 <= l < len(ORBITAL_LETTERS):
        raise LabelParseError(f"no spectroscopic label for n_r={n_r}, l={l}")
    return f"{n_r + 1}{ORBITAL_LETTERS[l]}"
