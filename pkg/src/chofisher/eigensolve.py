"""Energy levels of the confined oscillator and its two limits."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BracketError, DomainError
from .model import EnergyLevel, StateSpec, System
from .specfun import bessel_zero, kummer_1f1_with_bound, spherical_bessel_j

# ln(1e-34): density level below which the region beyond a wall is irrelevant
_LOG_NEGLIGIBLE = math.log(1e-34)
N_R_MAX = 10
L_MAX = 16


def free_cutoff_x(n_r: int, l: int) -> float:
    """Value of omega*r^2 past which the free state's radial density is < 1e-34.

    Uses the large-x envelope x^(2n_r+l+1/2) e^(-x) / (n_r! Gamma(n_r+l+3/2))
    of the normalised Laguerre density. For the ground state this is ~80.
    """
    alpha = l + 0.5
    power = alpha + 2 * n_r
    const = math.lgamma(n_r + 1) + math.lgamma(n_r + alpha + 1)

    def excess(x: float) -> float:
        return power * math.log(x) - x - const - _LOG_NEGLIGIBLE

    lo = max(power, 1.0)
    hi = 2 * lo
    while excess(hi) > 0:
        lo, hi = hi, 2 * hi
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
    return hi


def wall_is_inert(spec: StateSpec) -> bool:
    """True when the wall sits where the free state has no weight left."""
    if not spec.confined or spec.system is not System.CHO:
        return False
    return spec.omega * spec.r_c**2 >= free_cutoff_x(spec.n_r, spec.l)


def fho_energy(n_r: int, l: int, omega: float) -> float:
    return omega * (2 * n_r + l + 1.5)


@dataclass(frozen=True)
class BoundaryFunction:
    """E -> 1F1(a(E), l + 3/2, omega r_c^2): the radial function at the wall, up to a
    positive factor. Its k-th root in increasing E is the level with n_r = k - 1."""

    l: int
    omega: float
    r_c: float

    @classmethod
    def for_state(cls, spec: StateSpec) -> "BoundaryFunction":
        if spec.system is not System.CHO:
            raise DomainError("boundary function only defined for the confined oscillator")
        return cls(spec.l, spec.omega, spec.r_c)

    @property
    def b(self) -> float:
        return self.l + 1.5

    @property
    def x(self) -> float:
        return self.omega * self.r_c**2

    def a(self, energy: float) -> float:
        return 0.5 * (self.l + 1.5 - energy / self.omega)

    def evaluate(self, energy: float) -> tuple[float, float]:
        """Value and rounding-error bound."""
        return kummer_1f1_with_bound(self.a(energy), self.b, self.x)

    def __call__(self, energy: float) -> float:
        return self.evaluate(energy)[0]

    def at_shift(self, n: int, delta: float) -> float:
        """Value at a = -n + delta, with delta kept exact."""
        return kummer_1f1_with_bound(delta, self.b, self.x, a_int=-n)[0]

    def energy_at_shift(self, n: int, delta: float) -> float:
        return self.omega * (self.l + 1.5 + 2 * n - 2 * delta)

    def shift_at_energy(self, n: int, energy: float) -> float:
        return (fho_energy(n, self.l, self.omega) - energy) / (2 * self.omega)


def scan_step(spec: StateSpec) -> float:
    w, rc = spec.omega, spec.r_c
    # a fifth of the box ground-state energy keeps small-omega scans short
    return max(w, 0.2 * math.pi**2 / (2 * rc * rc))


def energy_ceiling(spec: StateSpec) -> float:
    z = bessel_zero(spec.l, spec.n_r + 1)
    return 50 * spec.omega + 10 * z * z / (2 * spec.r_c**2)


def _check_envelope(spec: StateSpec) -> None:
    if spec.n_r > N_R_MAX or spec.l > L_MAX:
        raise DomainError(f"state (n_r={spec.n_r}, l={spec.l}) outside n_r<={N_R_MAX}, l<={L_MAX}")


def solve_cho_energy(spec: StateSpec, rtol: float = 1e-12) -> EnergyLevel:
    """Bracket the (n_r+1)-th sign change of the wall function, then bisect."""
    if spec.system is not System.CHO:
        raise DomainError("solve_cho_energy needs a CHO state")
    _check_envelope(spec)
    if wall_is_inert(spec):
        e = fho_energy(spec.n_r, spec.l, spec.omega)
        return EnergyLevel(e, (e, e), 0.0, 0, "free-limit", (spec.n_r, 0.0))

    fn = BoundaryFunction.for_state(spec)
    step = scan_step(spec)
    ceiling = energy_ceiling(spec)
    e_lo = spec.omega * (spec.l + 1.5) * (1 - 1e-9)
    f_lo = fn(e_lo)
    found = 0
    iterations = 0
    while e_lo < ceiling:
        e_hi = e_lo + step
        f_hi = fn(e_hi)
        iterations += 1
        if f_hi == 0.0 or f_lo * f_hi < 0.0:
            found += 1
            if found == spec.n_r + 1:
                if f_hi == 0.0:
                    return EnergyLevel(e_hi, (e_hi, e_hi), 0.0, iterations, "kummer-root")
                return _refine(fn, spec.n_r, e_lo, e_hi, rtol, iterations)
        e_lo, f_lo = e_hi, f_hi
    raise BracketError(
        f"only {found} of {spec.n_r + 1} sign changes below E={ceiling:.6g} "
        f"(l={spec.l}, omega={spec.omega}, r_c={spec.r_c})"
    )


def _refine(fn: BoundaryFunction, n: int, e_lo: float, e_hi: float, rtol: float, iterations: int) -> EnergyLevel:
    """Bisect in delta = a + n, which resolves roots hugging a free level.

    The stopping rule is relative to |delta|, so a root 1e-19 above the free
    level is still pinned to ~13 digits of delta.
    """
    lo = fn.shift_at_energy(n, e_hi)
    hi = fn.shift_at_energy(n, e_lo)
    f_lo = fn.at_shift(n, lo)
    for _ in range(1100):
        if hi - lo <= max(rtol * 0.1 * max(abs(lo), abs(hi)), 1e-300):
            break
        # bisect geometrically once the bracket sits on one side of zero
        if lo < 0.0 < hi or lo == 0.0 or hi == 0.0:
            mid = 0.5 * (lo + hi)
        elif hi < 0.0:
            mid = -math.sqrt(lo * hi) if hi / lo < 0.5 else 0.5 * (lo + hi)
        else:
            mid = math.sqrt(lo * hi) if lo / hi < 0.5 else 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        f_mid = fn.at_shift(n, mid)
        iterations += 1
        if f_mid == 0.0:
            lo = hi = mid
            break
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    delta = 0.5 * (lo + hi)
    energy = fn.energy_at_shift(n, delta)
    bracket = (fn.energy_at_shift(n, hi), fn.energy_at_shift(n, lo))
    return EnergyLevel(energy, bracket, fn.at_shift(n, delta), iterations, "kummer-root", (n, delta))


def solve_pisb_energy(spec: StateSpec) -> EnergyLevel:
    if spec.system is not System.PISB:
        raise DomainError("solve_pisb_energy needs a PISB state")
    _check_envelope(spec)
    z = bessel_zero(spec.l, spec.n_r + 1)
    e = z * z / (2 * spec.r_c**2)
    return EnergyLevel(e, (e, e), spherical_bessel_j(spec.l, z), 0, "bessel-zero")


def solve_fho_energy(spec: StateSpec) -> EnergyLevel:
    if spec.system is not System.FHO:
        raise DomainError("solve_fho_energy needs an FHO state")
    e = fho_energy(spec.n_r, spec.l, spec.omega)
    return EnergyLevel(e, (e, e), 0.0, 0, "closed-form", (spec.n_r, 0.0))


def solve_energy(spec: StateSpec) -> EnergyLevel:
    if spec.system is System.CHO:
        return solve_cho_energy(spec)
    if spec.system is System.PISB:
        return solve_pisb_energy(spec)
    return solve_fho_energy(spec)
