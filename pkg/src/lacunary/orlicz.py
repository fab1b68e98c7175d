"""Orlicz function families, modulars, Luxemburg/amemiya norms, conjugates.

An Orlicz function M: [0, inf) -> [0, inf) is continuous, nondecreasing and
convex with M(0) = 0, M(u) > 0 for u > 0 and M(u) -> inf.  A family (M_k)
indexed by position generalizes this; the modular of a finite prefix is

    I(x) = sum_k M_k(|x_k| / rho_k),

and the two norms computed here are

    luxemburg:  inf { rho > 0 : I(x / rho) <= 1 }
    amemiya:    inf { (1 + I(k x)) / k : k > 0 }   (the "second" norm)

Evaluation may return +inf for arguments past the floating-point range of a
family (e.g. exp-type functions); downstream searches treat that as an
honest "too large" signal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import BracketTooSmall, EmptyAdmissibleSet, NegativeArgument
from .optimize import bisect_nonincreasing, golden_section_max, grid_then_golden_min
from .sequences import Sequence


# ---------------------------------------------------------------------------
# single Orlicz functions
# ---------------------------------------------------------------------------


class OrliczFunction:
    """Base class; subclasses implement the scalar formula in `_eval`."""

    label = "abstract"

    def _eval(self, u: float) -> float:
        raise NotImplementedError

    def __call__(self, u: float) -> float:
        if u < 0:
            raise NegativeArgument(f"Orlicz functions take u >= 0, got {u}")
        if u == 0.0:
            return 0.0
        return self._eval(u)

    def eval_many(self, us: np.ndarray) -> np.ndarray:
        """Vectorized evaluation; the generic path loops, fast paths override."""
        us = np.asarray(us, dtype=np.float64)
        if np.any(us < 0):
            raise NegativeArgument("Orlicz functions take u >= 0")
        return np.array([self._eval(u) if u > 0 else 0.0 for u in us.ravel()]).reshape(us.shape)


@dataclass(frozen=True)
class Power(OrliczFunction):
    """M(u) = u**p, p >= 1."""

    p: float
    label = "power"

    def __post_init__(self) -> None:
        if self.p < 1:
            raise ValueError("power exponent must be >= 1 for convexity")

    def _eval(self, u: float) -> float:
        return u**self.p

    def eval_many(self, us: np.ndarray) -> np.ndarray:
        us = np.asarray(us, dtype=np.float64)
        if np.any(us < 0):
            raise NegativeArgument("Orlicz functions take u >= 0")
        return us**self.p


@dataclass(frozen=True)
class ScaledPower(OrliczFunction):
    """M(u) = c * u**p, c > 0, p >= 1."""

    p: float
    c: float
    label = "scaled_power"

    def __post_init__(self) -> None:
        if self.p < 1 or self.c <= 0:
            raise ValueError("need p >= 1 and c > 0")

    def _eval(self, u: float) -> float:
        return self.c * u**self.p

    def eval_many(self, us: np.ndarray) -> np.ndarray:
        us = np.asarray(us, dtype=np.float64)
        if np.any(us < 0):
            raise NegativeArgument("Orlicz functions take u >= 0")
        return self.c * us**self.p


@dataclass(frozen=True)
class PowerOverP(OrliczFunction):
    """M(u) = u**p / p, p > 1; its Young conjugate is v**q / q with 1/p + 1/q = 1."""

    p: float
    label = "power_over_p"

    def __post_init__(self) -> None:
        if self.p <= 1:
            raise ValueError("need p > 1")

    def _eval(self, u: float) -> float:
        return u**self.p / self.p

    def eval_many(self, us: np.ndarray) -> np.ndarray:
        us = np.asarray(us, dtype=np.float64)
        if np.any(us < 0):
            raise NegativeArgument("Orlicz functions take u >= 0")
        return us**self.p / self.p


@dataclass(frozen=True)
class ExpMinusOne(OrliczFunction):
    """M(u) = e**u - 1."""

    label = "exp_minus_one"

    def _eval(self, u: float) -> float:
        try:
            return math.expm1(u)
        except OverflowError:
            return math.inf

    def eval_many(self, us: np.ndarray) -> np.ndarray:
        us = np.asarray(us, dtype=np.float64)
        if np.any(us < 0):
            raise NegativeArgument("Orlicz functions take u >= 0")
        with np.errstate(over="ignore"):
            return np.expm1(us)


@dataclass(frozen=True)
class LinearSlope(OrliczFunction):
    """M(u) = c * u, c > 0."""

    c: float
    label = "linear"

    def __post_init__(self) -> None:
        if self.c <= 0:
            raise ValueError("slope must be > 0")

    def _eval(self, u: float) -> float:
        return self.c * u

    def eval_many(self, us: np.ndarray) -> np.ndarray:
        us = np.asarray(us, dtype=np.float64)
        if np.any(us < 0):
            raise NegativeArgument("Orlicz functions take u >= 0")
        return self.c * us


@dataclass(frozen=True, eq=False)
class Table(OrliczFunction):
    """Piecewise-linear interpolant through (u_i, M_i) knots.

    Must start at (0, 0) with strictly increasing u_i; extrapolates past the
    last knot with the final segment's slope.  Shape axioms (monotonicity,
    convexity) are NOT enforced at construction: run `verify_orlicz_axioms`
    to check a candidate table.
    """

    knots: tuple[tuple[float, float], ...]
    label = "table"

    def __post_init__(self) -> None:
        knots = tuple((float(u), float(v)) for u, v in self.knots)
        if len(knots) < 2:
            raise ValueError("need at least two knots")
        if knots[0] != (0.0, 0.0):
            raise ValueError("first knot must be (0, 0)")
        us = [u for u, _ in knots]
        if any(b <= a for a, b in zip(us, us[1:])):
            raise ValueError("knot abscissae must strictly increase")
        if any(not (math.isfinite(u) and math.isfinite(v)) for u, v in knots):
            raise ValueError("knots must be finite")
        object.__setattr__(self, "knots", knots)

    def _eval(self, u: float) -> float:
        us = [a for a, _ in self.knots]
        vs = [b for _, b in self.knots]
        if u <= us[-1]:
            return float(np.interp(u, us, vs))
        slope = (vs[-1] - vs[-2]) / (us[-1] - us[-2])
        return vs[-1] + slope * (u - us[-1])

    def eval_many(self, us: np.ndarray) -> np.ndarray:
        us = np.asarray(us, dtype=np.float64)
        if np.any(us < 0):
            raise NegativeArgument("Orlicz functions take u >= 0")
        xs = np.array([a for a, _ in self.knots])
        ys = np.array([b for _, b in self.knots])
        out = np.interp(us, xs, ys)
        slope = (ys[-1] - ys[-2]) / (xs[-1] - xs[-2])
        beyond = us > xs[-1]
        out = np.where(beyond, ys[-1] + slope * (us - xs[-1]), out)
        return out


def eval_orlicz(M: OrliczFunction, u: float) -> float:
    """M(u); exact 0 at u = 0, NegativeArgument below it."""
    return M(u)


@dataclass(frozen=True)
class AxiomReport:
    """Grid-checked Orlicz axioms; `failures` lists the ones that did not hold."""

    zero_at_zero: bool
    positive: bool
    nondecreasing: bool
    midpoint_convex: bool
    growth: bool
    growth_floor: float
    failures: tuple[str, ...]

    @property
    def all_pass(self) -> bool:
        return not self.failures


def verify_orlicz_axioms(
    M: OrliczFunction,
    grid: Iterable[float],
    growth_floor: float = 0.0,
    tol: float = 1e-12,
) -> AxiomReport:
    """Check M(0)=0, positivity, monotonicity, midpoint convexity and growth.

    The grid must be sorted, nonempty and contain 0.  Convexity is tested as
    M((a+b)/2) <= (M(a)+M(b))/2 + tol over all grid pairs; growth as
    M(max grid) > growth_floor.  Report-valued: never raises for a bad M.
    """
    g = sorted(float(u) for u in grid)
    if not g:
        raise ValueError("grid must be nonempty")
    if g[0] != 0.0:
        raise ValueError("grid must contain 0")
    if any(u < 0 for u in g):
        raise NegativeArgument("grid values must be >= 0")

    vals = {u: M(u) for u in g}
    scale = max(abs(v) for v in vals.values()) or 1.0
    slack = tol * max(1.0, scale)

    zero_at_zero = vals[0.0] == 0.0
    positive = all(vals[u] > 0 for u in g if u > 0)
    nondecreasing = all(vals[b] >= vals[a] - slack for a, b in zip(g, g[1:]))
    midpoint_convex = True
    for i, a in enumerate(g):
        for b in g[i + 1 :]:
            mid = 0.5 * (a + b)
            if M(mid) > 0.5 * (vals[a] + vals[b]) + slack:
                midpoint_convex = False
                break
        if not midpoint_convex:
            break
    growth = vals[g[-1]] > growth_floor

    failures = tuple(
        name
        for name, ok in [
            ("zero_at_zero", zero_at_zero),
            ("positive", positive),
            ("nondecreasing", nondecreasing),
            ("midpoint_convex", midpoint_convex),
            ("growth", growth),
        ]
        if not ok
    )
    return AxiomReport(
        zero_at_zero, positive, nondecreasing, midpoint_convex, growth, growth_floor, failures
    )


# ---------------------------------------------------------------------------
# indexed families
# ---------------------------------------------------------------------------


class MusielakOrliczFamily:
    """A rule k -> M_k; every member must individually be an Orlicz function."""

    label = "abstract"

    def member(self, k: int) -> OrliczFunction:
        raise NotImplementedError

    def eval_at(self, ks: np.ndarray, us: np.ndarray) -> np.ndarray:
        """M_{ks[i]}(us[i]) elementwise; generic path loops over members."""
        ks = np.asarray(ks, dtype=np.int64)
        us = np.asarray(us, dtype=np.float64)
        return np.array([self.member(int(k))(float(u)) for k, u in zip(ks, us)])


@dataclass(frozen=True)
class ConstantFamily(MusielakOrliczFamily):
    """M_k = M for every k."""

    function: OrliczFunction
    label = "constant"

    def member(self, k: int) -> OrliczFunction:
        return self.function

    def eval_at(self, ks: np.ndarray, us: np.ndarray) -> np.ndarray:
        return self.function.eval_many(np.asarray(us, dtype=np.float64))


@dataclass(frozen=True)
class IndexScaledFamily(MusielakOrliczFamily):
    """M_k(u) = u / k; the canonical pointwise-vanishing family."""

    label = "index_scaled"

    def member(self, k: int) -> OrliczFunction:
        return LinearSlope(1.0 / k)

    def eval_at(self, ks: np.ndarray, us: np.ndarray) -> np.ndarray:
        ks = np.asarray(ks, dtype=np.float64)
        us = np.asarray(us, dtype=np.float64)
        if np.any(us < 0):
            raise NegativeArgument("Orlicz functions take u >= 0")
        return us / ks


@dataclass(frozen=True)
class IndexPowerFamily(MusielakOrliczFamily):
    """M_k(u) = u**p_k; indices past the supplied list repeat the last exponent."""

    exponents: tuple[float, ...]
    label = "index_power"

    def __post_init__(self) -> None:
        exps = tuple(float(p) for p in self.exponents)
        if not exps:
            raise ValueError("need at least one exponent")
        if any(p < 1 for p in exps):
            raise ValueError("every exponent must be >= 1")
        object.__setattr__(self, "exponents", exps)

    def _exponent(self, k: int) -> float:
        return self.exponents[min(k - 1, len(self.exponents) - 1)]

    def member(self, k: int) -> OrliczFunction:
        return Power(self._exponent(k))

    def eval_at(self, ks: np.ndarray, us: np.ndarray) -> np.ndarray:
        ks = np.asarray(ks, dtype=np.int64)
        us = np.asarray(us, dtype=np.float64)
        if np.any(us < 0):
            raise NegativeArgument("Orlicz functions take u >= 0")
        p = np.asarray(self.exponents)[np.minimum(ks - 1, len(self.exponents) - 1)]
        return us**p


@dataclass(frozen=True, eq=False)
class SpikeFamily(MusielakOrliczFamily):
    """M_k(u) = c_k * u with per-index slope overrides on a default slope."""

    slopes: tuple[tuple[int, float], ...]
    default_slope: float = 1.0
    label = "spike"

    def __post_init__(self) -> None:
        if self.default_slope <= 0:
            raise ValueError("default slope must be > 0")
        pairs = tuple((int(k), float(c)) for k, c in self.slopes)
        if any(c <= 0 for _, c in pairs):
            raise ValueError("every slope must be > 0")
        object.__setattr__(self, "slopes", pairs)

    @cached_property
    def _table(self) -> dict[int, float]:
        return dict(self.slopes)

    def slope(self, k: int) -> float:
        return self._table.get(k, self.default_slope)

    def member(self, k: int) -> OrliczFunction:
        return LinearSlope(self.slope(k))

    def eval_at(self, ks: np.ndarray, us: np.ndarray) -> np.ndarray:
        ks = np.asarray(ks, dtype=np.int64)
        us = np.asarray(us, dtype=np.float64)
        if np.any(us < 0):
            raise NegativeArgument("Orlicz functions take u >= 0")
        c = np.array([self._table.get(int(k), self.default_slope) for k in ks])
        return c * us


@dataclass(frozen=True, eq=False)
class CustomFamily(MusielakOrliczFamily):
    """Explicit members per index; indices past the list repeat the last one."""

    functions: tuple[OrliczFunction, ...]
    label = "custom"

    def __post_init__(self) -> None:
        if not self.functions:
            raise ValueError("need at least one member function")

    def member(self, k: int) -> OrliczFunction:
        return self.functions[min(k - 1, len(self.functions) - 1)]


# ---------------------------------------------------------------------------
# scale and exponent sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RhoSequence:
    """Strictly positive scale factors rho_k, constant or per-index."""

    constant: float | None = 1.0
    per_index: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if (self.constant is None) == (self.per_index is None):
            raise ValueError("set exactly one of constant / per_index")
        if self.constant is not None:
            if not (self.constant > 0 and math.isfinite(self.constant)):
                raise ValueError("rho must be strictly positive and finite")
        else:
            vals = tuple(float(v) for v in self.per_index)
            if not vals or any(not (v > 0 and math.isfinite(v)) for v in vals):
                raise ValueError("rho entries must be strictly positive and finite")
            object.__setattr__(self, "per_index", vals)

    def at(self, k: int) -> float:
        if self.constant is not None:
            return self.constant
        if k > len(self.per_index):
            raise ValueError(f"rho defined up to index {len(self.per_index)}, asked for {k}")
        return self.per_index[k - 1]

    def array(self, start: int, stop: int) -> np.ndarray:
        """rho_k for k = start..stop inclusive."""
        if self.constant is not None:
            return np.full(stop - start + 1, self.constant)
        if stop > len(self.per_index):
            raise ValueError(f"rho defined up to index {len(self.per_index)}, asked for {stop}")
        return np.asarray(self.per_index[start - 1 : stop], dtype=np.float64)


@dataclass(frozen=True)
class ExponentSequence:
    """Positive exponents s_k with derived envelope constants.

    h_inf = inf_k s_k, H_sup = sup_k s_k and D = max(1, 2**(H_sup - 1)), the
    constant in the power triangle inequality (a+b)**s <= D (a**s + b**s).
    """

    constant: float | None = 1.0
    per_index: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if (self.constant is None) == (self.per_index is None):
            raise ValueError("set exactly one of constant / per_index")
        if self.constant is not None:
            if not (self.constant > 0 and math.isfinite(self.constant)):
                raise ValueError("exponent must be strictly positive and finite")
        else:
            vals = tuple(float(v) for v in self.per_index)
            if not vals or any(not (v > 0 and math.isfinite(v)) for v in vals):
                raise ValueError("exponents must be strictly positive and finite")
            object.__setattr__(self, "per_index", vals)

    @property
    def h_inf(self) -> float:
        return self.constant if self.constant is not None else min(self.per_index)

    @property
    def H_sup(self) -> float:
        return self.constant if self.constant is not None else max(self.per_index)

    @property
    def D(self) -> float:
        return max(1.0, 2.0 ** (self.H_sup - 1.0))

    def at(self, k: int) -> float:
        if self.constant is not None:
            return self.constant
        return self.per_index[min(k - 1, len(self.per_index) - 1)]

    def array(self, start: int, stop: int) -> np.ndarray:
        if self.constant is not None:
            return np.full(stop - start + 1, self.constant)
        idx = np.minimum(np.arange(start, stop + 1) - 1, len(self.per_index) - 1)
        return np.asarray(self.per_index, dtype=np.float64)[idx]

    @property
    def is_identically_one(self) -> bool:
        if self.constant is not None:
            return self.constant == 1.0
        return all(v == 1.0 for v in self.per_index)


# ---------------------------------------------------------------------------
# modular and norms
# ---------------------------------------------------------------------------


def modular(
    family: MusielakOrliczFamily, x: Sequence, rho: RhoSequence = RhoSequence()
) -> float:
    """Finite-prefix modular sum_{k=1}^{N} M_k(|x_k| / rho_k)."""
    n = x.horizon
    ks = np.arange(1, n + 1)
    us = np.abs(x.values) / rho.array(1, n)
    return float(np.sum(family.eval_at(ks, us)))


def luxemburg_norm(
    family: MusielakOrliczFamily, x: Sequence, tol: float = 1e-10
) -> float:
    """inf { rho > 0 : modular(x / rho) <= 1 } by bracketing + bisection.

    The map rho -> modular(family, x, rho) is nonincreasing with a single
    crossing of 1 for any nonzero prefix, so the bracket is expanded
    geometrically from rho = 1 and then bisected; the returned value is the
    upper bracket end, hence feasible (modular <= 1) and within `tol` of
    the infimum.
    """
    if tol <= 0:
        raise ValueError("tol must be > 0")
    if not np.any(x.values):
        return 0.0

    def g(rho: float) -> float:
        return modular(family, x, RhoSequence(constant=rho))

    lo = hi = 1.0
    if g(1.0) > 1.0:
        for _ in range(200):
            hi *= 2.0
            if g(hi) <= 1.0:
                break
        else:
            raise RuntimeError("modular never drops to 1; family violates growth axioms?")
        lo = hi / 2.0
    else:
        for _ in range(200):
            lo *= 0.5
            if g(lo) > 1.0:
                break
        else:
            raise RuntimeError("modular stays <= 1 down to rho ~ 1e-60; degenerate family")
        hi = lo * 2.0
    return bisect_nonincreasing(g, 1.0, lo, hi, tol)


@dataclass(frozen=True)
class AmemiyaValue:
    """Value of the inf_k (1 + modular(k x)) / k norm plus a boundary flag.

    `at_boundary` marks objectives that were still descending when the
    search stopped expanding (the infimum is approached as k -> inf, e.g.
    purely linear families); the reported value then sits within the
    search tolerance of the infimum but is not an interior minimum.
    """

    value: float
    at_boundary: bool


def orlicz_norm(
    family: MusielakOrliczFamily, x: Sequence, tol: float = 1e-9
) -> AmemiyaValue:
    """inf over k > 0 of (1 + modular(k * x)) / k.

    A log-spaced grid over k in [2**-20, 2**20] brackets the minimum, golden
    section refines it, and a still-descending right edge keeps doubling
    until the marginal improvement drops below `tol` (then the value is
    returned with `at_boundary=True`).
    """
    if tol <= 0:
        raise ValueError("tol must be > 0")
    if not np.any(x.values):
        return AmemiyaValue(0.0, False)

    def objective(k: float) -> float:
        return (1.0 + modular(family, x.scaled(k))) / k

    grid = [2.0**e for e in range(-20, 21)]
    k_star, value, at_boundary = grid_then_golden_min(objective, grid, tol)
    return AmemiyaValue(value, at_boundary)


@dataclass(frozen=True)
class ConjugateValue:
    """sup_{u in [0, u_max]} (|v| u - M_k(u)) plus a boundary-attainment flag.

    `at_boundary=True` means the supremum sat at u_max with the integrand
    still rising there: the true conjugate is likely infinite (|v| above
    the asymptotic slope of M_k), so the number is only a lower bound.
    """

    value: float
    at_boundary: bool


def complementary(
    family: MusielakOrliczFamily,
    k: int,
    v: float,
    u_max: float = 1e3,
    tol: float = 1e-10,
    require_interior: bool = False,
) -> ConjugateValue:
    """Young conjugate N_k(v) = sup { |v| u - M_k(u) : u >= 0 } on [0, u_max].

    The integrand is concave (M_k convex), so golden section is exact up to
    tolerance.  Boundary attainment is flagged, not raised, unless
    `require_interior` is set, in which case BracketTooSmall signals that
    the maximizer sat at u_max without the slope turning over.
    """
    M = family.member(k)
    a = abs(v)
    if a == 0.0:
        return ConjugateValue(0.0, False)

    def g(u: float) -> float:
        m = M(u)
        return -math.inf if math.isinf(m) else a * u - m

    u_star, value = golden_section_max(g, 0.0, u_max, tol)
    value = max(value, 0.0)  # u = 0 always gives 0
    # boundary attainment: maximizer at the edge with the slope still positive
    at_boundary = False
    if u_max - u_star <= max(10 * tol, 1e-9 * u_max):
        h = max(u_max * 1e-7, 1e-9)
        if g(u_max) >= g(u_max - h):
            at_boundary = True
            value = max(value, g(u_max))
    if at_boundary and require_interior:
        raise BracketTooSmall(
            f"conjugate maximizer at u_max={u_max} with nonnegative slope; widen the bracket"
        )
    return ConjugateValue(value, at_boundary)


# ---------------------------------------------------------------------------
# doubling (Delta_2) estimation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Delta2Report:
    """Empirical doubling constant for M_k(2u) <= K M_k(u) + c_k on small arguments.

    K_estimate is the max of (M_k(2u) - c_k) / M_k(u) over sampled (k, u)
    with M_k(u) <= a, clamped below at 0.  `violations` lists samples where
    no finite K works (M_k(u) = 0 yet M_k(2u) > c_k); empty iff the
    condition held on every sample.
    """

    a: float
    K_estimate: float
    c_rule: str
    samples_tested: int
    violations: tuple[tuple[int, float], ...]

    @property
    def held(self) -> bool:
        return not self.violations


def _default_u_grid() -> np.ndarray:
    # hits 1.0 exactly so power families expose their full doubling ratio
    return np.unique(np.concatenate([np.geomspace(1e-6, 1.0, 31), np.linspace(1.0, 10.0, 19)]))


def delta2_check(
    family: MusielakOrliczFamily,
    a: float = 1.0,
    c_values: tuple[float, ...] | None = None,
    u_samples: np.ndarray | None = None,
    k_range: Iterable[int] = range(1, 33),
) -> Delta2Report:
    """Estimate the doubling constant of a family on the admissible set.

    The admissible set per index k is { u in u_samples : M_k(u) <= a }; `a`
    is uniform across k (configurable).  When `c_values` is None the
    summable default c_k = 2**-k is used.
    """
    if a <= 0:
        raise ValueError("threshold a must be > 0")
    us = _default_u_grid() if u_samples is None else np.asarray(u_samples, dtype=np.float64)
    us = us[us > 0]
    ks = [int(k) for k in k_range]
    if c_values is None:
        c_rule = "2^-k"
        c_of = lambda k: 2.0**-k
    else:
        c_rule = "supplied"
        c_of = lambda k: c_values[min(k - 1, len(c_values) - 1)]

    K_est = 0.0
    tested = 0
    violations: list[tuple[int, float]] = []
    for k in ks:
        m_u = family.eval_at(np.full(us.shape, k), us)
        m_2u = family.eval_at(np.full(us.shape, k), 2.0 * us)
        admissible = m_u <= a
        if not np.any(admissible):
            continue
        c_k = c_of(k)
        for u, mu, m2u in zip(us[admissible], m_u[admissible], m_2u[admissible]):
            tested += 1
            if mu == 0.0:
                if m2u > c_k:
                    violations.append((k, float(u)))
                continue
            K_est = max(K_est, (m2u - c_k) / mu)
    if tested == 0:
        raise EmptyAdmissibleSet(f"no sampled (k, u) satisfies M_k(u) <= {a}")
    return Delta2Report(
        a=a,
        K_estimate=max(K_est, 0.0),
        c_rule=c_rule,
        samples_tested=tested,
        violations=tuple(violations),
    )
