"""Counterexample constructions and empirical inclusion experiments.

Two constructions are built here, each with a known analytic limit that the
test suite and the CLI check against:

  * `build_thm37` -- a half-block plateau: the summed block statistic decays
    like 2**-r (tends to 0) while the exception density per block tends to
    1/2, witnessing that membership by summed statistic does not imply
    membership by density when the family vanishes pointwise in k.

  * `build_thm38` -- one spike per block with the family slope solved so the
    spike's modular term equals h_r**alpha exactly: the per-block exception
    density is 1/h_r**alpha (tends to 0) while the summed statistic stays
    at 1, witnessing the reverse non-inclusion for unbounded families.

The remaining helpers turn the per-block proof inequalities of the
inclusion theorems into machine-checkable bounds and run corpora of
sequences through antecedent/consequent space pairs.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Iterable, Sequence as TypingSequence

import numpy as np

from .convergence import (
    CONVERGES,
    DIVERGES,
    MODULAR_FLAGS,
    RAW_FLAGS,
    SHAT_DENSITY,
    STRONG,
    SpaceParams,
    _window_deviations,
    classify_trajectory,
    shat_flags,
    strong_block_statistic,
    uniform_trajectories,
)
from .errors import HypothesisUnsatisfiable
from .orlicz import (
    ConstantFamily,
    ExponentSequence,
    IndexScaledFamily,
    LinearSlope,
    MusielakOrliczFamily,
    RhoSequence,
    SpikeFamily,
    delta2_check,
)
from .sequences import (
    Explicit,
    Geometric,
    Identity,
    LacunarySchedule,
    Sequence,
    build_lacunary,
)

THEOREMS = ("T31", "T33", "T35", "T36", "T37", "T38")


# ---------------------------------------------------------------------------
# counterexample constructions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CounterexampleSpec:
    """Parameters for one construction.

    For thm37, `nu` is the plateau height and the family must have a
    pointwise-vanishing, eventually nonincreasing tail k -> M_k(nu/rho).
    For thm38, spike heights are nu_values (default nu * r), and the family
    defaults to a spike-slope family solved from the defining inequality.
    """

    theorem: str
    nu: float = 1.0
    rho: float = 1.0
    r_max: int = 14
    alpha: float = 1.0
    m_max: int | None = None
    family: MusielakOrliczFamily | None = None
    schedule_rule: Geometric | Explicit | None = None
    nu_values: tuple[float, ...] | None = None
    horizon_cap: int = 1 << 22

    def __post_init__(self) -> None:
        if self.theorem not in ("thm37", "thm38"):
            raise ValueError(f"theorem must be 'thm37' or 'thm38', got {self.theorem!r}")
        if self.nu < 0:
            raise ValueError("nu must be >= 0")
        if self.rho <= 0:
            raise ValueError("rho must be > 0")
        if self.r_max < 1:
            raise ValueError("r_max must be >= 1")


def _phi(family: MusielakOrliczFamily, k: int, u: float, s: float = 1.0) -> float:
    val = family.member(k)(u)
    return val if s == 1.0 else val**s


def build_thm37(spec: CounterexampleSpec) -> tuple[Sequence, LacunarySchedule, SpaceParams]:
    """Half-block plateau construction with its schedule and space parameters.

    Picks cut points n_r (nondecreasing block lengths) so that
    M_{n_r + 1}(nu/rho) < 2**-r, puts the value nu on the first
    ceil(h_r / 2) indices of each block and 0 on the rest, and returns
    identity-matrix parameters with unit exponents.  The exception
    threshold is set to half the smallest plateau term within the horizon,
    so the per-term membership flags mark exactly the plateau indices.

    Raises HypothesisUnsatisfiable when the family tail cannot reach
    2**-r within `horizon_cap`, or is not nonincreasing where probed.
    """
    if spec.theorem != "thm37":
        raise ValueError("spec.theorem must be 'thm37'")
    family = spec.family if spec.family is not None else IndexScaledFamily()
    m_max = 32 if spec.m_max is None else spec.m_max
    u = spec.nu / spec.rho

    def tail_value(k: int) -> float:
        return _phi(family, k, u)

    # cut points: smallest n_r keeping block lengths nondecreasing with
    # tail_value(n_r + 1) < 2**-r; one extra phantom cut for window lookahead
    cuts = [0]
    h_prev = 1
    for r in range(1, spec.r_max + 2):
        target = 2.0**-r
        lo = cuts[-1] + h_prev
        if tail_value(lo + 1) < target:
            n_r = lo
        else:
            hi = lo
            while tail_value(hi + 1) >= target:
                hi = max(hi + 1, hi * 2)
                if hi > spec.horizon_cap:
                    raise HypothesisUnsatisfiable(
                        f"tail of M_k(nu/rho) never drops below 2**-{r} "
                        f"within the horizon cap {spec.horizon_cap}"
                    )
            # smallest valid point in (lo, hi]
            a, b = lo, hi
            while a + 1 < b:
                mid = (a + b) // 2
                if tail_value(mid + 1) < target:
                    b = mid
                else:
                    a = mid
            n_r = b
        cuts.append(n_r)
        h_prev = cuts[-1] - cuts[-2]

    phantom_cut = cuts[-1]
    cuts = cuts[:-1]
    schedule = build_lacunary(Explicit(tuple(cuts)))

    # numeric hypothesis check: nonincreasing, vanishing tail at the probes
    probes = [tail_value(c + 1) for c in cuts[1:]] + [tail_value(phantom_cut + 1)]
    if any(b > a + 1e-15 for a, b in zip(probes, probes[1:])):
        raise HypothesisUnsatisfiable("M_k(nu/rho) is not nonincreasing along the cut probes")
    for r, val in enumerate(probes[:-1], start=1):
        if not val < 2.0**-r:
            raise HypothesisUnsatisfiable(
                f"M_(n_{r}+1)(nu/rho) = {val} is not below 2**-{r}"
            )

    # sequence: nu on the first ceil(h_r/2) indices of each block, 0 after;
    # the pattern continues into the phantom block to cover window lookahead
    # (for nu = 0 the continuation is identically zero, nothing to cover)
    if spec.nu > 0 and m_max > phantom_cut - schedule.last_index:
        raise HypothesisUnsatisfiable(
            f"lookahead m_max={m_max} reaches past the next block end {phantom_cut}"
        )
    horizon = schedule.last_index + m_max
    values = np.zeros(horizon)
    half_lengths = []
    for r in range(1, schedule.num_blocks + 1):
        start = schedule.cut_points[r - 1]
        h_r = schedule.cut_points[r] - start
        half = math.ceil(h_r / 2)
        half_lengths.append(half)
        values[start : start + half] = spec.nu
    phantom_half = math.ceil((phantom_cut - schedule.last_index) / 2)
    lookahead = min(m_max, phantom_half)
    values[schedule.last_index : schedule.last_index + lookahead] = spec.nu

    # threshold below every plateau term stored in the prefix
    if spec.nu > 0:
        last_half_index = schedule.cut_points[-2] + half_lengths[-1]
        epsilon = 0.5 * tail_value(last_half_index)
        if epsilon <= 0:
            epsilon = 1e-9
    else:
        epsilon = 1e-3

    params = SpaceParams(
        family=family,
        schedule=schedule,
        alpha=spec.alpha,
        epsilon=epsilon,
        L=0.0,
        m_max=m_max,
        rho=RhoSequence(constant=spec.rho),
        exponents=ExponentSequence(constant=1.0),
        matrix=Identity(),
    )
    return Sequence(values), schedule, params


def build_thm38(spec: CounterexampleSpec) -> tuple[Sequence, LacunarySchedule, SpaceParams]:
    """Spike construction: A_k(x) = nu_r at k = n_r, 0 elsewhere.

    The default family puts slope h_r**alpha * rho / nu_r at each spike
    index so M_{n_r}(nu_r / rho) = h_r**alpha exactly; a user-supplied
    family is validated against the same inequality (>=) at every spike.
    """
    if spec.theorem != "thm38":
        raise ValueError("spec.theorem must be 'thm38'")
    m_max = 0 if spec.m_max is None else spec.m_max
    rule = spec.schedule_rule or Geometric(base=2.0, ratio=2.0, count=spec.r_max)
    schedule = build_lacunary(rule)
    if schedule.num_blocks != spec.r_max:
        raise ValueError("schedule rule must produce exactly r_max blocks")

    R = schedule.num_blocks
    if spec.nu_values is not None:
        nus = tuple(float(v) for v in spec.nu_values)
        if len(nus) != R:
            raise ValueError(f"need {R} spike heights, got {len(nus)}")
    else:
        base = spec.nu if spec.nu > 0 else 1.0
        nus = tuple(base * r for r in range(1, R + 1))
    if any(v <= 0 for v in nus) or any(b <= a for a, b in zip(nus, nus[1:])):
        raise HypothesisUnsatisfiable("spike heights must be strictly increasing and positive")

    h = schedule.block_lengths.astype(np.float64)
    h_alpha = h**spec.alpha
    spikes = schedule.cut_points[1:]

    if spec.family is None:
        slopes = tuple(
            (spikes[r], h_alpha[r] * spec.rho / nus[r]) for r in range(R)
        )
        family: MusielakOrliczFamily = SpikeFamily(slopes=slopes, default_slope=1.0)
    else:
        family = spec.family
    for r in range(R):
        got = _phi(family, spikes[r], nus[r] / spec.rho)
        if not got >= h_alpha[r] * (1.0 - 1e-12):
            raise HypothesisUnsatisfiable(
                f"M_(n_{r + 1})(nu_{r + 1}/rho) = {got} < h_{r + 1}**alpha = {h_alpha[r]}"
            )

    horizon = schedule.last_index + m_max
    if m_max > 0:
        # the infinite continuation is zero until the next spike; make sure
        # the lookahead window does not swallow it
        next_cut = (
            math.ceil(rule.base * rule.ratio ** (R + 1))
            if isinstance(rule, Geometric)
            else schedule.last_index + m_max + 1
        )
        if horizon >= next_cut:
            raise HypothesisUnsatisfiable(
                f"lookahead m_max={m_max} reaches the next spike at {next_cut}"
            )
    values = np.zeros(horizon)
    for r in range(R):
        values[spikes[r] - 1] = nus[r]

    epsilon = min(1.0, 0.5 * float(np.min(h_alpha)))
    params = SpaceParams(
        family=family,
        schedule=schedule,
        alpha=spec.alpha,
        epsilon=epsilon,
        L=0.0,
        m_max=m_max,
        rho=RhoSequence(constant=spec.rho),
        exponents=ExponentSequence(constant=1.0),
        matrix=Identity(),
    )
    return Sequence(values), schedule, params


# ---------------------------------------------------------------------------
# per-block proof inequalities
# ---------------------------------------------------------------------------


def _require_constant_setup(p: SpaceParams) -> tuple[float, float]:
    if not isinstance(p.family, ConstantFamily):
        raise ValueError("per-block bounds need a constant family (k-independent M)")
    if p.rho.constant is None:
        raise ValueError("per-block bounds need a constant rho")
    return p.rho.constant, p.epsilon


def thm31_block_bounds(
    x: Sequence, p: SpaceParams, beta: float, m: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """Lower bound of the summed statistic by the raw exception count.

    Returns (lhs, rhs) per block with

      lhs_r = strong statistic at order alpha,
      rhs_r = |{k in I_r : |t_{km}(A(x)) - L| >= eps}| / h_r**beta
              * min(M(eps1)**h_inf, M(eps1)**H_sup),   eps1 = eps / rho.

    Valid for alpha <= beta, constant family and constant rho; then
    lhs >= rhs holds exactly in real arithmetic.
    """
    if beta < p.alpha or not 0 < beta <= 1:
        raise ValueError("need alpha <= beta <= 1")
    rho_c, eps = _require_constant_setup(p)
    lhs = strong_block_statistic(x, p, m).values

    flags = shat_flags(x, p, m, mode=RAW_FLAGS)
    counts = np.array(
        [
            np.count_nonzero(flags[p.schedule.block_slice(r)])
            for r in range(1, p.schedule.num_blocks + 1)
        ],
        dtype=np.float64,
    )
    m_eps = p.family.function(eps / rho_c)
    lo = min(m_eps**p.exponents.h_inf, m_eps**p.exponents.H_sup)
    h_beta = p.schedule.block_lengths.astype(np.float64) ** beta
    rhs = counts / h_beta * lo
    return lhs, rhs


def thm33_block_bounds(
    x: Sequence, p: SpaceParams, T: float, m: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """Upper bound of the summed statistic for uniformly bounded transforms.

    Returns (lhs, rhs) per block with

      lhs_r = strong statistic at order alpha,
      rhs_r = max(M(K)**h_inf, M(K)**H_sup) * raw exception density
              + (h_r / h_r**alpha) * max(M(eps1)**h_inf, M(eps1)**H_sup),

    K = T / rho.  T must dominate |t_{km}(A(x) - L)| over the evaluated
    range (e.g. T = max |x_k - L| for the identity matrix); a ValueError
    reports the observed sup when it does not.  The underlying hypothesis
    h_r / h_r**alpha -> 1 forces alpha = 1 for growing blocks; a warning
    is emitted for alpha < 1.
    """
    rho_c, eps = _require_constant_setup(p)
    if p.alpha < 1.0:
        warnings.warn(
            "the bounded-inclusion hypothesis h_r/h_r**alpha -> 1 is only "
            "satisfiable at alpha = 1 for growing blocks",
            stacklevel=2,
        )
    devs = _window_deviations(x, p, m)
    observed = float(np.max(devs)) if devs.size else 0.0
    if observed > T * (1 + 1e-12):
        raise ValueError(f"T={T} does not dominate the window deviations (sup {observed})")

    lhs = strong_block_statistic(x, p, m).values
    flags = devs >= p.epsilon
    sched = p.schedule
    counts = np.array(
        [np.count_nonzero(flags[sched.block_slice(r)]) for r in range(1, sched.num_blocks + 1)],
        dtype=np.float64,
    )
    h = sched.block_lengths.astype(np.float64)
    h_alpha = h**p.alpha
    M = p.family.function
    m_K = M(T / rho_c)
    m_eps = M(eps / rho_c)
    big = max(m_K**p.exponents.h_inf, m_K**p.exponents.H_sup)
    small = max(m_eps**p.exponents.h_inf, m_eps**p.exponents.H_sup)
    rhs = big * counts / h_alpha + (h / h_alpha) * small
    return lhs, rhs


def thm34_triangle_bounds(
    x: Sequence,
    p: SpaceParams,
    L1: float,
    L2: float,
    rho1: float,
    rho2: float,
    m: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """Modular triangle bound separating two candidate limits.

    With rho = max(2*rho1, 2*rho2) and D = max(1, 2**(H_sup - 1)):

      lhs_r = (1/h_r**alpha) * sum_{k in I_r} (M_k(|L1 - L2| / rho))**s_k
      rhs_r = D * strong_r(L=L1, rho1) + D * strong_r(L=L2, rho2)

    and lhs <= rhs holds in real arithmetic; a tail of rhs near zero
    therefore pins |L1 - L2| to zero, which is the uniqueness argument.
    """
    rho = max(2.0 * rho1, 2.0 * rho2)
    sched = p.schedule
    k_end = sched.last_index
    ks = np.arange(1, k_end + 1)
    us = np.full(k_end, abs(L1 - L2) / rho)
    terms = p.family.eval_at(ks, us)
    if not p.exponents.is_identically_one:
        terms = terms ** p.exponents.array(1, k_end)
    h_alpha = sched.block_lengths.astype(np.float64) ** p.alpha
    lhs = (
        np.array([np.sum(terms[sched.block_slice(r)]) for r in range(1, sched.num_blocks + 1)])
        / h_alpha
    )

    D = p.exponents.D
    v1 = strong_block_statistic(
        x, replace(p, L=L1, rho=RhoSequence(constant=rho1)), m
    ).values
    v2 = strong_block_statistic(
        x, replace(p, L=L2, rho=RhoSequence(constant=rho2)), m
    ).values
    rhs = D * v1 + D * v2
    return lhs, rhs


@dataclass(frozen=True)
class GrowthEstimate:
    """Sampled lower bound of M_k(nu/rho_k) / (nu/rho_k) over large nu."""

    gamma: float
    nu_range: tuple[float, float]
    k_range: tuple[int, int]
    bounded_away: bool


def liminf_growth_estimate(
    family: MusielakOrliczFamily,
    rho: RhoSequence = RhoSequence(),
    nu_grid: np.ndarray | None = None,
    k_range: Iterable[int] = range(1, 65),
    floor: float = 1e-9,
) -> GrowthEstimate:
    """Estimate inf_k M_k(nu/rho_k)/(nu/rho_k) over a nu-grid.

    Evidence, not proof: the estimate is the min over the sampled (nu, k)
    rectangle, and `bounded_away` reports whether it clears `floor`.
    """
    nus = np.geomspace(1.0, 1e3, 13) if nu_grid is None else np.asarray(nu_grid, float)
    ks = [int(k) for k in k_range]
    gamma = math.inf
    for k in ks:
        r = rho.at(k)
        us = nus / r
        ratios = family.eval_at(np.full(us.shape, k), us) / us
        gamma = min(gamma, float(np.min(ratios)))
    return GrowthEstimate(
        gamma=gamma,
        nu_range=(float(nus[0]), float(nus[-1])),
        k_range=(ks[0], ks[-1]),
        bounded_away=gamma > floor,
    )


# ---------------------------------------------------------------------------
# corpora and the inclusion matrix
# ---------------------------------------------------------------------------


def random_bounded_sequence(
    rng: np.random.Generator,
    horizon: int,
    center: float = 0.0,
    radius: float = 1.0,
    exception_density: float = 0.0,
    exception_scale: float = 3.0,
) -> Sequence:
    """Uniform draw in [center-radius, center+radius] with planted exceptions.

    Exception indices (chosen at `exception_density`) sit at
    center +/- exception_scale * radius, outside the bounded band, so
    membership of the draw in the density classes is controlled by design.
    """
    values = rng.uniform(center - radius, center + radius, size=horizon)
    if exception_density > 0:
        mask = rng.random(horizon) < exception_density
        signs = np.where(rng.random(horizon) < 0.5, -1.0, 1.0)
        values = np.where(mask, center + signs * exception_scale * radius, values)
    return Sequence(values)


@dataclass(frozen=True, eq=False)
class InclusionReport:
    """Corpus-level verdicts, implication statuses, and witnesses.

    An implication row is FAIL only when the antecedent verdict is
    ConvergesToZero and the consequent verdict is DoesNotConverge;
    Inconclusive never fails an implication.
    """

    corpus_id: str
    verdicts: tuple[dict, ...]
    implications: tuple[dict, ...]
    theorem_results: dict
    witnesses: tuple[dict, ...]

    def to_dict(self) -> dict:
        return {
            "corpus_id": self.corpus_id,
            "verdicts": list(self.verdicts),
            "implications": list(self.implications),
            "theorem_results": self.theorem_results,
            "witnesses": list(self.witnesses),
        }


def _implication_status(antecedent: str, consequent: str) -> str:
    if antecedent != CONVERGES:
        return "VACUOUS"
    if consequent == DIVERGES:
        return "FAIL"
    if consequent == CONVERGES:
        return "PASS"
    return "INCONCLUSIVE"


def run_inclusion_matrix(
    corpus: TypingSequence[tuple[Sequence, SpaceParams]],
    theorems: Iterable[str] = THEOREMS,
    beta: float = 1.0,
    verdict_tol: float = 1e-3,
    tail_window: int | None = None,
    inequality_slack: float = 1e-12,
    corpus_id: str = "corpus",
) -> InclusionReport:
    """Run antecedent/consequent verdict pairs for each requested theorem.

    Per theorem: T31 checks the summed statistic at alpha against the raw
    exception density at `beta` (and machine-checks the per-block lower
    bound when the setup is constant-family/constant-rho); T33 checks the
    reverse inclusion for bounded rows; T35/T36 compare the plain-average
    space against the family space, attaching a doubling report (T35) and
    a sampled growth estimate (T36); T37/T38 scan for non-inclusion
    witnesses.  Reports name the flag mode used for every density verdict.
    """
    requested = [t for t in THEOREMS if t in set(theorems)]
    verdict_rows: list[dict] = []
    implications: list[dict] = []
    witnesses: list[dict] = []
    theorem_results: dict = {}
    slack = inequality_slack

    cache: dict[tuple, str] = {}

    def verdict_of(
        i: int, x: Sequence, p: SpaceParams, statistic: str, mode: str, tag: str = "family"
    ) -> str:
        key = (i, statistic, mode, p.alpha, tag)
        if key not in cache:
            v = classify_trajectory(
                uniform_trajectories(x, p, statistic, mode).sup.values,
                verdict_tol,
                tail_window,
            )
            label = f"{statistic}[{tag}]@alpha={p.alpha:g}" + (
                f",flags={mode}" if statistic == SHAT_DENSITY else ""
            )
            verdict_rows.append(
                {
                    "sequence": f"seq_{i:03d}",
                    "space": label,
                    "decision": v.decision,
                    "tail_mean": v.tail_mean,
                }
            )
            cache[key] = v.decision
        return cache[key]

    t31_violations = 0
    for i, (x, p) in enumerate(corpus):
        sid = f"seq_{i:03d}"
        for theorem in requested:
            if theorem == "T31":
                ante = verdict_of(i, x, p, STRONG, MODULAR_FLAGS)
                cons = verdict_of(i, x, p.with_alpha(beta), SHAT_DENSITY, RAW_FLAGS)
                status = _implication_status(ante, cons)
                implications.append(
                    {
                        "theorem": "T31",
                        "sequence": sid,
                        "antecedent": ante,
                        "consequent": cons,
                        "flag_mode": RAW_FLAGS,
                        "status": status,
                    }
                )
                if isinstance(p.family, ConstantFamily) and p.rho.constant is not None:
                    lhs, rhs = thm31_block_bounds(x, p, beta, m=0)
                    bad = rhs - lhs > slack * np.maximum(1.0, np.abs(rhs))
                    t31_violations += int(np.count_nonzero(bad))
            elif theorem == "T33":
                ante = verdict_of(i, x, p, SHAT_DENSITY, RAW_FLAGS)
                cons = verdict_of(i, x, p, STRONG, MODULAR_FLAGS)
                status = _implication_status(ante, cons)
                implications.append(
                    {
                        "theorem": "T33",
                        "sequence": sid,
                        "antecedent": ante,
                        "consequent": cons,
                        "flag_mode": RAW_FLAGS,
                        "status": status,
                        "hypothesis_note": (
                            "h_r/h_r**alpha -> 1 requires alpha = 1"
                            if p.alpha < 1
                            else "alpha = 1"
                        ),
                    }
                )
            elif theorem in ("T35", "T36"):
                plain = replace(p, family=ConstantFamily(LinearSlope(1.0)))
                v_plain = verdict_of(i, x, plain, STRONG, MODULAR_FLAGS, tag="plain")
                v_family = verdict_of(i, x, p, STRONG, MODULAR_FLAGS)
                if theorem == "T35":
                    ante, cons = v_plain, v_family
                else:
                    ante, cons = v_family, v_plain
                status = _implication_status(ante, cons)
                implications.append(
                    {
                        "theorem": theorem,
                        "sequence": sid,
                        "antecedent": ante,
                        "consequent": cons,
                        "status": status,
                        "note": "conditional on sampled hypothesis",
                    }
                )
            elif theorem in ("T37", "T38"):
                strong_v = verdict_of(i, x, p, STRONG, MODULAR_FLAGS)
                shat_v = verdict_of(i, x, p, SHAT_DENSITY, MODULAR_FLAGS)
                if theorem == "T37" and strong_v == CONVERGES and shat_v == DIVERGES:
                    witnesses.append(
                        {
                            "theorem": "T37",
                            "sequence": sid,
                            "strong": strong_v,
                            "shat": shat_v,
                            "flag_mode": MODULAR_FLAGS,
                        }
                    )
                if theorem == "T38" and shat_v == CONVERGES and strong_v == DIVERGES:
                    witnesses.append(
                        {
                            "theorem": "T38",
                            "sequence": sid,
                            "strong": strong_v,
                            "shat": shat_v,
                            "flag_mode": MODULAR_FLAGS,
                        }
                    )

    for theorem in requested:
        rows = [imp for imp in implications if imp["theorem"] == theorem]
        if theorem in ("T37", "T38"):
            found = [w for w in witnesses if w["theorem"] == theorem]
            theorem_results[theorem] = {
                "kind": "witness",
                "witnesses_found": len(found),
            }
            continue
        fails = sum(1 for imp in rows if imp["status"] == "FAIL")
        result = {
            "kind": "implication",
            "rows": len(rows),
            "fail_rows": fails,
            "pass": fails == 0,
        }
        if theorem == "T31":
            result["block_inequality_violations"] = t31_violations
        if theorem == "T35" and corpus:
            rep = delta2_check(corpus[0][1].family)
            result["delta2"] = {
                "K_estimate": rep.K_estimate,
                "held": rep.held,
                "a": rep.a,
                "c_rule": rep.c_rule,
            }
        if theorem == "T36" and corpus:
            est = liminf_growth_estimate(corpus[0][1].family, corpus[0][1].rho)
            result["liminf"] = {
                "gamma": est.gamma,
                "bounded_away": est.bounded_away,
                "nu_range": list(est.nu_range),
            }
            result["note"] = "conditional on sampled hypothesis"
        theorem_results[theorem] = result

    return InclusionReport(
        corpus_id=corpus_id,
        verdicts=tuple(verdict_rows),
        implications=tuple(implications),
        theorem_results=theorem_results,
        witnesses=tuple(witnesses),
    )


# ---------------------------------------------------------------------------
# limit uniqueness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UniquenessReport:
    """Tail means of the summed statistic over a grid of candidate limits.

    status: UNIQUE (near-minimal set has diameter <= 2 * grid step),
    NO_LIMIT (no candidate reaches the convergence tolerance), or
    AMBIGUOUS (several well-separated candidates tie).
    """

    l_grid: tuple[float, ...]
    tail_means: tuple[float, ...]
    argmin_set: tuple[float, ...]
    diameter: float
    grid_step: float
    status: str

    @property
    def passed(self) -> bool:
        return self.status != "AMBIGUOUS"

    @property
    def argmin_L(self) -> float:
        best = min(range(len(self.tail_means)), key=lambda i: self.tail_means[i])
        return self.l_grid[best]


def uniqueness_experiment(
    x: Sequence,
    p: SpaceParams,
    L_grid: TypingSequence[float],
    verdict_tol: float = 1e-3,
    argmin_tol: float = 1e-3,
    tail_window: int | None = None,
) -> UniquenessReport:
    """Scan candidate limits and report where the summed statistic bottoms out."""
    grid = sorted(float(L) for L in L_grid)
    if len(grid) < 2:
        raise ValueError("need at least two candidate limits")
    tails: list[float] = []
    for L in grid:
        bundle = uniform_trajectories(x, replace(p, L=L), STRONG, MODULAR_FLAGS)
        v = classify_trajectory(bundle.sup.values, verdict_tol, tail_window)
        tails.append(v.tail_mean)
    best = min(tails)
    argmin_set = tuple(L for L, t in zip(grid, tails) if t <= best + argmin_tol)
    diameter = argmin_set[-1] - argmin_set[0]
    grid_step = max(b - a for a, b in zip(grid, grid[1:]))
    if best > verdict_tol:
        status = "NO_LIMIT"
    elif diameter <= 2.0 * grid_step:
        status = "UNIQUE"
    else:
        status = "AMBIGUOUS"
    return UniquenessReport(
        l_grid=tuple(grid),
        tail_means=tuple(tails),
        argmin_set=argmin_set,
        diameter=diameter,
        grid_step=grid_step,
        status=status,
    )
