"""Config-driven command line: norms, classify, counterexample, inclusion.

Every command reads a strict JSON config (or a named preset), echoes the
fully-defaulted config into `<out>/report.json`, and writes plot-ready
trajectory CSVs with header `r,m,value` (per-m rows first, then one row
per block with m = "sup").  Floats are printed at 12 significant digits so
identical configs reproduce identical bytes; the timestamp lives only in
report.json.

Exit codes: 0 when all requested computations completed (math PASS/FAIL
lands in the report), 1 on config or computation errors, 2 under
--strict when any reported check failed.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .config import (
    DEFAULT_SEED,
    build_family,
    build_matrix,
    build_scalars,
    build_schedule,
    build_sequence,
    build_space,
    build_verdict_params,
    deep_copy_config,
    load_config,
    schedule_rule,
    validate_config,
)
from .convergence import (
    MODULAR_FLAGS,
    SHAT_DENSITY,
    STRONG,
    SpaceParams,
    UniformTrajectories,
    Verdict,
    classify_trajectory,
    uniform_trajectories,
)
from .errors import ConfigError, LacunaryError
from .experiments import (
    THEOREMS,
    CounterexampleSpec,
    build_thm37,
    build_thm38,
    random_bounded_sequence,
    run_inclusion_matrix,
)
from .orlicz import (
    ExponentSequence,
    RhoSequence,
    complementary,
    delta2_check,
    luxemburg_norm,
    modular,
    orlicz_norm,
)
from .sequences import Sequence


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


def _round_floats(obj):
    """Clamp every float to 12 significant digits for stable output."""
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(_fmt(obj))
    return obj


def _verdict_dict(v: Verdict) -> dict:
    return {
        "decision": v.decision,
        "tail_mean": v.tail_mean,
        "tail_window": v.tail_window,
        "tol": v.tol,
        "tail_slope": v.tail_slope,
        "slope_slack": v.slope_slack,
    }


def _trajectory_rows(bundle: UniformTrajectories) -> list[tuple[int, str, float]]:
    rows: list[tuple[int, str, float]] = []
    for traj in bundle.per_m:
        for r, value in enumerate(traj.values, start=1):
            rows.append((r, str(traj.m), float(value)))
    for r, value in enumerate(bundle.sup.values, start=1):
        rows.append((r, "sup", float(value)))
    return rows


@dataclass
class ReportBundle:
    """Everything one command produced, ready to be written to <out>."""

    config: dict
    results: dict
    checks: list[dict] = field(default_factory=list)
    trajectories: dict[str, list[tuple[int, str, float]]] = field(default_factory=dict)
    membership: tuple[list[str], list[list[str]]] | None = None

    @property
    def failed_checks(self) -> list[str]:
        failed = [c["name"] for c in self.checks if not c["passed"]]
        failed += [
            f"{t}:implications"
            for t, res in self.results.get("theorem_results", {}).items()
            if res.get("kind") == "implication" and not res.get("pass", True)
        ]
        return failed

    def write(self, out_dir: Path) -> None:
        out_dir.mkdir(parents=True, exist_ok=True)
        report = {
            "tool": "lacunary",
            "version": __version__,
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "config": _round_floats(self.config),
            "results": _round_floats(self.results),
            "checks": _round_floats(self.checks),
        }
        with open(out_dir / "report.json", "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
        for name, rows in self.trajectories.items():
            with open(out_dir / f"{name}.csv", "w") as fh:
                fh.write("r,m,value\n")
                for r, m, value in rows:
                    fh.write(f"{r},{m},{_fmt(value)}\n")
        if self.membership is not None:
            header, rows = self.membership
            with open(out_dir / "membership.csv", "w") as fh:
                fh.write(",".join(header) + "\n")
                for row in rows:
                    fh.write(",".join(row) + "\n")


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------


def cmd_norms(doc: dict, seed: int | None = None) -> ReportBundle:
    validate_config(doc, "norms")
    seq_doc, x = build_sequence(doc["sequence"], seed)
    fam_doc, family = build_family(doc["family"])
    rho_doc, rho = build_scalars(doc.get("rho", {"kind": "constant", "value": 1.0}), RhoSequence)
    echo = {
        "command": "norms",
        "sequence": seq_doc,
        "family": fam_doc,
        "rho": rho_doc,
        "luxemburg_tol": float(doc.get("luxemburg_tol", 1e-10)),
        "orlicz_tol": float(doc.get("orlicz_tol", 1e-9)),
    }
    lux = luxemburg_norm(family, x, echo["luxemburg_tol"])
    orl = orlicz_norm(family, x, echo["orlicz_tol"])
    results: dict = {
        "horizon": x.horizon,
        "modular": modular(family, x, rho),
        "luxemburg_norm": lux,
        "orlicz_norm": {"value": orl.value, "at_boundary": orl.at_boundary},
    }
    if "complementary" in doc:
        comp = doc["complementary"]
        echo["complementary"] = {
            "indices": [int(k) for k in comp.get("indices", [1])],
            "v_values": [float(v) for v in comp.get("v_values", [0.0, 1.0, 2.0])],
            "u_max": float(comp.get("u_max", 1e3)),
        }
        samples = []
        for k in echo["complementary"]["indices"]:
            for v in echo["complementary"]["v_values"]:
                c = complementary(family, k, v, u_max=echo["complementary"]["u_max"])
                samples.append(
                    {"k": k, "v": v, "value": c.value, "at_boundary": c.at_boundary}
                )
        results["complementary"] = samples
    if "delta2" in doc:
        d2 = doc["delta2"]
        echo["delta2"] = {
            "a": float(d2.get("a", 1.0)),
            "k_max": int(d2.get("k_max", 32)),
        }
        rep = delta2_check(family, a=echo["delta2"]["a"], k_range=range(1, echo["delta2"]["k_max"] + 1))
        results["delta2"] = {
            "K_estimate": rep.K_estimate,
            "a": rep.a,
            "c_rule": rep.c_rule,
            "samples_tested": rep.samples_tested,
            "violations": [list(v) for v in rep.violations],
            "held": rep.held,
        }
    return ReportBundle(config=echo, results=results)


def _materialize_construction(doc: dict) -> tuple[dict, Sequence, SpaceParams]:
    theorem = doc["theorem"]
    out = {
        "theorem": theorem,
        "nu": float(doc.get("nu", 1.0)),
        "rho": float(doc.get("rho", 1.0)),
        "r_max": int(doc.get("r_max", 14 if theorem == "thm37" else 10)),
        "alpha": float(doc.get("alpha", 1.0)),
        "m_max": doc.get("m_max", None),
    }
    kwargs: dict = {}
    if "nu_values" in doc:
        out["nu_values"] = [float(v) for v in doc["nu_values"]]
        kwargs["nu_values"] = tuple(out["nu_values"])
    if "schedule" in doc:
        sched_doc, _ = build_schedule(doc["schedule"])
        out["schedule"] = sched_doc
        kwargs["schedule_rule"] = schedule_rule(sched_doc)
    if "family" in doc:
        fam_doc, fam = build_family(doc["family"])
        out["family"] = fam_doc
        kwargs["family"] = fam
    spec = CounterexampleSpec(
        theorem=theorem,
        nu=out["nu"],
        rho=out["rho"],
        r_max=out["r_max"],
        alpha=out["alpha"],
        m_max=out["m_max"],
        **kwargs,
    )
    builder = build_thm37 if theorem == "thm37" else build_thm38
    x, _, params = builder(spec)
    out["m_max"] = params.m_max  # resolved default
    return out, x, params


def cmd_classify(doc: dict, seed: int | None = None) -> ReportBundle:
    validate_config(doc, "classify")
    has_construction = "construction" in doc
    if has_construction == ("sequence" in doc):
        raise ConfigError("classify needs exactly one of 'sequence' or 'construction'")
    flag_mode = doc.get("flag_mode", MODULAR_FLAGS)
    verdict_doc = build_verdict_params(doc.get("verdict", {}))
    echo: dict = {"command": "classify", "flag_mode": flag_mode, "verdict": verdict_doc}

    if has_construction:
        for key in ("family", "schedule", "matrix", "space"):
            if key in doc:
                raise ConfigError(f"'construction' already fixes '{key}'")
        cons_doc, x, params = _materialize_construction(doc["construction"])
        echo["construction"] = cons_doc
    else:
        if "family" not in doc or "schedule" not in doc:
            raise ConfigError("classify needs 'family' and 'schedule' alongside 'sequence'")
        seq_doc, x = build_sequence(doc["sequence"], seed)
        fam_doc, family = build_family(doc["family"])
        sched_doc, schedule = build_schedule(doc["schedule"])
        mat_doc, matrix = build_matrix(doc.get("matrix", {"kind": "identity"}))
        space_doc, params = build_space(doc.get("space", {}), family, schedule, matrix)
        echo.update(
            {
                "sequence": seq_doc,
                "family": fam_doc,
                "schedule": sched_doc,
                "matrix": mat_doc,
                "space": space_doc,
            }
        )

    strong = uniform_trajectories(x, params, STRONG)
    shat = uniform_trajectories(x, params, SHAT_DENSITY, flag_mode)
    v_strong = classify_trajectory(
        strong.sup.values, verdict_doc["tol"], verdict_doc["tail_window"], verdict_doc["slope_slack"]
    )
    v_shat = classify_trajectory(
        shat.sup.values, verdict_doc["tol"], verdict_doc["tail_window"], verdict_doc["slope_slack"]
    )
    results = {
        "horizon": x.horizon,
        "num_blocks": params.schedule.num_blocks,
        "last_index": params.schedule.last_index,
        "m_max": params.m_max,
        "epsilon": params.epsilon,
        "flag_mode": flag_mode,
        "verdicts": {STRONG: _verdict_dict(v_strong), SHAT_DENSITY: _verdict_dict(v_shat)},
        "schedule_warnings": list(params.schedule.warnings),
    }
    return ReportBundle(
        config=echo,
        results=results,
        trajectories={
            "trajectory": _trajectory_rows(strong),
            "trajectory_shat": _trajectory_rows(shat),
        },
    )


def _thm37_checks(doc_checks: dict, strong: UniformTrajectories, shat: UniformTrajectories, verdict_doc: dict) -> tuple[dict, list[dict]]:
    echo = {
        "shat_tail_target": float(doc_checks.get("shat_tail_target", 0.5)),
        "shat_tail_tol": float(doc_checks.get("shat_tail_tol", 0.05)),
        "strong_bound_coeff": float(doc_checks.get("strong_bound_coeff", 2.0)),
        "strong_bound_min_r": int(doc_checks.get("strong_bound_min_r", 4)),
    }
    v_shat = classify_trajectory(
        shat.sup.values, verdict_doc["tol"], verdict_doc["tail_window"], verdict_doc["slope_slack"]
    )
    gap = abs(v_shat.tail_mean - echo["shat_tail_target"])
    checks = [
        {
            "name": "shat_tail_near_half",
            "observed": v_shat.tail_mean,
            "target": echo["shat_tail_target"],
            "tolerance": echo["shat_tail_tol"],
            "passed": bool(gap <= echo["shat_tail_tol"]),
        }
    ]
    r0 = echo["strong_bound_min_r"]
    vals = strong.sup.values
    scaled = [vals[r - 1] * 2.0**r for r in range(r0, len(vals) + 1)]
    worst = max(scaled) if scaled else 0.0
    checks.append(
        {
            "name": "strong_dominated_by_two_pow_minus_r",
            "observed": worst,
            "target": echo["strong_bound_coeff"],
            "tolerance": 0.0,
            "passed": bool(worst <= echo["strong_bound_coeff"]),
        }
    )
    return echo, checks


def _thm38_checks(doc_checks: dict, strong: UniformTrajectories, shat: UniformTrajectories, params: SpaceParams) -> tuple[dict, list[dict]]:
    echo = {
        "shat_exact_tol": float(doc_checks.get("shat_exact_tol", 1e-12)),
        "shat_density_max": float(doc_checks.get("shat_density_max", 0.01)),
        "shat_density_min_r": int(doc_checks.get("shat_density_min_r", 7)),
        "strong_min": float(doc_checks.get("strong_min", 1.0 - 1e-9)),
    }
    h_alpha = params.schedule.block_lengths.astype(np.float64) ** params.alpha
    expected = 1.0 / h_alpha
    observed = shat.per_m[0].values
    worst_gap = float(np.max(np.abs(observed - expected)))
    checks = [
        {
            "name": "shat_density_equals_one_over_h_alpha",
            "observed": worst_gap,
            "target": 0.0,
            "tolerance": echo["shat_exact_tol"],
            "passed": bool(worst_gap <= echo["shat_exact_tol"]),
        }
    ]
    r0 = echo["shat_density_min_r"]
    tail_max = float(np.max(observed[r0 - 1 :])) if r0 <= observed.size else 0.0
    checks.append(
        {
            "name": "shat_density_small_tail",
            "observed": tail_max,
            "target": echo["shat_density_max"],
            "tolerance": 0.0,
            "passed": bool(tail_max <= echo["shat_density_max"]),
        }
    )
    strong_min = float(np.min(strong.sup.values))
    checks.append(
        {
            "name": "strong_at_least_one",
            "observed": strong_min,
            "target": echo["strong_min"],
            "tolerance": 0.0,
            "passed": bool(strong_min >= echo["strong_min"]),
        }
    )
    return echo, checks


def cmd_counterexample(doc: dict, seed: int | None = None) -> ReportBundle:
    validate_config(doc, "counterexample")
    cons_doc, x, params = _materialize_construction(doc)
    verdict_doc = build_verdict_params(doc.get("verdict", {}))
    echo = dict(cons_doc)
    echo["command"] = "counterexample"
    echo["verdict"] = verdict_doc

    strong = uniform_trajectories(x, params, STRONG)
    shat = uniform_trajectories(x, params, SHAT_DENSITY, MODULAR_FLAGS)
    v_strong = classify_trajectory(
        strong.sup.values, verdict_doc["tol"], verdict_doc["tail_window"], verdict_doc["slope_slack"]
    )
    v_shat = classify_trajectory(
        shat.sup.values, verdict_doc["tol"], verdict_doc["tail_window"], verdict_doc["slope_slack"]
    )

    notes = []
    if doc["theorem"] == "thm37":
        checks_echo, checks = _thm37_checks(doc.get("checks", {}), strong, shat, verdict_doc)
        expected = {
            "strong": "block values dominated by 2**-(r-1), tending to 0",
            "shat_density": "tail at 1/2",
        }
        notes.append(
            "witness direction: summed statistic vanishes while the exception "
            "density stays at 1/2, so density membership fails"
        )
    else:
        checks_echo, checks = _thm38_checks(doc.get("checks", {}), strong, shat, params)
        expected = {
            "strong": "every block value at least 1",
            "shat_density": "block values 1/h_r**alpha, tending to 0",
        }
        notes.append(
            "witness direction: the summed statistic never drops below 1, a "
            "non-membership certificate for the summed class even though the "
            "exception density vanishes"
        )
    echo["checks"] = checks_echo

    results = {
        "horizon": x.horizon,
        "num_blocks": params.schedule.num_blocks,
        "last_index": params.schedule.last_index,
        "cut_points": list(params.schedule.cut_points),
        "epsilon": params.epsilon,
        "m_max": params.m_max,
        "flag_mode": MODULAR_FLAGS,
        "expected_limits": expected,
        "notes": notes,
        "verdicts": {STRONG: _verdict_dict(v_strong), SHAT_DENSITY: _verdict_dict(v_shat)},
    }
    return ReportBundle(
        config=echo,
        results=results,
        checks=checks,
        trajectories={
            "trajectory": _trajectory_rows(strong),
            "trajectory_shat": _trajectory_rows(shat),
        },
    )


def cmd_inclusion(doc: dict, seed: int | None = None) -> ReportBundle:
    validate_config(doc, "inclusion")
    fam_doc, family = build_family(doc.get("family", {"kind": "constant", "function": {"kind": "power", "p": 2.0}}))
    sched_doc, schedule = build_schedule(doc.get("schedule", {"kind": "geometric", "base": 1.0, "ratio": 2.0, "count": 8}))
    mat_doc, matrix = build_matrix(doc.get("matrix", {"kind": "identity"}))
    space_doc, params = build_space(
        {**{"alpha": 0.5}, **doc.get("space", {})}, family, schedule, matrix
    )
    verdict_doc = build_verdict_params(doc.get("verdict", {}))
    corpus_doc = doc.get("corpus", {})
    corpus_echo = {
        "size": int(corpus_doc.get("size", 20)),
        "seed": int(seed if seed is not None else corpus_doc.get("seed", DEFAULT_SEED)),
        "center": float(corpus_doc.get("center", params.L)),
        "radius": float(corpus_doc.get("radius", 1.0)),
        "exception_density": float(corpus_doc.get("exception_density", 0.0)),
        "exception_scale": float(corpus_doc.get("exception_scale", 3.0)),
        "include_thm37": bool(corpus_doc.get("include_thm37", False)),
        "include_thm38": bool(corpus_doc.get("include_thm38", False)),
        "construction_r_max": int(corpus_doc.get("construction_r_max", 14)),
    }
    theorems = doc.get("theorems", list(THEOREMS))
    echo = {
        "command": "inclusion",
        "theorems": theorems,
        "beta": float(doc.get("beta", 1.0)),
        "family": fam_doc,
        "schedule": sched_doc,
        "matrix": mat_doc,
        "space": space_doc,
        "verdict": verdict_doc,
        "corpus": corpus_echo,
    }

    rng = np.random.default_rng(corpus_echo["seed"])
    horizon = schedule.last_index + params.m_max
    corpus: list[tuple[Sequence, SpaceParams]] = []
    for _ in range(corpus_echo["size"]):
        x = random_bounded_sequence(
            rng,
            horizon,
            corpus_echo["center"],
            corpus_echo["radius"],
            corpus_echo["exception_density"],
            corpus_echo["exception_scale"],
        )
        corpus.append((x, params))
    if corpus_echo["include_thm37"]:
        x37, _, p37 = build_thm37(
            CounterexampleSpec(theorem="thm37", r_max=corpus_echo["construction_r_max"])
        )
        corpus.append((x37, p37))
    if corpus_echo["include_thm38"]:
        x38, _, p38 = build_thm38(
            CounterexampleSpec(theorem="thm38", r_max=corpus_echo["construction_r_max"])
        )
        corpus.append((x38, p38))

    report = run_inclusion_matrix(
        corpus,
        theorems,
        beta=echo["beta"],
        verdict_tol=verdict_doc["tol"],
        tail_window=verdict_doc["tail_window"],
    )
    results = report.to_dict()

    spaces = sorted({row["space"] for row in report.verdicts})
    by_seq: dict[str, dict[str, str]] = {}
    for row in report.verdicts:
        by_seq.setdefault(row["sequence"], {})[row["space"]] = row["decision"]
    header = ["sequence"] + spaces
    rows = [
        [sid] + [by_seq[sid].get(space, "") for space in spaces] for sid in sorted(by_seq)
    ]
    return ReportBundle(
        config=echo, results=results, membership=(header, rows)
    )


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

_HANDLERS = {
    "norms": cmd_norms,
    "classify": cmd_classify,
    "counterexample": cmd_counterexample,
    "inclusion": cmd_inclusion,
}


def load_preset(name: str) -> dict:
    path = resources.files("lacunary").joinpath("presets", f"{name}.json")
    if not path.is_file():
        raise ConfigError(f"unknown preset {name!r}")
    return json.loads(path.read_text())


def _adapt_preset(doc: dict, command: str) -> dict:
    """Reshape a preset written for one command into the invoked command."""
    preset_command = doc.get("command")
    if preset_command == command:
        return doc
    if preset_command == "counterexample" and command == "classify":
        construction = {
            k: doc[k]
            for k in ("theorem", "nu", "rho", "r_max", "alpha", "m_max", "nu_values", "schedule", "family")
            if k in doc
        }
        adapted: dict = {"command": "classify", "construction": construction}
        if "verdict" in doc:
            adapted["verdict"] = doc["verdict"]
        return adapted
    raise ConfigError(
        f"preset targets command {preset_command!r}, not usable with {command!r}"
    )


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="lacunary",
        description="Block statistics, Orlicz-family norms, and inclusion experiments "
        "over finite sequence prefixes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("norms", "modular, Luxemburg and Amemiya norms, conjugates, doubling check"),
        ("classify", "block trajectories and convergence verdicts for one sequence"),
        ("counterexample", "build a construction and check its analytic limits"),
        ("inclusion", "run a corpus through antecedent/consequent space pairs"),
    ]:
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", type=Path, help="JSON run configuration")
        sp.add_argument("--preset", type=str, help="named in-repo preset")
        sp.add_argument("--out", type=Path, default=Path("out"), help="output directory")
        sp.add_argument("--strict", action="store_true", help="exit 2 if any check fails")
        sp.add_argument("--seed", type=int, default=None, help="override the config seed")
    args = parser.parse_args(argv)

    try:
        if args.config is not None and args.preset is not None:
            raise ConfigError("give --config or --preset, not both")
        if args.config is not None:
            doc = load_config(args.config)
        elif args.preset is not None:
            doc = _adapt_preset(load_preset(args.preset), args.command)
        elif args.command == "inclusion":
            doc = {"command": "inclusion"}
        else:
            raise ConfigError(f"{args.command} needs --config or --preset")
        doc = deep_copy_config(doc)
        doc.setdefault("command", args.command)
        if doc["command"] != args.command:
            raise ConfigError(
                f"config is for command {doc['command']!r}, invoked {args.command!r}"
            )
        bundle = _HANDLERS[args.command](doc, args.seed)
        bundle.write(args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except LacunaryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    failed = bundle.failed_checks
    for check in bundle.checks:
        status = "PASS" if check["passed"] else "FAIL"
        print(f"{status} {check['name']}: observed {_fmt(check['observed'])}")
    if args.strict and failed:
        print(f"strict mode: {len(failed)} failed check(s): {', '.join(failed)}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
