"""Command-line front end.

Exit codes: 0 success or statement holds, 1 unsolvable, 2 input error,
3 statement false, 4 unsupported query, 5 verification failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from collections import Counter
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from . import __version__
from .errors import (
    DimensionMismatch,
    FormulaRangeError,
    NotHermitian,
    NotPsd,
    RouteDisagreement,
    SingularMatrix,
    Unsolvable,
    UnsupportedQuery,
)
from .exact import Matrix, frobenius_norm_sq, inertia, rank
from .extremal import (
    CompletionSpec,
    ExtremalProfile,
    profile_completion_hermitian,
    profile_completion_psd,
    profile_completion_two,
    profile_linear_vs_p,
    profile_ls_vs_lr_branches,
    profile_psd_linear_vs_p,
    profile_skew_pair,
    profile_two_congruence,
    profile_two_linear,
)
from .oracle import (
    PROFILE_KINDS,
    InstanceRecipe,
    SpecialCaseReport,
    case_from_recipe,
    envelope_sweep,
    identity_trial,
    monte_carlo_envelope,
    special_case_trial,
)
from .ordering import (
    MODES,
    RELATIONS,
    OrderingQuery,
    Verdict,
    decide_average_equality,
    decide_linear_vs_p,
    decide_ls_vs_lr,
    decide_partition_average,
    decide_perturbed,
    decide_psd_linear_vs_p,
    decide_sum_average,
    decide_transformed_ordering,
    decide_transformed_set_equality,
    decide_two_congruence,
    decide_two_linear,
)
from .serialize import (
    MatrixFileError,
    Report,
    canonical_json,
    inputs_digest,
    load_matrix,
    matrix_from_obj,
    matrix_to_obj,
)
from .solutions import (
    CongruenceEqSpec,
    LinearEqSpec,
    SolvabilityCertificate,
    check_congruence,
    check_linear_hermitian,
    check_linear_psd,
    congruence_solution,
    derive_seed,
    hermitian_solution,
    least_rank_solution,
    least_squares_solution,
    psd_solution,
    sample_hermitian,
    sample_matrix,
)

EXIT_OK = 0
EXIT_UNSOLVABLE = 1
EXIT_INPUT = 2
EXIT_FALSE = 3
EXIT_UNSUPPORTED = 4
EXIT_VERIFY = 5

INPUT_ERRORS = (
    MatrixFileError,
    DimensionMismatch,
    NotHermitian,
    NotPsd,
    SingularMatrix,
    ValueError,
)

SOLVE_KINDS = ("linear", "linear-psd", "congruence", "least-squares", "least-rank")

PROFILE_FILES = {
    "linear-vs-p": ("A", "B", "P"),
    "psd-vs-p": ("A", "B", "P"),
    "two-linear": ("A", "B", "C", "D"),
    "two-congruence": ("A1", "B1", "A2", "B2"),
    "completion": ("A", "B", "C?"),
    "completion-psd": ("A", "B"),
    "skew": ("A", "B", "C?"),
    "ls-vs-lr": ("A", "B"),
}

ORDER_FILES = {
    "linear-vs-p": ("A", "B", "P"),
    "psd-vs-p": ("A", "B", "P"),
    "two-linear": ("A", "B", "C", "D"),
    "perturbed": ("A", "B", "dA", "dB"),
    "two-congruence": ("A1", "B1", "A2", "B2"),
    "transformed": ("A", "B", "T"),
    "average": ("A", "B", "T1", "T2"),
    "partition": ("A", "B"),
    "sum-split": ("A", "B", "A1"),
    "ls-vs-lr": ("A", "B"),
}

SUITES = ("identities", "envelopes", "special-cases", "all")


class InputError(Exception):
    """Command-line input that fails validation (exit 2)."""


# ---------------------------------------------------------------------------
# input helpers
# ---------------------------------------------------------------------------


def _load_named(names: Sequence[str], paths: Sequence[str]) -> dict[str, Matrix]:
    required = [n for n in names if not n.endswith("?")]
    if not len(required) <= len(paths) <= len(names):
        want = " ".join(n.rstrip("?") if not n.endswith("?") else f"[{n[:-1]}]" for n in names)
        raise InputError(f"expected files {want}, got {len(paths)}")
    return {name.rstrip("?"): load_matrix(p) for name, p in zip(names, paths)}


def _cert_obj(cert: SolvabilityCertificate) -> dict:
    return {
        "solvable": cert.solvable,
        "conditions": {label: ok for label, ok in cert.conditions},
    }


def _profile_obj(p: ExtremalProfile) -> dict:
    return {"profile": p.as_dict(), "evidence": dict(p.evidence)}


def _verdict_obj(v: Verdict) -> dict:
    return {
        "query": str(v.query),
        "holds": v.holds,
        "route": v.route,
        "evidence": v.evidence_dict(),
    }


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def cmd_solve(args) -> tuple[int, dict, dict[str, Matrix]]:
    mats = _load_named(("A", "B"), args.files)
    A, B = mats["A"], mats["B"]
    rng = random.Random(derive_seed("solve", args.seed))
    param = load_matrix(args.param_file) if args.param_file else None
    if param is not None:
        mats["param"] = param
    m, n = A.shape
    kind = args.kind

    if kind in ("linear", "linear-psd"):
        spec = LinearEqSpec(A, B)
        cert = check_linear_hermitian(spec) if kind == "linear" else check_linear_psd(spec)
    else:
        spec = CongruenceEqSpec(A, B)
        cert = check_congruence(spec)
    results: dict[str, Any] = {"kind": kind, "certificate": _cert_obj(cert)}
    if not cert.solvable and kind not in ("least-squares", "least-rank"):
        return EXIT_UNSOLVABLE, results, mats

    checks: dict[str, bool] = {}
    if kind == "linear":
        U = param if param is not None else sample_hermitian(rng, n)
        X = hermitian_solution(spec, U)
        checks = {"AX=B": A @ X == B, "X=X*": X.is_hermitian()}
    elif kind == "linear-psd":
        V = param if param is not None else sample_matrix(rng, n, n)
        X = psd_solution(spec, V)
        checks = {"AX=B": A @ X == B, "X=X*": X.is_hermitian(), "X≽0": inertia(X).minus == 0}
    elif kind == "congruence":
        U = param if param is not None else sample_matrix(rng, n, n)
        X = congruence_solution(spec, U)
        checks = {"AXA*=B": A @ X @ A.H == B, "X=X*": X.is_hermitian()}
    elif kind == "least-squares":
        U = param if param is not None else sample_matrix(rng, n, n)
        residual, X = least_squares_solution(spec, U)
        results["residual"] = str(residual)
        checks = {
            "residual=|B-AXA*|²": frobenius_norm_sq(B - A @ X @ A.H) == residual,
            "X=X*": X.is_hermitian(),
        }
    else:
        V = param if param is not None else sample_matrix(rng, m + n, n)
        min_rank, X = least_rank_solution(spec, V)
        results["min_rank"] = min_rank
        checks = {"r(B-AYA*)=min": rank(B - A @ X @ A.H) == min_rank, "Y=Y*": X.is_hermitian()}
    results["solution"] = matrix_to_obj(X)
    results["verified"] = checks
    if not all(checks.values()):
        return EXIT_VERIFY, results, mats
    return EXIT_OK, results, mats


# ---------------------------------------------------------------------------
# profile
# ---------------------------------------------------------------------------


def cmd_profile(args) -> tuple[int, dict, dict[str, Matrix]]:
    kind = args.kind
    mats = _load_named(PROFILE_FILES[kind], args.files)
    g = mats.get
    results: dict[str, Any] = {"kind": kind}
    if kind == "linear-vs-p":
        p = profile_linear_vs_p(LinearEqSpec(g("A"), g("B")), g("P"))
    elif kind == "psd-vs-p":
        p = profile_psd_linear_vs_p(LinearEqSpec(g("A"), g("B")), g("P"))
    elif kind == "two-linear":
        p = profile_two_linear(LinearEqSpec(g("A"), g("B")), LinearEqSpec(g("C"), g("D")))
    elif kind == "two-congruence":
        p = profile_two_congruence(
            CongruenceEqSpec(g("A1"), g("B1")), CongruenceEqSpec(g("A2"), g("B2"))
        )
    elif kind == "completion":
        spec = CompletionSpec(g("A"), g("B"), g("C"))
        p = profile_completion_two(spec) if g("C") is not None else profile_completion_hermitian(spec)
    elif kind == "completion-psd":
        p = profile_completion_psd(CompletionSpec(g("A"), g("B"), sign=args.sign, cone="psd"))
    elif kind == "skew":
        p = profile_skew_pair(g("A"), g("B"), g("C"))
    else:
        general, simplified = profile_ls_vs_lr_branches(CongruenceEqSpec(g("A"), g("B")))
        p = general
        if simplified is not None:
            results["simplified"] = simplified.as_dict()
            results["branches_equal"] = simplified == general
    results.update(_profile_obj(p))
    return EXIT_OK, results, mats


# ---------------------------------------------------------------------------
# order
# ---------------------------------------------------------------------------


def cmd_order(args) -> tuple[int, dict, dict[str, Matrix]]:
    kind = args.kind
    mats = _load_named(ORDER_FILES[kind], args.files)
    g = mats.get
    query = OrderingQuery(args.relation, args.mode)
    set_eq = query.relation == "set-equality"
    if kind in ("average", "partition", "sum-split") and not set_eq:
        raise UnsupportedQuery(f"{kind} only answers forall-set-equality")
    if set_eq and kind not in ("transformed", "average", "partition", "sum-split"):
        raise UnsupportedQuery(f"set-equality is not defined for {kind}")

    if kind == "linear-vs-p":
        v = decide_linear_vs_p(LinearEqSpec(g("A"), g("B")), g("P"), query)
    elif kind == "psd-vs-p":
        v = decide_psd_linear_vs_p(LinearEqSpec(g("A"), g("B")), g("P"), query)
    elif kind == "two-linear":
        v = decide_two_linear(LinearEqSpec(g("A"), g("B")), LinearEqSpec(g("C"), g("D")), query)
    elif kind == "perturbed":
        v = decide_perturbed(LinearEqSpec(g("A"), g("B")), g("dA"), g("dB"), query)
    elif kind == "two-congruence":
        v = decide_two_congruence(
            CongruenceEqSpec(g("A1"), g("B1")), CongruenceEqSpec(g("A2"), g("B2")), query
        )
    elif kind == "transformed":
        spec = CongruenceEqSpec(g("A"), g("B"))
        if set_eq:
            v = decide_transformed_set_equality(spec, g("T"))
        else:
            v = decide_transformed_ordering(spec, g("T"), query)
    elif kind == "average":
        v = decide_average_equality(CongruenceEqSpec(g("A"), g("B")), g("T1"), g("T2"))
    elif kind == "partition":
        if args.split is None:
            raise InputError("partition needs --split")
        v = decide_partition_average(CongruenceEqSpec(g("A"), g("B")), args.split)
    elif kind == "sum-split":
        v = decide_sum_average(CongruenceEqSpec(g("A"), g("B")), g("A1"))
    else:
        v = decide_ls_vs_lr(CongruenceEqSpec(g("A"), g("B")), query)
    results = {"kind": kind, "verdict": _verdict_obj(v)}
    return (EXIT_OK if v.holds else EXIT_FALSE), results, mats


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _identity_check(seed: int, t: int, max_dim: int) -> list:
    rng = random.Random(derive_seed("identity", seed, t))
    return identity_trial(rng, max_dim)


def _run_identities(seed: int, trials: int, max_dim: int) -> tuple[dict, Optional[dict]]:
    total: Counter = Counter()
    failed: Counter = Counter()
    first = None
    for t in range(trials):
        for r in _identity_check(seed, t, max_dim):
            total[r.name] += 1
            if not r.holds:
                failed[r.name] += 1
                if first is None:
                    first = {
                        "suite": "identities",
                        "seed": seed,
                        "trial": t,
                        "max_dim": max_dim,
                        "identity": r.name,
                        "lhs": str(r.lhs),
                        "rhs": str(r.rhs),
                    }
    summary = {name: {"checked": total[name], "failed": failed[name]} for name in sorted(total)}
    return summary, first


def _envelope_counterexample(rep, draws: int) -> dict:
    recipe = rep.recipe
    case = case_from_recipe(rep.kind, recipe)
    return {
        "suite": "envelopes",
        "kind": rep.kind,
        "recipe": {"seed": recipe.seed, "m": recipe.m, "n": recipe.n, "bound": recipe.bound},
        "draws": draws,
        "first_violation": rep.first_violation,
        "closed_form": rep.closed_form.as_dict(),
        "observed": rep.as_dict()["observed"],
        "inputs": {k: matrix_to_obj(M) for k, M in case.inputs.items()},
    }


def _run_envelopes(
    seed: int, trials: int, max_dim: int, draws: int, workers: Optional[int]
) -> tuple[dict, Optional[dict], bool]:
    summary = {}
    first = None
    ok = True
    for kind in PROFILE_KINDS:
        reps = envelope_sweep(kind, trials, draws, seed, max_dim, workers=workers)
        contained = sum(r.min_consistent for r in reps)
        attained = sum(r.max_attained for r in reps)
        summary[kind] = {
            "instances": len(reps),
            "contained": contained,
            "max_attained": attained,
        }
        bad = [r for r in reps if not r.min_consistent]
        low = attained < 0.95 * len(reps)
        if bad or low:
            ok = False
            if first is None:
                culprit = bad[0] if bad else next(r for r in reps if not r.max_attained)
                first = _envelope_counterexample(culprit, draws)
    return summary, first, ok


def _run_special(seed: int, trials: int, max_dim: int) -> tuple[dict, Optional[dict]]:
    rep = SpecialCaseReport()
    for t in range(trials):
        special_case_trial(rep, seed, t, max_dim)
    first = None
    if rep.first_failure is not None:
        label, t = rep.first_failure
        first = {"suite": "special-cases", "seed": seed, "trial": t, "max_dim": max_dim, "case": label}
    labels = sorted(set(rep.passed) | set(rep.failed))
    summary = {
        k: {"checked": rep.passed.get(k, 0) + rep.failed.get(k, 0), "failed": rep.failed.get(k, 0)}
        for k in labels
    }
    return summary, first


def replay(cx: dict) -> bool:
    """Re-run one counterexample; True if it still fails."""
    suite = cx.get("suite")
    if suite == "identities":
        reports = _identity_check(cx["seed"], cx["trial"], cx["max_dim"])
        return any(not r.holds for r in reports)
    if suite == "special-cases":
        rep = special_case_trial(SpecialCaseReport(), cx["seed"], cx["trial"], cx["max_dim"])
        return not rep.all_passed
    if suite == "envelopes":
        r = cx["recipe"]
        recipe = InstanceRecipe(r["seed"], r["m"], r["n"], bound=r["bound"])
        rep = monte_carlo_envelope(recipe, cx["kind"], cx["draws"])
        return not (rep.min_consistent and rep.max_attained)
    raise InputError(f"unknown counterexample suite {suite!r}")


def cmd_verify(args) -> tuple[int, dict, dict[str, Matrix]]:
    if args.replay:
        try:
            cx = json.loads(Path(args.replay).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read counterexample: {exc}") from exc
        for name, obj in cx.get("inputs", {}).items():
            matrix_from_obj(obj)
        still = replay(cx)
        return (EXIT_VERIFY if still else EXIT_OK), {"replay": args.replay, "still_failing": still}, {}
    if args.trials < 1:
        raise InputError("--trials must be at least 1")
    if args.max_dim < 1:
        raise InputError("--max-dim must be at least 1")
    if args.draws < 1:
        raise InputError("--draws must be at least 1")
    suites = ("identities", "envelopes", "special-cases") if args.suite == "all" else (args.suite,)
    results: dict[str, Any] = {"suites": list(suites)}
    first = None
    ok = True
    if "identities" in suites:
        summary, cx = _run_identities(args.seed, args.trials, args.max_dim)
        results["identities"] = summary
        ok = ok and cx is None
        first = first or cx
    if "envelopes" in suites:
        summary, cx, env_ok = _run_envelopes(
            args.seed, args.trials, args.max_dim, args.draws, args.workers
        )
        results["envelopes"] = summary
        ok = ok and env_ok
        first = first or cx
    if "special-cases" in suites:
        summary, cx = _run_special(args.seed, args.trials, args.max_dim)
        results["special_cases"] = summary
        ok = ok and cx is None
        first = first or cx
    if first is not None:
        path = Path(args.counterexample)
        path.write_text(canonical_json(first), encoding="utf-8")
        results["counterexample"] = str(path)
    return (EXIT_OK if ok else EXIT_VERIFY), results, {}


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _is_matrix_obj(v: Any) -> bool:
    return isinstance(v, dict) and set(v) == {"rows", "cols", "entries"}


def _entry_text(pair: list) -> str:
    re_, im = pair
    if im == "0":
        return re_
    if re_ == "0":
        return f"{im}i"
    sign = "" if im.startswith("-") else "+"
    return f"{re_}{sign}{im}i"


def _render(value: Any, indent: int, out: list[str]) -> None:
    pad = "  " * indent
    for key, v in value.items():
        if _is_matrix_obj(v):
            out.append(f"{pad}{key} ({v['rows']}x{v['cols']}):")
            cells = [_entry_text(e) for e in v["entries"]]
            width = max((len(c) for c in cells), default=0)
            for i in range(v["rows"]):
                row = cells[i * v["cols"] : (i + 1) * v["cols"]]
                out.append(pad + "  [" + "  ".join(c.rjust(width) for c in row) + "]")
        elif isinstance(v, dict):
            out.append(f"{pad}{key}:")
            _render(v, indent + 1, out)
        else:
            out.append(f"{pad}{key}: {v}")


def render_text(report: Report) -> str:
    lines = [
        f"hermsolve {report.version}: {' '.join(report.command)}",
        f"inputs digest: {report.inputs_digest}",
    ]
    _render(report.results, 0, lines)
    lines.append(f"exit code: {report.exit_code}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _global_flags(default: bool) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    kw = {} if default else {"default": argparse.SUPPRESS}
    p.add_argument("--output", choices=("json", "text"), **({"default": "text"} if default else kw))
    p.add_argument("--seed", type=int, **({"default": 0} if default else kw))
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hermsolve",
        description="Exact Hermitian solution analysis for AX = B and AXA* = B.",
        parents=[_global_flags(True)],
    )
    parser.add_argument("--version", action="version", version=f"hermsolve {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    flags = _global_flags(False)

    p = sub.add_parser("solve", parents=[flags], help="solvability certificate and one solution")
    p.add_argument("kind", choices=SOLVE_KINDS)
    p.add_argument("files", nargs=2, metavar="FILE", help="A.json B.json")
    p.add_argument("--param-file", help="free parameter U (or V) as a matrix file")
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("profile", parents=[flags], help="closed-form extremal rank/inertia")
    p.add_argument("kind", choices=tuple(PROFILE_FILES))
    p.add_argument("files", nargs="+", metavar="FILE")
    p.add_argument("--sign", choices=("plus", "minus"), default="minus", help="completion-psd sign")
    p.set_defaults(handler=cmd_profile)

    p = sub.add_parser("order", parents=[flags], help="decide an ordering statement")
    p.add_argument("kind", choices=tuple(ORDER_FILES))
    p.add_argument("files", nargs="+", metavar="FILE")
    p.add_argument("--relation", choices=RELATIONS, required=True)
    p.add_argument("--mode", choices=MODES, default="exists")
    p.add_argument("--split", type=int, help="row split m1 for the partition kind")
    p.set_defaults(handler=cmd_order)

    p = sub.add_parser("verify", parents=[flags], help="run the sampling oracle")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--max-dim", type=int, default=4)
    p.add_argument("--draws", type=int, default=200, help="parameter draws per envelope instance")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--counterexample", default="counterexample.json")
    p.add_argument("--replay", help="re-run a counterexample file")
    p.set_defaults(handler=cmd_verify)
    return parser


def _digest_params(args) -> dict:
    skip = {"handler", "output", "files", "param_file"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK

    handler: Callable = args.handler
    mats: dict[str, Matrix] = {}
    try:
        code, results, mats = handler(args)
    except Unsolvable as exc:
        code, results = EXIT_UNSOLVABLE, {"error": "unsolvable", "message": str(exc)}
    except UnsupportedQuery as exc:
        code, results = EXIT_UNSUPPORTED, {"error": "unsupported query", "message": str(exc)}
    except (RouteDisagreement, FormulaRangeError) as exc:
        code, results = EXIT_VERIFY, {"error": type(exc).__name__, "message": str(exc)}
    except (InputError, *INPUT_ERRORS) as exc:
        code, results = EXIT_INPUT, {"error": "input error", "message": str(exc)}

    report = Report(
        command=argv,
        inputs_digest=inputs_digest(mats, _digest_params(args)),
        results=results,
        exit_code=code,
    )
    stdout.write(report.to_json() if args.output == "json" else render_text(report))
    return code


def run() -> None:
    sys.exit(main())
