"""Command-line driver: ``hori-dgca <file> <command> [options]``.

Exit status is 0 when every check passes and 1 when some check fails.
Bad input or bad arguments give 2.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Sequence

from .algebra import AlgebraError, GradedElement
from .dsl import DslError, Model, Name, elaborate, evaluate, parse_document, parse_expression
from .laurent import GradedHori, xi_derivative
from .qseries import QPair, QSeries, hori_on_qpairs, transported_hori, with_symbols
from .sampling import random_laurent
from .tduality import TDualityConfig, build_gerbe_tower
from .verify import run_suite

SCHEMA = 1
COMMANDS = ("check", "tower", "hori", "compose-check", "q-hori", "verify-all", "run")

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    """Bad command arguments or references; reported with exit status 2."""


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hori-dgca", description=__doc__.splitlines()[0])
    p.add_argument("file", help="document to load")
    p.add_argument("command", choices=COMMANDS)
    _add_options(p)
    return p


def _add_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", action="store_true", help="emit a JSON report")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--truncation", type=int, default=20, help="top q-exponent kept")
    p.add_argument("--config", default=None, help="config name (default: last declared)")
    p.add_argument("--dir", choices=("LR", "RL"), default="LR")
    p.add_argument("--element", default=None)
    p.add_argument("--pair", default=None, help="QPair JSON file for q-hori")
    p.add_argument("--samples", type=int, default=50, help="random cases for compose-check")


def _command_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="run", add_help=False, exit_on_error=False)
    p.add_argument("command", choices=[c for c in COMMANDS if c != "run"])
    _add_options(p)
    return p


# -- commands --------------------------------------------------------------

def _config(model: Model, args) -> TDualityConfig:
    try:
        return model.config(args.config)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None


ROLES = ("C", "A", "A_L", "A_R", "A_LR", "G_L", "G_R", "G_L_ext", "G_R_ext")


def _algebras(tower) -> list[dict]:
    return [{"role": role, "name": X.name, "presentation": X.describe()}
            for role, X in zip(ROLES, tower.algebras())]


def cmd_check(model: Model, args) -> dict:
    cfg = _config(model, args)
    tower = build_gerbe_tower(cfg)
    reports = tower.verify()
    return {
        "command": "check",
        "config": cfg.name,
        "algebras": _algebras(tower),
        "reports": [r.to_dict() for r in reports],
        "passed": all(r.passed for r in reports),
    }


def cmd_tower(model: Model, args) -> dict:
    cfg = _config(model, args)
    tower = build_gerbe_tower(cfg)
    return {
        "command": "tower",
        "config": cfg.name,
        "algebras": _algebras(tower),
        "morphisms": {k: {g: str(v) for g, v in m.images.items()} for k, m in tower.morphisms.items()},
        "passed": True,
    }


def _element(model: Model, args, ctx):
    if args.element is None:
        raise UsageError("--element is required")
    try:
        return model.element_in(args.element, ctx)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None


def cmd_hori(model: Model, args) -> dict:
    h = GradedHori(build_gerbe_tower(_config(model, args)))
    if args.dir == "LR":
        w = _element(model, args, h.hat_G_L)
        out = h.hori_LR(w)
    else:
        w = _element(model, args, h.hat_G_R)
        out = h.hori_RL(w)
    return {"command": "hori", "direction": args.dir, "element": args.element,
            "input": str(w), "output": str(out), "shift": out.shift, "passed": True}


def cmd_compose_check(model: Model, args) -> dict:
    """Both composition identities on random elements, or one on a named element.

    A named element is read on the side given by ``--dir``.
    """
    h = GradedHori(build_gerbe_tower(_config(model, args)))
    identities = {
        "LR": ("T_RL∘T_LR = d/dxi2L", h.hat_G_L, h.hori_LR, h.hori_RL),
        "RL": ("T_LR∘T_RL = d/dxi2R", h.hat_G_R, h.hori_RL, h.hori_LR),
    }
    if args.element is not None:
        label, ctx, first, second = identities[args.dir]
        plan = [(label, [_element(model, args, ctx)], first, second)]
    else:
        rng = random.Random(args.seed)
        plan = []
        for label, ctx, first, second in identities.values():
            plan.append((label, [random_laurent(ctx, rng) for _ in range(args.samples)], first, second))
    results = []
    for label, cases, first, second in plan:
        witness = None
        for w in cases:
            got = second(first(w))
            if got != xi_derivative(w) or got.shift != w.shift - 2:
                witness = str(w)
                break
        entry = {"identity": label, "cases": len(cases), "status": "fail" if witness else "pass"}
        if witness:
            entry["witness"] = witness
        results.append(entry)
    return {"command": "compose-check", "seed": None if args.element else args.seed,
            "identities": results, "passed": all(r["status"] == "pass" for r in results)}


def load_qpair(path: str | Path, A0, truncation: int | None = None) -> QPair:
    """Read a QPair file; coefficients are expressions over ``A0`` plus the listed symbols."""
    data = json.loads(Path(path).read_text())
    ring = with_symbols(A0, data.get("symbols", []))

    def lookup(n: Name) -> GradedElement:
        if n.id not in ring.signature:
            raise UsageError(f"unknown identifier '{n.id}' in {path}")
        return ring.gen(n.id)

    def series(d: dict) -> QSeries:
        coeffs = {int(k): ring.element(evaluate(parse_expression(v), lookup))
                  for k, v in d.get("coeffs", {}).items()}
        order = int(d["N"])
        if truncation is not None:
            order = min(order, truncation)
        return QSeries(ring, coeffs, order, int(d["degree"]))

    return QPair(series(data["first"]), series(data["second"]))


def cmd_q_hori(model: Model, args) -> dict:
    if args.pair is None:
        raise UsageError("--pair FILE is required")
    cfg = _config(model, args)
    p = load_qpair(args.pair, cfg.target, args.truncation)
    A0 = p.first.ring
    sig = A0.signature
    lifted = TDualityConfig(A0, cfg.fxL.to(sig), cfg.fxR.to(sig), cfg.fy.to(sig), cfg.name)
    direct = hori_on_qpairs(p)
    agreement = {}
    for direction in ("LR", "RL"):
        got = transported_hori(p, lifted, direction)
        agreement[direction] = "pass" if got.agrees_with(direct) else "fail"
    return {"command": "q-hori", "input": p.to_dict(), "output": direct.to_dict(),
            "transported": agreement, "passed": all(v == "pass" for v in agreement.values())}


def cmd_verify_all(model: Model, args) -> dict:
    result = run_suite(seed=args.seed, truncation=args.truncation)
    return {"command": "verify-all", "seed": args.seed, "truncation": args.truncation,
            "reports": [r.to_dict() for r in result.reports], "passed": result.passed}


HANDLERS = {
    "check": cmd_check,
    "tower": cmd_tower,
    "hori": cmd_hori,
    "compose-check": cmd_compose_check,
    "q-hori": cmd_q_hori,
    "verify-all": cmd_verify_all,
}


def cmd_run(model: Model, args) -> dict:
    """Execute the ``run`` statements of the document in order."""
    parser = _command_parser()
    results = []
    for c in model.commands:
        try:
            sub = parser.parse_args([c.name, *c.args])
        except (argparse.ArgumentError, SystemExit) as exc:
            raise UsageError(f"bad run statement at line {c.span.line}: {exc}") from None
        if sub.seed == 0 and args.seed:
            sub.seed = args.seed
        results.append(HANDLERS[sub.command](model, sub))
    return {"command": "run", "results": results, "passed": all(r["passed"] for r in results)}


HANDLERS["run"] = cmd_run


# -- output ----------------------------------------------------------------

def render_text(report: dict) -> str:
    cmd = report["command"]
    lines: list[str] = []
    if cmd in ("check", "tower"):
        lines.append(f"config {report['config']}: {len(report['algebras'])} algebras")
        for a in report["algebras"]:
            lines.append(f"[{a['role']}]")
            lines.extend(a["presentation"])
        for name, images in report.get("morphisms", {}).items():
            inner = ", ".join(f"{g} -> {v}" for g, v in images.items())
            lines.append(f"{name}: {inner}")
        for r in report.get("reports", []):
            line = f"{r['status'].upper():4} {r['check']} [{r['algebra']}]"
            if "witness" in r:
                line += f" witness={r['witness']}"
            lines.append(line)
    elif cmd == "hori":
        lines.append(report["output"])
    elif cmd == "compose-check":
        for r in report["identities"]:
            line = f"{r['status'].upper():4} {r['identity']} ({r['cases']} cases)"
            if "witness" in r:
                line += f" witness={r['witness']}"
            lines.append(line)
    elif cmd == "q-hori":
        lines.append("first:  " + _series_text(report["output"]["first"]))
        lines.append("second: " + _series_text(report["output"]["second"]))
        for d, s in report["transported"].items():
            lines.append(f"{s.upper():4} transported {d} agrees with (0 1; -q d/dq 0)")
    elif cmd == "verify-all":
        for r in report["reports"]:
            line = f"{r['status'].upper():4} {r['check']} [{r['algebra']}]"
            if "detail" in r:
                line += f" ({r['detail']})"
            if "witness" in r:
                line += f" witness={r['witness']}"
            lines.append(line)
    elif cmd == "run":
        for sub in report["results"]:
            lines.append(f"== {sub['command']}")
            lines.append(render_text(sub))
    if cmd != "hori":
        lines.append("all checks passed" if report["passed"] else "some checks FAILED")
    return "\n".join(lines)


def _series_text(d: dict) -> str:
    terms = [f"({c})*q^{n}" for n, c in d["coeffs"].items()]
    terms.append(f"O(q^{d['N'] + 1})")
    return " + ".join(terms)


def to_json(report: dict) -> str:
    return json.dumps({"schema": SCHEMA, **report}, sort_keys=True, indent=2, ensure_ascii=False)


def load_model(path: str | Path) -> Model:
    return elaborate(parse_document(Path(path).read_text(encoding="utf-8")))


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        model = load_model(args.file)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except DslError as exc:
        if args.json:
            print(json.dumps({"schema": SCHEMA, "diagnostics": [d.to_dict() for d in exc.diagnostics]},
                             sort_keys=True, indent=2))
        for d in exc.diagnostics:
            print(f"{args.file}:{d}", file=sys.stderr)
        return EXIT_ERROR
    try:
        report = HANDLERS[args.command](model, args)
    except (UsageError, DslError, AlgebraError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(to_json(report) if args.json else render_text(report))
    return EXIT_OK if report["passed"] else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
