"""Command-line interface.

Subcommands: ``validate``, ``check``, ``sweep``, ``project``, ``fixtures``,
``export-dot``.  Models are given as file paths or as ``fixture:<name>``
for the bundled examples.  Exit codes: 0 success, 1 usage error, 2 model or
formula error, 3 engine failure; with ``--verdict-exit``, a successful
check exits 10, 11 or 12 for T, F and ?.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict
from pathlib import Path

from .engine import (
    EngineConfig,
    check_all_states,
    sweep_theta,
)
from .errors import (
    ConvergenceError,
    EvaluationError,
    FormulaSyntaxError,
    HorizonError,
    InvalidModelError,
    ModelFormatError,
    QmcheckError,
)
from .formula import parse_formula, parse_path_formula
from .model import QDtmc, project_lower, project_upper, validate
from .modelio import (
    ResultDocument,
    fixture,
    fixture_names,
    parse_model,
    render_model,
    sweep_csv,
    to_dot,
)
from .oracle import DEFAULT_HORIZON, check_direct
from .tri import Tri

VERDICT_EXIT = {Tri.T: 10, Tri.F: 11, Tri.U: 12}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 instead of argparse's default 2
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qmcheck",
                description="Three-valued probabilistic model checking over "
                            "Markov chains with unknown labels.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check a model's invariants")
    v.add_argument("model", help="model path or fixture:<name>")

    c = sub.add_parser("check", help="decide a formula at the initial state")
    c.add_argument("model")
    c.add_argument("-f", "--formula", required=True, help="state formula text")
    c.add_argument("--engine", choices=("qmc", "oracle"), default="qmc")
    c.add_argument("--mode", choices=("spec", "strict-f"), default="spec",
                   help="verdict policy at exact threshold boundaries")
    c.add_argument("--all-states", action="store_true",
                   help="print a verdict for every state")
    c.add_argument("--json", action="store_true", help="emit a JSON document")
    c.add_argument("--horizon", type=int, default=DEFAULT_HORIZON,
                   help="enumeration depth for the oracle engine")
    c.add_argument("--verdict-exit", action="store_true",
                   help="exit 10/11/12 for T/F/?")

    s = sub.add_parser("sweep", help="sweep thresholds over one path formula")
    s.add_argument("model")
    s.add_argument("--path", required=True, help="path formula text")
    s.add_argument("--thetas", required=True,
                   help="comma list (0.1,0.2) or range a:b:step")
    s.add_argument("--mode", choices=("spec", "strict-f"), default="spec")
    s.add_argument("--csv", action="store_true", help="emit a theta,verdict table")
    s.add_argument("--json", action="store_true", help="emit a JSON document")

    pr = sub.add_parser("project", help="write a binary projection of a model")
    pr.add_argument("model")
    pr.add_argument("--direction", choices=("lower", "upper"), required=True)
    pr.add_argument("-o", "--output", help="output path (default stdout)")

    fx = sub.add_parser("fixtures", help="list or export the bundled models")
    g = fx.add_mutually_exclusive_group(required=True)
    g.add_argument("--list", action="store_true")
    g.add_argument("--emit", metavar="NAME")
    fx.add_argument("-o", "--output", default=".", help="directory for --emit")

    d = sub.add_parser("export-dot", help="write the state graph as Graphviz")
    d.add_argument("model")
    d.add_argument("-o", "--output", help="output path (default stdout)")
    return p


def _load_model(source: str) -> QDtmc:
    if source.startswith("fixture:"):
        name = source.split(":", 1)[1]
        try:
            return fixture(name)
        except KeyError as exc:
            raise ModelFormatError([str(exc.args[0])]) from None
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise ModelFormatError([f"cannot read {source}: {exc.strerror}"]) from None
    return parse_model(text)


def _parse_thetas(spec: str) -> list[float]:
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise _UsageError(f"bad theta range {spec!r}; expected a:b:step")
        try:
            a, b, step = (float(x) for x in parts)
        except ValueError:
            raise _UsageError(f"bad theta range {spec!r}") from None
        if step <= 0 or b < a:
            raise _UsageError(f"bad theta range {spec!r}")
        count = int(round((b - a) / step)) + 1
        return [round(a + i * step, 10) for i in range(count)]
    try:
        return [float(x) for x in spec.split(",") if x.strip()]
    except ValueError:
        raise _UsageError(f"bad theta list {spec!r}") from None


def _write(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
        print(output)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"qmcheck: {exc}", file=sys.stderr)
        return 1
    try:
        return _dispatch(args)
    except _UsageError as exc:
        print(f"qmcheck: {exc}", file=sys.stderr)
        return 1
    except (ModelFormatError, InvalidModelError, FormulaSyntaxError,
            EvaluationError) as exc:
        print(f"qmcheck: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceError, HorizonError) as exc:
        print(f"qmcheck: {exc}", file=sys.stderr)
        return 3
    except QmcheckError as exc:
        print(f"qmcheck: {exc}", file=sys.stderr)
        return 3


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "validate":
        return _cmd_validate(args)
    if args.command == "check":
        return _cmd_check(args)
    if args.command == "sweep":
        return _cmd_sweep(args)
    if args.command == "project":
        return _cmd_project(args)
    if args.command == "fixtures":
        return _cmd_fixtures(args)
    if args.command == "export-dot":
        return _cmd_export_dot(args)
    raise _UsageError(f"unknown command {args.command!r}")


def _cmd_validate(args) -> int:
    m = _load_model(args.model)
    issues = validate(m)
    if issues:
        for issue in issues:
            print(issue, file=sys.stderr)
        return 2
    print(f"ok: {m.n} states, {len(m.aps)} propositions")
    return 0


def _cmd_check(args) -> int:
    m = _load_model(args.model)
    _require_valid_or_report(m)
    f = parse_formula(args.formula)
    if args.engine == "qmc":
        verdict = check_all_states(m, f, EngineConfig(boundary_mode=args.mode))
        evidence = [_engine_evidence_dict(e, m.init) for e in verdict.evidence]
    else:
        verdict = check_direct(m, f, horizon=args.horizon, boundary_mode=args.mode)
        evidence = [_oracle_evidence_dict(e, m.init) for e in verdict.evidence]

    if args.json:
        doc = ResultDocument(
            command="check",
            model=args.model,
            formula=args.formula,
            engine=args.engine,
            mode=args.mode,
            init=m.init,
            verdict=str(verdict.at_init),
            per_state=tuple(str(v) for v in verdict.per_state),
            evidence=tuple(evidence),
            horizon=args.horizon if args.engine == "oracle" else None,
        )
        print(doc.to_json())
    elif args.all_states:
        for s, v in enumerate(verdict.per_state):
            print(f"s{s} {v}")
    else:
        print(verdict.at_init)
    if args.verdict_exit:
        return VERDICT_EXIT[verdict.at_init]
    return 0


def _cmd_sweep(args) -> int:
    m = _load_model(args.model)
    _require_valid_or_report(m)
    path = parse_path_formula(args.path)
    thetas = _parse_thetas(args.thetas)
    result = sweep_theta(m, path, thetas, EngineConfig(boundary_mode=args.mode))
    if args.json:
        doc = ResultDocument(
            command="sweep",
            model=args.model,
            formula=args.path,
            engine="qmc",
            mode=args.mode,
            init=m.init,
            rows=tuple((theta, str(v)) for theta, v in result.rows),
            evidence=tuple(_engine_evidence_dict(e, m.init) for e in result.evidence),
        )
        print(doc.to_json())
    elif args.csv:
        sys.stdout.write(sweep_csv(result.rows))
    else:
        print(",".join(str(v) for _, v in result.rows))
    return 0


def _cmd_project(args) -> int:
    m = _load_model(args.model)
    _require_valid_or_report(m)
    projected = project_lower(m) if args.direction == "lower" else project_upper(m)
    _write(render_model(projected), args.output)
    return 0


def _cmd_fixtures(args) -> int:
    if args.list:
        for name in fixture_names():
            print(name)
        return 0
    name = args.emit
    try:
        text = render_model(fixture(name))
    except KeyError as exc:
        raise ModelFormatError([str(exc.args[0])]) from None
    out = Path(args.output) / f"{name}.qdtmc"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    print(str(out))
    return 0


def _cmd_export_dot(args) -> int:
    m = _load_model(args.model)
    _require_valid_or_report(m)
    _write(to_dot(m), args.output)
    return 0


def _require_valid_or_report(m: QDtmc) -> None:
    issues = validate(m)
    if issues:
        raise InvalidModelError(issues)


def _engine_evidence_dict(e, init: int) -> dict:
    return {
        "formula": e.formula,
        "alias": e.alias,
        "lower": list(e.lower),
        "upper": list(e.upper),
        "lower_at_init": e.lower[init],
        "upper_at_init": e.upper[init],
        "upper_f_at_init": 1.0 - e.upper[init],
    }


def _oracle_evidence_dict(e, init: int) -> dict:
    return {
        "formula": e.formula,
        "measures": [asdict(ms) for ms in e.measures],
        "at_init": asdict(e.measures[init]),
    }


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
