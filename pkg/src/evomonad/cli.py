"""Command-line front end: ``simulate``, ``check``, ``list`` and ``parse``."""

from __future__ import annotations

import argparse
import math
import os
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, TextIO

from .catalog import default_registry
from .combinators import CompatibilityError, NonConvergent, NotPreDynamical
from .dsl import DslError, ElaborationError, elaborate, format_program, parse, parse_value
from .laws import EqConfig, GROUPS, ToleranceWarning, reports_to_json, reports_to_text, run_law_suite
from .spaces import STAR, Tagged, flatten

EXIT_OK, EXIT_LAW_FAILURE, EXIT_SPEC_ERROR, EXIT_RUNTIME_ERROR = 0, 1, 2, 3


@dataclass(frozen=True)
class SimConfig:
    step: float = 0.1
    horizon: float = 100.0
    precision: int = 6
    with_duration: bool = False

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("step must be positive")
        if not (0 < self.horizon < math.inf):
            raise ValueError("horizon must be finite and positive")
        if self.precision < 0:
            raise ValueError("precision must be non-negative")


def sample_times(dur: float, cfg: SimConfig) -> list[float]:
    """``0, step, 2 step, ...`` up to ``min(dur, horizon)``, always ending on that bound."""
    end = min(dur, cfg.horizon)
    slack = 1e-9 * cfg.step
    times = []
    i = 0
    while True:
        t = i * cfg.step
        if t > end + slack:
            break
        times.append(t)
        i += 1
    if end - times[-1] > slack:
        times.append(end)
    else:
        times[-1] = end
    return times


def _cell(v, precision: int) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int, float)):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.{precision}f}"
    if v is STAR:
        return "*"
    return str(v)


def _columns(v) -> list[tuple[str, object]]:
    if isinstance(v, (tuple, Tagged)):
        return flatten(v)
    return [("y", v)]


def simulation_csv(component, x, cfg: SimConfig) -> str:
    """Render the evolution ``component(x)`` as CSV text."""
    ev = component(x)
    times = sample_times(ev.dur, cfg)
    first = _columns(ev(times[0]))
    header = ["t"] + [name for name, _ in first]
    if cfg.with_duration:
        header.append("duration")
    dur_cell = _cell(ev.dur, cfg.precision)
    lines = [",".join(header)]
    for t in times:
        row = [_cell(t, cfg.precision)] + [_cell(v, cfg.precision) for _, v in _columns(ev(t))]
        if cfg.with_duration:
            row.append(dur_cell)
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _read_spec(spec: str) -> tuple[str, str]:
    """A spec argument is a file path when one exists, inline source otherwise."""
    path = Path(spec)
    try:
        if path.is_file():
            return str(path), path.read_text(encoding="utf-8")
    except OSError:
        pass
    return "<inline>", spec


def _diagnostic(name: str, source: str, err: Exception, err_out: TextIO) -> None:
    spans = [err.span] if isinstance(err, DslError) else list(getattr(err, "spans", ()))
    loc = f"{name}:{spans[0]}" if spans else name
    msg = err.message
    if isinstance(err, DslError) and err.expected:
        msg += f" (expected {', '.join(sorted(err.expected))})"
    if len(spans) > 1:
        msg += f" (operands at {' and '.join(str(s) for s in spans)})"
    print(f"{loc}: error: {msg}", file=err_out)
    lines = source.splitlines()
    for span in spans:
        if 1 <= span.line <= len(lines):
            text = lines[span.line - 1]
            width = max(1, min(span.end - span.start, len(text) - span.column + 1))
            print(f"  {text}", file=err_out)
            print("  " + " " * (span.column - 1) + "^" * width, file=err_out)


def _load(spec: str, err_out: TextIO):
    name, source = _read_spec(spec)
    try:
        prog = parse(source)
        return prog, elaborate(prog, default_registry())
    except (DslError, ElaborationError) as e:
        _diagnostic(name, source, e, err_out)
        return None


def cmd_simulate(args, out: TextIO, err_out: TextIO) -> int:
    try:
        cfg = SimConfig(args.step, args.horizon, args.precision, args.with_duration)
    except ValueError as e:
        print(f"error: {e}", file=err_out)
        return EXIT_SPEC_ERROR
    loaded = _load(args.spec, err_out)
    if loaded is None:
        return EXIT_SPEC_ERROR
    _, comp = loaded
    try:
        x = comp.input_space.coerce(parse_value(args.input))
    except ValueError as e:
        print(f"error: input {args.input!r} does not fit {comp.input_space}: {e}", file=err_out)
        return EXIT_SPEC_ERROR
    try:
        text = simulation_csv(comp, x, cfg)
    except (CompatibilityError, NonConvergent, NotPreDynamical) as e:
        print(f"runtime error: {type(e).__name__}: {e}", file=err_out)
        return EXIT_RUNTIME_ERROR
    out.write(text)
    return EXIT_OK


def cmd_check(args, out: TextIO, err_out: TextIO) -> int:
    only = None
    if args.only:
        only = [g.strip() for item in args.only for g in item.split(",") if g.strip()]
    try:
        cfg = EqConfig(seed=args.seed, tol=args.tol)
    except ValueError as e:
        print(f"error: {e}", file=err_out)
        return EXIT_SPEC_ERROR
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ToleranceWarning)
        try:
            reports = run_law_suite(cfg, only)
        except ValueError as e:
            print(f"error: {e}", file=err_out)
            return EXIT_SPEC_ERROR
    for w in caught:
        print(f"warning: {w.message}", file=err_out)
    out.write(reports_to_json(reports) if args.json else reports_to_text(reports))
    return EXIT_OK if all(not r.status == "fail" for r in reports) else EXIT_LAW_FAILURE


def cmd_list(args, out: TextIO, err_out: TextIO) -> int:
    out.write(default_registry().listing() + "\n")
    return EXIT_OK


def cmd_parse(args, out: TextIO, err_out: TextIO) -> int:
    loaded = _load(args.spec, err_out)
    if loaded is None:
        return EXIT_SPEC_ERROR
    prog, comp = loaded
    out.write(format_program(prog))
    out.write(f"-- {comp.input_space} -> {comp.output_space}\n")
    return EXIT_OK


def _default_seed() -> int:
    raw = os.environ.get("EVOMONAD_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"EVOMONAD_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="evomonad", description="Compose and simulate continuous-evolution components.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="sample a component's evolution as CSV")
    s.add_argument("spec", help="DSL file, or inline DSL source")
    s.add_argument("--input", required=True, help="input literal, e.g. 10, (0,0), (top,(1,2)), left(3)")
    s.add_argument("--step", type=float, default=0.1)
    s.add_argument("--horizon", type=float, default=100.0, help="cap for infinite evolutions")
    s.add_argument("--precision", type=int, default=6)
    s.add_argument("--with-duration", action="store_true", help="append the evolution's duration as a column")
    s.set_defaults(func=cmd_simulate)

    c = sub.add_parser("check", help="run the law suite")
    c.add_argument("--only", action="append", metavar="GROUP", help=f"restrict to groups: {', '.join(GROUPS)}")
    c.add_argument("--seed", type=int, default=None, help="RNG seed (default: $EVOMONAD_SEED or 0)")
    c.add_argument("--tol", type=float, default=1e-9)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_check)

    ls = sub.add_parser("list", help="list catalog primitives and liftable functions")
    ls.set_defaults(func=cmd_list)

    ps = sub.add_parser("parse", help="validate a spec and print its canonical form")
    ps.add_argument("spec")
    ps.set_defaults(func=cmd_parse)
    return p


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err_out: TextIO | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "seed", 0) is None:
        args.seed = _default_seed()
    return args.func(args, out or sys.stdout, err_out or sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
