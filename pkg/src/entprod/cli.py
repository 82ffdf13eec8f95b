"""Command-line interface.

Subcommands::

    entprod evolve   sweep eps(t) of exp(-iHt) over a time grid (CSV)
    entprod thermal  sweep the thermal measure over an inverse-temperature grid
    entprod period   classify the two-qubit Ising measure as periodic or not
    entprod measure  evaluate the measure of an operator stored in a file

Exit codes: 0 success, 2 usage or parse error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import math
import operator
import sys
from dataclasses import dataclass

import numpy as np

from .errors import EntanglementError, TracelessOperator
from .linalg import INF, hermitian_eig
from .measure import (
    entanglement_production,
    evolutional_measure,
    normalize_log_base,
    thermal_measure_direct,
    thermal_measure_partition,
)
from .models import (
    Ising2Params,
    classify_periodicity,
    ising2_hamiltonian,
    ising2_measure_closed_form,
    ising_chain_hamiltonian,
    period_holds,
    period_is_minimal,
    random_hermitian,
)
from .opfile import read_operator_file
from .space import OperatorOnSpace, SpaceStructure

EXIT_USAGE = 2
EXIT_NUMERIC = 3
THERMAL_ROUTE_TOL = 1e-10
QUASI_PERIOD_CANDIDATES = 20

EVOLVE_COLUMNS = ["t", "epsilon", "norm_num", "norm_den", "closed_form", "abs_diff", "degenerate"]
THERMAL_COLUMNS = ["beta", "epsilon_direct", "epsilon_partition", "Z", "abs_diff"]


class UsageError(Exception):
    pass


class NumericFailure(Exception):
    pass


_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_NAMES = {"pi": math.pi, "e": math.e, "inf": math.inf}


def real_number(text: str) -> float:
    """Parse a real number; accepts arithmetic with ``pi`` and ``sqrt``, e.g. ``3*pi/4``."""

    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if (
            isinstance(node, ast.Call)
            and isinstance(node.func, ast.Name)
            and node.func.id == "sqrt"
            and len(node.args) == 1
            and not node.keywords
        ):
            return math.sqrt(ev(node.args[0]))
        raise ValueError(text)

    try:
        value = ev(ast.parse(text.strip(), mode="eval").body)
    except (SyntaxError, ValueError, ZeroDivisionError, OverflowError):
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from None
    if math.isnan(value):
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}")
    return value


def schatten_index(text: str) -> float:
    p = real_number(text)
    if p < 1:
        raise argparse.ArgumentTypeError(f"Schatten index must be >= 1, got {text!r}")
    return p


def dims_list(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not dims or any(d < 1 for d in dims):
        raise argparse.ArgumentTypeError(f"local dimensions must be positive, got {text!r}")
    return dims


def fmt(x) -> str:
    """Shortest round-trip decimal, ``NA`` for missing values."""
    if x is None:
        return "NA"
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def _json_value(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


@dataclass
class SweepSpec:
    model: str
    variable: str
    start: float
    stop: float
    points: int
    h: float = 0.0
    j: float = 0.0
    n: int = 2
    file: str | None = None
    dims: tuple[int, ...] = (2, 2)
    p: float = 2.0
    log_base: str = "e"
    seed: int | None = None
    units: str = "J"

    def grid(self) -> np.ndarray:
        if self.points < 1:
            raise UsageError("--points must be >= 1")
        if self.start > self.stop:
            raise UsageError("--start must not exceed --stop")
        if self.points == 1 and self.start != self.stop:
            raise UsageError("a single grid point requires --start == --stop")
        return np.linspace(self.start, self.stop, self.points)


def build_hamiltonian(spec: SweepSpec) -> OperatorOnSpace:
    if spec.model == "ising2":
        return ising2_hamiltonian(Ising2Params(spec.h, spec.j))
    if spec.model == "ising_chain":
        return ising_chain_hamiltonian(spec.n, spec.h, spec.j)
    if spec.model == "operator_file":
        if spec.file is None:
            raise UsageError("--model operator_file requires --file")
        return read_operator_file(spec.file)
    if spec.model == "random":
        if spec.seed is None:
            raise UsageError("--model random requires --seed")
        s = SpaceStructure(spec.dims)
        rng = np.random.default_rng(spec.seed)
        return OperatorOnSpace(random_hermitian(s.total_dim, rng), s)
    raise UsageError(f"unknown model {spec.model!r}")


def cmd_evolve(spec: SweepSpec) -> tuple[list[str], list[list]]:
    """Rows of ``eps(t)`` for ``exp(-iHt)``; degenerate points give ``NA``."""
    ham = build_hamiltonian(spec)
    eig = hermitian_eig(ham.matrix)
    params = Ising2Params(spec.h, spec.j) if spec.model == "ising2" else None
    scale = 1.0
    if params is not None and spec.units == "J" and spec.j != 0:
        scale = 1.0 / abs(spec.j)
    rows = []
    for t in spec.grid():
        t_abs = float(t) * scale
        row = [float(t), None, None, None, None, None, False]
        try:
            r = evolutional_measure(ham, t_abs, p=spec.p, log_base=spec.log_base, eig=eig)
            row[1:4] = [r.epsilon, r.norm_numerator, r.norm_denominator]
        except TracelessOperator:
            row[2] = 1.0 if spec.p == INF else ham.dim ** (1.0 / spec.p)
            row[6] = True
        except (EntanglementError, np.linalg.LinAlgError) as exc:
            raise NumericFailure(f"t={float(t)!r}: {exc}") from None
        if params is not None and spec.p == 2:
            try:
                row[4] = ising2_measure_closed_form(params, t_abs, spec.log_base)
            except TracelessOperator:
                row[6] = True
            if row[1] is not None and row[4] is not None:
                row[5] = abs(row[1] - row[4])
        rows.append(row)
    return EVOLVE_COLUMNS, rows


def cmd_thermal(spec: SweepSpec) -> tuple[list[str], list[list]]:
    ham = build_hamiltonian(spec)
    grid = spec.grid()
    if grid[0] < 0:
        raise UsageError("inverse temperatures must be >= 0")
    rows = []
    for beta in grid:
        try:
            d = thermal_measure_direct(ham, beta, spec.log_base)
            q = thermal_measure_partition(ham, beta, spec.log_base)
        except (EntanglementError, np.linalg.LinAlgError, ValueError, OverflowError) as exc:
            raise NumericFailure(f"beta={float(beta)!r}: {exc}") from None
        rows.append([float(beta), d.epsilon, q.epsilon, d.partition_function, abs(d.epsilon - q.epsilon)])
    return THERMAL_COLUMNS, rows


def cmd_period(h: float, j: float) -> dict:
    """Periodicity report for the two-qubit Ising measure."""
    params = Ising2Params(h, j)
    c = classify_periodicity(params)
    report = {"kind": c.kind, "period": None, "period_over_pi": None, "p": None, "q": None}
    if c.kind == "degenerate":
        report["verified"] = True
        report["minimal"] = None
        return report
    if c.kind == "periodic":
        p, q = c.p_over_q
        report.update(period=c.period, period_over_pi=c.period / math.pi, p=p, q=q)
        report["verified"] = period_holds(params, c.period)
        report["minimal"] = period_is_minimal(params, c.period)
    else:
        candidates = [k * math.pi for k in range(1, QUASI_PERIOD_CANDIDATES + 1)]
        report["verified"] = not any(period_holds(params, T) for T in candidates)
        report["minimal"] = None
    return report


def cmd_measure(path: str, p: float = 2.0, log_base="e") -> dict:
    op = read_operator_file(path)
    r = entanglement_production(op, p, log_base)
    tr = complex(np.trace(op.matrix))
    return {
        "epsilon": r.epsilon,
        "norm_num": r.norm_numerator,
        "norm_den": r.norm_denominator,
        "trace_re": tr.real,
        "trace_im": tr.imag,
        "p": r.p,
        "log_base": r.log_base,
    }


def render_table(columns, rows, form: str) -> str:
    if form == "json":
        records = [{c: _json_value(v) for c, v in zip(columns, row)} for row in rows]
        return json.dumps(records, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def render_report(report: dict, form: str) -> str:
    if form == "csv":
        return render_table(list(report), [list(report.values())], "csv")
    return json.dumps({k: _json_value(v) for k, v in report.items()}, indent=2) + "\n"


def _common(parser: argparse.ArgumentParser, default_format: str) -> None:
    parser.add_argument("--p", type=schatten_index, default=2.0, help="Schatten index (>= 1 or inf)")
    parser.add_argument("--log-base", choices=["e", "2", "10"], default="e")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--out", default="stdout", help="output path, or 'stdout'")
    parser.add_argument("--format", choices=["csv", "json"], default=default_format)


def _sweep_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", choices=["ising2", "ising_chain", "operator_file", "random"], default="ising2")
    parser.add_argument("--h", type=real_number, default=0.0, help="external field")
    parser.add_argument("--J", dest="j", type=real_number, default=0.0, help="interaction strength")
    parser.add_argument("--n", type=int, default=2, help="chain length for ising_chain")
    parser.add_argument("--file", help="Hamiltonian operator file for operator_file")
    parser.add_argument("--dims", type=dims_list, default=(2, 2), help="local dimensions for random, e.g. 2,3")
    parser.add_argument("--start", type=real_number, required=True)
    parser.add_argument("--stop", type=real_number, required=True)
    parser.add_argument("--points", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entprod", description="Entanglement production by operators.")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("evolve", help="sweep eps(t) of the evolution operator")
    _sweep_args(ev)
    ev.add_argument(
        "--units",
        choices=["J", "abs"],
        default="J",
        help="for ising2, grid times are in units of 1/|J| (default) or absolute",
    )
    _common(ev, "csv")

    th = sub.add_parser("thermal", help="sweep the thermal measure over beta")
    _sweep_args(th)
    _common(th, "csv")

    pe = sub.add_parser("period", help="periodicity of the two-qubit Ising measure")
    pe.add_argument("--h", type=real_number, required=True)
    pe.add_argument("--J", dest="j", type=real_number, required=True)
    _common(pe, "json")

    me = sub.add_parser("measure", help="measure of an operator read from a file")
    me.add_argument("file")
    _common(me, "json")
    return parser


def _spec(args, variable: str) -> SweepSpec:
    return SweepSpec(
        model=args.model,
        variable=variable,
        start=args.start,
        stop=args.stop,
        points=args.points,
        h=args.h,
        j=args.j,
        n=args.n,
        file=args.file,
        dims=args.dims,
        p=args.p,
        log_base=normalize_log_base(args.log_base),
        seed=args.seed,
        units=getattr(args, "units", "abs"),
    )


def run(args) -> tuple[str, str | None]:
    """Execute parsed arguments; returns the output text and an optional failure message."""
    if args.command == "evolve":
        spec = _spec(args, "time")
        if spec.model == "ising2" and spec.units == "J" and spec.j == 0:
            print("entprod: J = 0, grid times taken as absolute", file=sys.stderr)
        return render_table(*cmd_evolve(spec), args.format), None
    if args.command == "thermal":
        columns, rows = cmd_thermal(_spec(args, "beta"))
        text = render_table(columns, rows, args.format)
        bad = [r[0] for r in rows if not r[4] < THERMAL_ROUTE_TOL]
        failure = None
        if bad:
            failure = f"thermal routes disagree by >= {THERMAL_ROUTE_TOL} at beta={bad[0]!r}"
        return text, failure
    if args.command == "period":
        return render_report(cmd_period(args.h, args.j), args.format), None
    return render_report(cmd_measure(args.file, args.p, args.log_base), args.format), None


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, failure = run(args)
    except UsageError as exc:
        parser.error(str(exc))
    except TracelessOperator as exc:
        print(f"entprod: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except NumericFailure as exc:
        print(f"entprod: numerical failure at {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (EntanglementError, OSError) as exc:
        print(f"entprod: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out == "stdout":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    if failure:
        print(f"entprod: {failure}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
