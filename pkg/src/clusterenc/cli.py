"""Command-line front end.

Exit codes: 0 success or pass, 1 verification failure, 2 usage or input error.
Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from .codes import augment, format_graph_code, logical_operators, standard_form
from .graphs import format_graph, parse_graph
from .lattice import compile_graph, metrics, parse, serialize
from .runtime import (
    EncodingJob,
    encode_state,
    execute,
    verify_execution,
    verify_shots,
)
from .symplectic import CheckMatrix, ParseError, parse_check_matrix
from .tableau import OutcomeSource, ScriptContradiction, ScriptExhausted, Tableau

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"{path}: {e.strerror}") from None


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _code(path: str) -> CheckMatrix:
    return parse_check_matrix(_read(path), path)


def _script(arg: str) -> list[int]:
    text = _read(arg) if Path(arg).is_file() else arg
    bits = [c for c in text if not c.isspace() and c != ","]
    if any(c not in "01" for c in bits):
        raise UsageError("--script takes a string of 0/1 bits or a file containing one")
    return [int(c) for c in bits]


def cmd_convert(args) -> int:
    gc, circuit = standard_form(_code(args.code))
    _write(format_graph_code(gc, circuit), args.output)
    return EXIT_OK


def cmd_graph(args) -> int:
    gc, _ = standard_form(_code(args.code))
    aug = augment(gc, logical_operators(gc))
    _write(aug.to_dot() if args.dot else format_graph(aug.graph()), args.output)
    return EXIT_OK


def cmd_compile(args) -> int:
    g = parse_graph(_read(args.graph), args.graph)
    if len(g) == 0:
        raise UsageError(f"{args.graph}: graph has no vertices")
    _write(serialize(compile_graph(g, compact=args.compact)), args.output)
    return EXIT_OK


def _source(args) -> OutcomeSource:
    if args.script is not None:
        return OutcomeSource.forced(_script(args.script))
    return OutcomeSource.seeded(args.seed)


def cmd_run(args) -> int:
    p = parse(_read(args.pattern), args.pattern)
    _write(execute(p, _source(args)).dump(), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    p = parse(_read(args.pattern), args.pattern)
    g = parse_graph(_read(args.graph), args.graph)
    if len(g) != len(p.outputs):
        raise UsageError(f"pattern has {len(p.outputs)} outputs, graph has {len(g)} vertices")
    if args.script is not None:
        trace = execute(p, _source(args), restrict=False)
        results = [verify_execution(p, trace.lattice_state, g)]
    else:
        seeds = [args.seed + i for i in range(args.shots)]
        if any(op.flip for _, op in p.ops()):
            results = [verify_execution(p, execute(p, OutcomeSource.seeded(s), restrict=False).lattice_state, g)
                       for s in seeds]
        else:
            results = verify_shots(p, g, seeds)
    passed = sum(results)
    print(f"{'pass' if passed == len(results) else 'fail'} {passed}/{len(results)}")
    return EXIT_OK if passed == len(results) else EXIT_FAIL


def cmd_encode(args) -> int:
    code = _code(args.code)
    st = parse_check_matrix(_read(args.state), args.state)
    if st.d != st.n:
        raise UsageError(f"{args.state}: input state needs as many generators as qubits")
    state = Tableau.from_stabilizers(st.generators())
    out = encode_state(EncodingJob(code, state, args.seed), resource=args.resource)
    _write(out.check_matrix_text(), args.output)
    return EXIT_OK


def cmd_stats(args) -> int:
    m = metrics(parse(_read(args.pattern), args.pattern))
    print(f"measurements={m.measurements}")
    print(f"rounds={m.rounds}")
    print(f"area={m.area}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="clusterenc", description="stabilizer code to cluster-state pattern compiler")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="check matrix -> graph code and local circuit")
    p.add_argument("code")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("graph", help="check matrix -> augmented graph with input nodes")
    p.add_argument("code")
    p.add_argument("--dot", action="store_true", help="emit DOT instead of the graph text format")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("compile", help="graph -> measurement pattern")
    p.add_argument("graph")
    p.add_argument("--compact", action="store_true", help="lay out only rows for non-matching vertices")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_compile)

    for name, func, hlp in (("run", cmd_run, "execute a pattern and dump the trace"),
                            ("verify", cmd_verify, "execute a pattern and check it against a graph")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("pattern")
        if name == "verify":
            p.add_argument("graph")
            p.add_argument("--shots", type=int, default=1)
        g = p.add_mutually_exclusive_group()
        g.add_argument("--seed", type=int, default=0)
        g.add_argument("--script", help="outcome bits, inline or as a file")
        if name == "run":
            p.add_argument("-o", "--output")
        p.set_defaults(func=func)

    p = sub.add_parser("encode", help="teleport a stabilizer input state into a code")
    p.add_argument("code")
    p.add_argument("state", help="check-matrix file with k generators on k qubits")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--resource", choices=("direct", "pattern"), default="direct")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("stats", help="pattern metrics as key=value lines")
    p.add_argument("pattern")
    p.set_defaults(func=cmd_stats)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (ParseError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ScriptContradiction, ScriptExhausted, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
