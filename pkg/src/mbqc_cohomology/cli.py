"""Command-line front end.

Every command prints machine-readable ``:: key=value`` lines first and a
short human summary after them.  Exit codes: 0 success (whatever the
verdict), 1 usage, 2 parse error, 3 validation or guard failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import scenario_io
from .boolean import BooleanFunction, distance_to_linear, input_bits, is_bent, thm1_threshold, thm2_bound, walsh_spectrum
from .cocycle import class_representative, face_images, output_class, output_function
from .errors import ParseError, ValidationError
from .fraction import ncf_solve
from .gf2 import solve
from .library import iffy_classical_system, iffy_complex, iffy_conditional
from .mbqc import DeterministicTable, evaluate, run
from .witness import Contextual, decide, h2_dimension

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_INVALID = 0, 1, 2, 3


@dataclass
class Report:
    command: str
    values: list[tuple[str, object]] = field(default_factory=list)
    summary: list[str] = field(default_factory=list)

    def add(self, key: str, value) -> None:
        self.values.append((key, value))

    def say(self, line: str) -> None:
        self.summary.append(line)

    def render(self, fmt: str) -> str:
        if fmt == "json-lines":
            out = [json.dumps({"command": self.command, "key": k, "value": _fmt(v)}) for k, v in self.values]
            out += [json.dumps({"command": self.command, "text": s}) for s in self.summary]
        else:
            out = [f":: {k}={_fmt(v)}" for k, v in self.values] + self.summary
        return "\n".join(out) + "\n"


class CommandFailed(Exception):
    """A validation failure that still carries a partial report."""

    def __init__(self, report: Report, message: str):
        super().__init__(message)
        self.report = report


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(value.numerator)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ",".join(_fmt(v) for v in value)
    return str(value)


def _bits_text(bits) -> str:
    return "".join(str(b) for b in bits)


def _first(path: str, kind: str):
    for doc in scenario_io.load(path):
        if doc.kind == kind:
            return doc
    raise ParseError(f"{path} holds no {kind} document", 1, 1)


def cmd_witness(args) -> Report:
    doc = _first(args.path, "SCENARIO")
    rc = doc.relative()
    verdict = decide(rc)
    rep = Report("witness")
    rep.add("scenario", doc.name)
    rep.add("verdict", "contextual" if verdict.contextual else "noncontextual")
    rep.add("h2_dim", h2_dimension(rc))
    rep.add("edges", len(rc.edges))
    rep.add("faces", len(rc.faces))
    rep.add("beta_psi", str(rc.beta_psi))
    if isinstance(verdict, Contextual):
        faces = verdict.faces(rc)
        rep.add("certificate", faces)
        rep.say(f"{doc.name}: contextual; the faces {' + '.join(faces)} form a relative cycle on which beta_psi is 1.")
    else:
        rep.add("assignment", [f"{a}:{s}" for a, s in verdict.assignment.items()])
        rep.say(f"{doc.name}: non-contextual; the listed value assignment satisfies every face.")
    return rep


def _parse_input(text: str, m: int) -> tuple[int, ...]:
    if len(text) != m or any(c not in "01" for c in text):
        raise ValidationError(f"--input must be {m} bits, got {text!r}")
    return tuple(int(c) for c in text)


def cmd_simulate(args) -> Report:
    doc = _first(args.path, "MBQC")
    spec = doc.spec()
    inputs = [_parse_input(args.input, spec.m)] if args.input else [input_bits(i, spec.m) for i in range(1 << spec.m)]
    rep = Report("simulate")
    rep.add("mbqc", doc.name)
    rep.add("order", [i + 1 for i in spec.order])
    if args.exact:
        result = evaluate(spec)
        rep.add("deterministic", result.deterministic)
        full = {input_bits(i, spec.m): w for i, w in enumerate(result.weights)}
        for inp in inputs:
            weights = full[inp]
            for o in sorted(weights):
                rep.add(f"p[{_bits_text(inp)}->{_bits_text(o)}]", round(weights[o], 12))
        if isinstance(result, DeterministicTable):
            for r, f in enumerate(result.functions):
                rep.add(f"table[{r}]" if spec.k > 1 else "table", [f(inp) for inp in inputs])
            rep.say("deterministic: each input has one output with probability 1.")
        else:
            rep.say("not deterministic: some input has more than one possible output.")
        return rep
    import numpy as np

    seed = args.seed
    rng = np.random.default_rng(seed)
    rep.add("seed", seed)
    rep.add("runs", args.runs)
    for inp in inputs:
        counts: dict[tuple[int, ...], int] = {}
        for r in range(args.runs):
            rec = run(spec, inp, seed=seed, rng=rng)
            counts[rec.o] = counts.get(rec.o, 0) + 1
            if args.runs == 1:
                key = _bits_text(inp)
                rep.add(f"q[{key}]", _bits_text(rec.q))
                rep.add(f"s[{key}]", _bits_text(rec.s))
                rep.add(f"o[{key}]", _bits_text(rec.o))
                rep.add(f"prob[{key}]", round(rec.probability, 12))
        if args.runs > 1:
            for o in sorted(counts):
                rep.add(f"count[{_bits_text(inp)}->{_bits_text(o)}]", counts[o])
    rep.say(f"sampled {args.runs} run(s) per input with seed {seed}.")
    return rep


def cmd_classify(args) -> Report:
    doc = _first(args.path, "SCENARIO")
    rc = doc.relative()
    group = doc.input_group()
    if group is None or doc.ref_face is None:
        raise ValidationError("classify needs an INPUTGROUP and a REFFACE")
    f = output_function(rc, group, doc.ref_face)
    cls = output_class(rc, group, doc.ref_face)
    rep = Report("classify")
    rep.add("scenario", doc.name)
    rep.add("images", face_images(rc, group, doc.ref_face))
    rep.add("output", list(f.table))
    rep.add("output_hex", f.to_hex())
    rep.add("class_size", len(cls))
    rep.add("class", sorted(g.to_hex() for g in cls))
    rep.add("representative", class_representative(cls).to_hex())
    linear = any(distance_to_linear(g) == 0 for g in cls)
    rep.add("linear", linear)
    rep.say(f"output function {''.join(map(str, f.table))}; its gauge class has {len(cls)} members.")
    return rep


def cmd_fraction(args) -> Report:
    doc = _first(args.path, "MODEL")
    model = doc.model()
    res = ncf_solve(model)
    rep = Report("fraction")
    rep.add("model", doc.name)
    rep.add("ncf", res.value)
    rep.add("cf", 1 - res.value)
    rep.add("certified", res.certified)
    rep.add("approximate", model.approximate)
    rep.say(f"non-contextual fraction {_fmt(res.value)}, contextual fraction {_fmt(1 - res.value)}.")
    return rep


def cmd_iffy(args) -> Report:
    N = args.n
    rep = Report("iffy")
    rep.add("N", N)
    if args.conditional is not None:
        c1 = args.conditional
        rc = iffy_conditional(N, c1)
        verdict = decide(rc)
        A, b = iffy_classical_system(N, c1)
        rep.add("c1", c1)
        rep.add("faces", len(rc.faces))
        rep.add("beta_total", rc.evaluate(rc.surface()))
        rep.add("verdict", "contextual" if verdict.contextual else "noncontextual")
        rep.add("classical_solvable", solve(A, b) is not None)
        rep.say(f"conditional complex for c1={c1}: {'contextual' if verdict.contextual else 'non-contextual'}.")
        return rep
    rc = iffy_complex(N, allow_odd=True)
    closed = (rc.boundary @ rc.surface()).weight() == 0
    rep.add("faces", len(rc.faces))
    rep.add("boundary_zero", closed)
    if not closed:
        raise CommandFailed(rep, f"iffy({N}): the face sum has nonzero relative boundary (N must be even)")
    verdict = decide(rc)
    rep.add("beta_total", rc.evaluate(rc.surface()))
    rep.add("faces_beta1", rc.beta_psi.weight())
    rep.add("h2_dim", h2_dimension(rc))
    rep.add("verdict", "contextual" if verdict.contextual else "noncontextual")
    rep.say(f"iffy({N}): {rc.beta_psi.weight()} faces carry beta_psi = 1 and the closed surface evaluates to {rc.evaluate(rc.surface())}.")
    return rep


def cmd_bounds(args) -> Report:
    f = BooleanFunction.from_hex(args.function, args.arity)
    rep = Report("bounds")
    rep.add("m", f.m)
    rep.add("table", list(f.table))
    rep.add("walsh", walsh_spectrum(f))
    rep.add("d_linear", distance_to_linear(f, args.affine))
    rep.add("thm1", thm1_threshold(f, args.affine))
    if args.cf is not None:
        rep.add("cf", args.cf)
        rep.add("thm2", thm2_bound(f, args.cf, args.affine))
    if f.m % 2 == 0:
        rep.add("bent", is_bent(f))
    target = "affine" if args.affine else "linear"
    rep.say(f"distance {distance_to_linear(f, args.affine)} to the nearest {target} function over {1 << f.m} inputs.")
    return rep


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a fraction: {text!r}") from None


def _hex_arg(text: str) -> str:
    try:
        int(text, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a hex string: {text!r}") from None
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mbqc-cohomology", description="Cohomological contextuality tools for l2-MBQC.")
    parser.add_argument("--format", choices=("text", "json-lines"), default="text")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("witness", help="decide contextuality of a scenario file")
    p.add_argument("path")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("simulate", help="run an MBQC file")
    p.add_argument("path")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--input", help="input bits, first input leftmost")
    group.add_argument("--all", action="store_true", help="every input (default)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--exact", action="store_true", help="enumerate branches instead of sampling")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("classify", help="output function and gauge class of a scenario")
    p.add_argument("path")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("fraction", help="contextual fraction of a model file")
    p.add_argument("path")
    p.set_defaults(func=cmd_fraction)

    p = sub.add_parser("iffy", help="build and check the iffy complexes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--conditional", type=int, choices=(0, 1))
    p.set_defaults(func=cmd_iffy)

    p = sub.add_parser("bounds", help="success bounds for a target function")
    p.add_argument("--function", type=_hex_arg, required=True, help="little-endian hex truth table")
    p.add_argument("--arity", type=int)
    p.add_argument("--cf", type=_fraction_arg)
    p.add_argument("--affine", action="store_true")
    p.set_defaults(func=cmd_bounds)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "runs", 1) < 1:
        parser.error("--runs must be positive")
    if getattr(args, "n", 2) is not None and getattr(args, "n", 2) < 2:
        parser.error("--n must be at least 2")
    try:
        rep = args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CommandFailed as exc:
        sys.stdout.write(exc.report.render(args.format))
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValidationError as exc:
        print(f"validation error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        if args.command == "bounds":
            parser.error(str(exc))
        raise
    sys.stdout.write(rep.render(args.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
