"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 invalid configuration,
3 resource cap exceeded, 4 a ``verify`` check failed.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from .derivation import fixed_components
from .field import GF, QQ, field_from_descriptor
from .graded import (ResourceLimitExceeded, boundary_invariants, discover_generators,
                     discover_relations, invariant_basis)
from .model import (ClassSyntaxError, ConfigError, ConfigSpec, build_model, degree_of_variable,
                    format_class, parse_class)
from .serialize import (basis_to_json, class_to_json, component_to_json, generator_to_json,
                        poly_to_json, relation_text, relation_to_json)
from .verify import default_verify_weight, run_checks

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_RESOURCE, EXIT_VERIFY = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _line_of(text: str, key: str) -> int:
    mt = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, mt.start()) + 1 if mt else 1


def load_config(path) -> ConfigSpec:
    """Read and validate a JSON configuration file (raises ``ConfigError``)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}:1: top level must be a JSON object")

    def fail(key, msg):
        raise ConfigError(f"{path}:{_line_of(text, key)}: {msg}")

    kind = doc.get("kind")
    if kind not in ("m0n", "linear"):
        fail("kind", f'"kind" must be "m0n" or "linear", got {kind!r}')
    try:
        fld = field_from_descriptor(doc.get("field", "Q"))
    except ValueError as exc:
        fail("field", str(exc))
    allowed = {"kind", "field"} | ({"n"} if kind == "m0n" else {"r", "subspaces"})
    for key in doc:
        if key not in allowed:
            fail(key, f"unexpected key {key!r} for kind {kind!r}")
    if kind == "m0n":
        n = doc.get("n")
        if isinstance(n, bool) or not isinstance(n, int):
            fail("n", '"n" must be an integer')
        spec = ConfigSpec("m0n", n=n, field=fld)
        if n < 5:
            fail("n", f"m0n requires n >= 5, got n = {n}")
        return spec
    subs = doc.get("subspaces")
    if not isinstance(subs, list) or not subs:
        fail("subspaces", '"subspaces" must be a nonempty array')
    blocks = []
    for i, sub in enumerate(subs, 1):
        if not isinstance(sub, dict) or set(sub) != {"points"} or not isinstance(sub["points"], list):
            fail("subspaces", f'subspace {i} must be an object {{"points": [...]}}')
        pts = []
        for pt in sub["points"]:
            if not isinstance(pt, list) or not all(isinstance(v, (int, str)) and not isinstance(v, bool)
                                                   for v in pt):
                fail("points", f"subspace {i}: points are arrays of integers or \"p/q\" strings")
            pts.append(tuple(pt))
        blocks.append(tuple(pts))
    try:
        spec = ConfigSpec("linear", r=doc.get("r"), subspaces=tuple(blocks), field=fld)
        build_model(spec)
    except ConfigError as exc:
        msg = str(exc)
        mt = re.search(r"subspace (\d+)", msg)
        if mt:
            hits = [x.start() for x in re.finditer(r'"points"\s*:', text)]
            k = int(mt.group(1)) - 1
            if k < len(hits):
                raise ConfigError(f"{path}:{text.count(chr(10), 0, hits[k]) + 1}: {msg}") from None
        fail("r" if "dimension" in msg else "subspaces", msg)
    return spec


# -- output helpers ------------------------------------------------------------

def _emit(args, payload: dict, tsv_lines: list[str]):
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        sys.stdout.write("\n".join(tsv_lines) + "\n")


def _cmd_model(model, args):
    info = model.describe()
    lines = [f"kind\t{model.kind}", f"field\t{model.field!r}"]
    if model.n is not None:
        lines.append(f"n\t{model.n}")
    if model.r is not None:
        lines.append(f"r\t{model.r}")
    lines += [f"m\t{model.m}", f"E\t{model.E}", f"t\t{model.t}", f"variables\t{model.nvars}",
              f"pic_rank\t{model.pic_rank}", f"shift_class\t{info['shift_class']}"]
    for k, row in enumerate(model.derivations):
        lines.append(f"derivation\t{k + 1}\t" + " ".join(str(v) for v in row))
    lines.append("variable\tweight\tclass")
    for v, name in enumerate(model.names):
        lines.append(f"{name}\t{model.weights[v]}\t{format_class(degree_of_variable(model, v), model)}")
    info["classes"] = {name: format_class(degree_of_variable(model, v), model)
                       for v, name in enumerate(model.names)}
    _emit(args, info, lines)


def _cmd_dim(model, args):
    d = parse_class(args.cls, model)
    basis = invariant_basis(model, d, max_piece=args.max_piece)
    payload = basis_to_json(basis, model, with_basis=args.basis)
    lines = [f"class\t{format_class(d, model)}", f"weight\t{basis.piece.weight}",
             f"piece_dim\t{len(basis.piece)}", f"invariant_dim\t{basis.dimension}",
             f"effective\t{'true' if basis.dimension else 'false'}"]
    if args.basis:
        lines += [f"basis\t{model.fmt(f)}" for f in basis.polynomials]
    _emit(args, payload, lines)


def _generator_lines(model, gens):
    lines = ["index\tweight\tclass\tpolynomial"]
    lines += [f"g{g.index}\t{g.weight}\t{format_class(g.cls, model)}\t{model.fmt(g.polynomial)}" for g in gens]
    return lines


def _cmd_generators(model, args):
    gens = discover_generators(model, args.max_weight, max_piece=args.max_piece, jobs=args.jobs)
    payload = {"max_weight": args.max_weight, "count": len(gens),
               "generators": [generator_to_json(g, model) for g in gens]}
    _emit(args, payload, [f"count\t{len(gens)}"] + _generator_lines(model, gens))


def _cmd_relations(model, args):
    gens = discover_generators(model, args.max_weight, max_piece=args.max_piece, jobs=args.jobs)
    rels = discover_relations(model, args.max_weight, gens, max_piece=args.max_piece, jobs=args.jobs)
    payload = {"max_weight": args.max_weight,
               "generators": [generator_to_json(g, model) for g in gens],
               "count": len(rels), "relations": [relation_to_json(r, model) for r in rels]}
    lines = _generator_lines(model, gens) + [f"count\t{len(rels)}", "index\tweight\tclass\trelation"]
    lines += [f"r{r.index}\t{r.weight}\t{format_class(r.cls, model)}\t{relation_text(r, model.field)}"
              for r in rels]
    _emit(args, payload, lines)


def _cmd_boundary(model, args):
    if model.kind != "m0n":
        raise UsageError("boundary is only defined for m0n configurations")
    items = boundary_invariants(model)
    payload = {"count": len(items),
               "boundary": [{"class": class_to_json(d, model), "polynomial": poly_to_json(f, model)}
                            for d, f in items]}
    lines = [f"count\t{len(items)}", "class\tpolynomial"]
    lines += [f"{format_class(d, model)}\t{model.fmt(f)}" for d, f in items]
    _emit(args, payload, lines)


def _cmd_fixed(model, args):
    if model.t == 0:
        raise UsageError("toric passthrough (t = 0): no additive action, no fixed-locus analysis")
    comps = fixed_components(model)
    payload = {"count": len(comps), "components": [component_to_json(c, model) for c in comps]}
    lines = [f"count\t{len(comps)}"] + [" ".join(c.labels(model)) for c in comps]
    _emit(args, payload, lines)


def _cmd_verify(model, args):
    w = args.max_weight if args.max_weight is not None else default_verify_weight(model)
    checks = list(run_checks(model, w, jobs=args.jobs))
    payload = {"max_weight": w, "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail}
                                           for c in checks],
               "passed": all(c.passed for c in checks)}
    lines = [f"{'PASS' if c.passed else 'FAIL'}\t{c.name}\t{c.detail}" for c in checks]
    failed = sum(not c.passed for c in checks)
    lines.append(f"verify\tmax_weight={w}\t{len(checks) - failed}/{len(checks)} checks passed")
    _emit(args, payload, lines)
    return EXIT_VERIFY if failed else EXIT_OK


COMMANDS = {
    "model": _cmd_model,
    "dim": _cmd_dim,
    "effective": _cmd_dim,
    "generators": _cmd_generators,
    "relations": _cmd_relations,
    "boundary": _cmd_boundary,
    "fixed-components": _cmd_fixed,
    "verify": _cmd_verify,
}


def _field_arg(text: str):
    if text in ("Q", "QQ"):
        return QQ
    try:
        return GF(int(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"field must be Q or a prime, got {text!r}") from None


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        v = 0
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("config", help="JSON configuration file")
    common.add_argument("--field", type=_field_arg, default=None,
                        help="override the configured field: Q or a prime p")
    common.add_argument("--format", choices=("tsv", "json"), default="tsv")
    common.add_argument("--jobs", type=_positive, default=1, help="worker processes for per-class work")
    common.add_argument("--max-piece", type=_positive, default=None,
                        help="cap on monomials per graded piece (default: $COXBLOW_MAX_PIECE or 20000)")

    parser = _Parser(prog="coxblow", description="Cox rings of blow-ups via additive-group invariants")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("model", parents=[common], help="variable catalog, grading and weights")
    for name in ("dim", "effective"):
        p = sub.add_parser(name, parents=[common], help="piece and invariant dimensions of a class")
        p.add_argument("--class", dest="cls", required=True, help='e.g. "H - E{1} - E{2}" or "3H - E1"')
        p.add_argument("--basis", action="store_true", help="also print the canonical invariant basis")
    for name in ("generators", "relations"):
        p = sub.add_parser(name, parents=[common], help=f"{name} up to a weight bound")
        p.add_argument("--max-weight", type=_positive, required=True)
    sub.add_parser("boundary", parents=[common], help="boundary-divisor invariants (m0n)")
    sub.add_parser("fixed-components", parents=[common], help="components of the fixed locus")
    p = sub.add_parser("verify", parents=[common], help="run the cross-oracle self-checks")
    p.add_argument("--max-weight", type=_positive, default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = load_config(args.config)
        if args.field is not None:
            spec = ConfigSpec(spec.kind, n=spec.n, r=spec.r, subspaces=spec.subspaces, field=args.field)
        model = build_model(spec)
    except ConfigError as exc:
        msg = str(exc)
        if not msg.startswith(str(args.config)):
            msg = f"{args.config}: {msg}"
        print(f"coxblow: invalid configuration: {msg}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        code = COMMANDS[args.command](model, args)
    except (ClassSyntaxError, UsageError) as exc:
        print(f"coxblow: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitExceeded as exc:
        print(f"coxblow: resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    return code or EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
