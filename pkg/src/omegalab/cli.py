"""Command-line interface: ``omegalab <command> ...``.

Report lines are ``key=value`` pairs separated by spaces.  Exit status is 0
on success, 1 when a verification or check fails, 2 on usage, shape or file
errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import bounds, constructions, io
from .decompositions import (
    apply_group_element,
    is_symmetry,
    orbit_expand,
    stabilizer_check,
    verify_rank_decomposition,
    verify_waring_decomposition,
)
from .errors import OmegaLabError, ParseError
from .tensor import direct_sum, kronecker, kronecker_power, permute_coordinates, symmetrize

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _default_seed() -> int:
    raw = os.environ.get("OMEGALAB_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"OMEGALAB_SEED: not an integer: {raw!r}") from None


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (tuple, list)):
        return "x".join(map(str, value))
    return str(value)


def _line(*pairs) -> str:
    return " ".join(f"{k}={_fmt(v)}" for k, v in pairs)


def _emit(obj, out: str | None, metadata=None):
    text = io.dumps(obj, metadata)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _summary(obj) -> str:
    if hasattr(obj, "dims"):
        return _line(("dims", obj.dims), ("nnz", obj.nnz()))
    return _line(("nvars", obj.nvars), ("terms", len(obj)))


def _write_result(obj, out, metadata=None):
    _emit(obj, out, metadata)
    if out:
        print(_summary(obj) + f" file={out}")


def _load_tensor(path):
    return io.load(path, "tensor").obj


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_construct(args) -> int:
    what, params = args.what, args.params
    arity = {"matmul": 3, "unit": 1, "cw": 1, "bigcw": 1, "smat": 1}
    if len(params) != arity[what]:
        raise ParseError(f"construct {what}: expects {arity[what]} integer argument(s)")
    build = {
        "matmul": constructions.matmul_tensor,
        "unit": constructions.unit_tensor,
        "cw": constructions.cw_tensor,
        "bigcw": constructions.big_cw_tensor,
        "smat": constructions.smat_poly,
    }[what]
    obj = build(*params)
    meta = {"name": f"{what}({','.join(map(str, params))})", "source": "omegalab construct"}
    _write_result(obj, args.output, meta)
    return EXIT_OK


def cmd_kron(args) -> int:
    t = kronecker(_load_tensor(args.a), _load_tensor(args.b))
    if args.matmul_reindex:
        t = permute_coordinates(t, *constructions.matmul_kron_permutation(*args.matmul_reindex))
    _write_result(t, args.output)
    return EXIT_OK


def cmd_dsum(args) -> int:
    _write_result(direct_sum(_load_tensor(args.a), _load_tensor(args.b)), args.output)
    return EXIT_OK


def cmd_power(args) -> int:
    _write_result(kronecker_power(_load_tensor(args.tensor), args.k), args.output)
    return EXIT_OK


def cmd_sym(args) -> int:
    _write_result(symmetrize(_load_tensor(args.tensor)), args.output)
    return EXIT_OK


def _report_verification(report, extra=()) -> int:
    pairs = list(extra) + [("rank", report.term_count), ("status", report.status)]
    if report.difference is not None:
        diff = report.difference
        pairs.append(("difference_nnz", diff.nnz() if hasattr(diff, "nnz") else len(diff)))
    print(_line(*pairs))
    if report.difference is not None:
        for idx, v in report.difference.items():
            print(_line(("difference", ",".join(map(str, idx))), ("value", v)))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_verify(args) -> int:
    if args.what == "rank":
        t = _load_tensor(args.target)
        d = io.load(args.decomposition, "rank").obj
        return _report_verification(verify_rank_decomposition(t, d))
    if args.what == "waring":
        p = io.load(args.target, "cubic").obj
        w = io.load(args.decomposition, "waring").obj
        return _report_verification(verify_waring_decomposition(p, w))
    t = _load_tensor(args.target)
    loaded = io.load(args.decomposition, "orbit")
    o = loaded.obj
    d = orbit_expand(o)
    report = verify_rank_decomposition(t, d)
    claimed = loaded.metadata.get("claimed_rank")
    if claimed is not None and claimed != len(d):
        report.passed = False
    extra = [("fixed_terms", len(o.fixed_terms)), ("orbit_terms", len(d) - len(o.fixed_terms))]
    return _report_verification(report, extra)


def _print_bound(res) -> None:
    pairs = [("bound", res.value)] + list(res.certificate.items()) + [("method", res.method)]
    print(_line(*pairs))


def cmd_bound(args) -> int:
    t = _load_tensor(args.tensor)
    seed = args.seed if getattr(args, "seed", None) is not None else _default_seed()
    if args.what == "flatten":
        res = bounds.flattening_bound(t)
    elif args.what == "koszul":
        res = bounds.koszul_bound(t, args.p, args.trials, seed)
    else:
        res = bounds.koszul_sweep(t, args.trials, seed)
    _print_bound(res)
    return EXIT_OK


def _read_triples(path) -> list[tuple[int, int, int]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = [line.split() for line in text.splitlines() if line.strip() and not line.startswith("#")]
    triples = []
    for n, rec in enumerate(data):
        try:
            l, m, k = (int(x) for x in rec)
        except (TypeError, ValueError):
            raise ParseError(f"{path}: triple {n} is not three integers") from None
        triples.append((l, m, k))
    return triples


def cmd_omega(args) -> int:
    if args.what == "maxbr":
        print(_line(("max_border_rank", bounds.max_border_rank(args.m))))
        return EXIT_OK
    if args.what == "bini":
        res = bounds.bini_omega(args.l, args.m, args.n, args.R)
    elif args.what == "schonhage":
        res = bounds.schonhage_omega(_read_triples(args.triples), args.R)
    elif args.what == "laser":
        res = bounds.laser_cw_omega(args.q, args.R)
    else:
        res = bounds.laser_kron_omega(args.q, args.k, args.Rk)
    pairs = [("omega", res.value), ("method", res.method)]
    pairs += [(k, v) for k, v in res.parameters.items() if k != "triples"]
    pairs += list(res.certificate.items())
    if res.warning:
        pairs.append(("warning", res.warning))
    print(_line(*pairs))
    return EXIT_OK


def cmd_group(args) -> int:
    g = io.load(args.element, "group").obj
    t = _load_tensor(args.tensor)
    if args.what == "apply":
        _write_result(apply_group_element(g, t), args.output)
        return EXIT_OK
    if args.what == "check-sym":
        ok = is_symmetry(g, t)
        print(_line(("symmetry", ok)))
        return EXIT_OK if ok else EXIT_FAIL
    d = io.expanded_rank_decomposition(io.load(args.decomposition, ("rank", "orbit")))
    ok = stabilizer_check(g, t, d)
    print(_line(("stabilizer", ok), ("terms", len(d))))
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="omegalab", description="Exact tensor tools for matrix multiplication complexity.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a named tensor or cubic")
    p.add_argument("what", choices=["matmul", "unit", "cw", "bigcw", "smat"])
    p.add_argument("params", type=int, nargs="+")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("kron", help="Kronecker product of two tensors")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("-o", "--output")
    p.add_argument("--matmul-reindex", type=int, nargs=6, metavar=("L", "M", "N", "L2", "M2", "N2"))
    p.set_defaults(func=cmd_kron)

    p = sub.add_parser("dsum", help="direct sum of two tensors")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_dsum)

    p = sub.add_parser("power", help="Kronecker power")
    p.add_argument("tensor")
    p.add_argument("k", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("sym", help="symmetrize a tensor to a cubic")
    p.add_argument("tensor")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sym)

    p = sub.add_parser("verify", help="verify a decomposition exactly")
    p.add_argument("what", choices=["rank", "waring", "orbit"])
    p.add_argument("target")
    p.add_argument("decomposition")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bound", help="certified border rank lower bounds")
    bsub = p.add_subparsers(dest="what", required=True)
    b = bsub.add_parser("flatten")
    b.add_argument("tensor")
    b.set_defaults(func=cmd_bound)
    b = bsub.add_parser("koszul")
    b.add_argument("tensor")
    b.add_argument("--p", type=int, required=True)
    b.add_argument("--trials", type=int, default=bounds.DEFAULT_TRIALS)
    b.add_argument("--seed", type=int)
    b.set_defaults(func=cmd_bound)
    b = bsub.add_parser("sweep")
    b.add_argument("tensor")
    b.add_argument("--trials", type=int, default=bounds.DEFAULT_TRIALS)
    b.add_argument("--seed", type=int)
    b.set_defaults(func=cmd_bound)

    p = sub.add_parser("omega", help="upper bounds on the exponent of matrix multiplication")
    osub = p.add_subparsers(dest="what", required=True)
    o = osub.add_parser("bini")
    for name in ("l", "m", "n"):
        o.add_argument(name, type=int)
    o.add_argument("R", type=_rational)
    o.set_defaults(func=cmd_omega)
    o = osub.add_parser("schonhage")
    o.add_argument("--triples", required=True, help="JSON list of [l, m, n] or one 'l m n' per line")
    o.add_argument("R", type=_rational)
    o.set_defaults(func=cmd_omega)
    o = osub.add_parser("laser")
    o.add_argument("q", type=int)
    o.add_argument("R", type=_rational)
    o.set_defaults(func=cmd_omega)
    o = osub.add_parser("laserk")
    o.add_argument("q", type=int)
    o.add_argument("k", type=int)
    o.add_argument("Rk", type=_rational)
    o.set_defaults(func=cmd_omega)
    o = osub.add_parser("maxbr")
    o.add_argument("m", type=int)
    o.set_defaults(func=cmd_omega)

    p = sub.add_parser("group", help="group action on tensors and decompositions")
    gsub = p.add_subparsers(dest="what", required=True)
    g = gsub.add_parser("apply")
    g.add_argument("element")
    g.add_argument("tensor")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_group)
    g = gsub.add_parser("check-sym")
    g.add_argument("element")
    g.add_argument("tensor")
    g.set_defaults(func=cmd_group)
    g = gsub.add_parser("stabilizer")
    g.add_argument("element")
    g.add_argument("tensor")
    g.add_argument("decomposition")
    g.set_defaults(func=cmd_group)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (OmegaLabError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
