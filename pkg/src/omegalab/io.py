"""JSON file formats for tensors, cubics, decompositions and group elements.

Rationals are always strings ``"num/den"`` in lowest terms with a positive
denominator, so no value ever passes through a float.  The writer emits one
record per line in a fixed key order; reading and re-writing a canonical file
reproduces it byte for byte.
"""
from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

from .decompositions import (
    GroupElement,
    OrbitDecomposition,
    RankDecomposition,
    RankOneTerm,
    WaringDecomposition,
    WaringTerm,
    orbit_expand,
)
from .errors import OmegaLabError, ParseError
from .exact import ExactMatrix
from .tensor import CubicPoly, Tensor3

FORMAT_VERSION = "omegalab/1"
KINDS = ("tensor", "cubic", "rank", "waring", "orbit", "group")


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: Any, where: str) -> Fraction:
    if not isinstance(s, str) or s.count("/") != 1:
        raise ParseError(f"{where}: expected a rational string 'num/den', got {s!r}")
    num, den = s.split("/")
    try:
        value = Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"{where}: malformed rational {s!r}") from None
    if format_rational(value) != s:
        raise ParseError(f"{where}: rational {s!r} is not in lowest terms with positive denominator")
    return value


# ---------------------------------------------------------------------------
# writer
# ---------------------------------------------------------------------------


def _compact(obj) -> str:
    return json.dumps(obj, separators=(", ", ": "), sort_keys=isinstance(obj, dict))


def _dump(fields: list[tuple[str, Any]]) -> str:
    lines = ["{"]
    for n, (key, value) in enumerate(fields):
        comma = "," if n < len(fields) - 1 else ""
        if isinstance(value, list) and value and isinstance(value[0], (list, dict)):
            lines.append(f"  {json.dumps(key)}: [")
            for m, item in enumerate(value):
                lines.append("    " + _compact(item) + ("," if m < len(value) - 1 else ""))
            lines.append("  ]" + comma)
        else:
            lines.append(f"  {json.dumps(key)}: {_compact(value)}{comma}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _vec_out(v) -> list[str]:
    return [format_rational(x) for x in v]


def _term_out(t: RankOneTerm) -> dict:
    return {"a": _vec_out(t.a), "b": _vec_out(t.b), "c": _vec_out(t.c), "coeff": format_rational(t.coeff)}


def _matrix_out(m: ExactMatrix) -> list[list[str]]:
    return [_vec_out(row) for row in m.to_rows()]


def _group_out(g: GroupElement) -> dict:
    return {"factor_perm": list(g.factor_perm), "matrices": [_matrix_out(m) for m in g.mats]}


def _header(kind: str) -> list[tuple[str, Any]]:
    return [("format_version", FORMAT_VERSION), ("kind", kind)]


def _with_meta(fields, metadata):
    if metadata:
        fields.append(("metadata", dict(metadata)))
    return fields


def dumps(obj, metadata: dict | None = None) -> str:
    """Serialize any supported object to its canonical text."""
    if isinstance(obj, Tensor3):
        fields = _header("tensor") + [
            ("dims", list(obj.dims)),
            ("entries", [[i, j, k, format_rational(v)] for (i, j, k), v in obj.items()]),
        ]
    elif isinstance(obj, CubicPoly):
        fields = _header("cubic") + [
            ("nvars", obj.nvars),
            ("terms", [[i, j, k, format_rational(v)] for (i, j, k), v in obj.items()]),
        ]
    elif isinstance(obj, RankDecomposition):
        fields = _header("rank") + [("dims", list(obj.dims)), ("terms", [_term_out(t) for t in obj.terms])]
    elif isinstance(obj, WaringDecomposition):
        fields = _header("waring") + [
            ("nvars", obj.nvars),
            ("terms", [{"form": _vec_out(t.form), "coeff": format_rational(t.coeff)} for t in obj.terms]),
        ]
    elif isinstance(obj, OrbitDecomposition):
        fields = _header("orbit") + [
            ("dims", list(obj.dims)),
            ("orbit_cap", obj.orbit_cap),
            ("fixed_terms", [_term_out(t) for t in obj.fixed_terms]),
            ("seed_terms", [_term_out(t) for t in obj.seed_terms]),
            ("generators", [_group_out(g) for g in obj.generators]),
        ]
    elif isinstance(obj, GroupElement):
        fields = _header("group") + [
            ("factor_perm", list(obj.factor_perm)),
            ("matrices", [_matrix_out(m) for m in obj.mats]),
        ]
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return _dump(_with_meta(fields, metadata))


def save(path, obj, metadata: dict | None = None) -> None:
    Path(path).write_text(dumps(obj, metadata), encoding="utf-8")


# ---------------------------------------------------------------------------
# reader
# ---------------------------------------------------------------------------


class Loaded:
    """A parsed file: the object, its kind and its metadata."""

    def __init__(self, kind: str, obj, metadata: dict):
        self.kind = kind
        self.obj = obj
        self.metadata = metadata

    def __repr__(self):
        return f"Loaded(kind={self.kind!r}, obj={self.obj!r})"


def _need(d: dict, key: str, where: str = ""):
    if key not in d:
        raise ParseError(f"{where}{key}: missing field")
    return d[key]


def _nat(x, where: str) -> int:
    if not isinstance(x, int) or isinstance(x, bool) or x < 0:
        raise ParseError(f"{where}: expected a nonnegative integer, got {x!r}")
    return x


def _list(x, where: str) -> list:
    if not isinstance(x, list):
        raise ParseError(f"{where}: expected a list")
    return x


def _vec_in(v, where: str, length: int | None = None) -> list[Fraction]:
    v = _list(v, where)
    if length is not None and len(v) != length:
        raise ParseError(f"{where}: expected length {length}, got {len(v)}")
    return [parse_rational(x, f"{where}[{n}]") for n, x in enumerate(v)]


def _dims_in(d, where="dims") -> tuple[int, int, int]:
    d = _list(d, where)
    if len(d) != 3:
        raise ParseError(f"{where}: expected three dimensions")
    return tuple(_nat(x, f"{where}[{n}]") for n, x in enumerate(d))


def _sparse_entries(rows, where: str, bounds: tuple[int, ...], sort_each: bool = False) -> dict:
    out = {}
    prev = None
    for n, rec in enumerate(_list(rows, where)):
        w = f"{where}[{n}]"
        rec = _list(rec, w)
        if len(rec) != 4:
            raise ParseError(f"{w}: expected [i, j, k, value]")
        idx = tuple(_nat(x, f"{w}[{m}]") for m, x in enumerate(rec[:3]))
        for m, (x, bound) in enumerate(zip(idx, bounds)):
            if x >= bound:
                raise ParseError(f"{w}[{m}]: index {x} out of range {bound}")
        if sort_each and list(idx) != sorted(idx):
            raise ParseError(f"{w}: monomial indices must be ascending")
        if idx in out:
            raise ParseError(f"{w}: duplicate index {list(idx)}")
        if prev is not None and idx < prev:
            raise ParseError(f"{w}: entries must be sorted lexicographically")
        prev = idx
        value = parse_rational(rec[3], f"{w}[3]")
        if not value:
            raise ParseError(f"{w}[3]: zero entries must be omitted")
        out[idx] = value
    return out


def _term_in(rec, where: str, dims) -> RankOneTerm:
    if not isinstance(rec, dict):
        raise ParseError(f"{where}: expected an object")
    vecs = [_vec_in(_need(rec, key, f"{where}."), f"{where}.{key}", d) for key, d in zip("abc", dims)]
    coeff = parse_rational(_need(rec, "coeff", f"{where}."), f"{where}.coeff")
    term = RankOneTerm(*vecs, coeff)
    if term.is_zero():
        raise ParseError(f"{where}: zero rank-one term")
    return term


def _matrix_in(rows, where: str) -> ExactMatrix:
    rows = _list(rows, where)
    n = len(rows)
    parsed = [_vec_in(r, f"{where}[{i}]", n) for i, r in enumerate(rows)]
    return ExactMatrix.from_rows(parsed) if n else ExactMatrix(0, 0)


def _group_in(rec, where: str) -> GroupElement:
    if not isinstance(rec, dict):
        raise ParseError(f"{where}: expected an object")
    perm = _list(_need(rec, "factor_perm", f"{where}."), f"{where}.factor_perm")
    mats = _list(_need(rec, "matrices", f"{where}."), f"{where}.matrices")
    if len(mats) != 3:
        raise ParseError(f"{where}.matrices: expected three matrices")
    mats = [_matrix_in(m, f"{where}.matrices[{i}]") for i, m in enumerate(mats)]
    try:
        return GroupElement(perm, mats)
    except OmegaLabError as exc:
        raise ParseError(f"{where}: {exc}") from None


def _check_claimed(meta: dict, count: int):
    claimed = meta.get("claimed_rank")
    if claimed is not None and claimed != count:
        raise ParseError(f"metadata.claimed_rank: claims {claimed} but there are {count} terms")


def loads(text: str) -> Loaded:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}: invalid JSON ({exc.msg})") from None
    if not isinstance(doc, dict):
        raise ParseError("top level: expected an object")
    version = _need(doc, "format_version")
    if version != FORMAT_VERSION:
        raise ParseError(f"format_version: unsupported {version!r}")
    kind = _need(doc, "kind")
    if kind not in KINDS:
        raise ParseError(f"kind: unknown kind {kind!r}")
    meta = doc.get("metadata", {})
    if not isinstance(meta, dict):
        raise ParseError("metadata: expected an object")

    if kind == "tensor":
        dims = _dims_in(_need(doc, "dims"))
        obj = Tensor3(dims, _sparse_entries(_need(doc, "entries"), "entries", dims))
    elif kind == "cubic":
        nvars = _nat(_need(doc, "nvars"), "nvars")
        obj = CubicPoly(nvars, _sparse_entries(_need(doc, "terms"), "terms", (nvars,) * 3, sort_each=True))
    elif kind == "rank":
        dims = _dims_in(_need(doc, "dims"))
        terms = [_term_in(t, f"terms[{n}]", dims) for n, t in enumerate(_list(_need(doc, "terms"), "terms"))]
        obj = RankDecomposition(dims, terms)
        _check_claimed(meta, len(terms))
    elif kind == "waring":
        nvars = _nat(_need(doc, "nvars"), "nvars")
        terms = []
        for n, rec in enumerate(_list(_need(doc, "terms"), "terms")):
            w = f"terms[{n}]"
            if not isinstance(rec, dict):
                raise ParseError(f"{w}: expected an object")
            form = _vec_in(_need(rec, "form", f"{w}."), f"{w}.form", nvars)
            coeff = parse_rational(_need(rec, "coeff", f"{w}."), f"{w}.coeff")
            if not any(form) or not coeff:
                raise ParseError(f"{w}: zero Waring term")
            terms.append(WaringTerm(form, coeff))
        obj = WaringDecomposition(nvars, terms)
        _check_claimed(meta, len(terms))
    elif kind == "orbit":
        dims = _dims_in(_need(doc, "dims"))
        cap = _nat(doc.get("orbit_cap", 720), "orbit_cap")
        fixed = [_term_in(t, f"fixed_terms[{n}]", dims) for n, t in enumerate(_list(doc.get("fixed_terms", []), "fixed_terms"))]
        seeds = [_term_in(t, f"seed_terms[{n}]", dims) for n, t in enumerate(_list(doc.get("seed_terms", []), "seed_terms"))]
        gens = [_group_in(g, f"generators[{n}]") for n, g in enumerate(_list(doc.get("generators", []), "generators"))]
        for n, g in enumerate(gens):
            if g.input_dims() != dims:
                raise ParseError(f"generators[{n}]: acts on dims {g.input_dims()}, not {dims}")
        obj = OrbitDecomposition(dims, fixed, seeds, gens, cap)
    else:
        obj = _group_in(doc, "")
    return Loaded(kind, obj, meta)


CORPUS_DIR = "corpus"


def corpus_path(name: str) -> Path:
    return Path(str(resources.files("omegalab").joinpath(CORPUS_DIR, name)))


def resolve_path(path) -> Path:
    """Use ``path`` as given; fall back to the packaged corpus for ``corpus/...``."""
    p = Path(path)
    if p.exists():
        return p
    parts = p.parts
    if parts and parts[0] == CORPUS_DIR:
        packaged = corpus_path(str(Path(*parts[1:])))
        if packaged.exists():
            return packaged
    return p


def load(path, expect: str | tuple[str, ...] | None = None) -> Loaded:
    p = resolve_path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: cannot read ({exc.strerror})") from None
    loaded = loads(text)
    if expect is not None:
        allowed = (expect,) if isinstance(expect, str) else expect
        if loaded.kind not in allowed:
            raise ParseError(f"{path}: kind is {loaded.kind!r}, expected {' or '.join(allowed)}")
    return loaded


def expanded_rank_decomposition(loaded: Loaded) -> RankDecomposition:
    """A rank decomposition from a 'rank' or 'orbit' file; checks claimed_rank after expansion."""
    if loaded.kind == "orbit":
        d = orbit_expand(loaded.obj)
        _check_claimed(loaded.metadata, len(d))
        return d
    if loaded.kind == "rank":
        return loaded.obj
    raise ParseError(f"kind {loaded.kind!r} is not a rank decomposition")
