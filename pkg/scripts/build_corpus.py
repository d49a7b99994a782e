"""Regenerate the shipped corpus under src/omegalab/corpus.

Every decomposition is verified before it is written; ``--check`` rebuilds in
memory and fails if any shipped file differs byte for byte.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from omegalab import bounds, io
from omegalab.constructions import cw_tensor, matmul_tensor, smat_poly
from omegalab.decompositions import (
    GroupElement,
    OrbitDecomposition,
    RankOneTerm,
    WaringDecomposition,
    WaringTerm,
    naive_decomposition,
    orbit_expand,
    verify_rank_decomposition,
    verify_waring_decomposition,
)
from omegalab.exact import ExactMatrix
from omegalab.tensor import CubicPoly

ROOT = Path(__file__).resolve().parents[1] / "src" / "omegalab" / "corpus"


def conjugation(p_rows) -> GroupElement:
    """(X, Y, Z) -> (P X P^-1, P Y P^-1, P Z P^-1) on row-major 2x2 slots."""
    p = ExactMatrix.from_rows(p_rows)
    m = p.kron(p.inverse().transpose())
    return GroupElement((0, 1, 2), [m, m, m])


def strassen_gamma() -> list[GroupElement]:
    eye = ExactMatrix.identity(4)
    cyc = GroupElement((1, 2, 0), [eye] * 3)
    tr = ExactMatrix.permutation([0, 2, 1, 3])
    trev = GroupElement((2, 1, 0), [tr] * 3)
    return [cyc, conjugation([[0, 1], [1, 0]]), trev.compose(conjugation([[1, 0], [0, -1]]))]


GAMMA_NOTE = (
    "Generators found by exhaustive search over the cyclic factor shift, the "
    "transpose-reversal (reverse factor order, transpose each 2x2 slot) and at "
    "most one 2x2 conjugation with entries in {-1,0,1}; accepted because the "
    "orbit has exactly 6 terms and Id^3 plus the orbit verifies against M<2,2,2>. "
    "They generate a group of order 12."
)
GAMMA_NAMES = ["cyclic factor shift", "conjugation by [[0,1],[1,0]]",
               "transpose-reversal after conjugation by [[1,0],[0,-1]]"]


def build() -> dict[str, str]:
    files: dict[str, str] = {}
    index: list[dict] = []

    def put(rel, obj, meta):
        files[rel] = io.dumps(obj, meta)

    def target(kind, *params):
        return {"construct": kind, "params": list(params)}

    # naive decompositions
    for l in range(1, 4):
        for m in range(1, 4):
            for n in range(1, 4):
                d = naive_decomposition(l, m, n)
                assert verify_rank_decomposition(matmul_tensor(l, m, n), d).passed
                rel = f"naive/matmul_{l}{m}{n}.json"
                put(rel, d, {"name": f"naive decomposition of M<{l},{m},{n}>",
                             "target": target("matmul", l, m, n), "claimed_rank": len(d),
                             "provenance": "one term per (i, j, k); definitional"})
                index.append({"file": rel, "kind": "rank", "target": target("matmul", l, m, n), "status": "verified"})

    # Strassen, orbit and flat forms
    m2 = matmul_tensor(2, 2, 2)
    gens = strassen_gamma()
    ident = RankOneTerm((1, 0, 0, 1), (1, 0, 0, 1), (1, 0, 0, 1))
    seed = RankOneTerm((1, 0, 0, 0), (0, 1, 0, -1), (0, 0, 1, 1))
    orbit = OrbitDecomposition((4, 4, 4), [ident], [seed], gens, orbit_cap=720)
    flat = orbit_expand(orbit)
    assert len(flat) == 7 and verify_rank_decomposition(m2, flat).passed
    put("strassen_m2_orbit.json", orbit, {
        "name": "Strassen 1968, orbit form",
        "target": target("matmul", 2, 2, 2), "claimed_rank": 7,
        "orbit_size": 6, "generator_names": GAMMA_NAMES, "provenance": GAMMA_NOTE,
    })
    put("strassen_m2.json", flat, {
        "name": "Strassen 1968, flat form",
        "target": target("matmul", 2, 2, 2), "claimed_rank": 7,
        "provenance": "expansion of strassen_m2_orbit.json, terms in canonical order",
    })
    index.append({"file": "strassen_m2.json", "kind": "rank", "target": target("matmul", 2, 2, 2), "status": "verified"})
    index.append({"file": "strassen_m2_orbit.json", "kind": "orbit", "target": target("matmul", 2, 2, 2), "status": "verified"})
    for n, (g, name) in enumerate(zip(gens, GAMMA_NAMES), 1):
        rel = f"groups/strassen_gamma_{n}.json"
        put(rel, g, {"name": f"Strassen symmetry generator: {name}", "acts_on": target("matmul", 2, 2, 2)})
        index.append({"file": rel, "kind": "group", "target": target("matmul", 2, 2, 2), "status": "symmetry"})

    # Waring examples
    waring = [
        ("cube_x", CubicPoly(1, {(0, 0, 0): 1}), [WaringTerm((1,), 1)], "x^3"),
        ("cube_x_plus_y", CubicPoly(2, {(0, 0, 0): 1, (0, 0, 1): 3, (0, 1, 1): 3, (1, 1, 1): 1}),
         [WaringTerm((1, 1), 1)], "(x+y)^3"),
    ]
    for slug, poly, terms, label in waring:
        w = WaringDecomposition(poly.nvars, terms)
        assert verify_waring_decomposition(poly, w).passed
        prel, wrel = f"waring/{slug}_poly.json", f"waring/{slug}.json"
        put(prel, poly, {"name": label})
        put(wrel, w, {"name": f"Waring decomposition of {label}", "target": {"file": prel},
                      "claimed_rank": len(w), "provenance": "definitional"})
        index.append({"file": wrel, "kind": "waring", "target": {"file": prel}, "status": "verified"})

    # trace(X^3), 2x2: x0^3 + x3^3 + 3 x1 x2 (x0 + x3), the last part by 24xyz polarization
    e = "1/8"
    w = WaringDecomposition(4, [
        WaringTerm((1, 0, 0, 0), 1), WaringTerm((0, 0, 0, 1), 1),
        WaringTerm((1, 1, 1, 1), e), WaringTerm((1, -1, 1, 1), "-" + e),
        WaringTerm((1, 1, -1, 1), "-" + e), WaringTerm((-1, 1, 1, -1), "-" + e),
    ])
    assert verify_waring_decomposition(smat_poly(2), w).passed
    put("waring/smat_2.json", w, {
        "name": "Waring decomposition of trace(X^3), X 2x2", "target": target("smat", 2),
        "claimed_rank": 6,
        "provenance": "x00^3 + x11^3 plus polarization of 3*x01*x10*(x00+x11); "
                      "exhaustive search finds no 4- or 5-term decomposition with forms in {-1,0,1}^4",
    })
    index.append({"file": "waring/smat_2.json", "kind": "waring", "target": target("smat", 2), "status": "verified"})

    # CW tensors with bound metadata, no decomposition
    for q in range(1, 5):
        t = cw_tensor(q)
        lower = bounds.flattening_bound(t).value
        rel = f"tensors/cw_{q}.json"
        put(rel, t, {"name": f"little Coppersmith-Winograd tensor, q={q}",
                     "border_rank_lower": lower, "border_rank_lower_method": "flattening",
                     "border_rank_upper": q + 2, "border_rank_upper_status": "asserted in the literature, not verified"})
        index.append({"file": rel, "kind": "tensor", "status": "bounds only"})
    put("tensors/matmul_222.json", m2, {"name": "M<2,2,2>"})
    index.append({"file": "tensors/matmul_222.json", "kind": "tensor", "status": "construction"})

    slots = [
        {"slot": "cw_rank_q_plus_2", "kind": "rank", "target": "cw(q)",
         "status": "data to be supplied",
         "note": "q+2 is a border rank; an exact rational rank-(q+2) decomposition may not exist"},
        {"slot": "smat_3_waring_18", "kind": "waring", "target": target("smat", 3),
         "status": "verification-ready, data to be transcribed from the cited references"},
        {"slot": "smat_4_waring_40", "kind": "waring", "target": target("smat", 4),
         "status": "verification-ready, data to be transcribed from the cited references"},
        {"slot": "hasse_diagram_group", "kind": "group",
         "status": "verification-ready, data to be transcribed from the cited references"},
    ]
    files["index.json"] = json.dumps({"entries": index, "slots": slots}, indent=1, sort_keys=True) + "\n"
    return files


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--check", action="store_true", help="compare against the shipped files instead of writing")
    args = ap.parse_args(argv)
    files = build()
    bad = 0
    for rel, text in sorted(files.items()):
        path = ROOT / rel
        if args.check:
            if not path.exists() or path.read_text(encoding="utf-8") != text:
                print(f"stale: {rel}")
                bad += 1
        else:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
    print(f"{len(files)} files {'checked' if args.check else 'written'}, {bad} stale")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
