"""Certified border-rank lower bounds and closed-form upper bounds on omega.

Rank bounds are exact integers backed by an exact matrix rank.  Omega values
are binary64 evaluations of logarithmic formulas, accurate to about 1e-12
relative; they are reported raw and never clamped.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any, Sequence

from .errors import DomainError, PreconditionError
from .exact import exact_rank, random_rational_matrix, to_scalar
from .tensor import FACTORS, Tensor3, flatten, koszul_flattening, koszul_shape

DEFAULT_TRIALS = 3
PROJECTION_RANGE = 5
SWEEP_PS = (1, 2, 3)
SWEEP_MAX_ROWS = 2000


@dataclass
class BoundResult:
    kind: str  # "lower_bound_rank" or "omega_upper"
    value: Any
    method: str
    parameters: dict = field(default_factory=dict)
    certificate: dict = field(default_factory=dict)
    warning: str | None = None

    def report_items(self) -> list[tuple[str, object]]:
        key = "bound" if self.kind == "lower_bound_rank" else "omega"
        val = repr(self.value) if isinstance(self.value, float) else self.value
        items = [(key, val), ("method", self.method)]
        items += list(self.certificate.items())
        if self.warning:
            items.append(("warning", self.warning))
        return items


def flattening_bound(t: Tensor3) -> BoundResult:
    ranks = {f: exact_rank(flatten(t, f)) for f in FACTORS}
    best = max(ranks.values())
    return BoundResult(
        "lower_bound_rank",
        best,
        "flattening",
        {"dims": t.dims},
        {"rank_A": ranks["A"], "rank_B": ranks["B"], "rank_C": ranks["C"]},
    )


def koszul_bound(t: Tensor3, p: int, trials: int = DEFAULT_TRIALS, seed: int = 0) -> BoundResult:
    """Best ``ceil(rank / C(2p, p))`` over random projections and factor rotations.

    Each candidate is a valid bound on its own: projecting A is a restriction
    and cannot raise border rank.  Trial ``t`` uses seed ``seed + t``.
    """
    if p < 1:
        raise DomainError("p must be >= 1")
    if trials < 1:
        raise DomainError("trials must be >= 1")
    if min(t.dims) < 1:
        raise PreconditionError(f"tensor dims {t.dims} must all be positive")
    divisor = comb(2 * p, p)
    best = None
    for shift in range(3):
        rotated = t.cyclic_shift(shift)
        for trial in range(trials):
            s = (seed + trial) & ((1 << 64) - 1)
            proj = random_rational_matrix(2 * p + 1, rotated.dims[0], s, PROJECTION_RANGE)
            k = koszul_flattening(rotated, p, proj)
            r = exact_rank(k)
            value = -(-r // divisor)
            if best is None or value > best[0]:
                best = (value, r, k.shape, shift, s)
    value, r, shape, shift, s = best
    return BoundResult(
        "lower_bound_rank",
        value,
        "koszul",
        {"p": p, "trials": trials, "seed": seed, "dims": t.dims},
        {
            "matrix": f"{shape[0]}x{shape[1]}",
            "rank": r,
            "p": p,
            "factor": FACTORS[shift],
            "projection_seed": s,
        },
    )


def koszul_sweep(t: Tensor3, trials: int = DEFAULT_TRIALS, seed: int = 0,
                 ps: Sequence[int] = SWEEP_PS, max_rows: int = SWEEP_MAX_ROWS) -> BoundResult:
    """Run ``koszul_bound`` for each p whose matrix fits the row guard; keep the best.

    The flattening bound is included so the sweep never reports less than it.
    """
    best = flattening_bound(t)
    tried = []
    for p in ps:
        rows = max(koszul_shape(t.cyclic_shift(s).dims, p)[0] for s in range(3))
        if rows > max_rows:
            continue
        tried.append(p)
        res = koszul_bound(t, p, trials, seed)
        if res.value > best.value:
            best = res
    best.parameters = dict(best.parameters, swept_p=tuple(tried))
    best.certificate = dict(best.certificate, swept_p=",".join(map(str, tried)) or "none")
    return best


def _log(x) -> float:
    """Natural log of a positive rational without overflowing to float."""
    x = to_scalar(x) if not isinstance(x, float) else x
    if isinstance(x, Fraction):
        return math.log(x.numerator) - math.log(x.denominator)
    return math.log(x)


def _omega_warning(value: float) -> str | None:
    if value < 2:
        return "below-2-inconsistent-inputs"
    if value >= 3:
        return "not-better-than-trivial"
    return None


def _omega_result(value: float, method: str, params: dict, hypothesis: str | None = None) -> BoundResult:
    cert = {} if hypothesis is None else {"hypothesis": hypothesis}
    return BoundResult("omega_upper", value, method, params, cert, _omega_warning(value))


def bini_omega(l: int, m: int, n: int, R) -> BoundResult:
    """omega <= 3 log R / log(lmn) from a border-rank-R algorithm for M<l,m,n>."""
    vol = l * m * n
    if min(l, m, n) < 1:
        raise DomainError("l, m, n must be positive")
    if vol == 1:
        raise DomainError("l*m*n = 1 gives log q = 0")
    R = to_scalar(R)
    if R < 1:
        raise DomainError("R must be >= 1")
    value = 3 * _log(R) / math.log(vol)
    return _omega_result(value, "bini", {"l": l, "m": m, "n": n, "R": str(R)})


def schonhage_omega(triples: Sequence[Sequence[int]], R) -> BoundResult:
    """omega <= log(R/s) / log q for s disjoint matmul tensors of common volume q^3.

    R is taken as the border rank of the direct sum (or of any tensor that
    degenerates to it); that hypothesis is the caller's and is not checked.
    """
    triples = [tuple(int(x) for x in t) for t in triples]
    if not triples:
        raise PreconditionError("need at least one (l, m, n) triple")
    vols = {l * m * n for l, m, n in triples}
    if len(vols) != 1:
        raise PreconditionError(f"triples have unequal products {sorted(vols)}")
    vol = vols.pop()
    if vol <= 1:
        raise DomainError("common product l*m*n must exceed 1")
    s = len(triples)
    R = to_scalar(R)
    if R <= s:
        raise DomainError(f"R = {R} must exceed s = {s}")
    value = 3 * _log(R / s) / math.log(vol)
    params = {"triples": triples, "s": s, "R": str(R), "q_cubed": vol}
    return _omega_result(value, "schonhage", params, "user-asserted")


def laser_kron_omega(q: int, k: int, Rk) -> BoundResult:
    """omega <= log((4/27) Rk^(3/k)) / log q, Rk a border rank bound for T_cw,q^(x)k."""
    if q < 2:
        raise DomainError("q must be >= 2")
    if k < 1:
        raise DomainError("k must be >= 1")
    Rk = to_scalar(Rk)
    if Rk <= 0:
        raise DomainError("Rk must be positive")
    numerator = math.log(4) - math.log(27) + 3 * _log(Rk) / k
    if numerator <= 0:
        raise DomainError("(4/27) * Rk^(3/k) must exceed 1")
    value = numerator / math.log(q)
    return _omega_result(value, "laser_kron" if k > 1 else "laser_cw", {"q": q, "k": k, "R": str(Rk)})


def laser_cw_omega(q: int, R) -> BoundResult:
    """omega <= log((4/27) R^3) / log q with R a border rank bound for T_cw,q."""
    return laser_kron_omega(q, 1, R)


def max_border_rank(m: int) -> int:
    """Largest border rank in C^m (x) C^m (x) C^m, ceil(m^3 / (3m - 2)), for m > 3."""
    if m <= 3:
        raise DomainError("formula holds only for m > 3")
    return -(-(m ** 3) // (3 * m - 2))
