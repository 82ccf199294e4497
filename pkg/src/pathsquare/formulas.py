"""Closed-form extremal numbers and the matching extremal families.

Every evaluator returns the formula value for any admissible ``n``; whether
that value is backed by a theorem at this ``n`` is reported separately by
:func:`scope_flag`, so tabulation loops never have to catch anything.
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb

from .patterns import PatternId


class Objective(str, enum.Enum):
    EDGES = "edges"
    TRIANGLES = "triangles"


def turan_edges(n: int, r: int) -> int:
    """Edges of the complete r-partite graph with parts of size floor/ceil(n/r)."""
    if r <= 0:
        raise ValueError(f"r must be positive, got {r}")
    q, s = divmod(n, r)
    sizes = [q + 1] * s + [q] * (r - s)
    return (n * n - sum(x * x for x in sizes)) // 2


def f_of(n: int) -> int:
    if n % 6 in (1, 2, 3):
        return (n - 1) // 2
    return (n + 1) // 2


def g_of(n: int) -> int:
    r = n % 6
    if r in (0, 1, 4):
        return n // 6
    if r in (2, 3):
        return n // 6 - 1
    return n // 6 + 1


def ex_edges_p62(n: int) -> int:
    return turan_edges(n, 2) + f_of(n)


def ex_triangles_p62(n: int) -> int:
    return turan_edges(n, 2) + g_of(n)


def ex_triangles_p52(n: int) -> int:
    if n < 4:
        return comb(max(n, 0), 3)
    if n <= 7:
        return (4, 4, 5, 8)[n - 4]
    return n * n // 8


def ex_edges_tp2(n: int) -> int:
    if n % 4 == 2:
        return n * n // 4 + n // 2 - 1
    return n * n // 4 + n // 2


def tri_tp2_upper(n: int) -> int | Fraction:
    """``n^2/4 - 1 + [4 | n]``; a Fraction when n is odd."""
    value = Fraction(n * n, 4) - 1 + (1 if n % 4 == 0 else 0)
    return int(value) if value.denominator == 1 else value


def scope_flag(quantity: str, n: int) -> str | None:
    """Why the formula value at ``n`` is not theorem-backed, or None if it is."""
    if quantity == "ex_edges_p62":
        if n == 5:
            return "excluded: n = 5 is an exception (K5 is P6^2-free)"
        if n < 1:
            return "outside range: n >= 1"
    elif quantity == "ex_triangles_p62":
        if n < 11:
            return "conjectural: theorem covers n >= 11"
    elif quantity == "ex_triangles_p52":
        if n < 4:
            return "trivial: n < 4, every graph is P5^2-free"
    elif quantity == "ex_edges_tp2":
        if n == 5:
            return "excluded: n = 5 is an exception"
        if n < 1:
            return "outside range: n >= 1"
    elif quantity == "tri_tp2_upper":
        if n % 2:
            return "odd n: bound is not an integer and not theorem-backed as an equality"
        if n < 22:
            return "not theorem-backed: theorem covers n >= 22"
    elif quantity in ("extremal_edges",):
        if n < 6:
            return "outside range: family listed for n >= 6"
    elif quantity in ("extremal_triangles",):
        if n < 11:
            return "outside range: family listed for n >= 11"
    else:
        raise ValueError(f"unknown quantity {quantity!r}")
    return None


# -- table -----------------------------------------------------------------


@dataclass(frozen=True)
class FormulaTable:
    n: int
    t2: int
    f: int
    g: int
    ex_edges_p62: int
    ex_tri_p62: int
    ex_tri_p52: int
    ex_edges_tp2: int
    tri_tp2_bound: int | Fraction

    def as_dict(self) -> dict:
        d = asdict(self)
        d["tri_tp2_bound"] = str(self.tri_tp2_bound)
        return d


TABLE_COLUMNS = ("n", "t2", "f", "g", "ex_edges_p62", "ex_tri_p62", "ex_tri_p52", "ex_edges_tp2", "tri_tp2_bound")


def formula_row(n: int) -> FormulaTable:
    return FormulaTable(
        n=n,
        t2=turan_edges(n, 2),
        f=f_of(n),
        g=g_of(n),
        ex_edges_p62=ex_edges_p62(n),
        ex_tri_p62=ex_triangles_p62(n),
        ex_tri_p52=ex_triangles_p52(n),
        ex_edges_tp2=ex_edges_tp2(n),
        tri_tp2_bound=tri_tp2_upper(n),
    )


def table1_polynomials(n: int) -> tuple[int, int, int]:
    """(t(n,2), f(n), g(n)) from the residue-class polynomials in k = n // 6."""
    k, r = divmod(n, 6)
    return {
        0: (9 * k * k, 3 * k, k),
        1: (9 * k * k + 3 * k, 3 * k, k),
        2: (9 * k * k + 6 * k + 1, 3 * k, k - 1),
        3: (9 * k * k + 9 * k + 2, 3 * k + 1, k - 1),
        4: (9 * k * k + 12 * k + 4, 3 * k + 2, k),
        5: (9 * k * k + 15 * k + 6, 3 * k + 3, k + 1),
    }[r]


# -- extremal families --------------------------------------------------------


@dataclass
class ExtremalFamily:
    n: int
    objective: Objective
    members: list[PatternId] = field(default_factory=list)
    flag: str | None = None


def _f_members(n, i):
    return [PatternId.fnij(n, i, j) for j in range(i % 3 or 3, i + 1, 3)]


def extremal_family(n: int, objective: Objective | str) -> ExtremalFamily:
    objective = Objective(objective)
    if objective is Objective.EDGES:
        flag = scope_flag("extremal_edges", n)
        if flag:
            return ExtremalFamily(n, objective, [], flag)
        half, up = n // 2, (n + 1) // 2
        r = n % 6
        if r == 0:
            members = [PatternId.hni(n, half)]
        elif r == 1:
            members = [PatternId.hni(n, half)] + _f_members(n, up)
        elif r == 2:
            members = _f_members(n, half) + _f_members(n, half + 1)
        elif r == 3:
            members = [PatternId.hni(n, up + 1)] + _f_members(n, up)
        elif r == 4:
            members = [PatternId.hni(n, half + 1)]
        else:
            members = [PatternId.hni(n, up)]
        return ExtremalFamily(n, objective, members)

    flag = scope_flag("extremal_triangles", n)
    if flag:
        return ExtremalFamily(n, objective, [], flag)
    half, up = n // 2, (n + 1) // 2
    i = {0: half, 1: half, 2: half - 1, 3: up + 1, 4: up + 1, 5: up}[n % 6]
    return ExtremalFamily(n, objective, [PatternId.hni(n, i)])
