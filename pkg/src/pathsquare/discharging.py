"""Edge-to-triangle discharging certifying t(G) <= e(G) on P6^2-free graphs.

Every edge starts with charge 1.  An edge in exactly i <= 3 triangles sends
1/i to each of them.  An edge in 4 or more triangles sends an amount that
depends on the types of the other two edges of the receiving triangle
(:data:`TYPE4_RULE`).  Charges are exact :class:`fractions.Fraction` values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .blocks import HypothesisViolation
from .graph import TYPE_4PLUS, Edge, Graph, Triangle, bits, triangle_list
from .patterns import PatternId, is_free

TriangleType = tuple[int, int, int]

ZERO = Fraction(0)

# (other edge type, other edge type) -> charge a type-4 edge gives the triangle
TYPE4_RULE: dict[tuple[int, int], Fraction] = {
    (1, 1): ZERO,
    (1, 2): ZERO,
    (1, 3): ZERO,
    (1, 4): ZERO,
    (2, 2): ZERO,
    (2, 3): Fraction(1, 6),
    (3, 3): Fraction(1, 3),
    (2, 4): Fraction(1, 4),
    (3, 4): Fraction(1, 3),
    (4, 4): Fraction(1, 3),
}

CHARGE_VALUES = frozenset({ZERO, Fraction(1, 6), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(1)})


def _types(g: Graph) -> dict[Edge, int]:
    adj = g.adj
    return {(u, v): min((adj[u] & adj[v]).bit_count(), TYPE_4PLUS) for u, v in g.edges()}


def triangle_type(g: Graph, t: Triangle) -> TriangleType:
    a, b, c = sorted(t)
    if not (g.has_edge(a, b) and g.has_edge(a, c) and g.has_edge(b, c)):
        raise ValueError(f"{t} is not a triangle")
    adj = g.adj
    return tuple(sorted(min((adj[x] & adj[y]).bit_count(), TYPE_4PLUS) for x, y in ((a, b), (a, c), (b, c))))


@dataclass
class ChargeLedger:
    flows: dict[tuple[Edge, Triangle], Fraction]
    edge_out: dict[Edge, Fraction]
    tri_in: dict[Triangle, Fraction]
    edge_types: dict[Edge, int] = field(repr=False, default_factory=dict)


def assign_charges(g: Graph) -> ChargeLedger:
    types = _types(g)
    flows: dict[tuple[Edge, Triangle], Fraction] = {}
    edge_out = {e: ZERO for e in types}
    tri_in: dict[Triangle, Fraction] = {}
    for t in triangle_list(g):
        a, b, c = t
        sides = ((a, b), (a, c), (b, c))
        ts = [types[e] for e in sides]
        total = ZERO
        for k, e in enumerate(sides):
            if ts[k] < TYPE_4PLUS:
                q = Fraction(1, ts[k])
            else:
                others = tuple(sorted(ts[:k] + ts[k + 1:]))
                q = TYPE4_RULE[others]
            flows[(e, t)] = q
            edge_out[e] += q
            total += q
        tri_in[t] = total
    return ChargeLedger(flows, edge_out, tri_in, types)


@dataclass
class DischargeReport:
    triangles: int
    edges: int
    min_tri_in: Fraction | None
    max_edge_out: Fraction | None
    worst_triangle: Triangle | None
    worst_edge: Edge | None
    conserved: bool

    @property
    def inflow_ok(self) -> bool:
        return self.min_tri_in is None or self.min_tri_in >= 1

    @property
    def outflow_ok(self) -> bool:
        return self.max_edge_out is None or self.max_edge_out <= 1

    @property
    def passed(self) -> bool:
        return self.inflow_ok and self.outflow_ok and self.conserved

    @property
    def certifies(self) -> bool:
        """The ledger proves triangles <= edges for this graph."""
        return self.passed


def verify_discharge(g: Graph, ledger: ChargeLedger | None = None, check_hypothesis: bool = True) -> DischargeReport:
    """Run the discharging and report extreme inflow/outflow.

    Raises :class:`HypothesisViolation` when ``g`` contains P6^2, since the
    rules are only claimed sound without it.
    """
    if check_hypothesis and not is_free(g, PatternId.path_power(6, 2)):
        raise HypothesisViolation("graph contains P6^2; the discharging rules need not apply")
    ledger = ledger or assign_charges(g)
    worst_t = min(ledger.tri_in, key=lambda t: (ledger.tri_in[t], t), default=None)
    worst_e = max(ledger.edge_out, key=lambda e: (ledger.edge_out[e], e), default=None)
    conserved = sum(ledger.edge_out.values(), ZERO) == sum(ledger.tri_in.values(), ZERO)
    return DischargeReport(
        triangles=len(ledger.tri_in),
        edges=len(ledger.edge_out),
        min_tri_in=ledger.tri_in[worst_t] if worst_t is not None else None,
        max_edge_out=ledger.edge_out[worst_e] if worst_e is not None else None,
        worst_triangle=worst_t,
        worst_edge=worst_e,
        conserved=conserved,
    )


def diamond_claim_check(g: Graph) -> list[tuple[int, int, int, int]]:
    """Quadruples (x, y, z, w) with triangles xyz, xyw, yz of type 4+, but xw of type 3 or more."""
    adj = g.adj
    out = []
    for x in range(g.n):
        for y in bits(adj[x]):
            common = adj[x] & adj[y]
            for z in bits(common):
                if (adj[y] & adj[z]).bit_count() < TYPE_4PLUS:
                    continue
                for w in bits(common & ~(1 << z)):
                    if (adj[x] & adj[w]).bit_count() >= 3:
                        out.append((x, y, z, w))
    return out


def format_trace(ledger: ChargeLedger) -> str:
    lines = ["edge\ttriangle\tcharge"]
    for (e, t), q in sorted(ledger.flows.items()):
        lines.append(f"{e[0]}-{e[1]}\t{t[0]}-{t[1]}-{t[2]}\t{q.numerator}/{q.denominator}")
    return "\n".join(lines)
