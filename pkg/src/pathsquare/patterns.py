"""Named graph families and (non-induced) subgraph containment."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .canon import canonical_form
from .graph import Graph, bits


class PatternError(ValueError):
    pass


_ARITY = {"P": 2, "TP": 1, "K": 1, "K5-": 0, "T": 2, "S": 1, "H": 2, "F": 3, "MB": 1}


@dataclass(frozen=True)
class PatternId:
    """A named graph: ``kind`` plus integer parameters.

    kinds: ``P`` (k, p) power of a path, ``TP`` (k,) triangular pyramid,
    ``K`` (s,) complete graph, ``K5-`` (), ``T`` (n, r) Turan graph, ``S`` (k,)
    star with k leaves, ``H`` (n, i), ``F`` (n, i, j), ``MB`` (n,) complete
    balanced bipartite graph with a maximal matching in each part.
    """

    kind: str
    args: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in _ARITY:
            raise PatternError(f"unknown pattern kind {self.kind!r}")
        if len(self.args) != _ARITY[self.kind]:
            raise PatternError(f"{self.kind} takes {_ARITY[self.kind]} parameters, got {len(self.args)}")
        _validate(self.kind, self.args)

    def __str__(self) -> str:
        k, a = self.kind, self.args
        if k == "P":
            return f"P{a[0]}^{a[1]}"
        if k in ("TP", "K", "S"):
            return f"{k}{a[0]}"
        if k == "K5-":
            return "K5-"
        return f"{k}({','.join(map(str, a))})"

    # constructors mirroring the glossary names
    @classmethod
    def path_power(cls, k: int, p: int) -> "PatternId":
        return cls("P", (k, p))

    @classmethod
    def pyramid(cls, k: int) -> "PatternId":
        return cls("TP", (k,))

    @classmethod
    def clique(cls, s: int) -> "PatternId":
        return cls("K", (s,))

    @classmethod
    def k5_minus(cls) -> "PatternId":
        return cls("K5-")

    @classmethod
    def turan(cls, n: int, r: int) -> "PatternId":
        return cls("T", (n, r))

    @classmethod
    def star(cls, k: int) -> "PatternId":
        return cls("S", (k,))

    @classmethod
    def hni(cls, n: int, i: int) -> "PatternId":
        return cls("H", (n, i))

    @classmethod
    def fnij(cls, n: int, i: int, j: int) -> "PatternId":
        return cls("F", (n, i, j))

    @classmethod
    def matched_bipartite(cls, n: int) -> "PatternId":
        return cls("MB", (n,))


def _validate(kind, a):
    if kind == "P":
        k, p = a
        if k < 1 or p < 1:
            raise PatternError(f"path power needs k >= 1 and p >= 1, got k={k}, p={p}")
    elif kind in ("TP",):
        if a[0] < 1:
            raise PatternError(f"TP_k needs k >= 1, got {a[0]}")
    elif kind in ("K", "S"):
        if a[0] < 0:
            raise PatternError(f"{kind} needs a nonnegative size, got {a[0]}")
    elif kind == "T":
        n, r = a
        if r < 1 or n < 0:
            raise PatternError(f"Turan graph needs r >= 1 and n >= 0, got n={n}, r={r}")
    elif kind == "H":
        n, i = a
        if i % 3:
            raise PatternError(f"H(n,i) needs 3 | i, got i={i}")
        if not 0 <= i <= n:
            raise PatternError(f"H(n,i) needs 0 <= i <= n, got n={n}, i={i}")
    elif kind == "F":
        n, i, j = a
        if i % 3 == 0:
            raise PatternError(f"F(n,i,j) needs 3 not dividing i, got i={i}")
        if (i - j) % 3:
            raise PatternError(f"F(n,i,j) needs 3 | (i-j), got i={i}, j={j}")
        if not 1 <= j <= i <= n:
            raise PatternError(f"F(n,i,j) needs 1 <= j <= i <= n, got n={n}, i={i}, j={j}")
    elif kind == "MB":
        if a[0] < 0 or a[0] % 2:
            raise PatternError(f"MB(n) needs even n >= 0, got {a[0]}")
    if kind in ("T", "H", "F", "MB") and a[0] > 64:
        raise PatternError(f"n={a[0]} exceeds the 64-vertex limit")


_SYNTAX = [
    (re.compile(r"^P(\d+)\^(\d+)$"), "P"),
    (re.compile(r"^TP(\d+)$"), "TP"),
    (re.compile(r"^K5-$"), "K5-"),
    (re.compile(r"^K(\d+)$"), "K"),
    (re.compile(r"^S(\d+)$"), "S"),
    (re.compile(r"^T\((\d+),(\d+)\)$"), "T"),
    (re.compile(r"^H\((\d+),(\d+)\)$"), "H"),
    (re.compile(r"^F\((\d+),(\d+),(\d+)\)$"), "F"),
    (re.compile(r"^MB\((\d+)\)$"), "MB"),
]


def parse_pattern(text: str) -> PatternId:
    """Parse ``P6^2``, ``TP3``, ``K5``, ``K5-``, ``T(12,2)``, ``H(12,6)``, ``F(13,7,1)``, ``S4``, ``MB(12)``."""
    s = re.sub(r"\s+", "", text).upper()
    for rx, kind in _SYNTAX:
        m = rx.match(s)
        if m:
            return PatternId(kind, tuple(int(x) for x in m.groups()))
    raise PatternError(f"unrecognised pattern {text!r}")


# -- constructions ---------------------------------------------------------


def _triangles_on(start, count):
    for t in range(count):
        a = start + 3 * t
        yield from ((a, a + 1), (a, a + 2), (a + 1, a + 2))


def _bipartite(i, n):
    return [(x, y) for x in range(i) for y in range(i, n)]


@lru_cache(maxsize=512)
def build(p: PatternId) -> Graph:
    """Materialise a pattern with its fixed labelling.

    Bipartite-based constructions use X = 0..i-1 and Y = i..n-1.  H(n,i)
    puts triangles on consecutive triples of X; F(n,i,j) puts the star
    centred at 0 on 0..j-1 and triangles on consecutive triples of j..i-1.
    TP_k is labelled layer by layer, left to right.
    """
    k, a = p.kind, p.args
    if k == "P":
        length, power = a
        edges = [(u, v) for u in range(length) for v in range(u + 1, min(length, u + power + 1))]
        return Graph.from_edges(length, edges)
    if k == "TP":
        layers = a[0] + 1
        start = [r * (r - 1) // 2 for r in range(1, layers + 1)]
        edges = []
        for r in range(1, layers + 1):
            base = start[r - 1]
            edges += [(base + c, base + c + 1) for c in range(r - 1)]
            if r > 1:
                prev = start[r - 2]
                for c in range(r - 1):
                    edges += [(prev + c, base + c), (prev + c, base + c + 1)]
        return Graph.from_edges(layers * (layers + 1) // 2, edges)
    if k == "K":
        return Graph.complete(a[0])
    if k == "K5-":
        return Graph.complete(5).remove_edge(3, 4)
    if k == "S":
        return Graph.from_edges(a[0] + 1, [(0, v) for v in range(1, a[0] + 1)])
    if k == "T":
        n, r = a
        sizes = [n // r + (1 if t < n % r else 0) for t in range(r)]
        part = []
        for t, s in enumerate(sizes):
            part += [t] * s
        return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if part[u] != part[v]])
    if k == "H":
        n, i = a
        return Graph.from_edges(n, _bipartite(i, n) + list(_triangles_on(0, i // 3)))
    if k == "F":
        n, i, j = a
        star = [(0, v) for v in range(1, j)]
        return Graph.from_edges(n, _bipartite(i, n) + star + list(_triangles_on(j, (i - j) // 3)))
    if k == "MB":
        n = a[0]
        h = n // 2
        matching = [(2 * t, 2 * t + 1) for t in range(n // 4)]
        matching += [(h + 2 * t, h + 2 * t + 1) for t in range(n // 4)]
        return Graph.from_edges(n, _bipartite(h, n) + matching)
    raise PatternError(f"unknown pattern kind {k!r}")  # pragma: no cover


# -- containment -------------------------------------------------------------


# hosts at least this large get the common-neighbour edge filter
CODEGREE_MIN_N = 16


class _Compiled:
    """Pattern data reused across embedding searches."""

    def __init__(self, pattern: Graph):
        self.graph = pattern
        self.n = pattern.n
        self.deg = pattern.degrees()
        c = canonical_form(pattern)
        orb = c.orbits()
        self.vertex_reps = sorted(set(orb))
        arcs = [(u, v) for u in range(self.n) for v in bits(pattern.adj[u])]
        index = {arc: t for t, arc in enumerate(arcs)}
        parent = list(range(len(arcs)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for gen in c.generators:
            for t, (u, v) in enumerate(arcs):
                a, b = find(t), find(index[(gen[u], gen[v])])
                if a != b:
                    parent[max(a, b)] = min(a, b)
        self.arc_reps = [arcs[t] for t in sorted({find(t) for t in range(len(arcs))})]
        self.max_codeg = max(((pattern.adj[u] & pattern.adj[v]).bit_count() for u, v in arcs), default=0)
        self._plans = {}

    def plan(self, fixed: tuple[int, ...]):
        """Vertex order starting with ``fixed``; each step lists its earlier neighbours."""
        if fixed in self._plans:
            return self._plans[fixed]
        adj = self.graph.adj
        order = list(fixed)
        placed = 0
        for v in order:
            placed |= 1 << v
        rest = [v for v in range(self.n) if v not in fixed]
        while rest:
            # most already-placed neighbours first, then higher degree, then lower index
            v = max(rest, key=lambda u: ((adj[u] & placed).bit_count(), self.deg[u], -u))
            rest.remove(v)
            order.append(v)
            placed |= 1 << v
        pos = {v: t for t, v in enumerate(order)}
        steps = []
        for t, v in enumerate(order):
            # (earlier position, common neighbours the host edge must have)
            back = [(pos[u], (adj[u] & adj[v]).bit_count()) for u in bits(adj[v]) if pos[u] < t]
            steps.append((v, tuple(back), self.deg[v]))
        self._plans[fixed] = (order, steps)
        return self._plans[fixed]


@lru_cache(maxsize=256)
def _compiled(pattern: Graph) -> _Compiled:
    return _Compiled(pattern)


def _codegree_rows(host: Graph, kmax: int) -> list[list[int]]:
    """rows[k][u]: neighbours w of u with at least k common neighbours with u."""
    hadj = host.adj
    rows = [list(hadj)] + [[0] * host.n for _ in range(kmax)]
    for u in range(host.n):
        for w in bits(hadj[u]):
            if w < u:
                continue
            c = min((hadj[u] & hadj[w]).bit_count(), kmax)
            for k in range(1, c + 1):
                rows[k][u] |= 1 << w
                rows[k][w] |= 1 << u
    return rows


def _search(host: Graph, cp: _Compiled, fixed: dict[int, int], rows=None) -> Optional[list[int]]:
    """Backtracking embedding search; returns images in plan order or None.

    ``rows`` (from :func:`_codegree_rows`) tightens candidate sets; it pays
    for itself only on one long search over a large host.
    """
    order, steps = cp.plan(tuple(fixed))
    hadj = host.adj
    hn = host.n
    k = len(steps)
    if k > hn:
        return None
    maxdeg = max(cp.deg, default=0)
    by_deg = [0] * (maxdeg + 1)
    for v in range(hn):
        d = min(hadj[v].bit_count(), maxdeg)
        for t in range(d + 1):
            by_deg[t] |= 1 << v
    img = [0] * k
    nfix = len(fixed)
    used = 0
    for t in range(nfix):
        pv, back, d = steps[t]
        hv = fixed[pv]
        if not by_deg[d] >> hv & 1 or used >> hv & 1:
            return None
        for b, c in back:
            if not (rows[c] if rows else hadj)[img[b]] >> hv & 1:
                return None
        img[t] = hv
        used |= 1 << hv
    if nfix == k:
        return img

    def rec(t, used):
        pv, back, d = steps[t]
        cand = by_deg[d] & ~used
        if rows is None:
            for b, _ in back:
                cand &= hadj[img[b]]
        else:
            for b, c in back:
                cand &= rows[c][img[b]]
        last = t == k - 1
        while cand:
            low = cand & -cand
            cand ^= low
            img[t] = low.bit_length() - 1
            if last or rec(t + 1, used | low):
                return True
        return False

    return img if rec(nfix, used) else None


def _as_mapping(cp, fixed, img):
    order, _ = cp.plan(tuple(fixed))
    out = [0] * cp.n
    for pv, hv in zip(order, img):
        out[pv] = hv
    return out


def contains(host: Graph, pattern: Graph) -> Optional[list[int]]:
    """Find an injective map sending every pattern edge onto a host edge.

    Returns ``m`` with ``m[pattern_vertex] = host_vertex``, or None.
    """
    if pattern.n > host.n or pattern.num_edges() > host.num_edges():
        return None
    cp = _compiled(pattern)
    # an edge in c pattern triangles must land on an edge with >= c common neighbours
    rows = _codegree_rows(host, cp.max_codeg) if host.n >= CODEGREE_MIN_N else None
    img = _search(host, cp, {}, rows)
    return None if img is None else _as_mapping(cp, {}, img)


def contains_through_vertex(host: Graph, pattern: Graph, v: int) -> bool:
    """True iff some embedding of ``pattern`` into ``host`` uses host vertex ``v``."""
    if pattern.n > host.n:
        return False
    cp = _compiled(pattern)
    for p in cp.vertex_reps:
        if _search(host, cp, {p: v}) is not None:
            return True
    return False


def contains_new_edge(host: Graph, pattern: Graph, e: tuple[int, int]) -> bool:
    """True iff some embedding maps a pattern edge onto host edge ``e``.

    If ``host - e`` is pattern-free then ``host`` is pattern-free exactly when
    this returns False.
    """
    a, b = e
    if not host.has_edge(a, b):
        raise ValueError(f"{e} is not an edge of the host")
    if pattern.n > host.n:
        return False
    cp = _compiled(pattern)
    for p, q in cp.arc_reps:
        if _search(host, cp, {p: a, q: b}) is not None:
            return True
    return False


def is_free(host: Graph, p: PatternId | Graph) -> bool:
    pattern = build(p) if isinstance(p, PatternId) else p
    return contains(host, pattern) is None
