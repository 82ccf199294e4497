"""Dense small graphs stored as adjacency-row bitsets, plus graph6 I/O.

Vertices are ``0..n-1`` with ``n <= 64``; ``adj[v]`` is a Python int whose
bit ``u`` is set iff ``uv`` is an edge.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator

MAX_N = 64

# Edge types: 0 means the edge lies in no triangle, 4 means "4 or more".
TYPE_NONE = 0
TYPE_4PLUS = 4

Edge = tuple[int, int]
Triangle = tuple[int, int, int]


class Graph6Error(ValueError):
    """Malformed graph6 input; ``offset`` is the byte position of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Immutable simple undirected graph on at most 64 vertices."""

    __slots__ = ("n", "adj", "_hash")

    def __init__(self, n: int, adj: Iterable[int]):
        adj = tuple(adj)
        if not 0 <= n <= MAX_N:
            raise ValueError(f"n must be in [0, {MAX_N}], got {n}")
        if len(adj) != n:
            raise ValueError(f"expected {n} adjacency rows, got {len(adj)}")
        full = (1 << n) - 1
        for v, row in enumerate(adj):
            if row & ~full:
                raise ValueError(f"row {v} has bits at or above n={n}")
            if row >> v & 1:
                raise ValueError(f"self-loop at vertex {v}")
            for u in bits(row):
                if not adj[u] >> v & 1:
                    raise ValueError(f"asymmetric adjacency between {v} and {u}")
        self.n = n
        self.adj = adj
        self._hash = None

    @classmethod
    def _trusted(cls, n: int, adj: tuple[int, ...]) -> "Graph":
        # Skips validation; callers guarantee the invariants.
        g = object.__new__(cls)
        g.n = n
        g.adj = adj
        g._hash = None
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, adj)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, [0] * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, [full ^ (1 << v) for v in range(n)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.adj))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, e={self.num_edges()}, g6={graph6_encode(self)!r})"

    # -- basic queries -------------------------------------------------

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    def num_edges(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def edges(self) -> list[Edge]:
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.adj[v]))

    # -- derived graphs ------------------------------------------------

    def add_edge(self, u: int, v: int) -> "Graph":
        if u == v:
            raise ValueError("self-loop")
        adj = list(self.adj)
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        return Graph._trusted(self.n, tuple(adj))

    def remove_edge(self, u: int, v: int) -> "Graph":
        adj = list(self.adj)
        adj[u] &= ~(1 << v)
        adj[v] &= ~(1 << u)
        return Graph._trusted(self.n, tuple(adj))

    def add_vertex(self, neighbors: int) -> "Graph":
        """Append vertex ``n`` adjacent to the vertex bitmask ``neighbors``."""
        n = self.n
        if n >= MAX_N:
            raise ValueError("graph already has 64 vertices")
        bit = 1 << n
        adj = tuple(row | bit if neighbors >> v & 1 else row for v, row in enumerate(self.adj))
        return Graph._trusted(n + 1, adj + (neighbors,))

    def induced(self, vertices: Iterable[int]) -> "Graph":
        """Subgraph induced on ``vertices``, relabelled ``0..k-1`` in the given order."""
        vs = list(vertices)
        pos = {v: i for i, v in enumerate(vs)}
        adj = []
        for v in vs:
            row = 0
            for u in bits(self.adj[v]):
                if u in pos:
                    row |= 1 << pos[u]
            adj.append(row)
        return Graph._trusted(len(vs), tuple(adj))

    def delete_vertex(self, v: int) -> "Graph":
        return self.induced(u for u in range(self.n) if u != v)

    def relabel(self, perm: list[int]) -> "Graph":
        """Return the graph with vertex ``v`` renamed ``perm[v]``."""
        adj = [0] * self.n
        for v, row in enumerate(self.adj):
            new = 0
            for u in bits(row):
                new |= 1 << perm[u]
            adj[perm[v]] = new
        return Graph._trusted(self.n, tuple(adj))

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph._trusted(self.n, tuple(full ^ row ^ (1 << v) for v, row in enumerate(self.adj)))

    def is_bipartite(self) -> bool:
        side = [-1] * self.n
        for s in range(self.n):
            if side[s] >= 0:
                continue
            side[s] = 0
            stack = [s]
            while stack:
                v = stack.pop()
                for u in bits(self.adj[v]):
                    if side[u] < 0:
                        side[u] = 1 - side[v]
                        stack.append(u)
                    elif side[u] == side[v]:
                        return False
        return True


# -- triangles and edge types -------------------------------------------


def triangle_list(g: Graph) -> list[Triangle]:
    out = []
    adj = g.adj
    for a in range(g.n):
        higher = adj[a] >> (a + 1) << (a + 1)
        for b in bits(higher):
            for c in bits(adj[b] & higher & ~((1 << (b + 1)) - 1)):
                out.append((a, b, c))
    return out


def triangle_count(g: Graph) -> int:
    adj = g.adj
    total = 0
    for a in range(g.n):
        higher = adj[a] >> (a + 1) << (a + 1)
        for b in bits(higher):
            total += (adj[b] & higher).bit_count()
    # each triangle a<b<c is counted once for (a,b) and once for (a,c)
    return total // 2


def vertex_triangle_degrees(g: Graph) -> list[int]:
    """Number of triangles through each vertex."""
    adj = g.adj
    return [sum((adj[u] & row).bit_count() for u in bits(row)) // 2 for row in adj]


def common_neighbors(g: Graph, u: int, v: int) -> int:
    return (g.adj[u] & g.adj[v]).bit_count()


def edge_type(g: Graph, u: int, v: int) -> int:
    """Triangles through edge ``uv`` clamped to 0..4 (4 meaning 4 or more).

    0 is a legitimate answer for an edge in no triangle.
    """
    if not g.has_edge(u, v):
        raise ValueError(f"({u}, {v}) is not an edge")
    return min((g.adj[u] & g.adj[v]).bit_count(), TYPE_4PLUS)


# -- graph6 ---------------------------------------------------------------


def graph6_encode(g: Graph) -> str:
    n = g.n
    if n <= 62:
        head = [n + 63]
    else:
        head = [126, 63 + (n >> 12 & 63), 63 + (n >> 6 & 63), 63 + (n & 63)]
    body = []
    acc = 0
    k = 0
    for j in range(1, n):
        row = g.adj[j]
        for i in range(j):
            acc = acc << 1 | (row >> i & 1)
            k += 1
            if k == 6:
                body.append(acc + 63)
                acc = k = 0
    if k:
        body.append((acc << (6 - k)) + 63)
    return bytes(head + body).decode("ascii")


def graph6_decode(s: str | bytes) -> Graph:
    data = s.encode("ascii") if isinstance(s, str) else bytes(s)
    data = data.strip()
    pos = 0
    if data.startswith(b">>graph6<<"):
        pos = len(b">>graph6<<")
    if pos >= len(data):
        raise Graph6Error("missing vertex count", pos)
    for i in range(pos, len(data)):
        if not 63 <= data[i] <= 126:
            raise Graph6Error(f"byte {data[i]!r} outside graph6 range 63..126", i)
    if data[pos] < 126:
        n = data[pos] - 63
        pos += 1
    else:
        if len(data) < pos + 4:
            raise Graph6Error("truncated vertex count", pos)
        if data[pos + 1] == 126:
            raise Graph6Error("8-byte vertex counts exceed the 64-vertex limit", pos + 1)
        n = ((data[pos + 1] - 63) << 12) | ((data[pos + 2] - 63) << 6) | (data[pos + 3] - 63)
        pos += 4
    if n > MAX_N:
        raise Graph6Error(f"n={n} exceeds the 64-vertex limit", pos - 1)
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(data) - pos != need:
        raise Graph6Error(f"expected {need} data bytes for n={n}, got {len(data) - pos}", pos)
    adj = [0] * n
    idx = 0
    pairs = ((i, j) for j in range(1, n) for i in range(j))
    for offset in range(pos, len(data)):
        val = data[offset] - 63
        for shift in range(5, -1, -1):
            if idx >= nbits:
                if val >> shift & 1:
                    raise Graph6Error("nonzero padding bits", offset)
                continue
            if val >> shift & 1:
                i, j = next(pairs)
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            else:
                next(pairs)
            idx += 1
    return Graph._trusted(n, tuple(adj))


def all_pairs(n: int) -> list[Edge]:
    return list(combinations(range(n), 2))
