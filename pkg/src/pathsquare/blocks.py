"""Triangle blocks: decomposition, classification, red/blue colouring, audit.

A block is a maximal set of triangles connected through shared edges.  In a
P6^2-free, K5-free graph every block is one of four shapes (K5^-, K4,
pyramid, suspension); :func:`classify` checks the shape explicitly instead
of assuming it, so a failure is reported as :class:`ClaimViolation`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .formulas import ex_edges_p62, f_of, turan_edges
from .graph import Edge, Graph, Triangle, bits, triangle_list
from .patterns import PatternId, build, contains, is_free

K5_MINUS = "K5-"
K4 = "K4"
PYRAMID = "TP2"
SUSPENSION = "suspension"


class ClaimViolation(Exception):
    """A block failed its structural witness check."""

    def __init__(self, message: str, block: "Block"):
        super().__init__(message)
        self.block = block


class HypothesisViolation(ValueError):
    """Input graph does not satisfy the hypothesis an operation relies on."""


@dataclass(frozen=True)
class BlockKind:
    name: str
    red_edges: tuple[Edge, ...]
    # core triangle for K5-/TP2, the K4's vertices for K4
    core: tuple[int, ...] = ()
    apex: int | None = None
    bare: bool = False

    def __str__(self) -> str:
        if self.name == SUSPENSION:
            return f"suspension(apex={self.apex})"
        if self.name == K4 and self.bare:
            return "K4(bare)"
        return f"{self.name}(core={list(self.core)})"


@dataclass
class Block:
    triangles: list[Triangle]
    edges: list[Edge]
    vertices: list[int]
    kind: BlockKind | None = None

    def graph(self, n: int) -> Graph:
        adj = [0] * n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return Graph._trusted(n, tuple(adj))


@dataclass
class BlockDecomposition:
    n: int
    blocks: list[Block]
    unassigned_edges: list[Edge]


def _tri_edges(t):
    a, b, c = t
    return ((a, b), (a, c), (b, c))


def normalize(g: Graph) -> Graph:
    """Delete every edge that lies in no triangle."""
    adj = list(g.adj)
    for u, v in g.edges():
        if not g.adj[u] & g.adj[v]:
            adj[u] &= ~(1 << v)
            adj[v] &= ~(1 << u)
    return Graph._trusted(g.n, tuple(adj))


def _make_block(tris):
    tris = sorted(tris)
    edges = sorted({e for t in tris for e in _tri_edges(t)})
    verts = sorted({v for t in tris for v in t})
    return Block(tris, edges, verts)


def _components(tris: list[Triangle]) -> list[list[Triangle]]:
    by_edge: dict[Edge, list[int]] = {}
    for idx, t in enumerate(tris):
        for e in _tri_edges(t):
            by_edge.setdefault(e, []).append(idx)
    parent = list(range(len(tris)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for members in by_edge.values():
        for m in members[1:]:
            a, b = find(members[0]), find(m)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[Triangle]] = {}
    for idx, t in enumerate(tris):
        groups.setdefault(find(idx), []).append(t)
    return list(groups.values())


def decompose(g: Graph) -> BlockDecomposition:
    """Blocks ordered by their smallest triangle; triangle-free edges go to ``unassigned_edges``."""
    tris = triangle_list(g)
    blocks = sorted((_make_block(ts) for ts in _components(tris)), key=lambda b: b.triangles[0])
    covered = {e for t in tris for e in _tri_edges(t)}
    unassigned = [e for e in g.edges() if e not in covered]
    return BlockDecomposition(g.n, blocks, unassigned)


def grow(g: Graph, seed: list[Edge]) -> Block:
    """Close ``seed`` under adding every triangle that shares an edge with the current set."""
    if not seed:
        raise ValueError("seed must be a non-empty edge set")
    current = set()
    for u, v in seed:
        if not g.has_edge(u, v):
            raise ValueError(f"seed edge ({u}, {v}) is not an edge")
        current.add((min(u, v), max(u, v)))
    frontier = list(current)
    tris = set()
    while frontier:
        u, v = frontier.pop()
        for w in bits(g.adj[u] & g.adj[v]):
            t = tuple(sorted((u, v, w)))
            if t in tris:
                continue
            tris.add(t)
            for e in _tri_edges(t):
                if e not in current:
                    current.add(e)
                    frontier.append(e)
    if not tris:
        raise ValueError("seed edges lie in no triangle")
    if len(_components(sorted(tris))) > 1:
        raise ValueError("seed edges span more than one block")
    block = _make_block(tris)
    stray = current - set(block.edges)
    if stray:
        raise ValueError(f"seed edges {sorted(stray)} lie in no triangle")
    return block


# -- classification -------------------------------------------------------------


def _mask(vs):
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def _core_witness(bg: Graph, block: Block, allowed: tuple[int, ...]):
    """First block triangle whose complement in the block is independent with the allowed attachments."""
    vmask = _mask(block.vertices)
    for t in block.triangles:
        core = _mask(t)
        rest = vmask & ~core
        if all(not bg.adj[r] & rest and (bg.adj[r] & core).bit_count() in allowed for r in bits(rest)):
            return t
    return None


def _k4s(bg: Graph, block: Block):
    for a, b, c in block.triangles:
        for d in bits(bg.adj[a] & bg.adj[b] & bg.adj[c]):
            if d > c:
                yield (a, b, c, d)


def _k4_witness(bg: Graph, block: Block):
    vmask = _mask(block.vertices)
    for quad in _k4s(bg, block):
        if len(block.vertices) == 4 and len(block.triangles) == 4:
            u1, u2, u3, u4 = quad
            return BlockKind(K4, ((u1, u2), (u3, u4)), core=quad, bare=True)
        rest = vmask & ~_mask(quad)
        # triangle shapes first: their colouring never leaves a blue triangle
        tri_shapes = sorted(tuple(sorted(combinations(tri, 2))) for tri in combinations(quad, 3))
        star_shapes = sorted(tuple(sorted((min(c, x), max(c, x)) for x in quad if x != c)) for c in quad)
        for red in tri_shapes + star_shapes:
            pairs = {_mask(e) for e in red}
            if all(not bg.adj[r] & rest and (bg.adj[r] & vmask) in pairs for r in bits(rest)):
                return BlockKind(K4, red, core=quad)
    return None


def _suspension_witness(bg: Graph, block: Block):
    vmask = _mask(block.vertices)
    for u in block.vertices:
        others = vmask & ~(1 << u)
        if bg.adj[u] & others != others:
            continue
        # the block minus u must be triangle-free
        if all(u in t for t in block.triangles):
            return u
    return None


def _diagnose(g: Graph, block: Block, what: str) -> ClaimViolation:
    reasons = []
    if not is_free(g, PatternId.path_power(6, 2)):
        reasons.append("host contains P6^2")
    if not is_free(g, PatternId.clique(5)):
        reasons.append("host contains K5")
    why = "; ".join(reasons) if reasons else "host is P6^2-free and K5-free: the structural claim fails"
    return ClaimViolation(f"{what} witness not found for block {block.triangles[:3]}...: {why}", block)


def classify(g: Graph, b: Block) -> BlockKind:
    """Classify in priority order K5^- > K4 > TP2 > suspension, with a verified witness."""
    bg = b.graph(g.n)
    if contains(bg, build(PatternId.k5_minus())) is not None:
        core = _core_witness(bg, b, (2, 3))
        if core is None:
            raise _diagnose(g, b, "K5^- block")
        return BlockKind(K5_MINUS, tuple(combinations(core, 2)), core=core)
    if contains(bg, build(PatternId.clique(4))) is not None:
        kind = _k4_witness(bg, b)
        if kind is None:
            raise _diagnose(g, b, "K4 block")
        return kind
    if contains(bg, build(PatternId.pyramid(2))) is not None:
        core = _core_witness(bg, b, (2,))
        if core is None:
            raise _diagnose(g, b, "pyramid block")
        return BlockKind(PYRAMID, tuple(combinations(core, 2)), core=core)
    apex = _suspension_witness(bg, b)
    if apex is None:
        raise _diagnose(g, b, "suspension block")
    red = tuple(sorted((min(apex, v), max(apex, v)) for v in b.vertices if v != apex))
    return BlockKind(SUSPENSION, red, apex=apex)


def classify_all(g: Graph, d: BlockDecomposition | None = None) -> BlockDecomposition:
    d = d or decompose(g)
    for b in d.blocks:
        b.kind = classify(g, b)
    return d


# -- colouring -------------------------------------------------------------------


@dataclass
class Coloring:
    red: set[Edge]
    blue: set[Edge]
    # edge -> index of its block
    provenance: dict[Edge, int] = field(default_factory=dict)


def _red_set(kind: BlockKind, repair_star: bool) -> set[Edge]:
    red = set(kind.red_edges)
    if repair_star and kind.name == K4 and not kind.bare and len({v for e in red for v in e}) == 4:
        # star-shaped: the three leaves span a blue triangle; also redden one leaf pair
        centre = next(v for v in kind.core if all(v in e for e in red))
        leaves = sorted(v for v in kind.core if v != centre)
        red.add((leaves[0], leaves[1]))
    return red


def color(g: Graph, d: BlockDecomposition, repair_star: bool = False) -> Coloring:
    """Colour block edges red/blue by block kind.

    With ``repair_star`` a star-shaped K4 block also gets one red edge among
    the star's leaves, which removes the blue triangle they would otherwise span.
    """
    red, blue, prov = set(), set(), {}
    for idx, b in enumerate(d.blocks):
        if b.kind is None:
            raise ValueError("every block must be classified before colouring")
        r = _red_set(b.kind, repair_star)
        for e in b.edges:
            prov[e] = idx
            (red if e in r else blue).add(e)
    return Coloring(red, blue, prov)


# -- audit -------------------------------------------------------------------------


@dataclass
class BlockCount:
    kind: str
    triangles: int
    blue: int
    red: int
    # allowed surplus minus actual surplus of triangles over blue edges
    slack: int
    blue_triangles: int


@dataclass
class CountingReport:
    n: int
    triangles: int
    e_b: int
    e_r: int
    k5minus_blocks: int
    blocks: list[BlockCount]
    checks: dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> list[str]:
        return [name for name, good in self.checks.items() if not good]


def audit(g: Graph, repair_star: bool = False, check_hypothesis: bool = True) -> CountingReport:
    """Check the per-block counting claim and the basic inequalities on ``g``."""
    if check_hypothesis:
        if not is_free(g, PatternId.path_power(6, 2)):
            raise HypothesisViolation("graph contains P6^2")
        if not is_free(g, PatternId.clique(5)):
            raise HypothesisViolation("graph contains K5")
    h = normalize(g)
    d = classify_all(h)
    col = color(h, d, repair_star)
    n = g.n
    counts = []
    blue_adj = [0] * n
    for u, v in col.blue:
        blue_adj[u] |= 1 << v
        blue_adj[v] |= 1 << u
    for idx, b in enumerate(d.blocks):
        nb = sum(1 for e in b.edges if e in col.blue)
        nr = len(b.edges) - nb
        allowed = 1 if b.kind.name == K5_MINUS else 0
        bt = sum(1 for x, y, z in b.triangles if blue_adj[x] >> y & 1 and blue_adj[x] >> z & 1 and blue_adj[y] >> z & 1)
        counts.append(BlockCount(str(b.kind), len(b.triangles), nb, nr, nb + allowed - len(b.triangles), bt))
    t = sum(c.triangles for c in counts)
    e_b, e_r = len(col.blue), len(col.red)
    big_b = sum(1 for b in d.blocks if b.kind.name == K5_MINUS)
    t2 = turan_edges(n, 2)
    checks = {
        "per_block_count": all(c.slack >= 0 for c in counts),
        "blue_triangle_free": all(c.blue_triangles == 0 for c in counts),
        "t_le_eb_plus_B": t <= e_b + big_b,
        "e_le_t2_plus_f": n == 5 or e_b + e_r <= ex_edges_p62(n),
        "er_ge_3B": e_r >= 3 * big_b,
        "eb_le_t2": e_b <= t2,
        "t_le_t2_plus_f_div_3": t <= t2 + f_of(n) // 3,
    }
    return CountingReport(n, t, e_b, e_r, big_b, counts, checks)
