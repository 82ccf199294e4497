"""Canonical labelling by colour refinement and individualisation.

The search tree is the usual one: refine to an equitable ordered partition,
individualise each vertex of the first non-singleton cell, recurse.  Leaves
are compared by the relabelled adjacency rows and the largest wins.  Leaves
that tie with the first or the best leaf yield automorphisms, which prune
children in the same orbit and trigger a jump back to the common ancestor.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph, bits, graph6_encode


@dataclass(frozen=True)
class Canon:
    graph: Graph
    # perm[v] is the canonical label of input vertex v
    perm: tuple[int, ...]
    generators: tuple[tuple[int, ...], ...]

    def orbits(self) -> list[int]:
        """Orbit representative (smallest member) of each vertex under the found automorphisms."""
        return _orbits(len(self.perm), self.generators)


def _refine(adj, cells):
    """Refine an ordered partition (list of vertex lists) to an equitable one."""
    while True:
        k = len(cells)
        if k == len(adj):
            return cells
        masks = []
        for cell in cells:
            m = 0
            for v in cell:
                m |= 1 << v
            masks.append(m)
        new_cells = []
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            groups = {}
            for v in cell:
                row = adj[v]
                sig = tuple([(row & m).bit_count() for m in masks])
                groups.setdefault(sig, []).append(v)
            if len(groups) == 1:
                new_cells.append(cell)
            else:
                for sig in sorted(groups):
                    new_cells.append(groups[sig])
        if len(new_cells) == k:
            return new_cells
        cells = new_cells


def _certificate(adj, lab):
    inv = [0] * len(lab)
    for i, v in enumerate(lab):
        inv[v] = i
    out = []
    for v in lab:
        row = 0
        for u in bits(adj[v]):
            row |= 1 << inv[u]
        out.append(row)
    return tuple(out)


def _orbits(n, generators):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for gen in generators:
        for v, w in enumerate(gen):
            a, b = find(v), find(w)
            if a != b:
                if a < b:
                    parent[b] = a
                else:
                    parent[a] = b
    return [find(v) for v in range(n)]


class _Search:
    def __init__(self, adj):
        self.adj = adj
        self.first_path = None
        self.first_cert = None
        self.first_lab = None
        self.best_path = None
        self.best_cert = None
        self.best_lab = None
        self.generators = []

    def run(self, cells, path):
        cells = _refine(self.adj, cells)
        if len(cells) == len(self.adj):
            return self._leaf([c[0] for c in cells], path)
        target = next(i for i, c in enumerate(cells) if len(c) > 1)
        depth = len(path)
        explored = []
        for v in sorted(cells[target]):
            if explored and self._equivalent(v, explored, path):
                continue
            explored.append(v)
            child = cells[:target] + [[v], [u for u in cells[target] if u != v]] + cells[target + 1:]
            jump = self.run(child, path + [v])
            if jump is not None and jump < depth:
                return jump
        return None

    def _equivalent(self, v, explored, path):
        fixing = [g for g in self.generators if all(g[p] == p for p in path)]
        if not fixing:
            return False
        orb = _orbits(len(self.adj), fixing)
        return any(orb[v] == orb[u] for u in explored)

    def _leaf(self, lab, path):
        cert = _certificate(self.adj, lab)
        if self.first_cert is None:
            self.first_cert = self.best_cert = cert
            self.first_lab = self.best_lab = lab
            self.first_path = self.best_path = path
            return None
        if cert == self.first_cert:
            self._record(self.first_lab, lab)
            return _common_prefix(path, self.first_path)
        if cert == self.best_cert:
            self._record(self.best_lab, lab)
            return _common_prefix(path, self.best_path)
        if cert > self.best_cert:
            self.best_cert = cert
            self.best_lab = lab
            self.best_path = path
        return None

    def _record(self, lab_a, lab_b):
        gen = [0] * len(lab_a)
        for a, b in zip(lab_a, lab_b):
            gen[a] = b
        gen = tuple(gen)
        if any(gen[i] != i for i in range(len(gen))):
            self.generators.append(gen)


def _common_prefix(a, b):
    k = 0
    for x, y in zip(a, b):
        if x != y:
            break
        k += 1
    return k


def canonical_form(g: Graph, partition: list[list[int]] | None = None) -> Canon:
    """Canonical relabelling of ``g``; isomorphic inputs give equal ``Canon.graph``.

    ``partition`` optionally fixes an ordered vertex colouring that labellings
    must respect (colour classes keep their order).
    """
    n = g.n
    if n == 0:
        return Canon(g, (), ())
    cells = [list(c) for c in partition] if partition else [list(range(n))]
    s = _Search(g.adj)
    s.run(cells, [])
    perm = [0] * n
    for i, v in enumerate(s.best_lab):
        perm[v] = i
    return Canon(Graph._trusted(n, s.best_cert), tuple(perm), tuple(s.generators))


def canonical_graph(g: Graph) -> Graph:
    return canonical_form(g).graph


def canonical_graph6(g: Graph) -> str:
    return graph6_encode(canonical_form(g).graph)


def is_isomorphic(a: Graph, b: Graph) -> bool:
    if a.n != b.n or a.num_edges() != b.num_edges() or sorted(a.degrees()) != sorted(b.degrees()):
        return False
    return canonical_form(a).graph == canonical_form(b).graph
