import json

import networkx as nx
import pytest
from networkx.algorithms.isomorphism import GraphMatcher

from pathsquare.canon import canonical_graph, canonical_graph6
from pathsquare.formulas import Objective, ex_edges_p62
from pathsquare.graph import Graph, graph6_decode, triangle_count
from pathsquare.patterns import PatternId, build, is_free
from pathsquare.search import (
    BUDGETED,
    EXCLUDED,
    PROVEN,
    VERIFIED,
    SearchReport,
    SearchSpec,
    _enumerate,
    enumerate_free,
    exhaustive_max,
    naive_max,
    near_turan_triangle_free,
    random_free_graph,
    verify_theorem,
)

from conftest import from_nx, to_nx

P62 = PatternId.path_power(6, 2)
P52 = PatternId.path_power(5, 2)

# isomorphism classes of triangle-free graphs and of all graphs, n = 1, 2, ...
TRIANGLE_FREE = [1, 2, 3, 7, 14, 38, 107, 410, 1897]
ALL_GRAPHS = [1, 2, 4, 11, 34, 156, 1044]


def test_triangle_free_class_counts():
    got = [len(enumerate_free(n, PatternId.clique(3))) for n in range(1, 10)]
    assert got == TRIANGLE_FREE


@pytest.mark.parametrize("objective", list(Objective))
def test_all_graph_class_counts(objective):
    # the triangle-degree deletion rule must also reach every class exactly once
    got = [len(_enumerate(n, None, objective, 0, "all")[0]) for n in range(1, 8)]
    assert got == ALL_GRAPHS


def test_p62_free_classes_match_atlas():
    pat = to_nx(build(P62))
    for n in (6, 7):
        atlas = [h for h in nx.graph_atlas_g() if h.number_of_nodes() == n]
        free = {canonical_graph6(from_nx(h)) for h in atlas if not GraphMatcher(h, pat).subgraph_is_monomorphic()}
        ours = {canonical_graph6(g) for g in enumerate_free(n, P62)}
        assert ours == free


def test_search_examples():
    rep = exhaustive_max(SearchSpec(7, P62, Objective.TRIANGLES))
    assert rep.optimum >= 13 and rep.completeness == PROVEN
    rep = exhaustive_max(SearchSpec(7, P52, Objective.TRIANGLES))
    assert rep.optimum == 8
    rep = exhaustive_max(SearchSpec(8, P62, Objective.EDGES))
    assert rep.optimum == 19 == ex_edges_p62(8)


def test_report_invariants():
    rep = exhaustive_max(SearchSpec(8, P52, Objective.TRIANGLES))
    assert len(set(rep.extremal)) == len(rep.extremal) > 1
    for s in rep.extremal:
        g = graph6_decode(s)
        assert is_free(g, P52) and triangle_count(g) == rep.optimum
        assert canonical_graph6(g) == s


def test_monotone_in_n():
    values = [exhaustive_max(SearchSpec(n, P62, Objective.EDGES)).optimum for n in range(1, 10)]
    assert values == sorted(values)


def test_naive_agreement_small():
    for p in (P52, P62, PatternId.clique(4), PatternId.pyramid(2)):
        for objective in Objective:
            for n in range(1, 6):
                best, forms = naive_max(n, p, objective)
                rep = exhaustive_max(SearchSpec(n, p, objective))
                assert (rep.optimum, rep.extremal) == (best, forms)


def test_lower_bound_mode():
    rep = exhaustive_max(SearchSpec(20, P62, Objective.EDGES, mode="lower-bound"))
    assert rep.completeness == BUDGETED
    g = graph6_decode(rep.extremal[0])
    assert is_free(g, P62) and g.num_edges() == rep.optimum <= ex_edges_p62(20)


def test_budget():
    rep = exhaustive_max(SearchSpec(10, P62, Objective.TRIANGLES, max_nodes=5))
    assert rep.completeness == BUDGETED
    assert rep.nodes_explored <= 6
    for s in rep.extremal:
        assert is_free(graph6_decode(s), P62)


def test_soft_limit_warns():
    with pytest.warns(UserWarning):
        SearchSpec(17, P62)
    with pytest.raises(ValueError):
        SearchSpec(5, P62, mode="fast")


def test_hints_and_bad_lower_bound():
    h = build(PatternId.hni(9, 6))
    rep = exhaustive_max(SearchSpec(9, P62, Objective.EDGES), hints=[h, Graph.complete(9)])
    assert rep.optimum == 24
    with pytest.raises(ValueError):
        exhaustive_max(SearchSpec(8, P62, Objective.EDGES), lower_bound=25)


def test_jobs_match_serial():
    spec = SearchSpec(9, P62, Objective.TRIANGLES)
    a = exhaustive_max(spec)
    b = exhaustive_max(spec, jobs=2)
    assert (a.optimum, a.extremal) == (b.optimum, b.extremal)


def test_cache_roundtrip(tmp_path):
    spec = SearchSpec(8, P62, Objective.TRIANGLES)
    rep = exhaustive_max(spec, cache_dir=tmp_path)
    files = list(tmp_path.rglob("*.json"))
    assert [f.name for f in files] == ["triangles.json"]
    data = json.loads(files[0].read_text())
    assert set(data["8"]) == {"spec", "optimum", "extremal", "nodes_explored", "wall_time", "completeness", "lower_bound"}
    again = exhaustive_max(spec, cache_dir=tmp_path)
    assert again == rep
    assert SearchReport.from_json(rep.to_json()) == rep


def test_near_turan_examples():
    got = near_turan_triangle_free(6, 9)
    assert got == [canonical_graph(build(PatternId.turan(6, 2)))]
    for g in near_turan_triangle_free(9, 17):
        assert is_free(g, PatternId.clique(3)) and g.num_edges() >= 17


def test_random_free_graph():
    a = random_free_graph(12, P62, 1)
    assert a == random_free_graph(12, P62, 1)
    assert is_free(a, P62)
    # maximal for its edge order: adding any missing edge creates the pattern
    for u in range(12):
        for v in range(u + 1, 12):
            if not a.has_edge(u, v):
                assert not is_free(a.add_edge(u, v), P62)
    avg = sum(random_free_graph(12, P62, s).num_edges() for s in range(100)) / 100
    assert avg <= ex_edges_p62(12)


def test_verify_theorem_verdicts():
    out = verify_theorem("ex-edges-p62", [5, 6])
    assert [v.status for v in out] == [EXCLUDED, VERIFIED]
    assert out[1].family_match
    out = verify_theorem("ex-tri-p52", range(4, 8))
    assert all(v.status == VERIFIED for v in out)
    out = verify_theorem("ex-tri-p62", [9])
    assert out[0].status == "out-of-scope" and "oracle value recorded" in out[0].note
    with pytest.raises(ValueError):
        verify_theorem("nope", [6])
