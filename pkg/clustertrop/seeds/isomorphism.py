from fractions import Fraction
from typing import Dict, Iterator, List

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from clustertrop.seeds.seed import Seed


def _seed_graph(S: Seed, indices: List[int]) -> nx.DiGraph:
    graph = nx.DiGraph()
    scale = min(S.d[i] for i in indices)
    for i in indices:
        graph.add_node(i, d=Fraction(S.d[i]) / scale, frozen=i in S.frozen)
    eps = S.epsilon
    for i in indices:
        for j in indices:
            if i != j and eps[i][j] != 0:
                graph.add_edge(i, j, eps=eps[i][j])
    return graph


def seed_isomorphisms(source: Seed, target: Seed, strict=False) -> Iterator[Dict[int, int]]:
    """Relabelings h with e_i -> e'_{h(i)} preserving multipliers and forms.

    In strict mode every index is matched and frozen vectors go to frozen
    vectors. Otherwise only the non-frozen indices are matched.
    """
    if source.n != target.n:
        return
    if strict:
        first, second = list(range(source.n)), list(range(target.n))
    else:
        first, second = source.non_frozen, target.non_frozen
    if len(first) != len(second):
        return
    if not first:
        yield {}
        return
    matcher = DiGraphMatcher(
        _seed_graph(source, first),
        _seed_graph(target, second),
        node_match=lambda x, y: x["d"] == y["d"] and (not strict or x["frozen"] == y["frozen"]),
        edge_match=lambda x, y: x["eps"] == y["eps"],
    )
    for mapping in matcher.isomorphisms_iter():
        yield dict(sorted(mapping.items()))
