from collections import deque
from fractions import Fraction
from math import gcd
from typing import List, Optional, Tuple

import networkx as nx
from loguru import logger

from clustertrop.linalg import det2, inertia
from clustertrop.seeds.seed import Seed


class Quiver:
    def __init__(self, vertices: List[Tuple[Fraction, bool]], arrows, scale: int = 1):
        self.vertices = list(vertices)
        self.arrows = tuple(tuple(int(x) for x in row) for row in arrows)
        # <e_i, e_j> = arrows[i][j] / scale
        self.scale = scale

    def graph(self, non_frozen_only=False) -> nx.DiGraph:
        graph = nx.DiGraph()
        for i, (d, frozen) in enumerate(self.vertices):
            if non_frozen_only and frozen:
                continue
            graph.add_node(i, d=d, frozen=frozen)
        for i in graph.nodes:
            for j in graph.nodes:
                if self.arrows[i][j] > 0:
                    graph.add_edge(i, j, count=self.arrows[i][j])
        return graph

    def to_dot(self) -> str:
        lines = ["digraph quiver {"]
        for i, (d, frozen) in enumerate(self.vertices):
            shape = "box" if frozen else "circle"
            lines.append(f'  {i} [label="{i} (d={d})", shape={shape}];')
        for i, j, data in sorted(self.graph().edges(data=True)):
            lines.append(f'  {i} -> {j} [label="{data["count"]}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def dump(self) -> dict:
        return {
            "vertices": [{"d": d, "frozen": frozen} for d, frozen in self.vertices],
            "arrows": [list(row) for row in self.arrows],
            "scale": self.scale,
        }


def quiver_of(S: Seed) -> Quiver:
    scale = 1
    for row in S.skew:
        for x in row:
            scale = scale * x.denominator // gcd(scale, x.denominator)
    arrows = [[int(x * scale) for x in row] for row in S.skew]
    return Quiver([(S.d[i], i in S.frozen) for i in range(S.n)], arrows, scale)


def is_acyclic(Q: Quiver) -> bool:
    """No oriented cycle avoiding the frozen vertices."""
    return nx.is_directed_acyclic_graph(Q.graph(non_frozen_only=True))


def half_plane_acyclic(S: Seed) -> bool:
    """All non-frozen v_i lie in one closed half-plane."""
    vectors = [S.nbar2.vectors[i] for i in S.non_frozen]
    for w in vectors:
        for normal in (w, (-w[0], -w[1])):
            if all(det2(normal, v) >= 0 for v in vectors):
                return True
    return len(vectors) <= 1


def cartan_positive(S: Seed) -> bool:
    """Positive definiteness of the symmetrized Cartan companion on the
    non-frozen indices."""
    indices = S.non_frozen
    if not indices:
        return True
    symmetrized = [
        [
            Fraction(2) / S.d[i] if i == j else -abs(S.skew[i][j])
            for j in indices
        ]
        for i in indices
    ]
    positive, _, _ = inertia(symmetrized)
    return positive == len(indices)


def _mutate_form(skew: Tuple, d: Tuple, j: int) -> Tuple:
    """The skew form in the basis of mutate(S, j)."""
    n = len(d)
    plus = [max(d[j] * skew[i][j], 0) if i != j else 0 for i in range(n)]
    rows = []
    for i in range(n):
        row = []
        for k in range(n):
            if i == j and k == j:
                row.append(skew[j][j])
            elif i == j:
                row.append(-skew[j][k] - plus[k] * skew[j][j])
            elif k == j:
                row.append(-skew[i][j] - plus[i] * skew[j][j])
            else:
                row.append(
                    skew[i][k] + plus[k] * skew[i][j] + plus[i] * skew[j][k]
                )
        rows.append(tuple(row))
    return tuple(rows)


def _form_acyclic(skew: Tuple, non_frozen: List[int]) -> bool:
    graph = nx.DiGraph()
    graph.add_nodes_from(non_frozen)
    graph.add_edges_from((i, j) for i in non_frozen for j in non_frozen if skew[i][j] > 0)
    return nx.is_directed_acyclic_graph(graph)


def acyclic_representative(S: Seed, max_forms: int = 5000) -> Optional[Seed]:
    """First acyclic seed found breadth first in the mutation class of S.

    The search runs on the skew forms alone and only the seed it returns
    is actually mutated.
    """
    non_frozen = S.non_frozen
    queue = deque([(S.skew, ())])
    seen = {S.skew}
    while queue:
        skew, word = queue.popleft()
        if _form_acyclic(skew, non_frozen):
            if word:
                logger.debug(f"Acyclic seed after mutations {list(word)}")
            return S.mutate_word(word)
        for j in non_frozen:
            if len(seen) >= max_forms:
                break
            successor = _mutate_form(skew, S.d, j)
            if successor not in seen:
                seen.add(successor)
                queue.append((successor, word + (j,)))
    logger.debug(f"No acyclic seed among {len(seen)} forms mutation equivalent to {S}")
    return None


def is_mutation_acyclic(S: Seed, max_forms: int = 5000) -> bool:
    return acyclic_representative(S, max_forms) is not None


def is_finite_type(S: Seed, max_forms: int = 5000) -> bool:
    """Cartan test on an acyclic seed of the mutation class.

    Finite type classes always contain an acyclic seed, so a class without
    one within `max_forms` forms is reported as infinite type.
    """
    representative = acyclic_representative(S, max_forms)
    return representative is not None and cartan_positive(representative)
