"""
Grafi degli inversi e loro esportazione in DOT / JSON.

- build_matching(f): un arco {a, inv(a, f)} per ogni elemento non nullo;
  su P(p,n) \\ {0, 1, p-1} è un matching perfetto.
- union_graph(...): unione di matching su basi diverse (basis_index 1, 2, ...).
- loop_graph(loop): multigrafo orientato di un loop chiuso.

L'uscita DOT è deterministica: vertici in ordine crescente di ElementIndex,
archi in ordine (basis_index, u, v) oppure nell'ordine dei passi per i loop.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx

from .chain_engine import ClosedLoop
from .errors import CharacteristicMismatchError
from .irreducible import inverse_table
from .polynomial import IrreduciblePoly, Poly, digit_label, format_poly

logger = logging.getLogger(__name__)

# basis_index 1, 2, 3: blu continuo, rosso tratteggiato, verde punteggiato
BASIS_STYLES: Tuple[Tuple[str, str], ...] = (
    ("solid", "blue"),
    ("dashed", "red"),
    ("dotted", "darkgreen"),
    ("bold", "orange"),
    ("dashed", "purple"),
    ("dotted", "brown"),
)


@dataclass(frozen=True)
class MatchingGraph:
    p: int
    n: int
    vertices: Tuple[int, ...]
    edges: Tuple[Tuple[int, int, int], ...]
    bases: Tuple[IrreduciblePoly, ...]


@dataclass(frozen=True)
class LoopGraph:
    """Archi (u, v, basis_index, passo) nell'ordine di percorrenza."""

    p: int
    n: int
    vertices: Tuple[int, ...]
    edges: Tuple[Tuple[int, int, int, int], ...]
    bases: Tuple[IrreduciblePoly, ...]
    visit_labels: Dict[int, Tuple[int, ...]]


def build_matching(
    f: IrreduciblePoly,
    include_constants: bool = False,
    guard: Optional[int] = None,
    basis_index: int = 1,
) -> MatchingGraph:
    table = inverse_table(f, guard)
    p, n = f.p, f.degree
    first = 1 if include_constants else p
    vertices = tuple(range(first, p**n))
    edges = tuple(
        (u, int(table[u]), basis_index) for u in vertices if u <= table[u]
    )
    return MatchingGraph(p=p, n=n, vertices=vertices, edges=edges, bases=(f,))


def union_graph(*graphs: MatchingGraph) -> MatchingGraph:
    """Unione di matching a base singola; la base dell'i-esimo grafo diventa basis_index i."""
    if not graphs:
        raise ValueError("serve almeno un grafo")
    p, n = graphs[0].p, graphs[0].n
    vertices = set()
    edges = []
    bases = []
    for position, g in enumerate(graphs, start=1):
        if (g.p, g.n) != (p, n):
            raise CharacteristicMismatchError("grafi su campi diversi")
        vertices.update(g.vertices)
        edges.extend((u, v, position) for u, v, _ in g.edges)
        bases.extend(g.bases)
    return MatchingGraph(
        p=p,
        n=n,
        vertices=tuple(sorted(vertices)),
        edges=tuple(sorted(edges, key=lambda e: (e[2], e[0], e[1]))),
        bases=tuple(bases),
    )


def build_union(
    f1: IrreduciblePoly,
    f2: IrreduciblePoly,
    include_constants: bool = False,
    guard: Optional[int] = None,
) -> MatchingGraph:
    return union_graph(
        build_matching(f1, include_constants, guard),
        build_matching(f2, include_constants, guard),
    )


def loop_graph(loop: ClosedLoop) -> LoopGraph:
    schedule = loop.schedule
    indices = [a.index for a in loop.elements]
    edges = tuple(
        (indices[i - 1], indices[i], (i - 1) % schedule.beta + 1, i)
        for i in range(1, len(indices))
    )
    labels = {a.index: pos for a, pos in loop.visit_labels.items()}
    return LoopGraph(
        p=schedule.p,
        n=schedule.n,
        vertices=tuple(sorted(set(indices))),
        edges=edges,
        bases=schedule.bases,
        visit_labels=labels,
    )


# --- networkx ---

def to_networkx(graph: MatchingGraph) -> nx.MultiGraph:
    G = nx.MultiGraph()
    G.add_nodes_from(graph.vertices)
    for u, v, basis_index in graph.edges:
        G.add_edge(u, v, basis=basis_index)
    return G


def vertex_degrees(graph: MatchingGraph) -> Dict[int, int]:
    """Grado di ogni vertice (un cappio conta 2, come in networkx)."""
    return dict(to_networkx(graph).degree())


def matching_union_cycles(graph: MatchingGraph) -> List[Tuple[int, ...]]:
    """
    Cicli dell'unione di due matching, ricavati con networkx indipendentemente
    da chain_engine: una componente connessa = un ciclo.
    """
    G = nx.Graph()
    G.add_nodes_from(graph.vertices)
    G.add_edges_from((u, v) for u, v, _ in graph.edges)
    cycles = []
    for component in sorted(nx.connected_components(G), key=min):
        source = min(component)
        edges = nx.find_cycle(G.subgraph(component), source=source)
        cycles.append(tuple(u for u, _ in edges))
    return cycles


# --- Esportazione ---

def _style(basis_index: int, styles: Sequence[Tuple[str, str]]) -> Tuple[str, str]:
    return styles[(basis_index - 1) % len(styles)]


def _node_line(index: int, p: int, n: int, xlabel: Optional[str] = None) -> str:
    label = digit_label(Poly.from_index(index, p), n)
    attrs = f'label="{label}", tooltip="#{index}"'
    if xlabel is not None:
        attrs += f', xlabel="{xlabel}"'
    return f'  "{index}" [{attrs}];'


def export_dot(
    graph: Union[MatchingGraph, LoopGraph, ClosedLoop],
    name: str = "G",
    styles: Optional[Sequence[Tuple[str, str]]] = None,
) -> str:
    """
    DOT non orientato per i matching e le loro unioni, orientato per i loop chiusi.

    styles: coppie (style, color) per basis_index 1, 2, ...; default BASIS_STYLES.
    """
    styles = BASIS_STYLES if styles is None else tuple(styles)
    if not styles:
        raise ValueError("styles non può essere vuoto")
    if isinstance(graph, ClosedLoop):
        graph = loop_graph(graph)

    lines: List[str] = []
    if isinstance(graph, LoopGraph):
        lines.append(f"digraph {name} {{")
        lines.append("  node [shape=circle];")
        for v in graph.vertices:
            xlabel = " / ".join(f"a_{i}" for i in graph.visit_labels.get(v, ()))
            lines.append(_node_line(v, graph.p, graph.n, xlabel or None))
        for u, v, basis_index, _step in graph.edges:
            style, color = _style(basis_index, styles)
            lines.append(f'  "{u}" -> "{v}" [style={style}, color={color}];')
    else:
        lines.append(f"graph {name} {{")
        lines.append("  node [shape=circle];")
        for v in graph.vertices:
            lines.append(_node_line(v, graph.p, graph.n))
        for u, v, basis_index in graph.edges:
            style, color = _style(basis_index, styles)
            lines.append(f'  "{u}" -- "{v}" [style={style}, color={color}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_json(graph: Union[MatchingGraph, LoopGraph, ClosedLoop]) -> dict:
    """Specchio JSON della lista degli archi, con basis_index per arco."""
    if isinstance(graph, ClosedLoop):
        graph = loop_graph(graph)
    data = {
        "p": graph.p,
        "n": graph.n,
        "bases": [format_poly(f.poly, "indexed") for f in graph.bases],
        "vertices": [f"#{v}" for v in graph.vertices],
    }
    if isinstance(graph, LoopGraph):
        data["directed"] = True
        data["edges"] = [
            {"u": f"#{u}", "v": f"#{v}", "basis_index": b, "step": s}
            for u, v, b, s in graph.edges
        ]
    else:
        data["directed"] = False
        data["edges"] = [
            {"u": f"#{u}", "v": f"#{v}", "basis_index": b} for u, v, b in graph.edges
        ]
    return data
