"""Qubit-connectivity graphs demanded by an encoding, and their scoring.

The hardware for a translationally invariant encoding repeats per unit
cell, so the graph is built on the 3x3 window with periodic identification:
every stabilizer orbit contributes one ancilla per cell, wired to the
wrapped support of that translate, and every Hamiltonian logical term
threads a chain through its (wrapped) support slots in slot order.  A chain
is the minimal connectivity for a CNOT-ladder implementation of a Pauli
exponential; a clique would wildly overstate hardware needs.

Graph thickness is NP-hard, so it is reported as a greedy upper bound: the
number of planar layers extracted by inserting edges, in a deterministic
order, into the current layer whenever planarity survives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import networkx as nx

from . import fermion, lattice
from .fermion import HamiltonianSpec, enumerate_hamiltonian_terms
from .lattice import CENTER, Scheme, WINDOW
from .symplectic import PauliWord

if TYPE_CHECKING:  # pragma: no cover
    from .encoding import EncodingCandidate

Node = tuple  # ("q", slot) for data qubits, ("s", stab index, cell index) for ancillas

STABILIZER_READOUT = "stabilizer-readout"
LOGICAL_TERM = "logical-term"


@dataclass
class ConnectivityGraph:
    data_nodes: list[Node]
    ancilla_nodes: list[Node]
    edges: dict[tuple[Node, Node], set[str]] = field(default_factory=dict)

    def add_edge(self, u: Node, v: Node, provenance: str) -> None:
        if u == v:
            raise ValueError("self-loops are not allowed")
        key = (u, v) if u <= v else (v, u)
        self.edges.setdefault(key, set()).add(provenance)

    @property
    def nodes(self) -> list[Node]:
        return self.data_nodes + self.ancilla_nodes

    def degree(self, node: Node) -> int:
        return sum(1 for (u, v) in self.edges if u == node or v == node)


def node_name(node: Node) -> str:
    if node[0] == "q":
        return f"q{node[1]}"
    return f"s{node[1]}c{node[2]}"


def _wrapped_slots(
    word: PauliWord, shift: tuple[int, int], layout
) -> list[int]:
    """Support slots of the word translated by ``shift`` with periodic wrap."""
    out = []
    for slot in word.support_slots():
        (x, y), local = lattice.cell_of(slot, layout)
        cell = ((x + shift[0]) % WINDOW, (y + shift[1]) % WINDOW)
        out.append(lattice.slot_of(cell, local, layout))
    return sorted(set(out))


def _term_words(enc: "EncodingCandidate", spec: HamiltonianSpec) -> list[PauliWord]:
    """Pauli words the hardware must implement, one orbit representative each.

    Both words of each canonical hopping direction plus the on-site word
    (for duplicated-grid schemes: the per-copy vertex factor).
    """
    words: list[PauliWord] = []
    seen: set[tuple[int, int]] = set()

    def push(word: PauliWord) -> None:
        key = (word.x_mask, word.z_mask)
        if key not in seen and not word.is_identity():
            seen.add(key)
            words.append(word)

    for term in enumerate_hamiltonian_terms(spec, enc.layout):
        if term.kind == "hopping":
            canonical = fermion._CANONICAL_DIRECTION[term.direction]
            if term.direction != canonical:
                continue  # the mirror is a translate of the canonical orbit
            for word in fermion.hopping_pair(enc, term.mode, canonical):
                push(word)
        else:
            if enc.layout.scheme is Scheme.MIXED:
                push(fermion.onsite_pauli_term(enc))
            else:
                push(
                    fermion._product_of_instances(
                        enc,
                        [
                            (
                                fermion.FermionGeneratorId(
                                    fermion.GeneratorKind.VERTEX, term.mode
                                ),
                                CENTER,
                            )
                        ],
                    )
                )
    return words


def build_graph(enc: "EncodingCandidate", spec: HamiltonianSpec) -> ConnectivityGraph:
    """Connectivity graph with stabilizer-readout ancillas and logical-term chains."""
    from .encoding import derive_stabilizers

    layout = enc.layout
    stabs = enc.stabilizer_generators
    if stabs is None:
        stabs = derive_stabilizers(enc)
    data = [("q", slot) for slot in range(layout.n_slots)]
    graph = ConnectivityGraph(data_nodes=data, ancilla_nodes=[])

    shifts = [(cx - CENTER[0], cy - CENTER[1]) for cx in range(WINDOW) for cy in range(WINDOW)]
    for si, stab in enumerate(stabs):
        for ci, shift in enumerate(shifts):
            ancilla = ("s", si, ci)
            graph.ancilla_nodes.append(ancilla)
            for slot in _wrapped_slots(stab, shift, layout):
                graph.add_edge(ancilla, ("q", slot), STABILIZER_READOUT)

    for word in _term_words(enc, spec):
        for shift in shifts:
            slots = _wrapped_slots(word, shift, layout)
            for a, b in zip(slots, slots[1:]):
                graph.add_edge(("q", a), ("q", b), LOGICAL_TERM)
    return graph


def max_degree(g: ConnectivityGraph) -> int:
    """Highest number of connections demanded of any data or ancilla qubit."""
    degrees: dict[Node, int] = {}
    for u, v in g.edges:
        degrees[u] = degrees.get(u, 0) + 1
        degrees[v] = degrees.get(v, 0) + 1
    return max(degrees.values(), default=0)


def euler_thickness_bound(g: ConnectivityGraph) -> int:
    """ceil(|E| / (3|V| - 6)), the planar-capacity lower bound on thickness."""
    n_vertices = len(g.nodes)
    n_edges = len(g.edges)
    if n_vertices < 3 or n_edges == 0:
        return 1 if n_edges else 0
    return math.ceil(n_edges / (3 * n_vertices - 6))


def thickness_upper_bound(g: ConnectivityGraph) -> int:
    """Greedy planar decomposition; 1 iff the graph is planar.

    Edges are taken in sorted order; each layer keeps every edge whose
    insertion leaves the layer planar, and remaining edges seed the next
    layer.  The layer count upper-bounds the true thickness.
    """
    remaining = sorted(g.edges)
    if not remaining:
        return 1  # edgeless graphs are planar
    layers = 0
    while remaining:
        layer = nx.Graph()
        deferred = []
        for u, v in remaining:
            layer.add_edge(u, v)
            ok, _ = nx.check_planarity(layer)
            if not ok:
                layer.remove_edge(u, v)
                if layer.degree(u) == 0:
                    layer.remove_node(u)
                if layer.degree(v) == 0:
                    layer.remove_node(v)
                deferred.append((u, v))
        remaining = deferred
        layers += 1
    bound = euler_thickness_bound(g)
    if layers < bound:
        raise AssertionError(
            f"greedy thickness {layers} below the Euler lower bound {bound}"
        )
    return layers


def to_adjacency(g: ConnectivityGraph) -> dict:
    """Standard adjacency JSON form: node list plus tagged edge list."""
    return {
        "nodes": [node_name(n) for n in g.nodes],
        "edges": [
            {
                "a": node_name(u),
                "b": node_name(v),
                "provenance": sorted(tags),
            }
            for (u, v), tags in sorted(g.edges.items())
        ],
    }


def to_dot(g: ConnectivityGraph) -> str:
    """DOT text for external rendering; ancillas drawn as boxes."""
    lines = ["graph connectivity {"]
    for node in g.data_nodes:
        lines.append(f'  "{node_name(node)}";')
    for node in g.ancilla_nodes:
        lines.append(f'  "{node_name(node)}" [shape=box];')
    for (u, v), tags in sorted(g.edges.items()):
        label = ",".join(sorted(tags))
        lines.append(f'  "{node_name(u)}" -- "{node_name(v)}" [kind="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
