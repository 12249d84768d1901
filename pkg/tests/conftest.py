"""Shared fixtures: reference encodings used across the test suite.

``vc_like`` builds the auxiliary-qubit encoding (a Verstraete-Cirac-style
construction): each site carries a data qubit holding a 1D row-wise
Jordan-Wigner chain and an auxiliary qubit that carries the vertical edges.
It validates on every scheme and has distance 2.

``jw_like`` replicates the snake-ordered Jordan-Wigner strings of the
window as if they were translation invariant.  They are not (the string
tails are anchor-dependent), so the fixture does not validate; it is kept
for the stabilizer-free code paths (identity loops, distance 1) and as the
spec's literal JWT recipe.
"""

from __future__ import annotations

import json
import os
import random

import pytest

from fqec import *
from fqec.encoding import EncodingCandidate
from fqec.fermion import FermionGeneratorId, GeneratorKind, Vertex, edge_endpoints, generator_ids
from fqec.lattice import CENTER, EdgeSet, Scheme, UnitCellLayout, cell_index, slot_of
from fqec.search_clifford import ALL_LETTER_PERMS, CnotGate, SingleQubitGate, apply_clifford

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


def _identity(layout):
    return PauliWord.identity(layout.n_slots)


def vc_like(layout: UnitCellLayout) -> EncodingCandidate:
    """Data-plus-auxiliary encoding; requires an nn-square edge set.

    Each site occupies two local slots (data, aux).  Horizontal edges are
    row-wise Jordan-Wigner on data qubits; vertical edges couple through
    the auxiliary pair, which makes every word translation covariant.
    """
    if layout.edge_set is not EdgeSet.NN_SQUARE:
        raise ValueError("vc_like is defined for nn-square layouts")
    expected_qpc = 2 if layout.scheme is Scheme.TWO_GRIDS else 4
    if layout.qubits_per_cell != expected_qpc:
        raise ValueError(f"vc_like needs qubits_per_cell={expected_qpc}")

    def data_slot(v: Vertex) -> int:
        return slot_of(v.cell, 2 * v.mode if expected_qpc == 4 else 0, layout)

    def aux_slot(v: Vertex) -> int:
        return slot_of(v.cell, (2 * v.mode if expected_qpc == 4 else 0) + 1, layout)

    gens = {}
    for gen in generator_ids(layout):
        if gen.kind is GeneratorKind.VERTEX:
            v = Vertex(CENTER, gen.mode)
            word = _identity(layout).with_letter(data_slot(v), "Z")
            word = word.with_letter(aux_slot(v), "Z")
        else:
            src, tgt = edge_endpoints(layout, gen, CENTER)
            direction = (1, 0) if gen.kind is GeneratorKind.EDGE_RIGHT else (0, 1)
            if direction == (1, 0):
                word = _identity(layout).with_letter(data_slot(src), "Y")
                word = word.with_letter(data_slot(tgt), "X")
            else:
                word = (
                    _identity(layout)
                    .with_letter(data_slot(src), "Z")
                    .with_letter(aux_slot(src), "X")
                    .with_letter(data_slot(tgt), "Z")
                    .with_letter(aux_slot(tgt), "Y")
                )
        gens[gen] = word
    return EncodingCandidate(layout, gens)


def vc_with_composite_diagonals(edge_set: EdgeSet) -> EncodingCandidate:
    """Extend the two-grids vc_like with diagonal edges built as composites.

    The diagonal words are products of a horizontal and a vertical edge, so
    they satisfy every edge relation exactly; the resulting triangle loops
    are partially degenerate (some collapse to the square plaquette).
    """
    base_layout = UnitCellLayout(2, Scheme.TWO_GRIDS, EdgeSet.NN_SQUARE)
    base = vc_like(base_layout)
    layout = UnitCellLayout(2, Scheme.TWO_GRIDS, edge_set)
    r = base.generators[FermionGeneratorId(GeneratorKind.EDGE_RIGHT, 0)]
    u = base.generators[FermionGeneratorId(GeneratorKind.EDGE_UP, 0)]
    gens = {
        FermionGeneratorId(gen.kind, gen.mode): base.generators[gen]
        for gen in generator_ids(base_layout)
    }
    diag_ur = multiply(r, translate_word(u, (1, 0), layout))
    gens[FermionGeneratorId(GeneratorKind.EDGE_DIAG_UR, 0)] = diag_ur
    if edge_set is EdgeSet.NNN_SQUARE:
        left_r = translate_word(r, (-1, 0), layout)
        left_u = translate_word(u, (-1, 0), layout)
        gens[FermionGeneratorId(GeneratorKind.EDGE_DIAG_UL, 0)] = multiply(left_r, left_u)
    return EncodingCandidate(layout, gens)


def jw_like(layout: UnitCellLayout) -> EncodingCandidate:
    """Literal snake-ordered Jordan-Wigner words, replicated per orbit.

    Vertices are single Z; edges are Y (Z...) X strings between the snake
    positions of their endpoints.  Does NOT validate as a translation
    invariant encoding (string tails are anchor dependent); the loop images
    still multiply to the identity, so it has zero stabilizers.
    """
    qpc = layout.qubits_per_cell

    def slot(pos: int, mode: int) -> int:
        return pos * qpc + mode

    def edge_word(pos_a: int, pos_b: int, mode: int) -> PauliWord:
        i, j = sorted((pos_a, pos_b))
        word = _identity(layout).with_letter(slot(i, mode), "Y")
        for k in range(i + 1, j):
            word = word.with_letter(slot(k, mode), "Z")
        return word.with_letter(slot(j, mode), "X")

    gens = {}
    for gen in generator_ids(layout):
        if gen.kind is GeneratorKind.VERTEX:
            word = _identity(layout).with_letter(slot(cell_index(CENTER), gen.mode), "Z")
        else:
            src, tgt = edge_endpoints(layout, gen, CENTER)
            word = edge_word(cell_index(src.cell), cell_index(tgt.cell), gen.mode)
        gens[gen] = word
    return EncodingCandidate(layout, gens)


def load_fixture(name: str) -> EncodingCandidate:
    from fqec.document import document_to_encoding

    with open(os.path.join(DATA_DIR, name), "r", encoding="utf-8") as handle:
        return document_to_encoding(json.load(handle))


def random_sound_deformation(
    enc: EncodingCandidate, rng: random.Random, n_gates: int = 3
) -> EncodingCandidate:
    """Random single-qubit / intra-cell-CNOT deformation (provably valid)."""
    qpc = enc.layout.qubits_per_cell
    for _ in range(n_gates):
        if qpc > 1 and rng.random() < 0.4:
            control, target = rng.sample(range(qpc), 2)
            gate = CnotGate(((0, 0), control), ((0, 0), target))
        else:
            gate = SingleQubitGate(
                rng.randrange(qpc), rng.choice(ALL_LETTER_PERMS)
            )
        enc, clipped = apply_clifford(enc, gate)
        assert not clipped
    return enc


@pytest.fixture(scope="session")
def vc_encoding() -> EncodingCandidate:
    from fqec.encoding import derive_stabilizers

    enc = vc_like(UnitCellLayout(2, Scheme.TWO_GRIDS, EdgeSet.NN_SQUARE))
    return enc.with_stabilizers(derive_stabilizers(enc))


@pytest.fixture(scope="session")
def jw_encoding() -> EncodingCandidate:
    enc = jw_like(UnitCellLayout(1, Scheme.TWO_GRIDS, EdgeSet.NN_SQUARE))
    return enc.with_stabilizers(())


@pytest.fixture(scope="session")
def d2_encoding() -> EncodingCandidate:
    return load_fixture("d2_nn_square.json")
