"""Depth-first enumeration of encodings with pruning and Pareto filtering.

Generators are assigned in a fixed order (per mode: vertex, horizontal
edge, vertical edge, then the diagonal edges the layout defines).  At every
node the candidate Pauli words are restricted by:

* support touching the central cell, edges also touching their far cell;
* qubit-activation order: a cell-local slot may be used only once every
  lower local slot is used by some assigned generator (orbit-wise);
* letter normalization: the first, second and third distinct letters ever
  placed on a local slot must be Z, X, Y in that order, which kills the
  single-qubit relabeling symmetry;
* weight caps on vertices and on edge words / hopping terms;
* windowed commutation against every assigned generator and against the
  candidate's own translates.

Completions are re-validated, measured and streamed through a shared Pareto
front over (distance, max stabilizer weight, sigma_NN, sigma_NNN).
Subtrees below the first generator's candidates are independent units of
work: they carry their own derived RNG streams and are reduced in index
order, so reports and emitted sequences do not depend on the thread count.
"""

from __future__ import annotations

import enum
import itertools
import random
import threading
from dataclasses import dataclass, field
from typing import Callable, Iterator

from . import fermion, lattice
from .encoding import (
    EncodingCandidate,
    Metrics,
    compute_metrics,
    derive_stabilizers,
    validate,
)
from .fermion import (
    FermionGeneratorId,
    GeneratorKind,
    HamiltonianSpec,
    PathError,
    far_cell_offset,
    generator_ids,
    required_parity_table,
)
from .lattice import CENTER, UnitCellLayout
from .symplectic import PauliWord

_INTRO_ORDER = ("Z", "X", "Y")
_LETTER_BITS = {"X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


class HoppingCapMode(enum.Enum):
    NN = "nn"
    NN_AND_NNN = "nn+nnn"


@dataclass(frozen=True)
class SearchConfig:
    """All knobs of one brute-force run; equal configs give equal runs."""

    layout: UnitCellLayout
    max_vertex_weight: int
    max_edge_or_hopping_weight: int
    hopping_cap_mode: HoppingCapMode = HoppingCapMode.NN
    min_distance_filter: int = 1
    min_logical_weight_filter: int | None = None
    acceptance_probability: float = 1.0
    rng_seed: int = 0
    node_budget: int | None = None

    def __post_init__(self) -> None:
        n = self.layout.n_slots
        if not 1 <= self.max_vertex_weight <= n:
            raise ValueError(f"max_vertex_weight must be in 1..{n}")
        if not 1 <= self.max_edge_or_hopping_weight <= n:
            raise ValueError(f"max_edge_or_hopping_weight must be in 1..{n}")
        if not 0.0 < self.acceptance_probability <= 1.0:
            raise ValueError("acceptance_probability must be in (0, 1]")
        if self.min_distance_filter < 1:
            raise ValueError("min_distance_filter must be at least 1")


def stochastic_gate(accept_probability: float, rng: random.Random) -> bool:
    """One Bernoulli draw deciding whether a valid assignment is kept."""
    if not 0.0 < accept_probability <= 1.0:
        raise ValueError("accept_probability must be in (0, 1]")
    return rng.random() < accept_probability


def derive_subtree_seed(seed: int, index: int) -> int:
    """Stable per-subtree RNG seed, independent of platform hashing."""
    mixed = (seed * 6364136223846793005 + 1442695040888963407 * (index + 1)) & (
        (1 << 64) - 1
    )
    return mixed ^ (mixed >> 31)


# ---------------------------------------------------------------------------
# Pareto front


MetricsKey = tuple  # (distance value, max stab weight, sigma_nn, sigma_nnn)


def dominates(a: MetricsKey, b: MetricsKey) -> bool:
    """a is at least as good everywhere (distance up, weights down) and better once."""
    return (
        a[0] >= b[0]
        and a[1] <= b[1]
        and a[2] <= b[2]
        and a[3] <= b[3]
        and a != b
    )


@dataclass
class ParetoEntry:
    key: MetricsKey
    encoding: EncodingCandidate
    order: int


@dataclass
class ParetoFront:
    """Non-dominated set of encodings; exact metric ties are all kept.

    ``max_size`` optionally bounds memory: when exceeded, the oldest entry
    whose key ties another entry is evicted (distinct keys are never
    silently dropped).
    """

    max_size: int | None = None
    entries: list[ParetoEntry] = field(default_factory=list)
    _counter: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def update(self, key: MetricsKey, encoding: EncodingCandidate) -> bool:
        with self._lock:
            for entry in self.entries:
                if dominates(entry.key, key):
                    return False
            self.entries = [e for e in self.entries if not dominates(key, e.key)]
            self.entries.append(ParetoEntry(key, encoding, self._counter))
            self._counter += 1
            if self.max_size is not None and len(self.entries) > self.max_size:
                self._evict_tied()
            return True

    def _evict_tied(self) -> None:
        keys: dict[MetricsKey, int] = {}
        for e in self.entries:
            keys[e.key] = keys.get(e.key, 0) + 1
        for e in sorted(self.entries, key=lambda e: e.order):
            if keys[e.key] > 1:
                self.entries.remove(e)
                return

    def snapshot(self) -> list[ParetoEntry]:
        """Entries in a canonical order independent of insertion history."""

        def entry_key(e: ParetoEntry):
            canonical = getattr(e.encoding, "canonical_key", None)
            return (e.key, canonical() if callable(canonical) else repr(e.encoding))

        with self._lock:
            return sorted(self.entries, key=entry_key)

    def __len__(self) -> int:
        return len(self.entries)


def pareto_update(
    front: ParetoFront, metrics: Metrics, encoding: EncodingCandidate
) -> bool:
    """Insert a measured encoding; True iff it is not dominated by the front."""
    return front.update(metrics.key(), encoding)


# ---------------------------------------------------------------------------
# Search report and completion bookkeeping


@dataclass
class SearchReport:
    nodes: int = 0
    completions: int = 0
    filtered: int = 0
    invalid: int = 0
    emitted: int = 0
    truncated: bool = False
    best_distance: int | None = None

    def to_json(self) -> dict:
        return {
            "nodes": self.nodes,
            "completions": self.completions,
            "filtered": self.filtered,
            "invalid": self.invalid,
            "emitted": self.emitted,
            "truncated": self.truncated,
            "best_distance": self.best_distance,
        }


@dataclass
class _Completion:
    encoding: EncodingCandidate  # stabilizers derived, search-budget metrics set


@dataclass
class _SubtreeResult:
    completions: list[_Completion] = field(default_factory=list)
    nodes: int = 0
    full_assignments: int = 0
    filtered: int = 0
    invalid: int = 0
    truncated: bool = False


class _Budget:
    """Shared node budget; with one worker the cut is exactly sequential."""

    def __init__(self, limit: int | None):
        self.limit = limit
        self.used = 0
        self._lock = threading.Lock()

    def consume(self) -> bool:
        if self.limit is None:
            self.used += 1
            return True
        with self._lock:
            if self.used >= self.limit:
                return False
            self.used += 1
            return True

    @property
    def exhausted(self) -> bool:
        return self.limit is not None and self.used >= self.limit


# ---------------------------------------------------------------------------
# The DFS engine


class _SearchContext:
    """Per-run constants plus the mutable DFS state of one subtree."""

    def __init__(self, cfg: SearchConfig):
        self.cfg = cfg
        layout = cfg.layout
        self.layout = layout
        self.n = layout.n_slots
        self.qpc = layout.qubits_per_cell
        self.gen_order = generator_ids(layout)
        self.tables = lattice._shift_tables(self.qpc)
        self.shifts = lattice.ALL_SHIFTS

        center_mask = 0
        for local in range(self.qpc):
            center_mask |= 1 << lattice.slot_of(CENTER, local, layout)
        self.required_cell_masks: list[tuple[int, ...]] = []
        self.caps: list[int] = []
        for gen in self.gen_order:
            if gen.kind is GeneratorKind.VERTEX:
                self.required_cell_masks.append((center_mask,))
                self.caps.append(cfg.max_vertex_weight)
            else:
                off = far_cell_offset(layout, gen)
                far = (CENTER[0] + off[0], CENTER[1] + off[1])
                far_mask = 0
                for local in range(self.qpc):
                    far_mask |= 1 << lattice.slot_of(far, local, layout)
                masks = (center_mask,) if far_mask == center_mask else (center_mask, far_mask)
                self.required_cell_masks.append(masks)
                self.caps.append(cfg.max_edge_or_hopping_weight)

        req = required_parity_table(layout)
        n_gen = len(self.gen_order)
        self.required: list[list[tuple[int, ...]]] = [
            [
                tuple(req[(self.gen_order[i], self.gen_order[j], s)] for s in self.shifts)
                for j in range(n_gen)
            ]
            for i in range(n_gen)
        ]

        # Mutable per-subtree state.
        self.assigned: list[tuple[int, int]] = []
        self.assigned_translates: list[list[tuple[int, int]]] = []
        self.intro: list[list[str]] = [[] for _ in range(self.qpc)]
        # Per-level bit-parallel commutation tables (see _begin_level).
        self.contrib: list[dict[str, int]] = []
        self.required_mask: int = 0

    # -- candidate enumeration -------------------------------------------

    def _clipped_translates(self, x: int, z: int) -> list[tuple[int, int]]:
        out = []
        for shift in self.shifts:
            table = self.tables[shift]
            nx = nz = 0
            m = x | z
            while m:
                b = m & -m
                slot = b.bit_length() - 1
                m ^= b
                dest = table[slot]
                if dest >= 0:
                    bit = 1 << dest
                    if x & b:
                        nx |= bit
                    if z & b:
                        nz |= bit
            out.append((nx, nz))
        return out

    def _begin_level(self, gi: int) -> None:
        """Build the bit-parallel commutation tables for generator level ``gi``.

        Bit (j * 25 + k) of the accumulator tracks the parity of the
        candidate against the k-th clipped translate of assigned generator
        j; a candidate is consistent iff the accumulated vector equals the
        required-parity mask.  The XOR accumulation runs per placed letter,
        so rejected candidates cost O(weight) integer operations.
        """
        n_shifts = len(self.shifts)
        contrib: list[dict[str, int]] = []
        for slot in range(self.n):
            per_letter: dict[str, int] = {}
            for letter, (cx, cz) in _LETTER_BITS.items():
                acc = 0
                bit = 0
                for translates in self.assigned_translates:
                    for tx, tz in translates:
                        lx = (tx >> slot) & 1
                        lz = (tz >> slot) & 1
                        if (cx & lz) ^ (cz & lx):
                            acc |= 1 << bit
                        bit += 1
                per_letter[letter] = acc
            contrib.append(per_letter)
        self.contrib = contrib
        mask = 0
        bit = 0
        for j in range(len(self.assigned)):
            req = self.required[gi][j]
            for k in range(n_shifts):
                if req[k]:
                    mask |= 1 << bit
                bit += 1
        self.required_mask = mask

    def _support_ok(self, support: tuple[int, ...], gi: int) -> bool:
        mask = 0
        for slot in support:
            mask |= 1 << slot
        for required in self.required_cell_masks[gi]:
            if not mask & required:
                return False
        # Activation order: new locals must extend the active prefix.
        active = sum(1 for letters in self.intro if letters)
        new_locals = sorted(
            {slot % self.qpc for slot in support if not self.intro[slot % self.qpc]}
        )
        return new_locals == list(range(active, active + len(new_locals)))

    def _letters(
        self, support: tuple[int, ...], idx: int, x: int, z: int, acc: int
    ) -> Iterator[tuple[int, int, int]]:
        # The tentative introductions stay applied while a candidate is
        # yielded, so deeper generators see exactly the extended state; they
        # unwind automatically when enumeration resumes.
        if idx == len(support):
            yield x, z, acc
            return
        slot = support[idx]
        introduced = self.intro[slot % self.qpc]
        if len(introduced) >= 3:
            allowed = _INTRO_ORDER
        else:
            allowed = tuple(introduced) + (_INTRO_ORDER[len(introduced)],)
        slot_contrib = self.contrib[slot]
        for letter in ("X", "Y", "Z"):
            if letter not in allowed:
                continue
            fresh = letter not in introduced
            if fresh:
                introduced.append(letter)
            bx, bz = _LETTER_BITS[letter]
            yield from self._letters(
                support,
                idx + 1,
                x | bx << slot,
                z | bz << slot,
                acc ^ slot_contrib[letter],
            )
            if fresh:
                introduced.pop()

    def candidates(self, gi: int) -> Iterator[tuple[int, int, int]]:
        """Candidate (x, z, parity accumulator) triples for level ``gi``.

        ``_begin_level(gi)`` must have been called for the current assigned
        prefix; the accumulator equals ``required_mask`` exactly when the
        candidate satisfies every windowed parity against assigned
        generators.
        """
        for w in range(1, self.caps[gi] + 1):
            for support in itertools.combinations(range(self.n), w):
                if not self._support_ok(support, gi):
                    continue
                yield from self._letters(support, 0, 0, 0, 0)

    # -- pruning checks ----------------------------------------------------

    def self_commutation_ok(self, gi: int, x: int, z: int) -> bool:
        """Windowed parities of a candidate against its own translates."""
        req_self = self.required[gi][gi]
        own = self._clipped_translates(x, z)
        for idx, (tx, tz) in enumerate(own):
            if (((x & tz).bit_count() + (z & tx).bit_count()) & 1) != req_self[idx]:
                return False
        return True

    def commutation_ok(self, gi: int, x: int, z: int) -> bool:
        """Full windowed parity check (assigned pairs plus self translates)."""
        for j, translates in enumerate(self.assigned_translates):
            req = self.required[gi][j]
            for idx, (tx, tz) in enumerate(translates):
                if (((x & tz).bit_count() + (z & tx).bit_count()) & 1) != req[idx]:
                    return False
        return self.self_commutation_ok(gi, x, z)

    def _partial_encoding(self, extra: tuple[int, tuple[int, int]] | None) -> EncodingCandidate:
        gens: dict[FermionGeneratorId, PauliWord] = {}
        for idx, (x, z) in enumerate(self.assigned):
            gens[self.gen_order[idx]] = PauliWord(x, z, self.n)
        if extra is not None:
            gi, (x, z) = extra
            gens[self.gen_order[gi]] = PauliWord(x, z, self.n)
        return EncodingCandidate(self.layout, gens)

    def _capped_hop_directions(self) -> list[tuple[int, tuple[int, int]]]:
        out = []
        cap_nnn = self.cfg.hopping_cap_mode is HoppingCapMode.NN_AND_NNN
        for mode in range(self.layout.modes_per_cell):
            for d in fermion.NN_DIRECTIONS:
                out.append((mode, d))
            if cap_nnn:
                for d in fermion.NNN_DIRECTIONS:
                    out.append((mode, d))
        return out

    def hop_caps_ok(self, gi: int, x: int, z: int) -> bool:
        """Cap every hopping whose edge and endpoint vertices are all assigned."""
        gen = self.gen_order[gi]
        enc = self._partial_encoding((gi, (x, z)))
        cap = self.cfg.max_edge_or_hopping_weight
        min_w = self.cfg.min_logical_weight_filter
        checks: list[tuple[int, tuple[int, int]]] = []
        if gen.kind is not GeneratorKind.VERTEX:
            if gen.kind in fermion.EDGE_DIRECTIONS:
                direction = fermion.EDGE_DIRECTIONS[gen.kind]
                if self._hop_computable(enc, gen.mode, direction):
                    checks.append((gen.mode, direction))
        else:
            for mode, d in self._capped_hop_directions():
                if self._hop_computable(enc, mode, d):
                    checks.append((mode, d))
        is_diag_capped = self.cfg.hopping_cap_mode is HoppingCapMode.NN_AND_NNN
        for mode, d in checks:
            if d in fermion.NNN_DIRECTIONS and not is_diag_capped:
                continue
            try:
                w = fermion.hopping_weight(enc, mode, d)
            except PathError:
                continue  # not representable yet; completion re-checks
            if w > cap:
                return False
            if min_w is not None and w < min_w:
                return False
        return True

    def _hop_computable(self, enc: EncodingCandidate, mode: int, d: tuple[int, int]) -> bool:
        layout = self.layout
        canonical = fermion._CANONICAL_DIRECTION[d]
        kind = fermion._KIND_BY_DIRECTION.get(canonical)
        v0 = fermion.Vertex(CENTER, mode)
        w = fermion.step(layout, v0, canonical)
        needed = [FermionGeneratorId(GeneratorKind.VERTEX, v0.mode),
                  FermionGeneratorId(GeneratorKind.VERTEX, w.mode)]
        if kind is not None and kind in fermion.edge_kinds(layout):
            needed.append(FermionGeneratorId(kind, mode))
        else:
            mid = fermion.step(layout, v0, (canonical[0], 0))
            try:
                needed.append(fermion._edge_instance(layout, v0, mid)[0])
                needed.append(fermion._edge_instance(layout, mid, w)[0])
            except PathError:
                return False
        return all(g in enc.generators for g in needed)


def _passes_completion_filters(
    cfg: SearchConfig, enc: EncodingCandidate, metrics: Metrics
) -> bool:
    if metrics.distance.value < cfg.min_distance_filter:
        return False
    weights = dict(metrics.term_weights)
    capped_nnn = cfg.hopping_cap_mode is HoppingCapMode.NN_AND_NNN
    relevant: list[int] = []
    for name, w in weights.items():
        is_hop = name.startswith("hop:")
        is_nnn = name.split(":")[1] in ("+ur", "-ur", "+ul", "-ul") if is_hop else False
        if is_hop and is_nnn and not capped_nnn:
            continue
        relevant.append(w)
        if is_hop and w > cfg.max_edge_or_hopping_weight:
            return False
    if cfg.min_logical_weight_filter is not None:
        if any(w < cfg.min_logical_weight_filter for w in relevant):
            return False
    return True


def _evaluate_completion(
    cfg: SearchConfig, ctx: _SearchContext, result: _SubtreeResult
) -> None:
    result.full_assignments += 1
    enc = ctx._partial_encoding(None)
    if validate(enc):
        result.invalid += 1
        return
    try:
        enc = enc.with_stabilizers(derive_stabilizers(enc))
        metrics = compute_metrics(enc, HamiltonianSpec(), cfg.min_distance_filter)
    except PathError:
        result.invalid += 1
        return
    if not _passes_completion_filters(cfg, enc, metrics):
        result.filtered += 1
        return
    result.completions.append(_Completion(enc.with_metrics(metrics)))


def _run_subtree(
    cfg: SearchConfig,
    root_index: int,
    root_word: tuple[int, int],
    budget: _Budget,
) -> _SubtreeResult:
    ctx = _SearchContext(cfg)
    result = _SubtreeResult()
    rng = random.Random(derive_subtree_seed(cfg.rng_seed, root_index))

    def assign(gi: int, x: int, z: int) -> None:
        ctx.assigned.append((x, z))
        ctx.assigned_translates.append(ctx._clipped_translates(x, z))

    def unassign() -> None:
        ctx.assigned.pop()
        ctx.assigned_translates.pop()

    def dfs(gi: int) -> None:
        if result.truncated:
            return
        ctx._begin_level(gi)
        required_mask = ctx.required_mask
        for x, z, acc in ctx.candidates(gi):
            if result.truncated:
                return
            if acc != required_mask:
                continue
            if not ctx.self_commutation_ok(gi, x, z):
                continue
            if not ctx.hop_caps_ok(gi, x, z):
                continue
            if not stochastic_gate(cfg.acceptance_probability, rng):
                continue
            if not budget.consume():
                result.truncated = True
                return
            result.nodes += 1
            assign(gi, x, z)
            if gi + 1 == len(ctx.gen_order):
                _evaluate_completion(cfg, ctx, result)
            else:
                dfs(gi + 1)
            unassign()
            ctx._begin_level(gi)

    # Replay the root word through the same gates so its intro/assignment
    # state matches what a single full DFS would have seen.
    x, z = root_word
    if not ctx.commutation_ok(0, x, z):
        return result
    if not ctx.hop_caps_ok(0, x, z):
        return result
    if not stochastic_gate(cfg.acceptance_probability, rng):
        return result
    if not budget.consume():
        result.truncated = True
        return result
    result.nodes += 1
    # Apply the root's letter introductions manually.
    for slot in sorted(PauliWord(x, z, ctx.n).support_slots()):
        letter = PauliWord(x, z, ctx.n).letter(slot)
        introduced = ctx.intro[slot % ctx.qpc]
        if letter not in introduced:
            introduced.append(letter)
    assign(0, x, z)
    if len(ctx.gen_order) == 1:
        _evaluate_completion(cfg, ctx, result)
    else:
        dfs(1)
    return result


def brute_force_search(
    cfg: SearchConfig,
    sink: Callable[[EncodingCandidate], None],
    *,
    threads: int = 1,
    final_w_max: int | None = None,
    front: ParetoFront | None = None,
    completion_sink: Callable[[EncodingCandidate], None] | None = None,
) -> SearchReport:
    """Run the full enumeration, streaming Pareto-accepted encodings to ``sink``.

    Search-time metrics use a distance budget equal to the distance filter;
    accepted encodings are re-measured at ``final_w_max`` (when larger)
    before being emitted.  With a fixed config the emitted sequence and the
    report are identical for every thread count, except that a node budget
    may cut at a different point when several workers race.
    """
    root_ctx = _SearchContext(cfg)
    root_ctx._begin_level(0)
    roots = [(x, z) for x, z, _ in root_ctx.candidates(0)]
    budget = _Budget(cfg.node_budget)
    report = SearchReport()
    front = front if front is not None else ParetoFront()

    def reduce(result: _SubtreeResult) -> None:
        report.nodes += result.nodes
        report.completions += result.full_assignments
        report.filtered += result.filtered
        report.invalid += result.invalid
        report.truncated = report.truncated or result.truncated
        for completion in result.completions:
            enc = completion.encoding
            metrics = enc.metrics
            assert metrics is not None
            if completion_sink is not None:
                completion_sink(enc)
            if not front.update(metrics.key(), enc):
                continue
            if final_w_max is not None and final_w_max > cfg.min_distance_filter:
                metrics = compute_metrics(enc, HamiltonianSpec(), final_w_max)
                enc = enc.with_metrics(metrics)
            report.emitted += 1
            value = metrics.distance.value if metrics.distance.exact else None
            if value is not None:
                report.best_distance = max(report.best_distance or 0, value)
            sink(enc)

    if threads <= 1:
        for index, word in enumerate(roots):
            if budget.exhausted:
                report.truncated = True
                break
            reduce(_run_subtree(cfg, index, word, budget))
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = pool.map(
                lambda item: _run_subtree(cfg, item[0], item[1], budget),
                enumerate(roots),
            )
            for result in results:
                reduce(result)
    return report
