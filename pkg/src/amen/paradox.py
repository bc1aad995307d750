"""Paradoxical decompositions: verification, exhaustive search, Tarski numbers.

Group mode (bijective maps) asks that the images ``phi_i(A_i)`` tile the
carrier, and separately the images ``psi_j(B_j)``.  Semigroup mode asks the
same of the preimages ``phi_i^-1(A_i)`` and ``psi_j^-1(B_j)``.  In both
modes the tiling must be disjoint.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import networkx as nx

from . import structures as st
from .configuration import ConfigurationPair
from .errors import EmptyPiece, MapNotInFamily, NonBijectiveMap, SymbolicCarrier


@dataclass(frozen=True)
class Piece:
    region: st.Region
    map: st.MapSpec


@dataclass(frozen=True)
class Decomposition:
    mode: st.Mode
    a_pieces: tuple
    b_pieces: tuple

    @property
    def size(self) -> int:
        return len(self.a_pieces) + len(self.b_pieces)

    @property
    def pieces(self) -> tuple:
        return self.a_pieces + self.b_pieces


@dataclass
class DecompositionReport:
    valid: bool
    scope: str
    failures: list = field(default_factory=list)
    overlap_only: bool = False


@dataclass(frozen=True)
class TarskiResult:
    """``value`` is the minimal piece count, or ``None`` when nothing was found up to ``cap``."""

    value: Optional[int]
    cap: int
    witness: Optional[Decomposition] = None

    @property
    def above_cap(self) -> bool:
        return self.value is None


def classical_free_group_decomposition() -> Decomposition:
    """The four-piece decomposition of F(a, b) with maps (id, left(a); id, left(b))."""
    a, b = 1, 2
    tail = st.Powers(-a, 0)
    p1 = st.AnyOf((st.Prefix((a,)), tail))
    p2 = st.Difference(st.Prefix((-a,)), st.Powers(-a, 1))
    return Decomposition(
        st.Mode.GROUP,
        (Piece(p1, st.Identity()), Piece(p2, st.LeftTranslation((a,)))),
        (Piece(st.Prefix((b,)), st.Identity()), Piece(st.Prefix((-b,)), st.LeftTranslation((b,)))),
    )


def _check_family(structure, dec: Decomposition, family) -> None:
    if family is None:
        return
    for p in dec.pieces:
        if p.map not in family:
            raise MapNotInFamily(f"{st.map_label(structure, p.map)} is not in the declared family")


def verify_decomposition(
    structure: st.Structure,
    dec: Decomposition,
    window: Optional[st.Window] = None,
    family: Optional[Sequence[st.MapSpec]] = None,
    max_failures: int = 50,
) -> DecompositionReport:
    """Check a decomposition element by element on ``window`` (the whole carrier if finite)."""
    _check_family(structure, dec, family)
    if window is None:
        window = st.window(structure, 0)
    scope = "exact" if structure.is_finite else f"window({window.radius})"
    for k, p in enumerate(dec.pieces):
        if not any(p.region.contains(x) for x in window.elements):
            raise EmptyPiece(f"piece {k + 1} has no element in the {scope} window")

    if dec.mode is st.Mode.GROUP:
        inv = [st.inverse_map(structure, p.map) for p in dec.pieces]

        def covers(k, x):
            return dec.pieces[k].region.contains(st.apply(structure, inv[k], x))
    else:

        def covers(k, x):
            return dec.pieces[k].region.contains(st.apply(structure, dec.pieces[k].map, x))

    n = len(dec.a_pieces)
    sides = (("a_cover", range(n)), ("b_cover", range(n, dec.size)))
    failures = []
    for x in window.elements:
        hits = sum(p.region.contains(x) for p in dec.pieces)
        if hits != 1:
            failures.append({"element": st.element_to_json(structure, x), "check": "pieces", "count": hits})
        for name, ks in sides:
            c = sum(covers(k, x) for k in ks)
            if c != 1:
                failures.append({"element": st.element_to_json(structure, x), "check": name, "count": c})
    overlap_only = bool(failures) and all(f["check"] != "pieces" and f["count"] > 1 for f in failures)
    return DecompositionReport(not failures, scope, failures[:max_failures], overlap_only)


def _dedupe_family(structure, family) -> list[st.MapSpec]:
    seen = set()
    out = []
    for f in family:
        table = st.map_table(structure, f)
        if table not in seen:
            seen.add(table)
            out.append(f)
    return out


class _Search:
    """Backtracking over element-to-piece assignments for one choice of maps."""

    def __init__(self, structure, maps: list, n: int, mode: st.Mode):
        self.size = structure.size
        self.k = len(maps)
        self.n = n
        self.side = [0] * n + [1] * (self.k - n)
        tables = [st.map_table(structure, f) for f in maps]
        # cov[p][z]: elements newly covered on piece p's side when z joins p
        if mode is st.Mode.GROUP:
            self.cov = [[(t[z],) for z in range(self.size)] for t in tables]
        else:
            self.cov = [[tuple(x for x in range(self.size) if t[x] == z) for z in range(self.size)] for t in tables]
        self.coverers = [[[] for _ in range(self.size)] for _ in range(2)]
        for p in range(self.k):
            for z in range(self.size):
                for y in self.cov[p][z]:
                    self.coverers[self.side[p]][y].append((z, p))
        self.maxcov = [max(len(self.cov[p][z]) for p in range(self.k)) for z in range(self.size)]

    def run(self) -> Optional[list[int]]:
        self.assign = [-1] * self.size
        self.count = [[0] * self.size for _ in range(2)]
        self.filled = [0] * self.k
        if self._place(0):
            return list(self.assign)
        return None

    def _apply(self, z, p, delta) -> bool:
        ok = True
        counts = self.count[self.side[p]]
        for y in self.cov[p][z]:
            counts[y] += delta
            if counts[y] > 1:
                ok = False
        self.filled[p] += delta
        self.assign[z] = p if delta > 0 else -1
        return ok

    def _feasible(self, nxt: int) -> bool:
        remaining = self.size - nxt
        if sum(1 for f in self.filled if f == 0) > remaining:
            return False
        uncovered = [[y for y in range(self.size) if self.count[s][y] == 0] for s in range(2)]
        if len(uncovered[0]) + len(uncovered[1]) > sum(self.maxcov[nxt:]):
            return False
        for s in range(2):
            counts = self.count[s]
            for y in uncovered[s]:
                if not any(
                    z >= nxt and all(counts[w] == 0 for w in self.cov[p][z]) for z, p in self.coverers[s][y]
                ):
                    return False
        return True

    def _place(self, z: int) -> bool:
        if z == self.size:
            return all(self.filled) and all(c == 1 for row in self.count for c in row)
        choices = [0] if z == 0 else range(self.k)
        for p in choices:
            if self._apply(z, p, 1) and self._feasible(z + 1) and self._place(z + 1):
                return True
            self._apply(z, p, -1)
        return False


def _map_choices(nf: int, n: int, m: int):
    for first in range(nf):
        rest_pool = [i for i in range(nf) if i != first]
        for rest in itertools.combinations(rest_pool, n - 1):
            for b in itertools.combinations(range(nf), m):
                yield (first,) + rest, b


def search_decomposition(
    structure: st.Structure,
    family: Sequence[st.MapSpec],
    cap: int,
    mode: Optional[st.Mode] = None,
) -> Optional[Decomposition]:
    """First decomposition in canonical order with at most ``cap`` pieces, or ``None``.

    Levels ``n + m = 2, 3, ...`` are tried in turn.  Within a level, maps
    are distinct on each side (two pieces sharing a map merge into one, so a
    minimal decomposition never repeats a map), element 0 is pinned to the
    first A-piece, and each further element tries pieces in label order.
    """
    if not structure.is_finite:
        raise SymbolicCarrier("search needs a finite carrier; use verify_decomposition on windows")
    mode = mode or structure.mode
    maps = _dedupe_family(structure, family)
    if mode is st.Mode.GROUP:
        for f in maps:
            if not st.is_bijective(structure, f):
                raise NonBijectiveMap(f"{st.map_label(structure, f)} is not bijective")
    start = 4 if mode is st.Mode.GROUP else 2
    for level in range(start, cap + 1):
        for n in range(1, level):
            m = level - n
            if n > len(maps) or m > len(maps):
                continue
            for a_idx, b_idx in _map_choices(len(maps), n, m):
                chosen = [maps[i] for i in a_idx + b_idx]
                assign = _Search(structure, chosen, n, mode).run()
                if assign is None:
                    continue
                pieces = [
                    Piece(st.Finite(frozenset(z for z in range(structure.size) if assign[z] == p)), chosen[p])
                    for p in range(level)
                ]
                return Decomposition(mode, tuple(pieces[:n]), tuple(pieces[n:]))
    return None


def tarski_number(
    structure: st.Structure,
    family: Sequence[st.MapSpec],
    cap: int,
    mode: Optional[st.Mode] = None,
) -> TarskiResult:
    dec = search_decomposition(structure, family, cap, mode)
    if dec is None:
        return TarskiResult(None, cap)
    return TarskiResult(dec.size, cap, dec)


def equidecomposable(
    a: set,
    b: set,
    family: Sequence[st.MapSpec],
    structure: st.Structure,
) -> Optional[list[tuple]]:
    """Piecewise map of ``a`` onto ``b`` by members of ``family``, via bipartite matching.

    Returns sorted ``(x, image, map_index)`` triples, or ``None``.
    """
    for f in family:
        if not st.is_bijective(structure, f):
            raise NonBijectiveMap(f"{st.map_label(structure, f)} is not bijective")
    if len(a) != len(b):
        return None
    left = st.sort_elements(structure, a)
    right = set(b)
    g = nx.Graph()
    g.add_nodes_from(("L", x) for x in left)
    g.add_nodes_from(("R", y) for y in st.sort_elements(structure, b))
    label: dict = {}
    for x in left:
        for k, f in enumerate(family):
            y = st.apply(structure, f, x)
            if y in right and (x, y) not in label:
                label[(x, y)] = k
                g.add_edge(("L", x), ("R", y))
    top = [("L", x) for x in left]
    matching = nx.bipartite.hopcroft_karp_matching(g, top_nodes=top)
    pairs = [(x, matching[("L", x)][1]) for x in left if ("L", x) in matching]
    if len(pairs) != len(left):
        return None
    return [(x, y, label[(x, y)]) for x, y in pairs]


def induced_pair(structure: st.Structure, dec: Decomposition) -> ConfigurationPair:
    """Configuration pair whose preimage blocks are the decomposition's tiles.

    Maps are the piece maps (inverted in group mode) and the partition is the
    piece list ``A_1..A_n, B_1..B_m``.
    """
    if dec.mode is st.Mode.GROUP:
        maps = tuple(st.inverse_map(structure, p.map) for p in dec.pieces)
    else:
        maps = tuple(p.map for p in dec.pieces)
    if structure.is_finite and all(isinstance(p.region, st.Finite) for p in dec.pieces):
        partition: st.Partition = st.ExplicitPartition(tuple(p.region.elements for p in dec.pieces))
    else:
        partition = st.RegionPartition(tuple(p.region for p in dec.pieces))
    return ConfigurationPair(structure, maps, partition)


def decomposition_to_json(structure: st.Structure, dec: Decomposition) -> dict:
    def piece(p: Piece) -> dict:
        return {"map": st.map_to_json(structure, p.map), "region": st.region_to_json(structure, p.region)}

    return {
        "mode": dec.mode.value,
        "a_pieces": [piece(p) for p in dec.a_pieces],
        "b_pieces": [piece(p) for p in dec.b_pieces],
    }


def decomposition_from_json(structure: st.Structure, doc: dict, partition=None) -> Decomposition:
    def piece(d: dict) -> Piece:
        return Piece(st.build_region(structure, d["region"], partition), st.build_map(structure, d["map"]))

    return Decomposition(
        st.Mode(doc.get("mode", structure.mode.value)),
        tuple(piece(d) for d in doc["a_pieces"]),
        tuple(piece(d) for d in doc["b_pieces"]),
    )

