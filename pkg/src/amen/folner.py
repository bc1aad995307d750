"""Finite invariant sets: ``|phi_i^-1(A_i) & X| == |A_i & X|`` for every index i."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import structures as st
from .configuration import ConfigurationPair, ConfigurationSet, assemble, configuration_of
from .errors import SemanticError, VerificationFailed
from .linsolve import NormalizedSolution, verify


@dataclass(frozen=True)
class InvariantSetQuery:
    maps: tuple
    sets: tuple
    window: st.Window
    size_cap: int

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))
        object.__setattr__(self, "sets", tuple(st.as_region(a) for a in self.sets))
        if not self.maps or len(self.maps) != len(self.sets):
            raise SemanticError("an invariant-set query needs k >= 1 maps and k sets")
        if self.size_cap < 1:
            raise SemanticError("size cap must be >= 1")


@dataclass(frozen=True)
class InvariantSetWitness:
    X: tuple
    # (|phi_i^-1(A_i) & X|, |A_i & X|) per index
    counts: tuple


def _weights(structure, query: InvariantSetQuery) -> list[list[int]]:
    """``w[x][i] = [phi_i(x) in A_i] - [x in A_i]`` over window elements."""
    out = []
    for x in query.window.elements:
        out.append([
            int(a.contains(st.apply(structure, f, x))) - int(a.contains(x))
            for f, a in zip(query.maps, query.sets)
        ])
    return out


def count_pairs(structure: st.Structure, maps, sets, X) -> tuple:
    sets = [st.as_region(a) for a in sets]
    return tuple(
        (sum(a.contains(st.apply(structure, f, x)) for x in X), sum(a.contains(x) for x in X))
        for f, a in zip(maps, sets)
    )


def search_invariant_set(structure: st.Structure, query: InvariantSetQuery) -> Optional[InvariantSetWitness]:
    """Smallest, then lexicographically least (in window order), invariant X with ``|X| <= size_cap``.

    Depth-first over increasing index tuples; a branch is cut as soon as
    some index's running imbalance exceeds what the remaining picks can
    still cancel.
    """
    elems = query.window.elements
    w = _weights(structure, query)
    N, k = len(elems), len(query.maps)
    # pos[t][i] / neg[t][i]: elements at index >= t with weight +1 / -1 on index i
    pos = [[0] * k for _ in range(N + 1)]
    neg = [[0] * k for _ in range(N + 1)]
    for t in range(N - 1, -1, -1):
        for i in range(k):
            pos[t][i] = pos[t + 1][i] + (w[t][i] > 0)
            neg[t][i] = neg[t + 1][i] + (w[t][i] < 0)

    def dfs(start: int, left: int, d: list[int], chosen: list[int]) -> Optional[list[int]]:
        if left == 0:
            return list(chosen) if not any(d) else None
        for t in range(start, N - left + 1):
            nd = [a + b for a, b in zip(d, w[t])]
            r = left - 1
            if any(
                (v < 0 and min(r, pos[t + 1][i]) < -v) or (v > 0 and min(r, neg[t + 1][i]) < v)
                for i, v in enumerate(nd)
            ):
                continue
            chosen.append(t)
            found = dfs(t + 1, r, nd, chosen)
            chosen.pop()
            if found is not None:
                return found
        return None

    for size in range(1, min(query.size_cap, N) + 1):
        hit = dfs(0, size, [0] * k, [])
        if hit is not None:
            X = tuple(elems[t] for t in hit)
            return InvariantSetWitness(X, count_pairs(structure, query.maps, query.sets, X))
    return None


def replicate_sets(
    maps: Sequence[st.MapSpec],
    partition: st.Partition,
    window: st.Window,
    size_cap: int,
) -> InvariantSetQuery:
    """Query pairing each map with each block, map-major: index (i-1)*m + j holds (phi_i, E_j)."""
    pairs = [(f, st.Block(partition, j)) for f in maps for j in range(1, partition.m + 1)]
    return InvariantSetQuery(tuple(f for f, _ in pairs), tuple(a for _, a in pairs), window, size_cap)


def intersect_refine(sets: Sequence, window: st.Window) -> st.ExplicitPartition:
    """Partition of the window into nonempty atoms ``A_1^(c) & ... & A_k^(c)``.

    Atoms are ordered by membership pattern, "inside" before "outside",
    first set most significant.
    """
    regions = [st.as_region(a) for a in sets]
    atoms: dict = {}
    for x in window.elements:
        key = tuple(not r.contains(x) for r in regions)
        atoms.setdefault(key, []).append(x)
    return st.ExplicitPartition(tuple(atoms[key] for key in sorted(atoms)))


def solution_from_invariant_set(
    witness: InvariantSetWitness,
    pair: ConfigurationPair,
    conset: ConfigurationSet,
) -> NormalizedSolution:
    """``f_C = |X & x0(C)| / |X|``, checked against the assembled system before it is returned."""
    index = {t: i for i, t in enumerate(conset.tuples)}
    counts = [0] * len(index)
    for x in witness.X:
        t = configuration_of(pair, x)
        if t not in index:
            raise VerificationFailed(f"witness element {x!r} realizes {t}, absent from the configuration set")
        counts[index[t]] += 1
    size = len(witness.X)
    cert = NormalizedSolution(tuple(Fraction(c, size) for c in counts))
    system = assemble(conset, pair.n, pair.m)
    if not verify(system, cert):
        raise VerificationFailed("counting vector of the invariant set does not solve the system")
    return cert
