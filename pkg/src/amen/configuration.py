"""Configuration sets, witness cells and the configuration equation system."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from . import structures as st
from .errors import NonBijectiveInGroupMode, NotExact, SemanticError, WindowTooSmall


class Exactness(str, Enum):
    EXACT_FINITE = "exact_finite"
    EXACT_CLASSIFIER_LOCAL = "exact_classifier_local"
    WINDOW_STABLE = "window_stable"


@dataclass(frozen=True)
class ConfigurationPair:
    structure: st.Structure
    maps: tuple
    partition: st.Partition

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))
        if not self.maps:
            raise SemanticError("a configuration pair needs at least one map")
        if self.partition.m < 1:
            raise SemanticError("a configuration pair needs at least one block")
        if self.structure.mode is st.Mode.GROUP:
            for f in self.maps:
                if not st.is_bijective(self.structure, f):
                    raise NonBijectiveInGroupMode(
                        f"{st.map_label(self.structure, f)} is not bijective on a group-mode carrier"
                    )

    @property
    def n(self) -> int:
        return len(self.maps)

    @property
    def m(self) -> int:
        return self.partition.m


@dataclass(frozen=True)
class Configuration:
    tuple: tuple
    witness: object


@dataclass(frozen=True)
class ConfigurationSet:
    configurations: tuple
    exactness: Exactness
    radius: Optional[int] = None
    patience: Optional[int] = None

    @property
    def tuples(self) -> list[tuple]:
        return [c.tuple for c in self.configurations]

    def __len__(self):
        return len(self.configurations)


@dataclass(frozen=True)
class WindowPolicy:
    """Radius schedule ``radius, radius+1, ...`` for carriers without a locality certificate."""

    radius: int = 1
    patience: int = 2
    max_radius: int = 8


@dataclass(frozen=True)
class Cell:
    config: tuple
    members: tuple
    images: tuple


def configuration_of(pair: ConfigurationPair, x) -> tuple:
    p = pair.partition
    return (p.classify(x),) + tuple(p.classify(st.apply(pair.structure, f, x)) for f in pair.maps)


def _scan(pair: ConfigurationPair, elements) -> dict:
    found: dict = {}
    for x in elements:
        t = configuration_of(pair, x)
        if t not in found:
            found[t] = x
    return found


def _package(pair, found, exactness, radius=None, patience=None) -> ConfigurationSet:
    confs = tuple(Configuration(t, found[t]) for t in sorted(found))
    return ConfigurationSet(confs, exactness, radius, patience)


def enumerate_configurations(pair: ConfigurationPair, policy: WindowPolicy = WindowPolicy()) -> ConfigurationSet:
    """Enumerate the configuration set of ``pair`` with a graded exactness claim."""
    s = pair.structure
    if s.is_finite:
        return _package(pair, _scan(pair, s.elements()), Exactness.EXACT_FINITE)
    r_cert = st.locality(s, pair.partition, pair.maps)
    if r_cert is not None:
        w = st.window(s, r_cert)
        return _package(pair, _scan(pair, w.elements), Exactness.EXACT_CLASSIFIER_LOCAL, r_cert)

    r = policy.radius
    found = _scan(pair, st.window(s, r).elements)
    stable = 0
    while stable < policy.patience:
        r += 1
        if r > policy.max_radius:
            raise WindowTooSmall(
                f"no stabilization within radius {policy.max_radius} (patience {policy.patience})"
            )
        grown = _scan(pair, st.window(s, r).elements)
        stable = stable + 1 if grown.keys() == found.keys() else 0
        for t, x in grown.items():
            if t not in found or st.element_key(s, x) < st.element_key(s, found[t]):
                found[t] = x
    return _package(pair, found, Exactness.WINDOW_STABLE, r, policy.patience)


def enumeration_window(pair: ConfigurationPair, conset: ConfigurationSet) -> st.Window:
    return st.window(pair.structure, conset.radius or 0)


def cells(pair: ConfigurationPair, conset: ConfigurationSet, window: Optional[st.Window] = None) -> list[Cell]:
    """Witness cells ``x0(C)`` (and their images) restricted to the window.

    Raises :class:`NotExact` if a window element realizes a configuration
    missing from ``conset``.
    """
    s = pair.structure
    if window is None:
        window = enumeration_window(pair, conset)
    index = {t: i for i, t in enumerate(conset.tuples)}
    members: list[list] = [[] for _ in index]
    for x in window.elements:
        if not window.is_interior(x):
            continue
        t = configuration_of(pair, x)
        if t not in index:
            raise NotExact(f"{st.element_to_json(s, x)} realizes {t}, absent from the configuration set")
        members[index[t]].append(x)
    out = []
    for t, mem in zip(conset.tuples, members):
        imgs = tuple(tuple(st.apply(s, f, x) for x in mem) for f in pair.maps)
        out.append(Cell(t, tuple(mem), imgs))
    return out


@dataclass(frozen=True)
class EquationSystem:
    """Sparse ``{-1, 0, 1}`` system, row ``(j, i)`` for map j and block i (map-major).

    ``rows[r]`` is a tuple of ``(column, coefficient)`` pairs.  With
    ``normalized`` set, an all-ones row with right-hand side 1 is appended.
    """

    n: int
    m: int
    columns: tuple
    rows: tuple
    normalized: bool = False

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.columns)

    @property
    def row_labels(self) -> list:
        labels: list = [(j, i) for j in range(1, self.n + 1) for i in range(1, self.m + 1)]
        if self.normalized:
            labels.append("sum")
        return labels

    def rhs(self) -> list[int]:
        b = [0] * len(self.rows)
        if self.normalized:
            b[-1] = 1
        return b

    def dense(self) -> np.ndarray:
        a = np.zeros(self.shape, dtype=np.int64)
        for r, row in enumerate(self.rows):
            for c, v in row:
                a[r, c] = v
        return a

    def homogeneous(self) -> "EquationSystem":
        if not self.normalized:
            return self
        return EquationSystem(self.n, self.m, self.columns, self.rows[:-1], False)

    def with_normalization(self) -> "EquationSystem":
        if self.normalized:
            return self
        ones = tuple((c, 1) for c in range(len(self.columns)))
        return EquationSystem(self.n, self.m, self.columns, self.rows + (ones,), True)

    def triplets(self) -> list[tuple[int, int, int]]:
        return [(r, c, v) for r, row in enumerate(self.rows) for c, v in row]


def assemble(conset: ConfigurationSet | list, n: int, m: int, normalize: bool = False) -> EquationSystem:
    """Coefficient of ``f_C`` in row ``(j, i)`` is ``[c0 == i] - [cj == i]``."""
    tuples = conset.tuples if isinstance(conset, ConfigurationSet) else [tuple(t) for t in conset]
    if not tuples:
        raise SemanticError("cannot assemble an empty configuration set")
    rows = []
    for j in range(1, n + 1):
        for i in range(1, m + 1):
            row = []
            for col, t in enumerate(tuples):
                v = (t[0] == i) - (t[j] == i)
                if v:
                    row.append((col, v))
            rows.append(tuple(row))
    system = EquationSystem(n, m, tuple(tuples), tuple(rows))
    return system.with_normalization() if normalize else system


def refine_by_cells(pair: ConfigurationPair, conset: ConfigurationSet) -> st.Partition:
    """Partition whose blocks are the witness cells, in configuration order."""
    if conset.exactness is Exactness.WINDOW_STABLE:
        raise NotExact("refinement needs an exact configuration set")
    s = pair.structure
    if s.is_finite:
        return st.ExplicitPartition(tuple(c.members for c in cells(pair, conset)))
    return st.CellPartition(s, pair.maps, pair.partition, tuple(conset.tuples))
