"""Carriers, self-maps, partitions, regions and observation windows.

Elements are plain Python values: ``int`` indices for finite carriers,
signed ``int`` for the integer line and reduced-word tuples (see
:mod:`amen.words`) for free groups.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Optional, Union

from . import words
from .errors import (
    DomainMismatch,
    MalformedTable,
    NotAGroup,
    SemanticError,
    Unclassifiable,
)


class Mode(str, Enum):
    GROUP = "group"
    SEMIGROUP = "semigroup"


# --------------------------------------------------------------------------
# carriers


@dataclass(frozen=True)
class FiniteSemigroup:
    """A finite carrier ``0..size-1`` with an optional multiplication table.

    Without a table the carrier is a bare set; only explicit-table maps
    can act on it.
    """

    size: int
    product: Optional[tuple] = None
    mode: Mode = Mode.SEMIGROUP

    def __post_init__(self):
        if self.size < 1:
            raise MalformedTable("carrier size must be >= 1")
        if self.product is not None:
            object.__setattr__(self, "product", tuple(tuple(r) for r in self.product))
            _check_table(self.size, self.product)
            if not _is_associative(self.product):
                if self.mode is Mode.GROUP:
                    raise NotAGroup("product table is not associative")
                raise MalformedTable("product table is not associative")
        if self.mode is Mode.GROUP:
            if self.product is None:
                raise NotAGroup("group mode needs a product table")
            e = _identity_of(self.product)
            if e is None:
                raise NotAGroup("no two-sided identity")
            for x in range(self.size):
                if not any(self.product[x][y] == e == self.product[y][x] for y in range(self.size)):
                    raise NotAGroup(f"element {x} has no inverse")

    is_finite = True

    def elements(self) -> list:
        return list(range(self.size))

    def contains(self, x) -> bool:
        return isinstance(x, int) and not isinstance(x, bool) and 0 <= x < self.size

    def multiply(self, x, y):
        if self.product is None:
            raise DomainMismatch("bare finite carrier has no product")
        return self.product[x][y]

    def identity(self):
        if self.product is None:
            return None
        return _identity_of(self.product)

    def inverse(self, x):
        e = self.identity()
        if self.mode is not Mode.GROUP:
            raise DomainMismatch("inverses need a group")
        return next(y for y in range(self.size) if self.product[x][y] == e)


@dataclass(frozen=True)
class FreeGroup:
    rank: int

    def __post_init__(self):
        if not 1 <= self.rank <= 26:
            raise SemanticError("free group rank must be in 1..26")

    is_finite = False
    mode = Mode.GROUP

    def contains(self, x) -> bool:
        return (
            isinstance(x, tuple)
            and all(isinstance(k, int) and 0 < abs(k) <= self.rank for k in x)
            and words.is_reduced(x)
        )

    def multiply(self, x, y):
        return words.multiply(x, y)

    def identity(self):
        return words.IDENTITY

    def inverse(self, x):
        return words.inverse(x)


@dataclass(frozen=True)
class IntegerLine:
    is_finite = False
    mode = Mode.GROUP

    def contains(self, x) -> bool:
        return isinstance(x, int) and not isinstance(x, bool)

    def multiply(self, x, y):
        return x + y

    def identity(self):
        return 0

    def inverse(self, x):
        return -x


@dataclass(frozen=True)
class LeftZero:
    """``x * y = x`` on ``0..size-1``."""

    size: int

    def __post_init__(self):
        if self.size < 1:
            raise MalformedTable("carrier size must be >= 1")

    is_finite = True
    mode = Mode.SEMIGROUP
    elements = FiniteSemigroup.elements
    contains = FiniteSemigroup.contains

    def multiply(self, x, y):
        return x

    def identity(self):
        return None


@dataclass(frozen=True)
class RightZero:
    """``x * y = y`` on ``0..size-1``."""

    size: int

    def __post_init__(self):
        if self.size < 1:
            raise MalformedTable("carrier size must be >= 1")

    is_finite = True
    mode = Mode.SEMIGROUP
    elements = FiniteSemigroup.elements
    contains = FiniteSemigroup.contains

    def multiply(self, x, y):
        return y

    def identity(self):
        return None


Structure = Union[FiniteSemigroup, FreeGroup, IntegerLine, LeftZero, RightZero]


def _check_table(size: int, table) -> None:
    if len(table) != size or any(len(row) != size for row in table):
        raise MalformedTable(f"product table must be {size}x{size}")
    for row in table:
        for v in row:
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < size:
                raise MalformedTable(f"table entry {v!r} out of range")


def _is_associative(t) -> bool:
    n = len(t)
    return all(t[t[x][y]][z] == t[x][t[y][z]] for x in range(n) for y in range(n) for z in range(n))


def _identity_of(t):
    n = len(t)
    for e in range(n):
        if all(t[e][x] == x and t[x][e] == x for x in range(n)):
            return e
    return None


def cyclic_group(n: int) -> FiniteSemigroup:
    return FiniteSemigroup(n, tuple(tuple((x + y) % n for y in range(n)) for x in range(n)), Mode.GROUP)


def _close(gens: list[tuple], compose) -> list[tuple]:
    seen = list(dict.fromkeys(gens))
    frontier = list(seen)
    known = set(seen)
    while frontier:
        nxt = []
        for f in frontier:
            for g in gens:
                for h in (compose(f, g), compose(g, f)):
                    if h not in known:
                        known.add(h)
                        seen.append(h)
                        nxt.append(h)
        frontier = nxt
    return seen


def transformation_semigroup(gens: Iterable[Iterable[int]], limit: int = 64) -> FiniteSemigroup:
    """Semigroup generated by transformations of ``0..d-1`` under composition.

    Elements are numbered in generation order; ``x * y`` is "apply y, then x".
    """
    gens = [tuple(g) for g in gens]
    compose = lambda f, g: tuple(f[g[i]] for i in range(len(g)))  # noqa: E731
    elems = _close(gens, compose)
    if len(elems) > limit:
        raise SemanticError(f"generated semigroup exceeds {limit} elements")
    index = {f: i for i, f in enumerate(elems)}
    table = tuple(tuple(index[compose(f, g)] for g in elems) for f in elems)
    is_group = all(len(set(f)) == len(f) for f in elems)
    return FiniteSemigroup(len(elems), table, Mode.GROUP if is_group else Mode.SEMIGROUP)


def permutation_group(gens: Iterable[Iterable[int]]) -> FiniteSemigroup:
    gens = [tuple(g) for g in gens]
    degree = len(gens[0])
    s = transformation_semigroup(gens + [tuple(range(degree))])
    if s.mode is not Mode.GROUP:
        raise NotAGroup("generators are not permutations")
    return s


def build_structure(desc: dict) -> Structure:
    """Build a carrier from its JSON description (see README for the schema)."""
    kind = desc.get("kind")
    mode = desc.get("mode")
    if kind == "finite":
        return FiniteSemigroup(
            desc["size"],
            desc.get("table"),
            Mode(mode) if mode is not None else Mode.SEMIGROUP,
        )
    if kind == "free_group":
        return FreeGroup(desc["rank"])
    if kind == "integers":
        return IntegerLine()
    if kind in ("left_zero", "right_zero"):
        if mode not in (None, "semigroup"):
            raise SemanticError(f"{kind} is always a semigroup")
        return (LeftZero if kind == "left_zero" else RightZero)(desc["size"])
    raise SemanticError(f"unknown structure kind {kind!r}")


def structure_to_json(s: Structure) -> dict:
    if isinstance(s, FiniteSemigroup):
        d: dict[str, Any] = {"kind": "finite", "size": s.size, "mode": s.mode.value}
        if s.product is not None:
            d["table"] = [list(r) for r in s.product]
        return d
    if isinstance(s, FreeGroup):
        return {"kind": "free_group", "rank": s.rank}
    if isinstance(s, IntegerLine):
        return {"kind": "integers"}
    if isinstance(s, LeftZero):
        return {"kind": "left_zero", "size": s.size}
    return {"kind": "right_zero", "size": s.size}


def check_element(s: Structure, x) -> None:
    if not s.contains(x):
        raise DomainMismatch(f"{x!r} is not an element of {type(s).__name__}")


def element_to_json(s: Structure, x):
    return words.format_word(x) if isinstance(s, FreeGroup) else x


def element_from_json(s: Structure, v):
    if isinstance(s, FreeGroup):
        if not isinstance(v, str):
            raise DomainMismatch(f"free group elements are word strings, got {v!r}")
        try:
            return words.parse_word(v, s.rank)
        except ValueError as exc:
            raise DomainMismatch(str(exc)) from None
    check_element(s, v)
    return v


def element_key(s: Structure, x):
    """Deterministic ordering key: shortlex for words, (|x|, x) for integers."""
    if isinstance(s, FreeGroup):
        return words.word_key(x)
    if isinstance(s, IntegerLine):
        return (abs(x), x)
    return x


def sort_elements(s: Structure, xs: Iterable) -> list:
    return sorted(xs, key=lambda x: element_key(s, x))


# --------------------------------------------------------------------------
# maps


@dataclass(frozen=True)
class LeftTranslation:
    g: Any


@dataclass(frozen=True)
class InnerAutomorphism:
    """``y -> g^-1 y g``."""

    g: Any


@dataclass(frozen=True)
class Identity:
    pass


@dataclass(frozen=True)
class ExplicitTable:
    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))


MapSpec = Union[LeftTranslation, InnerAutomorphism, Identity, ExplicitTable]


def apply(s: Structure, m: MapSpec, x):
    """Image of ``x`` under ``m``."""
    check_element(s, x)
    if isinstance(m, Identity):
        return x
    if isinstance(m, ExplicitTable):
        if not s.is_finite:
            raise DomainMismatch("explicit tables need a finite carrier")
        if len(m.images) != s.size:
            raise MalformedTable("explicit table length differs from carrier size")
        return m.images[x]
    check_element(s, m.g)
    if isinstance(m, LeftTranslation):
        return s.multiply(m.g, x)
    if isinstance(m, InnerAutomorphism):
        if s.mode is not Mode.GROUP:
            raise DomainMismatch("inner automorphisms need a group")
        return s.multiply(s.multiply(s.inverse(m.g), x), m.g)
    raise TypeError(f"not a map: {m!r}")


def is_bijective(s: Structure, m: MapSpec) -> bool:
    if isinstance(m, Identity):
        return True
    if s.is_finite:
        return len({apply(s, m, x) for x in s.elements()}) == s.size
    if isinstance(m, ExplicitTable):
        raise DomainMismatch("explicit tables need a finite carrier")
    return True  # translations and conjugations of a group


def inverse_map(s: Structure, m: MapSpec) -> MapSpec:
    if not is_bijective(s, m):
        raise DomainMismatch(f"{map_label(s, m)} is not invertible")
    if isinstance(m, Identity):
        return m
    if s.mode is Mode.GROUP and isinstance(m, (LeftTranslation, InnerAutomorphism)):
        return type(m)(s.inverse(m.g))
    inv = [0] * s.size
    for x in s.elements():
        inv[apply(s, m, x)] = x
    return ExplicitTable(tuple(inv))


def map_label(s: Structure, m: MapSpec) -> str:
    if isinstance(m, Identity):
        return "id"
    if isinstance(m, ExplicitTable):
        return "table(" + ",".join(map(str, m.images)) + ")"
    g = element_to_json(s, m.g)
    return f"left({g})" if isinstance(m, LeftTranslation) else f"inner({g})"


def map_table(s: Structure, m: MapSpec) -> tuple:
    """Function table of ``m`` on a finite carrier."""
    return tuple(apply(s, m, x) for x in s.elements())


def build_map(s: Structure, desc: dict) -> MapSpec:
    kind = desc.get("kind")
    if kind == "identity":
        return Identity()
    if kind == "table":
        if not s.is_finite:
            raise DomainMismatch("explicit tables need a finite carrier")
        images = desc["images"]
        if len(images) != s.size:
            raise MalformedTable("explicit table length differs from carrier size")
        for v in images:
            check_element(s, v)
        return ExplicitTable(tuple(images))
    if kind in ("left", "inner"):
        g = element_from_json(s, desc["g"])
        if kind == "inner" and s.mode is not Mode.GROUP:
            raise DomainMismatch("inner automorphisms need a group")
        if isinstance(s, FiniteSemigroup) and s.product is None:
            raise DomainMismatch("bare finite carrier has no translations")
        return LeftTranslation(g) if kind == "left" else InnerAutomorphism(g)
    raise SemanticError(f"unknown map kind {kind!r}")


def map_to_json(s: Structure, m: MapSpec) -> dict:
    if isinstance(m, Identity):
        return {"kind": "identity"}
    if isinstance(m, ExplicitTable):
        return {"kind": "table", "images": list(m.images)}
    kind = "left" if isinstance(m, LeftTranslation) else "inner"
    return {"kind": kind, "g": element_to_json(s, m.g)}


def all_left_translations(s: Structure) -> list[MapSpec]:
    if not s.is_finite:
        raise DomainMismatch("all_left_translations needs a finite carrier")
    return [LeftTranslation(g) for g in s.elements()]


# --------------------------------------------------------------------------
# partitions


@dataclass(frozen=True)
class ExplicitPartition:
    blocks: tuple

    def __post_init__(self):
        blocks = tuple(frozenset(b) for b in self.blocks if len(b) > 0)
        seen: set = set()
        for b in blocks:
            if seen & b:
                raise SemanticError("partition blocks overlap")
            seen |= b
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "_lookup", {x: i + 1 for i, b in enumerate(blocks) for x in b})

    @property
    def m(self) -> int:
        return len(self.blocks)

    def classify(self, x) -> int:
        try:
            return self._lookup[x]
        except (KeyError, TypeError):
            raise Unclassifiable(f"{x!r} lies in no block") from None


@dataclass(frozen=True)
class FirstLetter:
    """Block ``i <= rank``: words starting with generator ``i``; block ``rank+1``: everything else."""

    rank: int

    @property
    def m(self) -> int:
        return self.rank + 1

    def classify(self, x) -> int:
        if not isinstance(x, tuple):
            raise Unclassifiable(f"first-letter classifier needs a word, got {x!r}")
        if x and x[0] > 0:
            return x[0]
        return self.rank + 1


@dataclass(frozen=True)
class Residue:
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise SemanticError("modulus must be >= 1")

    @property
    def m(self) -> int:
        return self.modulus

    def classify(self, x) -> int:
        if not isinstance(x, int) or isinstance(x, bool):
            raise Unclassifiable(f"residue classifier needs an integer, got {x!r}")
        return x % self.modulus + 1


@dataclass(frozen=True)
class CellPartition:
    """Partition of a carrier into the witness cells of a configuration set.

    Block ``i`` holds the elements whose configuration is ``tuples[i-1]``.
    """

    structure: Any
    maps: tuple
    base: Any
    tuples: tuple
    _index: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {t: i + 1 for i, t in enumerate(self.tuples)})

    @property
    def m(self) -> int:
        return len(self.tuples)

    def classify(self, x) -> int:
        t = (self.base.classify(x),) + tuple(self.base.classify(apply(self.structure, f, x)) for f in self.maps)
        try:
            return self._index[t]
        except KeyError:
            raise Unclassifiable(f"configuration {t} of {x!r} is not in the cell list") from None


@dataclass(frozen=True)
class RegionPartition:
    """Partition given by membership regions; block ``i`` is ``regions[i-1]``."""

    regions: tuple

    @property
    def m(self) -> int:
        return len(self.regions)

    def classify(self, x) -> int:
        for i, r in enumerate(self.regions):
            if r.contains(x):
                return i + 1
        raise Unclassifiable(f"{x!r} lies in no region")


Partition = Union[ExplicitPartition, FirstLetter, Residue, CellPartition, RegionPartition]


def classify(p: Partition, x) -> int:
    return p.classify(x)


def validate_partition(s: Structure, p: Partition, window: "Window | None" = None) -> None:
    """Check that ``p`` is exhaustive with no empty block on a finite carrier (or on the window)."""
    if isinstance(p, FirstLetter):
        if not isinstance(s, FreeGroup) or s.rank != p.rank:
            raise SemanticError("first-letter partition needs a free group of the same rank")
    if isinstance(p, ExplicitPartition) and not s.is_finite:
        raise SemanticError("explicit partitions need a finite carrier")
    if isinstance(p, Residue) and isinstance(s, FreeGroup):
        raise SemanticError("residue partitions need integer elements")
    pool = s.elements() if s.is_finite else (window.elements if window else None)
    if pool is None:
        return
    seen = set()
    for x in pool:
        seen.add(p.classify(x))
    if s.is_finite and seen != set(range(1, p.m + 1)):
        raise SemanticError("partition has an empty block on the carrier")


def partition_to_json(s: Structure, p: Partition) -> dict:
    if isinstance(p, ExplicitPartition):
        return {"kind": "explicit", "blocks": [[element_to_json(s, x) for x in sort_elements(s, b)] for b in p.blocks]}
    if isinstance(p, FirstLetter):
        return {"kind": "first_letter"}
    if isinstance(p, Residue):
        return {"kind": "residue", "modulus": p.modulus}
    if isinstance(p, RegionPartition):
        return {"kind": "regions", "regions": [region_to_json(s, r) for r in p.regions]}
    return {"kind": "cells", "tuples": [list(t) for t in p.tuples]}


def build_partition(s: Structure, desc: dict) -> Partition:
    kind = desc.get("kind")
    if kind == "explicit":
        blocks = [[element_from_json(s, v) for v in b] for b in desc["blocks"]]
        if s.is_finite and sorted(x for b in blocks for x in b) != s.elements():
            raise SemanticError("explicit blocks must cover the carrier exactly once")
        p = ExplicitPartition(tuple(blocks))
    elif kind == "first_letter":
        if not isinstance(s, FreeGroup):
            raise SemanticError("first-letter partition needs a free group")
        p = FirstLetter(s.rank)
    elif kind == "residue":
        p = Residue(desc["modulus"])
    else:
        raise SemanticError(f"unknown partition kind {kind!r}")
    validate_partition(s, p)
    return p


def locality(s: Structure, p: Partition, maps: Iterable[MapSpec]) -> Optional[int]:
    """Window radius on which every configuration is witnessed, or ``None`` if not certified.

    Free groups: a word's configuration under left translations by words of
    length <= t, for a partition read off prefixes of length d, depends on its
    prefix of length t+d; the ball of that radius holds all such prefixes.
    Integer line: translations commute with a periodic partition, so one
    period (plus zero) suffices.
    """
    maps = list(maps)
    if isinstance(s, FreeGroup):
        depth = _prefix_depth(p)
        if depth is None:
            return None
        t = 0
        for f in maps:
            if isinstance(f, LeftTranslation):
                t = max(t, len(f.g))
            elif not isinstance(f, Identity):
                return None
        return t + depth
    if isinstance(s, IntegerLine):
        period = _period(p)
        if period is None or not all(isinstance(f, (LeftTranslation, InnerAutomorphism, Identity)) for f in maps):
            return None
        return period
    return None


def _prefix_depth(p: Partition) -> Optional[int]:
    if isinstance(p, FirstLetter):
        return 1
    if isinstance(p, CellPartition):
        base = _prefix_depth(p.base)
        if base is None or not all(isinstance(f, (LeftTranslation, Identity)) for f in p.maps):
            return None
        return base + max((len(f.g) for f in p.maps if isinstance(f, LeftTranslation)), default=0)
    return None


def _period(p: Partition) -> Optional[int]:
    if isinstance(p, Residue):
        return p.modulus
    if isinstance(p, CellPartition):
        return _period(p.base)
    return None


# --------------------------------------------------------------------------
# regions: membership predicates used as pieces and as invariant-set targets


@dataclass(frozen=True)
class Finite:
    elements: frozenset

    def __post_init__(self):
        object.__setattr__(self, "elements", frozenset(self.elements))

    def contains(self, x) -> bool:
        return x in self.elements


@dataclass(frozen=True)
class Prefix:
    """Reduced words that start with ``word``."""

    word: tuple

    def contains(self, x) -> bool:
        return isinstance(x, tuple) and x[: len(self.word)] == self.word


@dataclass(frozen=True)
class Powers:
    """``{letter^k : k >= start}``."""

    letter: int
    start: int = 0

    def contains(self, x) -> bool:
        if not isinstance(x, tuple):
            return False
        return len(x) >= self.start and all(c == self.letter for c in x)


@dataclass(frozen=True)
class Block:
    partition: Any
    label: int

    def contains(self, x) -> bool:
        return self.partition.classify(x) == self.label


@dataclass(frozen=True)
class AnyOf:
    parts: tuple

    def contains(self, x) -> bool:
        return any(r.contains(x) for r in self.parts)


@dataclass(frozen=True)
class Difference:
    keep: Any
    drop: Any

    def contains(self, x) -> bool:
        return self.keep.contains(x) and not self.drop.contains(x)


Region = Union[Finite, Prefix, Powers, Block, AnyOf, Difference]


def as_region(block) -> Region:
    if hasattr(block, "contains") and not isinstance(block, (set, frozenset)):
        return block
    return Finite(frozenset(block))


def region_to_json(s: Structure, r: Region) -> dict:
    if isinstance(r, Finite):
        return {"kind": "set", "elements": [element_to_json(s, x) for x in sort_elements(s, r.elements)]}
    if isinstance(r, Prefix):
        return {"kind": "prefix", "word": words.format_word(r.word)}
    if isinstance(r, Powers):
        return {"kind": "powers", "letter": words.format_word((r.letter,)), "start": r.start}
    if isinstance(r, Block):
        return {"kind": "block", "label": r.label}
    if isinstance(r, AnyOf):
        return {"kind": "union", "parts": [region_to_json(s, q) for q in r.parts]}
    return {"kind": "difference", "keep": region_to_json(s, r.keep), "drop": region_to_json(s, r.drop)}


def build_region(s: Structure, desc: dict, partition: Partition | None = None) -> Region:
    kind = desc.get("kind")
    if kind == "set":
        return Finite(frozenset(element_from_json(s, v) for v in desc["elements"]))
    if kind in ("prefix", "powers"):
        if not isinstance(s, FreeGroup):
            raise SemanticError(f"{kind} regions need a free group")
        if kind == "prefix":
            return Prefix(words.parse_word(desc["word"], s.rank))
        letter = words.parse_word(desc["letter"], s.rank)
        if len(letter) != 1:
            raise SemanticError("powers need a single letter")
        return Powers(letter[0], int(desc.get("start", 0)))
    if kind == "block":
        if partition is None:
            raise SemanticError("block regions need the instance partition")
        return Block(partition, int(desc["label"]))
    if kind == "union":
        return AnyOf(tuple(build_region(s, d, partition) for d in desc["parts"]))
    if kind == "difference":
        return Difference(build_region(s, desc["keep"], partition), build_region(s, desc["drop"], partition))
    raise SemanticError(f"unknown region kind {kind!r}")


def preimage(s: Structure, m: MapSpec, block, window: "Window") -> set:
    """``{t in window : m(t) in block}``; ``block`` is a set of elements or a region."""
    r = as_region(block)
    return {t for t in window.elements if r.contains(apply(s, m, t))}


# --------------------------------------------------------------------------
# windows


@dataclass(frozen=True)
class Window:
    elements: tuple
    radius: Optional[int] = None
    # None means every element is interior
    interior: Optional[frozenset] = None

    def is_interior(self, x) -> bool:
        return self.interior is None or x in self.interior

    def __len__(self):
        return len(self.elements)


def window(s: Structure, radius: int = 0) -> Window:
    if s.is_finite:
        return Window(tuple(s.elements()))
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if isinstance(s, FreeGroup):
        return Window(tuple(words.ball(s.rank, radius)), radius)
    return Window(tuple(sort_elements(s, range(-radius, radius + 1))), radius)
