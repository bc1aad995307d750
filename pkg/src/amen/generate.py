"""Seeded random instances.

The generator is SplitMix64 so that a seed reproduces the same instance
stream in any language.  ``below(n)`` draws ``next_u64()`` until it is
below the largest multiple of ``n`` that fits in 64 bits and returns it
modulo ``n``.  The draw order of every ``random_*`` function is part of its
contract and is spelled out in its docstring.
"""

from __future__ import annotations

from . import structures as st
from .instances import Instance

MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        if n < 1:
            raise ValueError("n must be >= 1")
        limit = (1 << 64) - (1 << 64) % n
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def between(self, lo: int, hi: int) -> int:
        """Uniform on ``lo..hi`` inclusive."""
        return lo + self.below(hi - lo + 1)

    def permutation(self, n: int) -> list[int]:
        # Fisher-Yates from the top
        p = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.below(i + 1)
            p[i], p[j] = p[j], p[i]
        return p


def _quaternion_group() -> st.FiniteSemigroup:
    # elements (sign, unit) with unit in 1, i, j, k
    units = {("1", "1"): (1, "1")}
    for u in "ijk":
        units[("1", u)] = units[(u, "1")] = (1, u)
        units[(u, u)] = (-1, "1")
    for a, b, c in (("i", "j", "k"), ("j", "k", "i"), ("k", "i", "j")):
        units[(a, b)] = (1, c)
        units[(b, a)] = (-1, c)
    elems = [(s, u) for u in "1ijk" for s in (1, -1)]
    index = {e: i for i, e in enumerate(elems)}

    def mul(x, y):
        s, u = units[(x[1], y[1])]
        return (x[0] * y[0] * s, u)

    table = tuple(tuple(index[mul(x, y)] for y in elems) for x in elems)
    return st.FiniteSemigroup(8, table, st.Mode.GROUP)


def group_catalogue() -> list[st.FiniteSemigroup]:
    """All groups of order <= 8 up to isomorphism, in a fixed order."""
    out = [st.cyclic_group(n) for n in range(1, 9)]
    out.append(st.permutation_group([(1, 0, 3, 2), (2, 3, 0, 1)]))  # Z2 x Z2
    out.append(st.permutation_group([(1, 0, 2), (1, 2, 0)]))  # S3
    out.append(st.permutation_group([(1, 0, 2, 3, 4, 5), (0, 1, 3, 4, 5, 2)]))  # Z2 x Z4
    out.append(st.permutation_group([(1, 0, 2, 3, 4, 5), (0, 1, 3, 2, 4, 5), (0, 1, 2, 3, 5, 4)]))  # Z2^3
    out.append(st.permutation_group([(1, 2, 3, 0), (0, 3, 2, 1)]))  # D4
    out.append(_quaternion_group())
    return out


def random_partition(rng: SplitMix64, size: int, max_blocks: int = 4) -> st.ExplicitPartition:
    """Draw ``m = between(1, min(max_blocks, size))``, then a label ``below(m)`` per element.

    Empty blocks are dropped; blocks are ordered by their least element.
    """
    m = rng.between(1, min(max_blocks, size))
    labels = [rng.below(m) for _ in range(size)]
    blocks: dict = {}
    for x, lab in enumerate(labels):
        blocks.setdefault(lab, []).append(x)
    return st.ExplicitPartition(tuple(blocks[lab] for lab in sorted(blocks, key=lambda b: blocks[b][0])))


def random_group_instance(rng: SplitMix64, max_maps: int = 3) -> Instance:
    """Group-mode instance with bijective maps.

    Draws: catalogue index; map count ``between(1, max_maps)``; per map a kind
    ``below(3)`` (0 left translation, 1 inner automorphism, 2 random
    permutation table) followed by its element or permutation; then the
    partition.
    """
    groups = group_catalogue()
    g = groups[rng.below(len(groups))]
    maps = []
    for _ in range(rng.between(1, max_maps)):
        kind = rng.below(3)
        if kind == 0:
            maps.append(st.LeftTranslation(rng.below(g.size)))
        elif kind == 1:
            maps.append(st.InnerAutomorphism(rng.below(g.size)))
        else:
            maps.append(st.ExplicitTable(tuple(rng.permutation(g.size))))
    return Instance(g, tuple(maps), random_partition(rng, g.size))


def random_semigroup(rng: SplitMix64, max_size: int = 8) -> st.Structure:
    """A small semigroup: kind ``below(4)`` picks left-zero, right-zero,
    a transformation semigroup, or a catalogue group viewed as a semigroup.

    Transformation semigroups draw a degree ``between(2, 3)``, a generator
    count ``between(1, 2)`` and the images; draws repeat until the closure
    has at most ``max_size`` elements.
    """
    kind = rng.below(4)
    if kind == 0:
        return st.LeftZero(rng.between(2, max_size))
    if kind == 1:
        return st.RightZero(rng.between(2, max_size))
    if kind == 2:
        while True:
            degree = rng.between(2, 3)
            gens = [tuple(rng.below(degree) for _ in range(degree)) for _ in range(rng.between(1, 2))]
            s = st.transformation_semigroup(gens, limit=64)
            if s.size <= max_size:
                return st.FiniteSemigroup(s.size, s.product, st.Mode.SEMIGROUP)
    groups = group_catalogue()
    g = groups[rng.below(len(groups))]
    return st.FiniteSemigroup(g.size, g.product, st.Mode.SEMIGROUP)


def random_semigroup_instance(rng: SplitMix64, max_maps: int = 3) -> Instance:
    """Semigroup-mode instance; the decomposition family is every left translation.

    Draws: the semigroup; map count ``between(1, max_maps)`` and a
    translating element per map; then the partition.
    """
    s = random_semigroup(rng)
    maps = tuple(st.LeftTranslation(rng.below(s.size)) for _ in range(rng.between(1, max_maps)))
    return Instance(s, maps, random_partition(rng, s.size), tuple(st.all_left_translations(s)))


def random_finite_instance(rng: SplitMix64, max_size: int = 8, max_maps: int = 3) -> Instance:
    """Scanner instance: kind ``below(3)`` picks a group instance, a semigroup
    instance, or a bare carrier of size ``between(1, max_size)`` with map count
    ``between(1, max_maps)`` and arbitrary tables (``below(size)`` per entry).
    """
    kind = rng.below(3)
    if kind == 0:
        return random_group_instance(rng, max_maps)
    if kind == 1:
        return random_semigroup_instance(rng, max_maps)
    size = rng.between(1, max_size)
    s = st.FiniteSemigroup(size)
    maps = tuple(
        st.ExplicitTable(tuple(rng.below(size) for _ in range(size))) for _ in range(rng.between(1, max_maps))
    )
    return Instance(s, maps, random_partition(rng, size))
