import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs

from amen import structures as st
from amen.configuration import assemble, enumerate_configurations
from amen.errors import EmptyPiece, MapNotInFamily, NonBijectiveMap, SymbolicCarrier
from amen.generate import SplitMix64, random_group_instance, random_semigroup_instance
from amen.linsolve import normalized_solution
from amen.paradox import (
    Decomposition,
    Piece,
    classical_free_group_decomposition,
    decomposition_from_json,
    decomposition_to_json,
    equidecomposable,
    induced_pair,
    search_decomposition,
    tarski_number,
    verify_decomposition,
)

SEMI = st.Mode.SEMIGROUP


def _finite(*xs):
    return st.Finite(frozenset(xs))


def _oracle_valid(tables, n, labels, size):
    """Semigroup-mode validity straight from the definition: every element is
    hit by exactly one preimage on each side."""
    for side in (range(n), range(n, len(tables))):
        for x in range(size):
            if sum(labels[tables[p][x]] == p for p in side) != 1:
                return False
    return all(any(labels[x] == p for x in range(size)) for p in range(len(tables)))


def _oracle_tarski(s, family, cap):
    """Brute force over map tuples with repetition and every piece labelling."""
    tables = [st.map_table(s, f) for f in family]
    for k in range(2, cap + 1):
        for n in range(1, k):
            for chosen in itertools.product(tables, repeat=k):
                for labels in itertools.product(range(k), repeat=s.size):
                    if _oracle_valid(chosen, n, labels, s.size):
                        return k
    return None


def test_left_zero_example():
    s = st.LeftZero(6)
    dec = Decomposition(SEMI, (Piece(_finite(0, 2, 4), st.LeftTranslation(0)),),
                        (Piece(_finite(1, 3, 5), st.LeftTranslation(1)),))
    assert verify_decomposition(s, dec).valid


def test_classical_free_group_decomposition():
    f2 = st.FreeGroup(2)
    rep = verify_decomposition(f2, classical_free_group_decomposition(), st.window(f2, 6))
    assert rep.valid and rep.scope == "window(6)"


def test_broken_free_group_decomposition_fails():
    f2 = st.FreeGroup(2)
    dec = classical_free_group_decomposition()
    # dropping the tail from P1 leaves the powers of a^-1 uncovered
    bad = Decomposition(dec.mode, (Piece(st.Prefix((1,)), st.Identity()), dec.a_pieces[1]), dec.b_pieces)
    rep = verify_decomposition(f2, bad, st.window(f2, 3))
    assert not rep.valid
    assert {"element": "e", "check": "pieces", "count": 0} in rep.failures


@settings(max_examples=60)
@given(hs.lists(hs.integers(0, 3), min_size=6, max_size=6), hs.lists(hs.integers(0, 5), min_size=4, max_size=4))
def test_z6_group_mode_candidates_are_invalid(labels, shifts):
    z6 = st.cyclic_group(6)
    if len(set(labels)) < 4:
        return
    pieces = [Piece(st.Finite(frozenset(x for x in range(6) if labels[x] == p)), st.LeftTranslation(shifts[p]))
              for p in range(4)]
    for n in (1, 2, 3):
        assert not verify_decomposition(z6, Decomposition(st.Mode.GROUP, tuple(pieces[:n]), tuple(pieces[n:]))).valid


def test_overlap_only_flag():
    s = st.FiniteSemigroup(3)
    dec = Decomposition(
        SEMI,
        (Piece(_finite(0), st.ExplicitTable((0, 0, 0))), Piece(_finite(1), st.Identity())),
        (Piece(_finite(2), st.ExplicitTable((2, 2, 2))),),
    )
    rep = verify_decomposition(s, dec)
    assert not rep.valid and rep.overlap_only
    assert rep.failures == [{"element": 1, "check": "a_cover", "count": 2}]


def test_verify_errors():
    s = st.LeftZero(6)
    dec = Decomposition(SEMI, (Piece(_finite(0, 2, 4), st.LeftTranslation(0)),),
                        (Piece(_finite(1, 3, 5), st.LeftTranslation(1)),))
    with pytest.raises(MapNotInFamily):
        verify_decomposition(s, dec, family=[st.LeftTranslation(0)])
    empty = Decomposition(SEMI, dec.a_pieces, dec.b_pieces + (Piece(st.Finite(frozenset()), st.Identity()),))
    with pytest.raises(EmptyPiece):
        verify_decomposition(s, empty)


def test_tarski_examples():
    lz = st.LeftZero(6)
    result = tarski_number(lz, st.all_left_translations(lz), 6)
    assert result.value == 2 and not result.above_cap
    (a,), (b,) = result.witness.a_pieces, result.witness.b_pieces
    # left-zero pattern: each map is a translation by an element of its own piece
    assert a.map.g in a.region.elements and b.map.g in b.region.elements
    assert verify_decomposition(lz, result.witness).valid

    rz = st.RightZero(6)
    assert tarski_number(rz, st.all_left_translations(rz), 6).above_cap
    z6 = st.cyclic_group(6)
    r = tarski_number(z6, st.all_left_translations(z6), 6)
    assert r.value is None and r.cap == 6 and r.witness is None


def test_search_errors():
    with pytest.raises(SymbolicCarrier):
        search_decomposition(st.FreeGroup(2), [st.Identity()], 4)
    z3 = st.cyclic_group(3)
    with pytest.raises(NonBijectiveMap):
        search_decomposition(z3, [st.ExplicitTable((0, 0, 0))], 4)


def test_search_matches_brute_force_oracle():
    rng = SplitMix64(11)
    checked = 0
    while checked < 12:
        s = st.transformation_semigroup(
            [tuple(rng.below(3) for _ in range(3)) for _ in range(rng.between(1, 2))]
        )
        if s.size > 4:
            continue
        s = st.FiniteSemigroup(s.size, s.product, SEMI)
        family = st.all_left_translations(s)
        found = tarski_number(s, family, 3)
        assert found.value == _oracle_tarski(s, family, 3)
        checked += 1
    for s in (st.LeftZero(3), st.RightZero(3), st.LeftZero(2)):
        family = st.all_left_translations(s)
        assert tarski_number(s, family, 3).value == _oracle_tarski(s, family, 3)


def test_found_decompositions_verify_and_refute_normalized_solutions():
    rng = SplitMix64(5)
    found = 0
    for _ in range(25):
        inst = random_semigroup_instance(rng)
        dec = search_decomposition(inst.structure, inst.family, 5)
        if dec is None:
            continue
        found += 1
        assert verify_decomposition(inst.structure, dec, family=list(inst.family)).valid
        pair = induced_pair(inst.structure, dec)
        system = assemble(enumerate_configurations(pair), pair.n, pair.m)
        assert normalized_solution(system) is None
    assert found > 0


def test_group_floor_on_random_groups():
    rng = SplitMix64(3)
    for _ in range(6):
        inst = random_group_instance(rng)
        g = inst.structure
        assert search_decomposition(g, st.all_left_translations(g), 5) is None


def test_equidecomposable_examples():
    z6 = st.cyclic_group(6)
    assert equidecomposable({0, 1}, {1, 2}, [st.LeftTranslation(1)], z6) == [(0, 1, 0), (1, 2, 0)]
    assert equidecomposable({0, 3}, {0, 3}, [st.Identity(), st.LeftTranslation(1)], z6) == [(0, 0, 0), (3, 3, 0)]
    assert equidecomposable({0}, {1, 2}, [st.LeftTranslation(1)], z6) is None
    with pytest.raises(NonBijectiveMap):
        equidecomposable({0}, {0}, [st.ExplicitTable((0,) * 6)], z6)


@settings(max_examples=60)
@given(hs.sets(hs.integers(0, 5), max_size=6), hs.sets(hs.integers(0, 5), max_size=6),
       hs.sets(hs.integers(0, 5), min_size=1, max_size=3))
def test_equidecomposable_oracle_and_symmetry(a, b, shifts):
    z6 = st.cyclic_group(6)
    family = [st.LeftTranslation(k) for k in sorted(shifts)]
    with_inverses = family + [st.inverse_map(z6, f) for f in family]
    got = equidecomposable(a, b, with_inverses, z6)
    # oracle: try every bijection a -> b
    ok = len(a) == len(b) and any(
        all(any((x + k) % 6 == y for k in shifts) or any((x - k) % 6 == y for k in shifts) for x, y in zip(sorted(a), perm))
        for perm in itertools.permutations(sorted(b))
    )
    assert (got is not None) == ok
    assert (equidecomposable(b, a, with_inverses, z6) is not None) == ok
    if got is not None:
        assert sorted(y for _, y, _ in got) == sorted(b)
        assert all(st.apply(z6, with_inverses[k], x) == y for x, y, k in got)


def test_decomposition_json_round_trip():
    f2 = st.FreeGroup(2)
    dec = classical_free_group_decomposition()
    assert decomposition_from_json(f2, decomposition_to_json(f2, dec)) == dec
    lz = st.LeftZero(6)
    found = search_decomposition(lz, st.all_left_translations(lz), 3)
    doc = decomposition_to_json(lz, found)
    assert doc["a_pieces"][0]["region"] == {"kind": "set", "elements": [0, 2, 3, 4, 5]}
    assert decomposition_from_json(lz, doc) == found
