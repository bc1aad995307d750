import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs

from amen import structures as st
from amen import words
from amen.configuration import (
    ConfigurationPair,
    Exactness,
    WindowPolicy,
    assemble,
    cells,
    configuration_of,
    enumerate_configurations,
    refine_by_cells,
)
from amen.errors import NonBijectiveInGroupMode, NotExact, WindowTooSmall
from amen.linsolve import nonzero_solution, NullspaceVector

from conftest import sympy_rank

F2_CONFIGS = [(1, 1, 2), (2, 1, 2), (3, 1, 1), (3, 1, 2), (3, 1, 3), (3, 2, 2), (3, 3, 2)]


def _string_ball(radius):
    """Independent oracle: reduced words as strings over a, A(=a^-1), b, B(=b^-1)."""
    inv = {"a": "A", "A": "a", "b": "B", "B": "b"}
    out = [""]
    for n in range(1, radius + 1):
        for t in itertools.product("aAbB", repeat=n):
            if all(inv[t[i]] != t[i + 1] for i in range(n - 1)):
                out.append("".join(t))
    return out


def _string_left(g, w):
    inv = {"a": "A", "A": "a", "b": "B", "B": "b"}
    return w[1:] if w and w[0] == inv[g] else g + w


def _string_block(w):
    return 1 if w.startswith("a") else 2 if w.startswith("b") else 3


def test_f2_oracle_brute_force_over_ball3(f2_pair):
    oracle = sorted({(_string_block(w), _string_block(_string_left("a", w)), _string_block(_string_left("b", w)))
                     for w in _string_ball(3)})
    assert oracle == F2_CONFIGS
    conset = enumerate_configurations(f2_pair)
    assert conset.tuples == F2_CONFIGS
    assert conset.exactness is Exactness.EXACT_CLASSIFIER_LOCAL
    assert conset.radius == 2


def test_witness_soundness(f2_pair):
    conset = enumerate_configurations(f2_pair)
    for c in conset.configurations:
        assert configuration_of(f2_pair, c.witness) == c.tuple


def test_one_block_partition():
    z6 = st.cyclic_group(6)
    pair = ConfigurationPair(z6, (st.LeftTranslation(1), st.LeftTranslation(3)), st.ExplicitPartition((range(6),)))
    conset = enumerate_configurations(pair)
    assert conset.tuples == [(1, 1, 1)]
    (cell,) = cells(pair, conset)
    assert cell.members == tuple(range(6))
    system = assemble(conset, 2, 1)
    assert all(row == () for row in system.rows)


def test_z6_parity(z6):
    pair = ConfigurationPair(z6, (st.LeftTranslation(1),), st.Residue(2))
    conset = enumerate_configurations(pair)
    assert conset.tuples == [(1, 2), (2, 1)]
    assert conset.exactness is Exactness.EXACT_FINITE
    c = cells(pair, conset)
    assert c[0].members == (0, 2, 4) and c[1].members == (1, 3, 5)
    assert c[0].images == ((1, 3, 5),)


def test_f2_cell_on_ball2(f2_pair):
    conset = enumerate_configurations(f2_pair)
    c = cells(f2_pair, conset, st.window(st.FreeGroup(2), 2))
    by = {x.config: x.members for x in c}
    assert by[(3, 1, 1)] == (words.parse_word("b^-1a"),)


def test_assemble_z6_by_hand(z6):
    pair = ConfigurationPair(z6, (st.LeftTranslation(1),), st.Residue(2))
    system = assemble(enumerate_configurations(pair), 1, 2)
    # row (1,1): f(1,2) - f(2,1); row (1,2): f(2,1) - f(1,2)
    assert system.dense().tolist() == [[1, -1], [-1, 1]]
    assert system.row_labels == [(1, 1), (1, 2)]


def test_assemble_f2_shape_and_normalization(f2_pair):
    conset = enumerate_configurations(f2_pair)
    system = assemble(conset, 2, 3)
    assert system.shape == (6, 7)
    aug = assemble(conset, 2, 3, normalize=True)
    assert aug.shape == (7, 7)
    assert aug.dense().tolist()[-1] == [1] * 7
    assert aug.rhs() == [0] * 6 + [1]
    assert aug.homogeneous() == system


def test_column_structure(f2_pair):
    system = assemble(enumerate_configurations(f2_pair), 2, 3)
    a = system.dense()
    assert set(a.flatten().tolist()) <= {-1, 0, 1}
    for j in range(2):
        block = a[3 * j: 3 * j + 3]
        assert (block.sum(axis=0) == 0).all()
        for col, t in enumerate(system.columns):
            column = block[:, col].tolist()
            if t[0] == t[j + 1]:
                assert column == [0, 0, 0]
            else:
                assert column.count(1) == 1 and column.count(-1) == 1
                assert column[t[0] - 1] == 1 and column[t[j + 1] - 1] == -1


def test_refine_examples(z6, parity):
    pair = ConfigurationPair(z6, (st.LeftTranslation(1),), parity)
    refined = refine_by_cells(pair, enumerate_configurations(pair))
    assert refined.blocks == parity.blocks
    one = ConfigurationPair(z6, (st.LeftTranslation(1),), st.ExplicitPartition((range(6),)))
    assert refine_by_cells(one, enumerate_configurations(one)).blocks == (frozenset(range(6)),)


def test_refine_uneven_partition_preserves_solvability(z6):
    pair = ConfigurationPair(z6, (st.LeftTranslation(1),), st.ExplicitPartition(([0, 1, 2, 3], [4, 5])))
    conset = enumerate_configurations(pair)
    refined = refine_by_cells(pair, conset)
    assert refined.m == len(conset)
    pair2 = ConfigurationPair(z6, pair.maps, refined)
    conset2 = enumerate_configurations(pair2)
    s1, s2 = assemble(conset, 1, pair.m), assemble(conset2, 1, pair2.m)
    # oracle: rank deficiency computed by sympy on both systems
    d1 = sympy_rank(s1.dense().tolist()) < s1.shape[1]
    d2 = sympy_rank(s2.dense().tolist()) < s2.shape[1]
    assert d1 == d2 == isinstance(nonzero_solution(s1), NullspaceVector)


def test_refine_symbolic_uses_cell_classifier(f2_pair):
    conset = enumerate_configurations(f2_pair)
    refined = refine_by_cells(f2_pair, conset)
    assert refined.m == 7
    for x in st.window(st.FreeGroup(2), 3).elements:
        assert conset.tuples[refined.classify(x) - 1] == configuration_of(f2_pair, x)
    # the refined pair is still locality-certified (prefix depth 1 + 1)
    pair2 = ConfigurationPair(f2_pair.structure, f2_pair.maps, refined)
    assert enumerate_configurations(pair2).exactness is Exactness.EXACT_CLASSIFIER_LOCAL


def test_window_stable_grade_and_refusal():
    f2 = st.FreeGroup(2)
    pair = ConfigurationPair(f2, (st.InnerAutomorphism((1,)),), st.FirstLetter(2))
    conset = enumerate_configurations(pair, WindowPolicy(radius=1, patience=2, max_radius=6))
    assert conset.exactness is Exactness.WINDOW_STABLE
    assert conset.patience == 2
    with pytest.raises(NotExact):
        refine_by_cells(pair, conset)


def test_window_too_small():
    f2 = st.FreeGroup(2)
    pair = ConfigurationPair(f2, (st.InnerAutomorphism((1,)),), st.FirstLetter(2))
    with pytest.raises(WindowTooSmall):
        enumerate_configurations(pair, WindowPolicy(radius=0, patience=2, max_radius=1))


def test_integer_line_is_certified():
    pair = ConfigurationPair(st.IntegerLine(), (st.LeftTranslation(1), st.LeftTranslation(5)), st.Residue(3))
    conset = enumerate_configurations(pair)
    assert conset.exactness is Exactness.EXACT_CLASSIFIER_LOCAL
    assert conset.tuples == [(1, 2, 3), (2, 3, 1), (3, 1, 2)]


def test_group_mode_rejects_non_bijective(z6):
    with pytest.raises(NonBijectiveInGroupMode):
        ConfigurationPair(z6, (st.ExplicitTable((0,) * 6),), st.Residue(2))
    # the same map is fine on a semigroup-mode carrier
    ConfigurationPair(st.FiniteSemigroup(6), (st.ExplicitTable((0,) * 6),), st.Residue(2))


def test_equal_configuration_sets_give_equal_systems(z6):
    # Z6 with shift by 1 and the integer line with shift by 1, both mod 2
    p1 = ConfigurationPair(z6, (st.LeftTranslation(1),), st.Residue(2))
    p2 = ConfigurationPair(st.IntegerLine(), (st.LeftTranslation(1),), st.Residue(2))
    c1, c2 = enumerate_configurations(p1), enumerate_configurations(p2)
    assert c1.tuples == c2.tuples
    assert assemble(c1, 1, 2) == assemble(c2, 1, 2)


tables = hs.integers(1, 7).flatmap(
    lambda n: hs.tuples(
        hs.just(n),
        hs.lists(hs.lists(hs.integers(0, n - 1), min_size=n, max_size=n), min_size=1, max_size=3),
        hs.lists(hs.integers(0, 3), min_size=n, max_size=n),
    )
)


@settings(max_examples=60)
@given(tables)
def test_cells_partition_and_determinism(spec):
    n, maps, labels = spec
    s = st.FiniteSemigroup(n)
    p = st.ExplicitPartition(tuple([x for x in range(n) if labels[x] == k] for k in range(4)))
    pair = ConfigurationPair(s, tuple(st.ExplicitTable(tuple(m)) for m in maps), p)
    conset = enumerate_configurations(pair)
    assert conset == enumerate_configurations(pair)
    assert conset.tuples == sorted(set(conset.tuples))
    cs = cells(pair, conset)
    members = [x for c in cs for x in c.members]
    assert sorted(members) == list(range(n))
    assert all(c.members for c in cs)
    system = assemble(conset, pair.n, pair.m)
    a = system.dense()
    for j in range(pair.n):
        assert (a[j * pair.m:(j + 1) * pair.m].sum(axis=0) == 0).all()


def test_refinement_with_non_bijective_maps_can_lose_solutions():
    # one map sends 0 into {1,2,3} and {1,2,3} onto 4, so after refining,
    # block {0} has no preimage and its weight is forced to zero down the chain
    s = st.FiniteSemigroup(5)
    maps = (st.ExplicitTable((1, 4, 4, 4, 3)), st.ExplicitTable((4, 1, 3, 1, 3)))
    pair = ConfigurationPair(s, maps, st.ExplicitPartition(([0, 1, 2, 3], [4])))
    conset = enumerate_configurations(pair)
    assert conset.tuples == [(1, 1, 2), (1, 2, 1), (2, 1, 1)]
    coarse = assemble(conset, 2, 2)
    assert isinstance(nonzero_solution(coarse), NullspaceVector)
    assert sympy_rank(coarse.dense().tolist()) == 2
    refined = ConfigurationPair(s, maps, refine_by_cells(pair, conset))
    rcon = enumerate_configurations(refined)
    assert rcon.tuples == [(1, 2, 3), (2, 3, 2), (3, 2, 2)]
    fine = assemble(rcon, 2, 3)
    assert sympy_rank(fine.dense().tolist()) == 3
    assert not isinstance(nonzero_solution(fine), NullspaceVector)
