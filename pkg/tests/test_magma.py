import itertools

import pytest
from hypothesis import given, settings, strategies as st

from entropic.expr import a, doubled_cycle_form, expr_eval, expr_shift, leaves, line_form, mul, parse_expr
from entropic.magma import (
    EventualSequence,
    FiniteMagma,
    MagmaError,
    MagmaFamily,
    Partition,
    affine_magma,
    check_4move_condition,
    check_bracket_conditions,
    congruence_closure,
    enumerate_entropic_magmas,
    find_isomorphism,
    is_compatible_family,
    is_entropic,
    quotient_magma,
    toyoda_decompose,
)

from oracles import NON_ENTROPIC, bracket_magmas, entropic_by_definition, example_magma

SEQ = EventualSequence.repeat(1, 2, 4)


def tables(max_order=3):
    return st.integers(1, max_order).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(1, n), min_size=n, max_size=n), min_size=n, max_size=n
        ).map(lambda rows: FiniteMagma(tuple(map(tuple, rows))))
    )


# -- construction ------------------------------------------------------------------


def test_table_validation():
    with pytest.raises(MagmaError):
        FiniteMagma(((1, 3), (1, 1)))
    with pytest.raises(MagmaError):
        FiniteMagma(((1, 2), (1,)))


def test_sequence_reads_preperiod_then_period():
    s = EventualSequence((3, 1), (2, 4))
    assert [s(k) for k in range(1, 8)] == [3, 1, 2, 4, 2, 4, 2]
    assert s.shifted()(1) == 1
    with pytest.raises(MagmaError):
        s(0)


# -- entropic law -------------------------------------------------------------------


def test_example_is_entropic():
    assert is_entropic(example_magma())


def test_left_projection_is_entropic():
    assert is_entropic(FiniteMagma.left_projection(5))


def test_non_entropic_witness():
    r = is_entropic(NON_ENTROPIC)
    assert not r
    assert r.witness == (2, 1, 2, 2)


@settings(max_examples=200, deadline=None)
@given(tables())
def test_entropic_matches_definition(m):
    assert bool(is_entropic(m)) == entropic_by_definition(m.table)


def test_enumeration_counts_match_brute_force():
    for n in (1, 2, 3):
        brute = [
            FiniteMagma(tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n)))
            for flat in itertools.product(range(1, n + 1), repeat=n * n)
        ]
        brute = {m.table for m in brute if entropic_by_definition(m.table)}
        listed = {m.table for m in enumerate_entropic_magmas(n)}
        assert listed == brute


def test_enumeration_of_order_4_contains_example():
    assert any(m.table == example_magma().table for m in enumerate_entropic_magmas(4))


def test_enumeration_filters_match_selection():
    for seq in (EventualSequence.repeat(1), EventualSequence.repeat(1, 2), EventualSequence.repeat(2, 1, 3)):
        every = list(enumerate_entropic_magmas(3))
        for variant in ("i", "ii"):
            found = {m.table for m in enumerate_entropic_magmas(3, f"bracket-{variant}", seq)}
            assert found == {m.table for m in every if check_bracket_conditions(m, seq, variant)}
    assert {m.table for m in enumerate_entropic_magmas(2, "bracket-i", EventualSequence.repeat(1))}


# -- bracket and 4-move conditions -----------------------------------------------------


def test_example_bracket_conditions():
    m = example_magma()
    assert check_bracket_conditions(m, SEQ, "i")
    assert check_bracket_conditions(m, SEQ, "ii")
    assert check_4move_condition(m, SEQ)
    # n = 1 values by table lookup
    assert m(m(2, 1), m(4, 2)) == 1
    assert m(m(1, 2), m(2, 1)) == 2
    assert m(m(1, 2), m(2, 4)) == 1 == m(m(4, 2), m(2, 1))


def test_projection_with_constant_sequence():
    m = FiniteMagma.left_projection(3)
    s = EventualSequence.repeat(2)
    assert check_bracket_conditions(m, s, "i")
    assert check_bracket_conditions(m, s, "ii")
    assert check_4move_condition(NON_ENTROPIC, EventualSequence.repeat(1))


def test_4move_with_period_two_is_vacuous():
    # a_{n+2} = a_n makes both sides the same expression
    assert check_4move_condition(NON_ENTROPIC, EventualSequence.repeat(1, 2))
    r = check_4move_condition(NON_ENTROPIC, EventualSequence.repeat(1, 1, 2))
    op = NON_ENTROPIC.op
    seq = EventualSequence.repeat(1, 1, 2)
    expected = all(
        op(op(seq(n), seq(n + 1)), op(seq(n + 1), seq(n + 2)))
        == op(op(seq(n + 2), seq(n + 1)), op(seq(n + 1), seq(n)))
        for n in (1, 2, 3)
    )
    assert bool(r) == expected


@pytest.mark.parametrize("name,m,s", bracket_magmas())
def test_bracket_magmas_pass(name, m, s):
    assert is_entropic(m)
    assert check_bracket_conditions(m, s, "i")
    assert check_bracket_conditions(m, s, "ii")


@settings(max_examples=150, deadline=None)
@given(tables(3), st.lists(st.integers(1, 3), min_size=1, max_size=3))
def test_bracket_check_matches_lookup(m, period):
    period = [min(p, m.order) for p in period]
    s = EventualSequence.repeat(*period)
    op = m.op
    window = range(1, len(period) + 1)
    i = all(
        op(op(s(n + 1), s(n)), op(s(n + 2), s(n + 1))) == s(n)
        and op(op(s(n + 1), s(n + 2)), op(s(n), s(n + 1))) == s(n)
        for n in window
    )
    ii = all(op(op(s(n), s(n + 1)), op(s(n + 1), s(n))) == s(n + 1) for n in window)
    assert bool(check_bracket_conditions(m, s, "i")) == i
    assert bool(check_bracket_conditions(m, s, "ii")) == ii


# -- congruences and quotients -------------------------------------------------------


def test_congruence_closure_examples():
    m = example_magma()
    assert congruence_closure(m, []).classes() == [(1,), (2,), (3,), (4,)]
    assert congruence_closure(m, [(1, 2)]).classes() == [(1, 2, 4), (3,)]
    every = [(x, y) for x in m.elements for y in m.elements]
    assert congruence_closure(m, every).classes() == [(1, 2, 3, 4)]


def test_quotient_of_example():
    m = example_magma()
    q = quotient_magma(m, Partition.from_classes(4, [(1, 2, 4), (3,)]))
    assert q.table == ((1, 2), (2, 2))
    assert quotient_magma(m, Partition.discrete(4)).table == m.table
    assert quotient_magma(m, Partition.from_classes(4, [(1, 2, 3, 4)])).table == ((1,),)


def test_quotient_rejects_non_congruence():
    with pytest.raises(MagmaError):
        quotient_magma(example_magma(), Partition.from_classes(4, [(1, 2), (3,), (4,)]))


@settings(max_examples=100, deadline=None)
@given(tables(4), st.lists(st.tuples(st.integers(1, 4), st.integers(1, 4)), max_size=3))
def test_closure_is_a_congruence(m, pairs):
    pairs = [(min(x, m.order), min(y, m.order)) for x, y in pairs]
    p = congruence_closure(m, pairs)
    cls = {x: i for i, c in enumerate(p.classes()) for x in c}
    for x, y in pairs:
        assert cls[x] == cls[y]
    for x1, x2, y1, y2 in itertools.product(m.elements, repeat=4):
        if cls[x1] == cls[x2] and cls[y1] == cls[y2]:
            assert cls[m(x1, y1)] == cls[m(x2, y2)]
    # quotient of an entropic magma stays entropic
    if is_entropic(m):
        assert is_entropic(quotient_magma(m, p))


# -- affine magmas and Toyoda ------------------------------------------------------


def test_affine_examples():
    m = affine_magma(5, 2, 3, 0)
    # residues 1 * 2 = 2 + 6 = 3; element k is residue k - 1
    assert m(2, 3) == 4
    xor = affine_magma(2, 1, 1, 0)
    assert xor.table == ((1, 2), (2, 1))
    assert is_entropic(xor)
    assert affine_magma(3, 0, 1, 0).table == FiniteMagma.right_projection(3).table


def test_toyoda_recovers_affine_structure():
    m = affine_magma(5, 2, 3, 0)
    dec = toyoda_decompose(m)
    for x, y in itertools.product(m.elements, repeat=2):
        assert dec.compose(x, y) == m(x, y)


def test_toyoda_rejects_non_quasigroup():
    with pytest.raises(MagmaError, match="not a quasigroup"):
        toyoda_decompose(example_magma())


@pytest.mark.parametrize("m,t,s,a0", [(2, 1, 1, 0), (7, 3, 5, 2), (9, 2, 4, 1), (8, 3, 5, 6)])
def test_toyoda_on_affine_quasigroups(m, t, s, a0):
    magma = affine_magma(m, t, s, a0)
    dec = toyoda_decompose(magma)
    assert all(dec.compose(x, y) == magma(x, y) for x, y in itertools.product(magma.elements, repeat=2))


# -- families ------------------------------------------------------------------------


def test_compatible_families():
    m = example_magma()
    assert is_compatible_family(MagmaFamily((m,), (1,)))
    assert is_compatible_family(MagmaFamily.with_projections(m))
    assert not is_compatible_family(MagmaFamily((NON_ENTROPIC, NON_ENTROPIC), (1, 1)))


def test_projection_families_for_all_small_entropic_magmas():
    for n in (2, 3):
        for m in enumerate_entropic_magmas(n):
            assert is_compatible_family(MagmaFamily.with_projections(m))


def test_isomorphism_search():
    m = example_magma()
    perm = (2, 1, 4, 3)
    relabeled = FiniteMagma(
        tuple(
            tuple(perm[m(perm.index(x) + 1, perm.index(y) + 1) - 1] for y in range(1, 5))
            for x in range(1, 5)
        )
    )
    phi = find_isomorphism(m, relabeled)
    assert phi is not None
    assert all(phi[m(x, y) - 1] == relabeled(phi[x - 1], phi[y - 1]) for x in m.elements for y in m.elements)
    assert find_isomorphism(m, FiniteMagma.left_projection(4)) is None


# -- expressions -------------------------------------------------------------------------


def test_expr_shift_examples():
    assert expr_shift(a(1)) == a(2)
    assert expr_shift(mul(a(1), a(2))) == mul(a(2), a(3))
    assert expr_shift(mul(a(2), a(1))) == mul(a(3), a(2))


def test_expr_eval_examples():
    m = example_magma()
    assert expr_eval(mul(a(1), a(2)), m, SEQ) == 1
    assert expr_eval(parse_expr("(a2*a1)*(a1*a2)"), m, SEQ) == 2
    assert expr_eval(a(3), m, SEQ) == 4


def test_closed_forms():
    assert leaves(line_form(2)) == [1, 2, 2, 3]
    assert parse_expr("(a_1*a_2)*(a_2*a_3)") == line_form(2)
    assert leaves(doubled_cycle_form(2)) == [3, 2, 2, 1, 2, 1, 1, 2]


@settings(max_examples=100, deadline=None)
@given(st.recursive(st.integers(1, 6).map(a), lambda c: st.tuples(c, c).map(lambda p: mul(*p)), max_leaves=8))
def test_parse_round_trip_and_shift(e):
    assert parse_expr(str(e)) == e
    assert leaves(expr_shift(e, 2)) == [k + 2 for k in leaves(e)]
