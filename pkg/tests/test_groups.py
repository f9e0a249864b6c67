"""Group engine tests.

Derived expected values are computed by the independent oracles at the top
of this file (naive tuple arithmetic, exhaustive enumeration) and frozen
into the asserts.
"""

from __future__ import annotations

import random

import pytest

from anyonic.groups import (
    FiniteGroup,
    GroupElement,
    GroupError,
    NoSuchParametersError,
    SolvableGroupError,
    all_normal_subgroups,
    alternating_group,
    cyclic_group,
    derived_series,
    direct_product,
    find_qudit_params,
    identity,
    is_perfect,
    is_simple,
    is_solvable,
    parse_cycles,
    parse_group_spec,
    simple_perfect_quotient,
    sl25,
    symmetric_group,
)

# ---------------------------------------------------------------------------
# independent oracles (tuple-level, no library machinery)


def o_compose(a: tuple, b: tuple) -> tuple:
    return tuple(a[b[x]] for x in range(len(a)))


def o_inverse(a: tuple) -> tuple:
    inv = [0] * len(a)
    for x, y in enumerate(a):
        inv[y] = x
    return tuple(inv)


def o_close(gens: list[tuple], degree: int) -> set[tuple]:
    members = {tuple(range(degree))}
    frontier = list(members)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = o_compose(x, g)
            if y not in members:
                members.add(y)
                frontier.append(y)
    return members


def o_classes(elems: set[tuple]) -> list[frozenset[tuple]]:
    out = []
    left = set(elems)
    while left:
        x = next(iter(left))
        cls = frozenset(o_compose(o_compose(g, x), o_inverse(g)) for g in elems)
        out.append(cls)
        left -= cls
    return out


def o_commutator_subgroup(elems: set[tuple], degree: int) -> set[tuple]:
    comms = [
        o_compose(o_compose(a, b), o_compose(o_inverse(a), o_inverse(b)))
        for a in elems
        for b in elems
    ]
    return o_close(comms, degree)


# ---------------------------------------------------------------------------


A5 = alternating_group(5)


def test_compose_identity():
    g = parse_cycles("(1 2 3)", 5)
    assert identity(5) * g == g
    assert g * identity(5) == g


def test_compose_three_cycle_squared():
    # (345) o (345) = (354) by direct image chasing under g(h(x))
    b = parse_cycles("(3 4 5)", 5)
    sq = b * b
    assert sq.images == o_compose(b.images, b.images)
    assert str(sq) == "(3 5 4)"


def test_compose_paper_conjugation():
    # a (12)(34), b (345): a b a^-1 -> the 3-cycle (4 3 5), re-derived under
    # the fixed convention
    a = parse_cycles("(1 2)(3 4)", 5)
    b = parse_cycles("(3 4 5)", 5)
    conj = a * b * a.inverse()
    expected = o_compose(o_compose(a.images, b.images), o_inverse(a.images))
    assert conj.images == expected
    assert str(conj) == "(3 5 4)" or conj == parse_cycles("(4 3 5)", 5)


def test_degree_mismatch_rejected():
    with pytest.raises(GroupError):
        parse_cycles("(1 2)", 2) * parse_cycles("(1 2 3)", 3)


def test_group_laws_random_sample():
    rng = random.Random(7)
    n = len(A5)
    for _ in range(1000):
        i, j, k = rng.randrange(n), rng.randrange(n), rng.randrange(n)
        assert A5.mul(A5.mul(i, j), k) == A5.mul(i, A5.mul(j, k))
        assert A5.mul(i, A5.inv(i)) == A5.identity_index
        assert A5.mul(A5.inv(i), i) == A5.identity_index


def test_enumeration_orders():
    assert len(cyclic_group(6)) == 6
    assert len(symmetric_group(4)) == 24
    assert len(symmetric_group(5)) == 120
    assert len(A5) == 60
    assert len(alternating_group(6)) == 360
    assert len(sl25()) == 120
    assert len(direct_product(A5, A5)) == 3600


def test_conjugacy_classes_cyclic():
    z3 = cyclic_group(3)
    classes = z3.conjugacy_classes()
    assert sorted(len(c) for c in classes) == [1, 1, 1]


def test_conjugacy_classes_a5_against_oracle():
    elems = o_close([g.images for g in A5.generators], 5)
    oracle_sizes = sorted(len(c) for c in o_classes(elems))
    assert oracle_sizes == [1, 12, 12, 15, 20]
    lib_sizes = sorted(len(c) for c in A5.conjugacy_classes())
    assert lib_sizes == oracle_sizes


def test_class_of_three_cycle_has_size_20():
    b = A5.index_of(parse_cycles("(3 4 5)", 5))
    assert len(A5.class_members(b)) == 20


def test_class_sizes_divide_order():
    for G in (A5, symmetric_group(4), sl25()):
        for c in G.conjugacy_classes():
            assert len(G) % len(c) == 0
        assert sum(len(c) for c in G.conjugacy_classes()) == len(G)


def test_derived_series_a5():
    series = derived_series(A5)
    assert [len(s) for s in series] == [60]
    assert is_perfect(A5)


def test_derived_series_s4_against_oracle():
    S4 = symmetric_group(4)
    elems = o_close([g.images for g in S4.generators], 4)
    sizes = []
    cur = elems
    while True:
        sizes.append(len(cur))
        nxt = o_commutator_subgroup(cur, 4)
        if len(nxt) == len(cur):
            break
        cur = nxt
        if len(cur) == 1:
            sizes.append(1)
            break
    assert sizes == [24, 12, 4, 1]
    series = derived_series(S4)
    assert [len(s) for s in series] == [24, 12, 4, 1]
    assert is_solvable(S4)


def test_derived_series_abelian():
    z6 = cyclic_group(6)
    assert [len(s) for s in derived_series(z6)] == [6, 1]


def test_derived_terms_are_normal():
    for G in (symmetric_group(4), symmetric_group(5)):
        series = derived_series(G)
        for sub in series[1:]:
            assert sub.is_normal_in_parent()
        for prev, nxt in zip(series, series[1:]):
            assert nxt.members <= prev.members


def test_is_simple():
    assert is_simple(A5)
    assert not is_simple(symmetric_group(5))
    assert not is_simple(cyclic_group(1))
    assert is_simple(cyclic_group(3))  # prime cyclic
    assert not is_simple(sl25())


def test_is_simple_agrees_with_normal_subgroup_enumeration():
    for G in (A5, symmetric_group(4), sl25(), cyclic_group(6), symmetric_group(5)):
        normals = all_normal_subgroups(G)
        brute_simple = len(G) > 1 and all(
            len(n) in (1, len(G)) for n in normals
        )
        assert is_simple(G) == brute_simple


def test_quotient_s5():
    ctx = simple_perfect_quotient(symmetric_group(5))
    assert len(ctx.perfect) == 60
    assert len(ctx.kernel) == 1
    assert len(ctx.quotient) == 60
    assert is_perfect(ctx.quotient) and is_simple(ctx.quotient)


def test_quotient_a5xa5():
    G = direct_product(A5, A5)
    ctx = simple_perfect_quotient(G)
    assert len(ctx.perfect) == 3600
    assert len(ctx.kernel) == 60
    assert len(ctx.quotient) == 60
    assert ctx.quotient.degree <= 32
    assert is_perfect(ctx.quotient) and is_simple(ctx.quotient)


def test_quotient_sl25():
    G = sl25()
    ctx = simple_perfect_quotient(G)
    assert len(ctx.perfect) == 120
    assert len(ctx.kernel) == 2
    assert len(ctx.quotient) == 60
    assert is_perfect(ctx.quotient) and is_simple(ctx.quotient)


def test_quotient_epi_is_homomorphism():
    for G in (symmetric_group(5), sl25()):
        ctx = simple_perfect_quotient(G)
        P = sorted(ctx.perfect.members)
        Q = ctx.quotient
        if len(P) <= 400:
            pairs = [(x, y) for x in P for y in P]
        else:
            rng = random.Random(3)
            pairs = [(rng.choice(P), rng.choice(P)) for _ in range(2000)]
        for x, y in pairs:
            assert ctx.epi[G.mul(x, y)] == Q.mul(ctx.epi[x], ctx.epi[y])
        kernel = {x for x in P if ctx.epi[x] == Q.identity_index}
        assert kernel == set(ctx.kernel.members)


def test_quotient_epi_sampled_a5xa5():
    G = direct_product(A5, A5)
    ctx = simple_perfect_quotient(G)
    P = sorted(ctx.perfect.members)
    Q = ctx.quotient
    rng = random.Random(5)
    for _ in range(2000):
        x, y = rng.choice(P), rng.choice(P)
        assert ctx.epi[G.mul(x, y)] == Q.mul(ctx.epi[x], ctx.epi[y])
    kernel = {x for x in P if ctx.epi[x] == Q.identity_index}
    assert kernel == set(ctx.kernel.members)


def test_solvable_rejected():
    with pytest.raises(SolvableGroupError):
        simple_perfect_quotient(symmetric_group(4))


def test_qudit_params_a5_d2():
    a, b, d = find_qudit_params(A5, prefer_d=2)
    assert d == 2
    assert a == parse_cycles("(1 2)(3 4)", 5)
    assert b == parse_cycles("(3 4 5)", 5)


def test_qudit_params_a5_d3():
    a, b, d = find_qudit_params(A5, prefer_d=3)
    assert d == 3
    assert a == parse_cycles("(1 2 3)", 5)
    assert b == parse_cycles("(3 4 5)", 5)
    # basis fluxes a^i b a^-i, derived by conjugation enumeration
    ia, ib = A5.index_of(a), A5.index_of(b)
    fluxes = [A5.elements[A5.conj(ib, A5.power(ia, i))] for i in range(3)]
    assert fluxes[0] == parse_cycles("(3 4 5)", 5)
    assert fluxes[1] == parse_cycles("(1 4 5)", 5)
    assert fluxes[2] == parse_cycles("(2 4 5)", 5)


def test_qudit_params_orbit_distinct():
    for d in (2, 3, 5):
        a, b, got = find_qudit_params(A5, prefer_d=d)
        assert got == d
        ia, ib = A5.index_of(a), A5.index_of(b)
        orbit = {A5.conj(ib, A5.power(ia, i)) for i in range(d)}
        assert len(orbit) == d
        assert A5.conj(ib, A5.power(ia, d)) == ib


def test_qudit_params_d7_rejected():
    # A5 element orders are 1, 2, 3, 5
    orders = {A5.element_order(i) for i in range(len(A5))}
    assert orders == {1, 2, 3, 5}
    with pytest.raises(NoSuchParametersError):
        find_qudit_params(A5, prefer_d=7)


def test_parse_group_spec_a5():
    G = parse_group_spec("(1 2 3 4 5);(1 2 3)")
    assert len(G) == 60
    assert is_perfect(G) and is_simple(G)


def test_parse_group_spec_errors():
    with pytest.raises(GroupError):
        parse_group_spec("")
    with pytest.raises(GroupError, match="generator 2"):
        parse_group_spec("(1 2);(1 x)")


def test_parse_cycles_roundtrip():
    for text in ["(1 2)(3 4)", "(3 4 5)", "(1 2 3 4 5)"]:
        g = parse_cycles(text, 5)
        assert parse_cycles(str(g), 5) == g


def test_order_cap():
    with pytest.raises(GroupError):
        symmetric_group(8)  # 40320 > 20000
