# coding:utf-8
"""
上同调环测试
"""
from fractions import Fraction

import numpy as np
import pytest

from arrangement import pad_arrangement
from chow_ring import (C, CC, CCC, ChowRingError, ContextMismatchError, RingContext, integrate, mul,
                       top_pairing)
from intersection_lattice import lattice_summary
from verification_harness import fixture_arrangement, random_element, random_shape


@pytest.fixture
def generic_ctx():
    return RingContext.from_shape(4, [], [], {})


@pytest.fixture
def one_of_each():
    """一条 a 边（m=3）包含一条 b 边（m=4）"""
    return RingContext.from_shape(6, [3], [4], {0: [0]})


def test_powers_of_c(generic_ctx):
    c = generic_ctx.c()
    assert c * c == generic_ctx.element({CC: 1})
    assert (c ** 3).coefficient(CCC) == 1
    assert integrate(c ** 3) == -1
    assert c ** 4 == generic_ctx.zero()


def test_degree_one_products(one_of_each):
    ctx = one_of_each
    a, b, c = ctx.a(0), ctx.b(0), ctx.c()
    assert a * a == ctx.element({("aa", 0): 1})
    assert a * c == ctx.element({("ac", 0): 1})
    assert a * b == ctx.element({("ac", 0): -1})
    assert b * c == ctx.zero()
    assert b * b == ctx.element({("bb", 0): 1})


def test_unrelated_edges_annihilate():
    ctx = RingContext.from_shape(10, [3, 3], [4], {0: [], 1: []})
    assert ctx.a(0) * ctx.a(1) == ctx.zero()
    assert ctx.a(0) * ctx.b(0) == ctx.zero()


def test_top_degree_products(one_of_each):
    ctx = one_of_each
    a, b, c = ctx.a(0), ctx.b(0), ctx.c()
    assert (c * a * a).coefficient(CCC) == -1
    assert (a * a * a).coefficient(CCC) == 0
    assert (a * (a * c)).coefficient(CCC) == -1
    assert (b * a * a).coefficient(CCC) == 1
    assert (b * b * b).coefficient(CCC) == -1


def test_cube_of_isolated_a():
    ctx = RingContext.from_shape(5, [3], [], {})
    a = ctx.a(0)
    assert (a ** 3).coefficient(CCC) == 2


def test_series_inverse(generic_ctx):
    one, c = generic_ctx.one(), generic_ctx.c()
    assert (one - c).inverse() == one + c + c ** 2 + c ** 3
    assert (one - c) ** -2 == ((one - c).inverse()) ** 2


def test_inverse_on_random_elements():
    rng = np.random.default_rng(3)
    for _ in range(20):
        ctx = random_shape(rng)
        x = random_element(ctx, rng, 5) + 7
        if x.constant() == 0:
            continue
        assert x * x.inverse() == ctx.one()


def test_inverse_requires_unit(generic_ctx):
    with pytest.raises(ChowRingError):
        generic_ctx.c().inverse()


def test_commutative_and_associative():
    rng = np.random.default_rng(5)
    for _ in range(30):
        ctx = random_shape(rng)
        x, y, z = (random_element(ctx, rng, 9) for _ in range(3))
        assert mul(x, y) == mul(y, x)
        assert mul(mul(x, y), z) == mul(x, mul(y, z))


def test_top_pairing_matches_product():
    rng = np.random.default_rng(9)
    for _ in range(20):
        ctx = random_shape(rng)
        x, y = random_element(ctx, rng, 9), random_element(ctx, rng, 9)
        assert top_pairing(x, y) == mul(x, y).coefficient(CCC)


def test_grading(one_of_each):
    ctx = one_of_each
    x = ctx.one() * 2 + ctx.c() - ctx.a(0) * ctx.c() + ctx.element({CCC: Fraction(1, 2)})
    parts = x.graded()
    assert parts[0] == ctx.scalar(2)
    assert parts[1] == ctx.c()
    assert parts[2] == ctx.element({("ac", 0): -1})
    assert parts[3].coefficient(CCC) == Fraction(1, 2)


def test_basis_layout(one_of_each):
    basis = one_of_each.basis()
    assert len(basis) == 1 + 3 + 4 + 1
    assert basis[0] == ("1",) and basis[-1] == CCC


def test_context_mismatch(generic_ctx, one_of_each):
    with pytest.raises(ContextMismatchError):
        generic_ctx.c() + one_of_each.c()
    with pytest.raises(ContextMismatchError):
        mul(generic_ctx.c(), one_of_each.c())


def test_shape_requires_room_for_inherited_hyperplanes():
    with pytest.raises(ContextMismatchError):
        RingContext.from_shape(10, [4], [3], {0: [0]})
    with pytest.raises(ContextMismatchError):
        RingContext.from_shape(3, [3], [4], {0: [0]})


def test_shape_incidences_are_consistent(one_of_each):
    assert len(one_of_each.incidences) == 6
    through_a = [bw for av, bw in one_of_each.incidences if 0 in av]
    assert len(through_a) == 3
    assert all(0 in bw for bw in through_a)


def test_from_summary_needs_nnc():
    padded = pad_arrangement(fixture_arrangement("A1"), 4)
    with pytest.raises(ContextMismatchError):
        RingContext.from_summary(lattice_summary(padded, "dense"))


def test_from_summary_on_split_arrangement():
    ctx = RingContext.from_summary(lattice_summary(fixture_arrangement("A4"), "nnc"))
    assert ctx.d == 7
    assert ctx.a_mults == (3, 4)
    assert ctx.n_b == 7
    assert ctx.t_count(0) == 4
    assert ctx.t_count(1) == 3


def test_divisor(one_of_each):
    u = one_of_each.divisor(2, [1], [-1])
    assert u.coefficient(C) == 2
    assert u.coefficient(("a", 0)) == 1
    assert u.coefficient(("b", 0)) == -1
