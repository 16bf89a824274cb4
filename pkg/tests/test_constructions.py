from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from delsarte.constructions import (check_kernel, pd_difference_block, pd_minorant_decompose, sign_swap,
                                    triangle_function, urysohn_pd_kernel)
from delsarte.groups import GroupSpec, Region, make_group
from delsarte.spectral import GroupFunction, is_positive_definite

Z = GroupSpec("free", rank=1)


def test_urysohn_example():
    K = [-2, -1, 0, 1, 2]
    k = urysohn_pd_kernel(Z, K, F(1, 2))
    assert k == GroupFunction(Z, {(x,): 1 - F(abs(x), 5) for x in range(-4, 5)})
    assert k((2,)) == F(3, 5)
    assert check_kernel(k, K, F(1, 2)).ok


def test_urysohn_full_finite_group():
    g = make_group([6])
    k = urysohn_pd_kernel(g, g.elements(), F(1, 3))
    assert k == GroupFunction.constant(g)


@pytest.mark.parametrize("eps", [0, 1, F(3, 2), -1])
def test_urysohn_rejects_eps(eps):
    with pytest.raises(ValueError):
        urysohn_pd_kernel(Z, [0], eps)


def test_triangle_examples():
    assert triangle_function(Z, [0]) == GroupFunction.delta(Z)
    assert triangle_function(Z, [0, 1]) == GroupFunction(Z, {(-1,): F(1, 2), (0,): 1, (1,): F(1, 2)})
    with pytest.raises(ValueError):
        triangle_function(Z, [])
    rng = random.Random(1)
    for _ in range(20):
        V = rng.sample(range(-6, 7), rng.randint(1, 5))
        r = triangle_function(Z, V)
        assert r((0,)) == 1 and is_positive_definite(r).ok


def test_difference_blocks_are_pd():
    rng = random.Random(2)
    for _ in range(100):
        r = triangle_function(Z, rng.sample(range(-4, 5), rng.randint(1, 4)))
        assert is_positive_definite(pd_difference_block(r, (rng.randint(-10, 10),))).ok


def test_sign_swap_examples():
    rep = sign_swap(Z, [2, -2], [0])
    assert rep.k == GroupFunction(Z, {(0,): 2, (2,): -1, (-2,): -1})
    assert rep.ok and rep.value_at_zero == 2 and rep.total_sum == 0
    rep = sign_swap(Z, [2, -2, 3, -3])
    assert rep.k((0,)) == 4 and rep.ok
    with pytest.raises(ValueError):
        sign_swap(Z, [0, 1, -1])
    with pytest.raises(ValueError):
        sign_swap(Z, [2])
    with pytest.raises(ValueError):
        sign_swap(Z, [1, -1], [0, 1])


def test_decompose_examples():
    A = Region.of(Z, [-1, 0, 1], complement=True)
    d = pd_minorant_decompose(GroupFunction.delta(Z), A)
    assert d.p == GroupFunction(Z) and d.ok
    f = GroupFunction(Z, {(2,): -1, (-2,): -1})
    d = pd_minorant_decompose(f, Region.of(Z, [2, -2]))
    assert d.p == GroupFunction(Z, {(0,): 2, (2,): -1, (-2,): -1}) and d.ok
    pos = GroupFunction(Z, {(0,): 3, (4,): 1})
    d = pd_minorant_decompose(pos, A)
    assert d.p == GroupFunction(Z) and d.q == -pos


def test_decompose_finite_group():
    g = make_group([3, 4])
    rng = random.Random(3)
    for _ in range(20):
        f = GroupFunction(g, {x: F(rng.randint(-5, 5)) for x in g.elements()})
        A = Region.of(g, [x for x in g.elements() if x != g.zero and rng.random() < 0.6])
        d = pd_minorant_decompose(f, A)
        assert d.ok, d.checks
        assert d.checks["norm_bound"].ok


def test_literal_norm_bound_counterexample():
    # -delta_5 with A avoiding {-1, 0, 1}: any positive definite p <= f on A has
    # p(5) = p(-5) <= -1, hence p(0) >= 2 and ||p||_X >= 4, above the bound 2
    A = Region.of(Z, [-1, 0, 1], complement=True)
    d = pd_minorant_decompose(GroupFunction.delta(Z, 5, -1), A)
    assert d.ok
    assert d.norm_p == 4 and d.norm_bound == 2
    assert not d.checks["norm_bound"].ok
    assert d.checks["norm_bound_with_center_cell"].ok


def test_decompose_rejects_close_A():
    with pytest.raises(ValueError):
        pd_minorant_decompose(GroupFunction.delta(Z), Region.of(Z, [0, 5]), V=[0])
