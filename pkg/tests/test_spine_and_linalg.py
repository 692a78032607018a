import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tqft_quotients import exact_linalg as la
from tqft_quotients.cyclotomic import Cyclotomic
from tqft_quotients.skein import SkeinParams, count_colorings, verlinde_rank
from tqft_quotients.spine import ladder_spine


@pytest.mark.parametrize("g", [2, 3, 4, 5])
def test_spine_has_3g_minus_3_edges_and_trivalent_vertices(g):
    s = ladder_spine(g)
    assert len(s.edges) == 3 * g - 3
    assert len(s.vertices) == 2 * g - 2
    degree = [0] * len(s.edges)
    for v in s.vertices:
        for e in v:
            degree[e] += 1
    assert all(d == 2 for d in degree)
    assert len(s.holes) == g


def test_genus_one_spine_is_a_circle():
    s = ladder_spine(1)
    assert s.edges == ("x",) and s.vertices == ()
    assert s.curve("a1") == ("meridian", 0)
    assert s.curve("b1")[0] == "hole"


def test_genus_zero_rejected():
    with pytest.raises(ValueError):
        ladder_spine(0)


@pytest.mark.parametrize("g", [2, 3, 4])
def test_hole_corners_use_their_vertex(g):
    s = ladder_spine(g)
    for hole in s.holes:
        for fv in hole.corners:
            assert {fv.edge_in, fv.edge_out, fv.third} == set(s.vertices[fv.vertex])
            assert fv.edge_in in hole.edges and fv.edge_out in hole.edges


def test_curve_names_chain():
    assert ladder_spine(2).curve_names() == ["a1", "b1", "c1", "b2", "a2"]
    assert len(ladder_spine(3).curve_names()) == 2 * 3 + 1


@pytest.mark.parametrize("name", ["d1", "c2", "b3", "zz", "a"])
def test_unsupported_curve_names(name):
    with pytest.raises(ValueError):
        ladder_spine(2).curve(name)


@pytest.mark.parametrize("p", [7, 11])
def test_spine_coloring_count_is_the_rank(p):
    params = SkeinParams(p)
    for g in (2, 3):
        assert count_colorings(params, ladder_spine(g)) == verlinde_rank(g, params)


# -- exact linear algebra --------------------------------------------------------


def rand_matrix(rng, p, n):
    return [[Cyclotomic(p, [rng.randint(-3, 3) for _ in range(p - 1)]) for _ in range(n)] for _ in range(n)]


@given(st.integers(0, 10**6))
def test_inverse_and_determinant(seed):
    rng = random.Random(seed)
    p = 5
    A = rand_matrix(rng, p, 3)
    B = rand_matrix(rng, p, 3)
    dA, dB = la.det(A), la.det(B)
    assert la.det(la.mat_mul(A, B)) == dA * dB
    if not dA.is_zero():
        assert la.mat_eq(la.mat_mul(A, la.inverse(A)), la.identity(p, 3))


def test_singular_matrix():
    p = 7
    one = Cyclotomic.from_int(p, 1)
    A = [[one, one], [one, one]]
    assert la.det(A).is_zero()
    assert la.rank(A) == 1
    (v,) = la.nullspace(A)
    assert all(x.is_zero() for x in la.mat_vec(A, v))
    with pytest.raises(ZeroDivisionError):
        la.inverse(A)


def test_lagrange_interpolation_hits_the_nodes():
    p = 7
    nodes = [Cyclotomic.zeta_power(p, k) for k in (1, 2, 4)]
    values = [Cyclotomic.from_int(p, v) for v in (3, -1, 5)]
    coeffs = la.lagrange_coefficients(nodes, values)
    for x, y in zip(nodes, values):
        acc = Cyclotomic.from_int(p, 0)
        for c in reversed(coeffs):
            acc = acc * x + c
        assert acc == y


def test_lagrange_rejects_colliding_nodes():
    p = 7
    x = Cyclotomic.zeta_power(p, 1)
    with pytest.raises(ValueError):
        la.lagrange_coefficients([x, x], [x, x])


def test_poly_eval_on_diagonal_matrix():
    p = 7
    d = [Cyclotomic.zeta_power(p, k) for k in (1, 3)]
    D = la.diagonal(d)
    coeffs = [Cyclotomic.from_int(p, 2), Cyclotomic.from_int(p, 0), Cyclotomic.from_int(p, 1)]
    out = la.poly_eval(coeffs, D)
    assert la.mat_eq(out, la.diagonal([x * x + 2 for x in d]))
