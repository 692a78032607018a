import itertools

import pytest

from tqft_quotients import exact_linalg as la
from tqft_quotients.cyclotomic import Cyclotomic, galois_orbit, zeta
from tqft_quotients.skein import (
    DomainError,
    SkeinParams,
    count_colorings,
    delta,
    global_dimension,
    is_admissible,
    loop_eigenvalue,
    theta,
    twist_coeff,
    verlinde_rank,
)
from tqft_quotients.spine import ladder_spine
from tqft_quotients.tqft_rep import (
    ReducibleError,
    adjoint_trace,
    basis,
    curve_operator,
    dehn_twist_matrix,
    det_check,
    generators,
    genus1_anomaly,
    genus1_matrices,
    hermitian_form,
    invariant_form_solve,
    root_exponent,
    root_order,
    search_full_orbit_word,
    sl_normalize,
    verify_unitary,
)

P3 = SkeinParams(3)
P7 = SkeinParams(7)
P11 = SkeinParams(11)


@pytest.fixture(scope="module")
def genus2_twists():
    names = ladder_spine(2).curve_names()
    return {name: dehn_twist_matrix(name, 2, P7).entries for name in names}


# -- basis -------------------------------------------------------------------------


def test_genus1_basis():
    assert [v.colors for v in basis(1, P7)] == [(0,), (2,), (4,)]
    assert [v.colors for v in basis(1, P3)] == [(0,)]


def test_genus2_basis_is_lex_ordered_theta_colorings():
    cols = [v.colors for v in basis(2, P7)]
    expected = [t for t in itertools.product((0, 2, 4), repeat=3) if is_admissible(P7, *t)]
    assert cols == expected == sorted(cols)
    assert len(cols) == verlinde_rank(2, P7) == count_colorings(P7, ladder_spine(2))


# -- genus one ---------------------------------------------------------------------


def test_T_is_diagonal_twist():
    T = genus1_matrices(P7)["T"].entries
    assert la.is_diagonal(T)
    assert [T[i][i] for i in range(3)] == [twist_coeff(P7, c) for c in (0, 2, 4)]


def test_S_symmetric_involution():
    for params in (P7, P11):
        S = genus1_matrices(params)["S"].entries
        assert la.mat_eq(S, la.transpose(S))
        assert la.scalar_value(la.mat_mul(S, S)) == 1


def test_rank_one_case_is_scalar():
    m = genus1_matrices(P3)
    assert m["S"].entries == [[1]] and m["T"].entries == [[1]]


@pytest.mark.parametrize("params", [P7, P11])
def test_anomaly_is_root_of_unity_of_order_dividing_2p(params):
    c = genus1_anomaly(params)
    order = root_order(c)
    assert order is not None and (2 * params.p) % order == 0


def test_curve_operator_meridian_is_diagonal_loop():
    Z = curve_operator("a1", 1, P7).entries
    assert la.mat_eq(Z, la.diagonal([loop_eigenvalue(P7, c) for c in (0, 2, 4)]))


@pytest.mark.parametrize("params", [P7, P11])
def test_longitude_operator_is_S_conjugate(params):
    S = genus1_matrices(params)["S"].entries
    Za = curve_operator("a1", 1, params).entries
    Zb = curve_operator("b1", 1, params).entries
    assert la.mat_eq(Zb, la.mat_prod(S, Za, la.inverse(S)))


def test_curve_operator_rejects_unknown_curve():
    with pytest.raises(DomainError):
        curve_operator("c7", 2, P7)


def _eigen_check(Z, params):
    """Every color eigenvalue annihilates Z's minimal polynomial: prod (Z - lambda_c) = 0."""
    n = len(Z)
    prod = la.identity(params.p, n)
    for c in params.colors:
        shift = la.mat_sub(Z, la.mat_scale(loop_eigenvalue(params, c), la.identity(params.p, n)))
        prod = la.mat_mul(prod, shift)
    return all(x.is_zero() for row in prod for x in row)


def test_curve_spectrum_in_admissible_set():
    for name in ladder_spine(2).curve_names():
        assert _eigen_check(curve_operator(name, 2, P7).entries, P7)
    assert _eigen_check(curve_operator("b1", 1, P11).entries, P11)


def test_twists_agree_with_genus1_matrices():
    m = genus1_matrices(P7)
    S, T = m["S"].entries, m["T"].entries
    assert la.mat_eq(dehn_twist_matrix("a1", 1, P7).entries, T)
    assert la.mat_eq(dehn_twist_matrix("b1", 1, P7).entries, la.mat_prod(S, T, la.inverse(S)))


# -- genus two --------------------------------------------------------------------


def test_genus2_braid_relations(genus2_twists):
    names = ladder_spine(2).curve_names()
    for x, y in zip(names, names[1:]):
        X, Y = genus2_twists[x], genus2_twists[y]
        lhs = la.mat_prod(X, Y, X)
        rhs = la.mat_prod(Y, X, Y)
        scalar = la.scalar_value(la.mat_mul(lhs, la.inverse(rhs)))
        assert scalar is not None and root_order(scalar) is not None
        assert scalar == 1


def test_genus2_disjoint_twists_commute(genus2_twists):
    names = ladder_spine(2).curve_names()
    for i, j in itertools.combinations(range(len(names)), 2):
        if j - i == 1:
            continue
        X, Y = genus2_twists[names[i]], genus2_twists[names[j]]
        assert la.mat_eq(la.mat_mul(X, Y), la.mat_mul(Y, X))


def test_genus2_twists_have_unit_determinant(genus2_twists):
    for M in genus2_twists.values():
        assert det_check(M) == 1


def test_genus2_denominators_are_p_powers():
    for M in generators(2, P7):
        assert M.denominators_are_p_powers()


# -- Hermitian form ------------------------------------------------------------------


def test_genus1_form_is_identity_and_invariant_solve_agrees():
    H = hermitian_form(1, P7)
    m = genus1_matrices(P7)
    solved = invariant_form_solve([m["S"], m["T"]])
    assert all(x == 1 for x in H.diagonal)
    assert H.ratio_to(solved) == 1


def test_genus2_form_closed_formula():
    H = hermitian_form(2, P7)
    D = global_dimension(P7)
    for v, h in zip(basis(2, P7), H.diagonal):
        a, b, c = v.colors
        assert h == D * theta(P7, a, b, c) ** 2 / (delta(P7, a) * delta(P7, b) * delta(P7, c))
        assert h.conjugate() == h


def test_genus2_form_agrees_with_invariant_solve(genus2_twists):
    H = hermitian_form(2, P7)
    solved = invariant_form_solve(list(genus2_twists.values()))
    ratio = H.ratio_to(solved)
    assert ratio is not None and ratio.conjugate() == ratio


def test_invariant_solve_insensitive_to_unit_scalars():
    m = genus1_matrices(P7)
    z = zeta(7)
    a = invariant_form_solve([m["S"], m["T"]])
    b = invariant_form_solve([la.mat_scale(-z, m["S"].entries), la.mat_scale(z**3, m["T"].entries)])
    assert a.ratio_to(b) == 1


def test_invariant_solve_reports_reducible_input():
    p = 7
    one = Cyclotomic.from_int(p, 1)
    I = la.identity(p, 2)
    with pytest.raises(ReducibleError):
        invariant_form_solve([I, la.diagonal([one, one])])


def test_verify_unitary():
    m = genus1_matrices(P7)
    H = hermitian_form(1, P7)
    assert verify_unitary(la.identity(7, 3), H)
    assert verify_unitary(m["T"], H)
    assert verify_unitary(m["S"], H)
    bumped = [list(r) for r in m["S"].entries]
    bumped[0][1] = bumped[0][1] + 1
    assert not verify_unitary(bumped, H)


def test_genus2_unitarity(genus2_twists):
    H = hermitian_form(2, P7)
    assert all(verify_unitary(M, H) for M in genus2_twists.values())


# -- determinants and traces -------------------------------------------------------


def test_det_check():
    assert det_check(la.identity(7, 3)) == 1
    T = genus1_matrices(P7)["T"]
    d = det_check(T)
    assert d == twist_coeff(P7, 0) * twist_coeff(P7, 2) * twist_coeff(P7, 4)
    assert root_exponent(d) is not None
    assert d ** 14 == 1


def test_sl_normalize_records_scalar():
    T = genus1_matrices(P7)["T"]
    M, lam = sl_normalize(T)
    assert la.det(M) == 1
    assert lam ** 14 == 1


def test_adjoint_trace_of_identity_and_central_scalars():
    p = 7
    assert adjoint_trace(la.identity(p, 3)) == 8
    assert adjoint_trace(la.mat_scale(zeta(p), la.identity(p, 3))) == 8


def test_adjoint_traces_are_real():
    m = genus1_matrices(P7)
    for M in (m["S"], m["T"], la.mat_mul(m["S"].entries, m["T"].entries)):
        x = adjoint_trace(M)
        assert x.conjugate() == x


def test_genus1_adjoint_traces_are_rational():
    # the genus-one image is finite, so every |tr|^2 - 1 found by the search is rational
    assert search_full_orbit_word(P7, max_length=6) is None
    m = genus1_matrices(P7)
    W = la.mat_prod(m["S"].entries, m["T"].entries, m["T"].entries)
    assert len(galois_orbit(adjoint_trace(W))) == 1


def test_genus1_central_scalar_has_order_p():
    assert root_order(genus1_anomaly(P7)) == 7
    assert root_order(genus1_anomaly(P11)) == 11


def _projective_closure(gens, p):
    """Exact closure of the projective images over Q(zeta_p) (independent of any reduction)."""

    def norm(M):
        lead = next(x for row in M for x in row if not x.is_zero())
        inv = lead.inverse()
        return [[x * inv for x in row] for row in M]

    def key(M):
        return tuple((x.coeffs, x.den) for row in M for x in row)

    start = norm(la.identity(p, len(gens[0])))
    seen = {key(start)}
    frontier = [start]
    while frontier:
        nxt = []
        for X in frontier:
            for g in gens:
                Y = norm(la.mat_mul(X, g))
                if key(Y) not in seen:
                    seen.add(key(Y))
                    nxt.append(Y)
        frontier = nxt
        assert len(seen) < 10**4, "closure is not small"
    return len(seen)


def test_genus1_projective_image_is_psl27_over_the_cyclotomic_field():
    m = genus1_matrices(P7)
    assert _projective_closure([m["S"].entries, m["T"].entries], 7) == 168
