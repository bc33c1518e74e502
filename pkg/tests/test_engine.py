import itertools
import math

import numpy as np
import pytest

from capacheck import engine, linalg, oracle
from capacheck.enumeration import iterate_subspaces, sample_subspaces
from capacheck.linalg import DimensionMismatchError, Subspace
from capacheck.phi import build
from capacheck.presentations import build_extraspecial, coordinate_subspace, to_subspace


def extraspecial_X(p):
    return to_subspace(build_extraspecial(p))


def random_spaces(n, p, count, seed, dims=None):
    ps = build(n, p)
    rng = np.random.default_rng(seed)
    dims = range(ps.dimV + 1) if dims is None else dims
    out = []
    for k in rng.choice(list(dims), size=count):
        out.extend(sample_subspaces(ps.dimV, p, int(k), 1, rng))
    return out


# --- Y and Z ----------------------------------------------------------------


def test_extremes():
    ps = build(4, 3)
    assert engine.compute_Y(ps, ps.zero_V()).dim == 0
    assert engine.compute_Z(ps, ps.zero_V()) == ps.zero_V()
    assert engine.compute_Z(ps, ps.full_V()) == ps.full_V()


@pytest.mark.parametrize("n,p", [(3, 3), (4, 5), (5, 3)])
def test_dimY_of_lines_and_planes(n, p):
    ps = build(n, p)
    rng = np.random.default_rng(n * p)
    for k in (1, 2):
        for X in sample_subspaces(ps.dimV, p, k, 60, rng):
            assert engine.compute_Y(ps, X).dim == n * k


def test_limits_examples():
    ps = build(4, 3)
    X1 = coordinate_subspace(4, 3, [(2, 1), (3, 1), (4, 1)])
    X2 = coordinate_subspace(4, 3, [(2, 1), (3, 1), (3, 2)])
    assert engine.compute_Y(ps, X1).dim == 12
    assert engine.compute_Y(ps, X2).dim == 11


@pytest.mark.parametrize("p", [3, 5, 7])
def test_extraspecial(p):
    ps = build(4, p)
    X = extraspecial_X(p)
    rep = engine.is_capable(ps, X)
    assert rep.dimX == 5
    assert rep.Z == ps.full_V() and rep.dimZ == 6
    assert not rep.capable
    assert rep.witnesses
    # some witness is congruent to v41 modulo X
    v41 = ps.v(4, 1)
    assert any(linalg.membership(X, (v41 - np.array(w)) % p) for w in rep.witnesses)
    assert linalg.membership(rep.Z, v41)
    assert rep.central_dim == 0
    assert not rep.hn_ok


def test_Y_is_sum_of_images():
    ps = build(4, 5)
    for X in random_spaces(4, 5, 30, 0):
        images = [linalg.image(ps.phi_r(r), X) for r in range(1, 5)]
        assert engine.compute_Y(ps, X) == linalg.span_all(images)


def test_Z_matches_iterated_intersection():
    for n, p in [(3, 5), (4, 3), (4, 7)]:
        ps = build(n, p)
        for X in random_spaces(n, p, 40, n + p):
            Y = engine.compute_Y(ps, X)
            Z = ps.full_V()
            for r in range(1, n + 1):
                Z = linalg.subspace_intersection(Z, linalg.preimage(ps.phi_r(r), Y))
            assert engine.compute_Z(ps, X) == Z


@pytest.mark.parametrize("n,p", [(3, 3), (4, 3), (4, 5), (5, 3)])
def test_X_inside_Z(n, p):
    ps = build(n, p)
    for X in random_spaces(n, p, 50, 7):
        assert X <= engine.compute_Z(ps, X)


def test_three_generators_always_capable():
    for p in (3, 5, 7):
        ps = build(3, p)
        for X in random_spaces(3, p, 60, p):
            assert engine.is_capable(ps, X).capable


def test_small_X_capable_n4():
    ps = build(4, 3)
    for k in (0, 1, 2):
        for X in sample_subspaces(6, 3, k, 100, np.random.default_rng(k)):
            rep = engine.is_capable(ps, X)
            assert rep.capable and rep.sufficient_hit


# --- theorem consequences ---------------------------------------------------


def test_zero_coordinate_propagates():
    for n, p in [(4, 3), (5, 3)]:
        ps = build(n, p)
        rng = np.random.default_rng(3)
        for _ in range(60):
            j, i = ps.pairs[rng.integers(ps.dimV)]
            c = ps.pair_to_col(j, i)
            rows = rng.integers(0, p, (rng.integers(1, ps.dimV), ps.dimV))
            rows[:, c] = 0
            X = ps.span_V(rows)
            Z = engine.compute_Z(ps, X)
            assert not Z.basis[:, c].any()


@pytest.mark.parametrize("p", [3, 5])
def test_coordinate_subspaces_exhaustive_n4(p):
    ps = build(4, p)
    seen = 0
    for size in range(7):
        for S in itertools.combinations(ps.pairs, size):
            X = coordinate_subspace(4, p, S)
            assert X.is_coordinate()
            assert engine.compute_Z(ps, X) == X
            seen += 1
    assert seen == 64


def test_missing_index():
    n, p = 5, 3
    ps = build(n, p)
    rng = np.random.default_rng(11)
    for _ in range(60):
        gone = int(rng.integers(1, n + 1))
        cols = [c for c, (j, i) in enumerate(ps.pairs) if gone not in (j, i)]
        rows = np.zeros((3, ps.dimV), dtype=np.int64)
        rows[:, cols] = rng.integers(0, p, (3, len(cols)))
        X = ps.span_V(rows)
        rep = engine.is_capable(ps, X)
        assert rep.missing_index
        assert rep.Z == X


# --- central coefficient space ----------------------------------------------


def test_central_space_examples():
    ps = build(4, 3)
    assert engine.central_coefficient_space(ps, ps.full_V()) == Subspace.full(3, 4)
    assert engine.central_coefficient_space(ps, extraspecial_X(3)).dim == 0


def _central_by_oracle(ps, X):
    """All a in F_p^n with [x_1^a_1 ... x_n^a_n, x_r] in N for every r."""
    n, p = ps.n, ps.p
    out = []
    for a in itertools.product(range(p), repeat=n):
        g = oracle.from_word(n, p, [(s + 1, e) for s, e in enumerate(a)])
        if all(
            linalg.membership(X, oracle.commutator(g, oracle.generator(n, p, r)).b) for r in range(1, n + 1)
        ):
            out.append(a)
    return out


def test_central_space_zero_X_bruteforce():
    ps = build(3, 3)
    central = _central_by_oracle(ps, ps.zero_V())
    assert central == [(0, 0, 0)]
    assert engine.central_coefficient_space(ps, ps.zero_V()).dim == 0


@pytest.mark.parametrize("n,p", [(3, 3), (4, 3)])
def test_central_space_matches_group(n, p):
    ps = build(n, p)
    for X in random_spaces(n, p, 25, 5):
        expected = _central_by_oracle(ps, X)
        C = engine.central_coefficient_space(ps, X)
        assert len(expected) == p**C.dim
        assert all(a in C for a in expected)


# --- reduction ----------------------------------------------------------------


def test_reduce_extraspecial():
    ps = build(4, 3)
    X = extraspecial_X(3)
    red = engine.reduce_special(ps, X)
    assert (red.m, red.r) == (4, 0)
    assert red.X_reduced == X
    assert red.capable is False


def test_reduce_free_plus_cyclic():
    ps = build(3, 3)
    X = coordinate_subspace(3, 3, [(3, 1), (3, 2)])
    red = engine.reduce_special(ps, X)
    assert (red.m, red.r) == (2, 1)
    assert red.X_reduced.dim == 0 and red.X_reduced.ambient_dim == 1
    assert red.capable


def test_reduce_abelian():
    ps = build(2, 5)
    red = engine.reduce_special(ps, ps.full_V())
    assert (red.m, red.r) == (0, 2)
    assert red.capable


@pytest.mark.parametrize("n,p", [(3, 5), (4, 3), (4, 5), (5, 3)])
def test_reduction_preserves_verdict(n, p):
    ps = build(n, p)
    # high dimensions are where central generators occur
    for X in random_spaces(n, p, 60, 9, dims=range(ps.dimV // 2, ps.dimV + 1)):
        red = engine.reduce_special(ps, X)
        assert red.capable == engine.is_capable(ps, X).capable
        if red.m >= 2:
            inner = build(red.m, p)
            assert engine.central_coefficient_space(inner, red.X_reduced).dim == 0
            assert red.X_reduced.dim + (ps.dimV - inner.dimV) == X.dim


def test_change_of_basis_is_invertible():
    ps = build(4, 3)
    for X in random_spaces(4, 3, 40, 2, dims=range(3, 7)):
        red = engine.reduce_special(ps, X)
        assert linalg.rank(red.change_of_basis, 3) == 4


def test_alternating_square_identity_and_composition():
    ps = build(4, 5)
    assert np.array_equal(engine.alternating_square(np.eye(4, dtype=int), ps), np.eye(6))
    rng = np.random.default_rng(0)
    A, B = rng.integers(0, 5, (2, 4, 4))
    lhs = engine.alternating_square(A @ B % 5, ps)
    rhs = engine.alternating_square(A, ps) @ engine.alternating_square(B, ps) % 5
    assert np.array_equal(lhs, rhs)


# --- bounds -----------------------------------------------------------------


def test_hn_bound_values():
    assert engine.hn_bound(0) == 0
    assert engine.hn_bound(3) == 2
    assert engine.hn_bound(4) == 2
    for m in range(500):
        k = engine.hn_bound(m)
        assert k * k + 3 * k >= 2 * m
        assert k == 0 or (k - 1) ** 2 + 3 * (k - 1) < 2 * m
        # agrees with the closed form away from float trouble
        assert k == max(0, math.ceil((-3 + math.sqrt(9 + 8 * m)) / 2 - 1e-12))


def test_hn_check_examples():
    ps = build(4, 3)
    assert engine.hn_bound_check(ps, extraspecial_X(3)) is False
    assert engine.hn_bound_check(ps, ps.full_V()) is True


def test_capable_implies_hn_exhaustive_n3():
    ps = build(3, 3)
    for X in iterate_subspaces(3, 3):
        rep = engine.is_capable(ps, X)
        assert rep.capable and rep.hn_ok


# --- report -----------------------------------------------------------------


def test_witnesses_are_canonical():
    ps = build(4, 3)
    rep = engine.is_capable(ps, extraspecial_X(3))
    again = engine.is_capable(ps, extraspecial_X(3))
    assert rep.witnesses == again.witnesses
    W = Subspace.span(rep.witnesses, 3, 6)
    assert W.vectors() == rep.witnesses
    assert all(not any(np.array(w)[list(rep.X.pivots)]) for w in rep.witnesses)


def test_report_json():
    ps = build(4, 3)
    js = engine.is_capable(ps, extraspecial_X(3)).to_json()
    assert js["capable"] is False
    assert (js["dimX"], js["dimY"], js["dimZ"]) == (5, 20, 6)
    assert js["bounds"]["hn_required_commutator_dim"] == 2


def test_ambient_mismatch():
    with pytest.raises(DimensionMismatchError):
        engine.is_capable(build(4, 3), build(3, 3).full_V())
    with pytest.raises(DimensionMismatchError):
        engine.compute_Y(build(3, 5), build(3, 3).full_V())
