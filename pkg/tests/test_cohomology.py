"""Cochain blocks, coboundary towers, solving, and finite-group dimensions."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from prolim.fields import QQ, GF
from prolim.linalg import Matrix
from prolim.groups import Representation, cyclic, free, fixed_subspace
from prolim.towers import verify_squares
from prolim.cohomology import (CochainPrefix, cochain_tower, coboundary,
                               coboundary_apply, coboundary_value,
                               certificate_cochain, cocycle_defect,
                               finite_cohomology_dims, reindexed_coboundary,
                               solve_coboundary)
from prolim.errors import (DepthInsufficientError, NotInImageError, ShapeError)

from conftest import (rand_scalar, _char, random_rep_z, random_rep_z2,
                      random_rep_free, random_cyclic_rep)
from oracles import naive_coboundary, naive_rank


def rand_cochain(rng, rep, degree, radius):
    n = len(rep.group.ball(radius)) ** degree
    vals = [tuple(rand_scalar(rng, rep.domain) for _ in range(rep.dim))
            for _ in range(n)]
    return CochainPrefix(rep, degree, radius, vals)


def _zpow(k):
    """The k-th power of the free generator as a reduced word."""
    return (1,) * k if k >= 0 else (-1,) * (-k)


def doubling_rep():
    return Representation(free(1), QQ, [Matrix(QQ, ((Fraction(2),),))])


def _oracle_d(rep, f_fn, t):
    dom = rep.domain
    return tuple(naive_coboundary(
        rep.group,
        lambda g, v: rep.act(g).apply(tuple(v)),
        f_fn, t,
        lambda u, v: tuple(dom.add(a, b) for a, b in zip(u, v)),
        lambda u: tuple(dom.neg(a) for a in u)))


# ---------------------------------------------------------------------------
# cochain towers


def test_cochain_tower_dims_integer_line(rng):
    rep = random_rep_z(rng, QQ, 2)
    c0 = cochain_tower(rep, 0)
    assert [c0.dim(i) for i in (1, 3, 7)] == [2, 2, 2]
    c1 = cochain_tower(rep, 1)
    assert [c1.dim(i) for i in (1, 2, 3, 4)] == [6, 10, 14, 18]
    c2 = cochain_tower(rep, 2)
    assert [c2.dim(i) for i in (1, 2)] == [9 * 2, 25 * 2]
    with pytest.raises(ShapeError):
        cochain_tower(rep, -1)


def test_cochain_tower_dims_finite_constant(rng):
    rep = Representation.trivial(cyclic(3), GF(2), 2)
    for p in (1, 2, 3):
        tower = cochain_tower(rep, p)
        assert [tower.dim(i) for i in (1, 2, 5)] == [3 ** p * 2] * 3


def test_tower_connects_are_value_restrictions(rng):
    rep = random_rep_z(rng, GF(5), 2)
    tower = cochain_tower(rep, 1)
    f = rand_cochain(rng, rep, 1, 2)
    pushed = tower.connect(1, 2).apply(f.flat())
    assert tuple(pushed) == f.restrict(1).flat()


# ---------------------------------------------------------------------------
# block round-trips and validation


def test_prefix_round_trips(rng):
    rep = random_rep_free(rng, GF(3), 2, 2)
    f = rand_cochain(rng, rep, 2, 1)
    again = CochainPrefix.from_flat(rep, 2, 1, f.flat())
    assert again == f
    ball = rep.group.ball(1)
    rebuilt = CochainPrefix.from_function(rep, 2, 1, f.value)
    assert rebuilt == f
    for t in itertools.product(ball, repeat=2):
        assert rebuilt.value(t) == f.value(t)


def test_restrict_is_pointwise(rng):
    rep = random_rep_z(rng, QQ, 2)
    f = rand_cochain(rng, rep, 2, 2)
    small = f.restrict(1)
    assert small.radius == 1
    for t in itertools.product(rep.group.ball(1), repeat=2):
        assert small.value(t) == f.value(t)
    assert f.restrict(2) is f


def test_prefix_validation():
    rep = doubling_rep()
    with pytest.raises(ShapeError, match="degree"):
        CochainPrefix(rep, -1, 1, [])
    with pytest.raises(ShapeError, match="radius"):
        CochainPrefix(rep, 1, -1, [])
    with pytest.raises(ShapeError, match="values"):
        CochainPrefix(rep, 1, 1, [(Fraction(1),)] * 2)
    with pytest.raises(ShapeError, match="coefficient"):
        CochainPrefix(rep, 1, 1, [(Fraction(1), Fraction(2))] * 3)
    with pytest.raises(ShapeError):
        CochainPrefix.from_flat(rep, 1, 1, (Fraction(1),) * 4)
    f = CochainPrefix.zero(rep, 1, 1)
    with pytest.raises(ShapeError, match="tuple"):
        f.value(((1,), (1,)))
    with pytest.raises(KeyError):
        f.value(((1, 1),))
    with pytest.raises(ShapeError, match="larger"):
        f.restrict(2)


# ---------------------------------------------------------------------------
# the coboundary formula against the independent evaluator


def test_coboundary_matches_naive_formula(rng):
    cases = [
        (random_rep_z(rng, QQ, 2), (1, 2), 1),
        (random_rep_free(rng, GF(3), 2, 1), (1, 2), 1),
        (random_rep_z2(rng, GF(5), 2), (1,), 2),
        (random_cyclic_rep(rng, 4, QQ), (1, 2, 3), 1),
        (random_cyclic_rep(rng, 6, GF(2)), (1, 2), 1),
    ]
    for rep, degrees, t_radius in cases:
        f_radius = t_radius if rep.group.is_finite else 2 * t_radius
        ball = rep.group.ball(t_radius)
        for p in degrees:
            f = rand_cochain(rng, rep, p - 1, f_radius)
            for t in itertools.product(ball, repeat=p):
                assert coboundary_value(rep, f.value, t) == _oracle_d(rep, f.value, t)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=-6, max_value=6), st.integers(min_value=-4, max_value=4))
def test_degree_one_is_twisted_difference(k, c):
    rep = doubling_rep()
    f = CochainPrefix(rep, 0, 0, [(Fraction(c),)])
    assert coboundary_value(rep, f.value, (_zpow(k),)) == (Fraction(2) ** k * c - c,)


def test_apply_halves_the_radius(rng):
    rep = random_rep_z(rng, QQ, 1)
    f = rand_cochain(rng, rep, 1, 5)
    z = coboundary_apply(f)
    assert (z.degree, z.radius) == (2, 2)
    rep_fin = random_cyclic_rep(rng, 3, GF(3))
    g = rand_cochain(rng, rep_fin, 1, 1)
    assert coboundary_apply(g).radius == 1


def test_level_matrices_match_pointwise_values(rng):
    cases = [
        (random_rep_z(rng, QQ, 2), 1, (1, 2)),
        (random_rep_z(rng, QQ, 2), 2, (1,)),
        (random_cyclic_rep(rng, 3, GF(3), max_dim=2), 1, (1, 2)),
        (random_cyclic_rep(rng, 3, GF(3), max_dim=2), 2, (1,)),
    ]
    for rep, p, levels in cases:
        d = coboundary(rep, p)
        for n in levels:
            f = rand_cochain(rng, rep, p - 1, d.index(n))
            by_matrix = tuple(d.level_map(n).apply(f.flat()))
            pointwise = CochainPrefix.from_function(
                rep, p, n, lambda t: coboundary_value(rep, f.value, t))
            assert by_matrix == pointwise.flat()


def test_read_levels_double_only_for_infinite_groups(rng):
    d_free = coboundary(random_rep_z(rng, QQ, 1), 1)
    assert [d_free.index(n) for n in (1, 2, 3)] == [2, 4, 6]
    d_fin = coboundary(random_cyclic_rep(rng, 4, QQ), 2)
    assert [d_fin.index(n) for n in (1, 2, 3)] == [1, 2, 3]
    with pytest.raises(ShapeError):
        coboundary(doubling_rep(), 0)


def test_coboundary_towers_commute(rng):
    verify_squares(coboundary(doubling_rep(), 1), 3)
    verify_squares(coboundary(random_cyclic_rep(rng, 4, GF(2), max_dim=2), 2), 3)


def test_reindexed_coboundary_is_cached():
    rep = doubling_rep()
    assert reindexed_coboundary(rep, 1) is reindexed_coboundary(rep, 1)
    assert reindexed_coboundary(rep, 1) is not reindexed_coboundary(rep, 2)


# ---------------------------------------------------------------------------
# d after d vanishes; defect reports


def test_dd_vanishes_on_free_group_block(rng):
    rep = random_rep_z(rng, QQ, 2)
    f = rand_cochain(rng, rep, 1, 4)
    z = coboundary_apply(f)
    dz = coboundary_apply(z)
    zero = (QQ.zero,) * rep.dim
    assert all(v == zero for v in dz.values)
    report = cocycle_defect(z)
    assert report.is_cocycle and report.defects == () and report.checked > 0


def test_dd_vanishes_finite_full_block(rng):
    rep = random_cyclic_rep(rng, 3, GF(3), max_dim=2)
    f = rand_cochain(rng, rep, 1, 1)
    z = coboundary_apply(f)
    report = cocycle_defect(z)
    assert report.checked == 27 and report.is_cocycle


def test_defect_detects_corruption():
    rep = Representation.trivial(cyclic(2), QQ, 1)
    f = CochainPrefix(rep, 0, 0, [(Fraction(3),)])
    z = coboundary_apply(f)
    vals = list(z.values)
    vals[z.rep.group.ball_index(z.radius)[1]] = (Fraction(1),)
    bad = CochainPrefix(rep, 1, z.radius, vals)
    report = cocycle_defect(bad)
    assert not report.is_cocycle
    assert any(t == (1, 1) for t, _ in report.defects)


# ---------------------------------------------------------------------------
# solving for a primitive


def test_solve_doubling_line():
    rep = doubling_rep()
    z = CochainPrefix.from_function(
        rep, 1, 8, lambda t: (Fraction(2) ** sum(t[0]) - 1,))
    cert = solve_coboundary(z, 3)
    assert cert.all_checks_pass() and not cert.depth_conditional
    f = certificate_cochain(rep, 1, cert)
    assert f.degree == 0 and f.radius == 2 * cert.depth
    assert f.values == ((Fraction(1),),)
    for g in rep.group.ball(cert.depth):
        assert coboundary_value(rep, f.value, (g,)) == z.value((g,))


def test_solve_rejects_winding_cocycle():
    rep = Representation.trivial(free(1), QQ, 1)
    z = CochainPrefix.from_function(rep, 1, 6, lambda t: (Fraction(sum(t[0])),))
    assert cocycle_defect(z).is_cocycle
    with pytest.raises(NotInImageError) as info:
        solve_coboundary(z, 3)
    assert info.value.level == 1


def test_solve_random_roundtrip(rng):
    rep = random_rep_z(rng, GF(3), 2)
    f = rand_cochain(rng, rep, 0, 8)
    z = coboundary_apply(f)
    cert = solve_coboundary(z, 2)
    assert cert.all_checks_pass()
    back = certificate_cochain(rep, 1, cert)
    for g in rep.group.ball(cert.depth):
        assert coboundary_value(rep, back.value, (g,)) == z.value((g,))


def test_solve_degree_two_roundtrip(rng):
    rep = random_rep_z(rng, QQ, 1)
    f = rand_cochain(rng, rep, 1, 8)
    z = coboundary_apply(f)
    cert = solve_coboundary(z, 2)
    assert cert.all_checks_pass()
    back = certificate_cochain(rep, 2, cert)
    ball = rep.group.ball(cert.depth)
    for t in itertools.product(ball, repeat=2):
        assert coboundary_value(rep, back.value, t) == z.value(t)


def test_solve_input_validation():
    rep = doubling_rep()
    not_cocycle = CochainPrefix.from_function(rep, 1, 2, lambda t: (Fraction(1),))
    with pytest.raises(ValueError, match="not a cocycle"):
        solve_coboundary(not_cocycle, 2)
    thin = CochainPrefix.zero(rep, 1, 0)
    with pytest.raises(DepthInsufficientError):
        solve_coboundary(thin, 2)
    with pytest.raises(ShapeError):
        solve_coboundary(CochainPrefix.zero(rep, 0, 2), 1)


# ---------------------------------------------------------------------------
# finite groups: exact dimensions against a dense rank oracle


def _dense_d_matrix(rep, q):
    """Rows of d_q on the saturated block, built column-by-column from
    indicator cochains through the reference evaluator."""
    group, dom, d = rep.group, rep.domain, rep.dim
    elems = group.ball(0)
    src = list(itertools.product(elems, repeat=q - 1))
    tgt = list(itertools.product(elems, repeat=q))
    cols = []
    for s, want in enumerate(src):
        for c in range(d):
            def f_fn(t, want=want, c=c):
                if tuple(t) == want:
                    return tuple(dom.one if k == c else dom.zero for k in range(d))
                return (dom.zero,) * d
            col = []
            for t in tgt:
                col.extend(_oracle_d(rep, f_fn, t))
            cols.append(col)
    return [[col[r] for col in cols] for r in range(len(tgt) * d)]


def _oracle_dims(rep, p):
    char = _char(rep.domain) or None
    d_next = _dense_d_matrix(rep, p + 1)
    z_dim = len(d_next[0]) - naive_rank(d_next, char)
    b_dim = naive_rank(_dense_d_matrix(rep, p), char) if p else 0
    return z_dim, b_dim, z_dim - b_dim


def test_finite_dims_pinned_small_cyclic():
    sign = Representation(cyclic(2), QQ, [Matrix(QQ, ((Fraction(-1),),))])
    assert finite_cohomology_dims(sign, 1) == (1, 1, 0)
    assert finite_cohomology_dims(sign, 0) == (0, 0, 0)

    triv2 = Representation.trivial(cyclic(2), GF(2), 1)
    assert finite_cohomology_dims(triv2, 0) == (1, 0, 1)
    assert finite_cohomology_dims(triv2, 1) == (1, 0, 1)
    assert finite_cohomology_dims(triv2, 2)[2] == 1

    triv3 = Representation.trivial(cyclic(3), GF(3), 1)
    assert finite_cohomology_dims(triv3, 1)[2] == 1
    assert finite_cohomology_dims(triv3, 2)[2] == 1


def test_finite_dims_match_rank_oracle(rng):
    cases = [(2, QQ), (2, GF(2)), (3, GF(3)), (3, QQ), (4, GF(3))]
    for n, dom in cases:
        rep = random_cyclic_rep(rng, n, dom, max_dim=2)
        for p in (1, 2):
            assert finite_cohomology_dims(rep, p) == _oracle_dims(rep, p)


def test_degree_zero_is_fixed_subspace(rng):
    for n, dom in ((2, QQ), (4, GF(5)), (6, GF(2))):
        rep = random_cyclic_rep(rng, n, dom, max_dim=3)
        z, b, h = finite_cohomology_dims(rep, 0)
        assert b == 0 and z == h == fixed_subspace(rep).dim
    with pytest.raises(ShapeError, match="finite"):
        finite_cohomology_dims(doubling_rep(), 0)
