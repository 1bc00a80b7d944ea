"""Group word machinery and exact matrix representations."""

import pytest

from prolim.fields import QQ, GF
from prolim.linalg import Matrix
from prolim.groups import (Representation, ball_enumerate, cyclic,
                           finite_table, fixed_subspace, free, free_abelian)
from prolim.errors import ShapeError

from oracles import naive_kernel


# -- ball enumeration ---------------------------------------------------------

def test_free_rank1_ball_two_pinned_order():
    g = free(1)
    assert g.ball(2) == ((), (1,), (-1,), (1, 1), (-1, -1))


def test_free_rank2_ball_one_pinned_order():
    g = free(2)
    assert g.ball(1) == ((), (1,), (-1,), (2,), (-2,))


def test_free_rank2_ball_sizes():
    g = free(2)
    assert [len(g.ball(n)) for n in range(5)] == [1, 5, 17, 53, 161]


def test_free_ball_words_are_reduced_and_short():
    g = free(2)
    for w in g.ball(3):
        assert all(w[i] != -w[i + 1] for i in range(len(w) - 1))
        assert len(w) <= 3
    assert len(set(g.ball(3))) == len(g.ball(3))


def test_free_abelian_ball_sizes_l1():
    g = free_abelian(2)
    assert [len(g.ball(n)) for n in range(5)] == [1, 5, 13, 25, 41]
    assert g.ball(1) == ((0, 0), (1, 0), (-1, 0), (0, 1), (0, -1))


def test_finite_balls_saturate_immediately():
    # finite groups use the whole group as every ball: the cochain towers
    # over them are constant
    g = cyclic(4)
    assert g.ball(0) == g.ball(1) == g.ball(9) == (0, 1, 2, 3)


def test_ball_prefix_property():
    # each ball lists the previous ball first: cochain towers rely on this
    for g in (free(2), free_abelian(2), cyclic(5)):
        for n in (1, 2, 3):
            assert g.ball(n)[: len(g.ball(n - 1))] == g.ball(n - 1)
    assert ball_enumerate(free(1), 2) == free(1).ball(2)


def test_ball_index_inverts_ball():
    g = free(2)
    idx = g.ball_index(2)
    for k, w in enumerate(g.ball(2)):
        assert idx[w] == k


def test_negative_radius_rejected():
    with pytest.raises(ShapeError):
        free(1).ball(-1)


# -- group operations ---------------------------------------------------------

def test_free_reduction():
    g = free(2)
    assert g.mul((1, 2), (-2, -1)) == ()
    assert g.mul((1,), (1,)) == (1, 1)
    assert g.mul((1, -2), (2, 2)) == (1, 2)
    assert g.inv((1, 2)) == (-2, -1)


def test_cyclic_mul_mod():
    g = cyclic(6)
    assert g.mul(4, 5) == 3
    assert g.identity == 0
    assert g.generators() == (1,)


def test_free_abelian_mul():
    g = free_abelian(2)
    assert g.mul((2, -1), (-1, 1)) == (1, 0)
    assert g.inv((3, -2)) == (-3, 2)


def test_finite_table_validation():
    with pytest.raises(ValueError, match="identity"):
        finite_table([[0, 0], [0, 0]])
    with pytest.raises(ValueError, match="associative"):
        finite_table([[0, 1, 2], [1, 0, 0], [2, 0, 1]])
    klein = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]
    g = finite_table(klein)
    assert g.order == 4
    assert set(g.ball(1)) == {0, 1, 2, 3}


def test_format_elements():
    assert free(2).format_element((1, -2)) == "a*b^-1"
    assert free(2).format_element(()) == "e"
    assert cyclic(5).format_element(3) == "g^3"
    assert free_abelian(2).format_element((1, 2)) == "a*b^2"


# -- representations ----------------------------------------------------------

def test_act_is_word_product():
    rep = Representation(free(1), QQ, [Matrix(QQ, [[2]])])
    assert rep.act((1, 1, 1)).data == ((8,),)
    assert rep.act((-1,)).data == ((0.5,),) or rep.act((-1,)).data[0][0] == \
        QQ.coerce("1/2")
    assert rep.act(()).data == ((1,),)


def test_act_on_cyclic_respects_table():
    m = Matrix(GF(3), [[1, 1], [0, 1]])  # order 3
    rep = Representation(cyclic(3), GF(3), [m])
    assert rep.act(2).data == (m @ m).data
    assert rep.act(0).data == Matrix.identity(GF(3), 2).data


def test_singular_generator_rejected():
    with pytest.raises(ValueError, match="singular"):
        Representation(free(1), QQ, [Matrix(QQ, [[1, 2], [2, 4]])])


def test_relation_violation_rejected():
    # order of [[1,1],[0,1]] over GF(2) is 2, not 3
    with pytest.raises(ValueError):
        Representation(cyclic(3), GF(2), [Matrix(GF(2), [[1, 1], [0, 1]])])


def test_commutation_enforced_for_free_abelian():
    a = Matrix(QQ, [[1, 1], [0, 1]])
    b = Matrix(QQ, [[1, 0], [1, 1]])
    with pytest.raises(ValueError, match="commute"):
        Representation(free_abelian(2), QQ, [a, b])
    Representation(free_abelian(2), QQ, [a, a @ a])  # powers commute


def test_trivial_representation():
    rep = Representation.trivial(cyclic(4), GF(5), dim=3)
    assert rep.dim == 3
    assert rep.act(2).data == Matrix.identity(GF(5), 3).data


def test_fixed_subspace_swap_action():
    swap = Matrix(QQ, [[0, 1], [1, 0]])
    rep = Representation(cyclic(2), QQ, [swap])
    fixed = fixed_subspace(rep)
    assert fixed.dim == 1
    assert fixed.contains_vector((1, 1))
    # oracle: kernel of (M - I)
    assert len(naive_kernel([[-1, 1], [1, -1]], 2)) == 1


def test_fixed_subspace_trivial_is_full():
    rep = Representation.trivial(free(2), QQ, dim=2)
    assert fixed_subspace(rep).dim == 2


def test_mismatched_generator_count():
    with pytest.raises(ShapeError):
        Representation(free(2), QQ, [Matrix(QQ, [[1]])])
