import numpy as np
import pytest

from conftest import index_pool, random_element
from qcmt.algebra import (
    AlgebraElement,
    Index,
    generator,
    paired_indices,
    word_adjoint,
    word_label,
)


def test_trivial_involution_fixes_index():
    i = Index(1)
    assert i.involve() == i
    assert i.self_conjugate


def test_paired_involution_swaps_partners():
    a, ac = paired_indices("a", "a*")
    assert a.involve() == ac
    assert ac.involve() == a
    assert not a.self_conjugate


def test_involution_is_an_involution(rng):
    pool = index_pool()
    for _ in range(50):
        i = pool[int(rng.integers(0, len(pool)))]
        assert i.involve().involve() == i


def test_index_equality_is_by_tag():
    assert Index(1) == Index(1)
    assert Index(1) != Index(2)
    assert hash(Index("a", "a*")) == hash(Index("a"))


def test_identity_word_is_two_sided_identity():
    m1 = generator(Index(1))
    one = AlgebraElement.identity()
    assert one * m1 == m1
    assert m1 * one == m1


def test_multiplication_is_bilinear():
    m1, m2, m3 = (generator(Index(t)) for t in (1, 2, 3))
    assert (m1 + m2) * m3 == m1 * m3 + m2 * m3


def test_scalar_bilinearity():
    m1, m2 = generator(Index(1)), generator(Index(2))
    assert (2 * m1) * (3 * m2) == 6 * (m1 * m2)


def test_adjoint_of_generator_involves_index():
    a, ac = paired_indices("a", "a*")
    assert generator(a).adjoint() == generator(ac)


def test_adjoint_reverses_and_conjugates():
    a, ac = paired_indices("a", "a*")
    b, bc = paired_indices("b", "b*")
    element = AlgebraElement({(a, b): 2 + 1j})
    expected = AlgebraElement({(bc, ac): 2 - 1j})
    assert element.adjoint() == expected


def test_adjoint_is_involutive(rng):
    pool = index_pool()
    for _ in range(50):
        a = random_element(rng, pool)
        assert (a.adjoint().adjoint() - a).is_zero()


def test_adjoint_antihomomorphism(rng):
    pool = index_pool()
    for _ in range(50):
        a = random_element(rng, pool, max_len=6)
        b = random_element(rng, pool, max_len=6)
        assert ((a * b).adjoint() - b.adjoint() * a.adjoint()).is_zero()


def test_adjoint_antilinearity(rng):
    pool = index_pool()
    for _ in range(50):
        a = random_element(rng, pool)
        b = random_element(rng, pool)
        lam = complex(int(rng.integers(-3, 4)), int(rng.integers(-3, 4)))
        mu = complex(int(rng.integers(-3, 4)), int(rng.integers(-3, 4)))
        lhs = (lam * a + mu * b).adjoint()
        rhs = lam.conjugate() * a.adjoint() + mu.conjugate() * b.adjoint()
        assert (lhs - rhs).is_zero()


def test_multiplication_is_associative(rng):
    pool = index_pool()
    for _ in range(50):
        a = random_element(rng, pool)
        b = random_element(rng, pool)
        c = random_element(rng, pool)
        assert ((a * b) * c - a * (b * c)).is_zero()


def test_identity_is_fixed_by_adjoint():
    one = AlgebraElement.identity()
    assert one.adjoint() == one


def test_cancellation_prunes_to_zero():
    m1 = generator(Index(1))
    assert (m1 - m1).is_zero()
    tiny = AlgebraElement({(Index(1),): 1e-16})
    assert tiny.is_zero()


def test_word_adjoint_on_mixed_word():
    a, ac = paired_indices("a", "a*")
    i = Index(1)
    assert word_adjoint((a, i)) == (i, ac)
    assert word_adjoint((a, i, ac)) == (a, i, ac)


def test_word_label():
    assert word_label(()) == "1"
    assert word_label((Index(1), Index(2))) == "M1*M2"
