"""The coefficient <-> matrix-kernel bijection and the induced group action."""

from fractions import Fraction

import numpy as np
import pytest

from cnslab.catalog import (CnsaSystem, decoupling_example,
                            dissipative_example, free_forced)
from cnslab.errors import SingularTransform
from cnslab.system_algebra import (CubicSystem, MatrixKernelRep,
                                   UnknownChange, discriminant_sign,
                                   embed_cnsa, from_rep, induced_matrix,
                                   is_cnsa, kernel_basis_exact, mat3_mul,
                                   mat3_tr, parse_system, rank_c, to_rep,
                                   transform, transform_system)


def rand_rational_system(rng):
    return CubicSystem.of(tuple(
        Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 10)))
        for _ in range(12)))


def rand_rational_change(rng):
    while True:
        a, b, c, d = (Fraction(int(k), 10)
                      for k in rng.integers(-20, 21, size=4))
        if abs(a * d - b * c) >= Fraction(1, 2):
            return UnknownChange.of(((a, b), (c, d)))


def test_round_trip_is_exact_on_rationals():
    rng = np.random.default_rng(3)
    for _ in range(300):
        sigma = rand_rational_system(rng)
        assert tuple(from_rep(to_rep(sigma)).c) == tuple(sigma.c)


def test_fixture_matrices():
    rep = to_rep(dissipative_example())
    assert rep.c_matrix == ((0, 1, 0), (1, 0, 1), (0, 1, 0))
    rep = to_rep(decoupling_example())
    assert rep.c_matrix == ((3, 0, 1), (0, 2, 0), (1, 0, 3))
    assert tuple(rep.pqr) == (0, 0, 0)


def test_kernel_basis_exact_known_matrix():
    basis = kernel_basis_exact(((0, 1, 0), (1, 0, 1), (0, 1, 0)))
    assert basis == [(1, 0, -1)]
    assert kernel_basis_exact(((3, 0, 1), (0, 2, 0), (1, 0, 3))) == []
    full = kernel_basis_exact(((0, 0, 0),) * 3)
    assert len(full) == 3


def test_transform_composition_law():
    rng = np.random.default_rng(4)
    for _ in range(50):
        rep = to_rep(rand_rational_system(rng))
        m1 = rand_rational_change(rng)
        m2 = rand_rational_change(rng)
        once = transform(transform(rep, m1), m2)
        combined = transform(rep, m2.compose(m1))
        assert once.c_matrix == combined.c_matrix
        assert once.pqr == combined.pqr


def test_induced_matrix_properties():
    rng = np.random.default_rng(5)
    eye = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    for _ in range(50):
        m = rand_rational_change(rng)
        d, d_inv = induced_matrix(m)
        assert mat3_mul(d, d_inv) == eye
        # the action only sees M up to sign
        neg = UnknownChange.of(((-m.a, -m.b), (-m.c, -m.d)))
        assert induced_matrix(neg)[0] == d


def test_action_invariants():
    rng = np.random.default_rng(6)
    for _ in range(100):
        rep = to_rep(rand_rational_system(rng))
        m = rand_rational_change(rng)
        moved = transform(rep, m)
        assert rank_c(rep.as_float()) == rank_c(moved.as_float())
        assert discriminant_sign(rep) == discriminant_sign(moved)
        assert mat3_tr(moved.c_matrix) == mat3_tr(rep.c_matrix) / m.det


def test_transform_system_matches_rep_transform():
    rng = np.random.default_rng(7)
    sigma = rand_rational_system(rng)
    m = rand_rational_change(rng)
    via_system = to_rep(transform_system(sigma, m))
    via_rep = transform(to_rep(sigma), m)
    assert via_system.c_matrix == via_rep.c_matrix
    assert via_system.pqr == via_rep.pqr


def test_singular_change_is_refused():
    with pytest.raises(SingularTransform):
        UnknownChange.of(((1, 2), (2, 4)))


def test_inverse_and_scale():
    m = UnknownChange.of(((Fraction(1), Fraction(1, 2)),
                          (Fraction(0), Fraction(2))))
    ident = m.compose(m.inverse())
    assert ident.rows == ((1, 0), (0, 1))
    assert m.det == 2
    assert m.scale() == 2


def test_cnsa_embedding_is_traceless_and_recognized():
    sa = CnsaSystem.of((Fraction(1, 3), 0, 0, 0, 0, 2, 0, 0))
    rep = to_rep(embed_cnsa(sa))
    assert is_cnsa(rep)
    assert mat3_tr(rep.c_matrix) == 0
    assert tuple(rep.pqr) == (0, 0, 0)
    # the dissipative example keeps paired couplings and stays inside
    assert is_cnsa(to_rep(dissipative_example()))
    # breaking the c8 = 2 c9 pairing leaves the family
    outside = CubicSystem.of((0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0))
    assert not is_cnsa(to_rep(outside))


def test_free_driven_fixture_row():
    # single cubic power of the first component drives the second
    c = tuple(float(x) for x in free_forced(1).c)
    assert c[6] == 3.0
    assert all(x == 0.0 for i, x in enumerate(c) if i != 6)


def test_parse_system_forms():
    s = parse_system({"coefficients": [1] + [0] * 11})
    assert float(s.c[0]) == 1.0
    s = parse_system({"cnsa": [0, 0, 0, 0, 1, 0, 0, 0]})
    assert tuple(float(x) for x in s.c) == tuple(float(x)
                                                 for x in free_forced(1).c)
    s = parse_system({"coefficients": ["1/3"] + [0] * 11, "exact": True})
    assert s.c[0] == Fraction(1, 3)
