"""Canonical forms: the rank-0 signature table and rank-1 class labels."""

import numpy as np

from cnslab.catalog import (decoupling_example, dissipative_example,
                            free_forced, one_way_coupled, zero_system)
from cnslab.classification import canonicalize, canonicalize_rank0
from cnslab.system_algebra import (MatrixKernelRep, UnknownChange, from_rep,
                                   to_rep, transform, transform_system)

RANK0_SAMPLES = {
    "posdef": (2.0, 0.3, 1.0),
    "negdef": (-2.0, 0.3, -1.0),
    "indef": (1.0, 0.2, -2.0),
    "indef_antidiag": (0.0, 1.5, 0.0),
    "rank1_pos_p": (1.0, 1.0, 1.0),
    "rank1_pos_0": (0.0, 0.0, 2.0),
    "rank1_neg_p": (-1.0, 1.0, -1.0),
    "rank1_neg_0": (0.0, 0.0, -3.0),
    "zero": (0.0, 0.0, 0.0),
}


def rep_deviation(a, b):
    dc = np.max(np.abs(np.array(a.c_matrix, dtype=float)
                       - np.array(b.c_matrix, dtype=float)))
    dk = max(abs(float(x) - float(y)) for x, y in zip(a.pqr, b.pqr))
    return max(float(dc), dk)


def rand_rank1_system(rng):
    nu = rng.normal(size=3)
    d = rng.normal(size=3)
    c = tuple(tuple(float(nu[i] * d[j]) for j in range(3)) for i in range(3))
    return from_rep(MatrixKernelRep.of(c, *rng.normal(size=3)))


def rand_change(rng):
    while True:
        a, b, c, d = rng.uniform(-2.0, 2.0, size=4)
        if abs(a * d - b * c) >= 0.5:
            return UnknownChange.of(((a, b), (c, d)))


def test_signature_table_patterns_and_targets():
    targets = set()
    for name, pqr in RANK0_SAMPLES.items():
        target, witness, pattern = canonicalize_rank0(pqr)
        assert pattern == name
        targets.add(target)
        zero_c = ((0.0,) * 3,) * 3
        moved = transform(MatrixKernelRep.of(zero_c, *pqr), witness)
        assert max(abs(float(x) - float(y))
                   for x, y in zip(moved.pqr, target)) <= 1e-9
    # nine patterns collapse onto eight representatives
    assert len(targets) == 8


def test_rank0_full_canonicalize_label():
    cf = canonicalize(zero_system())
    assert cf.label == "rank0: (0,0,0)"
    assert cf.invariants["rank"] == 0


def test_rank1_fixture_labels():
    cf = canonicalize(free_forced(1))
    assert cf.label.startswith("Z7")
    assert "K7" in cf.label
    assert cf.class_id.j == 7
    assert cf.in_kj

    cf = canonicalize(one_way_coupled(1 / 3, 1.0))
    assert cf.label.startswith("Z4")
    assert cf.class_id.j == 4


def test_higher_rank_has_no_representative():
    cf = canonicalize(dissipative_example())
    assert cf.invariants["rank"] == 2
    assert "no canonical representative" in cf.label
    cf = canonicalize(decoupling_example())
    assert cf.invariants["rank"] == 3
    assert "no canonical representative" in cf.label


def test_witness_reproduces_representative():
    rng = np.random.default_rng(21)
    for _ in range(100):
        sigma = rand_rank1_system(rng)
        cf = canonicalize(sigma)
        repro = transform(to_rep(sigma).as_float(), cf.witness)
        assert rep_deviation(repro, cf.representative) <= 1e-8


def test_canonicalize_idempotent():
    rng = np.random.default_rng(22)
    for _ in range(50):
        cf = canonicalize(rand_rank1_system(rng))
        again = canonicalize(from_rep(cf.representative))
        assert rep_deviation(again.representative, cf.representative) <= 1e-7


def test_orbit_invariance():
    rng = np.random.default_rng(23)
    for _ in range(50):
        sigma = rand_rank1_system(rng)
        cf = canonicalize(sigma)
        moved = canonicalize(transform_system(sigma, rand_change(rng)))
        assert moved.class_id.j == cf.class_id.j
        assert rep_deviation(moved.representative, cf.representative) <= 1e-7


def test_json_report_fields():
    report = canonicalize(free_forced(1)).to_json_dict()
    for key in ("label", "stratum", "witness", "invariants"):
        assert key in report
    inv = report["invariants"]
    for key in ("rank", "trace_zero", "discriminant_sign", "b_zero"):
        assert key in inv
