import itertools

import numpy as np
import pytest

from pirmpc.errors import InfeasibleShape, NotSquare, SingularMatrix, WideMatrix
from pirmpc.pir import parse_pir
from pirmpc.ringmatrix import (
    RingMatrix,
    build_nsc,
    cput_check,
    det,
    identity,
    inverse,
    is_nsc,
    is_upper_triangular,
    nsc_via_residue_fields,
    project,
    reversal_matrix,
)

Z4, Z5, Z6, Z10 = (parse_pir(f"Z{n}") for n in (4, 5, 6, 10))


def M(ring, rows):
    return RingMatrix.of(ring, rows)


def test_det_examples():
    assert det(M(Z6, [[1, 1], [4, 5]])) == 1
    assert det(identity(Z10, 4)) == 1
    assert det(M(Z10, [[7]])) == 7
    with pytest.raises(NotSquare):
        det(M(Z5, [[1, 2]]))


def test_det_matches_leibniz():
    rng = np.random.default_rng(1)
    ring = parse_pir("Z12")
    for _ in range(50):
        n = int(rng.integers(1, 5))
        rows = rng.integers(0, 12, size=(n, n)).tolist()
        total = 0
        for perm in itertools.permutations(range(n)):
            sign = (-1) ** sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
            term = sign
            for i in range(n):
                term *= rows[i][perm[i]]
            total += term
        assert det(M(ring, rows)) == total % 12


def test_is_nsc_examples():
    assert is_nsc(M(Z5, [[1, 1, 1], [0, 1, 2]]))
    res = is_nsc(M(Z4, [[1, 2], [0, 1]]))
    assert not res and res.k == 1 and res.columns == (1,)
    assert is_nsc(M(Z6, [[1, 1], [4, 5]]))
    with pytest.raises(WideMatrix):
        is_nsc(M(Z5, [[1], [1]]))


def test_projection_examples():
    A = M(Z6, [[1, 1], [4, 5]])
    assert project(A, 0).rows == ((1, 1), (0, 1))
    assert project(A, 1).rows == ((1, 1), (1, 2))
    assert project(M(Z6, [[0, 0]]), 1).rows == ((0, 0),)
    assert nsc_via_residue_fields(A)
    assert not nsc_via_residue_fields(M(Z6, [[1, 1], [1, 1]]))
    assert nsc_via_residue_fields(M(Z10, [[1, 1], [0, 1]]))


def test_inverse():
    assert inverse(M(Z4, [[1, 1], [0, 1]])).rows == ((1, 3), (0, 1))
    assert inverse(identity(Z6, 3)) == identity(Z6, 3)
    with pytest.raises(SingularMatrix):
        inverse(M(Z4, [[2, 0], [0, 1]]))
    rng = np.random.default_rng(3)
    ring = parse_pir("Z3 x F4")
    for _ in range(40):
        n = int(rng.integers(1, 4))
        A = M(ring, rng.integers(0, ring.size, size=(n, n)).tolist())
        if ring.is_unit(det(A)):
            assert A @ inverse(A) == identity(ring, n)
            assert inverse(A) @ A == identity(ring, n)


def test_reversal():
    assert reversal_matrix(2, Z5).rows == ((0, 1), (1, 0))
    assert reversal_matrix(1, Z5).rows == ((1,),)
    J = reversal_matrix(3, Z6)
    assert J @ J == identity(Z6, 3)


def test_cput_examples():
    assert cput_check(M(Z5, [[1, 1, 1], [0, 1, 2]])) == (0, 1, 2)
    assert cput_check(M(Z6, [[1, 1], [5, 0]])) == (1, 0)
    assert cput_check(M(Z6, [[1, 1], [4, 5]])) is None


def test_cput_is_complete():
    # compare the greedy answer against trying every permutation
    rng = np.random.default_rng(5)
    for _ in range(400):
        m = int(rng.integers(1, 4))
        l = int(rng.integers(m, 6))  # noqa: E741
        rows = (rng.integers(0, 3, size=(m, l)) * (rng.random((m, l)) < 0.5)).tolist()
        A = M(Z5, rows)
        found = any(is_upper_triangular(A.permute_columns(p)) for p in itertools.permutations(range(l)))
        perm = cput_check(A)
        assert (perm is not None) == found
        if perm is not None:
            assert is_upper_triangular(A.permute_columns(perm))


def test_build_nsc_examples():
    assert build_nsc(Z6, 2, 2).rows == ((1, 1), (0, 1))
    with pytest.raises(InfeasibleShape):
        build_nsc(Z6, 2, 3)
    A = build_nsc(Z5, 3, 3)
    assert A.rows == ((1, 1, 1), (0, 1, 2), (0, 1, 4))
    assert is_nsc(A)


@pytest.mark.parametrize("name", ["Z4", "Z5", "Z10", "Z2 x F4", "F4 x Z9", "Z35"])
def test_build_nsc_grid(name):
    ring = parse_pir(name)
    q = min(ring.qs)
    for m in range(1, 7):
        for l in range(1, 7):  # noqa: E741
            if m == 1 or m <= l <= q:
                assert is_nsc(build_nsc(ring, m, l))
            else:
                with pytest.raises(InfeasibleShape):
                    build_nsc(ring, m, l)


def test_json_roundtrip():
    ring = parse_pir("Z2 x F4")
    A = build_nsc(ring, 2, 2)
    assert RingMatrix.from_json(ring, A.to_json()) == A
