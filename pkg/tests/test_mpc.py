from fractions import Fraction as F

import numpy as np
import pytest

from pirmpc.codes import Code, dual, materialize
from pirmpc.errors import HypothesisSatisfied, NotNSC, TheoremViolation
from pirmpc.homweight import vector_weight
from pirmpc.mpc import (
    build_counterexample,
    hypothesis_check,
    matrix_product,
    partial_bound_property,
    rowspan_hamming,
    theorem_bound,
    verify_dual,
    verify_theorem,
)
from pirmpc.pir import parse_pir
from pirmpc.ringmatrix import RingMatrix, identity

Z4, Z5, Z6, Z10 = (parse_pir(f"Z{n}") for n in (4, 5, 6, 10))


def M(ring, rows):
    return RingMatrix.of(ring, rows)


def z6_instance():
    return [Code.linear(Z6, [(3,)]), Code.linear(Z6, [(2,)])], M(Z6, [[1, 1], [4, 5]])


def z4_instance():
    return [Code.full(Z4, 1), Code.linear(Z4, [(2,)])], M(Z4, [[1, 1], [0, 1]])


def test_matrix_product_examples():
    codes, A = z6_instance()
    words = materialize(matrix_product(codes, A))
    assert len(words) == 6 and (1, 5) in words and (5, 1) in words
    zero = matrix_product([Code.zero(Z5, 2)] * 2, M(Z5, [[1, 1], [0, 1]]))
    assert materialize(zero) == {(0, 0, 0, 0)}
    codes, A = z4_instance()
    words = materialize(matrix_product(codes, A))
    assert words == {(c1, (c1 + c2) % 4) for c1 in range(4) for c2 in (0, 2)}


def test_flattening_is_row_major():
    # n = 2, l = 2: row i of the n x l array is c_1[i] * A_1 + c_2[i] * A_2
    c1 = Code.explicit(Z5, [(1, 2)])
    c2 = Code.explicit(Z5, [(3, 4)])
    word = next(iter(materialize(matrix_product([c1, c2], M(Z5, [[1, 1], [0, 1]])))))
    assert word == (1, 4, 2, 1)


def test_theorem_bound_examples():
    codes, _ = z6_instance()
    assert theorem_bound(codes, 2) == F(3, 2)
    codes, _ = z4_instance()
    assert theorem_bound(codes, 2) == 2
    assert theorem_bound([Code.full(Z5, 1)] * 2, 3) == F(5, 2)


def test_hypothesis():
    assert not hypothesis_check(Z6)
    assert hypothesis_check(Z10)
    assert hypothesis_check(Z4)
    assert not hypothesis_check(parse_pir("Z2 x Z9"))
    assert hypothesis_check(parse_pir("Z3 x F8"))


def test_verify_examples():
    codes, A = z4_instance()
    rep = verify_theorem(codes, A)
    assert rep.d_h_actual == 2 == rep.bound and rep.equality and rep.c1_flag and rep.c2_flag
    rep = verify_theorem([Code.full(Z5, 1)] * 2, M(Z5, [[1, 1, 1], [0, 1, 2]]))
    assert rep.d_h_actual == F(5, 2) == rep.bound
    codes, A = z6_instance()
    rep = verify_theorem(codes, A, strict=False)
    assert not rep.hypothesis_ok and rep.d_h_actual == 1 and rep.bound == F(3, 2) and not rep.bound_holds
    assert rep.consistent
    with pytest.raises(NotNSC):
        verify_theorem(codes, M(Z6, [[1, 1], [1, 1]]))


def test_report_json_schema():
    codes, A = z4_instance()
    out = verify_theorem(codes, A).to_json()
    for key in ("d_h", "bound", "hypothesis_ok", "bound_holds", "c1", "c2", "equality", "witness"):
        assert key in out
    assert out["d_h"] == "2" and len(out["witness"]) == 2


def test_distance_matches_direct_enumeration():
    rng = np.random.default_rng(4)
    A = M(Z10, [[1, 1], [0, 1]])
    for _ in range(10):
        codes = [Code.linear(Z10, rng.integers(0, 10, size=(1, 2)).tolist(), 2) for _ in range(2)]
        words = sorted(materialize(matrix_product(codes, A)))
        nonzero = [w for w in words if any(w)]
        if not nonzero:
            continue
        expected = min(vector_weight(Z10, w) for w in nonzero)
        assert verify_theorem(codes, A).d_h_actual == expected


def test_dual_examples():
    codes, A = z4_instance()
    rep = verify_dual(codes, A)
    assert rep.identity_holds and rep.cardinality_ok and rep.reversed_nsc and rep.bound_holds
    c = matrix_product(codes, A)
    assert len(c) * len(dual(c)) == 4**2
    span1 = Code.linear(Z5, [(1,)])
    rep = verify_dual([span1, span1], M(Z5, [[1, 1], [0, 1]]))
    assert rep.identity_holds


def test_dual_with_identity_is_componentwise():
    codes = [Code.linear(Z6, [(1, 3)]), Code.linear(Z6, [(2, 0)])]
    big = dual(matrix_product(codes, identity(Z6, 2)))
    assert big == matrix_product([dual(c) for c in codes], identity(Z6, 2))


def test_rowspan_examples():
    A = M(Z5, [[1, 1, 1], [0, 1, 2]])
    assert rowspan_hamming(A, 1) == 3
    assert rowspan_hamming(A, 2) == 2
    assert rowspan_hamming(M(Z6, [[1, 1], [4, 5]]), 2) == 1


def test_partial_bound_examples():
    A = M(Z5, [[1, 1, 1], [0, 1, 2]])
    codes = [Code.full(Z5, 1), Code.full(Z5, 1)]
    res = partial_bound_property(A, codes, 1)
    assert res.applicable and res.holds and res.exhaustive
    for c in range(1, 5):
        word = [Z5.mul(c, a) for a in A.rows[0]]
        assert vector_weight(Z5, word) == 3 * vector_weight(Z5, [c])
    res = partial_bound_property(M(Z10, [[1, 1], [0, 1]]), [Code.full(Z10, 1)] * 2, 2)
    assert res.applicable and res.holds
    codes, A = z6_instance()
    res = partial_bound_property(A, codes, 2)
    assert not res.applicable and not res.holds
    assert res.witness[0] == (1, 5)
    assert vector_weight(Z6, res.witness[0]) == 1 < F(3, 2) == vector_weight(Z6, res.witness[1])


@pytest.mark.parametrize(
    "name,witness_weight,bound",
    [("Z6", 1, F(3, 2)), ("Z12", 1, F(3, 2)), ("Z2 x Z9", 1, F(3, 2)), ("Z3 x F4", F(5, 2), F(8, 3))],
)
def test_counterexamples(name, witness_weight, bound):
    ce = build_counterexample(parse_pir(name))
    assert ce.report.d_h_actual == witness_weight
    assert ce.report.bound == bound
    assert not ce.report.bound_holds
    assert vector_weight(ce.matrix.ring, ce.witness) == witness_weight


def test_counterexample_z6_golden():
    ce = build_counterexample(Z6)
    assert ce.matrix.rows == ((1, 1), (4, 5))
    assert (ce.a, ce.b) == (3, 4)
    assert materialize(ce.codes[1]) == {(0,), (2,), (4,)}
    assert tuple(ce.witness) == (1, 5)
    assert ce.witness_weight == 1


def test_counterexample_requires_adjacent_q():
    for name in ("Z10", "Z4", "F8 x Z9"):
        with pytest.raises(HypothesisSatisfied):
            build_counterexample(parse_pir(name))


def test_strict_raises_on_inconsistent_report(monkeypatch):
    import pirmpc.mpc as mpc

    codes, A = z4_instance()
    monkeypatch.setattr(mpc, "theorem_bound", lambda *a, **k: F(3))
    with pytest.raises(TheoremViolation):
        mpc.verify_theorem(codes, A)


def test_hypothesis_fails_for_equal_residue_fields():
    res = hypothesis_check(parse_pir("Z2 x Z4"))
    assert not res and "<=" in res.reason
