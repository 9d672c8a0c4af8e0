"""Acceptance criteria, one test group per criterion.

Run with ``pytest tests/test_acceptance.py``; a PASS/FAIL line per criterion
is printed in the terminal summary.
"""

import itertools
import json
from fractions import Fraction as F
from functools import lru_cache

import numpy as np
import pytest

from pirmpc.campaign import CampaignConfig, _perturb, campaign, sample_codes
from pirmpc.cli import main
from pirmpc.codes import dual
from pirmpc.errors import InfeasibleShape
from pirmpc.homweight import hom_weight, hom_weight_product, weight_bounds
from pirmpc.mpc import build_counterexample, matrix_product, verify_dual
from pirmpc.pir import parse_pir
from pirmpc.ringmatrix import (
    RingMatrix,
    build_nsc,
    inverse,
    is_nsc,
    nsc_via_residue_fields,
    reversal_matrix,
)

from oracles import homogeneous_by_recursion

WEIGHT_RINGS = ["Z4", "Z8", "Z9", "Z25", "Z6", "Z10", "Z12", "Z36", "F4", "Z2 x F4"]
CAMPAIGN_RINGS = ["Z4", "Z5", "Z8", "Z9", "Z25", "Z10", "Z20"]
CAMPAIGN = {"rings": CAMPAIGN_RINGS, "trials": 1000, "seed": 42, "m": [1, 4], "l": [1, 4], "n": [1, 2]}


def crit(number, title):
    return pytest.mark.criterion(number, title)


def cli_json(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


# 1 -------------------------------------------------------------------------------


@crit(1, "weight tables for Z6 and Z4 are exact")
@pytest.mark.parametrize(
    "name,expected",
    [("Z6", ["0", "1/2", "3/2", "2", "3/2", "1/2"]), ("Z4", ["0", "1", "2", "1"])],
)
def test_c1_weight_tables(capsys, stopwatch, name, expected):
    code, data = cli_json(capsys, "weights", name)
    assert code == 0
    assert [row["weight"] for row in data["table"]] == expected
    ring = parse_pir(name)
    assert sum(F(w) for w in expected) == ring.size
    assert [str(w) for w in homogeneous_by_recursion(ring)] == expected
    assert stopwatch() < 1.0


# 2 -------------------------------------------------------------------------------


@crit(2, "averaging, orbit constancy and product form agree exhaustively")
def test_c2_weight_properties(stopwatch):
    for name in WEIGHT_RINGS:
        ring = parse_pir(name)
        elems = list(ring.elements())
        units = [u for u in elems if ring.is_unit(u)]
        w = [hom_weight(ring, x) for x in elems]
        assert sum(w) == ring.size, name
        for x in elems:
            assert w[x] == hom_weight_product(ring, x), (name, x)
            ideal = {ring.mul(x, y) for y in elems}
            if x:
                assert sum(w[y] for y in ideal) == len(ideal), (name, x)
            assert all(w[ring.mul(u, x)] == w[x] for u in units), (name, x)
    assert stopwatch() < 5.0


# 3 -------------------------------------------------------------------------------


@crit(3, "nonzero weights lie in the two-sided range")
def test_c3_weight_range(stopwatch):
    rings = [r for r in WEIGHT_RINGS + ["Z30", "Z3 x F4", "F4 x Z5 x Z7"] if parse_pir(r).s >= 2]
    for name in rings:
        ring = parse_pir(name)
        q1, q2 = ring.qs[0], ring.qs[1]
        lo, hi = 1 - F(1, (q1 - 1) * (q2 - 1)), 1 + F(1, q1 - 1)
        assert weight_bounds(ring) == (lo, hi)
        for x in range(1, ring.size):
            assert lo <= hom_weight(ring, x) <= hi, (name, x)
    assert stopwatch() < 1.0


# 4 -------------------------------------------------------------------------------


@crit(4, "sharpness example reproduces d_h = 1 < 3/2")
def test_c4_counterexample_cli(capsys, stopwatch):
    code, data = cli_json(capsys, "counterexample", "Z6")
    assert code == 2
    assert data["d_h"] == "1" and data["bound"] == "3/2"
    assert data["constructed_word"] == [1, 5]
    assert data["hypothesis_ok"] is False and data["bound_holds"] is False
    q = 2
    assert F(data["d_h"]) == q - F(1, q - 1) < q - F(1, q) == F(data["bound"])
    assert stopwatch() < 1.0


@crit(4, "sharpness example reproduces d_h = 1 < 3/2")
@pytest.mark.parametrize("name", ["Z12", "Z2 x Z9"])
def test_c4_counterexample_other_rings(stopwatch, name):
    ce = build_counterexample(parse_pir(name))
    assert ce.report.d_h_actual < ce.report.bound
    assert ce.report.d_h_actual == 1 and ce.report.bound == F(3, 2)
    assert stopwatch() < 1.0


# 5, 6, 10 ------------------------------------------------------------------------


@lru_cache(maxsize=None)
def campaign_run():
    import time

    start = time.perf_counter()
    report = campaign(CampaignConfig.from_dict(CAMPAIGN))
    return report, time.perf_counter() - start


@crit(5, "campaign: no bound violations, equality whenever C1 or C2")
def test_c5_campaign():
    report, seconds = campaign_run()
    c = report.counters
    assert c["evaluated"] >= 1000
    assert all(report.rings[r]["hypothesis_ok"] for r in CAMPAIGN_RINGS)
    assert c["bound_violations"] == 0
    assert c["flagged_c1_or_c2"] > 0
    flagged = [t for t in report.records if not t["skipped"] and (t["c1"] or t["c2"])]
    assert all(t["equality"] for t in flagged)
    for t in report.records:
        if t["skipped"]:
            continue
        assert t["m"] <= t["l"] <= min(4, min(parse_pir(t["ring"]).qs)) or t["m"] == 1
        assert t["n"] <= 2
    assert seconds < 60.0


def _rowspan_brute(A, k):
    ring = A.ring
    best = A.l
    for coeffs in itertools.product(range(ring.size), repeat=k):
        if not any(coeffs):
            continue
        word = [0] * A.l
        for c, row in zip(coeffs, A.rows[:k]):
            word = [ring.add(w, ring.mul(c, a)) for w, a in zip(word, row)]
        best = min(best, sum(1 for x in word if x))
    return best


@crit(6, "row spans of NSC matrices have Hamming distance l - k + 1")
def test_c6_rowspan_distance():
    report, _ = campaign_run()
    checked = 0
    for t in report.records:
        if t["skipped"]:
            continue
        ring = parse_pir(t["ring"])
        A = RingMatrix.from_json(ring, t["matrix"])
        assert is_nsc(A)
        assert t["rowspan"] == [A.l - k + 1 for k in range(1, A.m + 1)]
        if ring.size ** A.m <= 2000:
            for k in range(1, A.m + 1):
                assert _rowspan_brute(A, k) == A.l - k + 1
        checked += 1
    assert checked >= 1000


@crit(10, "identical config and seed give byte-identical reports")
def test_c10_determinism(capsys, tmp_path):
    report, _ = campaign_run()
    again = campaign(CampaignConfig.from_dict(CAMPAIGN))
    assert report.to_json() == again.to_json()
    assert report.to_csv() == again.to_csv()
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"rings": ["Z6", "Z10"], "trials": 50, "seed": 7}))
    blobs = []
    for i in range(2):
        out = tmp_path / f"out{i}.json"
        main(["campaign", str(cfg), "--out", str(out)])
        blobs.append(out.read_bytes())
    assert blobs[0] == blobs[1]
    par = campaign(CampaignConfig(rings=["Z6", "Z10"], trials=50, seed=7, workers=2))
    assert par.to_json().encode() == blobs[0]


# 7 -------------------------------------------------------------------------------


@crit(7, "build_nsc succeeds exactly on the feasible grid")
@pytest.mark.parametrize("name", WEIGHT_RINGS + ["Z5", "Z35", "F4 x Z5 x Z7"])
def test_c7_feasibility_grid(name):
    ring = parse_pir(name)
    q = min(ring.qs)
    for m in range(1, 8):
        for l in range(1, 8):  # noqa: E741
            if m == 1 or m <= l <= q:
                A = build_nsc(ring, m, l)
                assert A.shape == (m, l) and is_nsc(A)
            else:
                with pytest.raises(InfeasibleShape):
                    build_nsc(ring, m, l)


# 8 -------------------------------------------------------------------------------


@crit(8, "is_nsc agrees with the residue-field criterion")
@pytest.mark.parametrize("name", WEIGHT_RINGS + ["Z5", "Z20"])
def test_c8_nsc_residue_equivalence(name):
    ring = parse_pir(name)
    rng = np.random.default_rng(sum(map(ord, name)))
    q = min(ring.qs)
    outcomes = []
    for i in range(500):
        m = int(rng.integers(1, 4))
        l = int(rng.integers(m, m + 3))  # noqa: E741
        if i % 2 and (m == 1 or l <= q):
            A = _perturb(ring, build_nsc(ring, m, l), rng)
            # random single-entry edits to land near the boundary
            if rng.random() < 0.5:
                rows = [list(r) for r in A.rows]
                rows[int(rng.integers(m))][int(rng.integers(l))] = int(rng.integers(ring.size))
                A = RingMatrix.of(ring, rows)
        else:
            A = RingMatrix.of(ring, rng.integers(0, ring.size, size=(m, l)).tolist())
        got = bool(is_nsc(A))
        assert got == nsc_via_residue_fields(A), A.rows
        outcomes.append(got)
    assert any(outcomes) and not all(outcomes)


# 9 -------------------------------------------------------------------------------


def _square_instances(ring, rng, count):
    q = min(ring.qs)
    for i in range(count):
        m = 1 + i % min(3, q)
        n = 1 + (i // 3) % 2
        A = _perturb(ring, build_nsc(ring, m, m), rng)
        if i % 4 == 0:
            # upper triangular tries, kept only when NSC, so C1 shows up
            for _ in range(50):
                rows = [[0] * m for _ in range(m)]
                for r in range(m):
                    for c in range(r, m):
                        rows[r][c] = int(rng.integers(ring.size))
                T = RingMatrix.of(ring, rows)
                if is_nsc(T):
                    A = T
                    break
        kind = "nested" if i % 3 == 0 else "linear"
        yield A, sample_codes(ring, m, n, kind, rng)


@crit(9, "dual of a matrix product code and its bound")
def test_c9_dual(stopwatch):
    total = flagged = 0
    for name in ("Z4", "Z5", "Z10"):
        ring = parse_pir(name)
        rng = np.random.default_rng(2024)
        for A, codes in _square_instances(ring, rng, 60):
            assert is_nsc(A)
            rep = verify_dual(codes, A, strict=False)
            # independent re-check of the set identity
            C = matrix_product(codes, A)
            Binv_t = inverse(A).transpose()
            assert dual(C) == matrix_product([dual(c) for c in codes], Binv_t)
            assert len(C) * len(dual(C)) == ring.size ** (A.m * codes[0].length)
            assert is_nsc(reversal_matrix(A.m, ring) @ Binv_t)
            assert rep.identity_holds and rep.cardinality_ok and rep.reversed_nsc
            assert rep.bound_holds
            if rep.c1_flag or rep.c2_flag:
                flagged += 1
                assert rep.equality
            total += 1
    assert total == 180 and flagged > 0
    assert stopwatch() < 30.0


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
