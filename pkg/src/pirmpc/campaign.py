"""Seeded randomized campaigns over matrix product codes.

Each trial draws its own stream from ``numpy``'s PCG64 generator seeded with
``SeedSequence([seed, trial_index])``, so a trial's outcome depends only on the
config, the seed and its index.  Serial and parallel runs therefore produce
the same report.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from math import prod
from typing import Optional

import numpy as np

from . import __version__
from .codes import LINEAR, Code
from .errors import ConfigError, EnumerationTooLarge
from .mpc import (
    hypothesis_check,
    partial_bound_property,
    rowspan_hamming,
    verify_dual,
    verify_theorem,
)
from .pir import Pir, parse_pir
from .ringmatrix import RingMatrix, build_nsc, is_nsc

CODE_KINDS = ("linear", "nested", "explicit")
MATRIX_KINDS = ("vandermonde", "triangular", "random")
GENERATOR = "numpy PCG64, SeedSequence([seed, trial])"


@dataclass
class CampaignConfig:
    rings: list[str]
    trials: int = 100
    seed: int = 0
    m: tuple[int, int] = (1, 4)
    l: tuple[int, int] = (1, 4)  # noqa: E741
    n: tuple[int, int] = (1, 2)
    code_kinds: tuple[str, ...] = CODE_KINDS
    max_words: int = 20_000
    max_rowspan: int = 100_000
    max_dual_space: int = 100_000
    dual: bool = True
    workers: int = 1
    out: Optional[str] = None
    format: str = "json"

    def __post_init__(self):
        if isinstance(self.rings, str):
            self.rings = [self.rings]
        self.rings = list(self.rings)
        if not self.rings:
            raise ConfigError("at least one ring is required")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        for name in ("m", "l", "n"):
            rng = tuple(getattr(self, name))
            if len(rng) != 2 or rng[0] < 1 or rng[0] > rng[1]:
                raise ConfigError(f"{name} must be a range [lo, hi] with 1 <= lo <= hi")
            setattr(self, name, rng)
        self.code_kinds = tuple(self.code_kinds)
        bad = [k for k in self.code_kinds if k not in CODE_KINDS]
        if bad or not self.code_kinds:
            raise ConfigError(f"code kinds must be drawn from {CODE_KINDS}")
        if self.format not in ("json", "csv"):
            raise ConfigError("format must be json or csv")
        for r in self.rings:
            parse_pir(r)

    @classmethod
    def from_dict(cls, data: dict) -> CampaignConfig:
        data = dict(data)
        if "ring" in data:
            data.setdefault("rings", data.pop("ring"))
        if "rings" not in data:
            raise ConfigError("config needs 'ring' or 'rings'")
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("out")
        d.pop("workers")
        d["m"], d["l"], d["n"] = list(self.m), list(self.l), list(self.n)
        d["code_kinds"] = list(self.code_kinds)
        return d


# -- sampling ---------------------------------------------------------------------


def _units(ring: Pir) -> np.ndarray:
    return np.flatnonzero(ring.unit_mask)


def _perturb(ring: Pir, A: RingMatrix, rng: np.random.Generator) -> RingMatrix:
    """Moves that keep a matrix NSC: column permutation, unit scaling of
    rows and columns, and left multiplication by a unit lower triangular
    matrix."""
    units = _units(ring)
    m, l = A.shape  # noqa: E741
    rows = [list(r) for r in A.rows]
    for i in range(1, m):
        for k in range(i):
            c = int(rng.integers(ring.size))
            rows[i] = [ring.add(x, ring.mul(c, y)) for x, y in zip(rows[i], rows[k])]
    row_scale = [int(units[rng.integers(len(units))]) for _ in range(m)]
    col_scale = [int(units[rng.integers(len(units))]) for _ in range(l)]
    perm = [int(j) for j in rng.permutation(l)]
    out = [[ring.mul(ring.mul(rows[i][j], row_scale[i]), col_scale[j]) for j in perm] for i in range(m)]
    return RingMatrix.of(ring, out)


def sample_matrix(ring: Pir, m: int, l: int, rng: np.random.Generator, attempts: int = 60):  # noqa: E741
    """An ``m x l`` matrix meant to be NSC, and the method that produced it."""
    kind = MATRIX_KINDS[int(rng.integers(len(MATRIX_KINDS)))]
    if kind != "vandermonde":
        units = _units(ring)
        for _ in range(attempts):
            entries = rng.integers(ring.size, size=(m, l))
            if kind == "triangular":
                for i in range(m):
                    for j in range(min(i, l)):
                        entries[i, j] = 0
                    if i < l:
                        entries[i, i] = units[rng.integers(len(units))]
            A = RingMatrix.of(ring, entries.tolist())
            if is_nsc(A):
                if kind == "triangular":
                    A = A.permute_columns([int(j) for j in rng.permutation(l)])
                return A, kind
    return _perturb(ring, build_nsc(ring, m, l), rng), "vandermonde"


def _random_vectors(ring: Pir, n: int, count: int, rng: np.random.Generator) -> list[list[int]]:
    return rng.integers(ring.size, size=(count, n)).tolist()


def sample_codes(ring: Pir, m: int, n: int, kind: str, rng: np.random.Generator, attempts: int = 20) -> list[Code]:
    """``m`` codes of length ``n`` with at least two words each."""
    for _ in range(attempts):
        if kind == "explicit":
            codes = []
            for _ in range(m):
                size = int(rng.integers(2, 5))
                codes.append(Code.explicit(ring, _random_vectors(ring, n, size, rng), n))
        elif kind == "nested":
            gens = _random_vectors(ring, n, 1, rng)
            codes = [Code.linear(ring, gens, n)]
            for _ in range(m - 1):
                extra = _random_vectors(ring, n, int(rng.integers(0, 2)), rng)
                gens = gens + extra
                codes.append(Code.linear(ring, gens, n))
            codes.reverse()
        else:
            codes = [
                Code.linear(ring, _random_vectors(ring, n, int(rng.integers(1, 3)), rng), n)
                for _ in range(m)
            ]
        if all(len(c) >= 2 for c in codes):
            return codes
    raise EnumerationTooLarge("could not draw nontrivial codes")


# -- running ------------------------------------------------------------------------


def _frac(x) -> Optional[str]:
    return None if x is None else str(x)


def run_trial(config: CampaignConfig, index: int) -> dict:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([config.seed, index])))
    ring_name = config.rings[index % len(config.rings)]
    ring = parse_pir(ring_name)
    rec: dict = {"trial": index, "ring": ring_name, "skipped": None}

    qmin = min(ring.qs)
    l_hi = min(config.l[1], qmin)
    m_hi = config.m[1]
    while m_hi > 1 and ring.size**m_hi > config.max_rowspan:
        m_hi -= 1
    m_hi = min(m_hi, l_hi) if m_hi > 1 else m_hi
    if config.m[0] > m_hi or max(config.m[0], config.l[0]) > l_hi:
        rec["skipped"] = "infeasible_shape"
        return rec
    m = int(rng.integers(config.m[0], m_hi + 1))
    l = int(rng.integers(max(m, config.l[0]), l_hi + 1))  # noqa: E741
    n = int(rng.integers(config.n[0], config.n[1] + 1))
    rec.update({"m": m, "l": l, "n": n})

    A, matrix_kind = sample_matrix(ring, m, l, rng)
    rec["matrix"] = A.to_json()
    rec["matrix_kind"] = matrix_kind
    if not is_nsc(A):
        rec["skipped"] = "matrix_not_nsc"
        return rec

    code_kind = config.code_kinds[int(rng.integers(len(config.code_kinds)))]
    rec["code_kind"] = code_kind
    try:
        for _ in range(20):
            codes = sample_codes(ring, m, n, code_kind, rng)
            if prod(len(c) for c in codes) <= config.max_words:
                break
        else:
            raise EnumerationTooLarge("codes too large")
    except EnumerationTooLarge:
        rec["skipped"] = "enumeration"
        return rec
    rec["code_sizes"] = [len(c) for c in codes]

    report = verify_theorem(codes, A, strict=False)
    rec.update(
        {
            "d_h": _frac(report.d_h_actual),
            "bound": _frac(report.bound),
            "hypothesis_ok": report.hypothesis_ok,
            "bound_holds": report.bound_holds,
            "c1": report.c1_flag,
            "c2": report.c2_flag,
            "equality": report.equality,
            "cardinality_ok": report.size == report.expected_size,
        }
    )

    rec["rowspan"] = [int(rowspan_hamming(A, k, strict=False)) for k in range(1, m + 1)]
    rec["rowspan_ok"] = all(d == l - k for k, d in enumerate(rec["rowspan"]))

    partial = []
    for k in range(1, m + 1):
        res = partial_bound_property(A, codes, k, rng=rng, max_tuples=20_000)
        partial.append({"k": k, "applicable": res.applicable, "holds": res.holds, "checked": res.checked})
    rec["partial"] = partial

    rec["dual"] = None
    if (
        config.dual
        and m == l
        and all(c.kind == LINEAR or c.is_linear for c in codes)
        and ring.size ** (n * m) <= config.max_dual_space
    ):
        rec["dual"] = verify_dual(codes, A, strict=False).to_json()
    return rec


def _summarise(config: CampaignConfig, records: list[dict]) -> dict:
    counters = {
        "trials": len(records),
        "evaluated": 0,
        "skipped": 0,
        "skip_reasons": {},
        "hypothesis_ok_trials": 0,
        "bound_violations": 0,
        "bound_violations_under_hypothesis": 0,
        "equality_hits": 0,
        "flagged_c1_or_c2": 0,
        "flagged_equality_failures": 0,
        "cardinality_failures": 0,
        "rowspan_checks": 0,
        "rowspan_failures": 0,
        "partial_checks": 0,
        "partial_failures": 0,
        "partial_inapplicable_violations": 0,
        "dual_checks": 0,
        "dual_failures": 0,
    }
    for rec in records:
        if rec["skipped"]:
            counters["skipped"] += 1
            reasons = counters["skip_reasons"]
            reasons[rec["skipped"]] = reasons.get(rec["skipped"], 0) + 1
            continue
        counters["evaluated"] += 1
        hyp = rec["hypothesis_ok"]
        counters["hypothesis_ok_trials"] += hyp
        if not rec["bound_holds"]:
            counters["bound_violations"] += 1
            counters["bound_violations_under_hypothesis"] += hyp
        counters["equality_hits"] += rec["equality"]
        if rec["c1"] or rec["c2"]:
            counters["flagged_c1_or_c2"] += 1
            if hyp and not rec["equality"]:
                counters["flagged_equality_failures"] += 1
        counters["cardinality_failures"] += not rec["cardinality_ok"]
        counters["rowspan_checks"] += len(rec["rowspan"])
        counters["rowspan_failures"] += sum(d != rec["l"] - k for k, d in enumerate(rec["rowspan"]))
        for p in rec["partial"]:
            counters["partial_checks"] += 1
            if not p["holds"]:
                if p["applicable"]:
                    counters["partial_failures"] += 1
                else:
                    counters["partial_inapplicable_violations"] += 1
        if rec["dual"] is not None:
            counters["dual_checks"] += 1
            d = rec["dual"]
            ok = d["identity_holds"] and d["cardinality_ok"] and d["reversed_nsc"]
            if d["hypothesis_ok"]:
                ok = ok and d["bound_holds"] and (d["equality"] or not (d["c1"] or d["c2"]))
            counters["dual_failures"] += not ok
    return counters


@dataclass
class CampaignReport:
    config: dict
    counters: dict
    records: list[dict] = field(repr=False)
    rings: dict = field(default_factory=dict)

    @property
    def violations(self) -> int:
        return self.counters["bound_violations"]

    def to_dict(self) -> dict:
        return {
            "environment": {"version": __version__, "generator": GENERATOR},
            "config": self.config,
            "rings": self.rings,
            "counters": self.counters,
            "trials": self.records,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        cols = [
            "trial", "ring", "skipped", "m", "l", "n", "matrix_kind", "code_kind",
            "d_h", "bound", "hypothesis_ok", "bound_holds", "c1", "c2", "equality",
            "rowspan_ok", "dual_ok",
        ]  # fmt: skip
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for rec in self.records:
            row = dict(rec)
            if rec.get("dual") is not None:
                d = rec["dual"]
                row["dual_ok"] = d["identity_holds"] and d["cardinality_ok"] and d["reversed_nsc"]
            w.writerow(row)
        return buf.getvalue()

    def render(self, fmt: str = "json") -> str:
        return self.to_csv() if fmt == "csv" else self.to_json()


def campaign(config: CampaignConfig) -> CampaignReport:
    indices = range(config.trials)
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            records = list(pool.map(run_trial, [config] * config.trials, indices, chunksize=16))
    else:
        records = [run_trial(config, i) for i in indices]
    rings = {}
    for name in config.rings:
        ring = parse_pir(name)
        hyp = hypothesis_check(ring)
        rings[name] = {"q": list(ring.qs), "hypothesis_ok": hyp.ok, "reason": hyp.reason}
    return CampaignReport(config.echo(), _summarise(config, records), records, rings)


def load_config(path: str) -> CampaignConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: {exc.msg} (line {exc.lineno}, column {exc.colno})") from exc
    return CampaignConfig.from_dict(data)
