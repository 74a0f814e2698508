"""Coefficient-box scans: classifier verdicts against the discriminator oracle.

Each cell of the box is an independent work item.  Results are merged in
sorted cell order, so output does not depend on the number of workers.  A
scan can be resumed from an append-only cache file whose records are keyed
by a hash of the scan configuration and protected by a per-record CRC.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional

from .arith import prime_power_ceiling
from .core import (
    Counterexample,
    CounterexampleKind,
    QuadSeq,
    failure_witness,
    first_divergence,
)
from .errors import DuplicateTerm
from .primes import is_prime, split_qp
from .report import counterexample_line
from .witness import (
    Verdict,
    classify_p2_half,
    classify_p2_integer,
    necessary_p3,
    sufficient_p3,
)

log = logging.getLogger(__name__)

# family -> (axis names, what a CHARACTERIZED/holding verdict claims)
FAMILIES = {
    "p2-integer": ("alpha", "beta"),
    "p2-half": ("a_odd", "b_odd"),
    "p3-sufficient": ("b", "c"),
    "p3-necessary": ("alpha", "beta"),
    "prime": ("alpha", "beta"),
    "conjecture": ("b", "c"),
}


@dataclass(frozen=True)
class ScanConfig:
    family: str
    p: int
    x_lo: int
    x_hi: int
    y_lo: int
    y_hi: int
    horizon: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if self.x_lo > self.x_hi or self.y_lo > self.y_hi:
            raise ValueError("empty coefficient box")
        if self.family == "prime" and (self.p < 5 or not is_prime(self.p)):
            raise ValueError("family 'prime' needs a prime p >= 5")

    def key(self):
        blob = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def cells(self):
        return [(x, y) for x in range(self.x_lo, self.x_hi + 1)
                for y in range(self.y_lo, self.y_hi + 1)]

    def describe(self):
        xa, ya = FAMILIES[self.family]
        return (f"{self.family} p={self.p} {xa} in [{self.x_lo}, {self.x_hi}], "
                f"{ya} in [{self.y_lo}, {self.y_hi}], n <= {self.horizon}")


def _skip(reason):
    return {"status": "skipped", "reason": reason}


def _prime_obstruction(p, alpha, beta):
    if alpha % p:
        return "p-does-not-divide-alpha"
    if beta % p == 0:
        return "p-divides-alpha-and-beta"
    if split_qp(alpha, beta, p) is None:
        return "c-does-not-divide-beta"
    return "digit-prime"


def _cell_setup(cfg, x, y):
    """Return (sequence, verdict text, expectation) or a skip record.

    expectation is "match" (D must equal p^ceil(log_p n) up to the horizon),
    "diverge" (some n <= horizon must differ) or None (no claim).
    """
    fam = cfg.family
    if fam in ("p2-integer", "p3-necessary", "prime"):
        if x == 0:
            return _skip("alpha = 0")
        q = QuadSeq.from_coeffs(x, y)
        if fam == "p2-integer":
            cls = classify_p2_integer(x, y)
            return q, str(cls), "match" if cls.verdict is Verdict.CHARACTERIZED else "diverge"
        if fam == "p3-necessary":
            cls = necessary_p3(x, y)
            return q, str(cls), "diverge" if cls.verdict is Verdict.VIOLATES else None
        return q, f"Violates({_prime_obstruction(cfg.p, x, y)})", "diverge"
    if fam == "p2-half":
        if x % 2 == 0 or y % 2 == 0:
            return _skip("coefficients must both be odd")
        if x == -y:
            return _skip("degenerate: q(0) == q(1)")
        cls = classify_p2_half(x, y)
        return QuadSeq(x, y), str(cls), "match" if cls.verdict is Verdict.CHARACTERIZED else "diverge"
    if x == 0 or y == 0:
        return _skip("b and c must be nonzero")
    if fam == "p3-sufficient":
        cls = sufficient_p3(x, y)
        expect = "match" if cls.verdict is Verdict.CHARACTERIZED else None
        return QuadSeq.from_coeffs(3 * y, x * y), str(cls), expect
    # conjecture: (3c/2) n^2 + (bc/2) n with b, c odd and 3 not dividing bc
    if x % 2 == 0 or y % 2 == 0:
        return _skip("b and c must both be odd")
    if (x * y) % 3 == 0:
        return _skip("3 divides bc")
    return QuadSeq(3 * y, x * y), "Conjectured(diverges)", None


def divergence_evidence(q, p, n, d):
    """Counterexample for D(n) = d != p^ceil(log_p n)."""
    target = prime_power_ceiling(p, n)
    if d < target:
        cx = Counterexample(q, p, n, CounterexampleKind.SMALLER_DISCRIMINATOR_EXISTS, r=d)
    else:
        w = failure_witness(q, n, target)
        cx = Counterexample(q, p, n, CounterexampleKind.COLLISION_AT_PRIME_POWER, witness=w)
    assert cx.holds(), cx
    return cx


def evaluate_cell(cfg: ScanConfig, x: int, y: int) -> dict:
    base = {"x": x, "y": y}
    setup = _cell_setup(cfg, x, y)
    if isinstance(setup, dict):
        return {**base, **setup}
    q, verdict, expect = setup
    p = cfg.p
    try:
        hit = first_divergence(q, p, cfg.horizon)
    except DuplicateTerm as exc:
        return {**base, **_skip(f"duplicate terms q({exc.i}) == q({exc.j})"), "seq": str(q),
                "classifier": verdict}
    record = {**base, "status": "ok", "seq": str(q), "classifier": verdict, "expect": expect,
              "oracle": "match" if hit is None else "diverge",
              "first_divergence": None, "d": None, "witness": None}
    if hit is not None:
        n, d = hit
        record.update(first_divergence=n, d=d,
                      witness=counterexample_line(divergence_evidence(q, p, n, d)))
    record["agree"] = expect is None or expect == record["oracle"]
    return record


def _evaluate_star(args):
    return evaluate_cell(*args)


# --------------------------------------------------------------- cache


def _crc(payload: str) -> str:
    return f"{zlib.crc32(payload.encode()):08x}"


class ScanCache:
    """Append-only ``key<TAB>cell<TAB>json<TAB>crc`` records."""

    def __init__(self, path):
        self.path = path

    def load(self, key) -> dict:
        if not self.path or not os.path.exists(self.path):
            return {}
        found = {}
        good_end = 0
        with open(self.path, "rb") as fh:
            data = fh.read()
        for raw in data.splitlines(keepends=True):
            try:
                line = raw.decode()
                if not line.endswith("\n"):
                    raise ValueError("unterminated record")
                rkey, cell, payload, crc = line.rstrip("\n").split("\t")
                if _crc(f"{rkey}\t{cell}\t{payload}") != crc:
                    raise ValueError("checksum mismatch")
                record = json.loads(payload)
            except ValueError as exc:
                log.warning("cache %s: corrupt record at byte %d (%s); truncating",
                            self.path, good_end, exc)
                with open(self.path, "r+b") as fh:
                    fh.truncate(good_end)
                break
            good_end += len(raw)
            if rkey == key:
                found[cell] = record
        return found

    def append(self, key, record):
        if not self.path:
            return
        cell = f"{record['x']},{record['y']}"
        payload = json.dumps(record, sort_keys=True, separators=(",", ":"))
        body = f"{key}\t{cell}\t{payload}"
        with open(self.path, "a") as fh:
            fh.write(f"{body}\t{_crc(body)}\n")


# -------------------------------------------------------------- report


@dataclass
class ScanReport:
    config: ScanConfig
    results: list
    findings: list
    summary: dict

    def to_dict(self):
        return {"config": {**asdict(self.config), "description": self.config.describe()},
                "results": self.results, "findings": self.findings, "summary": self.summary}


def _findings(cfg, results):
    out = []
    for r in results:
        if r["status"] != "ok" or r["agree"]:
            continue
        reproduce = f"disclab compute --seq '{r['seq']}' --n {cfg.horizon} --against {cfg.p}"
        if r["expect"] == "diverge":
            kind = "exceeds-horizon" if cfg.family in ("prime", "p3-necessary") else "classifier-oracle-mismatch"
            detail = f"classifier says {r['classifier']} but D(n) = {cfg.p}^ceil(log n) for all n <= {cfg.horizon}"
        else:
            kind = "classifier-oracle-mismatch"
            detail = (f"classifier says {r['classifier']} but D({r['first_divergence']}) = {r['d']}")
        out.append({"cell": [r["x"], r["y"]], "kind": kind, "detail": detail,
                    "witness": r["witness"], "reproduce": reproduce})
    return out


def summarize(results):
    ok = [r for r in results if r["status"] == "ok"]
    return {
        "cells": len(results),
        "evaluated": len(ok),
        "skipped": len(results) - len(ok),
        "agree": sum(r["agree"] for r in ok),
        "disagree": sum(not r["agree"] for r in ok),
        "diverged": sum(r["oracle"] == "diverge" for r in ok),
        "matched": sum(r["oracle"] == "match" for r in ok),
    }


def run_scan(cfg: ScanConfig, jobs: int = 1, cache_path: Optional[str] = None) -> ScanReport:
    cache = ScanCache(cache_path)
    key = cfg.key()
    done = cache.load(key)
    cells = cfg.cells()
    todo = [c for c in cells if f"{c[0]},{c[1]}" not in done]
    if done:
        log.info("resuming: %d of %d cells cached", len(cells) - len(todo), len(cells))
    if todo:
        work = [(cfg, x, y) for x, y in todo]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                stream = pool.map(_evaluate_star, work, chunksize=max(1, len(work) // (8 * jobs)))
                for record in stream:
                    cache.append(key, record)
                    done[f"{record['x']},{record['y']}"] = record
        else:
            for args in work:
                record = _evaluate_star(args)
                cache.append(key, record)
                done[f"{record['x']},{record['y']}"] = record
    results = [done[f"{x},{y}"] for x, y in cells]
    return ScanReport(cfg, results, _findings(cfg, results), summarize(results))


CSV_FIELDS = ("x", "y", "status", "reason", "seq", "classifier", "expect", "oracle",
              "first_divergence", "d", "agree", "witness")
