"""Scan a bounded corpus of trinomials and persist one row per trinomial."""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import SCHEMA
from .corpus import corpus_size, enumerate_specs, sort_key
from .derivation import enumerate_elementary_families, verify_family
from .grading import compute_grading
from .trinomial import (
    TrinomialSpec,
    existence_criterion,
    has_linear_term,
    is_factorial,
    monomial_gcds,
    rigidity_criterion,
    theorem_hypothesis,
)

DEFAULT_CAP = 200_000


class CapExceededError(ValueError):
    pass


@dataclass(frozen=True)
class ScanRequest:
    max_n_i: int
    max_l: int
    out: str
    dedupe: bool = False
    parallelism: int = 1
    verify: bool = True

    def __post_init__(self):
        if self.max_n_i < 1 or self.max_l < 1:
            raise ValueError("bounds must be >= 1")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")


def scan_row(s: TrinomialSpec, verify: bool = True) -> dict:
    g = compute_grading(s)
    fams = enumerate_elementary_families(s)
    linear = has_linear_term(s)
    row = {
        "spec": s.structured(),
        "n": list(s.sizes),
        "free_rank": g.group.free_rank,
        "torsion": list(g.group.torsion_orders),
        "d": list(monomial_gcds(s)),
        "factorial": None if linear else is_factorial(s),
        "has_linear_term": linear,
        "rigid_criterion": rigidity_criterion(s),
        "existence_criterion": existence_criterion(s),
        "theorem_hypothesis": theorem_hypothesis(s),
        "families_I": sum(1 for f in fams if f.type == "I"),
        "families_II": sum(1 for f in fams if f.type == "II"),
    }
    if verify:
        failures, indices = [], []
        for fam in fams:
            v = verify_family(s, fam, g)
            if not v.ok:
                failures.append(fam.label())
            if v.nilpotency.is_nilpotent:
                indices.append(v.nilpotency.max_index)
        row["verified"] = len(fams) - len(failures)
        row["verification_failures"] = failures
        row["max_nilpotency_index"] = max(indices, default=None)
    return row


def row_consistency(row: dict) -> dict[str, bool]:
    has_fams = row["families_I"] + row["families_II"] > 0
    out = {
        "existence_iff_families": row["existence_criterion"] == has_fams,
        "hypothesis_implies_type_ii": not row["theorem_hypothesis"] or row["families_I"] == 0,
    }
    if row["factorial"] is not None:
        out["factorial_iff_torsion_free"] = row["factorial"] == (not row["torsion"])
    return out


def _row_worker(args):
    return scan_row(*args)


def scan_rows(specs, verify: bool = True, parallelism: int = 1) -> list[dict]:
    specs = sorted(specs, key=sort_key)
    work = [(s, verify) for s in specs]
    if parallelism == 1:
        rows = [_row_worker(w) for w in work]
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            rows = list(pool.map(_row_worker, work, chunksize=max(1, len(work) // (4 * parallelism))))
    return rows


def render_rows(rows: list[dict], path: str) -> str:
    if path.endswith(".csv"):
        buf = io.StringIO()
        fields = list(rows[0]) if rows else ["spec"]
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in row.items()})
        return buf.getvalue()
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in rows)


def scan(req: ScanRequest) -> dict:
    """Run the scan, write rows to ``req.out`` and return a summary.

    Rows are sorted before writing, so output does not depend on the
    number of workers.
    """
    cap = int(os.environ.get("TRIDERIV_CAP", DEFAULT_CAP))
    size = corpus_size(req.max_n_i, req.max_l, req.dedupe)
    if size > cap:
        raise CapExceededError(f"corpus has {size} trinomials, above the cap of {cap} (TRIDERIV_CAP)")
    rows = scan_rows(enumerate_specs(req.max_n_i, req.max_l, req.dedupe), req.verify, req.parallelism)
    with open(req.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(render_rows(rows, req.out))
    counterexamples: dict[str, list[str]] = {}
    for row in rows:
        for name, ok in row_consistency(row).items():
            counterexamples.setdefault(name, [])
            if not ok:
                counterexamples[name].append(row["spec"])
    failures = [(r["spec"], f) for r in rows for f in r.get("verification_failures", [])]
    return {
        "schema": SCHEMA,
        "count": len(rows),
        "bounds": {"max_n_i": req.max_n_i, "max_l": req.max_l, "dedupe": req.dedupe},
        "families": sum(r["families_I"] + r["families_II"] for r in rows),
        "counterexamples": counterexamples,
        "verification_failures": [f"{s}: {f}" for s, f in failures],
        "ok": not failures and not any(counterexamples.values()),
        "out": req.out,
    }
