"""Command execution, report documents and the discrepancy scanner."""

from __future__ import annotations

import json
import time
from typing import Any, Callable

from . import __version__
from . import structures as st
from .configuration import ConfigurationSet, assemble, cells, enumerate_configurations
from .errors import AuditFailure, SchemaError, SymbolicCarrier
from .folner import InvariantSetQuery, replicate_sets, search_invariant_set, solution_from_invariant_set
from .generate import SplitMix64, random_finite_instance
from .instances import AnalysisRequest, Instance, _thaw, instance_to_json, serialize_request
from .linsolve import (
    Certificate,
    FarkasDual,
    certificate_from_json,
    certificate_to_json,
    decide,
    rank,
    verify,
)
from .paradox import (
    decomposition_from_json,
    decomposition_to_json,
    induced_pair,
    tarski_number,
    verify_decomposition,
)


class _Audit:
    """Certificates embedded in a report; re-verified before the report is released."""

    def __init__(self):
        self.items: list[tuple[Any, Certificate, bool]] = []

    def add(self, system, cert: Certificate, expect: bool = True) -> dict:
        self.items.append((system, cert, expect))
        return certificate_to_json(cert)

    def run(self) -> int:
        for system, cert, expect in self.items:
            if verify(system, cert) != expect:
                raise AuditFailure(f"embedded {type(cert).__name__} failed re-verification")
        return len(self.items)


def conset_to_json(s: st.Structure, conset: ConfigurationSet) -> dict:
    return {
        "exactness": conset.exactness.value,
        "radius": conset.radius,
        "patience": conset.patience,
        "tuples": [list(t) for t in conset.tuples],
        "witnesses": [st.element_to_json(s, c.witness) for c in conset.configurations],
    }


def _system_json(system) -> dict:
    return {
        "rows": system.shape[0],
        "columns": system.shape[1],
        "row_labels": [list(r) for r in system.row_labels],
        "triplets": [list(t) for t in system.triplets()],
        "rank": rank(system),
    }


def _solve(inst: Instance, req: AnalysisRequest, audit: _Audit, label: str = "instance") -> dict:
    pair = inst.pair()
    conset = enumerate_configurations(pair, req.options.policy())
    system = assemble(conset, pair.n, pair.m)
    v = decide(system)
    out = {
        "configurations": conset_to_json(inst.structure, conset),
        "system": _system_json(system),
        "verdicts": {"nonzero": v.has_nonzero, "normalized": v.has_normalized},
        "certificates": {"nonzero": audit.add(system, v.nonzero), "normalized": audit.add(system, v.normalized)},
        "findings": [],
    }
    if v.divergent:
        out["findings"].append({
            "kind": "nonzero_without_normalized",
            "where": label,
            "detail": "the homogeneous system has a non-zero solution but no non-negative normalized one",
            "exactness": conset.exactness.value,
        })
    return out


def _con(req, audit) -> dict:
    inst = req.instance
    pair = inst.pair()
    conset = enumerate_configurations(pair, req.options.policy())
    s = inst.structure
    return {
        "configurations": conset_to_json(s, conset),
        "cells": [
            {
                "config": list(c.config),
                "members": [st.element_to_json(s, x) for x in c.members],
                "size": len(c.members),
                "scope": "exact" if s.is_finite else f"window({conset.radius})",
            }
            for c in cells(pair, conset)
        ],
    }


def _paradox(req, audit) -> dict:
    inst = req.instance
    s = inst.structure
    family = list(inst.decomposition_family())
    supplied = req.extra("decomposition")
    out: dict = {}
    if supplied is not None:
        dec = decomposition_from_json(s, _thaw(supplied), inst.partition)
        w = st.window(s, req.options.radius if not s.is_finite else 0)
        rep = verify_decomposition(s, dec, w, family)
        out["supplied"] = {
            "decomposition": decomposition_to_json(s, dec),
            "valid": rep.valid,
            "scope": rep.scope,
            "overlap_only": rep.overlap_only,
            "failures": rep.failures,
        }
        if not s.is_finite:
            return out
    if not s.is_finite:
        raise SymbolicCarrier("paradox search needs a finite carrier; supply a decomposition to verify")
    result = tarski_number(s, family, req.options.cap)
    out["tarski"] = {"value": result.value if result.value is not None else {"above_cap": result.cap}}
    if result.witness is not None:
        dec = result.witness
        rep = verify_decomposition(s, dec, family=family)
        pair = induced_pair(s, dec)
        conset = enumerate_configurations(pair)
        system = assemble(conset, pair.n, pair.m)
        v = decide(system)
        out["decomposition"] = decomposition_to_json(s, dec)
        out["verification"] = {"valid": rep.valid, "scope": rep.scope, "failures": rep.failures}
        out["cross_check"] = {
            "normalized": v.has_normalized,
            "certificate": audit.add(system, v.normalized),
        }
        if not rep.valid:
            raise AuditFailure("search returned a decomposition that fails verification")
    return out


def _folner(req, audit) -> dict:
    inst = req.instance
    s = inst.structure
    w = st.window(s, req.options.radius)
    qdoc = req.extra("query")
    if qdoc is not None:
        qdoc = _thaw(qdoc)
        maps = [st.build_map(s, d) for d in qdoc["maps"]]
        sets = [st.build_region(s, d, inst.partition) for d in qdoc["sets"]]
        query = InvariantSetQuery(tuple(maps), tuple(sets), w, req.options.size_cap)
    else:
        query = replicate_sets(inst.maps, inst.partition, w, req.options.size_cap)
    witness = search_invariant_set(s, query)
    scope = "exact" if s.is_finite else f"window({w.radius})"
    out: dict = {"query_length": len(query.maps), "size_cap": query.size_cap, "scope": scope}
    if witness is None:
        out["witness"] = None
        return out
    out["witness"] = {
        "X": [st.element_to_json(s, x) for x in witness.X],
        "counts": [list(c) for c in witness.counts],
    }
    if qdoc is None:
        pair = inst.pair()
        conset = enumerate_configurations(pair, req.options.policy())
        system = assemble(conset, pair.n, pair.m)
        cert = solution_from_invariant_set(witness, pair, conset)
        out["solution"] = audit.add(system, cert)
    return out


def _verify(req, audit) -> dict:
    inst = req.instance
    out: dict = {}
    cdoc = req.extra("certificate")
    if cdoc is not None:
        pair = inst.pair()
        conset = enumerate_configurations(pair, req.options.policy())
        system = assemble(conset, pair.n, pair.m)
        try:
            cert = certificate_from_json(_thaw(cdoc))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed certificate ({exc})", "$.certificate") from None
        ok = verify(system, cert)
        audit.add(system, cert, expect=ok)
        out["certificate"] = {"kind": certificate_to_json(cert)["kind"], "valid": ok}
    ddoc = req.extra("decomposition")
    if ddoc is not None:
        s = inst.structure
        dec = decomposition_from_json(s, _thaw(ddoc), inst.partition)
        w = st.window(s, req.options.radius)
        rep = verify_decomposition(s, dec, w, list(inst.decomposition_family()))
        out["decomposition"] = {
            "valid": rep.valid,
            "scope": rep.scope,
            "overlap_only": rep.overlap_only,
            "failures": rep.failures,
        }
    return out


def scan(seed: int, count: int, audit: _Audit | None = None) -> dict:
    """Compare the two verdicts on ``count`` seeded random finite instances."""
    audit = audit or _Audit()
    rng = SplitMix64(seed)
    findings = []
    tallies = {"both": 0, "neither": 0, "nonzero_only": 0}
    for index in range(count):
        inst = random_finite_instance(rng)
        pair = inst.pair()
        conset = enumerate_configurations(pair)
        system = assemble(conset, pair.n, pair.m)
        v = decide(system)
        if v.has_normalized:
            tallies["both"] += 1
        elif v.has_nonzero:
            tallies["nonzero_only"] += 1
        else:
            tallies["neither"] += 1
        if v.divergent:
            assert isinstance(v.normalized, FarkasDual)
            findings.append({
                "index": index,
                "instance": instance_to_json(inst),
                "configurations": [list(t) for t in conset.tuples],
                "nonzero": audit.add(system, v.nonzero),
                "farkas": audit.add(system, v.normalized),
            })
    return {"seed": seed, "count": count, "tallies": tallies, "findings": findings}


def _scan(req, audit) -> dict:
    return scan(req.options.seed, req.options.count, audit)


_HANDLERS: dict[str, Callable] = {
    "con": _con,
    "solve": lambda req, audit: _solve(req.instance, req, audit),
    "paradox": _paradox,
    "folner": _folner,
    "verify": _verify,
    "scan": _scan,
}


def execute(req: AnalysisRequest) -> dict:
    """Run a request and return its report; raises :class:`AuditFailure` if a certificate fails."""
    start = time.perf_counter()
    audit = _Audit()
    result = _HANDLERS[req.command](req, audit)
    checked = audit.run()
    return {
        "tool": {"name": "amen", "version": __version__},
        "request": serialize_request(req),
        "result": result,
        "audit": {"certificates_checked": checked, "passed": True},
        "timing": {"seconds": round(time.perf_counter() - start, 6)},
    }


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def without_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timing"}
