"""Canonical JSON for maps, instances, certificates, and hunt reports.

parse(serialize(x)) == x for every supported value.  Canonical form sorts
keys and strips whitespace, so equal values serialize to equal bytes and
the digests below are stable across runs and machines.

Three map shapes exist: table, circuit, and derived.  A derived map does
not ship its values, it ships a named construction (a potential's kernel,
a reduction's stage predicate, or a hashed predicate) from which the
callable is rebuilt on load.  Boolean maps store raw 0/1 entries; element
valued maps store 1-based outputs.
"""

from __future__ import annotations

import hashlib
import json

from . import generators
from .circuits import CircuitIR
from .core import EvaluableMap, KernelFn, kernel_relation, table_map
from .lc_reduction import HuntConfig, HuntRecord, HuntReport, QpContext, StagePredicate
from .problems import (
    Certificate,
    ConstrainedLongChoiceInstance,
    LocalOptInstance,
    LongChoiceInstance,
    PigeonInstance,
    QuotientPigeonInstance,
)


class SerializationError(ValueError):
    pass


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(obj) -> str:
    return hashlib.sha256(canonical_dumps(obj).encode()).hexdigest()


# ============================================================
# circuits
# ============================================================


def circuit_to_json(c: CircuitIR) -> dict:
    return {
        "inputs": c.input_count,
        "gates": [[op, *operands] for op, operands in c.gates],
        "outputs": list(c.outputs),
    }


def circuit_from_json(obj) -> CircuitIR:
    try:
        gates = tuple((g[0], tuple(g[1:])) for g in obj["gates"])
        return CircuitIR(obj["inputs"], gates, tuple(obj["outputs"]))
    except (KeyError, TypeError, IndexError) as err:
        raise SerializationError(f"bad circuit object: {err}") from err


# ============================================================
# maps
# ============================================================


def _construction_of(m: EvaluableMap) -> dict:
    fn = m.fn
    if isinstance(fn, KernelFn):
        potential = table_map(1, m.in_width, fn.value_width, fn.values,
                              label="potential")
        return {"form": "kernel_of", "potential": map_to_json(potential)}
    if isinstance(fn, StagePredicate):
        return {
            "form": "stage_predicate",
            "stage": fn.stage,
            "qp": instance_to_json(fn.q.inst),
        }
    if isinstance(fn, generators.HashedPredicate):
        return {"form": "hashed_predicate", "seed": fn.seed, "stage": fn.stage}
    raise SerializationError(
        f"derived map {m.label!r} has no serializable construction"
    )


def _construction_load(obj, arity, in_width, out_width, boolean, label):
    form = obj.get("form")
    if form == "kernel_of":
        e = kernel_relation(map_from_json(obj["potential"]))
        if (e.arity, e.in_width) != (arity, in_width):
            raise SerializationError("kernel construction width mismatch")
        return EvaluableMap(arity, in_width, out_width, boolean, None, None,
                            e.fn, label)
    if form == "stage_predicate":
        inst = instance_from_json(obj["qp"])
        if not isinstance(inst, QuotientPigeonInstance):
            raise SerializationError("stage predicate wants a quotient-pigeon core")
        fn = StagePredicate(QpContext(inst), obj["stage"])
        return EvaluableMap(arity, in_width, out_width, boolean, None, None,
                            fn, label)
    if form == "hashed_predicate":
        fn = generators.HashedPredicate(obj["seed"], obj["stage"])
        return EvaluableMap(arity, in_width, out_width, boolean, None, None,
                            fn, label)
    raise SerializationError(f"unknown derived construction {form!r}")


def map_to_json(m: EvaluableMap) -> dict:
    out = {
        "backend": m.backend,
        "arity": m.arity,
        "in_width": m.in_width,
        "out_width": m.out_width,
    }
    if m.boolean:
        out["boolean"] = True
    if m.label:
        out["label"] = m.label
    if m.backend == "table":
        out["table"] = list(m.table)
        if m.circuit is not None:
            out["circuit"] = circuit_to_json(m.circuit)
    elif m.backend == "circuit":
        out.update(circuit_to_json(m.circuit))
    else:
        out["construction"] = _construction_of(m)
    return out


def map_from_json(obj) -> EvaluableMap:
    try:
        backend = obj["backend"]
        arity = obj["arity"]
        in_width = obj["in_width"]
        out_width = obj["out_width"]
    except (KeyError, TypeError) as err:
        raise SerializationError(f"bad map object: {err}") from err
    boolean = bool(obj.get("boolean", False))
    label = obj.get("label", "")
    if backend == "table":
        circuit = None
        if "circuit" in obj:
            circuit = circuit_from_json(obj["circuit"])
        return table_map(arity, in_width, out_width, obj["table"],
                         boolean=boolean, label=label, circuit=circuit)
    if backend == "circuit":
        return EvaluableMap(arity, in_width, out_width, boolean, None,
                            circuit_from_json(obj), None, label)
    if backend == "derived":
        return _construction_load(obj["construction"], arity, in_width,
                                  out_width, boolean, label)
    raise SerializationError(f"unknown map backend {backend!r}")


# ============================================================
# instances
# ============================================================


def instance_to_json(inst) -> dict:
    kind = inst.kind
    if kind == "local_opt":
        return {"kind": kind, "n": inst.n, "m": inst.m,
                "f": map_to_json(inst.f), "p": map_to_json(inst.p)}
    if kind == "pigeon":
        return {"kind": kind, "n": inst.n, "C": map_to_json(inst.C),
                "v_star": inst.v_star}
    if kind == "quotient_pigeon":
        return {"kind": kind, "n": inst.n, "C": map_to_json(inst.C),
                "E": map_to_json(inst.E), "v_star": inst.v_star}
    if kind == "long_choice":
        return {"kind": kind, "n": inst.n,
                "predicates": [map_to_json(p) for p in inst.predicates]}
    if kind == "constrained_long_choice":
        return {"kind": kind, "n": inst.n,
                "predicates": [map_to_json(p) for p in inst.predicates],
                "a0": inst.a0}
    raise SerializationError(f"unknown instance kind {kind!r}")


def instance_from_json(obj):
    try:
        kind = obj["kind"]
        n = obj["n"]
        if kind == "local_opt":
            return LocalOptInstance(n, obj["m"], map_from_json(obj["f"]),
                                    map_from_json(obj["p"]))
        if kind == "pigeon":
            return PigeonInstance(n, map_from_json(obj["C"]), obj["v_star"])
        if kind == "quotient_pigeon":
            return QuotientPigeonInstance(n, map_from_json(obj["C"]),
                                          map_from_json(obj["E"]), obj["v_star"])
        if kind == "long_choice":
            preds = tuple(map_from_json(p) for p in obj["predicates"])
            return LongChoiceInstance(n, preds)
        if kind == "constrained_long_choice":
            preds = tuple(map_from_json(p) for p in obj["predicates"])
            return ConstrainedLongChoiceInstance(n, preds, obj["a0"])
    except (KeyError, TypeError) as err:
        raise SerializationError(f"bad instance object: {err}") from err
    raise SerializationError(f"unknown instance kind {kind!r}")


def instance_digest(inst) -> str:
    return digest(instance_to_json(inst))


# ============================================================
# certificates
# ============================================================

_PAIR_KINDS = {"pigeon_collision", "qp_type1", "qp_type3", "qp_type5"}
_SINGLE_KINDS = {"local_opt", "pigeon_hit", "qp_type2", "qp_type4"}


def certificate_to_json(cert: Certificate) -> dict:
    kind = cert.kind
    if kind in _SINGLE_KINDS:
        return {"kind": kind, "x": cert.x}
    if kind in _PAIR_KINDS:
        return {"kind": kind, "x": cert.x, "y": cert.y}
    if kind == "qp_type6":
        return {"kind": kind, "x": cert.x, "y": cert.y, "z": cert.z}
    if kind == "long_choice":
        return {"kind": kind, "sequence": list(cert.witnesses)}
    raise SerializationError(f"unknown certificate kind {kind!r}")


def certificate_from_json(obj) -> Certificate:
    try:
        kind = obj["kind"]
        if kind in _SINGLE_KINDS:
            return Certificate(kind, (obj["x"],))
        if kind in _PAIR_KINDS:
            return Certificate(kind, (obj["x"], obj["y"]))
        if kind == "qp_type6":
            return Certificate(kind, (obj["x"], obj["y"], obj["z"]))
        if kind == "long_choice":
            return Certificate(kind, tuple(obj["sequence"]))
    except (KeyError, TypeError) as err:
        raise SerializationError(f"bad certificate object: {err}") from err
    raise SerializationError(f"unknown certificate kind {kind!r}")


# ============================================================
# hunt reports
# ============================================================


def hunt_record_to_json(rec: HuntRecord) -> dict:
    return {
        "seed": rec.seed,
        "n": rec.n,
        "family": rec.family,
        "sequence": list(rec.sequence),
        "outcome": rec.outcome,
        "violated_property": rec.violated_property,
        "witnesses": list(rec.witnesses),
    }


def hunt_record_from_json(obj) -> HuntRecord:
    try:
        return HuntRecord(obj["seed"], obj["n"], obj["family"],
                          tuple(obj["sequence"]), obj["outcome"],
                          obj["violated_property"], tuple(obj["witnesses"]))
    except (KeyError, TypeError) as err:
        raise SerializationError(f"bad hunt record: {err}") from err


def hunt_report_to_json(report: HuntReport) -> dict:
    cfg = report.config
    return {
        "config": {
            "families": list(cfg.families),
            "ns": list(cfg.ns),
            "seeds": cfg.seeds,
            "base_seed": cfg.base_seed,
            "sample_count": cfg.sample_count,
            "enumerate_width": cfg.enumerate_width,
        },
        "records": [hunt_record_to_json(r) for r in report.records],
        "summary": dict(report.summary),
    }


def hunt_report_from_json(obj) -> HuntReport:
    try:
        c = obj["config"]
        cfg = HuntConfig(tuple(c["families"]), tuple(c["ns"]), c["seeds"],
                         c["base_seed"], c["sample_count"], c["enumerate_width"])
        records = tuple(hunt_record_from_json(r) for r in obj["records"])
        return HuntReport(cfg, records, dict(obj["summary"]))
    except (KeyError, TypeError) as err:
        raise SerializationError(f"bad hunt report: {err}") from err


def hunt_report_lines(report: HuntReport) -> list[str]:
    """JSONL rendering: one record per line, summary footer last."""
    lines = [canonical_dumps({"record": hunt_record_to_json(r)})
             for r in report.records]
    lines.append(canonical_dumps({
        "summary": dict(report.summary),
        "config": hunt_report_to_json(report)["config"],
    }))
    return lines


# ============================================================
# generic instance files
# ============================================================


def instances_to_json(instances) -> dict:
    return {"instances": [instance_to_json(i) for i in instances]}


def load_instance(obj, index: int = 0):
    """Accepts a bare instance object, an {"instances": [...]} batch with
    an entry picked by index, or a reducer payload carrying "reduced"."""
    if isinstance(obj, dict) and "instances" in obj:
        batch = obj["instances"]
        if not 0 <= index < len(batch):
            raise SerializationError(
                f"index {index} outside batch of {len(batch)}"
            )
        return instance_from_json(batch[index])
    if isinstance(obj, dict) and "reduced" in obj and "kind" not in obj:
        return instance_from_json(obj["reduced"])
    return instance_from_json(obj)
