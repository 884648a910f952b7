"""Round-trip checks: reduce, solve the reduced instance, pull back, verify.

One report per (reduction, instance): how many reduced-instance solutions
were examined, how many pulled back to verified originals, how many came
back as pullback failures.  Sound reductions must report zero failures;
the long-choice reduction may not, and its failure counts are the whole
point of reporting them.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from . import core
from .lc_reduction import FeasibleSearch, PrefixCollisionError, QpContext, reduce_qp_to_clc
from .oracles import enumerate_solutions, sample_solutions
from .problems import (
    Certificate,
    LocalOptInstance,
    PigeonInstance,
    QuotientPigeonInstance,
    verify_solution,
)
from .reductions import (
    PullbackFailure,
    ReductionSoundnessError,
    compose_artifacts,
    defix_pipeline,
    localopt_pipeline,
    normalize_pipeline,
    recover_from_prefix_collision,
    reduce_pigeon_to_qp,
)
from .serialization import instance_digest

# Reduced instances at or below these widths get their solutions
# enumerated outright; anything wider is sampled.
EXHAUSTIVE_QP_WIDTH = 8
EXHAUSTIVE_CLC_WIDTH = 4


class UnknownReductionError(KeyError):
    pass


def _needs_defix(inst: QuotientPigeonInstance) -> bool:
    rows = core.as_relation_rows(inst.E)
    images = core.as_unary_table(inst.C)
    return any(rows[images[x - 1] - 1][x - 1] for x in range(1, (1 << inst.n) + 1))


def _build_qp_to_clc(inst: QuotientPigeonInstance):
    """Reduce to constrained long choice, de-fixing first when necessary.
    Returns (artifact, the quotient-pigeon core the sequences run against).

    An orbit collision inside the de-fixed core is translated back into a
    certificate for inst before the error is re-raised, so callers never
    see a trace from the wrong domain.
    """
    if _needs_defix(inst):
        defix = defix_pipeline(inst)
        try:
            tail = reduce_qp_to_clc(defix.reduced)
        except PrefixCollisionError as err:
            inner = recover_from_prefix_collision(defix.reduced, err.trace)
            raise PrefixCollisionError(err.trace, defix.pullback(inner)) from None
        return compose_artifacts(defix, tail, reduction_id="qp_to_clc"), defix.reduced
    artifact = reduce_qp_to_clc(inst)
    return artifact, inst


REDUCTIONS = {
    "pigeon_to_qp": (PigeonInstance, lambda i: (reduce_pigeon_to_qp(i), None)),
    "qp_defix": (QuotientPigeonInstance, lambda i: (defix_pipeline(i), None)),
    "localopt_normalize": (LocalOptInstance, lambda i: (normalize_pipeline(i), None)),
    "localopt_to_qp": (LocalOptInstance, lambda i: (localopt_pipeline(i), None)),
    "qp_to_clc": (QuotientPigeonInstance, _build_qp_to_clc),
}


@dataclass(frozen=True)
class RoundTripReport:
    reduction_id: str
    instance_digest: str
    examined: int
    successes: int
    failures: int
    mode: str  # exhaustive | sampled | none
    note: str = ""
    failure_sequences: tuple = field(default=(), compare=False)
    elapsed_s: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if self.successes + self.failures != self.examined:
            raise ValueError("report totals do not add up")

    @property
    def clean(self) -> bool:
        return self.failures == 0


def report_to_json(report: RoundTripReport) -> dict:
    return {
        "reduction": report.reduction_id,
        "instance_digest": report.instance_digest,
        "examined": report.examined,
        "successes": report.successes,
        "failures": report.failures,
        "mode": report.mode,
        "note": report.note,
        "failure_sequences": [list(s) for s in report.failure_sequences],
        "elapsed_s": report.elapsed_s,
    }


def report_from_json(obj) -> RoundTripReport:
    return RoundTripReport(
        obj["reduction"], obj["instance_digest"], obj["examined"],
        obj["successes"], obj["failures"], obj["mode"], obj.get("note", ""),
        tuple(tuple(s) for s in obj.get("failure_sequences", ())),
        obj.get("elapsed_s", 0.0),
    )


def build_reduction(reduction_id: str, inst):
    """The artifact for a registry reduction, type-checked against inst."""
    try:
        wanted, builder = REDUCTIONS[reduction_id]
    except KeyError:
        raise UnknownReductionError(reduction_id) from None
    if not isinstance(inst, wanted):
        raise ReductionSoundnessError(
            reduction_id,
            f"expected a {wanted.__name__}, got {type(inst).__name__}",
        )
    artifact, _ = builder(inst)
    return artifact


def roundtrip_test(reduction_id: str, inst, *, sample_count: int = 100,
                   rng: random.Random | None = None,
                   failure_example_cap: int = 5) -> RoundTripReport:
    """Reduce, collect reduced-instance solutions, pull each back, verify.

    Solutions come from the enumerator below the exhaustive width cutoffs
    and from rejection/descent sampling above them.  A pullback that
    raises ReductionSoundnessError propagates (that is a bug, not a
    result); a PullbackFailure is counted and exemplified.
    """
    try:
        wanted, builder = REDUCTIONS[reduction_id]
    except KeyError:
        raise UnknownReductionError(reduction_id) from None
    if not isinstance(inst, wanted):
        raise ReductionSoundnessError(
            reduction_id,
            f"expected a {wanted.__name__}, got {type(inst).__name__}",
        )
    rng = rng if rng is not None else random.Random(0)
    start = time.perf_counter()
    dig = instance_digest(inst)

    try:
        artifact, qp_core = builder(inst)
    except PrefixCollisionError as err:
        cert = err.certificate or recover_from_prefix_collision(inst, err.trace)
        verdict = verify_solution(inst, cert)
        if not verdict:
            raise ReductionSoundnessError(
                reduction_id, f"collision recovery rejected: {verdict.code}",
                certificate=cert, verdict=verdict)
        note = f"prefix collision recovered a {cert.kind} certificate"
        return RoundTripReport(reduction_id, dig, 1, 1, 0, "none", note,
                               elapsed_s=time.perf_counter() - start)

    reduced = artifact.reduced
    if reduced.kind == "constrained_long_choice":
        search = FeasibleSearch(qp_core, ctx=QpContext(qp_core))
        if reduced.n <= EXHAUSTIVE_CLC_WIDTH:
            sequences = list(search.enumerate())
            mode = "exhaustive"
        else:
            sequences = search.sample(sample_count, rng)
            mode = "sampled"
        certs = [Certificate.long_choice(s) for s in sequences]
    else:
        if reduced.n <= EXHAUSTIVE_QP_WIDTH:
            certs = enumerate_solutions(reduced)
            mode = "exhaustive"
        else:
            certs = sample_solutions(reduced, sample_count, rng)
            mode = "sampled"

    successes = failures = 0
    failure_sequences = []
    for cert in certs:
        back = artifact.pullback(cert)
        if isinstance(back, PullbackFailure):
            failures += 1
            if len(failure_sequences) < failure_example_cap:
                failure_sequences.append(back.sequence)
            continue
        verdict = verify_solution(artifact.original, back)
        if not verdict:
            raise ReductionSoundnessError(reduction_id,
                                          f"pullback rejected: {verdict.code}",
                                          certificate=back, verdict=verdict)
        successes += 1

    return RoundTripReport(
        reduction_id, dig, len(certs), successes, failures, mode,
        failure_sequences=tuple(failure_sequences),
        elapsed_s=time.perf_counter() - start,
    )
