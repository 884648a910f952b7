"""The property suite: every headline guarantee, run at configurable scale.

Each criterion is a self-contained runner that generates its own seeded
instances, exercises one guarantee, and reports pass/fail with counts.
The long-choice reduction criterion passes on clean execution and report
integrity, not on the absence of pullback failures; those failures are
findings, and the hunt exists to surface them.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from . import core, generators, lc_reduction
from .core import MAX_WIDTH, table_map
from .game import adversary_search, conservation_holds, playout
from .generators import derive_seed, rng_for
from .lc_reduction import (
    FeasibleSearch,
    HuntConfig,
    PrefixCollisionError,
    QpContext,
    build_split_system,
    hunt_counterexamples,
    probe_set_invariants,
    reduce_qp_to_clc,
    replay_record,
    rewrite_sequence,
)
from .oracles import (
    enumerate_solutions,
    solve_long_choice_majority,
    solve_qp_walk,
)
from .problems import Certificate, LongChoiceInstance, verify_solution
from .reductions import (
    PullbackFailure,
    defix_pipeline,
    normalize_pipeline,
    recover_from_prefix_collision,
    unit_step_law_holds,
)
from .roundtrip import roundtrip_test
from .serialization import hunt_report_from_json, hunt_report_to_json

FAMILIES = ("equality", "kernel", "random")


class SuiteConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SuiteConfig:
    """Which criteria to run and at what fraction of full scale.

    overrides maps a criterion id to {"count": int, "ns": [widths]};
    anything not overridden uses the criterion's defaults times scale.
    """

    criteria: tuple[str, ...] | None = None
    scale: float = 1.0
    overrides: dict = field(default_factory=dict)
    base_seed: int = 2026

    def __post_init__(self):
        if not isinstance(self.scale, (int, float)) or self.scale <= 0:
            raise SuiteConfigError(f"scale must be a positive number, "
                                   f"got {self.scale!r}")
        for cid, entry in self.overrides.items():
            if cid not in CRITERIA:
                raise SuiteConfigError(f"unknown criterion {cid!r}")
            for n in entry.get("ns", ()):
                if not 2 <= n <= MAX_WIDTH:
                    raise SuiteConfigError(f"width {n} outside [2, {MAX_WIDTH}]")
            if entry.get("count", 1) < 1:
                raise SuiteConfigError("count overrides must be positive")
        if self.criteria is not None:
            for cid in self.criteria:
                if cid not in CRITERIA:
                    raise SuiteConfigError(f"unknown criterion {cid!r}")


def load_config(obj) -> SuiteConfig:
    if not isinstance(obj, dict):
        raise SuiteConfigError("config must be a JSON object")
    known = {"criteria", "scale", "overrides", "base_seed"}
    unknown = set(obj) - known
    if unknown:
        raise SuiteConfigError(f"unknown config keys {sorted(unknown)}")
    criteria = obj.get("criteria")
    return SuiteConfig(
        tuple(criteria) if criteria is not None else None,
        obj.get("scale", 1.0),
        {k: dict(v) for k, v in obj.get("overrides", {}).items()},
        obj.get("base_seed", 2026),
    )


@dataclass(frozen=True)
class CriterionResult:
    criterion_id: str
    passed: bool
    detail: str
    counts: dict = field(default_factory=dict, compare=False)
    elapsed_s: float = field(default=0.0, compare=False)


@dataclass(frozen=True)
class SuiteReport:
    results: tuple[CriterionResult, ...]
    passed: bool
    elapsed_s: float = field(default=0.0, compare=False)


def suite_report_to_json(report: SuiteReport) -> dict:
    return {
        "passed": report.passed,
        "elapsed_s": report.elapsed_s,
        "results": [
            {
                "criterion": r.criterion_id,
                "passed": r.passed,
                "detail": r.detail,
                "counts": dict(r.counts),
                "elapsed_s": r.elapsed_s,
            }
            for r in report.results
        ],
    }


# ============================================================
# criterion runners; each returns (passed, detail, counts)
# ============================================================


def _run_qp_walk_totality(count, ns, seed):
    walks = 0
    for n in ns:
        size = 1 << n
        for i in range(count):
            family = FAMILIES[i % len(FAMILIES)]
            inst = generators.qp_instance(family, n, derive_seed(seed, n, i))
            cert, trace = solve_qp_walk(inst)
            if len(trace.elements) > size + 1:
                return False, f"walk exceeded {size} steps at n={n} seed index {i}", {}
            verdict = verify_solution(inst, cert)
            if not verdict:
                return False, (
                    f"walk certificate rejected ({verdict.code}) at n={n} index {i}"
                ), {}
            walks += 1
    return True, f"{walks} walks terminated in bound with verified certificates", {
        "walks": walks
    }


def _run_defix_no_fixed_class(count, ns, seed):
    scanned = 0
    for n in ns:
        for i in range(count):
            family = FAMILIES[i % len(FAMILIES)]
            inst = generators.qp_instance(family, n, derive_seed(seed, n, i))
            defixed = defix_pipeline(inst).reduced
            rows = core.as_relation_rows(defixed.E)
            images = core.as_unary_table(defixed.C)
            for x in range(1, (1 << defixed.n) + 1):
                if rows[images[x - 1] - 1][x - 1]:
                    return False, (
                        f"point {x} still relates to its own image at n={n} index {i}"
                    ), {}
            scanned += 1
    return True, f"{scanned} de-fixed instances scanned clean", {"instances": scanned}


def _run_localopt_normalization(count, ns, seed):
    checked = 0
    for n in ns:
        for m in ns:
            for i in range(count):
                inst = generators.localopt_instance(n, m, derive_seed(seed, n, m, i))
                norm = normalize_pipeline(inst).reduced
                if not unit_step_law_holds(norm):
                    return False, (
                        f"normalized instance breaks the unit-step law at "
                        f"n={n} m={m} index {i}"
                    ), {}
                checked += 1
    return True, (
        f"{checked} normalized instances: start potential 1, exact unit steps"
    ), {"instances": checked}


def _run_pls_pipeline_roundtrip(count, ns, seed):
    examined = 0
    for n in ns:
        for i in range(count):
            inst = generators.localopt_instance(n, n, derive_seed(seed, n, i))
            report = roundtrip_test(
                "localopt_to_qp", inst, sample_count=100,
                rng=rng_for(seed, "sample", n, i),
            )
            if report.failures:
                return False, (
                    f"{report.failures} pullback failures at n={n} index {i}"
                ), {}
            examined += report.examined
    return True, f"{examined} reduced solutions all pulled back verified", {
        "solutions": examined
    }


def _run_pigeon_to_qp_roundtrip(count, ns, seed):
    examined = 0
    for n in ns:
        for i in range(count):
            inst = generators.pigeon_instance(n, derive_seed(seed, n, i))
            report = roundtrip_test("pigeon_to_qp", inst)
            if report.failures:
                return False, (
                    f"{report.failures} pullback failures at n={n} index {i}"
                ), {}
            examined += report.examined
    return True, f"{examined} reduced solutions all pulled back verified", {
        "solutions": examined
    }


def _run_long_choice_majority(count, ns, seed):
    solved = 0
    for n in ns:
        for i in range(count):
            item = derive_seed(seed, n, i)
            if i % 4 == 3:
                inst = generators.constrained_long_choice_instance(n, item)
            else:
                inst = generators.long_choice_instance(n, item)
            cert = solve_long_choice_majority(inst)
            verdict = verify_solution(inst, cert)
            if not verdict:
                return False, (
                    f"majority sequence rejected ({verdict.code}) at n={n} index {i}"
                ), {}
            solved += 1
    exhausted = 0
    if 2 in ns:
        for bits in range(1 << 16):
            tab = [(bits >> j) & 1 for j in range(16)]
            inst = LongChoiceInstance(
                2, (table_map(2, 2, 1, tab, boolean=True, label="enumerated"),)
            )
            cert = solve_long_choice_majority(inst)
            if not verify_solution(inst, cert):
                return False, f"majority failed on predicate table {bits}", {}
            exhausted += 1
    return True, (
        f"{solved} random instances solved; {exhausted} exhaustive width-2 "
        f"predicate tables solved"
    ), {"random": solved, "exhaustive": exhausted}


def _run_clc_equality_sound_case(count, ns, seed):
    sequences = 0
    collisions = 0
    for n in ns:
        for i in range(count):
            base = generators.qp_instance("equality", n, derive_seed(seed, n, i))
            defixed = defix_pipeline(base).reduced
            try:
                artifact = reduce_qp_to_clc(defixed)
            except PrefixCollisionError as err:
                cert = recover_from_prefix_collision(defixed, err.trace)
                if not verify_solution(defixed, cert):
                    return False, f"collision recovery rejected at n={n} index {i}", {}
                collisions += 1
                continue
            q = QpContext(defixed)
            search = FeasibleSearch(defixed, ctx=q)
            for seq in search.enumerate():
                out = artifact.pullback(Certificate.long_choice(seq))
                if isinstance(out, PullbackFailure):
                    return False, f"FAILURE on sequence {seq} at n={n} index {i}", {}
                if not verify_solution(defixed, out):
                    return False, f"pullback rejected on {seq} at n={n} index {i}", {}
                trace = rewrite_sequence(seq, defixed, ctx=q)
                system = build_split_system(trace.outputs, defixed, ctx=q)
                probe = probe_set_invariants(trace, system, defixed, ctx=q)
                if not probe.all_ok:
                    return False, (
                        f"set property {probe.violated()} broke on {seq} "
                        f"at n={n} index {i}"
                    ), {}
                sequences += 1
    return True, (
        f"{sequences} feasible sequences pulled back with both set properties "
        f"holding; {collisions} instances short-circuited by orbit collisions"
    ), {"sequences": sequences, "collisions": collisions}


def _run_clc_gap_hunt(count, ns, seed):
    config = HuntConfig(
        families=("kernel", "random"), ns=tuple(ns), seeds=count,
        base_seed=seed, sample_count=100, enumerate_width=4,
    )
    report = hunt_counterexamples(config)
    counts = dict(report.summary)
    recount = {"recovered": 0, "failure": 0, "prefix_collision": 0, "no_sequences": 0}
    for rec in report.records:
        recount[rec.outcome] += 1
        if rec.outcome == "failure" and not rec.violated_property:
            return False, f"failure record without diagnosis: {rec}", counts
        if rec.outcome == "recovered" and not rec.witnesses:
            return False, f"recovered record without witnesses: {rec}", counts
    for key, value in recount.items():
        if counts.get(key) != value:
            return False, f"summary miscounts {key}: {counts.get(key)} != {value}", counts
    if hunt_report_from_json(hunt_report_to_json(report)) != report:
        return False, "hunt report does not survive serialization", counts
    spot = [r for r in report.records if r.outcome == "failure"][:3]
    spot += [r for r in report.records if r.outcome == "recovered"][:3]
    for rec in spot:
        if replay_record(rec, config) != rec.outcome:
            return False, f"record does not replay: {rec}", counts
    return True, (
        f"hunt complete: {counts.get('recovered', 0)} recovered, "
        f"{counts.get('failure', 0)} failures, "
        f"{counts.get('prefix_collision', 0)} orbit collisions; report replays"
    ), counts


def _run_rewrite_audit(count, ns, seed):
    before = lc_reduction.AUDIT["traces"]
    collisions = 0
    for n in ns:
        for i in range(count):
            family = FAMILIES[i % len(FAMILIES)]
            inst = generators.qp_instance(family, n, derive_seed(seed, n, i))
            defixed = defix_pipeline(inst).reduced
            size = 1 << defixed.n
            rng = rng_for(seed, "seq", n, i)
            length = min(size, defixed.n + 2)
            seq = rng.sample(range(1, size + 1), length)
            try:
                rewrite_sequence(seq, defixed)
            except PrefixCollisionError as err:
                cert = recover_from_prefix_collision(defixed, err.trace)
                if not verify_solution(defixed, cert):
                    return False, f"collision recovery rejected at n={n} index {i}", {}
                collisions += 1
    audited = lc_reduction.AUDIT["traces"] - before
    return True, (
        f"{audited} traces audited here ({lc_reduction.AUDIT['traces']} in total "
        f"this process); {collisions} orbit collisions recovered"
    ), {"audited": audited, "collisions": collisions}


def _run_game_engine(count, ns, seed):
    for n in ns:
        if not adversary_search(n, literal=n <= 3):
            return False, f"an adversary line defeats the engine at n={n}", {}
        if not adversary_search(n, literal=False):
            return False, f"size-quotient search fails at n={n}", {}
    widths = tuple(n for n in (2, 3, 4, 5) if n <= MAX_WIDTH)
    playouts = 0
    for i in range(count):
        n = widths[i % len(widths)]
        item = derive_seed(seed, "playout", i)
        if i % 2:
            inst = generators.constrained_long_choice_instance(n, item)
        else:
            inst = generators.long_choice_instance(n, item)
        final = playout(inst)
        if final.winner != "player1" or len(final.picks) != n + 1:
            return False, f"engine failed to complete picks on playout {i}", {}
        if not conservation_holds(final):
            return False, f"stone conservation broke on playout {i}", {}
        if not verify_solution(inst, Certificate.long_choice(final.picks)):
            return False, f"playout sequence rejected by verifier on playout {i}", {}
        playouts += 1
    return True, (
        f"adversary search clean at n in {tuple(ns)}; {playouts} playouts verified"
    ), {"playouts": playouts}


def _brute_accept_set(inst) -> set[Certificate]:
    size = 1 << inst.n
    rng1 = range(1, size + 1)
    candidates: list[Certificate] = []
    kind = inst.kind
    if kind == "local_opt":
        candidates = [Certificate.local_opt(x) for x in rng1]
    elif kind == "pigeon":
        candidates = [Certificate.pigeon_hit(x) for x in rng1]
        candidates += [
            Certificate.pigeon_collision(x, y) for x in rng1 for y in rng1
        ]
    elif kind == "quotient_pigeon":
        for t in (2, 4):
            candidates += [Certificate.qp(t, x) for x in rng1]
        for t in (1, 3, 5):
            candidates += [Certificate.qp(t, x, y) for x in rng1 for y in rng1]
        candidates += [
            Certificate.qp(6, x, y, z)
            for x in rng1 for y in rng1 for z in rng1
        ]
    elif kind in ("long_choice", "constrained_long_choice"):
        candidates = [
            Certificate.long_choice(seq)
            for seq in itertools.product(rng1, repeat=inst.n + 1)
        ]
    else:
        raise SuiteConfigError(f"no brute-force space for kind {kind!r}")
    return {c for c in candidates if verify_solution(inst, c)}


def _run_verifier_oracle_agreement(count, ns, seed):
    lc_ns = tuple(n for n in ns if n <= 3) or (2, 3)
    plans = (
        ("local_opt", lambda n, s: generators.localopt_instance(n, n, s), ns),
        ("pigeon", lambda n, s: generators.pigeon_instance(n, s), ns),
        ("quotient_pigeon",
         lambda n, s: generators.qp_instance(FAMILIES[s % 3], n, s), ns),
        ("long_choice", lambda n, s: generators.long_choice_instance(n, s), lc_ns),
        ("constrained_long_choice",
         lambda n, s: generators.constrained_long_choice_instance(n, s), lc_ns),
    )
    compared = 0
    for kind, build, kind_ns in plans:
        for i in range(count):
            n = kind_ns[i % len(kind_ns)]
            inst = build(n, derive_seed(seed, kind, i))
            enumerated = set(enumerate_solutions(inst))
            brute = _brute_accept_set(inst)
            if enumerated != brute:
                missing = brute - enumerated
                extra = enumerated - brute
                return False, (
                    f"{kind} disagreement at n={n} index {i}: "
                    f"{len(missing)} missing, {len(extra)} extra "
                    f"(e.g. {next(iter(missing | extra))})"
                ), {}
            compared += 1
    return True, f"{compared} instances: enumerator equals verifier accept-set", {
        "instances": compared
    }


@dataclass(frozen=True)
class Criterion:
    criterion_id: str
    description: str
    count: int
    ns: tuple[int, ...]
    runner: object


CRITERIA = {
    c.criterion_id: c
    for c in (
        Criterion(
            "qp_walk_totality",
            "image walks fold back within 2^n steps and certify",
            1000, (2, 3, 4, 5, 6), _run_qp_walk_totality,
        ),
        Criterion(
            "defix_no_fixed_class",
            "domain doubling leaves no point related to its image",
            200, (2, 3, 4, 5), _run_defix_no_fixed_class,
        ),
        Criterion(
            "localopt_normalization",
            "normalized optimization starts at 1 and climbs in unit steps",
            200, (2, 3, 4), _run_localopt_normalization,
        ),
        Criterion(
            "pls_pipeline_roundtrip",
            "local-optimization pipeline pulls every reduced solution back",
            500, (2, 3, 4, 5), _run_pls_pipeline_roundtrip,
        ),
        Criterion(
            "pigeon_to_qp_roundtrip",
            "pigeon embedding pulls every reduced solution back",
            500, (2, 3), _run_pigeon_to_qp_roundtrip,
        ),
        Criterion(
            "long_choice_majority",
            "majority solver always finds a feasible sequence",
            1000, (2, 3, 4, 5), _run_long_choice_majority,
        ),
        Criterion(
            "clc_equality_sound_case",
            "equality relations: every feasible sequence pulls back",
            500, (3,), _run_clc_equality_sound_case,
        ),
        Criterion(
            "clc_gap_hunt",
            "kernel/random relation hunt completes with a replayable report",
            200, (3, 4), _run_clc_gap_hunt,
        ),
        Criterion(
            "rewrite_audit",
            "rewritten sequences with class collisions always scan as solutions",
            300, (2, 3, 4), _run_rewrite_audit,
        ),
        Criterion(
            "game_engine",
            "engine completes its picks against every adversary and playout",
            1000, (2, 3, 4), _run_game_engine,
        ),
        Criterion(
            "verifier_oracle_agreement",
            "brute enumeration equals the verifier accept-set",
            100, (2, 3, 4), _run_verifier_oracle_agreement,
        ),
    )
}


def run_criterion(criterion_id: str, config: SuiteConfig) -> CriterionResult:
    crit = CRITERIA[criterion_id]
    override = config.overrides.get(criterion_id, {})
    count = override.get("count", max(1, round(crit.count * config.scale)))
    ns = tuple(override.get("ns", crit.ns))
    seed = derive_seed(config.base_seed, criterion_id)
    start = time.perf_counter()
    try:
        passed, detail, counts = crit.runner(count, ns, seed)
    except Exception as err:  # a crashed criterion is a failed criterion
        passed, detail, counts = False, f"crashed: {err!r}", {}
    return CriterionResult(criterion_id, passed, detail, counts,
                           time.perf_counter() - start)


def run_suite(config: SuiteConfig | None = None) -> SuiteReport:
    config = config if config is not None else SuiteConfig()
    wanted = config.criteria if config.criteria is not None else tuple(CRITERIA)
    start = time.perf_counter()
    results = tuple(run_criterion(cid, config) for cid in wanted)
    passed = all(r.passed for r in results)
    return SuiteReport(results, passed, time.perf_counter() - start)
