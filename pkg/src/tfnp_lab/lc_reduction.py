"""Quotient pigeon to constrained long choice, and the probe of its gap.

The construction turns a de-fixed quotient-pigeon instance into stage
predicates for a constrained long-choice game:

* `rewrite_sequence` replaces picked elements that collide with earlier
  classes, either because the collision already exhibits a solution or by
  substituting points off the hole's orbit;
* `build_split_system` maintains the nested pools whose unfilled halves
  define the stage predicates;
* `choice_predicate` evaluates stage k by one rewrite plus one membership
  test.

Recovering a quotient-pigeon certificate from a feasible sequence relies
on two set-system properties (image containment and exact unfilled
counts) that provably hold when the rewriter never fires, but are not
established once substitutions happen.  Nothing here papers over that:
`probe_set_invariants` measures both properties on every trace, the
pullback returns a PullbackFailure diagnostic when certificate extraction
comes up empty, and `hunt_counterexamples` drives whole instance families
through the machinery and files honest per-sequence records.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

from . import core, generators
from .core import DomainError, FiniteSet, derived_map, k_smallest
from .oracles import WalkTrace
from .problems import (
    Certificate,
    ConstrainedLongChoiceInstance,
    QuotientPigeonInstance,
    verify_solution,
)
from .reductions import (
    PullbackFailure,
    ReductionArtifact,
    defix_pipeline,
    recover_from_prefix_collision,
)


class PrefixCollisionError(RuntimeError):
    """The hole's orbit folded back before yielding a substitute point.

    Carries the orbit as a WalkTrace whose collision indices feed
    recover_from_prefix_collision, so hitting this error is itself a way
    of finding a certificate.
    """

    def __init__(self, trace: WalkTrace, certificate=None):
        super().__init__(f"orbit collision at {trace.collision}")
        self.trace = trace
        # filled in by callers that already know how to map the collision
        # all the way back to their original instance
        self.certificate = certificate


class RewriteInvariantError(AssertionError):
    """A rewritten sequence holds a class collision yet scans clean."""


# every rewrite_sequence call audits its own trace; this counts them so
# harness reports can state how many traces the guarantee was checked on
AUDIT = {"traces": 0}


class QpContext:
    """Dense views of one quotient-pigeon instance, shared across calls."""

    def __init__(self, inst: QuotientPigeonInstance):
        self.inst = inst
        self.n = inst.n
        self.size = 1 << inst.n
        self.images = core.as_unary_table(inst.C)
        self.rows = core.as_relation_rows(inst.E)
        self.v_star = inst.v_star
        self._orbits: dict[int, list[int]] = {}

    def related(self, x: int, y: int) -> int:
        return self.rows[x - 1][y - 1]

    def image(self, x: int) -> int:
        return self.images[x - 1]

    def orbit(self, anchor: int) -> list[int]:
        """anchor, C(anchor), ..., C^{2n+1}(anchor), cached."""
        got = self._orbits.get(anchor)
        if got is None:
            got = [anchor]
            for _ in range(2 * self.n + 1):
                got.append(self.images[got[-1] - 1])
            self._orbits[anchor] = got
        return got


def _ctx(inst, ctx):
    return ctx if ctx is not None else QpContext(inst)


# ============================================================
# solution scanning over a sequence
# ============================================================


@dataclass(frozen=True)
class CheckOutcome:
    found: bool
    clause: int | None = None
    certificate: Certificate | None = None

    def __bool__(self) -> bool:
        return self.found


def check_solutions(seq, inst: QuotientPigeonInstance, *, strict_printed: bool = False,
                    ctx: QpContext | None = None) -> CheckOutcome:
    """Scan a sequence for any of the six certificate clauses, in order.

    The scan covers all index pairs/triples of the sequence, so a firing
    that was found once keeps firing after the sequence grows.  The
    default mode tests the clauses as the certificate definitions state
    them; strict_printed swaps clauses 1 and 5 for the variant with the
    two transcription slips (clause 1 comparing classes with the wrong
    polarity, clause 5 comparing the relation with itself), kept only so
    the two behaviours can be compared head to head.  In that mode the
    returned certificate may be rejected by the verifier.
    """
    q = _ctx(inst, ctx)
    elems = tuple(seq)
    L = len(elems)
    idx = range(L)

    def rel(a, b):
        return q.rows[a - 1][b - 1]

    # clause 1: unrelated pair with related images
    want_input_rel = 1 if strict_printed else 0
    for i in idx:
        for j in idx:
            if i == j:
                continue
            a, b = elems[i], elems[j]
            if rel(a, b) == want_input_rel and rel(q.image(a), q.image(b)) == 1:
                return CheckOutcome(True, 1, Certificate.qp(1, a, b))
    # clause 2: image lands in the hole's class
    for i in idx:
        if rel(q.image(elems[i]), q.v_star) == 1:
            return CheckOutcome(True, 2, Certificate.qp(2, elems[i]))
    # clause 3: related pair with unrelated images
    for i in idx:
        for j in idx:
            if i == j:
                continue
            a, b = elems[i], elems[j]
            if rel(a, b) == 1 and rel(q.image(a), q.image(b)) == 0:
                return CheckOutcome(True, 3, Certificate.qp(3, a, b))
    # clause 4: reflexivity breaks
    for i in idx:
        if rel(elems[i], elems[i]) == 0:
            return CheckOutcome(True, 4, Certificate.qp(4, elems[i]))
    # clause 5: symmetry breaks
    for i in idx:
        for j in idx:
            if i == j:
                continue
            a, b = elems[i], elems[j]
            if strict_printed:
                if rel(a, b) == rel(b, a):
                    return CheckOutcome(True, 5, Certificate.qp(5, a, b))
            elif rel(a, b) != rel(b, a):
                return CheckOutcome(True, 5, Certificate.qp(5, a, b))
    # clause 6: transitivity breaks on pairwise distinct elements
    for i in idx:
        for j in idx:
            for k in idx:
                a, b, c = elems[i], elems[j], elems[k]
                if len({a, b, c}) != 3:
                    continue
                if rel(a, b) == 1 and rel(b, c) == 1 and rel(a, c) == 0:
                    return CheckOutcome(True, 6, Certificate.qp(6, a, b, c))
    return CheckOutcome(False)


# ============================================================
# the rewriting sub-procedure
# ============================================================


@dataclass(frozen=True)
class RewriteTrace:
    """Input picks, rewritten outputs, and which branch produced each one.

    branches[t-1] describes output t: "carry_dup" (an earlier collision is
    already on record), "fresh" (the pick collides with nothing), "solution"
    (the pick collides but the collision scans as a certificate), or
    ("orbit", hops) when the pick was replaced by the first orbit point
    clear of every previous output.
    """

    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    branches: tuple[tuple[str, int | None], ...]


def _beta_step(b_prefix, prefix_has_dup, x, inst, q) -> tuple[int, str, int | None]:
    """One rewriting step: the next output given outputs so far and pick x.

    Substitutes always come off the hole's orbit (sequences in the
    construction are pinned to start there anyway), so an exhausted orbit
    folds back onto itself or the hole and yields a certificate whatever
    the sequence head was."""
    if prefix_has_dup:
        return x, "carry_dup", None
    if all(q.related(x, b) == 0 for b in b_prefix):
        return x, "fresh", None
    if check_solutions((*b_prefix, x), inst, ctx=q):
        return x, "solution", None
    orbit = q.orbit(q.v_star)
    for hops in range(1, 2 * q.n + 1):
        y = orbit[hops]
        if all(q.related(y, b) == 0 for b in b_prefix):
            return y, "orbit", hops
    raise PrefixCollisionError(_orbit_collision_trace(q.v_star, q))


def _orbit_collision_trace(anchor, q) -> WalkTrace:
    u = q.orbit(anchor)
    for i in range(1, len(u)):
        for j in range(i):
            if q.related(u[i], u[j]):
                return WalkTrace(tuple(u[: i + 1]), (j, i), "class_collision")
    raise AssertionError(
        "orbit exhausted its substitutes yet never folded back"
    )  # pragma: no cover - pigeonhole


def _dup_present(outputs, q) -> bool:
    return any(
        q.related(outputs[i], outputs[j])
        for i in range(len(outputs))
        for j in range(len(outputs))
        if i != j
    )


def rewrite_sequence(a_seq, inst: QuotientPigeonInstance, *,
                     ctx: QpContext | None = None) -> RewriteTrace:
    """Run the rewriting sub-procedure over a full pick sequence.

    Inputs must be pairwise distinct elements.  The first output always
    equals the first input; each later input is kept verbatim unless it
    collides with an earlier output's class without that collision scanning
    as a certificate, in which case the first clean orbit point replaces
    it.  If all 2n orbit hops are class-taken, the orbit itself must have
    folded back and PrefixCollisionError carries that fold.

    On return the trace is audited: outputs holding a class collision must
    scan as a certificate (carry_dup and solution branches guarantee it),
    otherwise RewriteInvariantError flags broken machinery.
    """
    q = _ctx(inst, ctx)
    elems = tuple(a_seq)
    if not elems:
        raise DomainError("empty pick sequence")
    if len(set(elems)) != len(elems):
        raise DomainError("picks must be pairwise distinct")
    for v in elems:
        core.check_element(v, q.n, "pick")
    outputs = [elems[0]]
    branches: list[tuple[str, int | None]] = []
    has_dup = False
    for x in elems[1:]:
        nxt, branch, hops = _beta_step(outputs, has_dup, x, inst, q)
        if not has_dup and any(
            q.related(nxt, b) or q.related(b, nxt) for b in outputs
        ):
            has_dup = True
        outputs.append(nxt)
        branches.append((branch, hops))
    trace = RewriteTrace(elems, tuple(outputs), tuple(branches))
    if _dup_present(outputs, q) and not check_solutions(outputs, inst, ctx=q):
        raise RewriteInvariantError(
            f"outputs {outputs} collide but scan clean on {inst.kind}"
        )
    AUDIT["traces"] += 1
    return trace


# ============================================================
# nested split system
# ============================================================


@dataclass(frozen=True)
class SplitSystem:
    """Per-level pools and their unfilled-halving prefixes.

    pools[k] is the candidate pool at level k, halves[k] its shortest
    prefix whose unfilled part is half (rounded up) of the pool's unfilled
    part, kappas[k] that prefix's length.  Levels where the unfilled part
    was already empty are flagged degenerate rather than erroring out; the
    hunter wants to see them.
    """

    n: int
    pools: tuple[FiniteSet, ...]
    halves: tuple[FiniteSet, ...]
    kappas: tuple[int, ...]
    degenerate_levels: tuple[int, ...]


def _unfilled_members(pool: FiniteSet, outputs, q) -> set[int]:
    taken = {q.image(b) for b in outputs}
    return {v for v in pool if v not in taken}


def _half_by_unfilled(pool: FiniteSet, outputs, q) -> tuple[FiniteSet, int, bool]:
    unfilled = _unfilled_members(pool, outputs, q)
    target = math.ceil(len(unfilled) / 2)
    if target == 0:
        return k_smallest(pool, 0), 0, True
    count = 0
    for kappa, v in enumerate(pool, start=1):
        if v in unfilled:
            count += 1
            if count == target:
                return k_smallest(pool, kappa), kappa, False
    raise AssertionError("unfilled count ran out before its own half")  # pragma: no cover


def build_split_system(b_seq, inst: QuotientPigeonInstance, *,
                       ctx: QpContext | None = None) -> SplitSystem:
    """Build the nested pools driven by a rewritten output sequence.

    Level 0 starts from the full domain minus the hole.  Afterwards the
    pool either follows the previous half or its complement, according to
    where the newest output's image landed; a singleton pool freezes.  The
    half at each level is the pool's shortest prefix holding half of the
    unfilled members, recomputed against all outputs so far.
    """
    q = _ctx(inst, ctx)
    outputs = tuple(b_seq)
    if not outputs:
        raise DomainError("empty output sequence")
    pools: list[FiniteSet] = []
    halves: list[FiniteSet] = []
    kappas: list[int] = []
    degenerate: list[int] = []
    base = FiniteSet.full(q.n).without([q.v_star])
    for k in range(len(outputs)):
        if k == 0:
            pool = base
        elif len(pools[k - 1]) == 1:
            pools.append(pools[k - 1])
            halves.append(pools[k - 1])
            kappas.append(1)
            continue
        else:
            prev_half = halves[k - 1]
            if q.image(outputs[k]) in prev_half:
                pool = prev_half
            else:
                pool = pools[k - 1].without(prev_half.members)
        half, kappa, empty = _half_by_unfilled(pool, outputs[: k + 1], q)
        pools.append(pool)
        halves.append(half)
        kappas.append(kappa)
        if empty:
            degenerate.append(k)
    return SplitSystem(q.n, tuple(pools), tuple(halves), tuple(kappas),
                       tuple(degenerate))


# ============================================================
# stage predicates
# ============================================================


def choice_predicate(stage: int, prefix, probe: int,
                     inst: QuotientPigeonInstance, *,
                     ctx: QpContext | None = None) -> int:
    """Stage-k predicate: rewrite (prefix, probe) and ask where the last
    output's image sits relative to the level-k half."""
    q = _ctx(inst, ctx)
    prefix = tuple(prefix)
    if len(prefix) != stage + 1:
        raise DomainError(f"stage {stage} wants a prefix of {stage + 1} picks")
    trace = rewrite_sequence((*prefix, probe), inst, ctx=q)
    system = build_split_system(trace.outputs[:-1], inst, ctx=q)
    return 1 if q.image(trace.outputs[-1]) in system.halves[stage] else 0


class StagePredicate:
    """Total callable backend for one stage predicate.

    Rewriting wants pairwise distinct picks and an orbit that does not
    fold back; inputs outside that envelope get the fixed value 0 so the
    map stays total (the verifier and the game only ever probe distinct
    points, so the fallback never shapes a real run).
    """

    __slots__ = ("q", "stage")

    def __init__(self, q: QpContext, stage: int):
        self.q = q
        self.stage = stage

    def __call__(self, *args):
        if len(set(args)) != len(args):
            return 0
        try:
            return choice_predicate(self.stage, args[:-1], args[-1], self.q.inst,
                                    ctx=self.q)
        except PrefixCollisionError:
            return 0


# ============================================================
# the reduction
# ============================================================


def reduce_qp_to_clc(inst: QuotientPigeonInstance) -> ReductionArtifact:
    """De-fixed quotient pigeon as a constrained long-choice instance.

    Preconditions checked here: no point may relate to its own image, and
    the hole's orbit must stay class-distinct for 2n hops (otherwise
    PrefixCollisionError carries an immediate certificate and there is
    nothing to reduce).  The pullback rewrites a feasible sequence and
    scans the outputs; a clean scan is exactly the gap this module exists
    to measure and comes back as a PullbackFailure carrying the trace, the
    split system, and the probe report.
    """
    q = QpContext(inst)
    for x in range(1, q.size + 1):
        if q.related(q.image(x), x):
            raise DomainError(
                f"point {x} relates to its own image; de-fix the instance first"
            )
    orbit = q.orbit(inst.v_star)
    for i in range(1, 2 * q.n + 1):
        for j in range(i):
            if q.related(orbit[i], orbit[j]):
                raise PrefixCollisionError(
                    WalkTrace(tuple(orbit[: i + 1]), (j, i), "class_collision")
                )

    preds = tuple(
        derived_map(k + 2, inst.n, 1, StagePredicate(q, k), boolean=True,
                    label=f"stage[{k}]")
        for k in range(inst.n - 1)
    )
    reduced = ConstrainedLongChoiceInstance(inst.n, preds, inst.v_star)

    def pullback(cert):
        seq = cert.witnesses
        try:
            trace = rewrite_sequence(seq, inst, ctx=q)
        except PrefixCollisionError as err:
            return recover_from_prefix_collision(inst, err.trace)
        outcome = check_solutions(trace.outputs, inst, ctx=q)
        if outcome:
            return outcome.certificate
        system = build_split_system(trace.outputs, inst, ctx=q)
        probe = probe_set_invariants(trace, system, inst, ctx=q)
        return PullbackFailure(
            "qp_to_clc", tuple(seq),
            {"trace": trace, "system": system, "probe": probe},
        )

    return ReductionArtifact(
        "qp_to_clc", inst, reduced, pullback, {"v_star": inst.v_star}
    )


# ============================================================
# probes and the hunter
# ============================================================


@dataclass(frozen=True)
class ProbeReport:
    """Empirical status of the two set-system properties on one trace.

    containment: every later output's image stays inside every earlier
    pool.  counts: level k's unfilled part has exactly 2^(n-k) - 2
    members.  Both claims only make sense while the output prefix is
    still solution-free (once a clause fires the construction stops
    owing anything), so indices at or past the first firing prefix are
    out of scope.  Violations carry the first offending indices;
    nothing is asserted, the report just states what held.
    """

    containment_ok: bool
    containment_violation: tuple[int, int] | None
    counts_ok: bool
    counts_violation: tuple[int, int, int] | None  # level, expected, actual
    scope: int = -1  # outputs examined; -1 means the whole trace

    @property
    def all_ok(self) -> bool:
        return self.containment_ok and self.counts_ok

    def violated(self) -> str | None:
        if self.containment_ok and self.counts_ok:
            return None
        if not self.containment_ok and not self.counts_ok:
            return "both"
        return "image_containment" if not self.containment_ok else "unfilled_count"


def _solution_free_length(outputs, inst, q) -> int:
    """Largest t such that no clause fires on outputs[:t]."""
    for t in range(len(outputs)):
        if check_solutions(outputs[: t + 1], inst, ctx=q):
            return t
    return len(outputs)


def probe_set_invariants(trace: RewriteTrace, system: SplitSystem,
                         inst: QuotientPigeonInstance, *,
                         ctx: QpContext | None = None) -> ProbeReport:
    q = _ctx(inst, ctx)
    outputs = trace.outputs
    scope = _solution_free_length(outputs, inst, q)
    containment_violation = None
    for i in range(min(len(system.pools), scope)):
        for j in range(i + 1, scope):
            if q.image(outputs[j]) not in system.pools[i]:
                containment_violation = (i, j)
                break
        if containment_violation:
            break
    counts_violation = None
    for k in range(min(q.n - 1, len(system.pools), scope)):
        expected = (1 << (q.n - k)) - 2
        actual = len(_unfilled_members(system.pools[k], outputs[: k + 1], q))
        if actual != expected:
            counts_violation = (k, expected, actual)
            break
    return ProbeReport(containment_violation is None, containment_violation,
                       counts_violation is None, counts_violation, scope)


class FeasibleSearch:
    """Depth-first search over feasible constrained-long-choice sequences.

    Shares rewrite prefixes across the tree: each node keeps its rewritten
    outputs, the per-level duplicate flags, the split-system levels, and
    the constants already pinned, so extending by one candidate costs one
    rewriting step per pinned stage instead of a full rewrite.
    """

    def __init__(self, inst: QuotientPigeonInstance, *, ctx: QpContext | None = None):
        self.q = _ctx(inst, ctx)
        self.inst = inst
        self.length = inst.n + 1
        self.stages = inst.n - 1

    def _root(self):
        a0 = self.q.v_star
        outputs = (a0,)
        system = build_split_system(outputs, self.inst, ctx=self.q)
        return {
            "picks": (a0,),
            "outputs": outputs,
            "dup_flags": (False,),
            "system": system,
            "consts": (),
        }

    def _step_bit(self, node, level, x):
        """Rewriting step against the level-long output prefix; returns
        (next_output, predicate bit) or raises PrefixCollisionError."""
        outputs = node["outputs"][: level + 1]
        nxt, _, _ = _beta_step(outputs, node["dup_flags"][level], x,
                               self.inst, self.q)
        half = node["system"].halves[level]
        return nxt, (1 if self.q.image(nxt) in half else 0)

    def _extend(self, node, x):
        """Child node for pick x, or None when x breaks a pinned constant."""
        q = self.q
        picks = node["picks"]
        d = len(picks) - 1
        for stage, want in enumerate(node["consts"]):
            _, bit = self._step_bit(node, stage, x)
            if bit != want:
                return None
        outputs = node["outputs"]
        nxt, _, _ = _beta_step(outputs, node["dup_flags"][d], x,
                               self.inst, q)
        new_outputs = outputs + (nxt,)
        new_dup = node["dup_flags"][d] or any(
            q.related(nxt, b) or q.related(b, nxt) for b in outputs
        )
        new_consts = node["consts"]
        if d < self.stages:
            half = node["system"].halves[d]
            new_consts = node["consts"] + (1 if q.image(nxt) in half else 0,)
        return {
            "picks": picks + (x,),
            "outputs": new_outputs,
            "dup_flags": node["dup_flags"] + (new_dup,),
            "system": build_split_system(new_outputs, self.inst, ctx=q),
            "consts": new_consts,
        }

    def _candidates(self, node):
        used = set(node["picks"])
        return [x for x in range(1, self.q.size + 1) if x not in used]

    def enumerate(self, limit: int | None = None) -> Iterator[tuple[int, ...]]:
        """All feasible sequences, ascending depth-first."""
        yielded = 0

        def walk(node):
            nonlocal yielded
            if limit is not None and yielded >= limit:
                return
            if len(node["picks"]) == self.length:
                yielded += 1
                yield node["picks"]
                return
            for x in self._candidates(node):
                child = self._extend(node, x)
                if child is not None:
                    yield from walk(child)
                    if limit is not None and yielded >= limit:
                        return

        yield from walk(self._root())

    def sample(self, count: int, rng) -> list[tuple[int, ...]]:
        """Distinct feasible sequences from random descents with backtracking."""
        found: list[tuple[int, ...]] = []
        seen: set[tuple[int, ...]] = set()

        def descend(node):
            if len(node["picks"]) == self.length:
                return node["picks"]
            cands = self._candidates(node)
            rng.shuffle(cands)
            for x in cands:
                child = self._extend(node, x)
                if child is not None:
                    got = descend(child)
                    if got is not None:
                        return got
            return None

        attempts = 0
        while len(found) < count and attempts < count * 4:
            attempts += 1
            got = descend(self._root())
            if got is None:
                break  # no feasible sequence at all from this root
            if got not in seen:
                seen.add(got)
                found.append(got)
        return found


# ============================================================
# the hunter
# ============================================================


@dataclass(frozen=True)
class HuntConfig:
    """What to generate and how hard to look.

    families: any of "equality", "kernel", "random" (relation families of
    the base instances).  ns: base widths before de-fixing (the reduction
    then runs at width n + 1).  seeds: instances per (family, n).
    Sequences are enumerated exhaustively when the reduced width stays
    within enumerate_width, sampled otherwise.
    """

    families: tuple[str, ...] = ("kernel", "random")
    ns: tuple[int, ...] = (3, 4)
    seeds: int = 200
    base_seed: int = 0
    sample_count: int = 100
    enumerate_width: int = 4


@dataclass(frozen=True)
class HuntRecord:
    seed: int
    n: int
    family: str
    sequence: tuple[int, ...]
    outcome: str  # recovered | failure | prefix_collision | no_sequences
    violated_property: str | None
    witnesses: tuple[int, ...]


@dataclass(frozen=True)
class HuntReport:
    config: HuntConfig
    records: tuple[HuntRecord, ...]
    summary: dict = field(compare=False)


def hunt_counterexamples(config: HuntConfig) -> HuntReport:
    """Sweep instance families through the reduction and log every pullback.

    Each (family, n, seed) builds a base instance, de-fixes it, reduces it,
    and pulls back every enumerated / sampled feasible sequence.  Outcomes:
    "recovered" (a verified certificate came back, witnesses attached),
    "failure" (the scan came up empty; violated_property says which set
    property broke), "prefix_collision" (the reduction preconditions
    yielded a certificate before any sequence search).
    """
    records: list[HuntRecord] = []
    counts = {"recovered": 0, "failure": 0, "prefix_collision": 0, "no_sequences": 0}
    for family in config.families:
        for n in config.ns:
            for idx in range(config.seeds):
                seed = generators.derive_seed(config.base_seed, family, n, idx)
                base = generators.qp_instance(family, n, seed)
                artifact = defix_pipeline(base)
                defixed = artifact.reduced
                try:
                    clc_art = reduce_qp_to_clc(defixed)
                except PrefixCollisionError as err:
                    cert = recover_from_prefix_collision(defixed, err.trace)
                    rec = HuntRecord(seed, n, family, (), "prefix_collision",
                                     None, cert.witnesses)
                    records.append(rec)
                    counts["prefix_collision"] += 1
                    continue
                q = QpContext(defixed)
                search = FeasibleSearch(defixed, ctx=q)
                if defixed.n <= config.enumerate_width:
                    sequences = list(search.enumerate())
                else:
                    rng = generators.rng_for(seed, "sample")
                    sequences = search.sample(config.sample_count, rng)
                if not sequences:
                    records.append(HuntRecord(seed, n, family, (), "no_sequences",
                                              None, ()))
                    counts["no_sequences"] += 1
                    continue
                for seq in sequences:
                    out = clc_art.pullback(Certificate.long_choice(seq))
                    if isinstance(out, PullbackFailure):
                        probe = out.diagnostics["probe"]
                        rec = HuntRecord(seed, n, family, seq, "failure",
                                         probe.violated() or "none_found", ())
                        counts["failure"] += 1
                    else:
                        verdict = verify_solution(defixed, out)
                        if not verdict:
                            raise RewriteInvariantError(
                                f"recovered certificate rejected: {verdict.code}"
                            )
                        # probe even successful traces: a set-system
                        # property can break before the first clause fires
                        trace = rewrite_sequence(seq, defixed, ctx=q)
                        system = build_split_system(trace.outputs, defixed,
                                                    ctx=q)
                        probe = probe_set_invariants(trace, system, defixed,
                                                     ctx=q)
                        rec = HuntRecord(seed, n, family, seq, "recovered",
                                         probe.violated(), out.witnesses)
                        counts["recovered"] += 1
                    if rec.violated_property not in (None, "none_found"):
                        counts["probe_violations"] = (
                            counts.get("probe_violations", 0) + 1
                        )
                    records.append(rec)
    summary = {
        "sequences": counts["recovered"] + counts["failure"],
        "probe_violations": counts.pop("probe_violations", 0),
        **counts,
    }
    return HuntReport(config, tuple(records), summary)


def replay_record(record: HuntRecord, config: HuntConfig):
    """Rebuild one record's instance and redo its pullback; returns the
    fresh outcome string so reports can be spot-checked."""
    base = generators.qp_instance(record.family, record.n, record.seed)
    artifact = defix_pipeline(base)
    defixed = artifact.reduced
    try:
        clc_art = reduce_qp_to_clc(defixed)
    except PrefixCollisionError:
        return "prefix_collision"
    if not record.sequence:
        return "no_sequences"
    out = clc_art.pullback(Certificate.long_choice(record.sequence))
    return "failure" if isinstance(out, PullbackFailure) else "recovered"
