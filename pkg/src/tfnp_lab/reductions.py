"""Instance-to-instance reductions with certified pull-backs.

Every reduction returns a ReductionArtifact: the reduced instance plus a
pullback procedure that turns verified reduced-instance certificates into
verified original-instance certificates.  `apply_pullback` audits both
ends, so an unsound reduction cannot fail silently: either the pullback
returns a certificate that verifies on the original instance, or it
returns a PullbackFailure diagnostic, or a ReductionSoundnessError is
raised.

The pull-backs here prefer a small candidate set filtered through the
verifier over case analysis; the candidate sets come from the structural
arguments, the filtering is what makes them trustworthy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

from . import circuits, core
from .core import (
    DomainError,
    EvaluableMap,
    check_element,
    equality_relation,
    kernel_relation,
    pack_pair,
    table_map,
    unpack_pair,
)
from .problems import (
    Certificate,
    LocalOptInstance,
    PigeonInstance,
    QuotientPigeonInstance,
    verify_solution,
)


class ReductionSoundnessError(RuntimeError):
    """A pullback produced nothing the original-instance verifier accepts."""

    def __init__(self, reduction_id: str, message: str, certificate=None, verdict=None):
        super().__init__(f"{reduction_id}: {message}")
        self.reduction_id = reduction_id
        self.certificate = certificate
        self.verdict = verdict


@dataclass(frozen=True)
class PullbackFailure:
    """Documented dead end: a verified reduced solution with no recovery.

    Only the long-choice reduction can legitimately produce one of these;
    everything in this module either succeeds or raises.
    """

    reduction_id: str
    sequence: tuple[int, ...]
    diagnostics: dict = field(compare=False)


@dataclass(frozen=True)
class ReductionArtifact:
    reduction_id: str
    original: Any
    reduced: Any
    pullback: Callable = field(compare=False)
    provenance: dict = field(default_factory=dict, compare=False)


def apply_pullback(artifact: ReductionArtifact, cert: Certificate):
    """Pull a reduced-instance certificate back, auditing both ends."""
    verdict = verify_solution(artifact.reduced, cert)
    if not verdict:
        raise ReductionSoundnessError(
            artifact.reduction_id,
            f"certificate rejected on the reduced instance ({verdict.code})",
            cert, verdict,
        )
    out = artifact.pullback(cert)
    if isinstance(out, PullbackFailure):
        return out
    verdict = verify_solution(artifact.original, out)
    if not verdict:
        raise ReductionSoundnessError(
            artifact.reduction_id,
            f"pulled-back certificate rejected on the original instance ({verdict.code})",
            out, verdict,
        )
    return out


def compose_artifacts(*arts: ReductionArtifact, reduction_id: str | None = None
                      ) -> ReductionArtifact:
    """Chain reductions; the pullback runs the stages in reverse."""
    if not arts:
        raise DomainError("nothing to compose")
    for a, b in zip(arts, arts[1:]):
        if a.reduced is not b.original:
            raise DomainError(
                f"cannot chain {a.reduction_id} into {b.reduction_id}: "
                "stage output is not the next stage's input"
            )
    rid = reduction_id or "+".join(a.reduction_id for a in arts)

    def pullback(cert):
        # audit each stage boundary exactly once: the incoming cert, then
        # every stage's output on that stage's original
        verdict = verify_solution(arts[-1].reduced, cert)
        if not verdict:
            raise ReductionSoundnessError(
                rid,
                f"certificate rejected on the reduced instance ({verdict.code})",
                cert, verdict,
            )
        out = cert
        for a in reversed(arts):
            out = a.pullback(out)
            if isinstance(out, PullbackFailure):
                return out
            verdict = verify_solution(a.original, out)
            if not verdict:
                raise ReductionSoundnessError(
                    a.reduction_id,
                    f"pulled-back certificate rejected on the original "
                    f"instance ({verdict.code})",
                    out, verdict,
                )
        return out

    return ReductionArtifact(
        rid, arts[0].original, arts[-1].reduced, pullback,
        {"stages": [a.provenance | {"reduction": a.reduction_id} for a in arts]},
    )


def _first_verified(reduction_id, inst, candidates):
    for cert in candidates:
        if verify_solution(inst, cert):
            return cert
    raise ReductionSoundnessError(
        reduction_id, f"pullback candidate set empty: {candidates}"
    )


# ============================================================
# pigeon -> quotient pigeon
# ============================================================


def reduce_pigeon_to_qp(inst: PigeonInstance) -> ReductionArtifact:
    """Wrap a pigeon instance as quotient pigeon with the equality relation.

    Same collision map, same hole; the relation is literal equality, so a
    cross-class collision is exactly a collision and a class hit is exactly
    a hole hit.  Clauses 3-6 cannot verify against equality.
    """
    reduced = QuotientPigeonInstance(inst.n, inst.C, equality_relation(inst.n), inst.v_star)

    def pullback(cert):
        if cert.kind == "qp_type1":
            return Certificate.pigeon_collision(cert.x, cert.y)
        if cert.kind == "qp_type2":
            return Certificate.pigeon_hit(cert.x)
        raise ReductionSoundnessError(
            "pigeon_to_qp", f"unreachable certificate kind {cert.kind} verified"
        )

    return ReductionArtifact("pigeon_to_qp", inst, reduced, pullback)


# ============================================================
# quotient pigeon de-fixing
# ============================================================


def redirect_vstar_class(inst: QuotientPigeonInstance, u_star: int | None = None
                         ) -> ReductionArtifact:
    """Re-aim every point whose image lands in the v_star class.

    Any x with E(C(x), v_star) = 1 is already a class-hit solution, so the
    reduced map may send it anywhere; aiming it at a fixed u_star != v_star
    clears the v_star class of images.  The pullback turns any witness
    whose image was re-aimed back into that class-hit certificate.
    """
    n = inst.n
    if u_star is None:
        u_star = 1 if inst.v_star != 1 else 2
    check_element(u_star, n, "u_star")
    if u_star == inst.v_star:
        raise DomainError("u_star must differ from v_star")

    c_tab = core.as_unary_table(inst.C)
    e = inst.E
    redirected = [e(c_tab[x - 1], inst.v_star) == 1 for x in range(1, (1 << n) + 1)]
    new_c = table_map(
        1, n, n,
        [u_star if redirected[x - 1] else c_tab[x - 1] for x in range(1, (1 << n) + 1)],
        label="redirected",
    )
    reduced = QuotientPigeonInstance(n, new_c, inst.E, inst.v_star)

    def pullback(cert):
        if cert.kind in ("qp_type1", "qp_type2", "qp_type3"):
            for w in cert.witnesses:
                if redirected[w - 1]:
                    return Certificate.qp(2, w)
        return cert

    return ReductionArtifact(
        "qp_redirect", inst, reduced, pullback, {"u_star": u_star}
    )


def double_domain_defixing(inst: QuotientPigeonInstance) -> ReductionArtifact:
    """Double the domain with a leading bit that every step flips.

    On the doubled domain (b, x) maps to (1-b, C(x)) and two points only
    relate when their leading bits agree, so no point can relate to its own
    image: the reduced instance has no fixed classes at all.  Expected to
    run after redirect_vstar_class so the hole's class holds no images.
    The pullback drops the leading bit and re-verifies.
    """
    n = inst.n
    big = core.check_width(n + 1, "doubled width")
    size = 1 << n

    c_tab = core.as_unary_table(inst.C)
    new_c_table = []
    for b in (0, 1):
        for x in range(1, size + 1):
            new_c_table.append((1 - b) * size + c_tab[x - 1])
    c_circ = None
    if inst.C.circuit is not None:
        c_circ = circuits.prepend_flipped_bit(inst.C.circuit)
    new_c = table_map(1, big, big, new_c_table, label="bit_flipped", circuit=c_circ)

    e = inst.E
    e_rows = core.as_relation_rows(e)

    def e_fn(v, w):
        b1, x1 = unpack_pair(v, n)
        b2, x2 = unpack_pair(w, n)
        return e_rows[x1 - 1][x2 - 1] if b1 == b2 else 0

    e_circ = None
    if e.circuit is not None:
        # bit positions: (b1, x1 bits, b2, x2 bits); relate iff b1 == b2
        # and the inner relation holds on (x1, x2)
        total = 2 * big
        bits_same = circuits.compose(
            circuits.equality(1), circuits.project(total, [0, big])
        )
        inner = circuits.compose(
            e.circuit,
            circuits.project(total, list(range(1, big)) + list(range(big + 1, total))),
        )
        e_circ = circuits.compose(circuits.and_all(2), circuits.pair(bits_same, inner))
    new_e = EvaluableMap(2, big, 1, True, None, e_circ, e_fn, label="bit_guarded")
    if 2 * big <= core.MAX_TABLE_BITS:
        new_e = core.materialize(new_e)

    reduced = QuotientPigeonInstance(big, new_c, new_e, inst.v_star)

    def drop(w):
        return (w - 1) % size + 1

    def pullback(cert):
        return Certificate(cert.kind, tuple(drop(w) for w in cert.witnesses))

    return ReductionArtifact("qp_double_domain", inst, reduced, pullback)


def defix_pipeline(inst: QuotientPigeonInstance, u_star: int | None = None
                   ) -> ReductionArtifact:
    """redirect_vstar_class then double_domain_defixing, pullbacks chained."""
    first = redirect_vstar_class(inst, u_star)
    second = double_domain_defixing(first.reduced)
    return compose_artifacts(first, second, reduction_id="qp_defix")


def recover_from_prefix_collision(inst: QuotientPigeonInstance, trace) -> Certificate:
    """Convert an orbit class-collision into a quotient-pigeon certificate.

    The orbit u_0 = v_star, u_i = C(u_{i-1}) folding back at (j, i) gives a
    class hit when j = 0 and a cross-class collision otherwise.
    """
    if trace.collision is None:
        raise DomainError("trace carries no collision")
    j, i = trace.collision
    u = trace.elements
    if not 0 <= j < i < len(u):
        raise DomainError(f"collision indices ({j}, {i}) do not address the orbit")
    cert = Certificate.qp(2, u[i - 1]) if j == 0 else Certificate.qp(1, u[i - 1], u[j - 1])
    verdict = verify_solution(inst, cert)
    if not verdict:
        raise ReductionSoundnessError(
            "prefix_collision_recovery",
            f"collision trace did not yield a verified certificate ({verdict.code})",
            cert, verdict,
        )
    return cert


# ============================================================
# local-opt normalizations
# ============================================================


def normalize_unit_potential(inst: LocalOptInstance) -> ReductionArtifact:
    """Force the potential of element 1 down to the minimum value 1.

    Successors that used to land on 1 are forwarded to f(1) so the pinched
    potential cannot manufacture spurious stalls there.  A reduced solution
    pulls back to whichever of {x, f(x), 1} the original verifier accepts;
    the structural argument guarantees the set is never empty.
    """
    n, m = inst.n, inst.m
    f_tab = core.as_unary_table(inst.f)
    p_tab = core.as_unary_table(inst.p)
    f1 = f_tab[0]
    new_f = table_map(
        1, n, n, [f1 if fx == 1 else fx for fx in f_tab], label="one_bypassed"
    )
    new_p = table_map(1, n, m, [1] + p_tab[1:], label="one_grounded")
    reduced = LocalOptInstance(n, m, new_f, new_p)

    def pullback(cert):
        x = cert.x
        return _first_verified(
            "localopt_unit_potential", inst,
            [Certificate.local_opt(x),
             Certificate.local_opt(f_tab[x - 1]),
             Certificate.local_opt(1)],
        )

    return ReductionArtifact("localopt_unit_potential", inst, reduced, pullback)


def normalize_unit_step(inst: LocalOptInstance) -> ReductionArtifact:
    """Spread each successor step over a column of potential levels.

    The reduced domain is [2^m] x [2^n] flattened with the level in the
    high bits.  A column whose element strictly climbs walks its levels one
    at a time and hands off to the successor's own level; every other
    vertex of that column funnels into the walk one step below its entry
    point.  A column whose element does not climb (it is already a
    solution) freezes: every vertex is a fixed point at that element's
    potential.  This keeps two facts exhaustively checkable on the output:
    the start vertex (1, 1) has potential 1, and every non-fixed vertex
    gains exactly one potential unit per step.
    """
    n, m = inst.n, inst.m
    if inst.p(1) != 1:
        raise DomainError("unit-step normalization wants p(1) = 1; "
                          "run normalize_unit_potential first")
    big = core.check_width(m + n, "level-stacked width")
    f_tab = core.as_unary_table(inst.f)
    p_tab = core.as_unary_table(inst.p)
    levels = 1 << m
    size = 1 << n

    f_rows = []
    p_rows = []
    for i in range(1, levels + 1):
        for x in range(1, size + 1):
            fx = f_tab[x - 1]
            px, pfx = p_tab[x - 1], p_tab[fx - 1]
            if pfx <= px:
                tgt, pot = (i, x), px           # frozen column: already a solution
            elif px <= i < pfx - 1:
                tgt, pot = (i + 1, x), i        # climb one level
            elif i == pfx - 1:
                tgt, pot = (pfx, fx), i         # hand off to the successor column
            elif px >= 2:
                tgt, pot = (px, x), px - 1      # funnel into this column's walk
            else:
                tgt, pot = (pfx, fx), pfx - 1   # level-1 column: funnel to hand-off
            f_rows.append(pack_pair(tgt[0], tgt[1], n))
            p_rows.append(pot)
    reduced = LocalOptInstance(
        big, m,
        table_map(1, big, big, f_rows, label="level_stacked"),
        table_map(1, big, m, p_rows, label="level_potential"),
    )

    def pullback(cert):
        _, x = unpack_pair(cert.x, n)
        return _first_verified(
            "localopt_unit_step", inst,
            [Certificate.local_opt(x), Certificate.local_opt(f_tab[x - 1])],
        )

    return ReductionArtifact("localopt_unit_step", inst, reduced, pullback)


def normalize_pipeline(inst: LocalOptInstance) -> ReductionArtifact:
    """Both normalizations in order, pullbacks chained."""
    first = normalize_unit_potential(inst)
    second = normalize_unit_step(first.reduced)
    return compose_artifacts(first, second, reduction_id="localopt_normalize")


def unit_step_law_holds(inst: LocalOptInstance) -> bool:
    """Exhaustive check: p(1)=1, element 1 stalls or climbs from potential 1,
    and every non-fixed point gains exactly one potential unit per step."""
    f_tab = core.as_unary_table(inst.f)
    p_tab = core.as_unary_table(inst.p)
    if p_tab[0] != 1:
        return False
    for x in range(1, (1 << inst.n) + 1):
        fx = f_tab[x - 1]
        if fx != x and p_tab[fx - 1] != p_tab[x - 1] + 1:
            return False
    return True


# ============================================================
# normalized local-opt -> quotient pigeon
# ============================================================


def reduce_localopt_to_qp(inst: LocalOptInstance) -> ReductionArtifact:
    """View a unit-step instance as quotient pigeon over the potential kernel.

    Points are related when their potentials agree, the collision map is
    the successor map, and the hole is element 1 (potential 1).  Because
    potentials off fixed points rise by exactly one unit, any verified
    clause-1/2/3 witness pair must contain a potential stall, and the
    verifier filter finds it.
    """
    if not unit_step_law_holds(inst):
        raise DomainError(
            "reduce_localopt_to_qp wants the unit-step normal form; "
            "run normalize_pipeline first"
        )
    reduced = QuotientPigeonInstance(
        inst.n, inst.f, kernel_relation(inst.p), 1
    )

    def pullback(cert):
        if cert.kind in ("qp_type1", "qp_type2", "qp_type3"):
            return _first_verified(
                "localopt_kernel_quotient", inst,
                [Certificate.local_opt(w) for w in cert.witnesses],
            )
        raise ReductionSoundnessError(
            "localopt_kernel_quotient",
            f"relation-axiom certificate {cert.kind} verified against a kernel relation",
        )

    return ReductionArtifact("localopt_kernel_quotient", inst, reduced, pullback)


def localopt_pipeline(inst: LocalOptInstance) -> ReductionArtifact:
    """Full chain: unit potential, unit step, kernel quotient."""
    norm = normalize_pipeline(inst)
    last = reduce_localopt_to_qp(norm.reduced)
    return compose_artifacts(norm, last, reduction_id="localopt_to_qp")
