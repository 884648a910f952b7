"""Solvers that find solutions constructively, and the brute enumerator.

Everything here is a second, independent route to the same answers the
verifier in `problems` defines; the test suite holds the two routes
against each other.  The walkers exploit totality arguments (a bounded
orbit must revisit a class; a strictly rising potential must stall), the
majority solver exploits the halving argument behind long-choice
sequences, and `enumerate_solutions` simply scans every candidate shape.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import core
from .core import DomainError, EvaluableMap, KernelFn, SizeLimitError
from .problems import (
    Certificate,
    ConstrainedLongChoiceInstance,
    LocalOptInstance,
    LongChoiceInstance,
    PigeonInstance,
    QuotientPigeonInstance,
    verify_solution,
)


@dataclass(frozen=True)
class WalkTrace:
    """Orbit of repeated map application, plus where it folded back.

    `elements` lists the visited points u_0, u_1, ...; `collision` is the
    index pair (j, i), j < i, at which u_i landed in the class of u_j (None
    if the walk never ran); `reason` says why the walk stopped.
    """

    elements: tuple[int, ...]
    collision: tuple[int, int] | None
    reason: str


def relation_matrix(e: EvaluableMap) -> np.ndarray:
    """Dense boolean matrix M[x-1, y-1] = e(x, y), with fast paths."""
    if e.arity != 2 or not e.boolean:
        raise DomainError("relation_matrix wants a binary boolean map")
    size = 1 << e.in_width
    if e.table is not None:
        return np.asarray(e.table, dtype=bool).reshape(size, size)
    if isinstance(e.fn, KernelFn):
        vals = np.asarray(e.fn.values)
        return vals[:, None] == vals[None, :]
    rows = core.as_relation_rows(e)
    return np.asarray(rows, dtype=bool)


def check_equivalence(e: EvaluableMap) -> Certificate | None:
    """First witness that e is not an equivalence relation, if any.

    Scans reflexivity, then symmetry, then transitivity; within each axiom
    the lexicographically first violating tuple wins.  Returns None when e
    really is an equivalence.
    """
    mat = relation_matrix(e)
    size = mat.shape[0]
    diag = np.diagonal(mat)
    if not diag.all():
        x = int(np.argmin(diag)) + 1
        return Certificate.qp(4, x)
    asym = mat != mat.T
    if asym.any():
        x, y = np.argwhere(asym)[0]
        return Certificate.qp(5, int(x) + 1, int(y) + 1)
    for x in range(size):
        row = mat[x]
        # pairs (y, z) with x~y, y~z but x!~z; distinctness enforced by
        # masking row/column x and the diagonal
        viol = row[:, None] & mat & ~row[None, :]
        viol[x, :] = False
        viol[:, x] = False
        np.fill_diagonal(viol, False)
        if viol.any():
            y, z = np.argwhere(viol)[0]
            return Certificate.qp(6, x + 1, int(y) + 1, int(z) + 1)
    return None


def solve_qp_walk(inst: QuotientPigeonInstance) -> tuple[Certificate, WalkTrace]:
    """Walk v_star under C until the orbit revisits a relation class.

    Relation-axiom violations are solutions in their own right and are
    surfaced before any walking happens.  Otherwise the walk u_0 = v_star,
    u_i = C(u_{i-1}) must fold back within 2^n steps; folding onto the
    head class yields a type-2 certificate, onto any later class a type-1
    collision.
    """
    violation = check_equivalence(inst.E)
    if violation is not None:
        return violation, WalkTrace((), None, "relation_violation")
    rows = core.as_relation_rows(inst.E)
    c_tab = core.as_unary_table(inst.C)
    u = [inst.v_star]
    limit = 1 << inst.n
    for i in range(1, limit + 1):
        nxt = c_tab[u[-1] - 1]
        u.append(nxt)
        row = rows[nxt - 1]
        for j in range(i):
            if row[u[j] - 1]:
                trace = WalkTrace(tuple(u), (j, i), "class_collision")
                if j == 0:
                    cert = Certificate.qp(2, u[i - 1])
                else:
                    cert = Certificate.qp(1, u[i - 1], u[j - 1])
                return cert, trace
    raise AssertionError(
        "orbit of length 2^n + 1 cannot avoid a class collision"
    )  # pragma: no cover - totality argument


def solve_localopt_walk(inst: LocalOptInstance, start: int = 1
                        ) -> tuple[Certificate, WalkTrace]:
    """Follow f while the potential strictly rises; the stall is a solution."""
    core.check_element(start, inst.n, "start")
    f_tab = core.as_unary_table(inst.f)
    p_tab = core.as_unary_table(inst.p)
    x = start
    visited = [x]
    while p_tab[f_tab[x - 1] - 1] > p_tab[x - 1]:
        x = f_tab[x - 1]
        visited.append(x)
    return Certificate.local_opt(x), WalkTrace(tuple(visited), None, "potential_stall")


def solve_long_choice_majority(
    inst: LongChoiceInstance | ConstrainedLongChoiceInstance,
) -> Certificate:
    """Build a feasible sequence by always keeping the majority side.

    After each pick the remaining pool splits by the freshly determined
    stage predicate; keeping the larger side (ties keep the 0 side) leaves
    at least half the pool, which is enough room for the picks still owed.
    """
    pool = list(range(1, (1 << inst.n) + 1))
    picks: list[int] = []
    for stage in range(inst.length):
        if stage == 0 and isinstance(inst, ConstrainedLongChoiceInstance):
            pick = inst.a0
        else:
            pick = min(pool)
        picks.append(pick)
        pool.remove(pick)
        if stage < len(inst.predicates):
            pred = inst.predicates[stage]
            zeros, ones = [], []
            for x in pool:
                (zeros if pred(*picks, x) == 0 else ones).append(x)
            pool = zeros if len(zeros) >= len(ones) else ones
    return Certificate.long_choice(picks)


# ============================================================
# exhaustive enumeration
# ============================================================


def enumerate_solutions(inst, limit: int | None = None) -> list[Certificate]:
    """Every certificate the verifier accepts, in (clause, witnesses) order.

    The scans are written against the clause definitions directly, not by
    calling verify_solution, so agreement between the two is a real check.
    `limit` truncates the output (the prefix is still deterministic).
    """
    if limit is not None and limit <= 0:
        return []
    if isinstance(inst, LocalOptInstance):
        out = _enum_local_opt(inst, limit)
    elif isinstance(inst, PigeonInstance):
        out = _enum_pigeon(inst, limit)
    elif isinstance(inst, QuotientPigeonInstance):
        out = _enum_qp(inst, limit)
    elif isinstance(inst, (LongChoiceInstance, ConstrainedLongChoiceInstance)):
        out = _enum_long_choice(inst, limit)
    else:
        raise DomainError(f"cannot enumerate for {type(inst).__name__}")
    return out


def _truncate(certs, limit):
    return certs if limit is None else certs[:limit]


def _enum_local_opt(inst, limit):
    f_tab = core.as_unary_table(inst.f)
    p_tab = core.as_unary_table(inst.p)
    certs = [
        Certificate.local_opt(x)
        for x in range(1, (1 << inst.n) + 1)
        if p_tab[x - 1] >= p_tab[f_tab[x - 1] - 1]
    ]
    return _truncate(certs, limit)


def _enum_pigeon(inst, limit):
    if inst.n > 8:
        raise SizeLimitError("pigeon enumeration beyond width 8 is off the desk")
    c_tab = core.as_unary_table(inst.C)
    size = 1 << inst.n
    certs = []
    for x in range(1, size + 1):
        cx = c_tab[x - 1]
        for y in range(1, size + 1):
            if x != y and cx == c_tab[y - 1]:
                certs.append(Certificate.pigeon_collision(x, y))
    for x in range(1, size + 1):
        if c_tab[x - 1] == inst.v_star:
            certs.append(Certificate.pigeon_hit(x))
    return _truncate(certs, limit)


def _qp_pair_pools(inst):
    """Vectorized witness pools for the clause types that need no triple
    scan, as (type, index-row array) pairs in clause order."""
    mat = relation_matrix(inst.E)
    c_idx = np.asarray(core.as_unary_table(inst.C)) - 1
    v_idx = inst.v_star - 1
    image_rel = mat[np.ix_(c_idx, c_idx)]  # image_rel[x-1, y-1] = E(C(x), C(y))
    return mat, [
        (1, np.argwhere(~mat & image_rel)),
        (2, np.flatnonzero(mat[c_idx, v_idx])[:, None]),
        (3, np.argwhere(mat & ~image_rel)),
        (4, np.flatnonzero(~np.diagonal(mat))[:, None]),
        (5, np.argwhere(mat != mat.T)),
    ]


def _enum_qp(inst, limit):
    if inst.n > 8:
        raise SizeLimitError("quotient-pigeon enumeration beyond width 8 is off the desk")
    mat, pools = _qp_pair_pools(inst)
    certs: list[Certificate] = []

    def room():
        return limit is None or len(certs) < limit

    for kind, rows in pools:
        for row in rows:
            if not room():
                break
            certs.append(Certificate.qp(kind, *(int(v) + 1 for v in row)))
    if room():
        size = mat.shape[0]
        for x in range(size):
            row = mat[x]
            viol = row[:, None] & mat & ~row[None, :]
            viol[x, :] = False
            viol[:, x] = False
            np.fill_diagonal(viol, False)
            for y, z in np.argwhere(viol):
                certs.append(Certificate.qp(6, x + 1, int(y) + 1, int(z) + 1))
                if not room():
                    break
            if not room():
                break
    return _truncate(certs, limit)


def _enum_long_choice(inst, limit):
    if inst.n > 4:
        raise SizeLimitError("long-choice enumeration beyond width 4 is off the desk")
    size = 1 << inst.n
    length = inst.length
    preds = inst.predicates
    forced_head = inst.a0 if isinstance(inst, ConstrainedLongChoiceInstance) else None
    certs: list[Certificate] = []

    # depth-first, ascending at each slot; stage i pins its constant with
    # the entry at slot i+1, so consts always covers stages 0..len(consts)-1
    def extend(seq: list[int], consts: list[int]):
        if limit is not None and len(certs) >= limit:
            return
        d = len(seq)
        if d == length:
            certs.append(Certificate.long_choice(seq))
            return
        for x in range(1, size + 1):
            if x in seq:
                continue
            if d == 0 and forced_head is not None and x != forced_head:
                continue
            if any(preds[i](*seq[: i + 1], x) != consts[i] for i in range(len(consts))):
                continue
            new_consts = consts
            if d >= 1 and d - 1 < len(preds):
                new_consts = consts + [preds[d - 1](*seq[:d], x)]
            extend(seq + [x], new_consts)

    extend([], [])
    return _truncate(certs, limit)


def oracle_accepts(inst, cert) -> bool:
    """Convenience: does the verifier accept this certificate?"""
    return bool(verify_solution(inst, cert))


def sample_solutions(inst, count: int, rng, *, budget: int | None = None
                     ) -> list[Certificate]:
    """Up to `count` distinct verified certificates by rejection sampling.

    The honest sampling route for domains too wide to enumerate: draw a
    candidate shape, verify it, keep the accepted ones.  Returns fewer
    than asked only when the draw budget (default 400 per requested
    certificate) runs dry.
    """
    size = 1 << inst.n
    budget = budget if budget is not None else 400 * count

    if isinstance(inst, QuotientPigeonInstance):
        # pair clauses admit direct pool sampling at any legal width;
        # rejection below only has to cover the triple clause, which is
        # dense whenever it is nonempty
        _, pools = _qp_pair_pools(inst)
        total = sum(len(rows) for _, rows in pools)
        if total:
            picks = rng.sample(range(total), min(count, total))
            found = []
            for pos in sorted(picks):
                for kind, rows in pools:
                    if pos < len(rows):
                        cert = Certificate.qp(
                            kind, *(int(v) + 1 for v in rows[pos]))
                        assert verify_solution(inst, cert), cert
                        found.append(cert)
                        break
                    pos -= len(rows)
            return found

    def draw() -> Certificate:
        if isinstance(inst, LocalOptInstance):
            return Certificate.local_opt(rng.randint(1, size))
        if isinstance(inst, PigeonInstance):
            if rng.random() < 0.5:
                return Certificate.pigeon_hit(rng.randint(1, size))
            return Certificate.pigeon_collision(rng.randint(1, size),
                                                rng.randint(1, size))
        if isinstance(inst, QuotientPigeonInstance):
            t = rng.randint(1, 6)
            arity = {1: 2, 2: 1, 3: 2, 4: 1, 5: 2, 6: 3}[t]
            return Certificate.qp(t, *(rng.randint(1, size) for _ in range(arity)))
        raise DomainError(f"no sampler for instance kind {inst.kind!r}")

    found: list[Certificate] = []
    seen: set[Certificate] = set()
    for _ in range(budget):
        if len(found) >= count:
            break
        cert = draw()
        if cert not in seen and verify_solution(inst, cert):
            seen.add(cert)
            found.append(cert)
    return found
