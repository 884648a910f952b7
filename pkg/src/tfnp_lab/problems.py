"""Problem instances and the solution verifier.

Five search problems live here.  Each instance is a frozen dataclass whose
maps are validated against the declared widths at construction, and
`verify_solution` is the single arbiter of what counts as a solution:
oracles, reductions, the game engine and the HTTP layer all defer to it.

Solution shapes:

* local_opt            x with p(x) >= p(f(x))
* pigeon_collision     x != y with C(x) == C(y)
* pigeon_hit           x with C(x) == v_star
* qp_type1..qp_type6   the six quotient-pigeon certificate clauses: a
                       collision across relation classes, a hit of the
                       v_star class, a relation-breaking pair, and the
                       three relation-axiom violations (reflexivity,
                       symmetry, transitivity)
* long_choice          a full-length sequence of distinct elements on
                       which every stage predicate is constant over the
                       later entries

Rejections carry machine-readable codes; verifying a certificate of the
wrong kind raises KindMismatchError instead of rejecting.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .core import DomainError, EvaluableMap, check_element, check_width


class KindMismatchError(TypeError):
    """Certificate kind does not belong to the instance kind."""


# reject codes
OUT_OF_DOMAIN = "out_of_domain"
POTENTIAL_INCREASES = "potential_strictly_increases"
WITNESSES_EQUAL = "witnesses_equal"
IMAGES_DIFFER = "images_differ"
NOT_VSTAR = "image_is_not_vstar"
INPUTS_EQUIVALENT = "inputs_equivalent"
IMAGES_NOT_EQUIVALENT = "images_not_equivalent"
IMAGE_CLASS_MISSES_VSTAR = "image_class_misses_vstar"
INPUTS_NOT_EQUIVALENT = "inputs_not_equivalent"
IMAGES_EQUIVALENT = "images_equivalent"
REFLEXIVE_AT_WITNESS = "relation_reflexive_at_witness"
SYMMETRIC_AT_WITNESS = "relation_symmetric_at_witness"
WITNESSES_NOT_DISTINCT = "witnesses_not_distinct"
CHAIN_BROKEN = "transitivity_chain_broken"
TRANSITIVE_AT_WITNESS = "relation_transitive_at_witness"
BAD_LENGTH = "sequence_length_wrong"
PREDICATE_NOT_CONSTANT = "stage_predicate_not_constant"
WRONG_HEAD = "sequence_head_not_pinned"


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    code: str | None = None
    detail: tuple = ()

    def __bool__(self) -> bool:
        return self.accepted


ACCEPT = Verdict(True)


def reject(code: str, *detail) -> Verdict:
    return Verdict(False, code, tuple(detail))


@dataclass(frozen=True)
class Certificate:
    kind: str
    witnesses: tuple[int, ...]

    @property
    def x(self) -> int:
        return self.witnesses[0]

    @property
    def y(self) -> int:
        return self.witnesses[1]

    @property
    def z(self) -> int:
        return self.witnesses[2]

    @classmethod
    def local_opt(cls, x):
        return cls("local_opt", (x,))

    @classmethod
    def pigeon_collision(cls, x, y):
        return cls("pigeon_collision", (x, y))

    @classmethod
    def pigeon_hit(cls, x):
        return cls("pigeon_hit", (x,))

    @classmethod
    def qp(cls, type_index: int, *witnesses):
        if not 1 <= type_index <= 6:
            raise DomainError(f"no quotient-pigeon clause {type_index}")
        return cls(f"qp_type{type_index}", tuple(witnesses))

    @classmethod
    def long_choice(cls, sequence):
        return cls("long_choice", tuple(sequence))


# number of witnesses each certificate kind carries (long_choice varies)
_WITNESS_COUNT = {
    "local_opt": 1,
    "pigeon_collision": 2,
    "pigeon_hit": 1,
    "qp_type1": 2,
    "qp_type2": 1,
    "qp_type3": 2,
    "qp_type4": 1,
    "qp_type5": 2,
    "qp_type6": 3,
}


# ============================================================
# instances
# ============================================================


@dataclass(frozen=True)
class LocalOptInstance:
    """Find a point whose potential does not increase along f."""

    n: int
    m: int
    f: EvaluableMap  # successor map [2^n] -> [2^n]
    p: EvaluableMap  # potential [2^n] -> [2^m]

    kind = "local_opt"

    def __post_init__(self):
        check_width(self.n, "n")
        check_width(self.m, "m")
        _expect(self.f, 1, self.n, self.n, False, "f")
        _expect(self.p, 1, self.n, self.m, False, "p")


@dataclass(frozen=True)
class PigeonInstance:
    """Find a collision of C or a preimage of the hole v_star."""

    n: int
    C: EvaluableMap
    v_star: int

    kind = "pigeon"

    def __post_init__(self):
        check_width(self.n, "n")
        _expect(self.C, 1, self.n, self.n, False, "C")
        check_element(self.v_star, self.n, "v_star")


@dataclass(frozen=True)
class QuotientPigeonInstance:
    """Pigeon modulo a claimed equivalence relation E.

    E is taken exactly as given: if it fails reflexivity, symmetry or
    transitivity anywhere, the failure itself is a certificate (types 4-6).
    """

    n: int
    C: EvaluableMap
    E: EvaluableMap
    v_star: int

    kind = "quotient_pigeon"

    def __post_init__(self):
        check_width(self.n, "n")
        _expect(self.C, 1, self.n, self.n, False, "C")
        _expect(self.E, 2, self.n, 1, True, "E")
        check_element(self.v_star, self.n, "v_star")


@dataclass(frozen=True)
class LongChoiceInstance:
    """Find n+1 distinct elements on which each stage predicate settles.

    predicates[i] takes i+2 arguments: the chosen prefix a_0..a_i plus a
    probe point, and the sequence is a solution when for every stage i the
    predicate value at the later entries a_j (j > i) is constant.
    """

    n: int
    predicates: tuple[EvaluableMap, ...]

    kind = "long_choice"

    def __post_init__(self):
        check_width(self.n, "n")
        if len(self.predicates) != max(self.n - 1, 0):
            raise DomainError(
                f"need {max(self.n - 1, 0)} stage predicates for width {self.n}, "
                f"got {len(self.predicates)}"
            )
        for i, pred in enumerate(self.predicates):
            _expect(pred, i + 2, self.n, 1, True, f"predicates[{i}]")

    @property
    def length(self) -> int:
        return self.n + 1


@dataclass(frozen=True)
class ConstrainedLongChoiceInstance:
    """Long choice with the first pick pinned to a known element."""

    n: int
    predicates: tuple[EvaluableMap, ...]
    a0: int

    kind = "constrained_long_choice"

    def __post_init__(self):
        check_width(self.n, "n")
        if len(self.predicates) != max(self.n - 1, 0):
            raise DomainError(
                f"need {max(self.n - 1, 0)} stage predicates for width {self.n}, "
                f"got {len(self.predicates)}"
            )
        for i, pred in enumerate(self.predicates):
            _expect(pred, i + 2, self.n, 1, True, f"predicates[{i}]")
        check_element(self.a0, self.n, "a0")

    @property
    def length(self) -> int:
        return self.n + 1

    def unconstrained(self) -> LongChoiceInstance:
        return LongChoiceInstance(self.n, self.predicates)


ProblemInstance = Union[
    LocalOptInstance,
    PigeonInstance,
    QuotientPigeonInstance,
    LongChoiceInstance,
    ConstrainedLongChoiceInstance,
]


def _expect(m: EvaluableMap, arity, in_width, out_width, boolean, name):
    if not isinstance(m, EvaluableMap):
        raise DomainError(f"{name} must be an EvaluableMap")
    if (m.arity, m.in_width, m.boolean) != (arity, in_width, boolean):
        raise DomainError(
            f"{name} has signature (arity={m.arity}, in={m.in_width}, "
            f"boolean={m.boolean}); wanted ({arity}, {in_width}, {boolean})"
        )
    if not boolean and m.out_width != out_width:
        raise DomainError(f"{name} out_width {m.out_width} != {out_width}")


# ============================================================
# verification
# ============================================================


def verify_solution(inst: ProblemInstance, cert: Certificate) -> Verdict:
    """Check a certificate against an instance. Deterministic, total."""
    checker = _CHECKERS.get(type(inst))
    if checker is None:
        raise KindMismatchError(f"unknown instance type {type(inst).__name__}")
    _check_kind(inst, cert)
    bad = _domain_check(inst.n, cert)
    if bad is not None:
        return bad
    return checker(inst, cert)


def _check_kind(inst, cert):
    ik = inst.kind
    ck = cert.kind
    ok = (
        (ik == "local_opt" and ck == "local_opt")
        or (ik == "pigeon" and ck in ("pigeon_collision", "pigeon_hit"))
        or (ik == "quotient_pigeon" and ck in _WITNESS_COUNT and ck.startswith("qp_"))
        or (ik in ("long_choice", "constrained_long_choice") and ck == "long_choice")
    )
    if not ok:
        raise KindMismatchError(f"certificate kind {ck!r} does not fit instance kind {ik!r}")
    want = _WITNESS_COUNT.get(ck)
    if want is not None and len(cert.witnesses) != want:
        raise KindMismatchError(
            f"{ck} carries {want} witnesses, got {len(cert.witnesses)}"
        )


def _domain_check(n, cert):
    for w in cert.witnesses:
        if not isinstance(w, int) or isinstance(w, bool) or not 1 <= w <= (1 << n):
            return reject(OUT_OF_DOMAIN, w)
    return None


def _verify_local_opt(inst, cert):
    x = cert.x
    px, pfx = inst.p(x), inst.p(inst.f(x))
    if px >= pfx:
        return ACCEPT
    return reject(POTENTIAL_INCREASES, px, pfx)


def _verify_pigeon(inst, cert):
    if cert.kind == "pigeon_collision":
        x, y = cert.witnesses
        if x == y:
            return reject(WITNESSES_EQUAL, x)
        cx, cy = inst.C(x), inst.C(y)
        if cx != cy:
            return reject(IMAGES_DIFFER, cx, cy)
        return ACCEPT
    cx = inst.C(cert.x)
    if cx != inst.v_star:
        return reject(NOT_VSTAR, cx)
    return ACCEPT


def _verify_quotient_pigeon(inst, cert):
    C, E = inst.C, inst.E
    k = cert.kind
    if k == "qp_type1":
        # collision across classes: the pair is not related but the images are
        x, y = cert.witnesses
        if E(x, y) != 0:
            return reject(INPUTS_EQUIVALENT, x, y)
        if E(C(x), C(y)) != 1:
            return reject(IMAGES_NOT_EQUIVALENT, C(x), C(y))
        return ACCEPT
    if k == "qp_type2":
        x = cert.x
        if E(C(x), inst.v_star) != 1:
            return reject(IMAGE_CLASS_MISSES_VSTAR, C(x))
        return ACCEPT
    if k == "qp_type3":
        x, y = cert.witnesses
        if E(x, y) != 1:
            return reject(INPUTS_NOT_EQUIVALENT, x, y)
        if E(C(x), C(y)) != 0:
            return reject(IMAGES_EQUIVALENT, C(x), C(y))
        return ACCEPT
    if k == "qp_type4":
        x = cert.x
        if E(x, x) != 0:
            return reject(REFLEXIVE_AT_WITNESS, x)
        return ACCEPT
    if k == "qp_type5":
        x, y = cert.witnesses
        if E(x, y) == E(y, x):
            return reject(SYMMETRIC_AT_WITNESS, E(x, y))
        return ACCEPT
    # qp_type6
    x, y, z = cert.witnesses
    if len({x, y, z}) != 3:
        return reject(WITNESSES_NOT_DISTINCT, x, y, z)
    if E(x, y) != 1 or E(y, z) != 1:
        return reject(CHAIN_BROKEN, E(x, y), E(y, z))
    if E(x, z) != 0:
        return reject(TRANSITIVE_AT_WITNESS, x, z)
    return ACCEPT


def _verify_long_choice(inst, cert):
    seq = cert.witnesses
    if len(seq) != inst.length:
        return reject(BAD_LENGTH, len(seq), inst.length)
    if len(set(seq)) != len(seq):
        return reject(WITNESSES_NOT_DISTINCT, *seq)
    for i, pred in enumerate(inst.predicates):
        prefix = seq[: i + 1]
        values = {pred(*prefix, seq[j]) for j in range(i + 1, len(seq))}
        if len(values) > 1:
            return reject(PREDICATE_NOT_CONSTANT, i)
    return ACCEPT


def _verify_constrained(inst, cert):
    if cert.witnesses and cert.witnesses[0] != inst.a0:
        bad = _domain_check(inst.n, cert)
        if bad is not None:
            return bad
        return reject(WRONG_HEAD, cert.witnesses[0], inst.a0)
    return _verify_long_choice(inst, cert)


_CHECKERS = {
    LocalOptInstance: _verify_local_opt,
    PigeonInstance: _verify_pigeon,
    QuotientPigeonInstance: _verify_quotient_pigeon,
    LongChoiceInstance: _verify_long_choice,
    ConstrainedLongChoiceInstance: _verify_constrained,
}
