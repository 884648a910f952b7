"""Instance validation and the solution verifier."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tfnp_lab.core import (
    DomainError,
    constant_map,
    equality_relation,
    identity_map,
    table_map,
)
from tfnp_lab.problems import (
    Certificate,
    ConstrainedLongChoiceInstance,
    KindMismatchError,
    LocalOptInstance,
    LongChoiceInstance,
    PigeonInstance,
    QuotientPigeonInstance,
    verify_solution,
)

from conftest import qp_equality


def const_pred(bit, arity, n):
    table = [bit] * (1 << (arity * n))
    return table_map(arity, n, 1, table, boolean=True)


def lc_constant_zero(n):
    return LongChoiceInstance(n, tuple(const_pred(0, i + 2, n) for i in range(n - 1)))


# ------------------------------------------------------------
# construction guards
# ------------------------------------------------------------


def test_instance_field_validation():
    with pytest.raises(DomainError):
        LocalOptInstance(2, 2, identity_map(3), identity_map(2))  # f width clash
    with pytest.raises(DomainError):
        PigeonInstance(2, identity_map(2), 5)  # hole out of range
    with pytest.raises(DomainError):
        QuotientPigeonInstance(2, identity_map(2), identity_map(2), 1)  # E not boolean
    with pytest.raises(DomainError):
        LongChoiceInstance(3, (const_pred(0, 2, 3),))  # needs n-1 = 2 predicates
    with pytest.raises(DomainError):
        ConstrainedLongChoiceInstance(2, (const_pred(0, 2, 2),), 5)


def test_constrained_unconstrained_projection():
    c = ConstrainedLongChoiceInstance(2, (const_pred(0, 2, 2),), 3)
    assert c.unconstrained() == LongChoiceInstance(2, c.predicates)


def test_certificate_helpers():
    c = Certificate.qp(1, 3, 1)
    assert c.kind == "qp_type1" and (c.x, c.y) == (3, 1)
    assert Certificate.long_choice([1, 2, 3]).witnesses == (1, 2, 3)
    with pytest.raises(DomainError):
        Certificate.qp(7, 1)


# ------------------------------------------------------------
# verifier: accepts
# ------------------------------------------------------------


def test_identity_localopt_accepts_everything():
    inst = LocalOptInstance(2, 2, identity_map(2), identity_map(2))
    for x in range(1, 5):
        assert verify_solution(inst, Certificate.local_opt(x))


def test_constant_image_hits_hole_class():
    inst = QuotientPigeonInstance(2, constant_map(3, 2), equality_relation(2), 3)
    assert verify_solution(inst, Certificate.qp(2, 3))


def test_constant_predicates_accept_distinct_sequences():
    inst = lc_constant_zero(2)
    assert verify_solution(inst, Certificate.long_choice((2, 4, 1)))
    v = verify_solution(inst, Certificate.long_choice((2, 4, 2)))
    assert not v and v.code == "witnesses_not_distinct"


def test_pigeon_accepts():
    c = table_map(1, 2, 2, [2, 2, 3, 4])
    inst = PigeonInstance(2, c, 1)
    assert verify_solution(inst, Certificate.pigeon_collision(1, 2))
    hole_hit = PigeonInstance(2, c, 3)
    assert verify_solution(hole_hit, Certificate.pigeon_hit(3))


# ------------------------------------------------------------
# verifier: rejects, with codes
# ------------------------------------------------------------


def test_localopt_reject_code():
    f = table_map(1, 2, 2, [2, 3, 3, 1])
    p = identity_map(2)
    inst = LocalOptInstance(2, 2, f, p)
    v = verify_solution(inst, Certificate.local_opt(1))
    assert not v and v.code == "potential_strictly_increases"
    assert verify_solution(inst, Certificate.local_opt(3))


def test_pigeon_reject_codes():
    inst = PigeonInstance(2, identity_map(2), 1)
    assert verify_solution(inst, Certificate.pigeon_collision(2, 2)).code == "witnesses_equal"
    assert verify_solution(inst, Certificate.pigeon_collision(1, 2)).code == "images_differ"
    assert verify_solution(inst, Certificate.pigeon_hit(2)).code == "image_is_not_vstar"


def test_qp_reject_codes():
    inst = qp_equality(2, [2, 3, 2, 1])
    assert verify_solution(inst, Certificate.qp(1, 2, 2)).code == "inputs_equivalent"
    assert verify_solution(inst, Certificate.qp(1, 1, 2)).code == "images_not_equivalent"
    assert verify_solution(inst, Certificate.qp(2, 3)).code == "image_class_misses_vstar"
    assert verify_solution(inst, Certificate.qp(3, 1, 2)).code == "inputs_not_equivalent"
    assert verify_solution(inst, Certificate.qp(4, 1)).code == "relation_reflexive_at_witness"
    assert verify_solution(inst, Certificate.qp(5, 1, 2)).code == "relation_symmetric_at_witness"
    assert verify_solution(inst, Certificate.qp(6, 1, 1, 2)).code == "witnesses_not_distinct"
    assert verify_solution(inst, Certificate.qp(6, 1, 2, 3)).code == "transitivity_chain_broken"
    # equality collision accepted: C(1)=C(3)=2 with 1 != 3
    assert verify_solution(inst, Certificate.qp(1, 3, 1))


def test_qp_transitivity_witness():
    # relation: 1~2, 2~3 (and reflexive), but 1 !~ 3
    rows = [
        [1, 1, 0, 0],
        [1, 1, 1, 0],
        [0, 1, 1, 0],
        [0, 0, 0, 1],
    ]
    e = table_map(2, 2, 1, [b for row in rows for b in row], boolean=True)
    inst = QuotientPigeonInstance(2, identity_map(2), e, 4)
    assert verify_solution(inst, Certificate.qp(6, 1, 2, 3))


def test_long_choice_reject_codes():
    inst = lc_constant_zero(2)
    assert verify_solution(inst, Certificate.long_choice((1, 2))).code == "sequence_length_wrong"
    # a predicate that distinguishes later entries
    flip = table_map(2, 2, 1, [x % 2 for x in range(16)], boolean=True)
    picky = LongChoiceInstance(2, (flip,))
    v = verify_solution(picky, Certificate.long_choice((1, 2, 3)))
    assert not v and v.code == "stage_predicate_not_constant"


def test_constrained_head_pinned():
    inst = ConstrainedLongChoiceInstance(2, (const_pred(1, 2, 2),), 4)
    assert verify_solution(inst, Certificate.long_choice((4, 1, 2)))
    v = verify_solution(inst, Certificate.long_choice((1, 4, 2)))
    assert not v and v.code == "sequence_head_not_pinned"


def test_out_of_domain_witness():
    inst = PigeonInstance(2, identity_map(2), 1)
    v = verify_solution(inst, Certificate.pigeon_hit(9))
    assert not v and v.code == "out_of_domain"


def test_kind_mismatch_raises():
    inst = PigeonInstance(2, identity_map(2), 1)
    with pytest.raises(KindMismatchError):
        verify_solution(inst, Certificate.local_opt(1))
    with pytest.raises(KindMismatchError):
        verify_solution(inst, Certificate("pigeon_hit", (1, 2)))  # witness count


# ------------------------------------------------------------
# properties
# ------------------------------------------------------------


@given(st.integers(1, 3), st.randoms(use_true_random=False))
def test_localopt_verifier_matches_definition(n, rng):
    size = 1 << n
    f = table_map(1, n, n, [rng.randrange(1, size + 1) for _ in range(size)])
    p = table_map(1, n, n, [rng.randrange(1, size + 1) for _ in range(size)])
    inst = LocalOptInstance(n, n, f, p)
    for x in range(1, size + 1):
        got = bool(verify_solution(inst, Certificate.local_opt(x)))
        assert got == (p(x) >= p(f(x)))


@given(st.integers(1, 3), st.randoms(use_true_random=False))
def test_verdict_is_deterministic(n, rng):
    size = 1 << n
    c = table_map(1, n, n, [rng.randrange(1, size + 1) for _ in range(size)])
    inst = PigeonInstance(n, c, rng.randrange(1, size + 1))
    x = rng.randrange(1, size + 1)
    y = rng.randrange(1, size + 1)
    cert = Certificate.pigeon_collision(x, y)
    assert verify_solution(inst, cert) == verify_solution(inst, cert)
