"""Reductions: constructions, pull-backs, and the composition harness."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tfnp_lab.core import DomainError, identity_map, table_map
from tfnp_lab.generators import localopt_instance, pigeon_instance, qp_instance
from tfnp_lab.oracles import enumerate_solutions, solve_qp_walk
from tfnp_lab.problems import (
    Certificate,
    LocalOptInstance,
    PigeonInstance,
    verify_solution,
)
from tfnp_lab.reductions import (
    PullbackFailure,
    ReductionSoundnessError,
    apply_pullback,
    compose_artifacts,
    defix_pipeline,
    double_domain_defixing,
    localopt_pipeline,
    normalize_pipeline,
    normalize_unit_potential,
    normalize_unit_step,
    recover_from_prefix_collision,
    redirect_vstar_class,
    reduce_localopt_to_qp,
    reduce_pigeon_to_qp,
    unit_step_law_holds,
)

from conftest import qp_equality


# ------------------------------------------------------------
# pigeon -> quotient pigeon
# ------------------------------------------------------------


def test_pigeon_to_qp_relation_is_equality():
    inst = pigeon_instance(2, 0)
    art = reduce_pigeon_to_qp(inst)
    assert art.reduced.E(3, 3) == 1
    assert art.reduced.E(3, 4) == 0


def test_pigeon_to_qp_example_collision():
    inst = PigeonInstance(2, table_map(1, 2, 2, [2, 2, 1, 3]), 4)
    art = reduce_pigeon_to_qp(inst)
    reduced_sols = enumerate_solutions(art.reduced)
    assert Certificate.qp(1, 1, 2) in reduced_sols
    back = apply_pullback(art, Certificate.qp(1, 1, 2))
    assert back == Certificate.pigeon_collision(1, 2)
    assert verify_solution(inst, back)


def test_pigeon_to_qp_hit_passes_through():
    inst = PigeonInstance(2, table_map(1, 2, 2, [4, 2, 1, 3]), 4)
    art = reduce_pigeon_to_qp(inst)
    assert apply_pullback(art, Certificate.qp(2, 1)) == Certificate.pigeon_hit(1)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3), st.integers(0, 10_000))
def test_pigeon_to_qp_every_reduced_solution_pulls_back(n, seed):
    inst = pigeon_instance(n, seed)
    art = reduce_pigeon_to_qp(inst)
    for cert in enumerate_solutions(art.reduced):
        assert verify_solution(inst, apply_pullback(art, cert))


# ------------------------------------------------------------
# hole-class redirection
# ------------------------------------------------------------


def test_redirect_noop_when_class_unoccupied():
    # nothing maps into the class of v*=4 under equality
    inst = qp_equality(2, [2, 3, 2, 1], v_star=4)
    art = redirect_vstar_class(inst)
    for x in range(1, 5):
        assert art.reduced.C(x) == inst.C(x)


def test_redirect_moves_hole_image():
    # C(1) = 5 = v*; redirect with u* = 2
    inst = qp_equality(3, [5, 3, 4, 6, 7, 8, 2, 1], v_star=5)
    art = redirect_vstar_class(inst, u_star=2)
    assert art.reduced.C(1) == 2
    for x in range(2, 9):
        assert art.reduced.C(x) == inst.C(x)
    # a reduced certificate naming the re-aimed point pulls back to a hit
    back = apply_pullback(art, Certificate.qp(1, 1, 7))
    assert back == Certificate.qp(2, 1)
    assert verify_solution(inst, back)


def test_redirect_leaves_relation_certificates_alone():
    inst = qp_instance("random", 3, 19)
    art = redirect_vstar_class(inst)
    for cert in enumerate_solutions(art.reduced):
        if cert.kind in ("qp_type4", "qp_type5", "qp_type6"):
            assert apply_pullback(art, cert) == cert


def test_redirect_guards_u_star():
    inst = qp_equality(2, [2, 3, 2, 1])
    with pytest.raises(DomainError):
        redirect_vstar_class(inst, u_star=inst.v_star)


# ------------------------------------------------------------
# domain doubling
# ------------------------------------------------------------


def test_double_domain_construction():
    inst = qp_equality(2, [2, 3, 2, 1])
    art = double_domain_defixing(inst)
    red = art.reduced
    assert red.n == 3
    size = 1 << 2
    for x in range(1, size + 1):
        # (0, x) -> (1, C(x)): low half maps into the high half
        assert red.C(x) == size + inst.C(x)
        assert red.C(size + x) == inst.C(x)
    # differing lead bits never relate
    assert red.E(3, 4 + 3) == 0


def test_double_domain_kills_fixed_classes():
    for seed in range(30):
        inst = qp_instance("random", 2, seed)
        red = double_domain_defixing(inst).reduced
        for xi in range(1, (1 << red.n) + 1):
            assert red.E(red.C(xi), xi) == 0


def test_double_domain_pullback_strips_high_bit():
    inst = qp_equality(2, [2, 3, 2, 1], v_star=4)
    art = double_domain_defixing(inst)
    cert = next(c for c in enumerate_solutions(art.reduced) if c.kind == "qp_type1")
    back = apply_pullback(art, cert)
    assert verify_solution(inst, back)
    n = inst.n
    assert back.witnesses == tuple((w - 1) % (1 << n) + 1 for w in cert.witnesses)


def test_defix_pipeline_seeded_roundtrip():
    inst = qp_instance("random", 2, 11)
    art = defix_pipeline(inst)
    red = art.reduced
    for xi in range(1, (1 << red.n) + 1):
        assert red.E(red.C(xi), xi) == 0
    pulled = [apply_pullback(art, c) for c in enumerate_solutions(red)]
    assert pulled and all(verify_solution(inst, c) for c in pulled)


# ------------------------------------------------------------
# orbit collision recovery
# ------------------------------------------------------------


def test_recovery_first_step_is_class_hit(walk_instance):
    _, trace = solve_qp_walk(qp_equality(2, [1, 3, 4, 2]))
    cert = recover_from_prefix_collision(qp_equality(2, [1, 3, 4, 2]), trace)
    assert cert == Certificate.qp(2, 1)


def test_recovery_matches_walk_example(walk_instance):
    walk_cert, trace = solve_qp_walk(walk_instance)
    assert recover_from_prefix_collision(walk_instance, trace) == walk_cert
    assert walk_cert == Certificate.qp(1, 3, 1)


def test_recovery_needs_a_collision(walk_instance):
    from tfnp_lab.oracles import WalkTrace

    with pytest.raises(DomainError):
        recover_from_prefix_collision(walk_instance, WalkTrace((1, 2), None, "x"))


# ------------------------------------------------------------
# local-opt normalizations
# ------------------------------------------------------------


def test_unit_potential_noop_shape():
    # p(1)=1 already and nothing else maps to 1
    f = table_map(1, 2, 2, [2, 3, 4, 4])
    p = table_map(1, 2, 2, [1, 2, 3, 4])
    art = normalize_unit_potential(LocalOptInstance(2, 2, f, p))
    for x in range(1, 5):
        assert art.reduced.f(x) == f(x)
        assert art.reduced.p(x) == p(x)


def test_unit_potential_grounds_element_one():
    f = table_map(1, 2, 2, [3, 1, 2, 4])
    p = table_map(1, 2, 2, [4, 2, 3, 1])
    inst = LocalOptInstance(2, 2, f, p)
    art = normalize_unit_potential(inst)
    assert art.reduced.p(1) == 1
    # successors that hit 1 are forwarded to f(1) = 3
    assert art.reduced.f(2) == 3


def test_unit_step_requires_grounding_first():
    f = identity_map(2)
    p = table_map(1, 2, 2, [2, 2, 2, 2])
    with pytest.raises(DomainError):
        normalize_unit_step(LocalOptInstance(2, 2, f, p))


def test_unit_step_law_on_identity():
    # f' = identity: every vertex is fixed, the law holds vacuously
    f = identity_map(2)
    p = table_map(1, 2, 2, [1, 2, 3, 4])
    art = normalize_unit_step(LocalOptInstance(2, 2, f, p))
    assert unit_step_law_holds(art.reduced)


def test_unit_step_chain_counts_by_one():
    # 1 -> 2 -> 3 -> 3 with the position as potential
    f = table_map(1, 2, 2, [2, 3, 3, 4])
    p = table_map(1, 2, 2, [1, 2, 3, 4])
    inst = LocalOptInstance(2, 2, f, p)
    art = normalize_unit_step(inst)
    red = art.reduced
    assert unit_step_law_holds(red)
    assert red.p(1) == 1
    f_tab = [red.f(x) for x in range(1, (1 << red.n) + 1)]
    p_tab = [red.p(x) for x in range(1, (1 << red.n) + 1)]
    for x, fx in enumerate(f_tab, start=1):
        if fx != x:
            assert p_tab[fx - 1] == p_tab[x - 1] + 1


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 3), st.integers(2, 3), st.integers(0, 10_000))
def test_normalize_pipeline_invariants_and_pullbacks(n, m, seed):
    inst = localopt_instance(n, m, seed)
    art = normalize_pipeline(inst)
    red = art.reduced
    assert unit_step_law_holds(red)
    assert red.p(1) == 1
    for cert in enumerate_solutions(red, limit=20):
        assert verify_solution(inst, apply_pullback(art, cert))


# ------------------------------------------------------------
# normalized local-opt -> quotient pigeon
# ------------------------------------------------------------


def test_kernel_quotient_requires_normal_form():
    # x=1 is non-fixed and jumps two potential levels
    f = table_map(1, 2, 2, [2, 3, 4, 4])
    p = table_map(1, 2, 2, [1, 3, 2, 4])
    inst = LocalOptInstance(2, 2, f, p)
    assert not unit_step_law_holds(inst)
    with pytest.raises(DomainError):
        reduce_localopt_to_qp(inst)


def test_kernel_quotient_relation_is_potential_kernel():
    inst = normalize_pipeline(localopt_instance(2, 2, 13)).reduced
    art = reduce_localopt_to_qp(inst)
    e, p = art.reduced.E, inst.p
    for x in range(1, (1 << inst.n) + 1):
        for y in range(1, (1 << inst.n) + 1):
            assert e(x, y) == (1 if p(x) == p(y) else 0)


def test_kernel_quotient_type2_pullback():
    inst = normalize_pipeline(localopt_instance(2, 2, 13)).reduced
    art = reduce_localopt_to_qp(inst)
    for cert in enumerate_solutions(art.reduced, limit=40):
        back = apply_pullback(art, cert)
        assert verify_solution(inst, back)


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 3), st.integers(0, 10_000))
def test_full_localopt_pipeline_roundtrip(n, seed):
    inst = localopt_instance(n, n, seed)
    art = localopt_pipeline(inst)
    for cert in enumerate_solutions(art.reduced, limit=25):
        assert verify_solution(inst, apply_pullback(art, cert))


def test_localopt_pipeline_seed21_n3_exhaustive():
    inst = localopt_instance(3, 3, 21)
    art = localopt_pipeline(inst)
    certs = enumerate_solutions(art.reduced)
    assert certs
    for cert in certs:
        assert verify_solution(inst, apply_pullback(art, cert))


# ------------------------------------------------------------
# the composition harness
# ------------------------------------------------------------


def test_apply_pullback_rejects_bogus_reduced_certificates():
    inst = pigeon_instance(2, 4)
    art = reduce_pigeon_to_qp(inst)
    bogus = Certificate.qp(4, 1)  # equality is reflexive: can never verify
    with pytest.raises(ReductionSoundnessError):
        apply_pullback(art, bogus)


def test_compose_artifacts_audits_the_boundary():
    inst = localopt_instance(2, 2, 8)
    art = normalize_pipeline(inst)
    # same behavior via the composed artifact as via manual chaining
    cert = enumerate_solutions(art.reduced, limit=1)[0]
    assert verify_solution(inst, art.pullback(cert))
    with pytest.raises(ReductionSoundnessError):
        art.pullback(Certificate.local_opt(1 << 30))


def test_compose_artifacts_requires_matching_interfaces():
    a = reduce_pigeon_to_qp(pigeon_instance(2, 1))
    b = normalize_unit_potential(localopt_instance(2, 2, 1))
    with pytest.raises(DomainError):
        compose_artifacts(a, b)


def test_pullback_failure_passes_through_apply():
    # a stage that reports FAILURE must come back unwrapped, not raise
    inst = pigeon_instance(2, 4)
    art = reduce_pigeon_to_qp(inst)
    failure = PullbackFailure("stub", (1, 2, 3), {})
    from tfnp_lab.reductions import ReductionArtifact

    stub = ReductionArtifact("stub", art.original, art.reduced, lambda c: failure)
    cert = enumerate_solutions(art.reduced, limit=1)[0]
    assert apply_pullback(stub, cert) is failure
