from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hermsolve.exact import Matrix
from hermsolve.extremal import ExtremalProfile
from hermsolve.oracle import (
    INSTANCE_KINDS,
    PROFILE_KINDS,
    InstanceRecipe,
    envelope_for_case,
    envelope_sweep,
    generate_instance,
    identity_suite,
    linear_vs_p_case,
    ls_vs_lr_case,
    monte_carlo_envelope,
    special_case_equality_suite,
)
from hermsolve.solutions import (
    CongruenceEqSpec,
    LinearEqSpec,
    check_congruence,
    check_linear_hermitian,
    check_linear_psd,
)


def test_recipe_validation():
    with pytest.raises(ValueError):
        InstanceRecipe(0, -1, 2)
    with pytest.raises(ValueError):
        InstanceRecipe(0, 1, 2, bound=0)
    with pytest.raises(ValueError):
        InstanceRecipe(0, 1, 2, kind="nope")


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**64 - 1), m=st.integers(0, 4), n=st.integers(0, 4))
def test_instances_solvable_by_construction(seed, m, n):
    assert check_linear_hermitian(generate_instance(InstanceRecipe(seed, m, n, "linearHermitian"))).solvable
    assert check_linear_psd(generate_instance(InstanceRecipe(seed, m, n, "linearPsd"))).solvable
    assert check_congruence(generate_instance(InstanceRecipe(seed, m, n, "congruence"))).solvable
    s1, s2 = generate_instance(InstanceRecipe(seed, m, n, "twoLinear"))
    assert check_linear_hermitian(s1).solvable and check_linear_hermitian(s2).solvable
    c1, c2 = generate_instance(InstanceRecipe(seed, m, n, "twoCongruence"))
    assert check_congruence(c1).solvable and check_congruence(c2).solvable


def test_generation_deterministic():
    for kind in INSTANCE_KINDS:
        r = InstanceRecipe(11, 3, 2, kind)
        assert generate_instance(r) == generate_instance(r)


def test_envelope_linear_vs_p_example():
    case = linear_vs_p_case(LinearEqSpec(Matrix([[1, 0]]), Matrix([[1, 0]])), Matrix.zeros(2, 2))
    rep = envelope_for_case(case, 100)
    assert (rep.observed_min_rank, rep.observed_max_rank) == (1, 2)
    assert (rep.observed_min_i_plus, rep.observed_max_i_plus) == (1, 2)
    assert (rep.observed_min_i_minus, rep.observed_max_i_minus) == (0, 1)
    assert rep.max_attained and rep.min_consistent


def test_envelope_ls_vs_lr_identity_is_zero():
    B = Matrix([[1, 2], [2, -1]])
    rep = envelope_for_case(ls_vs_lr_case(CongruenceEqSpec(Matrix.identity(2), B)), 50)
    assert rep.closed_form.values() == (0,) * 6
    assert (rep.observed_max_rank, rep.observed_max_i_plus, rep.observed_max_i_minus) == (0, 0, 0)
    assert rep.max_attained and rep.min_consistent


@pytest.mark.parametrize("kind", PROFILE_KINDS)
def test_single_trial_containment(kind):
    for seed in range(5):
        rep = monte_carlo_envelope(InstanceRecipe(seed, 2, 3), kind, 1)
        assert rep.min_consistent and rep.trials == 1


def test_envelope_rejects_zero_trials():
    with pytest.raises(ValueError):
        monte_carlo_envelope(InstanceRecipe(0, 2, 2), "skew", 0)


@pytest.mark.parametrize("kind", PROFILE_KINDS)
def test_small_sweep(kind):
    reps = envelope_sweep(kind, instances=6, trials=80, seed=3, max_dim=3, workers=1)
    assert all(r.min_consistent for r in reps)
    assert sum(r.max_attained for r in reps) >= 5


def test_sweep_deterministic_and_worker_independent():
    a = envelope_sweep("two-linear", 4, 30, seed=9, max_dim=3, workers=1)
    b = envelope_sweep("two-linear", 4, 30, seed=9, max_dim=3, workers=1)
    c = envelope_sweep("two-linear", 4, 30, seed=9, max_dim=3, workers=2)
    assert a == b == c


def test_identity_suite():
    reps = identity_suite(seed=1, trials=20, max_dim=4)
    assert reps and all(r.holds for r in reps)
    assert identity_suite(1, 3, 3) == identity_suite(1, 3, 3)
    with pytest.raises(ValueError):
        identity_suite(1, 0, 4)
    with pytest.raises(ValueError):
        identity_suite(1, 5, 0)


def test_identity_suite_scalars():
    assert all(r.holds for r in identity_suite(seed=2, trials=30, max_dim=1))


def test_special_case_suite():
    rep = special_case_equality_suite(seed=4, trials=15)
    assert rep.all_passed, rep.first_failure
    assert len(rep.passed) == 9
    assert all(c == 15 for c in rep.passed.values())
    with pytest.raises(ValueError):
        special_case_equality_suite(seed=4, trials=0)


def test_envelope_detects_wrong_profile():
    case = linear_vs_p_case(LinearEqSpec(Matrix([[1, 0]]), Matrix([[1, 0]])), Matrix.zeros(2, 2))
    bad = replace(case, profile=ExtremalProfile(1, 1, 1, 1, 1, 0, 2))
    rep = envelope_for_case(bad, 100)
    assert not rep.min_consistent and rep.first_violation is not None
