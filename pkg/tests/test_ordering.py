import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hermsolve.errors import NotPsd, RouteDisagreement, Unsolvable, UnsupportedQuery
from hermsolve.exact import Matrix, rank
from hermsolve.extremal import ExtremalProfile
from hermsolve.oracle import (
    InstanceRecipe,
    ROUTE_OPERATIONS,
    generate_instance,
    route_agreement_sweep,
    transformed_member,
)
from hermsolve.ordering import (
    OrderingQuery,
    _combine,
    common_solution,
    decide_average_equality,
    decide_from_profile,
    decide_linear_vs_p,
    decide_ls_vs_lr,
    decide_partition_average,
    decide_psd_linear_vs_p,
    decide_sum_average,
    decide_transformed_ordering,
    decide_transformed_set_equality,
    decide_two_congruence,
    decide_two_linear,
    monotone_consistency,
)
from hermsolve.solutions import CongruenceEqSpec, LinearEqSpec, psd_solution, sample_matrix

ROW = Matrix([[1, 0]])
Q = OrderingQuery


def test_query_validation():
    with pytest.raises(UnsupportedQuery):
        Q("equal", "forall")
    with pytest.raises(UnsupportedQuery):
        Q("set-equality", "exists")
    with pytest.raises(ValueError):
        Q("bigger")
    assert str(Q("succ", "forall")) == "forall-succ"


def test_profile_route_examples():
    p = ExtremalProfile(2, 1, 2, 0, 1, 0, 2)
    assert decide_from_profile(p, Q("succ")).holds
    p = ExtremalProfile(2, 0, 1, 0, 1, 0, 2)
    assert decide_from_profile(p, Q("equal")).holds
    zero = ExtremalProfile(0, 0, 0, 0, 0, 0, 3)
    assert decide_from_profile(zero, Q("succeq", "forall")).holds
    assert decide_from_profile(zero, Q("preceq", "forall")).holds
    assert not decide_from_profile(zero, Q("succ")).holds
    v = decide_from_profile(zero, Q("succ"))
    assert v.evidence_dict() == {"max_i_plus": 0, "threshold": 3} and v.route == "profile"


def test_combine_flags_disagreement():
    p = ExtremalProfile(1, 1, 1, 1, 0, 0, 1)
    with pytest.raises(RouteDisagreement):
        _combine(Q("succ", "forall"), p, False, {})
    assert _combine(Q("succ", "forall"), p, True, {}).route == "both"


def test_linear_vs_p_examples():
    spec = LinearEqSpec(ROW, ROW)
    Z = Matrix.zeros(2, 2)
    v = decide_linear_vs_p(spec, Z, Q("succeq"))
    assert v.holds and v.route == "both"
    assert not decide_linear_vs_p(spec, Z, Q("succ", "forall")).holds
    B = Matrix([[2, 1], [1, 2]])
    assert decide_linear_vs_p(LinearEqSpec(Matrix.identity(2), B), Z, Q("succ", "forall")).holds


def test_linear_vs_p_unsolvable():
    with pytest.raises(Unsolvable):
        decide_linear_vs_p(LinearEqSpec(Matrix.diag([1, 0]), Matrix([[0, 0], [1, 0]])), Matrix.zeros(2, 2), Q("succ"))


def test_psd_vs_p_examples():
    spec = LinearEqSpec(ROW, ROW)
    v = decide_psd_linear_vs_p(spec, Matrix.zeros(2, 2), Q("preceq"))
    assert not v.holds
    X = psd_solution(spec, Matrix.identity(2))
    assert decide_psd_linear_vs_p(spec, X, Q("equal")).holds
    I2 = Matrix.identity(2)
    assert decide_psd_linear_vs_p(LinearEqSpec(I2, I2), I2, Q("succeq", "forall")).holds
    with pytest.raises(NotPsd):
        decide_psd_linear_vs_p(spec, -I2, Q("succ"))


def test_two_linear_examples():
    spec = LinearEqSpec(ROW, Matrix([[1, 1]]))
    assert decide_two_linear(spec, spec, Q("equal")).holds
    one, zero = Matrix([[1]]), Matrix([[0]])
    s1, s2 = LinearEqSpec(one, one), LinearEqSpec(one, zero)
    assert decide_two_linear(s1, s2, Q("succ", "forall")).holds
    assert not decide_two_linear(s1, s2, Q("prec")).holds


def test_two_congruence_examples():
    one, zero = Matrix([[1]]), Matrix([[0]])
    s1, s2 = CongruenceEqSpec(one, one), CongruenceEqSpec(one, zero)
    assert decide_two_congruence(s1, s2, Q("succ", "forall")).holds
    spec = CongruenceEqSpec(ROW, Matrix([[2]]))
    assert decide_two_congruence(spec, spec, Q("equal")).holds
    I2 = Matrix.identity(2)
    a, b = CongruenceEqSpec(I2, Matrix([[1, 0], [0, 2]])), CongruenceEqSpec(I2, Matrix([[0, 1], [1, 0]]))
    assert decide_two_congruence(a, b, Q("inertia-invariant", "forall")).holds
    assert decide_two_congruence(a, b, Q("rank-invariant", "forall")).holds


def test_transformed_set_equality_examples():
    A = Matrix.diag([1, 0])
    spec = CongruenceEqSpec(A, A)
    assert decide_transformed_set_equality(spec, Matrix.identity(2)).holds
    v = decide_transformed_set_equality(spec, Matrix([[0, 1]]))
    assert not v.holds and v.evidence_dict()["S⊆T"] == 1
    A = Matrix([[1, 2], [2, 4], [0, 1]])
    spec = CongruenceEqSpec(A, A @ Matrix([[1, 1], [1, 0]]) @ A.H)
    assert decide_transformed_set_equality(spec, A.H).holds
    # normal-equation members solve the original equation
    for s in range(10):
        Y = transformed_member(spec, A.H, sample_matrix(s, 2, 2))
        assert A @ Y @ A.H == spec.B


def test_transformed_ordering_examples():
    A = Matrix([[1, 0], [0, 1], [1, 1]])
    spec = CongruenceEqSpec(A, A @ Matrix([[1, 0], [0, -1]]) @ A.H)
    assert decide_transformed_ordering(spec, Matrix.zeros(1, 3), Q("succ")).holds
    assert not decide_transformed_ordering(spec, Matrix.identity(3), Q("succ")).holds
    for T in (Matrix.identity(3), Matrix([[1, 0, 0]]), Matrix.zeros(2, 3)):
        assert decide_transformed_ordering(spec, T, Q("succeq")).holds
    with pytest.raises(UnsupportedQuery):
        decide_transformed_ordering(spec, Matrix.identity(3), Q("succ", "forall"))


def test_average_examples():
    A = Matrix([[1, 0], [0, 1]])
    spec = CongruenceEqSpec(A, Matrix([[1, 1], [1, 3]]))
    I2 = Matrix.identity(2)
    assert decide_average_equality(spec, I2, I2).holds
    v = decide_partition_average(spec, 1)
    assert not v.holds and v.evidence_dict()["R(A1*)=R(A2*)"] == 0
    # T1 = I, T2 = 0 reads r(A) = r(A) + 0 - r(A): false for nonzero A
    assert not decide_average_equality(spec, I2, Matrix.zeros(2, 2)).holds
    Z = CongruenceEqSpec(Matrix.zeros(2, 2), Matrix.zeros(2, 2))
    assert decide_average_equality(Z, I2, Matrix.zeros(2, 2)).holds


def test_partition_with_equal_blocks_holds():
    A1 = Matrix([[1, 2]])
    A = Matrix.vstack(A1, A1)
    spec = CongruenceEqSpec(A, A @ Matrix.diag([1, 0]) @ A.H)
    assert decide_partition_average(spec, 1).holds


def test_sum_split_examples():
    A = Matrix([[1, 0], [0, 1]])
    spec = CongruenceEqSpec(A, Matrix.identity(2))
    v = decide_sum_average(spec, Matrix.zeros(2, 2))
    assert "sum-split condition" in v.evidence_dict()


def test_ls_vs_lr_examples():
    col = Matrix([[1], [0]])
    B = Matrix([[2, 1], [1, 1]])
    assert decide_ls_vs_lr(CongruenceEqSpec(col, B), Q("succeq")).holds
    assert not decide_ls_vs_lr(CongruenceEqSpec(col, B), Q("prec")).holds
    I2 = Matrix.identity(2)
    assert decide_ls_vs_lr(CongruenceEqSpec(I2, Matrix([[1, 2], [2, -1]])), Q("equal")).holds


def test_two_linear_witness_soundness():
    hits = 0
    for seed in range(40):
        s1, s2 = generate_instance(InstanceRecipe(seed, 2, 3, "twoLinear"))
        if decide_two_linear(s1, s2, Q("equal")).holds:
            W = common_solution(s1, s2)
            assert W is not None and W.is_hermitian()
            assert s1.A @ W == s1.B and s2.A @ W == s2.B
            hits += 1
    assert hits > 0


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32), m=st.integers(1, 4), p=st.integers(0, 2))
def test_full_column_rank_t_keeps_set(seed, m, p):
    spec = generate_instance(InstanceRecipe(seed, m, 3, "congruence"))
    rng = random.Random(seed)
    while True:
        T = sample_matrix(rng, m + p, m)
        if rank(T) == m:
            break
    assert decide_transformed_set_equality(spec, T).holds


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32), m=st.integers(1, 3), n=st.integers(1, 3))
def test_monotone_consistency(seed, m, n):
    spec = generate_instance(InstanceRecipe(seed, m, n, "lsLr"))
    assert monotone_consistency(lambda q: decide_ls_vs_lr(spec, q))
    s1, s2 = generate_instance(InstanceRecipe(seed, m, n, "twoCongruence"))
    assert monotone_consistency(lambda q: decide_two_congruence(s1, s2, q))


def test_route_agreement_small_sweep():
    rep = route_agreement_sweep(seed=5, instances=20, max_dim=3)
    assert rep.ok, rep.disagreements[:3]
    assert set(rep.instances) == set(ROUTE_OPERATIONS)
    assert all(c == 20 for c in rep.instances.values())
