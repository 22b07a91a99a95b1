"""Löwner-ordering, nonsingularity and set-relation verdicts.

Each ``decide_*`` function evaluates a closed rank/inertia condition and,
independently, translates the matching extremal profile into the same
statement.  The two routes must agree; a mismatch raises
:class:`RouteDisagreement`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .errors import DimensionMismatch, RouteDisagreement, Unsolvable, UnsupportedQuery
from .exact import Matrix, e_proj, f_proj, inertia, rank, range_contains, range_equal
from .extremal import (
    ExtremalProfile,
    profile_ls_vs_lr,
    profile_linear_vs_p,
    profile_psd_linear_vs_p,
    profile_skew_pair,
    profile_two_congruence,
    profile_two_linear,
)
from .blocks import assemble_named_block
from .solutions import (
    CongruenceEqSpec,
    LinearEqSpec,
    check_congruence,
    check_linear_hermitian,
    congruence_particular,
    hermitian_solution,
)

ORDER_RELATIONS = ("succ", "succeq", "prec", "preceq")
RELATIONS = ORDER_RELATIONS + (
    "nonsingular",
    "equal",
    "rank-invariant",
    "inertia-invariant",
    "set-equality",
)
MODES = ("exists", "forall")
_FORALL_ONLY = ("rank-invariant", "inertia-invariant", "set-equality")


@dataclass(frozen=True)
class OrderingQuery:
    """A statement about X - Y over a solution set (or pair of sets).

    ``succ`` reads "X - Y is positive definite", ``succeq`` "positive
    semidefinite", and so on.  ``exists`` asks for one member, ``forall``
    for every member.
    """

    relation: str
    mode: str = "exists"

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.relation == "equal" and self.mode == "forall":
            raise UnsupportedQuery("forall-equal is not a supported statement")
        if self.relation in _FORALL_ONLY and self.mode != "forall":
            raise UnsupportedQuery(f"{self.relation} is only defined in forall mode")

    def __str__(self):
        return f"{self.mode}-{self.relation}"


@dataclass(frozen=True)
class Verdict:
    """Decided statement with the integers that decided it."""

    query: OrderingQuery
    holds: bool
    evidence: tuple[tuple[str, int], ...]
    route: str

    def evidence_dict(self) -> dict[str, int]:
        return dict(self.evidence)


# ---------------------------------------------------------------------------
# profile route
# ---------------------------------------------------------------------------

# (field, target) where target "n" means the ambient order
_PROFILE_RULES: dict[tuple[str, str], tuple[str, str]] = {
    ("exists", "succ"): ("max_i_plus", "n"),
    ("exists", "prec"): ("max_i_minus", "n"),
    ("exists", "succeq"): ("min_i_minus", "0"),
    ("exists", "preceq"): ("min_i_plus", "0"),
    ("forall", "succ"): ("min_i_plus", "n"),
    ("forall", "prec"): ("min_i_minus", "n"),
    ("forall", "succeq"): ("max_i_minus", "0"),
    ("forall", "preceq"): ("max_i_plus", "0"),
    ("exists", "nonsingular"): ("max_rank", "n"),
    ("forall", "nonsingular"): ("min_rank", "n"),
    ("exists", "equal"): ("min_rank", "0"),
}


def decide_from_profile(profile: ExtremalProfile, query: OrderingQuery) -> Verdict:
    """Translate an extremal profile into a verdict.

    For example a positive definite member exists iff the maximal i+ equals
    the order n, and every member is PSD iff the maximal i- is 0.

    Raises:
        UnsupportedQuery: The statement is not expressible by the profile.
    """
    n = profile.ambient_order
    key = (query.mode, query.relation)
    if key in _PROFILE_RULES:
        fld, target = _PROFILE_RULES[key]
        value = getattr(profile, fld)
        threshold = n if target == "n" else 0
        return Verdict(
            query, value == threshold, ((fld, value), ("threshold", threshold)), "profile"
        )
    if query.relation == "rank-invariant":
        ev = (("max_rank", profile.max_rank), ("min_rank", profile.min_rank))
        return Verdict(query, profile.max_rank == profile.min_rank, ev, "profile")
    if query.relation == "inertia-invariant":
        ev = (
            ("max_i_plus", profile.max_i_plus),
            ("min_i_plus", profile.min_i_plus),
            ("max_i_minus", profile.max_i_minus),
            ("min_i_minus", profile.min_i_minus),
        )
        holds = (
            profile.max_i_plus == profile.min_i_plus
            and profile.max_i_minus == profile.min_i_minus
        )
        return Verdict(query, holds, ev, "profile")
    raise UnsupportedQuery(f"{query} cannot be read off an extremal profile")


def _combine(
    query: OrderingQuery,
    profile: Optional[ExtremalProfile],
    closed: Optional[bool],
    evidence: dict[str, int],
    profile_holds: Optional[bool] = None,
) -> Verdict:
    """Merge the profile route and the closed condition into one verdict."""
    ev = dict(evidence)
    if profile is not None:
        pv = decide_from_profile(profile, query)
        profile_holds = pv.holds
        for k, v in profile.as_dict().items():
            ev.setdefault(k, v)
        for k, v in profile.evidence:
            ev.setdefault(k, v)
    if closed is None and profile_holds is None:
        raise UnsupportedQuery(f"{query} is not characterized for this problem")
    if closed is None:
        return Verdict(query, profile_holds, tuple(ev.items()), "profile")
    if profile_holds is None:
        return Verdict(query, closed, tuple(ev.items()), "closedCondition")
    if closed != profile_holds:
        raise RouteDisagreement(
            f"{query}: closed condition says {closed}, profile says {profile_holds}"
        )
    return Verdict(query, closed, tuple(ev.items()), "both")


def _psd(X: Matrix) -> bool:
    return X.is_hermitian() and inertia(X).minus == 0


def _nsd(X: Matrix) -> bool:
    return X.is_hermitian() and inertia(X).plus == 0


# ---------------------------------------------------------------------------
# AX = B against a fixed P
# ---------------------------------------------------------------------------


def decide_linear_vs_p(spec: LinearEqSpec, P: Matrix, query: OrderingQuery) -> Verdict:
    """Statements about X - P over Hermitian solutions X of AX = B.

    P = 0 gives the statements about X itself through the same code path.
    """
    profile = profile_linear_vs_p(spec, P)
    A, B, n = spec.A, spec.B, spec.n
    R = B - A @ P
    G = B @ A.H - A @ P @ A.H
    r_r, r_g, r_a = rank(R), rank(G), rank(A)
    ev = {"r(B-AP)": r_r, "r(BA*-APA*)": r_g, "r(A)": r_a, "n": n}
    key = (query.mode, query.relation)
    closed: Optional[bool]
    if key == ("exists", "nonsingular"):
        closed = range_equal(R, A)
    elif key == ("forall", "nonsingular"):
        closed = 2 * r_r == r_g + n
    elif key == ("exists", "succ"):
        closed = range_equal(G, A) and _psd(G)
    elif key == ("exists", "prec"):
        closed = range_equal(G, A) and _nsd(G)
    elif key == ("forall", "succ"):
        closed = r_r == n and _psd(G)
    elif key == ("forall", "prec"):
        # printed with AB* in place of BA*; the two coincide on solvable data
        ev["AB*=BA*"] = int(A @ B.H == B @ A.H)
        closed = r_r == n and _nsd(G)
    elif key == ("exists", "succeq"):
        closed = range_equal(R, G) and _psd(G)
    elif key == ("exists", "preceq"):
        closed = range_equal(R, G) and _nsd(G)
    elif key == ("forall", "succeq"):
        closed = _psd(G) and r_a == n
    elif key == ("forall", "preceq"):
        closed = _nsd(G) and r_a == n
    elif key == ("exists", "equal"):
        closed = A @ P == B
    else:
        closed = None
    return _combine(query, profile, closed, ev)


def decide_psd_linear_vs_p(spec: LinearEqSpec, P: Matrix, query: OrderingQuery) -> Verdict:
    """Statements about X - P over PSD solutions X of AX = B, for PSD P.

    P = I gives the statements about X - I through the same code path.
    """
    profile = profile_psd_linear_vs_p(spec, P)
    A, B, n = spec.A, spec.B, spec.n
    M = assemble_named_block("M_psdVsP", [A, B, P]).matrix
    iM = inertia(M)
    R = B - A @ P
    G = B @ A.H - A @ P @ A.H
    iG = inertia(G)
    r_r, r_a, r_b = rank(R), rank(A), rank(B)
    ev = {
        "r(B-AP)": r_r,
        "i+(BA*-APA*)": iG.plus,
        "i+(M)": iM.plus,
        "i-(M)": iM.minus,
        "r(A)": r_a,
        "r(B)": r_b,
        "n": n,
    }
    key = (query.mode, query.relation)
    closed: Optional[bool]
    if key == ("exists", "nonsingular"):
        closed = range_equal(R, A)
    elif key == ("forall", "nonsingular"):
        closed = iM.minus + r_r == iG.plus + n
    elif key == ("exists", "succ"):
        closed = range_equal(G, A) and iG.minus == 0
    elif key == ("forall", "succ"):
        closed = iM.minus == n
    elif key == ("exists", "prec"):
        closed = iM.plus == r_b + n
    elif key == ("forall", "prec"):
        closed = r_r == n and iG.plus == 0
    elif key == ("exists", "succeq"):
        closed = range_equal(R, G) and iG.minus == 0
    elif key == ("forall", "succeq"):
        closed = iM.plus == r_b
    elif key == ("exists", "preceq"):
        closed = iM.minus == 0
    elif key == ("forall", "preceq"):
        # max i+ = i+(G) - r(A) + n vanishes only for r(A) = n and i+(G) = 0
        closed = r_a == n and iG.plus == 0
    elif key == ("exists", "equal"):
        closed = A @ P == B
    else:
        closed = None
    return _combine(query, profile, closed, ev)


# ---------------------------------------------------------------------------
# two linear equations
# ---------------------------------------------------------------------------


def common_solution(spec1: LinearEqSpec, spec2: LinearEqSpec) -> Optional[Matrix]:
    """A Hermitian X with AX = B and CX = D, or None when none exists."""
    stacked = LinearEqSpec(
        Matrix.vstack(spec1.A, spec2.A), Matrix.vstack(spec1.B, spec2.B)
    )
    if not check_linear_hermitian(stacked).solvable:
        return None
    X = hermitian_solution(stacked, Matrix.zeros(stacked.n, stacked.n))
    return X


def decide_two_linear(
    spec1: LinearEqSpec, spec2: LinearEqSpec, query: OrderingQuery
) -> Verdict:
    """Statements about X - Y for Hermitian solutions of AX = B and CY = D."""
    profile = profile_two_linear(spec1, spec2)
    A, B, C, D = spec1.A, spec1.B, spec2.A, spec2.B
    n = A.cols
    M = assemble_named_block("M_twoLinear", [A, B, C, D]).matrix
    iM = inertia(M)
    r_n = rank(assemble_named_block("N_twoLinear", [A, B, C, D]).matrix)
    r_a, r_c = rank(A), rank(C)
    ev = {"r(N)": r_n, "i+(M)": iM.plus, "i-(M)": iM.minus, "r(A)": r_a, "r(C)": r_c, "n": n}
    key = (query.mode, query.relation)
    closed: Optional[bool]
    if key == ("exists", "nonsingular"):
        closed = r_n == r_a + r_c
    elif key == ("forall", "nonsingular"):
        r_mix = rank(A @ D.H - B @ C.H)
        r1 = rank(Matrix.block([[A, B @ A.H], [C, D @ A.H]]))
        r2 = rank(Matrix.block([[A, B @ C.H], [C, D @ C.H]]))
        closed = 2 * r_n + r_mix == r1 + r2 + n
    elif key == ("exists", "equal"):
        AC = Matrix.vstack(A, C)
        BD = Matrix.vstack(B, D)
        closed = range_contains(AC, BD) and AC @ BD.H == BD @ AC.H
        if closed:
            X = common_solution(spec1, spec2)
            ok = X is not None and A @ X == B and C @ X == D and X.is_hermitian()
            ev["witness_verified"] = int(ok)
            if not ok:
                raise RouteDisagreement("common solution failed verification")
    elif key == ("exists", "succ"):
        closed = iM.plus == r_a + r_c
    elif key == ("exists", "prec"):
        closed = iM.minus == r_a + r_c
    elif key == ("forall", "succ"):
        closed = iM.minus == r_n - n
    elif key == ("forall", "prec"):
        closed = iM.plus == r_n - n
    elif key == ("exists", "succeq"):
        closed = iM.plus == r_n
    elif key == ("exists", "preceq"):
        closed = iM.minus == r_n
    elif key == ("forall", "succeq"):
        closed = iM.minus == r_a + r_c - n
    elif key == ("forall", "preceq"):
        closed = iM.plus == r_a + r_c - n
    else:
        closed = None
    return _combine(query, profile, closed, ev)


def decide_perturbed(
    spec: LinearEqSpec, dA: Matrix, dB: Matrix, query: OrderingQuery
) -> Verdict:
    """Compare Hermitian solutions of AX = B with those of (A + dA)Y = B + dB."""
    return decide_two_linear(spec, LinearEqSpec(spec.A + dA, spec.B + dB), query)


# ---------------------------------------------------------------------------
# two congruence equations
# ---------------------------------------------------------------------------


def decide_two_congruence(
    spec1: CongruenceEqSpec, spec2: CongruenceEqSpec, query: OrderingQuery
) -> Verdict:
    """Statements about X1 - X2 for Hermitian solutions of A_j X_j A_j* = B_j."""
    profile = profile_two_congruence(spec1, spec2)
    A1, B1, A2, B2 = spec1.A, spec1.B, spec2.A, spec2.B
    n = A1.cols
    M = assemble_named_block("M_twoCongruence", [A1, B1, A2, B2]).matrix
    iM = inertia(M)
    r1, r2 = rank(A1), rank(A2)
    r12 = rank(Matrix.vstack(A1, A2))
    ev = {
        "r(M)": iM.rank,
        "i+(M)": iM.plus,
        "i-(M)": iM.minus,
        "r(A1)": r1,
        "r(A2)": r2,
        "r[A1*,A2*]": r12,
        "n": n,
    }
    key = (query.mode, query.relation)
    closed: Optional[bool]
    if key == ("exists", "nonsingular"):
        closed = iM.rank >= 2 * r1 + 2 * r2 - n
    elif key == ("forall", "nonsingular"):
        closed = iM.rank == 2 * r12 + n
    elif key == ("exists", "equal"):
        closed = (
            range_contains(A1, B1) and range_contains(A2, B2) and iM.rank == 2 * r12
        )
    elif key == ("forall", "rank-invariant"):
        # the printed "- n" cannot be met for n > 0; "+ n" is what the extremes give
        closed = iM.rank == 2 * r12 + n or (r1 == n and r2 == n)
    elif key == ("forall", "inertia-invariant"):
        closed = r1 == n and r2 == n
    elif key == ("exists", "succ"):
        closed = iM.plus == r1 + r2
    elif key == ("exists", "prec"):
        closed = iM.minus == r1 + r2
    elif key == ("forall", "succ"):
        closed = iM.plus == r12 + n
    elif key == ("forall", "prec"):
        closed = iM.minus == r12 + n
    elif key == ("exists", "succeq"):
        closed = iM.minus == r12
    elif key == ("exists", "preceq"):
        closed = iM.plus == r12
    elif key == ("forall", "succeq"):
        closed = iM.minus == r1 + r2 - n
    elif key == ("forall", "preceq"):
        closed = iM.plus == r1 + r2 - n
    else:
        closed = None
    return _combine(query, profile, closed, ev)


# ---------------------------------------------------------------------------
# AXA* = B against a transformed equation TAXA*T* = TBT*
# ---------------------------------------------------------------------------


def _require_congruence(spec: CongruenceEqSpec) -> None:
    cert = check_congruence(spec)
    if not cert.solvable:
        raise Unsolvable("AXA* = B has no Hermitian solution")


def _check_t(T: Matrix, A: Matrix, what: str = "T") -> None:
    if T.cols != A.rows:
        raise DimensionMismatch(f"{what} must have {A.rows} columns, got {T.cols}")


def transformed_particular(spec: CongruenceEqSpec, T: Matrix) -> Matrix:
    """(TA)^+ TBT* ((TA)^+)*, a particular solution of TAXA*T* = TBT*."""
    return congruence_particular(CongruenceEqSpec(T @ spec.A, T @ spec.B @ T.H))


def decide_transformed_set_equality(spec: CongruenceEqSpec, T: Matrix) -> Verdict:
    """Whether AXA* = B and TAXA*T* = TBT* have the same Hermitian solutions.

    Closed condition: r(TA) = r(A).  Profile route: the largest value, over
    transformed solutions Y, of min over original solutions X of r(X - Y)
    equals max_Y r(B - AYA*), a skew completion in the free part of Y.
    """
    _require_congruence(spec)
    A, B = spec.A, spec.B
    _check_t(T, A)
    TA = T @ A
    r_a, r_ta = rank(A), rank(TA)
    F = f_proj(TA)
    Y0 = transformed_particular(spec, T)
    skew = profile_skew_pair(B - A @ Y0 @ A.H, A @ F, A.H)
    worst = skew.max_rank
    query = OrderingQuery("set-equality", "forall")
    ev = {
        "S⊆T": 1,
        "r(A)": r_a,
        "r(TA)": r_ta,
        "max_Y min_X r(X-Y)": worst,
    }
    return _combine(query, None, r_ta == r_a, ev, profile_holds=worst == 0)


def decide_transformed_ordering(
    spec: CongruenceEqSpec, T: Matrix, query: OrderingQuery
) -> Verdict:
    """Löwner comparisons between original and transformed solution sets.

    Only existence statements for the four orderings are characterized;
    anything else raises :class:`UnsupportedQuery`.
    """
    if query.mode != "exists" or query.relation not in ORDER_RELATIONS:
        raise UnsupportedQuery(f"{query} is not characterized for transformed equations")
    _require_congruence(spec)
    A = spec.A
    _check_t(T, A)
    TA = T @ A
    n = A.cols
    X0 = congruence_particular(spec)
    Y0 = transformed_particular(spec, T)
    # X - Y = X0 - Y0 + [F_A, F_TA] W + W* [F_A, F_TA]*
    profile = profile_skew_pair(X0 - Y0, Matrix.hstack(f_proj(A), f_proj(TA)))
    ev = {"r(TA)": rank(TA), "n": n}
    if query.relation in ("succ", "prec"):
        closed = TA.is_zero()
    else:
        closed = True
    return _combine(query, profile, closed, ev)


# ---------------------------------------------------------------------------
# average of two transformed equations
# ---------------------------------------------------------------------------


def decide_average_equality(spec: CongruenceEqSpec, T1: Matrix, T2: Matrix) -> Verdict:
    """Whether the Hermitian solutions of AXA* = B are exactly the averages
    (X1 + X2)/2 of solutions of the two transformed equations.

    Closed condition: r[T1A; T2A] = r(T1A) + r(T2A) - r(A).  Profile route:
    max_Y min_X r(X - Y) = min{r(A), 2r[T1A; T2A] + 2r(A) - 2r(T1A) - 2r(T2A)}.
    """
    _require_congruence(spec)
    A = spec.A
    _check_t(T1, A, "T1")
    _check_t(T2, A, "T2")
    T1A, T2A = T1 @ A, T2 @ A
    r_a, r1, r2 = rank(A), rank(T1A), rank(T2A)
    r_st = rank(Matrix.vstack(T1A, T2A))
    worst = min(r_a, 2 * r_st + 2 * r_a - 2 * r1 - 2 * r2)
    ev = {
        "S⊆T": 1,
        "r(A)": r_a,
        "r(T1A)": r1,
        "r(T2A)": r2,
        "r[T1A;T2A]": r_st,
        "max_Y min_X r(X-Y)": worst,
        "sufficient r(T1A)=r(T2A)=r(A)": int(r1 == r_a and r2 == r_a),
    }
    query = OrderingQuery("set-equality", "forall")
    return _combine(query, None, r_st == r1 + r2 - r_a, ev, profile_holds=worst == 0)


def decide_partition_average(spec: CongruenceEqSpec, m1: int) -> Verdict:
    """Row partition A = [A1; A2] with T1 = [I, 0] and T2 = [0, I].

    Also checks the equivalent condition R(A1*) = R(A2*).
    """
    A = spec.A
    m = A.rows
    if not 0 <= m1 <= m:
        raise DimensionMismatch(f"split {m1} outside [0, {m}]")
    T1 = Matrix.hstack(Matrix.identity(m1), Matrix.zeros(m1, m - m1))
    T2 = Matrix.hstack(Matrix.zeros(m - m1, m1), Matrix.identity(m - m1))
    v = decide_average_equality(spec, T1, T2)
    A1, A2 = A.submatrix(0, m1, 0, A.cols), A.submatrix(m1, m, 0, A.cols)
    alt = range_equal(A1.H, A2.H)
    if alt != v.holds:
        raise RouteDisagreement("row-partition range condition disagrees")
    return Verdict(v.query, v.holds, v.evidence + (("R(A1*)=R(A2*)", int(alt)),), v.route)


def decide_sum_average(spec: CongruenceEqSpec, A1: Matrix) -> Verdict:
    """Sum split A = A1 + A2 with T1 = E_{A2} and T2 = E_{A1}.

    Also checks the equivalent condition
    r[A1 0 A2; 0 A2 A1] = 2 r[A1, A2] - r(A).
    """
    A = spec.A
    if A1.shape != A.shape:
        raise DimensionMismatch("A1 must have the shape of A")
    A2 = A - A1
    v = decide_average_equality(spec, e_proj(A2), e_proj(A1))
    Z = Matrix.zeros(A.rows, A.cols)
    lhs = rank(Matrix.block([[A1, Z, A2], [Z, A2, A1]]))
    alt = lhs == 2 * rank(Matrix.hstack(A1, A2)) - rank(A)
    if alt != v.holds:
        raise RouteDisagreement("sum-split rank condition disagrees")
    return Verdict(v.query, v.holds, v.evidence + (("sum-split condition", int(alt)),), v.route)


# ---------------------------------------------------------------------------
# least squares against least rank
# ---------------------------------------------------------------------------


def decide_ls_vs_lr(spec: CongruenceEqSpec, query: OrderingQuery) -> Verdict:
    """Statements about X - Y, X a least-squares and Y a least-rank solution.

    For PSD B the simplified conditions are used and checked against the
    general ones.
    """
    profile = profile_ls_vs_lr(spec)
    A, B = spec.A, spec.B
    n = A.cols
    M = assemble_named_block("M_lsLr", [A, B]).matrix
    N = assemble_named_block("N_lsLr", [A, B]).matrix
    iM, iN = inertia(M), inertia(N)
    r_a = rank(A)
    r_ab = rank(Matrix.hstack(A, B))
    ev = {
        "r(M)": iM.rank,
        "i+(M)": iM.plus,
        "i-(M)": iM.minus,
        "r(N)": iN.rank,
        "i+(N)": iN.plus,
        "i-(N)": iN.minus,
        "r(A)": r_a,
        "r[A,B]": r_ab,
        "n": n,
    }
    key = (query.mode, query.relation)
    general: dict[tuple[str, str], Callable[[], bool]] = {
        ("exists", "nonsingular"): lambda: iN.rank >= 2 * r_a + iM.rank - n,
        ("forall", "nonsingular"): lambda: iN.rank + iM.rank == 2 * r_ab + 2 * r_a + n,
        ("exists", "equal"): lambda: iN.rank + iM.rank == 2 * r_ab + 2 * r_a,
        ("exists", "succ"): lambda: iN.minus == iM.minus + r_a,
        ("forall", "succ"): lambda: iN.minus == r_a + r_ab - iM.plus + n,
        ("exists", "succeq"): lambda: iN.plus == r_a + r_ab - iM.minus,
        ("forall", "succeq"): lambda: iN.plus == iM.plus + r_a - n,
        ("exists", "prec"): lambda: iN.plus == iM.plus + r_a,
        ("forall", "prec"): lambda: iN.plus == r_a + r_ab - iM.minus + n,
        ("exists", "preceq"): lambda: iN.minus == r_a + r_ab - iM.plus,
        ("forall", "preceq"): lambda: iN.minus == iM.minus + r_a - n,
    }
    closed = general[key]() if key in general else None
    if closed is not None and inertia(B).minus == 0:
        r_aba = rank(Matrix.hstack(A, B @ A))
        ev["r[A,BA]"] = r_aba
        psd_rules: dict[tuple[str, str], Callable[[], bool]] = {
            ("exists", "nonsingular"): lambda: r_aba >= 3 * r_a - n,
            ("forall", "nonsingular"): lambda: r_aba == r_a + n,
            ("exists", "equal"): lambda: range_contains(A, B @ A),
            ("exists", "succ"): lambda: r_aba == 2 * r_a,
            ("forall", "succ"): lambda: r_aba == r_a + n,
            ("exists", "succeq"): lambda: True,
            ("forall", "succeq"): lambda: r_a == n,
            ("exists", "prec"): lambda: A.is_zero(),
            ("exists", "preceq"): lambda: range_contains(A, B @ A),
            ("forall", "preceq"): lambda: r_aba == 2 * r_a - n,
        }
        if key in psd_rules:
            special = psd_rules[key]()
            if special != closed:
                raise RouteDisagreement(f"{query}: PSD-branch condition disagrees")
    return _combine(query, profile, closed, ev)


def monotone_consistency(decide: Callable[[OrderingQuery], Verdict]) -> bool:
    """Check exists-succ => exists-succeq and forall-succ => forall-succeq =>
    exists-succeq (and the duals) for one instance."""
    v = {
        (m, r): decide(OrderingQuery(r, m)).holds
        for m in MODES
        for r in ORDER_RELATIONS
    }
    for strict, weak in (("succ", "succeq"), ("prec", "preceq")):
        if v[("exists", strict)] and not v[("exists", weak)]:
            return False
        if v[("forall", strict)] and not v[("forall", weak)]:
            return False
        if v[("forall", weak)] and not v[("exists", weak)]:
            return False
    return True
