"""Closed-form extremal ranks and inertias over Hermitian solution sets.

Every operation evaluates rank/inertia formulas on bordered block matrices
and returns an :class:`ExtremalProfile`.  Sampled members never feed back
into these values; the oracle module checks them independently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .blocks import assemble_named_block
from .errors import (
    DimensionMismatch,
    FormulaRangeError,
    NotHermitian,
    NotPsd,
    RangeHypothesisViolated,
    RouteDisagreement,
    Unsolvable,
)
from .exact import Matrix, f_proj, inertia, rank, range_contains
from .solutions import (
    CongruenceEqSpec,
    LinearEqSpec,
    check_congruence,
    check_linear_hermitian,
    check_linear_psd,
    hermitian_particular,
    psd_particular,
)

PROFILE_FIELDS = (
    "max_rank",
    "min_rank",
    "max_i_plus",
    "min_i_plus",
    "max_i_minus",
    "min_i_minus",
)


@dataclass(frozen=True)
class ExtremalProfile:
    """Max/min rank, i+ and i- of a Hermitian quantity of order ``ambient_order``.

    ``evidence`` records the block ranks and inertias that produced the six
    values; it does not take part in equality.
    """

    max_rank: int
    min_rank: int
    max_i_plus: int
    min_i_plus: int
    max_i_minus: int
    min_i_minus: int
    ambient_order: int
    evidence: tuple[tuple[str, int], ...] = field(default=(), compare=False)

    def __post_init__(self):
        n = self.ambient_order
        bad = [f for f in PROFILE_FIELDS if not 0 <= getattr(self, f) <= n]
        if bad:
            raise FormulaRangeError(
                f"{', '.join(bad)} outside [0, {n}]: {self.values()}"
            )
        ok = (
            self.min_i_plus <= self.max_i_plus
            and self.min_i_minus <= self.max_i_minus
            and self.min_i_plus + self.min_i_minus
            <= self.min_rank
            <= self.max_rank
            <= min(n, self.max_i_plus + self.max_i_minus)
        )
        if not ok:
            raise FormulaRangeError(f"inconsistent extremal values {self.values()}")

    def values(self) -> tuple[int, ...]:
        return tuple(getattr(self, f) for f in PROFILE_FIELDS)

    def as_dict(self) -> dict:
        d = {f: getattr(self, f) for f in PROFILE_FIELDS}
        d["ambient_order"] = self.ambient_order
        return d


def _profile(n, max_rank, min_rank, max_ip, min_ip, max_im, min_im, evidence):
    return ExtremalProfile(
        max_rank, min_rank, max_ip, min_ip, max_im, min_im, n, tuple(evidence.items())
    )


@dataclass(frozen=True)
class CompletionSpec:
    """A - BXB* (optionally - CYC*), or A +/- BXB* over PSD X.

    ``sign`` only matters with ``cone="psd"``; the unconstrained forms are
    always written with a minus sign.
    """

    A: Matrix
    B: Matrix
    C: Optional[Matrix] = None
    sign: str = "minus"
    cone: str = "none"

    def __post_init__(self):
        if not self.A.is_hermitian():
            raise NotHermitian("A")
        if self.B.rows != self.A.rows:
            raise DimensionMismatch("B must have as many rows as A")
        if self.C is not None and self.C.rows != self.A.rows:
            raise DimensionMismatch("C must have as many rows as A")
        if self.sign not in ("plus", "minus"):
            raise ValueError(f"sign must be plus or minus, got {self.sign!r}")
        if self.cone not in ("none", "psd"):
            raise ValueError(f"cone must be none or psd, got {self.cone!r}")


def _bordered(A: Matrix, B: Matrix) -> Matrix:
    return assemble_named_block("M1_bordered", [A, B]).matrix


def profile_completion_hermitian(spec: CompletionSpec) -> ExtremalProfile:
    """Extremes of A - BXB* over Hermitian X, via M = [A B; B* 0]."""
    if spec.cone != "none" or spec.C is not None:
        raise ValueError("expects an unconstrained one-term completion")
    A, B = spec.A, spec.B
    M = _bordered(A, B)
    r_ab = rank(Matrix.hstack(A, B))
    iM = inertia(M)
    ev = {"r[A,B]": r_ab, "r(M)": iM.rank, "i+(M)": iM.plus, "i-(M)": iM.minus}
    return _profile(
        A.rows,
        r_ab,
        2 * r_ab - iM.rank,
        iM.plus,
        r_ab - iM.minus,
        iM.minus,
        r_ab - iM.plus,
        ev,
    )


def profile_completion_psd(spec: CompletionSpec) -> ExtremalProfile:
    """Extremes of A + BXB* (sign plus) or A - BXB* (sign minus) over PSD X."""
    if spec.cone != "psd" or spec.C is not None:
        raise ValueError("expects a PSD-constrained one-term completion")
    A, B = spec.A, spec.B
    M = _bordered(A, B)
    r_ab = rank(Matrix.hstack(A, B))
    iM, iA = inertia(M), inertia(A)
    ev = {
        "r[A,B]": r_ab,
        "i+(M)": iM.plus,
        "i-(M)": iM.minus,
        "i+(A)": iA.plus,
        "i-(A)": iA.minus,
    }
    if spec.sign == "plus":
        return _profile(
            A.rows,
            r_ab,
            iA.plus + r_ab - iM.plus,
            iM.plus,
            iA.plus,
            iA.minus,
            r_ab - iM.plus,
            ev,
        )
    return _profile(
        A.rows,
        r_ab,
        iA.minus + r_ab - iM.minus,
        iA.plus,
        r_ab - iM.minus,
        iM.minus,
        iA.minus,
        ev,
    )


def profile_completion_two(spec: CompletionSpec) -> ExtremalProfile:
    """Extremes of A - BXB* - CYC* over Hermitian X and Y."""
    if spec.C is None or spec.cone != "none":
        raise ValueError("expects an unconstrained two-term completion")
    A, B, C = spec.A, spec.B, spec.C
    m, n, k = A.rows, B.cols, C.cols
    r_abc = rank(Matrix.hstack(A, B, C))
    N3 = Matrix.block(
        [
            [A, B, C],
            [B.H, Matrix.zeros(n, n), Matrix.zeros(n, k)],
            [C.H, Matrix.zeros(k, n), Matrix.zeros(k, k)],
        ]
    )
    iN = inertia(N3)
    r_abc_c = rank(Matrix.block([[A, B], [C.H, Matrix.zeros(k, n)]]))
    r_bb = rank(Matrix.block([[A, B, C], [B.H, Matrix.zeros(n, n), Matrix.zeros(n, k)]]))
    r_cc = rank(Matrix.block([[A, B, C], [C.H, Matrix.zeros(k, n), Matrix.zeros(k, k)]]))
    ev = {
        "r[A,B,C]": r_abc,
        "r[A B; C* 0]": r_abc_c,
        "r[A B C; B* 0 0]": r_bb,
        "r[A B C; C* 0 0]": r_cc,
        "i+(N)": iN.plus,
        "i-(N)": iN.minus,
    }
    return _profile(
        m,
        r_abc,
        2 * r_abc + r_abc_c - r_bb - r_cc,
        iN.plus,
        r_abc - iN.minus,
        iN.minus,
        r_abc - iN.plus,
        ev,
    )


def profile_skew_pair(A: Matrix, B: Matrix, C: Optional[Matrix] = None) -> ExtremalProfile:
    """Extremes of A - BXC - (BXC)* or, without C, of A - BX - (BX)*.

    Raises:
        NotHermitian: A is not Hermitian.
        RangeHypothesisViolated: C is given and R(B) is not inside R(C*).
    """
    if not A.is_hermitian():
        raise NotHermitian("A")
    if B.rows != A.rows:
        raise DimensionMismatch("B must have as many rows as A")
    m = A.rows
    M = _bordered(A, B)
    iM = inertia(M)
    if C is None:
        rb = rank(B)
        ev = {"r(M)": iM.rank, "i+(M)": iM.plus, "i-(M)": iM.minus, "r(B)": rb}
        return _profile(
            m,
            min(m, iM.rank),
            iM.rank - 2 * rb,
            iM.plus,
            iM.plus - rb,
            iM.minus,
            iM.minus - rb,
            ev,
        )
    if C.cols != m:
        raise DimensionMismatch("C must have as many columns as A")
    if not range_contains(C.H, B):
        raise RangeHypothesisViolated("R(B) is not contained in R(C*)")
    r_ac = rank(Matrix.hstack(A, C.H))
    r_abc = rank(Matrix.block([[A, B], [C, Matrix.zeros(C.rows, B.cols)]]))
    ev = {
        "r[A,C*]": r_ac,
        "r[A B; C 0]": r_abc,
        "r(M)": iM.rank,
        "i+(M)": iM.plus,
        "i-(M)": iM.minus,
    }
    return _profile(
        m,
        min(r_ac, iM.rank),
        2 * r_ac + iM.rank - 2 * r_abc,
        iM.plus,
        r_ac + iM.plus - r_abc,
        iM.minus,
        r_ac + iM.minus - r_abc,
        ev,
    )


def _require_solvable(cert, what: str) -> None:
    if not cert.solvable:
        raise Unsolvable(f"{what}: failed {', '.join(cert.failed())}")


def profile_two_congruence(
    spec1: CongruenceEqSpec, spec2: CongruenceEqSpec
) -> ExtremalProfile:
    """Extremes of X1 - X2 over Hermitian solutions of A1X1A1* = B1 and A2X2A2* = B2."""
    _require_solvable(check_congruence(spec1), "first equation")
    _require_solvable(check_congruence(spec2), "second equation")
    A1, B1, A2, B2 = spec1.A, spec1.B, spec2.A, spec2.B
    if A1.cols != A2.cols:
        raise DimensionMismatch("A1 and A2 need the same column count")
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
    }
    return _profile(
        n,
        min(n, iM.rank + 2 * n - 2 * r1 - 2 * r2),
        iM.rank - 2 * r12,
        iM.plus + n - r1 - r2,
        iM.plus - r12,
        iM.minus + n - r1 - r2,
        iM.minus - r12,
        ev,
    )


def _check_p(P: Matrix, n: int) -> None:
    if P.shape != (n, n):
        raise DimensionMismatch(f"P must be {n}x{n}, got {P.rows}x{P.cols}")
    if not P.is_hermitian():
        raise NotHermitian("P")


def profile_linear_vs_p(spec: LinearEqSpec, P: Matrix) -> ExtremalProfile:
    """Extremes of X - P over Hermitian solutions X of AX = B."""
    _require_solvable(check_linear_hermitian(spec), "AX = B")
    A, B, n = spec.A, spec.B, spec.n
    _check_p(P, n)
    r_bap = rank(B - A @ P)
    G = B @ A.H - A @ P @ A.H
    iG = inertia(G)
    ra = rank(A)
    ev = {
        "r(B-AP)": r_bap,
        "r(BA*-APA*)": iG.rank,
        "i+(BA*-APA*)": iG.plus,
        "i-(BA*-APA*)": iG.minus,
        "r(A)": ra,
    }
    return _profile(
        n,
        r_bap - ra + n,
        2 * r_bap - iG.rank,
        iG.plus - ra + n,
        r_bap - iG.minus,
        iG.minus - ra + n,
        r_bap - iG.plus,
        ev,
    )


def profile_psd_linear_vs_p(spec: LinearEqSpec, P: Matrix) -> ExtremalProfile:
    """Extremes of X - P over PSD solutions X of AX = B, for PSD P.

    The minimal i+ and maximal i- use i+(X0 - P) = i-(M) and
    i-(X0 - P) = i+(M) - r(B) with M = [AB* B; B* P].
    """
    _require_solvable(check_linear_psd(spec), "AX = B (PSD)")
    A, B, n = spec.A, spec.B, spec.n
    _check_p(P, n)
    if inertia(P).minus:
        raise NotPsd("P")
    M = assemble_named_block("M_psdVsP", [A, B, P]).matrix
    iM = inertia(M)
    r_bap = rank(B - A @ P)
    iG = inertia(B @ A.H - A @ P @ A.H)
    ra, rb = rank(A), rank(B)
    ev = {
        "r(B-AP)": r_bap,
        "i+(BA*-APA*)": iG.plus,
        "i+(M)": iM.plus,
        "i-(M)": iM.minus,
        "r(A)": ra,
        "r(B)": rb,
    }
    return _profile(
        n,
        r_bap - ra + n,
        iM.minus + r_bap - iG.plus,
        iG.plus - ra + n,
        iM.minus,
        iM.plus - rb,
        r_bap - iG.plus,
        ev,
    )


def profile_two_linear(spec1: LinearEqSpec, spec2: LinearEqSpec) -> ExtremalProfile:
    """Extremes of X - Y over Hermitian solutions of AX = B and CY = D."""
    _require_solvable(check_linear_hermitian(spec1), "AX = B")
    _require_solvable(check_linear_hermitian(spec2), "CY = D")
    A, B, C, D = spec1.A, spec1.B, spec2.A, spec2.B
    if A.cols != C.cols:
        raise DimensionMismatch("A and C need the same column count")
    n = A.cols
    M = assemble_named_block("M_twoLinear", [A, B, C, D]).matrix
    N = assemble_named_block("N_twoLinear", [A, B, C, D]).matrix
    iM = inertia(M)
    rn = rank(N)
    ra, rc = rank(A), rank(C)
    r_mix = rank(A @ D.H - B @ C.H)
    r_a = rank(Matrix.block([[A, B @ A.H], [C, D @ A.H]]))
    r_c = rank(Matrix.block([[A, B @ C.H], [C, D @ C.H]]))
    ev = {
        "r(N)": rn,
        "i+(M)": iM.plus,
        "i-(M)": iM.minus,
        "r(A)": ra,
        "r(C)": rc,
        "r(AD*-BC*)": r_mix,
        "r[A BA*; C DA*]": r_a,
        "r[A BC*; C DC*]": r_c,
    }
    return _profile(
        n,
        n + rn - ra - rc,
        2 * rn + r_mix - r_a - r_c,
        n + iM.plus - ra - rc,
        rn - iM.minus,
        n + iM.minus - ra - rc,
        rn - iM.plus,
        ev,
    )


def _ls_lr_general(spec: CongruenceEqSpec) -> ExtremalProfile:
    A, B = spec.A, spec.B
    n = A.cols
    M = assemble_named_block("M_lsLr", [A, B]).matrix
    N = assemble_named_block("N_lsLr", [A, B]).matrix
    iM, iN = inertia(M), inertia(N)
    ra = rank(A)
    r_ab = rank(Matrix.hstack(A, B))
    ev = {
        "r(M)": iM.rank,
        "i+(M)": iM.plus,
        "i-(M)": iM.minus,
        "r(N)": iN.rank,
        "i+(N)": iN.plus,
        "i-(N)": iN.minus,
        "r(A)": ra,
        "r[A,B]": r_ab,
    }
    return _profile(
        n,
        min(n, 2 * n + iN.rank - 2 * ra - iM.rank),
        iN.rank + iM.rank - 2 * r_ab - 2 * ra,
        iN.minus + n - ra - iM.minus,
        iN.minus + iM.plus - r_ab - ra,
        iN.plus + n - ra - iM.plus,
        iN.plus + iM.minus - r_ab - ra,
        ev,
    )


def _ls_lr_psd(spec: CongruenceEqSpec) -> ExtremalProfile:
    A, B = spec.A, spec.B
    n = A.cols
    ra = rank(A)
    r_aba = rank(Matrix.hstack(A, B @ A))
    ev = {"r(A)": ra, "r[A,BA]": r_aba}
    return _profile(
        n,
        min(n, 2 * n + r_aba - 3 * ra),
        r_aba - ra,
        r_aba + n - 2 * ra,
        r_aba - ra,
        n - ra,
        0,
        ev,
    )


def profile_ls_vs_lr_branches(
    spec: CongruenceEqSpec,
) -> tuple[ExtremalProfile, Optional[ExtremalProfile]]:
    """General profile of X - Y (least-squares X, least-rank Y) and, for PSD B,
    the simplified branch.

    Raises:
        RouteDisagreement: The two branches differ for PSD B.
    """
    general = _ls_lr_general(spec)
    if inertia(spec.B).minus:
        return general, None
    simple = _ls_lr_psd(spec)
    if simple != general:
        raise RouteDisagreement(
            f"PSD branch {simple.values()} != general {general.values()}"
        )
    return general, simple


def profile_ls_vs_lr(spec: CongruenceEqSpec) -> ExtremalProfile:
    """Extremes of X - Y, X a least-squares and Y a least-rank Hermitian solution."""
    return profile_ls_vs_lr_branches(spec)[0]


# -- the completion routes used to derive the solution-set profiles ----------


def linear_vs_p_completion_spec(spec: LinearEqSpec, P: Matrix) -> CompletionSpec:
    """X - P = (X0 - P) + F_A U F_A written as a Hermitian completion."""
    _require_solvable(check_linear_hermitian(spec), "AX = B")
    _check_p(P, spec.n)
    return CompletionSpec(hermitian_particular(spec) - P, f_proj(spec.A))


def psd_linear_vs_p_completion_spec(spec: LinearEqSpec, P: Matrix) -> CompletionSpec:
    """X - P = (X0 - P) + F_A U F_A with U PSD, as a plus-sign PSD completion."""
    _require_solvable(check_linear_psd(spec), "AX = B (PSD)")
    _check_p(P, spec.n)
    return CompletionSpec(
        psd_particular(spec) - P, f_proj(spec.A), sign="plus", cone="psd"
    )
