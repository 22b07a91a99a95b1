"""Named block matrices and the rank/inertia expansion identities.

Each identity evaluator returns :class:`IdentityReport` objects carrying both
the directly computed left-hand side and the expansion's right-hand side, so
checking an identity is a single comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

from .errors import DimensionMismatch, NotHermitian
from .exact import (
    Inertia,
    Matrix,
    e_proj,
    f_proj,
    inertia,
    mp_inverse,
    range_contains,
    rank,
)

Value = Union[int, Inertia]

BLOCK_NAMES = (
    "M1_bordered",
    "M2_bordered",
    "M_twoCongruence",
    "N_twoLinear",
    "M_twoLinear",
    "M_psdVsP",
    "M_lsLr",
    "N_lsLr",
)

# names whose construction is Hermitian for Hermitian data
HERMITIAN_BLOCKS = {
    "M1_bordered",
    "M2_bordered",
    "M_twoCongruence",
    "M_twoLinear",
    "M_psdVsP",
    "M_lsLr",
    "N_lsLr",
}

_ARITY = {
    "M1_bordered": ("A", "B"),
    "M2_bordered": ("A", "B", "D"),
    "M_twoCongruence": ("A1", "B1", "A2", "B2"),
    "N_twoLinear": ("A", "B", "C", "D"),
    "M_twoLinear": ("A", "B", "C", "D"),
    "M_psdVsP": ("A", "B", "P"),
    "M_lsLr": ("A", "B"),
    "N_lsLr": ("A", "B"),
}


@dataclass(frozen=True)
class IdentityReport:
    """One evaluated identity.

    ``lhs`` and ``rhs`` are ranks (``int``) or :class:`Inertia` triples.
    """

    name: str
    lhs: Value
    rhs: Value
    holds: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "holds", self.lhs == self.rhs)


@dataclass(frozen=True)
class NamedBlock:
    name: str
    matrix: Matrix


def _z(r: int, c: int) -> Matrix:
    return Matrix.zeros(r, c)


def assemble_named_block(name: str, inputs: Sequence[Matrix]) -> NamedBlock:
    """Build one of the named block matrices.

    Input order per name:

    * ``M1_bordered`` (A, B): [A B; B* 0]
    * ``M2_bordered`` (A, B, D): [A B; B* D]
    * ``M_twoCongruence`` (A1, B1, A2, B2): [B1 0 A1; 0 -B2 A2; A1* A2* 0]
    * ``N_twoLinear`` (A, B, C, D): [A B; C D]
    * ``M_twoLinear`` (A, B, C, D): [AB* 0 A; 0 -CD* C; A* C* 0]
    * ``M_psdVsP`` (A, B, P): [AB* B; B* P]
    * ``M_lsLr`` (A, B) for AXA* = B: [B A; A* 0]
    * ``N_lsLr`` (A, B): [B BA A; A*B 0 0; A* 0 0]

    Raises:
        ValueError: Unknown name or wrong number of inputs.
        DimensionMismatch: Blocks do not conform; ``where`` names the block.
    """
    if name not in _ARITY:
        raise ValueError(f"unknown block name {name!r}")
    if len(inputs) != len(_ARITY[name]):
        raise ValueError(f"{name} takes {len(_ARITY[name])} inputs, got {len(inputs)}")
    if name == "M1_bordered":
        A, B = inputs
        M = Matrix.block([[A, B], [B.H, _z(B.cols, B.cols)]])
    elif name == "M2_bordered":
        A, B, D = inputs
        M = Matrix.block([[A, B], [B.H, D]])
    elif name == "M_twoCongruence":
        A1, B1, A2, B2 = inputs
        if A1.cols != A2.cols:
            raise DimensionMismatch("A1 and A2 need the same column count", where=(2, 0))
        M = Matrix.block(
            [
                [B1, _z(B1.rows, B2.cols), A1],
                [_z(B2.rows, B1.cols), -B2, A2],
                [A1.H, A2.H, _z(A1.cols, A1.cols)],
            ]
        )
    elif name == "N_twoLinear":
        A, B, C, D = inputs
        M = Matrix.block([[A, B], [C, D]])
    elif name == "M_twoLinear":
        A, B, C, D = inputs
        _conform(A, B, "A", "B")
        _conform(C, D, "C", "D")
        M = Matrix.block(
            [
                [A @ B.H, _z(A.rows, C.rows), A],
                [_z(C.rows, A.rows), -(C @ D.H), C],
                [A.H, C.H, _z(A.cols, A.cols)],
            ]
        )
    elif name == "M_psdVsP":
        A, B, P = inputs
        _conform(A, B, "A", "B")
        M = Matrix.block([[A @ B.H, B], [B.H, P]])
    elif name == "M_lsLr":
        A, B = inputs
        M = Matrix.block([[B, A], [A.H, _z(A.cols, A.cols)]])
    else:
        A, B = inputs
        n = A.cols
        M = Matrix.block(
            [
                [B, B @ A, A],
                [A.H @ B, _z(n, n), _z(n, n)],
                [A.H, _z(n, n), _z(n, n)],
            ]
        )
    return NamedBlock(name, M)


def _conform(A: Matrix, B: Matrix, a: str, b: str) -> None:
    if A.shape != B.shape:
        raise DimensionMismatch(f"{a} is {A.rows}x{A.cols} but {b} is {B.rows}x{B.cols}")


def _require_hermitian(X: Matrix, what: str) -> None:
    if not X.is_hermitian():
        raise NotHermitian(what)


def rank_expansion_report(
    A: Matrix, B: Matrix, C: Matrix, D: Matrix | None = None
) -> list[IdentityReport]:
    """Rank expansions of [A, B], [A; C] and [A B; C 0] through projectors.

    Both sides of each form are reported; the ``via-E_B`` and ``via-F_C`` labels
    are the alternate (swapped) forms.  ``D`` is accepted for interface symmetry and is
    not used.
    """
    if B.rows != A.rows:
        raise DimensionMismatch("B must have as many rows as A", where=(0, 1))
    if C.cols != A.cols:
        raise DimensionMismatch("C must have as many columns as A", where=(1, 0))
    r_ab = rank(Matrix.hstack(A, B))
    r_ac = rank(Matrix.vstack(A, C))
    r_abc = rank(Matrix.block([[A, B], [C, None]]))
    return [
        IdentityReport("hstack-rank-via-E_A", r_ab, rank(A) + rank(e_proj(A) @ B)),
        IdentityReport("hstack-rank-via-E_B", r_ab, rank(B) + rank(e_proj(B) @ A)),
        IdentityReport("vstack-rank-via-F_A", r_ac, rank(A) + rank(C @ f_proj(A))),
        IdentityReport("vstack-rank-via-F_C", r_ac, rank(C) + rank(A @ f_proj(C))),
        IdentityReport(
            "bordered-rank-via-E_B-F_C", r_abc, rank(B) + rank(C) + rank(e_proj(B) @ A @ f_proj(C))
        ),
    ]


def _plus_minus(X: Matrix) -> tuple[int, int]:
    t = inertia(X)
    return t.plus, t.minus


def _triple(order: int, plus: int, minus: int) -> Inertia:
    return Inertia(plus, minus, order - plus - minus)


def inertia_expansion_report(A: Matrix, B: Matrix, D: Matrix) -> list[IdentityReport]:
    """Inertia expansions of M1 = [A B; B* 0] and M2 = [A B; B* D].

    The PSD collapse (``M1-inertia-psd-A``) is emitted only when A is PSD and the
    Schur-complement form (``M2-inertia-range-included``) only when R(B) is inside R(A).
    """
    _require_hermitian(A, "A")
    _require_hermitian(D, "D")
    if B.rows != A.rows or B.cols != D.rows:
        raise DimensionMismatch("B must be m x n for A m x m and D n x n")
    m, n = A.rows, D.rows
    M1 = assemble_named_block("M1_bordered", [A, B]).matrix
    M2 = assemble_named_block("M2_bordered", [A, B, D]).matrix
    in1, in2 = inertia(M1), inertia(M2)
    rb = rank(B)
    EB = e_proj(B)
    p, q = _plus_minus(EB @ A @ EB)
    out = [
        IdentityReport("M1-inertia-via-E_B", in1, _triple(m + n, rb + p, rb + q)),
        IdentityReport("M1-rank-via-E_B", in1.rank, 2 * rb + p + q),
    ]
    EA = e_proj(A)
    Ap = mp_inverse(A)
    S = D - B.H @ Ap @ B
    K = Matrix.block([[_z(m, m), EA @ B], [B.H @ EA, S]])
    pa, qa = _plus_minus(A)
    pk, qk = _plus_minus(K)
    out.append(IdentityReport("M2-inertia-general", in2, _triple(m + n, pa + pk, qa + qk)))
    out.append(IdentityReport("M2-rank-general", in2.rank, pa + qa + pk + qk))
    if qa == 0:
        r_ab = rank(Matrix.hstack(A, B))
        out.append(IdentityReport("M1-inertia-psd-A", in1, _triple(m + n, r_ab, rb)))
    if range_contains(A, B):
        ps, qs = _plus_minus(S)
        out.append(IdentityReport("M2-inertia-range-included", in2, _triple(m + n, pa + ps, qa + qs)))
    return out


def projector_expansion_report(
    A: Matrix, B: Matrix, C: Matrix, D: Matrix, P: Matrix, Q: Matrix
) -> list[IdentityReport]:
    """Rank/inertia expansions that absorb the projectors E_P and F_Q.

    An identity is evaluated whenever the shapes fit its bordered layout;
    the inertia forms additionally need Hermitian A (and D):

    * ``rank-absorb-E_P``: [A B; E_P C 0], P with as many rows as C
    * ``rank-absorb-F_Q``: [A BF_Q; C 0], Q with as many columns as B
    * ``rank-absorb-E_P-F_Q``: both projectors at once
    * ``inertia-absorb-F_P``: [A BF_P; F_P B* 0] for Hermitian A, P with as many columns as B
    * ``inertia-absorb-E_Q``: [E_Q A E_Q  E_Q B; B* E_Q  D] for Hermitian A, D; Q with as many rows as A

    Raises:
        DimensionMismatch: No identity fits the given shapes.
    """
    out: list[IdentityReport] = []
    rect_ok = A.rows == B.rows and A.cols == C.cols
    if rect_ok and P.rows == C.rows:
        lhs = rank(Matrix.block([[A, B], [e_proj(P) @ C, None]]))
        rhs = rank(Matrix.block([[A, B, None], [C, None, P]])) - rank(P)
        out.append(IdentityReport("rank-absorb-E_P", lhs, rhs))
    if rect_ok and Q.cols == B.cols:
        lhs = rank(Matrix.block([[A, B @ f_proj(Q)], [C, None]]))
        rhs = rank(Matrix.block([[A, B], [C, None], [None, Q]])) - rank(Q)
        out.append(IdentityReport("rank-absorb-F_Q", lhs, rhs))
    if rect_ok and P.rows == C.rows and Q.cols == B.cols:
        lhs = rank(Matrix.block([[A, B @ f_proj(Q)], [e_proj(P) @ C, None]]))
        rhs = (
            rank(Matrix.block([[A, B, None], [C, None, P], [None, Q, None]]))
            - rank(P)
            - rank(Q)
        )
        out.append(IdentityReport("rank-absorb-E_P-F_Q", lhs, rhs))
    herm_a = A.is_square() and A.is_hermitian()
    if herm_a and A.rows == B.rows and P.cols == B.cols:
        m, n, p = A.rows, B.cols, P.rows
        BF = B @ f_proj(P)
        lhs = inertia(Matrix.block([[A, BF], [BF.H, _z(n, n)]]))
        big = Matrix.block(
            [[A, B, _z(m, p)], [B.H, _z(n, n), P.H], [_z(p, m), P, _z(p, p)]]
        )
        bp, bq = _plus_minus(big)
        rp = rank(P)
        out.append(IdentityReport("inertia-absorb-F_P", lhs, _triple(m + n, bp - rp, bq - rp)))
    if herm_a and D.is_hermitian() and A.rows == B.rows and B.cols == D.rows and Q.rows == A.rows:
        m, n, q = A.rows, D.rows, Q.cols
        EQ = e_proj(Q)
        lhs = inertia(Matrix.block([[EQ @ A @ EQ, EQ @ B], [B.H @ EQ, D]]))
        big = Matrix.block(
            [[A, B, Q], [B.H, D, _z(n, q)], [Q.H, _z(q, n), _z(q, q)]]
        )
        bp, bq = _plus_minus(big)
        rq = rank(Q)
        out.append(IdentityReport("inertia-absorb-E_Q", lhs, _triple(m + n, bp - rq, bq - rq)))
    if not out:
        raise DimensionMismatch("no projector expansion fits the given shapes")
    return out


def hyperbolic_report(Q: Matrix) -> IdentityReport:
    """Inertia of [0 Q; Q* 0] against (r(Q), r(Q), m + n - 2r(Q))."""
    m, n = Q.shape
    M = assemble_named_block("M1_bordered", [_z(m, m), Q]).matrix
    rq = rank(Q)
    return IdentityReport("hyperbolic-block", inertia(M), Inertia(rq, rq, m + n - 2 * rq))


def direct_sum_report(A: Matrix, B: Matrix) -> IdentityReport:
    """Inertia of diag(A, B) against the sum of the parts."""
    _require_hermitian(A, "A")
    _require_hermitian(B, "B")
    ia, ib = inertia(A), inertia(B)
    lhs = inertia(_diag2(A, B))
    return IdentityReport(
        "direct-sum", lhs, Inertia(ia.plus + ib.plus, ia.minus + ib.minus, ia.zero + ib.zero)
    )


def _diag2(A: Matrix, B: Matrix) -> Matrix:
    return Matrix.block(
        [[A, _z(A.rows, B.cols)], [_z(B.rows, A.cols), B]]
    )


def congruence_report(A: Matrix, P: Matrix) -> IdentityReport:
    """inertia(P A P*) against inertia(A) for nonsingular P."""
    return IdentityReport("congruence-invariance", inertia(P @ A @ P.H), inertia(A))


def scaling_report(A: Matrix, lam) -> IdentityReport:
    """inertia(lam A) against inertia(A), swapped when lam < 0."""
    base = inertia(A)
    scaled = inertia(A.scale(lam))
    if lam == 0:
        raise ValueError("scaling law needs a nonzero factor")
    return IdentityReport("scaling-law", scaled, base if lam > 0 else base.swapped())
