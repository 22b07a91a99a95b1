"""Solvability tests and general Hermitian solutions of AX = B and AXA* = B.

Every constructor takes its free parameter explicitly, so callers (the
oracle in particular) can sweep parameters deterministically.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionMismatch, NotHermitian, Unsolvable
from .exact import (
    GaussianRational,
    Matrix,
    f_proj,
    frobenius_norm_sq,
    inertia,
    mp_inverse,
    pinv,
    rank,
    range_contains,
)


@dataclass(frozen=True)
class LinearEqSpec:
    """AX = B with A, B both m x n."""

    A: Matrix
    B: Matrix

    def __post_init__(self):
        if self.A.shape != self.B.shape:
            raise DimensionMismatch(
                f"A is {self.A.rows}x{self.A.cols} but B is {self.B.rows}x{self.B.cols}"
            )

    @property
    def n(self) -> int:
        return self.A.cols


@dataclass(frozen=True)
class CongruenceEqSpec:
    """AXA* = B with A m x n and B Hermitian m x m."""

    A: Matrix
    B: Matrix

    def __post_init__(self):
        if not self.B.is_hermitian():
            raise NotHermitian("B")
        if self.B.rows != self.A.rows:
            raise DimensionMismatch(
                f"B must be {self.A.rows}x{self.A.rows}, got {self.B.rows}x{self.B.cols}"
            )

    @property
    def n(self) -> int:
        return self.A.cols


@dataclass(frozen=True)
class SolvabilityCertificate:
    """Solvability verdict with the individual condition flags."""

    solvable: bool
    conditions: tuple[tuple[str, bool], ...]

    @classmethod
    def from_conditions(cls, conditions) -> "SolvabilityCertificate":
        conds = tuple((label, bool(ok)) for label, ok in conditions)
        return cls(all(ok for _, ok in conds), conds)

    def failed(self) -> list[str]:
        return [label for label, ok in self.conditions if not ok]


def check_linear_hermitian(spec: LinearEqSpec) -> SolvabilityCertificate:
    """AX = B has a Hermitian solution iff R(B) in R(A) and AB* = BA*."""
    A, B = spec.A, spec.B
    return SolvabilityCertificate.from_conditions(
        [
            ("R(B)⊆R(A)", range_contains(A, B)),
            ("AB*=BA*", A @ B.H == B @ A.H),
        ]
    )


def check_linear_psd(spec: LinearEqSpec) -> SolvabilityCertificate:
    """AX = B has a PSD solution iff R(B) in R(A), AB* is PSD and r(AB*) = r(B)."""
    A, B = spec.A, spec.B
    ABh = A @ B.H
    herm = ABh.is_hermitian()
    return SolvabilityCertificate.from_conditions(
        [
            ("R(B)⊆R(A)", range_contains(A, B)),
            ("AB*≽0", herm and inertia(ABh).minus == 0),
            ("R(AB*)=R(B)", rank(ABh) == rank(B)),
        ]
    )


def check_congruence(spec: CongruenceEqSpec) -> SolvabilityCertificate:
    """AXA* = B has a Hermitian solution iff AA^+B = B."""
    A, B = spec.A, spec.B
    return SolvabilityCertificate.from_conditions(
        [("AA†B=B", A @ mp_inverse(A) @ B == B)]
    )


def _require(cert: SolvabilityCertificate) -> None:
    if not cert.solvable:
        raise Unsolvable("failed: " + ", ".join(cert.failed()))


def _square(U: Matrix, n: int, what: str) -> None:
    if U.shape != (n, n):
        raise DimensionMismatch(f"{what} must be {n}x{n}, got {U.rows}x{U.cols}")


def hermitian_particular(spec: LinearEqSpec) -> Matrix:
    """X0 = A^+B + (A^+B)* - A^+BA^+A."""
    Ap = mp_inverse(spec.A)
    ApB = Ap @ spec.B
    return ApB + ApB.H - ApB @ Ap @ spec.A


def hermitian_solution(spec: LinearEqSpec, U: Matrix) -> Matrix:
    """General Hermitian solution X0 + F_A U F_A of AX = B.

    Args:
        spec: A solvable equation.
        U: Hermitian n x n parameter.

    Raises:
        Unsolvable: No Hermitian solution exists.
        NotHermitian: U is not Hermitian.
    """
    _require(check_linear_hermitian(spec))
    _square(U, spec.n, "U")
    if not U.is_hermitian():
        raise NotHermitian("U")
    FA = f_proj(spec.A)
    return hermitian_particular(spec) + FA @ U @ FA


def psd_particular(spec: LinearEqSpec) -> Matrix:
    """X0 = B*(AB*)^+B."""
    B = spec.B
    return B.H @ mp_inverse(spec.A @ B.H) @ B


def psd_solution(spec: LinearEqSpec, V: Matrix) -> Matrix:
    """General PSD solution B*(AB*)^+B + F_A VV* F_A of AX = B."""
    _require(check_linear_psd(spec))
    _square(V, spec.n, "V")
    FA = f_proj(spec.A)
    return psd_particular(spec) + FA @ V @ V.H @ FA


def congruence_particular(spec: CongruenceEqSpec) -> Matrix:
    """X0 = A^+B(A^+)*."""
    Ap = mp_inverse(spec.A)
    return Ap @ spec.B @ Ap.H


def _congruence_family(spec: CongruenceEqSpec, U: Matrix) -> Matrix:
    _square(U, spec.n, "U")
    FU = f_proj(spec.A) @ U
    return congruence_particular(spec) + FU + FU.H


def congruence_solution(spec: CongruenceEqSpec, U: Matrix) -> Matrix:
    """General Hermitian solution A^+B(A^+)* + F_A U + U* F_A of AXA* = B."""
    _require(check_congruence(spec))
    return _congruence_family(spec, U)


def least_squares_solution(spec: CongruenceEqSpec, U: Matrix) -> tuple[Fraction, Matrix]:
    """Frobenius least-squares Hermitian solution of AXA* = B.

    Returns:
        ``(residual, X)`` where ``residual`` is the squared Frobenius norm of
        B - AA^+BAA^+ (independent of U) and X is the member of the
        minimizing family selected by U.
    """
    A, B = spec.A, spec.B
    P = A @ mp_inverse(A)
    residual = frobenius_norm_sq(B - P @ B @ P)
    return residual, _congruence_family(spec, U)


@dataclass(frozen=True)
class LeastRankData:
    """Fixed pieces of the least-rank family: Y = Y0 + T1 V + V* T1*."""

    M: Matrix
    T: Matrix
    T1: Matrix
    Y0: Matrix
    min_rank: int


def least_rank_data(spec: CongruenceEqSpec) -> LeastRankData:
    A, B = spec.A, spec.B
    m, n = A.shape
    M = Matrix.block([[B, A], [A.H, Matrix.zeros(n, n)]])
    T = Matrix.hstack(Matrix.zeros(n, m), Matrix.identity(n))
    bundle = pinv(M)
    T1 = T @ bundle.f_proj
    Y0 = -(T @ bundle.pinv @ T.H)
    if not Y0.is_hermitian():
        raise AssertionError("-TM^+T* must be Hermitian for Hermitian M")
    min_rank = 2 * rank(Matrix.hstack(A, B)) - bundle.rank
    return LeastRankData(M, T, T1, Y0, min_rank)


def least_rank_solution(spec: CongruenceEqSpec, V: Matrix) -> tuple[int, Matrix]:
    """Hermitian Y minimizing rank(B - AYA*).

    Builds M = [B A; A* 0], T = [0, I_n], T1 = T F_M and returns
    Y = -TM^+T* + T1 V + V* T1*.

    Args:
        spec: The equation; need not be solvable.
        V: (m + n) x n parameter.

    Returns:
        ``(min_rank, Y)`` with min_rank = 2 r[A, B] - r(M).
    """
    m, n = spec.A.shape
    if V.shape != (m + n, n):
        raise DimensionMismatch(f"V must be {m + n}x{n}, got {V.rows}x{V.cols}")
    d = least_rank_data(spec)
    TV = d.T1 @ V
    return d.min_rank, d.Y0 + TV + TV.H


# ---------------------------------------------------------------------------
# deterministic samplers
# ---------------------------------------------------------------------------


def derive_seed(*parts) -> int:
    """64-bit seed from an arbitrary tuple of labels, stable across runs."""
    h = hashlib.sha256(repr(parts).encode()).digest()
    return int.from_bytes(h[:8], "big")


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_rational(rng: random.Random, bound: int) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_scalar(rng: random.Random, bound: int, complex_entries: bool = True):
    if complex_entries:
        return GaussianRational(random_rational(rng, bound), random_rational(rng, bound))
    return random_rational(rng, bound)


def sample_matrix(
    seed, m: int, n: int, bound: int = 3, rank_: int | None = None, complex_entries: bool = True
) -> Matrix:
    """Random m x n matrix; with ``rank_`` it is a product L R of that inner size."""
    if bound < 1:
        raise ValueError("bound must be positive")
    rng = _rng(seed)
    if rank_ is None:
        return Matrix.from_entries(
            m, n, [random_scalar(rng, bound, complex_entries) for _ in range(m * n)]
        )
    L = sample_matrix(rng, m, rank_, bound, None, complex_entries)
    R = sample_matrix(rng, rank_, n, bound, None, complex_entries)
    return L @ R


def sample_hermitian(seed, n: int, bound: int = 3, complex_entries: bool = True) -> Matrix:
    """Deterministic Hermitian n x n matrix; same seed gives the same matrix."""
    if bound < 1:
        raise ValueError("bound must be positive")
    rng = _rng(seed)
    rows = [[GaussianRational(0)] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = GaussianRational(random_rational(rng, bound))
        for j in range(i + 1, n):
            z = GaussianRational.coerce(random_scalar(rng, bound, complex_entries))
            rows[i][j] = z
            rows[j][i] = z.conjugate()
    return Matrix.from_entries(n, n, [x for r in rows for x in r])


def sample_psd(
    seed, n: int, bound: int = 3, rank_: int | None = None, complex_entries: bool = True
) -> Matrix:
    """Deterministic PSD matrix in Gram form VV*."""
    rng = _rng(seed)
    k = n if rank_ is None else rank_
    V = sample_matrix(rng, n, k, bound, None, complex_entries)
    return V @ V.H
