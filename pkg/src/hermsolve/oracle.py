"""Seeded instance generation and sampling-based verification.

Instances are solvable by construction.  Envelope checks sample the free
parameters of a solution family, record the rank and inertia of every
realized matrix, and compare them with the closed-form profile: every sample
must lie inside [min, max], and the maxima should be reached.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

from .blocks import (
    IdentityReport,
    congruence_report,
    direct_sum_report,
    hyperbolic_report,
    inertia_expansion_report,
    projector_expansion_report,
    rank_expansion_report,
    scaling_report,
)
from .exact import GaussianRational, Matrix, f_proj, inertia, mp_inverse, rank
from .extremal import (
    CompletionSpec,
    ExtremalProfile,
    profile_completion_hermitian,
    profile_completion_psd,
    profile_completion_two,
    profile_linear_vs_p,
    profile_ls_vs_lr,
    profile_psd_linear_vs_p,
    profile_skew_pair,
    profile_two_congruence,
    profile_two_linear,
)
from .errors import RouteDisagreement, UnsupportedQuery
from .ordering import (
    MODES,
    RELATIONS,
    OrderingQuery,
    Verdict,
    common_solution,
    decide_average_equality,
    decide_linear_vs_p,
    decide_ls_vs_lr,
    decide_partition_average,
    decide_perturbed,
    decide_psd_linear_vs_p,
    decide_sum_average,
    decide_transformed_ordering,
    decide_transformed_set_equality,
    decide_two_congruence,
    decide_two_linear,
    monotone_consistency,
)
from .solutions import (
    CongruenceEqSpec,
    LinearEqSpec,
    congruence_particular,
    derive_seed,
    hermitian_particular,
    hermitian_solution,
    least_rank_data,
    psd_particular,
    psd_solution,
    random_rational,
    sample_matrix,
)

INSTANCE_KINDS = (
    "linearHermitian",
    "linearPsd",
    "congruence",
    "twoLinear",
    "twoCongruence",
    "lsLr",
    "completion",
)

PROFILE_KINDS = (
    "completion",
    "completion-psd",
    "completion-two",
    "skew",
    "two-congruence",
    "linear-vs-p",
    "psd-vs-p",
    "two-linear",
    "ls-vs-lr",
)

SCALES = (10, 1000, 10**6)


@dataclass(frozen=True)
class InstanceRecipe:
    seed: int
    m: int
    n: int
    kind: str = "linearHermitian"
    bound: int = 3

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("dimensions must be nonnegative")
        if self.bound < 1:
            raise ValueError("bound must be at least 1")
        if self.kind not in INSTANCE_KINDS:
            raise ValueError(f"unknown instance kind {self.kind!r}")


# ---------------------------------------------------------------------------
# random building blocks
# ---------------------------------------------------------------------------


def _rank_draw(rng: random.Random, m: int, n: int) -> int:
    return rng.randint(0, min(m, n))


def random_low_rank(rng: random.Random, m: int, n: int, bound: int) -> Matrix:
    """m x n matrix whose rank is drawn uniformly from 0..min(m, n)."""
    return sample_matrix(rng, m, n, bound, _rank_draw(rng, m, n))


def random_hermitian_low_rank(
    rng: random.Random, n: int, bound: int, psd: bool = False
) -> Matrix:
    """V D V* with random rank and, unless ``psd``, random signs in D."""
    r = rng.randint(0, n)
    V = sample_matrix(rng, n, r, bound)
    d = []
    for _ in range(r):
        q = abs(random_rational(rng, bound)) or 1
        d.append(q if psd or rng.random() < 0.5 else -q)
    return V @ Matrix.diag(d) @ V.H


def random_hermitian(rng: random.Random, n: int, bound: int) -> Matrix:
    X = sample_matrix(rng, n, n, bound)
    return X + X.H


def generate_instance(recipe: InstanceRecipe):
    """Build the equation data described by ``recipe``.

    Returns:
        ``LinearEqSpec`` for linearHermitian and linearPsd,
        ``CongruenceEqSpec`` for congruence and lsLr, a pair of specs for
        twoLinear and twoCongruence, and a ``CompletionSpec`` for completion.
    """
    rng = random.Random(derive_seed("instance", recipe.seed, recipe.kind, recipe.m, recipe.n))
    m, n, b = recipe.m, recipe.n, recipe.bound
    kind = recipe.kind
    if kind == "linearHermitian":
        A = random_low_rank(rng, m, n, b)
        return LinearEqSpec(A, A @ random_hermitian_low_rank(rng, n, b))
    if kind == "linearPsd":
        A = random_low_rank(rng, m, n, b)
        return LinearEqSpec(A, A @ random_hermitian_low_rank(rng, n, b, psd=True))
    if kind == "congruence":
        A = random_low_rank(rng, m, n, b)
        X0 = random_hermitian_low_rank(rng, n, b)
        return CongruenceEqSpec(A, A @ X0 @ A.H)
    if kind == "twoLinear":
        A = random_low_rank(rng, m, n, b)
        C = random_low_rank(rng, rng.randint(1, max(1, m)), n, b)
        X0 = random_hermitian_low_rank(rng, n, b)
        Y0 = X0 if rng.random() < 0.3 else random_hermitian_low_rank(rng, n, b)
        return LinearEqSpec(A, A @ X0), LinearEqSpec(C, C @ Y0)
    if kind == "twoCongruence":
        A1 = random_low_rank(rng, m, n, b)
        A2 = random_low_rank(rng, rng.randint(1, max(1, m)), n, b)
        X1 = random_hermitian_low_rank(rng, n, b)
        X2 = X1 if rng.random() < 0.3 else random_hermitian_low_rank(rng, n, b)
        return CongruenceEqSpec(A1, A1 @ X1 @ A1.H), CongruenceEqSpec(A2, A2 @ X2 @ A2.H)
    if kind == "lsLr":
        A = random_low_rank(rng, m, n, b)
        return CongruenceEqSpec(A, random_hermitian_low_rank(rng, m, b, psd=rng.random() < 0.5))
    A = random_hermitian_low_rank(rng, m, b)
    return CompletionSpec(A, random_low_rank(rng, m, n, b))


# ---------------------------------------------------------------------------
# parameter draws
# ---------------------------------------------------------------------------


def _grid_matrix(rng: random.Random, r: int, c: int) -> Matrix:
    return Matrix.from_entries(r, c, [rng.randint(-2, 2) for _ in range(r * c)])


def _noise(rng: random.Random, r: int, c: int, bound: int) -> Matrix:
    return sample_matrix(rng, r, c, bound)


class _Draws:
    """Draw schedule for one or more parameters.

    The first draws run through all sign combinations of each structured
    direction at every scale, then zero and identity-like choices; the rest
    alternate between small integer grids, random rationals and scaled
    structured draws with noise.
    """

    def __init__(self, shapes: Sequence[tuple[int, int]], structured: Sequence[Matrix], bound: int):
        self.shapes = list(shapes)
        self.structured = list(structured)
        self.bound = bound
        k = len(self.shapes)
        self.fixed: list[list[Matrix]] = []
        for c in SCALES:
            for signs in range(2**k):
                self.fixed.append(
                    [
                        self.structured[i].scale(c if (signs >> i) & 1 == 0 else -c)
                        for i in range(k)
                    ]
                )
        self.fixed.append([Matrix.zeros(*s) for s in self.shapes])

    def draw(self, rng: random.Random, t: int) -> list[Matrix]:
        if t < len(self.fixed):
            return self.fixed[t]
        mode = t % 4
        out = []
        for (r, c), S in zip(self.shapes, self.structured):
            if mode == 0:
                out.append(_grid_matrix(rng, r, c))
            elif mode == 1:
                out.append(_noise(rng, r, c, self.bound))
            elif mode == 2:
                sc = rng.choice(SCALES) * rng.choice((1, -1))
                out.append(S.scale(sc) + _noise(rng, r, c, self.bound))
            else:
                pick = rng.random()
                if pick < 0.3:
                    out.append(Matrix.zeros(r, c))
                elif pick < 0.65:
                    out.append(S.scale(rng.choice(SCALES) * rng.choice((1, -1))))
                else:
                    out.append(_grid_matrix(rng, r, c))
        return out


def _herm(X: Matrix) -> Matrix:
    return X + X.H


# ---------------------------------------------------------------------------
# envelope cases
# ---------------------------------------------------------------------------


@dataclass
class EnvelopeCase:
    """A closed-form profile plus a sampler of the matrices it describes."""

    kind: str
    profile: ExtremalProfile
    sample: Callable[[random.Random, int], Matrix]
    inputs: dict[str, Matrix] = field(default_factory=dict)


def completion_case(spec: CompletionSpec, bound: int = 3) -> EnvelopeCase:
    A, B = spec.A, spec.B
    k = B.cols
    if spec.cone == "psd":
        profile = profile_completion_psd(spec)
        sgn = 1 if spec.sign == "plus" else -1
        draws = _Draws([(k, k)], [Matrix.identity(k)], bound)

        def sample(rng, t):
            (V,) = draws.draw(rng, t)
            return A + (B @ V @ V.H @ B.H).scale(sgn)

        return EnvelopeCase("completion-psd", profile, sample, {"A": A, "B": B})
    if spec.C is not None:
        C = spec.C
        profile = profile_completion_two(spec)
        draws = _Draws(
            [(k, k), (C.cols, C.cols)], [Matrix.identity(k), Matrix.identity(C.cols)], bound
        )

        def sample(rng, t):
            X, Y = draws.draw(rng, t)
            return A - B @ _herm(X) @ B.H - C @ _herm(Y) @ C.H

        return EnvelopeCase("completion-two", profile, sample, {"A": A, "B": B, "C": C})
    profile = profile_completion_hermitian(spec)
    draws = _Draws([(k, k)], [Matrix.identity(k)], bound)

    def sample(rng, t):
        (X,) = draws.draw(rng, t)
        return A - B @ _herm(X) @ B.H

    return EnvelopeCase("completion", profile, sample, {"A": A, "B": B})


def skew_case(A: Matrix, B: Matrix, C: Optional[Matrix] = None, bound: int = 3) -> EnvelopeCase:
    profile = profile_skew_pair(A, B, C)
    Cm = Matrix.identity(A.rows) if C is None else C
    # X = c B* C^+ turns BXC into c BB*
    S = B.H @ mp_inverse(Cm)
    draws = _Draws([S.shape], [S], bound)

    def sample(rng, t):
        (X,) = draws.draw(rng, t)
        BXC = B @ X @ Cm
        return A - BXC - BXC.H

    inputs = {"A": A, "B": B}
    if C is not None:
        inputs["C"] = C
    return EnvelopeCase("skew", profile, sample, inputs)


def two_congruence_case(spec1: CongruenceEqSpec, spec2: CongruenceEqSpec, bound: int = 3) -> EnvelopeCase:
    profile = profile_two_congruence(spec1, spec2)
    n = spec1.n
    X1, X2 = congruence_particular(spec1), congruence_particular(spec2)
    F1, F2 = f_proj(spec1.A), f_proj(spec2.A)
    draws = _Draws([(n, n), (n, n)], [F1, F2], bound)

    def sample(rng, t):
        U1, U2 = draws.draw(rng, t)
        return X1 - X2 + _herm(F1 @ U1) - _herm(F2 @ U2)

    inputs = {"A1": spec1.A, "B1": spec1.B, "A2": spec2.A, "B2": spec2.B}
    return EnvelopeCase("two-congruence", profile, sample, inputs)


def linear_vs_p_case(spec: LinearEqSpec, P: Matrix, bound: int = 3) -> EnvelopeCase:
    profile = profile_linear_vs_p(spec, P)
    n = spec.n
    X0 = hermitian_particular(spec)
    F = f_proj(spec.A)
    draws = _Draws([(n, n)], [Matrix.identity(n)], bound)

    def sample(rng, t):
        (U,) = draws.draw(rng, t)
        return X0 - P + F @ _herm(U) @ F

    return EnvelopeCase("linear-vs-p", profile, sample, {"A": spec.A, "B": spec.B, "P": P})


def psd_vs_p_case(spec: LinearEqSpec, P: Matrix, bound: int = 3) -> EnvelopeCase:
    profile = profile_psd_linear_vs_p(spec, P)
    n = spec.n
    X0 = psd_particular(spec)
    F = f_proj(spec.A)
    draws = _Draws([(n, n)], [Matrix.identity(n)], bound)

    def sample(rng, t):
        (V,) = draws.draw(rng, t)
        return X0 - P + F @ V @ V.H @ F

    return EnvelopeCase("psd-vs-p", profile, sample, {"A": spec.A, "B": spec.B, "P": P})


def two_linear_case(spec1: LinearEqSpec, spec2: LinearEqSpec, bound: int = 3) -> EnvelopeCase:
    profile = profile_two_linear(spec1, spec2)
    n = spec1.n
    X0, Y0 = hermitian_particular(spec1), hermitian_particular(spec2)
    FA, FC = f_proj(spec1.A), f_proj(spec2.A)
    draws = _Draws([(n, n), (n, n)], [Matrix.identity(n), Matrix.identity(n)], bound)

    def sample(rng, t):
        U, W = draws.draw(rng, t)
        return X0 - Y0 + FA @ _herm(U) @ FA - FC @ _herm(W) @ FC

    inputs = {"A": spec1.A, "B": spec1.B, "C": spec2.A, "D": spec2.B}
    return EnvelopeCase("two-linear", profile, sample, inputs)


def ls_vs_lr_case(spec: CongruenceEqSpec, bound: int = 3) -> EnvelopeCase:
    profile = profile_ls_vs_lr(spec)
    m, n = spec.A.shape
    X0 = congruence_particular(spec)
    F = f_proj(spec.A)
    lr = least_rank_data(spec)
    draws = _Draws([(n, n), (m + n, n)], [F, lr.T1.H], bound)

    def sample(rng, t):
        U, V = draws.draw(rng, t)
        return X0 - lr.Y0 + _herm(F @ U) - _herm(lr.T1 @ V)

    return EnvelopeCase("ls-vs-lr", profile, sample, {"A": spec.A, "B": spec.B})


def case_from_recipe(profile_kind: str, recipe: InstanceRecipe) -> EnvelopeCase:
    """Random instance of the given profile kind built from the recipe's seed,
    dimensions and bound."""
    if profile_kind not in PROFILE_KINDS:
        raise ValueError(f"unknown profile kind {profile_kind!r}")
    rng = random.Random(derive_seed("case", profile_kind, recipe.seed, recipe.m, recipe.n))
    m, n, b = max(recipe.m, 1), max(recipe.n, 1), recipe.bound
    if profile_kind in ("completion", "completion-psd", "completion-two"):
        A = random_hermitian_low_rank(rng, m, b)
        B = random_low_rank(rng, m, rng.randint(1, n), b)
        if profile_kind == "completion":
            return completion_case(CompletionSpec(A, B), b)
        if profile_kind == "completion-psd":
            sign = rng.choice(("plus", "minus"))
            return completion_case(CompletionSpec(A, B, sign=sign, cone="psd"), b)
        C = random_low_rank(rng, m, rng.randint(1, n), b)
        return completion_case(CompletionSpec(A, B, C), b)
    if profile_kind == "skew":
        A = random_hermitian_low_rank(rng, m, b)
        if rng.random() < 0.35:
            return skew_case(A, random_low_rank(rng, m, rng.randint(1, n), b), None, b)
        C = random_low_rank(rng, rng.randint(1, n), m, b)
        B = C.H @ random_low_rank(rng, C.rows, rng.randint(1, n), b)
        return skew_case(A, B, C, b)
    if profile_kind == "two-congruence":
        s1, s2 = generate_instance(InstanceRecipe(recipe.seed, m, n, "twoCongruence", b))
        return two_congruence_case(s1, s2, b)
    if profile_kind == "two-linear":
        s1, s2 = generate_instance(InstanceRecipe(recipe.seed, m, n, "twoLinear", b))
        return two_linear_case(s1, s2, b)
    if profile_kind == "ls-vs-lr":
        spec = generate_instance(InstanceRecipe(recipe.seed, m, n, "lsLr", b))
        return ls_vs_lr_case(spec, b)
    if profile_kind == "linear-vs-p":
        spec = generate_instance(InstanceRecipe(recipe.seed, m, n, "linearHermitian", b))
        pick = rng.random()
        if pick < 0.15:
            P = Matrix.zeros(n, n)
        elif pick < 0.3:
            P = hermitian_solution(spec, random_hermitian_low_rank(rng, n, b))
        else:
            P = random_hermitian_low_rank(rng, n, b)
        return linear_vs_p_case(spec, P, b)
    spec = generate_instance(InstanceRecipe(recipe.seed, m, n, "linearPsd", b))
    pick = rng.random()
    if pick < 0.15:
        P = Matrix.zeros(n, n)
    elif pick < 0.3:
        P = Matrix.identity(n)
    elif pick < 0.45:
        P = psd_solution(spec, sample_matrix(rng, n, n, b))
    else:
        P = random_hermitian_low_rank(rng, n, b, psd=True)
    return psd_vs_p_case(spec, P, b)


@dataclass(frozen=True)
class EnvelopeReport:
    """Observed rank/inertia extremes of sampled members against the profile."""

    closed_form: ExtremalProfile
    observed_min_rank: int
    observed_max_rank: int
    observed_min_i_plus: int
    observed_max_i_plus: int
    observed_min_i_minus: int
    observed_max_i_minus: int
    trials: int
    max_attained: bool
    min_consistent: bool
    kind: str = ""
    first_violation: Optional[int] = None
    recipe: Optional[InstanceRecipe] = None

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "closed_form": self.closed_form.as_dict(),
            "observed": {
                "min_rank": self.observed_min_rank,
                "max_rank": self.observed_max_rank,
                "min_i_plus": self.observed_min_i_plus,
                "max_i_plus": self.observed_max_i_plus,
                "min_i_minus": self.observed_min_i_minus,
                "max_i_minus": self.observed_max_i_minus,
            },
            "trials": self.trials,
            "max_attained": self.max_attained,
            "min_consistent": self.min_consistent,
        }


def envelope_for_case(case: EnvelopeCase, trials: int, seed: int = 0) -> EnvelopeReport:
    """Sample ``trials`` members of ``case`` and compare with its profile."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    p = case.profile
    rng = random.Random(derive_seed("envelope", case.kind, seed))
    lo = [p.ambient_order + 1] * 3
    hi = [-1] * 3
    first_bad = None
    for t in range(trials):
        S = case.sample(rng, t)
        iS = inertia(S)
        vals = (iS.rank, iS.plus, iS.minus)
        for k, v in enumerate(vals):
            lo[k] = min(lo[k], v)
            hi[k] = max(hi[k], v)
        inside = (
            p.min_rank <= iS.rank <= p.max_rank
            and p.min_i_plus <= iS.plus <= p.max_i_plus
            and p.min_i_minus <= iS.minus <= p.max_i_minus
        )
        if not inside and first_bad is None:
            first_bad = t
    return EnvelopeReport(
        p,
        lo[0],
        hi[0],
        lo[1],
        hi[1],
        lo[2],
        hi[2],
        trials,
        (hi[0], hi[1], hi[2]) == (p.max_rank, p.max_i_plus, p.max_i_minus),
        first_bad is None,
        case.kind,
        first_bad,
    )


def monte_carlo_envelope(recipe: InstanceRecipe, profile_kind: str, trials: int) -> EnvelopeReport:
    """Envelope check on a random instance of ``profile_kind`` built from ``recipe``."""
    case = case_from_recipe(profile_kind, recipe)
    report = envelope_for_case(case, trials, recipe.seed)
    return replace(report, recipe=recipe)


def _envelope_job(args) -> EnvelopeReport:
    kind, seed, m, n, bound, trials = args
    return monte_carlo_envelope(InstanceRecipe(seed, m, n, bound=bound), kind, trials)


def envelope_sweep(
    profile_kind: str,
    instances: int,
    trials: int,
    seed: int = 0,
    max_dim: int = 4,
    bound: int = 3,
    workers: Optional[int] = None,
) -> list[EnvelopeReport]:
    """Envelope reports for ``instances`` random instances, in a fixed order.

    Dimensions are drawn per instance from the seed, so the result does not
    depend on ``workers``.
    """
    rng = random.Random(derive_seed("sweep", profile_kind, seed))
    jobs = []
    for i in range(instances):
        m, n = rng.randint(1, max_dim), rng.randint(1, max_dim)
        jobs.append((profile_kind, derive_seed(seed, profile_kind, i), m, n, bound, trials))
    if workers is None:
        workers = os.cpu_count() or 1
    if workers <= 1 or instances == 1:
        return [_envelope_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(_envelope_job, jobs, chunksize=max(1, instances // 32)))


# ---------------------------------------------------------------------------
# identity suite
# ---------------------------------------------------------------------------


def _nonsingular(rng: random.Random, n: int, bound: int) -> Matrix:
    while True:
        P = sample_matrix(rng, n, n, bound)
        if rank(P) == n:
            return P


def identity_trial(rng: random.Random, max_dim: int, bound: int = 3) -> list[IdentityReport]:
    """One random instance of every expansion identity."""
    d = lambda: rng.randint(1, max_dim)  # noqa: E731
    out: list[IdentityReport] = []
    m, n = d(), d()
    H = random_hermitian_low_rank(rng, m, bound)
    out.append(congruence_report(H, _nonsingular(rng, m, bound)))
    out.append(scaling_report(H, rng.choice((1, -1, 2, -2)) * rng.choice((1, random_rational(rng, 1) or 1))))
    out.append(direct_sum_report(H, random_hermitian_low_rank(rng, n, bound)))
    out.append(hyperbolic_report(random_low_rank(rng, m, n, bound)))

    A = random_low_rank(rng, m, n, bound)
    out += rank_expansion_report(
        A, random_low_rank(rng, m, d(), bound), random_low_rank(rng, d(), n, bound)
    )

    D = random_hermitian_low_rank(rng, n, bound)
    out += inertia_expansion_report(H, random_low_rank(rng, m, n, bound), D)
    Hp = random_hermitian_low_rank(rng, m, bound, psd=True)
    out += inertia_expansion_report(Hp, random_low_rank(rng, m, n, bound), D)
    # B = HW puts R(B) inside R(H)
    out += inertia_expansion_report(H, H @ random_low_rank(rng, m, n, bound), D)

    k, l, p, q = d(), d(), d(), d()
    out += projector_expansion_report(
        random_low_rank(rng, m, n, bound),
        random_low_rank(rng, m, k, bound),
        random_low_rank(rng, l, n, bound),
        Matrix.zeros(0, 0),
        random_low_rank(rng, l, p, bound),
        random_low_rank(rng, q, k, bound),
    )
    out += projector_expansion_report(
        H,
        random_low_rank(rng, m, n, bound),
        random_low_rank(rng, d(), m, bound),
        D,
        random_low_rank(rng, p, n, bound),
        random_low_rank(rng, m, q, bound),
    )
    return out


def identity_suite(seed: int, trials: int, max_dim: int, bound: int = 3) -> list[IdentityReport]:
    """Reports for ``trials`` random instances of every expansion identity."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if max_dim < 1:
        raise ValueError("max_dim must be at least 1")
    out: list[IdentityReport] = []
    for t in range(trials):
        rng = random.Random(derive_seed("identity", seed, t))
        out += identity_trial(rng, max_dim, bound)
    return out


# ---------------------------------------------------------------------------
# forced-value special cases
# ---------------------------------------------------------------------------


@dataclass
class SpecialCaseReport:
    """Per-case pass/fail counts of the forced-value checks."""

    passed: dict[str, int] = field(default_factory=dict)
    failed: dict[str, int] = field(default_factory=dict)
    first_failure: Optional[tuple[str, int]] = None

    def record(self, label: str, ok: bool, trial: int) -> None:
        bucket = self.passed if ok else self.failed
        bucket[label] = bucket.get(label, 0) + 1
        if not ok and self.first_failure is None:
            self.first_failure = (label, trial)

    @property
    def all_passed(self) -> bool:
        return not self.failed

    def as_dict(self) -> dict:
        return {"passed": dict(self.passed), "failed": dict(self.failed)}


def transformed_member(spec: CongruenceEqSpec, T: Matrix, U: Matrix) -> Matrix:
    """Hermitian solution of TAXA*T* = TBT* selected by U."""
    TA = T @ spec.A
    Y0 = congruence_particular(CongruenceEqSpec(TA, T @ spec.B @ T.H))
    return Y0 + _herm(f_proj(TA) @ U)


def average_member(spec: CongruenceEqSpec, T1: Matrix, T2: Matrix, U1: Matrix, U2: Matrix) -> Matrix:
    """(X1 + X2)/2 with X_j a solution of T_jAXA*T_j* = T_jBT_j*."""
    half = GaussianRational(1, 0) / 2
    return (transformed_member(spec, T1, U1) + transformed_member(spec, T2, U2)).scale(half)


def _full_column_rank(rng: random.Random, p: int, m: int, bound: int) -> Matrix:
    while True:
        T = sample_matrix(rng, p, m, bound)
        if rank(T) == m:
            return T


def special_case_equality_suite(seed: int, trials: int, max_dim: int = 3, bound: int = 3) -> SpecialCaseReport:
    """Instances whose minimum is known exactly; checks formula and witness."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rep = SpecialCaseReport()
    for t in range(trials):
        special_case_trial(rep, seed, t, max_dim, bound)
    return rep


def special_case_trial(
    rep: SpecialCaseReport, seed: int, t: int, max_dim: int = 3, bound: int = 3
) -> SpecialCaseReport:
    """Run trial ``t`` of the special-case suite into ``rep``."""
    rng = random.Random(derive_seed("special", seed, t))
    m, n = rng.randint(1, max_dim), rng.randint(1, max_dim)

    spec = generate_instance(InstanceRecipe(derive_seed(seed, t, "lh"), m, n, "linearHermitian", bound))
    P = hermitian_solution(spec, random_hermitian_low_rank(rng, n, bound))
    rep.record("linear-vs-p: P in S gives min rank 0", profile_linear_vs_p(spec, P).min_rank == 0, t)

    pspec = generate_instance(InstanceRecipe(derive_seed(seed, t, "lp"), m, n, "linearPsd", bound))
    P = psd_solution(pspec, sample_matrix(rng, n, n, bound))
    rep.record("psd-vs-p: P in S gives min rank 0", profile_psd_linear_vs_p(pspec, P).min_rank == 0, t)

    A2 = random_low_rank(rng, rng.randint(1, max_dim), n, bound)
    X0 = hermitian_solution(spec, random_hermitian_low_rank(rng, n, bound))
    other = LinearEqSpec(A2, A2 @ X0)
    W = common_solution(spec, other)
    ok = (
        profile_two_linear(spec, other).min_rank == 0
        and W is not None
        and spec.A @ W == spec.B
        and A2 @ W == other.B
    )
    rep.record("two-linear: shared solution gives min rank 0", ok, t)

    cspec = generate_instance(InstanceRecipe(derive_seed(seed, t, "c"), m, n, "congruence", bound))
    A2 = random_low_rank(rng, rng.randint(1, max_dim), n, bound)
    Xc = congruence_particular(cspec)
    rep.record(
        "two-congruence: shared solution gives min rank 0",
        profile_two_congruence(cspec, CongruenceEqSpec(A2, A2 @ Xc @ A2.H)).min_rank == 0,
        t,
    )

    T = _full_column_rank(rng, m + rng.randint(0, 1), m, bound) if rng.random() < 0.5 else cspec.A.H
    ok = rank(T @ cspec.A) == rank(cspec.A)
    for _ in range(5):
        Y = transformed_member(cspec, T, sample_matrix(rng, n, n, bound))
        ok = ok and cspec.A @ Y @ cspec.A.H == cspec.B
    rep.record("transformed: r(TA) = r(A) keeps the solution set", ok, t)

    A1 = random_low_rank(rng, rng.randint(1, max_dim), n, bound)
    stacked = Matrix.vstack(A1, A1)
    X1 = random_hermitian_low_rank(rng, n, bound)
    pspec2 = CongruenceEqSpec(stacked, stacked @ X1 @ stacked.H)
    k = A1.rows
    T1 = Matrix.hstack(Matrix.identity(k), Matrix.zeros(k, k))
    T2 = Matrix.hstack(Matrix.zeros(k, k), Matrix.identity(k))
    ok = True
    for _ in range(5):
        Y = average_member(pspec2, T1, T2, sample_matrix(rng, n, n, bound), sample_matrix(rng, n, n, bound))
        ok = ok and stacked @ Y @ stacked.H == pspec2.B
    rep.record("partition: equal blocks give solving averages", ok, t)

    T1 = _full_column_rank(rng, m + rng.randint(0, 1), m, bound)
    T2 = _full_column_rank(rng, m + rng.randint(0, 1), m, bound)
    ok = True
    for _ in range(5):
        Y = average_member(cspec, T1, T2, sample_matrix(rng, n, n, bound), sample_matrix(rng, n, n, bound))
        ok = ok and cspec.A @ Y @ cspec.A.H == cspec.B
    rep.record("average: r(T1A) = r(T2A) = r(A) gives solving averages", ok, t)

    # B = A W A* with W PSD puts R(BA) inside R(A)
    A = random_low_rank(rng, m, n, bound)
    V = sample_matrix(rng, n, rng.randint(0, n), bound)
    lspec = CongruenceEqSpec(A, A @ V @ V.H @ A.H)
    rep.record("ls-vs-lr: R(BA) in R(A) gives min rank 0", profile_ls_vs_lr(lspec).min_rank == 0, t)

    Bh = random_hermitian_low_rank(rng, n, bound)
    P = random_hermitian_low_rank(rng, n, bound)
    prof = profile_linear_vs_p(LinearEqSpec(Matrix.identity(n), Bh), P)
    iD = inertia(Bh - P)
    ok = (prof.max_rank, prof.min_rank, prof.max_i_plus, prof.min_i_plus, prof.max_i_minus, prof.min_i_minus) == (
        iD.rank, iD.rank, iD.plus, iD.plus, iD.minus, iD.minus
    )
    rep.record("linear-vs-p: A = I fixes the profile", ok, t)
    return rep


# ---------------------------------------------------------------------------
# route agreement
# ---------------------------------------------------------------------------

ROUTE_OPERATIONS = (
    "linear-vs-p",
    "psd-vs-p",
    "two-linear",
    "perturbed",
    "two-congruence",
    "transformed-set-equality",
    "transformed-ordering",
    "average",
    "partition",
    "sum-split",
    "ls-vs-lr",
)


def _all_queries() -> list[OrderingQuery]:
    out = []
    for mode in MODES:
        for rel in RELATIONS:
            try:
                out.append(OrderingQuery(rel, mode))
            except UnsupportedQuery:
                pass
    return out


@dataclass
class RouteReport:
    """Outcome counts of the two-route comparison, per decide operation."""

    instances: dict[str, int] = field(default_factory=dict)
    outcomes: dict[str, dict[str, int]] = field(default_factory=dict)
    disagreements: list[tuple[str, int, str]] = field(default_factory=list)
    monotone_failures: list[tuple[str, int]] = field(default_factory=list)

    def _note(self, op: str, v: Verdict) -> None:
        key = f"{v.query}:{'true' if v.holds else 'false'}"
        bucket = self.outcomes.setdefault(op, {})
        bucket[key] = bucket.get(key, 0) + 1

    @property
    def ok(self) -> bool:
        return not self.disagreements and not self.monotone_failures

    def as_dict(self) -> dict:
        return {
            "instances": dict(self.instances),
            "outcomes": {k: dict(sorted(v.items())) for k, v in self.outcomes.items()},
            "disagreements": [list(d) for d in self.disagreements],
            "monotone_failures": [list(d) for d in self.monotone_failures],
        }


def _random_t(rng: random.Random, m: int, bound: int) -> Matrix:
    pick = rng.random()
    rows = rng.randint(1, m + 1)
    if pick < 0.15:
        return Matrix.zeros(rows, m)
    if pick < 0.3:
        return Matrix.identity(m)
    return random_low_rank(rng, rows, m, bound)


def route_agreement_trial(rep: RouteReport, seed: int, t: int, max_dim: int = 3, bound: int = 2) -> RouteReport:
    """Decide every supported query on one random instance per operation."""
    rng = random.Random(derive_seed("routes", seed, t))
    m, n = rng.randint(1, max_dim), rng.randint(1, max_dim)
    queries = _all_queries()

    def run(op: str, decide: Callable[[OrderingQuery], Verdict], order_queries: bool = True) -> None:
        rep.instances[op] = rep.instances.get(op, 0) + 1
        for q in queries:
            try:
                rep._note(op, decide(q))
            except UnsupportedQuery:
                pass
            except RouteDisagreement as exc:
                rep.disagreements.append((op, t, str(exc)))
        if order_queries:
            try:
                if not monotone_consistency(decide):
                    rep.monotone_failures.append((op, t))
            except RouteDisagreement:
                pass

    def once(op: str, decide: Callable[[], Verdict]) -> None:
        rep.instances[op] = rep.instances.get(op, 0) + 1
        try:
            rep._note(op, decide())
        except RouteDisagreement as exc:
            rep.disagreements.append((op, t, str(exc)))

    # P is drawn on both sides of the solution set so every verdict occurs
    spec = generate_instance(InstanceRecipe(derive_seed(seed, t, "lh"), m, n, "linearHermitian", bound))
    X0 = hermitian_solution(spec, random_hermitian_low_rank(rng, n, bound))
    P = rng.choice([
        random_hermitian_low_rank(rng, n, bound),
        X0,
        X0 + random_hermitian_low_rank(rng, n, bound, psd=True),
        X0 - random_hermitian_low_rank(rng, n, bound, psd=True),
        Matrix.zeros(n, n),
    ])
    run("linear-vs-p", lambda q: decide_linear_vs_p(spec, P, q))

    pspec = generate_instance(InstanceRecipe(derive_seed(seed, t, "lp"), m, n, "linearPsd", bound))
    Xp = psd_solution(pspec, sample_matrix(rng, n, n, bound))
    Pp = rng.choice([
        random_hermitian_low_rank(rng, n, bound, psd=True),
        Xp,
        Xp + random_hermitian_low_rank(rng, n, bound, psd=True),
        Matrix.identity(n),
        Matrix.zeros(n, n),
    ])
    run("psd-vs-p", lambda q: decide_psd_linear_vs_p(pspec, Pp, q))

    s1, s2 = generate_instance(InstanceRecipe(derive_seed(seed, t, "tl"), m, n, "twoLinear", bound))
    run("two-linear", lambda q: decide_two_linear(s1, s2, q))

    dA = random_low_rank(rng, m, n, 1)
    Y = rng.choice([X0, random_hermitian_low_rank(rng, n, bound)])
    dB = (spec.A + dA) @ Y - spec.B
    run("perturbed", lambda q: decide_perturbed(spec, dA, dB, q))

    c1, c2 = generate_instance(InstanceRecipe(derive_seed(seed, t, "tc"), m, n, "twoCongruence", bound))
    run("two-congruence", lambda q: decide_two_congruence(c1, c2, q))

    cspec = generate_instance(InstanceRecipe(derive_seed(seed, t, "c"), m, n, "congruence", bound))
    T = _random_t(rng, m, bound)
    once("transformed-set-equality", lambda: decide_transformed_set_equality(cspec, T))
    run("transformed-ordering", lambda q: decide_transformed_ordering(cspec, T, q), order_queries=False)
    T1, T2 = _random_t(rng, m, bound), _random_t(rng, m, bound)
    once("average", lambda: decide_average_equality(cspec, T1, T2))
    if rng.random() < 0.3:
        # repeated blocks make the partition condition hold
        st = Matrix.vstack(cspec.A, cspec.A)
        part = CongruenceEqSpec(st, st @ congruence_particular(cspec) @ st.H)
        split = m
    else:
        part, split = cspec, rng.randint(0, m)
    once("partition", lambda: decide_partition_average(part, split))
    A1 = random_low_rank(rng, m, n, bound)
    once("sum-split", lambda: decide_sum_average(cspec, A1))

    ls = generate_instance(InstanceRecipe(derive_seed(seed, t, "ls"), m, n, "lsLr", bound))
    run("ls-vs-lr", lambda q: decide_ls_vs_lr(ls, q))
    return rep


def route_agreement_sweep(seed: int, instances: int, max_dim: int = 3, bound: int = 2) -> RouteReport:
    """Compare the closed-condition and profile routes on random instances."""
    if instances < 1:
        raise ValueError("instances must be at least 1")
    rep = RouteReport()
    for t in range(instances):
        route_agreement_trial(rep, seed, t, max_dim, bound)
    return rep
