"""Singular two-parameter eigenvalue problems and their applications.

A two-parameter eigenvalue problem (2EP) couples two matrix families

    (A1 + lambda B1 + mu C1) x1 = 0,
    (A2 + lambda B2 + mu C2) x2 = 0,

and asks for the pairs (lambda, mu) admitting nonzero x1, x2.  The
operator determinants

    Delta0 = B1 (x) C2 - C1 (x) B2,
    Delta1 = C1 (x) A2 - A1 (x) C2,
    Delta2 = A1 (x) B2 - B1 (x) A2,

turn the 2EP into the coupled pencils Delta1 z = lambda Delta0 z and
Delta2 z = mu Delta0 z on decomposable tensors z = x1 (x) x2.  For the
problems of interest here both pencils are singular, so the lambda
components come out of the rank-completing-perturbation solver, and for
each lambda the matching mu is found by intersecting the mu-spectra of
the two one-parameter pencils (A_i + lambda B_i) + mu C_i.

Two applications are layered on top: finding all lambda where A + lambda B
has a double eigenvalue (via a quadratic 2EP linearization), and solving
systems of two bivariate polynomials given in determinantal form.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .matrix_core import EPS, as_cmatrix, kron, rank_with_tol
from .pencil import Pencil, read_matrix, write_matrix
from .solver import SolveOptions, solve

__all__ = [
    "TwoParamProblem",
    "DeltaTriple",
    "Eigenpair2EP",
    "DoubleEigResult",
    "operator_determinants",
    "pair_mu_candidates",
    "solve_2ep",
    "double_eig_linearization",
    "double_eig",
    "read_problem",
    "write_problem",
    "solutions_to_csv",
]

DEFAULT_MATCH_DELTA = math.sqrt(EPS)


@dataclass
class TwoParamProblem:
    """Six matrices defining the coupled system (A_i + lambda B_i + mu C_i) x_i = 0."""

    A1: np.ndarray
    B1: np.ndarray
    C1: np.ndarray
    A2: np.ndarray
    B2: np.ndarray
    C2: np.ndarray

    def __post_init__(self):
        for name in ("A1", "B1", "C1", "A2", "B2", "C2"):
            setattr(self, name, as_cmatrix(getattr(self, name), name))
        for i, (a, b, c) in enumerate(((self.A1, self.B1, self.C1), (self.A2, self.B2, self.C2)), 1):
            if not (a.shape == b.shape == c.shape) or a.shape[0] != a.shape[1]:
                raise ValueError(
                    f"equation {i}: A{i}, B{i}, C{i} must be square and of equal size"
                )

    @property
    def n1(self):
        return self.A1.shape[0]

    @property
    def n2(self):
        return self.A2.shape[0]

    def evaluate(self, i, lam, mu):
        """The matrix A_i + lambda B_i + mu C_i."""
        a, b, c = ((self.A1, self.B1, self.C1), (self.A2, self.B2, self.C2))[i - 1]
        return a + lam * b + mu * c

    def residuals(self, lam, mu):
        """Smallest singular value of each evaluated matrix at (lambda, mu).

        Equals the norm of the best achievable residual over unit
        vectors, i.e. how far the pair is from exactly solving each
        equation.
        """
        return tuple(
            float(np.linalg.svd(self.evaluate(i, lam, mu), compute_uv=False)[-1])
            for i in (1, 2)
        )


@dataclass
class DeltaTriple:
    """Operator determinants Delta0, Delta1, Delta2 of one 2EP."""

    D0: np.ndarray
    D1: np.ndarray
    D2: np.ndarray


@dataclass
class Eigenpair2EP:
    """One accepted eigenvalue pair with its acceptance diagnostics.

    mu_discrepancy is the distance |mu^(1) - mu^(2)| between the two
    independently computed mu candidates that were averaged into mu;
    residual1/residual2 are the smallest singular values of the two
    evaluated matrices at (lam, mu).
    """

    lam: complex
    mu: complex
    mu_discrepancy: float
    residual1: float
    residual2: float


def operator_determinants(p: TwoParamProblem) -> DeltaTriple:
    """The Kronecker-product operator determinants of the 2EP."""
    return DeltaTriple(
        D0=kron(p.B1, p.C2) - kron(p.C1, p.B2),
        D1=kron(p.C1, p.A2) - kron(p.A1, p.C2),
        D2=kron(p.A1, p.B2) - kron(p.B1, p.A2),
    )


def pair_mu_candidates(mus1, mus2):
    """Greedy nearest matching of two candidate lists.

    Repeatedly extracts the globally closest unmatched pair (ties broken
    by index order) and returns the matches sorted by ascending
    discrepancy; the output length is min(len(mus1), len(mus2)).
    """
    mus1 = [complex(m) for m in mus1]
    mus2 = [complex(m) for m in mus2]
    if not mus1 or not mus2:
        return []
    d = np.array([[abs(a - b) for b in mus2] for a in mus1], dtype=float)
    out = []
    for _ in range(min(len(mus1), len(mus2))):
        i, j = np.unravel_index(np.argmin(d), d.shape)
        out.append((mus1[i], mus2[j], float(d[i, j])))
        d[i, :] = np.inf
        d[:, j] = np.inf
    out.sort(key=lambda t: t[2])
    return out


def _cluster_values(values, tol):
    """Collapse numerically repeated values, keeping one representative each."""
    reps = []
    for v in sorted(values, key=lambda z: (z.real, z.imag)):
        if not any(abs(v - r) <= tol * max(1.0, abs(r)) for r in reps):
            reps.append(v)
    return reps


def _mu_candidates(a_fixed, c, opts, rng):
    """Finite mu with (a_fixed + mu c) x = 0, or None when mu is unconstrained.

    A zero C makes the equation independent of mu: if the fixed matrix
    is singular every mu works (wildcard, returns None), otherwise no mu
    works (empty list).
    """
    if np.linalg.norm(c, 1) == 0.0:
        if rank_with_tol(a_fixed) < a_fixed.shape[0]:
            return None
        return []
    res = solve(Pencil(A=a_fixed, B=-c), opts, rng)
    return res.finite_true_values


def solve_2ep(
    p: TwoParamProblem,
    delta=None,
    opts: SolveOptions | None = None,
    rng=None,
    unique_lambda=False,
):
    """Finite regular eigenvalues of a (possibly singular) 2EP.

    The lambda components are the finite true eigenvalues of the pencil
    (Delta1, Delta0).  For each distinct lambda the mu candidates of the
    two fixed-lambda pencils are matched greedily; a pair is accepted
    when its discrepancy is below ``delta`` (default sqrt(EPS)) and
    contributes the midpoint.  With ``unique_lambda`` the closest pair
    is accepted unconditionally (appropriate when each eigenvalue is
    known to have a distinct lambda component).

    Each accepted pair carries the smallest singular values of the two
    evaluated matrices as residuals; callers should treat pairs with
    large residuals as suspect rather than silently trusting the
    discrepancy test.

    The per-lambda searches run on independent RNG streams spawned from
    ``rng``, so results do not depend on evaluation order.
    """
    opts = opts or SolveOptions()
    if rng is None:
        rng = np.random.default_rng(opts.seed)
    if delta is None:
        delta = DEFAULT_MATCH_DELTA
    deltas = operator_determinants(p)
    lam_result = solve(Pencil(A=deltas.D1, B=deltas.D0), opts, rng)
    lams = _cluster_values(lam_result.finite_true_values, delta)
    pairs = []
    streams = rng.spawn(len(lams)) if lams else []
    for lam, stream in zip(lams, streams):
        mus1 = _mu_candidates(p.A1 + lam * p.B1, p.C1, opts, stream)
        mus2 = _mu_candidates(p.A2 + lam * p.B2, p.C2, opts, stream)
        if mus1 is None and mus2 is None:
            continue
        if mus1 is None:
            matched = [(m, m, 0.0) for m in mus2]
        elif mus2 is None:
            matched = [(m, m, 0.0) for m in mus1]
        else:
            matched = pair_mu_candidates(mus1, mus2)
        if unique_lambda:
            matched = matched[:1]
        for m1, m2, disc in matched:
            if not unique_lambda and disc >= delta:
                continue
            mu = (m1 + m2) / 2.0
            r1, r2 = p.residuals(lam, mu)
            pairs.append(
                Eigenpair2EP(lam=lam, mu=mu, mu_discrepancy=disc, residual1=r1, residual2=r2)
            )
    pairs.sort(key=lambda e: (e.lam.real, e.lam.imag, e.mu.real, e.mu.imag))
    return pairs


def double_eig_linearization(A, B):
    """Singular pencil whose finite eigenvalues are the double-eigenvalue lambdas.

    The quadratic condition that A + lambda B has a repeated eigenvalue
    mu (a nonzero x with (A + lambda B - mu I) x = 0 and a second vector
    in the kernel of the square) is linearized into a 2EP whose second
    equation uses the 3n x 3n block matrices

        P = [[A^2, AB + BA, -2A], [0, I, 0], [0, 0, I]],
        Q = [[0, B^2, -B], [-I, 0, 0], [0, 0, 0]],
        R = [[0, -B, I], [0, 0, 0], [-I, 0, 0]],

    acting on (y, lambda y, mu y).  The returned pair (D1, D0) consists
    of the operator determinants of that 2EP; it is of size
    3 n^2 x 3 n^2 and generically has normal rank 3 n^2 - n.
    """
    A = as_cmatrix(A, "A")
    B = as_cmatrix(B, "B")
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise ValueError("A and B must be square and of equal size")
    n = A.shape[0]
    I = np.eye(n, dtype=np.complex128)
    Z = np.zeros((n, n), dtype=np.complex128)
    P = np.block([[A @ A, A @ B + B @ A, -2.0 * A], [Z, I, Z], [Z, Z, I]])
    Q = np.block([[Z, B @ B, -B], [-I, Z, Z], [Z, Z, Z]])
    R = np.block([[Z, -B, I], [Z, Z, Z], [-I, Z, Z]])
    problem = TwoParamProblem(A1=A, B1=B, C1=-I, A2=P, B2=Q, C2=R)
    deltas = operator_determinants(problem)
    return deltas.D1, deltas.D0


@dataclass
class DoubleEigResult:
    """Double-eigenvalue locations with their verification gaps.

    ``gaps[i]`` is the minimal eigenvalue gap of A + lambdas[i] B
    relative to the spectral scale of that matrix; a value near zero
    certifies the double eigenvalue, a value of order one flags a
    spurious or degenerate answer.  ``solve_result`` exposes the full
    classified spectrum of the linearization, including its separation
    diagnostics.
    """

    lambdas: list
    gaps: list
    solve_result: object


def double_eig(A, B, opts: SolveOptions | None = None, rng=None, refine=True):
    """All lambda such that A + lambda B has a double eigenvalue.

    Runs the rank-completing-perturbation solver on the linearization
    from :func:`double_eig_linearization` (generically n(n-1) finite
    true eigenvalues) and verifies every candidate by recomputing the
    spectrum of A + lambda B.  With ``refine`` (default) each lambda is
    polished by a few Newton steps on the squared gap of the colliding
    eigenvalue pair, which is analytic across the collision; this
    typically improves the verification gap from about 1e-4 to below
    1e-7 of the spectral scale.
    """
    opts = opts or SolveOptions()
    if rng is None:
        rng = np.random.default_rng(opts.seed)
    A = as_cmatrix(A, "A")
    B = as_cmatrix(B, "B")
    D1, D0 = double_eig_linearization(A, B)
    result = solve(Pencil(A=D1, B=D0), opts, rng)
    lambdas = []
    gaps = []
    for lam in result.finite_true_values:
        if not np.isfinite(lam):
            # magnitude beyond the homogeneous resolution; report unrefined
            lambdas.append(lam)
            gaps.append(math.inf)
            continue
        if refine:
            lam = _refine_double(A, B, lam)
        lambdas.append(lam)
        gaps.append(_relative_gap(A, B, lam))
    order = sorted(range(len(lambdas)), key=lambda i: (lambdas[i].real, lambdas[i].imag))
    return DoubleEigResult(
        lambdas=[lambdas[i] for i in order],
        gaps=[gaps[i] for i in order],
        solve_result=result,
    )


def _closest_pair(w):
    n = len(w)
    best = math.inf
    pair = (0, 1)
    for i in range(n):
        for j in range(i + 1, n):
            d = abs(w[i] - w[j])
            if d < best:
                best, pair = d, (i, j)
    return pair


def _track_pair(w, mu_a, mu_b):
    """The two eigenvalues of w closest to a previously identified pair."""
    ia = int(np.argmin(np.abs(w - mu_a)))
    rest = np.abs(w - mu_b)
    rest[ia] = np.inf
    ib = int(np.argmin(rest))
    return w[ia], w[ib]


def _relative_gap(A, B, lam):
    w = np.linalg.eigvals(A + lam * B)
    if len(w) < 2:
        return math.inf
    i, j = _closest_pair(w)
    scale = max(1.0, float(np.max(np.abs(w))))
    return float(abs(w[i] - w[j]) / scale)


def _refine_double(A, B, lam, iters=12):
    """Newton polish of a double-eigenvalue location.

    Iterates on g(lambda) = (mu_a - mu_b)^2 for the colliding eigenvalue
    pair, tracked across evaluations by continuity.  g is analytic with
    a simple root at the exact collision, so Newton converges fast; the
    last improving iterate is returned (the computed gap bottoms out at
    the eigensolver's own noise floor).
    """
    w = np.linalg.eigvals(A + lam * B)
    if len(w) < 2:
        return lam
    i, j = _closest_pair(w)
    mu_a, mu_b = w[i], w[j]
    best = (abs(mu_a - mu_b), lam)
    h = 1e-5 * max(1.0, abs(lam))
    for _ in range(iters):
        vals = []
        for shift in (0.0, h, -h):
            w = np.linalg.eigvals(A + (lam + shift) * B)
            a, b = _track_pair(w, mu_a, mu_b)
            if shift == 0.0:
                mu_a, mu_b = a, b
            vals.append((a - b) ** 2)
        g, gp, gm = vals
        dg = (gp - gm) / (2.0 * h)
        if dg == 0.0:
            break
        lam = lam - g / dg
        w = np.linalg.eigvals(A + lam * B)
        mu_a, mu_b = _track_pair(w, mu_a, mu_b)
        gap = abs(mu_a - mu_b)
        if gap < best[0]:
            best = (gap, lam)
        if gap < 3e-9:
            break
    return best[1]


_MANIFEST_KEYS = ("A1", "B1", "C1", "A2", "B2", "C2")


def read_problem(manifest_path) -> TwoParamProblem:
    """Read a 2EP from a JSON manifest referencing six Matrix Market files.

    The manifest maps each of A1, B1, C1, A2, B2, C2 to a file path,
    resolved relative to the manifest's own directory.
    """
    with open(manifest_path) as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{manifest_path}: invalid JSON ({exc})") from exc
    missing = [k for k in _MANIFEST_KEYS if k not in doc]
    if missing:
        raise ValueError(f"{manifest_path}: manifest missing entries {missing}")
    base = os.path.dirname(os.path.abspath(manifest_path))
    mats = {k: read_matrix(os.path.join(base, doc[k])) for k in _MANIFEST_KEYS}
    return TwoParamProblem(**mats)


def write_problem(p: TwoParamProblem, directory, manifest_name="problem.json"):
    """Write a 2EP as six Matrix Market files plus a JSON manifest."""
    os.makedirs(directory, exist_ok=True)
    doc = {}
    for k in _MANIFEST_KEYS:
        fname = f"{k}.mtx"
        write_matrix(os.path.join(directory, fname), getattr(p, k))
        doc[k] = fname
    path = os.path.join(directory, manifest_name)
    with open(path, "w") as f:
        json.dump(doc, f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def solutions_to_csv(pairs) -> str:
    """Render accepted eigenpairs as CSV with full-precision columns."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(
        ["lambda_re", "lambda_im", "mu_re", "mu_im", "discrepancy", "residual1", "residual2"]
    )
    for e in pairs:
        w.writerow(
            [
                repr(e.lam.real),
                repr(e.lam.imag),
                repr(e.mu.real),
                repr(e.mu.imag),
                repr(e.mu_discrepancy),
                repr(e.residual1),
                repr(e.residual2),
            ]
        )
    return buf.getvalue()
