"""The matrix pencil data model: scaling, squarification, normal rank.

A pencil is the one-parameter matrix family ``A - lambda B``.  It is
*singular* when it is rectangular, or square with ``det(A - lambda B)``
identically zero.  The solver pipeline normalizes every input through
:func:`squarify` and :func:`scale` before doing anything else, and
estimates the normal rank ``max_zeta rank(A - zeta B)`` from random
probe points.

Pencils are read and written as pairs of Matrix Market files (one file
per matrix, complex "array" or "coordinate" kind).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import scipy.io
import scipy.sparse

from .matrix_core import EPS, as_cmatrix

__all__ = [
    "Pencil",
    "NormalRankReport",
    "scale",
    "squarify",
    "normal_rank",
    "read_matrix",
    "write_matrix",
    "read_pencil",
    "write_pencil",
]


@dataclass
class Pencil:
    """A dense matrix pencil A - lambda B with scaling metadata.

    ``scale_alpha`` and ``scale_beta`` record the original 1-norms after
    :func:`scale`, so eigenvalues of the scaled pencil map back to the
    original ones through the factor ``scale_alpha / scale_beta``.
    """

    A: np.ndarray
    B: np.ndarray
    scale_alpha: float = 1.0
    scale_beta: float = 1.0
    scaled: bool = False

    def __post_init__(self):
        self.A = as_cmatrix(self.A, "A")
        self.B = as_cmatrix(self.B, "B")
        if self.A.shape != self.B.shape:
            raise ValueError(
                f"A and B must have equal shape, got {self.A.shape} and {self.B.shape}"
            )
        if self.scaled:
            for name, m in (("A", self.A), ("B", self.B)):
                nrm = np.linalg.norm(m, 1)
                if abs(nrm - 1.0) > 10 * EPS * max(1, m.shape[0]):
                    raise ValueError(f"pencil marked scaled but ||{name}||_1 = {nrm!r}")

    @property
    def shape(self):
        return self.A.shape

    @property
    def is_square(self):
        return self.A.shape[0] == self.A.shape[1]

    @property
    def back_factor(self):
        """Multiplier mapping scaled eigenvalues back to the original pencil."""
        return self.scale_alpha / self.scale_beta


@dataclass
class NormalRankReport:
    """Outcome of the probe-based normal rank estimate.

    ``k = size - nrank`` is the rank defect that the rank-completing
    perturbation has to fill (size is the squarified dimension).  The
    probe points and the tolerance in force are recorded so a surprising
    rank decision can be audited after the fact.
    """

    nrank: int
    k: int
    zeta_samples: list = field(default_factory=list)
    tol_used: float = 0.0


def scale(p: Pencil) -> Pencil:
    """Scale both matrices to unit 1-norm, recording the original norms.

    Raises
    ------
    ValueError
        If A or B is a zero matrix; the pencil is degenerate and the
        scaled problem would be undefined.
    """
    alpha = float(np.linalg.norm(p.A, 1))
    beta = float(np.linalg.norm(p.B, 1))
    if alpha == 0.0 or beta == 0.0:
        raise ValueError("cannot scale a pencil with a zero A or B matrix")
    return Pencil(
        A=p.A / alpha,
        B=p.B / beta,
        scale_alpha=p.scale_alpha * alpha,
        scale_beta=p.scale_beta * beta,
        scaled=True,
    )


def squarify(p: Pencil) -> Pencil:
    """Embed a rectangular pencil into a square one by zero padding.

    The original entries sit in the leading block; the added zero rows
    (or columns) extend the Kronecker structure by trivial singular
    blocks and leave the eigenvalues untouched.  Square pencils pass
    through unchanged.
    """
    n, m = p.shape
    if n == m:
        return p
    s = max(n, m)
    A = np.zeros((s, s), dtype=np.complex128)
    B = np.zeros((s, s), dtype=np.complex128)
    A[:n, :m] = p.A
    B[:n, :m] = p.B
    return replace(p, A=A, B=B, scaled=False)


def normal_rank(p: Pencil, rng, tol="auto", probes=2) -> NormalRankReport:
    """Estimate nrank(A, B) = max_zeta rank(A - zeta B) by random probes.

    Probe points are drawn uniformly from the unit circle (the pencil is
    scaled to unit norms first, so that radius is well conditioned), and
    the maximum rank over ``probes`` draws is taken.  A single probe can
    in principle land on an eigenvalue and under-report; two independent
    probes make that a non-event in practice while the report keeps the
    values for auditing.
    """
    ps = p if p.scaled else scale(p)
    zetas = []
    best = 0
    tol_used = 0.0
    for _ in range(max(1, int(probes))):
        zeta = complex(np.exp(2j * np.pi * rng.uniform()))
        zetas.append(zeta)
        m = ps.A - zeta * ps.B
        s = np.linalg.svd(m, compute_uv=False)
        t = max(m.shape) * EPS * s[0] if tol == "auto" else float(tol)
        tol_used = max(tol_used, t)
        best = max(best, int(np.sum(s > t)))
    k = max(p.shape) - best
    return NormalRankReport(nrank=best, k=k, zeta_samples=zetas, tol_used=tol_used)


def read_matrix(path):
    """Read one dense complex matrix from a Matrix Market file."""
    try:
        m = scipy.io.mmread(path)
    except Exception as exc:
        raise ValueError(f"{path}: not a readable Matrix Market file ({exc})") from exc
    if scipy.sparse.issparse(m):
        m = m.toarray()
    return as_cmatrix(m, str(path))


def write_matrix(path, m):
    """Write one matrix to a Matrix Market file (complex array format)."""
    scipy.io.mmwrite(path, as_cmatrix(m, str(path)), field="complex")


def read_pencil(path_a, path_b) -> Pencil:
    """Read a pencil from two Matrix Market files."""
    return Pencil(A=read_matrix(path_a), B=read_matrix(path_b))


def write_pencil(p: Pencil, path_a, path_b):
    """Write a pencil to two Matrix Market files."""
    write_matrix(path_a, p.A)
    write_matrix(path_b, p.B)
