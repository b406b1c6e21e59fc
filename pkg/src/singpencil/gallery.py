"""Built-in demonstration problems with known ground truth.

Small singular pencils and one bivariate polynomial system that exercise
every part of the solver.  Each constructor documents the exact Kronecker
structure (and therefore the exact spectrum), so these double as
end-to-end oracles for the test suite and as ready-made inputs for the
command line tool.
"""

from __future__ import annotations

import numpy as np

from .pencil import Pencil
from .two_param import TwoParamProblem

__all__ = [
    "showcase_pencil",
    "diagonal_demo_pencil",
    "control_benchmark_pencil",
    "staircase_sensitive_pencil",
    "bivariate_cubic_system",
    "evaluate_bivariate",
]


def showcase_pencil() -> Pencil:
    """Dense 7x7 singular pencil containing all four Kronecker block types.

    Kronecker structure: Jordan blocks of size 1 at 1/2 and 1/3, one
    nilpotent block of size 1 (a simple infinite eigenvalue), one right
    singular block of minimal index 1 and one left singular block of
    minimal index 2.  Normal rank 6, so the rank defect is 1.  The
    finite eigenvalues are exactly {1/3, 1/2}.
    """
    A = np.array(
        [
            [-1, -1, -1, -1, -1, -1, -1],
            [1, 0, 0, 0, 0, 0, 0],
            [1, 2, 1, 1, 1, 1, 1],
            [1, 2, 3, 3, 3, 3, 3],
            [1, 2, 3, 2, 2, 2, 2],
            [1, 2, 3, 4, 3, 3, 3],
            [1, 2, 3, 4, 5, 5, 4],
        ],
        dtype=np.complex128,
    )
    B = np.array(
        [
            [-2, -2, -2, -2, -2, -2, -2],
            [2, -1, -1, -1, -1, -1, -1],
            [2, 5, 5, 5, 5, 5, 5],
            [2, 5, 5, 4, 4, 4, 4],
            [2, 5, 5, 6, 5, 5, 5],
            [2, 5, 5, 6, 7, 7, 7],
            [2, 5, 5, 6, 7, 6, 6],
        ],
        dtype=np.complex128,
    )
    return Pencil(A=A, B=B)


def diagonal_demo_pencil() -> Pencil:
    """diag(1,2,3,0,0,0) - lambda diag(2,3,4,0,0,0): the textbook warm-up.

    Three simple finite eigenvalues 1/2, 2/3, 3/4 plus three trivial
    singular block pairs from the common zero rows and columns; rank
    defect 3.
    """
    return Pencil(A=np.diag([1, 2, 3, 0, 0, 0.0]), B=np.diag([2, 3, 4, 0, 0, 0.0]))


def control_benchmark_pencil() -> Pencil:
    """Rectangular 4x5 descriptor-system benchmark with eigenvalues {1, 2}.

    A classic transmission-zeros test case whose staircase rank
    decisions are notoriously sensitive.  Kronecker structure: one right
    singular block of minimal index 2 plus Jordan blocks of size 1 at
    1 and 2; squarifying appends a zero row, i.e. a left singular block
    of minimal index 0.
    """
    A = np.array(
        [
            [1, -2, 100, 0, 0],
            [1, 0, -1, 0, 0],
            [0, 0, 0, 1, -75],
            [0, 0, 0, 0, 2],
        ],
        dtype=np.complex128,
    )
    B = np.array(
        [
            [0, 1, 0, 0, 0],
            [0, 0, 1, 0, 0],
            [0, 0, 0, 1, 0],
            [0, 0, 0, 0, 1],
        ],
        dtype=np.complex128,
    )
    return Pencil(A=A, B=B)


def staircase_sensitive_pencil(eps_scale=1.5e-8) -> Pencil:
    """3x4 pencil with a double eigenvalue 0 that defeats staircase methods.

    Kronecker structure: one Jordan block of size 2 at 0 and one right
    singular block of minimal index 1.  The tiny ``eps_scale`` entries
    make the staircase rank decisions ill posed once noise is added,
    while the perturbation approach still recovers the split pair near
    zero.
    """
    A = np.array(
        [
            [0, 0, 1, 0],
            [0, 0, 0, 1],
            [0, 0, 0, 0],
        ],
        dtype=np.complex128,
    )
    B = np.array(
        [
            [eps_scale, 0, 0, 0],
            [0, eps_scale, 0, 0],
            [0, 0, 1, 0],
        ],
        dtype=np.complex128,
    )
    return Pencil(A=A, B=B)


def bivariate_cubic_system():
    """A pair of bivariate cubics in determinantal form, with 9 common roots.

    Returns ``(problem, coeffs1, coeffs2)`` where the coefficient vectors
    list each polynomial over the monomial basis

        [1, x, y, x^2, x y, y^2, x^3, x^2 y, x y^2, y^3]

    (coefficients 1..10 and 10..1).  The 5x5 matrix families of the
    returned :class:`TwoParamProblem` satisfy
    ``det(A_i + x B_i + y C_i) = p_i(x, y)``, so the finite regular
    eigenvalues of the induced singular 2EP are exactly the 9 solutions
    of ``p_1 = p_2 = 0``.
    """
    A1 = np.array(
        [
            [0, 0, 4, 1, 0],
            [0, 5, 2, 0, 1],
            [6, 3, 1, 0, 0],
            [1, 0, 0, 0, 0],
            [0, 1, 0, 0, 0],
        ],
        dtype=np.complex128,
    )
    B1 = np.array(
        [
            [0, 0, 7, 0, 0],
            [0, 8, 0, -1, 0],
            [9, 0, 0, 0, -1],
            [0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0],
        ],
        dtype=np.complex128,
    )
    C1 = np.array(
        [
            [0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0],
            [10, 0, 0, 0, 0],
            [0, -1, 0, 0, 0],
            [0, 0, -1, 0, 0],
        ],
        dtype=np.complex128,
    )
    A2 = np.array(
        [
            [0, 0, 7, 1, 0],
            [0, 6, 9, 0, 1],
            [5, 8, 10, 0, 0],
            [1, 0, 0, 0, 0],
            [0, 1, 0, 0, 0],
        ],
        dtype=np.complex128,
    )
    B2 = np.array(
        [
            [0, 0, 4, 0, 0],
            [0, 3, 0, -1, 0],
            [2, 0, 0, 0, -1],
            [0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0],
        ],
        dtype=np.complex128,
    )
    C2 = np.array(
        [
            [0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0],
            [1, 0, 0, 0, 0],
            [0, -1, 0, 0, 0],
            [0, 0, -1, 0, 0],
        ],
        dtype=np.complex128,
    )
    problem = TwoParamProblem(A1=A1, B1=B1, C1=C1, A2=A2, B2=B2, C2=C2)
    coeffs1 = np.arange(1.0, 11.0)
    coeffs2 = np.arange(10.0, 0.0, -1.0)
    return problem, coeffs1, coeffs2


def evaluate_bivariate(coeffs, x, y):
    """Evaluate a degree-3 bivariate polynomial given on the monomial basis.

    Basis order: [1, x, y, x^2, x y, y^2, x^3, x^2 y, x y^2, y^3].
    """
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    if coeffs.shape != (10,):
        raise ValueError("expected 10 coefficients for a bivariate cubic")
    mono = np.array(
        [1.0, x, y, x * x, x * y, y * y, x**3, x * x * y, x * y * y, y**3],
        dtype=np.complex128,
    )
    return complex(coeffs @ mono)
