"""Discrete check of the Poincare inequality for semi-periodic functions.

On ``[0, pi]`` with values in ``C^D`` and boundary condition
``psi(pi) = U psi(0)``, the lowest eigenvalue of ``-d^2/dx^2`` is
``lambda_0(U)^2`` where ``lambda_0(U)`` is the smallest ``|phase|`` (in units
of pi) among the eigenvalues of ``U``. Here the derivative is replaced by the
forward difference on ``M`` points with spacing ``h = pi / M``::

    (D psi)_k     = (psi_{k+1} - psi_k) / h,      k < M - 1
    (D psi)_{M-1} = (U psi_0 - psi_{M-1}) / h

and the smallest eigenvalue of ``D^dagger D`` is computed by inverse
iteration. Each application of ``(D^dagger D)^{-1}`` costs ``O(M D^2)``
because ``D`` is block bidiagonal up to its wrap-around corner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import NumericalError, eigenphases, hermitian_eigen, unitarity_defect

__all__ = [
    "lambda0",
    "SemiPeriodicProblem",
    "difference_operator",
    "discrete_ground_energy",
    "covariant_periodic_energy",
    "PoincareResult",
    "poincare_check",
]


def lambda0(U) -> float:
    """Smallest ``|phase|`` over the eigenvalues ``exp(i pi phase)`` of `U`."""
    U = np.atleast_2d(np.asarray(U, dtype=complex))
    return float(min(abs(p) for p in eigenphases(U)))


@dataclass(frozen=True, eq=False)
class SemiPeriodicProblem:
    """Twisted boundary problem ``psi(pi) = U psi(0)`` on `grid_points` points."""

    U: np.ndarray = field(repr=False)
    grid_points: int

    def __post_init__(self):
        U = np.atleast_2d(np.asarray(self.U, dtype=complex))
        if U.ndim != 2 or U.shape[0] != U.shape[1]:
            raise ValueError("U must be a square matrix or a scalar")
        defect = unitarity_defect(U)
        if defect > 1e-10:
            raise ValueError(f"U is not unitary (defect {defect:.3e})")
        if self.grid_points < 16:
            raise ValueError("grid_points must be at least 16")
        U.setflags(write=False)
        object.__setattr__(self, "U", U)

    @property
    def fiber_dim(self) -> int:
        return self.U.shape[0]

    @property
    def h(self) -> float:
        return math.pi / self.grid_points


def difference_operator(M: int, W, G=None) -> np.ndarray:
    """Dense ``M D x M D`` matrix with rows ``(x_{k+1} - G x_k) / h`` and wrap row ``(W x_0 - G x_{M-1}) / h``."""
    W = np.atleast_2d(np.asarray(W, dtype=complex))
    D = W.shape[0]
    G = np.eye(D) if G is None else np.asarray(G, dtype=complex)
    h = math.pi / M
    out = np.zeros((M * D, M * D), dtype=complex)
    for k in range(M):
        r = slice(k * D, (k + 1) * D)
        out[r, r] = -G
        if k < M - 1:
            out[r, slice((k + 1) * D, (k + 2) * D)] = np.eye(D)
        else:
            out[r, slice(0, D)] = W
    return out / h


class _CyclicSolver:
    """Exact solves with ``D`` and ``D^dagger`` for the block-cyclic difference operator."""

    def __init__(self, M: int, W: np.ndarray, G: np.ndarray | None):
        self.M = M
        self.h = math.pi / M
        self.W = W
        self.G = G
        D = W.shape[0]
        GM = np.eye(D) if G is None else np.linalg.matrix_power(G, M)
        self.lu = W - GM
        self.lu_h = W.conj().T - GM.conj().T

    def apply(self, x: np.ndarray) -> np.ndarray:
        """``D x`` with `x` of shape (M, D)."""
        Gx = x if self.G is None else x @ self.G.T
        nxt = np.empty_like(x)
        nxt[:-1] = x[1:]
        nxt[-1] = self.W @ x[0]
        return (nxt - Gx) / self.h

    def solve(self, y: np.ndarray) -> np.ndarray:
        """Solve ``D x = y``."""
        M, h, G = self.M, self.h, self.G
        if G is None:
            x0 = np.linalg.solve(self.lu, h * y.sum(axis=0))
            x = np.empty_like(y)
            x[0] = x0
            x[1:] = x0 + h * np.cumsum(y[:-1], axis=0)
            return x
        s = np.zeros(y.shape[1], dtype=complex)
        for k in range(M):
            s = G @ s + y[k]
        x = np.empty_like(y)
        x[0] = np.linalg.solve(self.lu, h * s)
        for k in range(M - 1):
            x[k + 1] = G @ x[k] + h * y[k]
        return x

    def solve_h(self, b: np.ndarray) -> np.ndarray:
        """Solve ``D^dagger z = b``."""
        M, h, G = self.M, self.h, self.G
        z = np.empty_like(b)
        if G is None:
            last = np.linalg.solve(self.lu_h, h * b.sum(axis=0))
            z[M - 1] = last
            # z_{j-1} = z_j + h b_j
            tail = np.cumsum(b[:0:-1], axis=0)[::-1]
            z[:-1] = last + h * tail
            return z
        Gh = G.conj().T
        s = np.zeros(b.shape[1], dtype=complex)
        for j in range(M - 1, -1, -1):
            s = Gh @ s + b[j]
        z[M - 1] = np.linalg.solve(self.lu_h, h * s)
        for j in range(M - 1, 0, -1):
            z[j - 1] = Gh @ z[j] + h * b[j]
        return z


def _ground_energy(M: int, W: np.ndarray, G: np.ndarray | None, tol: float, max_iter: int,
                   seed: int) -> float:
    solver = _CyclicSolver(M, W, G)
    if np.linalg.cond(solver.lu) > 1e14:
        return 0.0  # a constant (or parallel-transported) vector is in the kernel
    rng = np.random.default_rng(seed)
    D = W.shape[0]
    x = rng.standard_normal((M, D)) + 1j * rng.standard_normal((M, D))
    x /= np.linalg.norm(x)
    energy = math.inf
    for _ in range(max_iter):
        x = solver.solve(solver.solve_h(x))
        x /= np.linalg.norm(x)
        new = float(np.linalg.norm(solver.apply(x)) ** 2)
        if abs(new - energy) <= tol * max(new, 1e-300):
            return new
        energy = new
    raise NumericalError(f"inverse iteration did not converge in {max_iter} steps "
                         f"(last estimate {energy:.12g})")


def discrete_ground_energy(problem: SemiPeriodicProblem, method: str = "iterative",
                           tol: float = 1e-12, max_iter: int = 20_000, seed: int = 0) -> float:
    """Smallest eigenvalue of ``D^dagger D`` for the twisted forward difference.

    ``method="iterative"`` uses inverse iteration with exact block-cyclic
    solves; ``method="dense"`` assembles the ``M D x M D`` matrix and
    diagonalizes it (only sensible for small grids).
    """
    if method == "dense":
        Dh = difference_operator(problem.grid_points, problem.U)
        vals, _ = hermitian_eigen(Dh.conj().T @ Dh)
        return float(max(vals[0], 0.0))
    if method != "iterative":
        raise ValueError(f"unknown method {method!r}")
    return _ground_energy(problem.grid_points, problem.U, None, tol, max_iter, seed)


def covariant_periodic_energy(A, M: int, method: str = "iterative", tol: float = 1e-12,
                              max_iter: int = 20_000, seed: int = 0) -> float:
    """Ground energy for periodic functions with the covariant difference.

    Rows are ``(psi_{k+1} - psi_k) / h + A psi_k`` with ``psi_M = psi_0`` and a
    constant anti-hermitian `A`; this is gauge equivalent, up to the
    discretization error, to the twisted problem with ``U = exp(pi A)``.
    """
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    if np.max(np.abs(A + A.conj().T)) > 1e-12:
        raise ValueError("A must be anti-hermitian")
    if M < 16:
        raise ValueError("M must be at least 16")
    D = A.shape[0]
    G = np.eye(D) - (math.pi / M) * A
    W = np.eye(D, dtype=complex)
    if method == "dense":
        Dh = difference_operator(M, W, G)
        vals, _ = hermitian_eigen(Dh.conj().T @ Dh)
        return float(max(vals[0], 0.0))
    return _ground_energy(M, W, G, tol, max_iter, seed)


@dataclass(frozen=True)
class PoincareResult:
    energy: float
    lambda0_sq: float
    grid_points: int

    @property
    def relative_error(self) -> float:
        if self.lambda0_sq == 0:
            return abs(self.energy)
        return abs(self.energy - self.lambda0_sq) / self.lambda0_sq


def poincare_check(U, M: int) -> PoincareResult:
    """Discrete ground energy next to its continuum value ``lambda_0(U)^2``."""
    problem = SemiPeriodicProblem(U, M)
    return PoincareResult(discrete_ground_energy(problem), lambda0(problem.U) ** 2, M)
