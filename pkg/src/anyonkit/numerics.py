"""Dense numerical kernel used by the rest of the package.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; numpy provides
storage and elementwise/BLAS arithmetic only. The eigenvalue algorithms
(complex Schur form for unitaries, cyclic Jacobi for Hermitian matrices), the
Bessel series and the Perron-Frobenius iteration are implemented here so that
test suites can compare them against independent library routines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "NumericalError",
    "as_matrix",
    "matmul",
    "dagger",
    "direct_sum",
    "scalar_mul",
    "identity",
    "unitarity_defect",
    "wrap_phase",
    "schur",
    "eigenphases",
    "hermitian_eigen",
    "perron_frobenius",
    "bessel_j",
    "bessel_j_prime",
    "BesselZero",
    "first_zero_jprime",
]

_EPS = np.finfo(float).eps


class NumericalError(ArithmeticError):
    """An iterative method failed to converge or a result failed verification."""


# ---------------------------------------------------------------------------
# basic matrix plumbing


def as_matrix(data) -> np.ndarray:
    """Convert `data` to a finite two-dimensional complex array."""
    m = np.array(data, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or 0 in m.shape:
        raise ValueError(f"expected a non-empty 2D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def matmul(*factors) -> np.ndarray:
    """Product of conformable matrices, left to right."""
    if not factors:
        raise ValueError("matmul needs at least one factor")
    out = as_matrix(factors[0])
    for f in factors[1:]:
        f = as_matrix(f)
        if out.shape[1] != f.shape[0]:
            raise ValueError(f"dimension mismatch {out.shape} @ {f.shape}")
        out = out @ f
    return out


def dagger(m) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(m).conj().T


def scalar_mul(z: complex, m) -> np.ndarray:
    return complex(z) * as_matrix(m)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=complex)


def direct_sum(*blocks) -> np.ndarray:
    """Block-diagonal matrix with the given blocks in order."""
    blocks = [as_matrix(b) for b in blocks]
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = np.zeros((rows, cols), dtype=complex)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def unitarity_defect(m) -> float:
    """Max-norm of ``m^dagger m - 1``."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError("unitarity is only defined for square matrices")
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))


def wrap_phase(phi: float) -> float:
    """Map a phase in units of pi to the half-open interval (-1, 1]."""
    phi = math.fmod(phi, 2.0)
    if phi <= -1.0:
        phi += 2.0
    elif phi > 1.0:
        phi -= 2.0
    return phi


# ---------------------------------------------------------------------------
# complex Schur form: Householder reduction to Hessenberg + shifted QR


def _hessenberg(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = a.shape[0]
    h = a.copy()
    q = np.eye(n, dtype=complex)
    for k in range(n - 2):
        x = h[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha < _EPS * (1.0 + abs(h[k, k])):
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        # reflector P = 1 - 2 v v^dagger applied from both sides
        h[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, :])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        q[:, k + 1:] -= 2.0 * np.outer(q[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h, q


def _wilkinson_shift(a, b, c, d) -> complex:
    half = 0.5 * (a - d)
    disc = np.sqrt(half * half + b * c)
    mu1 = d - b * c / (half + disc) if half + disc != 0 else d
    mu2 = d - b * c / (half - disc) if half - disc != 0 else d
    return mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2


def schur(a, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Complex Schur decomposition ``a = Q T Q^dagger``.

    Parameters
    ----------
    a : array_like
        Square complex matrix.
    max_sweeps : int
        Iteration cap per eigenvalue; exceeded caps raise `NumericalError`.

    Returns
    -------
    T, Q : ndarray
        Upper-triangular `T` and unitary `Q`.
    """
    a = as_matrix(a)
    n = a.shape[0]
    if a.shape[1] != n:
        raise ValueError("schur needs a square matrix")
    h, q = _hessenberg(a)
    scale = max(np.max(np.abs(h)), 1.0)
    hi = n - 1
    its = 0
    total = 0
    while hi > 0:
        lo = hi
        while lo > 0:
            s = abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])
            if s == 0.0:
                s = scale
            if abs(h[lo, lo - 1]) <= _EPS * s:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            hi -= 1
            its = 0
            continue
        its += 1
        total += 1
        if its > max_sweeps:
            raise NumericalError(
                f"QR iteration did not converge at index {hi} after {total} steps "
                f"(subdiagonal {abs(h[hi, hi - 1]):.3e})")
        if its % 11 == 0:
            # exceptional shift to break rare cycles
            mu = h[hi, hi] + abs(h[hi, hi - 1]) * (0.75 + 0.25j)
        else:
            mu = _wilkinson_shift(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi])
        idx = np.arange(lo, hi + 1)
        h[idx, idx] -= mu
        rots = []
        for k in range(lo, hi):
            x, y = h[k, k], h[k + 1, k]
            r = math.hypot(abs(x), abs(y))
            if r == 0.0:
                g = np.eye(2, dtype=complex)
            else:
                c, s = x / r, y / r
                g = np.array([[c.conjugate(), s.conjugate()], [-s, c]])
            h[k:k + 2, k:] = g @ h[k:k + 2, k:]
            rots.append(g)
        for k, g in zip(range(lo, hi), rots):
            gh = g.conj().T
            top = min(k + 3, n)
            h[:top, k:k + 2] = h[:top, k:k + 2] @ gh
            q[:, k:k + 2] = q[:, k:k + 2] @ gh
        h[idx, idx] += mu
    return np.triu(h), q


def eigenphases(u, tol: float = 1e-9, unitary_tol: float = 1e-8) -> np.ndarray:
    """Eigenphases of a unitary matrix in units of pi, sorted ascending in (-1, 1].

    Every eigenvalue is verified on its Schur vector: for a normal matrix the
    Schur form is diagonal, so ``||U q_k - lambda_k q_k|| < tol`` must hold.

    Raises
    ------
    ValueError
        If `u` deviates from unitarity by more than `unitary_tol`.
    NumericalError
        If the eigensolver fails or a residual check fails.
    """
    u = as_matrix(u)
    defect = unitarity_defect(u)
    if defect > unitary_tol:
        raise ValueError(f"matrix is not unitary (defect {defect:.3e})")
    t, q = schur(u)
    lam = np.diag(t).copy()
    res = np.linalg.norm(u @ q - q * lam[np.newaxis, :], axis=0)
    worst = float(np.max(res))
    if worst > tol:
        raise NumericalError(f"eigenvector residual {worst:.3e} exceeds {tol:.1e}")
    phases = [wrap_phase(math.atan2(z.imag, z.real) / math.pi) for z in lam]
    phases = [1.0 if p <= -1.0 + 1e-15 else p for p in phases]
    return np.sort(np.array(phases, dtype=float))


# ---------------------------------------------------------------------------
# Hermitian eigenproblem by cyclic Jacobi rotations


def hermitian_eigen(h, tol: float = 1e-12, max_sweeps: int = 100,
                    herm_tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi sweeps.

    Sweeps stop once the Frobenius norm of the off-diagonal part drops below
    ``tol`` times ``max(1, ||H||_F)``. Returns ascending eigenvalues and the matching orthonormal eigenvectors
    as columns, so that ``H = V diag(w) V^dagger``.
    """
    a = as_matrix(h)
    n = a.shape[0]
    if a.shape[1] != n:
        raise ValueError("hermitian_eigen needs a square matrix")
    asym = float(np.max(np.abs(a - a.conj().T)))
    if asym > herm_tol:
        raise ValueError(f"matrix is not Hermitian (defect {asym:.3e})")
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))
    for sweep in range(max_sweeps):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off < tol * scale:
            break
        for p in range(n - 1):
            for r in range(p + 1, n):
                apr = a[p, r]
                mag = abs(apr)
                if mag < 1e-300:
                    continue
                phase = apr / mag
                theta = (a[r, r].real - a[p, p].real) / (2.0 * mag)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(1.0 + theta * theta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                j = np.array([[c, s * phase], [-s * phase.conjugate(), c]])
                cols = [p, r]
                a[:, cols] = a[:, cols] @ j
                a[cols, :] = j.conj().T @ a[cols, :]
                v[:, cols] = v[:, cols] @ j
    else:
        raise NumericalError(f"Jacobi iteration did not converge in {max_sweeps} sweeps "
                             f"(off-diagonal norm {off:.3e})")
    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


# ---------------------------------------------------------------------------
# Perron-Frobenius eigenvalue of a nonnegative matrix


def perron_frobenius(m, tol: float = 1e-12, max_iter: int = 100_000) -> tuple[float, np.ndarray]:
    """Largest eigenvalue and positive eigenvector of a nonnegative matrix.

    Power iteration is run on ``1 + m`` from the all-ones vector. The shift
    makes irreducible but periodic matrices (such as the Ising fusion matrix
    of sigma, with eigenvalues +-sqrt 2) primitive without moving eigenvectors.
    """
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    shifted = m + np.eye(n)
    x = np.ones(n) / math.sqrt(n)
    lam = 0.0
    for it in range(1, max_iter + 1):
        y = shifted @ x
        new = float(np.linalg.norm(y))
        if new == 0.0:
            raise NumericalError("power iteration collapsed to the zero vector")
        y /= new
        if abs(new - lam) < tol * max(1.0, new) and np.max(np.abs(y - x)) < math.sqrt(tol):
            x = y
            lam = new
            break
        x, lam = y, new
    else:
        resid = float(np.max(np.abs(shifted @ x - lam * x)))
        raise NumericalError(
            f"power iteration did not converge after {max_iter} iterations (residual {resid:.3e})")
    return lam - 1.0, x


# ---------------------------------------------------------------------------
# Bessel functions of the first kind


def _series_float(nu: float, x: float) -> float:
    half = 0.5 * x
    term = half ** nu / math.gamma(nu + 1.0) if x > 0 else (1.0 if nu == 0 else 0.0)
    if x == 0.0:
        return term
    q = half * half
    total, comp = 0.0, 0.0
    k = 0
    while True:
        # Kahan-compensated accumulation
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        k += 1
        term *= -q / (k * (k + nu))
        if k >= 30 and abs(term) < 1e-17 * max(abs(total), 1e-300):
            break
        if k > 500:
            break
    return total


def _series_mp(nu: float, x: float) -> float:
    import mpmath

    digits = 20 + int(x / math.log(10)) + 5
    with mpmath.workdps(digits):
        nu = mpmath.mpf(nu)
        half = mpmath.mpf(x) / 2
        q = half * half
        term = half ** nu / mpmath.gamma(nu + 1)
        total = mpmath.mpf(0)
        k = 0
        while True:
            total += term
            k += 1
            term *= -q / (k * (k + nu))
            if k >= 30 and abs(term) < mpmath.mpf(10) ** (-digits):
                break
        return float(total)


def bessel_j(nu: float, x: float) -> float:
    """Bessel function ``J_nu(x)`` from its ascending series.

    Supports ``-1 < nu <= 2`` (negative orders are needed for the derivative
    identity ``J'_nu = (J_{nu-1} - J_{nu+1})/2``) and ``0 <= x <= 50``. Up to
    ``x = 10`` the series is summed in double precision with Kahan
    compensation; beyond that the cancellation between terms exceeds double
    precision and the same series is summed with extra working digits.
    """
    nu = float(nu)
    x = float(x)
    if not (-1.0 < nu <= 2.0):
        raise ValueError(f"order nu={nu} outside supported range (-1, 2]")
    if not (0.0 <= x <= 50.0):
        raise ValueError(f"argument x={x} outside supported range [0, 50]")
    if x == 0.0:
        if nu == 0.0:
            return 1.0
        if nu > 0.0:
            return 0.0
        raise ValueError("J_nu(0) diverges for negative non-integer order")
    if x <= 10.0:
        return _series_float(nu, x)
    return _series_mp(nu, x)


def bessel_j_prime(nu: float, x: float) -> float:
    """Derivative ``J'_nu(x) = (J_{nu-1}(x) - J_{nu+1}(x)) / 2`` for ``0 <= nu <= 1``.

    Below ``nu = 1e-6`` the order ``nu - 1`` loses most of its digits, so the
    equivalent ``(nu / x) J_nu(x) - J_{nu+1}(x)`` is used instead.
    """
    if nu == 0.0:
        return -bessel_j(1.0, x)
    if nu < 1e-6 and x > 0.0:
        return nu / x * bessel_j(nu, x) - bessel_j(nu + 1.0, x)
    return 0.5 * (bessel_j(nu - 1.0, x) - bessel_j(nu + 1.0, x))


@dataclass(frozen=True)
class BesselZero:
    """First positive zero of ``J'_nu`` with its bisection record."""

    nu: float
    value: float
    bracket: tuple[float, float]
    residual: float


def first_zero_jprime(nu: float, tol: float = 1e-12, margin: float = 0.01) -> BesselZero:
    """First positive zero ``j'_nu`` of the derivative of ``J_nu``.

    Bisection runs on the bracket ``[sqrt(2 nu), sqrt(2 nu (1 + nu))]``,
    widened by `margin` (relative) on each side, after checking that ``J'_nu``
    changes sign across it. ``nu = 0`` returns the convention ``j'_0 = 0``.
    """
    nu = float(nu)
    if not (0.0 <= nu <= 1.0):
        raise ValueError(f"order nu={nu} outside [0, 1]")
    if not 0.0 <= margin < 1.0:
        raise ValueError(f"margin {margin} must lie in [0, 1)")
    if nu == 0.0:
        return BesselZero(0.0, 0.0, (0.0, 0.0), 0.0)
    lo = math.sqrt(2.0 * nu) * (1.0 - margin)
    hi = math.sqrt(2.0 * nu * (1.0 + nu)) * (1.0 + margin)
    flo, fhi = bessel_j_prime(nu, lo), bessel_j_prime(nu, hi)
    if flo == 0.0:
        return BesselZero(nu, lo, (lo, lo), 0.0)
    if fhi == 0.0:
        return BesselZero(nu, hi, (hi, hi), 0.0)
    if (flo > 0) == (fhi > 0):
        raise NumericalError(
            f"J'_{nu} has no sign change on [{lo:.12g}, {hi:.12g}] "
            f"(values {flo:.3e}, {fhi:.3e})")
    # tighter than `tol` when the zero itself is small
    step_tol = tol * min(1.0, hi)
    while hi - lo > step_tol:
        mid = 0.5 * (lo + hi)
        fm = bessel_j_prime(nu, mid)
        if fm == 0.0:
            lo = hi = mid
            break
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    value = 0.5 * (lo + hi)
    residual = abs(bessel_j_prime(nu, value))
    if residual >= 1e-10:
        raise NumericalError(f"bisection residual {residual:.3e} too large for nu={nu}")
    return BesselZero(nu, value, (lo, hi), residual)
