"""Matrix representations of the braid group.

All representations store the images of the generators ``sigma_1 ...
sigma_{n-1}`` (and of their inverses). A braid word ``l_1 ... l_k`` evaluates
to the product ``rho(l_1) ... rho(l_k)``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .braid import BraidWord, sigma_p
from .numerics import eigenphases, unitarity_defect
from .symbols import AnyonModel
from .trees import SplittingSpace, enumerate_basis

__all__ = [
    "Representation",
    "splitting_rep",
    "abelian_rep",
    "burau_rep",
    "burau3_unitary",
    "product_rep",
    "clifford_rep",
    "evaluate",
    "AbelianVerdict",
    "is_abelian",
    "braid_relation_residual",
]


@dataclass(frozen=True, eq=False)
class Representation:
    """Images of the braid generators on `strands` strands.

    Attributes
    ----------
    strands : int
    generators : tuple of ndarray
        ``generators[j - 1]`` is the matrix of ``sigma_j``.
    basis_tag : str
        Description of the underlying ordered basis.
    inverses : tuple of ndarray, optional
        Matrices of the inverse generators; conjugate transposes when omitted.
    basis : SplittingSpace, optional
        The splitting basis for representations built from a model.
    unitary : bool
    """

    strands: int
    generators: tuple
    basis_tag: str = "standard"
    inverses: tuple | None = None
    basis: SplittingSpace | None = field(default=None, repr=False)
    unitary: bool = True

    def __post_init__(self):
        gens = tuple(np.array(g, dtype=complex) for g in self.generators)
        if len(gens) != self.strands - 1:
            raise ValueError(f"{self.strands} strands need {self.strands - 1} generators, "
                             f"got {len(gens)}")
        if not gens:
            raise ValueError("a representation needs at least two strands")
        dim = gens[0].shape[0]
        for g in gens:
            if g.shape != (dim, dim):
                raise ValueError("generator matrices must all be square of equal size")
        if self.inverses is None:
            inv = tuple(g.conj().T for g in gens)
        else:
            inv = tuple(np.array(g, dtype=complex) for g in self.inverses)
        for g in gens + inv:
            g.setflags(write=False)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "inverses", inv)

    @property
    def dim(self) -> int:
        return self.generators[0].shape[0]

    def matrix(self, letter: int) -> np.ndarray:
        """Matrix of ``sigma_j`` (letter ``j``) or its inverse (letter ``-j``)."""
        if letter == 0 or abs(letter) > self.strands - 1:
            raise ValueError(f"generator index {letter} out of range for {self.strands} strands")
        return self.generators[letter - 1] if letter > 0 else self.inverses[-letter - 1]

    def unitarity_defect(self) -> float:
        return max(unitarity_defect(g) for g in self.generators)


def braid_relation_residual(rep: Representation) -> float:
    """Max-norm violation of the braid and far-commutation relations."""
    g = rep.generators
    worst = 0.0
    for j in range(len(g) - 1):
        a, b = g[j], g[j + 1]
        worst = max(worst, float(np.max(np.abs(a @ b @ a - b @ a @ b))))
    for j in range(len(g)):
        for k in range(j + 2, len(g)):
            worst = max(worst, float(np.max(np.abs(g[j] @ g[k] - g[k] @ g[j]))))
    return worst


def splitting_rep(model: AnyonModel, t, n: int, sector=(None, None)) -> Representation:
    """Representation on the standard splitting basis of ``V^{a, t^n}_c``.

    ``sigma_j`` changes only the intermediate charge ``b_{j+1}`` of a chain,
    with matrix element ``B^{b_j t t}_{b_{j+2}; b'_{j+1}, b_{j+1}}``. A model
    twist multiplies every generator by ``exp(i pi twist)``.
    """
    if n < 2:
        raise ValueError("splitting_rep needs n >= 2 strands")
    t = model.label(t)
    basis = enumerate_basis(model, t, n, sector)
    if basis.dim == 0:
        raise ValueError("the requested splitting space is empty")
    index = basis.index()
    B = model.B
    gens = []
    for j in range(1, n):
        m = np.zeros((basis.dim, basis.dim), dtype=complex)
        for col, chain in enumerate(basis.states):
            left, old, right = chain[j - 1], chain[j], chain[j + 1]
            for new in model.algebra.products(left, t):
                val = B.get((left, t, t, right, new, old), 0j)
                if val != 0:
                    m[index[chain[:j] + (new,) + chain[j + 1:]], col] = val
        gens.append(m)
    names = model.labels
    a, c = basis.sector
    tag = (f"splitting basis of V^{{{'*' if a is None else names[a]},{names[t]}^{n}}}"
           f"_{{{'*' if c is None else names[c]}}} ({model.name})")
    rep = Representation(n, tuple(gens), tag, basis=basis)
    if model.twist:
        rep = product_rep(abelian_rep(model.twist, n), rep)
        object.__setattr__(rep, "basis", basis)
    return rep


def abelian_rep(alpha, N: int) -> Representation:
    """One-dimensional representation with every generator ``exp(i pi alpha)``."""
    if N < 2:
        raise ValueError("abelian_rep needs N >= 2")
    if isinstance(alpha, Fraction):
        phase = alpha % 2
        if phase.denominator <= 2:
            z = complex(round(math.cos(math.pi * phase)), round(math.sin(math.pi * phase)))
        else:
            z = cmath.exp(1j * math.pi * float(phase))
    else:
        z = cmath.exp(1j * math.pi * float(alpha))
    return Representation(N, tuple(np.array([[z]]) for _ in range(N - 1)), f"abelian alpha={alpha}")


def burau_rep(N: int, z: complex) -> Representation:
    """Unreduced Burau representation ``1_{j-1} + [[1-z, z], [1, 0]] + 1_{N-j-1}``."""
    if N < 2:
        raise ValueError("burau_rep needs N >= 2")
    z = complex(z)
    if z == 0:
        raise ValueError("the Burau parameter z must be nonzero")
    block = np.array([[1 - z, z], [1, 0]])
    block_inv = np.array([[0, 1], [1 / z, (z - 1) / z]])
    gens, invs = [], []
    for j in range(1, N):
        g = np.eye(N, dtype=complex)
        h = np.eye(N, dtype=complex)
        g[j - 1:j + 1, j - 1:j + 1] = block
        h[j - 1:j + 1, j - 1:j + 1] = block_inv
        gens.append(g)
        invs.append(h)
    return Representation(N, tuple(gens), f"Burau z={z}", tuple(invs), unitary=False)


def burau3_unitary(alpha: float) -> Representation:
    """Reduced, unitarized Burau representation of ``B_3`` with ``w = exp(i pi alpha)``.

    Diagonal entries are ``(1 - w^2 -+ w) / 2``; the off-diagonal entries use ``s = sqrt(w + 1/w - 1) sqrt(w + 1/w + 1)``,
    both radicands being real and positive for ``|alpha| < 1/3``.
    """
    alpha = float(alpha)
    if abs(alpha) >= 1.0 / 3.0:
        raise ValueError(f"|alpha| = {abs(alpha)} must be below 1/3 for unitarity")
    if abs(alpha) > 1.0 / 3.0 - 1e-6:
        warnings.warn(f"alpha = {alpha} is within 1e-6 of 1/3; the unitarization is "
                      "ill-conditioned there", RuntimeWarning, stacklevel=2)
    w = cmath.exp(1j * math.pi * alpha)
    x = 2.0 * math.cos(math.pi * alpha)  # w + 1/w
    s = math.sqrt(x - 1.0) * math.sqrt(x + 1.0)
    d1, d2 = -w * w + w + 1, -w * w - w + 1
    # basis ordered so that s1 s2 s1 = diag(w^3, -w^3)
    g1 = 0.5 * np.array([[d2, -w * s], [-w * s, d1]])
    g2 = 0.5 * np.array([[d2, w * s], [w * s, d1]])
    return Representation(3, (g1, g2), f"reduced unitary Burau alpha={alpha}")


def product_rep(r1: Representation, r2: Representation, tol: float = 1e-10) -> Representation:
    """Generator-wise product of two representations.

    One factor may be one-dimensional (scalar phases); otherwise the
    dimensions must match and the product is re-checked against the braid
    relations.
    """
    if r1.strands != r2.strands:
        raise ValueError(f"strand counts differ ({r1.strands} vs {r2.strands})")
    if r1.dim == 1 or r2.dim == 1:
        scalar, other = (r1, r2) if r1.dim == 1 else (r2, r1)
        gens = tuple(s[0, 0] * g for s, g in zip(scalar.generators, other.generators))
        invs = tuple(s[0, 0] * g for s, g in zip(scalar.inverses, other.inverses))
        basis = other.basis
    elif r1.dim == r2.dim:
        gens = tuple(a @ b for a, b in zip(r1.generators, r2.generators))
        invs = tuple(b @ a for a, b in zip(r1.inverses, r2.inverses))
        basis = None
    else:
        raise ValueError(f"incompatible dimensions {r1.dim} and {r2.dim}")
    rep = Representation(r1.strands, gens, f"({r1.basis_tag}) x ({r2.basis_tag})", invs,
                         basis, r1.unitary and r2.unitary)
    resid = braid_relation_residual(rep)
    if resid > tol:
        raise ValueError(f"product violates the braid relations (residual {resid:.3e})")
    return rep


def clifford_rep(n: int, sector=(None, None)) -> Representation:
    """Ising splitting representation times the abelian phase ``exp(-i pi / 8)``."""
    from .symbols import builtin

    ising = builtin("ising")
    return product_rep(abelian_rep(Fraction(-1, 8), n), splitting_rep(ising, "sigma", n, sector))


def evaluate(rep: Representation, word: BraidWord) -> np.ndarray:
    """Matrix of a braid word, ``rho(l_1) rho(l_2) ... rho(l_k)``."""
    if word.strands != rep.strands:
        raise ValueError(f"word has {word.strands} strands, representation has {rep.strands}")
    out = np.eye(rep.dim, dtype=complex)
    for x in word.letters:
        out = out @ rep.matrix(x)
    return out


@dataclass(frozen=True)
class AbelianVerdict:
    """Outcome of :func:`is_abelian`.

    `commutator` is the pair ``(j, k)`` with the largest commutator norm and
    `commutator_norm` that norm. When the exchange-spectrum test also
    detects non-commutativity, `spectral_p` is the smallest witnessing ``p``.
    """

    abelian: bool
    commutator: tuple[int, int] | None
    commutator_norm: float
    spectral_p: int | None

    def __bool__(self) -> bool:
        return self.abelian


def _multiset_close(x: Sequence[float], y: Sequence[float], tol: float) -> bool:
    if len(x) != len(y):
        return False
    used = [False] * len(y)
    for a in x:
        for i, b in enumerate(y):
            if not used[i] and abs(math.remainder(a - b, 2.0)) < tol:
                used[i] = True
                break
        else:
            return False
    return True


def is_abelian(rep: Representation, tol: float = 1e-10, spectral_tol: float = 1e-7) -> AbelianVerdict:
    """Decide whether the generator images commute.

    The direct test compares all commutators ``[rho(s_j), rho(s_k)]`` with
    `tol`. For unitary representations a spectral test is run as well: for an
    abelian image, with generator eigenphases ``alpha_k``, the exchange
    operator ``U_p`` would be similar to ``diag(exp(i (1 + 2p) alpha_k pi))``;
    the first ``p >= 1`` where that fails is reported as a witness.
    """
    g = rep.generators
    best, pair = 0.0, None
    for j in range(len(g)):
        for k in range(j + 1, len(g)):
            norm = float(np.linalg.norm(g[j] @ g[k] - g[k] @ g[j], 2))
            if norm > best:
                best, pair = norm, (j + 1, k + 1)
    witness = None
    if rep.unitary:
        base = eigenphases(g[0])
        for p in range(1, rep.strands - 1):
            predicted = [((1 + 2 * p) * a) for a in base]
            actual = eigenphases(evaluate(rep, sigma_p(p, rep.strands)))
            if not _multiset_close(predicted, list(actual), spectral_tol):
                witness = p
                break
    abelian = best < tol
    if abelian and witness is not None:
        raise AssertionError("spectral witness found for commuting generators")
    return AbelianVerdict(abelian, None if abelian else pair, best, witness)
