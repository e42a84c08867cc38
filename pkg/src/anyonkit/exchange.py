"""Two-anyon exchange operators, their spectra and the exchange parameters.

``U_p`` exchanges the first two of ``p + 2`` anyons along a path enclosing
the ``p`` others, i.e. it represents the braid ``Sigma_p``. Phases are always
in units of pi and in ``(-1, 1]``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .braid import sigma_p
from .fusion import fusion_power, quantum_dimensions
from .numerics import eigenphases
from .reps import Representation, evaluate, splitting_rep
from .symbols import AnyonModel
from .trees import SplittingSpace, enumerate_chains

__all__ = [
    "EigenphaseSpectrum",
    "spectrum",
    "merge_spectra",
    "exchange_direct",
    "direct_operator",
    "exchange_block",
    "ExchangeBlock",
    "exchange_reduced",
    "reduced_spectrum",
    "ExchangeParameters",
    "exchange_parameters",
    "default_strand",
    "popcorn_alpha",
    "DEFAULT_CLUSTER_TOL",
    "MAX_DIRECT_P",
]

DEFAULT_CLUSTER_TOL = 1e-7
MAX_DIRECT_P = 12


@dataclass(frozen=True)
class EigenphaseSpectrum:
    """Clustered eigenphases with multiplicities.

    Attributes
    ----------
    entries : tuple of (float, int)
        ``(phase, multiplicity)`` sorted by phase, phases in ``(-1, 1]``.
    cluster_tol : float
    channel : str, optional
        Fusion channel the spectrum belongs to, if any.
    """

    entries: tuple[tuple[float, int], ...]
    cluster_tol: float = DEFAULT_CLUSTER_TOL
    channel: str | None = None

    @property
    def dim(self) -> int:
        return sum(m for _, m in self.entries)

    @property
    def phases(self) -> tuple[float, ...]:
        return tuple(p for p, _ in self.entries)

    def multiplicity(self, phase: float, tol: float | None = None) -> int:
        """Multiplicity of `phase` (0 when absent), comparing modulo 2."""
        tol = self.cluster_tol if tol is None else tol
        return sum(m for p, m in self.entries if abs(math.remainder(p - phase, 2.0)) <= tol)

    def scaled(self, k: int) -> "EigenphaseSpectrum":
        """Spectrum of the ``k``-fold direct sum."""
        return EigenphaseSpectrum(tuple((p, m * k) for p, m in self.entries if m * k),
                                  self.cluster_tol, self.channel)

    def rotated(self, shift: float) -> "EigenphaseSpectrum":
        """Spectrum of ``exp(i pi shift) U``."""
        return _cluster([(p + shift, m) for p, m in self.entries],
                        self.cluster_tol, self.channel)

    def beta(self) -> float:
        """Smallest ``|phase|``; the exchange parameter of this operator."""
        if not self.entries:
            raise ValueError("empty spectrum has no exchange parameter")
        best = min(abs(p) for p, _ in self.entries)
        return 0.0 if best <= self.cluster_tol else best

    def matches(self, other: "EigenphaseSpectrum", tol: float | None = None) -> bool:
        """Multiset equality of phases within `tol` and exact multiplicities."""
        tol = max(self.cluster_tol, other.cluster_tol) if tol is None else tol
        if len(self.entries) != len(other.entries):
            return False
        return all(m1 == m2 and abs(math.remainder(p1 - p2, 2.0)) <= tol
                   for (p1, m1), (p2, m2) in zip(self.entries, other.entries))


def _to_interval(phi: float) -> float:
    r = math.remainder(phi, 2.0)
    return 1.0 if r <= -1.0 else r


def _cluster(weighted: Iterable[tuple[float, int]], tol: float, channel=None) -> EigenphaseSpectrum:
    pts = []
    for p, m in weighted:
        p = _to_interval(p)
        if p < -1.0 + tol:
            p = 1.0  # -1 and 1 are the same point
        pts.append((p, m))
    pts.sort()
    groups: list[list[tuple[float, int]]] = []
    for p, m in pts:
        if groups and p - groups[-1][-1][0] <= tol:
            groups[-1].append((p, m))
        else:
            groups.append([(p, m)])
    entries = []
    for g in groups:
        total = sum(m for _, m in g)
        mean = sum(p * m for p, m in g) / total
        entries.append((min(mean, 1.0), total))
    return EigenphaseSpectrum(tuple(entries), tol, channel)


def spectrum(U, cluster_tol: float = DEFAULT_CLUSTER_TOL, channel: str | None = None) -> EigenphaseSpectrum:
    """Cluster the eigenphases of a unitary matrix.

    Raises ``ValueError`` (with the unitarity defect) for non-unitary input.
    """
    return _cluster(((p, 1) for p in eigenphases(U)), cluster_tol, channel)


def merge_spectra(parts: Sequence[EigenphaseSpectrum], cluster_tol: float | None = None,
                  channel: str | None = None) -> EigenphaseSpectrum:
    """Multiset union of several spectra."""
    tol = cluster_tol if cluster_tol is not None else max(
        (s.cluster_tol for s in parts), default=DEFAULT_CLUSTER_TOL)
    return _cluster([e for s in parts for e in s.entries], tol, channel)


def exchange_direct(rep: Representation, p: int) -> np.ndarray:
    """``U_p = rho(Sigma_p)`` on all strands of `rep`."""
    if not 0 <= p <= rep.strands - 2:
        raise ValueError(f"p = {p} out of range 0..{rep.strands - 2} for {rep.strands} strands")
    return evaluate(rep, sigma_p(p, rep.strands))


def direct_operator(model: AnyonModel, t, p: int, sector=(None, None),
                    max_p: int = MAX_DIRECT_P) -> np.ndarray:
    """``U_p`` on the splitting basis of ``V^{a, t^{p+2}}_c``.

    The dimension grows exponentially with `p`, so ``p > max_p`` is refused;
    raise `max_p` explicitly to go further.
    """
    if p < 0:
        raise ValueError("p must be non-negative")
    if p > max_p:
        raise ValueError(f"p = {p} exceeds the cap {max_p} for direct evaluation; "
                         "pass a larger max_p or use exchange_reduced")
    return exchange_direct(splitting_rep(model, t, p + 2, sector), p)


def _twist_phase(model: AnyonModel, p: int) -> complex:
    if not model.twist:
        return 1.0
    return cmath.exp(1j * math.pi * float(model.twist * (2 * p + 1)))


@dataclass(frozen=True, eq=False)
class ExchangeBlock:
    """``U_{t,c,t}`` on `space` (the basis of ``V^{*, t c t}_*``), occurring `multiplicity` times."""

    c: int
    matrix: np.ndarray = field(repr=False)
    multiplicity: int
    space: SplittingSpace = field(repr=False)


def exchange_block(model: AnyonModel, t, c, sector=(None, None)) -> tuple[np.ndarray, SplittingSpace]:
    """Exchange of two ``t`` strands around a single strand of charge ``c``.

    In the basis of chains ``(a, b, d, e)`` for strands ``(t, c, t)``::

        U[(a,h,g,e), (a,b,d,e)] = sum_f B^{act}_{d; f b} B^{ftt}_{e; g d} B^{atc}_{g; h f}

    No model twist is applied here.
    """
    alg = model.algebra
    t, c = alg.index(t), alg.index(c)
    space = enumerate_chains(alg, (t, c, t), sector)
    index = space.index()
    B = model.B
    U = np.zeros((space.dim, space.dim), dtype=complex)
    for col, (a, b, d, e) in enumerate(space.states):
        for f in alg.products(a, c):
            x = B.get((a, c, t, d, f, b), 0)
            if x == 0:
                continue
            for g in alg.products(f, t):
                y = B.get((f, t, t, e, g, d), 0)
                if y == 0:
                    continue
                for h in alg.products(a, t):
                    z = B.get((a, t, c, g, h, f), 0)
                    if z != 0:
                        U[index[(a, h, g, e)], col] += x * y * z
    return U, space


def exchange_reduced(model: AnyonModel, t, p: int, sector=(None, None)) -> list[ExchangeBlock]:
    """Block form of ``U_p``: one ``U_{t,c,t}`` per charge ``c`` of ``t^p``.

    Each block carries the multiplicity of ``c`` in ``t x ... x t`` (p
    factors); for ``p = 0`` the single block has ``c = 1``. The model twist
    phase ``exp(i pi twist (2p + 1))`` is included.
    """
    if p < 0:
        raise ValueError("p must be non-negative")
    t = model.label(t)
    phase = _twist_phase(model, p)
    blocks = []
    for c, m in sorted(fusion_power(model.algebra, t, p).items()):
        U, space = exchange_block(model, t, c, sector)
        if space.dim:
            blocks.append(ExchangeBlock(c, phase * U, m, space))
    return blocks


def reduced_spectrum(model: AnyonModel, t, p: int, sector=(None, None),
                     cluster_tol: float = DEFAULT_CLUSTER_TOL) -> tuple[EigenphaseSpectrum, list[EigenphaseSpectrum]]:
    """Weighted union of the block spectra, and the per-channel spectra."""
    blocks = exchange_reduced(model, t, p, sector)
    parts = [spectrum(b.matrix, cluster_tol, model.labels[b.c]) for b in blocks]
    total = merge_spectra([s.scaled(b.multiplicity) for s, b in zip(parts, blocks)], cluster_tol)
    return total, parts


def default_strand(model: AnyonModel) -> int:
    """Non-vacuum label of largest quantum dimension (first in label order on ties)."""
    if model.algebra.size < 2:
        return 0
    d = quantum_dimensions(model.algebra)
    best = 1
    for a in range(2, model.algebra.size):
        if d[a] > d[best] + 1e-9:
            best = a
    return best


@dataclass(frozen=True)
class ExchangeParameters:
    """``beta[p]`` for ``p = 0..N-2`` and ``alpha[n - 2]`` for ``n = 2..N``."""

    beta: tuple[float, ...]
    alpha: tuple[float, ...]

    @property
    def N(self) -> int:
        return len(self.beta) + 1

    def alpha_n(self, n: int) -> float:
        if not 2 <= n <= self.N:
            raise ValueError(f"n = {n} out of range 2..{self.N}")
        return self.alpha[n - 2]


def exchange_parameters(source, N: int, t=None, cluster_tol: float = DEFAULT_CLUSTER_TOL) -> ExchangeParameters:
    """Exchange parameters of a model (strand charge `t`) or of a representation.

    ``beta_p`` is the smallest ``|phase|`` in the spectrum of ``U_p`` and
    ``alpha_n`` the minimum of ``beta_0 .. beta_{n-2}``. Models use the block
    reduction over all sectors; representations use ``rho(Sigma_p)`` directly.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    betas = []
    if isinstance(source, Representation):
        if source.strands < N:
            raise ValueError(f"representation has {source.strands} strands, need at least {N}")
        for p in range(N - 1):
            betas.append(spectrum(exchange_direct(source, p), cluster_tol).beta())
    else:
        t = default_strand(source) if t is None else source.label(t)
        for p in range(N - 1):
            betas.append(reduced_spectrum(source, t, p, cluster_tol=cluster_tol)[0].beta())
    alphas = []
    running = math.inf
    for b in betas:
        running = min(running, b)
        alphas.append(running)
    return ExchangeParameters(tuple(betas), tuple(alphas))


def _even_distance(x: Fraction) -> Fraction:
    r = x % 2
    return min(r, 2 - r)


def popcorn_alpha(alpha, N: int) -> tuple[Fraction, Fraction]:
    """Fractionality of the abelian statistics parameter `alpha`.

    Returns ``(alpha_N, alpha_star)`` with
    ``alpha_N = min_{0 <= p <= N-2} min_q |(2p + 1) alpha - 2q|`` and
    ``alpha_star`` its infimum over ``N``, both exact.

    Examples
    --------
    >>> popcorn_alpha(Fraction(2, 3), 2)
    (Fraction(2, 3), Fraction(0, 1))
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    alpha = Fraction(alpha)
    alpha_n = min(_even_distance((2 * p + 1) * alpha) for p in range(N - 1))
    # (2p + 1) alpha mod 2 has period nu = denominator in p
    alpha_star = min(_even_distance((2 * p + 1) * alpha) for p in range(alpha.denominator))
    return alpha_n, alpha_star
