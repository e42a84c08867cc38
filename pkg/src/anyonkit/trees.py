"""Ordered splitting-tree bases and the staircase basis change.

A basis vector of the splitting space with strands ``t_1, ..., t_n`` is the
chain ``(b_1, ..., b_{n+1})`` of charges along the base line, with
``b_{k+1} in b_k x t_k``; ``b_1`` is the left sector and ``b_{n+1}`` the total
charge. Bases are ordered by sector ``(b_1, b_{n+1})`` first and then
lexicographically in the chain, all under the model's label order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fusion import FusionAlgebra, fusion_power
from .symbols import AnyonModel

__all__ = [
    "SplittingSpace",
    "enumerate_basis",
    "enumerate_chains",
    "StaircaseBasis",
    "staircase_change_of_basis",
]


def _algebra(model) -> FusionAlgebra:
    return model.algebra if isinstance(model, AnyonModel) else model


@dataclass(frozen=True)
class SplittingSpace:
    """Ordered standard basis of a splitting space.

    Attributes
    ----------
    strands : tuple of int
        Charges ``t_1, ..., t_n`` of the strands, left to right.
    sector : tuple
        ``(a, c)`` with ``None`` marking a wildcard.
    states : tuple of tuple of int
        Chains ``(b_1, ..., b_{n+1})`` in basis order.
    """

    strands: tuple[int, ...]
    sector: tuple[int | None, int | None]
    states: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.strands)

    @property
    def dim(self) -> int:
        return len(self.states)

    def index(self) -> dict[tuple[int, ...], int]:
        return {chain: i for i, chain in enumerate(self.states)}

    def sectors(self) -> list[tuple[tuple[int, int], slice]]:
        """Contiguous ``(a, c)`` blocks of the basis, in order."""
        out = []
        start = 0
        for i in range(1, self.dim + 1):
            if i == self.dim or self.states[i][0] != self.states[start][0] \
                    or self.states[i][-1] != self.states[start][-1]:
                out.append(((self.states[start][0], self.states[start][-1]), slice(start, i)))
                start = i
        return out

    def format_state(self, chain, labels: Sequence[str]) -> str:
        return ",".join(labels[b] for b in chain)


def enumerate_chains(model, strands: Sequence, sector=(None, None)) -> SplittingSpace:
    """Basis of the splitting space with the given strand charges."""
    alg = _algebra(model)
    strands = tuple(alg.index(t) for t in strands)
    a, c = sector
    a = None if a is None else alg.index(a)
    c = None if c is None else alg.index(c)
    starts = range(alg.size) if a is None else (a,)
    chains = []

    def grow(chain):
        k = len(chain) - 1
        if k == len(strands):
            if c is None or chain[-1] == c:
                chains.append(tuple(chain))
            return
        for nxt in alg.products(chain[-1], strands[k]):
            chain.append(nxt)
            grow(chain)
            chain.pop()

    for b1 in starts:
        grow([b1])
    chains.sort(key=lambda ch: (ch[0], ch[-1], ch))
    return SplittingSpace(strands, (a, c), tuple(chains))


def enumerate_basis(model, t, n: int, sector=(None, None)) -> SplittingSpace:
    """Basis of ``V^{a, t^n}_c`` (wildcard ``None`` for ``a`` or ``c``).

    Examples
    --------
    >>> from anyonkit.symbols import builtin
    >>> enumerate_basis(builtin("fibonacci"), "tau", 5, ("1", None)).dim
    8
    """
    if n < 1:
        raise ValueError("enumerate_basis needs n >= 1 strands")
    alg = _algebra(model)
    return enumerate_chains(alg, (alg.index(t),) * n, sector)


@dataclass(frozen=True)
class StaircaseBasis:
    """Basis change regrouping the inner strands of ``t t^p t``.

    ``matrix`` maps coordinates in the standard basis `source` of
    ``V^{*, t^{p+2}}_*`` to coordinates in the concatenation over `blocks`.
    Each block is ``(c, inner, space)``: the inner staircase chain
    ``inner = (c_1, ..., c_p)`` with ``c_1 = t`` and ``c_p = c`` labels one copy of
    ``space``, the standard basis of ``V^{*, t c t}_*``.
    """

    matrix: np.ndarray
    source: SplittingSpace
    blocks: tuple[tuple[int, tuple[int, ...], SplittingSpace], ...]


def staircase_change_of_basis(model: AnyonModel, t, p: int, sector=(None, None)) -> StaircaseBasis:
    """F-move basis change that fuses the ``p`` inner strands into one charge ``c``.

    Going from the chain ``(a, b, b_3, ..., b_{p+2}, e)`` to the grouped basis,
    the k-th move (k = 1..p-1) replaces the intermediate ``b_{k+2}`` of the
    standard tree ``b x c_k x t -> b_{k+3}`` by the fused intermediate
    ``c_{k+1} in c_k x t`` with amplitude ``(F^{b c_k t}_{b_{k+3}})^{-1}``.
    The grouped vector ``(a, b, d, e)`` in copy ``inner`` then has ``d = b_{p+2}``.
    """
    if p < 0:
        raise ValueError("p must be non-negative")
    alg = model.algebra
    t = alg.index(t)
    source = enumerate_basis(alg, t, p + 2, sector)
    powers = fusion_power(alg, t, p)
    blocks = []
    offsets = {}
    dim = 0
    for c in sorted(powers):
        space = enumerate_chains(alg, (t, c, t), sector)
        inners = [()] if p == 0 else [ch[1:] for ch in enumerate_chains(alg, (t,) * p, (0, c)).states]
        # inner staircase of p strands: chains (1, t, c_2, ..., c_p); drop the leading vacuum
        for inner in inners:
            blocks.append((c, inner, space))
            pos = space.index()
            for chain, i in pos.items():
                offsets[(inner, chain)] = dim + i
            dim += space.dim
    if dim != source.dim:
        raise AssertionError(f"grouped dimension {dim} differs from source dimension {source.dim}")
    inverse_cache = {}

    def f_inverse(a, b, c, d):
        key = (a, b, c, d)
        if key not in inverse_cache:
            std, fused, mat = model.f_block(a, b, c, d)
            inverse_cache[key] = (fused, std, np.linalg.inv(mat))
        return inverse_cache[key]

    S = np.zeros((dim, source.dim), dtype=complex)
    for col, chain in enumerate(source.states):
        a, b, e = chain[0], chain[1], chain[-1]
        if p == 0:
            S[offsets[((), (a, b, b, e))], col] = 1.0
            continue
        # partial states: (inner staircase so far, amplitude)
        partial = [((t,), 1.0 + 0j)]
        for k in range(1, p):
            nxt = []
            old = chain[k + 1]      # b_{k+2}
            total = chain[k + 2]    # b_{k+3}
            for inner, amp in partial:
                fused, std, inv = f_inverse(b, inner[-1], t, total)
                j = std.index(old)
                for i, ck in enumerate(fused):
                    if inv[i, j] != 0:
                        nxt.append((inner + (ck,), amp * inv[i, j]))
            partial = nxt
        d = chain[p + 1]
        for inner, amp in partial:
            S[offsets[(inner, (a, b, d, e))], col] += amp
    return StaircaseBasis(S, source, tuple(blocks))
