"""Multiplicity-free fusion algebras.

A fusion algebra is given by an ordered list of label names (the vacuum
``"1"`` first) and a 0/1 tensor ``N[a, b, c]`` stating whether ``c`` appears
in ``a x b``. Labels are referred to by their integer index everywhere in the
package; names are only used for input and display.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .numerics import NumericalError, perron_frobenius

__all__ = [
    "FusionAlgebra",
    "ChargeMultiset",
    "validate",
    "fuse",
    "fusion_power",
    "quantum_dimensions",
    "fib",
]


class ChargeMultiset(Counter):
    """Multiplicities of total charges, keyed by label index."""

    def named(self, algebra: "FusionAlgebra") -> dict[str, int]:
        return {algebra.labels[c]: m for c, m in sorted(self.items()) if m}


@dataclass(frozen=True, eq=False)
class FusionAlgebra:
    """Ordered label set with a multiplicity-free fusion tensor.

    Parameters
    ----------
    labels : sequence of str
        Display names; index 0 is the vacuum.
    N : array_like of shape (n, n, n)
        Fusion tensor with entries in {0, 1}.
    dual : sequence of int, optional
        Charge conjugation as an index map. Derived from ``N[a, b, 0]`` when
        omitted; left as -1 for labels without a unique dual, which
        :func:`validate` then reports.
    """

    labels: tuple[str, ...]
    N: np.ndarray
    dual: tuple[int, ...] = field(default=())

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        if not labels:
            raise ValueError("a fusion algebra needs at least the vacuum label")
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate label names in {labels}")
        n = len(labels)
        N = np.array(self.N, dtype=np.int64)
        if N.shape != (n, n, n):
            raise ValueError(f"fusion tensor has shape {N.shape}, expected {(n, n, n)}")
        if np.any(N < 0):
            raise ValueError("fusion multiplicities must be non-negative")
        if np.any(N > 1):
            a, b, c = (int(i) for i in np.argwhere(N > 1)[0])
            raise ValueError(
                f"multiplicity N[{labels[a]}][{labels[b]}][{labels[c]}] = {N[a, b, c]}; "
                "only multiplicity-free algebras are supported")
        N.setflags(write=False)
        if self.dual:
            dual = tuple(int(d) for d in self.dual)
            if len(dual) != n or any(not 0 <= d < n for d in dual):
                raise ValueError("dual map must assign a valid label to every label")
        else:
            dual = []
            for a in range(n):
                partners = [b for b in range(n) if N[a, b, 0]]
                dual.append(partners[0] if len(partners) == 1 else -1)
            dual = tuple(dual)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "dual", dual)

    @classmethod
    def from_rules(cls, labels: Sequence[str], rules: Iterable[tuple[str, str, str]],
                   dual: Mapping[str, str] | None = None,
                   symmetric: bool = True, unit: bool = True) -> "FusionAlgebra":
        """Build an algebra from named triples ``(a, b, c)`` meaning ``c in a x b``.

        With `symmetric` each triple also declares ``c in b x a``; with `unit`
        the fusions ``1 x a = a x 1 = a`` are added automatically.
        """
        labels = list(labels)
        index = {name: i for i, name in enumerate(labels)}
        n = len(labels)
        N = np.zeros((n, n, n), dtype=np.int64)

        def lookup(name):
            try:
                return index[name]
            except KeyError:
                raise ValueError(f"unknown label {name!r}") from None

        for a, b, c in rules:
            ia, ib, ic = lookup(a), lookup(b), lookup(c)
            N[ia, ib, ic] = 1
            if symmetric:
                N[ib, ia, ic] = 1
        if unit:
            for a in range(n):
                N[0, a, a] = N[a, 0, a] = 1
        dual_idx = ()
        if dual:
            dual_idx = tuple(index[dual.get(name, name)] if name in dual else -1
                             for name in labels)
            if -1 in dual_idx:
                missing = [labels[i] for i, d in enumerate(dual_idx) if d == -1]
                raise ValueError(f"dual map does not cover labels {missing}")
        return cls(tuple(labels), N, dual_idx)

    # -- convenience -------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        """Resolve a label given by index or by name."""
        if isinstance(label, (int, np.integer)):
            if not 0 <= label < self.size:
                raise ValueError(f"label index {label} out of range 0..{self.size - 1}")
            return int(label)
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise ValueError(f"unknown label {label!r}; known labels {list(self.labels)}") from None

    def name(self, a: int) -> str:
        return self.labels[a]

    def products(self, a: int, b: int) -> tuple[int, ...]:
        """Labels ``c`` with ``N[a, b, c] = 1``, in label order."""
        return tuple(int(c) for c in np.flatnonzero(self.N[a, b]))

    def admissible(self, a: int, b: int, c: int) -> bool:
        return bool(self.N[a, b, c])

    def is_abelian(self) -> bool:
        return bool(np.all(self.N.sum(axis=2) == 1))


def validate(algebra: FusionAlgebra) -> list[str]:
    """Return human-readable descriptions of every violated fusion axiom."""
    N = algebra.N
    n = algebra.size
    name = algebra.labels
    problems = []
    for a, b, c in np.argwhere(N != N.transpose(1, 0, 2)):
        if a < b:
            problems.append(f"commutativity: N[{name[a]}][{name[b]}][{name[c]}] != "
                            f"N[{name[b]}][{name[a]}][{name[c]}]")
    for a in range(n):
        for c in range(n):
            if N[0, a, c] != (a == c):
                problems.append(f"unit: N[1][{name[a]}][{name[c]}] = {N[0, a, c]}, "
                                f"expected {int(a == c)}")
    for a in range(n):
        partners = [b for b in range(n) if N[a, b, 0]]
        if len(partners) != 1:
            problems.append(f"dual: {name[a]} has {len(partners)} fusion partners to the vacuum")
            continue
        d = algebra.dual[a]
        if d != partners[0]:
            problems.append(f"dual: declared dual of {name[a]} is "
                            f"{name[d] if d >= 0 else '?'}, fusion rules give {name[partners[0]]}")
        elif algebra.dual[d] != a:
            problems.append(f"dual: dual(dual({name[a]})) != {name[a]}")
    if n and algebra.dual[0] != 0:
        problems.append("dual: the vacuum must be self-dual")
    # sum_e N[a,b,e] N[e,c,d] versus sum_f N[b,c,f] N[a,f,d]
    left = np.einsum("abe,ecd->abcd", N, N)
    right = np.einsum("bcf,afd->abcd", N, N)
    for a, b, c, d in np.argwhere(left != right):
        problems.append(f"associativity: ({name[a]} x {name[b]}) x {name[c]} and "
                        f"{name[a]} x ({name[b]} x {name[c]}) differ in channel {name[d]}")
    return problems


def fuse(algebra: FusionAlgebra, a, b) -> ChargeMultiset:
    """Fusion product ``a x b`` as a multiset of total charges."""
    a, b = algebra.index(a), algebra.index(b)
    return ChargeMultiset({c: 1 for c in algebra.products(a, b)})


def fusion_power(algebra: FusionAlgebra, t, n: int) -> ChargeMultiset:
    """Multiplicities of the total charges in the n-fold product ``t x ... x t``."""
    if n < 0:
        raise ValueError("fusion_power needs n >= 0")
    t = algebra.index(t)
    counts = np.zeros(algebra.size, dtype=object)
    counts[0] = 1
    for _ in range(n):
        counts = np.array([sum(counts[b] * int(algebra.N[b, t, c]) for b in range(algebra.size))
                           for c in range(algebra.size)], dtype=object)
    return ChargeMultiset({c: int(m) for c, m in enumerate(counts) if m})


def quantum_dimensions(algebra: FusionAlgebra, tol: float = 1e-10) -> np.ndarray:
    """Perron-Frobenius eigenvalue of each fusion matrix ``[N_a]_{bc} = N[a, b, c]``.

    Raises `NumericalError` when the iteration does not converge or when the
    result violates ``d_a d_b = sum_c N[a, b, c] d_c`` by more than `tol`.
    """
    d = np.array([perron_frobenius(algebra.N[a])[0] for a in range(algebra.size)])
    residual = np.abs(np.outer(d, d) - np.einsum("abc,c->ab", algebra.N, d))
    worst = float(residual.max()) if residual.size else 0.0
    if worst > tol:
        raise NumericalError(f"quantum dimensions violate d_a d_b = sum N d_c by {worst:.3e}")
    return d


def fib(n: int) -> int:
    """Fibonacci numbers with ``fib(0) = 0``, ``fib(1) = 1``, extended to negative n."""
    if n < 0:
        m = -n
        return fib(m) if m % 2 else -fib(m)
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a
