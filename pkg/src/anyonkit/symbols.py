"""F-, R- and B-symbols of multiplicity-free anyon models.

Index conventions
-----------------
``F[(a, b, c, d, f, e)]`` is the entry ``[F^{abc}_d]_{f,e}`` of the basis
change on the splitting space of ``d`` into ``a, b, c``: the row label ``f``
is the intermediate charge of the standard (left-grouped) tree,
``f in a x b`` with ``d in f x c``; the column label ``e`` is the intermediate
charge of the right-grouped tree, ``e in b x c`` with ``d in a x e``. The
right-grouped basis vector with label ``e`` equals
``sum_f F[(a, b, c, d, f, e)]`` times the standard basis vector with label ``f``.

``R[(a, b, c)]`` is the exchange phase ``R^{ab}_c``.

``B[(a, b, c, d, g, e)]`` is ``[B^{abc}_d]_{g,e}``: braiding of the two right
strands maps the standard basis of the splitting of ``d`` into ``a, c, b``
(intermediate ``e in a x c``) to the standard basis of ``a, b, c``
(intermediate ``g in a x b``), ``B^{abc}_d = F^{abc}_d R^{bc} (F^{acb}_d)^{-1}``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Mapping

import numpy as np

from .fusion import FusionAlgebra, validate

__all__ = [
    "AnyonModel",
    "SymbolError",
    "derive_b_symbols",
    "verify_pentagon",
    "verify_hexagon",
    "verify_unitarity",
    "apply_gauge",
    "conjugate",
    "builtin",
    "BUILTIN_NAMES",
    "parse_fraction",
    "f_configurations",
]


class SymbolError(ValueError):
    """Symbol tables are incomplete or inconsistent with the fusion rules."""


def f_configurations(algebra: FusionAlgebra):
    """Yield ``(a, b, c, d, std, fused)`` for every non-empty F-block.

    `std` lists the admissible left-grouped intermediates ``f`` and `fused`
    the right-grouped intermediates ``e``, both in label order.
    """
    n = algebra.size
    prod = [[algebra.products(a, b) for b in range(n)] for a in range(n)]
    for a in range(n):
        for b in range(n):
            for c in range(n):
                std: dict[int, list[int]] = {}
                for f in prod[a][b]:
                    for d in prod[f][c]:
                        std.setdefault(d, []).append(f)
                fused: dict[int, list[int]] = {}
                for e in prod[b][c]:
                    for d in prod[a][e]:
                        fused.setdefault(d, []).append(e)
                for d in sorted(std):
                    yield a, b, c, d, tuple(std[d]), tuple(fused.get(d, ()))


def _r_configurations(algebra: FusionAlgebra):
    n = algebra.size
    for a in range(n):
        for b in range(n):
            for c in algebra.products(a, b):
                yield a, b, c


@dataclass(frozen=True, eq=False)
class AnyonModel:
    """Fusion algebra together with F- and R-symbols.

    Parameters
    ----------
    algebra : FusionAlgebra
    F : mapping (a, b, c, d, f, e) -> complex
        Must cover every admissible entry; entries with a vacuum among
        ``a, b, c`` default to 1.
    R : mapping (a, b, c) -> complex
        Must cover every admissible ``c in a x b``; entries with a vacuum
        among ``a, b`` default to 1.
    name : str
    twist : Fraction
        Extra abelian exchange phase ``exp(i pi twist)`` multiplying every
        braid generator at the representation level. Zero for ordinary models;
        the Clifford model is the Ising tables with twist ``-1/8``.
    """

    algebra: FusionAlgebra
    F: Mapping[tuple, complex]
    R: Mapping[tuple, complex]
    name: str = "model"
    twist: Fraction = Fraction(0)
    _blocks: dict = field(default=None, init=False, repr=False)

    def __post_init__(self):
        alg = self.algebra
        problems = validate(alg)
        if problems:
            raise SymbolError("invalid fusion algebra: " + "; ".join(problems))
        F = {tuple(int(i) for i in k): complex(v) for k, v in self.F.items()}
        R = {tuple(int(i) for i in k): complex(v) for k, v in self.R.items()}
        lab = alg.labels
        blocks = {}
        full_F = {}
        for a, b, c, d, std, fused in f_configurations(alg):
            if len(std) != len(fused):
                raise SymbolError(f"F^{{{lab[a]}{lab[b]}{lab[c]}}}_{lab[d]} is not square")
            mat = np.zeros((len(std), len(fused)), dtype=complex)
            for i, f in enumerate(std):
                for j, e in enumerate(fused):
                    key = (a, b, c, d, f, e)
                    if key in F:
                        val = F.pop(key)
                    elif 0 in (a, b, c):
                        val = 1.0
                    else:
                        raise SymbolError(
                            f"missing F-symbol F^{{{lab[a]},{lab[b]},{lab[c]}}}"
                            f"_{{{lab[d]};{lab[f]},{lab[e]}}}")
                    mat[i, j] = val
                    full_F[key] = complex(val)
            blocks[(a, b, c, d)] = (std, fused, mat)
        if F:
            key = next(iter(F))
            raise SymbolError(f"F-symbol {tuple(lab[i] for i in key)} is not admissible")
        full_R = {}
        for a, b, c in _r_configurations(alg):
            key = (a, b, c)
            if key in R:
                val = R.pop(key)
            elif 0 in (a, b):
                val = 1.0
            else:
                raise SymbolError(f"missing R-symbol R^{{{lab[a]},{lab[b]}}}_{{{lab[c]}}}")
            if abs(abs(val) - 1.0) > 1e-10:
                raise SymbolError(f"R^{{{lab[a]},{lab[b]}}}_{{{lab[c]}}} = {val} is not unimodular")
            full_R[key] = complex(val)
        if R:
            key = next(iter(R))
            raise SymbolError(f"R-symbol {tuple(lab[i] for i in key)} is not admissible")
        object.__setattr__(self, "F", full_F)
        object.__setattr__(self, "R", full_R)
        object.__setattr__(self, "twist", Fraction(self.twist))
        object.__setattr__(self, "_blocks", blocks)

    # -- access ---------------------------------------------------------------

    @property
    def labels(self) -> tuple[str, ...]:
        return self.algebra.labels

    def label(self, x) -> int:
        return self.algebra.index(x)

    def f_block(self, a, b, c, d) -> tuple[tuple[int, ...], tuple[int, ...], np.ndarray]:
        """Return ``(std, fused, matrix)`` for ``F^{abc}_d`` (empty if inadmissible)."""
        key = tuple(self.label(x) for x in (a, b, c, d))
        if key not in self._blocks:
            return (), (), np.zeros((0, 0), dtype=complex)
        std, fused, mat = self._blocks[key]
        return std, fused, mat.copy()

    def f_blocks(self):
        for key, (std, fused, mat) in self._blocks.items():
            yield key, std, fused, mat.copy()

    def r(self, a, b, c) -> complex:
        key = (self.label(a), self.label(b), self.label(c))
        return self.R.get(key, 0j)

    @cached_property
    def B(self) -> dict:
        return derive_b_symbols(self)

    def b_block(self, a, b, c, d) -> tuple[tuple[int, ...], tuple[int, ...], np.ndarray]:
        """Return ``(rows, cols, matrix)`` for ``B^{abc}_d``.

        Rows are labels ``g in a x b`` with ``d in g x c``; columns are labels
        ``e in a x c`` with ``d in e x b``.
        """
        a, b, c, d = (self.label(x) for x in (a, b, c, d))
        N = self.algebra.N
        n = self.algebra.size
        rows = tuple(g for g in range(n) if N[a, b, g] and N[g, c, d])
        cols = tuple(e for e in range(n) if N[a, c, e] and N[e, b, d])
        mat = np.array([[self.B.get((a, b, c, d, g, e), 0j) for e in cols] for g in rows],
                       dtype=complex).reshape(len(rows), len(cols))
        return rows, cols, mat

    def with_name(self, name: str) -> "AnyonModel":
        return AnyonModel(self.algebra, self.F, self.R, name, self.twist)


# ---------------------------------------------------------------------------
# derived symbols


def derive_b_symbols(model: AnyonModel) -> dict:
    """All B-symbols ``B^{abc}_{d;ge} = sum_f F^{abc}_{d;gf} R^{bc}_f (F^{-1})^{acb}_{d;fe}``."""
    out = {}
    for (a, b, c, d), (std, fused, mat) in model._blocks.items():
        std2, fused2, mat2 = model._blocks.get((a, c, b, d), ((), (), None))
        if mat2 is None or set(fused2) != set(fused):
            raise SymbolError(f"F-block for ({a},{c},{b},{d}) missing or inconsistent")
        inv2 = np.linalg.inv(mat2)
        # reorder the fused labels of the (a,c,b) block to match this block
        perm = [fused2.index(f) for f in fused]
        rdiag = np.array([model.R[(b, c, f)] for f in fused])
        bmat = mat @ np.diag(rdiag) @ inv2[perm, :]
        for i, g in enumerate(std):
            for j, e in enumerate(std2):
                out[(a, b, c, d, g, e)] = complex(bmat[i, j])
    return out


# ---------------------------------------------------------------------------
# vectorized consistency equations


class _Lookup:
    """Vectorized lookup of a sparse symbol table keyed by label tuples."""

    def __init__(self, table: Mapping[tuple, complex], n: int, width: int):
        self.n = n
        keys = np.array(list(table.keys()), dtype=np.int64).reshape(-1, width)
        codes = self._encode(keys.T)
        order = np.argsort(codes)
        self.codes = codes[order]
        self.values = np.array(list(table.values()), dtype=complex)[order]

    def _encode(self, cols) -> np.ndarray:
        code = np.zeros(np.shape(cols[0]), dtype=np.int64)
        for col in cols:
            code = code * self.n + np.asarray(col, dtype=np.int64)
        return code

    def __call__(self, *cols) -> np.ndarray:
        code = self._encode(cols)
        if self.codes.size == 0:
            return np.zeros(code.shape, dtype=complex)
        pos = np.clip(np.searchsorted(self.codes, code), 0, self.codes.size - 1)
        hit = self.codes[pos] == code
        return np.where(hit, self.values[pos], 0j)


def _extend(rows: np.ndarray, key: np.ndarray, N: np.ndarray, mode: str) -> np.ndarray:
    """Append admissible labels to each row.

    mode ``"first"``: key is a label ``a``; append every ``(b, c)`` with N[a,b,c].
    mode ``"pair"``: key is ``a*n + b``; append every ``c`` with N[a,b,c].
    """
    n = N.shape[0]
    trip = np.argwhere(N)  # sorted lexicographically
    if mode == "first":
        group, vals = trip[:, 0], trip[:, 1:]
        nkeys = n
    else:
        group, vals = trip[:, 0] * n + trip[:, 1], trip[:, 2:]
        nkeys = n * n
    counts = np.bincount(group, minlength=nkeys)
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    rep = counts[key]
    src = np.repeat(np.arange(rows.shape[0]), rep)
    offs = np.arange(rep.sum()) - np.repeat(np.cumsum(rep) - rep, rep)
    picked = vals[starts[key[src]] + offs]
    return np.hstack([rows[src], picked])


def verify_pentagon(model: AnyonModel) -> float:
    """Max residual of the pentagon equations over all admissible labels.

    With ``F(abc,d; f,e) = [F^{abc}_d]_{f,e}`` (row standard, column fused):
    ``F(pzw,u; q,t) F(xyt,u; p,s) = sum_r F(xyz,q; p,r) F(xrw,u; q,s) F(yzw,s; r,t)``
    where ``p in x y``, ``q in p z``, ``t in z w``, ``s in y t``, ``u in q w``.
    """
    N = model.algebra.N
    n = N.shape[0]
    F = _Lookup(model.F, n, 6)
    rows = np.argwhere(N)                               # x, y, p
    rows = _extend(rows, rows[:, 2], N, "first")        # z, q
    rows = _extend(rows, rows[:, 3], N, "first")        # w, t
    rows = _extend(rows, rows[:, 1] * n + rows[:, 6], N, "pair")  # s in y x t
    rows = _extend(rows, rows[:, 4] * n + rows[:, 5], N, "pair")  # u in q x w
    x, y, p, z, q, w, t, s, u = rows.T
    keep = N[x, s, u].astype(bool)
    x, y, p, z, q, w, t, s, u = (col[keep] for col in (x, y, p, z, q, w, t, s, u))
    if x.size == 0:
        return 0.0
    lhs = F(p, z, w, u, q, t) * F(x, y, t, u, p, s)
    rhs = np.zeros_like(lhs)
    for r in range(n):
        r_col = np.full_like(x, r)
        rhs += F(x, y, z, q, p, r_col) * F(x, r_col, w, u, q, s) * F(y, z, w, s, r_col, t)
    return float(np.max(np.abs(lhs - rhs)))


def verify_hexagon(model: AnyonModel, clockwise: bool = False) -> float:
    """Max residual of the hexagon equations over all admissible labels.

    Counterclockwise:
    ``R(zx,p) F(xzy,u; p,q) R(zy,q) = sum_r F(zxy,u; p,r) R(zr,u) F(xyz,u; r,q)``;
    clockwise:
    ``R(xz,p)^-1 F(xzy,u; p,q) R(yz,q)^-1 = sum_r F(zxy,u; p,r) R(rz,u)^-1 F(xyz,u; r,q)``,
    with ``p in x z``, ``q in z y``, ``u in p y`` and ``u in x q``. Both forms
    are covariant under :func:`apply_gauge`.
    """
    N = model.algebra.N
    n = N.shape[0]
    F = _Lookup(model.F, n, 6)
    if clockwise:
        Rinv = _Lookup({k: 1.0 / v for k, v in model.R.items()}, n, 3)

        def R(a, b, c):
            return Rinv(b, a, c)
    else:
        R = _Lookup(model.R, n, 3)
    rows = np.argwhere(N)                               # x, z, p
    rows = _extend(rows, rows[:, 1], N, "first")        # y, q  (q in z x y)
    rows = _extend(rows, rows[:, 2] * n + rows[:, 3], N, "pair")  # u in p x y
    x, z, p, y, q, u = rows.T
    keep = N[x, q, u].astype(bool)
    x, z, p, y, q, u = (col[keep] for col in (x, z, p, y, q, u))
    if x.size == 0:
        return 0.0
    lhs = R(z, x, p) * F(x, z, y, u, p, q) * R(z, y, q)
    rhs = np.zeros_like(lhs)
    for r in range(n):
        r_col = np.full_like(x, r)
        rhs += F(z, x, y, u, p, r_col) * R(z, r_col, u) * F(x, y, z, u, r_col, q)
    return float(np.max(np.abs(lhs - rhs)))


def verify_unitarity(model: AnyonModel) -> float:
    """Max deviation from unitarity over all F-blocks."""
    worst = 0.0
    for std, fused, mat in model._blocks.values():
        worst = max(worst, float(np.max(np.abs(mat.conj().T @ mat - np.eye(len(std))))))
    return worst


# ---------------------------------------------------------------------------
# transformations


def apply_gauge(model: AnyonModel, u: Mapping[tuple, complex]) -> AnyonModel:
    """Apply a vertex gauge transformation.

    ``u`` maps admissible splitting channels ``(a, b, c)`` to unit complex
    numbers (missing channels default to 1). Then
    ``F(abc,d; f,e) -> u(a,e,d) u(b,c,e) / (u(a,b,f) u(f,c,d)) F(abc,d; f,e)`` and
    ``R(ab,c) -> u(b,a,c) / u(a,b,c) R(ab,c)``.
    """
    alg = model.algebra
    gauge = {}
    for key, val in u.items():
        a, b, c = (alg.index(x) for x in key)
        val = complex(val)
        if abs(abs(val) - 1.0) > 1e-12:
            raise SymbolError(f"gauge entry {key} = {val} is not unimodular")
        if not alg.admissible(a, b, c):
            raise SymbolError(f"gauge entry {key} is not an admissible channel")
        gauge[(a, b, c)] = val

    def g(a, b, c):
        return gauge.get((a, b, c), 1.0)

    F = {(a, b, c, d, f, e): g(a, e, d) * g(b, c, e) / (g(a, b, f) * g(f, c, d)) * v
         for (a, b, c, d, f, e), v in model.F.items()}
    R = {(a, b, c): g(b, a, c) / g(a, b, c) * v for (a, b, c), v in model.R.items()}
    return AnyonModel(alg, F, R, model.name, model.twist)


def conjugate(model: AnyonModel) -> AnyonModel:
    """Complex-conjugate every symbol (the mirror-image model)."""
    F = {k: v.conjugate() for k, v in model.F.items()}
    R = {k: v.conjugate() for k, v in model.R.items()}
    return AnyonModel(model.algebra, F, R, model.name + "*", -model.twist)


# ---------------------------------------------------------------------------
# built-in models


def parse_fraction(text) -> Fraction:
    """Parse ``"mu/nu"`` (or an int/Fraction) and insist on lowest terms."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    s = str(text).strip()
    if "/" in s:
        num, _, den = s.partition("/")
        try:
            mu, nu = int(num), int(den)
        except ValueError:
            raise ValueError(f"cannot parse rational {text!r}") from None
        if nu <= 0:
            raise ValueError(f"denominator of {text!r} must be positive")
        if math.gcd(mu, nu) != 1:
            raise ValueError(f"rational {text!r} is not in lowest terms")
        return Fraction(mu, nu)
    try:
        return Fraction(int(s))
    except ValueError:
        raise ValueError(f"cannot parse rational {text!r}") from None


def _vacuum() -> AnyonModel:
    alg = FusionAlgebra(("1",), np.ones((1, 1, 1)))
    return AnyonModel(alg, {}, {}, "vacuum")


def _z2(sign: int, name: str) -> AnyonModel:
    alg = FusionAlgebra.from_rules(["1", "psi"], [("psi", "psi", "1")])
    F = {(1, 1, 1, 1, 0, 0): 1.0}
    R = {(1, 1, 0): float(sign)}
    return AnyonModel(alg, F, R, name)


def _root_of_unity(phase: Fraction) -> complex:
    """``exp(i pi phase)`` with the phase reduced exactly modulo 2 first."""
    phase = Fraction(phase) % 2
    if phase.denominator <= 2:
        return complex(round(math.cos(math.pi * phase)), round(math.sin(math.pi * phase)))
    return cmath.exp(1j * math.pi * float(phase))


def _abelian(alpha: Fraction, reduced: bool = False) -> AnyonModel:
    alpha = Fraction(alpha)
    if not 0 <= alpha < 2:
        raise ValueError(f"abelian statistics parameter {alpha} must lie in [0, 2)")
    mu, nu = alpha.numerator, alpha.denominator
    if reduced:
        if mu % 2:
            raise ValueError(f"the reduced label set needs an even numerator, got {alpha}")
        order = nu
    else:
        order = 2 * nu
    labels = ["1", "a"] + [f"a^{k}" for k in range(2, order)]
    labels = labels[:order]
    N = np.zeros((order, order, order), dtype=np.int64)
    for j in range(order):
        for k in range(order):
            N[j, k, (j + k) % order] = 1
    alg = FusionAlgebra(tuple(labels), N)
    F = {}
    for a in range(order):
        for b in range(order):
            for c in range(order):
                d = (a + b + c) % order
                F[(a, b, c, d, (a + b) % order, (b + c) % order)] = 1.0
    R = {(j, k, (j + k) % order): _root_of_unity(alpha * j * k)
         for j in range(order) for k in range(order)}
    return AnyonModel(alg, F, R, f"abelian({alpha})")


PHI = (1.0 + math.sqrt(5.0)) / 2.0


def _fibonacci(eta: complex = 1.0) -> AnyonModel:
    alg = FusionAlgebra.from_rules(["1", "tau"], [("tau", "tau", "1"), ("tau", "tau", "tau")])
    t = 1
    eta = complex(eta)
    a, b = 1.0 / PHI, 1.0 / math.sqrt(PHI)
    F = {}
    for key in _all_f_keys(alg):
        F[key] = 1.0
    F[(t, t, t, 0, t, t)] = 1.0
    F[(t, t, t, t, 0, 0)] = a
    F[(t, t, t, t, 0, t)] = eta * b
    F[(t, t, t, t, t, 0)] = eta.conjugate() * b
    F[(t, t, t, t, t, t)] = -a
    R = {(t, t, 0): cmath.exp(4j * math.pi / 5), (t, t, t): cmath.exp(-3j * math.pi / 5)}
    return AnyonModel(alg, F, R, "fibonacci")


def _ising() -> AnyonModel:
    alg = FusionAlgebra.from_rules(
        ["1", "sigma", "psi"],
        [("sigma", "sigma", "1"), ("sigma", "sigma", "psi"), ("sigma", "psi", "sigma"),
         ("psi", "psi", "1")])
    s, p = 1, 2
    F = {key: 1.0 for key in _all_f_keys(alg)}
    h = 1.0 / math.sqrt(2.0)
    F[(s, s, s, s, 0, 0)] = h
    F[(s, s, s, s, 0, p)] = h
    F[(s, s, s, s, p, 0)] = h
    F[(s, s, s, s, p, p)] = -h
    F[(s, p, s, p, s, s)] = -1.0
    F[(p, s, p, s, s, s)] = -1.0
    R = {(s, s, 0): cmath.exp(-1j * math.pi / 8), (s, s, p): cmath.exp(3j * math.pi / 8),
         (s, p, s): -1j, (p, s, s): -1j, (p, p, 0): -1.0}
    return AnyonModel(alg, F, R, "ising")


def _all_f_keys(alg: FusionAlgebra):
    for a, b, c, d, std, fused in f_configurations(alg):
        for f in std:
            for e in fused:
                yield (a, b, c, d, f, e)


BUILTIN_NAMES = ("vacuum", "boson", "fermion", "abelian", "fibonacci", "ising", "clifford")


def builtin(name: str, alpha=None, *, conjugate_symbols: bool = False,
            reduced: bool = False, eta: complex = 1.0) -> AnyonModel:
    """Construct a built-in model by name.

    Parameters
    ----------
    name : str
        One of :data:`BUILTIN_NAMES`. ``"abelian(mu/nu)"`` and
        ``"abelian:mu/nu"`` carry the statistics parameter inline.
    alpha : str or Fraction, optional
        Statistics parameter of the abelian model, ``mu/nu`` in lowest terms
        in ``[0, 2)``.
    conjugate_symbols : bool
        Return the complex-conjugate tables.
    reduced : bool
        For even-numerator abelian models, use the ``nu`` labels
        ``1, a, ..., a^(nu-1)`` instead of the full cyclic group of order ``2 nu``.
    eta : complex
        Fibonacci gauge phase multiplying the off-diagonal of ``F^{ttt}_t``.
    """
    key = name.strip().lower()
    for sep in ("(", ":"):
        if sep in key and key.startswith("abelian"):
            head, _, rest = key.partition(sep)
            key, alpha = head.strip(), rest.rstrip(")").strip()
    if key == "vacuum":
        model = _vacuum()
    elif key == "boson":
        model = _z2(+1, "boson")
    elif key == "fermion":
        model = _z2(-1, "fermion")
    elif key == "abelian":
        if alpha is None:
            raise ValueError("the abelian model needs a statistics parameter alpha = mu/nu")
        model = _abelian(parse_fraction(alpha), reduced=reduced)
    elif key == "fibonacci":
        model = _fibonacci(eta)
    elif key == "ising":
        model = _ising()
    elif key == "clifford":
        ising = _ising()
        model = AnyonModel(ising.algebra, ising.F, ising.R, "clifford", Fraction(-1, 8))
    else:
        raise ValueError(f"unknown model {name!r}; built-in models: {', '.join(BUILTIN_NAMES)}")
    if conjugate_symbols:
        model = conjugate(model)
    return model
