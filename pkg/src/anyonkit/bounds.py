"""Explicit energy bounds for anyon gases.

Every lower-bound constant here uses the analytic surrogate ``f(t) >= t / 6``
for the local exclusion function ``f``, evaluated at ``t = j'^2_nu`` with
``j'_nu`` the first positive zero of ``J'_nu``. The values are therefore
certified lower bounds, never estimates.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, fields
from functools import lru_cache

from .numerics import first_zero_jprime

__all__ = [
    "FBound",
    "f_bounds",
    "jprime",
    "c_alpha2",
    "c_alpha2_crude",
    "apriori_EN_lower",
    "C_rhoN_lower",
    "homogeneous_bounds",
    "abelian_upper",
    "lt_potential_bound",
    "covering_b",
    "BoundsReport",
    "bounds_report",
    "report_from_alphas",
    "EXCLUSION_CAP",
]

EXCLUSION_CAP = 0.147


@lru_cache(maxsize=None)
def jprime(nu: float) -> float:
    """``j'_nu`` for ``nu`` in ``[0, 1]``, with ``j'_0 = 0``."""
    return first_zero_jprime(float(nu)).value


@dataclass(frozen=True)
class FBound:
    """Lower and upper analytic bounds ``t / 6 <= f(t) <= 2 pi t``."""

    t: float
    lower: float
    upper: float


def f_bounds(t: float) -> FBound:
    """Bounds on ``f(t)``, valid for ``0 <= t <= j'_1^2``."""
    t = float(t)
    tmax = jprime(1.0) ** 2
    if not 0.0 <= t <= tmax * (1 + 1e-12):
        raise ValueError(f"t = {t} outside [0, j'_1^2 = {tmax:.12g}]")
    return FBound(t, t / 6.0, 2.0 * math.pi * t)


def _check_unit(name: str, x: float) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name} = {x} outside [0, 1]")
    return x


def c_alpha2(alpha2: float) -> float:
    """``(1/4) min(j'^2_{alpha2} / 6, 0.147)``, a lower bound on the 4-body exclusion constant."""
    alpha2 = _check_unit("alpha2", alpha2)
    return 0.25 * min(jprime(alpha2) ** 2 / 6.0, EXCLUSION_CAP)


def c_alpha2_crude(alpha2: float) -> float:
    """``(1/4) min(alpha2 / 3, 0.147)``; never larger than :func:`c_alpha2`."""
    alpha2 = _check_unit("alpha2", alpha2)
    return 0.25 * min(alpha2 / 3.0, EXCLUSION_CAP)


def apriori_EN_lower(N: int, E2: float) -> float:
    """Lower bound on ``E_N`` from the two-particle energy ``E_2`` on the unit square.

    ``pi^2 K E2 / ((pi + 4 sqrt(E2))^2 + K E2)`` with ``K = C(N, 2) (3/4)^(N-2)``.
    """
    if N < 3:
        raise ValueError("N must be at least 3")
    if E2 < 0:
        raise ValueError("E2 must be non-negative")
    K = math.comb(N, 2) * 0.75 ** (N - 2)
    return math.pi ** 2 * K * E2 / ((math.pi + 4.0 * math.sqrt(E2)) ** 2 + K * E2)


def C_rhoN_lower(alpha2: float, alphaN: float) -> float:
    """``max(c(alpha2), j'^2_{alphaN} / 6)``."""
    alpha2 = _check_unit("alpha2", alpha2)
    alphaN = _check_unit("alphaN", alphaN)
    return max(c_alpha2(alpha2), jprime(alphaN) ** 2 / 6.0)


def homogeneous_bounds(N: int, C_lower: float) -> tuple[float, float]:
    """Finite-``N`` ground-state bounds for ``N`` anyons on the unit square.

    Lower: ``C N^2 (1/4) (2 x^2 - x^4)`` with ``x = 1 + sqrt(2/N)``, clipped at 0.
    Upper: ``N (1 + sqrt(N))^2 2 pi^2``.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    if C_lower < 0:
        raise ValueError("C_lower must be non-negative")
    x = 1.0 + math.sqrt(2.0 / N)
    lower = max(0.0, C_lower * N * N * 0.25 * (2.0 * x * x - x ** 4))
    upper = N * (1.0 + math.sqrt(N)) ** 2 * 2.0 * math.pi ** 2
    return lower, upper


def abelian_upper(N: int, alpha: float) -> float:
    """Upper bound on the ground energy of ``N`` abelian anyons on the unit square.

    ``2 pi N (N-1) alpha (1 + (20/3) pi (N-2) alpha) / (1 - 2 pi alpha N)^2`` for
    ``0 <= alpha < 1 / (2 pi N)``; ``inf`` beyond that range.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    if alpha >= 1.0 / (2.0 * math.pi * N):
        return math.inf
    return (2.0 * math.pi * N * (N - 1) * alpha * (1.0 + 20.0 / 3.0 * math.pi * (N - 2) * alpha)
            / (1.0 - 2.0 * math.pi * alpha * N) ** 2)


def lt_potential_bound(C: float, alpha2: float, V_minus_L2_sq: float) -> float:
    """``-(1 / (4 C alpha2)) int V_-^2``, the Lieb-Thirring bound for one particle in a potential.

    Returns ``-inf`` when ``C`` or ``alpha2`` vanishes (and the integral does not).
    """
    if C < 0 or alpha2 < 0:
        raise ValueError("C and alpha2 must be non-negative")
    if V_minus_L2_sq < 0:
        raise ValueError("the integral of V_-^2 must be non-negative")
    if V_minus_L2_sq == 0:
        return 0.0
    if C == 0 or alpha2 == 0:
        return -math.inf
    return -V_minus_L2_sq / (4.0 * C * alpha2)


def covering_b(d: int, a: float, q: float, Lambda: float) -> float:
    """``(1 - 2^d q / Lambda) (2^{d a} - 1) / (2^{d a} + 2^d - 2)``."""
    if d < 1:
        raise ValueError("d must be a positive integer")
    if a <= 0:
        raise ValueError("a must be positive")
    if Lambda <= 0 or q < 0:
        raise ValueError("need Lambda > 0 and q >= 0")
    if q >= Lambda * 2.0 ** (-d):
        raise ValueError(f"q = {q} must be below Lambda 2^-d = {Lambda * 2.0 ** (-d)}")
    return (1.0 - 2.0 ** d * q / Lambda) * (2.0 ** (d * a) - 1.0) / (2.0 ** (d * a) + 2.0 ** d - 2.0)


@dataclass(frozen=True)
class BoundsReport:
    """All bound constants for one model and particle number.

    ``C4_lb`` equals ``c_alpha2`` and ``C_rhoN_lb`` is
    ``max(C4_lb, f_lb_alphaN)``; the energies are the homogeneous-gas bounds
    on the unit square.
    """

    model: str
    N: int
    alpha_2: float
    alpha_N: float
    j_prime_alpha2: float
    j_prime_alphaN: float
    f_lb_alpha2: float
    f_lb_alphaN: float
    c_alpha2: float
    C4_lb: float
    C_rhoN_lb: float
    E_N_lower: float
    E_N_upper: float

    PROVENANCE = {
        "f_lb_alpha2": "f(t) >= t/6 at t = j'^2_alpha2",
        "f_lb_alphaN": "f(t) >= t/6 at t = j'^2_alphaN",
        "c_alpha2": "(1/4) min(f_lb_alpha2, 0.147)",
        "C4_lb": "C_4 = (1/4) min(E_2, E_3, E_4) >= c_alpha2",
        "C_rhoN_lb": "max(C4_lb, f_lb_alphaN)",
        "E_N_lower": "C_rhoN_lb N^2 (1/4)(2x^2 - x^4), x = 1 + sqrt(2/N), clipped at 0",
        "E_N_upper": "N (1 + sqrt N)^2 2 pi^2",
    }

    @staticmethod
    def csv_header() -> list[str]:
        return [f.name for f in fields(BoundsReport)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(self.csv_header())
        writer.writerow([_csv_value(v) for v in asdict(self).values()])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "BoundsReport":
        rows = list(csv.reader(io.StringIO(text)))
        if len(rows) != 2 or rows[0] != cls.csv_header():
            raise ValueError("not a bounds report CSV")
        values = dict(zip(rows[0], rows[1]))
        out = {}
        for f in fields(cls):
            v = values[f.name]
            out[f.name] = v if f.name == "model" else int(v) if f.name == "N" else float(v)
        return cls(**out)


def _csv_value(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def report_from_alphas(model: str, N: int, alpha_2: float, alpha_N: float) -> BoundsReport:
    """Bounds report for given exchange parameters ``alpha_2 >= alpha_N``."""
    if N < 2:
        raise ValueError("N must be at least 2")
    alpha_2 = _check_unit("alpha_2", alpha_2)
    alpha_N = _check_unit("alpha_N", alpha_N)
    j2, jN = jprime(alpha_2), jprime(alpha_N)
    c2 = c_alpha2(alpha_2)
    C = C_rhoN_lower(alpha_2, alpha_N)
    lower, upper = homogeneous_bounds(N, C)
    return BoundsReport(model, N, alpha_2, alpha_N, j2, jN, j2 * j2 / 6.0, jN * jN / 6.0,
                        c2, c2, C, lower, upper)


def bounds_report(source, N: int, t=None) -> BoundsReport:
    """Bounds report for a model (strand charge `t`) or a representation."""
    from .exchange import exchange_parameters
    from .reps import Representation

    params = exchange_parameters(source, N, t)
    name = source.basis_tag if isinstance(source, Representation) else source.name
    return report_from_alphas(name, N, min(params.alpha_n(2), 1.0), min(params.alpha_n(N), 1.0))
