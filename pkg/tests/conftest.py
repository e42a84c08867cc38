from __future__ import annotations

import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from anyonkit.symbols import builtin

SRC = Path(__file__).resolve().parents[1] / "src"


def run_cli(*args, env=None, cwd=None):
    """Run ``python -m anyonkit`` in a subprocess and return the completed process."""
    full_env = dict(os.environ)
    full_env["PYTHONPATH"] = str(SRC) + os.pathsep + full_env.get("PYTHONPATH", "")
    if env:
        full_env.update(env)
    return subprocess.run([sys.executable, "-m", "anyonkit", *args], capture_output=True,
                          text=True, env=full_env, cwd=cwd, timeout=120)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Product of random Householder reflections times a diagonal phase."""
    q = np.eye(n, dtype=complex)
    for _ in range(n):
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v /= np.linalg.norm(v)
        q = q @ (np.eye(n) - 2.0 * np.outer(v, v.conj()))
    return q @ np.diag(np.exp(2j * np.pi * rng.random(n)))


@pytest.fixture(scope="session")
def fibonacci():
    return builtin("fibonacci")


@pytest.fixture(scope="session")
def ising():
    return builtin("ising")


@pytest.fixture(scope="session")
def clifford():
    return builtin("clifford")
