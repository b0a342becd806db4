"""Shared helpers for the test suite."""

import numpy as np
import pytest

from lasertherm.fock import DensityMatrix, FockSpace, Operator


def ginibre_density(rng: np.random.Generator, dim: int) -> DensityMatrix:
    """A full-rank random density matrix (Ginibre construction)."""
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    w = m @ m.conj().T
    w /= np.trace(w).real
    return DensityMatrix(Operator(FockSpace(dim), w))


def random_diagonal_density(rng: np.random.Generator, dim: int) -> DensityMatrix:
    p = rng.uniform(0.05, 1.0, size=dim)
    p /= p.sum()
    return DensityMatrix(Operator(FockSpace(dim), np.diag(p.astype(np.complex128))))


@pytest.fixture
def random_density():
    return ginibre_density
