"""Shared test utilities: random objects and analytic reference states.

The analytic forms are written straight from the projector algebra so
they stay independent of the package's own update implementations.
"""

from __future__ import annotations

import numpy as np

from qroutes import DensityMatrix


def random_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density(rng: np.random.Generator, dim: int) -> DensityMatrix:
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = m @ m.conj().T
    return DensityMatrix(m / np.trace(m))


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (m + m.conj().T) / 2


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(m)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def hermitian_with_spectrum(
    rng: np.random.Generator, eigenvalues
) -> tuple[np.ndarray, np.ndarray]:
    """Random Hermitian with the given spectrum; returns (matrix, eigenbasis)."""
    vals = np.asarray(eigenvalues, dtype=float)
    u = random_unitary(rng, vals.size)
    m = u @ np.diag(vals).astype(complex) @ u.conj().T
    return (m + m.conj().T) / 2, u


# Analytic qutrit states for amplitudes (alpha, beta, gamma), built from
# the eigenprojectors of A = diag(1,1,0), B = diag(0,1,1), C = diag(0,1,0).

def state_after_direct_c(amp) -> np.ndarray:
    """P1 rho P1 + P0 rho P0 for C: keeps the (0,2) coherence block."""
    a, b, g = amp
    out = np.zeros((3, 3), dtype=complex)
    out[0, 0] = abs(a) ** 2
    out[1, 1] = abs(b) ** 2
    out[2, 2] = abs(g) ** 2
    out[0, 2] = a * np.conj(g)
    out[2, 0] = g * np.conj(a)
    return out


def state_after_a(amp) -> np.ndarray:
    """After measuring A: keeps the (0,1) coherence block."""
    a, b, g = amp
    out = np.zeros((3, 3), dtype=complex)
    out[0, 0] = abs(a) ** 2
    out[1, 1] = abs(b) ** 2
    out[2, 2] = abs(g) ** 2
    out[0, 1] = a * np.conj(b)
    out[1, 0] = b * np.conj(a)
    return out


def dephased(amp) -> np.ndarray:
    a, b, g = amp
    return np.diag([abs(a) ** 2, abs(b) ** 2, abs(g) ** 2]).astype(complex)


def oracle_trace_distance(x: np.ndarray, y: np.ndarray) -> float:
    """Independent reference via numpy's eigensolver."""
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(x - y))))
