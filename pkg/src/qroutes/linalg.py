"""Dense complex linear algebra for small Hilbert spaces.

Matrices are square numpy arrays of ``complex128``. All tolerances default
to 1e-10 and can be overridden per call. Eigendecomposition is a cyclic
Jacobi iteration with complex rotations, so results are deterministic for
identical input bytes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DimensionError, HermiticityError

# Composite spaces beyond this are refused rather than silently built.
MAX_DIM = 1024

_JACOBI_SWEEPS = 60


def as_matrix(m) -> np.ndarray:
    """Coerce to a square complex matrix, rejecting anything else."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DimensionError("matrix contains non-finite entries")
    return a


def matmul(a, b) -> np.ndarray:
    """Matrix product of two operators on the same space."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return a @ b


def adjoint(m) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(m).conj().T


def tensor(a, b) -> np.ndarray:
    """Kronecker product; the left factor indexes the coarse blocks."""
    a = as_matrix(a)
    b = as_matrix(b)
    dim = a.shape[0] * b.shape[0]
    if dim > MAX_DIM:
        raise CapacityError(f"composite dimension {dim} exceeds the {MAX_DIM} limit")
    return np.kron(a, b)


def partial_trace(m, dims, keep: int) -> np.ndarray:
    """Trace out every tensor factor except ``dims[keep]``.

    ``dims`` lists the factor dimensions of the space ``m`` acts on, in
    tensor order (left factor first).
    """
    m = as_matrix(m)
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims):
        raise DimensionError(f"factor dimensions must be positive, got {dims}")
    total = int(np.prod(dims))
    if total != m.shape[0]:
        raise DimensionError(
            f"factor dimensions {dims} give {total}, matrix has dimension {m.shape[0]}"
        )
    if not 0 <= keep < len(dims):
        raise DimensionError(f"keep index {keep} out of range for {len(dims)} factors")
    pre = int(np.prod(dims[:keep], initial=1))
    d = dims[keep]
    post = int(np.prod(dims[keep + 1:], initial=1))
    t = m.reshape(pre, d, post, pre, d, post)
    return np.einsum("aibajb->ij", t)


def hermiticity_defect(m) -> float:
    """Max-norm distance from a matrix to its own adjoint."""
    m = as_matrix(m)
    return float(np.max(np.abs(m - m.conj().T), initial=0.0))


def hermitian_part(m) -> np.ndarray:
    """Project onto the Hermitian part, (m + m†)/2."""
    m = as_matrix(m)
    return (m + m.conj().T) / 2


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """One Jacobi rotation zeroing a[p, q], applied in place to a and v."""
    h = a[p, q]
    absh = abs(h)
    phase = h / absh
    tau = (a[p, p].real - a[q, q].real) / (2.0 * absh)
    # smaller root of t^2 + 2*tau*t - 1 = 0 keeps the rotation angle <= pi/4
    if tau >= 0.0:
        t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
    else:
        t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c * np.conj(phase)
    for mat in (a, v):
        colp = mat[:, p] * c + mat[:, q] * s
        colq = mat[:, q] * c - mat[:, p] * np.conj(s)
        mat[:, p] = colp
        mat[:, q] = colq
    rowp = a[p, :] * c + a[q, :] * np.conj(s)
    rowq = a[q, :] * c - a[p, :] * s
    a[p, :] = rowp
    a[q, :] = rowq


def _first_nonzero(v: np.ndarray) -> int:
    cut = 1e-8 * float(np.max(np.abs(v), initial=0.0))
    for i, x in enumerate(v):
        if abs(x) > cut:
            return i
    return 0


def hermitian_eigendecomposition(m, tol: float = 1e-10) -> list[tuple[float, np.ndarray]]:
    """Full eigensystem of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``[(eigenvalue, eigenvector), ...]`` sorted by descending
    eigenvalue. Ties are ordered by the index of the first nonzero
    eigenvector component, and each eigenvector's phase is fixed so that
    component is real and positive.

    Raises HermiticityError when ``max |m - m†| > tol``.
    """
    m = as_matrix(m)
    defect = hermiticity_defect(m)
    if defect > tol:
        raise HermiticityError(f"max |m - m†| = {defect:.3e} exceeds tolerance {tol:.3e}")
    a = hermitian_part(m)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(float(np.max(np.abs(a), initial=0.0)), 1e-300)
    conv = 1e-14 * scale
    for _ in range(_JACOBI_SWEEPS):
        off = max(
            (float(np.max(np.abs(a[p, p + 1:]))) for p in range(n - 1)),
            default=0.0,
        )
        if off <= conv:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) > conv * 1e-3:
                    _rotate(a, v, p, q)
    else:
        raise ArithmeticError("Jacobi iteration did not converge")
    vals = np.diag(a).real
    pairs = []
    for i in range(n):
        vec = v[:, i].copy()
        j = _first_nonzero(vec)
        ph = vec[j] / abs(vec[j])
        vec *= np.conj(ph)
        pairs.append((float(vals[i]), j, vec))
    pairs.sort(key=lambda item: (-item[0], item[1]))
    return [(val, vec) for val, _, vec in pairs]


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated quantum state: Hermitian, unit trace, positive.

    Construction rejects anything violating those invariants within 1e-10
    (eigenvalues may dip to -1e-10 from rounding).
    """

    mat: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.mat)
        defect = hermiticity_defect(m)
        if defect > 1e-10:
            raise HermiticityError(
                f"density matrix not Hermitian: max |m - m†| = {defect:.3e}"
            )
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > 1e-10:
            raise ValueError(f"density matrix trace deviates from 1 by {abs(tr - 1.0):.3e}")
        low = min(val for val, _ in hermitian_eigendecomposition(m))
        if low < -1e-10:
            raise ValueError(f"density matrix has negative eigenvalue {low:.3e}")
        m = hermitian_part(m)
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @classmethod
    def pure(cls, vector) -> "DensityMatrix":
        """Projector onto a normalized state vector."""
        v = np.asarray(vector, dtype=complex).reshape(-1)
        return cls(np.outer(v, v.conj()))


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    """Half the sum of |eigenvalues| of a - b; 0 iff the states agree."""
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    vals = [val for val, _ in hermitian_eigendecomposition(a.mat - b.mat)]
    d = 0.5 * float(np.sum(np.abs(vals)))
    return min(max(d, 0.0), 1.0)
