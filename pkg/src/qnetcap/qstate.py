"""Dense complex-matrix quantum states: construction, composition, reduction,
spectra, and trace distance.

Values are validated on construction and immutable afterwards.  Inputs that
fail the Hermiticity / trace / positivity tolerances are rejected rather than
repaired: silent symmetrization hides modeling bugs upstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = -1e-10


class InvariantError(ValueError):
    """A numerical invariant failed (non-PSD state, negative information, ...)."""


def _as_complex_matrix(entries) -> np.ndarray:
    m = np.array(entries, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvariantError(f"expected a square matrix, got shape {m.shape}")
    return m


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, PSD, unit-trace matrix tagged with its subsystem dimensions.

    ``dims`` is the ordered list of subsystem dimensions whose product equals
    the matrix size; it is carried on the value (not inferred) so that
    partial traces are unambiguous.
    """

    entries: np.ndarray
    dims: tuple[int, ...]

    def __init__(self, entries, dims):
        m = _as_complex_matrix(entries)
        dims = tuple(int(d) for d in dims)
        if any(d < 1 for d in dims):
            raise InvariantError(f"subsystem dimensions must be positive: {dims}")
        if int(np.prod(dims)) != m.shape[0]:
            raise InvariantError(
                f"dims {dims} have product {int(np.prod(dims))}, "
                f"matrix has size {m.shape[0]}"
            )
        herm_defect = np.max(np.abs(m - m.conj().T))
        if herm_defect > HERMITICITY_TOL:
            raise InvariantError(f"matrix is not Hermitian: defect {herm_defect:.3e}")
        trace_defect = abs(m.trace() - 1.0)
        if trace_defect > TRACE_TOL:
            raise InvariantError(f"trace differs from 1 by {trace_defect:.3e}")
        min_eig = float(np.linalg.eigvalsh(m)[0])
        if min_eig < PSD_TOL:
            raise InvariantError(f"matrix is not PSD: min eigenvalue {min_eig:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __eq__(self, other):
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return self.dims == other.dims and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.dims, self.entries.tobytes()))


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues in nonincreasing order with the matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        self.eigenvalues.setflags(write=False)
        self.eigenvectors.setflags(write=False)


def pure_state(vector, dims=None) -> DensityMatrix:
    """Density matrix |v><v| of a (normalized up to 1e-10) state vector."""
    v = np.array(vector, dtype=complex).reshape(-1)
    if dims is None:
        dims = (v.size,)
    return DensityMatrix(np.outer(v, v.conj()), dims)


def tensor_product(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    """Kronecker product; subsystem dims concatenate."""
    return DensityMatrix(np.kron(a.entries, b.entries), a.dims + b.dims)


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Trace out all subsystems not listed in ``keep`` (indices into dims).

    The kept subsystems stay in their original order.
    """
    keep = sorted(set(int(k) for k in keep))
    n = len(rho.dims)
    if not keep:
        raise InvariantError("keep must name at least one subsystem")
    if any(k < 0 or k >= n for k in keep):
        raise InvariantError(f"keep indices {keep} out of range for {n} subsystems")
    drop = [i for i in range(n) if i not in keep]
    t = rho.entries.reshape(rho.dims + rho.dims)
    dims = list(rho.dims)
    # trace from the highest index down so earlier positions do not shift
    for idx in sorted(drop, reverse=True):
        t = np.trace(t, axis1=idx, axis2=idx + len(dims))
        dims.pop(idx)
    d = int(np.prod(dims))
    return DensityMatrix(t.reshape(d, d), dims)


def eig_hermitian(rho: DensityMatrix) -> Spectrum:
    """Spectral decomposition with eigenvalues sorted nonincreasing."""
    vals, vecs = np.linalg.eigh(rho.entries)
    order = np.argsort(vals)[::-1]
    return Spectrum(vals[order].copy(), vecs[:, order].copy())


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    """Trace norm of the difference: sum of |eigenvalues| of (a - b).

    Ranges over [0, 2]; perfectly distinguishable states sit at 2.
    """
    if a.dims != b.dims:
        raise InvariantError(f"dimension mismatch: {a.dims} vs {b.dims}")
    diff = a.entries - b.entries
    return float(np.sum(np.abs(np.linalg.eigvalsh(diff))))


def matrix_to_json(m: np.ndarray) -> list:
    """Row-major list of [re, im] pairs.

    Signed zeros are normalized to +0.0 so serialization is stable under a
    load/dump round trip.
    """
    flat = np.asarray(m, dtype=complex).reshape(-1)
    return [[float(z.real) + 0.0, float(z.imag) + 0.0] for z in flat]


def matrix_from_json(pairs, size: int) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    if arr.shape != (size * size, 2):
        raise InvariantError(
            f"matrix encoding has shape {arr.shape}, expected ({size * size}, 2)"
        )
    return (arr[:, 0] + 1j * arr[:, 1]).reshape(size, size)


def density_matrix_to_json(rho: DensityMatrix) -> dict:
    return {"dims": list(rho.dims), "entries": matrix_to_json(rho.entries)}


def density_matrix_from_json(doc: dict) -> DensityMatrix:
    dims = tuple(int(d) for d in doc["dims"])
    size = int(np.prod(dims))
    return DensityMatrix(matrix_from_json(doc["entries"], size), dims)
