"""Small fixed-dimension complex linear algebra for two-qubit simulations.

Vectors are plain numpy arrays of ``complex128``: length 2 for a single
qubit, length 4 for the object-probe pair. The length-4 component ordering
is fixed throughout the package, object index major:

    (obj0*probe0, obj0*probe1, obj1*probe0, obj1*probe1)

Operators are 2x2 complex arrays. Everything here is a pure function of its
inputs; nothing mutates its arguments.
"""

from __future__ import annotations

import numpy as np

from .errors import UsageError

# Shared absolute tolerance for exact-arithmetic identities (normalization,
# orthogonality, Hermiticity). Callers may pass a looser/tighter value.
ATOL = 1e-12


def vec(components) -> np.ndarray:
    """Coerce to a finite complex vector of dimension 2 or 4."""
    v = np.asarray(components, dtype=complex)
    if v.ndim != 1 or v.shape[0] not in (2, 4):
        raise UsageError(f"expected a 2- or 4-component vector, got shape {v.shape}")
    if not np.all(np.isfinite(v.view(float))):
        raise UsageError("vector has non-finite components")
    return v


def inner(a, b) -> complex:
    """Inner product, conjugate-linear in the first argument."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise UsageError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def norm(a) -> float:
    return float(np.linalg.norm(np.asarray(a, dtype=complex)))


def normalize(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    n = np.linalg.norm(a)
    if n < 1e-15:
        raise UsageError("cannot normalize a (near-)zero vector")
    return a / n


def is_state(a, atol: float = ATOL) -> bool:
    """True when the vector is normalized to within ``atol``."""
    return abs(norm(a) - 1.0) <= atol


def require_state(a, atol: float = ATOL, what: str = "vector") -> np.ndarray:
    v = vec(a)
    if abs(np.linalg.norm(v) - 1.0) > atol:
        raise UsageError(f"{what} is not normalized: |norm - 1| = {abs(norm(v) - 1.0):.3e}")
    return v


def tensor(obj, probe) -> np.ndarray:
    """Tensor product of two single-qubit state vectors, object index major."""
    o = require_state(obj, what="object state")
    p = require_state(probe, what="probe state")
    if o.shape[0] != 2 or p.shape[0] != 2:
        raise UsageError("tensor expects two 2-component vectors")
    return np.kron(o, p)


def apply_to_object(op, s) -> np.ndarray:
    """Apply a 2x2 operator to the object factor of a pair state.

    Returns (op (x) identity) s, possibly unnormalized: lossy operators
    (partial polarizers) are allowed.
    """
    m = np.asarray(op, dtype=complex)
    if m.shape != (2, 2):
        raise UsageError(f"expected a 2x2 operator, got shape {m.shape}")
    v = require_state(s, what="pair state")
    if v.shape[0] != 4:
        raise UsageError("apply_to_object expects a 4-component state")
    return (m @ v.reshape(2, 2)).ravel()


def is_hermitian(op, atol: float = ATOL) -> bool:
    m = np.asarray(op, dtype=complex)
    return m.shape == (2, 2) and bool(np.allclose(m, m.conj().T, rtol=0.0, atol=atol))


def is_unitary(op, atol: float = ATOL) -> bool:
    m = np.asarray(op, dtype=complex)
    return m.shape == (2, 2) and bool(
        np.allclose(m @ m.conj().T, np.eye(2), rtol=0.0, atol=atol)
    )
