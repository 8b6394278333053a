"""Small dense complex linear algebra with an explicit tolerance policy.

All vectors and matrices are plain complex numpy arrays. Every predicate
that compares against "zero" goes through a :class:`TolerancePolicy`
threaded in by the caller; there are no module-level tolerance globals.

Conventions used throughout the package:

* inner products are conjugate-linear in the first argument;
* bipartite vectors are reshaped row-major, index = i * dim_b + j with
  i on side A;
* singular-value rank cuts are relative to the largest singular value.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    EntangledVector,
    InvalidParameter,
    ZeroVector,
)

DEFAULT_ZERO_TOL = 1e-8


@dataclass(frozen=True)
class TolerancePolicy:
    """Single numeric knob: absolute threshold for treating an inner
    product as zero, relative threshold for singular-value cuts."""

    zero_tol: float = DEFAULT_ZERO_TOL

    def __post_init__(self):
        if not 0.0 <= self.zero_tol < 1e-3:
            raise InvalidParameter(
                f"zero_tol must lie in [0, 1e-3), got {self.zero_tol!r}"
            )


DEFAULT_TOL = TolerancePolicy()


def as_vector(entries, dim=None):
    """Coerce to a 1-d complex array; optionally enforce its dimension."""
    v = np.asarray(entries, dtype=complex).reshape(-1)
    if dim is not None and v.shape[0] != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {v.shape[0]}")
    return v


def inner(u, v):
    """Inner product <u|v>, conjugate-linear in the first argument."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise DimensionMismatch(f"inner product of shapes {u.shape} and {v.shape}")
    return complex(np.vdot(u, v))


def norm(v):
    return float(np.linalg.norm(v))


def normalized(v, tol=DEFAULT_TOL):
    """Return v / ||v||; reject vectors indistinguishable from zero."""
    v = np.asarray(v, dtype=complex)
    n = np.linalg.norm(v)
    if n <= tol.zero_tol:
        raise ZeroVector(f"vector norm {n:.3e} is below tolerance")
    return v / n


def equal_up_to_phase(u, v, tol=DEFAULT_TOL):
    """True iff u = c*v for some nonzero complex c, at tolerance.

    Decided by |<u|v>| >= (1 - zero_tol) * ||u|| * ||v||.
    """
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu <= tol.zero_tol or nv <= tol.zero_tol:
        raise ZeroVector("equal_up_to_phase requires nonzero vectors")
    return abs(inner(u, v)) >= (1.0 - tol.zero_tol) * nu * nv


def canonical_phase(v):
    """Rotate the global phase so the first entry of largest magnitude is
    real and positive. Canonical form used when serializing states."""
    v = np.asarray(v, dtype=complex)
    k = int(np.argmax(np.abs(v)))
    pivot = v[k]
    if abs(pivot) == 0.0:
        return v.copy()
    return v * (abs(pivot) / pivot)


def _svd_rank(s, tol):
    """Number of singular values above the relative cut zero_tol * s_max."""
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol.zero_tol * s[0]))


def rank(matrix, tol=DEFAULT_TOL):
    """Numerical rank with the package-wide relative singular-value cut."""
    m = np.asarray(matrix, dtype=complex)
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return _svd_rank(s, tol)


class Subspace:
    """A subspace of C^d held as orthonormal basis vectors (rows).

    Instances are immutable; the zero-dimensional subspace is allowed.
    """

    __slots__ = ("vectors", "ambient_dim")

    def __init__(self, vectors, ambient_dim, tol=DEFAULT_TOL, validate=True):
        vectors = np.asarray(vectors, dtype=complex).reshape(-1, ambient_dim)
        if vectors.shape[0] > ambient_dim:
            raise DimensionMismatch(
                f"{vectors.shape[0]} basis vectors in ambient dimension {ambient_dim}"
            )
        if validate and vectors.shape[0]:
            g = vectors.conj() @ vectors.T
            if np.max(np.abs(g - np.eye(vectors.shape[0]))) > 10 * tol.zero_tol:
                raise InvalidParameter("basis is not orthonormal at tolerance")
        vectors.flags.writeable = False
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "ambient_dim", int(ambient_dim))

    def __setattr__(self, *_):
        raise AttributeError("Subspace is immutable")

    @property
    def dim(self):
        return self.vectors.shape[0]

    def __repr__(self):
        return f"<Subspace dim {self.dim} of C^{self.ambient_dim}>"

    def project(self, v):
        """Orthogonal projection of v onto the subspace."""
        v = as_vector(v, self.ambient_dim)
        if self.dim == 0:
            return np.zeros(self.ambient_dim, dtype=complex)
        return self.vectors.T @ (self.vectors.conj() @ v)

    def contains(self, v, tol=DEFAULT_TOL):
        v = as_vector(v, self.ambient_dim)
        nv = np.linalg.norm(v)
        if nv == 0.0:
            return True
        return np.linalg.norm(v - self.project(v)) <= tol.zero_tol * max(1.0, nv)

    def orth_complement(self, tol=DEFAULT_TOL):
        if self.dim == 0:
            return full_space(self.ambient_dim)
        return nullspace(self.vectors.conj(), tol)

    def intersect(self, other, tol=DEFAULT_TOL):
        """Intersection, computed via the nullspace of stacked complement
        projectors."""
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch("intersect requires matching ambient dims")
        d = self.ambient_dim
        eye = np.eye(d)
        stacked = np.vstack([eye - _projector(self), eye - _projector(other)])
        return nullspace(stacked, tol)

    def equal(self, other, tol=DEFAULT_TOL):
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch("equal requires matching ambient dims")
        if self.dim != other.dim:
            return False
        return all(self.contains(v, tol) for v in other.vectors)


def _projector(s):
    if s.dim == 0:
        return np.zeros((s.ambient_dim, s.ambient_dim), dtype=complex)
    return s.vectors.T @ s.vectors.conj()


def full_space(dim):
    return Subspace(np.eye(dim, dtype=complex), dim, validate=False)


def span(vectors, ambient_dim=None, tol=DEFAULT_TOL):
    """Orthonormalized span of the given vectors (possibly empty)."""
    vectors = [as_vector(v) for v in vectors]
    if not vectors:
        if ambient_dim is None:
            raise InvalidParameter("span of no vectors needs an ambient_dim")
        return Subspace(np.zeros((0, ambient_dim)), ambient_dim, validate=False)
    d = vectors[0].shape[0]
    if ambient_dim is not None and d != ambient_dim:
        raise DimensionMismatch(f"vectors live in C^{d}, ambient is {ambient_dim}")
    m = np.vstack(vectors)
    _, s, vh = np.linalg.svd(m, full_matrices=False)
    r = _svd_rank(s, tol)
    return Subspace(vh[:r], d, validate=False)


def nullspace(matrix, tol=DEFAULT_TOL):
    """Orthonormal basis of {v : Mv = 0}, cut at zero_tol * s_max."""
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2:
        raise DimensionMismatch("nullspace expects a matrix")
    d = m.shape[1]
    if m.shape[0] == 0:
        return full_space(d)
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    r = _svd_rank(s, tol)
    return Subspace(vh[r:].conj(), d, validate=False)


def schmidt_factor(v, dim_a, dim_b, tol=DEFAULT_TOL):
    """Factor a bipartite vector as a tensor product, or fail.

    Reshapes v row-major to dim_a x dim_b and takes the SVD; succeeds iff
    the second singular value is at most zero_tol times the first. Returns
    normalized factors (a, b), each fixed only up to phase.
    """
    v = as_vector(v)
    if v.shape[0] != dim_a * dim_b:
        raise DimensionMismatch(
            f"vector of dimension {v.shape[0]} is not {dim_a}x{dim_b}"
        )
    nv = np.linalg.norm(v)
    if nv <= tol.zero_tol:
        raise ZeroVector("cannot factor a zero vector")
    m = v.reshape(dim_a, dim_b)
    u, s, vh = np.linalg.svd(m)
    if len(s) > 1 and s[1] > tol.zero_tol * s[0]:
        raise EntangledVector(
            f"Schmidt rank >= 2 (second singular value {s[1]:.3e})",
            second_singular_value=float(s[1]),
        )
    return u[:, 0].copy(), vh[0, :].copy()


def unitary_from_rng(dim, rng):
    """Haar-ish unitary: QR of a complex Gaussian matrix with the R
    diagonal phases absorbed (Mezzadri's recipe)."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    z /= np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_unitary(dim, seed):
    """Seed-deterministic approximately-Haar unitary of the given size."""
    if dim < 1:
        raise InvalidParameter(f"dimension must be >= 1, got {dim}")
    return unitary_from_rng(dim, np.random.default_rng(seed))
