"""Shared test utilities."""

import numpy as np

from loccdist.numerics import unitary_from_rng
from loccdist.states import OrthogonalProductSet, ProductState


def conjugate(ops, w_a, w_b):
    """Apply the local unitaries W_A (x) W_B to every state."""
    return OrthogonalProductSet(
        ops.dim_a,
        ops.dim_b,
        [ProductState(s.label, w_a @ s.a, w_b @ s.b, ops.tol) for s in ops],
        ops.tol,
    )


def random_phases(ops, rng):
    """Multiply each state's parts by independent unit complex scalars."""
    def phase():
        return np.exp(2j * np.pi * rng.random())

    return OrthogonalProductSet(
        ops.dim_a,
        ops.dim_b,
        [ProductState(s.label, phase() * s.a, phase() * s.b, ops.tol) for s in ops],
        ops.tol,
    )


def random_local_unitaries(dim_a, dim_b, rng):
    return unitary_from_rng(dim_a, rng), unitary_from_rng(dim_b, rng)


def computational_basis(m, n, tol=None):
    ea = np.eye(m, dtype=complex)
    eb = np.eye(n, dtype=complex)
    kwargs = {} if tol is None else {"tol": tol}
    return OrthogonalProductSet(
        m,
        n,
        [
            ProductState(f"e{i}{j}", ea[i], eb[j], **kwargs)
            for i in range(m)
            for j in range(n)
        ],
        **kwargs,
    )
