"""Built-in, seed-deterministic state families used throughout the tests
and exposed by the CLI.

* ``b9`` / ``b8``: the 3x3 domino basis built on the pinwheel (Hadamards
  on the four dominoes) and the same basis with its center state removed.
* ``theta_2x4``: a one-parameter 2x4 basis that admits a rectangular
  representation only at theta = pi/4.
* ``rect_random`` / ``class3_random``: bases realized from seeded random
  rectangle unitaries, and their center-removed class-3 instances.
* ``upb_example``: the tiles-style five-state unextendable set, verified
  unextendable at construction.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import analysis, classify, rectrep
from .errors import Inconsistency, InvalidParameter
from .numerics import DEFAULT_TOL, unitary_from_rng
from .states import OrthogonalProductSet, ProductState


def _hadamard():
    return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def b9_representation(tol=DEFAULT_TOL):
    """The pinwheel representation whose realization is the domino basis:
    computational bases, Hadamards on the four dominoes."""
    one = np.eye(1, dtype=complex)
    h = _hadamard()
    unitaries = [(one, h), (h, one), (one, h), (h, one), (one, one)]
    return rectrep.RectRepresentation(
        rectrep.r9(), np.eye(3, dtype=complex), np.eye(3, dtype=complex), unitaries, tol
    )


def b9(tol=DEFAULT_TOL):
    labels = [f"phi{k}" for k in range(1, 10)]
    return rectrep.realize(b9_representation(tol), labels, tol)


def b9_minus(label, tol=DEFAULT_TOL):
    full = b9(tol)
    if label not in full.labels:
        raise InvalidParameter(f"no such state {label!r}; labels are phi1..phi9")
    return full.subset([i for i, s in enumerate(full) if s.label != label])


def b8(tol=DEFAULT_TOL):
    """The domino basis minus its center state |1>|1>."""
    return b9_minus("phi9", tol)


def theta_2x4(theta, tol=DEFAULT_TOL):
    """Eight-state 2x4 basis with one pair of local bases rotated by theta.

    Valid for every theta in (0, pi/2); it has a rectangular
    representation exactly at theta = pi/4.
    """
    if not 0.0 < theta < math.pi / 2:
        raise InvalidParameter(f"theta must lie in (0, pi/2), got {theta}")
    c, s = math.cos(theta), math.sin(theta)
    r = 1 / math.sqrt(2)
    e = np.eye(4, dtype=complex)
    zero = np.array([1, 0], dtype=complex)
    one = np.array([0, 1], dtype=complex)
    plus = np.array([r, r], dtype=complex)
    minus = np.array([r, -r], dtype=complex)
    parts = [
        (zero, e[0] + e[1]),
        (zero, e[0] - e[1]),
        (one, c * e[0] + s * e[1]),
        (one, s * e[0] - c * e[1]),
        (plus, e[2] + e[3]),
        (plus, e[2] - e[3]),
        (minus, c * e[2] + s * e[3]),
        (minus, s * e[2] - c * e[3]),
    ]
    return OrthogonalProductSet(
        2,
        4,
        [ProductState(f"psi{k + 1}", a, b, tol) for k, (a, b) in enumerate(parts)],
        tol,
    )


def rect_random_representation(seed, decomp=None, tol=DEFAULT_TOL):
    """Representation with seeded random rectangle unitaries over the
    computational bases; the pinwheel decomposition by default."""
    if decomp is None:
        decomp = rectrep.r9()
    rng = np.random.default_rng(seed)
    unitaries = [
        (unitary_from_rng(len(rows), rng), unitary_from_rng(len(cols), rng))
        for rows, cols in decomp.rectangles
    ]
    return rectrep.RectRepresentation(
        decomp,
        np.eye(decomp.n_rows, dtype=complex),
        np.eye(decomp.n_cols, dtype=complex),
        unitaries,
        tol,
    )


def rect_random(seed, decomp=None, tol=DEFAULT_TOL):
    """The basis realized by rect_random_representation(seed)."""
    return rectrep.realize(rect_random_representation(seed, decomp, tol), tol=tol)


def class3_random(seed, tol=DEFAULT_TOL):
    """Seeded eight-state class-3 instance: a random pinwheel basis minus
    its center state, resampled until the class-3 predicate holds (an
    accidental alignment has probability zero, so the first draw almost
    always works)."""
    for attempt in range(64):
        full = rect_random(seed + attempt, tol=tol)
        # the center state sits in the last rectangle, so it is emitted last
        reduced = full.subset(range(8))
        if classify.class3_predicate(reduced):
            return reduced
    raise Inconsistency(f"no class-3 instance found near seed {seed}")


def tiles_upb(tol=DEFAULT_TOL):
    """The tiles-style five-state unextendable set in 3x3, checked
    unextendable at construction rather than assumed."""
    e = np.eye(3, dtype=complex)
    r = 1 / math.sqrt(2)
    u = np.ones(3, dtype=complex) / math.sqrt(3)
    parts = [
        (e[0], r * (e[0] - e[1])),
        (e[2], r * (e[1] - e[2])),
        (r * (e[0] - e[1]), e[2]),
        (r * (e[1] - e[2]), e[0]),
        (u, u),
    ]
    ops = OrthogonalProductSet(
        3,
        3,
        [ProductState(f"t{k + 1}", a, b, tol) for k, (a, b) in enumerate(parts)],
        tol,
    )
    if not analysis.is_upb(ops):
        raise Inconsistency("tiles-style set unexpectedly extendable")
    return ops


@dataclass(frozen=True)
class FamilySpec:
    """Parsed family request: a name plus whichever parameters it takes."""

    name: str
    label: str = None
    theta: float = None
    seed: int = None


def family(spec, tol=DEFAULT_TOL):
    """Instantiate a named family."""
    name = spec.name
    if name == "b9":
        return b9(tol)
    if name == "b8":
        return b8(tol)
    if name == "b9_minus":
        if spec.label is None:
            raise InvalidParameter("b9_minus needs a label, e.g. b9_minus:phi1")
        return b9_minus(spec.label, tol)
    if name == "theta_2x4":
        if spec.theta is None:
            raise InvalidParameter("theta_2x4 needs --theta")
        return theta_2x4(spec.theta, tol)
    if name == "rect_random":
        if spec.seed is None:
            raise InvalidParameter("rect_random needs --seed")
        return rect_random(spec.seed, tol=tol)
    if name == "class3_random":
        if spec.seed is None:
            raise InvalidParameter("class3_random needs --seed")
        return class3_random(spec.seed, tol)
    if name == "upb_example":
        return tiles_upb(tol)
    raise InvalidParameter(f"unknown family {name!r}")


def family_from_string(text, seed=None, theta=None):
    """Parse 'name' or 'name:param' as used by the CLI."""
    name, _, param = str(text).partition(":")
    if name == "b9_minus":
        return FamilySpec(name, label=param or None, theta=theta, seed=seed)
    if param:
        raise InvalidParameter(f"family {name!r} takes no ':' parameter")
    return FamilySpec(name, theta=theta, seed=seed)
