"""Product states and orthogonal product sets.

The unit of analysis is :class:`OrthogonalProductSet`: a validated,
ordered collection of labeled bipartite product states over fixed local
dimensions. States are stored factored and normalized; global phases are
never canonicalized in memory, only on serialization.
"""

import json

import numpy as np

from . import numerics
from .errors import (
    DimensionMismatch,
    DuplicateState,
    EntangledVector,
    MalformedInput,
    NotOrthogonal,
)
from .numerics import DEFAULT_TOL, TolerancePolicy, as_vector, inner, normalized


class ProductState:
    """A labeled product state |a> (x) |b|, both parts stored normalized."""

    __slots__ = ("label", "a", "b")

    def __init__(self, label, a, b, tol=DEFAULT_TOL):
        a = normalized(as_vector(a), tol)
        b = normalized(as_vector(b), tol)
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "label", str(label))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __setattr__(self, *_):
        raise AttributeError("ProductState is immutable")

    @property
    def dims(self):
        return (self.a.shape[0], self.b.shape[0])

    def tensor(self):
        """Row-major m*n joint vector; index = i * dim_b + j."""
        return np.kron(self.a, self.b)

    def __repr__(self):
        return f"<ProductState {self.label!r} in {self.dims[0]}x{self.dims[1]}>"


def tensor(state):
    return state.tensor()


class OrthogonalProductSet:
    """Pairwise-orthogonal product states over fixed dimensions (m, n).

    Validation at construction enforces: unique labels, pairwise
    orthogonality |<a_i|a_j><b_i|b_j>| <= zero_tol, and no two states
    globally equal up to phase. Immutable afterwards; derived data (Gram
    matrices, local-part equivalence classes, joint vectors) is cached.
    """

    def __init__(self, dim_a, dim_b, states, tol=DEFAULT_TOL):
        dim_a = int(dim_a)
        dim_b = int(dim_b)
        if dim_a < 1 or dim_b < 1:
            raise DimensionMismatch("local dimensions must be positive")
        states = tuple(states)
        for k, s in enumerate(states):
            if s.dims != (dim_a, dim_b):
                raise DimensionMismatch(
                    f"state {k} ({s.label!r}) has dims {s.dims}, set is {dim_a}x{dim_b}"
                )
        labels = [s.label for s in states]
        seen = {}
        for k, lab in enumerate(labels):
            if lab in seen:
                raise DuplicateState(seen[lab], k, f"duplicate label {lab!r}")
            seen[lab] = k

        ga = np.array([[inner(si.a, sj.a) for sj in states] for si in states])
        gb = np.array([[inner(si.b, sj.b) for sj in states] for si in states])
        k = len(states)
        for i in range(k):
            for j in range(i + 1, k):
                residual = abs(ga[i, j] * gb[i, j])
                if residual > tol.zero_tol:
                    raise NotOrthogonal(i, j, residual)
                if (
                    abs(ga[i, j]) >= (1.0 - tol.zero_tol)
                    and abs(gb[i, j]) >= (1.0 - tol.zero_tol)
                ):
                    raise DuplicateState(i, j)

        self._dim_a = dim_a
        self._dim_b = dim_b
        self._states = states
        self._tol = tol
        self._gram_a = ga
        self._gram_b = gb
        self._tensors = None
        self._classes = {}

    @property
    def dim_a(self):
        return self._dim_a

    @property
    def dim_b(self):
        return self._dim_b

    @property
    def states(self):
        return self._states

    @property
    def tol(self):
        return self._tol

    @property
    def gram_a(self):
        """Gram matrix of the A parts, <a_i|a_j>."""
        return self._gram_a

    @property
    def gram_b(self):
        return self._gram_b

    @property
    def labels(self):
        return [s.label for s in self._states]

    def __len__(self):
        return len(self._states)

    def __getitem__(self, k):
        return self._states[k]

    def __iter__(self):
        return iter(self._states)

    def __repr__(self):
        return f"<OrthogonalProductSet {len(self)} states in {self._dim_a}x{self._dim_b}>"

    def index_of(self, label):
        for k, s in enumerate(self._states):
            if s.label == label:
                return k
        raise KeyError(f"no state labeled {label!r}")

    def tensors(self):
        """Stacked joint vectors, one row per state (cached)."""
        if self._tensors is None:
            if len(self):
                t = np.vstack([s.tensor() for s in self._states])
            else:
                t = np.zeros((0, self._dim_a * self._dim_b), dtype=complex)
            t.flags.writeable = False
            self._tensors = t
        return self._tensors

    def local_classes(self, side):
        """Equivalence classes of local parts under equality-up-to-phase.

        Returns (class_of, members): class_of[i] is the class index of
        state i, members[c] lists state indices in input order. Classes are
        numbered by first occurrence.
        """
        side = _check_side(side)
        if side not in self._classes:
            gram = self._gram_a if side == "A" else self._gram_b
            cut = 1.0 - self._tol.zero_tol
            class_of = []
            members = []
            reps = []
            for i in range(len(self)):
                for c, r in enumerate(reps):
                    if abs(gram[r, i]) >= cut:
                        class_of.append(c)
                        members[c].append(i)
                        break
                else:
                    class_of.append(len(reps))
                    members.append([i])
                    reps.append(i)
            self._classes[side] = (
                tuple(class_of),
                tuple(tuple(m) for m in members),
            )
        return self._classes[side]

    def subset(self, indices):
        """New validated set containing the selected states, in order."""
        return OrthogonalProductSet(
            self._dim_a,
            self._dim_b,
            [self._states[i] for i in indices],
            self._tol,
        )

    def swapped(self):
        """The same states with the two parties exchanged."""
        return OrthogonalProductSet(
            self._dim_b,
            self._dim_a,
            [ProductState(s.label, s.b, s.a, self._tol) for s in self._states],
            self._tol,
        )


def _check_side(side):
    s = str(side).upper()
    if s not in ("A", "B"):
        raise MalformedInput(f"side must be 'A' or 'B', got {side!r}")
    return s


class SideSet:
    """Distinct local parts of one side and which states carry each."""

    __slots__ = ("side", "members", "occurrences")

    def __init__(self, side, members, occurrences):
        self.side = side
        self.members = tuple(members)
        self.occurrences = tuple(tuple(o) for o in occurrences)

    def __len__(self):
        return len(self.members)

    def __repr__(self):
        return f"<SideSet {self.side}: {len(self.members)} members>"


def side_set(ops, side):
    """Equivalence classes of the local parts on one side, in first
    occurrence order."""
    side = _check_side(side)
    _, members = ops.local_classes(side)
    vectors = [
        ops[occ[0]].a if side == "A" else ops[occ[0]].b for occ in members
    ]
    return SideSet(side, vectors, members)


def aligned_pairs(ops):
    """All unordered state pairs sharing a local part up to phase.

    Returns (i, j, side) triples with i < j and side in {'left','right'},
    sorted by (i, j); 'left' means the A parts coincide.
    """
    class_a, _ = ops.local_classes("A")
    class_b, _ = ops.local_classes("B")
    out = []
    k = len(ops)
    for i in range(k):
        for j in range(i + 1, k):
            if class_a[i] == class_a[j]:
                out.append((i, j, "left"))
            if class_b[i] == class_b[j]:
                out.append((i, j, "right"))
    return out


# ---------------------------------------------------------------------------
# States file (JSON) I/O


def _parse_complex(x, where):
    if isinstance(x, (int, float)):
        return complex(x)
    if (
        isinstance(x, (list, tuple))
        and len(x) == 2
        and all(isinstance(p, (int, float)) for p in x)
    ):
        return complex(x[0], x[1])
    raise MalformedInput(f"{where}: expected [re, im] pair or real number, got {x!r}")


def _parse_vector(entries, where):
    if not isinstance(entries, list) or not entries:
        raise MalformedInput(f"{where}: expected a nonempty list of entries")
    return np.array([_parse_complex(x, where) for x in entries], dtype=complex)


def parse_states(text):
    """Parse and validate a states file (JSON, UTF-8).

    States may be given factored ("a", "b") or as a full row-major "vec";
    the factored form is authoritative when both are present, with a 1e-6
    consistency check against the full vector.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedInput("top level must be a JSON object")
    try:
        dim_a = int(doc["dims"]["a"])
        dim_b = int(doc["dims"]["b"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput("missing or malformed 'dims': expected {'a': m, 'b': n}") from exc
    tol = TolerancePolicy(float(doc.get("tolerance", numerics.DEFAULT_ZERO_TOL)))
    raw_states = doc.get("states")
    if not isinstance(raw_states, list):
        raise MalformedInput("'states' must be a list")

    states = []
    for k, entry in enumerate(raw_states):
        if not isinstance(entry, dict):
            raise MalformedInput(f"state {k}: expected an object")
        label = entry.get("label", f"s{k}")
        where = f"state {k} ({label!r})"
        has_parts = "a" in entry or "b" in entry
        if has_parts:
            if "a" not in entry or "b" not in entry:
                raise MalformedInput(f"{where}: factored form needs both 'a' and 'b'")
            a = _parse_vector(entry["a"], where + " field 'a'")
            b = _parse_vector(entry["b"], where + " field 'b'")
            if a.shape[0] != dim_a or b.shape[0] != dim_b:
                raise DimensionMismatch(
                    f"{where}: parts have dims ({a.shape[0]}, {b.shape[0]}), "
                    f"file declares ({dim_a}, {dim_b})"
                )
            state = ProductState(label, a, b, tol)
            if "vec" in entry:
                vec = _parse_vector(entry["vec"], where + " field 'vec'")
                if vec.shape[0] != dim_a * dim_b:
                    raise DimensionMismatch(f"{where}: 'vec' has wrong dimension")
                overlap = abs(inner(state.tensor(), normalized(vec, tol)))
                if overlap < 1.0 - 1e-6:
                    raise MalformedInput(
                        f"{where}: 'vec' disagrees with factored parts "
                        f"(overlap {overlap:.8f})"
                    )
        elif "vec" in entry:
            vec = _parse_vector(entry["vec"], where + " field 'vec'")
            if vec.shape[0] != dim_a * dim_b:
                raise DimensionMismatch(
                    f"{where}: 'vec' has dimension {vec.shape[0]}, expected {dim_a * dim_b}"
                )
            try:
                a, b = numerics.schmidt_factor(vec, dim_a, dim_b, tol)
            except EntangledVector as exc:
                raise EntangledVector(
                    f"{where}: {exc}", exc.second_singular_value
                ) from exc
            state = ProductState(label, a, b, tol)
        else:
            raise MalformedInput(f"{where}: needs either 'a'/'b' or 'vec'")
        states.append(state)

    return OrthogonalProductSet(dim_a, dim_b, states, tol)


def _vector_json(v):
    v = numerics.canonical_phase(v)
    return [[float(x.real), float(x.imag)] for x in v]


def states_to_json(ops):
    """JSON-able dict in the states-file schema (factored, normalized,
    phase-canonicalized)."""
    return {
        "dims": {"a": ops.dim_a, "b": ops.dim_b},
        "tolerance": ops.tol.zero_tol,
        "states": [
            {"label": s.label, "a": _vector_json(s.a), "b": _vector_json(s.b)}
            for s in ops
        ],
    }


def serialize_states(ops):
    return json.dumps(states_to_json(ops), indent=2)
