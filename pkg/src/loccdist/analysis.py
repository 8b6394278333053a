"""Structural predicates on orthogonal product sets.

Irreducibility, extendability / unextendable product bases, the unique
completing state of an (mn-1)-element set, product-spanning subsets, and
a randomized search for sets with no aligned pair.
"""

import itertools

import numpy as np

from . import numerics
from .errors import (
    ComplementNotProduct,
    DimensionMismatch,
    EntangledVector,
    Inconsistency,
    NullspaceDimension,
    SizeLimit,
)
from .numerics import DEFAULT_TOL, inner, nullspace, rank, span
from .states import OrthogonalProductSet, ProductState, aligned_pairs

EXTENDABILITY_MAX_STATES = 20


class UnionFind:
    """Union-find over range(n) with path compression."""

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx

    def components(self):
        groups = {}
        for x in range(len(self.parent)):
            groups.setdefault(self.find(x), []).append(x)
        return list(groups.values())


class ReducibilityWitness:
    """A side and a split of its distinct local parts into two nonempty
    mutually orthogonal groups."""

    __slots__ = ("side", "part1", "part2")

    def __init__(self, side, part1, part2):
        self.side = side
        self.part1 = tuple(part1)
        self.part2 = tuple(part2)

    def __repr__(self):
        return f"<ReducibilityWitness side {self.side}: {self.part1} | {self.part2}>"


class ExtensionWitness:
    """A product state orthogonal to the whole set, plus the index subset
    whose A parts it avoids (the complement is avoided on the B side)."""

    __slots__ = ("state", "subset")

    def __init__(self, state, subset):
        self.state = state
        self.subset = tuple(subset)

    def __repr__(self):
        return f"<ExtensionWitness subset {self.subset}>"


def _side_components(ops, side):
    """Connected components of the graph on distinct local parts with an
    edge where the inner product is nonzero at tolerance."""
    _, members = ops.local_classes(side)
    gram = ops.gram_a if side == "A" else ops.gram_b
    reps = [m[0] for m in members]
    uf = UnionFind(len(reps))
    cut = ops.tol.zero_tol
    for u in range(len(reps)):
        for v in range(u + 1, len(reps)):
            if abs(gram[reps[u], reps[v]]) > cut:
                uf.union(u, v)
    return uf.components()


def reducibility_witness(ops, side=None):
    """A witness partition if the set is reducible, else None.

    Side A is inspected first; pass side='A'/'B' to restrict.
    """
    sides = ("A", "B") if side is None else (side,)
    for s in sides:
        comps = _side_components(ops, s)
        if len(comps) > 1:
            first = comps[0]
            rest = sorted(i for c in comps[1:] for i in c)
            return ReducibilityWitness(s, first, rest)
    return None


def is_irreducible(ops):
    """Neither side's distinct local parts can be split into two nonempty
    mutually orthogonal groups (both non-orthogonality graphs connected)."""
    if len(ops) < 1:
        raise DimensionMismatch("irreducibility needs at least one state")
    return reducibility_witness(ops) is None


def orthogonal_complement(ops):
    """The unique (up to phase) product state completing an (mn-1)-element
    set to a full basis.

    Raises NullspaceDimension if the joint span does not have codimension
    one, and ComplementNotProduct if the completing vector is entangled
    (which contradicts the extension theorem for such sets and therefore
    signals numerically inconsistent input).
    """
    m, n = ops.dim_a, ops.dim_b
    if len(ops) != m * n - 1:
        raise DimensionMismatch(
            f"complement needs exactly {m * n - 1} states, got {len(ops)}"
        )
    ns = nullspace(ops.tensors().conj(), ops.tol)
    if ns.dim != 1:
        raise NullspaceDimension(1, ns.dim)
    try:
        a, b = numerics.schmidt_factor(ns.vectors[0], m, n, ops.tol)
    except EntangledVector as exc:
        raise ComplementNotProduct(exc.second_singular_value) from exc
    return ProductState("complement", a, b, ops.tol)


def extension_witness(ops):
    """A product state orthogonal to every member, or None.

    Enumerates subsets S by size: a witness exists for S iff the A parts
    of S leave room on side A and the B parts of the complement leave room
    on side B. The returned witness is re-checked against the whole set.
    """
    k = len(ops)
    m, n = ops.dim_a, ops.dim_b
    if k > EXTENDABILITY_MAX_STATES:
        raise SizeLimit(
            f"extendability enumeration capped at {EXTENDABILITY_MAX_STATES} states, got {k}"
        )
    tol = ops.tol
    a_parts = [s.a for s in ops]
    b_parts = [s.b for s in ops]
    indices = range(k)
    for size in range(k + 1):
        for subset in itertools.combinations(indices, size):
            chosen = set(subset)
            span_a = span([a_parts[i] for i in subset], m, tol)
            if span_a.dim > m - 1:
                continue
            rest = [i for i in indices if i not in chosen]
            span_b = span([b_parts[i] for i in rest], n, tol)
            if span_b.dim > n - 1:
                continue
            a = span_a.orth_complement(tol).vectors[0]
            b = span_b.orth_complement(tol).vectors[0]
            state = ProductState("extension", a, b, tol)
            bad = max(
                (abs(inner(state.a, s.a) * inner(state.b, s.b)) for s in ops),
                default=0.0,
            )
            if bad > 10 * tol.zero_tol:
                raise Inconsistency(
                    f"extension witness fails orthogonality re-check ({bad:.3e})"
                )
            return ExtensionWitness(state, subset)
    return None


def is_extendable(ops):
    if len(ops) >= ops.dim_a * ops.dim_b:
        raise DimensionMismatch("extendability applies to sets smaller than a basis")
    return extension_witness(ops) is not None


def is_upb(ops):
    """True iff the set is an unextendable product basis: smaller than a
    full basis yet admitting no orthogonal product extension."""
    m, n = ops.dim_a, ops.dim_b
    if len(ops) >= m * n:
        return False
    result = not is_extendable(ops)
    if result and (m, n) == (3, 3) and len(ops) != 5:
        raise Inconsistency(
            f"a 3x3 unextendable set must have 5 elements, got {len(ops)}"
        )
    return result


def subset_spans_product_space(ops, indices):
    """True iff the chosen states span exactly (A span) x (B span)."""
    indices = sorted(indices)
    if not indices:
        raise DimensionMismatch("subset must be nonempty")
    da = rank(np.vstack([ops[i].a for i in indices]), ops.tol)
    db = rank(np.vstack([ops[i].b for i in indices]), ops.tol)
    dt = rank(ops.tensors()[indices, :], ops.tol)
    return dt == da * db


def _subset_irreducible(ops, indices):
    """Irreducibility of the sub-set, computed on cached Gram data."""
    for side in ("A", "B"):
        class_of, _ = ops.local_classes(side)
        gram = ops.gram_a if side == "A" else ops.gram_b
        classes = {}
        for i in indices:
            classes.setdefault(class_of[i], i)
        reps = list(classes.values())
        uf = UnionFind(len(reps))
        for u in range(len(reps)):
            for v in range(u + 1, len(reps)):
                if abs(gram[reps[u], reps[v]]) > ops.tol.zero_tol:
                    uf.union(u, v)
        if len(uf.components()) > 1:
            return False
    return True


def _connected_combined(ops, indices):
    """Connectivity in the combined structure: states are linked when
    either side's parts are non-orthogonal (alignment implies linkage)."""
    uf = UnionFind(len(indices))
    cut = ops.tol.zero_tol
    for u in range(len(indices)):
        for v in range(u + 1, len(indices)):
            i, j = indices[u], indices[v]
            if abs(ops.gram_a[i, j]) > cut or abs(ops.gram_b[i, j]) > cut:
                uf.union(u, v)
    return len(uf.components()) == 1


def opb_indistinguishable_general(ops):
    """Decide LOCC indistinguishability of a full product basis in any
    dimension: true iff some subset of >= 2 states is irreducible and spans
    a product space. Exhaustive over subsets, largest first."""
    m, n = ops.dim_a, ops.dim_b
    k = len(ops)
    if k != m * n:
        raise DimensionMismatch(f"expected a full basis of {m * n} states, got {k}")
    if m * n > 12:
        raise SizeLimit("full-basis subset enumeration capped at 12 states")
    indices = range(k)
    for size in range(k, 1, -1):
        for subset in itertools.combinations(indices, size):
            if not _connected_combined(ops, subset):
                continue
            if not _subset_irreducible(ops, subset):
                continue
            if subset_spans_product_space(ops, subset):
                return True
    return False


def _random_state_in(subspace, rng):
    coeff = rng.standard_normal(subspace.dim) + 1j * rng.standard_normal(subspace.dim)
    return coeff @ subspace.vectors


def find_nonaligned_set(m, n, k, trials, seed, tol=DEFAULT_TOL):
    """Randomized greedy search for an orthogonal product set of size k in
    m x n with no aligned pair. Returns a found set or None after `trials`
    attempts; exhausting the budget is evidence, not proof, of absence.

    Each greedy step picks a random split of the current set, demands the
    split leave room on both sides, and samples the new state's parts in
    the corresponding orthogonal complements; any alignment with an
    existing member aborts the attempt.
    """
    rng = np.random.default_rng(seed)
    cut = 1.0 - tol.zero_tol
    for _ in range(trials):
        parts = [
            (
                numerics.normalized(rng.standard_normal(m) + 1j * rng.standard_normal(m), tol),
                numerics.normalized(rng.standard_normal(n) + 1j * rng.standard_normal(n), tol),
            )
        ]
        while len(parts) < k:
            mask = rng.integers(0, 2, size=len(parts))
            span_a = span([parts[i][0] for i in range(len(parts)) if mask[i]], m, tol)
            span_b = span([parts[i][1] for i in range(len(parts)) if not mask[i]], n, tol)
            if span_a.dim >= m or span_b.dim >= n:
                break
            a = numerics.normalized(_random_state_in(span_a.orth_complement(tol), rng), tol)
            b = numerics.normalized(_random_state_in(span_b.orth_complement(tol), rng), tol)
            if any(
                abs(inner(a, pa)) >= cut or abs(inner(b, pb)) >= cut
                for pa, pb in parts
            ):
                break
            parts.append((a, b))
        if len(parts) == k:
            candidate = OrthogonalProductSet(
                m, n, [ProductState(f"s{i}", a, b, tol) for i, (a, b) in enumerate(parts)], tol
            )
            if not aligned_pairs(candidate):
                return candidate
    return None
