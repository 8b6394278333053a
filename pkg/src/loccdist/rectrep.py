"""Rectangular decompositions and representations of product bases.

A representation consists of a tiling of the m x n index grid by
combinatorial rectangles, local orthonormal bases for both sides, and one
local unitary pair per rectangle; the basis it realizes has one state per
grid cell. The module provides the canonical five-rectangle pinwheel of
the 3x3 grid, a verifier, a constructive builder that succeeds on every
irreducible 3x3 product basis, and a brute-force existence search for
small grids.
"""

import itertools
import json
from collections import Counter

import numpy as np

from .analysis import is_irreducible
from .errors import (
    DimensionMismatch,
    InvalidParameter,
    InvalidRepresentation,
    LoccError,
    MalformedInput,
    NotIrreducible,
    SizeLimit,
    StructureViolation,
)
from .numerics import DEFAULT_TOL, Subspace, full_space, inner, span
from .states import OrthogonalProductSet, ProductState, aligned_pairs

REP_TOL_FACTOR = 10  # slack factor on orthonormality/unitarity checks


class RectDecomposition:
    """A partition of the n_rows x n_cols grid into combinatorial
    rectangles (each a full Cartesian product of a row set and a column
    set; the sets need not be contiguous)."""

    __slots__ = ("n_rows", "n_cols", "rectangles")

    def __init__(self, n_rows, n_cols, rectangles):
        n_rows = int(n_rows)
        n_cols = int(n_cols)
        rects = []
        for rows, cols in rectangles:
            rows = tuple(sorted(int(r) for r in rows))
            cols = tuple(sorted(int(c) for c in cols))
            if not rows or not cols:
                raise InvalidParameter("empty rectangle")
            if rows[0] < 0 or rows[-1] >= n_rows or cols[0] < 0 or cols[-1] >= n_cols:
                raise InvalidParameter(f"rectangle {rows}x{cols} leaves the grid")
            rects.append((rows, cols))
        covered = set()
        for rows, cols in rects:
            for cell in itertools.product(rows, cols):
                if cell in covered:
                    raise InvalidParameter(f"cell {cell} covered twice")
                covered.add(cell)
        if len(covered) != n_rows * n_cols:
            raise InvalidParameter("rectangles do not cover the grid")
        self.n_rows = n_rows
        self.n_cols = n_cols
        self.rectangles = tuple(rects)

    def __len__(self):
        return len(self.rectangles)

    def __eq__(self, other):
        return (
            isinstance(other, RectDecomposition)
            and self.n_rows == other.n_rows
            and self.n_cols == other.n_cols
            and frozenset(self.rectangles) == frozenset(other.rectangles)
        )

    def __hash__(self):
        return hash((self.n_rows, self.n_cols, frozenset(self.rectangles)))

    def __repr__(self):
        body = ", ".join(f"{list(r)}x{list(c)}" for r, c in self.rectangles)
        return f"<RectDecomposition {self.n_rows}x{self.n_cols}: {body}>"

    def cells(self, k):
        rows, cols = self.rectangles[k]
        return [(i, j) for i in rows for j in cols]

    def rect_containing(self, cell):
        i, j = cell
        for k, (rows, cols) in enumerate(self.rectangles):
            if i in rows and j in cols:
                return k
        raise InvalidParameter(f"cell {cell} outside the grid")

    def shape_multiset(self):
        return tuple(sorted((len(r), len(c)) for r, c in self.rectangles))


def r9():
    """The five-rectangle pinwheel of the 3x3 grid: four dominoes around a
    central single cell. Invariant under the quarter turn
    (i, j) -> (j, 2 - i)."""
    return RectDecomposition(
        3,
        3,
        [
            ((0,), (0, 1)),
            ((0, 1), (2,)),
            ((2,), (1, 2)),
            ((1, 2), (0,)),
            ((1,), (1,)),
        ],
    )


class RectRepresentation:
    """Decomposition + local orthonormal bases + per-rectangle unitaries.

    ``basis_a``/``basis_b`` hold the basis vectors as rows. Each unitary
    pair (U, V) is stored in the coordinates of the basis restricted to
    the rectangle's row/column sets, in listed (sorted-index) order.
    """

    __slots__ = ("decomp", "basis_a", "basis_b", "unitaries")

    def __init__(self, decomp, basis_a, basis_b, unitaries, tol=DEFAULT_TOL):
        basis_a = np.asarray(basis_a, dtype=complex)
        basis_b = np.asarray(basis_b, dtype=complex)
        m, n = decomp.n_rows, decomp.n_cols
        if basis_a.shape != (m, m) or basis_b.shape != (n, n):
            raise InvalidRepresentation(
                f"bases must be {m}x{m} and {n}x{n}, got {basis_a.shape} and {basis_b.shape}"
            )
        slack = REP_TOL_FACTOR * tol.zero_tol
        for name, basis in (("basis_a", basis_a), ("basis_b", basis_b)):
            g = basis.conj() @ basis.T
            if np.max(np.abs(g - np.eye(len(basis)))) > slack:
                raise InvalidRepresentation(f"{name} is not orthonormal at tolerance")
        unitaries = tuple((np.asarray(u, dtype=complex), np.asarray(v, dtype=complex))
                          for u, v in unitaries)
        if len(unitaries) != len(decomp):
            raise InvalidRepresentation("one unitary pair per rectangle required")
        for k, (u, v) in enumerate(unitaries):
            rows, cols = decomp.rectangles[k]
            if u.shape != (len(rows), len(rows)) or v.shape != (len(cols), len(cols)):
                raise InvalidRepresentation(
                    f"rectangle {k}: unitary shapes {u.shape}/{v.shape} do not match "
                    f"{len(rows)}x{len(cols)}"
                )
            for name, w in (("U", u), ("V", v)):
                if np.max(np.abs(w.conj().T @ w - np.eye(len(w)))) > slack:
                    raise InvalidRepresentation(f"rectangle {k}: {name} is not unitary")
        self.decomp = decomp
        self.basis_a = basis_a
        self.basis_b = basis_b
        self.unitaries = unitaries

    @property
    def dims(self):
        return (self.decomp.n_rows, self.decomp.n_cols)

    def row_vectors(self, k):
        """Physical A-side vectors of rectangle k, one per listed row."""
        rows, _ = self.decomp.rectangles[k]
        u, _ = self.unitaries[k]
        sub = self.basis_a[list(rows)]
        return (sub.T @ u).T

    def col_vectors(self, k):
        _, cols = self.decomp.rectangles[k]
        _, v = self.unitaries[k]
        sub = self.basis_b[list(cols)]
        return (sub.T @ v).T


def realized_cells(rep):
    """Per-cell physical state parts, in rectangle order then row-major
    within each rectangle: list of ((i, j), a_vec, b_vec)."""
    out = []
    for k, (rows, cols) in enumerate(rep.decomp.rectangles):
        rvecs = rep.row_vectors(k)
        cvecs = rep.col_vectors(k)
        for p, i in enumerate(rows):
            for q, j in enumerate(cols):
                out.append(((i, j), rvecs[p], cvecs[q]))
    return out


def realize(rep, labels=None, tol=DEFAULT_TOL):
    """Emit the product basis a representation describes, one labeled
    state per grid cell. The result always validates as a full basis."""
    cells = realized_cells(rep)
    if labels is None:
        labels = [f"s{k}" for k in range(len(cells))]
    if len(labels) != len(cells):
        raise InvalidParameter(f"need {len(cells)} labels, got {len(labels)}")
    try:
        return OrthogonalProductSet(
            rep.decomp.n_rows,
            rep.decomp.n_cols,
            [
                ProductState(lab, a, b, tol)
                for lab, (_, a, b) in zip(labels, cells)
            ],
            tol,
        )
    except LoccError as exc:
        raise InvalidRepresentation(f"realized set is invalid: {exc}") from exc


def match_cells(ops, rep):
    """Bijection grid cell -> state index when the representation realizes
    the given set up to per-state phases; None when it does not."""
    if len(ops) != rep.decomp.n_rows * rep.decomp.n_cols:
        return None
    if (ops.dim_a, ops.dim_b) != rep.dims:
        return None
    cut = 1.0 - ops.tol.zero_tol
    try:
        cells = realized_cells(rep)
    except LoccError:
        return None
    mapping = {}
    used = set()
    for idx, s in enumerate(ops):
        hit = None
        for cell, a, b in cells:
            if cell in used:
                continue
            if abs(inner(a, s.a)) >= cut and abs(inner(b, s.b)) >= cut:
                hit = cell
                break
        if hit is None:
            return None
        used.add(hit)
        mapping[hit] = idx
    return mapping


def verify_representation(ops, rep):
    """True iff realize(rep) equals the set as a multiset of states up to
    phase (bijective matching on both local parts)."""
    try:
        realize(rep, tol=ops.tol)
    except LoccError:
        return False
    return match_cells(ops, rep) is not None


# ---------------------------------------------------------------------------
# Constructive builder for irreducible 3x3 bases


def _collect_nonorthogonal(ops, anchor, exclude, side):
    gram = ops.gram_a if side == "A" else ops.gram_b
    cut = ops.tol.zero_tol
    return [
        t
        for t in range(len(ops))
        if t not in exclude and abs(gram[anchor, t]) > cut
    ]


def _shares_part(ops, i, j, side):
    gram = ops.gram_a if side == "A" else ops.gram_b
    return abs(gram[i, j]) >= 1.0 - ops.tol.zero_tol


def _construct_from_left_pair(ops, s1, s2):
    """Proof steps of the construction, starting from a pair sharing its
    A part. Chains alternating collections of non-orthogonal states, each
    of which must be exactly a pair sharing the opposite part."""
    tol = ops.tol

    collected = _collect_nonorthogonal(ops, s1, {s1, s2}, "A")
    if len(collected) != 2:
        raise StructureViolation(
            2, f"states with A part non-orthogonal to the anchor: {collected}, expected 2"
        )
    s3, s4 = collected
    if not _shares_part(ops, s3, s4, "B"):
        raise StructureViolation(2, f"states {s3},{s4} do not share a B part")

    collected = _collect_nonorthogonal(ops, s3, {s3, s4}, "B")
    if len(collected) != 2:
        raise StructureViolation(
            3, f"states with B part non-orthogonal to the anchor: {collected}, expected 2"
        )
    s5, s6 = collected
    if {s5, s6} & {s1, s2}:
        raise StructureViolation(3, f"collection {collected} revisits the first pair")
    if not _shares_part(ops, s5, s6, "A"):
        raise StructureViolation(3, f"states {s5},{s6} do not share an A part")

    collected = _collect_nonorthogonal(ops, s5, {s5, s6}, "A")
    if len(collected) != 2:
        raise StructureViolation(
            4, f"states with A part non-orthogonal to the anchor: {collected}, expected 2"
        )
    s7, s8 = collected
    if {s7, s8} & {s1, s2, s3, s4}:
        raise StructureViolation(4, f"collection {collected} revisits earlier pairs")
    if not _shares_part(ops, s7, s8, "B"):
        raise StructureViolation(4, f"states {s7},{s8} do not share a B part")

    assigned = {s1, s2, s3, s4, s5, s6, s7, s8}
    if len(assigned) != 8:
        raise StructureViolation(5, "chained pairs overlap")
    (s9,) = set(range(9)) - assigned

    a12, a56, a9 = ops[s1].a, ops[s5].a, ops[s9].a
    b78, b9, b34 = ops[s7].b, ops[s9].b, ops[s3].b
    basis_a = np.vstack([a12, a9, a56])
    basis_b = np.vstack([b78, b9, b34])
    slack = REP_TOL_FACTOR * tol.zero_tol
    for name, basis in (("A", basis_a), ("B", basis_b)):
        g = basis.conj() @ basis.T
        if np.max(np.abs(g - np.eye(3))) > slack:
            raise StructureViolation(6, f"derived side-{name} basis is not orthonormal")

    def coords(vectors, basis_rows):
        return basis_rows.conj() @ np.asarray(vectors).T

    one = np.eye(1, dtype=complex)
    unitaries = [
        (one, coords([ops[s1].b, ops[s2].b], basis_b[[0, 1]])),
        (coords([ops[s3].a, ops[s4].a], basis_a[[0, 1]]), one),
        (one, coords([ops[s5].b, ops[s6].b], basis_b[[1, 2]])),
        (coords([ops[s7].a, ops[s8].a], basis_a[[1, 2]]), one),
        (one, one),
    ]
    try:
        rep = RectRepresentation(r9(), basis_a, basis_b, unitaries, tol)
    except InvalidRepresentation as exc:
        raise StructureViolation(7, f"derived unitaries invalid: {exc}") from exc
    if not verify_representation(ops, rep):
        raise StructureViolation(8, "final verification against the input set failed")
    return rep


_TRANSPOSE_ROW_RELABEL = {0: 2, 1: 1, 2: 0}


def _transpose_rep(rep_swapped):
    """Convert a pinwheel representation of the side-swapped set into one
    of the original set. Plain transposition mirrors the pinwheel; the row
    relabeling 0<->2 maps the mirror image back onto the canonical
    decomposition."""
    rho = _TRANSPOSE_ROW_RELABEL
    basis_a = np.vstack([rep_swapped.basis_b[rho[r]] for r in range(3)])
    basis_b = rep_swapped.basis_a.copy()
    rects = []
    for k, (rows, cols) in enumerate(rep_swapped.decomp.rectangles):
        rvecs = rep_swapped.row_vectors(k)
        cvecs = rep_swapped.col_vectors(k)
        new_rows = tuple(sorted(rho[j] for j in cols))
        new_cols = tuple(sorted(rows))
        new_rvecs = [cvecs[cols.index(rho[r])] for r in new_rows]
        new_cvecs = [rvecs[rows.index(c)] for c in new_cols]
        rects.append((new_rows, new_cols, new_rvecs, new_cvecs))
    order = {frozenset(itertools.product(r, c)): k for k, (r, c) in enumerate(r9().rectangles)}
    rects.sort(key=lambda rc: order[frozenset(itertools.product(rc[0], rc[1]))])
    return rep_from_physical(r9(), basis_a, basis_b, rects)


def rep_from_physical(decomp, basis_a, basis_b, rect_data, tol=DEFAULT_TOL):
    """Assemble a representation from per-rectangle physical vectors.

    ``rect_data`` lists (rows, cols, row_vecs, col_vecs) in the order of
    ``decomp.rectangles``; the unitary matrices are the coordinates of the
    physical vectors in the restricted bases.
    """
    basis_a = np.asarray(basis_a, dtype=complex)
    basis_b = np.asarray(basis_b, dtype=complex)
    unitaries = []
    for (rows, cols), (drows, dcols, rvecs, cvecs) in zip(decomp.rectangles, rect_data):
        if tuple(drows) != rows or tuple(dcols) != cols:
            raise InvalidParameter("rect_data order must match the decomposition")
        u = basis_a[list(rows)].conj() @ np.asarray(rvecs, dtype=complex).T
        v = basis_b[list(cols)].conj() @ np.asarray(cvecs, dtype=complex).T
        unitaries.append((u, v))
    return RectRepresentation(decomp, basis_a, basis_b, unitaries, tol)


def construct_rect_rep_3x3(ops):
    """Build a pinwheel representation of an irreducible 3x3 product
    basis, following the constructive existence proof. Deterministic: the
    aligned pair with the lowest state indices seeds the chain; when that
    pair aligns on the right, the construction runs on the side-swapped
    set and the result is transposed back."""
    if (ops.dim_a, ops.dim_b) != (3, 3):
        raise DimensionMismatch("construction applies to 3x3 sets")
    if len(ops) != 9:
        raise DimensionMismatch(f"expected a full basis of 9 states, got {len(ops)}")
    if not is_irreducible(ops):
        raise NotIrreducible("the set is reducible; no pinwheel representation exists")
    pairs = aligned_pairs(ops)
    if not pairs:
        raise StructureViolation(1, "no aligned pair found")
    s1, s2, side = pairs[0]
    if side == "left":
        return _construct_from_left_pair(ops, s1, s2)
    rep = _transpose_rep(_construct_from_left_pair(ops.swapped(), s1, s2))
    if not verify_representation(ops, rep):
        raise StructureViolation(8, "transposed representation failed verification")
    return rep


# ---------------------------------------------------------------------------
# Exhaustive enumeration


def enumerate_decompositions(n_rows, n_cols):
    """All rectangular decompositions of the grid, duplicate-free.

    Backtracks on the first uncovered cell in row-major order; that cell
    is necessarily the minimal cell of its rectangle, so each tiling is
    produced exactly once. Deterministic order.
    """
    if n_rows * n_cols > 16:
        raise SizeLimit("decomposition enumeration capped at 16 cells")
    all_cells = [(i, j) for i in range(n_rows) for j in range(n_cols)]

    def backtrack(covered):
        if len(covered) == len(all_cells):
            yield []
            return
        i0, j0 = next(c for c in all_cells if c not in covered)
        row_extras = [i for i in range(i0 + 1, n_rows)]
        col_extras = [j for j in range(j0 + 1, n_cols) if (i0, j) not in covered]
        for nr in range(len(row_extras) + 1):
            for extra_rows in itertools.combinations(row_extras, nr):
                rows = (i0,) + extra_rows
                for nc in range(len(col_extras) + 1):
                    for extra_cols in itertools.combinations(col_extras, nc):
                        cols = (j0,) + extra_cols
                        cells = set(itertools.product(rows, cols))
                        if cells & covered:
                            continue
                        for rest in backtrack(covered | cells):
                            yield [(rows, cols)] + rest

    return [
        RectDecomposition(n_rows, n_cols, rects) for rects in backtrack(set())
    ]


# ---------------------------------------------------------------------------
# Existence search


class GridGroup:
    """A subset of states forming a full p x q product grid: p mutually
    orthogonal A parts, q B parts, every combination present.

    ``row_classes``/``col_classes`` are the global local-part class ids of
    the parts; two groups with equal class sets span the same subspaces.
    """

    __slots__ = ("a_parts", "b_parts", "cell_of", "indices", "row_classes", "col_classes")

    def __init__(self, a_parts, b_parts, cell_of, row_classes=None, col_classes=None):
        self.a_parts = tuple(a_parts)
        self.b_parts = tuple(b_parts)
        self.cell_of = dict(cell_of)
        if len(self.cell_of) != len(self.a_parts) * len(self.b_parts):
            raise InvalidParameter("grid group must cover all combinations")
        self.indices = frozenset(self.cell_of.values())
        self.row_classes = (
            None if row_classes is None else tuple(sorted(row_classes))
        )
        self.col_classes = (
            None if col_classes is None else tuple(sorted(col_classes))
        )

    @property
    def shape(self):
        return (len(self.a_parts), len(self.b_parts))


def _grid_groups_containing(ops, first, remaining):
    """All grid groups within `remaining` that contain state `first`,
    largest area first (deterministic tiebreak)."""
    class_a, _ = ops.local_classes("A")
    class_b, _ = ops.local_classes("B")
    state_at = {}
    for i in remaining:
        state_at[(class_a[i], class_b[i])] = i
    ca0, cb0 = class_a[first], class_b[first]
    row_candidates = sorted(
        {ca for (ca, cb) in state_at if cb == cb0 and ca != ca0}
    )
    groups = []
    for nr in range(len(row_candidates) + 1):
        for extra in itertools.combinations(row_candidates, nr):
            rows = (ca0,) + extra
            common = None
            for ca in rows:
                cbs = {cb for (ca2, cb) in state_at if ca2 == ca}
                common = cbs if common is None else common & cbs
            col_candidates = sorted(c for c in common if c != cb0)
            for nc in range(len(col_candidates) + 1):
                for extra_c in itertools.combinations(col_candidates, nc):
                    cols = (cb0,) + extra_c
                    cell_of = {
                        (p, q): state_at[(ca, cb)]
                        for p, ca in enumerate(rows)
                        for q, cb in enumerate(cols)
                    }
                    a_parts = [ops[state_at[(ca, cb0)]].a for ca in rows]
                    b_parts = [ops[state_at[(ca0, cb)]].b for cb in cols]
                    groups.append(GridGroup(a_parts, b_parts, cell_of, rows, cols))
    groups.sort(
        key=lambda g: (-len(g.indices), sorted(g.indices))
    )
    return groups


def _grid_partitions(ops):
    """All partitions of the set into grid groups, growing groups from the
    lowest unassigned state, larger groups first."""

    def backtrack(remaining):
        if not remaining:
            yield []
            return
        first = min(remaining)
        for group in _grid_groups_containing(ops, first, remaining):
            for rest in backtrack(remaining - group.indices):
                yield [group] + rest

    return backtrack(frozenset(range(len(ops))))


def _solve_side(dim, constraints, tol):
    """Find an orthonormal basis whose index-set spans match the given
    subspaces, or None.

    Works atom by atom on the Boolean algebra generated by the index
    sets: each atom's candidate subspace is the intersection of member
    spans and complements of non-member spans and must have dimension
    equal to the atom's size.
    """
    signatures = {}
    for i in range(dim):
        sig = frozenset(
            k for k, (idx, _) in enumerate(constraints) if i in idx
        )
        signatures.setdefault(sig, []).append(i)

    basis = [None] * dim
    atom_spaces = []
    for sig, members in signatures.items():
        w = full_space(dim)
        for k, (_, sub) in enumerate(constraints):
            other = sub if k in sig else sub.orth_complement(tol)
            w = w.intersect(other, tol)
            if w.dim < len(members):
                return None
        if w.dim != len(members):
            return None
        atom_spaces.append(w)
        for pos, i in enumerate(sorted(members)):
            basis[i] = w.vectors[pos]
    for wa, wb in itertools.combinations(atom_spaces, 2):
        if wa.dim and wb.dim:
            if np.max(np.abs(wa.vectors.conj() @ wb.vectors.T)) > REP_TOL_FACTOR * tol.zero_tol:
                return None
    return np.vstack(basis)


def _shape_assignments(groups, decomp):
    """Shape-respecting bijections group -> rectangle, as lists indexed by
    rectangle position."""
    by_shape_rects = {}
    for k, (rows, cols) in enumerate(decomp.rectangles):
        by_shape_rects.setdefault((len(rows), len(cols)), []).append(k)
    by_shape_groups = {}
    for g in groups:
        by_shape_groups.setdefault(g.shape, []).append(g)
    if set(by_shape_rects) != set(by_shape_groups):
        return
    if any(
        len(by_shape_rects[s]) != len(by_shape_groups[s]) for s in by_shape_rects
    ):
        return
    shapes = sorted(by_shape_rects)
    pools = [
        itertools.permutations(by_shape_groups[s]) for s in shapes
    ]
    for combo in itertools.product(*pools):
        assignment = [None] * len(decomp)
        for s, perm in zip(shapes, combo):
            for k, g in zip(by_shape_rects[s], perm):
                assignment[k] = g
        yield assignment


def search_rect_rep(ops):
    """Exhaustive search for a rectangular representation of a full basis
    (grids of at most 12 cells). Returns the first representation found in
    a fixed enumeration order, or None if none exists."""
    m, n = ops.dim_a, ops.dim_b
    if len(ops) != m * n:
        raise DimensionMismatch(f"search expects a full basis of {m * n} states")
    if m * n > 12:
        raise SizeLimit("representation search capped at 12 cells")
    tol = ops.tol
    decomps_by_shape = {}
    for d in enumerate_decompositions(m, n):
        decomps_by_shape.setdefault(d.shape_multiset(), []).append(d)

    # the atom test depends only on which span lands on which index set,
    # so solves are memoized per (decomposition, span-class mapping):
    # assignments that merely permute equal-span groups share one solve
    memo = {}

    for groups in _grid_partitions(ops):
        shape_key = tuple(sorted(g.shape for g in groups))
        relevant = decomps_by_shape.get(shape_key, [])
        if not relevant:
            continue
        a_span = {id(g): span(g.a_parts, m, tol) for g in groups}
        b_span = {id(g): span(g.b_parts, n, tol) for g in groups}
        for d_idx, decomp in enumerate(relevant):
            for assignment in _shape_assignments(groups, decomp):
                key_a = (shape_key, d_idx, "A", tuple(g.row_classes for g in assignment))
                if key_a not in memo:
                    memo[key_a] = _solve_side(
                        m,
                        [
                            (rows, a_span[id(assignment[k])])
                            for k, (rows, _) in enumerate(decomp.rectangles)
                        ],
                        tol,
                    )
                basis_a = memo[key_a]
                if basis_a is None:
                    continue
                key_b = (shape_key, d_idx, "B", tuple(g.col_classes for g in assignment))
                if key_b not in memo:
                    memo[key_b] = _solve_side(
                        n,
                        [
                            (cols, b_span[id(assignment[k])])
                            for k, (_, cols) in enumerate(decomp.rectangles)
                        ],
                        tol,
                    )
                basis_b = memo[key_b]
                if basis_b is None:
                    continue
                rect_data = [
                    (rows, cols, assignment[k].a_parts, assignment[k].b_parts)
                    for k, (rows, cols) in enumerate(decomp.rectangles)
                ]
                try:
                    rep = rep_from_physical(decomp, basis_a, basis_b, rect_data, tol)
                except LoccError:
                    continue
                if verify_representation(ops, rep):
                    return rep
    return None


# ---------------------------------------------------------------------------
# Representation file (JSON) I/O


def _matrix_json(m):
    return [[[float(x.real), float(x.imag)] for x in row] for row in np.asarray(m)]


def _parse_matrix(doc, where):
    try:
        return np.array(
            [[complex(x[0], x[1]) for x in row] for row in doc], dtype=complex
        )
    except (TypeError, IndexError, ValueError) as exc:
        raise MalformedInput(f"{where}: expected a matrix of [re, im] pairs") from exc


def rep_to_json(rep):
    return {
        "dims": {"a": rep.decomp.n_rows, "b": rep.decomp.n_cols},
        "rectangles": [
            {
                "rows": list(rows),
                "cols": list(cols),
                "u": _matrix_json(rep.unitaries[k][0]),
                "v": _matrix_json(rep.unitaries[k][1]),
            }
            for k, (rows, cols) in enumerate(rep.decomp.rectangles)
        ],
        "basis_a": _matrix_json(rep.basis_a),
        "basis_b": _matrix_json(rep.basis_b),
    }


def rep_from_json(doc, tol=DEFAULT_TOL):
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"not valid JSON: {exc}") from exc
    try:
        m = int(doc["dims"]["a"])
        n = int(doc["dims"]["b"])
        rect_docs = doc["rectangles"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput("representation file needs 'dims' and 'rectangles'") from exc
    decomp = RectDecomposition(
        m, n, [(r["rows"], r["cols"]) for r in rect_docs]
    )
    unitaries = [
        (
            _parse_matrix(r["u"], f"rectangle {k} field 'u'"),
            _parse_matrix(r["v"], f"rectangle {k} field 'v'"),
        )
        for k, r in enumerate(rect_docs)
    ]
    basis_a = _parse_matrix(doc["basis_a"], "basis_a")
    basis_b = _parse_matrix(doc["basis_b"], "basis_b")
    return RectRepresentation(decomp, basis_a, basis_b, unitaries, tol)
