"""Executable local-measurement protocol trees and their verification.

A protocol is a finite rooted tree: each branch node applies a projective
measurement (a partition of one party's local space into orthogonal
subspaces) to one copy of the unknown state; each leaf either identifies
a state label or rejects. Protocols here are purely projective, matching
the constructive protocols this package generates; the simulator verifies
reliability of given protocols but can never certify indistinguishability.
"""

import itertools
import json

import numpy as np

from . import rectrep
from .errors import (
    DimensionMismatch,
    Inconsistency,
    IncompleteMeasurement,
    InvalidParameter,
    InvalidRepresentation,
    MalformedInput,
    RemovedIsCenter,
    SizeLimit,
)
from .numerics import DEFAULT_TOL, Subspace, inner, span
from .states import OrthogonalProductSet

RELIABLE_EPS = 1e-9
PRUNE_EPS = 1e-15


class Measurement:
    """A projective measurement: party, copy index, and outcome subspaces
    that are mutually orthogonal and jointly complete."""

    __slots__ = ("party", "copy", "outcomes")

    def __init__(self, party, copy, outcomes):
        party = str(party).upper()
        if party not in ("A", "B"):
            raise InvalidParameter(f"party must be 'A' or 'B', got {party!r}")
        if copy < 0:
            raise InvalidParameter("copy index must be nonnegative")
        self.party = party
        self.copy = int(copy)
        self.outcomes = tuple(outcomes)

    def check_complete(self, local_dim, tol=DEFAULT_TOL):
        total = 0
        for out in self.outcomes:
            if out.ambient_dim != local_dim:
                raise DimensionMismatch(
                    f"outcome lives in C^{out.ambient_dim}, party {self.party} has C^{local_dim}"
                )
            total += out.dim
        if total != local_dim:
            raise IncompleteMeasurement(
                f"outcome dimensions sum to {total}, local dimension is {local_dim}"
            )
        for s, t in itertools.combinations(self.outcomes, 2):
            if s.dim and t.dim:
                if np.max(np.abs(s.vectors.conj() @ t.vectors.T)) > 10 * tol.zero_tol:
                    raise IncompleteMeasurement("outcome subspaces are not orthogonal")


class Leaf:
    """Terminal node: identify a state label, or reject (label None)."""

    __slots__ = ("identify",)

    def __init__(self, identify=None):
        self.identify = identify

    @property
    def is_reject(self):
        return self.identify is None


class Branch:
    __slots__ = ("measurement", "children")

    def __init__(self, measurement, children):
        children = tuple(children)
        if len(children) != len(measurement.outcomes):
            raise InvalidParameter(
                f"{len(measurement.outcomes)} outcomes but {len(children)} children"
            )
        self.measurement = measurement
        self.children = children


class ProtocolTree:
    """A complete protocol over `copies` identical copies of the unknown
    state of an (dim_a x dim_b) system."""

    __slots__ = ("dim_a", "dim_b", "copies", "root")

    def __init__(self, dim_a, dim_b, copies, root, tol=DEFAULT_TOL):
        self.dim_a = int(dim_a)
        self.dim_b = int(dim_b)
        self.copies = int(copies)
        if self.copies < 1:
            raise InvalidParameter("a protocol needs at least one copy")
        self.root = root
        self._validate(root, tol)

    def _validate(self, node, tol):
        if isinstance(node, Leaf):
            return
        meas = node.measurement
        if meas.copy >= self.copies:
            raise InvalidParameter(
                f"measurement addresses copy {meas.copy}, protocol has {self.copies}"
            )
        local = self.dim_a if meas.party == "A" else self.dim_b
        meas.check_complete(local, tol)
        for child in node.children:
            self._validate(child, tol)


def simulate(tree, state, tol=DEFAULT_TOL):
    """Leaf distribution of a product state under the protocol.

    Depth-first walk applying the Born rule with collapse per outcome;
    paths of probability <= 1e-15 are pruned. Returns a dict mapping leaf
    labels to probabilities, with reject mass under the key None.
    """
    if state.dims != (tree.dim_a, tree.dim_b):
        raise DimensionMismatch(
            f"state dims {state.dims} do not match protocol "
            f"({tree.dim_a}, {tree.dim_b})"
        )
    dist = {}
    a_vecs = [state.a] * tree.copies
    b_vecs = [state.b] * tree.copies

    def walk(node, a_vecs, b_vecs, p):
        if isinstance(node, Leaf):
            dist[node.identify] = dist.get(node.identify, 0.0) + p
            return
        meas = node.measurement
        vecs = a_vecs if meas.party == "A" else b_vecs
        v = vecs[meas.copy]
        for out, child in zip(meas.outcomes, node.children):
            w = out.project(v)
            q = float(np.real(np.vdot(w, w)))
            if p * q <= PRUNE_EPS:
                continue
            collapsed = w / np.sqrt(q)
            new_vecs = list(vecs)
            new_vecs[meas.copy] = collapsed
            if meas.party == "A":
                walk(child, new_vecs, b_vecs, p * q)
            else:
                walk(child, a_vecs, new_vecs, p * q)

    walk(tree.root, a_vecs, b_vecs, 1.0)
    return dist


class ReliabilityReport:
    """Per-state success probabilities of a protocol over a state set."""

    __slots__ = ("per_state", "reject_mass", "total_mass", "reliable")

    def __init__(self, per_state, reject_mass, total_mass):
        self.per_state = dict(per_state)
        self.reject_mass = dict(reject_mass)
        self.total_mass = dict(total_mass)
        self.reliable = all(
            p >= 1.0 - RELIABLE_EPS for p in self.per_state.values()
        )

    def to_json(self):
        return {
            "reliable": self.reliable,
            "per_state": self.per_state,
            "reject_mass": self.reject_mass,
        }


def reliability(tree, ops, tol=DEFAULT_TOL):
    """Simulate every state of the set; the protocol is reliable iff each
    state ends at a leaf carrying its own label with probability one (up
    to 1e-9)."""
    per_state = {}
    reject = {}
    total = {}
    for s in ops:
        dist = simulate(tree, s, tol)
        per_state[s.label] = dist.get(s.label, 0.0)
        reject[s.label] = dist.get(None, 0.0)
        total[s.label] = sum(dist.values())
    return ReliabilityReport(per_state, reject, total)


# ---------------------------------------------------------------------------
# Constructive generators


class _OrientedPinwheel:
    """A pinwheel representation plus cell labels, tracked through quarter
    turns. Rows/columns may belong to either physical party; a quarter
    turn exchanges the roles."""

    __slots__ = ("party_rows", "party_cols", "alpha", "beta", "row_vecs",
                 "col_vecs", "labels")

    def __init__(self, party_rows, party_cols, alpha, beta, row_vecs, col_vecs, labels):
        self.party_rows = party_rows
        self.party_cols = party_cols
        self.alpha = alpha       # 3 basis vectors on the row party
        self.beta = beta         # 3 basis vectors on the column party
        self.row_vecs = row_vecs  # rect index -> physical row vectors
        self.col_vecs = col_vecs
        self.labels = labels      # cell -> state label


_R9_CELLSETS = None


def _r9_index(cells):
    global _R9_CELLSETS
    if _R9_CELLSETS is None:
        _R9_CELLSETS = {
            frozenset(itertools.product(r, c)): k
            for k, (r, c) in enumerate(r9_rects())
        }
    return _R9_CELLSETS[frozenset(cells)]


def r9_rects():
    return rectrep.r9().rectangles


def _orient(rep, cell_labels):
    """Canonical orientation of an R9-shaped representation: reindex its
    rectangles to the standard pinwheel listing."""
    if rep.decomp != rectrep.r9():
        raise InvalidRepresentation("generator requires the 3x3 pinwheel decomposition")
    row_vecs = {}
    col_vecs = {}
    for k, (rows, cols) in enumerate(rep.decomp.rectangles):
        idx = _r9_index(itertools.product(rows, cols))
        row_vecs[idx] = list(rep.row_vectors(k))
        col_vecs[idx] = list(rep.col_vectors(k))
    return _OrientedPinwheel(
        "A", "B", list(rep.basis_a), list(rep.basis_b), row_vecs, col_vecs,
        dict(cell_labels),
    )


_ROTATED_RECT = {0: 1, 1: 2, 2: 3, 3: 0, 4: 4}  # pinwheel index map under the turn


def _rotate(o):
    """One quarter turn (i, j) -> (j, 2 - i); parties swap roles."""
    rects = r9_rects()
    new_row_vecs = {}
    new_col_vecs = {}
    for k in range(5):
        nk = _ROTATED_RECT[k]
        rows, cols = rects[k]
        # new rows = old cols (same order); new cols = 2 - old rows (reversed)
        new_row_vecs[nk] = list(o.col_vecs[k])
        new_col_vecs[nk] = list(reversed(o.row_vecs[k]))
    new_labels = {(j, 2 - i): lab for (i, j), lab in o.labels.items()}
    return _OrientedPinwheel(
        o.party_cols,
        o.party_rows,
        list(o.beta),
        list(reversed(o.alpha)),
        new_row_vecs,
        new_col_vecs,
        new_labels,
    )


def _line(*vectors):
    return span(vectors, vectors[0].shape[0])


def gen_propdist_protocol(ops, rep, removed_label, tol=DEFAULT_TOL):
    """One-copy protocol distinguishing a pinwheel-represented basis with
    one non-center state removed.

    The grid is turned until the removed state sits in the top domino,
    then a fixed seven-measurement template over the representation's
    vectors is emitted; party roles follow the turns. The returned tree is
    verified reliable on the remaining states before being returned.
    """
    mapping = rectrep.match_cells(ops, rep)
    if mapping is None:
        raise InvalidRepresentation("representation does not realize the given set")
    labels = {cell: ops[idx].label for cell, idx in mapping.items()}
    removed_cell = None
    for cell, lab in labels.items():
        if lab == removed_label:
            removed_cell = cell
    if removed_cell is None:
        raise InvalidParameter(f"no state labeled {removed_label!r}")
    if removed_cell == (1, 1):
        raise RemovedIsCenter(
            f"state {removed_label!r} sits in the center cell; removing it leaves "
            "an LOCC-indistinguishable set"
        )
    o = _orient(rep, labels)
    rect_of_cell = rectrep.r9().rect_containing
    # a quarter turn advances rectangle k to k+1 (mod 4 on the dominoes)
    for _ in range((4 - rect_of_cell(removed_cell)) % 4):
        o = _rotate(o)
        removed_cell = (removed_cell[1], 2 - removed_cell[0])
    assert rect_of_cell(removed_cell) == 0

    surviving_cell = (0, 1 - removed_cell[1])
    a0, a1, a2 = o.alpha
    b0, b1, b2 = o.beta
    u4 = o.row_vecs[3]   # R4 physical row vectors (rows 1, 2)
    v3 = o.col_vecs[2]   # R3 physical column vectors (cols 1, 2)
    u2 = o.row_vecs[1]   # R2 physical row vectors (rows 0, 1)
    lab = o.labels

    final = Branch(
        Measurement(o.party_rows, 0, (_line(a0), _line(a1), _line(a2))),
        (Leaf(lab[surviving_cell]), Leaf(lab[(1, 1)]), Leaf()),
    )
    m3a = Branch(
        Measurement(o.party_rows, 0, (_line(u2[0]), _line(u2[1]), _line(a2))),
        (Leaf(lab[(0, 2)]), Leaf(lab[(1, 2)]), Leaf()),
    )
    m3 = Branch(
        Measurement(o.party_cols, 0, (_line(b2), _line(b0, b1))),
        (m3a, final),
    )
    m2a = Branch(
        Measurement(o.party_cols, 0, (_line(v3[0]), _line(v3[1]), _line(b0))),
        (Leaf(lab[(2, 1)]), Leaf(lab[(2, 2)]), Leaf()),
    )
    m2 = Branch(
        Measurement(o.party_rows, 0, (_line(a2), _line(a0, a1))),
        (m2a, m3),
    )
    m1a = Branch(
        Measurement(o.party_rows, 0, (_line(a0), _line(u4[0]), _line(u4[1]))),
        (Leaf(lab[surviving_cell]), Leaf(lab[(1, 0)]), Leaf(lab[(2, 0)])),
    )
    root = Branch(
        Measurement(o.party_cols, 0, (_line(b0), _line(b1, b2))),
        (m1a, m2),
    )
    tree = ProtocolTree(ops.dim_a, ops.dim_b, 1, root, tol)

    remaining = ops.subset([i for i in range(len(ops)) if ops[i].label != removed_label])
    report = reliability(tree, remaining, tol)
    if not report.reliable:
        raise Inconsistency(
            "generated protocol failed its reliability self-check: "
            f"{report.per_state}"
        )
    return tree


def gen_two_copy_protocol(ops, rep, tol=DEFAULT_TOL):
    """Two-copy protocol for any rectangularly-represented basis: copy 0
    is measured in both local bases to locate the rectangle, copy 1 in the
    rectangle's own product basis to identify the state within it."""
    mapping = rectrep.match_cells(ops, rep)
    if mapping is None:
        raise InvalidRepresentation("representation does not realize the given set")
    m, n = rep.dims
    decomp = rep.decomp

    def copy1_b(k, rows, cols, i):
        cvecs = rep.col_vectors(k)
        outcomes = [_line(v) for v in cvecs]
        children = [
            Leaf(ops[mapping[(i, j)]].label) for j in cols
        ]
        for l in range(n):
            if l not in cols:
                outcomes.append(_line(rep.basis_b[l]))
                children.append(Leaf())
        return Branch(Measurement("B", 1, tuple(outcomes)), tuple(children))

    def copy1_a(i, j):
        k = decomp.rect_containing((i, j))
        rows, cols = decomp.rectangles[k]
        rvecs = rep.row_vectors(k)
        outcomes = [_line(u) for u in rvecs]
        children = [copy1_b(k, rows, cols, r) for r in rows]
        for l in range(m):
            if l not in rows:
                outcomes.append(_line(rep.basis_a[l]))
                children.append(Leaf())
        return Branch(Measurement("A", 1, tuple(outcomes)), tuple(children))

    def copy0_b(i):
        outcomes = tuple(_line(rep.basis_b[j]) for j in range(n))
        children = tuple(copy1_a(i, j) for j in range(n))
        return Branch(Measurement("B", 0, outcomes), children)

    root = Branch(
        Measurement("A", 0, tuple(_line(rep.basis_a[i]) for i in range(m))),
        tuple(copy0_b(i) for i in range(m)),
    )
    tree = ProtocolTree(m, n, 2, root, tol)
    report = reliability(tree, ops, tol)
    if not report.reliable:
        raise Inconsistency(
            "generated two-copy protocol failed its reliability self-check"
        )
    return tree


# ---------------------------------------------------------------------------
# Best-effort synthesis


def _distinct_up_to_phase(vectors, tol):
    out = []
    for v in vectors:
        if not any(abs(inner(v, w)) >= 1.0 - tol.zero_tol for w in out):
            out.append(v)
    return out


def _maximal_orthogonal_cliques(vectors, tol):
    """Maximal mutually-orthogonal subsets of the candidate vectors
    (Bron-Kerbosch on the orthogonality graph, deterministic order)."""
    n = len(vectors)
    adj = [
        {
            j
            for j in range(n)
            if j != i and abs(inner(vectors[i], vectors[j])) <= tol.zero_tol
        }
        for i in range(n)
    ]
    cliques = []

    def bron_kerbosch(r, p, x):
        if not p and not x:
            cliques.append(sorted(r))
            return
        for v in sorted(p):
            bron_kerbosch(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    bron_kerbosch(set(), set(range(n)), set())
    return [[vectors[i] for i in c] for c in cliques]


def synthesize_protocol(ops, max_depth=8, tol=DEFAULT_TOL):
    """Backtracking search for a one-copy projective protocol.

    The measurement pool at each node is derived from the surviving
    candidates' current local vectors: for each distinct vector the binary
    split {v, v-perp}, and full local bases built on maximal mutually
    orthogonal candidate subsets (completed arbitrarily; completion
    outcomes reject). Measurements must strictly shrink every surviving
    branch. Returns a verified tree, or None on exhaustion; None is NOT a
    proof of indistinguishability.
    """
    if max_depth > 12:
        raise SizeLimit("synthesis depth capped at 12")
    m, n = ops.dim_a, ops.dim_b

    def candidate_measurements(cands):
        for party, dim, part in (("A", m, 0), ("B", n, 1)):
            vectors = _distinct_up_to_phase([c[1][part] for c in cands], tol)
            for v in vectors:
                line = _line(v)
                yield party, (line, line.orth_complement(tol))
            for clique in _maximal_orthogonal_cliques(vectors, tol):
                outcomes = [_line(v) for v in clique]
                rest = span(clique, dim, tol).orth_complement(tol)
                outcomes.extend(_line(w) for w in rest.vectors)
                if len(outcomes) >= 2:
                    yield party, tuple(outcomes)

    def separable(cands):
        # Two surviving candidates that are no longer orthogonal as
        # product states can never both be identified with probability 1
        # from here (perfect discrimination requires orthogonality), so
        # the whole subtree is hopeless.
        for (i, (ai, bi)), (j, (aj, bj)) in itertools.combinations(cands, 2):
            if abs(inner(ai, aj) * inner(bi, bj)) > 10 * tol.zero_tol:
                return False
        return True

    def search(cands, depth):
        if len(cands) == 0:
            return Leaf()
        if len(cands) == 1:
            return Leaf(ops[cands[0][0]].label)
        if depth >= max_depth or not separable(cands):
            return None
        for party, outcomes in candidate_measurements(cands):
            part = 0 if party == "A" else 1
            branches = []
            ok = True
            for out in outcomes:
                surviving = []
                for idx, vecs in cands:
                    w = out.project(vecs[part])
                    q = float(np.real(np.vdot(w, w)))
                    if q <= tol.zero_tol**2:
                        continue
                    new_vecs = list(vecs)
                    new_vecs[part] = w / np.sqrt(q)
                    surviving.append((idx, tuple(new_vecs)))
                if len(surviving) >= len(cands):
                    ok = False
                    break
                branches.append(surviving)
            if not ok:
                continue
            children = []
            for surviving in branches:
                child = search(surviving, depth + 1)
                if child is None:
                    children = None
                    break
                children.append(child)
            if children is not None:
                return Branch(Measurement(party, 0, tuple(outcomes)), tuple(children))
        return None

    initial = [(i, (s.a, s.b)) for i, s in enumerate(ops)]
    root = search(initial, 0)
    if root is None:
        return None
    tree = ProtocolTree(m, n, 1, root, tol)
    report = reliability(tree, ops, tol)
    if not report.reliable:
        raise Inconsistency("synthesized protocol failed its reliability self-check")
    return tree


# ---------------------------------------------------------------------------
# Protocol file (JSON) I/O


def _subspace_json(s):
    return [[[float(x.real), float(x.imag)] for x in v] for v in s.vectors]


def _node_to_json(node):
    if isinstance(node, Leaf):
        if node.is_reject:
            return {"reject": True}
        return {"identify": node.identify}
    return {
        "party": node.measurement.party,
        "copy": node.measurement.copy,
        "outcomes": [
            {"basis": _subspace_json(out), "next": _node_to_json(child)}
            for out, child in zip(node.measurement.outcomes, node.children)
        ],
    }


def tree_to_json(tree):
    return {
        "dims": {"a": tree.dim_a, "b": tree.dim_b},
        "copies": tree.copies,
        "root": _node_to_json(tree.root),
    }


def _node_from_json(doc, dims, tol):
    if not isinstance(doc, dict):
        raise MalformedInput("protocol node must be an object")
    if "reject" in doc:
        return Leaf()
    if "identify" in doc:
        return Leaf(str(doc["identify"]))
    try:
        party = doc["party"]
        copy = int(doc["copy"])
        outcomes_doc = doc["outcomes"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput("branch node needs 'party', 'copy', 'outcomes'") from exc
    local = dims[0] if str(party).upper() == "A" else dims[1]
    outcomes = []
    children = []
    for out in outcomes_doc:
        vectors = [
            [complex(x[0], x[1]) for x in vec] for vec in out["basis"]
        ]
        outcomes.append(Subspace(np.array(vectors, dtype=complex), local, tol))
        children.append(_node_from_json(out["next"], dims, tol))
    return Branch(Measurement(party, copy, tuple(outcomes)), tuple(children))


def tree_from_json(doc, tol=DEFAULT_TOL):
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"not valid JSON: {exc}") from exc
    try:
        dims = (int(doc["dims"]["a"]), int(doc["dims"]["b"]))
        copies = int(doc["copies"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput("protocol file needs 'dims' and 'copies'") from exc
    root = _node_from_json(doc["root"], dims, tol)
    return ProtocolTree(dims[0], dims[1], copies, root, tol)
