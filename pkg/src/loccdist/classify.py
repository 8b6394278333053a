"""Decision procedures for LOCC distinguishability.

In 3x3 the classification is complete: an orthogonal product set resists
reliable LOCC discrimination exactly when it is an irreducible full basis,
an unextendable product basis, or an irreducible (mn-1)-element set whose
completing state aligns with no member on either side. Outside 3x3 only
the proven rules are applied and everything else is reported as unknown.
"""

from . import analysis
from .errors import SizeLimit
from .numerics import inner
from .states import aligned_pairs

DISTINGUISHABLE = "distinguishable"
INDISTINGUISHABLE = "indistinguishable"
UNKNOWN = "unknown"

CLASS_IRREDUCIBLE_OPB = "irreducible-opb"
CLASS_UPB = "upb"
CLASS_CLASS3 = "class3"


class ClassificationResult:
    """Verdict plus machine-checkable witnesses and the rule applied.

    ``rationale`` is a stable identifier naming the rule that decided the
    verdict; the witness attachments are live objects that revalidate
    independently.
    """

    __slots__ = ("verdict", "class_tag", "rationale", "witnesses")

    def __init__(self, verdict, class_tag, rationale, witnesses=None):
        assert (verdict == INDISTINGUISHABLE) == (class_tag is not None)
        self.verdict = verdict
        self.class_tag = class_tag
        self.rationale = rationale
        self.witnesses = witnesses or {}

    def __repr__(self):
        tag = f" [{self.class_tag}]" if self.class_tag else ""
        return f"<ClassificationResult {self.verdict}{tag} ({self.rationale})>"


class Class3Check:
    """Outcome of the class-3 predicate with its evidence: the completing
    state when it exists, and the first alignment hit that disqualifies."""

    __slots__ = ("holds", "complement", "alignment")

    def __init__(self, holds, complement=None, alignment=None):
        self.holds = holds
        self.complement = complement
        self.alignment = alignment


def class3_check(ops):
    """Irreducible set of mn-1 states whose completing state aligns with
    no member on either side. A failed completion (entangled completing
    vector) propagates as an inconsistency, never a verdict."""
    m, n = ops.dim_a, ops.dim_b
    if len(ops) != m * n - 1:
        return Class3Check(False)
    if not analysis.is_irreducible(ops):
        return Class3Check(False)
    complement = analysis.orthogonal_complement(ops)
    cut = 1.0 - ops.tol.zero_tol
    for i, s in enumerate(ops):
        if abs(inner(complement.a, s.a)) >= cut:
            return Class3Check(False, complement, (i, "left"))
        if abs(inner(complement.b, s.b)) >= cut:
            return Class3Check(False, complement, (i, "right"))
    return Class3Check(True, complement)


def class3_predicate(ops):
    return class3_check(ops).holds


def classify_3x3(ops):
    """Complete decision table for 3x3 sets; the verdict is never unknown.

    Sizes 1-4 are always distinguishable, size 5 is indistinguishable
    exactly for unextendable sets, sizes 6-7 are always distinguishable,
    size 8 exactly for class-3 sets, and a full basis exactly when
    irreducible.
    """
    if (ops.dim_a, ops.dim_b) != (3, 3):
        raise ValueError("classify_3x3 requires a 3x3 set")
    k = len(ops)
    if k <= 4:
        return ClassificationResult(DISTINGUISHABLE, None, "size<=4")
    if k == 5:
        witness = analysis.extension_witness(ops)
        if witness is None:
            return ClassificationResult(INDISTINGUISHABLE, CLASS_UPB, "main-theorem-upb")
        return ClassificationResult(
            DISTINGUISHABLE, None, "size-5-extendable", {"extension": witness}
        )
    if k in (6, 7):
        return ClassificationResult(DISTINGUISHABLE, None, "no-class-has-size-6-or-7")
    if k == 8:
        check = class3_check(ops)
        if check.holds:
            return ClassificationResult(
                INDISTINGUISHABLE,
                CLASS_CLASS3,
                "main-theorem-class3",
                {"complement": check.complement},
            )
        witnesses = {}
        if check.complement is not None:
            witnesses["complement"] = check.complement
        if check.alignment is not None:
            witnesses["complement_aligns_with"] = check.alignment
        red = analysis.reducibility_witness(ops)
        if red is not None:
            witnesses["reducibility"] = red
        return ClassificationResult(
            DISTINGUISHABLE, None, "size-8-not-class3", witnesses
        )
    if k == 9:
        red = analysis.reducibility_witness(ops)
        if red is None:
            return ClassificationResult(
                INDISTINGUISHABLE, CLASS_IRREDUCIBLE_OPB, "main-theorem-irreducible-opb"
            )
        return ClassificationResult(
            DISTINGUISHABLE, None, "opb-reducible", {"reducibility": red}
        )
    raise ValueError(f"a 3x3 set cannot have {k} states")


def classify_general(ops):
    """Partial classifier for arbitrary dimensions.

    Applies only proven rules: 1xn and 2xn sets are always
    distinguishable, 3x3 uses the complete table, unextendable sets and
    class-3 sets are indistinguishable in any dimension, and full bases of
    at most 12 states are decided by the irreducible-product-spanning-
    subset criterion. Everything else is unknown, never guessed.
    """
    m, n = ops.dim_a, ops.dim_b
    if min(m, n) == 1:
        return ClassificationResult(DISTINGUISHABLE, None, "1xn")
    if min(m, n) == 2:
        return ClassificationResult(DISTINGUISHABLE, None, "2xn")
    if (m, n) == (3, 3):
        return classify_3x3(ops)
    k = len(ops)
    if k < m * n:
        # the class-3 test needs no subset enumeration, so run it first;
        # a class-3 set is extendable and could never be a UPB anyway
        if k == m * n - 1:
            check = class3_check(ops)
            if check.holds:
                return ClassificationResult(
                    INDISTINGUISHABLE,
                    CLASS_CLASS3,
                    "class3",
                    {"complement": check.complement},
                )
        try:
            if analysis.is_upb(ops):
                return ClassificationResult(INDISTINGUISHABLE, CLASS_UPB, "upb")
        except SizeLimit:
            return ClassificationResult(
                UNKNOWN, None, "size-limit-extendability"
            )
        return ClassificationResult(UNKNOWN, None, "uncharacterized")
    if m * n > 12:
        return ClassificationResult(UNKNOWN, None, "size-limit-opb")
    if analysis.opb_indistinguishable_general(ops):
        return ClassificationResult(
            INDISTINGUISHABLE, CLASS_IRREDUCIBLE_OPB, "irreducible-product-spanning-subset"
        )
    return ClassificationResult(DISTINGUISHABLE, None, "opb-no-irreducible-product-spanning-subset")
